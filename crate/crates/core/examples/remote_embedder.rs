//! Evaluate retrieval through an HTTP embedding service.
//!
//!     cargo run --example remote_embedder -- http://localhost:8000 256
//!
//! The service receives `POST /embed` with `{"ids": [[...], ...]}` and answers
//! `{"embeddings": [[...], ...]}`, one vector per sequence. Without arguments
//! a toy service (hashed bag of tokens) is started in-process.

use std::time::Duration;

use hece::retrieval::{
    evaluate_sweep, Backend, EmbedRequest, EmbedResponse, EvalDataset, EvalOptions, Passage,
    Question, RemoteEmbedder,
};
use hece::Vocab;

fn toy_vector(ids: &[u32], dim: usize) -> Vec<f64> {
    let mut v = vec![0.0; dim];
    for &id in ids {
        let h = (id as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15) >> 32;
        v[(h % dim as u64) as usize] += if h & 1 == 0 { 1.0 } else { -1.0 };
    }
    v
}

/// Serves the toy embedder on a free local port until the process exits.
fn spawn_toy_service(dim: usize) -> String {
    let server = tiny_http::Server::http("127.0.0.1:0").expect("bind a local port");
    let url = format!("http://{}", server.server_addr());
    std::thread::spawn(move || {
        for mut request in server.incoming_requests() {
            let mut body = String::new();
            request.as_reader().read_to_string(&mut body).unwrap();
            let reply = match serde_json::from_str::<EmbedRequest>(&body) {
                Ok(req) => {
                    let embeddings = req.ids.iter().map(|ids| toy_vector(ids, dim)).collect();
                    tiny_http::Response::from_string(
                        serde_json::to_string(&EmbedResponse { embeddings }).unwrap(),
                    )
                }
                Err(e) => tiny_http::Response::from_string(e.to_string()).with_status_code(400),
            };
            let _ = request.respond(reply);
        }
    });
    url
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (endpoint, dim) = match args.as_slice() {
        [url, dim, ..] => (url.clone(), dim.parse()?),
        _ => (spawn_toy_service(64), 64),
    };

    let lines: Vec<&str> = include_str!("../tests/data/tr_fixture.txt")
        .lines()
        .collect();
    let passages = lines
        .iter()
        .enumerate()
        .map(|(i, l)| Passage {
            id: i.to_string(),
            text: l.to_string(),
        })
        .collect();
    let questions = lines
        .iter()
        .enumerate()
        .map(|(i, l)| Question {
            id: format!("q{i}"),
            text: l.split_whitespace().take(5).collect::<Vec<_>>().join(" "),
            passage_id: i.to_string(),
        })
        .collect();
    let dataset = EvalDataset::new(passages, questions)?;
    let vocab = Vocab::build(lines.iter().copied())?;

    let embedder = RemoteEmbedder::builder(&endpoint, dim)
        .batch_size(16)
        .max_in_flight(4)
        .timeout(Duration::from_secs(30))
        .build();
    println!("embedding via {}", embedder.url());
    let results = evaluate_sweep(
        &dataset,
        &vocab,
        &[4, 8, 16, 64],
        None,
        &Backend::Remote(&embedder),
        EvalOptions::default(),
    )?;
    for r in results {
        println!(
            "size {:>3}: {:>4} chunks, recall@{} {:.3}",
            r.chunk_size, r.num_chunks, r.k, r.recall_at_k
        );
    }
    Ok(())
}
