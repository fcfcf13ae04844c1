#![allow(dead_code)]

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;
use std::thread::JoinHandle;

use hece::retrieval::{EmbedRequest, EmbedResponse, EvalDataset, Passage, Question};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const FIXTURE: &str = include_str!("../data/tr_fixture.txt");

pub fn fixture_lines() -> Vec<&'static str> {
    FIXTURE.lines().filter(|l| !l.trim().is_empty()).collect()
}

pub const VOWELS: &[char] = &['a', 'e', 'ı', 'i', 'o', 'ö', 'u', 'ü'];
pub const CONSONANTS: &[char] = &[
    'b', 'c', 'ç', 'd', 'f', 'g', 'ğ', 'h', 'j', 'k', 'l', 'm', 'n', 'p', 'r', 's', 'ş', 't', 'v',
    'y', 'z',
];

/// A random string of Turkish letters, 1..=30 long, roughly 40% vowels.
pub fn random_letter_word(rng: &mut ChaCha8Rng) -> String {
    let len = rng.gen_range(1..=30);
    (0..len)
        .map(|_| {
            if rng.gen_bool(0.4) {
                *VOWELS.choose(rng).unwrap()
            } else {
                *CONSONANTS.choose(rng).unwrap()
            }
        })
        .collect()
}

fn random_syllable(rng: &mut ChaCha8Rng) -> String {
    let c = |rng: &mut ChaCha8Rng| *CONSONANTS.choose(rng).unwrap();
    let v = |rng: &mut ChaCha8Rng| *VOWELS.choose(rng).unwrap();
    match rng.gen_range(0..10) {
        0 => v(rng).to_string(),
        1..=4 => [c(rng), v(rng)].iter().collect(),
        5 | 6 => [c(rng), v(rng), c(rng)].iter().collect(),
        7 => [v(rng), c(rng)].iter().collect(),
        _ => [c(rng), v(rng), c(rng)].iter().collect(),
    }
}

/// A pronounceable word of 1..=4 random syllables.
pub fn random_turkish_word(rng: &mut ChaCha8Rng) -> String {
    (0..rng.gen_range(1..=4))
        .map(|_| random_syllable(rng))
        .collect()
}

/// Text of random words whose flat encoding has at least `min_tokens` tokens.
pub fn random_text(rng: &mut ChaCha8Rng, min_tokens: usize) -> String {
    let mut words = Vec::new();
    let mut tokens = 0;
    while tokens < min_tokens {
        let w = random_turkish_word(rng);
        tokens += hece::syllabify_word(&w).unwrap().len();
        words.push(w);
    }
    words.join(" ")
}

/// Passages of random words plus one question per passage made of a
/// verbatim run of `question_words` words from it.
pub fn synthetic_dataset(
    rng: &mut ChaCha8Rng,
    passages: usize,
    words_per_passage: usize,
    question_words: usize,
) -> EvalDataset {
    let mut ps = Vec::new();
    let mut qs = Vec::new();
    for i in 0..passages {
        let words: Vec<String> = (0..words_per_passage)
            .map(|_| random_turkish_word(rng))
            .collect();
        let start = rng.gen_range(0..=words.len() - question_words);
        qs.push(Question {
            id: format!("q{i}"),
            text: words[start..start + question_words].join(" "),
            passage_id: format!("p{i}"),
        });
        ps.push(Passage {
            id: format!("p{i}"),
            text: words.join(" "),
        });
    }
    EvalDataset::new(ps, qs).unwrap()
}

/// How the stub embedding server misbehaves, if at all.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StubMode {
    Ok,
    WrongDim,
    Status(u16),
    Malformed,
    DropOne,
}

/// Deterministic stand-in embedding: hashed token counts, one slot per
/// `id % dim` with a fixed pseudo-random sign and weight.
pub fn stub_vector(ids: &[u32], dim: usize) -> Vec<f64> {
    let mut v = vec![0.0; dim];
    for &id in ids {
        let h = (id as u64)
            .wrapping_mul(0x9E37_79B9_7F4A_7C15)
            .rotate_left(17);
        let slot = (h % dim as u64) as usize;
        let weight = 1.0 + (h >> 40) as f64 / (1u64 << 24) as f64;
        v[slot] += if h & 1 == 0 { weight } else { -weight };
    }
    v
}

pub struct StubServer {
    pub url: String,
    pub requests: Arc<AtomicUsize>,
    server: Arc<tiny_http::Server>,
    workers: Vec<JoinHandle<()>>,
}

impl StubServer {
    pub fn start(dim: usize, mode: StubMode) -> StubServer {
        let server = Arc::new(tiny_http::Server::http("127.0.0.1:0").unwrap());
        let port = server.server_addr().to_ip().unwrap().port();
        let requests = Arc::new(AtomicUsize::new(0));
        let workers = (0..4)
            .map(|_| {
                let server = Arc::clone(&server);
                let requests = Arc::clone(&requests);
                std::thread::spawn(move || {
                    while let Ok(mut req) = server.recv() {
                        requests.fetch_add(1, Ordering::SeqCst);
                        let mut body = String::new();
                        req.as_reader().read_to_string(&mut body).unwrap();
                        let (status, reply) = respond(&body, dim, mode);
                        let _ = req.respond(
                            tiny_http::Response::from_string(reply).with_status_code(status),
                        );
                    }
                })
            })
            .collect();
        StubServer {
            url: format!("http://127.0.0.1:{port}"),
            requests,
            server,
            workers,
        }
    }
}

impl Drop for StubServer {
    fn drop(&mut self) {
        for _ in &self.workers {
            self.server.unblock();
        }
        for w in self.workers.drain(..) {
            let _ = w.join();
        }
    }
}

fn respond(body: &str, dim: usize, mode: StubMode) -> (u16, String) {
    let req: EmbedRequest = match serde_json::from_str(body) {
        Ok(r) => r,
        Err(e) => return (400, e.to_string()),
    };
    let mut embeddings: Vec<Vec<f64>> = req.ids.iter().map(|ids| stub_vector(ids, dim)).collect();
    match mode {
        StubMode::Ok => {}
        StubMode::WrongDim => embeddings[0].push(0.0),
        StubMode::Status(code) => return (code, "unavailable".into()),
        StubMode::Malformed => return (200, "{\"vectors\": []}".into()),
        StubMode::DropOne => {
            embeddings.pop();
        }
    }
    (
        200,
        serde_json::to_string(&EmbedResponse { embeddings }).unwrap(),
    )
}
