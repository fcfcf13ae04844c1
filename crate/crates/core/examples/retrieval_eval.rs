//! Recall@5 sweep over chunk sizes with the TF-IDF reference embedder.
//!
//!     cargo run --release --example retrieval_eval -- dataset.json vocab.json
//!
//! The dataset is `{"passages": [{id, text}], "questions": [{id, text, passage_id}]}`.
//! Without arguments a toy dataset is made from the bundled fixture: every
//! line is a passage and its middle four words are the question.

use hece::retrieval::{evaluate_sweep, Backend, EvalDataset, EvalOptions, Passage, Question};
use hece::Vocab;

fn toy_dataset() -> EvalDataset {
    let lines: Vec<&str> = include_str!("../tests/data/tr_fixture.txt")
        .lines()
        .collect();
    let passages = lines
        .iter()
        .enumerate()
        .map(|(i, l)| Passage {
            id: format!("p{i}"),
            text: l.to_string(),
        })
        .collect();
    let questions = lines
        .iter()
        .enumerate()
        .map(|(i, l)| {
            let words: Vec<&str> = l.split_whitespace().collect();
            let mid = words.len().saturating_sub(4) / 2;
            Question {
                id: format!("q{i}"),
                text: words[mid..(mid + 4).min(words.len())].join(" "),
                passage_id: format!("p{i}"),
            }
        })
        .collect();
    EvalDataset::new(passages, questions).expect("ids are unique")
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (dataset, vocab) = match args.as_slice() {
        [ds, vocab, ..] => (EvalDataset::load(ds)?, Vocab::load(vocab)?),
        _ => {
            let ds = toy_dataset();
            let vocab = Vocab::build(ds.passages().iter().map(|p| p.text.as_str()))?;
            (ds, vocab)
        }
    };
    println!(
        "{} passages, {} questions",
        dataset.passages().len(),
        dataset.questions().len()
    );

    let sizes = [4, 6, 8, 12, 16, 32, 64, 128, 512];
    for dedup in [false, true] {
        let options = EvalOptions {
            k: 5,
            dedup_passages: dedup,
        };
        println!(
            "\ntop-5 {}:",
            if dedup { "distinct passages" } else { "chunks" }
        );
        for r in evaluate_sweep(&dataset, &vocab, &sizes, None, &Backend::TfIdf, options)? {
            println!(
                "  size {:>3} stride {:>3} chunks {:>5}  recall {:.3}",
                r.chunk_size, r.stride, r.num_chunks, r.recall_at_k
            );
        }
    }
    Ok(())
}
