//! Build a syllable vocabulary from a corpus and save it as JSON.
//!
//!     cargo run --example build_vocab -- corpus.txt vocab.json
//!
//! Without arguments the bundled test fixture is used and nothing is written.

use hece::{Special, Vocab};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let text = match args.first() {
        Some(path) => std::fs::read_to_string(path)?,
        None => include_str!("../tests/data/tr_fixture.txt").to_owned(),
    };
    let lines: Vec<&str> = text.lines().collect();
    let vocab = Vocab::build_parallel(&lines)?;

    println!(
        "{} ids: {} specials + {} corpus tokens",
        vocab.len(),
        Special::ALL.len(),
        vocab.corpus_token_count()
    );
    println!("most frequent:");
    for (id, token, count) in vocab.corpus_tokens().take(10) {
        println!("  {id:>4} {token:<6} {count}");
    }
    if let Some(out) = args.get(1) {
        vocab.save(out)?;
        println!("wrote {out}");
    }
    Ok(())
}
