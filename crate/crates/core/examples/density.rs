//! Token density of a corpus: tokens and syllables per word, tokens per char.
//!
//!     cargo run --release --example density -- corpus.txt

use hece::stats::DensityCounts;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path)?,
        None => include_str!("../tests/data/tr_fixture.txt").to_owned(),
    };
    let mut counts = DensityCounts::default();
    for line in text.lines() {
        counts.add_document(line);
    }
    let s = counts.finish()?;
    println!("words             {}", s.word_count);
    println!("tokens            {}", s.token_count);
    println!("tokens/word       {:.3}", s.tokens_per_word);
    println!("syllables/word    {:.3}", s.syllables_per_word);
    println!("tokens/char       {:.3}", s.tokens_per_char);
    Ok(())
}
