//! Cut a token sequence into overlapping windows.

use hece::chunker::TRAINING_SPEC;
use hece::{chunk_spans, chunk_tokens, encode, ChunkSpec, Mode, Vocab};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (len, size, stride) in [(10, 4, 2), (11, 4, 2), (3, 8, 4), (9, 4, 3)] {
        let spans = chunk_spans(len, ChunkSpec::new(size, stride)?);
        println!("len {len:>2} size {size} stride {stride}: {spans:?}");
    }

    let text = "Atasözleri geçmişten günümüze kadar ulaşan kalıplaşmış sözlerdir.";
    let vocab = Vocab::build([text])?;
    let ids = encode(text, &vocab, Mode::Flat).ids;
    println!("\n{} tokens, retrieval windows of 8:", ids.len());
    for chunk in chunk_tokens("atasozu", &ids, ChunkSpec::retrieval(8)?) {
        let pieces: Vec<&str> = chunk
            .ids
            .iter()
            .map(|&id| vocab.token(id).unwrap())
            .collect();
        println!("  @{:<2} {}", chunk.start, pieces.join(" "));
    }

    println!(
        "\ntraining preset: size {} stride {} -> {} windows for a 1000-token article",
        TRAINING_SPEC.size(),
        TRAINING_SPEC.stride(),
        chunk_spans(1000, TRAINING_SPEC).len()
    );
    Ok(())
}
