//! Encode text in both modes, decode it back, and prepare model input.

use hece::{decode, encode, encode_for_model, Mode, Vocab};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let corpus = include_str!("../tests/data/tr_fixture.txt");
    let vocab = Vocab::build(corpus.lines())?;
    let text = "Ankara'da 13 Ekim 1923'te başkent ilan edildi.";

    let show = |ids: &[u32]| {
        ids.iter()
            .map(|&id| vocab.token(id).unwrap())
            .collect::<Vec<_>>()
            .join(" ")
    };

    let flat = encode(text, &vocab, Mode::Flat);
    println!("flat      {:?}\n          {}", flat.ids, show(&flat.ids));
    println!("decoded   {}", decode(&flat.ids, &vocab, Mode::Flat)?);

    let lossless = encode(text, &vocab, Mode::Lossless);
    println!("lossless  {}", show(&lossless.ids));
    println!(
        "decoded   {}",
        decode(&lossless.ids, &vocab, Mode::Lossless)?
    );

    // Syllables missing from the vocabulary become [UNK].
    let unseen = encode("kuantum bilgisayarı", &vocab, Mode::Flat);
    println!(
        "unseen    {} ({} unknown)",
        show(&unseen.ids),
        unseen.unk_count()
    );

    let model = encode_for_model(text, &vocab, 8);
    println!("model     {}", show(&model.ids));
    Ok(())
}
