//! Split words into syllables and show the template each one matched.
//!
//!     cargo run --example syllabify -- strateji elektrik "Atasözleri geçmişten"

use hece::{normalize, split_units, syllabify_word, UnitKind};

fn main() {
    let mut args: Vec<String> = std::env::args().skip(1).collect();
    if args.is_empty() {
        args = vec![
            "Atasözleri geçmişten günümüze kadar ulaşan".into(),
            "tren".into(),
            "strateji".into(),
        ];
    }
    for arg in args {
        let text = normalize(&arg);
        for unit in split_units(&text) {
            if unit.kind != UnitKind::Word {
                println!("{:<14} (not a word: {:?})", unit.text, unit.kind);
                continue;
            }
            let syllables = syllabify_word(&unit.text).expect("word units are letters only");
            let hyphenated: Vec<&str> = syllables.iter().map(|s| s.text()).collect();
            let patterns: Vec<String> = syllables.iter().map(|s| s.pattern().to_string()).collect();
            println!(
                "{:<14} {:<22} {}",
                unit.text,
                hyphenated.join("-"),
                patterns.join(" ")
            );
        }
    }
}
