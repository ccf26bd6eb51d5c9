//! Checks against the Moby Dick text in `corpora/`. Skipped when it is absent.

use std::path::PathBuf;

use lettercorr::lexicon::{build_lexicon, compare_halves, zipf_fit};
use lettercorr::{normalize_reader, tokenize, NormalizedText};

fn moby_dick() -> Option<NormalizedText> {
    let dir = std::env::var_os("LETTERCORR_CORPORA")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpora"));
    match std::fs::File::open(dir.join("moby_dick.txt")) {
        Ok(f) => Some(normalize_reader(std::io::BufReader::new(f)).unwrap()),
        Err(_) => {
            eprintln!("moby_dick.txt not found, skipping");
            None
        }
    }
}

#[test]
fn zipf_and_content_words() {
    let Some(md) = moby_dick() else { return };
    let lex = build_lexicon(&tokenize(&md)).unwrap();
    let fit = zipf_fit(&lex, 10, 1000).unwrap();
    assert!((-1.3..=-0.8).contains(&fit.exponent), "{}", fit.exponent);
    assert!(lex.rank("whale").unwrap() <= 100);
    assert_eq!(lex.entries()[0].word, "the");
}

#[test]
fn doubled_text_has_identical_halves() {
    let Some(md) = moby_dick() else { return };
    let mut symbols = md.symbols().to_vec();
    symbols.extend_from_slice(md.symbols());
    let cmp = compare_halves(&NormalizedText::from_symbols(symbols).unwrap()).unwrap();
    for row in cmp.rows().iter().take(200) {
        assert_eq!(row.first, row.second, "{}", row.word);
    }
}
