//! Canonical 27-symbol text: lowercase ASCII letters plus a single space
//! symbol standing in for every run of non-letter bytes.
//!
//! The transformation is byte-oriented, so any ASCII-compatible encoding
//! (UTF-8, Latin-1, ...) is accepted. Bytes outside `A-Za-z`, including every
//! byte of a multi-byte sequence, count as non-alphabetic.

use std::fmt;
use std::io::{self, Read, Write};

use crate::error::{Error, Result};

/// Code of the space symbol. Letters `a..=z` map to `0..=25`.
pub const SPACE: u8 = 26;
/// Number of distinct symbols (26 letters + space).
pub const ALPHABET_SIZE: usize = 27;

const CHUNK: usize = 64 * 1024;

#[inline]
pub fn symbol_to_char(code: u8) -> char {
    if code == SPACE {
        ' '
    } else {
        (b'a' + code) as char
    }
}

/// Maps an already-normalized byte (`a..=z` or space) to its symbol code.
#[inline]
pub fn byte_to_symbol(b: u8) -> Option<u8> {
    match b {
        b'a'..=b'z' => Some(b - b'a'),
        b' ' => Some(SPACE),
        _ => None,
    }
}

/// Parses a letter given on the command line or in tests (`'a'..='z'`,
/// case-insensitive, or `' '` for the space symbol).
pub fn letter_code(c: char) -> Result<u8> {
    let lower = c.to_ascii_lowercase();
    if lower.is_ascii_lowercase() {
        Ok(lower as u8 - b'a')
    } else if c == ' ' {
        Ok(SPACE)
    } else {
        Err(Error::InvalidParameter(format!("'{c}' is not a letter a..z")))
    }
}

/// A sequence over the 27-symbol alphabet.
///
/// Every code is in `0..=26`. Output of [`normalize_reader`] additionally has
/// no two adjacent spaces ([`NormalizedText::is_collapsed`]); surrogate and
/// synthetic sequences built by `nullmodels` need not.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct NormalizedText {
    symbols: Vec<u8>,
}

impl NormalizedText {
    pub fn from_symbols(symbols: Vec<u8>) -> Result<Self> {
        if let Some(&bad) = symbols.iter().find(|&&s| s > SPACE) {
            return Err(Error::InvalidSymbol(bad));
        }
        Ok(Self { symbols })
    }

    /// Loads a byte-per-symbol file (only `a..=z` and space), verbatim.
    pub fn from_rendered(bytes: &[u8]) -> Result<Self> {
        let symbols = bytes
            .iter()
            .map(|&b| byte_to_symbol(b).ok_or(Error::InvalidSymbol(b)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { symbols })
    }

    /// True if every byte is already a rendered symbol.
    pub fn is_rendered(bytes: &[u8]) -> bool {
        bytes.iter().all(|&b| byte_to_symbol(b).is_some())
    }

    pub(crate) fn from_symbols_unchecked(symbols: Vec<u8>) -> Self {
        debug_assert!(symbols.iter().all(|&s| s <= SPACE));
        Self { symbols }
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn into_symbols(self) -> Vec<u8> {
        self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn count(&self, code: u8) -> usize {
        self.symbols.iter().filter(|&&s| s == code).count()
    }

    /// Number of non-space symbols.
    pub fn letter_count(&self) -> usize {
        self.symbols.iter().filter(|&&s| s != SPACE).count()
    }

    /// No two consecutive spaces.
    pub fn is_collapsed(&self) -> bool {
        !self
            .symbols
            .windows(2)
            .any(|w| w[0] == SPACE && w[1] == SPACE)
    }

    /// Copy with leading and trailing spaces removed.
    pub fn trimmed(&self) -> Self {
        let start = self.symbols.iter().position(|&s| s != SPACE);
        let Some(start) = start else {
            return Self::default();
        };
        let end = self.symbols.iter().rposition(|&s| s != SPACE).unwrap() + 1;
        Self {
            symbols: self.symbols[start..end].to_vec(),
        }
    }

    pub fn render(&self) -> String {
        self.symbols.iter().map(|&s| symbol_to_char(s)).collect()
    }

    pub fn render_bytes(&self) -> Vec<u8> {
        self.symbols.iter().map(|&s| symbol_to_char(s) as u8).collect()
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> io::Result<()> {
        for chunk in self.symbols.chunks(CHUNK) {
            let buf: Vec<u8> = chunk.iter().map(|&s| symbol_to_char(s) as u8).collect();
            w.write_all(&buf)?;
        }
        Ok(())
    }
}

impl fmt::Debug for NormalizedText {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const SHOWN: usize = 64;
        let head: String = self.symbols[..self.len().min(SHOWN)]
            .iter()
            .map(|&s| symbol_to_char(s))
            .collect();
        let ellipsis = if self.len() > SHOWN { "..." } else { "" };
        write!(f, "NormalizedText({} symbols, {head:?}{ellipsis})", self.len())
    }
}

/// Incremental `s/[^a-z]+/ /g` after ASCII lowercasing. State carries across
/// chunk boundaries so a run split between two reads still yields one space.
#[derive(Debug, Default, Clone)]
pub struct Normalizer {
    in_gap: bool,
}

impl Normalizer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, input: &[u8], out: &mut Vec<u8>) {
        for &b in input {
            let lower = b.to_ascii_lowercase();
            if lower.is_ascii_lowercase() {
                out.push(lower - b'a');
                self.in_gap = false;
            } else if !self.in_gap {
                out.push(SPACE);
                self.in_gap = true;
            }
        }
    }
}

fn read_chunks<R: Read>(mut reader: R, mut sink: impl FnMut(&[u8], u64) -> Result<()>) -> Result<()> {
    let mut buf = vec![0u8; CHUNK];
    let mut offset = 0u64;
    loop {
        let n = match reader.read(&mut buf) {
            Ok(0) => return Ok(()),
            Ok(n) => n,
            Err(e) if e.kind() == io::ErrorKind::Interrupted => continue,
            Err(source) => return Err(Error::Io { offset, source }),
        };
        offset += n as u64;
        sink(&buf[..n], offset)?;
    }
}

/// Normalizes a whole stream into memory.
pub fn normalize_reader<R: Read>(reader: R) -> Result<NormalizedText> {
    let mut norm = Normalizer::new();
    let mut symbols = Vec::new();
    read_chunks(reader, |chunk, _| {
        norm.push(chunk, &mut symbols);
        Ok(())
    })?;
    Ok(NormalizedText { symbols })
}

pub fn normalize_str(raw: &str) -> NormalizedText {
    normalize_bytes(raw.as_bytes())
}

pub fn normalize_bytes(raw: &[u8]) -> NormalizedText {
    let mut symbols = Vec::with_capacity(raw.len());
    Normalizer::new().push(raw, &mut symbols);
    NormalizedText { symbols }
}

/// Normalizes `reader` into `writer` as one byte per symbol, holding only a
/// fixed-size buffer. Returns the number of symbols written.
pub fn normalize_stream<R: Read, W: Write>(reader: R, mut writer: W) -> Result<u64> {
    let mut norm = Normalizer::new();
    let mut out = Vec::with_capacity(CHUNK);
    let mut written = 0u64;
    read_chunks(reader, |chunk, offset| {
        out.clear();
        norm.push(chunk, &mut out);
        for s in out.iter_mut() {
            *s = symbol_to_char(*s) as u8;
        }
        writer
            .write_all(&out)
            .map_err(|source| Error::Io { offset, source })?;
        written += out.len() as u64;
        Ok(())
    })?;
    writer.flush().map_err(|source| Error::Io {
        offset: written,
        source,
    })?;
    Ok(written)
}

/// A maximal run of letters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub text: String,
    /// Offset of the first letter in the source text.
    pub start: usize,
    pub len: usize,
}

impl Token {
    pub fn end(&self) -> usize {
        self.start + self.len
    }
}

pub fn tokenize(text: &NormalizedText) -> Vec<Token> {
    let symbols = text.symbols();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < symbols.len() {
        if symbols[i] == SPACE {
            i += 1;
            continue;
        }
        let start = i;
        while i < symbols.len() && symbols[i] != SPACE {
            i += 1;
        }
        tokens.push(Token {
            text: symbols[start..i].iter().map(|&s| symbol_to_char(s)).collect(),
            start,
            len: i - start,
        });
    }
    tokens
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn normalize_examples() {
        assert_eq!(normalize_str("Call me Ishmael.").render(), "call me ishmael ");
        assert_eq!(normalize_str("").render(), "");
        assert_eq!(normalize_str("A--b  C").render(), "a b c");
        assert_eq!(normalize_str("...Hi").render(), " hi");
    }

    #[test]
    fn non_ascii_letters_are_separators() {
        assert_eq!(normalize_str("café crème").render(), "caf cr me");
        assert_eq!(normalize_str("naïve").render(), "na ve");
    }

    #[test]
    fn chunk_boundaries_do_not_split_runs() {
        let raw = format!("{}!!{}", "x".repeat(CHUNK - 1), "y");
        let t = normalize_reader(raw.as_bytes()).unwrap();
        assert_eq!(t.len(), CHUNK + 1);
        assert!(t.is_collapsed());
        let mut out = Vec::new();
        let n = normalize_stream(raw.as_bytes(), &mut out).unwrap();
        assert_eq!(n as usize, t.len());
        assert_eq!(out, t.render_bytes());
    }

    struct FailingReader {
        served: bool,
    }

    impl Read for FailingReader {
        fn read(&mut self, buf: &mut [u8]) -> io::Result<usize> {
            if self.served {
                Err(io::Error::other("disk on fire"))
            } else {
                self.served = true;
                buf[..5].copy_from_slice(b"hello");
                Ok(5)
            }
        }
    }

    #[test]
    fn read_error_reports_offset() {
        let err = normalize_reader(FailingReader { served: false }).unwrap_err();
        match err {
            Error::Io { offset, .. } => assert_eq!(offset, 5),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn tokenize_examples() {
        let toks = tokenize(&normalize_str("call me ishmael "));
        let got: Vec<_> = toks.iter().map(|t| (t.text.as_str(), t.start)).collect();
        assert_eq!(got, vec![("call", 0), ("me", 5), ("ishmael", 8)]);
        assert!(tokenize(&normalize_str(" ")).is_empty());
        let toks = tokenize(&normalize_str("a a a"));
        assert_eq!(toks.len(), 3);
        assert!(toks.iter().all(|t| t.text == "a" && t.len == 1));
    }

    #[test]
    fn trimmed_and_rendered_roundtrip() {
        let t = normalize_str("  Hello, world!  ");
        assert_eq!(t.render(), " hello world ");
        assert_eq!(t.trimmed().render(), "hello world");
        assert_eq!(normalize_str("?!").trimmed().len(), 0);
        let back = NormalizedText::from_rendered(t.render().as_bytes()).unwrap();
        assert_eq!(back, t);
        assert!(NormalizedText::from_rendered(b"Ab").is_err());
        assert!(NormalizedText::from_symbols(vec![0, 27]).is_err());
    }

    #[test]
    fn letter_codes() {
        assert_eq!(letter_code('a').unwrap(), 0);
        assert_eq!(letter_code('Z').unwrap(), 25);
        assert_eq!(letter_code(' ').unwrap(), SPACE);
        assert!(letter_code('1').is_err());
    }

    proptest! {
        #[test]
        fn output_alphabet_and_collapse(bytes in proptest::collection::vec(any::<u8>(), 0..512)) {
            let t = normalize_reader(&bytes[..]).unwrap();
            prop_assert!(t.symbols().iter().all(|&s| s <= SPACE));
            prop_assert!(t.is_collapsed());
            let rendered = t.render_bytes();
            prop_assert!(rendered.iter().all(|&b| b == b' ' || b.is_ascii_lowercase()));
        }

        #[test]
        fn idempotent(bytes in proptest::collection::vec(any::<u8>(), 0..512)) {
            let once = normalize_reader(&bytes[..]).unwrap();
            let twice = normalize_reader(&once.render_bytes()[..]).unwrap();
            prop_assert_eq!(once, twice);
        }

        #[test]
        fn tokens_rebuild_trimmed_text(s in "[A-Za-z .,;!?\n-]{0,200}") {
            let t = normalize_str(&s);
            let toks = tokenize(&t);
            prop_assert!(toks.iter().all(|tok| tok.len >= 1 && tok.len == tok.text.len()));
            prop_assert!(toks.windows(2).all(|w| w[0].start < w[1].start));
            let joined = toks.iter().map(|t| t.text.as_str()).collect::<Vec<_>>().join(" ");
            prop_assert_eq!(joined, t.trimmed().render());
        }
    }
}
