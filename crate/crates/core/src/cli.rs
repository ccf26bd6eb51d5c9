//! The `lettercorr` command line.
//!
//! Every subcommand writes a block of `#` comment lines before its data. The
//! `# command:` line is the canonical invocation (all defaults spelled out),
//! so re-running it reproduces the file byte for byte. Symbol files written
//! by `normalize`, `shuffle` and `synth` carry the same header; readers strip
//! it again before loading the symbols.

use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;
use rayon::prelude::*;

use crate::divergence::{default_step, jsd_profile, Alphabet};
use crate::lexicon::{
    band_jsd, build_lexicon, compare_halves, partition_bands, zipf_fit, DEFAULT_BAND_COUNT,
    DEFAULT_BAND_SEGMENT, DEFAULT_TARGET_SHARE,
};
use crate::nullmodels::{shuffle, two_regime_sequence, ShuffleMode, ShuffleSpec, TwoRegimeSpec};
use crate::textnorm::{letter_code, normalize_bytes, normalize_stream, symbol_to_char, tokenize, NormalizedText, SPACE};
use crate::walk::{
    average_curves, default_k_grid, displacement_parallel, fit_exponent, indicator, DisplacementCurve,
    DEFAULT_POINTS_PER_DECADE,
};

pub const BIN_NAME: &str = "lettercorr";
pub const SEED_ENV: &str = "LETTERCORR_SEED";

#[derive(Debug, Clone, Parser)]
#[command(name = BIN_NAME, version, about = "Long-range letter correlation analysis of texts")]
pub struct Cli {
    /// Write results here instead of standard output.
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,

    /// Increase log verbosity (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,

    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InputFormat {
    /// Symbol file if the body is only `a-z` and spaces, raw text otherwise.
    Auto,
    /// Always normalize.
    Text,
    /// Load a symbol file verbatim.
    Symbols,
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    #[arg(short, long)]
    pub input: PathBuf,

    #[arg(long, value_enum, default_value_t = InputFormat::Auto)]
    pub input_format: InputFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    WindowSample,
    WindowPermute,
    FullLetter,
    FullWord,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlphabetArg {
    WithSpace,
    LettersOnly,
}

impl From<AlphabetArg> for Alphabet {
    fn from(a: AlphabetArg) -> Self {
        match a {
            AlphabetArg::WithSpace => Alphabet::WithSpace,
            AlphabetArg::LettersOnly => Alphabet::LettersOnly,
        }
    }
}

/// Inclusive `lo:hi` range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub lo: usize,
    pub hi: usize,
}

impl FromStr for Span {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (lo, hi) = s
            .split_once(':')
            .ok_or_else(|| format!("expected LO:HI, got '{s}'"))?;
        let parse = |v: &str| v.trim().parse::<usize>().map_err(|e| format!("'{v}': {e}"));
        let span = Span { lo: parse(lo)?, hi: parse(hi)? };
        if span.lo >= span.hi {
            return Err(format!("range {s} must have LO < HI"));
        }
        Ok(span)
    }
}

impl std::fmt::Display for Span {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.lo, self.hi)
    }
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Lowercase and collapse non-letters into single spaces.
    Normalize {
        #[arg(short, long)]
        input: PathBuf,
        /// Drop the leading/trailing space.
        #[arg(long)]
        trim: bool,
        /// Emit bare symbols without the `#` header.
        #[arg(long)]
        no_header: bool,
    },
    /// Displacement function F(k) of per-letter indicator walks.
    Walk {
        #[command(flatten)]
        input: InputArgs,
        /// Letters to analyse (`a,v,x`, repeatable; `all` for a..z, `space`).
        #[arg(short, long, value_delimiter = ',', default_value = "a")]
        letter: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_POINTS_PER_DECADE)]
        points_per_decade: usize,
        /// Power-law fit range `KMIN:KMAX` (repeatable).
        #[arg(long)]
        fit: Vec<Span>,
        /// Append the equal-weight average over the selected letters.
        #[arg(long)]
        average: bool,
    },
    /// Shuffled surrogate of a text.
    Shuffle {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value_t = ModeArg::WindowSample)]
        mode: ModeArg,
        /// Window (sample) or block (permute) size in symbols.
        #[arg(long, default_value_t = 3000)]
        window: usize,
        #[arg(long, env = SEED_ENV, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        no_header: bool,
    },
    /// Two-regime Bernoulli sequence over {a, space}.
    Synth {
        #[arg(long, default_value_t = 1_200_000)]
        length: usize,
        #[arg(long, default_value_t = 0.062)]
        base_p: f64,
        #[arg(long, default_value_t = 0.1054)]
        burst_p: f64,
        /// Burst offset; centred when omitted.
        #[arg(long)]
        burst_start: Option<usize>,
        #[arg(long, default_value_t = 6250)]
        burst_len: usize,
        #[arg(long, env = SEED_ENV, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        no_header: bool,
    },
    /// Jensen–Shannon divergence between adjacent segments along the text.
    JsdProfile {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 1000)]
        segment_length: usize,
        /// Boundary increment (default: segment length / 10).
        #[arg(long)]
        step: Option<usize>,
        #[arg(long, value_enum, default_value_t = AlphabetArg::WithSpace)]
        alphabet: AlphabetArg,
    },
    /// Rank-frequency table and Zipf exponent.
    Zipf {
        #[command(flatten)]
        input: InputArgs,
        /// Rows to print (0 = all).
        #[arg(long, default_value_t = 100)]
        top: usize,
        #[arg(long, default_value = "10:1000")]
        fit_range: Span,
    },
    /// Letter-share band partition of the lexicon.
    Bands {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = DEFAULT_BAND_COUNT)]
        band_count: usize,
        #[arg(long, default_value_t = DEFAULT_TARGET_SHARE)]
        target_share: f64,
        /// Example words listed per band.
        #[arg(long, default_value_t = 10)]
        top: usize,
    },
    /// Mean normalized letter JSD of each band-filtered text.
    BandJsd {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = DEFAULT_BAND_COUNT)]
        band_count: usize,
        #[arg(long, default_value_t = DEFAULT_TARGET_SHARE)]
        target_share: f64,
        #[arg(long, default_value_t = DEFAULT_BAND_SEGMENT)]
        segment_length: usize,
    },
    /// Word frequencies in the first vs second half of the text.
    Halves {
        #[command(flatten)]
        input: InputArgs,
        /// Rows to print (0 = all).
        #[arg(long, default_value_t = 100)]
        top: usize,
        /// Count ratio `WORD:WORD` per half (repeatable).
        #[arg(long, default_value = "the:a")]
        ratio: Vec<String>,
    },
}

fn quote(arg: &str) -> String {
    let plain = !arg.is_empty()
        && arg
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || "-_./:=,+@%".contains(c));
    if plain {
        arg.to_owned()
    } else {
        format!("'{}'", arg.replace('\'', r"'\''"))
    }
}

/// Splits a `# command:` line back into arguments (POSIX single quotes only).
pub fn split_command_line(line: &str) -> Vec<String> {
    let mut args = Vec::new();
    let mut cur = String::new();
    let mut in_word = false;
    let mut chars = line.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '\'' => {
                in_word = true;
                for q in chars.by_ref() {
                    if q == '\'' {
                        break;
                    }
                    cur.push(q);
                }
            }
            '\\' => {
                in_word = true;
                if let Some(n) = chars.next() {
                    cur.push(n);
                }
            }
            c if c.is_whitespace() => {
                if in_word {
                    args.push(std::mem::take(&mut cur));
                    in_word = false;
                }
            }
            c => {
                in_word = true;
                cur.push(c);
            }
        }
    }
    if in_word {
        args.push(cur);
    }
    args
}

fn path_str(p: &Path) -> String {
    p.to_string_lossy().into_owned()
}

impl InputArgs {
    fn args(&self) -> Vec<String> {
        vec![
            "--input".into(),
            path_str(&self.input),
            "--input-format".into(),
            value_name(self.input_format),
        ]
    }
}

fn value_name<T: ValueEnum>(v: T) -> String {
    v.to_possible_value().expect("no skipped variants").get_name().to_owned()
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Normalize { .. } => "normalize",
            Command::Walk { .. } => "walk",
            Command::Shuffle { .. } => "shuffle",
            Command::Synth { .. } => "synth",
            Command::JsdProfile { .. } => "jsd-profile",
            Command::Zipf { .. } => "zipf",
            Command::Bands { .. } => "bands",
            Command::BandJsd { .. } => "band-jsd",
            Command::Halves { .. } => "halves",
        }
    }

    /// Arguments that reproduce this command, every default made explicit.
    pub fn canonical_args(&self) -> Vec<String> {
        let mut a: Vec<String> = vec![self.name().into()];
        let mut push = |k: &str, v: String| {
            a.push(k.into());
            a.push(v);
        };
        match self {
            Command::Normalize { input, trim, no_header } => {
                push("--input", path_str(input));
                if *trim {
                    a.push("--trim".into());
                }
                if *no_header {
                    a.push("--no-header".into());
                }
            }
            Command::Walk {
                input,
                letter,
                points_per_decade,
                fit,
                average,
            } => {
                a.extend(input.args());
                a.push("--letter".into());
                a.push(letter.join(","));
                a.push("--points-per-decade".into());
                a.push(points_per_decade.to_string());
                for f in fit {
                    a.push("--fit".into());
                    a.push(f.to_string());
                }
                if *average {
                    a.push("--average".into());
                }
            }
            Command::Shuffle {
                input,
                mode,
                window,
                seed,
                no_header,
            } => {
                a.extend(input.args());
                a.extend([
                    "--mode".into(),
                    value_name(*mode),
                    "--window".into(),
                    window.to_string(),
                    "--seed".into(),
                    seed.to_string(),
                ]);
                if *no_header {
                    a.push("--no-header".into());
                }
            }
            Command::Synth {
                length,
                base_p,
                burst_p,
                burst_start,
                burst_len,
                seed,
                no_header,
            } => {
                push("--length", length.to_string());
                push("--base-p", base_p.to_string());
                push("--burst-p", burst_p.to_string());
                if let Some(s) = burst_start {
                    push("--burst-start", s.to_string());
                }
                push("--burst-len", burst_len.to_string());
                push("--seed", seed.to_string());
                if *no_header {
                    a.push("--no-header".into());
                }
            }
            Command::JsdProfile {
                input,
                segment_length,
                step,
                alphabet,
            } => {
                a.extend(input.args());
                a.extend([
                    "--segment-length".into(),
                    segment_length.to_string(),
                    "--step".into(),
                    step.unwrap_or(default_step(*segment_length)).to_string(),
                    "--alphabet".into(),
                    value_name(*alphabet),
                ]);
            }
            Command::Zipf { input, top, fit_range } => {
                a.extend(input.args());
                a.extend([
                    "--top".into(),
                    top.to_string(),
                    "--fit-range".into(),
                    fit_range.to_string(),
                ]);
            }
            Command::Bands {
                input,
                band_count,
                target_share,
                top,
            } => {
                a.extend(input.args());
                a.extend([
                    "--band-count".into(),
                    band_count.to_string(),
                    "--target-share".into(),
                    target_share.to_string(),
                    "--top".into(),
                    top.to_string(),
                ]);
            }
            Command::BandJsd {
                input,
                band_count,
                target_share,
                segment_length,
            } => {
                a.extend(input.args());
                a.extend([
                    "--band-count".into(),
                    band_count.to_string(),
                    "--target-share".into(),
                    target_share.to_string(),
                    "--segment-length".into(),
                    segment_length.to_string(),
                ]);
            }
            Command::Halves { input, top, ratio } => {
                a.extend(input.args());
                a.extend(["--top".into(), top.to_string()]);
                for r in ratio {
                    a.push("--ratio".into());
                    a.push(r.clone());
                }
            }
        }
        a
    }

    pub fn command_line(&self) -> String {
        std::iter::once(BIN_NAME.to_owned())
            .chain(self.canonical_args().iter().map(|s| quote(s)))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

struct Header {
    lines: Vec<String>,
}

impl Header {
    fn new(cmd: &Command) -> Self {
        Self {
            lines: vec![
                format!("{BIN_NAME} {} {}", env!("CARGO_PKG_VERSION"), cmd.name()),
                format!("command: {}", cmd.command_line()),
            ],
        }
    }

    fn push(&mut self, line: impl Into<String>) {
        self.lines.push(line.into());
    }

    fn write<W: Write>(&self, w: &mut W) -> io::Result<()> {
        for l in &self.lines {
            writeln!(w, "# {l}")?;
        }
        Ok(())
    }
}

/// Length of a leading block of `#` lines.
fn header_len(bytes: &[u8]) -> usize {
    let mut pos = 0;
    while bytes.get(pos) == Some(&b'#') {
        match bytes[pos..].iter().position(|&b| b == b'\n') {
            Some(nl) => pos += nl + 1,
            None => return bytes.len(),
        }
    }
    pos
}

/// Loads `bytes` as a symbol file (optionally headed) or normalizes them.
pub fn load_text(bytes: &[u8], format: InputFormat) -> crate::Result<(NormalizedText, &'static str)> {
    let body = &bytes[header_len(bytes)..];
    match format {
        InputFormat::Symbols => Ok((NormalizedText::from_rendered(body)?, "symbols")),
        InputFormat::Text => Ok((normalize_bytes(bytes), "text")),
        InputFormat::Auto if NormalizedText::is_rendered(body) => {
            Ok((NormalizedText::from_rendered(body)?, "symbols"))
        }
        InputFormat::Auto => Ok((normalize_bytes(bytes), "text")),
    }
}

fn read_input(args: &InputArgs) -> anyhow::Result<(NormalizedText, &'static str)> {
    let mut bytes = Vec::new();
    File::open(&args.input)
        .and_then(|mut f| f.read_to_end(&mut bytes))
        .with_context(|| format!("cannot read {}", args.input.display()))?;
    let loaded = load_text(&bytes, args.input_format)
        .with_context(|| format!("cannot load {}", args.input.display()))?;
    info!("{}: {} symbols ({})", args.input.display(), loaded.0.len(), loaded.1);
    Ok(loaded)
}

fn require_text(text: &NormalizedText) -> anyhow::Result<()> {
    if text.is_empty() {
        return Err(crate::Error::EmptyText.into());
    }
    Ok(())
}

fn parse_letters(spec: &[String]) -> anyhow::Result<Vec<u8>> {
    let mut out = Vec::new();
    for item in spec {
        let item = item.trim();
        match item {
            "all" => out.extend(0..26u8),
            "space" => out.push(SPACE),
            _ => {
                let mut chars = item.chars();
                match (chars.next(), chars.next()) {
                    (Some(c), None) => out.push(letter_code(c)?),
                    _ => bail!("invalid letter '{item}' (expected a..z, 'space' or 'all')"),
                }
            }
        }
    }
    let mut seen = [false; 27];
    out.retain(|&c| !std::mem::replace(&mut seen[c as usize], true));
    if out.is_empty() {
        bail!("no letters selected");
    }
    Ok(out)
}

fn letter_name(code: Option<u8>) -> String {
    match code {
        Some(SPACE) => "space".into(),
        Some(c) => symbol_to_char(c).to_string(),
        None => "average".into(),
    }
}

fn write_curve<W: Write>(w: &mut W, curve: &DisplacementCurve, fits: &[Span]) -> anyhow::Result<()> {
    let name = letter_name(curve.letter);
    writeln!(w, "# block letter={name} N={}", curve.len)?;
    for span in fits {
        match fit_exponent(curve, span.lo, span.hi) {
            Ok(fit) => writeln!(
                w,
                "# fit letter={name} k_min={} k_max={} alpha={:.6} log_intercept={:.6} rms_residual={:.6} points={} zero_excluded={}",
                fit.k_min, fit.k_max, fit.alpha, fit.log_intercept, fit.rms_residual, fit.points_used, fit.zero_points_excluded
            )?,
            Err(e) => writeln!(w, "# fit letter={name} k_min={} k_max={} error={e}", span.lo, span.hi)?,
        }
    }
    writeln!(w, "k\tF")?;
    for p in &curve.points {
        writeln!(w, "{}\t{}", p.k, p.f)?;
    }
    Ok(())
}

fn write_symbols<W: Write>(w: &mut W, header: Option<&Header>, text: &NormalizedText) -> anyhow::Result<()> {
    if let Some(h) = header {
        h.write(w)?;
    }
    text.write_to(w)?;
    Ok(())
}

/// Runs `cmd`, writing its primary output to `out`.
pub fn execute<W: Write>(cmd: &Command, out: &mut W) -> anyhow::Result<()> {
    let mut header = Header::new(cmd);
    match cmd {
        Command::Normalize { input, trim, no_header } => {
            let file = File::open(input).with_context(|| format!("cannot read {}", input.display()))?;
            if !*no_header {
                header.write(out)?;
            }
            if *trim {
                let text = crate::normalize_reader(io::BufReader::new(file))?.trimmed();
                text.write_to(&mut *out)?;
            } else {
                let n = normalize_stream(file, &mut *out)?;
                info!("wrote {n} symbols");
            }
        }
        Command::Walk {
            input,
            letter,
            points_per_decade,
            fit,
            average,
        } => {
            let (text, fmt) = read_input(input)?;
            require_text(&text)?;
            let letters = parse_letters(letter)?;
            let grid = default_k_grid(text.len(), *points_per_decade);
            if grid.len() < 2 {
                bail!("text of {} symbols is too short for a displacement curve", text.len());
            }
            header.push(format!("input_format={fmt} N={} grid_points={}", text.len(), grid.len()));
            header.push("columns: k F (variance of length-k window sums)");
            let curves = letters
                .par_iter()
                .map(|&l| {
                    let series = indicator(&text, l)?;
                    displacement_parallel(&series, &grid)
                })
                .collect::<crate::Result<Vec<_>>>()?;
            for l in &letters {
                let ones = text.count(*l);
                header.push(format!(
                    "letter={} count={ones} mean={}",
                    letter_name(Some(*l)),
                    ones as f64 / text.len() as f64
                ));
            }
            header.write(out)?;
            for (i, c) in curves.iter().enumerate() {
                if i > 0 {
                    writeln!(out)?;
                }
                write_curve(out, c, fit)?;
            }
            if *average {
                writeln!(out)?;
                write_curve(out, &average_curves(&curves)?, fit)?;
            }
        }
        Command::Shuffle {
            input,
            mode,
            window,
            seed,
            no_header,
        } => {
            let (text, fmt) = read_input(input)?;
            require_text(&text)?;
            let mode = match mode {
                ModeArg::WindowSample => ShuffleMode::WindowSample { window: *window },
                ModeArg::WindowPermute => ShuffleMode::WindowPermute { window: *window },
                ModeArg::FullLetter => ShuffleMode::FullLetter,
                ModeArg::FullWord => ShuffleMode::FullWord,
            };
            let shuffled = shuffle(&text, &ShuffleSpec { mode, seed: *seed })?;
            header.push(format!("input_format={fmt} N_in={} N_out={}", text.len(), shuffled.len()));
            write_symbols(out, (!*no_header).then_some(&header), &shuffled)?;
        }
        Command::Synth {
            length,
            base_p,
            burst_p,
            burst_start,
            burst_len,
            seed,
            no_header,
        } => {
            let spec = TwoRegimeSpec {
                total_length: *length,
                base_p: *base_p,
                burst_p: *burst_p,
                burst_start: *burst_start,
                burst_length: *burst_len,
                seed: *seed,
            };
            let seq = two_regime_sequence(&spec)?;
            header.push(format!(
                "burst=[{}, {}) a_count={}",
                spec.resolved_burst_start(),
                spec.resolved_burst_start() + spec.burst_length,
                seq.count(0)
            ));
            write_symbols(out, (!*no_header).then_some(&header), &seq)?;
        }
        Command::JsdProfile {
            input,
            segment_length,
            step,
            alphabet,
        } => {
            let (text, fmt) = read_input(input)?;
            require_text(&text)?;
            let step = step.unwrap_or(default_step(*segment_length));
            let prof = jsd_profile(&text, *segment_length, step, (*alphabet).into())?;
            header.push(format!("input_format={fmt} N={} boundaries={} skipped={}", text.len(), prof.entries.len(), prof.skipped));
            header.push(format!(
                "mean_normalized={:.6} fraction_above_1={:.6}",
                prof.mean_normalized(),
                prof.fraction_above(1.0)
            ));
            if let Some(peak) = prof.peak() {
                header.push(format!("peak position={} normalized={:.6}", peak.position, peak.normalized));
            }
            header.push("columns: position raw fluct normalized (raw and fluct in nats)");
            header.write(out)?;
            writeln!(out, "position\traw\tfluct\tnormalized")?;
            for e in &prof.entries {
                writeln!(out, "{}\t{}\t{}\t{}", e.position, e.raw, e.fluct, e.normalized)?;
            }
        }
        Command::Zipf { input, top, fit_range } => {
            let (text, fmt) = read_input(input)?;
            let lex = build_lexicon(&tokenize(&text))?;
            header.push(format!(
                "input_format={fmt} tokens={} types={} letters={}",
                lex.total_tokens(),
                lex.len(),
                lex.total_letters()
            ));
            match zipf_fit(&lex, fit_range.lo, fit_range.hi) {
                Ok(fit) => header.push(format!(
                    "zipf ranks={} exponent={:.6} intercept={:.6} rms_residual={:.6} ranks_used={}",
                    fit_range, fit.exponent, fit.intercept, fit.rms_residual, fit.ranks_used
                )),
                Err(e) => header.push(format!("zipf ranks={fit_range} error={e}")),
            }
            header.write(out)?;
            writeln!(out, "rank\tword\tcount\tfrequency\tletter_share")?;
            let n = if *top == 0 { lex.len() } else { (*top).min(lex.len()) };
            let total = lex.total_tokens() as f64;
            for (i, e) in lex.entries()[..n].iter().enumerate() {
                writeln!(out, "{}\t{}\t{}\t{}\t{}", i + 1, e.word, e.count, e.count as f64 / total, e.letter_share)?;
            }
        }
        Command::Bands {
            input,
            band_count,
            target_share,
            top,
        } => {
            let (text, fmt) = read_input(input)?;
            let lex = build_lexicon(&tokenize(&text))?;
            let part = partition_bands(&lex, *band_count, *target_share)?;
            header.push(format!("input_format={fmt} types={} letters={} degenerate={}", lex.len(), lex.total_letters(), part.degenerate));
            header.write(out)?;
            writeln!(out, "band\tfirst_rank\tlast_rank\tword_types\tletters\tletter_share\twords")?;
            for (i, b) in part.bands.iter().enumerate() {
                let (first, last) = b.rank_bounds().unwrap_or((0, 0));
                let words: Vec<&str> = lex.entries()[b.ranks.clone()]
                    .iter()
                    .take(*top)
                    .map(|e| e.word.as_str())
                    .collect();
                writeln!(
                    out,
                    "{}\t{first}\t{last}\t{}\t{}\t{}\t{}",
                    i + 1,
                    b.word_types(),
                    b.letters,
                    b.letter_share,
                    words.join(",")
                )?;
            }
        }
        Command::BandJsd {
            input,
            band_count,
            target_share,
            segment_length,
        } => {
            let (text, fmt) = read_input(input)?;
            let lex = build_lexicon(&tokenize(&text))?;
            let part = partition_bands(&lex, *band_count, *target_share)?;
            let report = band_jsd(&text, &lex, &part, *segment_length)?;
            header.push(format!("input_format={fmt} N={} types={}", text.len(), lex.len()));
            if let Some(best) = report.strongest() {
                header.push(format!("strongest band={} word_types={} mean_normalized={:.6}", best.band, best.word_types, best.mean_normalized));
            }
            header.push("columns: mean_normalized = mean over segment pairs of letters-only JSD / fluctuation level");
            header.write(out)?;
            writeln!(out, "band\tword_types\tletter_share\tmean_normalized\tmean_effective_n\tpairs_used\tpairs_skipped")?;
            for r in &report.rows {
                writeln!(
                    out,
                    "{}\t{}\t{}\t{}\t{}\t{}\t{}",
                    r.band, r.word_types, r.letter_share, r.mean_normalized, r.mean_effective_n, r.pairs_used, r.pairs_skipped
                )?;
            }
        }
        Command::Halves { input, top, ratio } => {
            let (text, fmt) = read_input(input)?;
            let cmp = compare_halves(&text)?;
            header.push(format!(
                "input_format={fmt} split={} tokens_first={} tokens_second={}",
                cmp.split, cmp.tokens_first, cmp.tokens_second
            ));
            for r in ratio {
                let (num, den) = r
                    .split_once(':')
                    .with_context(|| format!("ratio '{r}' must be WORD:WORD"))?;
                let (a, b) = cmp.count_ratio(num, den);
                let show = |v: Option<f64>| v.map_or("NA".to_owned(), |x| format!("{x:.6}"));
                header.push(format!("ratio {num}/{den} first={} second={}", show(a), show(b)));
            }
            header.write(out)?;
            writeln!(out, "word\tfirst\tsecond\tfreq_first\tfreq_second\tratio")?;
            let rows = cmp.rows();
            let n = if *top == 0 { rows.len() } else { (*top).min(rows.len()) };
            for row in &rows[..n] {
                let ratio = row.ratio.map_or("NA".to_owned(), |r| r.to_string());
                writeln!(
                    out,
                    "{}\t{}\t{}\t{}\t{}\t{ratio}",
                    row.word, row.first, row.second, row.freq_first, row.freq_second
                )?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

/// Entry point used by the binary.
pub fn run(cli: &Cli) -> anyhow::Result<()> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("cannot configure thread pool")?;
    }
    match &cli.output {
        Some(path) => {
            let file = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
            let mut w = BufWriter::new(file);
            execute(&cli.command, &mut w)
        }
        None => {
            let stdout = io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            execute(&cli.command, &mut w)
        }
    }
}
