//! Command-line front end.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::bounded::{CodeLayout, GeometricParams};
use crate::codes::GolombParams;
use crate::container::{self, ContainerError};
use crate::error::Error;
use crate::eval::{emit_report, run_experiment, Comparison, ExperimentConfig, ReportFormat};
use crate::oracle::{entropy, huffman_lengths, kraft_is_complete, BoundedGeometric};

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DATA: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "fgcode", version, about = "Codes for bounded geometric run lengths")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Show the code parameters for p (or m, m2) and optionally a bound n.
    Params(ParamsArgs),
    /// Print the code table for values 0..=n.
    Table(TableArgs),
    /// Encode newline-separated integers into an FGC1 container.
    Encode(EncodeArgs),
    /// Decode an FGC1 container back to newline-separated integers.
    Decode(DecodeArgs),
    /// Run a redundancy experiment and print the binned report.
    Eval(EvalArgs),
}

#[derive(Debug, Args)]
pub struct ParamsArgs {
    #[arg(long, conflicts_with_all = ["m", "m2"], required_unless_present_all = ["m", "m2"])]
    pub p: Option<f64>,
    #[arg(long, requires = "m2")]
    pub m: Option<u64>,
    #[arg(long, requires = "m")]
    pub m2: Option<u64>,
    #[arg(long)]
    pub n: Option<u64>,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long)]
    pub p: f64,
    #[arg(long)]
    pub n: u64,
    /// Add Huffman and Golomb lengths, H(p, n) and L(p, n).
    #[arg(long)]
    pub compare: bool,
}

#[derive(Debug, Args)]
pub struct EncodeArgs {
    #[arg(long)]
    pub p: f64,
    #[arg(long, conflicts_with = "bounds", required_unless_present = "bounds")]
    pub n: Option<u64>,
    /// File with one bound per value.
    #[arg(long)]
    pub bounds: Option<PathBuf>,
    /// Input text (stdin if omitted).
    #[arg(short, long)]
    pub input: Option<PathBuf>,
    /// Output container (stdout if omitted).
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DecodeArgs {
    #[arg(long)]
    pub bounds: Option<PathBuf>,
    #[arg(short, long)]
    pub input: Option<PathBuf>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long, default_value = "huffman")]
    pub comparison: Comparison,
    #[arg(long, default_value_t = 10_000)]
    pub num_p: u64,
    #[arg(long, default_value_t = 10)]
    pub draws: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "markdown")]
    pub format: ReportFormat,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Data(_) | CliError::Io(_) => EXIT_DATA,
        }
    }
}

impl From<ContainerError> for CliError {
    fn from(e: ContainerError) -> Self {
        CliError::Data(e.to_string())
    }
}

fn usage(e: Error) -> CliError {
    CliError::Usage(e.to_string())
}

pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Params(a) => params(a, stdout),
        Command::Table(a) => table(a, stdout),
        Command::Encode(a) => encode(a, stdout),
        Command::Decode(a) => decode(a, stdout),
        Command::Eval(a) => eval(a, stdout),
    }
}

fn params(a: ParamsArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let (m, m2) = match (a.p, a.m, a.m2) {
        (Some(p), _, _) => {
            let g = GeometricParams::derive(p).map_err(usage)?;
            writeln!(out, "p={p}")?;
            (g.m, g.m2)
        }
        (None, Some(m), Some(m2)) => (m, m2),
        _ => return Err(CliError::Usage("give --p or both --m and --m2".into())),
    };
    // Validates m, m2 even without n.
    let layout = CodeLayout::new(m, m2, a.n.unwrap_or(0)).map_err(usage)?;
    writeln!(out, "m={m}")?;
    writeln!(out, "m2={m2}")?;
    if let Some(n) = a.n {
        writeln!(out, "n={n}")?;
        writeln!(out, "m1={}", layout.m1)?;
        writeln!(out, "d_t={}", layout.d_t)?;
        writeln!(out, "h={}", layout.h)?;
        writeln!(out, "s={}", layout.s)?;
        writeln!(out, "h1={}", layout.h1)?;
        writeln!(out, "s1={}", layout.s1)?;
        writeln!(out, "e_n={}", layout.e_n)?;
    }
    Ok(())
}

fn table(a: TableArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let g = GeometricParams::derive(a.p).map_err(usage)?;
    let layout = g.layout(a.n);
    let rows = layout.enumerate_codewords().map_err(usage)?;
    let lengths: Vec<u64> = rows.iter().map(|(_, cw)| cw.len()).collect();

    if a.compare {
        let dist = BoundedGeometric::new(a.p, a.n).map_err(usage)?;
        let huffman = huffman_lengths(&dist);
        let golomb = GolombParams::new(g.m).map_err(usage)?;
        writeln!(out, "value\tcodeword\tlength\thuffman\tgolomb")?;
        for (i, cw) in &rows {
            writeln!(
                out,
                "{i}\t{}\t{}\t{}\t{}",
                display_bits(&cw.bits()),
                cw.len(),
                huffman[*i as usize],
                golomb.len(*i)
            )?;
        }
        let l = layout.expected_length_for(&dist);
        let lh = dist.expected_length(|i| huffman[i as usize]);
        let lg = dist.expected_length(|i| golomb.len(i));
        writeln!(out, "H(p,n)={:.6}", entropy(a.p, a.n).map_err(usage)?)?;
        writeln!(out, "L(p,n)={l:.6}")?;
        writeln!(out, "L_H(p,n)={lh:.6}")?;
        writeln!(out, "L_G(p,n)={lg:.6}")?;
    } else {
        writeln!(out, "value\tcodeword\tlength")?;
        for (i, cw) in &rows {
            writeln!(out, "{i}\t{}\t{}", display_bits(&cw.bits()), cw.len())?;
        }
    }
    let kraft = if a.n == 0 || kraft_is_complete(lengths.iter().copied()) {
        "1"
    } else {
        "<1"
    };
    writeln!(out, "kraft={kraft}")?;
    Ok(())
}

fn display_bits(bits: &str) -> &str {
    if bits.is_empty() {
        "-"
    } else {
        bits
    }
}

fn read_input(path: Option<&Path>) -> Result<Vec<u8>, CliError> {
    match path {
        Some(p) => Ok(fs::read(p)?),
        None => {
            let mut buf = Vec::new();
            io::stdin().read_to_end(&mut buf)?;
            Ok(buf)
        }
    }
}

fn write_output(path: Option<&Path>, data: &[u8], stdout: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, data)?,
        None => stdout.write_all(data)?,
    }
    Ok(())
}

/// Parses newline-separated decimal integers; blank lines are ignored.
/// Returns (line number, value) pairs.
pub fn parse_integers(text: &[u8], what: &str) -> Result<Vec<(usize, u64)>, CliError> {
    let text = std::str::from_utf8(text)
        .map_err(|_| CliError::Data(format!("{what}: input is not valid UTF-8")))?;
    let mut values = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let v = line.parse::<u64>().map_err(|_| {
            CliError::Data(format!("{what} line {}: '{line}' is not a non-negative integer", idx + 1))
        })?;
        values.push((idx + 1, v));
    }
    Ok(values)
}

fn encode(a: EncodeArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let g = GeometricParams::derive(a.p).map_err(usage)?;
    let input = read_input(a.input.as_deref())?;
    let lines = parse_integers(&input, "input")?;
    let values: Vec<u64> = lines.iter().map(|&(_, v)| v).collect();
    let located = |e: ContainerError| match e {
        ContainerError::ValueOutOfRange { index, value, bound } => CliError::Data(format!(
            "input line {}: value {value} exceeds bound {bound}",
            lines[index].0
        )),
        other => other.into(),
    };
    let bytes = match (a.n, a.bounds) {
        (Some(n), None) => container::encode_constant(g.m, g.m2, n, &values).map_err(located)?,
        (None, Some(path)) => {
            let bounds: Vec<u64> = parse_integers(&fs::read(path)?, "bounds")?
                .into_iter()
                .map(|(_, v)| v)
                .collect();
            container::encode_sidecar(g.m, g.m2, &values, &bounds).map_err(located)?
        }
        _ => return Err(CliError::Usage("give exactly one of --n or --bounds".into())),
    };
    write_output(a.output.as_deref(), &bytes, stdout)
}

fn decode(a: DecodeArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let bytes = read_input(a.input.as_deref())?;
    let bounds = match a.bounds {
        Some(path) => Some(
            parse_integers(&fs::read(path)?, "bounds")?
                .into_iter()
                .map(|(_, v)| v)
                .collect::<Vec<_>>(),
        ),
        None => None,
    };
    let (_, values) = container::decode(&bytes, bounds.as_deref())?;
    let mut text = String::with_capacity(values.len() * 4);
    for v in values {
        text.push_str(&v.to_string());
        text.push('\n');
    }
    write_output(a.output.as_deref(), text.as_bytes(), stdout)
}

fn eval(a: EvalArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    if a.num_p == 0 {
        return Err(CliError::Usage("--num-p must be at least 1".into()));
    }
    let cfg = ExperimentConfig {
        num_p: a.num_p,
        draws_per_p: a.draws,
        seed: a.seed,
        comparison: a.comparison,
    };
    let report = run_experiment(&cfg).map_err(|e| CliError::Data(e.to_string()))?;
    let text = emit_report(&report, a.format);
    write_output(a.out.as_deref(), text.as_bytes(), stdout)
}
