//! Command-line front end: `simulate` sweeps, `memory` estimates, and
//! `codeinfo` construction dumps.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use polar::{DecoderKind, PolarCode};
use polar_sim::{
    csv_cell_keys, estimate_memory, run_sweep_with, CellKey, DecoderConfig, ExperimentConfig,
    Quantization, CSV_HEADER,
};

#[derive(Parser)]
#[command(name = "polar-sim", version, about = "BLER simulator for CRC-aided polar decoders")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a Monte-Carlo sweep from a JSON config file.
    Simulate(SimulateArgs),
    /// Print the storage estimate of a decoder configuration.
    Memory(MemoryArgs),
    /// Print the code construction as JSON.
    Codeinfo(CodeinfoArgs),
}

#[derive(Args)]
struct SimulateArgs {
    /// JSON experiment description (see README for the schema).
    #[arg(long)]
    config: PathBuf,
    /// Replace the decoder list with a single decoder, e.g. `dscfp:8:8`.
    #[arg(long)]
    decoder: Option<String>,
    /// Replace the Eb/N0 grid, comma-separated dB values.
    #[arg(long)]
    ebn0: Option<String>,
    /// Override the per-point frame cap.
    #[arg(long)]
    frames: Option<u64>,
    /// Override the per-point block-error target.
    #[arg(long)]
    errors: Option<u64>,
    /// Override the experiment seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the worker-thread count (0 = one per CPU).
    #[arg(long)]
    workers: Option<usize>,
    /// Write results here instead of stdout; an existing CSV is resumed by
    /// skipping its completed cells.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct MemoryArgs {
    /// Block length N.
    #[arg(long)]
    n: usize,
    /// Message bits K.
    #[arg(long)]
    k: usize,
    /// CRC bits C.
    #[arg(long)]
    c: usize,
    /// Channel-LLR quantization, bits.
    #[arg(long, default_value_t = 6)]
    qch: u32,
    /// Internal-LLR quantization, bits.
    #[arg(long, default_value_t = 6)]
    qint: u32,
    /// Flip-metric quantization, bits.
    #[arg(long, default_value_t = 8)]
    qflip: u32,
    #[arg(long, default_value_t = 0)]
    fmax: usize,
    #[arg(long, default_value_t = 0)]
    pmax: usize,
    /// Decoder kind: sc, scf, dscf, scp, dscp, dscfp, pdscf.
    #[arg(long)]
    kind: String,
}

#[derive(Args)]
struct CodeinfoArgs {
    /// Block length N.
    #[arg(long)]
    n: usize,
    /// Message bits K.
    #[arg(long)]
    k: usize,
    /// CRC bits C.
    #[arg(long)]
    c: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(args) => simulate(args),
        Command::Memory(args) => memory(args),
        Command::Codeinfo(args) => codeinfo(args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn simulate(args: SimulateArgs) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let text = fs::read_to_string(&args.config)
        .map_err(|e| format!("cannot read {}: {e}", args.config.display()))?;
    let mut config: ExperimentConfig = serde_json::from_str(&text)?;

    if let Some(spec) = &args.decoder {
        config.decoders = vec![DecoderConfig::parse_spec(spec)?];
    }
    if let Some(grid) = &args.ebn0 {
        config.ebn0_grid_db = grid
            .split(',')
            .map(|v| v.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| format!("bad --ebn0 list: {e}"))?;
    }
    if let Some(frames) = args.frames {
        config.stop.max_frames = frames;
    }
    if let Some(errors) = args.errors {
        config.stop.target_block_errors = errors;
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(workers) = args.workers {
        config.workers = workers;
    }

    match (&args.out, args.format) {
        (Some(path), Format::Csv) => {
            let skip = existing_cells(path)?;
            let fresh = skip.is_empty();
            let mut file = fs::OpenOptions::new()
                .create(true)
                .append(true)
                .open(path)?;
            if fresh {
                writeln!(file, "{CSV_HEADER}")?;
            }
            let report = run_sweep_with(&config, &skip, |row| {
                writeln!(file, "{}", row.to_csv())?;
                file.flush()
            })?;
            if report.skipped > 0 {
                eprintln!("resumed: skipped {} completed cells", report.skipped);
            }
            finish(report.sink_errors)
        }
        (Some(path), Format::Json) => {
            let report = run_sweep_with(&config, &[], |_| Ok(()))?;
            fs::write(path, serde_json::to_string_pretty(&report.rows)?)?;
            finish(report.sink_errors)
        }
        (None, Format::Csv) => {
            println!("{CSV_HEADER}");
            let report = run_sweep_with(&config, &[], |row| {
                println!("{}", row.to_csv());
                std::io::stdout().flush()
            })?;
            finish(report.sink_errors)
        }
        (None, Format::Json) => {
            let report = run_sweep_with(&config, &[], |_| Ok(()))?;
            println!("{}", serde_json::to_string_pretty(&report.rows)?);
            finish(report.sink_errors)
        }
    }
}

fn existing_cells(path: &Path) -> std::io::Result<Vec<CellKey>> {
    match fs::read_to_string(path) {
        Ok(body) => Ok(csv_cell_keys(&body)),
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(Vec::new()),
        Err(e) => Err(e),
    }
}

fn finish(
    sink_errors: Vec<(CellKey, std::io::Error)>,
) -> Result<ExitCode, Box<dyn std::error::Error>> {
    if sink_errors.is_empty() {
        return Ok(ExitCode::SUCCESS);
    }
    for (cell, error) in &sink_errors {
        eprintln!(
            "write failed for {} (Fmax={}, Pmax={}) at {} dB: {error}",
            cell.decoder, cell.fmax, cell.pmax, cell.ebn0_text
        );
    }
    Ok(ExitCode::FAILURE)
}

fn memory(args: MemoryArgs) -> Result<ExitCode, Box<dyn std::error::Error>> {
    // Validates the dimensions even though only N enters the estimate.
    PolarCode::new(args.n, args.k, args.c)?;
    let kind: DecoderKind = args.kind.parse()?;
    let breakdown = estimate_memory(
        args.n,
        Quantization {
            channel_llr: args.qch,
            internal_llr: args.qint,
            flip_metric: args.qflip,
        },
        args.fmax,
        args.pmax,
        kind,
    )?;
    println!("sc_bits      {}", breakdown.sc_bits);
    println!("flip_bits    {}", breakdown.flip_bits);
    println!("perturb_bits {}", breakdown.perturb_bits);
    println!("dedup_bits   {}", breakdown.dedup_bits);
    println!("total_bits   {}", breakdown.total());
    Ok(ExitCode::SUCCESS)
}

fn codeinfo(args: CodeinfoArgs) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let code = PolarCode::new(args.n, args.k, args.c)?;
    println!("{}", serde_json::to_string_pretty(&code)?);
    Ok(ExitCode::SUCCESS)
}
