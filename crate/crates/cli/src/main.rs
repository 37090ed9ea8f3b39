mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use zipcal_core::stats::DEFAULT_FIT_RANKS;
use zipcal_core::Error;

use commands::SynthParams;
use config::{RunConfig, RunSettings};

/// Select calibration samples that maximize vocabulary coverage.
#[derive(Parser, Debug)]
#[command(name = "zipcal", version)]
struct Cli {
    /// Worker threads for parallel gain evaluation (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Select k samples from one dataset and write a manifest.
    Sample(Common),
    /// Select k samples jointly from several datasets.
    SampleMulti(Common),
    /// Rank-frequency tables, Zipf fit and (with --manifest) selection coverage.
    Stats {
        #[command(flatten)]
        common: Common,
        /// Selection manifest to analyze against the dataset.
        #[arg(long)]
        manifest: Option<PathBuf>,
        /// Highest rank used by the Zipf fit.
        #[arg(long, default_value_t = DEFAULT_FIT_RANKS)]
        fit_ranks: usize,
    },
    /// Compare the coverage of several selection manifests.
    Compare {
        #[command(flatten)]
        common: Common,
        #[arg(long = "manifest", required = true)]
        manifests: Vec<PathBuf>,
    },
    /// Time selection on growing prefixes of a corpus.
    Bench {
        #[command(flatten)]
        common: Common,
        /// Prefix sizes (comma separated).
        #[arg(long, value_delimiter = ',', default_values_t = [10_000usize, 20_000, 40_000])]
        sizes: Vec<usize>,
        /// Budgets (comma separated).
        #[arg(long, value_delimiter = ',', default_values_t = [128usize])]
        budgets: Vec<usize>,
        /// Exponent of the synthetic corpus used when no dataset is given.
        #[arg(long, default_value_t = 1.1)]
        zipf_exponent: f64,
        #[arg(long, default_value_t = 50_000)]
        types: usize,
        #[arg(long, default_value_t = 512)]
        tokens_per_sample: usize,
        /// Timed runs per point; the fastest is kept.
        #[arg(long, default_value_t = 3)]
        repeats: usize,
    },
}

#[derive(Args, Debug, Clone, Default)]
struct Common {
    /// TOML run configuration. Values in it take precedence over flags.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Input dataset(s).
    #[arg(long = "dataset")]
    datasets: Vec<PathBuf>,
    /// Dataset format: plain-lines or jsonl.
    #[arg(long)]
    format: Option<String>,
    /// Text field of jsonl records.
    #[arg(long)]
    text_field: Option<String>,
    /// Tokenizer TOML configuration.
    #[arg(long)]
    tokenizer: Option<PathBuf>,
    #[arg(short, long)]
    k: Option<usize>,
    /// Context window: tokens kept per sample.
    #[arg(short, long)]
    w: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// zipcal or random.
    #[arg(long)]
    method: Option<String>,
    /// Gain engine: incremental or scan.
    #[arg(long)]
    engine: Option<String>,
    /// Per-domain pool size for sample-multi.
    #[arg(long)]
    pool_size: Option<usize>,
    /// Evaluate only this many random candidates per greedy step.
    #[arg(long)]
    candidate_pool: Option<usize>,
    /// Embedding dimension for sample-multi.
    #[arg(long)]
    dim: Option<usize>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Include the selected texts in the output.
    #[arg(long)]
    emit_texts: bool,
}

impl Common {
    fn resolve(&self) -> zipcal_core::Result<RunConfig> {
        let flags = RunSettings {
            datasets: (!self.datasets.is_empty()).then(|| self.datasets.clone()),
            format: self.format.clone(),
            text_field: self.text_field.clone(),
            tokenizer: self.tokenizer.clone(),
            k: self.k,
            w: self.w,
            seed: self.seed,
            method: self.method.clone(),
            engine: self.engine.clone(),
            pool_size: self.pool_size,
            candidate_pool: self.candidate_pool,
            dim: self.dim,
            out: self.out.clone(),
            emit_texts: self.emit_texts.then_some(true),
        };
        RunConfig::resolve(self.config.as_deref(), flags)
    }
}

fn run(cli: Cli) -> zipcal_core::Result<()> {
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(Error::usage("threads: must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| Error::Internal(e.to_string()))?;
    }
    match cli.command {
        Command::Sample(common) => commands::run_sample(&common.resolve()?).map(drop),
        Command::SampleMulti(common) => commands::run_sample_multi(&common.resolve()?).map(drop),
        Command::Stats {
            common,
            manifest,
            fit_ranks,
        } => commands::run_stats(&common.resolve()?, manifest.as_deref(), fit_ranks).map(drop),
        Command::Compare { common, manifests } => {
            commands::run_compare(&common.resolve()?, &manifests).map(drop)
        }
        Command::Bench {
            common,
            sizes,
            budgets,
            zipf_exponent,
            types,
            tokens_per_sample,
            repeats,
        } => {
            if repeats == 0 {
                return Err(Error::usage("repeats: must be at least 1"));
            }
            let synth = SynthParams {
                exponent: zipf_exponent,
                types,
                tokens_per_sample,
            };
            commands::run_bench_cmd(&common.resolve()?, &sizes, &budgets, synth, repeats).map(drop)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match std::panic::catch_unwind(|| run(cli)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
        Err(_) => ExitCode::from(3),
    }
}
