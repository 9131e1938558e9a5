//! `stagemark` command-line front end.
//!
//! Exit codes: 0 on success, 1 on a domain error (bad image, key, capacity,
//! I/O), 2 on a usage error.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "stagemark", version, about = "Three-stage chaotic image watermarking")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct WatermarkInput {
    /// Binary watermark image (P5; P6 is converted to gray first)
    #[arg(long)]
    wm: PathBuf,
    /// Gray level at or above which a watermark pixel counts as 1
    #[arg(long, default_value_t = 128)]
    threshold: u8,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a secret key file
    Genkey {
        #[arg(long, env = "STAGEMARK_SEED", default_value_t = 0)]
        seed: u64,
        /// Watermark size, `32` or `32x32` (must be square)
        #[arg(long, default_value = "32")]
        size: String,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Embed a watermark into a host image
    Embed {
        #[arg(long)]
        host: PathBuf,
        #[command(flatten)]
        wm: WatermarkInput,
        #[arg(long)]
        key: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Extract the watermark by majority vote and write it as P5
    Extract {
        #[arg(long)]
        image: PathBuf,
        #[arg(long)]
        key: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Report whether a watermark is present
    Detect {
        #[arg(long)]
        image: PathBuf,
        #[command(flatten)]
        wm: WatermarkInput,
        #[arg(long)]
        key: PathBuf,
        #[arg(long, default_value_t = 0.75)]
        tau: f64,
    },
    /// Apply one attack (e.g. `mean:3`, `saltpepper:0.02:7`, `crop:0,0,64,64`)
    Attack {
        #[arg(long)]
        image: PathBuf,
        #[arg(long)]
        attack: String,
        /// Seed for seeded attacks that do not carry one
        #[arg(long, env = "STAGEMARK_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Embed, attack, extract and score; writes report.tsv, report.json and
    /// the attacked image and regenerated watermark per attack
    Evaluate {
        #[arg(long)]
        host: PathBuf,
        #[command(flatten)]
        wm: WatermarkInput,
        #[arg(long)]
        key: PathBuf,
        /// Comma-separated attack list, e.g. `none,mean:3,crop:0,0,64,64`
        #[arg(long)]
        attacks: String,
        #[arg(long, default_value_t = 0.75)]
        tau: f64,
        #[arg(long, env = "STAGEMARK_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Derive a watermark from the host's coarse wavelet approximation
    Selfmark {
        #[arg(long)]
        host: PathBuf,
        #[arg(long, default_value_t = 4)]
        levels: usize,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Orbit periods of the key's cat map over an N x N grid
    AnalyzePeriod {
        #[arg(long)]
        key: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        modulus: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            if err.downcast_ref::<commands::UsageError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
