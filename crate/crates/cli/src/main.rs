use std::fmt;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod config_file;
mod settings;

use settings::{DatasetFlags, EncodeFlags};

/// Bad flags, config values or input schema. Exits with status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

#[derive(Debug, Parser)]
#[command(name = "hilbertseq", version, about = "Hilbert-curve images from molecular sequences")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print `d<TAB>x<TAB>y` for every point of a planar curve
    Curve {
        /// Curve order, 1 to 10
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=10))]
        order: u32,
        /// Write the table here instead of stdout
        #[arg(long, short)]
        output: Option<std::path::PathBuf>,
    },
    /// Encode every record of a FASTA or one-sequence-per-line file
    Encode {
        input: std::path::PathBuf,
        /// Directory for `<id>.<format>` images
        #[arg(long, short, default_value = ".")]
        out_dir: std::path::PathBuf,
        #[command(flatten)]
        flags: EncodeFlags,
    },
    /// Encode a labeled CSV, split it and write a manifest
    Dataset {
        csv: std::path::PathBuf,
        /// Receives `images/` and `manifest.tsv`
        #[arg(long, short)]
        out_dir: std::path::PathBuf,
        #[command(flatten)]
        flags: EncodeFlags,
        #[command(flatten)]
        data: DatasetFlags,
    },
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.is::<UsageError>() {
            return 2;
        }
        if let Some(e) = cause.downcast_ref::<hilbertseq::data::DataError>() {
            if e.is_schema() {
                return 2;
            }
        }
    }
    1
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Curve { order, output } => commands::curve(order, output.as_deref()),
        Command::Encode { input, out_dir, flags } => commands::encode(&input, &out_dir, &flags),
        Command::Dataset { csv, out_dir, flags, data } => commands::dataset(&csv, &out_dir, &flags, &data),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
