//! `alphalim`: build spaces and maps from config files, run the alpha-limit
//! engines and write reports.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "alphalim", version, about = "Alpha-limit sets on finite-resolution spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum EngineArg {
    Enclosure,
    Exact,
}

#[derive(Subcommand)]
enum Command {
    /// Build a space (and map) from a config file into an artifact directory.
    Build {
        config: PathBuf,
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Compute an alpha-limit set in a built artifact directory.
    Alpha {
        dir: PathBuf,
        #[arg(long)]
        basepoint: String,
        #[arg(long, value_enum, default_value = "enclosure")]
        engine: EngineArg,
        #[arg(long, default_value_t = 20)]
        depth: usize,
        /// ε for the exact engine; defaults to twice the mesh.
        #[arg(long)]
        eps: Option<f64>,
        /// Landmark the member set should match up to a one-cell collar.
        #[arg(long)]
        expect: Option<String>,
    },
    /// Check the basic alpha-set facts at the given basepoints.
    Facts {
        dir: PathBuf,
        /// Basepoint landmark or point label; repeat for several.
        #[arg(long = "basepoint", required = true)]
        basepoints: Vec<String>,
        #[arg(long, value_enum, default_value = "enclosure")]
        engine: EngineArg,
        #[arg(long, default_value_t = 20)]
        depth: usize,
        #[arg(long)]
        eps: Option<f64>,
    },
    /// Try to realize landmark sets and random closed sets as alpha-limit sets.
    Survey {
        dir: PathBuf,
        /// Landmark set to realize; repeat for several.
        #[arg(long = "landmark")]
        landmarks: Vec<String>,
        /// Number of random closed cell-sets to add.
        #[arg(long, default_value_t = 0)]
        random: usize,
        #[arg(long, default_value_t = alpha_core::gallery::DEFAULT_SEED)]
        seed: u64,
    },
    /// Search bichromatic lines for random closed sets in a product.
    ProductLine {
        /// Factor config files (two or three).
        #[arg(long = "factor", required = true)]
        factors: Vec<PathBuf>,
        #[arg(long, default_value_t = 100)]
        random: usize,
        #[arg(long, default_value_t = alpha_core::gallery::DEFAULT_SEED)]
        seed: u64,
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Collapse a landmark set of a space to a point.
    Quotient {
        config: PathBuf,
        #[arg(long)]
        collapse: String,
        #[arg(long, default_value = "q")]
        name: String,
        /// Structure to check the result against.
        #[arg(long, value_enum)]
        check: Option<commands::QuotientCheck>,
        #[arg(long, short)]
        out: PathBuf,
    },
    /// Run the reproduction suite.
    Gallery {
        /// Row keys or numbers to run; all rows when omitted.
        #[arg(long, value_delimiter = ',')]
        only: Vec<String>,
        /// Also write SVG figures.
        #[arg(long)]
        render: bool,
        #[arg(long, default_value_t = alpha_core::gallery::DEFAULT_SEED)]
        seed: u64,
        #[arg(long, short, default_value = "gallery-out")]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.command {
        Command::Build { config, out } => commands::build(&config, &out),
        Command::Alpha { dir, basepoint, engine, depth, eps, expect } => {
            commands::alpha(&dir, &basepoint, engine, depth, eps, expect.as_deref())
        }
        Command::Facts { dir, basepoints, engine, depth, eps } => commands::facts(&dir, &basepoints, engine, depth, eps),
        Command::Survey { dir, landmarks, random, seed } => commands::survey(&dir, &landmarks, random, seed),
        Command::ProductLine { factors, random, seed, out } => commands::product_line(&factors, random, seed, &out),
        Command::Quotient { config, collapse, name, check, out } => commands::quotient(&config, &collapse, &name, check, &out),
        Command::Gallery { only, render, seed, out } => commands::gallery(&only, render, seed, &out),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("alphalim: {e}");
            ExitCode::from(e.code())
        }
    }
}
