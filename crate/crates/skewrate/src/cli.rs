use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use skewrate_core::rational::parse_rational;
use skewrate_core::{Limits, Rational};

#[derive(Debug, Parser)]
#[command(
    name = "skewrate",
    version,
    about = "Classify skew-product germs by their Newton polygon and check attraction-rate predictions against exact iterates"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub limits: LimitArgs,
}

#[derive(Debug, Args)]
pub struct LimitArgs {
    /// Abort when an iterate has more terms than this.
    #[arg(long, global = true, default_value_t = Limits::DEFAULT_MAX_TERMS)]
    pub max_terms: usize,
    /// Abort when an iterate has a term of larger total degree.
    #[arg(long, global = true, default_value_t = Limits::DEFAULT_MAX_DEGREE)]
    pub max_degree: u64,
}

impl LimitArgs {
    pub fn limits(&self) -> Limits {
        Limits {
            max_terms: self.max_terms,
            max_degree: self.max_degree,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Newton polygon, case, weight interval and boundary flags.
    Classify {
        #[arg(long)]
        germ: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Exact iterate f^n with its polygon and orders.
    Iterate {
        #[arg(long)]
        germ: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Predicted rate data for f^n, without computing the iterate.
    Predict {
        #[arg(long)]
        germ: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        n: u32,
        /// Extra weight to evaluate, as `a` or `a/b`; repeatable.
        #[arg(long = "l", value_parser = parse_weight)]
        l: Vec<Rational>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        /// Write one row per n = 1..N to this CSV file.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Check every prediction against the exact iterates up to n-max.
    Verify {
        #[arg(long)]
        germ: PathBuf,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        n_max: u32,
        #[arg(long = "l", value_parser = parse_weight)]
        l: Vec<Rational>,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Verify a seeded stream of random germs.
    Fuzz(FuzzArgs),
}

#[derive(Debug, Args)]
pub struct FuzzArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 200)]
    pub count: usize,
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
    pub delta_max: u64,
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
    pub n_max: u32,
    /// Percentage of draws that put delta on a polygon intercept.
    #[arg(long, default_value_t = 25, value_parser = clap::value_parser!(u32).range(0..=100))]
    pub boundary_bias: u32,
    #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u64).range(1..))]
    pub support_max: u64,
    #[arg(long, default_value_t = -3, allow_negative_numbers = true)]
    pub coeff_min: i64,
    #[arg(long, default_value_t = 3, allow_negative_numbers = true)]
    pub coeff_max: i64,
    /// Germs whose iterates exceed this total degree are skipped.
    #[arg(long, default_value_t = 10_000)]
    pub degree_cap: u64,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

fn parse_weight(text: &str) -> Result<Rational, String> {
    match parse_rational(text) {
        Some(l) if l > Rational::from_integer(0.into()) => Ok(l),
        Some(_) => Err("weights must be positive".to_string()),
        None => Err("expected a rational `a` or `a/b`".to_string()),
    }
}
