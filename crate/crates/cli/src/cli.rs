use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::number::{parse_list, parse_real};

fn real(s: &str) -> Result<f64, String> {
    parse_real(s)
}

/// A comma-separated list of reals, taken as one argument.
#[derive(Debug, Clone, PartialEq)]
pub struct Reals(pub Vec<f64>);

fn list(s: &str) -> Result<Reals, String> {
    parse_list(s).map(Reals)
}

#[derive(Debug, Parser)]
#[command(name = "nnc", version, about = "Bijection-induced arithmetic, calculus and audits")]
pub struct Cli {
    /// Emit a JSON document instead of text.
    #[arg(long, global = true, conflicts_with = "csv")]
    pub json: bool,
    /// Emit CSV rows instead of text (tabular verbs only).
    #[arg(long, global = true)]
    pub csv: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the bijection or an induced operation.
    Eval(EvalArgs),
    /// Non-Newtonian derivative, or the `Df/Dx = 1` check.
    Derive(DeriveArgs),
    /// Compose two velocities (units of c).
    Velocity(VelocityArgs),
    /// Generalized entropy of a distribution.
    Entropy(EntropyArgs),
    /// Quasi-arithmetic mean, or the average speed over two equal legs.
    Mean(MeanArgs),
    /// Run the probe battery.
    Audit(AuditArgs),
    /// CHSH value and measurement-independence audit of a model file.
    Bell(BellArgs),
    /// Compare the LCDM scale factor with a bijection.
    Cosmo(CosmoArgs),
    /// Cantor function values, inverse, or figure data.
    Cantor(CantorArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Op {
    Forward,
    Inverse,
    Add,
    Sub,
    Mul,
    Div,
    Neutrals,
    Cauchy,
    Roundtrip,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Bijection spec, e.g. `power:n=3`.
    #[arg(long = "f")]
    pub f: String,
    #[arg(long, value_enum)]
    pub op: Op,
    #[arg(long, value_parser = real, allow_hyphen_values = true)]
    pub a: Option<f64>,
    #[arg(long, value_parser = real, allow_hyphen_values = true)]
    pub b: Option<f64>,
    /// Points for `roundtrip`, comma separated.
    #[arg(long, value_parser = list, allow_hyphen_values = true)]
    pub grid: Option<Reals>,
}

#[derive(Debug, Args)]
pub struct StepArgs {
    #[arg(long, value_parser = real)]
    pub h_max: Option<f64>,
    #[arg(long, value_parser = real)]
    pub h_min: Option<f64>,
    #[arg(long, value_parser = real)]
    pub ratio: Option<f64>,
    #[arg(long)]
    pub no_richardson: bool,
}

#[derive(Debug, Args)]
pub struct DeriveArgs {
    /// Bijection on the input side.
    #[arg(long, default_value = "identity")]
    pub fx: String,
    /// Bijection on the output side.
    #[arg(long, default_value = "identity")]
    pub fy: String,
    /// Function to differentiate: identity, square, cube or `poly:c0,c1,...`.
    #[arg(long = "func", default_value = "identity")]
    pub func: String,
    #[arg(long, value_parser = real, allow_hyphen_values = true)]
    pub x: Option<f64>,
    /// Check `D f_X / D x = 1` on a grid instead.
    #[arg(long)]
    pub identity_check: bool,
    /// Grid for `--identity-check`; defaults to 19 interior points.
    #[arg(long, value_parser = list, allow_hyphen_values = true)]
    pub grid: Option<Reals>,
    #[command(flatten)]
    pub steps: StepArgs,
}

#[derive(Debug, Args)]
pub struct VelocityArgs {
    #[arg(long = "f", default_value = "arctanh")]
    pub f: String,
    #[arg(long, value_parser = real, allow_hyphen_values = true)]
    pub b1: f64,
    #[arg(long, value_parser = real, allow_hyphen_values = true)]
    pub b2: f64,
}

#[derive(Debug, Args)]
pub struct EntropyArgs {
    #[arg(long = "f")]
    pub f: String,
    /// Probabilities, comma separated.
    #[arg(long, value_parser = list, conflicts_with = "random", required_unless_present = "random")]
    pub dist: Option<Reals>,
    /// Check this many seeded random distributions instead.
    #[arg(long)]
    pub random: Option<usize>,
    #[arg(long, default_value_t = nncalc::audit::DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct MeanArgs {
    #[arg(long = "f", default_value = "identity", conflicts_with = "average_speed")]
    pub f: String,
    #[arg(long, value_parser = list, allow_hyphen_values = true, required_unless_present = "average_speed")]
    pub values: Option<Reals>,
    #[arg(long, value_parser = list)]
    pub weights: Option<Reals>,
    /// Two speeds `v1,v2` over legs of equal length.
    #[arg(long, value_parser = list, conflicts_with_all = ["values", "weights"])]
    pub average_speed: Option<Reals>,
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    #[arg(long = "f", required_unless_present = "catalog", conflicts_with = "catalog")]
    pub f: Option<String>,
    /// Audit every catalog entry.
    #[arg(long)]
    pub catalog: bool,
    #[arg(long, default_value_t = nncalc::audit::DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = nncalc::audit::DEFAULT_CLOSURE_SAMPLES)]
    pub closure_samples: usize,
    #[arg(long, default_value_t = nncalc::audit::DEFAULT_CAUCHY_SAMPLES)]
    pub cauchy_samples: usize,
    #[arg(long, default_value_t = nncalc::audit::DEFAULT_ENTROPY_DISTRIBUTIONS)]
    pub entropy_dists: usize,
}

#[derive(Debug, Args)]
pub struct BellArgs {
    /// Model file (JSON).
    #[arg(long, required_unless_present = "classical_bound")]
    pub model: Option<PathBuf>,
    #[arg(long = "f", default_value = "identity")]
    pub f: String,
    #[arg(long)]
    pub a: Option<String>,
    #[arg(long)]
    pub a_prime: Option<String>,
    #[arg(long)]
    pub b: Option<String>,
    #[arg(long)]
    pub b_prime: Option<String>,
    /// Independence tolerance on the total-variation distance.
    #[arg(long, value_parser = real, default_value = "1e-9")]
    pub tol: f64,
    /// Enumerate deterministic local models on this many hidden variables.
    #[arg(long, conflicts_with = "model")]
    pub classical_bound: Option<usize>,
}

#[derive(Debug, Args)]
pub struct CosmoArgs {
    #[arg(long = "f", default_value = "sinh_cosmo")]
    pub f: String,
    #[arg(long, value_parser = real, default_value = "0.7")]
    pub omega_lambda: f64,
    #[arg(long, value_parser = real, default_value = "0.1")]
    pub t0: f64,
    #[arg(long, value_parser = real, default_value = "3")]
    pub t1: f64,
    #[arg(long, default_value_t = 50)]
    pub n: usize,
}

#[derive(Debug, Args)]
pub struct CantorArgs {
    #[arg(long, default_value_t = nncalc::bijection::DEFAULT_CANTOR_DEPTH)]
    pub depth: u32,
    /// Evaluate at one point; decimals and `p/q` are read exactly.
    #[arg(long, conflicts_with_all = ["inverse", "samples"])]
    pub x: Option<String>,
    /// Leftmost preimage of this value.
    #[arg(long, value_parser = real, conflicts_with = "samples")]
    pub inverse: Option<f64>,
    /// Uniform grid size on [0, 1] for figure data.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Write the CSV table here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
