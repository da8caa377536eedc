use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "tvdlab",
    version,
    about = "Wave curves, interactions and Glimm runs for the isentropic p-system"
)]
pub struct Cli {
    /// Write output here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate φ and φ' for one wave family (CSV).
    Phi(PhiArgs),
    /// Solve a Riemann problem.
    Riemann(RiemannArgs),
    /// Resolve a pairwise wave interaction.
    Interact(InteractArgs),
    /// Convergence table of Δvar for weak head-on interactions.
    TvdExpand(TvdExpandArgs),
    /// Search for a variation-increasing interaction.
    Counterexample(CounterexampleArgs),
    /// Run the random-choice scheme and stream the functionals (JSON lines).
    Glimm(GlimmArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyArg {
    #[value(alias = "backward")]
    B,
    #[value(alias = "forward")]
    F,
}

#[derive(Debug, Args, Serialize)]
pub struct PhiArgs {
    #[arg(long, default_value_t = 1.4)]
    pub gamma: f64,
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    #[arg(long = "from", default_value_t = 0.1)]
    pub from: f64,
    #[arg(long = "to", default_value_t = 10.0)]
    pub to: f64,
    #[arg(long, default_value_t = 101)]
    pub points: usize,
    /// Space the points logarithmically.
    #[arg(long)]
    pub log: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct RiemannArgs {
    #[arg(long, default_value_t = 1.4)]
    pub gamma: f64,
    /// Left state as `XI,U`.
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    pub left: (f64, f64),
    /// Right state as `XI,U`.
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
    pub right: (f64, f64),
}

#[derive(Debug, Args, Serialize)]
pub struct InteractArgs {
    #[arg(long, default_value_t = 1.4)]
    pub gamma: f64,
    /// One of Ia, Ib, Ib', Ic, IIa, IIb, IIc, IIa', IIb', IIc'.
    #[arg(long)]
    pub kind: String,
    /// Strength of the backward wave (head-on) or the left wave (overtaking).
    #[arg(long)]
    pub q1: f64,
    /// Strength of the forward wave (head-on) or the right wave (overtaking).
    #[arg(long)]
    pub q2: f64,
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true, default_value = "1,0")]
    pub far_left: (f64, f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CaseArg {
    Iii,
    Iv,
}

#[derive(Debug, Args, Serialize)]
pub struct TvdExpandArgs {
    #[arg(long, default_value_t = 1.4)]
    pub gamma: f64,
    /// `split:theta=<expr>;psi=<expr>` or `raw:<expr in r,s>`.
    #[arg(long, default_value = "raw:r*s")]
    pub field: String,
    #[arg(long, default_value_t = 1e-2, allow_hyphen_values = true)]
    pub dr: f64,
    #[arg(long, default_value_t = 1e-2, allow_hyphen_values = true)]
    pub ds: f64,
    /// Pick the signs of `dr`, `ds` (keeping magnitudes) to land in this case.
    #[arg(long, value_enum)]
    pub case: Option<CaseArg>,
    #[arg(long, default_value_t = 6)]
    pub halvings: u32,
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true, default_value = "1,0")]
    pub base: (f64, f64),
}

#[derive(Debug, Args, Serialize)]
pub struct CounterexampleArgs {
    #[arg(long, default_value_t = 3.0)]
    pub gamma: f64,
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
    pub case: u8,
    /// θ as an expression in `v` (default depends on the case).
    #[arg(long)]
    pub theta: Option<String>,
    /// ψ as an expression in `v` (default depends on the case).
    #[arg(long)]
    pub psi: Option<String>,
    #[arg(long, default_value_t = -1.0, allow_hyphen_values = true)]
    pub lo: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub hi: f64,
    #[arg(long, default_value_t = 1.95)]
    pub m: f64,
    #[arg(long, default_value_t = 0.9)]
    pub delta: f64,
    #[arg(long, default_value_t = 0.0)]
    pub m_u: f64,
    #[arg(long, default_value_t = 1.0)]
    pub n_l: f64,
    #[arg(long, default_value_t = 1.0)]
    pub n_u: f64,
    #[arg(long, default_value_t = 0.5)]
    pub epsilon: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SeqArg {
    Vdc,
    Prng,
}

#[derive(Debug, Args, Serialize)]
pub struct GlimmArgs {
    #[arg(long, default_value_t = 1.4)]
    pub gamma: f64,
    /// CSV with header `X,tau,u`, rows sorted by X.
    #[arg(long)]
    pub ic: PathBuf,
    #[arg(long, default_value_t = 200)]
    pub cells: usize,
    #[arg(long)]
    pub tmax: f64,
    #[arg(long, value_parser = parse_pair, allow_hyphen_values = true, default_value = "0,1")]
    pub domain: (f64, f64),
    #[arg(long, default_value = "split:theta=id;psi=id")]
    pub field: String,
    #[arg(long, value_enum, default_value_t = SeqArg::Vdc)]
    pub seq: SeqArg,
    /// PRNG seed, or the number of skipped terms for `vdc`.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Emit every k-th step (the first and last are always emitted).
    #[arg(long, default_value_t = 1)]
    pub every: u64,
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected `A,B`, got `{s}`"))?;
    let p = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}"));
    Ok((p(a)?, p(b)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairs() {
        assert_eq!(parse_pair("1, -0.5").unwrap(), (1.0, -0.5));
        assert!(parse_pair("1").is_err());
        assert!(parse_pair("1,x").is_err());
    }
}
