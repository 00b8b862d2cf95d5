use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rewindlab::circuit::{Family, RecycleTarget};
use rewindlab::noise::ChannelKind;
use rewindlab::Method;

#[derive(Parser, Debug)]
#[command(name = "rewindlab", version, about = "Haar-averaged fidelity of qudit rewinding and recycling")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Fidelity of one circuit by one or more methods.
    Fidelity(FidelityArgs),
    /// Fidelity over ranges of q, n and m, as CSV or JSON rows.
    Sweep(SweepArgs),
    /// Count band-constrained lattice paths.
    Paths(PathsArgs),
    /// alpha, beta, beta_u and beta_d of a channel.
    NoiseStats(NoiseStatsArgs),
    /// Run every feasible method and report the largest pairwise deviation.
    Compare(CompareArgs),
}

#[derive(Args, Debug, Clone)]
pub struct NoiseArgs {
    /// Entanglement fidelity of a single-qudit channel.
    #[arg(long, requires = "beta", conflicts_with_all = ["channel", "noise"])]
    pub alpha: Option<f64>,
    #[arg(long, requires = "alpha")]
    pub beta: Option<f64>,
    /// Kraus operators as JSON: {"arity": 1, "operators": [[[re, im], ...], ...]}.
    #[arg(long, conflicts_with = "noise")]
    pub channel: Option<PathBuf>,
    /// Built-in channel: depolarizing:P, dephasing:P, amplitude-damping:G or identity.
    #[arg(long, value_parser = parse_noise)]
    pub noise: Option<ChannelKind>,
}

#[derive(Args, Debug, Clone)]
pub struct CircuitArgs {
    #[arg(long, value_parser = parse_family)]
    pub family: Family,
    #[arg(long)]
    pub q: u32,
    #[arg(long)]
    pub n: usize,
    /// Sweeps for hybrid, depth for local.
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    /// `3`, `prefix:2` or `pair:3,2`.
    #[arg(long, default_value = "1", value_parser = parse_target)]
    pub target: RecycleTarget,
}

#[derive(Args, Debug, Clone)]
pub struct SamplingArgs {
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write here instead of standard output.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
pub struct FidelityArgs {
    #[command(flatten)]
    pub circuit: CircuitArgs,
    /// Comma-separated: closed, wall, sum, transfer, twirl, mc.
    #[arg(long, default_value = "closed", value_parser = parse_methods)]
    pub method: Methods,
    #[command(flatten)]
    pub noise: NoiseArgs,
    #[command(flatten)]
    pub sampling: SamplingArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long, value_parser = parse_family)]
    pub family: Family,
    /// List or range, e.g. `2,3` or `2..5`.
    #[arg(long, value_parser = parse_list)]
    pub q: List,
    /// List or range with optional step, e.g. `4..12` or `4..20:2`.
    #[arg(long, value_parser = parse_list)]
    pub n: List,
    #[arg(long, default_value = "1", value_parser = parse_list)]
    pub m: List,
    #[arg(long, default_value = "1", value_parser = parse_target)]
    pub target: RecycleTarget,
    #[arg(long, value_parser = parse_methods)]
    pub method: Methods,
    #[command(flatten)]
    pub noise: NoiseArgs,
    #[command(flatten)]
    pub sampling: SamplingArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct PathsArgs {
    /// Start point `x,y`.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_point)]
    pub from: (i64, i64),
    #[arg(long, allow_hyphen_values = true, value_parser = parse_point)]
    pub to: (i64, i64),
    /// Lower diagonal `y = x + s`.
    #[arg(long, allow_negative_numbers = true)]
    pub s: i64,
    /// Upper diagonal `y = x + t`.
    #[arg(long, allow_negative_numbers = true)]
    pub t: i64,
    /// reflection, trig, dp or all.
    #[arg(long, default_value = "all")]
    pub method: String,
}

#[derive(Args, Debug)]
pub struct NoiseStatsArgs {
    #[arg(long, conflicts_with = "noise", required_unless_present = "noise")]
    pub channel: Option<PathBuf>,
    #[arg(long, value_parser = parse_noise)]
    pub noise: Option<ChannelKind>,
    /// Local dimension for a built-in channel.
    #[arg(long, default_value_t = 2)]
    pub q: u32,
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    #[command(flatten)]
    pub circuit: CircuitArgs,
    /// Methods to compare; by default every deterministic one that applies.
    #[arg(long, value_parser = parse_methods)]
    pub method: Option<Methods>,
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
    #[command(flatten)]
    pub noise: NoiseArgs,
    #[command(flatten)]
    pub sampling: SamplingArgs,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Methods(pub Vec<Method>);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct List(pub Vec<usize>);

fn parse_family(s: &str) -> Result<Family, String> {
    Family::parse(s).ok_or_else(|| format!("unknown family `{s}` (conv, hybrid, local)"))
}

fn parse_target(s: &str) -> Result<RecycleTarget, String> {
    RecycleTarget::parse(s).ok_or_else(|| format!("cannot read target `{s}`"))
}

pub fn parse_methods(s: &str) -> Result<Methods, String> {
    let names: Vec<&str> = s.split(',').map(str::trim).filter(|x| !x.is_empty()).collect();
    if names.is_empty() {
        return Err("at least one method is required".into());
    }
    let mut out = Vec::new();
    for name in names {
        let m = Method::parse(name).ok_or_else(|| format!("unknown method `{name}`"))?;
        if !out.contains(&m) {
            out.push(m);
        }
    }
    Ok(Methods(out))
}

pub fn parse_list(s: &str) -> Result<List, String> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim) {
        let (range, step) = match part.split_once(':') {
            Some((r, st)) => (r, st.parse::<usize>().map_err(|e| format!("step `{st}`: {e}"))?),
            None => (part, 1),
        };
        if step == 0 {
            return Err("step must be positive".into());
        }
        let num = |x: &str| x.trim().parse::<usize>().map_err(|e| format!("`{x}`: {e}"));
        match range.split_once("..") {
            Some((a, b)) => {
                let (a, b) = (num(a)?, num(b.trim_start_matches('='))?);
                if b < a {
                    return Err(format!("empty range {part}"));
                }
                out.extend((a..=b).step_by(step));
            }
            None => out.push(num(range)?),
        }
    }
    Ok(List(out))
}

fn parse_point(s: &str) -> Result<(i64, i64), String> {
    let (x, y) = s.split_once(',').ok_or_else(|| format!("expected `x,y`, got `{s}`"))?;
    let num = |v: &str| v.trim().parse::<i64>().map_err(|e| format!("`{v}`: {e}"));
    Ok((num(x)?, num(y)?))
}

pub fn parse_noise(s: &str) -> Result<ChannelKind, String> {
    if s == "identity" {
        return Ok(ChannelKind::Identity);
    }
    let (kind, p) = s.split_once(':').ok_or_else(|| format!("expected kind:parameter, got `{s}`"))?;
    let p: f64 = p.parse().map_err(|e| format!("`{p}`: {e}"))?;
    match kind {
        "depolarizing" | "depol" => Ok(ChannelKind::Depolarizing(p)),
        "dephasing" => Ok(ChannelKind::Dephasing(p)),
        "amplitude-damping" | "amp" => Ok(ChannelKind::AmplitudeDamping(p)),
        _ => Err(format!("unknown channel `{kind}`")),
    }
}
