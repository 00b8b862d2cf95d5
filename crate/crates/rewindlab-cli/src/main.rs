mod args;
mod eval;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use rayon::prelude::*;
use rewindlab::circuit::CircuitShape;
use rewindlab::noise::{channel_stats, make_channel, KrausChannel};
use rewindlab::pathcount::{count_paths, BandConstraint, LatticePoint, PathBackend};
use rewindlab::{Error, Method};
use serde::Serialize;

use args::{Cli, Command, CompareArgs, FidelityArgs, NoiseStatsArgs, PathsArgs, SweepArgs};
use eval::{evaluate, is_infeasible, Noise};
use output::{sig15, sink, write_rows, Row};

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Compute(Error),
    Io(std::io::Error),
    Tolerance(f64),
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Compute(_) | Failure::Io(_) => 2,
            Failure::Tolerance(_) => 3,
        }
    }
}

const THREADS_VAR: &str = "REWINDLAB_THREADS";

fn init_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var(THREADS_VAR) else { return Ok(()) };
    let n: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| Failure::Usage(format!("{THREADS_VAR}={v} is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Usage(format!("cannot start {n} threads: {e}")))
}

fn shape(family: rewindlab::circuit::Family, q: u32, n: usize, m: usize) -> Result<CircuitShape, Failure> {
    CircuitShape::new(family, n, m, q).map_err(|e| Failure::Usage(e.to_string()))
}

fn fidelity(a: FidelityArgs) -> Result<(), Failure> {
    let c = &a.circuit;
    let shape = shape(c.family, c.q, c.n, c.m)?;
    c.target.validate(c.n).map_err(|e| Failure::Usage(e.to_string()))?;
    let noise = Noise::from_args(&a.noise, c.q)?;
    let mut rows = Vec::new();
    for &method in &a.method.0 {
        let r = evaluate(shape, c.target, method, noise.as_ref(), &a.sampling).map_err(Failure::Compute)?;
        rows.push(Row::new(shape, c.target, method, &r, a.sampling.seed));
    }
    let mut out = sink(a.output.output.as_deref())?;
    write_rows(&mut out, &rows, a.output.format)?;
    Ok(())
}

fn sweep(a: SweepArgs) -> Result<(), Failure> {
    let mut jobs = Vec::new();
    for &q in &a.q.0 {
        let q = u32::try_from(q).map_err(|_| Failure::Usage(format!("q={q} out of range")))?;
        for &n in &a.n.0 {
            for &m in &a.m.0 {
                let s = shape(a.family, q, n, m)?;
                a.target.validate(n).map_err(|e| Failure::Usage(e.to_string()))?;
                for &method in &a.method.0 {
                    jobs.push((s, method));
                }
            }
        }
    }
    let mut noise = std::collections::BTreeMap::new();
    for &q in &a.q.0 {
        noise.insert(q as u32, Noise::from_args(&a.noise, q as u32)?);
    }
    let rows: Result<Vec<Row>, Failure> = jobs
        .par_iter()
        .map(|&(s, method)| {
            let r = evaluate(s, a.target, method, noise[&s.q.get()].as_ref(), &a.sampling).map_err(Failure::Compute)?;
            Ok(Row::new(s, a.target, method, &r, a.sampling.seed))
        })
        .collect();
    let mut out = sink(a.output.output.as_deref())?;
    write_rows(&mut out, &rows?, a.output.format)?;
    Ok(())
}

#[derive(Serialize)]
struct PathRow {
    method: &'static str,
    count: String,
}

fn paths(a: PathsArgs) -> Result<(), Failure> {
    let backends = match a.method.as_str() {
        "all" => vec![PathBackend::Reflection, PathBackend::Trig, PathBackend::Dp],
        "reflection" => vec![PathBackend::Reflection],
        "trig" => vec![PathBackend::Trig],
        "dp" => vec![PathBackend::Dp],
        other => return Err(Failure::Usage(format!("unknown path method `{other}`"))),
    };
    let from = LatticePoint::new(a.from.0, a.from.1);
    let to = LatticePoint::new(a.to.0, a.to.1);
    let band = BandConstraint::new(a.s, a.t);
    let mut rows = Vec::new();
    for b in backends {
        let count = count_paths(b, from, to, band).map_err(Failure::Compute)?;
        rows.push(PathRow { method: b.name(), count: count.to_string() });
    }
    write_rows(&mut std::io::stdout().lock(), &rows, args::Format::Csv)?;
    Ok(())
}

#[derive(Serialize)]
struct StatsRow {
    q: u32,
    arity: u32,
    alpha: String,
    beta: String,
    beta_u: String,
    beta_d: String,
}

fn noise_stats(a: NoiseStatsArgs) -> Result<(), Failure> {
    let ch = match (&a.channel, a.noise) {
        (Some(path), _) => KrausChannel::load(path),
        (None, Some(kind)) => make_channel(kind, a.q),
        (None, None) => return Err(Failure::Usage("need --channel or --noise".into())),
    }
    .map_err(Failure::Compute)?;
    let s = channel_stats(&ch);
    let row = StatsRow { q: ch.q, arity: ch.arity, alpha: sig15(s.alpha), beta: sig15(s.beta), beta_u: sig15(s.beta_u), beta_d: sig15(s.beta_d) };
    write_rows(&mut std::io::stdout().lock(), &[row], args::Format::Csv)?;
    Ok(())
}

const COMPARED: [Method; 5] = [Method::Closed, Method::Wall, Method::Sum, Method::Transfer, Method::Twirl];

fn compare(a: CompareArgs) -> Result<(), Failure> {
    let c = &a.circuit;
    let shape = shape(c.family, c.q, c.n, c.m)?;
    c.target.validate(c.n).map_err(|e| Failure::Usage(e.to_string()))?;
    let noise = Noise::from_args(&a.noise, c.q)?;
    let methods = a.method.as_ref().map_or(COMPARED.to_vec(), |m| m.0.clone());
    let mut rows = Vec::new();
    let mut values = Vec::new();
    for method in methods {
        match evaluate(shape, c.target, method, noise.as_ref(), &a.sampling) {
            Ok(r) => {
                values.push((method, r.to_f64()));
                rows.push(Row::new(shape, c.target, method, &r, a.sampling.seed));
            }
            Err(e) if is_infeasible(&e) => eprintln!("skipping {method}: {e}"),
            Err(e) => return Err(Failure::Compute(e)),
        }
    }
    if values.len() < 2 {
        return Err(Failure::Compute(Error::UnsupportedRegime(format!("only {} method(s) apply here", values.len()))));
    }
    let mut worst = (0.0f64, values[0].0, values[1].0);
    for (i, &(ma, va)) in values.iter().enumerate() {
        for &(mb, vb) in &values[i + 1..] {
            if (va - vb).abs() > worst.0 {
                worst = ((va - vb).abs(), ma, mb);
            }
        }
    }
    let mut out = std::io::stdout().lock();
    write_rows(&mut out, &rows, args::Format::Csv)?;
    writeln!(out, "max_deviation,{:e},{},{}", worst.0, worst.1, worst.2)?;
    if worst.0 > a.tolerance {
        return Err(Failure::Tolerance(worst.0));
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    init_threads()?;
    match cli.command {
        Command::Fidelity(a) => fidelity(a),
        Command::Sweep(a) => sweep(a),
        Command::Paths(a) => paths(a),
        Command::NoiseStats(a) => noise_stats(a),
        Command::Compare(a) => compare(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Usage(msg) => eprintln!("error: {msg}"),
                Failure::Compute(e) => eprintln!("error: {e}"),
                Failure::Io(e) => eprintln!("error: {e}"),
                Failure::Tolerance(d) => eprintln!("deviation {d:e} exceeds the tolerance"),
            }
            ExitCode::from(f.code())
        }
    }
}
