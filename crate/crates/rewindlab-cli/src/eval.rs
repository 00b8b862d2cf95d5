use rewindlab::circuit::{rewound, CircuitShape, Family, RecycleTarget};
use rewindlab::closedform::{conv_fidelity, hybrid_fidelity, local_fidelity, noisy_conv_fidelity};
use rewindlab::noise::{channel_stats, make_channel, ChannelStats, KrausChannel};
use rewindlab::oracle::{exact_twirl_fidelity, mc_average_fidelity};
use rewindlab::statmech::{lattice_from_circuit, partition_sum_exhaustive, single_wall_fidelity, transfer_fidelity, TrivalentRule};
use rewindlab::{Error, FidelityResult, Method};

use crate::args::{NoiseArgs, SamplingArgs};
use crate::Failure;

/// Noise as the evaluators need it: the parameters, and the channel itself
/// when the oracles have to simulate it.
#[derive(Debug, Clone)]
pub struct Noise {
    pub stats: ChannelStats,
    pub channel: Option<KrausChannel>,
}

impl Noise {
    pub fn from_args(args: &NoiseArgs, q: u32) -> Result<Option<Noise>, Failure> {
        if let (Some(alpha), Some(beta)) = (args.alpha, args.beta) {
            return Ok(Some(Noise { stats: ChannelStats::single(alpha, beta), channel: None }));
        }
        let channel = match (&args.channel, args.noise) {
            (Some(path), _) => KrausChannel::load(path).map_err(Failure::Compute)?,
            (None, Some(kind)) => make_channel(kind, q).map_err(Failure::Compute)?,
            (None, None) => return Ok(None),
        };
        if channel.q != q {
            return Err(Failure::Usage(format!("channel acts on q={}, circuit has q={q}", channel.q)));
        }
        Ok(Some(Noise { stats: channel_stats(&channel), channel: Some(channel) }))
    }

    fn single_qudit(&self) -> Result<(f64, f64), Error> {
        match &self.channel {
            Some(ch) if ch.arity != 1 => Err(Error::UnsupportedRegime("this method needs a single-qudit channel".into())),
            _ => Ok((self.stats.alpha, self.stats.beta)),
        }
    }

    fn channel(&self) -> Result<&KrausChannel, Error> {
        self.channel
            .as_ref()
            .ok_or_else(|| Error::InvalidParameter("simulating noise needs --channel or --noise, not --alpha/--beta".into()))
    }
}

fn needs_first(target: RecycleTarget, family: Family) -> Result<(), Error> {
    if target == RecycleTarget::Single(1) {
        Ok(())
    } else {
        Err(Error::UnsupportedTarget(format!("closed forms for {family} cover target 1 only, got {target}")))
    }
}

pub fn evaluate(
    shape: CircuitShape,
    target: RecycleTarget,
    method: Method,
    noise: Option<&Noise>,
    sampling: &SamplingArgs,
) -> Result<FidelityResult, Error> {
    let q = shape.q.get();
    let (n, m) = (shape.n, shape.m);
    let layout = || rewound(shape, target);
    match method {
        Method::Closed => match (shape.family, noise) {
            (Family::Convolutional, None) => conv_fidelity(q, n, target),
            (Family::Convolutional, Some(noise)) => match target {
                RecycleTarget::Single(i) => {
                    let (alpha, beta) = noise.single_qudit()?;
                    noisy_conv_fidelity(q, n, alpha, beta, i)
                }
                _ => Err(Error::UnsupportedTarget("noisy closed form covers single targets; use transfer".into())),
            },
            (_, Some(_)) => Err(Error::UnsupportedRegime("noisy closed forms exist for the convolutional family only".into())),
            (Family::Hybrid, None) => {
                needs_first(target, shape.family)?;
                hybrid_fidelity(q, n, m)
            }
            (Family::Local, None) => {
                needs_first(target, shape.family)?;
                local_fidelity(q, n, m)
            }
        },
        Method::Wall => {
            if noise.is_some() {
                return Err(Error::NoisyRuleRejected);
            }
            single_wall_fidelity(&lattice_from_circuit(&layout()?, target)?, TrivalentRule::Solid { q })
        }
        Method::Sum => {
            let rule = match noise {
                None => TrivalentRule::Solid { q },
                Some(noise) => {
                    let (alpha, beta) = noise.single_qudit()?;
                    TrivalentRule::Noisy { q, alpha, beta }
                }
            };
            partition_sum_exhaustive(&lattice_from_circuit(&layout()?, target)?, rule)
        }
        Method::Transfer => {
            if shape.family != Family::Convolutional {
                return Err(Error::UnsupportedFamily("the transfer chain models the convolutional family".into()));
            }
            let stats = noise.map_or_else(ChannelStats::identity, |x| x.stats);
            transfer_fidelity(q, n, target, &stats)
        }
        Method::Twirl => {
            let ch = noise.map(Noise::channel).transpose()?;
            exact_twirl_fidelity(&layout()?, target, ch)
        }
        Method::Mc => {
            let ch = noise.map(Noise::channel).transpose()?;
            mc_average_fidelity(&layout()?, target, ch, sampling.samples, sampling.seed)
        }
    }
}

/// Errors that mean "this method does not apply here" rather than a failure.
pub fn is_infeasible(e: &Error) -> bool {
    matches!(
        e,
        Error::UnsupportedFamily(_)
            | Error::UnsupportedTarget(_)
            | Error::UnsupportedRegime(_)
            | Error::TooLarge(_)
            | Error::NoisyRuleRejected
            | Error::CombinatorialBlowup(_)
            | Error::InvalidParameter(_)
    )
}
