//! Noisy convolutional chain with a single-qudit channel of entanglement
//! fidelity `alpha` and link parameter `beta`.

use crate::error::{Error, Result};
use crate::result::{FidelityResult, Method};

fn parts(q: u32, alpha: f64, beta: f64) -> Result<(f64, f64, f64)> {
    let ok = alpha > 0.0 && alpha <= 1.0 && beta > 0.0;
    if !ok {
        return Err(Error::InvalidParameter(format!("need 0 < alpha <= 1 and beta > 0, got {alpha}, {beta}")));
    }
    let q = q as f64;
    let lambda2 = alpha * q * q * (beta * q * q - 1.0) / (q.powi(4) - 1.0);
    if lambda2.abs() >= 1.0 {
        return Err(Error::DivergentEigenvalue(lambda2));
    }
    let den = (1.0 - alpha * beta) * q.powi(4) + alpha * q * q - 1.0;
    if den.abs() < 1e-300 {
        return Err(Error::InvalidParameter("degenerate denominator".into()));
    }
    let amp = (alpha * q * q - 1.0) * (q - 1.0) / (q * den);
    Ok((lambda2, den, amp))
}

/// Large-`n` limit of the fidelity.
pub fn noisy_sup(q: u32, alpha: f64, beta: f64) -> Result<f64> {
    let (_, den, _) = parts(q, alpha, beta)?;
    let qf = q as f64;
    Ok(((1.0 - alpha * beta) * qf.powi(3) + alpha * qf * qf - 1.0) / den)
}

/// `F_i` for a single recycled qudit `i`. Qudits 1 and 2 share the exponent
/// `n - 2`.
pub fn noisy_conv_fidelity(q: u32, n: usize, alpha: f64, beta: f64, i: usize) -> Result<FidelityResult> {
    check(q, n, i)?;
    let (lambda2, _, amp) = parts(q, alpha, beta)?;
    let v = noisy_sup(q, alpha, beta)? - amp * lambda2.powi((n - i.max(2)) as i32);
    Ok(FidelityResult::real(v, Method::Closed))
}

/// The same with the exponent `n - i + 1` for `i >= 2`. At `alpha = beta = 1`
/// it misses the noiseless value by one power of `q^2/(q^2+1)`.
pub fn noisy_conv_fidelity_long_exponent(q: u32, n: usize, alpha: f64, beta: f64, i: usize) -> Result<FidelityResult> {
    check(q, n, i)?;
    let (lambda2, _, amp) = parts(q, alpha, beta)?;
    let e = if i == 1 { n - 2 } else { n - i + 1 };
    Ok(FidelityResult::real(noisy_sup(q, alpha, beta)? - amp * lambda2.powi(e as i32), Method::Closed))
}

fn check(q: u32, n: usize, i: usize) -> Result<()> {
    if q < 2 || n < 3 {
        return Err(Error::InvalidShape(format!("need q >= 2 and n >= 3, got q={q}, n={n}")));
    }
    if i < 1 || i >= n {
        return Err(Error::InvalidTarget(format!("qudit {i} is not in 1..{n}")));
    }
    Ok(())
}

fn correlation_rate(q: f64, alpha: f64) -> f64 {
    alpha * q * q / (q * q + 1.0)
}

/// Limit of `F_ij - F_i F_j` for `n -> infinity` at `beta = 1`, as a function
/// of the distance `i - j`.
pub fn noisy_conv_correlation_limit(q: u32, alpha: f64, gap: u32) -> Result<FidelityResult> {
    limit(q, alpha, gap, (q as f64 + 1.0).powi(2))
}

/// The same limit with `q^2 + 1` in place of `(q + 1)^2` in the prefactor.
pub fn noisy_conv_correlation_limit_q2p1(q: u32, alpha: f64, gap: u32) -> Result<FidelityResult> {
    limit(q, alpha, gap, (q as f64).powi(2) + 1.0)
}

fn limit(q: u32, alpha: f64, gap: u32, pre: f64) -> Result<FidelityResult> {
    if gap < 1 {
        return Err(Error::InvalidIndices("the distance i - j must be at least 1".into()));
    }
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidParameter(format!("need 0 < alpha <= 1, got {alpha}")));
    }
    let q = q as f64;
    let a = (1.0 - alpha) * q * q * (alpha * q * q - 1.0) / (pre * ((1.0 - alpha) * q * q + 1.0).powi(2));
    Ok(FidelityResult::real(a * correlation_rate(q, alpha).powi(gap as i32), Method::Closed))
}
