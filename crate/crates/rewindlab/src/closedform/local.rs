use super::hybrid::hybrid_fidelity;
use crate::error::{Error, Result};
use crate::exact::int;
use crate::result::{FidelityResult, Method};

/// Brickwork circuits, qudit 1 recycled. With `m <= n - 2` the light cone of
/// the active qudit never reaches qudit 1 and the state is restored exactly.
/// With `m >= n` the circuit reduces to a hybrid circuit with
/// `(m - n)/2 + 1` sweeps.
pub fn local_fidelity(q: u32, n: usize, m: usize) -> Result<FidelityResult> {
    if q < 2 || n < 4 || n % 2 == 1 || m < 2 || m % 2 == 1 {
        return Err(Error::InvalidShape(format!("local needs q >= 2, even n >= 4 and even m >= 2; got q={q}, n={n}, m={m}")));
    }
    if m + 2 <= n {
        Ok(FidelityResult::exact(int(1), Method::Closed))
    } else if m >= n {
        hybrid_fidelity(q, n, (m - n) / 2 + 1)
    } else {
        Err(Error::UnsupportedRegime(format!("n={n}, m={m} lies between the shallow and deep regimes")))
    }
}
