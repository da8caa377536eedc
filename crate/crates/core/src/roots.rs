//! Root finding for increasing functions on the positive half-line.
//!
//! Every strength equation in the crate (Riemann problem, head-on and
//! overtaking interactions) has a left-hand side that is strictly increasing
//! in the unknown ratio. Brackets are grown geometrically from a starting
//! guess, then bisected and finally polished with a few Newton steps.

use crate::error::{Error, Result};

const EXPANSION_FACTOR: f64 = 2.0;
const EXPANSION_CAP: f64 = 18446744073709551616.0; // 2^64
const BISECTION_RTOL: f64 = 1e-13;
const MAX_BISECTIONS: usize = 500;
const NEWTON_STEPS: usize = 5;

/// Sign of an evaluation; overflow on the way up means `+∞`.
fn sign_of(v: Result<f64>) -> Result<Option<f64>> {
    match v {
        Ok(v) if v.is_nan() => Err(Error::Convergence("function returned NaN".into())),
        Ok(v) => Ok(Some(v)),
        Err(Error::Overflow { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

fn is_nonneg(v: Option<f64>) -> bool {
    v.is_none_or(|v| v >= 0.0)
}

/// Root of a strictly increasing `f` on `(0, ∞)`, starting the bracket at `start`.
///
/// `df` is the derivative, used only for the final Newton polish.
pub fn increasing_root<F, D>(f: F, df: D, start: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
    D: Fn(f64) -> Result<f64>,
{
    let f0 = match sign_of(f(start))? {
        Some(0.0) => return Ok(start),
        v => v,
    };
    let (mut lo, mut hi);
    if !is_nonneg(f0) {
        lo = start;
        hi = start;
        loop {
            hi *= EXPANSION_FACTOR;
            if hi > start * EXPANSION_CAP {
                return Err(Error::Convergence(format!("no sign change below {hi:e}")));
            }
            let v = sign_of(f(hi))?;
            if is_nonneg(v) {
                break;
            }
            lo = hi;
        }
    } else {
        lo = start;
        hi = start;
        loop {
            lo /= EXPANSION_FACTOR;
            if lo < start / EXPANSION_CAP {
                return Err(Error::Convergence(format!("no sign change above {lo:e}")));
            }
            let v = sign_of(f(lo))?;
            if !is_nonneg(v) {
                break;
            }
            if v == Some(0.0) {
                return Ok(lo);
            }
            hi = lo;
        }
    }

    let mut iterations = 0;
    while hi - lo > BISECTION_RTOL * hi {
        iterations += 1;
        if iterations > MAX_BISECTIONS {
            return Err(Error::Convergence(
                "bisection did not shrink the bracket".into(),
            ));
        }
        let mid = if hi > 4.0 * lo {
            (lo * hi).sqrt()
        } else {
            0.5 * (lo + hi)
        };
        if mid <= lo || mid >= hi {
            break;
        }
        match sign_of(f(mid))? {
            Some(0.0) => return Ok(mid),
            v if is_nonneg(v) => hi = mid,
            _ => lo = mid,
        }
    }

    let mut x = 0.5 * (lo + hi);
    let mut fx = f(x)?;
    for _ in 0..NEWTON_STEPS {
        if fx == 0.0 {
            break;
        }
        let d = df(x)?;
        if !(d > 0.0) || !d.is_finite() {
            break;
        }
        let next = x - fx / d;
        if !(next >= lo && next <= hi) {
            break;
        }
        let fn_ = f(next)?;
        if fn_.abs() >= fx.abs() {
            break;
        }
        x = next;
        fx = fn_;
    }
    Ok(x)
}
