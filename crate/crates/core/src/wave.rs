//! Wave curves of the first kind, parametrized by ξ-ratios.
//!
//! A wave joining `(ξ̄, ū)` on the left to `(ξ, u)` on the right has strength
//! `q = ξ/ξ̄`. Backward waves move the velocity by `-φ←(q)·ξ̄`, forward waves
//! by `+φ→(q)·ξ̄`.
//!
//! On the shock branches both auxiliary functions equal
//! `sign(x-1)·√((1 - x^(-1/α))(x^(γ/α) - 1))`; on the rarefaction branches
//! they are the straight line `κ(x-1)`.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};
use crate::gas::{GasModel, State};

/// Largest argument handed to `exp` before we call it an overflow.
const EXP_LIMIT: f64 = 708.0;

/// Below this distance from 1 the shock-branch derivative switches to its
/// Taylor expansion.
const SERIES_RADIUS: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    Backward,
    Forward,
}

impl Family {
    pub fn other(self) -> Self {
        match self {
            Family::Backward => Family::Forward,
            Family::Forward => Family::Backward,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WaveKind {
    Shock,
    Rarefaction,
    Null,
}

impl WaveKind {
    pub fn letter(self) -> char {
        match self {
            WaveKind::Shock => 'S',
            WaveKind::Rarefaction => 'R',
            WaveKind::Null => 'N',
        }
    }
}

/// One elementary wave: a family and its ξ-ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Wave {
    family: Family,
    ratio: f64,
}

impl Wave {
    pub fn new(family: Family, ratio: f64) -> Result<Self> {
        if !(ratio > 0.0) || !ratio.is_finite() {
            return Err(Error::Domain(format!(
                "wave ratio must be finite and positive, got {ratio}"
            )));
        }
        Ok(Self { family, ratio })
    }

    pub fn backward(ratio: f64) -> Result<Self> {
        Self::new(Family::Backward, ratio)
    }

    pub fn forward(ratio: f64) -> Result<Self> {
        Self::new(Family::Forward, ratio)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn ratio(&self) -> f64 {
        self.ratio
    }

    pub fn kind(&self) -> WaveKind {
        kind_of(self.family, self.ratio)
    }

    /// The same wave seen in the mirrored frame `X -> -X`.
    pub fn reflect(&self) -> Self {
        Self {
            family: self.family.other(),
            ratio: 1.0 / self.ratio,
        }
    }
}

impl fmt::Display for Wave {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let arrow = match self.family {
            Family::Backward => "<-",
            Family::Forward => "->",
        };
        write!(f, "{}{}({})", self.kind().letter(), arrow, self.ratio)
    }
}

pub fn kind_of(family: Family, ratio: f64) -> WaveKind {
    if ratio == 1.0 {
        return WaveKind::Null;
    }
    match (family, ratio > 1.0) {
        (Family::Backward, true) | (Family::Forward, false) => WaveKind::Shock,
        _ => WaveKind::Rarefaction,
    }
}

fn check_ratio(x: f64) -> Result<()> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!(
            "ratio must be finite and positive, got {x}"
        )));
    }
    Ok(())
}

/// `(1 - x^(-1/α), x^(γ/α) - 1)` and their derivatives, computed with
/// `expm1` so that neither factor loses digits near `x = 1`.
struct ShockFactors {
    g: f64,
    h: f64,
    dg: f64,
    dh: f64,
}

fn shock_factors(model: &GasModel, x: f64) -> Result<ShockFactors> {
    let a = 1.0 / model.alpha();
    let m = model.gamma() / model.alpha();
    let lx = x.ln();
    if m * lx > EXP_LIMIT || -a * lx > EXP_LIMIT {
        return Err(Error::Overflow { ratio: x });
    }
    Ok(ShockFactors {
        g: -(-a * lx).exp_m1(),
        h: (m * lx).exp_m1(),
        dg: a * (-(a + 1.0) * lx).exp(),
        dh: m * ((m - 1.0) * lx).exp(),
    })
}

/// Signed shock branch `sign(x-1)·√(g·h)`.
fn shock_value(model: &GasModel, x: f64) -> Result<f64> {
    let f = shock_factors(model, x)?;
    let v = f.g.abs().sqrt() * f.h.abs().sqrt();
    Ok(if x > 1.0 { v } else { -v })
}

fn shock_slope(model: &GasModel, x: f64) -> Result<f64> {
    let t = x - 1.0;
    if t.abs() <= SERIES_RADIUS {
        // φ = κ(t + (1/α + 1)² t³/24 + O(t⁴)) on both shock branches.
        let c = (1.0 / model.alpha() + 1.0).powi(2) / 8.0;
        return Ok(model.kappa() * (1.0 + c * t * t));
    }
    let f = shock_factors(model, x)?;
    let num = f.dg * f.h + f.g * f.dh;
    let den = 2.0 * f.g.abs().sqrt() * f.h.abs().sqrt();
    let v = num / den;
    Ok(if x > 1.0 { v } else { -v })
}

/// The auxiliary function φ← (backward) or φ→ (forward).
///
/// Fails with [`Error::Overflow`] once `x^(γ/α)` leaves double range, roughly
/// for `x > exp(708·α/γ)` (and symmetrically `x < exp(-708·α)` on the
/// forward shock branch).
pub fn phi(model: &GasModel, family: Family, x: f64) -> Result<f64> {
    check_ratio(x)?;
    if x == 1.0 {
        return Ok(0.0);
    }
    match kind_of(family, x) {
        WaveKind::Rarefaction => Ok(model.kappa() * (x - 1.0)),
        _ => shock_value(model, x),
    }
}

/// Exact derivative of [`phi`]; equals κ on the rarefaction branch and at 1.
pub fn phi_deriv(model: &GasModel, family: Family, x: f64) -> Result<f64> {
    check_ratio(x)?;
    match kind_of(family, x) {
        WaveKind::Rarefaction | WaveKind::Null => Ok(model.kappa()),
        WaveKind::Shock => shock_slope(model, x),
    }
}

/// φ←
pub fn phi_backward(model: &GasModel, x: f64) -> Result<f64> {
    phi(model, Family::Backward, x)
}

/// φ→
pub fn phi_forward(model: &GasModel, x: f64) -> Result<f64> {
    phi(model, Family::Forward, x)
}

/// State on the right of `wave` when `left` is on its left.
pub fn wave_right_state(model: &GasModel, left: State, wave: Wave) -> Result<State> {
    let q = wave.ratio();
    let xi = left.xi();
    let du = match wave.family() {
        Family::Backward => -phi_backward(model, q)? * xi,
        Family::Forward => phi_forward(model, q)? * xi,
    };
    Ok(State::new_unchecked(q * xi, left.u() + du))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m3() -> GasModel {
        GasModel::new(3.0).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn phi_examples() {
        let m = m3();
        assert!(rel(phi_backward(&m, 2.0).unwrap(), 3.5f64.sqrt()) < 1e-15);
        assert!(rel(phi_forward(&m, 0.5).unwrap(), -0.875f64.sqrt()) < 1e-15);
        assert!(
            rel(
                phi_forward(&m, 0.5).unwrap(),
                -0.5 * phi_backward(&m, 2.0).unwrap()
            ) < 1e-15
        );
        let m2 = GasModel::new(2.0).unwrap();
        assert!(rel(phi_backward(&m2, 2.0).unwrap(), 11.25f64.sqrt()) < 1e-14);
        for g in [1.4, 2.0, 3.0] {
            let m = GasModel::new(g).unwrap();
            assert_eq!(phi_backward(&m, 1.0).unwrap(), 0.0);
            assert_eq!(phi_forward(&m, 1.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn phi_rejects_bad_ratio() {
        let m = m3();
        for x in [0.0, -1.0, f64::NAN, f64::INFINITY] {
            assert!(matches!(
                phi(&m, Family::Backward, x),
                Err(Error::Domain(_))
            ));
            assert!(phi_deriv(&m, Family::Forward, x).is_err());
        }
    }

    #[test]
    fn phi_overflow_is_reported() {
        let m = m3();
        // γ/α = 3, threshold exp(236).
        assert!(phi_backward(&m, 1e100).unwrap().is_finite());
        assert!(matches!(
            phi_backward(&m, 1e103),
            Err(Error::Overflow { .. })
        ));
        assert!(phi_backward(&m, 1e60).unwrap().is_finite());
        // Rarefaction branch never overflows.
        assert!(phi_forward(&m, 1e200).unwrap().is_finite());
    }

    #[test]
    fn derivative_examples() {
        let m = m3();
        let k = 3f64.sqrt();
        assert!(rel(phi_deriv(&m, Family::Backward, 0.5).unwrap(), k) < 1e-15);
        assert!(rel(phi_deriv(&m, Family::Backward, 1.0 + 1e-9).unwrap(), k) < 1e-12);
        // g = 0.9, h = 999, g' = 0.01, h' = 300.
        let expect = (0.01 * 999.0 + 0.9 * 300.0) / (2.0 * (0.9f64 * 999.0).sqrt());
        assert!(rel(phi_deriv(&m, Family::Backward, 10.0).unwrap(), expect) < 1e-14);
        assert!((phi_deriv(&m, Family::Backward, 10.0).unwrap() - 4.66884).abs() < 1e-5);
    }

    #[test]
    fn derivative_continuous_across_series_switch() {
        for g in [1.4, 2.0, 3.0] {
            let m = GasModel::new(g).unwrap();
            for fam in [Family::Backward, Family::Forward] {
                for side in [-1.0, 1.0] {
                    let inside = phi_deriv(&m, fam, 1.0 + side * 0.999e-6).unwrap();
                    let outside = phi_deriv(&m, fam, 1.0 + side * 1.001e-6).unwrap();
                    assert!(rel(inside, outside) < 1e-9, "{g} {fam:?} {side}");
                }
            }
        }
    }

    #[test]
    fn derivative_matches_central_differences() {
        for g in [1.4, 2.0, 3.0] {
            let m = GasModel::new(g).unwrap();
            for fam in [Family::Backward, Family::Forward] {
                for &x in &[0.02, 0.1, 0.5, 0.9, 0.999, 1.001, 1.3, 2.0, 7.5, 40.0] {
                    let h = 1e-6 * x;
                    let fd =
                        (phi(&m, fam, x + h).unwrap() - phi(&m, fam, x - h).unwrap()) / (2.0 * h);
                    let d = phi_deriv(&m, fam, x).unwrap();
                    assert!(rel(d, fd) < 1e-6, "{g} {fam:?} x={x}: {d} vs {fd}");
                }
            }
        }
    }

    #[test]
    fn derivative_bounds_and_growth() {
        let m = GasModel::new(1.4).unwrap();
        let k = m.kappa();
        assert!(phi_deriv(&m, Family::Backward, 1.5).unwrap() > k);
        assert!(phi_deriv(&m, Family::Forward, 0.5).unwrap() > k);
        assert_eq!(phi_deriv(&m, Family::Forward, 1.5).unwrap(), k);
        assert!(phi_deriv(&m, Family::Backward, 1e3).unwrap() > 1e3 * k);
    }

    #[test]
    fn right_state_examples() {
        let m = m3();
        let left = State::new(1.0, 0.0).unwrap();
        let st = wave_right_state(&m, left, Wave::backward(2.0).unwrap()).unwrap();
        assert_eq!(st.xi(), 2.0);
        assert!((st.u() + 1.8708287).abs() < 1e-7);
        let st = wave_right_state(&m, left, Wave::forward(2.0).unwrap()).unwrap();
        assert!(rel(st.u(), 3f64.sqrt()) < 1e-15);
        let other = State::new(0.3, -4.0).unwrap();
        for w in [Wave::backward(1.0).unwrap(), Wave::forward(1.0).unwrap()] {
            assert_eq!(wave_right_state(&m, other, w).unwrap(), other);
        }
    }

    #[test]
    fn wave_kinds() {
        let b = |q| Wave::backward(q).unwrap().kind();
        let f = |q| Wave::forward(q).unwrap().kind();
        assert_eq!(b(0.5), WaveKind::Rarefaction);
        assert_eq!(b(2.0), WaveKind::Shock);
        assert_eq!(f(2.0), WaveKind::Rarefaction);
        assert_eq!(f(0.5), WaveKind::Shock);
        assert_eq!(b(1.0), WaveKind::Null);
        assert!(Wave::forward(0.0).is_err());
        let w = Wave::forward(0.25).unwrap().reflect();
        assert_eq!(w.family(), Family::Backward);
        assert_eq!(w.ratio(), 4.0);
        assert_eq!(w.kind(), WaveKind::Shock);
    }
}
