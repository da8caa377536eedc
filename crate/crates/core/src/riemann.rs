//! Exact Riemann solver and self-similar sampling of its fan.
//!
//! A left state `(ξ̄, ū)` and a right state `(ξ, u)` are joined by a backward
//! wave of ratio `b` followed by a forward wave of ratio `f = ξ/(bξ̄)`, where
//! `b` is the root of
//!
//! ```text
//! ξ̄·φ←(b) + ξ·φ←(b ξ̄/ξ) = ū - u.
//! ```
//!
//! The left-hand side increases strictly from `-κ(ξ + ξ̄)` to `+∞`, so a
//! solution without vacuum exists exactly when `u - ū < κ(ξ + ξ̄)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gas::{GasModel, State};
use crate::roots::increasing_root;
use crate::wave::{phi_backward, phi_deriv, wave_right_state, Family, Wave, WaveKind};

/// Root `B` of `φ←(B) + P·φ←(B/P) = T`.
///
/// Every strength equation in the crate reduces to this form. The left side
/// is increasing in `B` with infimum `-κ(1 + P)`.
pub(crate) fn solve_strength(model: &GasModel, p: f64, t: f64) -> Result<f64> {
    if !(p > 0.0) || !p.is_finite() || !t.is_finite() {
        return Err(Error::Domain(format!(
            "bad strength equation data P = {p}, T = {t}"
        )));
    }
    if t <= -model.kappa() * (1.0 + p) {
        return Err(Error::Vacuum(format!(
            "target {t} is not above -κ(1 + P) = {}",
            -model.kappa() * (1.0 + p)
        )));
    }
    let f = |b: f64| Ok(phi_backward(model, b)? + p * phi_backward(model, b / p)? - t);
    let df = |b: f64| {
        Ok(phi_deriv(model, Family::Backward, b)? + phi_deriv(model, Family::Backward, b / p)?)
    };
    increasing_root(f, df, 1.0)
}

/// Magnitude of the Rankine–Hugoniot speed of a jump from `xi` to `q·xi`,
/// `√(-[p]/[τ])`.
///
/// Written as `ξ^((α+1)/α)·√(expm1(γ/α·ln q) / -expm1(-ln q/α))` so that weak
/// jumps tend to the sound speed without cancellation.
pub fn jump_speed(model: &GasModel, xi: f64, q: f64) -> f64 {
    let a = model.alpha();
    let scale = xi.powf((a + 1.0) / a);
    if q == 1.0 {
        return model.gamma().sqrt() * scale;
    }
    let lq = q.ln();
    let num = (model.gamma() / a * lq).exp_m1();
    let den = -(-lq / a).exp_m1();
    scale * (num / den).sqrt()
}

/// Solution of one Riemann problem without vacuum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiemannFan {
    pub left: State,
    pub middle: State,
    pub right: State,
    pub backward: Wave,
    pub forward: Wave,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum RiemannOutcome {
    Fan(RiemannFan),
    Vacuum,
}

impl RiemannOutcome {
    pub fn fan(self) -> Option<RiemannFan> {
        match self {
            RiemannOutcome::Fan(f) => Some(f),
            RiemannOutcome::Vacuum => None,
        }
    }

    pub fn is_vacuum(&self) -> bool {
        matches!(self, RiemannOutcome::Vacuum)
    }
}

/// Speeds bounding the two waves of a fan: `[b_lo, b_hi]` for the backward
/// wave, `[f_lo, f_hi]` for the forward one. Shocks have `lo == hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FanSpeeds {
    pub backward: (f64, f64),
    pub forward: (f64, f64),
}

impl FanSpeeds {
    pub fn max_abs(&self) -> f64 {
        [
            self.backward.0,
            self.backward.1,
            self.forward.0,
            self.forward.1,
        ]
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

impl RiemannFan {
    pub fn speeds(&self, model: &GasModel) -> FanSpeeds {
        let backward = match self.backward.kind() {
            WaveKind::Rarefaction => (
                -model.sound_speed(self.left),
                -model.sound_speed(self.middle),
            ),
            _ => {
                let s = -jump_speed(model, self.left.xi(), self.backward.ratio());
                (s, s)
            }
        };
        let forward = match self.forward.kind() {
            WaveKind::Rarefaction => (
                model.sound_speed(self.middle),
                model.sound_speed(self.right),
            ),
            _ => {
                let s = jump_speed(model, self.middle.xi(), self.forward.ratio());
                (s, s)
            }
        };
        FanSpeeds { backward, forward }
    }

    /// State of the self-similar solution at `X/t = sigma`.
    pub fn sample(&self, model: &GasModel, sigma: f64) -> State {
        let sp = self.speeds(model);
        let k = model.kappa();
        if sigma < sp.backward.0 {
            return self.left;
        }
        if sigma < sp.backward.1 {
            // Inside a backward rarefaction; s is carried over from the left.
            let (_, s) = model.invariants(self.left);
            let xi = model.xi_at_speed(sigma);
            return State::new_unchecked(xi, s - k * xi);
        }
        if sigma < sp.forward.0 {
            return self.middle;
        }
        if sigma < sp.forward.1 {
            let (r, _) = model.invariants(self.middle);
            let xi = model.xi_at_speed(sigma);
            return State::new_unchecked(xi, r + k * xi);
        }
        self.right
    }
}

/// Solves the Riemann problem between `left` and `right`.
///
/// Equality in the vacuum criterion counts as vacuum.
pub fn solve_riemann(model: &GasModel, left: State, right: State) -> Result<RiemannOutcome> {
    let (xl, ul) = (left.xi(), left.u());
    let (xr, ur) = (right.xi(), right.u());
    if ur - ul >= model.kappa() * (xr + xl) {
        return Ok(RiemannOutcome::Vacuum);
    }
    let b = if left == right {
        1.0
    } else {
        match solve_strength(model, xr / xl, (ul - ur) / xl) {
            Ok(b) => b,
            Err(Error::Vacuum(_)) => return Ok(RiemannOutcome::Vacuum),
            Err(e) => return Err(e),
        }
    };
    let backward = Wave::backward(b)?;
    let middle = wave_right_state(model, left, backward)?;
    let forward = Wave::forward(xr / (b * xl))?;
    Ok(RiemannOutcome::Fan(RiemannFan {
        left,
        middle,
        right,
        backward,
        forward,
    }))
}

/// Convenience wrapper around [`RiemannFan::sample`].
pub fn sample_fan(model: &GasModel, fan: &RiemannFan, sigma: f64) -> State {
    fan.sample(model, sigma)
}
