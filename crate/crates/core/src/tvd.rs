//! Variation of a scalar field across interactions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Profile, ScalarField};
use crate::gas::{GasModel, State};
use crate::interaction::{realize, InteractionKind, InteractionRealization};
use crate::quadrature::{integrate, DEFAULT_BUDGET, DEFAULT_TOL};
use crate::roots::increasing_root;
use crate::wave::{phi, phi_backward, phi_deriv, phi_forward, Family, Wave};

/// Jumps of a field across the four waves of an interaction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveJumps {
    /// First incoming wave (left).
    pub first: f64,
    /// Second incoming wave (right).
    pub second: f64,
    /// Outgoing backward wave.
    pub backward: f64,
    /// Outgoing forward wave.
    pub forward: f64,
}

impl WaveJumps {
    pub fn delta_var(&self) -> f64 {
        (self.backward.abs() + self.forward.abs()) - (self.first.abs() + self.second.abs())
    }
}

pub fn wave_jumps(
    model: &GasModel,
    field: &dyn ScalarField,
    rz: &InteractionRealization,
) -> WaveJumps {
    let v = |st: State| field.at(model, st);
    let (l, m, r, mo) = (
        v(rz.far_left),
        v(rz.middle_in),
        v(rz.far_right),
        v(rz.middle_out),
    );
    WaveJumps {
        first: m - l,
        second: r - m,
        backward: mo - l,
        forward: r - mo,
    }
}

/// Total variation of `field` after the interaction minus before it.
pub fn delta_var(model: &GasModel, field: &dyn ScalarField, rz: &InteractionRealization) -> f64 {
    wave_jumps(model, field, rz).delta_var()
}

/// Which Riemann invariant a profile is composed with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Channel {
    R,
    S,
}

/// Change of `h(r)` (or `k(s)`) across `wave` from `left`, as an integral
/// along the wave curve.
pub fn wave_delta_quadrature(
    model: &GasModel,
    profile: &dyn Profile,
    channel: Channel,
    left: State,
    wave: Wave,
) -> Result<f64> {
    let q = wave.ratio();
    if q == 1.0 {
        return Ok(0.0);
    }
    let (xb, ub) = (left.xi(), left.u());
    let k = model.kappa();
    let family = wave.family();
    let sign = match family {
        Family::Backward => -1.0,
        Family::Forward => 1.0,
    };
    let integrand = |sig: f64| -> Result<f64> {
        let p = phi(model, family, sig)?;
        let dp = phi_deriv(model, family, sig)?;
        let u = ub + sign * p * xb;
        let (inv, slope) = match channel {
            Channel::R => (u - k * sig * xb, sign * dp - k),
            Channel::S => (u + k * sig * xb, sign * dp + k),
        };
        Ok(profile.deriv(inv) * slope * xb)
    };
    integrate(integrand, 1.0, q, DEFAULT_TOL, DEFAULT_BUDGET)
}

/// Change of `h(r)` or `k(s)` across a backward shock of ratio `x ≥ 1`.
pub fn shock_delta_quadrature(
    model: &GasModel,
    profile: &dyn Profile,
    channel: Channel,
    left: State,
    x: f64,
) -> Result<f64> {
    if !(x >= 1.0) || !x.is_finite() {
        return Err(Error::Domain(format!(
            "backward shock ratio must be at least 1, got {x}"
        )));
    }
    wave_delta_quadrature(model, profile, channel, left, Wave::backward(x)?)
}

/// Derivatives of a field in Riemann coordinates:
/// `A = ∂sφ`, `B = ∂²rsφ`, `C = ∂²ssφ`, `D = ∂rφ`, `E = ∂²rrφ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpansionCoefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
}

pub fn expansion_coefficients(
    model: &GasModel,
    field: &dyn ScalarField,
    at: State,
) -> ExpansionCoefficients {
    let (r, s) = model.invariants(at);
    let (fr, fs) = field.gradient(r, s);
    let (frr, frs, fss) = field.hessian(r, s);
    ExpansionCoefficients {
        a: fs,
        b: frs,
        c: fss,
        d: fr,
        e: frr,
    }
}

/// Sign configuration of a weak head-on interaction, from `Δs·A` and `Δr·D`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SignCase {
    /// Both positive.
    I,
    /// Both negative.
    II,
    /// `Δs·A < 0 < Δr·D`.
    III,
    /// `Δr·D < 0 < Δs·A`.
    IV,
}

impl SignCase {
    pub fn of(coeffs: &ExpansionCoefficients, dr: f64, ds: f64) -> SignCase {
        let beta_a = ds * coeffs.a;
        let alpha_d = dr * coeffs.d;
        match (beta_a > 0.0, alpha_d > 0.0) {
            (true, true) => SignCase::I,
            (false, false) => SignCase::II,
            (false, true) => SignCase::III,
            (true, false) => SignCase::IV,
        }
    }

    /// Leading-order prediction for `Δvar`.
    pub fn predicted(self, coeffs: &ExpansionCoefficients, dr: f64, ds: f64) -> f64 {
        match self {
            SignCase::I | SignCase::II => 0.0,
            SignCase::III => -2.0 * dr * ds * coeffs.b,
            SignCase::IV => 2.0 * dr * ds * coeffs.b,
        }
    }
}

/// Head-on interaction from `base` whose forward wave raises `s` by `ds` and
/// whose backward wave then raises `r` by `dr`.
pub fn head_on_from_increments(
    model: &GasModel,
    base: State,
    dr: f64,
    ds: f64,
) -> Result<InteractionRealization> {
    let k = model.kappa();
    let xb = base.xi();
    let f = if ds == 0.0 {
        1.0
    } else {
        let target = ds / xb;
        increasing_root(
            |q| Ok(phi_forward(model, q)? + k * (q - 1.0) - target),
            |q| Ok(phi_deriv(model, Family::Forward, q)? + k),
            1.0,
        )?
    };
    let x0 = f * xb;
    let b = if dr == 0.0 {
        1.0
    } else {
        let target = -dr / x0;
        if target <= -2.0 * k {
            return Err(Error::Domain(format!(
                "Δr = {dr} exceeds the largest backward rarefaction 2κξ = {}",
                2.0 * k * x0
            )));
        }
        increasing_root(
            |q| Ok(phi_backward(model, q)? + k * (q - 1.0) - target),
            |q| Ok(phi_deriv(model, Family::Backward, q)? + k),
            1.0,
        )?
    };
    let kind = match (b > 1.0, f < 1.0) {
        (false, false) => InteractionKind::Ia,
        (true, false) => InteractionKind::Ib,
        (false, true) => InteractionKind::IbPrime,
        (true, true) => InteractionKind::Ic,
    };
    realize(model, kind, b, f, base)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeakExpansion {
    pub case: SignCase,
    pub coefficients: ExpansionCoefficients,
    pub measured: f64,
    pub predicted: f64,
    pub realization: InteractionRealization,
}

/// Measures `Δvar` on a weak head-on interaction with invariant increments
/// `(dr, ds)` and compares it with the leading term of its expansion.
pub fn weak_expansion_check(
    model: &GasModel,
    field: &dyn ScalarField,
    base: State,
    dr: f64,
    ds: f64,
) -> Result<WeakExpansion> {
    let coefficients = expansion_coefficients(model, field, base);
    if coefficients.a == 0.0 || coefficients.d == 0.0 {
        return Err(Error::Degenerate(format!(
            "∂sφ = {} and ∂rφ = {} must both be nonzero",
            coefficients.a, coefficients.d
        )));
    }
    if dr == 0.0 || ds == 0.0 {
        return Err(Error::Domain("both increments must be nonzero".into()));
    }
    let realization = head_on_from_increments(model, base, dr, ds)?;
    let case = SignCase::of(&coefficients, dr, ds);
    Ok(WeakExpansion {
        case,
        coefficients,
        measured: delta_var(model, field, &realization),
        predicted: case.predicted(&coefficients, dr, ds),
        realization,
    })
}
