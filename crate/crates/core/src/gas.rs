//! The γ-law gas: constants, the state type and coordinate changes.
//!
//! States are stored as `(ξ, u)` with `ξ = τ^(-α) = ρ^α`. Specific volume,
//! density, pressure and the Riemann invariants `r = u - κξ`, `s = u + κξ`
//! are computed on demand.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest accepted distance of γ above 1; κ grows like 2/(γ-1).
const GAMMA_MARGIN: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GasModel {
    gamma: f64,
    alpha: f64,
    kappa: f64,
}

impl GasModel {
    pub fn new(gamma: f64) -> Result<Self> {
        if !gamma.is_finite() || gamma <= 1.0 + GAMMA_MARGIN {
            return Err(Error::Domain(format!(
                "adiabatic exponent must exceed 1, got {gamma}"
            )));
        }
        let alpha = 0.5 * (gamma - 1.0);
        Ok(Self {
            gamma,
            alpha,
            kappa: gamma.sqrt() / alpha,
        })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// α = (γ-1)/2.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// κ = √γ/α.
    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// Riemann invariants `(r, s)` of a state.
    pub fn invariants(&self, st: State) -> (f64, f64) {
        let k = self.kappa * st.xi;
        (st.u - k, st.u + k)
    }

    pub fn state_from_invariants(&self, r: f64, s: f64) -> Result<State> {
        if !(s > r) {
            return Err(Error::Domain(format!(
                "invariants must satisfy s > r (got r = {r}, s = {s})"
            )));
        }
        State::new((s - r) / (2.0 * self.kappa), 0.5 * (s + r))
    }

    /// Characteristic speeds `(λ-, λ+)` in Lagrangian coordinates.
    pub fn char_speeds(&self, st: State) -> (f64, f64) {
        let c = self.sound_speed(st);
        (-c, c)
    }

    /// `√γ ξ^((α+1)/α)`, the magnitude of both characteristic speeds.
    pub fn sound_speed(&self, st: State) -> f64 {
        self.gamma.sqrt() * st.xi.powf((self.alpha + 1.0) / self.alpha)
    }

    /// ξ at which the characteristic speed has magnitude `speed`.
    pub fn xi_at_speed(&self, speed: f64) -> f64 {
        (speed.abs() / self.gamma.sqrt()).powf(self.alpha / (self.alpha + 1.0))
    }

    pub fn tau(&self, st: State) -> f64 {
        st.xi.powf(-1.0 / self.alpha)
    }

    pub fn density(&self, st: State) -> f64 {
        st.xi.powf(1.0 / self.alpha)
    }

    /// p = τ^(-γ) = ξ^(γ/α).
    pub fn pressure(&self, st: State) -> f64 {
        st.xi.powf(self.gamma / self.alpha)
    }

    pub fn state_from_tau(&self, tau: f64, u: f64) -> Result<State> {
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(Error::Domain(format!(
                "specific volume must be positive, got {tau}"
            )));
        }
        State::new(tau.powf(-self.alpha), u)
    }
}

/// A no-vacuum gas state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct State {
    xi: f64,
    u: f64,
}

impl State {
    pub fn new(xi: f64, u: f64) -> Result<Self> {
        if !(xi > 0.0) || !xi.is_finite() || !u.is_finite() {
            return Err(Error::Domain(format!(
                "state requires finite xi > 0 and finite u (got xi = {xi}, u = {u})"
            )));
        }
        Ok(Self { xi, u })
    }

    /// Builds a state from values already known to be valid, such as
    /// positive multiples of a valid ξ.
    pub(crate) fn new_unchecked(xi: f64, u: f64) -> Self {
        debug_assert!(
            xi > 0.0 && xi.is_finite() && u.is_finite(),
            "xi = {xi}, u = {u}"
        );
        Self { xi, u }
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn u(&self) -> f64 {
        self.u
    }

    /// Mirror image under `X -> -X`, which maps the p-system to itself with
    /// `u -> -u` and exchanges the two wave families.
    pub fn reflect(&self) -> Self {
        Self {
            xi: self.xi,
            u: -self.u,
        }
    }
}
