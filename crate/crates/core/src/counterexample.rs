//! Explicit interactions across which a split field's variation increases.
//!
//! * Case 1: `θ' > M > ψ' + δ`. Two strong backward shocks `x = y` with
//!   `φ←(x) > κ(2M/δ - 1)(x - 1)`.
//! * Case 2: the mirror image, `ψ' > M > θ' + δ`, with two forward shocks.
//! * Case 3: `φ = θ(s) - θ(r)` with `θ'` bounded above and below. A backward
//!   rarefaction `x < 1` meets a strong backward shock `y` with
//!   `y - (φ←(y) + κ(y+1))/(φ←'(y) + κ) > (N_U + 2ε)/N_L`.
//!
//! In every case the left state has `ū` at the middle of the interval and a
//! `ξ̄` small enough that all invariants stay inside it.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Profile, ScalarField, SplitField};
use crate::gas::{GasModel, State};
use crate::interaction::{realize, InteractionKind, InteractionRealization};
use crate::tvd::{wave_jumps, WaveJumps};
use crate::wave::{phi_backward, phi_deriv, Family};

const INTEGER_SCAN_END: u64 = 4096;
const GEOMETRIC_STEP: f64 = 1.25;
const SCAN_CHUNK: usize = 64;
const MAX_CANDIDATES: usize = 1 << 16;
const MAX_HALVINGS: usize = 200;
const MARGIN: f64 = 0.01;
const GRID_POINTS: usize = 1001;
const X_REFINEMENTS: i32 = 60;
const IDENTITY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleConfig {
    /// Interval `J` (Cases 1, 2) or `I` (Case 3) for the invariants.
    pub interval: (f64, f64),
    pub m: f64,
    pub delta: f64,
    pub m_u: f64,
    pub n_l: f64,
    pub n_u: f64,
    pub epsilon: f64,
}

impl Default for CounterexampleConfig {
    fn default() -> Self {
        Self {
            interval: (-1.0, 1.0),
            m: 1.95,
            delta: 0.9,
            m_u: 0.0,
            n_l: 1.0,
            n_u: 1.0,
            epsilon: 0.5,
        }
    }
}

impl CounterexampleConfig {
    fn check_interval(&self) -> Result<()> {
        let (lo, hi) = self.interval;
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::Domain(format!(
                "interval must satisfy lo < hi, got ({lo}, {hi})"
            )));
        }
        Ok(())
    }

    fn check_gap(&self) -> Result<()> {
        self.check_interval()?;
        if !(self.delta > 0.0 && self.m > self.delta) {
            return Err(Error::Domain(format!(
                "need M > δ > 0, got M = {}, δ = {}",
                self.m, self.delta
            )));
        }
        Ok(())
    }

    fn check_bounds(&self) -> Result<()> {
        self.check_interval()?;
        if !(self.n_l > 0.0 && self.n_u >= self.n_l && self.m_u >= 0.0 && self.epsilon > 0.0) {
            return Err(Error::Domain(format!(
                "need N_U ≥ N_L > 0, M_U ≥ 0, ε > 0, got N_L = {}, N_U = {}, M_U = {}, ε = {}",
                self.n_l, self.n_u, self.m_u, self.epsilon
            )));
        }
        Ok(())
    }

    fn grid(&self) -> impl Iterator<Item = f64> {
        let (lo, hi) = self.interval;
        (0..GRID_POINTS).map(move |i| lo + (hi - lo) * i as f64 / (GRID_POINTS - 1) as f64)
    }
}

/// A realized interaction across which the field's variation increases.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub case: u8,
    pub x: f64,
    pub y: f64,
    pub xi_bar: f64,
    pub halvings: usize,
    pub realization: InteractionRealization,
    /// Jumps of the full field `φ` across each wave.
    pub jumps: WaveJumps,
    pub delta_var: f64,
    /// The lower bound the construction guarantees (`2Δ_Fθ`, `2Δ_Bψ`, or
    /// `-2Δ_Fφ + 2Δ_xφ`).
    pub bound: f64,
}

/// Scan values: the integers `2..=4096`, then a geometric sequence.
fn candidate(i: usize) -> f64 {
    let n = i as u64 + 2;
    if n <= INTEGER_SCAN_END {
        n as f64
    } else {
        INTEGER_SCAN_END as f64 * GEOMETRIC_STEP.powi((n - INTEGER_SCAN_END) as i32)
    }
}

/// First candidate satisfying `pred`, in scan order. Candidates are tested
/// in parallel chunks; the reduction keeps the scan order, so the result
/// does not depend on scheduling.
pub fn scan_first<P>(pred: P) -> Result<f64>
where
    P: Fn(f64) -> Result<bool> + Sync,
{
    let mut start = 0;
    while start < MAX_CANDIDATES {
        let results: Vec<(f64, Result<bool>)> = (start..start + SCAN_CHUNK)
            .into_par_iter()
            .map(|i| {
                let c = candidate(i);
                (c, pred(c))
            })
            .collect();
        for (c, r) in results {
            match r {
                Ok(true) => return Ok(c),
                Ok(false) => {}
                Err(Error::Overflow { .. }) => {
                    return Err(Error::Search(format!(
                        "wave curves overflow at ratio {c} before the inequality holds"
                    )))
                }
                Err(e) => return Err(e),
            }
        }
        start += SCAN_CHUNK;
    }
    Err(Error::Search("candidate budget exhausted".into()))
}

/// `φ←(x) > κ(2M/δ - 1)(x - 1)`.
pub fn case1_inequality(model: &GasModel, m: f64, delta: f64, x: f64) -> Result<bool> {
    Ok(phi_backward(model, x)? > model.kappa() * (2.0 * m / delta - 1.0) * (x - 1.0))
}

/// `y - (φ←(y) + κ(y+1))/(φ←'(y) + κ)`.
pub fn case3_margin(model: &GasModel, y: f64) -> Result<f64> {
    let k = model.kappa();
    Ok(
        y - (phi_backward(model, y)? + k * (y + 1.0))
            / (phi_deriv(model, Family::Backward, y)? + k),
    )
}

fn inside(model: &GasModel, rz: &InteractionRealization, (lo, hi): (f64, f64)) -> bool {
    let pad = MARGIN * (hi - lo);
    rz.states().iter().all(|st| {
        let (r, s) = model.invariants(*st);
        r > lo + pad && r < hi - pad && s > lo + pad && s < hi - pad
    })
}

/// Halves `ξ̄` until the realization fits the interval and `accept` holds.
fn shrink<A>(
    model: &GasModel,
    kind: InteractionKind,
    x: f64,
    y: f64,
    cfg: &CounterexampleConfig,
    x_max: f64,
    accept: A,
) -> Result<(f64, usize, InteractionRealization)>
where
    A: Fn(&InteractionRealization) -> bool,
{
    let (lo, hi) = cfg.interval;
    let u_bar = 0.5 * (lo + hi);
    let mut xi = (hi - lo) / (8.0 * model.kappa() * x_max);
    for halvings in 0..=MAX_HALVINGS {
        let rz = realize(model, kind, x, y, State::new(xi, u_bar)?)?;
        if inside(model, &rz, cfg.interval) && accept(&rz) {
            return Ok((xi, halvings, rz));
        }
        xi *= 0.5;
    }
    Err(Error::Search(format!(
        "no admissible ξ̄ after {MAX_HALVINGS} halvings (x = {x}, y = {y})"
    )))
}

fn check_gap_profiles(
    cfg: &CounterexampleConfig,
    big: &dyn Profile,
    small: &dyn Profile,
    names: (&str, &str),
) -> Result<()> {
    for v in cfg.grid() {
        let (db, ds) = (big.deriv(v), small.deriv(v));
        if !(db > cfg.m && cfg.m > ds + cfg.delta && ds >= 0.0) {
            return Err(Error::Precondition(format!(
                "need {}' > M > {}' + δ with both increasing; at v = {v}: {}' = {db}, {}' = {ds}",
                names.0, names.1, names.0, names.1
            )));
        }
    }
    Ok(())
}

/// Case 1: two backward shocks `x = y`.
pub fn find_case1(
    model: &GasModel,
    cfg: &CounterexampleConfig,
    theta: Arc<dyn Profile>,
    psi: Arc<dyn Profile>,
) -> Result<Witness> {
    cfg.check_gap()?;
    check_gap_profiles(cfg, theta.as_ref(), psi.as_ref(), ("θ", "ψ"))?;
    let x = scan_first(|x| case1_inequality(model, cfg.m, cfg.delta, x))?;
    let field = SplitField {
        theta: theta.clone(),
        psi,
    };
    let theta_field = SplitField::theta_only_arc(theta);
    let (xi_bar, halvings, rz) = shrink(model, InteractionKind::IIa, x, x, cfg, x * x, |_| true)?;
    let jumps = wave_jumps(model, &field, &rz);
    let bound = 2.0 * wave_jumps(model, &theta_field, &rz).forward;
    let dv = jumps.delta_var();
    if !(bound > 0.0 && dv >= bound - IDENTITY_TOL) {
        return Err(Error::Search(format!(
            "Δvar = {dv} does not exceed 2Δ_Fθ = {bound}"
        )));
    }
    Ok(Witness {
        case: 1,
        x,
        y: x,
        xi_bar,
        halvings,
        realization: rz,
        jumps,
        delta_var: dv,
        bound,
    })
}

/// Case 2: two forward shocks `x = y < 1`, the mirror image of Case 1.
pub fn find_case2(
    model: &GasModel,
    cfg: &CounterexampleConfig,
    theta: Arc<dyn Profile>,
    psi: Arc<dyn Profile>,
) -> Result<Witness> {
    cfg.check_gap()?;
    check_gap_profiles(cfg, psi.as_ref(), theta.as_ref(), ("ψ", "θ"))?;
    let k = scan_first(|k| case1_inequality(model, cfg.m, cfg.delta, k))?;
    let x = 1.0 / k;
    let field = SplitField {
        theta,
        psi: psi.clone(),
    };
    let psi_field = SplitField {
        theta: Arc::new(crate::field::Linear::new(0.0, 0.0)),
        psi,
    };
    let (xi_bar, halvings, rz) =
        shrink(model, InteractionKind::IIaPrime, x, x, cfg, 1.0, |_| true)?;
    let jumps = wave_jumps(model, &field, &rz);
    // ψ enters φ with a minus sign.
    let bound = -2.0 * wave_jumps(model, &psi_field, &rz).backward;
    let dv = jumps.delta_var();
    if !(bound > 0.0 && dv >= bound - IDENTITY_TOL) {
        return Err(Error::Search(format!(
            "Δvar = {dv} does not exceed 2Δ_Bψ = {bound}"
        )));
    }
    Ok(Witness {
        case: 2,
        x,
        y: x,
        xi_bar,
        halvings,
        realization: rz,
        jumps,
        delta_var: dv,
        bound,
    })
}

fn case3_signs(j: &WaveJumps) -> bool {
    j.first < 0.0 && j.second > 0.0 && j.backward > 0.0 && j.forward < j.first
}

/// Case 3: a backward rarefaction `x < 1` followed by a strong backward
/// shock `y`, for `φ = θ(s) - θ(r)`.
pub fn find_case3(
    model: &GasModel,
    cfg: &CounterexampleConfig,
    theta: Arc<dyn Profile>,
) -> Result<Witness> {
    cfg.check_bounds()?;
    for v in cfg.grid() {
        let (d, d2) = (theta.deriv(v), theta.second(v));
        if !(d >= cfg.n_l && d <= cfg.n_u && d2.abs() <= cfg.m_u) {
            return Err(Error::Precondition(format!(
                "need N_L ≤ θ' ≤ N_U and |θ''| ≤ M_U; at v = {v}: θ' = {d}, θ'' = {d2}"
            )));
        }
    }
    let target = (cfg.n_u + 2.0 * cfg.epsilon) / cfg.n_l;
    let y = scan_first(|y| Ok(case3_margin(model, y)? > target))?;

    let mut x = None;
    for k in 0..=X_REFINEMENTS {
        let cand = 1.0 - 0.5 / 2f64.powi(k);
        let (b, f) = crate::interaction::resolve(model, InteractionKind::IIc, cand, y)?;
        if b > 1.0 && cfg.n_l * b * (1.0 - f) > (cfg.n_u + cfg.epsilon) * (1.0 - cand) {
            x = Some(cand);
            break;
        }
    }
    let x = x.ok_or_else(|| Error::Search(format!("no x < 1 found with B > 1 for y = {y}")))?;

    let field = SplitField {
        theta: theta.clone(),
        psi: theta,
    };
    let (xi_bar, halvings, rz) = shrink(model, InteractionKind::IIc, x, y, cfg, x * y, |rz| {
        let j = wave_jumps(model, &field, rz);
        case3_signs(&j) && j.delta_var() > 0.0
    })?;
    let jumps = wave_jumps(model, &field, &rz);
    let dv = jumps.delta_var();
    let bound = -2.0 * jumps.forward + 2.0 * jumps.first;
    if (dv - bound).abs() > IDENTITY_TOL {
        return Err(Error::Search(format!(
            "identity Δvar = -2Δ_Fφ + 2Δ_xφ fails: {dv} vs {bound}"
        )));
    }
    Ok(Witness {
        case: 3,
        x,
        y,
        xi_bar,
        halvings,
        realization: rz,
        jumps,
        delta_var: dv,
        bound,
    })
}

/// `Δvar` of `field` on a witness, recomputed from the stored states.
pub fn recompute_delta_var(model: &GasModel, field: &dyn ScalarField, w: &Witness) -> f64 {
    crate::tvd::delta_var(model, field, &w.realization)
}
