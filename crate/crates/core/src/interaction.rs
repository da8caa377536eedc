//! Pairwise wave interactions.
//!
//! Two colliding waves are replaced by the solution of the Riemann problem
//! between the extreme states. The outgoing ratios `(B, F)` depend only on the
//! incoming ratios, never on the far-left state, and always satisfy
//! `B·F = (product of incoming ratios)`.
//!
//! Argument conventions: head-on kinds take `q1 = b` (the backward wave, on
//! the right) and `q2 = f` (the forward wave, on the left). Overtaking kinds
//! take `q1 = x` (left wave) and `q2 = y` (right wave).

use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gas::{GasModel, State};
use crate::riemann::solve_strength;
use crate::wave::{kind_of, phi_backward, phi_forward, wave_right_state, Family, Wave, WaveKind};

/// Interaction types, named by their incoming waves in spatial order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum InteractionKind {
    /// R→ R←
    Ia,
    /// R→ S←
    Ib,
    /// S→ R←
    #[serde(rename = "Ib'")]
    IbPrime,
    /// S→ S←
    Ic,
    /// S← S←
    IIa,
    /// S← R←
    IIb,
    /// R← S←
    IIc,
    /// S→ S→
    #[serde(rename = "IIa'")]
    IIaPrime,
    /// R→ S→
    #[serde(rename = "IIb'")]
    IIbPrime,
    /// S→ R→
    #[serde(rename = "IIc'")]
    IIcPrime,
}

/// How the incoming pair is laid out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Geometry {
    HeadOn,
    BackwardPair,
    ForwardPair,
}

impl InteractionKind {
    pub const ALL: [InteractionKind; 10] = [
        InteractionKind::Ia,
        InteractionKind::Ib,
        InteractionKind::IbPrime,
        InteractionKind::Ic,
        InteractionKind::IIa,
        InteractionKind::IIb,
        InteractionKind::IIc,
        InteractionKind::IIaPrime,
        InteractionKind::IIbPrime,
        InteractionKind::IIcPrime,
    ];

    pub fn label(self) -> &'static str {
        use InteractionKind::*;
        match self {
            Ia => "Ia",
            Ib => "Ib",
            IbPrime => "Ib'",
            Ic => "Ic",
            IIa => "IIa",
            IIb => "IIb",
            IIc => "IIc",
            IIaPrime => "IIa'",
            IIbPrime => "IIb'",
            IIcPrime => "IIc'",
        }
    }

    pub fn geometry(self) -> Geometry {
        use InteractionKind::*;
        match self {
            Ia | Ib | IbPrime | Ic => Geometry::HeadOn,
            IIa | IIb | IIc => Geometry::BackwardPair,
            IIaPrime | IIbPrime | IIcPrime => Geometry::ForwardPair,
        }
    }

    /// Incoming wave kinds as `(q1, q2)`.
    pub fn incoming_kinds(self) -> (WaveKind, WaveKind) {
        use InteractionKind::*;
        use WaveKind::{Rarefaction as R, Shock as S};
        match self {
            Ia => (R, R),
            Ib => (S, R),
            IbPrime => (R, S),
            Ic => (S, S),
            IIa => (S, S),
            IIb => (S, R),
            IIc => (R, S),
            IIaPrime => (S, S),
            IIbPrime => (R, S),
            IIcPrime => (S, R),
        }
    }

    /// Families of `(q1, q2)`.
    pub fn incoming_families(self) -> (Family, Family) {
        match self.geometry() {
            Geometry::HeadOn => (Family::Backward, Family::Forward),
            Geometry::BackwardPair => (Family::Backward, Family::Backward),
            Geometry::ForwardPair => (Family::Forward, Family::Forward),
        }
    }

    /// Checks that `(q1, q2)` are waves of the kinds this label names.
    /// Ratios equal to 1 (null waves) are accepted in either slot.
    pub fn check_strengths(self, q1: f64, q2: f64) -> Result<()> {
        let (f1, f2) = self.incoming_families();
        let (k1, k2) = self.incoming_kinds();
        for (q, fam, want) in [(q1, f1, k1), (q2, f2, k2)] {
            if !(q > 0.0) || !q.is_finite() {
                return Err(Error::Domain(format!(
                    "ratio must be finite and positive, got {q}"
                )));
            }
            let got = kind_of(fam, q);
            if got != want && got != WaveKind::Null {
                return Err(Error::Domain(format!(
                    "{} expects a {:?} {:?} wave, ratio {q} gives {:?}",
                    self.label(),
                    fam,
                    want,
                    got
                )));
            }
        }
        Ok(())
    }

    /// Outgoing labels compatible with this kind.
    pub fn allowed_outcomes(self) -> &'static [&'static str] {
        use InteractionKind::*;
        match self {
            Ia => &["R<-R->"],
            Ib | IIa => &["S<-R->"],
            IbPrime | IIaPrime => &["R<-S->"],
            Ic => &["S<-S->"],
            IIb | IIc => &["S<-S->", "R<-S->"],
            IIbPrime | IIcPrime => &["S<-S->", "S<-R->"],
        }
    }
}

impl fmt::Display for InteractionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for InteractionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().replace('′', "'");
        InteractionKind::ALL
            .into_iter()
            .find(|k| k.label() == t)
            .ok_or_else(|| Error::Domain(format!("unknown interaction kind '{s}'")))
    }
}

/// Label such as `S<-R->` for an outgoing pair.
pub fn pattern_label(backward_ratio: f64, forward_ratio: f64) -> String {
    format!(
        "{}<-{}->",
        kind_of(Family::Backward, backward_ratio).letter(),
        kind_of(Family::Forward, forward_ratio).letter()
    )
}

/// Outgoing `(B, F)` for a forward wave `f` meeting a backward wave `b`.
pub fn resolve_head_on(model: &GasModel, b: f64, f: f64) -> Result<(f64, f64)> {
    if b == 1.0 {
        return Ok((1.0, f));
    }
    if f == 1.0 {
        return Ok((b, 1.0));
    }
    let p = b * f;
    let t = f * phi_backward(model, b)? - phi_forward(model, f)?;
    let big_b = solve_strength(model, p, t).map_err(|e| match e {
        Error::Vacuum(_) => Error::Vacuum(format!(
            "head-on interaction b = {b}, f = {f} opens a vacuum"
        )),
        e => e,
    })?;
    Ok((big_b, p / big_b))
}

/// Outgoing `(B, F)` when a backward wave `x` overtakes a backward wave `y`.
pub fn resolve_overtaking(model: &GasModel, x: f64, y: f64) -> Result<(f64, f64)> {
    if y == 1.0 {
        return Ok((x, 1.0));
    }
    if x == 1.0 {
        return Ok((y, 1.0));
    }
    let p = x * y;
    let t = phi_backward(model, x)? + x * phi_backward(model, y)?;
    debug_assert!(model.kappa() * (1.0 + p) + t > 0.0);
    let big_b = solve_strength(model, p, t).map_err(|e| match e {
        Error::Vacuum(m) => Error::Convergence(format!("overtaking reported vacuum: {m}")),
        e => e,
    })?;
    Ok((big_b, p / big_b))
}

/// Outgoing `(B, F)` when a forward wave `x` overtakes a forward wave `y`,
/// through the mirror image `X -> -X` of a backward pair.
pub fn resolve_forward_overtaking(model: &GasModel, x: f64, y: f64) -> Result<(f64, f64)> {
    let (bm, fm) = resolve_overtaking(model, 1.0 / y, 1.0 / x)?;
    Ok((1.0 / fm, 1.0 / bm))
}

/// Same as [`resolve_forward_overtaking`], solving the forward-pair equation
/// `φ←(B) + xy·φ←(B/(xy)) = -φ→(x) - x·φ→(y)` without reflection.
pub fn resolve_forward_overtaking_direct(model: &GasModel, x: f64, y: f64) -> Result<(f64, f64)> {
    let p = x * y;
    let t = -phi_forward(model, x)? - x * phi_forward(model, y)?;
    let big_b = solve_strength(model, p, t)?;
    Ok((big_b, p / big_b))
}

/// Outgoing `(B, F)` for an interaction of the given kind.
pub fn resolve(model: &GasModel, kind: InteractionKind, q1: f64, q2: f64) -> Result<(f64, f64)> {
    kind.check_strengths(q1, q2)?;
    match kind {
        InteractionKind::Ia => {
            if q1 + 1.0 / q2 <= 1.0 {
                return Err(Error::Vacuum(format!(
                    "rarefactions b = {q1}, f = {q2} satisfy b + 1/f <= 1"
                )));
            }
            resolve_head_on(model, q1, q2)
        }
        InteractionKind::IbPrime => {
            let (bm, fm) = resolve_head_on(model, 1.0 / q2, 1.0 / q1)?;
            Ok((1.0 / fm, 1.0 / bm))
        }
        _ => match kind.geometry() {
            Geometry::HeadOn => resolve_head_on(model, q1, q2),
            Geometry::BackwardPair => resolve_overtaking(model, q1, q2),
            Geometry::ForwardPair => resolve_forward_overtaking(model, q1, q2),
        },
    }
}

/// Outgoing pattern label, e.g. `S<-R->`.
pub fn classify_outcome(
    model: &GasModel,
    kind: InteractionKind,
    q1: f64,
    q2: f64,
) -> Result<String> {
    let (b, f) = resolve(model, kind, q1, q2)?;
    Ok(pattern_label(b, f))
}

/// Every state and wave of one interaction.
///
/// Before: `far_left | incoming.0 | middle_in | incoming.1 | far_right`.
/// After: `far_left | outgoing.0 (backward) | middle_out | outgoing.1 (forward) | far_right`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InteractionRealization {
    pub kind: InteractionKind,
    pub far_left: State,
    pub incoming: (Wave, Wave),
    pub middle_in: State,
    pub outgoing: (Wave, Wave),
    pub middle_out: State,
    pub far_right: State,
    /// `far_right` recomputed along the outgoing waves.
    pub far_right_outgoing: State,
}

impl InteractionRealization {
    /// The five states in the order far-left, middle-in, far-right,
    /// middle-out, far-right (outgoing path).
    pub fn states(&self) -> [State; 5] {
        [
            self.far_left,
            self.middle_in,
            self.far_right,
            self.middle_out,
            self.far_right_outgoing,
        ]
    }

    /// Distance between the two routes to the far-right state.
    pub fn closure_residual(&self) -> f64 {
        let du = (self.far_right.u() - self.far_right_outgoing.u()).abs();
        let dxi = (self.far_right.xi() - self.far_right_outgoing.xi()).abs();
        du.max(dxi)
    }

    pub fn outgoing_ratios(&self) -> (f64, f64) {
        (self.outgoing.0.ratio(), self.outgoing.1.ratio())
    }

    pub fn outcome_label(&self) -> String {
        let (b, f) = self.outgoing_ratios();
        pattern_label(b, f)
    }

    /// The same interaction seen in the mirror frame `X -> -X`.
    pub fn reflect(&self) -> InteractionRealization {
        let mirrored_kind = mirror_kind(self.kind);
        InteractionRealization {
            kind: mirrored_kind,
            far_left: self.far_right.reflect(),
            incoming: (self.incoming.1.reflect(), self.incoming.0.reflect()),
            middle_in: self.middle_in.reflect(),
            outgoing: (self.outgoing.1.reflect(), self.outgoing.0.reflect()),
            middle_out: self.middle_out.reflect(),
            far_right: self.far_left.reflect(),
            far_right_outgoing: self.far_left.reflect(),
        }
    }
}

fn mirror_kind(kind: InteractionKind) -> InteractionKind {
    use InteractionKind::*;
    match kind {
        Ia => Ia,
        Ib => IbPrime,
        IbPrime => Ib,
        Ic => Ic,
        IIa => IIaPrime,
        IIb => IIbPrime,
        IIc => IIcPrime,
        IIaPrime => IIa,
        IIbPrime => IIb,
        IIcPrime => IIc,
    }
}

const CLOSURE_TOL: f64 = 1e-10;

/// Builds the full state diagram of an interaction starting from `far_left`.
pub fn realize(
    model: &GasModel,
    kind: InteractionKind,
    q1: f64,
    q2: f64,
    far_left: State,
) -> Result<InteractionRealization> {
    let (big_b, big_f) = resolve(model, kind, q1, q2)?;
    let incoming = match kind.geometry() {
        Geometry::HeadOn => (Wave::forward(q2)?, Wave::backward(q1)?),
        Geometry::BackwardPair => (Wave::backward(q1)?, Wave::backward(q2)?),
        Geometry::ForwardPair => (Wave::forward(q1)?, Wave::forward(q2)?),
    };
    let middle_in = wave_right_state(model, far_left, incoming.0)?;
    let far_right = wave_right_state(model, middle_in, incoming.1)?;
    let outgoing = (Wave::backward(big_b)?, Wave::forward(big_f)?);
    let middle_out = wave_right_state(model, far_left, outgoing.0)?;
    let far_right_outgoing = wave_right_state(model, middle_out, outgoing.1)?;
    let rz = InteractionRealization {
        kind,
        far_left,
        incoming,
        middle_in,
        outgoing,
        middle_out,
        far_right,
        far_right_outgoing,
    };
    let scale = far_right.xi().max(far_right.u().abs()).max(1.0);
    if rz.closure_residual() > CLOSURE_TOL * scale {
        return Err(Error::Convergence(format!(
            "incoming and outgoing paths disagree by {:e}",
            rz.closure_residual()
        )));
    }
    Ok(rz)
}
