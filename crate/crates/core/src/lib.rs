//! Numerical laboratory for the isentropic p-system with a γ-law pressure.
//!
//! States are carried in `(ξ, u)` coordinates with `ξ = τ^(-α)`; wave
//! strengths are ξ-ratios across a wave.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod counterexample;
pub mod error;
pub mod expr;
pub mod field;
pub mod gas;
pub mod glimm;
pub mod interaction;
pub mod quadrature;
pub mod riemann;
pub mod roots;
pub mod sequence;
pub mod tvd;
pub mod wave;

pub use counterexample::{find_case1, find_case2, find_case3, CounterexampleConfig, Witness};
pub use error::{Error, Result};
pub use field::{parse_field, ExprField, ExprProfile, Linear, Profile, ScalarField, SplitField};
pub use gas::{GasModel, State};
pub use glimm::{init_simulation, run, FunctionalSample, FunctionalTrace, GridSolution};
pub use interaction::{
    classify_outcome, realize, resolve, resolve_head_on, resolve_overtaking, InteractionKind,
    InteractionRealization,
};
pub use riemann::{sample_fan, solve_riemann, FanSpeeds, RiemannFan, RiemannOutcome};
pub use sequence::SequenceKind;
pub use tvd::{
    delta_var, expansion_coefficients, shock_delta_quadrature, wave_jumps, weak_expansion_check,
    Channel, ExpansionCoefficients, SignCase, WaveJumps, WeakExpansion,
};
pub use wave::{kind_of, phi, phi_deriv, wave_right_state, Family, Wave, WaveKind};
