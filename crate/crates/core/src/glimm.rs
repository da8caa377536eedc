//! Glimm's random-choice scheme on a staggered grid with outflow boundaries.
//!
//! Each step solves the Riemann problem at every interface (edge cells are
//! paired with a copy of themselves), picks one sample point per interface,
//! and moves the grid by half a cell. Odd steps shift right, even steps back,
//! so the number of cells never changes.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::gas::{GasModel, State};
use crate::riemann::{solve_riemann, RiemannFan, RiemannOutcome};
use crate::sequence::{Sampler, SequenceKind};
use crate::wave::WaveKind;

pub const CFL: f64 = 0.9;
const PARALLEL_THRESHOLD: usize = 512;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSolution {
    pub model: GasModel,
    pub cells: Vec<State>,
    pub dx: f64,
    /// Left end of the domain at `t = 0`.
    pub x_lo: f64,
    pub time: f64,
    pub steps: u64,
    /// Whether cell centers currently sit half a cell to the right.
    pub shifted: bool,
}

impl GridSolution {
    /// Position of the left edge of cell 0.
    pub fn left_edge(&self) -> f64 {
        self.x_lo + if self.shifted { 0.5 * self.dx } else { 0.0 }
    }

    pub fn center(&self, j: usize) -> f64 {
        self.left_edge() + (j as f64 + 0.5) * self.dx
    }

    /// `Σ τ dx` and `Σ u dx`.
    pub fn totals(&self) -> (f64, f64) {
        self.cells.iter().fold((0.0, 0.0), |(t, u), st| {
            (t + self.model.tau(*st) * self.dx, u + st.u() * self.dx)
        })
    }

    /// Riemann problems between neighbours, including the two outflow
    /// interfaces that the next step needs (one of them is unused).
    fn pairs(&self) -> Vec<(State, State)> {
        let n = self.cells.len();
        let mut out = Vec::with_capacity(n + 1);
        out.push((self.cells[0], self.cells[0]));
        for j in 0..n - 1 {
            out.push((self.cells[j], self.cells[j + 1]));
        }
        out.push((self.cells[n - 1], self.cells[n - 1]));
        out
    }

    /// Fans at all `n + 1` interfaces, the two outer ones joining an edge
    /// cell to its ghost copy.
    pub fn all_fans(&self) -> Result<Vec<RiemannFan>> {
        solve_all(&self.model, &self.pairs(), self.time, 0)
    }

    /// Fans at the `n - 1` interior interfaces, in order.
    pub fn interface_fans(&self) -> Result<Vec<RiemannFan>> {
        let pairs = &self.pairs()[1..self.cells.len()];
        solve_all(&self.model, pairs, self.time, 1)
    }

    /// One step using sample `theta ∈ [0, 1)`, never passing `t_max`.
    pub fn advance_to(&self, theta: f64, t_max: f64) -> Result<GridSolution> {
        let fans = self.all_fans()?;
        self.advance_with(&fans, theta, t_max)
    }

    /// One unrestricted step.
    pub fn advance(&self, theta: f64) -> Result<GridSolution> {
        self.advance_to(theta, f64::INFINITY)
    }

    /// Step from precomputed [`all_fans`](Self::all_fans).
    fn advance_with(&self, all: &[RiemannFan], theta: f64, t_max: f64) -> Result<GridSolution> {
        if !(0.0..1.0).contains(&theta) {
            return Err(Error::Domain(format!(
                "sample must lie in [0, 1), got {theta}"
            )));
        }
        let n = self.cells.len();
        // Unshifted grids move right and use interfaces 1..=n;
        // shifted grids move left and use 0..n.
        let fans = if self.shifted {
            &all[0..n]
        } else {
            &all[1..n + 1]
        };
        let smax = fans
            .iter()
            .map(|f| f.speeds(&self.model).max_abs())
            .fold(0.0f64, f64::max);
        let mut dt = CFL * self.dx / (2.0 * smax);
        let mut time = self.time + dt;
        if time >= t_max {
            dt = (t_max - self.time).max(0.0);
            time = t_max;
        }
        assert!(dt * smax <= 0.5 * self.dx * (1.0 + 1e-12), "CFL violated");
        let cells = if dt == 0.0 {
            fans.iter()
                .map(|f| if theta < 0.5 { f.left } else { f.right })
                .collect()
        } else {
            let sigma = (theta - 0.5) * self.dx / dt;
            fans.iter().map(|f| f.sample(&self.model, sigma)).collect()
        };
        Ok(GridSolution {
            model: self.model,
            cells,
            dx: self.dx,
            x_lo: self.x_lo,
            time,
            steps: self.steps + 1,
            shifted: !self.shifted,
        })
    }
}

fn solve_all(
    model: &GasModel,
    pairs: &[(State, State)],
    time: f64,
    offset: usize,
) -> Result<Vec<RiemannFan>> {
    let solve = |(i, (l, r)): (usize, &(State, State))| -> Result<RiemannFan> {
        match solve_riemann(model, *l, *r)? {
            RiemannOutcome::Fan(f) => Ok(f),
            RiemannOutcome::Vacuum => Err(Error::VacuumEncountered {
                interface: i + offset,
                time,
            }),
        }
    };
    if pairs.len() >= PARALLEL_THRESHOLD {
        pairs.par_iter().enumerate().map(solve).collect()
    } else {
        pairs.iter().enumerate().map(solve).collect()
    }
}

/// Projects piecewise-constant initial data `(X, τ, u)` onto `cells` cells
/// of `[x_lo, x_hi]`. Row `k` holds from its `X` up to the next row's `X`;
/// the first row also covers everything to its left.
pub fn init_simulation(
    model: &GasModel,
    ic: &[(f64, f64, f64)],
    cells: usize,
    domain: (f64, f64),
) -> Result<GridSolution> {
    let (x_lo, x_hi) = domain;
    if cells < 2 {
        return Err(Error::Domain(format!("need at least 2 cells, got {cells}")));
    }
    if !(x_lo < x_hi) || !x_lo.is_finite() || !x_hi.is_finite() {
        return Err(Error::Domain(format!("bad domain ({x_lo}, {x_hi})")));
    }
    if ic.is_empty() {
        return Err(Error::Domain("initial data has no rows".into()));
    }
    if ic.windows(2).any(|w| !(w[0].0 < w[1].0)) {
        return Err(Error::Domain(
            "initial data rows must be strictly sorted by X".into(),
        ));
    }
    let plateaus: Vec<State> = ic
        .iter()
        .map(|&(_, tau, u)| model.state_from_tau(tau, u))
        .collect::<Result<_>>()?;
    let dx = (x_hi - x_lo) / cells as f64;
    let cells = (0..cells)
        .map(|j| {
            let xc = x_lo + (j as f64 + 0.5) * dx;
            let k = ic.partition_point(|row| row.0 <= xc).saturating_sub(1);
            plateaus[k]
        })
        .collect();
    Ok(GridSolution {
        model: *model,
        cells,
        dx,
        x_lo,
        time: 0.0,
        steps: 0,
        shifted: false,
    })
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FunctionalTrace {
    pub times: Vec<f64>,
    pub total_var_phi: Vec<f64>,
    pub nishida_n: Vec<f64>,
    pub liu_l: Vec<f64>,
}

/// One row of a [`FunctionalTrace`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FunctionalSample {
    pub step: u64,
    pub time: f64,
    pub total_var_phi: f64,
    pub nishida_n: f64,
    pub liu_l: f64,
}

impl FunctionalTrace {
    pub fn push(&mut self, s: &FunctionalSample) {
        self.times.push(s.time);
        self.total_var_phi.push(s.total_var_phi);
        self.nishida_n.push(s.nishida_n);
        self.liu_l.push(s.liu_l);
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// `var φ`, `N` and `L` on the current grid. `N` reads wave types off the
/// interface Riemann solutions of this grid.
pub fn measure(sol: &GridSolution, field: &dyn ScalarField) -> Result<FunctionalSample> {
    Ok(measure_with(sol, &sol.interface_fans()?, field))
}

fn measure_with(
    sol: &GridSolution,
    interior: &[RiemannFan],
    field: &dyn ScalarField,
) -> FunctionalSample {
    let m = &sol.model;
    let mut var_phi = 0.0;
    let mut liu = 0.0;
    for w in sol.cells.windows(2) {
        var_phi += (field.at(m, w[1]) - field.at(m, w[0])).abs();
        liu += 2.0 * m.kappa() * (w[1].xi() - w[0].xi()).abs();
    }
    let mut nishida = 0.0;
    for fan in interior {
        if fan.backward.kind() == WaveKind::Shock {
            nishida += (m.invariants(fan.middle).0 - m.invariants(fan.left).0).abs();
        }
        if fan.forward.kind() == WaveKind::Shock {
            nishida += (m.invariants(fan.right).1 - m.invariants(fan.middle).1).abs();
        }
    }
    FunctionalSample {
        step: sol.steps,
        time: sol.time,
        total_var_phi: var_phi,
        nishida_n: nishida,
        liu_l: liu,
    }
}

/// Steps until `t_end`, calling `observe` on the initial grid and after
/// every step.
pub fn run_with<O>(
    sol: &GridSolution,
    t_end: f64,
    sequence: SequenceKind,
    field: &dyn ScalarField,
    mut observe: O,
) -> Result<(GridSolution, FunctionalTrace)>
where
    O: FnMut(&GridSolution, &FunctionalSample),
{
    if !(t_end > sol.time) {
        return Err(Error::Domain(format!(
            "t_end = {t_end} must exceed the current time {}",
            sol.time
        )));
    }
    let mut sampler = Sampler::new(sequence);
    let mut trace = FunctionalTrace::default();
    let mut cur = sol.clone();
    loop {
        let fans = cur.all_fans()?;
        let s = measure_with(&cur, &fans[1..cur.cells.len()], field);
        observe(&cur, &s);
        trace.push(&s);
        if cur.time >= t_end {
            break;
        }
        cur = cur.advance_with(&fans, sampler.next_sample(), t_end)?;
    }
    Ok((cur, trace))
}

pub fn run(
    sol: &GridSolution,
    t_end: f64,
    sequence: SequenceKind,
    field: &dyn ScalarField,
) -> Result<(GridSolution, FunctionalTrace)> {
    run_with(sol, t_end, sequence, field, |_, _| {})
}
