use std::fs::File;
use std::io::Write;
use std::sync::Arc;

use anyhow::{bail, Context};
use serde::Deserialize;
use serde_json::{json, Value};
use tvdlab_core::glimm::run_with;
use tvdlab_core::*;

use crate::args::*;
use crate::output::{emit_document, emit_line, fmt_f64, to_value, Meta};
use crate::Usage;

fn model(gamma: f64) -> anyhow::Result<GasModel> {
    Ok(GasModel::new(gamma)?)
}

fn state((xi, u): (f64, f64)) -> anyhow::Result<State> {
    Ok(State::new(xi, u)?)
}

pub fn phi_table(a: &PhiArgs, out: &mut dyn Write) -> anyhow::Result<()> {
    let meta = Meta::new("phi", a)?;
    let m = model(a.gamma)?;
    if a.points < 2 {
        bail!(Usage(format!(
            "--points must be at least 2, got {}",
            a.points
        )));
    }
    if !(a.from > 0.0 && a.to > a.from) {
        bail!(Usage(format!(
            "need 0 < --from < --to, got {} and {}",
            a.from, a.to
        )));
    }
    let fam = match a.family {
        FamilyArg::B => Family::Backward,
        FamilyArg::F => Family::Forward,
    };
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["x", "phi", "dphi"])?;
    for i in 0..a.points {
        let t = i as f64 / (a.points - 1) as f64;
        let x = if a.log {
            (a.from.ln() + t * (a.to.ln() - a.from.ln())).exp()
        } else {
            a.from + t * (a.to - a.from)
        };
        let (p, d) = (phi(&m, fam, x)?, phi_deriv(&m, fam, x)?);
        w.write_record([fmt_f64(x), fmt_f64(p), fmt_f64(d)])?;
    }
    w.flush()?;
    // The table itself is plain CSV; the run record goes to stderr.
    eprintln!(
        "{}",
        serde_json::to_string(&json!({ "meta": meta.value(true) }))?
    );
    Ok(())
}

pub fn riemann(a: &RiemannArgs, out: &mut dyn Write) -> anyhow::Result<()> {
    let meta = Meta::new("riemann", a)?;
    let m = model(a.gamma)?;
    let (l, r) = (state(a.left)?, state(a.right)?);
    let result = match solve_riemann(&m, l, r)? {
        RiemannOutcome::Fan(fan) => {
            let sp = fan.speeds(&m);
            json!({
                "vacuum": false,
                "b": fan.backward.ratio(),
                "f": fan.forward.ratio(),
                "backward": fan.backward.kind(),
                "forward": fan.forward.kind(),
                "middle": fan.middle,
                "speeds": { "backward": [sp.backward.0, sp.backward.1], "forward": [sp.forward.0, sp.forward.1] },
            })
        }
        RiemannOutcome::Vacuum => json!({ "vacuum": true, "b": null, "f": null, "middle": null }),
    };
    emit_document(out, &meta, to_value(&result)?)
}

pub fn interact(a: &InteractArgs, out: &mut dyn Write) -> anyhow::Result<()> {
    let meta = Meta::new("interact", a)?;
    let m = model(a.gamma)?;
    let kind: InteractionKind = a.kind.parse().map_err(|e: Error| Usage(e.to_string()))?;
    let rz = realize(&m, kind, a.q1, a.q2, state(a.far_left)?)?;
    let (b, f) = rz.outgoing_ratios();
    let label = rz.outcome_label();
    let result = json!({
        "kind": kind,
        "B": b,
        "F": f,
        "outgoing": label,
        "allowed": kind.allowed_outcomes(),
        "matches_table": kind.allowed_outcomes().contains(&label.as_str()),
        "closure_residual": rz.closure_residual(),
        "realization": rz,
    });
    emit_document(out, &meta, to_value(&result)?)
}

pub fn tvd_expand(a: &TvdExpandArgs, out: &mut dyn Write) -> anyhow::Result<()> {
    let meta = Meta::new("tvd-expand", a)?;
    let m = model(a.gamma)?;
    let field = parse_field(&a.field).map_err(|e| Usage(e.to_string()))?;
    let base = state(a.base)?;
    let coeffs = expansion_coefficients(&m, field.as_ref(), base);
    let (dr, ds) = match a.case {
        None => (a.dr, a.ds),
        Some(CaseArg::Iii) => (
            a.dr.abs() * coeffs.d.signum(),
            -a.ds.abs() * coeffs.a.signum(),
        ),
        Some(CaseArg::Iv) => (
            -a.dr.abs() * coeffs.d.signum(),
            a.ds.abs() * coeffs.a.signum(),
        ),
    };
    let mut rows = Vec::new();
    let mut prev: Option<f64> = None;
    for k in 0..=a.halvings {
        let h = 0.5f64.powi(k as i32);
        let w = weak_expansion_check(&m, field.as_ref(), base, dr * h, ds * h)?;
        let order = prev.map(|p| (p.abs() / w.measured.abs()).log2());
        rows.push(json!({
            "k": k,
            "dr": dr * h,
            "ds": ds * h,
            "case": w.case,
            "measured": w.measured,
            "predicted": w.predicted,
            "ratio": w.measured / w.predicted,
            "order": order,
            "interaction": w.realization.kind,
        }));
        prev = Some(w.measured);
    }
    let result = json!({ "coefficients": coeffs, "rows": rows });
    emit_document(out, &meta, to_value(&result)?)
}

pub fn counterexample(a: &CounterexampleArgs, out: &mut dyn Write) -> anyhow::Result<()> {
    let meta = Meta::new("counterexample", a)?;
    let m = model(a.gamma)?;
    let cfg = CounterexampleConfig {
        interval: (a.lo, a.hi),
        m: a.m,
        delta: a.delta,
        m_u: a.m_u,
        n_l: a.n_l,
        n_u: a.n_u,
        epsilon: a.epsilon,
    };
    let profile = |src: &Option<String>, default: &str| -> anyhow::Result<Arc<dyn Profile>> {
        let src = src.as_deref().unwrap_or(default);
        Ok(Arc::new(
            ExprProfile::parse(src).map_err(|e| Usage(e.to_string()))?,
        ))
    };
    let w = match a.case {
        1 => find_case1(&m, &cfg, profile(&a.theta, "2*id")?, profile(&a.psi, "id")?)?,
        2 => find_case2(&m, &cfg, profile(&a.theta, "id")?, profile(&a.psi, "2*id")?)?,
        _ => {
            if a.psi.is_some() {
                bail!(Usage("case 3 uses θ only; drop --psi".into()));
            }
            find_case3(&m, &cfg, profile(&a.theta, "id")?)?
        }
    };
    let mut result = to_value(&w)?;
    if let Value::Object(o) = &mut result {
        o.insert(
            "outgoing".into(),
            Value::String(w.realization.outcome_label()),
        );
    }
    emit_document(out, &meta, result)
}

#[derive(Debug, Deserialize)]
struct IcRow {
    #[serde(rename = "X")]
    x: f64,
    tau: f64,
    u: f64,
}

fn read_ic(path: &std::path::Path) -> anyhow::Result<Vec<(f64, f64, f64)>> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let mut rd = csv::Reader::from_reader(file);
    let headers = rd.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != ["X", "tau", "u"] {
        bail!(Usage(format!(
            "{}: header must be `X,tau,u`",
            path.display()
        )));
    }
    let mut rows = Vec::new();
    for rec in rd.deserialize::<IcRow>() {
        let row = rec.map_err(|e| Usage(format!("{}: {e}", path.display())))?;
        rows.push((row.x, row.tau, row.u));
    }
    Ok(rows)
}

pub fn glimm(a: &GlimmArgs, out: &mut dyn Write) -> anyhow::Result<()> {
    let meta = Meta::new("glimm", a)?;
    let m = model(a.gamma)?;
    if a.every == 0 {
        bail!(Usage("--every must be positive".into()));
    }
    let field = parse_field(&a.field).map_err(|e| Usage(e.to_string()))?;
    let ic = read_ic(&a.ic)?;
    let sol = init_simulation(&m, &ic, a.cells, a.domain)?;
    let seq = match a.seq {
        SeqArg::Vdc => SequenceKind::VanDerCorput { start: a.seed },
        SeqArg::Prng => SequenceKind::SeededPrng { seed: a.seed },
    };
    emit_line(out, "meta", meta.value(false))?;
    let mut io_err = None;
    let (end, _) = run_with(&sol, a.tmax, seq, field.as_ref(), |g, s| {
        if io_err.is_none() && (s.step % a.every == 0 || g.time >= a.tmax) {
            if let Err(e) = to_value(s).and_then(|v| emit_line(out, "sample", v)) {
                io_err = Some(e);
            }
        }
    })?;
    if let Some(e) = io_err {
        return Err(e);
    }
    let done = json!({ "steps": end.steps, "time": end.time, "wall_time_s": meta.value(true)["wall_time_s"] });
    emit_line(out, "done", to_value(&done)?)
}
