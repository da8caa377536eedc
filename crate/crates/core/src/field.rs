//! Scalar fields `φ(r, s)` on state space, with first and second derivatives.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::expr::{parse, Expr};
use crate::gas::{GasModel, State};

/// A twice differentiable function of one variable.
pub trait Profile: Send + Sync + fmt::Debug {
    fn value(&self, v: f64) -> f64;
    fn deriv(&self, v: f64) -> f64;
    fn second(&self, v: f64) -> f64;
}

/// `slope·v + intercept`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Linear {
    pub slope: f64,
    pub intercept: f64,
}

impl Linear {
    pub fn new(slope: f64, intercept: f64) -> Self {
        Self { slope, intercept }
    }

    pub fn identity() -> Self {
        Self::new(1.0, 0.0)
    }
}

impl Profile for Linear {
    fn value(&self, v: f64) -> f64 {
        self.slope * v + self.intercept
    }
    fn deriv(&self, _: f64) -> f64 {
        self.slope
    }
    fn second(&self, _: f64) -> f64 {
        0.0
    }
}

/// Profile given by an expression in the variable `v` (alias `id`).
#[derive(Debug, Clone)]
pub struct ExprProfile {
    source: String,
    f: Expr,
    df: Expr,
    d2f: Expr,
}

impl ExprProfile {
    pub fn parse(src: &str) -> Result<Self> {
        let f = parse(src, &["v"])?;
        let df = f.diff(0);
        let d2f = df.diff(0);
        Ok(Self {
            source: src.trim().to_string(),
            f,
            df,
            d2f,
        })
    }

    pub fn source(&self) -> &str {
        &self.source
    }
}

impl Profile for ExprProfile {
    fn value(&self, v: f64) -> f64 {
        self.f.eval(&[v])
    }
    fn deriv(&self, v: f64) -> f64 {
        self.df.eval(&[v])
    }
    fn second(&self, v: f64) -> f64 {
        self.d2f.eval(&[v])
    }
}

/// Wraps a plain function; derivatives by central differences with step
/// `max(1e-6, 1e-6·|v|)` (first) and `max(1e-4, 1e-4·|v|)` (second).
pub struct Numeric<F> {
    f: F,
}

impl<F: Fn(f64) -> f64 + Send + Sync> Numeric<F> {
    pub fn new(f: F) -> Self {
        Self { f }
    }
}

impl<F> fmt::Debug for Numeric<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Numeric(..)")
    }
}

impl<F: Fn(f64) -> f64 + Send + Sync> Profile for Numeric<F> {
    fn value(&self, v: f64) -> f64 {
        (self.f)(v)
    }
    fn deriv(&self, v: f64) -> f64 {
        let h = 1e-6f64.max(1e-6 * v.abs());
        ((self.f)(v + h) - (self.f)(v - h)) / (2.0 * h)
    }
    fn second(&self, v: f64) -> f64 {
        let h = 1e-4f64.max(1e-4 * v.abs());
        ((self.f)(v + h) - 2.0 * (self.f)(v) + (self.f)(v - h)) / (h * h)
    }
}

/// A function on state space written in Riemann coordinates.
pub trait ScalarField: Send + Sync + fmt::Debug {
    fn value(&self, r: f64, s: f64) -> f64;
    /// `(∂r φ, ∂s φ)`.
    fn gradient(&self, r: f64, s: f64) -> (f64, f64);
    /// `(∂rr φ, ∂rs φ, ∂ss φ)`.
    fn hessian(&self, r: f64, s: f64) -> (f64, f64, f64);

    fn as_split(&self) -> Option<&SplitField> {
        None
    }

    fn at(&self, model: &GasModel, st: State) -> f64 {
        let (r, s) = model.invariants(st);
        self.value(r, s)
    }
}

/// `φ(r, s) = θ(s) - ψ(r)`.
#[derive(Debug, Clone)]
pub struct SplitField {
    pub theta: Arc<dyn Profile>,
    pub psi: Arc<dyn Profile>,
}

impl SplitField {
    pub fn new(theta: impl Profile + 'static, psi: impl Profile + 'static) -> Self {
        Self {
            theta: Arc::new(theta),
            psi: Arc::new(psi),
        }
    }

    /// `s - r`, the field with `θ = ψ = id`.
    pub fn liu() -> Self {
        Self::new(Linear::identity(), Linear::identity())
    }

    pub fn theta_only(theta: impl Profile + 'static) -> Self {
        Self::new(theta, Linear::new(0.0, 0.0))
    }

    pub fn theta_only_arc(theta: Arc<dyn Profile>) -> Self {
        Self {
            theta,
            psi: Arc::new(Linear::new(0.0, 0.0)),
        }
    }
}

impl ScalarField for SplitField {
    fn value(&self, r: f64, s: f64) -> f64 {
        self.theta.value(s) - self.psi.value(r)
    }
    fn gradient(&self, r: f64, s: f64) -> (f64, f64) {
        (-self.psi.deriv(r), self.theta.deriv(s))
    }
    fn hessian(&self, r: f64, s: f64) -> (f64, f64, f64) {
        (-self.psi.second(r), 0.0, self.theta.second(s))
    }
    fn as_split(&self) -> Option<&SplitField> {
        Some(self)
    }
}

/// A field given by an expression in `r` and `s`.
#[derive(Debug, Clone)]
pub struct ExprField {
    source: String,
    f: Expr,
    fr: Expr,
    fs: Expr,
    frr: Expr,
    frs: Expr,
    fss: Expr,
}

impl ExprField {
    pub fn parse(src: &str) -> Result<Self> {
        let f = parse(src, &["r", "s"])?;
        let fr = f.diff(0);
        let fs = f.diff(1);
        Ok(Self {
            source: src.trim().to_string(),
            frr: fr.diff(0),
            frs: fr.diff(1),
            fss: fs.diff(1),
            f,
            fr,
            fs,
        })
    }

    pub fn source(&self) -> &str {
        &self.source
    }
}

impl ScalarField for ExprField {
    fn value(&self, r: f64, s: f64) -> f64 {
        self.f.eval(&[r, s])
    }
    fn gradient(&self, r: f64, s: f64) -> (f64, f64) {
        (self.fr.eval(&[r, s]), self.fs.eval(&[r, s]))
    }
    fn hessian(&self, r: f64, s: f64) -> (f64, f64, f64) {
        let v = [r, s];
        (self.frr.eval(&v), self.frs.eval(&v), self.fss.eval(&v))
    }
}

/// Parses `split:theta=<expr>;psi=<expr>` or `raw:<expr in r,s>`.
///
/// In split specs either part may be omitted and then defaults to zero.
pub fn parse_field(spec: &str) -> Result<Arc<dyn ScalarField>> {
    let spec = spec.trim();
    if let Some(body) = spec.strip_prefix("raw:") {
        return Ok(Arc::new(ExprField::parse(body)?));
    }
    let body = spec.strip_prefix("split:").ok_or_else(|| {
        Error::Domain(format!(
            "field spec must start with 'split:' or 'raw:', got '{spec}'"
        ))
    })?;
    let mut theta: Option<ExprProfile> = None;
    let mut psi: Option<ExprProfile> = None;
    for part in body.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let (key, val) = part
            .split_once('=')
            .ok_or_else(|| Error::Domain(format!("expected key=expr, got '{part}'")))?;
        let slot = match key.trim() {
            "theta" | "θ" => &mut theta,
            "psi" | "ψ" => &mut psi,
            k => return Err(Error::Domain(format!("unknown split component '{k}'"))),
        };
        if slot.is_some() {
            return Err(Error::Domain(format!(
                "component '{}' given twice",
                key.trim()
            )));
        }
        *slot = Some(ExprProfile::parse(val)?);
    }
    let zero = || ExprProfile::parse("0");
    Ok(Arc::new(SplitField::new(
        theta.map_or_else(zero, Ok)?,
        psi.map_or_else(zero, Ok)?,
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_spec() {
        let f = parse_field("split:theta=2*id;psi=id").unwrap();
        assert_eq!(f.value(1.0, 3.0), 5.0);
        assert_eq!(f.gradient(1.0, 3.0), (-1.0, 2.0));
        assert_eq!(f.hessian(0.2, 0.3).1, 0.0);
        assert!(f.as_split().is_some());
    }

    #[test]
    fn raw_spec() {
        let f = parse_field("raw: r*s").unwrap();
        let s3 = 3f64.sqrt();
        assert_eq!(f.gradient(-s3, s3), (s3, -s3));
        assert_eq!(f.hessian(-s3, s3), (0.0, 1.0, 0.0));
        assert!(f.as_split().is_none());
    }

    #[test]
    fn missing_component_is_zero() {
        let f = parse_field("split:theta=v^2").unwrap();
        assert_eq!(f.value(7.0, 3.0), 9.0);
    }

    #[test]
    fn bad_specs() {
        for bad in [
            "theta=v",
            "split:phi=v",
            "split:theta=v;theta=v",
            "raw:v",
            "split:theta",
        ] {
            assert!(parse_field(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn numeric_profile_matches_analytic() {
        let n = Numeric::new(|v: f64| v.powi(3) + v.exp());
        for v in [-1.0f64, 0.0, 0.5, 3.0] {
            let d = 3.0 * v * v + v.exp();
            let d2 = 6.0 * v + v.exp();
            assert!((n.deriv(v) - d).abs() < 1e-5 * d.abs().max(1.0));
            assert!((n.second(v) - d2).abs() < 1e-5 * d2.abs().max(1.0));
        }
    }
}
