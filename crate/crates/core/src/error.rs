use thiserror::Error;

/// Failure modes shared by every numerical routine in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain where the formulas are defined.
    #[error("domain error: {0}")]
    Domain(String),
    /// `x^(γ/α)` (or `x^(-1/α)`) does not fit in an `f64`.
    #[error("overflow evaluating wave curve at ratio {ratio}")]
    Overflow { ratio: f64 },
    /// The two states (or incoming strengths) can only be joined through vacuum.
    #[error("vacuum: {0}")]
    Vacuum(String),
    /// A root could not be bracketed or polished.
    #[error("root finding failed: {0}")]
    Convergence(String),
    /// Adaptive quadrature ran out of subdivisions before reaching its tolerance.
    #[error(
        "quadrature did not converge: estimated error {estimate:e} after {intervals} intervals"
    )]
    Quadrature { estimate: f64, intervals: usize },
    /// A witness search hit its cap without success.
    #[error("search failed: {0}")]
    Search(String),
    /// The expansion coefficients needed for a sign case vanish.
    #[error("degenerate field: {0}")]
    Degenerate(String),
    /// A caller-supplied precondition (derivative bounds, ordering) does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// An interface Riemann problem in the Glimm scheme produced vacuum.
    #[error("vacuum encountered at interface {interface} (t = {time})")]
    VacuumEncountered { interface: usize, time: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
