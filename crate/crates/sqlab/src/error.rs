use thiserror::Error;

/// Errors shared across the library. Numerical-domain failures carry enough
/// context to report which precondition was violated.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Recurrence order beyond the documented cap (n > 512) or an argument
    /// outside the documented range of a special function.
    #[error("cap exceeded: {0}")]
    CapExceeded(String),

    /// Convergence condition of the two-dimensional Gaussian integral
    /// identity violated (Re K <= 0 or Re[B + (c + c1)/2] <= 0).
    #[error("gaussian integral convergence violated: {0}")]
    ConvergenceViolation(String),

    /// Normalization denominator collapsed (odd superposition at alpha -> 0).
    #[error("degenerate state: {0}")]
    DegenerateState(String),

    /// Truncation too small: probability mass in the tail exceeds tolerance.
    #[error("tail mass {mass:.3e} above tolerance {tol:.3e} at dim {dim}")]
    TailMass { mass: f64, tol: f64, dim: usize },

    /// g2 requested for a state with vanishing mean photon number.
    #[error("division by zero intensity: mean photon number {0:.3e}")]
    DivisionByZeroIntensity(f64),

    /// Number-phase commutator expectation too small to normalize against.
    #[error("degenerate number-phase commutator: |<[n,Phi]>| = {0:.3e}")]
    DegenerateCommutator(f64),

    /// Cauchy-Schwarz denominator <n_j n_k> vanishes.
    #[error("degenerate denominator: <n_j n_k> = {0:.3e}")]
    DegenerateDenominator(f64),

    /// Glauber P-function does not exist as an ordinary function here.
    #[error("P-function singular: {0}")]
    PFunctionSingular(String),

    /// Phase-distribution denominators vanish for the requested ordering.
    #[error("numerical instability: {0}")]
    NumericalInstability(String),

    /// Squeeze parameters outside the validity region r3^2 < r1^2 + r2^2.
    #[error("invalid regime: {0}")]
    InvalidRegime(String),

    /// A resonance denominator vanished where no finite limit exists.
    #[error("regime singularity: {0}")]
    RegimeSingularity(String),

    /// Input state kind not covered by the model's closed forms.
    #[error("unsupported input: {0}")]
    UnsupportedInput(String),

    /// Invalid argument (grid sizes, negative tolerances, mode indices...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
