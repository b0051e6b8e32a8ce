//! Error type shared by every module in the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid coordinate frame: {0}")]
    Frame(String),

    #[error("matrix is not antisymmetric (max |S + S^T| = {residual:.3e})")]
    NotAntisymmetric { residual: f64 },

    #[error("form is degenerate (sigma_min/sigma_max = {ratio:.3e})")]
    DegenerateForm { ratio: f64 },

    #[error("map does not generate a Hamiltonian flow for this form (max |O^T S + S O| = {residual:.3e})")]
    NotGenerator { residual: f64 },

    #[error("Darboux reduction found no usable pivot (max |s(v,w)| = {pivot:.3e} over remaining candidates)")]
    DarbouxBreakdown { pivot: f64 },

    #[error("matrix is singular and cannot be inverted")]
    Singular,

    #[error("computed relating map violates its defining relation (residual {residual:.3e})")]
    RelationResidual { residual: f64 },

    #[error("no positive structure commuting with dynamics: generator eigenvalue {re:.6e}{im:+.6e}i is not purely imaginary")]
    HyperbolicSpectrum { re: f64, im: f64 },

    #[error("no positive structure commuting with dynamics: generator has a near-zero eigenvalue (magnitude {magnitude:.3e})")]
    SingularGenerator { magnitude: f64 },

    #[error("generator is not semisimple at frequency {omega:.6}: kernel dimension {found}, expected {expected}")]
    NotSemisimple {
        omega: f64,
        found: usize,
        expected: usize,
    },

    #[error("degenerate pairing at frequency {omega:.6}: Gram eigenvalue {value:.3e} too close to zero")]
    DegeneratePairing { omega: f64, value: f64 },

    #[error("complex structure failed verification: {0}")]
    StructureInvalid(String),

    #[error("orthonormalization breakdown at step {step} (residual norm {norm:.3e})")]
    BasisBreakdown { step: usize, norm: f64 },

    #[error("operator is not complex-linear (max |HJ - JH| = {residual:.3e})")]
    NotComplexLinear { residual: f64 },

    #[error("operator is not self-adjoint for this inner product (max |h - h^*| = {residual:.3e})")]
    NotSelfAdjoint { residual: f64 },

    #[error("map is not an isometry of the mode inner products (max mismatch {residual:.3e})")]
    NotIsometric { residual: f64 },

    #[error("map is not unitary (max |u^* u - 1| = {residual:.3e})")]
    NotUnitary { residual: f64 },

    #[error("occupation cutoff must be at least 1")]
    InvalidCutoff,

    #[error("moment of odd order {0} has no pairing expansion; odd vacuum moments vanish identically")]
    OddMoment(usize),

    #[error("grid too coarse: step {step:.6e} exceeds sigma/10 = {limit:.6e}")]
    GridTooCoarse { step: f64, limit: f64 },

    #[error("grid must span at least 6 standard deviations each side with at least 5 points (got {sigmas} sigma, {points} points)")]
    GridTooNarrow { sigmas: f64, points: usize },

    #[error("parameter out of range: {0}")]
    Parameter(String),

    #[error("unknown builtin scenario '{0}'")]
    UnknownScenario(String),

    #[error("scenarios are not comparable: {0}")]
    NotComparable(String),

    #[error("demonstration requires the standard/sign-flip oscillator pair: {0}")]
    NotDemoPair(String),

    #[error("scenario schema: {0}")]
    Schema(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
