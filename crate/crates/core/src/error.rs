use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not orthogonal: max |MᵀM − I| = {residual:e}")]
    NotOrthogonal { residual: f64 },

    #[error("family is not orthonormal: max |⟨vᵢ, vⱼ⟩ − δᵢⱼ| = {residual:e}")]
    NotOrthonormal { residual: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("point is outside the hemisphere of pole {pole}: ⟨x, e_pole⟩ = {component}")]
    OutsideChart { pole: usize, component: f64 },

    #[error("point is outside the open unit disc: ‖y‖ = {norm}")]
    OutsideDisc { norm: f64 },

    #[error("chart coordinate has a nonzero pole component: ⟨y, e_{pole}⟩ = {component:e}")]
    NonzeroPoleComponent { pole: usize, component: f64 },

    #[error("vector is not a unit vector: ‖x‖ = {norm}")]
    NotUnit { norm: f64 },

    #[error("homotopy denominator vanished: {value:e}")]
    DegenerateDenominator { value: f64 },

    #[error("points are too close to define a reflection: ‖x − y‖ = {distance:e}")]
    DegeneratePair { distance: f64 },

    #[error("invalid fibre: {0}")]
    InvalidFibre(&'static str),

    #[error("parameter out of range: {0}")]
    InvalidParameter(&'static str),

    #[error("element carries no reflection word")]
    MissingWord,
}
