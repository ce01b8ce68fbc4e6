/// Failures of mode bookkeeping, extensions and the mismatch map.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ModeError {
    /// Group parameters outside the supported family.
    #[error("unsupported group: {0}")]
    UnsupportedGroup(String),
    /// A coefficient is attached to a mode that is not invariant under the group.
    #[error("mode γ = {gamma} is not invariant under the group")]
    InadmissibleMode { gamma: u32 },
    /// Two mode vectors that must share their index data do not.
    #[error("mode data mismatch: {0}")]
    Mismatch(String),
    /// The m = 2, γ = 0 block was routed to a formula that divides by γ + m − 2 = 0.
    #[error("singular mode γ = {gamma} in dimension m = {m}")]
    SingularMode { gamma: u32, m: usize },
    /// Evaluation radius outside the extension's domain.
    #[error("radius {0} outside the domain of the extension")]
    Domain(f64),
    /// Invalid dimension or non-finite coefficients.
    #[error("invalid input: {0}")]
    Invalid(String),
}
