/// Failures of the blow-up class arithmetic.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ClassError {
    /// Malformed class data.
    #[error("invalid class data: {0}")]
    InvalidData(String),
    /// The corrected volume is not positive.
    #[error("non-positive volume {volume} at ε = {eps}")]
    NegativeVolume { eps: f64, volume: f64 },
    /// Malformed base family table.
    #[error("invalid base family: {0}")]
    InvalidFamily(String),
    /// The average scalar curvature does not change sign over the family.
    #[error("no sign change: s = {s_lo} at t = {t_lo}, s = {s_hi} at t = {t_hi}")]
    NoSignChange { t_lo: f64, s_lo: f64, t_hi: f64, s_hi: f64 },
}
