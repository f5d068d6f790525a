//! Vector norms applied to coefficient vectors and row-major-flattened
//! matrices.

use super::AlgebraError;

/// Norm used to turn coefficient-vector differences into distances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormSpec {
    /// `(sum |x_i|^alpha)^(1/alpha)` for `alpha >= 1`.
    Holder { alpha: f64 },
    /// Supremum of absolute values.
    Max,
}

impl NormSpec {
    /// Hölder norm with exponent validation (`alpha >= 1`, finite).
    pub fn holder(alpha: f64) -> Result<Self, AlgebraError> {
        if !alpha.is_finite() || alpha < 1.0 {
            return Err(AlgebraError::InvalidNorm { alpha });
        }
        Ok(NormSpec::Holder { alpha })
    }

    /// The default Hölder-2 (Euclidean / Frobenius) norm.
    pub fn euclidean() -> Self {
        NormSpec::Holder { alpha: 2.0 }
    }

    pub fn apply(&self, values: &[f64]) -> f64 {
        match self {
            NormSpec::Holder { alpha } => {
                let sum: f64 = values.iter().map(|v| v.abs().powf(*alpha)).sum();
                sum.powf(1.0 / alpha)
            }
            NormSpec::Max => values.iter().fold(0.0, |acc, v| acc.max(v.abs())),
        }
    }
}

impl Default for NormSpec {
    fn default() -> Self {
        NormSpec::euclidean()
    }
}
