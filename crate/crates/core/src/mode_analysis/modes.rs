//! Invariant sphere eigenmodes and mode-indexed coefficient vectors.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::ModeError;

/// Supported group kinds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupKind {
    /// The trivial group.
    Trivial,
    /// ℤ_k acting by a primitive k-th root of unity on all coordinates.
    CyclicDiagonal,
}

/// Finite group acting freely on ℂ^m − {0}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupDescriptor {
    /// Group kind.
    pub kind: GroupKind,
    /// Order of the group (1 for the trivial group).
    pub k: u32,
}

impl GroupDescriptor {
    /// The trivial group.
    pub const TRIVIAL: Self = Self { kind: GroupKind::Trivial, k: 1 };

    /// Diagonal ℤ_k.
    pub fn cyclic_diagonal(k: u32) -> Result<Self, ModeError> {
        if k == 0 {
            return Err(ModeError::UnsupportedGroup("ℤ_0".into()));
        }
        Ok(Self { kind: GroupKind::CyclicDiagonal, k })
    }

    /// Checks the descriptor's internal consistency.
    pub fn validate(&self) -> Result<(), ModeError> {
        match self.kind {
            GroupKind::Trivial if self.k != 1 => {
                Err(ModeError::UnsupportedGroup(format!("trivial group with order {}", self.k)))
            }
            GroupKind::CyclicDiagonal if self.k == 0 => Err(ModeError::UnsupportedGroup("ℤ_0".into())),
            _ => Ok(()),
        }
    }

    /// Order of the group.
    pub fn order(&self) -> u32 {
        match self.kind {
            GroupKind::Trivial => 1,
            GroupKind::CyclicDiagonal => self.k,
        }
    }

    /// Smallest `q` such that the bidegree `(γ − q, q)` is invariant, if any.
    ///
    /// A harmonic polynomial of bidegree `(p, q)` picks up the factor
    /// `ω^{p−q}` under `z ↦ ωz`, so it is invariant iff `p ≡ q (mod k)`.
    pub fn invariant_bidegree(&self, gamma: u32) -> Option<(u32, u32)> {
        let k = self.order() as i64;
        (0..=gamma).map(|q| (gamma - q, q)).find(|&(p, q)| (p as i64 - q as i64).rem_euclid(k) == 0)
    }

    /// Whether eigenvalue index `γ` carries invariant eigenfunctions.
    pub fn admits(&self, gamma: u32) -> bool {
        self.invariant_bidegree(gamma).is_some()
    }
}

/// Eigenvalue `γ(2m − 2 + γ)` of `−Δ` on `S^{2m−1}` for degree-γ harmonics.
pub fn sphere_eigenvalue(gamma: u32, m: usize) -> u64 {
    gamma as u64 * (2 * m as u64 - 2 + gamma as u64)
}

/// Γ-admissible indices `γ ≤ γ_max`.
pub fn invariant_gammas(group: GroupDescriptor, gamma_max: u32) -> Result<Vec<u32>, ModeError> {
    group.validate()?;
    Ok((0..=gamma_max).filter(|&g| group.admits(g)).collect())
}

/// One representative coefficient per admissible eigenvalue index.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModeVector {
    /// Complex dimension.
    pub m: usize,
    /// Acting group.
    pub group: GroupDescriptor,
    /// Coefficients keyed by γ.
    pub coeffs: BTreeMap<u32, f64>,
    /// Truncation index.
    pub gamma_max: u32,
}

impl ModeVector {
    /// Validated construction.
    pub fn new(
        m: usize,
        group: GroupDescriptor,
        coeffs: BTreeMap<u32, f64>,
        gamma_max: u32,
    ) -> Result<Self, ModeError> {
        let v = Self { m, group, coeffs, gamma_max };
        v.validate()?;
        Ok(v)
    }

    /// The zero vector over all admissible modes.
    pub fn zeros(m: usize, group: GroupDescriptor, gamma_max: u32) -> Result<Self, ModeError> {
        let coeffs = invariant_gammas(group, gamma_max)?.into_iter().map(|g| (g, 0.0)).collect();
        Self::new(m, group, coeffs, gamma_max)
    }

    /// A vector supported on the single mode `γ`.
    pub fn single(m: usize, group: GroupDescriptor, gamma_max: u32, gamma: u32, value: f64) -> Result<Self, ModeError> {
        let mut v = Self::zeros(m, group, gamma_max)?;
        if !v.coeffs.contains_key(&gamma) {
            return Err(ModeError::InadmissibleMode { gamma });
        }
        v.coeffs.insert(gamma, value);
        Ok(v)
    }

    /// Checks dimension, admissibility and finiteness.
    pub fn validate(&self) -> Result<(), ModeError> {
        if self.m < 2 {
            return Err(ModeError::Invalid(format!("complex dimension m = {} < 2", self.m)));
        }
        self.group.validate()?;
        for (&g, &c) in &self.coeffs {
            if g > self.gamma_max || !self.group.admits(g) {
                return Err(ModeError::InadmissibleMode { gamma: g });
            }
            if !c.is_finite() {
                return Err(ModeError::Invalid(format!("coefficient of mode {g} is not finite")));
            }
        }
        Ok(())
    }

    /// Coefficient of mode `γ` (zero if absent).
    pub fn get(&self, gamma: u32) -> f64 {
        self.coeffs.get(&gamma).copied().unwrap_or(0.0)
    }

    /// Same index data (dimension, group, truncation, keys).
    pub fn same_shape(&self, other: &Self) -> bool {
        self.m == other.m
            && self.group == other.group
            && self.gamma_max == other.gamma_max
            && self.coeffs.keys().eq(other.coeffs.keys())
    }

    /// `a·self + b·other` on a shared shape.
    pub fn combine(&self, a: f64, other: &Self, b: f64) -> Result<Self, ModeError> {
        if !self.same_shape(other) {
            return Err(ModeError::Mismatch("linear combination of differently shaped mode vectors".into()));
        }
        let coeffs = self.coeffs.iter().map(|(&g, &x)| (g, a * x + b * other.get(g))).collect();
        Ok(Self { coeffs, ..self.clone() })
    }

    /// Largest absolute coefficient.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.values().fold(0.0, |acc, v| acc.max(v.abs()))
    }
}

/// Position trace `h` and Laplacian trace `k` on the unit sphere.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CauchyData {
    /// Trace of the function.
    pub h: ModeVector,
    /// Trace of its Euclidean Laplacian.
    pub k: ModeVector,
}

impl CauchyData {
    /// Validated construction; `h` and `k` must share their index data.
    pub fn new(h: ModeVector, k: ModeVector) -> Result<Self, ModeError> {
        h.validate()?;
        k.validate()?;
        if !h.same_shape(&k) {
            return Err(ModeError::Mismatch("h and k have different mode index sets".into()));
        }
        Ok(Self { h, k })
    }

    /// Radial data `(h, k)` in the γ = 0 mode only.
    pub fn radial(m: usize, h0: f64, k0: f64) -> Result<Self, ModeError> {
        let g = GroupDescriptor::TRIVIAL;
        Self::new(ModeVector::single(m, g, 0, 0, h0)?, ModeVector::single(m, g, 0, 0, k0)?)
    }

    /// Complex dimension.
    pub fn m(&self) -> usize {
        self.h.m
    }
}

/// Degree-γ spherical harmonic `Re(z₁^p z̄₂^q)/|z|^γ` representing mode γ,
/// evaluated at a real point `x = (x₁, y₁, x₂, y₂, …)`.
pub fn representative_harmonic(group: GroupDescriptor, gamma: u32, x: &[f64]) -> Result<f64, ModeError> {
    let (p, q) = group.invariant_bidegree(gamma).ok_or(ModeError::InadmissibleMode { gamma })?;
    if x.len() < 4 || !x.len().is_multiple_of(2) {
        return Err(ModeError::Invalid("point must have 2m ≥ 4 real coordinates".into()));
    }
    let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    let z1 = num_complex::Complex64::new(x[0], x[1]);
    let z2 = num_complex::Complex64::new(x[2], -x[3]);
    Ok((z1.powu(p) * z2.powu(q)).re / r.powi(gamma as i32))
}
