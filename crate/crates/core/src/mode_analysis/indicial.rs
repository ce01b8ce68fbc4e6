//! Indicial roots of the Euclidean bi-Laplacian on ℂ^m/Γ.
//!
//! On `|z|^ζ e_γ` one has `Δ₀²(|z|^ζ e_γ) = (ζ−γ)(ζ−γ−2)(ζ−2+2m+γ)(ζ−4+2m+γ)|z|^{ζ−4} e_γ`,
//! so the roots generated by mode γ are `γ, γ+2, 2−2m−γ, 4−2m−γ`.

use std::io;

use serde::{Deserialize, Serialize};

use super::{invariant_gammas, GroupDescriptor, ModeError};

/// Roots generated by each admissible mode.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndicialRootSet {
    /// Complex dimension.
    pub m: usize,
    /// Acting group.
    pub group: GroupDescriptor,
    /// Truncation index.
    pub gamma_max: u32,
    /// `(root, generating γ)` sorted by root, then γ.
    pub roots: Vec<(i64, u32)>,
}

/// The four roots generated by mode γ.
pub fn mode_roots(m: usize, gamma: u32) -> [i64; 4] {
    let (g, m) = (gamma as i64, m as i64);
    [g, g + 2, 2 - 2 * m - g, 4 - 2 * m - g]
}

/// Indicial roots over the admissible modes `γ ≤ γ_max`.
pub fn indicial_roots(m: usize, group: GroupDescriptor, gamma_max: u32) -> Result<IndicialRootSet, ModeError> {
    if m < 2 {
        return Err(ModeError::Invalid(format!("complex dimension m = {m} < 2")));
    }
    let mut roots: Vec<(i64, u32)> = invariant_gammas(group, gamma_max)?
        .into_iter()
        .flat_map(|g| mode_roots(m, g).into_iter().map(move |r| (r, g)))
        .collect();
    roots.sort_unstable();
    Ok(IndicialRootSet { m, group, gamma_max, roots })
}

impl IndicialRootSet {
    /// The sorted root multiset.
    pub fn values(&self) -> Vec<i64> {
        self.roots.iter().map(|r| r.0).collect()
    }

    /// Roots lying in the forbidden window `{5−2m, …, −1}` (empty for a valid set, m ≥ 3).
    pub fn forbidden_hits(&self) -> Vec<i64> {
        let lo = 5 - 2 * self.m as i64;
        self.values().into_iter().filter(|&r| r >= lo && r <= -1).collect()
    }

    /// Writes one CSV row per generating mode: `gamma, root1, …, root4`.
    pub fn write_csv<W: io::Write>(&self, out: W) -> Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["gamma", "root1", "root2", "root3", "root4"])?;
        let mut gammas: Vec<u32> = self.roots.iter().map(|r| r.1).collect();
        gammas.sort_unstable();
        gammas.dedup();
        for g in gammas {
            let r = mode_roots(self.m, g);
            w.write_record([g.to_string(), r[0].to_string(), r[1].to_string(), r[2].to_string(), r[3].to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}
