//! General-coordinate scalar-curvature oracle on sampled potentials.
//!
//! The potential is sampled on a Cartesian box patch of ℝ^{2m} (real
//! coordinates `x₁, y₁, …, x_m, y_m` with `z_a = x_a + i y_a`).  The complex
//! Hessian `g_{ab̄} = ∂_a∂_b̄Φ` is formed from fourth-order centered
//! differences, `ln det g` is evaluated on the stencil neighbourhood of the
//! evaluation node, and its complex Hessian is differenced again.  The nested
//! stencils need four layers of margin around the evaluation node.

use std::collections::HashMap;

use nalgebra::DMatrix;
use rayon::prelude::*;

use super::CalculusError;

/// Stencil margin (layers) required around an evaluation node.
pub const STENCIL_MARGIN: usize = 4;

const D1: [(i64, f64); 4] = [(-2, 1.0 / 12.0), (-1, -8.0 / 12.0), (1, 8.0 / 12.0), (2, -1.0 / 12.0)];
const D2: [(i64, f64); 5] =
    [(-2, -1.0 / 12.0), (-1, 16.0 / 12.0), (0, -30.0 / 12.0), (1, 16.0 / 12.0), (2, -1.0 / 12.0)];

/// Potential samples on a cubic patch `center + spacing·[−n, n]^{2m}`.
///
/// An optional analytic part `q·|z|²` is carried exactly (its Hessian is
/// added in closed form) to keep roundoff in the differenced remainder small.
#[derive(Clone, Debug)]
pub struct GridPotential {
    m: usize,
    center: Vec<f64>,
    spacing: f64,
    half_width: usize,
    quadratic: f64,
    values: Vec<f64>,
}

impl GridPotential {
    /// Samples `phi(x) − quadratic·|x|²` on the patch.
    pub fn sample<F>(
        m: usize,
        center: &[f64],
        spacing: f64,
        half_width: usize,
        quadratic: f64,
        phi: F,
    ) -> Result<Self, CalculusError>
    where
        F: Fn(&[f64]) -> f64 + Sync,
    {
        Self::sample_remainder(m, center, spacing, half_width, quadratic, |x| {
            let r2: f64 = x.iter().map(|v| v * v).sum();
            phi(x) - quadratic * r2
        })
    }

    /// Samples a potential given as `quadratic·|x|² + remainder(x)`, where the
    /// remainder is supplied directly.  When the remainder can be evaluated
    /// without cancellation this keeps the sampled values, and hence the
    /// roundoff amplified by the nested difference stencils, small.
    pub fn sample_remainder<F>(
        m: usize,
        center: &[f64],
        spacing: f64,
        half_width: usize,
        quadratic: f64,
        remainder: F,
    ) -> Result<Self, CalculusError>
    where
        F: Fn(&[f64]) -> f64 + Sync,
    {
        if !(m == 2 || m == 3) {
            return Err(CalculusError::InvalidProfile(format!("grid oracle supports m ∈ {{2, 3}}, got {m}")));
        }
        if center.len() != 2 * m || !(spacing > 0.0) || half_width < STENCIL_MARGIN {
            return Err(CalculusError::InvalidProfile(format!(
                "grid patch needs 2m = {} centre coordinates, positive spacing and half-width ≥ {STENCIL_MARGIN}",
                2 * m
            )));
        }
        let side = 2 * half_width + 1;
        let total = side.pow(2 * m as u32);
        let values = (0..total)
            .into_par_iter()
            .map(|lin| {
                let x = node_coordinates(m, center, spacing, half_width, lin);
                remainder(&x)
            })
            .collect();
        Ok(Self { m, center: center.to_vec(), spacing, half_width, quadratic, values })
    }

    /// Complex dimension.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Grid step.
    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    /// Patch centre.
    pub fn center(&self) -> &[f64] {
        &self.center
    }

    fn side(&self) -> usize {
        2 * self.half_width + 1
    }

    fn at(&self, idx: &[i64]) -> f64 {
        let side = self.side() as i64;
        let mut lin = 0i64;
        for &i in idx.iter().rev() {
            lin = lin * side + i;
        }
        self.values[lin as usize]
    }

    /// Real Hessian (2m × 2m) of the sampled part at a node.
    fn real_hessian(&self, idx: &[i64]) -> DMatrix<f64> {
        let n = 2 * self.m;
        let h2 = self.spacing * self.spacing;
        let mut hess = DMatrix::zeros(n, n);
        let mut p = idx.to_vec();
        for a in 0..n {
            let mut acc = 0.0;
            for &(o, w) in &D2 {
                p[a] = idx[a] + o;
                acc += w * self.at(&p);
            }
            p[a] = idx[a];
            hess[(a, a)] = acc / h2;
            for b in a + 1..n {
                let mut acc = 0.0;
                for &(oa, wa) in &D1 {
                    for &(ob, wb) in &D1 {
                        p[a] = idx[a] + oa;
                        p[b] = idx[b] + ob;
                        acc += wa * wb * self.at(&p);
                    }
                }
                p[a] = idx[a];
                p[b] = idx[b];
                hess[(a, b)] = acc / h2;
                hess[(b, a)] = acc / h2;
            }
        }
        hess
    }

    /// Real 2m × 2m representation `[[X, −Y], [Y, X]]` of the complex Hessian
    /// `X + iY = ∂_a∂_b̄Φ`, assembled from the real Hessian (coordinate order
    /// `x₁, y₁, x₂, y₂, …`).
    fn complex_hessian_realified(&self, real: &DMatrix<f64>, extra_quadratic: f64) -> DMatrix<f64> {
        let m = self.m;
        let mut out = DMatrix::zeros(2 * m, 2 * m);
        for a in 0..m {
            for b in 0..m {
                let (xa, ya, xb, yb) = (2 * a, 2 * a + 1, 2 * b, 2 * b + 1);
                let mut re = 0.25 * (real[(xa, xb)] + real[(ya, yb)]);
                let im = 0.25 * (real[(xa, yb)] - real[(ya, xb)]);
                if a == b {
                    re += extra_quadratic;
                }
                out[(a, b)] = re;
                out[(a + m, b + m)] = re;
                out[(a, b + m)] = -im;
                out[(a + m, b)] = im;
            }
        }
        out
    }

    /// `ln det g` at a node, with `g` from the sampled part plus the analytic quadratic.
    fn log_det(&self, idx: &[i64]) -> Result<f64, CalculusError> {
        let real = self.real_hessian(idx);
        // ∂_a∂_b̄ (q|z|²) = q δ_ab.
        let g = self.complex_hessian_realified(&real, self.quadratic);
        let chol = g.clone().cholesky().ok_or_else(|| CalculusError::DegenerateMetric {
            s: self.node_radius_sq(idx),
            g_tangent: g.symmetric_eigenvalues().min(),
            g_radial: f64::NAN,
        })?;
        let diag = chol.l_dirty().diagonal();
        // det of the realified matrix is |det g|², so ln det g = Σ ln L_ii.
        Ok(diag.iter().map(|v| v.ln()).sum())
    }

    fn node_radius_sq(&self, idx: &[i64]) -> f64 {
        idx.iter()
            .zip(&self.center)
            .map(|(&i, c)| {
                let x = c + (i - self.half_width as i64) as f64 * self.spacing;
                x * x
            })
            .sum()
    }

    /// Node multi-index of a coordinate point (must coincide with a node).
    fn locate(&self, point: &[f64]) -> Result<Vec<i64>, CalculusError> {
        if point.len() != 2 * self.m {
            return Err(CalculusError::OutOfRegion(format!("expected {} coordinates", 2 * self.m)));
        }
        let mut idx = Vec::with_capacity(point.len());
        for (x, c) in point.iter().zip(&self.center) {
            let t = (x - c) / self.spacing + self.half_width as f64;
            let r = t.round();
            if (t - r).abs() > 1e-6 {
                return Err(CalculusError::OutOfRegion(format!("coordinate {x} is not a grid node")));
            }
            let i = r as i64;
            let lo = STENCIL_MARGIN as i64;
            let hi = self.side() as i64 - 1 - STENCIL_MARGIN as i64;
            if i < lo || i > hi {
                return Err(CalculusError::OutOfRegion(format!(
                    "coordinate {x} lacks the {STENCIL_MARGIN}-layer stencil margin"
                )));
            }
            idx.push(i);
        }
        Ok(idx)
    }
}

fn node_coordinates(m: usize, center: &[f64], spacing: f64, half_width: usize, mut lin: usize) -> Vec<f64> {
    let side = 2 * half_width + 1;
    (0..2 * m)
        .map(|d| {
            let i = lin % side;
            lin /= side;
            center[d] + (i as f64 - half_width as f64) * spacing
        })
        .collect()
}

/// Scalar curvature `−2 g^{ab̄}∂_a∂_b̄ ln det g` at a grid node.
pub fn scalar_curvature_grid(p: &GridPotential, point: &[f64]) -> Result<f64, CalculusError> {
    let idx = p.locate(point)?;
    let n = 2 * p.m;
    let mut cache: HashMap<Vec<i64>, f64> = HashMap::new();
    let mut logdet = |q: &[i64]| -> Result<f64, CalculusError> {
        if let Some(v) = cache.get(q) {
            return Ok(*v);
        }
        let v = p.log_det(q)?;
        cache.insert(q.to_vec(), v);
        Ok(v)
    };
    // Real Hessian of L = ln det g at the node.
    let h2 = p.spacing * p.spacing;
    let mut hess = DMatrix::zeros(n, n);
    let mut q = idx.clone();
    for a in 0..n {
        let mut acc = 0.0;
        for &(o, w) in &D2 {
            q[a] = idx[a] + o;
            acc += w * logdet(&q)?;
        }
        q[a] = idx[a];
        hess[(a, a)] = acc / h2;
        for b in a + 1..n {
            let mut acc = 0.0;
            for &(oa, wa) in &D1 {
                for &(ob, wb) in &D1 {
                    q[a] = idx[a] + oa;
                    q[b] = idx[b] + ob;
                    acc += wa * wb * logdet(&q)?;
                }
            }
            q[a] = idx[a];
            q[b] = idx[b];
            hess[(a, b)] = acc / h2;
            hess[(b, a)] = acc / h2;
        }
    }
    let hl = p.complex_hessian_realified(&hess, 0.0);
    let g = p.complex_hessian_realified(&p.real_hessian(&idx), p.quadratic);
    let ginv_hl = g
        .clone()
        .cholesky()
        .ok_or(CalculusError::DegenerateMetric { s: p.node_radius_sq(&idx), g_tangent: f64::NAN, g_radial: f64::NAN })?
        .solve(&hl);
    // tr of the realified product is twice the complex trace.
    Ok(-2.0 * 0.5 * ginv_hl.trace())
}
