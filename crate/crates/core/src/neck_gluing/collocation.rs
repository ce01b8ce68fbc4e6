//! Chebyshev collocation in `x = ln s` for radial fourth-order problems,
//! with exact Jacobians and a damped Newton iteration.

use nalgebra::{DMatrix, DVector};

use super::{GluingError, Region};
use crate::kahler_calculus::potential::log_to_linear_derivatives;
use crate::kahler_calculus::radial::scalar_curvature_from_derivatives;
use crate::numerics::chebyshev::{basis_derivatives, gauss_points, ChebyshevSeries};
use crate::numerics::Dual;

/// `s`-derivatives through fourth order of every basis function; entry `[k][j]`.
pub(crate) type BasisTable = [Vec<f64>; 5];

/// Collocation grid on `[s_lo, s_hi]` with `degree − 3` interior Gauss points.
#[derive(Clone, Debug)]
pub(crate) struct Grid {
    pub degree: usize,
    pub a: f64,
    pub b: f64,
    pub nodes: Vec<f64>,
    pub basis: Vec<BasisTable>,
}

impl Grid {
    pub fn new(s_lo: f64, s_hi: f64, degree: usize) -> Self {
        let (a, b) = (s_lo.ln(), s_hi.ln());
        let nodes: Vec<f64> = gauss_points(degree - 3, a, b).into_iter().map(f64::exp).collect();
        let basis = nodes.iter().map(|&s| basis_in_s(degree, a, b, s)).collect();
        Self { degree, a, b, nodes, basis }
    }

    pub fn basis_at(&self, s: f64) -> BasisTable {
        basis_in_s(self.degree, self.a, self.b, s)
    }

    pub fn series(&self, coeffs: &[f64]) -> ChebyshevSeries {
        ChebyshevSeries::new(self.a, self.b, coeffs[..=self.degree].to_vec())
    }
}

fn basis_in_s(degree: usize, a: f64, b: f64, s: f64) -> BasisTable {
    let bx = basis_derivatives(degree, a, b, s.ln());
    let mut out: BasisTable = std::array::from_fn(|_| vec![0.0; degree + 1]);
    for j in 0..=degree {
        let d = log_to_linear_derivatives(s, std::array::from_fn(|k| bx[k][j]));
        for k in 0..5 {
            out[k][j] = d[k];
        }
    }
    out
}

/// `Σ_j c_j B_j^{(k)}` for `k = 0..4`.
pub(crate) fn combine(basis: &BasisTable, coeffs: &[f64]) -> [f64; 5] {
    std::array::from_fn(|k| basis[k].iter().zip(coeffs).map(|(b, c)| b * c).sum())
}

/// Scalar curvature of `base + p` at `s` and its gradient with respect to
/// `[F′, F″, F‴, F⁗]`.
pub(crate) fn scal_with_gradient(
    region: Region,
    m: usize,
    s: f64,
    f: [f64; 5],
) -> Result<(f64, [f64; 4]), GluingError> {
    if !(f[1] > 0.0 && f[1] + s * f[2] > 0.0) {
        return Err(GluingError::DegenerateMetric { region, s });
    }
    let value = scalar_curvature_from_derivatives(m, s, [f[1], f[2], f[3], f[4]]);
    let grad = std::array::from_fn(|l| {
        let d: [Dual; 4] = std::array::from_fn(|k| Dual::new(f[k + 1], if k == l { 1.0 } else { 0.0 }));
        scalar_curvature_from_derivatives(m, s, d).d
    });
    Ok((value, grad))
}

/// Jacobian row `Σ_l g_l B_j^{(l+offset)}` over all basis functions.
pub(crate) fn chain_row(basis: &BasisTable, grad: &[f64], offset: usize) -> Vec<f64> {
    (0..basis[0].len()).map(|j| grad.iter().enumerate().map(|(l, g)| g * basis[l + offset][j]).sum()).collect()
}

/// Result of a converged Newton solve.
#[derive(Clone, Debug)]
pub(crate) struct NewtonOutcome {
    pub u: DVector<f64>,
    pub iterations: usize,
}

const MAX_NEWTON: usize = 60;

/// Damped Newton with backtracking on the row-equilibrated residual.
///
/// Convergence: the accepted step is below `tol·‖u‖∞`, or the iteration has
/// stagnated at roundoff (the step no longer halves) with a small residual.
pub(crate) fn damped_newton<S>(
    region: Region,
    u0: DVector<f64>,
    tol: f64,
    system: S,
) -> Result<NewtonOutcome, GluingError>
where
    S: Fn(&DVector<f64>) -> Result<(DVector<f64>, DMatrix<f64>), GluingError>,
{
    let mut u = u0;
    let (mut r, mut jac) = system(&u)?;
    let weights: DVector<f64> = DVector::from_iterator(
        r.len(),
        jac.row_iter().map(|row| {
            let mx = row.amax();
            if mx > 0.0 {
                1.0 / mx
            } else {
                1.0
            }
        }),
    );
    let norm = |r: &DVector<f64>| r.component_mul(&weights).amax();
    let mut res = norm(&r);
    let mut prev_step = f64::INFINITY;
    for it in 1..=MAX_NEWTON {
        let mut scaled = jac.clone();
        for (i, mut row) in scaled.row_iter_mut().enumerate() {
            row *= weights[i];
        }
        let rhs = -r.component_mul(&weights);
        let delta = scaled.lu().solve(&rhs).ok_or(GluingError::SingularJacobian(region))?;
        let mut lambda = 1.0;
        let accepted = loop {
            let trial = &u + &delta * lambda;
            match system(&trial) {
                Ok((rt, jt)) => {
                    let rn = norm(&rt);
                    if rn <= (1.0 - 1e-4 * lambda) * res || rn <= 1e-15 || lambda < 1.0 / 64.0 && rn <= res * 1.5 {
                        break Some((trial, rt, jt, rn));
                    }
                }
                Err(GluingError::DegenerateMetric { .. }) | Err(GluingError::Calculus(_)) => {}
                Err(e) => return Err(e),
            }
            lambda *= 0.5;
            if lambda < 1e-4 {
                break None;
            }
        };
        let Some((trial, rt, jt, rn)) = accepted else {
            return Err(GluingError::NewtonDivergence { region, iterations: it, residual: res });
        };
        let step = (&trial - &u).amax();
        u = trial;
        r = rt;
        jac = jt;
        res = rn;
        let scale = u.amax();
        let stagnated = it >= 3 && step > 0.5 * prev_step && res <= 1e-9;
        if step <= tol * scale || step == 0.0 || stagnated {
            return Ok(NewtonOutcome { u, iterations: it });
        }
        prev_step = step;
    }
    Err(GluingError::NewtonDivergence { region, iterations: MAX_NEWTON, residual: res })
}
