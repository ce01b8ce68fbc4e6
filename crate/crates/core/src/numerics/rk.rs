//! Adaptive embedded Runge–Kutta integration (Dormand–Prince 5(4)).
//!
//! Accepted steps are kept as nodes; values between nodes are recovered by a
//! single re-step from the nearest node on the left, whose local error is
//! bounded by that of the accepted step.

/// Error-control and step-budget settings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepControl {
    /// Relative tolerance.
    pub rtol: f64,
    /// Absolute tolerance.
    pub atol: f64,
    /// Initial step size.
    pub h0: f64,
    /// Largest permitted step.
    pub h_max: f64,
    /// Step budget.
    pub max_steps: usize,
}

/// Integration failures.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RkError {
    /// Step size underflowed while trying to meet the tolerance.
    #[error("step size underflow at t = {t} (h = {h})")]
    StepUnderflow { t: f64, h: f64 },
    /// Step budget exhausted.
    #[error("step budget of {0} steps exhausted")]
    TooManySteps(usize),
    /// Right-hand side produced a non-finite value.
    #[error("non-finite right-hand side at t = {0}")]
    NonFinite(f64),
}

/// Accepted integration nodes `(t_i, y_i)`.
#[derive(Clone, Debug)]
pub struct Trajectory<const D: usize> {
    /// Node abscissae, monotone in the direction of integration.
    pub t: Vec<f64>,
    /// Node states.
    pub y: Vec<[f64; D]>,
}

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const E: [f64; 7] =
    [71.0 / 57600.0, 0.0, -71.0 / 16695.0, 71.0 / 1920.0, -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0];

/// One Dormand–Prince step; returns the fifth-order solution and the error estimate.
pub fn dp_step<const D: usize, F>(f: &F, t: f64, y: &[f64; D], h: f64) -> ([f64; D], [f64; D])
where
    F: Fn(f64, &[f64; D]) -> [f64; D],
{
    let mut k = [[0.0; D]; 7];
    k[0] = f(t, y);
    for s in 1..7 {
        let mut ys = *y;
        for (j, kj) in k.iter().enumerate().take(s) {
            let a = A[s][j];
            if a != 0.0 {
                for d in 0..D {
                    ys[d] += h * a * kj[d];
                }
            }
        }
        k[s] = f(t + C[s] * h, &ys);
    }
    // The seventh stage is evaluated at the new point (FSAL); its state equals y_new.
    let mut y_new = *y;
    for (j, kj) in k.iter().enumerate().take(6) {
        for d in 0..D {
            y_new[d] += h * A[6][j] * kj[d];
        }
    }
    let mut err = [0.0; D];
    for (j, kj) in k.iter().enumerate() {
        for d in 0..D {
            err[d] += h * E[j] * kj[d];
        }
    }
    (y_new, err)
}

/// Integrates `y′ = f(t, y)` from `t0` to `t1` (either direction).
pub fn integrate<const D: usize, F>(
    f: F,
    t0: f64,
    y0: [f64; D],
    t1: f64,
    ctl: StepControl,
) -> Result<Trajectory<D>, RkError>
where
    F: Fn(f64, &[f64; D]) -> [f64; D],
{
    let dir = if t1 >= t0 { 1.0 } else { -1.0 };
    let mut traj = Trajectory { t: vec![t0], y: vec![y0] };
    let (mut t, mut y) = (t0, y0);
    let mut h = ctl.h0.min(ctl.h_max).min((t1 - t0).abs());
    let mut steps = 0;
    while (t1 - t) * dir > 0.0 {
        if steps >= ctl.max_steps {
            return Err(RkError::TooManySteps(ctl.max_steps));
        }
        steps += 1;
        let last = h >= (t1 - t).abs();
        let h_try = if last { (t1 - t).abs() } else { h };
        let (y_new, err) = dp_step(&f, t, &y, dir * h_try);
        if y_new.iter().any(|v| !v.is_finite()) {
            return Err(RkError::NonFinite(t));
        }
        let mut norm = 0.0;
        for d in 0..D {
            let sc = ctl.atol + ctl.rtol * y[d].abs().max(y_new[d].abs());
            norm += (err[d] / sc).powi(2);
        }
        let norm = (norm / D as f64).sqrt();
        let factor = if norm == 0.0 { 5.0 } else { (0.9 * norm.powf(-0.2)).clamp(0.2, 5.0) };
        if norm <= 1.0 {
            t = if last { t1 } else { t + dir * h_try };
            y = y_new;
            traj.t.push(t);
            traj.y.push(y);
            h = (h_try * factor).min(ctl.h_max);
        } else {
            h = h_try * factor;
            if h < 1e-14 * t.abs().max(1e-300) {
                return Err(RkError::StepUnderflow { t, h });
            }
        }
    }
    Ok(traj)
}

impl<const D: usize> Trajectory<D> {
    /// State at `t` by a single re-step from the nearest node before `t`
    /// (in the direction of integration).  `t` is clamped to the covered range.
    pub fn state_at<F>(&self, f: &F, t: f64) -> [f64; D]
    where
        F: Fn(f64, &[f64; D]) -> [f64; D],
    {
        let n = self.t.len();
        let forward = self.t[n - 1] >= self.t[0];
        let key = |v: f64| if forward { v } else { -v };
        let target = key(t).clamp(key(self.t[0]), key(self.t[n - 1]));
        let idx = self.t.partition_point(|&v| key(v) <= target).saturating_sub(1);
        let t_node = self.t[idx];
        let h = if forward { target - t_node } else { -target - t_node };
        if h == 0.0 {
            return self.y[idx];
        }
        dp_step(f, t_node, &self.y[idx], h).0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_growth() {
        let ctl = StepControl { rtol: 1e-12, atol: 1e-14, h0: 1e-3, h_max: 1.0, max_steps: 100_000 };
        let f = |_t: f64, y: &[f64; 1]| [y[0]];
        let tr = integrate(f, 0.0, [1.0], 2.0, ctl).unwrap();
        let yend = tr.y.last().unwrap()[0];
        assert!((yend - 2f64.exp()).abs() < 1e-10);
        let mid = tr.state_at(&f, 1.234)[0];
        assert!((mid - 1.234f64.exp()).abs() < 1e-10);
    }

    #[test]
    fn backward_integration() {
        let ctl = StepControl { rtol: 1e-12, atol: 1e-14, h0: 1e-3, h_max: 1.0, max_steps: 100_000 };
        let f = |t: f64, _y: &[f64; 1]| [t.cos()];
        let tr = integrate(f, 1.0, [1f64.sin()], 0.0, ctl).unwrap();
        assert!(tr.y.last().unwrap()[0].abs() < 1e-11);
        let mid = tr.state_at(&f, 0.3)[0];
        assert!((mid - 0.3f64.sin()).abs() < 1e-11);
    }
}
