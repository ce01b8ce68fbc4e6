//! Independent reference computations shared by the integration tests.
//!
//! Nothing here calls into the solvers under test except for trivial data
//! access; the references are derived from exact first integrals and
//! textbook quadrature.

#![allow(dead_code)]

/// Gauss–Legendre nodes and weights on [−1, 1] (Newton iteration on P_n).
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

/// Composite Gauss–Legendre quadrature of `f` over `[a, b]`.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let rule = gauss_legendre(20);
    let h = (b - a) / panels as f64;
    let mut acc = 0.0;
    for p in 0..panels {
        let (lo, mid) = (a + p as f64 * h, a + (p as f64 + 0.5) * h);
        let _ = lo;
        for &(x, w) in &rule {
            acc += w * 0.5 * h * f(mid + 0.5 * h * x);
        }
    }
    acc
}

/// `λ` for the scalar-flat blow-up of ℂ^m from the first integral in the
/// moment variable `τ = sA′`: with `Θ(τ) = τ^m − (m−1)τ + (m−2)`,
/// `d ln s = τ^{m−1}dτ/Θ`, hence `ln λ = ∫_1^∞ [1/(τ−1) − τ^{m−1}/Θ(τ)] dτ`.
/// Dividing out the common factors `(τ−1)` the integrand is the rational
/// function `r/p` with `r = Σ_{i=1}^{m−2} Σ_{j<i} τ^j` and
/// `p = Σ_{i<m} τ^i − (m−1)`, which is free of cancellation.
pub fn simanca_lambda_quadrature(m: usize) -> f64 {
    let g = |t: f64| {
        let r: f64 = (1..m - 1).map(|i| (0..i).map(|j| t.powi(j as i32)).sum::<f64>()).sum();
        let p: f64 = (0..m).map(|i| t.powi(i as i32)).sum::<f64>() - (m - 1) as f64;
        r / p
    };
    let mut acc = integrate(g, 1.0, 2.0, 20);
    // τ ∈ [2, ∞) via τ = 2/x.
    acc += integrate(|x| g(2.0 / x) * 2.0 / (x * x), 0.0, 1.0, 40);
    acc.exp()
}

/// Centered fourth-order finite-difference second derivative.
pub fn fd2(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (-f(x + 2.0 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h) - f(x - 2.0 * h)) / (12.0 * h * h)
}

/// Centered fourth-order finite-difference first derivative.
pub fn fd1(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h)
}

/// Log-log least-squares slope (independent of the library's fitting helper).
pub fn slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.abs().ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let num: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let den: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    num / den
}

/// Log-spaced points.
pub fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| (lo.ln() + (hi / lo).ln() * i as f64 / (n - 1) as f64).exp()).collect()
}

/// Scalar curvature of the exact radial cscK metric on a divisor of type
/// `𝒪(−k)` with moment `tau0`, whose potential has vanishing `∂_rΔ₀` at
/// radius `r0` and unit-flat moment there (`τ(r0) = r0²/2`).
///
/// Uses the first integral `Θ(τ) = τ^m + Aτ + B − σ′τ^{m+1}` with `A, B`
/// fixed by smoothness at the divisor, and solves the one-dimensional
/// outer condition for `σ′` by bisection.
pub fn glued_nu_oracle(m: usize, k: u32, tau0: f64, r0: f64) -> f64 {
    let mf = m as f64;
    let mi = m as i32;
    let tau1 = r0 * r0 / 2.0;
    // With Θ = τ^m + D the outer condition reduces, without cancellation, to
    // D_τ τ^{2−m} + u·v = 0 where u = Dτ^{1−m}, v = D_ττ^{1−m} + (1−m)Dτ^{−m}.
    let g = |sp: f64| {
        let a = (k as f64 - mf) * tau0.powi(mi - 1) + (mf + 1.0) * sp * tau0.powi(mi);
        let t = tau1;
        let d = a * (t - tau0) - tau0.powi(mi) - sp * (t.powi(mi + 1) - tau0.powi(mi + 1));
        let d_t = a - (mf + 1.0) * sp * t.powi(mi);
        let u = d * t.powi(1 - mi);
        let v = d_t * t.powi(1 - mi) + (1.0 - mf) * d * t.powi(-mi);
        d_t * t.powi(2 - mi) + u * v
    };
    let a0 = (k as f64 - mf) * tau0.powi(mi - 1);
    let guess = a0 / ((mf + 1.0) * tau1.powi(mi));
    let mut width = if guess != 0.0 { 4.0 * guess.abs() } else { tau0.powi(2 * mi) };
    while g(-width) * g(width) > 0.0 {
        width *= 2.0;
        assert!(width < 1e3, "oracle bracket failed");
    }
    let (mut lo, mut hi) = (-width, width);
    let glo = g(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) * glo > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    2.0 * mf * (mf + 1.0) * 0.5 * (lo + hi)
}

/// Eighth-order centred second-difference weights (exact on polynomials of degree ≤ 9).
const D2_8: [(i32, f64); 9] = [
    (-4, -1.0 / 560.0),
    (-3, 8.0 / 315.0),
    (-2, -1.0 / 5.0),
    (-1, 8.0 / 5.0),
    (0, -205.0 / 72.0),
    (1, 8.0 / 5.0),
    (2, -1.0 / 5.0),
    (3, 8.0 / 315.0),
    (4, -1.0 / 560.0),
];

/// Finite-difference Euclidean Laplacian of `f` at `x` with step `h`.
pub fn fd_laplacian(f: &dyn Fn(&[f64]) -> f64, x: &[f64], h: f64) -> f64 {
    let mut p = x.to_vec();
    let mut acc = 0.0;
    for i in 0..x.len() {
        for &(o, w) in &D2_8 {
            p[i] = x[i] + o as f64 * h;
            acc += w * f(&p);
        }
        p[i] = x[i];
    }
    acc / (h * h)
}

/// Finite-difference bi-Laplacian (the Laplacian stencil applied twice).
pub fn fd_bilaplacian(f: &dyn Fn(&[f64]) -> f64, x: &[f64], h: f64) -> f64 {
    let lap = |y: &[f64]| fd_laplacian(f, y, h);
    fd_laplacian(&lap, x, h)
}

/// A point of radius `radius` in ℝ^{2m} off every coordinate axis and plane.
pub fn generic_point(m: usize, radius: f64) -> Vec<f64> {
    let dir: Vec<f64> = (0..2 * m).map(|i| 0.9 - 0.37 * i as f64).collect();
    let n = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
    dir.iter().map(|v| radius * v / n).collect()
}
