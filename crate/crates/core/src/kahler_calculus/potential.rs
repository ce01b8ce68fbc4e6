//! Rotationally symmetric Kähler potentials `F(s)`, `s = |z|²`, on annuli of ℂ^m.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::CalculusError;
use crate::numerics::chebyshev::{lobatto_points, ChebyshevSeries};
use crate::numerics::spline::QuinticSpline;
use crate::numerics::Jet;

/// Default spline node density (nodes per decade of `s`).
pub const DEFAULT_NODES_PER_DECADE: usize = 400;

/// Smooth part of a radial profile: returns `[F, F′, F″, F‴, F⁗]` at `s`.
pub trait ProfileRepr: Send + Sync + fmt::Debug {
    /// Value and derivatives through fourth order with respect to `s`.
    fn derivatives(&self, s: f64) -> [f64; 5];
    /// Short label of the representation, recorded in metadata.
    fn kind(&self) -> &'static str;
}

/// Jet-valued closure evaluating a closed-form expression.
pub type JetFn = Arc<dyn Fn(Jet) -> Jet + Send + Sync>;
/// Plain scalar closure.
pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Closed-form profile evaluated on Taylor jets (exact derivatives).
#[derive(Clone)]
pub struct ClosedForm {
    f: JetFn,
}

impl fmt::Debug for ClosedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("ClosedForm")
    }
}

impl ProfileRepr for ClosedForm {
    fn derivatives(&self, s: f64) -> [f64; 5] {
        (self.f)(Jet::variable(s)).derivatives()
    }
    fn kind(&self) -> &'static str {
        "closed_form"
    }
}

/// Profile given by a scalar value function and a closed-form jet of `F′`.
#[derive(Clone)]
pub struct ValueAndSlope {
    value: ScalarFn,
    slope: JetFn,
}

impl fmt::Debug for ValueAndSlope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("ValueAndSlope")
    }
}

impl ProfileRepr for ValueAndSlope {
    fn derivatives(&self, s: f64) -> [f64; 5] {
        let d = (self.slope)(Jet::variable(s)).derivatives();
        [(self.value)(s), d[0], d[1], d[2], d[3]]
    }
    fn kind(&self) -> &'static str {
        "value_and_slope"
    }
}

/// Converts derivatives with respect to `x = ln s` into derivatives with respect to `s`.
pub fn log_to_linear_derivatives(s: f64, dx: [f64; 5]) -> [f64; 5] {
    // s^k F^(k) = D(D−1)…(D−k+1) F with D = d/dx.
    let [f, d1, d2, d3, d4] = dx;
    [
        f,
        d1 / s,
        (d2 - d1) / (s * s),
        (d3 - 3.0 * d2 + 2.0 * d1) / (s * s * s),
        (d4 - 6.0 * d3 + 11.0 * d2 - 6.0 * d1) / (s * s * s * s),
    ]
}

/// Quintic spline stored in the variable `x = ln s`.
#[derive(Clone, Debug)]
pub struct LogSpline {
    spline: QuinticSpline,
}

impl ProfileRepr for LogSpline {
    fn derivatives(&self, s: f64) -> [f64; 5] {
        log_to_linear_derivatives(s, self.spline.derivatives(s.ln()))
    }
    fn kind(&self) -> &'static str {
        "quintic_spline"
    }
}

/// Chebyshev series in `x = ln s` (the trial space of the collocation solvers).
#[derive(Clone, Debug)]
pub struct LogChebyshev {
    /// The series in `ln s`.
    pub series: ChebyshevSeries,
}

impl ProfileRepr for LogChebyshev {
    fn derivatives(&self, s: f64) -> [f64; 5] {
        log_to_linear_derivatives(s, self.series.derivatives(s.ln()))
    }
    fn kind(&self) -> &'static str {
        "chebyshev_log_s"
    }
}

/// `a(s) + coef·b(s)`.
#[derive(Clone, Debug)]
struct Sum {
    a: Arc<dyn ProfileRepr>,
    b: Arc<dyn ProfileRepr>,
    coef: f64,
}

impl ProfileRepr for Sum {
    fn derivatives(&self, s: f64) -> [f64; 5] {
        let (x, y) = (self.a.derivatives(s), self.b.derivatives(s));
        std::array::from_fn(|k| x[k] + self.coef * y[k])
    }
    fn kind(&self) -> &'static str {
        "sum"
    }
}

/// `scale·F(arg·s) + shift`.
#[derive(Clone, Debug)]
struct Affine {
    inner: Arc<dyn ProfileRepr>,
    scale: f64,
    arg: f64,
    shift: f64,
}

impl ProfileRepr for Affine {
    fn derivatives(&self, s: f64) -> [f64; 5] {
        let d = self.inner.derivatives(self.arg * s);
        let mut out = [0.0; 5];
        let mut factor = self.scale;
        for k in 0..5 {
            out[k] = factor * d[k];
            factor *= self.arg;
        }
        out[0] += self.shift;
        out
    }
    fn kind(&self) -> &'static str {
        "affine"
    }
}

/// Rotationally symmetric Kähler potential `F(s) = F_reg(s) + c_log·ln s`.
///
/// The induced metric `i∂∂̄F(|z|²)` has eigenvalues `F′` (multiplicity
/// `m − 1`, tangential) and `F′ + sF″` (radial).
#[derive(Clone, Debug)]
pub struct RadialKahlerPotential {
    m: usize,
    s_min: f64,
    s_max: f64,
    c_log: f64,
    repr: Arc<dyn ProfileRepr>,
}

/// Serialized form of a profile: samples on a node set plus the analytic log part.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileDocument {
    /// Complex dimension.
    pub m: usize,
    /// Node abscissae in `s`.
    pub s_nodes: Vec<f64>,
    /// Regular part `F(s) − c_log·ln s` at the nodes.
    #[serde(rename = "F_values")]
    pub f_values: Vec<f64>,
    /// Coefficient of the analytic `ln s` term.
    pub c_log: f64,
    /// Free-form provenance data.
    #[serde(default)]
    pub metadata: serde_json::Map<String, serde_json::Value>,
}

impl RadialKahlerPotential {
    /// Wraps an arbitrary representation of the regular part.
    pub fn new(m: usize, domain: (f64, f64), c_log: f64, repr: Arc<dyn ProfileRepr>) -> Result<Self, CalculusError> {
        if m < 2 {
            return Err(CalculusError::InvalidProfile(format!("complex dimension m = {m} < 2")));
        }
        let (s_min, s_max) = domain;
        if !(s_min > 0.0 && s_min < s_max) || s_min.is_nan() || s_max.is_nan() {
            return Err(CalculusError::InvalidProfile(format!("bad domain [{s_min}, {s_max}]")));
        }
        Ok(Self { m, s_min, s_max, c_log, repr })
    }

    /// Closed-form regular part evaluated on jets.
    pub fn closed_form<F>(m: usize, domain: (f64, f64), c_log: f64, f: F) -> Result<Self, CalculusError>
    where
        F: Fn(Jet) -> Jet + Send + Sync + 'static,
    {
        Self::new(m, domain, c_log, Arc::new(ClosedForm { f: Arc::new(f) }))
    }

    /// Regular part given by a value function and a closed-form jet of its derivative.
    pub fn from_value_and_slope<V, D>(
        m: usize,
        domain: (f64, f64),
        c_log: f64,
        value: V,
        slope: D,
    ) -> Result<Self, CalculusError>
    where
        V: Fn(f64) -> f64 + Send + Sync + 'static,
        D: Fn(Jet) -> Jet + Send + Sync + 'static,
    {
        Self::new(m, domain, c_log, Arc::new(ValueAndSlope { value: Arc::new(value), slope: Arc::new(slope) }))
    }

    /// The flat potential `s/2`.
    pub fn flat(m: usize, domain: (f64, f64)) -> Result<Self, CalculusError> {
        Self::closed_form(m, domain, 0.0, |s| s * 0.5)
    }

    /// Quintic-spline interpolant (in `ln s`) of regular-part samples.
    pub fn from_samples(m: usize, s_nodes: &[f64], f_values: &[f64], c_log: f64) -> Result<Self, CalculusError> {
        if s_nodes.iter().any(|s| !(*s > 0.0)) {
            return Err(CalculusError::InvalidProfile("spline nodes must be positive".into()));
        }
        let xs: Vec<f64> = s_nodes.iter().map(|s| s.ln()).collect();
        let spline = QuinticSpline::interpolate(&xs, f_values)?;
        let domain = (s_nodes[0], s_nodes[s_nodes.len() - 1]);
        Self::new(m, domain, c_log, Arc::new(LogSpline { spline }))
    }

    /// Chebyshev-in-`ln s` regular part on `[e^a, e^b]`.
    pub fn from_log_chebyshev(m: usize, series: ChebyshevSeries, c_log: f64) -> Result<Self, CalculusError> {
        let domain = (series.a.exp(), series.b.exp());
        Self::new(m, domain, c_log, Arc::new(LogChebyshev { series }))
    }

    /// Chebyshev–Lobatto nodes in `ln s` with the given density per decade.
    pub fn default_nodes(domain: (f64, f64), per_decade: usize) -> Vec<f64> {
        let decades = (domain.1 / domain.0).log10();
        let n = ((per_decade as f64 * decades).ceil() as usize).max(8);
        lobatto_points(n, domain.0.ln(), domain.1.ln()).into_iter().map(f64::exp).collect()
    }

    /// Complex dimension.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Domain `[s_min, s_max]`.
    pub fn domain(&self) -> (f64, f64) {
        (self.s_min, self.s_max)
    }

    /// Coefficient of the analytic `ln s` part.
    pub fn c_log(&self) -> f64 {
        self.c_log
    }

    /// Representation label.
    pub fn kind(&self) -> &'static str {
        self.repr.kind()
    }

    /// Shared handle on the regular-part representation.
    pub fn repr(&self) -> Arc<dyn ProfileRepr> {
        Arc::clone(&self.repr)
    }

    /// Same profile with a different domain (no re-representation).
    pub fn with_domain(&self, domain: (f64, f64)) -> Result<Self, CalculusError> {
        Self::new(self.m, domain, self.c_log, Arc::clone(&self.repr))
    }

    fn check_domain(&self, s: f64) -> Result<(), CalculusError> {
        let slack = 1e-12;
        if !(s >= self.s_min * (1.0 - slack) && s <= self.s_max * (1.0 + slack)) {
            return Err(CalculusError::Domain { s, min: self.s_min, max: self.s_max });
        }
        Ok(())
    }

    /// `[F, F′, F″, F‴, F⁗]` at `s`, including the log part.
    pub fn derivatives(&self, s: f64) -> Result<[f64; 5], CalculusError> {
        self.check_domain(s)?;
        let mut d = self.repr.derivatives(s);
        if self.c_log != 0.0 {
            let c = self.c_log;
            d[0] += c * s.ln();
            d[1] += c / s;
            d[2] -= c / (s * s);
            d[3] += 2.0 * c / (s * s * s);
            d[4] -= 6.0 * c / (s * s * s * s);
        }
        Ok(d)
    }

    /// Derivatives `[G, G′, …, G⁗]` of the regular part `G = F − c_log·ln s`
    /// together with `c_log`.  The log part contributes nothing to `(sF′)′`,
    /// so curvature is evaluated from this split without cancellation.
    pub fn split_derivatives(&self, s: f64) -> Result<([f64; 5], f64), CalculusError> {
        self.check_domain(s)?;
        Ok((self.repr.derivatives(s), self.c_log))
    }

    /// `F(s)`.
    pub fn value(&self, s: f64) -> Result<f64, CalculusError> {
        Ok(self.derivatives(s)?[0])
    }

    /// `self + t·other` on the intersection of the domains.
    pub fn add_scaled(&self, other: &Self, t: f64) -> Result<Self, CalculusError> {
        if self.m != other.m {
            return Err(CalculusError::InvalidProfile("dimension mismatch in sum".into()));
        }
        let domain = (self.s_min.max(other.s_min), self.s_max.min(other.s_max));
        let repr = Arc::new(Sum { a: Arc::clone(&self.repr), b: Arc::clone(&other.repr), coef: t });
        Self::new(self.m, domain, self.c_log + t * other.c_log, repr)
    }

    /// `self + c` (does not change the metric).
    pub fn add_constant(&self, c: f64) -> Self {
        let repr = Arc::new(Affine { inner: Arc::clone(&self.repr), scale: 1.0, arg: 1.0, shift: c });
        Self { repr, ..self.clone() }
    }

    /// `G(s) = scale·F(arg·s)`, with the log part re-split so that `G` carries
    /// `scale·c_log·ln s` analytically.  The domain becomes `domain/arg`.
    pub fn affine(&self, scale: f64, arg: f64) -> Result<Self, CalculusError> {
        if !(arg > 0.0) || !scale.is_finite() || scale == 0.0 {
            return Err(CalculusError::InvalidProfile(format!("bad affine map scale={scale}, arg={arg}")));
        }
        let shift = scale * self.c_log * arg.ln();
        let repr = Arc::new(Affine { inner: Arc::clone(&self.repr), scale, arg, shift });
        Self::new(self.m, (self.s_min / arg, self.s_max / arg), scale * self.c_log, repr)
    }

    /// Checks the positivity invariant on `samples` log-spaced interior points.
    pub fn check_positivity(&self, samples: usize) -> Result<(), CalculusError> {
        let (a, b) = (self.s_min.ln(), self.s_max.ln());
        for i in 0..samples {
            let s = (a + (b - a) * (i as f64 + 0.5) / samples as f64).exp();
            let d = self.derivatives(s)?;
            let (gt, gr) = (d[1], d[1] + s * d[2]);
            if !(gt > 0.0 && gr > 0.0) {
                return Err(CalculusError::DegenerateMetric { s, g_tangent: gt, g_radial: gr });
            }
        }
        Ok(())
    }

    /// Samples the regular part on `nodes` into a serializable document.
    pub fn to_document(&self, nodes: &[f64]) -> Result<ProfileDocument, CalculusError> {
        let mut f_values = Vec::with_capacity(nodes.len());
        for &s in nodes {
            self.check_domain(s)?;
            f_values.push(self.repr.derivatives(s)[0]);
        }
        let mut metadata = serde_json::Map::new();
        metadata.insert("source_representation".into(), self.kind().into());
        Ok(ProfileDocument { m: self.m, s_nodes: nodes.to_vec(), f_values, c_log: self.c_log, metadata })
    }

    /// Rebuilds a spline-backed profile from a document.
    pub fn from_document(doc: &ProfileDocument) -> Result<Self, CalculusError> {
        if doc.s_nodes.len() != doc.f_values.len() {
            return Err(CalculusError::Document("s_nodes and F_values differ in length".into()));
        }
        Self::from_samples(doc.m, &doc.s_nodes, &doc.f_values, doc.c_log)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_part_is_added_analytically() {
        let p = RadialKahlerPotential::closed_form(2, (0.1, 10.0), 1.0, |s| s).unwrap();
        let d = p.derivatives(1.0).unwrap();
        assert_eq!(d, [1.0, 2.0, -1.0, 2.0, -6.0]);
    }

    #[test]
    fn affine_map_keeps_log_split_consistent() {
        let p = RadialKahlerPotential::closed_form(2, (0.1, 10.0), 1.0, |s| s * 2.0).unwrap();
        let q = p.affine(3.0, 0.5).unwrap();
        let s = 4.0;
        let expect = 3.0 * ((0.5f64 * s).ln() + 2.0 * 0.5 * s);
        assert!((q.value(s).unwrap() - expect).abs() < 1e-13);
        assert_eq!(q.c_log(), 3.0);
        assert_eq!(q.domain(), (0.2, 20.0));
    }

    #[test]
    fn spline_roundtrip_through_document() {
        let p = RadialKahlerPotential::closed_form(2, (0.5, 50.0), 0.0, |s| (s + 1.0).ln()).unwrap();
        let nodes = RadialKahlerPotential::default_nodes(p.domain(), 100);
        let doc = p.to_document(&nodes).unwrap();
        let json = serde_json::to_string(&doc).unwrap();
        let back: ProfileDocument = serde_json::from_str(&json).unwrap();
        let q = RadialKahlerPotential::from_document(&back).unwrap();
        let (a, b) = (p.derivatives(3.3).unwrap(), q.derivatives(3.3).unwrap());
        assert!((a[0] - b[0]).abs() < 1e-12);
        assert!((a[2] - b[2]).abs() < 1e-9);
    }

    #[test]
    fn domain_is_enforced() {
        let p = RadialKahlerPotential::flat(3, (1.0, 2.0)).unwrap();
        assert!(matches!(p.derivatives(3.0), Err(CalculusError::Domain { .. })));
    }
}
