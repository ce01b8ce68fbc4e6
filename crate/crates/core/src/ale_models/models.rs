//! ALE rescaling and the normalized model descriptors used by the gluing.
//!
//! A model is written in coordinates `u` with `t = |u|²` so that its leading
//! term is exactly `t/2`; the weighted model is `F_a(t) = a·F_1(t/a)`, whose
//! Kähler form is `a` times the pull-back of the unit one.

use serde::{Deserialize, Serialize};

use super::burns::CLOSED_FORM_DOMAIN;
use super::calabi::{calabi_zm_excess, calabi_zm_radial};
use super::{AleError, SimancaProfile};
use crate::kahler_calculus::RadialKahlerPotential;

/// `G(t) = F(t/(2λ))`, i.e. the substitution `u = √(2λ)·v`, which turns a
/// profile with linear growth `λs` into one with leading term `t/2`.
pub fn ale_rescale(profile: &RadialKahlerPotential, lambda: f64) -> Result<RadialKahlerPotential, AleError> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(AleError::InvalidParameter(format!("λ = {lambda} must be positive")));
    }
    let s_top = profile.domain().1;
    let slope = profile.derivatives(s_top)?[1];
    if !((slope / lambda - 1.0).abs() < 0.1) {
        return Err(AleError::InvalidParameter(format!(
            "profile slope {slope} at s = {s_top} is inconsistent with linear growth λ = {lambda}"
        )));
    }
    Ok(profile.affine(1.0, 1.0 / (2.0 * lambda))?)
}

/// Which explicit model is glued in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AleKind {
    /// Burns metric (m = 2).
    Burns,
    /// Scalar-flat blow-up metric for m ≥ 3.
    Simanca,
    /// Ricci-flat metric on the resolution of ℂ^m/ℤ_m.
    CalabiZm,
}

/// A normalized, weighted ALE model in `t = |u|²`.
#[derive(Clone, Debug)]
pub struct AleModel {
    kind: AleKind,
    m: usize,
    weight: f64,
    excess: RadialKahlerPotential,
    potential: RadialKahlerPotential,
    tau0: f64,
    divisor_multiplicity: u32,
    log_coefficient: f64,
    decay_coefficient: f64,
}

impl AleModel {
    fn assemble(
        kind: AleKind,
        weight: f64,
        unit_excess: RadialKahlerPotential,
        unit_tau0: f64,
        divisor_multiplicity: u32,
        unit_decay: f64,
        unit_potential: Option<RadialKahlerPotential>,
    ) -> Result<Self, AleError> {
        if !(weight > 0.0) || !weight.is_finite() {
            return Err(AleError::InvalidParameter(format!("weight a = {weight} must be positive")));
        }
        let m = unit_excess.m();
        let excess = unit_excess.affine(weight, 1.0 / weight)?;
        let potential = match unit_potential {
            Some(p) => p.affine(weight, 1.0 / weight)?,
            None => RadialKahlerPotential::flat(m, excess.domain())?.add_scaled(&excess, 1.0)?,
        };
        // Only the Burns excess carries a log at infinity; the Calabi log sits at the divisor.
        let log_coefficient = if kind == AleKind::Burns { 2.0 * excess.c_log() } else { 0.0 };
        let decay_coefficient = unit_decay * weight.powi(m as i32 - 1);
        Ok(Self {
            kind,
            m,
            weight,
            excess,
            potential,
            tau0: unit_tau0 * weight,
            divisor_multiplicity,
            log_coefficient,
            decay_coefficient,
        })
    }

    /// Weighted Burns model: unit profile `t/2 + ln t`.
    pub fn burns(weight: f64) -> Result<Self, AleError> {
        let excess = RadialKahlerPotential::closed_form(2, CLOSED_FORM_DOMAIN, 1.0, |t| t * 0.0)?;
        Self::assemble(AleKind::Burns, weight, excess, 1.0, 1, 0.0, None)
    }

    /// Weighted scalar-flat model from a solved profile: unit profile `A(t/(2λ))`.
    pub fn simanca(profile: &SimancaProfile, weight: f64) -> Result<Self, AleError> {
        let lambda = profile.lambda();
        let m = profile.m();
        let excess = profile.excess().affine(1.0, 1.0 / (2.0 * lambda))?;
        let decay = -(2f64.powi(m as i32 - 2)) / (m as f64 - 2.0);
        Self::assemble(AleKind::Simanca, weight, excess, 1.0, 1, decay, None)
    }

    /// Weighted Calabi model: unit profile `φ(t)/2`.
    pub fn calabi(m: usize, weight: f64) -> Result<Self, AleError> {
        let excess = calabi_zm_excess(m, CLOSED_FORM_DOMAIN)?.affine(0.5, 1.0)?;
        let potential = calabi_zm_radial(m, CLOSED_FORM_DOMAIN)?.affine(0.5, 1.0)?;
        Self::assemble(AleKind::CalabiZm, weight, excess, 0.5, m as u32, 0.0, Some(potential))
    }

    /// Model kind.
    pub fn kind(&self) -> AleKind {
        self.kind
    }

    /// Complex dimension.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Kähler-class weight `a`.
    pub fn weight(&self) -> f64 {
        self.weight
    }

    /// Full potential `F_a(t)`.
    pub fn potential(&self) -> &RadialKahlerPotential {
        &self.potential
    }

    /// `F_a(t) − t/2`, evaluated without cancellation.
    pub fn excess(&self) -> &RadialKahlerPotential {
        &self.excess
    }

    /// Limit of the moment variable `tF_a′(t)` at the exceptional divisor.
    pub fn tau0(&self) -> f64 {
        self.tau0
    }

    /// Degree `k` of the normal bundle `𝒪(−k)` of the exceptional divisor.
    pub fn divisor_multiplicity(&self) -> u32 {
        self.divisor_multiplicity
    }

    /// Coefficient of `ln|u|` in the excess (`2a` for Burns, zero otherwise).
    pub fn log_coefficient(&self) -> f64 {
        self.log_coefficient
    }

    /// Leading coefficient of `|u|^{4−2m}` in the excess for m ≥ 3 (exact value
    /// of the scalar-flat expansion; zero for the Ricci-flat model).
    pub fn decay_coefficient(&self) -> f64 {
        self.decay_coefficient
    }
}
