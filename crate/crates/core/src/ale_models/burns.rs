//! The scalar-flat Burns metric on the blow-up of ℂ² at the origin.

use super::AleError;
use crate::kahler_calculus::RadialKahlerPotential;

/// Domain used for closed-form model potentials.
pub const CLOSED_FORM_DOMAIN: (f64, f64) = (1e-12, 1e12);

/// `A(s) = ln s + λs` on ℂ² (log part carried analytically).
pub fn burns_potential(lambda: f64) -> Result<RadialKahlerPotential, AleError> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(AleError::InvalidParameter(format!("λ = {lambda} must be positive")));
    }
    Ok(RadialKahlerPotential::closed_form(2, CLOSED_FORM_DOMAIN, 1.0, move |s| s * lambda)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_values() {
        let a = burns_potential(1.0).unwrap().derivatives(1.0).unwrap();
        assert_eq!(&a[..3], &[1.0, 2.0, -1.0]);
        assert!(burns_potential(0.0).is_err());
    }
}
