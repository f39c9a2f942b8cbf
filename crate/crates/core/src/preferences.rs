//! CRRA welfare of an income distribution.
//!
//! With `U(C) = C^(1-φ)/(1-φ)` and lognormal income, expected utility is
//! `exp((1-φ)(cμ+b) + ½(1-φ)²c²σ²) / (1-φ)`. For `φ > 1` utilities are
//! negative and "preferred" means algebraically larger.

use serde::Serialize;

use crate::economy::{Economy, SkillDistribution};
use crate::error::{ModelError, Result};

/// Coefficient of relative risk aversion `φ > 0, φ ≠ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Preference {
    phi: f64,
}

impl Preference {
    pub fn new(phi: f64) -> Result<Self> {
        if !(phi > 0.0 && phi.is_finite()) {
            return Err(ModelError::domain(format!(
                "risk aversion phi={phi} must be positive and finite"
            )));
        }
        if phi == 1.0 {
            return Err(ModelError::domain("phi=1 (log utility) is not supported; use 1 ± 1e-6"));
        }
        Ok(Self { phi })
    }

    #[cfg(test)]
    pub(crate) fn unchecked(phi: f64) -> Self {
        Self { phi }
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// Utility of a single consumption level.
    pub fn utility(&self, consumption: f64) -> f64 {
        let k = 1.0 - self.phi;
        (k * consumption.ln()).exp() / k
    }

    /// Utility evaluated from log consumption, which avoids overflow in the tails.
    pub fn utility_of_log(&self, log_consumption: f64) -> f64 {
        let k = 1.0 - self.phi;
        (k * log_consumption).exp() / k
    }
}

fn log_abs_expected_utility(econ: &Economy, phi: f64) -> f64 {
    let k = 1.0 - phi;
    let (b, c) = (econ.tech.b(), econ.tech.c());
    k * (c * econ.skills.mu() + b) + 0.5 * k * k * c * c * econ.skills.variance()
}

pub fn expected_utility(econ: &Economy, pref: &Preference) -> f64 {
    let k = 1.0 - pref.phi;
    log_abs_expected_utility(econ, pref.phi).exp() / k
}

/// `∂E[U]/∂c = exp(...) (μ + (1-φ) c σ²)`.
pub fn expected_utility_gradient_c(econ: &Economy, pref: &Preference) -> f64 {
    let k = 1.0 - pref.phi;
    let c = econ.tech.c();
    log_abs_expected_utility(econ, pref.phi).exp() * (econ.skills.mu() + k * c * econ.skills.variance())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Plateau {
    /// Interior maximizer `c*` with the second derivative there (negative).
    Interior { c_star: f64, second_order: f64 },
    /// Expected utility rises with `c` without bound (`φ < 1`).
    Unbounded,
}

/// Technology level that maximizes expected utility, `c* = μ/((φ-1)σ²)`.
pub fn optimal_plateau(skills: &SkillDistribution, pref: &Preference) -> Result<Plateau> {
    if skills.mu() <= 0.0 {
        return Err(ModelError::domain(format!(
            "mean skill mu={} must be positive for a plateau",
            skills.mu()
        )));
    }
    let phi = pref.phi;
    if phi < 1.0 {
        return Ok(Plateau::Unbounded);
    }
    let c_star = skills.mu() / ((phi - 1.0) * skills.variance());
    // Sign of the second derivative at c*, up to the positive exponential factor.
    let second_order = (1.0 - phi) * skills.variance();
    debug_assert!(second_order < 0.0);
    Ok(Plateau::Interior { c_star, second_order })
}

fn same_skills(a: &Economy, b: &Economy) -> Result<()> {
    if a.skills == b.skills {
        Ok(())
    } else {
        Err(ModelError::domain(format!(
            "economies must share a skill distribution ({:?} vs {:?})",
            a.skills, b.skills
        )))
    }
}

/// `E[U_a] / E[U_b]` in closed form.
pub fn utility_ratio(econ_a: &Economy, econ_b: &Economy, pref: &Preference) -> Result<f64> {
    same_skills(econ_a, econ_b)?;
    let k = 1.0 - pref.phi;
    let (ca, cb) = (econ_a.tech.c(), econ_b.tech.c());
    let level = (ca - cb) * econ_a.skills.mu() + econ_a.tech.b() - econ_b.tech.b();
    let spread = 0.5 * (ca * ca - cb * cb) * econ_a.skills.variance();
    Ok((k * (level + k * spread)).exp())
}

/// Risk aversion at which an agent is indifferent between `econ_a` (the
/// later year) and `econ_b`.
pub fn cutoff_risk_aversion(econ_a: &Economy, econ_b: &Economy) -> Result<f64> {
    same_skills(econ_a, econ_b)?;
    let (ca, cb) = (econ_a.tech.c(), econ_b.tech.c());
    let spread = 0.5 * (ca * ca - cb * cb) * econ_a.skills.variance();
    if spread == 0.0 {
        return Err(ModelError::Degenerate(
            "economies share the same c; no finite cutoff risk aversion".to_string(),
        ));
    }
    let level = (ca - cb) * econ_a.skills.mu() + econ_a.tech.b() - econ_b.tech.b();
    Ok((level + spread) / spread)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::economy::Technology;

    fn econ(b: f64, c: f64) -> Economy {
        Economy::new(Technology::from_b(b, c).unwrap(), SkillDistribution::iq())
    }

    #[test]
    fn linear_utility_is_expected_income() {
        let e = econ(5.5, 0.0579);
        let eu = expected_utility(&e, &Preference::unchecked(0.0));
        assert!((eu / e.income_moments().mean - 1.0).abs() < 1e-14);
    }

    #[test]
    fn sign_and_monotonicity_in_b() {
        let pref = Preference::new(3.0).unwrap();
        let lo = expected_utility(&econ(5.0, 0.05), &pref);
        let hi = expected_utility(&econ(6.0, 0.05), &pref);
        assert!(lo < 0.0 && hi < 0.0);
        assert!(hi.abs() < lo.abs());
        assert!(expected_utility(&econ(5.0, 0.05), &Preference::new(0.5).unwrap()) > 0.0);
    }

    #[test]
    fn rejects_log_utility_and_nonpositive() {
        assert!(Preference::new(1.0).is_err());
        assert!(Preference::new(0.0).is_err());
        assert!(Preference::new(-2.0).is_err());
        assert!(Preference::new(1.0 + 1e-6).is_ok());
    }

    #[test]
    fn plateau_cases() {
        let s = SkillDistribution::iq();
        match optimal_plateau(&s, &Preference::new(2.5).unwrap()).unwrap() {
            Plateau::Interior { c_star, second_order } => {
                assert!((c_star - 100.0 / 337.5).abs() < 1e-15);
                assert!(second_order < 0.0);
            }
            other => panic!("{other:?}"),
        }
        let s4 = SkillDistribution::new(4.0, 2.0).unwrap();
        assert_eq!(
            optimal_plateau(&s4, &Preference::new(2.0).unwrap()).unwrap(),
            Plateau::Interior {
                c_star: 1.0,
                second_order: -4.0
            }
        );
        assert_eq!(
            optimal_plateau(&s, &Preference::new(0.5).unwrap()).unwrap(),
            Plateau::Unbounded
        );
        let neg = SkillDistribution::new(0.0, 15.0).unwrap();
        assert!(optimal_plateau(&neg, &Preference::new(2.0).unwrap()).is_err());
    }

    #[test]
    fn ratio_identity_and_skill_mismatch() {
        let e = econ(5.5, 0.0579);
        assert_eq!(utility_ratio(&e, &e, &Preference::new(2.0).unwrap()).unwrap(), 1.0);
        let other = e.with_skills(SkillDistribution::new(100.0, 16.0).unwrap());
        assert!(utility_ratio(&e, &other, &Preference::new(2.0).unwrap()).is_err());
        assert!(cutoff_risk_aversion(&e, &other).is_err());
    }

    #[test]
    fn cutoff_published_years() {
        let phi = cutoff_risk_aversion(&econ(5.5, 0.0579), &econ(7.2, 0.0376)).unwrap();
        assert!((phi - 2.51).abs() <= 0.02);
        assert!(matches!(
            cutoff_risk_aversion(&econ(5.5, 0.05), &econ(7.2, 0.05)),
            Err(ModelError::Degenerate(_))
        ));
    }
}
