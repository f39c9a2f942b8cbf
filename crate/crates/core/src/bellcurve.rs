//! Rent competition: a share `1-α` of earnings comes from out-ranking the
//! population mean rather than from productive skill.
//!
//! Agent `i` earns `A exp(α c y_i + (1-α) c (y_i - μ))` with
//! `y_i ~ N(μ_i, σ)`, `μ_i = ln I_i`, and takes the population mean `μ` as
//! given. The planner internalizes that `μ_i = μ` in a symmetric outcome.
//! Both investment levels are closed forms of the symmetric fixed point:
//!
//! - private: `I = (A c exp(½c²σ²))^(1/(1-αc))`
//! - planner: `I = (A α c exp(½c²σ²))^(1/(1-αc))`

use serde::Serialize;

use crate::economy::Economy;
use crate::error::{ModelError, Result};
use crate::investment::{InvestmentSolution, Regime};

/// Share `α ∈ [0, 1]` of income earned through productivity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RentShare {
    alpha: f64,
}

impl RentShare {
    pub fn new(alpha: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&alpha) {
            Ok(Self { alpha })
        } else {
            Err(ModelError::domain(format!(
                "rent share alpha={alpha} must lie in [0, 1]"
            )))
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

/// `E[e(y_i)]` for an agent with mean skill `own_mu` in a population with
/// mean skill `population_mu`.
pub fn expected_earnings(econ: &Economy, rent: &RentShare, own_mu: f64, population_mu: f64) -> f64 {
    let c = econ.tech.c();
    econ.tech.a() * (c * own_mu - (1.0 - rent.alpha) * c * population_mu + econ.half_log_variance()).exp()
}

/// Private first-order condition with `μ_i = ln I_i`; zero at a best response.
pub fn private_foc_residual(econ: &Economy, rent: &RentShare, investment: f64, population_mu: f64) -> f64 {
    expected_earnings(econ, rent, investment.ln(), population_mu) * econ.tech.c() / investment - 1.0
}

/// Planner first-order condition at a symmetric `μ = ln I`.
pub fn social_foc_residual(econ: &Economy, rent: &RentShare, investment: f64) -> f64 {
    let mu = investment.ln();
    expected_earnings(econ, rent, mu, mu) * rent.alpha * econ.tech.c() / investment - 1.0
}

fn check_interior(econ: &Economy, rent: &RentShare) -> Result<()> {
    let ac = rent.alpha * econ.tech.c();
    if ac >= 1.0 {
        Err(ModelError::Unbounded(format!(
            "alpha*c = {ac} >= 1: investment runs away"
        )))
    } else {
        Ok(())
    }
}

fn symmetric_net_value(econ: &Economy, rent: &RentShare, investment: f64) -> f64 {
    let mu = investment.ln();
    expected_earnings(econ, rent, mu, mu) - investment
}

fn boundary_zero(econ: &Economy) -> InvestmentSolution {
    InvestmentSolution {
        investment: 0.0,
        regime: Regime::BoundaryZero,
        foc_residual: -1.0,
        net_value: econ.tech.a() * econ.half_log_variance().exp(),
    }
}

/// Symmetric Nash equilibrium of private investment.
pub fn private_equilibrium(econ: &Economy, rent: &RentShare) -> Result<InvestmentSolution> {
    check_interior(econ, rent)?;
    let c = econ.tech.c();
    if c == 0.0 {
        return Ok(boundary_zero(econ));
    }
    let base = econ.tech.a() * c * econ.half_log_variance().exp();
    let investment = base.powf(1.0 / (1.0 - rent.alpha * c));
    Ok(InvestmentSolution {
        investment,
        regime: Regime::Interior,
        foc_residual: private_foc_residual(econ, rent, investment, investment.ln()),
        net_value: symmetric_net_value(econ, rent, investment),
    })
}

/// Investment a planner would choose for everyone.
pub fn social_optimum(econ: &Economy, rent: &RentShare) -> Result<InvestmentSolution> {
    check_interior(econ, rent)?;
    let c = econ.tech.c();
    if rent.alpha == 0.0 || c == 0.0 {
        return Ok(boundary_zero(econ));
    }
    let base = econ.tech.a() * rent.alpha * c * econ.half_log_variance().exp();
    let investment = base.powf(1.0 / (1.0 - rent.alpha * c));
    Ok(InvestmentSolution {
        investment,
        regime: Regime::Interior,
        foc_residual: social_foc_residual(econ, rent, investment),
        net_value: symmetric_net_value(econ, rent, investment),
    })
}

/// Private over planner investment, evaluated two ways.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Overinvestment {
    pub private: f64,
    pub social: f64,
    /// `I_priv / I_soc`.
    pub quotient: f64,
    /// `α^(-1/(1-αc))`.
    pub closed_form: f64,
}

impl Overinvestment {
    pub fn ratio(&self) -> f64 {
        self.quotient
    }
}

pub fn overinvestment_ratio(econ: &Economy, rent: &RentShare) -> Result<Overinvestment> {
    if rent.alpha == 0.0 {
        return Err(ModelError::Degenerate(
            "alpha=0: the planner invests nothing and the ratio is undefined".to_string(),
        ));
    }
    let private = private_equilibrium(econ, rent)?;
    let social = social_optimum(econ, rent)?;
    if social.regime != Regime::Interior {
        return Err(ModelError::Degenerate(
            "planner investment is zero; the ratio is undefined".to_string(),
        ));
    }
    let alpha = rent.alpha;
    Ok(Overinvestment {
        private: private.investment,
        social: social.investment,
        quotient: private.investment / social.investment,
        closed_form: alpha.powf(-1.0 / (1.0 - alpha * econ.tech.c())),
    })
}

/// Mean labor productivity `A exp(α c μ + ½c²σ²)`.
pub fn mean_productivity(econ: &Economy, rent: &RentShare) -> f64 {
    let c = econ.tech.c();
    econ.tech.a() * (rent.alpha * c * econ.skills.mu() + econ.half_log_variance()).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::economy::{SkillDistribution, Technology};
    use crate::investment::solve_log_form;

    fn unit(c: f64) -> Economy {
        Economy::new(
            Technology::from_a(1.0, c).unwrap(),
            SkillDistribution::new(0.0, 1.0).unwrap(),
        )
    }

    #[test]
    fn full_productivity_share_matches_plain_problem() {
        let e = unit(0.5);
        let one = RentShare::new(1.0).unwrap();
        let p = private_equilibrium(&e, &one).unwrap();
        let s = social_optimum(&e, &one).unwrap();
        assert!((p.investment - solve_log_form(&e).investment).abs() < 1e-15);
        assert_eq!(p.investment, s.investment);
        assert_eq!(overinvestment_ratio(&e, &one).unwrap().ratio(), 1.0);
    }

    #[test]
    fn half_rent_share() {
        let e = unit(0.5);
        let half = RentShare::new(0.5).unwrap();
        let p = private_equilibrium(&e, &half).unwrap();
        let s = social_optimum(&e, &half).unwrap();
        let base: f64 = 0.5 * 0.125f64.exp();
        assert!((p.investment - base.powf(4.0 / 3.0)).abs() < 1e-15);
        assert!((s.investment - (0.5 * base).powf(4.0 / 3.0)).abs() < 1e-15);
        assert!(p.foc_residual.abs() <= 1e-10 && s.foc_residual.abs() <= 1e-10);
        let r = overinvestment_ratio(&e, &half).unwrap();
        assert!((r.ratio() - 2.519_842).abs() < 1e-6);
        assert!((r.quotient - r.closed_form).abs() <= 1e-10 * r.closed_form);
    }

    #[test]
    fn zero_alpha_and_runaway() {
        let e = unit(0.5);
        let zero = RentShare::new(0.0).unwrap();
        assert_eq!(social_optimum(&e, &zero).unwrap().regime, Regime::BoundaryZero);
        assert!(matches!(
            overinvestment_ratio(&e, &zero),
            Err(ModelError::Degenerate(_))
        ));
        let one = RentShare::new(1.0).unwrap();
        assert!(matches!(
            private_equilibrium(&unit(1.0), &one),
            Err(ModelError::Unbounded(_))
        ));
        assert!(RentShare::new(1.5).is_err());
        assert!(RentShare::new(-0.1).is_err());
    }

    #[test]
    fn productivity_limits() {
        let e = Economy::new(
            Technology::from_a(2.0, 0.3).unwrap(),
            SkillDistribution::new(4.0, 1.5).unwrap(),
        );
        let full = mean_productivity(&e, &RentShare::new(1.0).unwrap());
        assert!((full / e.income_moments().mean - 1.0).abs() < 1e-14);
        let none = mean_productivity(&e, &RentShare::new(0.0).unwrap());
        assert!((none - 2.0 * (0.5 * 0.09f64 * 2.25).exp()).abs() < 1e-14);
    }
}
