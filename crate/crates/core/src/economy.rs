//! Skill distribution, wage technology and the closed-form income moments
//! of the lognormal wage economy.
//!
//! Skill is normal, `y ~ N(mu, sigma)`, and wages are `A * exp(c * y)` with
//! `A = exp(b)`. Income is therefore lognormal with
//! `ln e ~ N(b + c*mu, c*sigma)`.

use serde::{Deserialize, Serialize};

use crate::error::{ModelError, Result};
use crate::normal;

/// Normal law of skill (IQ points).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SkillDistribution {
    mu: f64,
    sigma: f64,
}

impl SkillDistribution {
    pub fn new(mu: f64, sigma: f64) -> Result<Self> {
        if !mu.is_finite() {
            return Err(ModelError::domain(format!("skill mean {mu} must be finite")));
        }
        if !(sigma > 0.0 && sigma.is_finite()) {
            return Err(ModelError::domain(format!(
                "skill standard deviation {sigma} must be positive"
            )));
        }
        Ok(Self { mu, sigma })
    }

    /// The IQ scale, `N(100, 15)`.
    pub fn iq() -> Self {
        Self { mu: 100.0, sigma: 15.0 }
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn variance(&self) -> f64 {
        self.sigma * self.sigma
    }

    /// Same dispersion, different mean.
    pub fn with_mu(&self, mu: f64) -> Result<Self> {
        Self::new(mu, self.sigma)
    }
}

/// Technology coefficients `(A, b, c)` with `A = exp(b)` kept in sync.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Technology {
    a_coef: f64,
    b_coef: f64,
    c_coef: f64,
}

impl Technology {
    /// Builds from baseline productivity `A > 0`; `b` is derived as `ln A`.
    pub fn from_a(a_coef: f64, c_coef: f64) -> Result<Self> {
        if !(a_coef > 0.0 && a_coef.is_finite()) {
            return Err(ModelError::domain(format!(
                "baseline productivity A={a_coef} must be positive and finite"
            )));
        }
        Self::check_c(c_coef)?;
        Ok(Self {
            a_coef,
            b_coef: a_coef.ln(),
            c_coef,
        })
    }

    /// Builds from the log baseline `b`; `A` is derived as `exp(b)`.
    pub fn from_b(b_coef: f64, c_coef: f64) -> Result<Self> {
        if !b_coef.is_finite() {
            return Err(ModelError::domain(format!("log baseline b={b_coef} must be finite")));
        }
        Self::check_c(c_coef)?;
        let a_coef = b_coef.exp();
        if a_coef == 0.0 || !a_coef.is_finite() {
            return Err(ModelError::domain(format!("exp(b) overflows for b={b_coef}")));
        }
        Ok(Self { a_coef, b_coef, c_coef })
    }

    fn check_c(c_coef: f64) -> Result<()> {
        if c_coef >= 0.0 && c_coef.is_finite() {
            Ok(())
        } else {
            Err(ModelError::domain(format!(
                "skill-augmentation coefficient c={c_coef} must be finite and non-negative"
            )))
        }
    }

    pub fn a(&self) -> f64 {
        self.a_coef
    }

    pub fn b(&self) -> f64 {
        self.b_coef
    }

    pub fn c(&self) -> f64 {
        self.c_coef
    }

    /// Same baseline, different skill coefficient.
    pub fn with_c(&self, c_coef: f64) -> Result<Self> {
        Self::check_c(c_coef)?;
        Ok(Self { c_coef, ..*self })
    }
}

/// A technology applied to a skill distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Economy {
    pub tech: Technology,
    pub skills: SkillDistribution,
}

/// Mean, median and their ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IncomeMoments {
    pub mean: f64,
    pub median: f64,
    pub rho: f64,
}

impl Economy {
    pub fn new(tech: Technology, skills: SkillDistribution) -> Self {
        Self { tech, skills }
    }

    /// `½ c² σ²`, the log of the mean/median ratio.
    pub(crate) fn half_log_variance(&self) -> f64 {
        let c = self.tech.c();
        0.5 * c * c * self.skills.variance()
    }

    /// Log wage `b + c*y`.
    pub fn log_wage(&self, y: f64) -> f64 {
        self.tech.b() + self.tech.c() * y
    }

    pub fn wage(&self, y: f64) -> f64 {
        self.tech.a() * (self.tech.c() * y).exp()
    }

    pub fn income_moments(&self) -> IncomeMoments {
        let median = self.wage(self.skills.mu());
        let log_rho = self.half_log_variance();
        IncomeMoments {
            mean: self.tech.a() * (self.tech.c() * self.skills.mu() + log_rho).exp(),
            median,
            rho: log_rho.exp(),
        }
    }

    /// Expected earnings gain from raising an agent's mean skill from `iq`
    /// to `iq + 1`: `A exp(c*iq + ½c²σ²) (e^c - 1)`.
    pub fn marginal_skill_value(&self, iq: f64) -> f64 {
        let c = self.tech.c();
        self.tech.a() * (c * iq + self.half_log_variance()).exp() * c.exp_m1()
    }

    pub fn income_quantile(&self, p: f64) -> Result<f64> {
        let z = normal::quantile(p)?;
        Ok(self.wage(self.skills.mu() + self.skills.sigma() * z))
    }

    /// `P[e(y) < threshold]` in closed form. Requires `c > 0`.
    pub fn income_cdf(&self, threshold: f64) -> Result<f64> {
        let c = self.tech.c();
        if c <= 0.0 {
            return Err(ModelError::Degenerate(format!(
                "with c=0 every wage equals A={}; the fraction below {threshold} is 0 or 1",
                self.tech.a()
            )));
        }
        if threshold <= 0.0 {
            return Ok(0.0);
        }
        let skill_cut = (threshold / self.tech.a()).ln() / c;
        Ok(normal::cdf((skill_cut - self.skills.mu()) / self.skills.sigma()))
    }

    pub fn with_tech(&self, tech: Technology) -> Self {
        Self { tech, ..*self }
    }

    pub fn with_skills(&self, skills: SkillDistribution) -> Self {
        Self { skills, ..*self }
    }
}
