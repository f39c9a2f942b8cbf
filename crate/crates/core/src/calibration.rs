//! Recovering `(A, c)` from observed mean and median income, and carrying
//! coefficients forward by repeating an observed growth factor.

use std::path::Path;

use serde::Deserialize;

use crate::economy::{Economy, SkillDistribution, Technology};
use crate::error::{ModelError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationInput {
    pub median_income: f64,
    pub mean_income: f64,
    pub skills: SkillDistribution,
    pub label: String,
}

impl CalibrationInput {
    pub fn new(
        label: impl Into<String>,
        median_income: f64,
        mean_income: f64,
        skills: SkillDistribution,
    ) -> Result<Self> {
        let input = Self {
            median_income,
            mean_income,
            skills,
            label: label.into(),
        };
        input.validate()?;
        Ok(input)
    }

    fn validate(&self) -> Result<()> {
        if !(self.median_income > 0.0 && self.median_income.is_finite())
            || !(self.mean_income > 0.0 && self.mean_income.is_finite())
        {
            return Err(ModelError::domain(format!(
                "incomes must be positive and finite (median={}, mean={})",
                self.median_income, self.mean_income
            )));
        }
        if self.mean_income < self.median_income {
            return Err(ModelError::Infeasible(format!(
                "mean income {} is below median income {}; no real c satisfies rho < 1",
                self.mean_income, self.median_income
            )));
        }
        Ok(())
    }
}

/// How the log baseline `b` is carried into the returned technology.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Rounding {
    /// Full precision.
    #[default]
    Exact,
    /// `b` rounded to one decimal and `A = exp(b)`, as in the published
    /// coefficient list.
    Paper,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationResult {
    pub label: String,
    pub tech: Technology,
    pub rho: f64,
    /// Relative error of the recomputed mean against the input mean.
    pub mean_err: f64,
    /// Relative error of the recomputed median against the input median.
    pub median_err: f64,
    /// Set when mean equals median, i.e. `c = 0`.
    pub degenerate: bool,
}

pub fn calibrate(input: &CalibrationInput) -> Result<CalibrationResult> {
    calibrate_with(input, Rounding::Exact)
}

pub fn calibrate_with(input: &CalibrationInput, rounding: Rounding) -> Result<CalibrationResult> {
    input.validate()?;
    let skills = input.skills;
    let rho = input.mean_income / input.median_income;
    let c = (rho.ln() / (0.5 * skills.variance())).sqrt();
    // b = ln M - c*mu avoids forming M*exp(-c*mu) and taking its log again.
    let b = input.median_income.ln() - c * skills.mu();
    let tech = match rounding {
        Rounding::Exact => Technology::from_b(b, c)?,
        Rounding::Paper => Technology::from_b((b * 10.0).round() / 10.0, c)?,
    };
    let moments = Economy::new(tech, skills).income_moments();
    Ok(CalibrationResult {
        label: input.label.clone(),
        tech,
        rho,
        mean_err: (moments.mean - input.mean_income).abs() / input.mean_income,
        median_err: (moments.median - input.median_income).abs() / input.median_income,
        degenerate: c == 0.0,
    })
}

/// Per-period multiplicative growth of `(A, c)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthFactors {
    pub a_factor: f64,
    pub c_factor: f64,
}

impl GrowthFactors {
    /// Factors taking `reference` to `base` over one period.
    pub fn between(base: &Technology, reference: &Technology) -> Result<Self> {
        for (name, t) in [("base", base), ("reference", reference)] {
            if t.c() <= 0.0 {
                return Err(ModelError::domain(format!(
                    "{name} technology needs c > 0 to extrapolate (got {})",
                    t.c()
                )));
            }
        }
        Ok(Self {
            a_factor: base.a() / reference.a(),
            c_factor: base.c() / reference.c(),
        })
    }

    pub fn apply(&self, base: &Technology, periods: f64) -> Result<Technology> {
        if !(periods >= 0.0 && periods.is_finite()) {
            return Err(ModelError::domain(format!(
                "periods={periods} must be finite and non-negative"
            )));
        }
        if periods == 0.0 {
            return Ok(*base);
        }
        Technology::from_a(
            base.a() * self.a_factor.powf(periods),
            base.c() * self.c_factor.powf(periods),
        )
    }

    /// Factors for `periods` steps at once.
    pub fn compound(&self, periods: f64) -> Self {
        Self {
            a_factor: self.a_factor.powf(periods),
            c_factor: self.c_factor.powf(periods),
        }
    }
}

/// Extrapolates `base` forward by repeating the percentage change from
/// `reference` to `base`, `periods` times.
pub fn extrapolate(base: &Technology, reference: &Technology, periods: f64) -> Result<Technology> {
    GrowthFactors::between(base, reference)?.apply(base, periods)
}

#[derive(Debug, Deserialize)]
struct IncomeRow {
    label: String,
    median: f64,
    mean: f64,
    mu: Option<f64>,
    sigma: Option<f64>,
}

/// Reads a CSV with header `label,median,mean[,mu,sigma]`. Rows are
/// numbered from 1, excluding the header.
pub fn load_income_series(path: impl AsRef<Path>) -> Result<Vec<CalibrationInput>> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| ModelError::io(path, e))?;
    read_income_series(file)
}

pub fn read_income_series<R: std::io::Read>(reader: R) -> Result<Vec<CalibrationInput>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = match rdr.headers() {
        Ok(h) => h.clone(),
        Err(e) => return Err(parse_error("header", e)),
    };
    if headers.is_empty() {
        return Ok(Vec::new());
    }
    for required in ["label", "median", "mean"] {
        if !headers.iter().any(|h| h == required) {
            return Err(parse_error("header", format!("missing column `{required}`")));
        }
    }
    let default = SkillDistribution::iq();
    let mut out = Vec::new();
    for (idx, record) in rdr.deserialize::<IncomeRow>().enumerate() {
        let row_no = idx + 1;
        let row = record.map_err(|e| parse_error(&format!("row {row_no}"), e))?;
        let skills = SkillDistribution::new(row.mu.unwrap_or(default.mu()), row.sigma.unwrap_or(default.sigma()))
            .map_err(|e| parse_error(&format!("row {row_no}"), e))?;
        let input = CalibrationInput::new(row.label, row.median, row.mean, skills)
            .map_err(|e| parse_error(&format!("row {row_no}"), e))?;
        out.push(input);
    }
    Ok(out)
}

fn parse_error(location: &str, err: impl std::fmt::Display) -> ModelError {
    ModelError::Parse {
        location: location.to_string(),
        message: err.to_string(),
    }
}
