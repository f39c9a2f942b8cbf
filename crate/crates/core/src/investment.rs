//! Optimal educational investment: agents pick `I` to maximize
//! `A exp(c*mu(I) + ½c²σ²) - I`, where `mu(I)` maps spending into mean skill.

use serde::Serialize;

use crate::economy::Economy;
use crate::error::{ModelError, Result};

/// Search ceiling used to certify run-away investment.
pub const DEFAULT_CEILING: f64 = 1e12;

const GRID_POINTS: usize = 4096;

/// How investment translates into mean skill.
#[derive(Debug, Clone, PartialEq)]
pub enum SkillResponse {
    /// `mu(I) = ln I`.
    LogResponse,
    /// Monotone cubic interpolation through `(I, mu)` knots.
    Tabulated(MonotoneCubic),
}

impl SkillResponse {
    pub fn tabulated(knots: &[(f64, f64)]) -> Result<Self> {
        Ok(SkillResponse::Tabulated(MonotoneCubic::new(knots)?))
    }

    /// Closed interval of admissible investment (open at 0 for the log form).
    pub fn domain(&self) -> (f64, f64) {
        match self {
            SkillResponse::LogResponse => (0.0, f64::INFINITY),
            SkillResponse::Tabulated(t) => (t.xs[0], t.xs[t.xs.len() - 1]),
        }
    }

    fn check(&self, i: f64) -> Result<()> {
        let ok = match self {
            SkillResponse::LogResponse => i > 0.0 && i.is_finite(),
            SkillResponse::Tabulated(t) => i >= t.xs[0] && i <= t.xs[t.xs.len() - 1],
        };
        if ok {
            Ok(())
        } else {
            let (lo, hi) = self.domain();
            Err(ModelError::domain(format!(
                "investment {i} outside the response domain [{lo}, {hi}]"
            )))
        }
    }

    pub fn mean_skill(&self, i: f64) -> Result<f64> {
        self.check(i)?;
        Ok(match self {
            SkillResponse::LogResponse => i.ln(),
            SkillResponse::Tabulated(t) => t.value(i),
        })
    }

    pub fn slope(&self, i: f64) -> Result<f64> {
        self.check(i)?;
        Ok(match self {
            SkillResponse::LogResponse => 1.0 / i,
            SkillResponse::Tabulated(t) => t.derivative(i),
        })
    }
}

/// Fritsch–Carlson monotone piecewise-cubic Hermite interpolant.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneCubic {
    xs: Vec<f64>,
    ys: Vec<f64>,
    slopes: Vec<f64>,
}

impl MonotoneCubic {
    /// Knots must be strictly increasing in both coordinates, `x > 0`, and
    /// at least two.
    pub fn new(knots: &[(f64, f64)]) -> Result<Self> {
        if knots.len() < 2 {
            return Err(ModelError::domain("a tabulated response needs at least two knots"));
        }
        if knots[0].0 <= 0.0 {
            return Err(ModelError::domain("tabulated investment levels must be positive"));
        }
        if knots.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
            return Err(ModelError::domain("tabulated knots must be finite"));
        }
        if knots.windows(2).any(|w| w[1].0 <= w[0].0 || w[1].1 <= w[0].1) {
            return Err(ModelError::domain(
                "tabulated knots must be strictly increasing in investment and skill",
            ));
        }
        let xs: Vec<f64> = knots.iter().map(|k| k.0).collect();
        let ys: Vec<f64> = knots.iter().map(|k| k.1).collect();
        let n = xs.len();
        let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
        let delta: Vec<f64> = (0..n - 1).map(|k| (ys[k + 1] - ys[k]) / h[k]).collect();

        let mut slopes = vec![0.0; n];
        if n == 2 {
            slopes[0] = delta[0];
            slopes[1] = delta[0];
        } else {
            for k in 1..n - 1 {
                let w1 = 2.0 * h[k] + h[k - 1];
                let w2 = h[k] + 2.0 * h[k - 1];
                slopes[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
            }
            slopes[0] = end_slope(h[0], h[1], delta[0], delta[1]);
            slopes[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
        }
        Ok(Self { xs, ys, slopes })
    }

    // Interval index; a point on an interior knot belongs to the interval on its left.
    fn interval(&self, x: f64) -> usize {
        let k = self.xs.partition_point(|&v| v < x);
        k.saturating_sub(1).min(self.xs.len() - 2)
    }

    pub fn value(&self, x: f64) -> f64 {
        let k = self.interval(x);
        let h = self.xs[k + 1] - self.xs[k];
        let t = (x - self.xs[k]) / h;
        let (t2, t3) = (t * t, t * t * t);
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * self.ys[k] + h10 * h * self.slopes[k] + h01 * self.ys[k + 1] + h11 * h * self.slopes[k + 1]
    }

    pub fn derivative(&self, x: f64) -> f64 {
        let k = self.interval(x);
        let h = self.xs[k + 1] - self.xs[k];
        let t = (x - self.xs[k]) / h;
        let t2 = t * t;
        let d00 = (6.0 * t2 - 6.0 * t) / h;
        let d10 = 3.0 * t2 - 4.0 * t + 1.0;
        let d01 = (-6.0 * t2 + 6.0 * t) / h;
        let d11 = 3.0 * t2 - 2.0 * t;
        d00 * self.ys[k] + d10 * self.slopes[k] + d01 * self.ys[k + 1] + d11 * self.slopes[k + 1]
    }
}

fn end_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if s.signum() != d0.signum() {
        0.0
    } else if d0.signum() != d1.signum() && s.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    Interior,
    Unbounded,
    BoundaryZero,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Regime::Interior => "interior",
            Regime::Unbounded => "unbounded",
            Regime::BoundaryZero => "boundary-zero",
        })
    }
}

/// Outcome of an investment problem.
///
/// For `Unbounded` the investment is the search ceiling at which the
/// objective was certified to still be increasing; for `BoundaryZero` it is
/// the lower end of the feasible range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InvestmentSolution {
    pub investment: f64,
    pub regime: Regime,
    pub foc_residual: f64,
    pub net_value: f64,
}

/// Expected earnings net of investment.
pub fn objective(econ: &Economy, resp: &SkillResponse, i: f64) -> Result<f64> {
    let mu = resp.mean_skill(i)?;
    Ok(econ.tech.a() * (econ.tech.c() * mu + econ.half_log_variance()).exp() - i)
}

/// Derivative of [`objective`]; zero at an interior optimum.
pub fn marginal_return(econ: &Economy, resp: &SkillResponse, i: f64) -> Result<f64> {
    let mu = resp.mean_skill(i)?;
    let slope = resp.slope(i)?;
    let c = econ.tech.c();
    Ok(econ.tech.a() * (c * mu + econ.half_log_variance()).exp() * c * slope - 1.0)
}

/// Closed form for `mu(I) = ln I`: `I = (A c exp(½c²σ²))^(1/(1-c))` when `c < 1`.
pub fn solve_log_form(econ: &Economy) -> InvestmentSolution {
    let c = econ.tech.c();
    let gain = econ.tech.a() * econ.half_log_variance().exp();
    let at = |investment: f64, regime: Regime| InvestmentSolution {
        investment,
        regime,
        foc_residual: log_foc(gain, c, investment),
        net_value: gain * investment.powf(c) - investment,
    };
    if c == 0.0 {
        return InvestmentSolution {
            investment: 0.0,
            regime: Regime::BoundaryZero,
            foc_residual: -1.0,
            net_value: econ.tech.a(),
        };
    }
    if c < 1.0 {
        let investment = (gain * c).powf(1.0 / (1.0 - c));
        return at(investment, Regime::Interior);
    }
    // c >= 1: the objective is convex in I. It grows without bound unless
    // c == 1 and the constant marginal return is non-positive.
    if c == 1.0 && gain <= 1.0 {
        return InvestmentSolution {
            investment: 0.0,
            regime: Regime::BoundaryZero,
            foc_residual: gain - 1.0,
            net_value: 0.0,
        };
    }
    at(DEFAULT_CEILING, Regime::Unbounded)
}

fn log_foc(gain: f64, c: f64, i: f64) -> f64 {
    gain * c * i.powf(c - 1.0) - 1.0
}

/// Maximizes [`objective`] over `[lo, hi]` by scanning the sign of the
/// marginal return on a log grid and bisecting every `+ → -` crossing.
pub fn solve_general(econ: &Economy, resp: &SkillResponse, lo: f64, hi: f64) -> Result<InvestmentSolution> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(ModelError::domain(format!("invalid investment bounds ({lo}, {hi})")));
    }
    resp.check(lo)?;
    resp.check(hi)?;

    let (log_lo, log_hi) = (lo.ln(), hi.ln());
    let step = (log_hi - log_lo) / (GRID_POINTS - 1) as f64;
    let grid: Vec<f64> = (0..GRID_POINTS)
        .map(|k| match k {
            0 => lo,
            k if k == GRID_POINTS - 1 => hi,
            k => (log_lo + step * k as f64).exp().clamp(lo, hi),
        })
        .collect();
    let marginal: Vec<f64> = grid
        .iter()
        .map(|&i| marginal_return(econ, resp, i))
        .collect::<Result<_>>()?;

    let mut best = (lo, objective(econ, resp, lo)?);
    let top = objective(econ, resp, hi)?;
    if top > best.1 {
        best = (hi, top);
    }
    for k in 0..GRID_POINTS - 1 {
        if marginal[k] > 0.0 && marginal[k + 1] <= 0.0 {
            let root = bisect_log(grid[k], grid[k + 1], |i| {
                marginal_return(econ, resp, i).unwrap_or(f64::NAN)
            });
            let value = objective(econ, resp, root)?;
            if value > best.1 {
                best = (root, value);
            }
        }
    }

    let (investment, net_value) = best;
    let foc_residual = marginal_return(econ, resp, investment)?;
    let regime = if investment == hi && foc_residual > 0.0 {
        Regime::Unbounded
    } else if investment == lo && foc_residual < 0.0 {
        Regime::BoundaryZero
    } else {
        Regime::Interior
    };
    Ok(InvestmentSolution {
        investment,
        regime,
        foc_residual,
        net_value,
    })
}

// Bisection in log space; `f(lo) > 0 >= f(hi)`.
fn bisect_log(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> f64 {
    for _ in 0..200 {
        let mid = (0.5 * (lo.ln() + hi.ln())).exp();
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if f(lo).abs() <= f(hi).abs() {
        lo
    } else {
        hi
    }
}

/// Median income at the optimal log-form investment, net of that investment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MedianGap {
    pub investment: f64,
    pub median: f64,
    /// `M - I` with `M = A I^c`.
    pub direct: f64,
    /// `I ((1/c) exp(-½c²σ²) - 1)`.
    pub identity: f64,
}

impl MedianGap {
    pub fn value(&self) -> f64 {
        self.direct
    }

    /// Disagreement of the two evaluations relative to the scale of `I` and `M`.
    pub fn discrepancy(&self) -> f64 {
        (self.direct - self.identity).abs() / self.investment.max(self.median)
    }
}

pub fn median_gap(econ: &Economy) -> Result<MedianGap> {
    let c = econ.tech.c();
    if c >= 1.0 {
        return Err(ModelError::Unbounded(format!(
            "c={c} >= 1 has no interior investment optimum"
        )));
    }
    if c == 0.0 {
        return Err(ModelError::Degenerate("c=0: optimal investment is zero".to_string()));
    }
    let investment = solve_log_form(econ).investment;
    let median = econ.tech.a() * investment.powf(c);
    let gap = MedianGap {
        investment,
        median,
        direct: median - investment,
        identity: investment * ((-econ.half_log_variance()).exp() / c - 1.0),
    };
    debug_assert!(gap.discrepancy() <= 1e-10, "median gap identity broken: {gap:?}");
    Ok(gap)
}

/// The `c` in (0, 1) where `(1/c) exp(-½c²σ²) = 1`, i.e. where the median
/// gap changes sign.
pub fn gap_sign_boundary(sigma: f64) -> Result<f64> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(ModelError::domain(format!("sigma={sigma} must be positive")));
    }
    // -ln c - ½c²σ² is strictly decreasing on (0, 1] and negative at 1.
    let h = |c: f64| -c.ln() - 0.5 * c * c * sigma * sigma;
    let (mut lo, mut hi) = (f64::MIN_POSITIVE, 1.0);
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if h(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::economy::{SkillDistribution, Technology};

    fn unit(c: f64) -> Economy {
        Economy::new(
            Technology::from_a(1.0, c).unwrap(),
            SkillDistribution::new(0.0, 1.0).unwrap(),
        )
    }

    #[test]
    fn objective_values() {
        let e = unit(0.5);
        let r = SkillResponse::LogResponse;
        assert!((objective(&e, &r, 1.0).unwrap() - (0.125f64.exp() - 1.0)).abs() < 1e-15);
        assert!((objective(&e, &r, 0.321006).unwrap() - 0.321005).abs() < 2e-6);
        assert!(objective(&e, &r, 0.0).is_err());
        assert!(objective(&e, &r, -1.0).is_err());
    }

    #[test]
    fn log_form_unit_economy() {
        let s = solve_log_form(&unit(0.5));
        assert_eq!(s.regime, Regime::Interior);
        assert!((s.investment - 0.321006).abs() < 1e-6);
        assert!(s.foc_residual.abs() <= 1e-10);
        assert_eq!(solve_log_form(&unit(1.2)).regime, Regime::Unbounded);
        let tiny = solve_log_form(&unit(1e-4));
        assert_eq!(tiny.regime, Regime::Interior);
        assert!(tiny.investment > 0.0 && tiny.investment < 2e-4);
        assert_eq!(solve_log_form(&unit(0.0)).regime, Regime::BoundaryZero);
    }

    #[test]
    fn c_equal_one_splits_on_marginal_return() {
        let low = Economy::new(
            Technology::from_a(0.1, 1.0).unwrap(),
            SkillDistribution::new(0.0, 1.0).unwrap(),
        );
        assert_eq!(solve_log_form(&low).regime, Regime::BoundaryZero);
        assert_eq!(solve_log_form(&unit(1.0)).regime, Regime::Unbounded);
    }

    #[test]
    fn general_solver_regimes() {
        let r = SkillResponse::LogResponse;
        let s = solve_general(&unit(0.5), &r, 1e-6, 10.0).unwrap();
        assert_eq!(s.regime, Regime::Interior);
        assert!((s.investment - solve_log_form(&unit(0.5)).investment).abs() < 1e-6);
        assert!(s.foc_residual.abs() < 1e-8);

        let s = solve_general(&unit(1.2), &r, 1e-6, 1e9).unwrap();
        assert_eq!(s.regime, Regime::Unbounded);
        assert_eq!(s.investment, 1e9);
        assert!(s.foc_residual > 0.0);

        // Optimum 0.321 lies below the feasible range.
        let s = solve_general(&unit(0.5), &r, 1.0, 10.0).unwrap();
        assert_eq!(s.regime, Regime::BoundaryZero);
        assert_eq!(s.investment, 1.0);

        assert!(solve_general(&unit(0.5), &r, 2.0, 1.0).is_err());
        assert!(solve_general(&unit(0.5), &r, 0.0, 1.0).is_err());
    }

    #[test]
    fn monotone_cubic_reproduces_linear_data_and_is_monotone() {
        let line = MonotoneCubic::new(&[(1.0, 2.0), (2.0, 4.0), (4.0, 8.0)]).unwrap();
        for x in [1.0, 1.5, 2.0, 3.3, 4.0] {
            assert!((line.value(x) - 2.0 * x).abs() < 1e-12);
            assert!((line.derivative(x) - 2.0).abs() < 1e-12);
        }
        let steps = MonotoneCubic::new(&[(1.0, 0.0), (2.0, 0.01), (3.0, 5.0), (4.0, 5.01)]).unwrap();
        let mut prev = f64::NEG_INFINITY;
        for k in 0..=300 {
            let x = 1.0 + 3.0 * k as f64 / 300.0;
            let v = steps.value(x);
            assert!(v >= prev);
            assert!(steps.derivative(x) >= 0.0);
            prev = v;
        }
    }

    #[test]
    fn tabulated_rejects_bad_knots() {
        assert!(SkillResponse::tabulated(&[(1.0, 1.0)]).is_err());
        assert!(SkillResponse::tabulated(&[(1.0, 1.0), (1.0, 2.0)]).is_err());
        assert!(SkillResponse::tabulated(&[(1.0, 2.0), (2.0, 1.0)]).is_err());
        assert!(SkillResponse::tabulated(&[(0.0, 1.0), (2.0, 2.0)]).is_err());
        let t = SkillResponse::tabulated(&[(1.0, 1.0), (2.0, 2.0)]).unwrap();
        assert!(t.mean_skill(0.5).is_err());
        assert!(t.mean_skill(2.5).is_err());
    }

    #[test]
    fn median_gap_signs() {
        let g = median_gap(&unit(0.5)).unwrap();
        assert!((g.value() - 0.245568).abs() < 1e-6);
        assert!(g.discrepancy() <= 1e-10);
        assert!(median_gap(&unit(0.9)).unwrap().value() < 0.0);
        assert!(matches!(median_gap(&unit(1.0)), Err(ModelError::Unbounded(_))));
        assert!(matches!(median_gap(&unit(0.0)), Err(ModelError::Degenerate(_))));
    }

    #[test]
    fn sign_boundary_zeroes_the_bracket() {
        let c = gap_sign_boundary(1.0).unwrap();
        assert!(((-0.5 * c * c).exp() / c - 1.0).abs() < 1e-12);
        assert!(c > 0.5 && c < 0.9);
    }
}
