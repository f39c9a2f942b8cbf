//! Independent numerical oracles shared by the integration tests. Nothing
//! here calls a closed-form solver from the library.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use skillwage::{Economy, SkillDistribution, Technology};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn economy(a: f64, c: f64, mu: f64, sigma: f64) -> Economy {
    Economy::new(
        Technology::from_a(a, c).unwrap(),
        SkillDistribution::new(mu, sigma).unwrap(),
    )
}

pub fn paper_economy(b: f64, c: f64) -> Economy {
    Economy::new(Technology::from_b(b, c).unwrap(), SkillDistribution::iq())
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// Golden-section maximization of a unimodal `f` on `[lo, hi]`.
pub fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        }
    }
    0.5 * (lo + hi)
}

/// Grid scan followed by golden-section refinement; returns the argmax.
pub fn grid_then_golden(f: impl Fn(f64) -> f64, lo: f64, hi: f64, points: usize) -> f64 {
    let step = (hi - lo) / (points - 1) as f64;
    let best = (0..points)
        .map(|k| lo + step * k as f64)
        .map(|x| (x, f(x)))
        .fold((lo, f64::NEG_INFINITY), |acc, p| if p.1 > acc.1 { p } else { acc });
    let a = (best.0 - step).max(lo);
    let b = (best.0 + step).min(hi);
    golden_max(&f, a, b, 1e-13 * (1.0 + best.0.abs()))
}

/// Maximizes `A exp(c ln I + ½c²σ²) - I` numerically over `ln I`.
pub fn brute_force_log_investment(econ: &Economy) -> f64 {
    let (a, c) = (econ.tech.a(), econ.tech.c());
    let s2 = econ.skills.variance();
    let objective = |log_i: f64| a * (c * log_i + 0.5 * c * c * s2).exp() - log_i.exp();
    grid_then_golden(objective, -80.0, 120.0, 4001).exp()
}

/// Numerical argmax of an agent's private objective when the rest of the
/// population has mean skill `population_mu`. The agent's payoff is
/// `A exp(c ln I - (1-α) c μ + ½c²σ²) - I`; its derivative in `ln I` is
/// bisected to a sign change.
pub fn best_response(econ: &Economy, alpha: f64, population_mu: f64) -> f64 {
    let (a, c) = (econ.tech.a(), econ.tech.c());
    let s2 = econ.skills.variance();
    let slope =
        |log_i: f64| c * a * (c * log_i - (1.0 - alpha) * c * population_mu + 0.5 * c * c * s2).exp() - log_i.exp();
    let (mut lo, mut hi) = (-200.0f64, 200.0f64);
    assert!(slope(lo) > 0.0 && slope(hi) < 0.0, "best response not bracketed");
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if slope(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (0.5 * (lo + hi)).exp()
}

/// Iterates best responses from `start` until successive investments agree
/// to `tol` relative.
pub fn fixed_point_private(econ: &Economy, alpha: f64, start: f64, tol: f64, max_iter: usize) -> (f64, usize) {
    let mut current = start;
    for k in 1..=max_iter {
        let next = best_response(econ, alpha, current.ln());
        if rel(next, current) < tol {
            return (next, k);
        }
        current = next;
    }
    (current, max_iter)
}

/// Planner objective `A exp(α c ln I + ½c²σ²) - I`, maximized numerically.
pub fn brute_force_planner(econ: &Economy, alpha: f64) -> f64 {
    let (a, c) = (econ.tech.a(), econ.tech.c());
    let s2 = econ.skills.variance();
    let objective = |log_i: f64| a * (alpha * c * log_i + 0.5 * c * c * s2).exp() - log_i.exp();
    grid_then_golden(objective, -80.0, 120.0, 4001).exp()
}

/// Numerical maximization of a function of `c` on `[lo, hi]`.
pub fn argmax_over_c(f: impl Fn(f64) -> f64, lo: f64, hi: f64) -> f64 {
    grid_then_golden(f, lo, hi, 2001)
}

/// Random economy with moderate dispersion `cσ ∈ (0.1, 0.8)`.
pub fn random_economy(rng: &mut impl Rng) -> Economy {
    let sigma = rng.random_range(0.5..20.0);
    let c = rng.random_range(0.1..0.8) / sigma;
    let mu = rng.random_range(-5.0..5.0) * sigma;
    let b = rng.random_range(-2.0..2.0) - c * mu;
    Economy::new(
        Technology::from_b(b, c).unwrap(),
        SkillDistribution::new(mu, sigma).unwrap(),
    )
}

/// As [`random_economy`] but with positive mean skill, the setting in which
/// the mean wage rises with technology.
pub fn random_skilled_economy(rng: &mut impl Rng) -> Economy {
    let e = random_economy(rng);
    let skills = SkillDistribution::new(e.skills.mu().abs(), e.skills.sigma()).unwrap();
    let b = e.tech.b() + e.tech.c() * (e.skills.mu() - skills.mu());
    Economy::new(Technology::from_b(b, e.tech.c()).unwrap(), skills)
}
