//! Lognormal skill-wage economy.
//!
//! Skill is normally distributed and wages grow exponentially in skill, so
//! income is lognormal. The crate calibrates the technology behind that
//! wage curve from mean and median income, solves for optimal educational
//! investment, evaluates CRRA welfare across technology levels, compares
//! private and planner investment under rent competition, and checks every
//! closed form against a deterministic Monte Carlo simulation.

pub mod bellcurve;
pub mod calibration;
pub mod economy;
pub mod error;
pub mod investment;
pub mod montecarlo;
pub mod normal;
pub mod preferences;
pub mod report;
pub mod scenario;

pub use economy::{Economy, IncomeMoments, SkillDistribution, Technology};
pub use error::{ModelError, Result};
