//! Named economies and scenario files.

use std::path::Path;
use std::str::FromStr;

use serde::Deserialize;

use crate::bellcurve::RentShare;
use crate::calibration::{calibrate, extrapolate, CalibrationInput};
use crate::economy::{Economy, SkillDistribution, Technology};
use crate::error::{ModelError, Result};
use crate::montecarlo::SimulationConfig;
use crate::preferences::Preference;

/// Observed `(median, mean)` household income behind the 1975 coefficients.
pub const INCOME_1975: (f64, f64) = (58_000.0, 68_000.0);
/// Observed `(median, mean)` household income behind the 2024 coefficients.
pub const INCOME_2024: (f64, f64) = (83_000.0, 121_000.0);

/// Published `(c, b)` coefficient pairs.
pub const COEFFICIENTS_1975: (f64, f64) = (0.0376, 7.2);
pub const COEFFICIENTS_2024: (f64, f64) = (0.0579, 5.5);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Paper1975,
    Paper2024,
    /// 2024 carried forward by the 1975→2024 growth in `A` and `c`.
    Paper2073,
    /// 2024 coefficients with firms training AI models in place of
    /// students.
    Chatbot,
}

impl Preset {
    pub const ALL: [Preset; 4] = [Preset::Paper1975, Preset::Paper2024, Preset::Paper2073, Preset::Chatbot];

    pub fn name(&self) -> &'static str {
        match self {
            Preset::Paper1975 => "paper-1975",
            Preset::Paper2024 => "paper-2024",
            Preset::Paper2073 => "paper-2073",
            Preset::Chatbot => "chatbot",
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Preset::Paper1975 => "1975",
            Preset::Paper2024 => "2024",
            Preset::Paper2073 => "2073",
            Preset::Chatbot => "chatbot",
        }
    }

    /// Observed `(median, mean)` the coefficients were calibrated from.
    pub fn income_target(&self) -> Option<(f64, f64)> {
        match self {
            Preset::Paper1975 => Some(INCOME_1975),
            Preset::Paper2024 | Preset::Chatbot => Some(INCOME_2024),
            Preset::Paper2073 => None,
        }
    }

    /// Coefficients as published (`recalibrate = false`) or recomputed at
    /// full precision from the observed incomes.
    pub fn technology(&self, recalibrate: bool) -> Result<Technology> {
        let year = |printed: (f64, f64), income: (f64, f64)| -> Result<Technology> {
            if recalibrate {
                let input = CalibrationInput::new("", income.0, income.1, SkillDistribution::iq())?;
                Ok(calibrate(&input)?.tech)
            } else {
                Technology::from_b(printed.1, printed.0)
            }
        };
        match self {
            Preset::Paper1975 => year(COEFFICIENTS_1975, INCOME_1975),
            Preset::Paper2024 | Preset::Chatbot => year(COEFFICIENTS_2024, INCOME_2024),
            Preset::Paper2073 => {
                let base = year(COEFFICIENTS_2024, INCOME_2024)?;
                let reference = year(COEFFICIENTS_1975, INCOME_1975)?;
                extrapolate(&base, &reference, 1.0)
            }
        }
    }
}

impl FromStr for Preset {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL.into_iter().find(|p| p.name() == s).ok_or_else(|| {
            let names: Vec<_> = Preset::ALL.iter().map(|p| p.name()).collect();
            ModelError::Usage(format!("unknown preset `{s}` (expected one of {})", names.join(", ")))
        })
    }
}

/// A labelled economy with optional preference, rent share and simulation
/// settings.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub label: String,
    pub economy: Economy,
    pub preference: Option<Preference>,
    pub rent: Option<RentShare>,
    pub simulation: Option<SimulationConfig>,
    pub preset: Option<Preset>,
}

impl Scenario {
    pub fn new(label: impl Into<String>, economy: Economy) -> Self {
        Self {
            label: label.into(),
            economy,
            preference: None,
            rent: None,
            simulation: None,
            preset: None,
        }
    }

    pub fn from_preset(preset: Preset, recalibrate: bool) -> Result<Self> {
        let economy = Economy::new(preset.technology(recalibrate)?, SkillDistribution::iq());
        Ok(Self {
            preset: Some(preset),
            ..Self::new(preset.label(), economy)
        })
    }

    pub fn load(path: impl AsRef<Path>, recalibrate: bool) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| ModelError::io(path, e))?;
        Self::parse(&text, &path.display().to_string(), recalibrate)
    }

    /// Parses scenario text; `origin` names the source in error messages.
    pub fn parse(text: &str, origin: &str, recalibrate: bool) -> Result<Self> {
        let file: ScenarioFile = toml::from_str(text).map_err(|e| ModelError::Parse {
            location: origin.to_string(),
            message: e.to_string(),
        })?;
        let field_err = |field: &str, err: ModelError| ModelError::Parse {
            location: format!("{origin}: {field}"),
            message: err.to_string(),
        };

        let preset = file
            .preset
            .as_deref()
            .map(Preset::from_str)
            .transpose()
            .map_err(|e| field_err("preset", e))?;
        let mut scenario = match preset {
            Some(p) => Scenario::from_preset(p, recalibrate).map_err(|e| field_err("preset", e))?,
            None => {
                if file.economy.is_none() {
                    return Err(ModelError::Parse {
                        location: origin.to_string(),
                        message: "either `preset` or an [economy] section is required".into(),
                    });
                }
                Scenario::new(
                    "scenario",
                    Economy::new(Technology::from_a(1.0, 0.0)?, SkillDistribution::iq()),
                )
            }
        };

        if let Some(skills) = file.skills {
            let current = scenario.economy.skills;
            scenario.economy.skills = SkillDistribution::new(
                skills.mu.unwrap_or(current.mu()),
                skills.sigma.unwrap_or(current.sigma()),
            )
            .map_err(|e| field_err("[skills]", e))?;
        }
        if let Some(econ) = file.economy {
            scenario.economy.tech = econ
                .resolve(preset.map(|_| scenario.economy.tech))
                .map_err(|e| field_err("[economy]", e))?;
        }
        if let Some(pref) = file.preference {
            scenario.preference = Some(Preference::new(pref.phi).map_err(|e| field_err("[preference].phi", e))?);
        }
        if let Some(rent) = file.rent {
            scenario.rent = Some(RentShare::new(rent.alpha).map_err(|e| field_err("[rent].alpha", e))?);
        }
        if let Some(sim) = file.simulation {
            let default = SimulationConfig::default();
            scenario.simulation = Some(
                SimulationConfig::new(sim.n.unwrap_or(default.n()), sim.seed.unwrap_or(default.seed()))
                    .map_err(|e| field_err("[simulation].n", e))?,
            );
        }
        if let Some(label) = file.label {
            scenario.label = label;
        }
        Ok(scenario)
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    label: Option<String>,
    preset: Option<String>,
    economy: Option<EconomySection>,
    skills: Option<SkillsSection>,
    preference: Option<PreferenceSection>,
    rent: Option<RentSection>,
    simulation: Option<SimulationSection>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct EconomySection {
    a: Option<f64>,
    b: Option<f64>,
    c: Option<f64>,
}

impl EconomySection {
    fn resolve(&self, base: Option<Technology>) -> Result<Technology> {
        let c = match (self.c, base) {
            (Some(c), _) => c,
            (None, Some(t)) => t.c(),
            (None, None) => return Err(ModelError::domain("`c` is required")),
        };
        match (self.a, self.b, base) {
            (Some(a), Some(b), _) => {
                if (b - a.ln()).abs() > 1e-9 {
                    return Err(ModelError::domain(format!(
                        "a={a} and b={b} disagree: ln(a)={}",
                        a.ln()
                    )));
                }
                Technology::from_b(b, c)
            }
            (Some(a), None, _) => Technology::from_a(a, c),
            (None, Some(b), _) => Technology::from_b(b, c),
            (None, None, Some(t)) => t.with_c(c),
            (None, None, None) => Err(ModelError::domain("one of `a` or `b` is required")),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SkillsSection {
    mu: Option<f64>,
    sigma: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PreferenceSection {
    phi: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RentSection {
    alpha: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SimulationSection {
    n: Option<usize>,
    seed: Option<u64>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_use_printed_coefficients() {
        let t75 = Preset::Paper1975.technology(false).unwrap();
        assert_eq!((t75.c(), t75.b()), COEFFICIENTS_1975);
        let t24 = Preset::Paper2024.technology(false).unwrap();
        assert_eq!((t24.c(), t24.b()), COEFFICIENTS_2024);
        assert_eq!(Preset::Chatbot.technology(false).unwrap(), t24);
        let t73 = Preset::Paper2073.technology(false).unwrap();
        assert!((t73.c() - 0.0579 * 0.0579 / 0.0376).abs() < 1e-15);
    }

    #[test]
    fn recalibrated_presets_are_unrounded() {
        let t75 = Preset::Paper1975.technology(true).unwrap();
        assert!((t75.a() - 1350.0).abs() < 1.0);
        let t24 = Preset::Paper2024.technology(true).unwrap();
        assert!((t24.a() - 254.0).abs() < 1.0);
    }

    #[test]
    fn parses_full_file() {
        let text = r#"
label = "unit"
[economy]
a = 1.0
c = 0.5
[skills]
mu = 0.0
sigma = 1.0
[preference]
phi = 2.0
[rent]
alpha = 0.5
[simulation]
n = 1000
seed = 7
"#;
        let s = Scenario::parse(text, "t.toml", false).unwrap();
        assert_eq!(s.label, "unit");
        assert_eq!(s.economy.tech.c(), 0.5);
        assert_eq!(s.economy.skills, SkillDistribution::new(0.0, 1.0).unwrap());
        assert_eq!(s.preference.unwrap().phi(), 2.0);
        assert_eq!(s.rent.unwrap().alpha(), 0.5);
        assert_eq!(s.simulation.unwrap(), SimulationConfig::new(1000, 7).unwrap());
    }

    #[test]
    fn preset_with_override() {
        let s = Scenario::parse("preset = \"paper-2024\"\n[economy]\nc = 0.06\n", "t", false).unwrap();
        assert_eq!(s.economy.tech.b(), 5.5);
        assert_eq!(s.economy.tech.c(), 0.06);
        assert_eq!(s.label, "2024");
    }

    #[test]
    fn errors_name_the_field() {
        let err = Scenario::parse("[economy]\na = 1.0\nc = 0.5\nd = 3\n", "t.toml", false).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 4") && msg.contains('d'), "{msg}");

        let err = Scenario::parse("[skills]\nsigma = 1.0\n", "t.toml", false).unwrap_err();
        assert!(err.to_string().contains("[economy]"));

        let err = Scenario::parse("[economy]\na = 1.0\nc = 0.5\n[skills]\nsigma = -1\n", "t.toml", false).unwrap_err();
        assert!(err.to_string().contains("[skills]"), "{err}");

        let err = Scenario::parse("preset = \"paper-1999\"\n", "t.toml", false).unwrap_err();
        assert!(err.to_string().contains("preset"));

        let err = Scenario::parse("[economy]\na = 2.0\nb = 5.0\nc = 0.1\n", "t.toml", false).unwrap_err();
        assert!(err.to_string().contains("disagree"));

        assert!(Scenario::parse("[widgets]\nx = 1\n", "t.toml", false).is_err());
    }
}
