//! Reproduction tables, figure data and the command dispatcher behind the
//! `skillwage` binary. Every number printed here comes straight from a
//! model operation; this module only formats.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use crate::bellcurve::{mean_productivity, overinvestment_ratio, private_equilibrium, social_optimum, RentShare};
use crate::calibration::{calibrate, calibrate_with, extrapolate, load_income_series, CalibrationInput, Rounding};
use crate::economy::{Economy, SkillDistribution};
use crate::error::{ModelError, Result};
use crate::investment::{median_gap, solve_log_form, Regime};
use crate::montecarlo::{simulate, SimulationConfig};
use crate::preferences::{cutoff_risk_aversion, expected_utility, optimal_plateau, utility_ratio, Plateau, Preference};
use crate::scenario::{Preset, Scenario, INCOME_1975, INCOME_2024};

pub const DEFAULT_IQ_LIST: [f64; 8] = [70.0, 85.0, 100.0, 115.0, 130.0, 145.0, 160.0, 175.0];
pub const DEFAULT_FIGURE_RANGE: (f64, f64) = (0.0, 170.0);
pub const DEFAULT_FIGURE_SAMPLES: usize = 100;
pub const DEFAULT_PRECISION: usize = 6;

/// Formats `x` with `precision` significant digits, or the shortest
/// round-trip representation when `precision` is `None`.
pub fn format_value(x: f64, precision: Option<usize>) -> String {
    match precision {
        None => format!("{x}"),
        Some(k) => {
            let k = k.max(1);
            let rounded: f64 = format!("{:.*e}", k - 1, x).parse().unwrap_or(x);
            format!("{rounded}")
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub iq: f64,
    pub values: Vec<f64>,
}

/// Marginal value of one skill point per scenario, one row per skill level.
#[derive(Debug, Clone, PartialEq)]
pub struct TableArtifact {
    pub labels: Vec<String>,
    pub rows: Vec<TableRow>,
}

impl TableArtifact {
    pub fn cell(&self, iq: f64, label: &str) -> Option<f64> {
        let col = self.labels.iter().position(|l| l == label)?;
        self.rows.iter().find(|r| r.iq == iq).map(|r| r.values[col])
    }

    pub fn to_csv(&self, precision: Option<usize>) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let header = std::iter::once("iq".to_string()).chain(self.labels.iter().cloned());
        w.write_record(header).expect("in-memory csv write");
        for row in &self.rows {
            let rec = std::iter::once(format_value(row.iq, precision))
                .chain(row.values.iter().map(|v| format_value(*v, precision)));
            w.write_record(rec).expect("in-memory csv write");
        }
        String::from_utf8(w.into_inner().expect("in-memory csv flush")).expect("csv output is utf-8")
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(text.as_bytes());
        let headers = rdr.headers().map_err(|e| table_parse("header", e))?.clone();
        if headers.get(0) != Some("iq") {
            return Err(table_parse("header", "first column must be `iq`"));
        }
        let labels: Vec<String> = headers.iter().skip(1).map(str::to_string).collect();
        let mut rows = Vec::new();
        for (idx, rec) in rdr.records().enumerate() {
            let loc = format!("row {}", idx + 1);
            let rec = rec.map_err(|e| table_parse(&loc, e))?;
            let nums: Vec<f64> = rec
                .iter()
                .map(|f| f.parse::<f64>().map_err(|e| table_parse(&loc, format!("`{f}`: {e}"))))
                .collect::<Result<_>>()?;
            rows.push(TableRow {
                iq: nums[0],
                values: nums[1..].to_vec(),
            });
        }
        Ok(Self { labels, rows })
    }

    pub fn to_text(&self, precision: Option<usize>) -> String {
        let width = 16;
        let mut out = format!("{:>8}", "iq");
        for l in &self.labels {
            let _ = write!(out, " {l:>width$}");
        }
        out.push('\n');
        for row in &self.rows {
            let _ = write!(out, "{:>8}", format_value(row.iq, precision));
            for v in &row.values {
                let _ = write!(out, " {:>width$}", format_value(*v, precision));
            }
            out.push('\n');
        }
        out
    }
}

fn table_parse(location: &str, err: impl std::fmt::Display) -> ModelError {
    ModelError::Parse {
        location: location.to_string(),
        message: err.to_string(),
    }
}

pub fn render_table1(scenarios: &[Scenario], iq_list: &[f64]) -> Result<TableArtifact> {
    if scenarios.is_empty() {
        return Err(ModelError::domain("table needs at least one scenario"));
    }
    if iq_list.is_empty() {
        return Err(ModelError::domain("table needs at least one skill level"));
    }
    let mut iqs = iq_list.to_vec();
    if iqs.iter().any(|x| !x.is_finite()) {
        return Err(ModelError::domain("skill levels must be finite"));
    }
    iqs.sort_by(f64::total_cmp);
    let rows = iqs
        .into_iter()
        .map(|iq| {
            let values: Vec<f64> = scenarios.iter().map(|s| s.economy.marginal_skill_value(iq)).collect();
            if values.iter().all(|v| v.is_finite()) {
                Ok(TableRow { iq, values })
            } else {
                Err(ModelError::domain(format!("non-finite marginal value at iq={iq}")))
            }
        })
        .collect::<Result<_>>()?;
    Ok(TableArtifact {
        labels: scenarios.iter().map(|s| s.label.clone()).collect(),
        rows,
    })
}

/// One curve of marginal skill value against skill.
#[derive(Debug, Clone, PartialEq)]
pub struct FigureSeries {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

pub fn render_figure1(scenarios: &[Scenario], iq_range: (f64, f64), samples: usize) -> Result<Vec<FigureSeries>> {
    let (lo, hi) = iq_range;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(ModelError::domain(format!("invalid skill range ({lo}, {hi})")));
    }
    if samples < 2 {
        return Err(ModelError::domain("figure needs at least two samples"));
    }
    let step = (hi - lo) / (samples - 1) as f64;
    let grid: Vec<f64> = (0..samples)
        .map(|k| if k == samples - 1 { hi } else { lo + step * k as f64 })
        .collect();
    Ok(scenarios
        .iter()
        .map(|s| FigureSeries {
            label: s.label.clone(),
            points: grid
                .iter()
                .map(|&iq| (iq, s.economy.marginal_skill_value(iq)))
                .collect(),
        })
        .collect())
}

/// Wide CSV: `iq` followed by one column per series. All series must share
/// the same grid, as [`render_figure1`] produces.
pub fn figure_csv(series: &[FigureSeries], precision: Option<usize>) -> String {
    let table = TableArtifact {
        labels: series.iter().map(|s| s.label.clone()).collect(),
        rows: series
            .first()
            .map(|first| {
                (0..first.points.len())
                    .map(|k| TableRow {
                        iq: first.points[k].0,
                        values: series.iter().map(|s| s.points[k].1).collect(),
                    })
                    .collect()
            })
            .unwrap_or_default(),
    };
    table.to_csv(precision)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Calibrate,
    Moments,
    Invest,
    Utility,
    Plateau,
    Cutoff,
    Bellcurve,
    Simulate,
    Table1,
    Figure1,
    Extrapolate,
}

impl Command {
    pub const ALL: [Command; 11] = [
        Command::Calibrate,
        Command::Moments,
        Command::Invest,
        Command::Utility,
        Command::Plateau,
        Command::Cutoff,
        Command::Bellcurve,
        Command::Simulate,
        Command::Table1,
        Command::Figure1,
        Command::Extrapolate,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Command::Calibrate => "calibrate",
            Command::Moments => "moments",
            Command::Invest => "invest",
            Command::Utility => "utility",
            Command::Plateau => "plateau",
            Command::Cutoff => "cutoff",
            Command::Bellcurve => "bellcurve",
            Command::Simulate => "simulate",
            Command::Table1 => "table1",
            Command::Figure1 => "figure1",
            Command::Extrapolate => "extrapolate",
        }
    }

    fn default_presets(&self) -> &'static [Preset] {
        match self {
            Command::Table1 => &[Preset::Paper1975, Preset::Paper2024, Preset::Paper2073],
            Command::Figure1 => &[Preset::Paper1975, Preset::Paper2024],
            Command::Cutoff | Command::Extrapolate => &[Preset::Paper2024, Preset::Paper1975],
            _ => &[Preset::Paper2024],
        }
    }
}

impl FromStr for Command {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self> {
        Command::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| {
            let names: Vec<_> = Command::ALL.iter().map(|c| c.name()).collect();
            ModelError::Usage(format!(
                "unknown subcommand `{s}` (expected one of {})",
                names.join(", ")
            ))
        })
    }
}

/// Inputs gathered from the command line.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    pub scenarios: Vec<PathBuf>,
    pub presets: Vec<String>,
    pub seed: Option<u64>,
    pub n: Option<usize>,
    pub phi: Option<f64>,
    pub alpha: Option<f64>,
    pub precision: usize,
    pub recalibrate: bool,
    /// Income CSV for `calibrate`.
    pub data: Option<PathBuf>,
    /// Period exponent for `extrapolate`.
    pub periods: f64,
    /// Wage threshold for `simulate`.
    pub threshold: Option<f64>,
    /// Skill levels for `table1`.
    pub iq: Vec<f64>,
    pub iq_range: (f64, f64),
    pub samples: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            scenarios: Vec::new(),
            presets: Vec::new(),
            seed: None,
            n: None,
            phi: None,
            alpha: None,
            precision: DEFAULT_PRECISION,
            recalibrate: false,
            data: None,
            periods: 1.0,
            threshold: None,
            iq: Vec::new(),
            iq_range: DEFAULT_FIGURE_RANGE,
            samples: DEFAULT_FIGURE_SAMPLES,
        }
    }
}

/// Human-readable text plus an optional CSV artifact.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub text: String,
    pub csv: Option<String>,
}

/// Runs `command` against the scenarios in one file.
pub fn run_scenario_file(path: impl Into<PathBuf>, command: &str, opts: &RunOptions) -> Result<Report> {
    let command = Command::from_str(command)?;
    let opts = RunOptions {
        scenarios: vec![path.into()],
        ..opts.clone()
    };
    run(command, &opts)
}

pub fn resolve_scenarios(command: Command, opts: &RunOptions) -> Result<Vec<Scenario>> {
    let mut out = Vec::new();
    for path in &opts.scenarios {
        out.push(Scenario::load(path, opts.recalibrate)?);
    }
    for name in &opts.presets {
        out.push(Scenario::from_preset(Preset::from_str(name)?, opts.recalibrate)?);
    }
    if out.is_empty() {
        for p in command.default_presets() {
            out.push(Scenario::from_preset(*p, opts.recalibrate)?);
        }
    }
    Ok(out)
}

pub fn run(command: Command, opts: &RunOptions) -> Result<Report> {
    let p = Some(opts.precision);
    match command {
        Command::Calibrate => run_calibrate(opts),
        Command::Table1 => {
            let scenarios = resolve_scenarios(command, opts)?;
            let iqs = if opts.iq.is_empty() {
                DEFAULT_IQ_LIST.to_vec()
            } else {
                opts.iq.clone()
            };
            let table = render_table1(&scenarios, &iqs)?;
            let text = format!(
                "Increase in annual earnings from one additional skill point\n{}",
                table.to_text(p)
            );
            Ok(Report {
                text,
                csv: Some(table.to_csv(p)),
            })
        }
        Command::Figure1 => {
            let scenarios = resolve_scenarios(command, opts)?;
            let series = render_figure1(&scenarios, opts.iq_range, opts.samples)?;
            let mut text = String::from("Marginal skill value series (plot on a log scale)\n");
            for s in &series {
                let (first, last) = (s.points[0], s.points[s.points.len() - 1]);
                let _ = writeln!(
                    text,
                    "{}: {} points, delta({}) = {}, delta({}) = {}",
                    s.label,
                    s.points.len(),
                    format_value(first.0, p),
                    format_value(first.1, p),
                    format_value(last.0, p),
                    format_value(last.1, p)
                );
            }
            Ok(Report {
                text,
                csv: Some(figure_csv(&series, p)),
            })
        }
        _ => {
            let scenarios = resolve_scenarios(command, opts)?;
            let mut kv = KeyValues::new(p);
            match command {
                Command::Moments => moments(&scenarios, opts, &mut kv),
                Command::Invest => invest(&scenarios, &mut kv)?,
                Command::Utility => utility(&scenarios, opts, &mut kv)?,
                Command::Plateau => plateau(&scenarios, opts, &mut kv)?,
                Command::Cutoff => cutoff(&scenarios, &mut kv)?,
                Command::Bellcurve => bellcurve(&scenarios, opts, &mut kv)?,
                Command::Simulate => simulation(&scenarios, opts, &mut kv)?,
                Command::Extrapolate => extrapolation(&scenarios, opts, &mut kv)?,
                Command::Calibrate | Command::Table1 | Command::Figure1 => unreachable!(),
            }
            Ok(kv.finish())
        }
    }
}

// Collects `(scenario, quantity, value)` records for both the text report
// and the CSV artifact.
struct KeyValues {
    precision: Option<usize>,
    text: String,
    records: Vec<(String, String, String)>,
}

impl KeyValues {
    fn new(precision: Option<usize>) -> Self {
        Self {
            precision,
            text: String::new(),
            records: Vec::new(),
        }
    }

    fn section(&mut self, title: &str) {
        if !self.text.is_empty() {
            self.text.push('\n');
        }
        let _ = writeln!(self.text, "[{title}]");
    }

    fn value(&mut self, scope: &str, key: &str, v: f64) {
        let s = format_value(v, self.precision);
        let _ = writeln!(self.text, "  {key:<28} {s}");
        self.records.push((scope.to_string(), key.to_string(), s));
    }

    fn tag(&mut self, scope: &str, key: &str, v: &str) {
        let _ = writeln!(self.text, "  {key:<28} {v}");
        self.records.push((scope.to_string(), key.to_string(), v.to_string()));
    }

    fn note(&mut self, line: &str) {
        let _ = writeln!(self.text, "  note: {line}");
    }

    fn finish(self) -> Report {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["scenario", "quantity", "value"])
            .expect("in-memory csv write");
        for r in &self.records {
            w.write_record([&r.0, &r.1, &r.2]).expect("in-memory csv write");
        }
        let csv = String::from_utf8(w.into_inner().expect("in-memory csv flush")).expect("utf-8");
        Report {
            text: self.text,
            csv: Some(csv),
        }
    }
}

fn describe(kv: &mut KeyValues, s: &Scenario) {
    kv.section(&s.label);
    let t = s.economy.tech;
    kv.value(&s.label, "A", t.a());
    kv.value(&s.label, "b", t.b());
    kv.value(&s.label, "c", t.c());
    kv.value(&s.label, "mu", s.economy.skills.mu());
    kv.value(&s.label, "sigma", s.economy.skills.sigma());
    if s.preset == Some(Preset::Chatbot) {
        kv.note("firms train AI models in place of students; investment is model training spend");
    }
}

fn run_calibrate(opts: &RunOptions) -> Result<Report> {
    let inputs = match &opts.data {
        Some(path) => load_income_series(path)?,
        None => vec![
            CalibrationInput::new("1975", INCOME_1975.0, INCOME_1975.1, SkillDistribution::iq())?,
            CalibrationInput::new("2024", INCOME_2024.0, INCOME_2024.1, SkillDistribution::iq())?,
        ],
    };
    let p = Some(opts.precision);
    let mut text = String::new();
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "label",
        "median",
        "mean",
        "mu",
        "sigma",
        "c",
        "b",
        "a",
        "b_paper",
        "a_paper",
        "rho",
        "mean_err",
        "median_err",
        "degenerate",
    ])
    .expect("in-memory csv write");
    for input in &inputs {
        let exact = calibrate(input)?;
        let rounded = calibrate_with(input, Rounding::Paper)?;
        let f = |x: f64| format_value(x, p);
        let _ = writeln!(
            text,
            "[{}]\n  c = {}\n  b = {}  (rounded: {})\n  A = {}  (from rounded b: {})\n  rho = {}\n  residuals: mean {}, median {}{}",
            input.label,
            f(exact.tech.c()),
            f(exact.tech.b()),
            f(rounded.tech.b()),
            f(exact.tech.a()),
            f(rounded.tech.a()),
            f(exact.rho),
            f(exact.mean_err),
            f(exact.median_err),
            if exact.degenerate { "\n  degenerate: mean equals median, c = 0" } else { "" }
        );
        w.write_record([
            input.label.clone(),
            f(input.median_income),
            f(input.mean_income),
            f(input.skills.mu()),
            f(input.skills.sigma()),
            f(exact.tech.c()),
            f(exact.tech.b()),
            f(exact.tech.a()),
            f(rounded.tech.b()),
            f(rounded.tech.a()),
            f(exact.rho),
            f(exact.mean_err),
            f(exact.median_err),
            exact.degenerate.to_string(),
        ])
        .expect("in-memory csv write");
    }
    let csv = String::from_utf8(w.into_inner().expect("in-memory csv flush")).expect("utf-8");
    Ok(Report { text, csv: Some(csv) })
}

fn moments(scenarios: &[Scenario], opts: &RunOptions, kv: &mut KeyValues) {
    for s in scenarios {
        describe(kv, s);
        let m = s.economy.income_moments();
        kv.value(&s.label, "mean", m.mean);
        kv.value(&s.label, "median", m.median);
        kv.value(&s.label, "rho", m.rho);
        if let (Some(preset), false) = (s.preset, opts.recalibrate) {
            if let Some((median, mean)) = preset.income_target() {
                kv.value(&s.label, "observed_median", median);
                kv.value(&s.label, "observed_mean", mean);
                kv.note("coefficients use b rounded to one decimal, so moments differ from the observed incomes; pass --recalibrate for exact ones");
            }
        }
    }
}

fn invest(scenarios: &[Scenario], kv: &mut KeyValues) -> Result<()> {
    for s in scenarios {
        describe(kv, s);
        kv.note("skill response mu(I) = ln I");
        let sol = solve_log_form(&s.economy);
        kv.tag(&s.label, "regime", &sol.regime.to_string());
        kv.value(&s.label, "investment", sol.investment);
        kv.value(&s.label, "foc_residual", sol.foc_residual);
        kv.value(&s.label, "net_value", sol.net_value);
        if sol.regime == Regime::Interior {
            let gap = median_gap(&s.economy)?;
            kv.value(&s.label, "median_at_optimum", gap.median);
            kv.value(&s.label, "median_minus_investment", gap.direct);
            kv.value(&s.label, "median_gap_identity", gap.identity);
            if let Ok(frac) = s
                .economy
                .with_skills(SkillDistribution::new(sol.investment.ln(), s.economy.skills.sigma())?)
                .income_cdf(sol.investment)
            {
                kv.value(&s.label, "share_not_covering_investment", frac);
            }
            if gap.direct < 0.0 {
                kv.note("median income falls short of the optimal investment");
            }
        } else if sol.regime == Regime::Unbounded {
            kv.note("c >= 1: investment runs away; value shown at the search ceiling");
        }
    }
    Ok(())
}

fn preference_for(s: &Scenario, opts: &RunOptions) -> Result<Preference> {
    match (opts.phi, s.preference) {
        (Some(phi), _) => Preference::new(phi),
        (None, Some(p)) => Ok(p),
        (None, None) => Err(ModelError::Usage(format!(
            "scenario `{}` needs a risk aversion: pass --phi or add a [preference] section",
            s.label
        ))),
    }
}

fn rent_for(s: &Scenario, opts: &RunOptions) -> Result<RentShare> {
    match (opts.alpha, s.rent) {
        (Some(alpha), _) => RentShare::new(alpha),
        (None, Some(r)) => Ok(r),
        (None, None) => Err(ModelError::Usage(format!(
            "scenario `{}` needs a rent share: pass --alpha or add a [rent] section",
            s.label
        ))),
    }
}

fn utility(scenarios: &[Scenario], opts: &RunOptions, kv: &mut KeyValues) -> Result<()> {
    for s in scenarios {
        describe(kv, s);
        let pref = preference_for(s, opts)?;
        kv.value(&s.label, "phi", pref.phi());
        kv.value(&s.label, "expected_utility", expected_utility(&s.economy, &pref));
    }
    if let [first, rest @ ..] = scenarios {
        let pref = preference_for(first, opts)?;
        for other in rest {
            let scope = format!("{}/{}", first.label, other.label);
            kv.section(&scope);
            let ratio = utility_ratio(&first.economy, &other.economy, &pref)?;
            kv.value(&scope, "utility_ratio", ratio);
            let (ua, ub) = (
                expected_utility(&first.economy, &pref),
                expected_utility(&other.economy, &pref),
            );
            let preferred = if ua > ub { &first.label } else { &other.label };
            kv.tag(&scope, "preferred", preferred);
            if pref.phi() > 1.0 {
                kv.note("phi > 1: utilities are negative, so a ratio above 1 means the first economy is worse");
            }
        }
    }
    Ok(())
}

fn plateau(scenarios: &[Scenario], opts: &RunOptions, kv: &mut KeyValues) -> Result<()> {
    for s in scenarios {
        describe(kv, s);
        let pref = preference_for(s, opts)?;
        kv.value(&s.label, "phi", pref.phi());
        match optimal_plateau(&s.economy.skills, &pref)? {
            Plateau::Interior { c_star, second_order } => {
                kv.value(&s.label, "c_star", c_star);
                kv.value(&s.label, "second_order_sign", second_order);
                let side = if s.economy.tech.c() > c_star {
                    "above"
                } else {
                    "at or below"
                };
                kv.tag(&s.label, "current_c_vs_plateau", side);
            }
            Plateau::Unbounded => {
                kv.tag(&s.label, "c_star", "unbounded");
                kv.note("phi < 1: expected utility rises with c without limit");
            }
        }
    }
    Ok(())
}

fn pair(scenarios: &[Scenario], what: &str) -> Result<(Scenario, Scenario)> {
    match scenarios {
        [a, b] => Ok((a.clone(), b.clone())),
        _ => Err(ModelError::Usage(format!(
            "{what} needs exactly two scenarios (got {})",
            scenarios.len()
        ))),
    }
}

fn cutoff(scenarios: &[Scenario], kv: &mut KeyValues) -> Result<()> {
    let (a, b) = pair(scenarios, "cutoff")?;
    describe(kv, &a);
    describe(kv, &b);
    let scope = format!("{}/{}", a.label, b.label);
    kv.section(&scope);
    let phi = cutoff_risk_aversion(&a.economy, &b.economy)?;
    kv.value(&scope, "phi_star", phi);
    match Preference::new(phi) {
        Ok(pref) => {
            kv.value(
                &scope,
                "utility_ratio_at_phi_star",
                utility_ratio(&a.economy, &b.economy, &pref)?,
            );
            kv.value(
                &scope,
                &format!("expected_utility_{}", a.label),
                expected_utility(&a.economy, &pref),
            );
            kv.value(
                &scope,
                &format!("expected_utility_{}", b.label),
                expected_utility(&b.economy, &pref),
            );
            kv.note("agents with phi = phi_star are indifferent; for larger phi the lower-c economy is preferred");
        }
        Err(_) => kv.note("phi_star lies outside the admissible range phi > 0, phi != 1; no indifference check"),
    }
    Ok(())
}

fn bellcurve(scenarios: &[Scenario], opts: &RunOptions, kv: &mut KeyValues) -> Result<()> {
    for s in scenarios {
        describe(kv, s);
        let rent = rent_for(s, opts)?;
        kv.value(&s.label, "alpha", rent.alpha());
        let private = private_equilibrium(&s.economy, &rent)?;
        let social = social_optimum(&s.economy, &rent)?;
        kv.value(&s.label, "private_investment", private.investment);
        kv.value(&s.label, "private_foc_residual", private.foc_residual);
        kv.tag(&s.label, "social_regime", &social.regime.to_string());
        kv.value(&s.label, "social_investment", social.investment);
        kv.value(&s.label, "social_foc_residual", social.foc_residual);
        if social.regime == Regime::Interior {
            let ratio = overinvestment_ratio(&s.economy, &rent)?;
            kv.value(&s.label, "overinvestment_ratio", ratio.quotient);
            kv.value(&s.label, "overinvestment_closed_form", ratio.closed_form);
        }
        kv.value(&s.label, "mean_productivity", mean_productivity(&s.economy, &rent));
    }
    Ok(())
}

fn simulation(scenarios: &[Scenario], opts: &RunOptions, kv: &mut KeyValues) -> Result<()> {
    for s in scenarios {
        describe(kv, s);
        let base = s.simulation.unwrap_or_default();
        let cfg = SimulationConfig::new(opts.n.unwrap_or(base.n()), opts.seed.unwrap_or(base.seed()))?;
        let pref = match (opts.phi, s.preference) {
            (Some(phi), _) => Some(Preference::new(phi)?),
            (None, p) => p,
        };
        let sum = simulate(&s.economy, &cfg, opts.threshold, pref.as_ref());
        let closed = s.economy.income_moments();
        kv.value(&s.label, "n", cfg.n() as f64);
        kv.value(&s.label, "seed", cfg.seed() as f64);
        kv.value(&s.label, "mean", sum.mean);
        kv.value(&s.label, "mean_std_error", sum.mean_std_error);
        kv.value(&s.label, "mean_closed_form", closed.mean);
        kv.value(&s.label, "median", sum.median);
        kv.value(&s.label, "median_std_error", sum.median_std_error);
        kv.value(&s.label, "median_closed_form", closed.median);
        for (q, v) in &sum.quantiles {
            kv.value(&s.label, &format!("quantile_{q}"), *v);
        }
        if let (Some(t), Some(frac)) = (opts.threshold, sum.frac_below) {
            kv.value(&s.label, "threshold", t);
            kv.value(&s.label, "frac_below", frac);
            if let Ok(analytic) = s.economy.income_cdf(t) {
                kv.value(&s.label, "frac_below_closed_form", analytic);
            }
        }
        if let (Some(pref), Some(u), Some(se)) = (pref, sum.utility_mean, sum.utility_std_error) {
            kv.value(&s.label, "utility_mean", u);
            kv.value(&s.label, "utility_std_error", se);
            kv.value(
                &s.label,
                "expected_utility_closed_form",
                expected_utility(&s.economy, &pref),
            );
        }
    }
    Ok(())
}

fn extrapolation(scenarios: &[Scenario], opts: &RunOptions, kv: &mut KeyValues) -> Result<()> {
    let (base, reference) = pair(scenarios, "extrapolate")?;
    describe(kv, &base);
    describe(kv, &reference);
    let tech = extrapolate(&base.economy.tech, &reference.economy.tech, opts.periods)?;
    let scope = "extrapolated";
    kv.section(scope);
    kv.value(scope, "periods", opts.periods);
    kv.value(scope, "A", tech.a());
    kv.value(scope, "b", tech.b());
    kv.value(scope, "c", tech.c());
    let econ = Economy::new(tech, base.economy.skills);
    kv.value(scope, "marginal_skill_value_at_100", econ.marginal_skill_value(100.0));
    Ok(())
}
