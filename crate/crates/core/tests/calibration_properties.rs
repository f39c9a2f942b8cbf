mod common;

use std::io::Write;

use proptest::prelude::*;

use common::rel;
use skillwage::calibration::{
    calibrate, calibrate_with, extrapolate, load_income_series, read_income_series, CalibrationInput, GrowthFactors,
    Rounding,
};
use skillwage::{Economy, ModelError, SkillDistribution, Technology};

proptest! {
    #[test]
    fn round_trip_reproduces_incomes(
        median in 1.0f64..1e6,
        spread in 1.0001f64..5.0,
        mu in -50.0f64..150.0,
        sigma in 0.5f64..30.0,
    ) {
        let skills = SkillDistribution::new(mu, sigma).unwrap();
        let input = CalibrationInput::new("", median, median * spread, skills).unwrap();
        let result = calibrate(&input).unwrap();
        let m = Economy::new(result.tech, skills).income_moments();
        prop_assert!(rel(m.median, median) <= 1e-10);
        prop_assert!(rel(m.mean, median * spread) <= 1e-10);
        prop_assert!(result.mean_err <= 1e-10 && result.median_err <= 1e-10);
    }

    #[test]
    fn calibrating_an_economy_recovers_it(
        b in -3.0f64..8.0,
        c in 0.01f64..1.0,
        mu in -20.0f64..120.0,
        sigma in 0.5f64..20.0,
    ) {
        prop_assume!(c * sigma < 6.0);
        let skills = SkillDistribution::new(mu, sigma).unwrap();
        let econ = Economy::new(Technology::from_b(b, c).unwrap(), skills);
        let m = econ.income_moments();
        let back = calibrate(&CalibrationInput::new("", m.median, m.mean, skills).unwrap()).unwrap();
        prop_assert!(rel(back.tech.c(), c) <= 1e-10);
        prop_assert!(rel(back.tech.a(), econ.tech.a()) <= 1e-10);
    }
}

#[test]
fn c_increases_with_the_mean() {
    let iq = SkillDistribution::iq();
    let mut last = 0.0;
    for mean in [84_000.0, 90_000.0, 100_000.0, 121_000.0, 150_000.0] {
        let c = calibrate(&CalibrationInput::new("", 83_000.0, mean, iq).unwrap())
            .unwrap()
            .tech
            .c();
        assert!(c > last);
        last = c;
    }
}

#[test]
fn published_coefficients() {
    let iq = SkillDistribution::iq();
    let early = calibrate(&CalibrationInput::new("1975", 58_000.0, 68_000.0, iq).unwrap()).unwrap();
    let late = calibrate(&CalibrationInput::new("2024", 83_000.0, 121_000.0, iq).unwrap()).unwrap();
    assert!((early.tech.c() - 0.037602).abs() < 1e-6);
    assert!((late.tech.c() - 0.057885).abs() < 1e-6);
    assert!((early.tech.a() - 1350.0).abs() < 1.0);
    assert!((late.tech.a() - 254.0).abs() < 1.0);
    let rounded = calibrate_with(
        &CalibrationInput::new("2024", 83_000.0, 121_000.0, iq).unwrap(),
        Rounding::Paper,
    )
    .unwrap();
    assert_eq!(rounded.tech.b(), 5.5);
    assert_eq!(rounded.tech.c(), late.tech.c());
    assert!(rounded.median_err > 0.01 && rounded.mean_err > 0.01);
}

#[test]
fn equal_mean_and_median_is_degenerate() {
    let r = calibrate(&CalibrationInput::new("", 50.0, 50.0, SkillDistribution::iq()).unwrap()).unwrap();
    assert!(r.degenerate);
    assert_eq!(r.tech.c(), 0.0);
    assert!(matches!(
        CalibrationInput::new("", 50.0, 40.0, SkillDistribution::iq()),
        Err(ModelError::Infeasible(_))
    ));
    assert!(CalibrationInput::new("", -1.0, 40.0, SkillDistribution::iq()).is_err());
}

#[test]
fn extrapolation_composes() {
    let early = Technology::from_b(7.2, 0.0376).unwrap();
    let late = Technology::from_b(5.5, 0.0579).unwrap();
    let factors = GrowthFactors::between(&late, &early).unwrap();
    let twice = extrapolate(&late, &early, 2.0).unwrap();
    let stepwise = factors.apply(&factors.apply(&late, 1.0).unwrap(), 1.0).unwrap();
    assert!(rel(twice.a(), stepwise.a()) < 1e-12);
    assert!(rel(twice.c(), stepwise.c()) < 1e-12);
    let compounded = factors.compound(2.0).apply(&late, 1.0).unwrap();
    assert!(rel(compounded.c(), twice.c()) < 1e-12);
    assert_eq!(extrapolate(&late, &early, 0.0).unwrap(), late);
    let next = extrapolate(&late, &early, 1.0).unwrap();
    assert!(rel(next.c(), 0.0579 * 0.0579 / 0.0376) < 1e-12);
    assert!(extrapolate(&late, &early, -1.0).is_err());
    assert!(GrowthFactors::between(&late, &Technology::from_a(1.0, 0.0).unwrap()).is_err());
}

#[test]
fn income_series_from_file() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    writeln!(file, "label,median,mean,mu,sigma").unwrap();
    writeln!(file, "1975,58000,68000,,").unwrap();
    writeln!(file, "custom,40000,52000,10,2").unwrap();
    let rows = load_income_series(file.path()).unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0].skills, SkillDistribution::iq());
    assert_eq!(rows[1].skills, SkillDistribution::new(10.0, 2.0).unwrap());
}

#[test]
fn income_series_errors_name_the_row() {
    let bad = "label,median,mean\nok,1,2\nbroken,abc,2\n";
    match read_income_series(bad.as_bytes()) {
        Err(ModelError::Parse { location, .. }) => assert_eq!(location, "row 2"),
        other => panic!("{other:?}"),
    }
    match read_income_series("label,mean\nx,1\n".as_bytes()) {
        Err(ModelError::Parse { location, .. }) => assert_eq!(location, "header"),
        other => panic!("{other:?}"),
    }
    assert!(read_income_series("".as_bytes()).unwrap().is_empty());
    assert!(matches!(
        load_income_series("/nonexistent/incomes.csv"),
        Err(ModelError::Io { .. })
    ));
}
