use fuzzrate_core::dynamics::orbit_with;
use fuzzrate_core::prelude::*;
use fuzzrate_core::property_suite::{replay, run_suite, Property, SuiteReport};

fn y01() -> Point {
    Point::xy(0.0, 1.0).unwrap()
}

#[test]
fn rate_json_round_trips() {
    let fam = MembershipFamily::conic(1.0).unwrap();
    let cfg = SearchConfig::default();
    for b in [0.5, 1.0, 2.0] {
        let op = Operator::diag(&[1.0, b]).unwrap();
        for method in [RateMethod::Closed, RateMethod::Grid] {
            let r = rate(&fam, &op, &y01(), method, &cfg).unwrap();
            let json = serde_json::to_string(&r).unwrap();
            let back: FuzzyRate = serde_json::from_str(&json).unwrap();
            assert_eq!(back, r, "{json}");
        }
    }
}

#[test]
fn orbit_json_round_trips_and_is_deterministic() {
    let fam = MembershipFamily::conic(1.0).unwrap();
    let op = Operator::diag(&[1.0, 1.5]).unwrap();
    let cfg = SearchConfig::default();
    let a = orbit_with(&op, &y01(), 4, &fam, RateMethod::Grid, &cfg).unwrap();
    let b = orbit_with(&op, &y01(), 4, &fam, RateMethod::Grid, &cfg).unwrap();
    assert_eq!(a, b);
    let back: OrbitReport = serde_json::from_str(&serde_json::to_string(&a).unwrap()).unwrap();
    assert_eq!(back, a);

    let shrink = Operator::diag(&[1.0, 0.5]).unwrap();
    let inf = orbit(&shrink, &y01(), 2, &fam, &cfg).unwrap();
    let back: OrbitReport = serde_json::from_str(&serde_json::to_string(&inf).unwrap()).unwrap();
    assert_eq!(back, inf);
}

// The product bound is tight here, so grid error alone can exceed its slack;
// only the values are compared.
#[test]
fn grid_orbit_tracks_the_closed_form() {
    let fam = MembershipFamily::conic(1.0).unwrap();
    let op = Operator::diag(&[1.0, 2.0]).unwrap();
    let rep = orbit_with(&op, &y01(), 3, &fam, RateMethod::Grid, &SearchConfig::default()).unwrap();
    for k in 1..=3 {
        let closed = (1.0 - 2f64.powi(-4 * k)).exp();
        let got = rep.n_step_rates[k as usize - 1].finite_value().unwrap();
        assert!(((got - closed) / closed).abs() < 1e-4, "k={k}: {got} vs {closed}");
    }
}

#[test]
fn suite_report_round_trips() {
    let report = run_suite(11, 20).unwrap();
    assert!(report.passed);
    let json = serde_json::to_string(&report).unwrap();
    let back: SuiteReport = serde_json::from_str(&json).unwrap();
    assert_eq!(back, report);
}

#[test]
fn recorded_instances_replay() {
    // Passing instances replay as passing: replay is the same evaluation.
    let report = run_suite(5, 3).unwrap();
    for check in &report.checks {
        assert_eq!(check.trials, 3);
        assert!(check.failures.is_empty());
    }
    use fuzzrate_core::property_suite::{generate, Counterexample};
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
    for p in Property::ALL {
        let instance = generate(p, &mut rng).unwrap();
        let c = Counterexample { trial: 0, instance, evaluation: None, error: None };
        let first = replay(p, &c).unwrap();
        let json = serde_json::to_string(&c).unwrap();
        let again: Counterexample = serde_json::from_str(&json).unwrap();
        assert_eq!(replay(p, &again).unwrap(), first);
    }
}
