//! Orbits `y, B(y), B²(y), …`, their per-step and n-step rates, the
//! running product bound, quasi-fixed points and fixed-point certification.

use serde::{Deserialize, Serialize};

use crate::extended::ExtendedReal;
use crate::membership::{MemberId, MembershipFamily};
use crate::operators::{power, Operator};
use crate::rate_engine::search::{unit_ratio_search, unit_residual};
use crate::rate_engine::{rate, FuzzyRate, RateMethod, RatioSample, SearchConfig};
use crate::rate_engine::sample_function;
use crate::{FuzzyError, Point, Result};

/// Relative slack allowed when comparing `‖Bᵏ‖_y` with the product bound.
pub const BOUND_SLACK: f64 = 1e-9;

/// Componentwise tolerance for fixed-point checks.
pub const DEFAULT_FIXED_POINT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundStatus {
    Ok,
    Violated,
    /// One side is undefined.
    Skipped,
}

impl BoundStatus {
    pub fn is_ok(self) -> bool {
        self == BoundStatus::Ok
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitReport {
    /// `y, B(y), …, Bⁿ(y)`.
    pub points: Vec<Point>,
    /// `‖B‖_{B^{k-1}(y)}` for `k = 1..=n`.
    pub step_rates: Vec<FuzzyRate>,
    /// `‖Bᵏ‖_y` for `k = 1..=n`.
    pub n_step_rates: Vec<FuzzyRate>,
    /// Running products of the step rates; `None` once a step rate is
    /// undefined.
    pub product_bounds: Vec<Option<ExtendedReal>>,
    pub bound_satisfied: Vec<BoundStatus>,
}

impl OrbitReport {
    pub fn steps(&self) -> usize {
        self.step_rates.len()
    }
}

/// Iterates `op` from `y` for `n` steps, computing rates with
/// [`RateMethod::Auto`].
pub fn orbit(
    op: &Operator,
    y: &Point,
    n: usize,
    fam: &MembershipFamily,
    cfg: &SearchConfig,
) -> Result<OrbitReport> {
    orbit_with(op, y, n, fam, RateMethod::Auto, cfg)
}

pub fn orbit_with(
    op: &Operator,
    y: &Point,
    n: usize,
    fam: &MembershipFamily,
    method: RateMethod,
    cfg: &SearchConfig,
) -> Result<OrbitReport> {
    if n == 0 {
        return Err(FuzzyError::InvalidParameter {
            name: "steps",
            value: 0.0,
            reason: "must be at least 1",
        });
    }
    let steps = u32::try_from(n).map_err(|_| FuzzyError::InvalidParameter {
        name: "steps",
        value: n as f64,
        reason: "too many steps",
    })?;

    let mut points = Vec::with_capacity(n + 1);
    points.push(y.clone());
    for k in 0..n {
        let next = op.apply(&points[k])?;
        points.push(next);
    }

    let mut step_rates = Vec::with_capacity(n);
    let mut n_step_rates = Vec::with_capacity(n);
    let mut product_bounds = Vec::with_capacity(n);
    let mut bound_satisfied = Vec::with_capacity(n);
    let mut product = Some(ExtendedReal::Finite(1.0));

    for k in 1..=steps {
        let step = rate(fam, op, &points[k as usize - 1], method, cfg)?;
        let n_step = rate(fam, &power(op, k), y, method, cfg)?;
        product = match (product, step.extended()) {
            (Some(p), Some(s)) => Some(p.mul(s)),
            _ => None,
        };
        bound_satisfied.push(bound_status(n_step.extended(), product));
        product_bounds.push(product);
        step_rates.push(step);
        n_step_rates.push(n_step);
    }

    Ok(OrbitReport {
        points,
        step_rates,
        n_step_rates,
        product_bounds,
        bound_satisfied,
    })
}

fn bound_status(n_step: Option<ExtendedReal>, product: Option<ExtendedReal>) -> BoundStatus {
    match (n_step, product) {
        (None, _) | (_, None) => BoundStatus::Skipped,
        (_, Some(ExtendedReal::Infinite)) => BoundStatus::Ok,
        (Some(ExtendedReal::Infinite), Some(ExtendedReal::Finite(_))) => BoundStatus::Violated,
        (Some(ExtendedReal::Finite(v)), Some(ExtendedReal::Finite(p))) => {
            if v <= p * (1.0 + BOUND_SLACK) {
                BoundStatus::Ok
            } else {
                BoundStatus::Violated
            }
        }
    }
}

/// Whether `‖Bᵏ‖_y ≥ delta` for every `k ≥ from_step` (1-based). Infinite
/// rates count as large; undefined ones fail the check.
pub fn check_uniform_lower_bound(report: &OrbitReport, delta: f64, from_step: usize) -> bool {
    report
        .n_step_rates
        .iter()
        .skip(from_step.saturating_sub(1))
        .all(|r| match r {
            FuzzyRate::Finite { value, .. } => *value >= delta,
            FuzzyRate::PlusInfinity(_) => true,
            FuzzyRate::Undefined { .. } => false,
        })
}

/// The first step `k` (1-based) from which every step rate is finite and
/// within `eps` of 1.
pub fn step_rate_convergence(report: &OrbitReport, eps: f64) -> Option<usize> {
    let close = |r: &FuzzyRate| r.finite_value().is_some_and(|v| (v - 1.0).abs() <= eps);
    let n = report.step_rates.len();
    let mut first = None;
    for k in (0..n).rev() {
        if close(&report.step_rates[k]) {
            first = Some(k + 1);
        } else {
            break;
        }
    }
    first
}

/// A member whose value is unchanged across one orbit step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuasiFixedFinding {
    pub step: usize,
    pub witness: MemberId,
    /// `|F₀(Bᵏ(y)) / F₀(B^{k-1}(y)) - 1|`.
    pub ratio_residual: f64,
    /// The residual is exactly zero.
    pub exact: bool,
}

/// Searches for `F₀` with `|F₀(Bᵏ(y)) / F₀(B^{k-1}(y)) - 1| ≤ eps`,
/// returning the smallest residual found.
pub fn quasi_fixed_search(
    op: &Operator,
    y: &Point,
    fam: &MembershipFamily,
    step: usize,
    eps: f64,
    cfg: &SearchConfig,
) -> Result<Option<QuasiFixedFinding>> {
    if step == 0 {
        return Err(FuzzyError::InvalidParameter {
            name: "step",
            value: 0.0,
            reason: "must be at least 1",
        });
    }
    if !(eps > 0.0) {
        return Err(FuzzyError::InvalidParameter {
            name: "eps",
            value: eps,
            reason: "must be positive",
        });
    }
    let mut from = y.clone();
    for _ in 1..step {
        from = op.apply(&from)?;
    }
    let to = op.apply(&from)?;

    let best: Option<(MemberId, f64)> = match fam {
        MembershipFamily::Finite(members) => {
            let mut best: Option<(MemberId, f64)> = None;
            for (i, f) in members.iter().enumerate() {
                let s = sample_function(MemberId::Index(i), f, &from, &to)?;
                if let Some(r) = unit_residual(&s) {
                    if best.is_none_or(|(_, b)| r < b) {
                        best = Some((s.member, r));
                    }
                }
            }
            best
        }
        MembershipFamily::Parametric(p) => {
            unit_ratio_search(p, &from, &to, cfg)?.map(|(t, _, r)| (MemberId::Param(t), r))
        }
    };
    Ok(best.filter(|(_, r)| *r <= eps).map(|(witness, r)| QuasiFixedFinding {
        step,
        witness,
        ratio_residual: r,
        exact: r == 0.0,
    }))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixedPointCertificate {
    /// `B^{n-1}(y)`.
    pub candidate: Point,
    pub quasi_finding: QuasiFixedFinding,
    pub injective_declared: bool,
    /// Ratio residual of the witness, re-evaluated at the candidate.
    pub ratio_residual: f64,
    /// `‖B(c) - c‖∞` for the candidate `c`.
    pub operator_residual: f64,
    pub certified: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub reasons: Vec<String>,
}

/// Checks whether `B^{n-1}(y)` is a fixed point, given a quasi-fixed finding
/// for step `n`. Injectivity of the witness is taken from its declaration;
/// the operator residual is always checked directly.
pub fn certify_fixed_point(
    op: &Operator,
    y: &Point,
    n: usize,
    finding: &QuasiFixedFinding,
    fam: &MembershipFamily,
    tol: f64,
) -> Result<FixedPointCertificate> {
    if n == 0 {
        return Err(FuzzyError::InvalidParameter {
            name: "n",
            value: 0.0,
            reason: "must be at least 1",
        });
    }
    let mut candidate = y.clone();
    for _ in 1..n {
        candidate = op.apply(&candidate)?;
    }
    let image = op.apply(&candidate)?;
    let operator_residual = image.distance_inf(&candidate)?;

    let f0 = fam.member(finding.witness)?;
    let injective_declared = f0.injective() == Some(true);
    let sample: RatioSample = sample_function(finding.witness, &f0, &candidate, &image)?;
    let ratio_residual = unit_residual(&sample).unwrap_or(f64::INFINITY);

    let mut reasons = Vec::new();
    if finding.step != n {
        reasons.push(format!("finding is for step {}, not {n}", finding.step));
    }
    if !injective_declared {
        reasons.push(format!("witness {} is not declared injective", finding.witness));
    }
    if !(ratio_residual <= tol) {
        reasons.push(format!("ratio residual {ratio_residual:e} exceeds {tol:e}"));
    }
    if !(operator_residual <= tol) {
        reasons.push(format!("operator residual {operator_residual:e} exceeds {tol:e}"));
    }
    Ok(FixedPointCertificate {
        candidate,
        quasi_finding: *finding,
        injective_declared,
        ratio_residual,
        operator_residual,
        certified: reasons.is_empty(),
        reasons,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::membership::MembershipFunction;
    use approx::assert_relative_eq;

    fn y01() -> Point {
        Point::xy(0.0, 1.0).unwrap()
    }

    fn step_oracle(b: f64, k: i32) -> f64 {
        (b.powi(-4 * (k - 1)) - b.powi(-4 * k)).exp()
    }

    #[test]
    fn conic_orbit_telescopes() {
        let fam = MembershipFamily::conic(1.0).unwrap();
        let op = Operator::diag(&[1.0, 2.0]).unwrap();
        let rep = orbit(&op, &y01(), 3, &fam, &SearchConfig::default()).unwrap();
        assert_eq!(rep.points.len(), 4);
        assert_eq!(rep.points[3], Point::xy(0.0, 8.0).unwrap());
        let mut product = 1.0;
        for k in 1..=3 {
            let i = k as usize - 1;
            product *= step_oracle(2.0, k);
            let closed = (1.0 - 2f64.powi(-4 * k)).exp();
            assert_relative_eq!(rep.step_rates[i].finite_value().unwrap(), step_oracle(2.0, k), max_relative = 1e-12);
            assert_relative_eq!(rep.n_step_rates[i].finite_value().unwrap(), closed, max_relative = 1e-12);
            assert_relative_eq!(rep.product_bounds[i].unwrap().to_f64(), product, max_relative = 1e-12);
            assert!(rep.bound_satisfied[i].is_ok());
        }
        assert!(check_uniform_lower_bound(&rep, 1.0, 1));
    }

    #[test]
    fn identity_orbit_is_flat() {
        let fam = MembershipFamily::conic(1.0).unwrap();
        let rep = orbit(&Operator::identity(), &y01(), 5, &fam, &SearchConfig::default()).unwrap();
        for k in 0..5 {
            assert_eq!(rep.step_rates[k].finite_value(), Some(1.0));
            assert_eq!(rep.n_step_rates[k].finite_value(), Some(1.0));
            assert_eq!(rep.product_bounds[k], Some(ExtendedReal::Finite(1.0)));
            assert!(rep.bound_satisfied[k].is_ok());
        }
        assert!(check_uniform_lower_bound(&rep, 1.0, 1));
        assert_eq!(step_rate_convergence(&rep, 1e-12), Some(1));
    }

    #[test]
    fn contracting_orbit_is_absorbed() {
        let fam = MembershipFamily::conic(1.0).unwrap();
        let op = Operator::diag(&[1.0, 0.5]).unwrap();
        let rep = orbit(&op, &y01(), 2, &fam, &SearchConfig::default()).unwrap();
        assert!(rep.step_rates.iter().all(FuzzyRate::is_infinite));
        assert!(rep.product_bounds.iter().all(|p| *p == Some(ExtendedReal::Infinite)));
        assert!(rep.bound_satisfied.iter().all(|b| b.is_ok()));
        assert_eq!(step_rate_convergence(&rep, 1e-3), None);
    }

    #[test]
    fn undefined_rates_skip_the_bound() {
        // (2, 0) is on no conic, so the identity gives 0/0 everywhere.
        let fam = MembershipFamily::conic(1.0).unwrap();
        let y = Point::xy(2.0, 0.0).unwrap();
        let rep = orbit(&Operator::identity(), &y, 2, &fam, &SearchConfig::default()).unwrap();
        assert!(rep.step_rates.iter().all(FuzzyRate::is_undefined));
        assert_eq!(rep.bound_satisfied, vec![BoundStatus::Skipped; 2]);
        assert!(!check_uniform_lower_bound(&rep, 0.5, 1));
    }

    #[test]
    fn lower_bound_detects_small_rates() {
        let p = Point::xy(1.0, 0.0).unwrap();
        let q = Point::xy(2.0, 0.0).unwrap();
        let f = MembershipFunction::table_from_values(vec![(p.clone(), 1.0), (q, 0.3)]).unwrap();
        let fam = MembershipFamily::finite(vec![f]).unwrap();
        let op = Operator::diag(&[2.0, 1.0]).unwrap();
        let rep = orbit(&op, &p, 1, &fam, &SearchConfig::default()).unwrap();
        assert_relative_eq!(rep.n_step_rates[0].finite_value().unwrap(), 0.3);
        assert!(!check_uniform_lower_bound(&rep, 0.5, 1));
    }

    #[test]
    fn step_rates_converge_for_expansion() {
        let fam = MembershipFamily::conic(1.0).unwrap();
        let op = Operator::diag(&[1.0, 2.0]).unwrap();
        let rep = orbit(&op, &y01(), 10, &fam, &SearchConfig::default()).unwrap();
        let k = step_rate_convergence(&rep, 1e-3).unwrap();
        // Oracle: first k with e^{16^{1-k} - 16^{-k}} - 1 ≤ 1e-3.
        let expect = (1..=10).find(|&k| step_oracle(2.0, k) - 1.0 <= 1e-3).unwrap() as usize;
        assert_eq!(k, expect);
    }

    #[test]
    fn quasi_fixed_midpoint() {
        let fam = MembershipFamily::conic(1.0).unwrap();
        let b = 2.0f64;
        let op = Operator::diag(&[1.0, b]).unwrap();
        for k in 1..=5 {
            let a = b.powi(-2 * (k - 1));
            let c = b.powi(-2 * k);
            let mu = 0.5 * (a + c);
            let f = quasi_fixed_search(&op, &y01(), &fam, k as usize, 1e-9, &SearchConfig::default())
                .unwrap()
                .unwrap();
            let t = f.witness.param().unwrap();
            assert!((t - mu).abs() <= 1e-6, "k={k}: {t} vs {mu}");
            assert!(f.ratio_residual <= 1e-12);
        }
    }

    #[test]
    fn quasi_fixed_finite_cases() {
        let p = Point::xy(1.0, 0.0).unwrap();
        let q = Point::xy(2.0, 0.0).unwrap();
        let f = MembershipFunction::table_from_values(vec![(p.clone(), 0.5), (q, 0.1)]).unwrap();
        let fam = MembershipFamily::finite(vec![f]).unwrap();
        let op = Operator::diag(&[2.0, 1.0]).unwrap();
        let cfg = SearchConfig::default();
        assert_eq!(quasi_fixed_search(&op, &p, &fam, 1, 1e-6, &cfg).unwrap(), None);
        let found = quasi_fixed_search(&Operator::identity(), &p, &fam, 1, 1e-6, &cfg).unwrap().unwrap();
        assert!(found.exact);
        assert_eq!(found.witness, MemberId::Index(0));
    }

    #[test]
    fn projection_is_certified() {
        let y = Point::xy(3.0, 5.0).unwrap();
        let op = Operator::diag(&[1.0, 0.0]).unwrap();
        let f0 = MembershipFunction::table_from_values(vec![
            (y.clone(), 0.9),
            (Point::xy(3.0, 0.0).unwrap(), 0.4),
        ])
        .unwrap()
        .with_injective(true);
        let fam = MembershipFamily::finite(vec![f0]).unwrap();
        let cfg = SearchConfig::default();
        let finding = quasi_fixed_search(&op, &y, &fam, 2, 1e-9, &cfg).unwrap().unwrap();
        let cert = certify_fixed_point(&op, &y, 2, &finding, &fam, DEFAULT_FIXED_POINT_TOL).unwrap();
        assert_eq!(cert.candidate, Point::xy(3.0, 0.0).unwrap());
        assert_eq!(cert.operator_residual, 0.0);
        assert!(cert.certified, "{:?}", cert.reasons);
    }

    #[test]
    fn rotation_with_radial_member_is_not_certified() {
        let y = Point::xy(1.0, 0.0).unwrap();
        let op = Operator::rotation(std::f64::consts::FRAC_PI_2).unwrap();
        let fam = MembershipFamily::finite(vec![MembershipFunction::radial(1.0).unwrap()]).unwrap();
        let finding = quasi_fixed_search(&op, &y, &fam, 1, 1e-9, &SearchConfig::default())
            .unwrap()
            .unwrap();
        let cert = certify_fixed_point(&op, &y, 1, &finding, &fam, DEFAULT_FIXED_POINT_TOL).unwrap();
        assert!(cert.ratio_residual <= 1e-15);
        assert!(!cert.injective_declared);
        assert!(!cert.certified);
        assert!((cert.operator_residual - 1.0).abs() < 1e-12);
    }

    #[test]
    fn false_injectivity_is_caught() {
        let y = Point::xy(1.0, 0.0).unwrap();
        let op = Operator::rotation(std::f64::consts::FRAC_PI_2).unwrap();
        let liar = MembershipFunction::radial(1.0).unwrap().with_injective(true);
        let fam = MembershipFamily::finite(vec![liar]).unwrap();
        let finding = quasi_fixed_search(&op, &y, &fam, 1, 1e-9, &SearchConfig::default())
            .unwrap()
            .unwrap();
        let cert = certify_fixed_point(&op, &y, 1, &finding, &fam, DEFAULT_FIXED_POINT_TOL).unwrap();
        assert!(cert.injective_declared);
        assert!(!cert.certified);
    }

    #[test]
    fn identity_is_certified() {
        let y = Point::xy(0.3, 0.7).unwrap();
        let f0 = MembershipFunction::table_from_values(vec![(y.clone(), 0.6)]).unwrap().with_injective(true);
        let fam = MembershipFamily::finite(vec![f0]).unwrap();
        let finding = quasi_fixed_search(&Operator::identity(), &y, &fam, 1, 1e-9, &SearchConfig::default())
            .unwrap()
            .unwrap();
        let cert =
            certify_fixed_point(&Operator::identity(), &y, 1, &finding, &fam, DEFAULT_FIXED_POINT_TOL).unwrap();
        assert!(cert.certified);
        assert_eq!(cert.operator_residual, 0.0);
        assert_eq!(cert.ratio_residual, 0.0);
    }
}
