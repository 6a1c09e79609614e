//! Exact rates for the conic family.
//!
//! With `λ_y = a` and `λ_{By} = c` fixed by the points, the log-ratio of the
//! member `c(μ, r)` is `(a - c)(a + c - 2μ)`, linear in `μ`, so the supremum
//! sits at an end of the parameter domain unless `a = c`.

use super::search::PairEvaluator;
use super::{DivergenceCertificate, FuzzyRate, Probe};
use crate::membership::{
    conic_lambda, ConicLambda, ConicMembership, MemberId, MembershipFamily, ParamDomain,
};
use crate::operators::Operator;
use crate::{FuzzyError, Point, Result};

/// Parameter reported as the witness of the non-attained supremum at
/// `μ → 0⁺` in [`rate_conic_closed_form`].
pub const CLOSED_FORM_EDGE_OFFSET: f64 = 1e-9;

const DIVERGENCE_PROBES: [f64; 3] = [1.0, 10.0, 100.0];

/// Rate of `diag(1, b)` at `(0, r)` over the conic family with radius `r`.
///
/// For `|b| ≥ 1` the value is `e^{1 - 1/b⁴}`, approached as `μ → 0⁺`. For
/// `|b| < 1` the ratio grows without bound in `μ`.
pub fn rate_conic_closed_form(b: f64, r: f64) -> Result<FuzzyRate> {
    if b == 0.0 || !b.is_finite() {
        return Err(FuzzyError::InvalidParameter {
            name: "b",
            value: b,
            reason: "must be finite and nonzero",
        });
    }
    if !(r > 0.0) || !r.is_finite() {
        return Err(FuzzyError::InvalidParameter {
            name: "r",
            value: r,
            reason: "must be finite and positive",
        });
    }
    if b.abs() < 1.0 {
        let y = Point::xy(0.0, r)?;
        let by = Point::xy(0.0, b * r)?;
        let probes = DIVERGENCE_PROBES
            .iter()
            .map(|&mu| {
                let f = ConicMembership::new(mu, r)?;
                let ln = f.ln_value(&by)? - f.ln_value(&y)?;
                Ok(Probe {
                    witness: MemberId::Param(mu),
                    ratio: ln.exp(),
                    ln_ratio: ln,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        return Ok(FuzzyRate::PlusInfinity(DivergenceCertificate::from_probes(probes)));
    }
    let b4 = b.powi(4);
    Ok(FuzzyRate::Finite {
        value: (1.0 - 1.0 / b4).exp(),
        witness: MemberId::Param(CLOSED_FORM_EDGE_OFFSET),
        attained: b.abs() == 1.0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum End {
    Low,
    High,
}

fn end_value(d: &ParamDomain, end: End) -> f64 {
    match end {
        End::Low => d.low,
        End::High => d.high,
    }
}

fn end_closed(d: &ParamDomain, end: End) -> bool {
    match end {
        End::Low => !d.open_low,
        End::High => !d.open_high,
    }
}

/// A member at (or just inside) an end of the domain.
fn end_witness(d: &ParamDomain, end: End) -> f64 {
    let e = end_value(d, end);
    if end_closed(d, end) {
        return e;
    }
    let inset = CLOSED_FORM_EDGE_OFFSET * e.abs().max(1.0);
    match end {
        End::Low => e + inset,
        End::High => e - inset,
    }
}

fn representative(d: &ParamDomain) -> f64 {
    if d.contains(1.0) {
        1.0
    } else if d.low.is_finite() {
        end_witness(d, End::Low)
    } else {
        end_witness(d, End::High)
    }
}

/// Supremum approached at `end`, whose limiting log-ratio is `ln`.
fn at_end(d: &ParamDomain, end: End, ln: f64) -> FuzzyRate {
    FuzzyRate::Finite {
        value: ln.exp(),
        witness: MemberId::Param(end_witness(d, end)),
        attained: end_closed(d, end),
    }
}

fn divergent(eval: &PairEvaluator<'_>, base: f64) -> Result<FuzzyRate> {
    let probes = DIVERGENCE_PROBES
        .iter()
        .map(|k| eval.sample(base * k).map(|s| Probe::from_sample(&s)))
        .collect::<Result<Vec<_>>>()?;
    Ok(FuzzyRate::PlusInfinity(DivergenceCertificate::from_probes(probes)))
}

/// Exact rate over any conic family, for any operator.
pub fn rate_conic_analytic(fam: &MembershipFamily, op: &Operator, y: &Point) -> Result<FuzzyRate> {
    let (MembershipFamily::Parametric(family), Some(r)) = (fam, fam.conic_radius()) else {
        return Err(FuzzyError::MethodNotApplicable {
            method: "closed",
            reason: "only the conic family has a closed form",
        });
    };
    let image = op.apply(y)?;
    let d = family.domain;
    let from = conic_lambda(y, r)?;
    let to = conic_lambda(&image, r)?;
    let eval = PairEvaluator::new(family, y.clone(), image)?;
    let exact = |t: f64| FuzzyRate::Finite {
        value: 1.0,
        witness: MemberId::Param(t),
        attained: true,
    };
    let zero = || FuzzyRate::Finite {
        value: 0.0,
        witness: MemberId::Param(representative(&d)),
        attained: true,
    };
    let base = |a: f64| 1f64.max(2.0 * d.low.abs()).max(2.0 * a);

    Ok(match (from, to) {
        (ConicLambda::None, ConicLambda::None) => FuzzyRate::undefined("all ratios excluded"),
        (ConicLambda::None, to) => {
            let t = match to {
                ConicLambda::Value(c) if d.contains(c) => c,
                _ => representative(&d),
            };
            FuzzyRate::PlusInfinity(DivergenceCertificate::single(Probe::from_sample(
                &eval.sample(t)?,
            )))
        }
        (_, ConicLambda::None) => zero(),
        (ConicLambda::Any, ConicLambda::Any) => exact(representative(&d)),
        (ConicLambda::Any, ConicLambda::Value(c)) => {
            if d.contains(c) {
                exact(c)
            } else {
                let end = if c <= d.low { End::Low } else { End::High };
                let e = end_value(&d, end);
                at_end(&d, end, -(c - e) * (c - e))
            }
        }
        (ConicLambda::Value(a), ConicLambda::Any) => {
            if d.high.is_infinite() {
                divergent(&eval, base(a))?
            } else {
                let (lo, hi) = ((a - d.low).powi(2), (a - d.high).powi(2));
                if lo >= hi {
                    at_end(&d, End::Low, lo)
                } else {
                    at_end(&d, End::High, hi)
                }
            }
        }
        (ConicLambda::Value(a), ConicLambda::Value(c)) => {
            let ln_at = |e: f64| (a - c) * (a + c - 2.0 * e);
            if a == c {
                exact(representative(&d))
            } else if a > c {
                at_end(&d, End::Low, ln_at(d.low))
            } else if d.high.is_infinite() {
                divergent(&eval, base(a))?
            } else {
                at_end(&d, End::High, ln_at(d.high))
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn constant_op(x: f64, y: f64) -> Operator {
        Operator::affine(nalgebra::DMatrix::zeros(2, 2), vec![x, y]).unwrap()
    }

    fn oracle_ln(b: f64, mu: f64) -> f64 {
        // Direct evaluation of e^{-(λ-μ)²} at (0, b) and (0, 1).
        let lam_by = 1.0 / (b * b);
        let lam_y = 1.0;
        -(lam_by - mu).powi(2) + (lam_y - mu).powi(2)
    }

    #[test]
    fn closed_form_values() {
        for b in [1.0, 1.5, 2.0, -2.0, 10.0] {
            let rate = rate_conic_closed_form(b, 1.0).unwrap();
            let expect = oracle_ln(b, 0.0).exp();
            assert_relative_eq!(rate.finite_value().unwrap(), expect, max_relative = 1e-15);
        }
        assert_relative_eq!(
            rate_conic_closed_form(2.0, 1.0).unwrap().finite_value().unwrap(),
            2.5535894580629255,
            max_relative = 1e-12
        );
    }

    #[test]
    fn closed_form_divergence() {
        let fam = MembershipFamily::conic(1.0).unwrap();
        let y = Point::xy(0.0, 1.0).unwrap();
        for b in [0.5, -0.9, 0.1] {
            let FuzzyRate::PlusInfinity(cert) = rate_conic_closed_form(b, 1.0).unwrap() else {
                panic!();
            };
            assert_eq!(cert.probes.len(), 3);
            let op = Operator::diag(&[1.0, b]).unwrap();
            assert!(cert.verify(&fam, &op, &y).unwrap());
        }
    }

    #[test]
    fn closed_form_rejects_bad_input() {
        assert!(rate_conic_closed_form(0.0, 1.0).is_err());
        assert!(rate_conic_closed_form(2.0, 0.0).is_err());
        assert!(rate_conic_closed_form(2.0, -1.0).is_err());
    }

    #[test]
    fn analytic_agrees_with_closed_form() {
        let fam = MembershipFamily::conic(1.0).unwrap();
        let y = Point::xy(0.0, 1.0).unwrap();
        for b in [1.0, 1.25, 2.0, 3.0] {
            let op = Operator::diag(&[1.0, b]).unwrap();
            let a = rate_conic_analytic(&fam, &op, &y).unwrap().finite_value().unwrap();
            let c = rate_conic_closed_form(b, 1.0).unwrap().finite_value().unwrap();
            assert_relative_eq!(a, c, max_relative = 1e-13);
        }
        let op = Operator::diag(&[1.0, 0.5]).unwrap();
        let rate = rate_conic_analytic(&fam, &op, &y).unwrap();
        let FuzzyRate::PlusInfinity(cert) = rate else { panic!() };
        assert!(cert.verify(&fam, &op, &y).unwrap());
    }

    #[test]
    fn analytic_on_bounded_domains() {
        let d = ParamDomain::closed(0.5, 2.0).unwrap();
        let fam = MembershipFamily::conic_on(1.0, d).unwrap();
        let y = Point::xy(0.0, 1.0).unwrap();
        let grow = Operator::diag(&[1.0, 2.0]).unwrap();
        let rate = rate_conic_analytic(&fam, &grow, &y).unwrap();
        assert_eq!(rate.witness(), Some(MemberId::Param(0.5)));
        assert_relative_eq!(rate.finite_value().unwrap(), oracle_ln(2.0, 0.5).exp(), max_relative = 1e-13);
        assert!(matches!(rate, FuzzyRate::Finite { attained: true, .. }));

        let shrink = Operator::diag(&[1.0, 0.5]).unwrap();
        let rate = rate_conic_analytic(&fam, &shrink, &y).unwrap();
        assert_eq!(rate.witness(), Some(MemberId::Param(2.0)));
        assert_relative_eq!(rate.finite_value().unwrap(), oracle_ln(0.5, 2.0).exp(), max_relative = 1e-13);
    }

    #[test]
    fn analytic_degenerate_points() {
        let fam = MembershipFamily::conic(1.0).unwrap();
        let y_any = Point::xy(1.0, 0.0).unwrap();
        let y_none = Point::xy(2.0, 0.0).unwrap();
        let y = Point::xy(0.0, 1.0).unwrap();
        let id = Operator::identity();
        // ANY to ANY: every member is 1 at both points.
        assert_eq!(rate_conic_analytic(&fam, &id, &y_any).unwrap().finite_value(), Some(1.0));
        // NONE to NONE: every ratio is 0/0.
        assert!(rate_conic_analytic(&fam, &id, &y_none).unwrap().is_undefined());
        // NONE to a defined point: c/0.
        let to_y = constant_op(0.0, 1.0);
        assert!(rate_conic_analytic(&fam, &to_y, &y_none).unwrap().is_infinite());
        // Defined to NONE: every ratio is 0.
        let to_none = constant_op(2.0, 0.0);
        let rate = rate_conic_analytic(&fam, &to_none, &y).unwrap();
        assert_eq!(rate.finite_value(), Some(0.0));
        // Defined to ANY on an unbounded domain diverges.
        let to_any = constant_op(1.0, 0.0);
        let rate = rate_conic_analytic(&fam, &to_any, &y).unwrap();
        let FuzzyRate::PlusInfinity(cert) = rate else { panic!() };
        assert!(cert.verify(&fam, &to_any, &y).unwrap());
        // ANY to a defined point: the member with μ = λ attains 1.
        let rate = rate_conic_analytic(&fam, &to_y, &y_any).unwrap();
        assert_eq!(rate.finite_value(), Some(1.0));
        assert_eq!(rate.witness(), Some(MemberId::Param(1.0)));
    }

    #[test]
    fn analytic_rejects_other_families() {
        let fam = MembershipFamily::parametric(ParamDomain::positive(), |_| {
            crate::membership::MembershipFunction::constant(0.5).unwrap()
        });
        let y = Point::xy(0.0, 1.0).unwrap();
        assert!(rate_conic_analytic(&fam, &Operator::identity(), &y).is_err());
    }
}
