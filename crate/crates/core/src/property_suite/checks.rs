use super::instance::relevant_points;
use super::{Evaluation, Instance, Property, HYPOTHESIS_TOL, REL_TOL};
use crate::dynamics::{orbit, BoundStatus};
use crate::extended::ExtendedReal;
use crate::membership::MembershipFamily;
use crate::operators::{compose, scale, Operator};
use crate::rate_engine::{attained_witness, rate_finite, FuzzyRate, SearchConfig};
use crate::{Point, Result};

fn members(fam: &MembershipFamily) -> &[crate::membership::MembershipFunction] {
    match fam {
        MembershipFamily::Finite(m) => m,
        MembershipFamily::Parametric(_) => &[],
    }
}

/// `values[i][j]` is member `i` at point `j`.
fn value_table(fam: &MembershipFamily, pts: &[Point]) -> Result<Vec<Vec<f64>>> {
    members(fam)
        .iter()
        .map(|f| pts.iter().map(|p| Ok(f.evaluate(p)?.get())).collect())
        .collect()
}

fn ext(r: &FuzzyRate) -> Option<ExtendedReal> {
    r.extended()
}

fn leq(lhs: Option<ExtendedReal>, rhs: Option<ExtendedReal>) -> bool {
    match (lhs, rhs) {
        (_, Some(ExtendedReal::Infinite)) => lhs.is_some(),
        (Some(ExtendedReal::Infinite), _) => false,
        (Some(ExtendedReal::Finite(l)), Some(ExtendedReal::Finite(r))) => l <= r + REL_TOL * r.abs(),
        _ => false,
    }
}

fn finite_rate(fam: &MembershipFamily, op: &Operator, y: &Point) -> Result<FuzzyRate> {
    rate_finite(members(fam), op, y)
}

fn inequality(hypothesis_holds: bool, lhs: Option<ExtendedReal>, rhs: Option<ExtendedReal>) -> Evaluation {
    Evaluation {
        hypothesis_holds,
        lhs,
        rhs,
        holds: leq(lhs, rhs),
    }
}

fn fin_mul(a: Option<ExtendedReal>, b: Option<ExtendedReal>) -> Option<ExtendedReal> {
    Some(a?.mul(b?))
}

fn fin_add(a: Option<ExtendedReal>, b: Option<ExtendedReal>) -> Option<ExtendedReal> {
    match (a?, b?) {
        (ExtendedReal::Finite(x), ExtendedReal::Finite(y)) => Some(ExtendedReal::Finite(x + y)),
        _ => Some(ExtendedReal::Infinite),
    }
}

/// Evaluates one instance: whether its hypothesis holds, the two sides of
/// the conclusion, and whether the conclusion holds.
pub fn evaluate(property: Property, inst: &Instance) -> Result<Evaluation> {
    let y = inst.point()?;
    let fam = inst.family()?;
    let pts = relevant_points(property, inst)?;
    let vals = value_table(&fam, &pts)?;
    let all_positive = vals.iter().all(|row| row.iter().all(|v| *v > 0.0));
    let some_positive_at_y = vals.iter().any(|row| row[0] > 0.0);

    Ok(match property {
        Property::Positivity => {
            let op = inst.operator(0)?;
            let bump = vals.iter().any(|row| row[1] == 0.5);
            let r = ext(&finite_rate(&fam, &op, &y)?);
            Evaluation {
                hypothesis_holds: bump && some_positive_at_y,
                lhs: r,
                rhs: Some(ExtendedReal::Finite(0.0)),
                holds: match r {
                    Some(ExtendedReal::Finite(v)) => v > 0.0,
                    Some(ExtendedReal::Infinite) => true,
                    None => false,
                },
            }
        }
        Property::Identity => {
            let r = ext(&finite_rate(&fam, &Operator::identity(), &y)?);
            Evaluation {
                hypothesis_holds: some_positive_at_y,
                lhs: r,
                rhs: Some(ExtendedReal::Finite(1.0)),
                holds: r == Some(ExtendedReal::Finite(1.0)),
            }
        }
        Property::Scaling => {
            let (b1, a) = (inst.operator(0)?, inst.scalar()?);
            let lhs = ext(&finite_rate(&fam, &scale(&b1, a)?, &y)?);
            let at_ay = ext(&finite_rate(&fam, &b1, &pts[1])?);
            let a_id = ext(&finite_rate(&fam, &scale(&Operator::identity(), a)?, &y)?);
            inequality(all_positive && a > 0.0, lhs, fin_mul(at_ay, a_id))
        }
        Property::Dominance => {
            let dominated = vals.iter().all(|row| row[1] >= row[2]);
            let r1 = ext(&finite_rate(&fam, &inst.operator(0)?, &y)?);
            let r2 = ext(&finite_rate(&fam, &inst.operator(1)?, &y)?);
            inequality(dominated && all_positive, r2, r1)
        }
        Property::Subadditivity => {
            let additive = vals
                .iter()
                .all(|row| (row[3] - row[1] - row[2]).abs() <= HYPOTHESIS_TOL);
            let (op1, op2) = (inst.operator(0)?, inst.operator(1)?);
            let lhs = ext(&finite_rate(&fam, &Operator::sum(op1.clone(), op2.clone())?, &y)?);
            let r1 = ext(&finite_rate(&fam, &op1, &y)?);
            let r2 = ext(&finite_rate(&fam, &op2, &y)?);
            inequality(additive && all_positive, lhs, fin_add(r1, r2))
        }
        Property::ReverseTriangle => {
            let subtractive = vals.iter().all(|row| {
                row[1] - row[2] >= 0.0 && (row[3] - (row[1] - row[2])).abs() <= HYPOTHESIS_TOL
            });
            let (op1, op2) = (inst.operator(0)?, inst.operator(1)?);
            let r1 = finite_rate(&fam, &op1, &y)?.finite_value();
            let r2 = finite_rate(&fam, &op2, &y)?.finite_value();
            let rd = finite_rate(&fam, &Operator::difference(op1, op2)?, &y)?.finite_value();
            match (r1, r2, rd) {
                (Some(r1), Some(r2), Some(rd)) => {
                    let gap = r1 - r2;
                    let slack = REL_TOL * r1.abs();
                    Evaluation {
                        hypothesis_holds: subtractive && all_positive,
                        lhs: Some(ExtendedReal::Finite(gap)),
                        rhs: Some(ExtendedReal::Finite(rd)),
                        holds: gap >= -slack && gap <= rd + slack,
                    }
                }
                _ => Evaluation {
                    hypothesis_holds: false,
                    lhs: None,
                    rhs: None,
                    holds: false,
                },
            }
        }
        Property::Submultiplicativity => {
            let (op1, op2) = (inst.operator(0)?, inst.operator(1)?);
            let lhs = ext(&finite_rate(&fam, &compose(&op1, &op2)?, &y)?);
            let outer = ext(&finite_rate(&fam, &op1, &pts[1])?);
            let inner = ext(&finite_rate(&fam, &op2, &y)?);
            inequality(all_positive, lhs, fin_mul(outer, inner))
        }
        Property::FamilyMonotone => {
            let op = inst.operator(0)?;
            let sub = inst.subfamily()?;
            let lhs = ext(&finite_rate(&sub, &op, &y)?);
            let rhs = ext(&finite_rate(&fam, &op, &y)?);
            inequality(all_positive && !inst.subset.is_empty(), lhs, rhs)
        }
        Property::Attainment => {
            let op = inst.operator(0)?;
            let r = finite_rate(&fam, &op, &y)?;
            let tolerance = r.finite_value().map(|v| HYPOTHESIS_TOL * v);
            let witness = attained_witness(&fam, &op, &y, &r, HYPOTHESIS_TOL);
            Evaluation {
                hypothesis_holds: all_positive,
                lhs: match &witness {
                    Ok(w) => Some(ExtendedReal::Finite(w.residual)),
                    Err(crate::FuzzyError::ResidualTooLarge { residual, .. }) => {
                        Some(ExtendedReal::Finite(*residual))
                    }
                    Err(_) => None,
                },
                rhs: tolerance.map(ExtendedReal::Finite),
                holds: witness.is_ok() && matches!(r, FuzzyRate::Finite { attained: true, .. }),
            }
        }
        Property::ProductBound => {
            let op = inst.operator(0)?;
            let report = orbit(&op, &y, inst.steps, &fam, &SearchConfig::default())?;
            // Report the step closest to violating the bound.
            let worst = (0..report.steps())
                .max_by(|&i, &j| {
                    let ratio = |k: usize| {
                        let n = report.n_step_rates[k].extended().map_or(f64::NAN, |e| e.to_f64());
                        let p = report.product_bounds[k].map_or(f64::NAN, |e| e.to_f64());
                        n / p
                    };
                    ratio(i).total_cmp(&ratio(j))
                })
                .unwrap_or(0);
            Evaluation {
                hypothesis_holds: all_positive,
                lhs: report.n_step_rates[worst].extended(),
                rhs: report.product_bounds[worst],
                holds: report.bound_satisfied.iter().all(|b| *b == BoundStatus::Ok),
            }
        }
    })
}
