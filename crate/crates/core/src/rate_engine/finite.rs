use super::ratio::{sample_function, Ratio};
use super::{DivergenceCertificate, FuzzyRate, Probe};
use crate::membership::{MemberId, MembershipFunction};
use crate::operators::Operator;
use crate::{FuzzyError, Point, Result};

/// Exact supremum over a finite list; ties go to the lowest index.
pub fn rate_finite(members: &[MembershipFunction], op: &Operator, y: &Point) -> Result<FuzzyRate> {
    if members.is_empty() {
        return Err(FuzzyError::EmptyFamily);
    }
    let image = op.apply(y)?;
    let mut best: Option<(usize, f64)> = None;
    for (i, f) in members.iter().enumerate() {
        let s = sample_function(MemberId::Index(i), f, y, &image)?;
        match s.ratio {
            Ratio::Infinite => {
                return Ok(FuzzyRate::PlusInfinity(DivergenceCertificate::single(
                    Probe::from_sample(&s),
                )))
            }
            Ratio::Excluded => {}
            Ratio::Value(v) => {
                if best.is_none_or(|(_, b)| v > b) {
                    best = Some((i, v));
                }
            }
        }
    }
    Ok(match best {
        Some((i, value)) => FuzzyRate::Finite {
            value,
            witness: MemberId::Index(i),
            attained: true,
        },
        None => FuzzyRate::undefined("all ratios excluded"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rate_engine::ratio;

    fn pq() -> (Point, Point) {
        (Point::xy(1.0, 2.0).unwrap(), Point::xy(-1.0, 0.5).unwrap())
    }

    fn swap(p: &Point, q: &Point) -> Operator {
        let (p, q) = (p.clone(), q.clone());
        Operator::general("p->q", Some(2), move |x| {
            if x == &p {
                q.coords().to_vec()
            } else {
                x.coords().to_vec()
            }
        })
    }

    #[test]
    fn two_member_example() {
        let (p, q) = pq();
        let f1 = MembershipFunction::table_from_values(vec![(p.clone(), 0.5), (q.clone(), 0.25)])
            .unwrap();
        let f2 = MembershipFunction::table_from_values(vec![(p.clone(), 0.2), (q.clone(), 0.8)])
            .unwrap();
        let b = swap(&p, &q);
        // Brute force: 0.25 / 0.5 and 0.8 / 0.2.
        let brute = [0.25 / 0.5, 0.8 / 0.2];
        assert_eq!(brute, [0.5, 4.0]);
        let members = vec![f1, f2];
        let rate = rate_finite(&members, &b, &p).unwrap();
        assert_eq!(
            rate,
            FuzzyRate::Finite {
                value: 4.0,
                witness: MemberId::Index(1),
                attained: true
            }
        );
        // Enumeration soundness: the max of individual samples, exactly.
        let max = members
            .iter()
            .map(|f| ratio(f, &b, &p).unwrap().ratio.value().unwrap())
            .fold(f64::MIN, f64::max);
        assert_eq!(rate.finite_value(), Some(max));
    }

    #[test]
    fn identity_gives_one_and_ties_pick_lowest_index() {
        let (p, _) = pq();
        let members = vec![
            MembershipFunction::constant(0.3).unwrap(),
            MembershipFunction::constant(0.9).unwrap(),
        ];
        let rate = rate_finite(&members, &Operator::identity(), &p).unwrap();
        assert_eq!(rate.finite_value(), Some(1.0));
        assert_eq!(rate.witness(), Some(MemberId::Index(0)));
    }

    #[test]
    fn excluded_and_infinite_cases() {
        let (p, q) = pq();
        let b = swap(&p, &q);
        let zero = MembershipFunction::table_from_values(vec![(p.clone(), 0.0), (q.clone(), 0.0)])
            .unwrap();
        assert!(rate_finite(std::slice::from_ref(&zero), &b, &p).unwrap().is_undefined());

        let pos = MembershipFunction::table_from_values(vec![(q.clone(), 0.3)]).unwrap();
        let r = rate_finite(&[zero, pos], &b, &p).unwrap();
        match r {
            FuzzyRate::PlusInfinity(cert) => {
                assert_eq!(cert.probes.len(), 1);
                assert_eq!(cert.probes[0].witness, MemberId::Index(1));
            }
            other => panic!("expected +inf, got {other:?}"),
        }
        assert_eq!(rate_finite(&[], &b, &p), Err(FuzzyError::EmptyFamily));
    }
}
