use rand::Rng;
use serde::{Deserialize, Serialize};

use super::Property;
use crate::membership::{MembershipFamily, MembershipFunction};
use crate::operators::{compose, scale, Operator};
use crate::{FuzzyError, Point, Result};

const MAX_MEMBERS: usize = 6;
const DIM: usize = 2;
const MAX_ORBIT_STEPS: usize = 8;

/// One tabulated membership value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Entry {
    pub point: Vec<f64>,
    pub value: f64,
}

/// A generated test case. Operators are square matrices given by rows;
/// members are tables that vanish off their listed points.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub y: Vec<f64>,
    pub operators: Vec<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scalar: Option<f64>,
    pub family: Vec<Vec<Entry>>,
    /// Member indices of the sub-family, when the property needs one.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub subset: Vec<usize>,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub steps: usize,
}

fn is_zero(n: &usize) -> bool {
    *n == 0
}

impl Instance {
    pub fn point(&self) -> Result<Point> {
        Point::new(self.y.clone())
    }

    pub fn operator(&self, i: usize) -> Result<Operator> {
        let rows = self
            .operators
            .get(i)
            .ok_or_else(|| FuzzyError::parse("operators", format!("missing operator {i}")))?;
        Operator::from_rows(rows)
    }

    pub fn scalar(&self) -> Result<f64> {
        self.scalar
            .ok_or_else(|| FuzzyError::parse("scalar", "missing scale factor"))
    }

    fn members(&self, indices: impl Iterator<Item = usize>) -> Result<MembershipFamily> {
        let members = indices
            .map(|i| {
                let entries = self
                    .family
                    .get(i)
                    .ok_or_else(|| FuzzyError::parse("subset", format!("no member {i}")))?
                    .iter()
                    .map(|e| Ok((Point::new(e.point.clone())?, e.value)))
                    .collect::<Result<Vec<_>>>()?;
                MembershipFunction::table_from_values(entries)
            })
            .collect::<Result<Vec<_>>>()?;
        MembershipFamily::finite(members)
    }

    pub fn family(&self) -> Result<MembershipFamily> {
        self.members(0..self.family.len())
    }

    pub fn subfamily(&self) -> Result<MembershipFamily> {
        self.members(self.subset.iter().copied())
    }
}

/// Points at which a property's memberships are prescribed, in the order
/// the generator assigns values to them.
pub(super) fn relevant_points(property: Property, inst: &Instance) -> Result<Vec<Point>> {
    let y = inst.point()?;
    Ok(match property {
        Property::Identity => vec![y],
        Property::Positivity | Property::FamilyMonotone | Property::Attainment => {
            let by = inst.operator(0)?.apply(&y)?;
            vec![y, by]
        }
        Property::Scaling => {
            let ay = scale(&Operator::identity(), inst.scalar()?)?.apply(&y)?;
            let b1ay = inst.operator(0)?.apply(&ay)?;
            vec![y, ay, b1ay]
        }
        Property::Dominance => {
            let b1 = inst.operator(0)?.apply(&y)?;
            let b2 = inst.operator(1)?.apply(&y)?;
            vec![y, b1, b2]
        }
        Property::Subadditivity | Property::ReverseTriangle => {
            let (op1, op2) = (inst.operator(0)?, inst.operator(1)?);
            let b1 = op1.apply(&y)?;
            let b2 = op2.apply(&y)?;
            let combined = if property == Property::Subadditivity {
                Operator::sum(op1, op2)?
            } else {
                Operator::difference(op1, op2)?
            };
            let c = combined.apply(&y)?;
            vec![y, b1, b2, c]
        }
        Property::Submultiplicativity => {
            let (op1, op2) = (inst.operator(0)?, inst.operator(1)?);
            let b2y = op2.apply(&y)?;
            let b1b2y = compose(&op1, &op2)?.apply(&y)?;
            vec![y, b2y, b1b2y]
        }
        Property::ProductBound => {
            let op = inst.operator(0)?;
            let mut pts = vec![y];
            for k in 0..inst.steps {
                let next = op.apply(&pts[k])?;
                pts.push(next);
            }
            pts
        }
    })
}

fn value<R: Rng>(rng: &mut R) -> f64 {
    rng.random_range(0.05..=1.0)
}

fn matrix<R: Rng>(rng: &mut R, d: usize) -> Vec<Vec<f64>> {
    (0..d)
        .map(|_| (0..d).map(|_| rng.random_range(-2.0..=2.0)).collect())
        .collect()
}

fn table(points: &[Point], values: &[f64]) -> Vec<Entry> {
    points
        .iter()
        .zip(values)
        .map(|(p, v)| Entry {
            point: p.coords().to_vec(),
            value: *v,
        })
        .collect()
}

/// Draws an instance satisfying `property`'s hypothesis, as a pure function
/// of the generator state.
pub fn generate<R: Rng>(property: Property, rng: &mut R) -> Result<Instance> {
    let d = DIM;
    let y: Vec<f64> = (0..d).map(|_| rng.random_range(-3.0..=3.0)).collect();
    let n_ops = match property {
        Property::Identity => 0,
        Property::Dominance
        | Property::Subadditivity
        | Property::ReverseTriangle
        | Property::Submultiplicativity => 2,
        _ => 1,
    };
    let operators = (0..n_ops).map(|_| matrix(rng, d)).collect();
    let scalar = (property == Property::Scaling).then(|| 4.0 * (1.0 - rng.random::<f64>()));
    let steps = if property == Property::ProductBound {
        rng.random_range(1..=MAX_ORBIT_STEPS)
    } else {
        0
    };
    let mut inst = Instance {
        y,
        operators,
        scalar,
        family: Vec::new(),
        subset: Vec::new(),
        steps,
    };
    let pts = relevant_points(property, &inst)?;
    // Positivity adds two members below.
    let m = if property == Property::Positivity {
        MAX_MEMBERS - 2
    } else {
        rng.random_range(1..=MAX_MEMBERS)
    };

    for _ in 0..m {
        let values: Vec<f64> = match property {
            Property::Dominance => {
                let u = rng.random_range(0.05..=0.9);
                vec![value(rng), (u + 0.1f64).min(1.0), u]
            }
            Property::Subadditivity => {
                let (u1, u2) = (rng.random_range(0.05..=0.5), rng.random_range(0.05..=0.5));
                vec![value(rng), u1, u2, u1 + u2]
            }
            Property::ReverseTriangle => {
                let (u, w) = (rng.random_range(0.05..=0.5), rng.random_range(0.05..=0.5));
                vec![value(rng), u + w, u, w]
            }
            _ => pts.iter().map(|_| value(rng)).collect(),
        };
        inst.family.push(table(&pts, &values));
    }

    if property == Property::Positivity {
        // A bump at B(y) and a member positive at y.
        inst.family.push(table(&pts[1..2], &[0.5]));
        inst.family.push(table(&pts[..1], &[value(rng)]));
    }
    if property == Property::FamilyMonotone {
        inst.subset = (0..m).filter(|_| rng.random_bool(0.5)).collect();
        if inst.subset.is_empty() {
            inst.subset.push(rng.random_range(0..m));
        }
    }
    Ok(inst)
}
