use serde::{Deserialize, Serialize};

use crate::extended::ext_f64;
use crate::membership::{MemberId, MembershipFamily, MembershipFunction, MembershipValue};
use crate::operators::Operator;
use crate::{Point, Result};

/// `F(B(y)) / F(y)` under the zero-denominator convention.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ratio {
    Value(f64),
    /// Zero denominator, positive numerator.
    Infinite,
    /// `0/0`; contributes nothing to the supremum.
    Excluded,
}

impl Ratio {
    pub fn value(self) -> Option<f64> {
        match self {
            Ratio::Value(v) => Some(v),
            _ => None,
        }
    }

    pub(crate) fn to_f64(self) -> f64 {
        match self {
            Ratio::Value(v) => v,
            Ratio::Infinite => f64::INFINITY,
            Ratio::Excluded => f64::NAN,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioSample {
    pub member: MemberId,
    /// `F(B(y))`.
    pub numerator: MembershipValue,
    /// `F(y)`.
    pub denominator: MembershipValue,
    #[serde(with = "ext_f64")]
    pub ln_numerator: f64,
    #[serde(with = "ext_f64")]
    pub ln_denominator: f64,
    pub ratio: Ratio,
}

impl RatioSample {
    /// Assembles a sample from values and their logs. Logs carry the
    /// magnitude when a value underflows to zero.
    pub(crate) fn from_parts(
        member: MemberId,
        numerator: MembershipValue,
        denominator: MembershipValue,
        ln_numerator: f64,
        ln_denominator: f64,
    ) -> Self {
        let ratio = if ln_denominator == f64::NEG_INFINITY {
            if ln_numerator == f64::NEG_INFINITY {
                Ratio::Excluded
            } else {
                Ratio::Infinite
            }
        } else if denominator.get() > 0.0
            && (numerator.get() > 0.0 || ln_numerator == f64::NEG_INFINITY)
        {
            Ratio::Value(numerator.get() / denominator.get())
        } else {
            Ratio::Value((ln_numerator - ln_denominator).exp())
        };
        RatioSample {
            member,
            numerator,
            denominator,
            ln_numerator,
            ln_denominator,
            ratio,
        }
    }

    /// `ln` of the ratio: `+∞` for infinite ratios, `None` when excluded.
    pub fn ln_ratio(&self) -> Option<f64> {
        match self.ratio {
            Ratio::Value(_) => Some(self.ln_numerator - self.ln_denominator),
            Ratio::Infinite => Some(f64::INFINITY),
            Ratio::Excluded => None,
        }
    }
}

pub(crate) fn sample_function(
    member: MemberId,
    f: &MembershipFunction,
    y: &Point,
    image: &Point,
) -> Result<RatioSample> {
    let num = f.evaluate(image)?;
    let den = f.evaluate(y)?;
    Ok(RatioSample::from_parts(
        member,
        num,
        den,
        f.ln_value(image)?,
        f.ln_value(y)?,
    ))
}

pub(crate) fn sample_member(
    fam: &MembershipFamily,
    member: MemberId,
    y: &Point,
    image: &Point,
) -> Result<RatioSample> {
    sample_function(member, &fam.member(member)?, y, image)
}

/// The ratio `f(op(y)) / f(y)` for one membership function.
pub fn ratio(f: &MembershipFunction, op: &Operator, y: &Point) -> Result<RatioSample> {
    let image = op.apply(y)?;
    sample_function(MemberId::Index(0), f, y, &image)
}
