use super::FuzzyRate;
use crate::membership::{MemberId, MembershipFamily, MembershipFunction};
use crate::operators::Operator;
use crate::{FuzzyError, Point, Result};

/// Members `F` and `G` with `G(B(y)) ≈ ‖B‖_y · F(y)`.
#[derive(Debug, Clone)]
pub struct WitnessPair {
    pub f_id: MemberId,
    pub g_id: MemberId,
    pub f: MembershipFunction,
    pub g: MembershipFunction,
    /// `|‖B‖_y · F(y) - G(B(y))|`.
    pub residual: f64,
}

/// Recovers a witness pair from a finite rate, taking `F = G` to be the
/// rate's witness member. Fails when the residual exceeds `tol · value`.
pub fn attained_witness(
    fam: &MembershipFamily,
    op: &Operator,
    y: &Point,
    rate: &FuzzyRate,
    tol: f64,
) -> Result<WitnessPair> {
    let FuzzyRate::Finite { value, witness, .. } = rate else {
        return Err(FuzzyError::RateNotFinite);
    };
    let f = fam.member(*witness)?;
    let image = op.apply(y)?;
    let residual = (value * f.evaluate(y)?.get() - f.evaluate(&image)?.get()).abs();
    let tolerance = tol * value;
    if !(residual <= tolerance) {
        return Err(FuzzyError::ResidualTooLarge {
            residual,
            tolerance,
        });
    }
    Ok(WitnessPair {
        f_id: *witness,
        g_id: *witness,
        g: f.clone(),
        f,
        residual,
    })
}
