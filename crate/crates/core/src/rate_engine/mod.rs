//! The fuzzy rate `‖B‖_y = sup_F F(B(y)) / F(y)`.
//!
//! Finite families are enumerated exactly. Parametric families are searched
//! numerically on a grid with local refinement and geometric window
//! expansion toward open or unbounded ends of the parameter domain; the
//! conic family additionally has an exact analytic route.
//!
//! Convention for zero denominators: `0/0` is excluded from the supremum and
//! `c/0` with `c > 0` makes the rate `+∞`.

mod closed_form;
mod finite;
mod ratio;
pub(crate) use ratio::sample_function;
pub(crate) mod search;
mod witness;

use serde::{Deserialize, Serialize};

use crate::extended::{ext_f64, ExtendedReal};
use crate::membership::{MemberId, MembershipFamily, ParamWindow, DEFAULT_WINDOW};
use crate::operators::Operator;
use crate::{FuzzyError, Point, Result};

pub use closed_form::{rate_conic_analytic, rate_conic_closed_form, CLOSED_FORM_EDGE_OFFSET};
pub use finite::rate_finite;
pub use ratio::{ratio, Ratio, RatioSample};
pub use search::rate_parametric;
pub use witness::{attained_witness, WitnessPair};

/// One evaluated member used as evidence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Probe {
    pub witness: MemberId,
    #[serde(with = "ext_f64")]
    pub ratio: f64,
    #[serde(with = "ext_f64")]
    pub ln_ratio: f64,
}

impl Probe {
    pub(crate) fn from_sample(s: &RatioSample) -> Probe {
        Probe {
            witness: s.member,
            ratio: s.ratio.to_f64(),
            ln_ratio: s.ln_ratio().unwrap_or(f64::NAN),
        }
    }
}

/// Finite evidence that a supremum is `+∞`: probes whose ratios grow by at
/// least `growth_factor` from one to the next, or a single probe with a zero
/// denominator and a positive numerator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DivergenceCertificate {
    #[serde(rename = "certificate")]
    pub probes: Vec<Probe>,
    #[serde(with = "ext_f64")]
    pub growth_factor: f64,
}

impl DivergenceCertificate {
    pub(crate) fn single(probe: Probe) -> Self {
        DivergenceCertificate {
            probes: vec![probe],
            growth_factor: f64::INFINITY,
        }
    }

    /// Builds a certificate from increasing probes, recording the smallest
    /// growth achieved between neighbours.
    pub(crate) fn from_probes(probes: Vec<Probe>) -> Self {
        let min_ln_growth = probes
            .windows(2)
            .map(|w| w[1].ln_ratio - w[0].ln_ratio)
            .fold(f64::INFINITY, f64::min);
        DivergenceCertificate {
            probes,
            growth_factor: min_ln_growth.exp(),
        }
    }

    /// Re-evaluates every probe against `fam`, `op` and `y` and checks the
    /// declared growth between consecutive probes.
    pub fn verify(&self, fam: &MembershipFamily, op: &Operator, y: &Point) -> Result<bool> {
        let image = op.apply(y)?;
        let mut reproduced = Vec::with_capacity(self.probes.len());
        for p in &self.probes {
            let s = ratio::sample_member(fam, p.witness, y, &image)?;
            let ln = s.ln_ratio().unwrap_or(f64::NAN);
            let same = if ln.is_infinite() || p.ln_ratio.is_infinite() {
                ln == p.ln_ratio
            } else {
                (ln - p.ln_ratio).abs() <= 1e-9 * p.ln_ratio.abs().max(1.0)
            };
            if !same {
                return Ok(false);
            }
            reproduced.push(ln);
        }
        if reproduced.len() == 1 {
            return Ok(reproduced[0] == f64::INFINITY);
        }
        // Growth beyond the f64 range is recorded as infinite.
        let need = if self.growth_factor.is_finite() {
            self.growth_factor.ln()
        } else {
            f64::MAX.ln()
        };
        Ok(self.growth_factor > 1.0
            && reproduced
                .windows(2)
                .all(|w| w[1] - w[0] >= need * (1.0 - 1e-9)))
    }
}

/// Outcome of a fuzzy-rate computation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome")]
pub enum FuzzyRate {
    /// `attained` is true when the witness's own ratio equals `value`.
    #[serde(rename = "finite")]
    Finite {
        value: f64,
        witness: MemberId,
        attained: bool,
    },
    #[serde(rename = "infinite")]
    PlusInfinity(DivergenceCertificate),
    #[serde(rename = "undefined")]
    Undefined {
        reason: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        best: Option<Probe>,
    },
}

impl FuzzyRate {
    pub(crate) fn undefined(reason: &str) -> Self {
        FuzzyRate::Undefined {
            reason: reason.to_string(),
            best: None,
        }
    }

    /// `None` for undefined outcomes.
    pub fn extended(&self) -> Option<ExtendedReal> {
        match self {
            FuzzyRate::Finite { value, .. } => Some(ExtendedReal::Finite(*value)),
            FuzzyRate::PlusInfinity(_) => Some(ExtendedReal::Infinite),
            FuzzyRate::Undefined { .. } => None,
        }
    }

    pub fn finite_value(&self) -> Option<f64> {
        match self {
            FuzzyRate::Finite { value, .. } => Some(*value),
            _ => None,
        }
    }

    pub fn witness(&self) -> Option<MemberId> {
        match self {
            FuzzyRate::Finite { witness, .. } => Some(*witness),
            _ => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, FuzzyRate::PlusInfinity(_))
    }

    pub fn is_undefined(&self) -> bool {
        matches!(self, FuzzyRate::Undefined { .. })
    }
}

/// Tuning for the numeric parametric search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Initial window, intersected with the family's domain.
    pub window: ParamWindow,
    pub resolution: usize,
    /// Refinement stops once the bracket is narrower than this.
    pub param_tol: f64,
    /// Minimum ratio growth per expansion that counts as divergence.
    pub growth_factor: f64,
    pub max_expansions: usize,
    /// How much closer to an open end (or how much wider toward an unbounded
    /// end) each expansion moves the window.
    pub expansion_factor: f64,
    /// Relative change below which an expansion counts as converged.
    pub value_rel_tol: f64,
    /// Number of best grid cells refined locally.
    pub top_cells: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            window: DEFAULT_WINDOW,
            resolution: 1024,
            param_tol: 1e-8,
            growth_factor: 10.0,
            max_expansions: 6,
            expansion_factor: 10.0,
            value_rel_tol: 1e-6,
            top_cells: 3,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(FuzzyError::InvalidConfig(msg.to_string()));
        ParamWindow::new(self.window.low, self.window.high)?;
        if self.resolution < 2 {
            return Err(FuzzyError::InvalidResolution(self.resolution));
        }
        if !(self.param_tol > 0.0) {
            return bad("param_tol must be positive");
        }
        if !(self.growth_factor > 1.0) {
            return bad("growth_factor must exceed 1");
        }
        if !(self.expansion_factor > 1.0) {
            return bad("expansion_factor must exceed 1");
        }
        if !(self.value_rel_tol > 0.0) {
            return bad("value_rel_tol must be positive");
        }
        if self.top_cells == 0 {
            return bad("top_cells must be at least 1");
        }
        Ok(())
    }
}

/// How to compute a rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RateMethod {
    /// Enumeration for finite families, the analytic route for the conic
    /// family, grid search otherwise.
    #[default]
    Auto,
    #[serde(rename = "enum")]
    Enumerate,
    Closed,
    Grid,
}

pub fn rate(
    fam: &MembershipFamily,
    op: &Operator,
    y: &Point,
    method: RateMethod,
    cfg: &SearchConfig,
) -> Result<FuzzyRate> {
    match (fam, method) {
        (MembershipFamily::Finite(members), RateMethod::Auto | RateMethod::Enumerate) => {
            rate_finite(members, op, y)
        }
        (MembershipFamily::Finite(_), RateMethod::Closed | RateMethod::Grid) => {
            Err(FuzzyError::MethodNotApplicable {
                method: if method == RateMethod::Closed { "closed" } else { "grid" },
                reason: "finite families are enumerated",
            })
        }
        (MembershipFamily::Parametric(_), RateMethod::Enumerate) => {
            Err(FuzzyError::MethodNotApplicable {
                method: "enum",
                reason: "parametric families cannot be enumerated",
            })
        }
        (MembershipFamily::Parametric(_), RateMethod::Closed) => rate_conic_analytic(fam, op, y),
        (MembershipFamily::Parametric(_), RateMethod::Auto) if fam.conic_radius().is_some() => {
            rate_conic_analytic(fam, op, y)
        }
        (MembershipFamily::Parametric(_), _) => rate_parametric(fam, op, y, cfg),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shapes() {
        let finite = FuzzyRate::Finite {
            value: 2.117,
            witness: MemberId::Param(0.001),
            attained: false,
        };
        assert_eq!(
            serde_json::to_string(&finite).unwrap(),
            r#"{"outcome":"finite","value":2.117,"witness":{"mu":0.001},"attained":false}"#
        );
        let inf = FuzzyRate::PlusInfinity(DivergenceCertificate::single(Probe {
            witness: MemberId::Index(1),
            ratio: f64::INFINITY,
            ln_ratio: f64::INFINITY,
        }));
        let json = serde_json::to_string(&inf).unwrap();
        assert!(json.starts_with(r#"{"outcome":"infinite","certificate":[{"witness":{"index":1},"ratio":"inf""#));
        let back: FuzzyRate = serde_json::from_str(&json).unwrap();
        assert_eq!(back, inf);
        let und = FuzzyRate::undefined("all ratios excluded");
        assert_eq!(
            serde_json::to_string(&und).unwrap(),
            r#"{"outcome":"undefined","reason":"all ratios excluded"}"#
        );
    }

    #[test]
    fn config_validation() {
        assert!(SearchConfig::default().validate().is_ok());
        let mut c = SearchConfig::default();
        c.resolution = 1;
        assert!(c.validate().is_err());
        let mut c = SearchConfig::default();
        c.growth_factor = 1.0;
        assert!(c.validate().is_err());
        let mut c = SearchConfig::default();
        c.param_tol = 0.0;
        assert!(c.validate().is_err());
    }
}
