//! Seeded randomized checks of the algebraic properties of the fuzzy rate.
//!
//! Each property draws instances whose memberships satisfy the property's
//! hypothesis by construction, then tests only its conclusion. Instances are
//! plain data (points, matrix rows, tabulated memberships), so a recorded
//! failure can be replayed with [`replay`].
//!
//! Trial `t` of property `p` uses a ChaCha8 stream seeded by the suite seed
//! and selected by `(p, t)`, so reports do not depend on thread scheduling or
//! on which properties are selected.

mod checks;
mod instance;

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::extended::ExtendedReal;
use crate::{FuzzyError, Result};

pub use checks::evaluate;
pub use instance::{generate, Entry, Instance};

/// Relative slack on every inequality.
pub const REL_TOL: f64 = 1e-9;

/// Tolerance used when testing equality hypotheses on memberships.
pub const HYPOTHESIS_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Property {
    #[serde(rename = "T34-1")]
    Positivity,
    #[serde(rename = "T34-2")]
    Identity,
    #[serde(rename = "T34-3")]
    Scaling,
    #[serde(rename = "T34-4")]
    Dominance,
    #[serde(rename = "T34-5")]
    Subadditivity,
    #[serde(rename = "T34-6")]
    ReverseTriangle,
    #[serde(rename = "T34-7")]
    Submultiplicativity,
    #[serde(rename = "T34-8")]
    FamilyMonotone,
    #[serde(rename = "T32")]
    Attainment,
    #[serde(rename = "C35")]
    ProductBound,
}

impl Property {
    pub const ALL: [Property; 10] = [
        Property::Positivity,
        Property::Identity,
        Property::Scaling,
        Property::Dominance,
        Property::Subadditivity,
        Property::ReverseTriangle,
        Property::Submultiplicativity,
        Property::FamilyMonotone,
        Property::Attainment,
        Property::ProductBound,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Property::Positivity => "T34-1",
            Property::Identity => "T34-2",
            Property::Scaling => "T34-3",
            Property::Dominance => "T34-4",
            Property::Subadditivity => "T34-5",
            Property::ReverseTriangle => "T34-6",
            Property::Submultiplicativity => "T34-7",
            Property::FamilyMonotone => "T34-8",
            Property::Attainment => "T32",
            Property::ProductBound => "C35",
        }
    }

    fn index(self) -> u64 {
        Property::ALL.iter().position(|p| *p == self).unwrap_or(0) as u64
    }

    /// The conclusion as originally written.
    pub fn stated_form(self) -> &'static str {
        match self {
            Property::Subadditivity => "‖B₁+B₂‖_y ≤ ‖B₁‖_y + ‖B₁‖_y",
            Property::ReverseTriangle => "0 ≤ ‖B₁‖_y − ‖B₁‖_y ≤ ‖B₁−B₂‖_y",
            p => p.tested_form(),
        }
    }

    /// The conclusion actually tested.
    pub fn tested_form(self) -> &'static str {
        match self {
            Property::Positivity => "‖B‖_y > 0",
            Property::Identity => "‖I‖_y = 1",
            Property::Scaling => "‖aB₁‖_y ≤ ‖B₁‖_{ay}·‖aI‖_y",
            Property::Dominance => "‖B₂‖_y ≤ ‖B₁‖_y",
            Property::Subadditivity => "‖B₁+B₂‖_y ≤ ‖B₁‖_y + ‖B₂‖_y",
            Property::ReverseTriangle => "0 ≤ ‖B₁‖_y − ‖B₂‖_y ≤ ‖B₁−B₂‖_y",
            Property::Submultiplicativity => "‖B₁B₂‖_y ≤ ‖B₁‖_{B₂(y)}·‖B₂‖_y",
            Property::FamilyMonotone => "‖B‖_{y,F₁} ≤ ‖B‖_{y,F₂} for F₁ ⊆ F₂",
            Property::Attainment => "F(B(y)) = ‖B‖_y·F(y) for the witness F",
            Property::ProductBound => "‖Bᵏ‖_y ≤ ∏_{j≤k} ‖B‖_{B^{j−1}(y)}",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Property {
    type Err = FuzzyError;

    fn from_str(s: &str) -> Result<Self> {
        Property::ALL
            .into_iter()
            .find(|p| p.id().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| FuzzyError::parse("property", format!("unknown property {s:?}")))
    }
}

/// Outcome of one instance. For every property the conclusion reads
/// `lhs ≤ rhs` up to [`REL_TOL`], except positivity (`lhs > 0`) and
/// identity (`lhs = 1`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub hypothesis_holds: bool,
    pub lhs: Option<ExtendedReal>,
    pub rhs: Option<ExtendedReal>,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub trial: usize,
    pub instance: Instance,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub evaluation: Option<Evaluation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyCheck {
    pub property_id: Property,
    pub stated_form: String,
    pub tested_form: String,
    pub trials: usize,
    /// Trials whose generated instance did not meet the hypothesis.
    pub skipped: usize,
    pub failures: Vec<Counterexample>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub trials: usize,
    pub checks: Vec<PropertyCheck>,
    pub passed: bool,
}

fn trial_rng(seed: u64, property: Property, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((property.index() << 32) | trial as u64);
    rng
}

enum TrialOutcome {
    Pass,
    Skip,
    Fail(Counterexample),
}

fn run_trial(seed: u64, property: Property, trial: usize) -> TrialOutcome {
    let mut rng = trial_rng(seed, property, trial);
    let instance = match generate(property, &mut rng) {
        Ok(i) => i,
        Err(err) => {
            return TrialOutcome::Fail(Counterexample {
                trial,
                instance: Instance::default(),
                evaluation: None,
                error: Some(err.to_string()),
            })
        }
    };
    match evaluate(property, &instance) {
        Ok(e) if !e.hypothesis_holds => TrialOutcome::Skip,
        Ok(e) if e.holds => TrialOutcome::Pass,
        Ok(e) => TrialOutcome::Fail(Counterexample {
            trial,
            instance,
            evaluation: Some(e),
            error: None,
        }),
        Err(err) => TrialOutcome::Fail(Counterexample {
            trial,
            instance,
            evaluation: None,
            error: Some(err.to_string()),
        }),
    }
}

pub fn check_property(property: Property, seed: u64, trials: usize) -> PropertyCheck {
    let outcomes: Vec<TrialOutcome> = (0..trials)
        .into_par_iter()
        .map(|t| run_trial(seed, property, t))
        .collect();
    let mut skipped = 0;
    let mut failures = Vec::new();
    for o in outcomes {
        match o {
            TrialOutcome::Pass => {}
            TrialOutcome::Skip => skipped += 1,
            TrialOutcome::Fail(c) => failures.push(c),
        }
    }
    PropertyCheck {
        property_id: property,
        stated_form: property.stated_form().into(),
        tested_form: property.tested_form().into(),
        trials,
        skipped,
        passed: failures.is_empty(),
        failures,
    }
}

/// Runs the given properties, in order.
pub fn run_properties(seed: u64, trials: usize, properties: &[Property]) -> Result<SuiteReport> {
    if trials == 0 {
        return Err(FuzzyError::InvalidConfig("trials must be at least 1".into()));
    }
    let checks: Vec<PropertyCheck> = properties
        .iter()
        .map(|p| check_property(*p, seed, trials))
        .collect();
    Ok(SuiteReport {
        seed,
        trials,
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}

pub fn run_suite(seed: u64, trials: usize) -> Result<SuiteReport> {
    run_properties(seed, trials, &Property::ALL)
}

/// Re-evaluates a recorded counterexample.
pub fn replay(property: Property, counterexample: &Counterexample) -> Result<Evaluation> {
    evaluate(property, &counterexample.instance)
}
