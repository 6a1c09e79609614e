//! Fuzzy rates of operators on finite-dimensional real spaces.
//!
//! The fuzzy rate of an operator `B` at a point `y` over a nonempty family of
//! membership functions is the supremum of `F(B(y)) / F(y)` over the family.
//! This crate provides:
//!
//! - [`membership`]: membership functions and families, including the built-in
//!   conic family `x² + λy² = r²` with membership `e^{-(λ-μ)²}`.
//! - [`operators`]: matrices, affine maps, general maps, composition, powers.
//! - [`rate_engine`]: enumeration, closed-form and adaptive numeric suprema,
//!   with divergence certificates and witness extraction.
//! - [`dynamics`]: orbits, product bounds, quasi-fixed points and fixed-point
//!   certification.
//! - [`property_suite`]: seeded randomized checks of the algebraic properties
//!   of the fuzzy rate.
//! - [`defs`]: JSON definitions and command-line shorthand for families and
//!   operators.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod defs;
pub mod dynamics;
mod error;
pub mod extended;
pub mod membership;
pub mod operators;
mod point;
pub mod property_suite;
pub mod rate_engine;

pub use error::{FuzzyError, Result};
pub use point::Point;

pub mod prelude {
    pub use crate::dynamics::{
        certify_fixed_point, check_uniform_lower_bound, orbit, quasi_fixed_search,
        step_rate_convergence, BoundStatus, FixedPointCertificate, OrbitReport,
        QuasiFixedFinding,
    };
    pub use crate::membership::{
        conic_lambda, conic_membership, evaluate, family_members, ConicLambda, ConicMembership,
        MemberId, MembershipFamily, MembershipFunction, MembershipValue, ParamDomain,
        ParamWindow,
    };
    pub use crate::operators::{apply, compose, power, scale, Operator};
    pub use crate::rate_engine::{
        attained_witness, rate, rate_conic_closed_form, rate_finite, rate_parametric, ratio,
        DivergenceCertificate, FuzzyRate, RateMethod, RatioSample, SearchConfig,
    };
    pub use crate::{FuzzyError, Point, Result};
}
