//! Membership functions, families of them, and the conic family.
//!
//! The conic family lives on the plane: the curve `c(λ, r)` is
//! `x² + λ·y² = r²` for `λ > 0`, and the member indexed by `μ` gives a point
//! lying on `c(λ, r)` the value `e^{-(λ-μ)²}` (so `1` on `c(μ, r)` itself) and
//! a point lying on no curve the value `0`. The points `(±r, 0)` lie on every
//! curve; they are assigned `1`.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::extended::ext_f64;
use crate::{FuzzyError, Point, Result};

/// Default parameter window for sampling and searching unbounded domains.
pub const DEFAULT_WINDOW: ParamWindow = ParamWindow {
    low: 1e-3,
    high: 1e3,
};

/// Relative coordinate tolerance used when looking a point up in a table.
pub const TABLE_MATCH_TOL: f64 = 1e-12;

/// A membership degree in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct MembershipValue(f64);

impl MembershipValue {
    pub const ZERO: MembershipValue = MembershipValue(0.0);
    pub const ONE: MembershipValue = MembershipValue(1.0);

    pub fn new(value: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&value) {
            Ok(MembershipValue(value))
        } else {
            Err(FuzzyError::MembershipOutOfRange(value))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for MembershipValue {
    type Error = FuzzyError;

    fn try_from(value: f64) -> Result<Self> {
        MembershipValue::new(value)
    }
}

impl From<MembershipValue> for f64 {
    fn from(v: MembershipValue) -> f64 {
        v.0
    }
}

/// Which conic curve a planar point lies on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConicLambda {
    /// The point lies on exactly this curve.
    Value(f64),
    /// The point is `(±r, 0)`, which lies on every curve.
    Any,
    /// The point lies on no curve of the family.
    None,
}

fn check_radius(r: f64) -> Result<()> {
    if r.is_finite() && r > 0.0 {
        Ok(())
    } else {
        Err(FuzzyError::InvalidParameter {
            name: "r",
            value: r,
            reason: "must be positive and finite",
        })
    }
}

/// Solves `x² + λ·y² = r²` for `λ > 0`.
pub fn conic_lambda(p: &Point, r: f64) -> Result<ConicLambda> {
    p.ensure_dim(2)?;
    check_radius(r)?;
    let (x2, y2, r2) = (p[0] * p[0], p[1] * p[1], r * r);
    Ok(if p[1] != 0.0 && x2 < r2 {
        let lambda = (r2 - x2) / y2;
        if lambda.is_finite() && lambda > 0.0 {
            ConicLambda::Value(lambda)
        } else {
            ConicLambda::None
        }
    } else if p[1] == 0.0 && x2 == r2 {
        ConicLambda::Any
    } else {
        ConicLambda::None
    })
}

/// The member of the conic family targeting the curve `c(mu, r)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ConicParams")]
pub struct ConicMembership {
    mu: f64,
    r: f64,
}

#[derive(Deserialize)]
struct ConicParams {
    mu: f64,
    r: f64,
}

impl TryFrom<ConicParams> for ConicMembership {
    type Error = FuzzyError;

    fn try_from(p: ConicParams) -> Result<Self> {
        ConicMembership::new(p.mu, p.r)
    }
}

impl ConicMembership {
    pub fn new(mu: f64, r: f64) -> Result<Self> {
        if !(mu.is_finite() && mu > 0.0) {
            return Err(FuzzyError::InvalidParameter {
                name: "mu",
                value: mu,
                reason: "must be positive and finite",
            });
        }
        check_radius(r)?;
        Ok(ConicMembership { mu, r })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    /// Natural log of the membership value; `-∞` off the family.
    pub fn ln_value(&self, p: &Point) -> Result<f64> {
        Ok(conic_ln_value(self.mu, conic_lambda(p, self.r)?))
    }
}

pub(crate) fn conic_ln_value(mu: f64, lambda: ConicLambda) -> f64 {
    match lambda {
        ConicLambda::None => f64::NEG_INFINITY,
        ConicLambda::Any => 0.0,
        ConicLambda::Value(l) if l == mu => 0.0,
        ConicLambda::Value(l) => -(l - mu) * (l - mu),
    }
}

pub fn conic_membership(f: &ConicMembership, p: &Point) -> Result<MembershipValue> {
    Ok(MembershipValue(f.ln_value(p)?.exp()))
}

/// A tabulated membership function; points off the table have value `0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    entries: Vec<TableEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableEntry {
    pub point: Point,
    pub value: MembershipValue,
}

impl Table {
    pub fn new(entries: Vec<(Point, MembershipValue)>) -> Result<Self> {
        let entries: Vec<TableEntry> = entries
            .into_iter()
            .map(|(point, value)| TableEntry { point, value })
            .collect();
        if let Some(first) = entries.first() {
            let d = first.point.dim();
            for e in &entries {
                e.point.ensure_dim(d)?;
            }
        }
        Ok(Table { entries })
    }

    pub fn entries(&self) -> &[TableEntry] {
        &self.entries
    }

    pub fn dim(&self) -> Option<usize> {
        self.entries.first().map(|e| e.point.dim())
    }

    /// First stored entry matching `p`.
    pub fn lookup(&self, p: &Point) -> Option<MembershipValue> {
        self.entries
            .iter()
            .find(|e| e.point.approx_eq(p, TABLE_MATCH_TOL))
            .map(|e| e.value)
    }
}

type PointFn = dyn Fn(&Point) -> f64 + Send + Sync;

#[derive(Clone)]
pub enum MembershipKind {
    Conic(ConicMembership),
    Table(Table),
    /// `e^{-(‖p‖/scale)²}`; depends on the point only through its norm.
    Radial { scale: f64 },
    Constant(MembershipValue),
    Custom {
        dim: Option<usize>,
        eval: Arc<PointFn>,
    },
}

impl fmt::Debug for MembershipKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MembershipKind::Conic(c) => f.debug_tuple("Conic").field(c).finish(),
            MembershipKind::Table(t) => f.debug_tuple("Table").field(t).finish(),
            MembershipKind::Radial { scale } => {
                f.debug_struct("Radial").field("scale", scale).finish()
            }
            MembershipKind::Constant(v) => f.debug_tuple("Constant").field(v).finish(),
            MembershipKind::Custom { dim, .. } => {
                f.debug_struct("Custom").field("dim", dim).finish_non_exhaustive()
            }
        }
    }
}

/// A total map from points to `[0, 1]`.
#[derive(Debug, Clone)]
pub struct MembershipFunction {
    kind: MembershipKind,
    label: String,
    injective: Option<bool>,
}

impl MembershipFunction {
    pub fn conic(mu: f64, r: f64) -> Result<Self> {
        let c = ConicMembership::new(mu, r)?;
        Ok(MembershipFunction {
            kind: MembershipKind::Conic(c),
            label: format!("conic(mu={mu}, r={r})"),
            injective: None,
        })
    }

    pub fn table(entries: Vec<(Point, MembershipValue)>) -> Result<Self> {
        let table = Table::new(entries)?;
        Ok(MembershipFunction {
            label: format!("table[{}]", table.entries.len()),
            kind: MembershipKind::Table(table),
            injective: None,
        })
    }

    /// Table construction from raw values, validating each one.
    pub fn table_from_values(entries: Vec<(Point, f64)>) -> Result<Self> {
        let entries = entries
            .into_iter()
            .map(|(p, v)| MembershipValue::new(v).map(|v| (p, v)))
            .collect::<Result<Vec<_>>>()?;
        MembershipFunction::table(entries)
    }

    pub fn radial(scale: f64) -> Result<Self> {
        if !(scale.is_finite() && scale > 0.0) {
            return Err(FuzzyError::InvalidParameter {
                name: "scale",
                value: scale,
                reason: "must be positive and finite",
            });
        }
        Ok(MembershipFunction {
            kind: MembershipKind::Radial { scale },
            label: format!("radial(scale={scale})"),
            injective: Some(false),
        })
    }

    pub fn constant(value: f64) -> Result<Self> {
        Ok(MembershipFunction {
            kind: MembershipKind::Constant(MembershipValue::new(value)?),
            label: format!("constant({value})"),
            injective: Some(false),
        })
    }

    /// Wraps an arbitrary pure map. Values outside `[0, 1]` are reported as
    /// errors at evaluation time.
    pub fn custom(
        label: impl Into<String>,
        dim: Option<usize>,
        eval: impl Fn(&Point) -> f64 + Send + Sync + 'static,
    ) -> Self {
        MembershipFunction {
            kind: MembershipKind::Custom {
                dim,
                eval: Arc::new(eval),
            },
            label: label.into(),
            injective: None,
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn with_injective(mut self, injective: bool) -> Self {
        self.injective = Some(injective);
        self
    }

    pub fn kind(&self) -> &MembershipKind {
        &self.kind
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// The declared injectivity flag; it is never verified.
    pub fn injective(&self) -> Option<bool> {
        self.injective
    }

    pub fn dim(&self) -> Option<usize> {
        match &self.kind {
            MembershipKind::Conic(_) => Some(2),
            MembershipKind::Table(t) => t.dim(),
            MembershipKind::Radial { .. } | MembershipKind::Constant(_) => None,
            MembershipKind::Custom { dim, .. } => *dim,
        }
    }

    pub fn evaluate(&self, p: &Point) -> Result<MembershipValue> {
        if let MembershipKind::Conic(c) = &self.kind {
            return conic_membership(c, p);
        }
        self.check_dim(p)?;
        match &self.kind {
            MembershipKind::Conic(_) => unreachable!(),
            MembershipKind::Table(t) => Ok(t.lookup(p).unwrap_or(MembershipValue::ZERO)),
            MembershipKind::Radial { scale } => {
                let s = p.norm() / scale;
                Ok(MembershipValue((-s * s).exp()))
            }
            MembershipKind::Constant(v) => Ok(*v),
            MembershipKind::Custom { eval, .. } => MembershipValue::new(eval(p)),
        }
    }

    /// Natural log of the value. Analytic families avoid underflow here.
    pub fn ln_value(&self, p: &Point) -> Result<f64> {
        match &self.kind {
            MembershipKind::Conic(c) => c.ln_value(p),
            MembershipKind::Radial { scale } => {
                self.check_dim(p)?;
                let s = p.norm() / scale;
                Ok(-s * s)
            }
            _ => Ok(self.evaluate(p)?.get().ln()),
        }
    }

    fn check_dim(&self, p: &Point) -> Result<()> {
        match self.dim() {
            Some(d) => p.ensure_dim(d),
            None => Ok(()),
        }
    }
}

pub fn evaluate(f: &MembershipFunction, p: &Point) -> Result<MembershipValue> {
    f.evaluate(p)
}

/// Identifies a member of a family: a list index or a parameter value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum MemberId {
    #[serde(rename = "index")]
    Index(usize),
    #[serde(rename = "mu")]
    Param(f64),
}

impl MemberId {
    pub fn param(self) -> Option<f64> {
        match self {
            MemberId::Param(p) => Some(p),
            MemberId::Index(_) => None,
        }
    }

    pub fn index(self) -> Option<usize> {
        match self {
            MemberId::Index(i) => Some(i),
            MemberId::Param(_) => None,
        }
    }
}

impl fmt::Display for MemberId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MemberId::Index(i) => write!(f, "#{i}"),
            MemberId::Param(p) => write!(f, "mu={p}"),
        }
    }
}

/// A closed parameter interval used for sampling and searching.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamWindow {
    pub low: f64,
    pub high: f64,
}

impl ParamWindow {
    pub fn new(low: f64, high: f64) -> Result<Self> {
        if low.is_finite() && high.is_finite() && low < high {
            Ok(ParamWindow { low, high })
        } else {
            Err(FuzzyError::EmptyWindow { low, high })
        }
    }

    pub fn width(&self) -> f64 {
        self.high - self.low
    }
}

/// A real interval, possibly open at either end and possibly unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamDomain {
    #[serde(with = "ext_f64")]
    pub low: f64,
    #[serde(with = "ext_f64")]
    pub high: f64,
    pub open_low: bool,
    pub open_high: bool,
}

impl ParamDomain {
    pub fn new(low: f64, high: f64, open_low: bool, open_high: bool) -> Result<Self> {
        if low.is_nan() || high.is_nan() || low >= high || low == f64::INFINITY {
            return Err(FuzzyError::EmptyWindow { low, high });
        }
        Ok(ParamDomain {
            low,
            high,
            open_low: open_low || low.is_infinite(),
            open_high: open_high || high.is_infinite(),
        })
    }

    /// `(0, ∞)`.
    pub fn positive() -> Self {
        ParamDomain {
            low: 0.0,
            high: f64::INFINITY,
            open_low: true,
            open_high: true,
        }
    }

    pub fn closed(low: f64, high: f64) -> Result<Self> {
        ParamDomain::new(low, high, false, false)
    }

    pub fn contains(&self, x: f64) -> bool {
        let above = if self.open_low { x > self.low } else { x >= self.low };
        let below = if self.open_high { x < self.high } else { x <= self.high };
        above && below
    }

    pub fn is_bounded(&self) -> bool {
        self.low.is_finite() && self.high.is_finite()
    }

    pub fn is_compact(&self) -> bool {
        self.is_bounded() && !self.open_low && !self.open_high
    }

    /// The window `w ∩ self`, clipped to finite values.
    pub fn clip(&self, w: ParamWindow) -> Result<ParamWindow> {
        ParamWindow::new(w.low.max(self.low), w.high.min(self.high))
    }

    /// Whether the closed window lies in the closure of the domain.
    pub fn covers(&self, w: &ParamWindow) -> bool {
        w.low >= self.low && w.high <= self.high
    }

    /// A window to sample when none is given.
    pub fn default_window(&self) -> Result<ParamWindow> {
        if self.is_bounded() {
            ParamWindow::new(self.low, self.high)
        } else {
            self.clip(DEFAULT_WINDOW)
                .or_else(|_| ParamWindow::new(self.low.max(-1e3), self.high.min(1e3)))
        }
    }
}

type ParamFn = dyn Fn(f64) -> MembershipFunction + Send + Sync;

#[derive(Clone)]
pub enum FamilyGenerator {
    /// `μ ↦` the conic member `c(μ, r)`.
    Conic { r: f64 },
    Custom(Arc<ParamFn>),
}

impl fmt::Debug for FamilyGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyGenerator::Conic { r } => f.debug_struct("Conic").field("r", r).finish(),
            FamilyGenerator::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

/// A one-parameter family `{ generator(t) : t ∈ domain }`.
#[derive(Debug, Clone)]
pub struct ParametricFamily {
    pub domain: ParamDomain,
    pub generator: FamilyGenerator,
}

impl ParametricFamily {
    pub fn member(&self, param: f64) -> Result<MembershipFunction> {
        if !self.domain.contains(param) {
            return Err(FuzzyError::UnknownMember(MemberId::Param(param).to_string()));
        }
        match &self.generator {
            FamilyGenerator::Conic { r } => MembershipFunction::conic(param, *r),
            FamilyGenerator::Custom(g) => Ok(g(param)),
        }
    }
}

/// A nonempty collection of membership functions over which suprema are taken.
#[derive(Debug, Clone)]
pub enum MembershipFamily {
    Finite(Vec<MembershipFunction>),
    Parametric(ParametricFamily),
}

impl MembershipFamily {
    pub fn finite(members: Vec<MembershipFunction>) -> Result<Self> {
        if members.is_empty() {
            Err(FuzzyError::EmptyFamily)
        } else {
            Ok(MembershipFamily::Finite(members))
        }
    }

    /// The conic family `{ c(μ, r) : μ > 0 }` for a fixed `r`.
    pub fn conic(r: f64) -> Result<Self> {
        MembershipFamily::conic_on(r, ParamDomain::positive())
    }

    pub fn conic_on(r: f64, domain: ParamDomain) -> Result<Self> {
        check_radius(r)?;
        if domain.low < 0.0 {
            return Err(FuzzyError::InvalidParameter {
                name: "mu_domain",
                value: domain.low,
                reason: "conic members need mu > 0",
            });
        }
        if domain.low == 0.0 && !domain.open_low {
            return Err(FuzzyError::InvalidParameter {
                name: "mu_domain",
                value: 0.0,
                reason: "mu = 0 is not a conic member; open the lower end",
            });
        }
        Ok(MembershipFamily::Parametric(ParametricFamily {
            domain,
            generator: FamilyGenerator::Conic { r },
        }))
    }

    pub fn parametric(
        domain: ParamDomain,
        generator: impl Fn(f64) -> MembershipFunction + Send + Sync + 'static,
    ) -> Self {
        MembershipFamily::Parametric(ParametricFamily {
            domain,
            generator: FamilyGenerator::Custom(Arc::new(generator)),
        })
    }

    pub fn member(&self, id: MemberId) -> Result<MembershipFunction> {
        match (self, id) {
            (MembershipFamily::Finite(m), MemberId::Index(i)) => m
                .get(i)
                .cloned()
                .ok_or_else(|| FuzzyError::UnknownMember(id.to_string())),
            (MembershipFamily::Parametric(p), MemberId::Param(t)) => p.member(t),
            _ => Err(FuzzyError::UnknownMember(id.to_string())),
        }
    }

    /// The radius of a conic parametric family.
    pub fn conic_radius(&self) -> Option<f64> {
        match self {
            MembershipFamily::Parametric(ParametricFamily {
                generator: FamilyGenerator::Conic { r },
                ..
            }) => Some(*r),
            _ => None,
        }
    }

    pub fn domain(&self) -> Option<ParamDomain> {
        match self {
            MembershipFamily::Parametric(p) => Some(p.domain),
            MembershipFamily::Finite(_) => None,
        }
    }
}

/// Enumerates a finite family, or samples `resolution` members of a
/// parametric family at the centers of evenly sized cells of `window`.
pub fn family_members(
    fam: &MembershipFamily,
    window: Option<ParamWindow>,
    resolution: usize,
) -> Result<Vec<(MemberId, MembershipFunction)>> {
    match fam {
        MembershipFamily::Finite(members) => {
            if members.is_empty() {
                return Err(FuzzyError::EmptyFamily);
            }
            Ok(members
                .iter()
                .cloned()
                .enumerate()
                .map(|(i, f)| (MemberId::Index(i), f))
                .collect())
        }
        MembershipFamily::Parametric(p) => {
            if resolution < 2 {
                return Err(FuzzyError::InvalidResolution(resolution));
            }
            let window = match window {
                Some(w) => {
                    let w = ParamWindow::new(w.low, w.high)?;
                    if !p.domain.covers(&w) {
                        return Err(FuzzyError::WindowOutsideDomain {
                            low: w.low,
                            high: w.high,
                        });
                    }
                    w
                }
                None => p.domain.default_window()?,
            };
            let step = window.width() / resolution as f64;
            (0..resolution)
                .map(|i| {
                    let t = window.low + (i as f64 + 0.5) * step;
                    p.member(t).map(|f| (MemberId::Param(t), f))
                })
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn pt(x: f64, y: f64) -> Point {
        Point::xy(x, y).unwrap()
    }

    #[test]
    fn lambda_examples() {
        assert_eq!(conic_lambda(&pt(0.0, 1.0), 1.0).unwrap(), ConicLambda::Value(1.0));
        let s2 = 2f64.sqrt();
        let s6 = 6f64.sqrt();
        match conic_lambda(&pt(1.0 / s2, 1.0 / s6), 1.0).unwrap() {
            ConicLambda::Value(l) => assert_relative_eq!(l, 3.0, max_relative = 1e-12),
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(conic_lambda(&pt(1.0, 1.0), 1.0).unwrap(), ConicLambda::None);
        assert_eq!(conic_lambda(&pt(-1.0, 0.0), 1.0).unwrap(), ConicLambda::Any);
        assert_eq!(conic_lambda(&pt(0.5, 0.0), 1.0).unwrap(), ConicLambda::None);
    }

    #[test]
    fn lambda_errors() {
        let p3 = Point::new(vec![0.0, 1.0, 2.0]).unwrap();
        assert!(matches!(
            conic_lambda(&p3, 1.0),
            Err(FuzzyError::DimensionMismatch { expected: 2, found: 3 })
        ));
        assert!(conic_lambda(&pt(0.0, 1.0), 0.0).is_err());
        assert!(conic_lambda(&pt(0.0, 1.0), -2.0).is_err());
    }

    #[test]
    fn membership_examples() {
        let f = ConicMembership::new(1.0, 1.0).unwrap();
        assert_eq!(conic_membership(&f, &pt(0.0, 1.0)).unwrap().get(), 1.0);
        let v = conic_membership(&f, &pt(1.0 / 2f64.sqrt(), 1.0 / 6f64.sqrt()))
            .unwrap()
            .get();
        assert_relative_eq!(v, (-4.0f64).exp(), max_relative = 1e-9);
        assert_relative_eq!(v, 0.0183156, max_relative = 1e-5);
        assert_eq!(conic_membership(&f, &pt(1.0, 1.0)).unwrap().get(), 0.0);
        assert_eq!(conic_membership(&f, &pt(1.0, 0.0)).unwrap().get(), 1.0);

        // A point on c(mu0, r0) itself.
        let (mu0, r0) = (2.5, 3.0);
        let g = ConicMembership::new(mu0, r0).unwrap();
        let y: f64 = 1.2;
        let x = (r0 * r0 - mu0 * y * y).sqrt();
        let on = pt(x, y);
        match conic_lambda(&on, r0).unwrap() {
            ConicLambda::Value(l) => assert_relative_eq!(l, mu0, max_relative = 1e-12),
            other => panic!("unexpected {other:?}"),
        }
        assert_relative_eq!(conic_membership(&g, &on).unwrap().get(), 1.0, max_relative = 1e-12);
    }

    #[test]
    fn evaluate_facade() {
        let conic = MembershipFunction::conic(1.0, 1.0).unwrap();
        assert_eq!(evaluate(&conic, &pt(0.0, 1.0)).unwrap().get(), 1.0);

        // Hand evaluation: lambda = (1 - 0.09) / 0.04 = 22.75.
        let expected_ln = -(22.75f64 - 1.0).powi(2);
        assert_relative_eq!(expected_ln, -473.0625, max_relative = 1e-15);
        let ln = conic.ln_value(&pt(0.3, 0.2)).unwrap();
        assert_relative_eq!(ln, expected_ln, max_relative = 1e-12);
        assert_relative_eq!(
            evaluate(&conic, &pt(0.3, 0.2)).unwrap().get(),
            expected_ln.exp(),
            max_relative = 1e-9
        );

        let p = pt(0.25, -4.0);
        let table = MembershipFunction::table_from_values(vec![(p.clone(), 0.5)]).unwrap();
        assert_eq!(evaluate(&table, &p).unwrap().get(), 0.5);
        assert_eq!(evaluate(&table, &pt(0.0, 0.0)).unwrap().get(), 0.0);
        assert!(evaluate(&table, &Point::new(vec![1.0]).unwrap()).is_err());
        assert!(evaluate(&conic, &Point::new(vec![1.0]).unwrap()).is_err());
    }

    #[test]
    fn custom_out_of_range_is_an_error() {
        let bad = MembershipFunction::custom("bad", None, |_| 1.5);
        assert_eq!(
            bad.evaluate(&pt(0.0, 0.0)),
            Err(FuzzyError::MembershipOutOfRange(1.5))
        );
    }

    #[test]
    fn family_members_finite_and_parametric() {
        let f1 = MembershipFunction::constant(0.1).unwrap();
        let f2 = MembershipFunction::constant(0.2).unwrap();
        let fam = MembershipFamily::finite(vec![f1, f2]).unwrap();
        let ms = family_members(&fam, None, 0).unwrap();
        assert_eq!(ms.len(), 2);
        assert_eq!(ms[0].0, MemberId::Index(0));
        assert_eq!(ms[1].1.label(), "constant(0.2)");

        let conic = MembershipFamily::conic(1.0).unwrap();
        let w = ParamWindow { low: 0.0, high: 2.0 };
        let params: Vec<f64> = family_members(&conic, Some(w), 4)
            .unwrap()
            .into_iter()
            .map(|(id, _)| id.param().unwrap())
            .collect();
        assert_eq!(params, vec![0.25, 0.75, 1.25, 1.75]);

        let degenerate = ParamWindow { low: 1.0, high: 1.0 };
        assert!(matches!(
            family_members(&conic, Some(degenerate), 2),
            Err(FuzzyError::EmptyWindow { .. })
        ));
        assert!(matches!(
            family_members(&conic, Some(w), 1),
            Err(FuzzyError::InvalidResolution(1))
        ));
        let outside = ParamWindow { low: -1.0, high: 1.0 };
        assert!(family_members(&conic, Some(outside), 4).is_err());
        assert_eq!(MembershipFamily::finite(vec![]).unwrap_err(), FuzzyError::EmptyFamily);
    }

    #[test]
    fn domain_membership() {
        let d = ParamDomain::positive();
        assert!(!d.contains(0.0));
        assert!(d.contains(1e-300));
        assert!(d.contains(1e300));
        let c = ParamDomain::closed(0.5, 2.0).unwrap();
        assert!(c.contains(0.5) && c.contains(2.0) && !c.contains(2.0000001));
        assert!(c.is_compact());
        assert!(ParamDomain::new(1.0, 1.0, false, false).is_err());
        let json = serde_json::to_string(&d).unwrap();
        assert!(json.contains("\"inf\""));
        let back: ParamDomain = serde_json::from_str(&json).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn conic_family_rejects_nonpositive_domain() {
        assert!(MembershipFamily::conic_on(1.0, ParamDomain::closed(0.0, 1.0).unwrap()).is_err());
        assert!(MembershipFamily::conic_on(1.0, ParamDomain::closed(-1.0, 1.0).unwrap()).is_err());
        assert!(MembershipFamily::conic(0.0).is_err());
    }
}
