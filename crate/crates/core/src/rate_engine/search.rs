//! Grid search with local refinement over a one-parameter family.
//!
//! Each window is sampled on `resolution` points (log-spaced when the window
//! is positive and spans at least two decades), the best `top_cells` samples
//! are refined by repeated halving of a bracket around the incumbent, and the
//! window is then expanded toward an open or unbounded end of the domain when
//! the optimum sits on that edge. The ratio is never assumed unimodal, but
//! only `top_cells` local refinements are made, so a narrow global peak can
//! still be missed between grid points.

use rayon::prelude::*;

use super::ratio::{sample_function, Ratio, RatioSample};
use super::{DivergenceCertificate, FuzzyRate, Probe, SearchConfig};
use crate::membership::{
    conic_lambda, conic_ln_value, ConicLambda, FamilyGenerator, MemberId, MembershipFamily,
    MembershipValue, ParamDomain, ParamWindow, ParametricFamily,
};
use crate::operators::Operator;
use crate::{FuzzyError, Point, Result};

const MAX_REFINE_STEPS: usize = 200;

/// Evaluates `F_t(to) / F_t(from)` for members of a parametric family.
pub(crate) struct PairEvaluator<'a> {
    family: &'a ParametricFamily,
    from: Point,
    to: Point,
    conic: Option<(ConicLambda, ConicLambda)>,
}

impl<'a> PairEvaluator<'a> {
    pub(crate) fn new(family: &'a ParametricFamily, from: Point, to: Point) -> Result<Self> {
        let conic = match family.generator {
            FamilyGenerator::Conic { r } => Some((conic_lambda(&from, r)?, conic_lambda(&to, r)?)),
            FamilyGenerator::Custom(_) => None,
        };
        Ok(PairEvaluator {
            family,
            from,
            to,
            conic,
        })
    }

    pub(crate) fn domain(&self) -> ParamDomain {
        self.family.domain
    }

    pub(crate) fn sample(&self, t: f64) -> Result<RatioSample> {
        let id = MemberId::Param(t);
        match self.conic {
            Some((from, to)) => {
                let ln_den = conic_ln_value(t, from);
                let ln_num = conic_ln_value(t, to);
                Ok(RatioSample::from_parts(
                    id,
                    MembershipValue::new(ln_num.exp())?,
                    MembershipValue::new(ln_den.exp())?,
                    ln_num,
                    ln_den,
                ))
            }
            None => sample_function(id, &self.family.member(t)?, &self.from, &self.to),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Objective {
    /// Maximize the ratio.
    MaxRatio,
    /// Minimize `|ratio - 1|`.
    UnitRatio,
}

/// `|F(to)/F(from) - 1|`, or `None` for infinite or excluded ratios.
pub(crate) fn unit_residual(s: &RatioSample) -> Option<f64> {
    match s.ratio {
        Ratio::Value(_) => {
            let ln = s.ln_numerator - s.ln_denominator;
            Some(if ln == f64::NEG_INFINITY { 1.0 } else { ln.exp_m1().abs() })
        }
        Ratio::Infinite | Ratio::Excluded => None,
    }
}

impl Objective {
    fn score(self, s: &RatioSample) -> Option<f64> {
        match self {
            Objective::MaxRatio => s.ln_ratio(),
            Objective::UnitRatio => unit_residual(s).map(|r| -r),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Candidate {
    pub t: f64,
    pub sample: RatioSample,
    pub score: f64,
    pub bracket: (f64, f64),
    pub touches_low: bool,
    pub touches_high: bool,
}

impl Candidate {
    fn beats(&self, other: &Candidate) -> bool {
        self.score > other.score || (self.score == other.score && self.t < other.t)
    }
}

fn keep_better(best: &mut Option<Candidate>, c: Candidate) {
    if best.as_ref().is_none_or(|b| c.beats(b)) {
        *best = Some(c);
    }
}

fn grid(window: ParamWindow, domain: &ParamDomain, n: usize) -> Vec<f64> {
    let (lo, hi) = (window.low, window.high);
    let log = lo > 0.0 && hi / lo >= 100.0;
    let last = (n - 1) as f64;
    let mut g: Vec<f64> = (0..n)
        .map(|i| {
            let f = i as f64 / last;
            if log {
                (lo.ln() + f * (hi.ln() - lo.ln())).exp()
            } else {
                lo + f * (hi - lo)
            }
        })
        .collect();
    g[0] = lo;
    g[n - 1] = hi;
    if !domain.contains(g[0]) {
        g[0] = 0.5 * (g[0] + g[1]);
    }
    if !domain.contains(g[n - 1]) {
        g[n - 1] = 0.5 * (g[n - 2] + g[n - 1]);
    }
    g.retain(|t| domain.contains(*t));
    g
}

pub(crate) fn search_window(
    eval: &PairEvaluator<'_>,
    window: ParamWindow,
    cfg: &SearchConfig,
    objective: Objective,
) -> Result<Option<Candidate>> {
    let g = grid(window, &eval.domain(), cfg.resolution);
    if g.is_empty() {
        return Ok(None);
    }
    let samples = g
        .par_iter()
        .map(|t| eval.sample(*t))
        .collect::<Result<Vec<_>>>()?;
    let scores: Vec<Option<f64>> = samples.iter().map(|s| objective.score(s)).collect();
    // Optima in an end cell count as on the edge: refinement there is
    // limited by rounding in the log-ratio, not by the bracket.
    let (inner_low, inner_high) = if g.len() > 1 { (g[1], g[g.len() - 2]) } else { (g[0], g[0]) };

    if let Some(i) = scores.iter().position(|s| *s == Some(f64::INFINITY)) {
        return Ok(Some(Candidate {
            t: g[i],
            sample: samples[i],
            score: f64::INFINITY,
            bracket: (g[i], g[i]),
            touches_low: false,
            touches_high: false,
        }));
    }

    let mut order: Vec<usize> = (0..g.len()).filter(|&i| scores[i].is_some()).collect();
    order.sort_by(|&a, &b| {
        scores[b]
            .partial_cmp(&scores[a])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });

    let mut best: Option<Candidate> = None;
    for &i in order.iter().take(cfg.top_cells) {
        let c = refine(eval, &g, i, samples[i], scores[i].unwrap_or(f64::NAN), cfg, objective)?;
        keep_better(&mut best, c);
    }
    Ok(best.map(|mut c| {
        c.touches_low = c.t < inner_low || c.bracket.0 <= g[0];
        c.touches_high = c.t > inner_high || c.bracket.1 >= g[g.len() - 1];
        c
    }))
}

/// Halves a bracket around the incumbent until it is narrower than
/// `param_tol`, never leaving the cell `[g[i-1], g[i+1]]`.
fn refine(
    eval: &PairEvaluator<'_>,
    g: &[f64],
    i: usize,
    sample: RatioSample,
    score: f64,
    cfg: &SearchConfig,
    objective: Objective,
) -> Result<Candidate> {
    let a = if i > 0 { g[i - 1] } else { g[i] };
    let b = if i + 1 < g.len() { g[i + 1] } else { g[i] };
    let mut best = Candidate {
        t: g[i],
        sample,
        score,
        bracket: (a, b),
        touches_low: false,
        touches_high: false,
    };
    let mut h = (g[i] - a).max(b - g[i]);
    for _ in 0..MAX_REFINE_STEPS {
        if 2.0 * h <= cfg.param_tol || h == 0.0 {
            break;
        }
        let x = best.t;
        for t in [x - h, x - 0.5 * h, x + 0.5 * h, x + h] {
            let t = t.clamp(a, b);
            if t == x {
                continue;
            }
            let s = eval.sample(t)?;
            if let Some(sc) = objective.score(&s) {
                let c = Candidate {
                    t,
                    sample: s,
                    score: sc,
                    ..best
                };
                if c.beats(&best) {
                    best = c;
                }
            }
        }
        h *= 0.5;
    }
    best.bracket = ((best.t - h).max(a), (best.t + h).min(b));
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Side {
    Low,
    High,
}

pub(crate) fn edge_side(c: &Candidate, window: ParamWindow, domain: &ParamDomain) -> Option<Side> {
    if c.touches_low && window.low > domain.low {
        Some(Side::Low)
    } else if c.touches_high && window.high < domain.high {
        Some(Side::High)
    } else {
        None
    }
}

pub(crate) fn expand(window: ParamWindow, domain: &ParamDomain, side: Side, factor: f64) -> ParamWindow {
    let ParamWindow { low, high } = window;
    match side {
        Side::Low => {
            let new_low = if domain.low.is_infinite() {
                high - (high - low) * factor
            } else if domain.open_low {
                domain.low + (low - domain.low) / factor
            } else {
                domain.low
            };
            ParamWindow { low: new_low, high }
        }
        Side::High => {
            let new_high = if domain.high.is_infinite() {
                low + (high - low) * factor
            } else if domain.open_high {
                domain.high - (domain.high - high) / factor
            } else {
                domain.high
            };
            ParamWindow { low, high: new_high }
        }
    }
}

/// Whether the sequence of log-growths between expansions has settled,
/// either directly or by a geometric tail estimate.
fn converged(growths: &[f64], rel_tol: f64) -> bool {
    let tol = rel_tol.ln_1p();
    let Some(&g) = growths.last() else {
        return false;
    };
    if g <= tol {
        return true;
    }
    if growths.len() >= 2 {
        let prev = growths[growths.len() - 2];
        if prev > 0.0 && g < prev {
            let q = g / prev;
            return g * q / (1.0 - q) <= tol;
        }
    }
    false
}

fn parametric(fam: &MembershipFamily) -> Result<&ParametricFamily> {
    match fam {
        MembershipFamily::Parametric(p) => Ok(p),
        MembershipFamily::Finite(_) => Err(FuzzyError::MethodNotApplicable {
            method: "grid",
            reason: "finite families are enumerated",
        }),
    }
}

fn finite_from(c: &Candidate) -> FuzzyRate {
    FuzzyRate::Finite {
        value: c.sample.ratio.to_f64(),
        witness: MemberId::Param(c.t),
        attained: false,
    }
}

/// Numeric supremum over a parametric family.
pub fn rate_parametric(
    fam: &MembershipFamily,
    op: &Operator,
    y: &Point,
    cfg: &SearchConfig,
) -> Result<FuzzyRate> {
    cfg.validate()?;
    let family = parametric(fam)?;
    let domain = family.domain;
    let eval = PairEvaluator::new(family, y.clone(), op.apply(y)?)?;
    let mut window = domain.clip(cfg.window)?;

    let mut probes: Vec<Probe> = Vec::new();
    let mut growths: Vec<f64> = Vec::new();
    let mut best: Option<Candidate> = None;

    for expansion in 0..=cfg.max_expansions {
        let Some(c) = search_window(&eval, window, cfg, Objective::MaxRatio)? else {
            break;
        };
        if c.score == f64::INFINITY {
            return Ok(FuzzyRate::PlusInfinity(DivergenceCertificate::single(
                Probe::from_sample(&c.sample),
            )));
        }
        let probe = Probe::from_sample(&c.sample);
        if let Some(prev) = probes.last() {
            growths.push(probe.ln_ratio - prev.ln_ratio);
        }
        probes.push(probe);
        keep_better(&mut best, c);

        let Some(side) = edge_side(&c, window, &domain) else {
            return Ok(best.as_ref().map_or_else(|| finite_from(&c), finite_from));
        };
        if converged(&growths, cfg.value_rel_tol) {
            return Ok(best.as_ref().map_or_else(|| finite_from(&c), finite_from));
        }
        if expansion == cfg.max_expansions {
            break;
        }
        window = expand(window, &domain, side, cfg.expansion_factor);
    }

    let Some(best) = best else {
        return Ok(FuzzyRate::undefined("all ratios excluded"));
    };
    let ln_growth = cfg.growth_factor.ln();
    if probes.len() >= 3 && growths.iter().all(|g| *g >= ln_growth) {
        return Ok(FuzzyRate::PlusInfinity(DivergenceCertificate::from_probes(probes)));
    }
    Ok(FuzzyRate::Undefined {
        reason: "inconclusive".into(),
        best: Some(Probe::from_sample(&best.sample)),
    })
}

/// A member whose ratio between `from` and `to` is closest to one, with the
/// residual `|ratio - 1|`. Sign changes of the log-ratio are bisected to
/// full precision.
pub(crate) fn unit_ratio_search(
    family: &ParametricFamily,
    from: &Point,
    to: &Point,
    cfg: &SearchConfig,
) -> Result<Option<(f64, RatioSample, f64)>> {
    cfg.validate()?;
    let domain = family.domain;
    let eval = PairEvaluator::new(family, from.clone(), to.clone())?;
    let mut window = domain.clip(cfg.window)?;
    let mut best: Option<Candidate> = None;

    for expansion in 0..=cfg.max_expansions {
        let Some(c) = search_window(&eval, window, cfg, Objective::UnitRatio)? else {
            break;
        };
        let c = polish(&eval, c)?;
        keep_better(&mut best, c);
        if c.score == 0.0 || expansion == cfg.max_expansions {
            break;
        }
        match edge_side(&c, window, &domain) {
            Some(side) => window = expand(window, &domain, side, cfg.expansion_factor),
            None => break,
        }
    }
    Ok(best.map(|c| (c.t, c.sample, -c.score)))
}

fn signed_ln(s: &RatioSample) -> Option<f64> {
    match s.ratio {
        Ratio::Value(_) => Some(s.ln_numerator - s.ln_denominator).filter(|v| v.is_finite()),
        _ => None,
    }
}

fn polish(eval: &PairEvaluator<'_>, c: Candidate) -> Result<Candidate> {
    let mut best = c;
    let (a, b) = c.bracket;
    for (lo, hi) in [(a, c.t), (c.t, b)] {
        if !(lo < hi) {
            continue;
        }
        let (mut lo, mut hi) = (lo, hi);
        let (Some(mut s_lo), Some(s_hi)) = (signed_ln(&eval.sample(lo)?), signed_ln(&eval.sample(hi)?))
        else {
            continue;
        };
        if s_lo.signum() == s_hi.signum() && s_lo != 0.0 && s_hi != 0.0 {
            continue;
        }
        for _ in 0..MAX_REFINE_STEPS {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let s = eval.sample(mid)?;
            let Some(v) = signed_ln(&s) else { break };
            if let Some(r) = unit_residual(&s) {
                let cand = Candidate {
                    t: mid,
                    sample: s,
                    score: -r,
                    ..best
                };
                if cand.beats(&best) {
                    best = cand;
                }
            }
            if v == 0.0 {
                break;
            }
            if v.signum() == s_lo.signum() {
                lo = mid;
                s_lo = v;
            } else {
                hi = mid;
            }
        }
    }
    Ok(best)
}
