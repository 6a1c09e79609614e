use anyhow::{bail, Result};
use fuzzrate_core::membership::{ConicMembership, MembershipFamily};
use fuzzrate_core::operators::Operator;
use fuzzrate_core::rate_engine::{rate, rate_conic_closed_form, FuzzyRate, Ratio, RateMethod};
use fuzzrate_core::Point;
use serde::{Deserialize, Serialize};

use super::{Ctx, EXIT_OK};
use crate::args::{MethodArg, SweepArgs, SweepVar};
use crate::output;

#[derive(Debug, Serialize, Deserialize)]
pub struct SweepRow {
    pub x: f64,
    pub value: Option<f64>,
    pub outcome: String,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct SweepOutput {
    pub variable: String,
    pub rows: Vec<SweepRow>,
}

fn samples(args: &SweepArgs) -> Result<Vec<f64>> {
    let (a, b, n) = (args.from, args.to, args.samples);
    if !(a.is_finite() && b.is_finite()) || a > b || n == 0 {
        bail!("invalid range: need finite --from ≤ --to and --samples ≥ 1");
    }
    if args.log && a <= 0.0 {
        bail!("invalid range: --log needs --from > 0");
    }
    if n == 1 {
        return Ok(vec![a]);
    }
    let last = (n - 1) as f64;
    Ok((0..n)
        .map(|i| {
            let f = i as f64 / last;
            match (i, args.log) {
                (0, _) => a,
                (i, _) if i == n - 1 => b,
                (_, true) => (a.ln() + f * (b.ln() - a.ln())).exp(),
                (_, false) => a + f * (b - a),
            }
        })
        .collect())
}

fn rate_row(x: f64, r: &FuzzyRate) -> SweepRow {
    let (value, outcome) = match r {
        FuzzyRate::Finite { value, .. } => (Some(*value), "finite"),
        FuzzyRate::PlusInfinity(_) => (None, "inf"),
        FuzzyRate::Undefined { .. } => (None, "undefined"),
    };
    SweepRow {
        x,
        value,
        outcome: outcome.into(),
    }
}

pub fn run(ctx: &Ctx, args: &SweepArgs) -> Result<u8> {
    let xs = samples(args)?;
    let cfg = args.search.config();
    cfg.validate()?;
    let r = args.r;
    let y = Point::xy(0.0, r)?;
    let mut rows = Vec::with_capacity(xs.len());
    match args.var {
        SweepVar::B => {
            if xs.contains(&0.0) || (args.from < 0.0 && args.to > 0.0 && !args.log) {
                bail!("invalid range: b = 0 is not allowed");
            }
            let fam = MembershipFamily::conic(r)?;
            for b in xs {
                let rate = match args.search.method {
                    MethodArg::Closed => rate_conic_closed_form(b, r)?,
                    m => {
                        let method = if m == MethodArg::Grid { RateMethod::Grid } else { RateMethod::Auto };
                        rate(&fam, &Operator::diag(&[1.0, b])?, &y, method, &cfg)?
                    }
                };
                rows.push(rate_row(b, &rate));
            }
        }
        SweepVar::Mu => {
            if args.from <= 0.0 {
                bail!("invalid range: mu must be positive");
            }
            let by = Point::xy(0.0, args.b * r)?;
            for mu in xs {
                let f = ConicMembership::new(mu, r)?;
                let (ln_num, ln_den) = (f.ln_value(&by)?, f.ln_value(&y)?);
                let ratio = if ln_den == f64::NEG_INFINITY {
                    if ln_num == f64::NEG_INFINITY { Ratio::Excluded } else { Ratio::Infinite }
                } else {
                    Ratio::Value((ln_num - ln_den).exp())
                };
                let (value, outcome) = match ratio {
                    Ratio::Value(v) => (Some(v), "finite"),
                    Ratio::Infinite => (None, "inf"),
                    Ratio::Excluded => (None, "excluded"),
                };
                rows.push(SweepRow {
                    x: mu,
                    value,
                    outcome: outcome.into(),
                });
            }
        }
    }
    let variable = match args.var {
        SweepVar::B => "b",
        SweepVar::Mu => "mu",
    };
    let out = SweepOutput {
        variable: variable.into(),
        rows,
    };

    let mut w = ctx.sink()?;
    if ctx.json {
        output::write_json(&mut *w, &out)?;
    } else {
        let mut csv = csv::Writer::from_writer(&mut *w);
        csv.write_record([variable, "value", "outcome"])?;
        for row in &out.rows {
            csv.write_record([
                row.x.to_string(),
                row.value.map(|v| v.to_string()).unwrap_or_default(),
                row.outcome.clone(),
            ])?;
        }
        csv.flush()?;
    }
    Ok(EXIT_OK)
}
