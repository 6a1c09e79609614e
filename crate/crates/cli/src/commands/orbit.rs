use anyhow::{bail, Result};
use fuzzrate_core::dynamics::{
    check_uniform_lower_bound, orbit_with, step_rate_convergence, BoundStatus, OrbitReport,
};
use fuzzrate_core::extended::ExtendedReal;
use fuzzrate_core::rate_engine::FuzzyRate;
use fuzzrate_core::Point;
use serde::{Deserialize, Serialize};

use super::{Ctx, EXIT_OK};
use crate::args::{Emit, OrbitArgs};
use crate::output;

#[derive(Debug, Serialize, Deserialize)]
pub struct OrbitOutput {
    #[serde(flatten)]
    pub report: OrbitReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub uniform_lower_bound: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub converged_from_step: Option<Option<usize>>,
}

fn csv_point(p: &Point) -> String {
    let c: Vec<String> = p.coords().iter().map(|x| x.to_string()).collect();
    c.join(";")
}

fn csv_rate(r: &FuzzyRate) -> String {
    csv_ext(r.extended())
}

fn csv_ext(v: Option<ExtendedReal>) -> String {
    match v {
        Some(ExtendedReal::Finite(x)) => x.to_string(),
        Some(ExtendedReal::Infinite) => "inf".into(),
        None => "undefined".into(),
    }
}

fn csv_bound(b: BoundStatus) -> &'static str {
    match b {
        BoundStatus::Ok => "true",
        BoundStatus::Violated => "false",
        BoundStatus::Skipped => "skipped",
    }
}

pub fn run(ctx: &Ctx, args: &OrbitArgs) -> Result<u8> {
    let p = args.problem.parse()?;
    if args.steps == 0 {
        bail!("invalid `steps`: must be at least 1");
    }
    if let Some(d) = args.delta {
        if !(d > 0.0 && d <= 1.0) {
            bail!("invalid `delta`: must lie in (0, 1]");
        }
    }
    if let Some(e) = args.eps {
        if !(e > 0.0) {
            bail!("invalid `eps`: must be positive");
        }
    }
    let cfg = args.search.config();
    cfg.validate()?;
    let report = orbit_with(&p.op, &p.point, args.steps, &p.family, args.search.method.into(), &cfg)?;
    let out = OrbitOutput {
        uniform_lower_bound: args
            .delta
            .map(|d| check_uniform_lower_bound(&report, d, args.from_step)),
        converged_from_step: args.eps.map(|e| step_rate_convergence(&report, e)),
        report,
    };

    let mut w = ctx.sink()?;
    let emit = if ctx.json { Emit::Json } else { args.emit };
    match emit {
        Emit::Json => output::write_json(&mut *w, &out)?,
        Emit::Csv => {
            let r = &out.report;
            let mut csv = csv::Writer::from_writer(&mut *w);
            csv.write_record(["k", "point", "step_rate", "n_step_rate", "product_bound", "bound_ok"])?;
            csv.write_record(["0", &csv_point(&r.points[0]), "", "", "", ""])?;
            for i in 0..r.steps() {
                csv.write_record([
                    (i + 1).to_string(),
                    csv_point(&r.points[i + 1]),
                    csv_rate(&r.step_rates[i]),
                    csv_rate(&r.n_step_rates[i]),
                    csv_ext(r.product_bounds[i]),
                    csv_bound(r.bound_satisfied[i]).to_string(),
                ])?;
            }
            csv.flush()?;
        }
        Emit::Table => {
            let r = &out.report;
            writeln!(
                w,
                "{:>3}  {:<24} {:>12} {:>12} {:>12}  bound",
                "k", "point", "step rate", "n-step rate", "product"
            )?;
            writeln!(w, "{:>3}  {:<24}", 0, output::point(&r.points[0]))?;
            for i in 0..r.steps() {
                writeln!(
                    w,
                    "{:>3}  {:<24} {:>12} {:>12} {:>12}  {}",
                    i + 1,
                    output::point(&r.points[i + 1]),
                    output::ext_sig(r.step_rates[i].extended()),
                    output::ext_sig(r.n_step_rates[i].extended()),
                    output::ext_sig(r.product_bounds[i]),
                    csv_bound(r.bound_satisfied[i]).replace("true", "ok").replace("false", "VIOLATED"),
                )?;
            }
            if let (Some(d), Some(ok)) = (args.delta, out.uniform_lower_bound) {
                writeln!(w, "‖Bᵏ‖_y ≥ {} for k ≥ {}: {}", output::sig(d), args.from_step, if ok { "yes" } else { "no" })?;
            }
            if let (Some(e), Some(k)) = (args.eps, out.converged_from_step) {
                match k {
                    Some(k) => writeln!(w, "step rates within {} of 1 from step {k}", output::sig(e))?,
                    None => writeln!(w, "step rates do not settle within {} of 1", output::sig(e))?,
                }
            }
        }
    }
    Ok(EXIT_OK)
}
