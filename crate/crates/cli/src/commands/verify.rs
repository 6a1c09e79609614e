use anyhow::{bail, Result};
use fuzzrate_core::property_suite::{run_properties, Property};

use super::{Ctx, EXIT_CHECK_FAILED, EXIT_OK};
use crate::args::VerifyArgs;
use crate::output;

pub fn run(ctx: &Ctx, args: &VerifyArgs) -> Result<u8> {
    if args.trials == 0 {
        bail!("invalid `trials`: must be at least 1");
    }
    let properties = if args.properties.is_empty() {
        Property::ALL.to_vec()
    } else {
        args.properties
            .iter()
            .map(|s| s.parse::<Property>())
            .collect::<Result<Vec<_>, _>>()?
    };
    let report = run_properties(ctx.seed, args.trials, &properties)?;

    let mut w = ctx.sink()?;
    if ctx.json {
        output::write_json(&mut *w, &report)?;
    } else {
        writeln!(w, "seed {}, {} trials per property", report.seed, report.trials)?;
        for c in &report.checks {
            writeln!(
                w,
                "{:<6} {}  {} failures, {} skipped  {}",
                c.property_id.id(),
                if c.passed { "PASS" } else { "FAIL" },
                c.failures.len(),
                c.skipped,
                c.tested_form
            )?;
            for f in &c.failures {
                writeln!(w, "  counterexample: {}", serde_json::to_string(f)?)?;
            }
        }
    }
    Ok(if report.passed { EXIT_OK } else { EXIT_CHECK_FAILED })
}
