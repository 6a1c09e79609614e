use anyhow::Result;
use fuzzrate_core::rate_engine::rate;

use super::{Ctx, EXIT_OK, EXIT_UNDEFINED};
use crate::args::RateArgs;
use crate::output;

pub fn run(ctx: &Ctx, args: &RateArgs) -> Result<u8> {
    let p = args.problem.parse()?;
    let cfg = args.search.config();
    cfg.validate()?;
    let r = rate(&p.family, &p.op, &p.point, args.search.method.into(), &cfg)?;

    let mut w = ctx.sink()?;
    if ctx.json {
        output::write_json(&mut *w, &r)?;
    } else {
        writeln!(w, "operator  {} at {}", p.op.label(), output::point(&p.point))?;
        for line in output::rate_lines(&r) {
            writeln!(w, "{line}")?;
        }
    }
    Ok(if r.is_undefined() { EXIT_UNDEFINED } else { EXIT_OK })
}
