use anyhow::{bail, Result};
use fuzzrate_core::dynamics::{certify_fixed_point, quasi_fixed_search, FixedPointCertificate, QuasiFixedFinding};
use serde::{Deserialize, Serialize};

use super::{Ctx, EXIT_OK, EXIT_UNDEFINED};
use crate::args::QfpArgs;
use crate::output;

#[derive(Debug, Serialize, Deserialize)]
pub struct QfpOutput {
    pub step: usize,
    pub eps: f64,
    pub finding: Option<QuasiFixedFinding>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<FixedPointCertificate>,
}

pub fn run(ctx: &Ctx, args: &QfpArgs) -> Result<u8> {
    let p = args.problem.parse()?;
    if args.steps == 0 {
        bail!("invalid `steps`: must be at least 1");
    }
    if !(args.eps > 0.0) {
        bail!("invalid `eps`: must be positive");
    }
    if !(args.tol > 0.0) {
        bail!("invalid `tol`: must be positive");
    }
    let cfg = args.search.config();
    cfg.validate()?;
    let finding = quasi_fixed_search(&p.op, &p.point, &p.family, args.steps, args.eps, &cfg)?;
    let certificate = match (&finding, args.certify) {
        (Some(f), true) => Some(certify_fixed_point(&p.op, &p.point, args.steps, f, &p.family, args.tol)?),
        _ => None,
    };
    let out = QfpOutput {
        step: args.steps,
        eps: args.eps,
        finding,
        certificate,
    };

    let mut w = ctx.sink()?;
    if ctx.json {
        output::write_json(&mut *w, &out)?;
    } else {
        match &out.finding {
            None => writeln!(w, "no member within {} of ratio 1 at step {}", output::sig(args.eps), args.steps)?,
            Some(f) => {
                writeln!(w, "quasi-fixed at step {}", f.step)?;
                writeln!(w, "witness   {}", output::member(f.witness))?;
                writeln!(w, "residual  {}{}", output::sig(f.ratio_residual), if f.exact { " (exact)" } else { "" })?;
            }
        }
        if let Some(c) = &out.certificate {
            writeln!(w, "candidate {}", output::point(&c.candidate))?;
            writeln!(w, "injective {}", if c.injective_declared { "declared" } else { "not declared" })?;
            writeln!(w, "operator residual {}", output::sig(c.operator_residual))?;
            writeln!(w, "certified {}", if c.certified { "yes" } else { "no" })?;
            for r in &c.reasons {
                writeln!(w, "  - {r}")?;
            }
        }
    }
    Ok(if out.finding.is_some() { EXIT_OK } else { EXIT_UNDEFINED })
}
