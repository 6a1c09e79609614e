use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use anyhow::{Context, Result};
use fuzzrate_core::extended::ExtendedReal;
use fuzzrate_core::membership::MemberId;
use fuzzrate_core::rate_engine::FuzzyRate;
use fuzzrate_core::Point;

pub fn sink(out: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(File::create(p).with_context(|| format!("cannot create {}", p.display()))?),
        None => Box::new(io::stdout().lock()),
    })
}

pub fn write_json<T: serde::Serialize>(w: &mut dyn Write, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut *w, value)?;
    writeln!(w)?;
    Ok(())
}

/// Six significant digits.
pub fn sig(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return match v {
            f64::INFINITY => "inf".into(),
            f64::NEG_INFINITY => "-inf".into(),
            _ => format!("{v}"),
        };
    }
    let exp = v.abs().log10().floor() as i32;
    if (-4..5).contains(&exp) {
        format!("{:.*}", (5 - exp) as usize, v)
    } else {
        format!("{v:.5e}")
    }
}

pub fn ext_sig(v: Option<ExtendedReal>) -> String {
    match v {
        Some(ExtendedReal::Finite(x)) => sig(x),
        Some(ExtendedReal::Infinite) => "inf".into(),
        None => "undefined".into(),
    }
}

pub fn member(id: MemberId) -> String {
    match id {
        MemberId::Index(i) => format!("member #{i}"),
        MemberId::Param(t) => format!("mu = {}", sig(t)),
    }
}

pub fn point(p: &Point) -> String {
    let c: Vec<String> = p.coords().iter().map(|x| sig(*x)).collect();
    format!("({})", c.join(", "))
}

pub fn rate_lines(r: &FuzzyRate) -> Vec<String> {
    match r {
        FuzzyRate::Finite {
            value,
            witness,
            attained,
        } => vec![
            format!("rate      {}", sig(*value)),
            format!("witness   {}", member(*witness)),
            format!(
                "attained  {}",
                if *attained { "yes" } else { "no (supremum approached)" }
            ),
        ],
        FuzzyRate::PlusInfinity(cert) => {
            let mut lines = vec![
                "rate      inf".to_string(),
                format!(
                    "certificate: {} probe(s), growth factor {}",
                    cert.probes.len(),
                    sig(cert.growth_factor)
                ),
            ];
            for p in &cert.probes {
                lines.push(format!(
                    "  {:<18} ratio {} (ln {})",
                    member(p.witness),
                    sig(p.ratio),
                    sig(p.ln_ratio)
                ));
            }
            lines
        }
        FuzzyRate::Undefined { reason, best } => {
            let mut lines = vec![format!("rate      undefined ({reason})")];
            if let Some(p) = best {
                lines.push(format!("best      {} ratio {}", member(p.witness), sig(p.ratio)));
            }
            lines
        }
    }
}
