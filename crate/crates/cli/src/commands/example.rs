//! The worked conic example: three membership values, one ratio and two
//! rates, each checked against its closed form.

use anyhow::{bail, Result};
use fuzzrate_core::extended::ext_f64;
use fuzzrate_core::membership::{conic_membership, ConicMembership, MembershipFamily};
use fuzzrate_core::operators::Operator;
use fuzzrate_core::rate_engine::{rate, rate_conic_closed_form, FuzzyRate, RateMethod, SearchConfig};
use fuzzrate_core::Point;
use serde::{Deserialize, Serialize};

use super::{Ctx, EXIT_CHECK_FAILED, EXIT_OK};
use crate::args::{ExampleArgs, ExampleMethod};
use crate::output;

const CLOSED_TOL: f64 = 1e-9;
const GRID_TOL: f64 = 1e-4;

#[derive(Debug, Serialize, Deserialize)]
pub struct ExampleItem {
    pub name: String,
    #[serde(with = "ext_f64")]
    pub expected: f64,
    #[serde(with = "ext_f64")]
    pub got: f64,
    pub tolerance: f64,
    pub pass: bool,
}

fn item(name: &str, expected: f64, got: f64, tolerance: f64) -> ExampleItem {
    let pass = if expected.is_infinite() || expected == 0.0 {
        got == expected
    } else {
        ((got - expected) / expected).abs() <= tolerance
    };
    ExampleItem {
        name: name.into(),
        expected,
        got,
        tolerance,
        pass,
    }
}

fn rate_value(r: &FuzzyRate) -> f64 {
    r.extended().map_or(f64::NAN, |e| e.to_f64())
}

pub fn run(ctx: &Ctx, args: &ExampleArgs) -> Result<u8> {
    let r = args.r;
    if !(r > 0.0 && r.is_finite()) {
        bail!("invalid `r`: must be positive");
    }
    let b = 2f64.sqrt();
    let f = ConicMembership::new(1.0, r)?;
    let at = |x: f64, y: f64| -> Result<f64> { Ok(conic_membership(&f, &Point::xy(x, y)?)?.get()) };
    let y = Point::xy(0.0, r)?;
    let ratio = at(0.0, b * r)? / at(0.0, r)?;

    let (rate_sqrt2, rate_half, tol) = match args.method {
        ExampleMethod::Closed => (
            rate_conic_closed_form(b, r)?,
            rate_conic_closed_form(0.5, r)?,
            CLOSED_TOL,
        ),
        ExampleMethod::Grid => {
            let fam = MembershipFamily::conic(r)?;
            let cfg = SearchConfig::default();
            (
                rate(&fam, &Operator::diag(&[1.0, b])?, &y, RateMethod::Grid, &cfg)?,
                rate(&fam, &Operator::diag(&[1.0, 0.5])?, &y, RateMethod::Grid, &cfg)?,
                GRID_TOL,
            )
        }
    };

    let items = vec![
        item("F(0, r) = 1", 1.0, at(0.0, r)?, CLOSED_TOL),
        item(
            "F(r/√2, r/√6) = e^-4",
            (-4.0f64).exp(),
            at(r / 2f64.sqrt(), r / 6f64.sqrt())?,
            CLOSED_TOL,
        ),
        item("F(r, r) = 0", 0.0, at(r, r)?, CLOSED_TOL),
        item("ratio at (0, r), b = √2: e^-1/4", (-0.25f64).exp(), ratio, CLOSED_TOL),
        item("rate, b = √2: e^3/4", 0.75f64.exp(), rate_value(&rate_sqrt2), tol),
        item("rate, b = 1/2: inf", f64::INFINITY, rate_value(&rate_half), tol),
    ];
    let passed = items.iter().filter(|i| i.pass).count();

    let mut w = ctx.sink()?;
    if ctx.json {
        output::write_json(&mut *w, &items)?;
    } else {
        for i in &items {
            writeln!(
                w,
                "{}  {:<34} got {}",
                if i.pass { "PASS" } else { "FAIL" },
                i.name,
                output::sig(i.got)
            )?;
        }
        writeln!(w, "{passed}/{} PASS", items.len())?;
    }
    Ok(if passed == items.len() { EXIT_OK } else { EXIT_CHECK_FAILED })
}
