mod example;
mod orbit;
mod qfp;
mod rate;
mod sweep;
mod verify;

use std::io::Write;
use std::path::Path;

use anyhow::Result;
use fuzzrate_core::defs::{parse_family, parse_operator, parse_point};
use fuzzrate_core::membership::MembershipFamily;
use fuzzrate_core::operators::Operator;
use fuzzrate_core::Point;

use crate::args::{Cli, Command, Problem};
use crate::output;

pub const EXIT_OK: u8 = 0;
pub const EXIT_INVALID: u8 = 1;
pub const EXIT_UNDEFINED: u8 = 2;
pub const EXIT_CHECK_FAILED: u8 = 3;

pub struct Ctx<'a> {
    pub json: bool,
    pub out: Option<&'a Path>,
    pub seed: u64,
}

impl Ctx<'_> {
    pub fn sink(&self) -> Result<Box<dyn Write>> {
        output::sink(self.out)
    }
}

pub struct Parsed {
    pub family: MembershipFamily,
    pub op: Operator,
    pub point: Point,
}

impl Problem {
    /// Parses every definition before any computation starts.
    pub fn parse(&self) -> Result<Parsed> {
        Ok(Parsed {
            family: parse_family(&self.family)?,
            op: parse_operator(&self.op)?,
            point: parse_point(&self.point)?,
        })
    }
}

pub fn run(cli: &Cli) -> Result<u8> {
    let ctx = Ctx {
        json: cli.json,
        out: cli.out.as_deref(),
        seed: cli.seed,
    };
    match &cli.command {
        Command::Rate(a) => rate::run(&ctx, a),
        Command::Orbit(a) => orbit::run(&ctx, a),
        Command::Qfp(a) => qfp::run(&ctx, a),
        Command::Verify(a) => verify::run(&ctx, a),
        Command::Sweep(a) => sweep::run(&ctx, a),
        Command::Example(a) => example::run(&ctx, a),
    }
}
