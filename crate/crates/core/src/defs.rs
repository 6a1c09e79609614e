//! Families, operators and points from text.
//!
//! Each definition is either a shorthand, inline JSON, or a path to a JSON
//! file.
//!
//! Shorthands:
//!
//! | kind     | form                                   |
//! |----------|----------------------------------------|
//! | family   | `conic:r=<v>` or `conic:r=<v>,mu=<v>`  |
//! | operator | `identity`, `diag:<a>,<b>,…`, `rot:<radians>`, `proj:<axis>[,<dim>]` |
//! | point    | `<x>,<y>,…`                            |
//!
//! JSON functions are objects tagged by `"type"`: `conic` (`mu`, `r`),
//! `finite` (`entries: [{"point": [...], "value": v}]`), `radial` (`scale`)
//! and `constant` (`value`), each with an optional `injective` flag. A family
//! is a function, an array of functions, or
//! `{"type": "conic_family", "r": 1, "mu_domain": [0, "inf"], "open_low": true}`.
//! JSON operators are tagged `matrix` (`rows`), `diag` (`entries`),
//! `identity`, `affine` (`rows`, `offset`), `power` (`base`, `n`), `compose`
//! (`ops`, applied last to first), `sum` and `difference` (`ops`), `scale`
//! (`factor`, `op`), `rotation` (`angle`) and `projection` (`axis`, `dim`).

use std::path::Path;

use nalgebra::DMatrix;
use serde_json::{Map, Value};

use crate::membership::{MembershipFamily, MembershipFunction, ParamDomain};
use crate::operators::{power, scale, Operator};
use crate::{FuzzyError, Point, Result};

fn err(field: &str, message: impl Into<String>) -> FuzzyError {
    FuzzyError::parse(field, message)
}

fn number(field: &str, s: &str) -> Result<f64> {
    let v: f64 = match s.trim() {
        "inf" | "+inf" => f64::INFINITY,
        "-inf" => f64::NEG_INFINITY,
        t => t
            .parse()
            .map_err(|_| err(field, format!("{t:?} is not a number")))?,
    };
    if v.is_nan() {
        return Err(err(field, "NaN is not allowed"));
    }
    Ok(v)
}

/// Inline JSON, a JSON file, or `None` for anything else.
fn json_source(field: &str, text: &str) -> Result<Option<Value>> {
    let t = text.trim();
    let raw = if t.starts_with('{') || t.starts_with('[') {
        t.to_string()
    } else if Path::new(t).is_file() {
        std::fs::read_to_string(t).map_err(|e| err(field, format!("cannot read {t}: {e}")))?
    } else {
        return Ok(None);
    };
    serde_json::from_str(&raw)
        .map(Some)
        .map_err(|e| err(field, format!("invalid JSON: {e}")))
}

pub fn parse_point(text: &str) -> Result<Point> {
    let t = text.trim().trim_start_matches('(').trim_end_matches(')');
    if t.is_empty() {
        return Err(err("point", "empty"));
    }
    let coords = t
        .split([',', ';'])
        .map(|c| number("point", c))
        .collect::<Result<Vec<_>>>()?;
    Point::new(coords).map_err(|e| err("point", e.to_string()))
}

/// `key=value` pairs after a shorthand's colon.
fn key_values<'a>(field: &str, body: &'a str) -> Result<Vec<(&'a str, &'a str)>> {
    body.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|kv| {
            kv.split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| err(field, format!("expected key=value, found {kv:?}")))
        })
        .collect()
}

pub fn parse_family(text: &str) -> Result<MembershipFamily> {
    if let Some(v) = json_source("family", text)? {
        return family_from_json(&v);
    }
    let t = text.trim();
    let Some(body) = t.strip_prefix("conic:") else {
        return Err(err(
            "family",
            format!("unknown family {t:?}; use conic:r=<v>[,mu=<v>] or a JSON definition"),
        ));
    };
    let mut r = None;
    let mut mu = None;
    for (k, v) in key_values("family", body)? {
        match k {
            "r" => r = Some(number("family.r", v)?),
            "mu" => mu = Some(number("family.mu", v)?),
            _ => return Err(err("family", format!("unknown key {k:?}"))),
        }
    }
    let r = r.ok_or_else(|| err("family.r", "missing"))?;
    let fam = match mu {
        Some(mu) => MembershipFunction::conic(mu, r).and_then(|f| MembershipFamily::finite(vec![f])),
        None => MembershipFamily::conic(r),
    };
    fam.map_err(|e| err("family", e.to_string()))
}

fn object<'a>(field: &str, v: &'a Value) -> Result<&'a Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| err(field, "expected a JSON object"))
}

fn kind<'a>(field: &str, o: &'a Map<String, Value>) -> Result<&'a str> {
    o.get("type")
        .and_then(Value::as_str)
        .ok_or_else(|| err(field, "missing \"type\""))
}

fn get<'a>(field: &str, o: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    o.get(key)
        .ok_or_else(|| err(&format!("{field}.{key}"), "missing"))
}

fn json_f64(field: &str, v: &Value) -> Result<f64> {
    match v {
        Value::Number(n) => n.as_f64().ok_or_else(|| err(field, "not a number")),
        Value::String(s) => number(field, s),
        _ => Err(err(field, "expected a number")),
    }
}

fn f64_at(field: &str, o: &Map<String, Value>, key: &str) -> Result<f64> {
    json_f64(&format!("{field}.{key}"), get(field, o, key)?)
}

fn vec_f64(field: &str, v: &Value) -> Result<Vec<f64>> {
    v.as_array()
        .ok_or_else(|| err(field, "expected an array of numbers"))?
        .iter()
        .map(|x| json_f64(field, x))
        .collect()
}

fn rows(field: &str, v: &Value) -> Result<DMatrix<f64>> {
    let rows = v
        .as_array()
        .ok_or_else(|| err(field, "expected an array of rows"))?
        .iter()
        .map(|r| vec_f64(field, r))
        .collect::<Result<Vec<_>>>()?;
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(err(field, "matrix must be square and nonempty"));
    }
    Ok(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

fn bool_at(field: &str, o: &Map<String, Value>, key: &str) -> Result<Option<bool>> {
    match o.get(key) {
        None => Ok(None),
        Some(Value::Bool(b)) => Ok(Some(*b)),
        Some(_) => Err(err(&format!("{field}.{key}"), "expected true or false")),
    }
}

pub fn function_from_json(v: &Value) -> Result<MembershipFunction> {
    let field = "function";
    let o = object(field, v)?;
    let wrap = |e: FuzzyError| match e {
        FuzzyError::Parse { .. } => e,
        e => err(field, e.to_string()),
    };
    let f = match kind(field, o)? {
        "conic" => MembershipFunction::conic(f64_at(field, o, "mu")?, f64_at(field, o, "r")?),
        "finite" | "table" => {
            let entries = get(field, o, "entries")?
                .as_array()
                .ok_or_else(|| err("function.entries", "expected an array"))?
                .iter()
                .map(|e| {
                    let e = object("function.entries", e)?;
                    let p = Point::new(vec_f64("function.entries.point", get("function.entries", e, "point")?)?)?;
                    Ok((p, f64_at("function.entries", e, "value")?))
                })
                .collect::<Result<Vec<_>>>()
                .map_err(wrap)?;
            MembershipFunction::table_from_values(entries)
        }
        "radial" => MembershipFunction::radial(o.get("scale").map_or(Ok(1.0), |s| json_f64("function.scale", s))?),
        "constant" => MembershipFunction::constant(f64_at(field, o, "value")?),
        other => return Err(err(field, format!("unknown function type {other:?}"))),
    }
    .map_err(wrap)?;
    let f = match o.get("label").and_then(Value::as_str) {
        Some(l) => f.with_label(l),
        None => f,
    };
    Ok(match bool_at(field, o, "injective")? {
        Some(b) => f.with_injective(b),
        None => f,
    })
}

pub fn family_from_json(v: &Value) -> Result<MembershipFamily> {
    let field = "family";
    if let Value::Array(items) = v {
        let members = items.iter().map(function_from_json).collect::<Result<Vec<_>>>()?;
        return MembershipFamily::finite(members).map_err(|e| err(field, e.to_string()));
    }
    let o = object(field, v)?;
    if kind(field, o)? != "conic_family" {
        let f = function_from_json(v)?;
        return MembershipFamily::finite(vec![f]).map_err(|e| err(field, e.to_string()));
    }
    let r = f64_at(field, o, "r")?;
    let domain = match o.get("mu_domain") {
        None => ParamDomain::positive(),
        Some(d) => {
            let bounds = vec_f64("family.mu_domain", d)?;
            let [low, high] = bounds[..] else {
                return Err(err("family.mu_domain", "expected [low, high]"));
            };
            let open_low = bool_at(field, o, "open_low")?.unwrap_or(low == 0.0);
            let open_high = bool_at(field, o, "open_high")?.unwrap_or(high.is_infinite());
            ParamDomain::new(low, high, open_low, open_high)
                .map_err(|e| err("family.mu_domain", e.to_string()))?
        }
    };
    MembershipFamily::conic_on(r, domain).map_err(|e| err(field, e.to_string()))
}

pub fn parse_operator(text: &str) -> Result<Operator> {
    if let Some(v) = json_source("op", text)? {
        return operator_from_json(&v);
    }
    let t = text.trim();
    let wrap = |e: FuzzyError| err("op", e.to_string());
    let (head, body) = t.split_once(':').unwrap_or((t, ""));
    let numbers = || {
        body.split(',')
            .map(|c| number("op", c))
            .collect::<Result<Vec<_>>>()
    };
    match head {
        "identity" | "id" if body.is_empty() => Ok(Operator::identity()),
        "diag" => Operator::diag(&numbers()?).map_err(wrap),
        "rot" => match numbers()?[..] {
            [angle] => Operator::rotation(angle).map_err(wrap),
            _ => Err(err("op", "rot takes one angle in radians")),
        },
        "proj" => {
            let n = numbers()?;
            let as_index = |x: f64| {
                (x >= 0.0 && x.fract() == 0.0)
                    .then_some(x as usize)
                    .ok_or_else(|| err("op", format!("{x} is not an index")))
            };
            let (axis, dim) = match n[..] {
                [a] => (as_index(a)?, 2),
                [a, d] => (as_index(a)?, as_index(d)?),
                _ => return Err(err("op", "proj takes an axis and an optional dimension")),
            };
            Operator::projection(axis, dim).map_err(wrap)
        }
        _ => Err(err(
            "op",
            format!("unknown operator {t:?}; use identity, diag:a,b, rot:<rad>, proj:<axis> or a JSON definition"),
        )),
    }
}

pub fn operator_from_json(v: &Value) -> Result<Operator> {
    let field = "op";
    let o = object(field, v)?;
    let wrap = |e: FuzzyError| match e {
        FuzzyError::Parse { .. } => e,
        e => err(field, e.to_string()),
    };
    let ops = |key: &str| -> Result<Vec<Operator>> {
        get(field, o, key)?
            .as_array()
            .ok_or_else(|| err(&format!("op.{key}"), "expected an array of operators"))?
            .iter()
            .map(operator_from_json)
            .collect()
    };
    let pair = |key: &str| -> Result<(Operator, Operator)> {
        let mut v = ops(key)?;
        if v.len() != 2 {
            return Err(err(&format!("op.{key}"), "expected two operators"));
        }
        let b = v.pop().unwrap_or_else(Operator::identity);
        let a = v.pop().unwrap_or_else(Operator::identity);
        Ok((a, b))
    };
    match kind(field, o)? {
        "identity" => Ok(Operator::identity()),
        "zero" => Ok(Operator::zero()),
        "matrix" => Operator::matrix(rows("op.rows", get(field, o, "rows")?)?).map_err(wrap),
        "diag" => Operator::diag(&vec_f64("op.entries", get(field, o, "entries")?)?).map_err(wrap),
        "affine" => Operator::affine(
            rows("op.rows", get(field, o, "rows")?)?,
            vec_f64("op.offset", get(field, o, "offset")?)?,
        )
        .map_err(wrap),
        "rotation" => Operator::rotation(f64_at(field, o, "angle")?).map_err(wrap),
        "projection" => {
            let idx = |key: &str| -> Result<usize> {
                get(field, o, key)?
                    .as_u64()
                    .map(|n| n as usize)
                    .ok_or_else(|| err(&format!("op.{key}"), "expected a nonnegative integer"))
            };
            let dim = if o.contains_key("dim") { idx("dim")? } else { 2 };
            Operator::projection(idx("axis")?, dim).map_err(wrap)
        }
        "power" => {
            let base = operator_from_json(get(field, o, "base")?)?;
            let n = get(field, o, "n")?
                .as_u64()
                .and_then(|n| u32::try_from(n).ok())
                .ok_or_else(|| err("op.n", "expected a nonnegative integer"))?;
            Ok(power(&base, n))
        }
        "compose" => Operator::composition(ops("ops")?).map_err(wrap),
        "sum" => {
            let (a, b) = pair("ops")?;
            Operator::sum(a, b).map_err(wrap)
        }
        "difference" => {
            let (a, b) = pair("ops")?;
            Operator::difference(a, b).map_err(wrap)
        }
        "scale" => {
            let inner = operator_from_json(get(field, o, "op")?)?;
            scale(&inner, f64_at(field, o, "factor")?).map_err(wrap)
        }
        other => Err(err(field, format!("unknown operator type {other:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::membership::{MemberId, MembershipValue};

    fn field_of(e: FuzzyError) -> String {
        match e {
            FuzzyError::Parse { field, .. } => field,
            other => panic!("not a parse error: {other:?}"),
        }
    }

    #[test]
    fn points() {
        assert_eq!(parse_point("0,1").unwrap(), Point::xy(0.0, 1.0).unwrap());
        assert_eq!(parse_point("(3; 5)").unwrap(), Point::xy(3.0, 5.0).unwrap());
        assert_eq!(field_of(parse_point("1,x").unwrap_err()), "point");
        assert_eq!(field_of(parse_point("").unwrap_err()), "point");
        assert_eq!(field_of(parse_point("1,inf").unwrap_err()), "point");
    }

    #[test]
    fn family_shorthand() {
        let fam = parse_family("conic:r=2").unwrap();
        assert_eq!(fam.conic_radius(), Some(2.0));
        assert_eq!(fam.domain(), Some(ParamDomain::positive()));
        let single = parse_family("conic:r=1,mu=0.5").unwrap();
        let f = single.member(MemberId::Index(0)).unwrap();
        assert_eq!(f.evaluate(&Point::xy(0.0, 1.0).unwrap()).unwrap().get(), (-0.25f64).exp());
        assert_eq!(field_of(parse_family("conic:mu=1").unwrap_err()), "family.r");
        assert_eq!(field_of(parse_family("conic:r=-1").unwrap_err()), "family");
        assert_eq!(field_of(parse_family("blob").unwrap_err()), "family");
    }

    #[test]
    fn family_json() {
        let fam = parse_family(
            r#"[{"type":"finite","entries":[{"point":[1,0],"value":0.5}],"injective":true},
                {"type":"radial","scale":2},{"type":"constant","value":0.7},
                {"type":"conic","mu":1,"r":1}]"#,
        )
        .unwrap();
        let MembershipFamily::Finite(m) = &fam else { panic!() };
        assert_eq!(m.len(), 4);
        assert_eq!(m[0].injective(), Some(true));
        assert_eq!(
            m[0].evaluate(&Point::xy(1.0, 0.0).unwrap()).unwrap(),
            MembershipValue::new(0.5).unwrap()
        );
        let conic = parse_family(r#"{"type":"conic_family","r":1,"mu_domain":[0.5,"inf"]}"#).unwrap();
        let d = conic.domain().unwrap();
        assert_eq!((d.low, d.high, d.open_low, d.open_high), (0.5, f64::INFINITY, false, true));
        assert!(parse_family(r#"{"type":"conic_family","r":1,"mu_domain":[0,1],"open_low":false}"#).is_err());
        assert_eq!(field_of(parse_family("[").unwrap_err()), "family");
        assert_eq!(field_of(parse_family(r#"{"type":"conic","r":1}"#).unwrap_err()), "function.mu");
    }

    #[test]
    fn family_file() {
        let dir = std::env::temp_dir().join(format!("fuzzrate-defs-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("fam.json");
        std::fs::write(&path, r#"{"type":"constant","value":0.25}"#).unwrap();
        let fam = parse_family(path.to_str().unwrap()).unwrap();
        assert!(matches!(fam, MembershipFamily::Finite(ref m) if m.len() == 1));
        std::fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn operator_shorthand() {
        let p = Point::xy(3.0, 5.0).unwrap();
        assert_eq!(parse_operator("identity").unwrap().apply(&p).unwrap(), p);
        assert_eq!(parse_operator("diag:1,2").unwrap().apply(&p).unwrap(), Point::xy(3.0, 10.0).unwrap());
        assert_eq!(parse_operator("proj:0").unwrap().apply(&p).unwrap(), Point::xy(3.0, 0.0).unwrap());
        let r = parse_operator("rot:1.5707963267948966").unwrap().apply(&p).unwrap();
        assert!(r.approx_eq(&Point::xy(-5.0, 3.0).unwrap(), 1e-12));
        for bad in ["diag:", "rot:1,2", "proj:0.5", "shear:1"] {
            assert_eq!(field_of(parse_operator(bad).unwrap_err()), "op", "{bad}");
        }
    }

    #[test]
    fn operator_json() {
        let p = Point::xy(1.0, 2.0).unwrap();
        let op = parse_operator(
            r#"{"type":"compose","ops":[{"type":"diag","entries":[2,1]},
                {"type":"affine","rows":[[0,1],[1,0]],"offset":[1,0]}]}"#,
        )
        .unwrap();
        // The affine map sends (1, 2) to (3, 1), then diag gives (6, 1).
        assert_eq!(op.apply(&p).unwrap(), Point::xy(6.0, 1.0).unwrap());
        let pw = parse_operator(r#"{"type":"power","base":{"type":"diag","entries":[1,2]},"n":3}"#).unwrap();
        assert_eq!(pw.apply(&p).unwrap(), Point::xy(1.0, 16.0).unwrap());
        let sc = parse_operator(r#"{"type":"scale","factor":2,"op":{"type":"identity"}}"#).unwrap();
        assert_eq!(sc.apply(&p).unwrap(), Point::xy(2.0, 4.0).unwrap());
        let sum = parse_operator(r#"{"type":"sum","ops":[{"type":"identity"},{"type":"matrix","rows":[[1,0],[0,0]]}]}"#)
            .unwrap();
        assert_eq!(sum.apply(&p).unwrap(), Point::xy(2.0, 2.0).unwrap());
        assert_eq!(
            field_of(parse_operator(r#"{"type":"matrix","rows":[[1,2]]}"#).unwrap_err()),
            "op.rows"
        );
        assert_eq!(field_of(parse_operator(r#"{"type":"nope"}"#).unwrap_err()), "op");
    }
}
