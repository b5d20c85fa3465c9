//! JSON encodings. Rationals are `{"num": "..", "den": ".."}` with decimal
//! strings in lowest terms, so every value round-trips exactly and equal
//! inputs always produce identical bytes.

use serde_json::{json, Map, Value};

use crate::algebra::rational::{from_decimal_pair, to_decimal_pair, Rational};
use crate::algebra::{BetaSeries, PQSeries, ParamPoly, VarContext};
use crate::constellation::{make_constellation_in, CensusEntry, Constellation, ProductOrder, Spectrum};
use crate::error::{HurwitzError, Result};
use crate::matrix_integral::MatrixReport;
use crate::symmetric::{Partition, Permutation};

pub fn rational(q: &Rational) -> Value {
    let (num, den) = to_decimal_pair(q);
    json!({ "num": num, "den": den })
}

fn bad(what: &str, v: &Value) -> HurwitzError {
    HurwitzError::Parse(format!("expected {what}, found {v}"))
}

pub fn parse_rational(v: &Value) -> Result<Rational> {
    let num = v.get("num").and_then(Value::as_str).ok_or_else(|| bad("rational", v))?;
    let den = v.get("den").and_then(Value::as_str).ok_or_else(|| bad("rational", v))?;
    from_decimal_pair(num, den)
}

/// Terms in ascending exponent order: `[{"c": [..], "d": [..], "num", "den"}]`.
pub fn poly(p: &ParamPoly) -> Value {
    let l = p.context().l;
    Value::Array(
        p.terms()
            .map(|(exps, q)| {
                let (num, den) = to_decimal_pair(q);
                json!({ "c": exps[..l], "d": exps[l..], "num": num, "den": den })
            })
            .collect(),
    )
}

pub fn parse_poly(ctx: VarContext, v: &Value) -> Result<ParamPoly> {
    let terms = v.as_array().ok_or_else(|| bad("term array", v))?;
    let exps = |t: &Value, k: &str| -> Result<Vec<u32>> {
        serde_json::from_value(t.get(k).cloned().unwrap_or(Value::Null)).map_err(|_| bad("exponent list", t))
    };
    let parsed = terms
        .iter()
        .map(|t| Ok((exps(t, "c")?, exps(t, "d")?, parse_rational(t)?)))
        .collect::<Result<Vec<_>>>()?;
    ParamPoly::from_terms(ctx, parsed)
}

pub fn series(s: &BetaSeries) -> Value {
    json!({
        "order": s.order(),
        "coeffs": s.coeffs().iter().map(poly).collect::<Vec<_>>(),
    })
}

pub fn parse_series(ctx: VarContext, v: &Value) -> Result<BetaSeries> {
    let coeffs = v.get("coeffs").and_then(Value::as_array).ok_or_else(|| bad("series", v))?;
    BetaSeries::from_coeffs(coeffs.iter().map(|c| parse_poly(ctx, c)).collect::<Result<_>>()?)
}

fn partition(p: &Partition) -> Value {
    json!(p.parts())
}

/// `[{"N", "mu", "nu", "series"}]`, sorted by `N`, then `μ` and `ν` in reverse-lexicographic order.
pub fn tau_table(t: &PQSeries) -> Value {
    Value::Array(
        t.entries()
            .iter()
            .map(|(k, s)| json!({ "N": k.n, "mu": partition(&k.mu), "nu": partition(&k.nu), "series": series(s) }))
            .collect(),
    )
}

pub fn constellation(c: &Constellation) -> Value {
    json!({
        "N": c.n(),
        "L": c.spectrum().l,
        "J": c.spectrum().j,
        "factors": c.factors().iter().map(|(label, h)| json!({
            "colour": label.colour,
            "flavour": label.flavour,
            "perm": h.images(),
        })).collect::<Vec<_>>(),
    })
}

/// Rebuilds and revalidates a constellation under the given product order.
pub fn parse_constellation(v: &Value, order: ProductOrder) -> Result<Constellation> {
    let l = v.get("L").and_then(Value::as_u64).ok_or_else(|| bad("constellation", v))? as usize;
    let j: Vec<usize> =
        serde_json::from_value(v.get("J").cloned().unwrap_or(Value::Null)).map_err(|_| bad("spectrum J", v))?;
    let factors = v.get("factors").and_then(Value::as_array).ok_or_else(|| bad("factor list", v))?;
    let perms = factors
        .iter()
        .map(|f| {
            let images: Vec<usize> = serde_json::from_value(f.get("perm").cloned().unwrap_or(Value::Null))
                .map_err(|_| bad("permutation", f))?;
            Permutation::from_images(&images)
        })
        .collect::<Result<Vec<_>>>()?;
    make_constellation_in(order, &Spectrum::new(l, j), perms)
}

pub fn census(entries: &[CensusEntry]) -> Value {
    Value::Array(
        entries
            .iter()
            .map(|e| {
                json!({
                    "key": e.key.profiles.iter().map(partition).collect::<Vec<_>>(),
                    "count": e.count,
                    "chi": e.chi,
                    "genus": e.genus,
                    "weight": poly(&e.weight),
                })
            })
            .collect(),
    )
}

pub fn matrix_report(r: &MatrixReport) -> Value {
    let mut m = Map::new();
    m.insert("n".into(), json!(r.n));
    m.insert("gamma".into(), json!(r.gamma));
    m.insert("lhs".into(), json!(r.lhs));
    m.insert("rhs".into(), json!(r.rhs));
    m.insert("rel_err".into(), json!(r.rel_err));
    m.insert("N_max".into(), json!(r.n_max));
    Value::Object(m)
}
