//! Browser bindings for the scheme laboratory.
//!
//! Every export takes plain numbers and strings and returns a JSON string,
//! so the page needs no bundler or generated TypeScript. The `*_json`
//! functions hold the logic and are what the native tests call.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use schemelab::analyzer::{avoidance_width, best_stepped_family, verify_avoidance};
use schemelab::coding::{lex_compare, CodeKind, CodedFamily, SubsetEnumeration};
use schemelab::scheme::{generate_type_seq, Growth};
use schemelab::{MetricProfile, Scheme};

/// The page never asks for anything this large; it keeps the tab responsive.
pub const DOMAIN_CAP: usize = 4000;
/// Sets shown per level before the listing is cut short.
const SHOWN_SETS: usize = 40;

fn growth(name: &str, n: u32, seed: u32) -> Result<Growth, String> {
    match name {
        "minimal" => Ok(Growth::Minimal),
        "coding" => Ok(Growth::Coding(n as usize)),
        "random" => Ok(Growth::Random(seed as u64)),
        other => Err(format!(
            "unknown growth {other:?}; use minimal, coding or random"
        )),
    }
}

fn build(name: &str, rank: u32, n: u32, seed: u32) -> Result<Scheme, String> {
    let t = generate_type_seq(rank as usize, growth(name, n, seed)?, DOMAIN_CAP)
        .map_err(|e| e.to_string())?;
    Ok(Scheme::build(&t))
}

fn code_kind(kind: &str) -> Result<CodeKind, String> {
    kind.parse::<CodeKind>().map_err(|e| e.to_string())
}

/// Type sequence, level listing and the decomposition of the top set.
pub fn scheme_json(growth_name: &str, rank: u32, n: u32, seed: u32) -> Result<String, String> {
    let s = build(growth_name, rank, n, seed)?;
    let levels: Vec<Value> = s
        .levels()
        .iter()
        .enumerate()
        .map(|(k, level)| {
            json!({
                "level": k,
                "size": s.type_seq().level_size(k),
                "count": level.len(),
                "sets": level.iter().take(SHOWN_SETS).collect::<Vec<_>>(),
            })
        })
        .collect();
    let top = &s.level(s.rank())[0];
    let d = s
        .decomposition(s.rank(), top)
        .expect("the top set decomposes");
    Ok(json!({
        "rank": s.rank(),
        "domain": s.domain(),
        "type_seq": s.type_seq().entries(),
        "levels": levels,
        "top": { "root": d.root, "tails": d.tails() },
    })
    .to_string())
}

/// Coded points in lexicographic order, each with the level that decides
/// its order against the next point.
pub fn coded_points_json(
    growth_name: &str,
    rank: u32,
    n: u32,
    seed: u32,
    kind: &str,
) -> Result<String, String> {
    let s = build(growth_name, rank, n, seed)?;
    let kind = code_kind(kind)?;
    let p = MetricProfile::new(&s).map_err(|e| e.to_string())?;
    let en = if kind == CodeKind::Xi {
        SubsetEnumeration::build_truncated(s.type_seq(), n as usize)
    } else {
        SubsetEnumeration::build(s.type_seq(), n as usize).map_err(|e| e.to_string())?
    };
    let codes = CodedFamily::new(&p, &en, kind).map_err(|e| e.to_string())?;
    let order = codes.lex_sorted();
    let rows: Vec<Value> = order
        .iter()
        .enumerate()
        .map(|(i, &a)| {
            let next = order.get(i + 1).map(|&b| {
                let (_, delta) =
                    lex_compare(&codes.points[a], &codes.points[b]).expect("same kind");
                delta.to_string()
            });
            json!({ "alpha": a, "seq": codes.points[a].seq, "delta_next": next })
        })
        .collect();
    Ok(json!({ "kind": kind.to_string(), "n": n, "points": rows }).to_string())
}

/// The avoidance check on the best step-spaced interval family, with the
/// full type matrix of the matched intervals.
pub fn avoidance_json(rank: u32, n: u32, kind: &str) -> Result<String, String> {
    let kind = code_kind(kind)?;
    let w = avoidance_width(kind, n as usize);
    let growth = Growth::CodingTail {
        n: n as usize,
        tail: w.max(2 * n as usize + 1),
    };
    let t = generate_type_seq(rank as usize, growth, DOMAIN_CAP).map_err(|e| e.to_string())?;
    let s = Scheme::build(&t);
    let p = MetricProfile::new(&s).map_err(|e| e.to_string())?;
    let en = SubsetEnumeration::build(&t, n as usize).map_err(|e| e.to_string())?;
    let codes = CodedFamily::new(&p, &en, kind).map_err(|e| e.to_string())?;
    let (offset, fam) = best_stepped_family(&p, w).map_err(|e| e.to_string())?;
    let report = verify_avoidance(&p, &codes, &fam).map_err(|e| e.to_string())?;
    let members = fam.members();
    let matrix: Vec<Vec<Option<String>>> = members
        .iter()
        .enumerate()
        .map(|(i, c)| {
            members
                .iter()
                .enumerate()
                .map(|(j, d)| {
                    (i != j).then(|| {
                        schemelab::analyzer::bar_type(&codes, c, d)
                            .expect("disjoint members")
                            .to_string()
                    })
                })
                .collect()
        })
        .collect();
    Ok(json!({
        "domain": s.domain(),
        "offset": offset,
        "starts": fam.matched().starts,
        "passed": report.passed(),
        "report": report,
        "matrix": matrix,
    })
    .to_string())
}

#[wasm_bindgen]
pub fn scheme(growth_name: &str, rank: u32, n: u32, seed: u32) -> Result<String, JsError> {
    scheme_json(growth_name, rank, n, seed).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn coded_points(
    growth_name: &str,
    rank: u32,
    n: u32,
    seed: u32,
    kind: &str,
) -> Result<String, JsError> {
    coded_points_json(growth_name, rank, n, seed, kind).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn avoidance(rank: u32, n: u32, kind: &str) -> Result<String, JsError> {
    avoidance_json(rank, n, kind).map_err(|e| JsError::new(&e))
}
