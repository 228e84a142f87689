//! Render a report as text, JSON, or CSV. Output is byte-stable: fixed key
//! order (JSON objects sort their keys), fixed row order, no timestamps.

use crate::run::{Report, SWEEP_HN_HEADER};
use clap::ValueEnum;
use serde_json::{json, Map, Value};
use std::fmt::Write as _;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

pub fn emit(report: &Report, format: Format) -> String {
    match format {
        Format::Text => text(report),
        Format::Json => {
            let mut s =
                serde_json::to_string_pretty(&to_json(report)).expect("json always serializes");
            s.push('\n');
            s
        }
        Format::Csv => csv_bytes(report),
    }
}

// --------------------------------------------------------------------- text

fn text(report: &Report) -> String {
    let mut out = String::new();
    let w = &mut out;
    match report {
        Report::Classify(r) => {
            writeln!(w, "task: classify").unwrap();
            writeln!(
                w,
                "curve: genus {}, marked points {} (gamma {})",
                r.genus, r.marked_points, r.gamma
            )
            .unwrap();
            writeln!(w, "profile: {}", r.profile).unwrap();
            writeln!(w, "verdict: {}", r.verdict).unwrap();
            writeln!(w, "citation: {}", r.citation).unwrap();
            if let Some(note) = r.witness_note {
                writeln!(w, "note: {note}").unwrap();
            }
        }
        Report::Delta(r) => {
            writeln!(w, "task: delta").unwrap();
            writeln!(w, "splitting: {} (gamma {})", r.splitting, r.gamma).unwrap();
            writeln!(w, "delta: {}", r.delta).unwrap();
            writeln!(w, "provenance: {}", r.provenance).unwrap();
            if let Some(count) = r.oracle_count {
                writeln!(w, "oracle: basis enumeration agrees ({count} elements)").unwrap();
            }
        }
        Report::Basis(r) => {
            writeln!(w, "task: basis").unwrap();
            writeln!(w, "splitting: {} (gamma {})", r.splitting, r.gamma).unwrap();
            writeln!(w, "dimension: {}", r.dimension).unwrap();
            writeln!(w, "seed: {}", r.seed).unwrap();
            for row in &r.rows {
                writeln!(
                    w,
                    "  [{}] entry ({},{}) = {} (degree {}, generic rank {}, nilpotency index {})",
                    row.index,
                    row.row,
                    row.col,
                    row.monomial,
                    row.degree,
                    row.generic_rank,
                    row.nilpotency_index
                )
                .unwrap();
            }
        }
        Report::Nilpotency(r) => {
            writeln!(w, "task: nilpotency").unwrap();
            writeln!(w, "splitting: {} (gamma {})", r.splitting, r.gamma).unwrap();
            writeln!(w, "filtration steps: {}", r.block_count).unwrap();
            match r.bound {
                Some(e) => writeln!(w, "bound e: {e} (every field vanishes at level e+1)").unwrap(),
                None => writeln!(
                    w,
                    "bound e: undefined (necessary condition fails; only the zero field exists)"
                )
                .unwrap(),
            }
            writeln!(w, "cap: {}", r.cap).unwrap();
            if let Some(idx) = r.index {
                writeln!(w, "field nilpotency index: {idx}").unwrap();
            }
            if let Some(v) = r.vanishes_at_bound_plus_one {
                writeln!(w, "field vanishes at level e+1: {v}").unwrap();
            }
        }
        Report::Segre(r) => {
            writeln!(w, "task: segre").unwrap();
            writeln!(w, "source: {}", r.source).unwrap();
            writeln!(w, "rank: {}, degree: {}", r.rank, r.degree).unwrap();
            for row in &r.rows {
                let oracle = match row.oracle_delta {
                    Some(v) => format!(", oracle delta {v}"),
                    None => String::new(),
                };
                writeln!(
                    w,
                    "  k={}: s={}, delta={} ({}{})",
                    row.k, row.s, row.delta, row.provenance, oracle
                )
                .unwrap();
            }
            if !r.breakpoints.is_empty() {
                let pieces: Vec<String> = r
                    .breakpoints
                    .iter()
                    .map(|(rho, s)| format!("{rho}:{s}"))
                    .collect();
                writeln!(w, "breakpoint values: {}", pieces.join(";")).unwrap();
            }
            if let Some(seed) = r.oracle_seed {
                writeln!(w, "oracle: exhaustive search agrees (seed {seed})").unwrap();
            }
        }
        Report::Endo(r) => {
            writeln!(w, "task: endo").unwrap();
            writeln!(w, "splitting: {} (gamma {})", r.splitting, r.gamma).unwrap();
            writeln!(w, "end_dim: {}", r.end_dim).unwrap();
            match &r.commutant {
                None => writeln!(
                    w,
                    "commutant: no field supplied (the zero field commutes with all {} dimensions)",
                    r.end_dim
                )
                .unwrap(),
                Some(c) => {
                    writeln!(w, "commutant dimension: {}", c.dimension).unwrap();
                    writeln!(w, "contains identity: {}", c.contains_identity).unwrap();
                    writeln!(w, "simple pair: {}", c.simple).unwrap();
                    for (i, kind) in c.kinds.iter().enumerate() {
                        writeln!(w, "  basis[{i}]: {kind}").unwrap();
                    }
                }
            }
        }
        Report::Sweep(r) => {
            writeln!(w, "task: sweep").unwrap();
            writeln!(w, "columns: {}", r.header.join(",")).unwrap();
            for row in &r.rows {
                writeln!(w, "  {}", row.join(" | ")).unwrap();
            }
            writeln!(w, "rows: {}", r.rows.len()).unwrap();
            for warning in &r.warnings {
                writeln!(w, "warning: {warning}").unwrap();
            }
        }
    }
    out
}

// --------------------------------------------------------------------- json

fn to_json(report: &Report) -> Value {
    match report {
        Report::Classify(r) => {
            let mut obj = Map::new();
            obj.insert("task".into(), json!("classify"));
            obj.insert("genus".into(), json!(r.genus));
            obj.insert("marked_points".into(), json!(r.marked_points));
            obj.insert("gamma".into(), json!(r.gamma));
            obj.insert("profile".into(), json!(r.profile));
            obj.insert("verdict".into(), json!(r.verdict));
            obj.insert("citation".into(), json!(r.citation));
            if let Some(note) = r.witness_note {
                obj.insert("witness_note".into(), json!(note));
            }
            Value::Object(obj)
        }
        Report::Delta(r) => {
            let mut obj = Map::new();
            obj.insert("task".into(), json!("delta"));
            obj.insert("gamma".into(), json!(r.gamma));
            obj.insert("splitting".into(), json!(r.splitting));
            obj.insert("delta".into(), json!(r.delta));
            obj.insert("provenance".into(), json!(r.provenance));
            if let Some(count) = r.oracle_count {
                obj.insert("oracle_count".into(), json!(count));
            }
            Value::Object(obj)
        }
        Report::Basis(r) => {
            let rows: Vec<Value> = r
                .rows
                .iter()
                .map(|row| {
                    json!({
                        "index": row.index,
                        "row": row.row,
                        "col": row.col,
                        "monomial": row.monomial,
                        "degree": row.degree,
                        "generic_rank": row.generic_rank,
                        "nilpotency_index": row.nilpotency_index,
                    })
                })
                .collect();
            json!({
                "task": "basis",
                "gamma": r.gamma,
                "splitting": r.splitting,
                "dimension": r.dimension,
                "seed": r.seed,
                "fields": rows,
            })
        }
        Report::Nilpotency(r) => {
            let mut obj = Map::new();
            obj.insert("task".into(), json!("nilpotency"));
            obj.insert("gamma".into(), json!(r.gamma));
            obj.insert("splitting".into(), json!(r.splitting));
            obj.insert("block_count".into(), json!(r.block_count));
            obj.insert("bound".into(), json!(r.bound));
            obj.insert("cap".into(), json!(r.cap));
            if let Some(idx) = r.index {
                obj.insert("index".into(), json!(idx));
            }
            if let Some(v) = r.vanishes_at_bound_plus_one {
                obj.insert("vanishes_at_bound_plus_one".into(), json!(v));
            }
            Value::Object(obj)
        }
        Report::Segre(r) => {
            let rows: Vec<Value> = r
                .rows
                .iter()
                .map(|row| {
                    let mut obj = Map::new();
                    obj.insert("k".into(), json!(row.k));
                    obj.insert("s".into(), json!(row.s));
                    obj.insert("delta".into(), json!(row.delta));
                    obj.insert("provenance".into(), json!(row.provenance));
                    if let Some(v) = row.oracle_delta {
                        obj.insert("oracle_delta".into(), json!(v));
                    }
                    Value::Object(obj)
                })
                .collect();
            let breakpoints: Vec<Value> = r
                .breakpoints
                .iter()
                .map(|&(rho, s)| json!({"rank": rho, "s": s}))
                .collect();
            let mut obj = Map::new();
            obj.insert("task".into(), json!("segre"));
            obj.insert("source".into(), json!(r.source));
            obj.insert("rank".into(), json!(r.rank));
            obj.insert("degree".into(), json!(r.degree));
            obj.insert("table".into(), Value::Array(rows));
            obj.insert("breakpoints".into(), Value::Array(breakpoints));
            if let Some(seed) = r.oracle_seed {
                obj.insert("oracle_seed".into(), json!(seed));
            }
            Value::Object(obj)
        }
        Report::Endo(r) => {
            let mut obj = Map::new();
            obj.insert("task".into(), json!("endo"));
            obj.insert("gamma".into(), json!(r.gamma));
            obj.insert("splitting".into(), json!(r.splitting));
            obj.insert("end_dim".into(), json!(r.end_dim));
            if let Some(c) = &r.commutant {
                obj.insert(
                    "commutant".into(),
                    json!({
                        "dimension": c.dimension,
                        "contains_identity": c.contains_identity,
                        "simple": c.simple,
                        "basis_kinds": c.kinds,
                    }),
                );
            }
            Value::Object(obj)
        }
        Report::Sweep(r) => {
            let rows: Vec<Value> = r
                .rows
                .iter()
                .map(|row| {
                    let mut obj = Map::new();
                    for (key, value) in r.header.iter().zip(row) {
                        obj.insert((*key).to_string(), json!(value));
                    }
                    Value::Object(obj)
                })
                .collect();
            json!({
                "task": "sweep",
                "columns": r.header,
                "rows": rows,
                "warnings": r.warnings,
            })
        }
    }
}

// ---------------------------------------------------------------------- csv

fn csv_bytes(report: &Report) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    match report {
        Report::Classify(r) => {
            writer.write_record(SWEEP_HN_HEADER).unwrap();
            writer
                .write_record([
                    r.genus.to_string(),
                    r.marked_points.to_string(),
                    r.gamma.to_string(),
                    r.profile.clone(),
                    r.verdict.to_string(),
                    r.citation.to_string(),
                ])
                .unwrap();
        }
        Report::Delta(r) => {
            writer
                .write_record(["gamma", "splitting", "delta", "oracle_count"])
                .unwrap();
            writer
                .write_record([
                    r.gamma.to_string(),
                    r.splitting.clone(),
                    r.delta.to_string(),
                    r.oracle_count.map_or(String::new(), |c| c.to_string()),
                ])
                .unwrap();
        }
        Report::Basis(r) => {
            writer
                .write_record([
                    "index",
                    "row",
                    "col",
                    "monomial",
                    "degree",
                    "generic_rank",
                    "nilpotency_index",
                ])
                .unwrap();
            for row in &r.rows {
                writer
                    .write_record([
                        row.index.to_string(),
                        row.row.to_string(),
                        row.col.to_string(),
                        row.monomial.clone(),
                        row.degree.to_string(),
                        row.generic_rank.to_string(),
                        row.nilpotency_index.to_string(),
                    ])
                    .unwrap();
            }
        }
        Report::Nilpotency(r) => {
            writer
                .write_record([
                    "gamma",
                    "splitting",
                    "block_count",
                    "bound",
                    "cap",
                    "index",
                    "vanishes_at_bound_plus_one",
                ])
                .unwrap();
            writer
                .write_record([
                    r.gamma.to_string(),
                    r.splitting.clone(),
                    r.block_count.to_string(),
                    r.bound.map_or(String::new(), |e| e.to_string()),
                    r.cap.to_string(),
                    r.index.map_or(String::new(), |i| i.to_string()),
                    r.vanishes_at_bound_plus_one
                        .map_or(String::new(), |v| v.to_string()),
                ])
                .unwrap();
        }
        Report::Segre(r) => {
            writer
                .write_record(["k", "s", "delta", "provenance", "oracle_delta"])
                .unwrap();
            for row in &r.rows {
                writer
                    .write_record([
                        row.k.to_string(),
                        row.s.to_string(),
                        row.delta.to_string(),
                        row.provenance.to_string(),
                        row.oracle_delta.map_or(String::new(), |v| v.to_string()),
                    ])
                    .unwrap();
            }
        }
        Report::Endo(r) => {
            writer
                .write_record([
                    "gamma",
                    "splitting",
                    "end_dim",
                    "commutant_dim",
                    "contains_identity",
                    "simple",
                    "scalar",
                    "strictly_triangular",
                    "mixed",
                ])
                .unwrap();
            let empty = || String::new();
            let (dim, ident, simple, counts) = match &r.commutant {
                None => (empty(), empty(), empty(), [empty(), empty(), empty()]),
                Some(c) => {
                    let mut counts = [0usize; 3];
                    for kind in &c.kinds {
                        match *kind {
                            "scalar" => counts[0] += 1,
                            "strictly-triangular" => counts[1] += 1,
                            _ => counts[2] += 1,
                        }
                    }
                    (
                        c.dimension.to_string(),
                        c.contains_identity.to_string(),
                        c.simple.to_string(),
                        counts.map(|n| n.to_string()),
                    )
                }
            };
            let [scalar, strict, mixed] = counts;
            writer
                .write_record([
                    r.gamma.to_string(),
                    r.splitting.clone(),
                    r.end_dim.to_string(),
                    dim,
                    ident,
                    simple,
                    scalar,
                    strict,
                    mixed,
                ])
                .unwrap();
        }
        Report::Sweep(r) => {
            writer.write_record(&r.header).unwrap();
            for row in &r.rows {
                writer.write_record(row).unwrap();
            }
        }
    }
    let bytes = writer.into_inner().expect("in-memory writer never fails");
    String::from_utf8(bytes).expect("csv output is utf-8")
}
