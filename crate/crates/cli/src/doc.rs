//! Task documents: a single JSON object describing the curve, the bundle
//! profile, the task to run, and optional field/sweep payloads.
//!
//! Parsing is strict: unknown keys are rejected, every value is
//! type-checked with a precise path in the error, and the mathematical
//! preconditions (negative twist, strictly decreasing slopes, entry
//! degrees) are validated before a document is accepted.

use cohiggs_core::{
    parse_rational, validate_hn, CoHiggsFieldP1, CurveContext, HomogPoly, Rational,
    SplittingType,
};
use serde_json::{Map, Value};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Profile {
    /// Filtration blocks (rank, degree), slopes strictly decreasing.
    Hn(Vec<(u32, i64)>),
    /// Flat twist list, descending; genus 0 only.
    Splitting(Vec<i64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TaskKind {
    Classify,
    Delta,
    Basis,
    Nilpotency,
    Segre,
    Endo,
    Sweep,
}

impl TaskKind {
    pub fn name(self) -> &'static str {
        match self {
            TaskKind::Classify => "classify",
            TaskKind::Delta => "delta",
            TaskKind::Basis => "basis",
            TaskKind::Nilpotency => "nilpotency",
            TaskKind::Segre => "segre",
            TaskKind::Endo => "endo",
            TaskKind::Sweep => "sweep",
        }
    }

    fn from_name(s: &str) -> Option<Self> {
        Some(match s {
            "classify" => TaskKind::Classify,
            "delta" => TaskKind::Delta,
            "basis" => TaskKind::Basis,
            "nilpotency" => TaskKind::Nilpotency,
            "segre" => TaskKind::Segre,
            "endo" => TaskKind::Endo,
            "sweep" => TaskKind::Sweep,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RangeSpec {
    /// Inclusive range, iterated ascending.
    FromTo(i64, i64),
    /// Explicit values, iterated in the given order.
    List(Vec<i64>),
}

impl RangeSpec {
    pub fn values(&self) -> Vec<i64> {
        match self {
            RangeSpec::FromTo(a, b) => (*a..=*b).collect(),
            RangeSpec::List(v) => v.clone(),
        }
    }

}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SweepSpec {
    pub genus: Option<RangeSpec>,
    pub marked_points: Option<RangeSpec>,
    /// Varies the degree of the last filtration block (hn profiles).
    pub bottom_degree: Option<RangeSpec>,
    /// Varies the last twist of the splitting (splitting profiles).
    pub bottom_twist: Option<RangeSpec>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TaskDocument {
    pub genus: u32,
    pub marked_points: u32,
    pub profile: Profile,
    pub task: TaskKind,
    /// Entry matrix for a specific field: r×r cells of coefficient lists in
    /// descending first-variable power; empty cell = zero entry.
    pub field: Option<Vec<Vec<Vec<Rational>>>>,
    pub sweep: Option<SweepSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DocError {
    Syntax { line: usize, message: String },
    Schema { path: String, message: String },
    Validation(String),
}

impl DocError {
    /// 1 for malformed documents, 2 for mathematically invalid ones.
    pub fn exit_code(&self) -> i32 {
        match self {
            DocError::Syntax { .. } | DocError::Schema { .. } => 1,
            DocError::Validation(_) => 2,
        }
    }
}

impl fmt::Display for DocError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DocError::Syntax { line, message } => write!(f, "syntax (line {line}): {message}"),
            DocError::Schema { path, message } => write!(f, "schema ({path}): {message}"),
            DocError::Validation(message) => write!(f, "validation: {message}"),
        }
    }
}

fn schema(path: &str, message: impl Into<String>) -> DocError {
    DocError::Schema {
        path: path.to_string(),
        message: message.into(),
    }
}

fn as_object<'v>(v: &'v Value, path: &str) -> Result<&'v Map<String, Value>, DocError> {
    v.as_object().ok_or_else(|| schema(path, "expected an object"))
}

fn as_array<'v>(v: &'v Value, path: &str) -> Result<&'v Vec<Value>, DocError> {
    v.as_array().ok_or_else(|| schema(path, "expected an array"))
}

fn as_i64(v: &Value, path: &str) -> Result<i64, DocError> {
    v.as_i64().ok_or_else(|| schema(path, "expected an integer"))
}

fn as_u32(v: &Value, path: &str) -> Result<u32, DocError> {
    let n = as_i64(v, path)?;
    u32::try_from(n).map_err(|_| schema(path, "expected a small non-negative integer"))
}

fn reject_unknown_keys(
    obj: &Map<String, Value>,
    allowed: &[&str],
    path: &str,
) -> Result<(), DocError> {
    for key in obj.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(schema(
                &format!("{path}{}{key}", if path.is_empty() { "" } else { "." }),
                "unknown key",
            ));
        }
    }
    Ok(())
}

fn coefficient(v: &Value, path: &str) -> Result<Rational, DocError> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(cohiggs_core::int)
            .ok_or_else(|| schema(path, "expected an integer or \"p/q\" string")),
        Value::String(s) => {
            parse_rational(s).ok_or_else(|| schema(path, "expected an integer or \"p/q\" string"))
        }
        _ => Err(schema(path, "expected an integer or \"p/q\" string")),
    }
}

fn parse_range(v: &Value, path: &str) -> Result<RangeSpec, DocError> {
    match v {
        Value::Array(items) => {
            if items.is_empty() {
                return Err(schema(path, "value list must be non-empty"));
            }
            let vals = items
                .iter()
                .enumerate()
                .map(|(i, item)| as_i64(item, &format!("{path}[{i}]")))
                .collect::<Result<Vec<i64>, DocError>>()?;
            Ok(RangeSpec::List(vals))
        }
        Value::Object(obj) => {
            reject_unknown_keys(obj, &["from", "to"], path)?;
            let from = as_i64(
                obj.get("from").ok_or_else(|| schema(path, "missing \"from\""))?,
                &format!("{path}.from"),
            )?;
            let to = as_i64(
                obj.get("to").ok_or_else(|| schema(path, "missing \"to\""))?,
                &format!("{path}.to"),
            )?;
            if from > to {
                return Err(schema(path, "\"from\" must not exceed \"to\""));
            }
            Ok(RangeSpec::FromTo(from, to))
        }
        _ => Err(schema(path, "expected {\"from\":a,\"to\":b} or a value list")),
    }
}

/// Parse and fully validate a task document.
pub fn parse(text: &str) -> Result<TaskDocument, DocError> {
    let root: Value = serde_json::from_str(text).map_err(|e| DocError::Syntax {
        line: e.line(),
        message: e.to_string(),
    })?;
    let obj = as_object(&root, "$")?;
    reject_unknown_keys(obj, &["curve", "profile", "task", "field", "sweep"], "")?;

    // curve first: the negativity of the twist gates everything else
    let curve = as_object(
        obj.get("curve").ok_or_else(|| schema("curve", "missing"))?,
        "curve",
    )?;
    reject_unknown_keys(curve, &["genus", "marked_points"], "curve")?;
    let genus = as_u32(
        curve.get("genus").ok_or_else(|| schema("curve.genus", "missing"))?,
        "curve.genus",
    )?;
    let marked_points = as_u32(
        curve
            .get("marked_points")
            .ok_or_else(|| schema("curve.marked_points", "missing"))?,
        "curve.marked_points",
    )?;
    let ctx = CurveContext::new(genus, marked_points)
        .map_err(|e| DocError::Validation(e.to_string()))?;

    let task_name = obj
        .get("task")
        .ok_or_else(|| schema("task", "missing"))?
        .as_str()
        .ok_or_else(|| schema("task", "expected a string"))?;
    let task = TaskKind::from_name(task_name).ok_or_else(|| {
        schema(
            "task",
            "expected one of classify, delta, basis, nilpotency, segre, endo, sweep",
        )
    })?;

    let profile_obj = as_object(
        obj.get("profile").ok_or_else(|| schema("profile", "missing"))?,
        "profile",
    )?;
    reject_unknown_keys(profile_obj, &["hn", "splitting"], "profile")?;
    let profile = match (profile_obj.get("hn"), profile_obj.get("splitting")) {
        (Some(_), Some(_)) => {
            return Err(schema("profile", "exactly one of \"hn\" or \"splitting\""))
        }
        (None, None) => {
            return Err(schema("profile", "exactly one of \"hn\" or \"splitting\""))
        }
        (Some(hn), None) => {
            let items = as_array(hn, "profile.hn")?;
            let mut blocks = Vec::with_capacity(items.len());
            for (i, item) in items.iter().enumerate() {
                let path = format!("profile.hn[{i}]");
                let pair = as_array(item, &path)?;
                if pair.len() != 2 {
                    return Err(schema(&path, "expected a [rank, degree] pair"));
                }
                let r = as_u32(&pair[0], &format!("{path}[0]"))?;
                let d = as_i64(&pair[1], &format!("{path}[1]"))?;
                blocks.push((r, d));
            }
            validate_hn(&blocks, &ctx).map_err(|e| DocError::Validation(e.to_string()))?;
            Profile::Hn(blocks)
        }
        (None, Some(sp)) => {
            if genus != 0 {
                return Err(DocError::Validation(
                    "splitting profiles describe bundles on the projective line; genus must be 0"
                        .to_string(),
                ));
            }
            let items = as_array(sp, "profile.splitting")?;
            let twists = items
                .iter()
                .enumerate()
                .map(|(i, item)| as_i64(item, &format!("profile.splitting[{i}]")))
                .collect::<Result<Vec<i64>, DocError>>()?;
            SplittingType::from_twists(&twists)
                .map_err(|e| DocError::Validation(e.to_string()))?;
            Profile::Splitting(twists)
        }
    };

    let field = match obj.get("field") {
        None => None,
        Some(raw) => {
            let Profile::Splitting(twists) = &profile else {
                return Err(schema("field", "a field payload requires a splitting profile"));
            };
            let r = twists.len();
            let rows = as_array(raw, "field")?;
            if rows.len() != r {
                return Err(schema("field", format!("expected {r} rows")));
            }
            let mut matrix = Vec::with_capacity(r);
            for (p, row) in rows.iter().enumerate() {
                let path = format!("field[{p}]");
                let cells = as_array(row, &path)?;
                if cells.len() != r {
                    return Err(schema(&path, format!("expected {r} cells")));
                }
                let mut out_row = Vec::with_capacity(r);
                for (q, cell) in cells.iter().enumerate() {
                    let path = format!("field[{p}][{q}]");
                    let coeffs = match cell {
                        Value::Null => Vec::new(),
                        Value::Array(items) => items
                            .iter()
                            .enumerate()
                            .map(|(i, item)| coefficient(item, &format!("{path}[{i}]")))
                            .collect::<Result<Vec<Rational>, DocError>>()?,
                        _ => return Err(schema(&path, "expected a coefficient list or null")),
                    };
                    out_row.push(coeffs);
                }
                matrix.push(out_row);
            }
            // degree shapes are a mathematical precondition, checked now
            build_field(twists, ctx.gamma(), &matrix)?;
            Some(matrix)
        }
    };

    let sweep = match obj.get("sweep") {
        None => {
            if task == TaskKind::Sweep {
                return Err(schema("sweep", "task \"sweep\" requires a sweep section"));
            }
            None
        }
        Some(raw) => {
            if task != TaskKind::Sweep {
                return Err(schema("sweep", "a sweep section requires task \"sweep\""));
            }
            let sw = as_object(raw, "sweep")?;
            reject_unknown_keys(
                sw,
                &["genus", "marked_points", "bottom_degree", "bottom_twist"],
                "sweep",
            )?;
            let get = |key: &str| -> Result<Option<RangeSpec>, DocError> {
                sw.get(key)
                    .map(|v| parse_range(v, &format!("sweep.{key}")))
                    .transpose()
            };
            let spec = SweepSpec {
                genus: get("genus")?,
                marked_points: get("marked_points")?,
                bottom_degree: get("bottom_degree")?,
                bottom_twist: get("bottom_twist")?,
            };
            match &profile {
                Profile::Hn(_) if spec.bottom_twist.is_some() => {
                    return Err(schema(
                        "sweep.bottom_twist",
                        "only applies to splitting profiles",
                    ))
                }
                Profile::Splitting(_) if spec.bottom_degree.is_some() => {
                    return Err(schema(
                        "sweep.bottom_degree",
                        "only applies to hn profiles",
                    ))
                }
                _ => {}
            }
            Some(spec)
        }
    };

    Ok(TaskDocument {
        genus,
        marked_points,
        profile,
        task,
        field,
        sweep,
    })
}

/// Construct the field described by a coefficient matrix over the given
/// splitting; degree mismatches surface as validation errors.
pub fn build_field(
    twists: &[i64],
    gamma: i64,
    matrix: &[Vec<Vec<Rational>>],
) -> Result<CoHiggsFieldP1, DocError> {
    let split =
        SplittingType::from_twists(twists).map_err(|e| DocError::Validation(e.to_string()))?;
    let r = twists.len();
    let mut entries = Vec::with_capacity(r);
    for p in 0..r {
        let mut row = Vec::with_capacity(r);
        for q in 0..r {
            let coeffs = &matrix[p][q];
            let poly = if coeffs.is_empty() {
                HomogPoly::structural_zero()
            } else {
                let degree = i64::try_from(coeffs.len()).expect("small") - 1;
                HomogPoly::new(degree, coeffs.clone()).expect("length matches by construction")
            };
            row.push(poly);
        }
        entries.push(row);
    }
    CoHiggsFieldP1::new(split, gamma, entries).map_err(|e| DocError::Validation(e.to_string()))
}
