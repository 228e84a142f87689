//! Dispatch a validated task document to the engines and assemble a
//! report. Every numeric result carries the label of the rule that
//! produced it; randomized internals receive an explicit seed so reruns
//! are bit-identical.

use crate::doc::{build_field, Profile, SweepSpec, TaskDocument, TaskKind};
use cohiggs_core::{
    classify, commutant, default_nilpotency_cap, delta_dimension, end_dim, generic_rank_seeded,
    hom_basis, is_simple_pair, iterate, nilpotency_bound, nilpotency_index,
    oracle_delta_p1_seeded, s_at_breakpoints, segre_complete, segre_p1, validate_hn,
    CoHiggsFieldP1, CurveContext, EndoKind, HNData, SplittingType, VerdictKind,
};
use rayon::prelude::*;
use std::fmt::Write as _;

pub struct Options {
    pub oracle: bool,
    pub seed: u64,
    pub jobs: usize,
}

#[derive(Debug)]
pub enum RunError {
    /// A mathematical precondition failed (exit code 2).
    Validation(String),
    /// The engines contradicted themselves (exit code 3).
    Internal(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Validation(_) => 2,
            RunError::Internal(_) => 3,
        }
    }
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Validation(m) => write!(f, "validation: {m}"),
            RunError::Internal(m) => write!(f, "internal: {m}"),
        }
    }
}

// --------------------------------------------------------------- the report

#[derive(Debug)]
pub struct ClassifyReport {
    pub genus: u32,
    pub marked_points: u32,
    pub gamma: i64,
    pub profile: String,
    pub verdict: &'static str,
    pub citation: &'static str,
    pub witness_note: Option<&'static str>,
}

#[derive(Debug)]
pub struct DeltaReport {
    pub gamma: i64,
    pub splitting: String,
    pub delta: usize,
    pub provenance: &'static str,
    /// Independent basis count, present when the oracle flag is set.
    pub oracle_count: Option<usize>,
}

#[derive(Debug)]
pub struct BasisRow {
    pub index: usize,
    pub row: usize,
    pub col: usize,
    pub monomial: String,
    pub degree: i64,
    pub generic_rank: usize,
    pub nilpotency_index: u32,
}

#[derive(Debug)]
pub struct BasisReport {
    pub gamma: i64,
    pub splitting: String,
    pub dimension: usize,
    pub seed: u64,
    pub rows: Vec<BasisRow>,
}

#[derive(Debug)]
pub struct NilpotencyReport {
    pub gamma: i64,
    pub splitting: String,
    pub block_count: usize,
    /// None when the necessary condition fails (no nonzero field exists).
    pub bound: Option<u32>,
    pub cap: u32,
    /// Present when the document supplies a specific field.
    pub index: Option<u32>,
    pub vanishes_at_bound_plus_one: Option<bool>,
}

#[derive(Debug)]
pub struct SegreRow {
    pub k: u32,
    pub s: i64,
    pub delta: i64,
    pub provenance: &'static str,
    pub oracle_delta: Option<i64>,
}

#[derive(Debug)]
pub struct SegreReport {
    pub source: String,
    pub rank: u32,
    pub degree: i64,
    pub rows: Vec<SegreRow>,
    pub breakpoints: Vec<(u32, i64)>,
    pub oracle_seed: Option<u64>,
}

#[derive(Debug)]
pub struct CommutantReport {
    pub dimension: usize,
    pub contains_identity: bool,
    pub simple: bool,
    pub kinds: Vec<&'static str>,
}

#[derive(Debug)]
pub struct EndoReport {
    pub gamma: i64,
    pub splitting: String,
    pub end_dim: usize,
    pub commutant: Option<CommutantReport>,
}

#[derive(Debug)]
pub struct SweepReport {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub warnings: Vec<String>,
}

#[derive(Debug)]
pub enum Report {
    Classify(ClassifyReport),
    Delta(DeltaReport),
    Basis(BasisReport),
    Nilpotency(NilpotencyReport),
    Segre(SegreReport),
    Endo(EndoReport),
    Sweep(SweepReport),
}

// ------------------------------------------------------------------ helpers

pub fn profile_string(blocks: &[(u32, i64)]) -> String {
    let mut out = String::new();
    for (i, (r, d)) in blocks.iter().enumerate() {
        if i > 0 {
            out.push(';');
        }
        write!(out, "{r}:{d}").expect("string write");
    }
    out
}

pub fn splitting_string(twists: &[i64]) -> String {
    let mut out = String::new();
    for (i, t) in twists.iter().enumerate() {
        if i > 0 {
            out.push(';');
        }
        write!(out, "{t}").expect("string write");
    }
    out
}

fn kind_name(kind: VerdictKind) -> &'static str {
    match kind {
        VerdictKind::NoneForAll => "NoneForAll",
        VerdictKind::Mixed => "Mixed",
        VerdictKind::AllAdmit => "AllAdmit",
    }
}

fn endo_kind_name(kind: EndoKind) -> &'static str {
    match kind {
        EndoKind::Scalar => "scalar",
        EndoKind::StrictlyTriangular => "strictly-triangular",
        EndoKind::Mixed => "mixed",
    }
}

fn context(doc: &TaskDocument) -> CurveContext {
    CurveContext::new(doc.genus, doc.marked_points).expect("validated at parse time")
}

fn hn_data(doc: &TaskDocument, ctx: &CurveContext) -> HNData {
    match &doc.profile {
        Profile::Hn(blocks) => validate_hn(blocks, ctx).expect("validated at parse time"),
        Profile::Splitting(twists) => SplittingType::from_twists(twists)
            .expect("validated at parse time")
            .hn_profile(),
    }
}

fn require_splitting(doc: &TaskDocument) -> Result<&[i64], RunError> {
    match &doc.profile {
        Profile::Splitting(twists) => Ok(twists),
        Profile::Hn(_) => Err(RunError::Validation(format!(
            "task \"{}\" operates on split bundles; supply a splitting profile",
            doc.task.name()
        ))),
    }
}

fn split_of(twists: &[i64]) -> SplittingType {
    SplittingType::from_twists(twists).expect("validated at parse time")
}

fn parsed_field(doc: &TaskDocument, gamma: i64) -> Option<CoHiggsFieldP1> {
    let matrix = doc.field.as_ref()?;
    let Profile::Splitting(twists) = &doc.profile else {
        unreachable!("field payloads require splitting profiles at parse time")
    };
    Some(build_field(twists, gamma, matrix).expect("validated at parse time"))
}

// ----------------------------------------------------------------- dispatch

pub fn run(doc: &TaskDocument, opts: &Options) -> Result<Report, RunError> {
    match doc.task {
        TaskKind::Classify => run_classify(doc),
        TaskKind::Delta => run_delta(doc, opts),
        TaskKind::Basis => run_basis(doc, opts),
        TaskKind::Nilpotency => run_nilpotency(doc),
        TaskKind::Segre => run_segre(doc, opts),
        TaskKind::Endo => run_endo(doc),
        TaskKind::Sweep => run_sweep(doc, opts),
    }
}

fn run_classify(doc: &TaskDocument) -> Result<Report, RunError> {
    let ctx = context(doc);
    let data = hn_data(doc, &ctx);
    let verdict = classify(&ctx, &data).map_err(|e| RunError::Validation(e.to_string()))?;
    let profile = match &doc.profile {
        Profile::Hn(blocks) => profile_string(blocks),
        Profile::Splitting(_) => profile_string(data.blocks()),
    };
    Ok(Report::Classify(ClassifyReport {
        genus: doc.genus,
        marked_points: doc.marked_points,
        gamma: ctx.gamma(),
        profile,
        verdict: kind_name(verdict.kind),
        citation: verdict.citation,
        witness_note: verdict.witness_note,
    }))
}

fn run_delta(doc: &TaskDocument, opts: &Options) -> Result<Report, RunError> {
    let twists = require_splitting(doc)?;
    let ctx = context(doc);
    let split = split_of(twists);
    let delta = delta_dimension(&split, ctx.gamma());
    let oracle_count = if opts.oracle {
        let count = hom_basis(&split, ctx.gamma()).len();
        if count != delta {
            return Err(RunError::Internal(format!(
                "closed form gives {delta} but the basis has {count} elements"
            )));
        }
        Some(count)
    } else {
        None
    };
    Ok(Report::Delta(DeltaReport {
        gamma: ctx.gamma(),
        splitting: splitting_string(twists),
        delta,
        provenance: "closed form: weighted non-negative twist gaps",
        oracle_count,
    }))
}

fn run_basis(doc: &TaskDocument, opts: &Options) -> Result<Report, RunError> {
    let twists = require_splitting(doc)?;
    let ctx = context(doc);
    let split = split_of(twists);
    let cap = default_nilpotency_cap(&split);
    let fields = hom_basis(&split, ctx.gamma());
    let mut rows = Vec::with_capacity(fields.len());
    for (index, phi) in fields.iter().enumerate() {
        let r = phi.rank();
        let (p, q) = (0..r)
            .flat_map(|p| (0..r).map(move |q| (p, q)))
            .find(|&(p, q)| !phi.entry(p, q).is_zero())
            .expect("basis fields are nonzero");
        let idx = nilpotency_index(phi, cap)
            .map_err(|_| RunError::Internal("triangular field failed to reach zero within the cap".into()))?;
        rows.push(BasisRow {
            index,
            row: p + 1,
            col: q + 1,
            monomial: phi.entry(p, q).to_string(),
            degree: phi.entry_degree(p, q),
            generic_rank: generic_rank_seeded(phi, opts.seed),
            nilpotency_index: idx,
        });
    }
    Ok(Report::Basis(BasisReport {
        gamma: ctx.gamma(),
        splitting: splitting_string(twists),
        dimension: rows.len(),
        seed: opts.seed,
        rows,
    }))
}

fn run_nilpotency(doc: &TaskDocument) -> Result<Report, RunError> {
    let twists = require_splitting(doc)?;
    let ctx = context(doc);
    let split = split_of(twists);
    let data = split.hn_profile();
    let bound = nilpotency_bound(&ctx, &data).ok();
    let cap = default_nilpotency_cap(&split);
    let (index, vanishes) = match parsed_field(doc, ctx.gamma()) {
        None => (None, None),
        Some(phi) => {
            let idx = nilpotency_index(&phi, cap)
                .map_err(|_| RunError::Internal("triangular field failed to reach zero within the cap".into()))?;
            let vanish = bound.map(|e| iterate(&phi, e + 1).is_zero());
            (Some(idx), vanish)
        }
    };
    Ok(Report::Nilpotency(NilpotencyReport {
        gamma: ctx.gamma(),
        splitting: splitting_string(twists),
        block_count: data.block_count(),
        bound,
        cap,
        index,
        vanishes_at_bound_plus_one: vanishes,
    }))
}

fn run_segre(doc: &TaskDocument, opts: &Options) -> Result<Report, RunError> {
    let (table, source) = match &doc.profile {
        Profile::Splitting(twists) => {
            (segre_p1(&split_of(twists)), splitting_string(twists))
        }
        Profile::Hn(blocks) => {
            if opts.oracle {
                return Err(RunError::Validation(
                    "the brute-force cross-check runs on split bundles; supply a splitting profile"
                        .to_string(),
                ));
            }
            let ctx = context(doc);
            let data = validate_hn(blocks, &ctx).expect("validated at parse time");
            let table =
                segre_complete(&data).map_err(|e| RunError::Validation(e.to_string()))?;
            (table, profile_string(blocks))
        }
    };
    let oracle_seed = opts.oracle.then_some(opts.seed);
    let mut rows = Vec::new();
    for (k, entry) in table.entries() {
        let oracle_delta = match &doc.profile {
            Profile::Splitting(twists) if opts.oracle => {
                let found = oracle_delta_p1_seeded(&split_of(twists), k, opts.seed);
                if found != entry.delta {
                    return Err(RunError::Internal(format!(
                        "closed form gives delta_{k} = {} but the search found {found}",
                        entry.delta
                    )));
                }
                Some(found)
            }
            _ => None,
        };
        rows.push(SegreRow {
            k,
            s: entry.s,
            delta: entry.delta,
            provenance: entry.provenance,
            oracle_delta,
        });
    }
    let ctx = context(doc);
    let data = hn_data(doc, &ctx);
    let breakpoints = s_at_breakpoints(&data).into_iter().collect();
    Ok(Report::Segre(SegreReport {
        source,
        rank: table.rank(),
        degree: table.degree(),
        rows,
        breakpoints,
        oracle_seed,
    }))
}

fn run_endo(doc: &TaskDocument) -> Result<Report, RunError> {
    let twists = require_splitting(doc)?;
    let ctx = context(doc);
    let split = split_of(twists);
    let dim = end_dim(&split);
    let commutant_report = parsed_field(doc, ctx.gamma()).map(|phi| {
        let space = commutant(&phi);
        CommutantReport {
            dimension: space.dimension,
            contains_identity: space.contains_identity,
            simple: is_simple_pair(&phi),
            kinds: space.basis.iter().map(|f| endo_kind_name(f.kind())).collect(),
        }
    });
    Ok(Report::Endo(EndoReport {
        gamma: ctx.gamma(),
        splitting: splitting_string(twists),
        end_dim: dim,
        commutant: commutant_report,
    }))
}

// -------------------------------------------------------------------- sweep

pub const SWEEP_HN_HEADER: [&str; 6] = ["g", "m", "gamma", "profile", "verdict", "citation"];
pub const SWEEP_SPLIT_HEADER: [&str; 10] = [
    "g", "m", "gamma", "profile", "verdict", "citation", "delta", "e", "s_list", "endo_dim",
];

/// One grid point of a sweep, in document order.
#[derive(Debug, Clone)]
struct SweepPoint {
    genus: i64,
    marked_points: i64,
    bottom: Option<i64>,
}

fn sweep_points(doc: &TaskDocument, spec: &SweepSpec) -> Vec<SweepPoint> {
    let genus_vals = spec
        .genus
        .as_ref()
        .map_or_else(|| vec![i64::from(doc.genus)], |r| r.values());
    let m_vals = spec
        .marked_points
        .as_ref()
        .map_or_else(|| vec![i64::from(doc.marked_points)], |r| r.values());
    let bottom_vals: Vec<Option<i64>> = match (&spec.bottom_degree, &spec.bottom_twist) {
        (Some(r), _) => r.values().into_iter().map(Some).collect(),
        (_, Some(r)) => r.values().into_iter().map(Some).collect(),
        (None, None) => vec![None],
    };
    let mut points = Vec::new();
    for &genus in &genus_vals {
        for &marked_points in &m_vals {
            for &bottom in &bottom_vals {
                points.push(SweepPoint {
                    genus,
                    marked_points,
                    bottom,
                });
            }
        }
    }
    points
}

fn point_label(point: &SweepPoint, bottom_name: &str) -> String {
    match point.bottom {
        Some(b) => format!(
            "g={} m={} {bottom_name}={b}",
            point.genus, point.marked_points
        ),
        None => format!("g={} m={}", point.genus, point.marked_points),
    }
}

fn point_context(point: &SweepPoint) -> Result<CurveContext, String> {
    let genus = u32::try_from(point.genus).map_err(|_| "genus must be non-negative".to_string())?;
    let m = u32::try_from(point.marked_points)
        .map_err(|_| "marked_points must be non-negative".to_string())?;
    CurveContext::new(genus, m).map_err(|e| e.to_string())
}

fn eval_hn_point(base: &[(u32, i64)], point: &SweepPoint) -> Result<Vec<String>, String> {
    let ctx = point_context(point)?;
    let mut blocks = base.to_vec();
    if let Some(b) = point.bottom {
        let last = blocks.len() - 1;
        blocks[last].1 = b;
    }
    let data = validate_hn(&blocks, &ctx).map_err(|e| e.to_string())?;
    let verdict = classify(&ctx, &data).map_err(|e| e.to_string())?;
    Ok(vec![
        point.genus.to_string(),
        point.marked_points.to_string(),
        ctx.gamma().to_string(),
        profile_string(&blocks),
        kind_name(verdict.kind).to_string(),
        verdict.citation.to_string(),
    ])
}

fn eval_split_point(base: &[i64], point: &SweepPoint) -> Result<Vec<String>, String> {
    let ctx = point_context(point)?;
    if ctx.genus() != 0 {
        return Err("splitting profiles require genus 0".to_string());
    }
    let mut twists = base.to_vec();
    if let Some(b) = point.bottom {
        let last = twists.len() - 1;
        twists[last] = b;
    }
    let split = SplittingType::from_twists(&twists).map_err(|e| e.to_string())?;
    let data = split.hn_profile();
    let verdict = classify(&ctx, &data).map_err(|e| e.to_string())?;
    let delta = delta_dimension(&split, ctx.gamma());
    let e_str = match nilpotency_bound(&ctx, &data) {
        Ok(e) => e.to_string(),
        Err(_) => String::new(),
    };
    let table = segre_p1(&split);
    let mut s_list = String::new();
    for (k, entry) in table.entries() {
        if !s_list.is_empty() {
            s_list.push(';');
        }
        write!(s_list, "{k}:{}", entry.s).expect("string write");
    }
    Ok(vec![
        point.genus.to_string(),
        point.marked_points.to_string(),
        ctx.gamma().to_string(),
        splitting_string(&twists),
        kind_name(verdict.kind).to_string(),
        verdict.citation.to_string(),
        delta.to_string(),
        e_str,
        s_list,
        end_dim(&split).to_string(),
    ])
}

fn run_sweep(doc: &TaskDocument, opts: &Options) -> Result<Report, RunError> {
    let spec = doc.sweep.as_ref().expect("checked at parse time");
    let points = sweep_points(doc, spec);
    let (header, bottom_name): (Vec<&'static str>, &str) = match &doc.profile {
        Profile::Hn(_) => (SWEEP_HN_HEADER.to_vec(), "bottom_degree"),
        Profile::Splitting(_) => (SWEEP_SPLIT_HEADER.to_vec(), "bottom_twist"),
    };

    let eval = |point: &SweepPoint| -> Result<Vec<String>, String> {
        match &doc.profile {
            Profile::Hn(blocks) => eval_hn_point(blocks, point),
            Profile::Splitting(twists) => eval_split_point(twists, point),
        }
        .map_err(|reason| format!("rejected: {}: {reason}", point_label(point, bottom_name)))
    };

    let outcomes: Vec<Result<Vec<String>, String>> = if opts.jobs > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.jobs)
            .build()
            .map_err(|e| RunError::Internal(format!("worker pool: {e}")))?;
        pool.install(|| points.par_iter().map(eval).collect())
    } else {
        points.iter().map(eval).collect()
    };

    let mut rows = Vec::new();
    let mut warnings = Vec::new();
    for outcome in outcomes {
        match outcome {
            Ok(row) => rows.push(row),
            Err(warning) => warnings.push(warning),
        }
    }
    Ok(Report::Sweep(SweepReport {
        header,
        rows,
        warnings,
    }))
}
