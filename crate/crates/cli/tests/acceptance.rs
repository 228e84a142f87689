//! End-to-end acceptance gate. One test per criterion; each prints a single
//! PASS/FAIL line (visible with `--nocapture`) and enforces its time budget
//! in code. Budgets are wall-clock and deliberately generous next to the
//! measured times so they hold on slower machines.

use cohiggs_core::linalg::next_in_range;
use cohiggs_core::*;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

const GAMMAS: [i64; 4] = [-1, -2, -3, -4];

const BUDGET_1: Duration = Duration::from_secs(30);
const BUDGET_2: Duration = Duration::from_secs(60);
const BUDGET_3: Duration = Duration::from_secs(300);
const BUDGET_4: Duration = Duration::from_secs(1);
const BUDGET_5: Duration = Duration::from_secs(60);
const BUDGET_6: Duration = Duration::from_secs(120);
const BUDGET_7: Duration = Duration::from_secs(1);

/// Run one criterion body, print its pass/fail line, enforce the budget.
fn criterion(number: u32, label: &str, budget: Option<Duration>, body: impl FnOnce()) {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(body));
    let elapsed = start.elapsed();
    let in_budget = budget.map_or(true, |b| elapsed <= b);
    let status = if outcome.is_ok() && in_budget {
        "PASS"
    } else {
        "FAIL"
    };
    match budget {
        Some(b) => println!("criterion {number} ({label}): {status} in {elapsed:.2?} (budget {b:?})"),
        None => println!("criterion {number} ({label}): {status} in {elapsed:.2?}"),
    }
    if let Err(cause) = outcome {
        std::panic::resume_unwind(cause);
    }
    assert!(
        in_budget,
        "criterion {number} exceeded its time budget: {elapsed:?}"
    );
}

/// Genus-0 context with the marked-point count that realizes this gamma.
fn p1_context(gamma: i64) -> CurveContext {
    let m = u32::try_from(2 - gamma).expect("gamma < 0 gives m >= 3");
    CurveContext::new(0, m).expect("gamma < 0 by construction")
}

/// Every splitting type of rank <= max_rank with twists in [lo, hi].
fn all_splits(max_rank: usize, lo: i64, hi: i64) -> Vec<SplittingType> {
    fn extend(acc: &mut Vec<Vec<i64>>, prefix: Vec<i64>, max_rank: usize, lo: i64) {
        if prefix.len() == max_rank {
            return;
        }
        let cap = *prefix.last().expect("prefix starts non-empty");
        for next in lo..=cap {
            let mut longer = prefix.clone();
            longer.push(next);
            acc.push(longer.clone());
            extend(acc, longer, max_rank, lo);
        }
    }
    let mut lists = Vec::new();
    for first in lo..=hi {
        lists.push(vec![first]);
        extend(&mut lists, vec![first], max_rank, lo);
    }
    lists
        .into_iter()
        .map(|tw| SplittingType::from_twists(&tw).expect("descending by construction"))
        .collect()
}

/// Deterministic pseudo-random field with small integer coefficients.
fn seeded_field(split: &SplittingType, gamma: i64, seed: u64) -> CoHiggsFieldP1 {
    let mut state = seed;
    CoHiggsFieldP1::build(split.clone(), gamma, |_, _, d| {
        let coeffs = (0..=d).map(|_| int(next_in_range(&mut state, -3, 3))).collect();
        HomogPoly::new(d, coeffs).expect("coefficient count matches degree")
    })
    .expect("generated entries satisfy the degree rule")
}

/// Hom-space dimension counted monomial by monomial, independently of the
/// closed form and of the basis constructor.
fn monomial_count(split: &SplittingType, gamma: i64) -> usize {
    let a = split.flat_twists();
    let mut count = 0i64;
    for &ap in &a {
        for &aq in &a {
            count += (ap + gamma - aq + 1).max(0);
        }
    }
    usize::try_from(count).expect("count fits usize")
}

#[test]
fn criterion_1_hom_dimension_closed_form_basis_and_monomial_count_agree() {
    criterion(1, "hom-dimension triple agreement", Some(BUDGET_1), || {
        let mut configs = 0u64;
        for split in all_splits(5, -6, 6) {
            for gamma in GAMMAS {
                let closed = delta_dimension(&split, gamma);
                let basis = hom_basis(&split, gamma).len();
                let counted = monomial_count(&split, gamma);
                assert_eq!(closed, basis, "{split:?} gamma={gamma}");
                assert_eq!(closed, counted, "{split:?} gamma={gamma}");
                configs += 1;
            }
        }
        assert_eq!(configs, 8567 * 4, "exhaustive corpus size");
    });
}

#[test]
fn criterion_2_nilpotency_index_within_bound_and_power_vanishes() {
    criterion(2, "nilpotency bounds on seeded fields", Some(BUDGET_2), || {
        for split in all_splits(5, -6, 6) {
            let s = u32::try_from(split.block_count()).expect("small");
            let cap = default_nilpotency_cap(&split);
            for gamma in GAMMAS {
                let ctx = p1_context(gamma);
                let bound = nilpotency_bound(&ctx, &split.hn_profile()).ok();
                for seed in 0..100u64 {
                    let phi = seeded_field(&split, gamma, seed);
                    let index = nilpotency_index(&phi, cap)
                        .expect("triangular fields are nilpotent within rank+1");
                    match bound {
                        Some(e) => {
                            assert!(
                                index <= s.min(e + 1),
                                "{split:?} gamma={gamma} seed={seed}: index {index} > min({s}, {})",
                                e + 1
                            );
                            assert!(
                                iterate(&phi, e + 1).is_zero(),
                                "{split:?} gamma={gamma} seed={seed}: power e+1 must vanish"
                            );
                        }
                        None => {
                            // Slope gap too wide: the only field is zero.
                            assert!(phi.is_zero(), "{split:?} gamma={gamma}");
                            assert_eq!(index, 1);
                        }
                    }
                }
            }
        }
    });
}

#[test]
fn criterion_3_segre_table_matches_exhaustive_subsheaf_search() {
    criterion(3, "twist table vs subsheaf search", Some(BUDGET_3), || {
        for split in all_splits(4, -5, 5) {
            let table = segre_p1(&split);
            let r = split.rank();
            let d = split.degree();
            for k in 1..r {
                let delta = oracle_delta_p1(&split, k);
                let entry = table.get(k).expect("interior ranks are tabulated");
                assert_eq!(entry.delta, delta, "{split:?} k={k}");
                assert_eq!(entry.s, i64::from(k) * d - i64::from(r) * delta, "{split:?} k={k}");
            }
        }
    });
}

#[test]
fn criterion_4_trichotomy_on_pinned_two_block_profiles() {
    criterion(4, "existence trichotomy instances", Some(BUDGET_4), || {
        let genus2 = CurveContext::new(2, 0).expect("gamma = -2");
        let expectations = [
            (-1i64, VerdictKind::NoneForAll),
            (-2, VerdictKind::Mixed),
            (-4, VerdictKind::AllAdmit),
        ];
        for (bottom, expected) in expectations {
            let data = validate_hn(&[(1, 0), (1, bottom)], &genus2).expect("valid profile");
            let verdict = classify(&genus2, &data).expect("genus 2 never errors");
            assert_eq!(verdict.kind, expected, "bottom degree {bottom}");
        }

        let genus1 = CurveContext::new(1, 1).expect("gamma = -1");
        let data = validate_hn(&[(1, 0), (1, -1)], &genus1).expect("valid profile");
        let verdict = classify(&genus1, &data).expect("genus 1 never errors");
        assert_eq!(verdict.kind, VerdictKind::Mixed);
    });
}

#[test]
fn criterion_5_commutant_dimension_identity_and_scaling() {
    criterion(5, "commutant dimensions and invariances", Some(BUDGET_5), || {
        // Zero field: everything commutes, so the commutant is all of the
        // degree-0 endomorphism space.
        for split in all_splits(4, -3, 3) {
            for gamma in [-1i64, -2] {
                let zero = CoHiggsFieldP1::zero(split.clone(), gamma);
                let expected = end_dim(&split);
                let space = commutant(&zero);
                assert_eq!(space.dimension, expected, "{split:?} gamma={gamma}");
                assert!(space.contains_identity, "{split:?} gamma={gamma}");
                assert_eq!(commutant_dim(&zero), expected, "{split:?} gamma={gamma}");
            }
        }

        // Worked two-summand instance: twists (0, -3) at gamma = -2 admit a
        // degree-1 upper entry; any nonzero choice pins the diagonal scalars
        // together and leaves the full cubic slot free: 1 + 4 = 5.
        let split = SplittingType::from_twists(&[0, -3]).expect("descending");
        let phi = CoHiggsFieldP1::build(split, -2, |p, q, d| {
            if (p, q) == (0, 1) {
                HomogPoly::new(1, vec![int(1), int(0)]).expect("degree 1")
            } else {
                HomogPoly::zero(d)
            }
        })
        .expect("degree rule holds");
        let space = commutant(&phi);
        assert_eq!(space.dimension, 5);
        assert!(space.contains_identity);
        assert_eq!(commutant_dim(&phi), 5);

        // Scaling a field never changes its commutant.
        let shapes = [
            vec![3, 1, 0, -2],
            vec![2, 0, -3],
            vec![1, 1, -1],
            vec![4, 0, -1, -2],
            vec![0, -3],
        ];
        let mut checked = 0u32;
        for (i, tw) in shapes.iter().cycle().take(50).enumerate() {
            let split = SplittingType::from_twists(tw).expect("descending");
            let phi = seeded_field(&split, -2, i as u64);
            let space = commutant(&phi);
            assert!(space.contains_identity, "{tw:?} seed={i}");
            let scaled = phi.scale(&rat(-7, 3));
            assert_eq!(space.dimension, commutant_dim(&scaled), "{tw:?} seed={i}");
            checked += 1;
        }
        assert_eq!(checked, 50);
    });
}

#[test]
fn criterion_6_commutant_never_scalar_when_twists_scatter() {
    criterion(6, "non-simplicity across scattered twists", Some(BUDGET_6), || {
        for split in all_splits(5, -6, 6) {
            let tw = split.flat_twists();
            if split.block_count() < 2 || tw[0] - tw[tw.len() - 1] <= 1 {
                continue;
            }
            for gamma in GAMMAS {
                for phi in hom_basis(&split, gamma) {
                    assert!(
                        commutant_dim(&phi) >= 2,
                        "{split:?} gamma={gamma}: basis field has scalar commutant"
                    );
                }
            }
        }
    });
}

#[test]
fn criterion_7_corrected_bounds_differ_from_legacy_variants() {
    criterion(7, "legacy coefficient variants fail", Some(BUDGET_7), || {
        // Breakpoint values: the subtracted term carries the full rank r,
        // not the subsheaf rank. Profile (1,3;2,0): first breakpoint.
        let data = SplittingType::from_twists(&[3, 0, 0])
            .expect("descending")
            .hn_profile();
        let table = segre_p1(&SplittingType::from_twists(&[3, 0, 0]).expect("descending"));
        let rho = i64::from(data.rank_prefix(1));
        let d = data.degree();
        let r = i64::from(data.rank());
        let deg_f1 = data.degree_prefix(1);
        let corrected = rho * d - r * deg_f1;
        let legacy = rho * d - rho * deg_f1;
        let breakpoints = s_at_breakpoints(&data);
        assert_eq!(breakpoints.get(&1), Some(&corrected));
        assert_eq!(table.get(1).expect("k=1").s, corrected);
        assert_eq!(corrected, -6);
        assert_eq!(legacy, 0);
        assert_ne!(legacy, corrected, "legacy breakpoint coefficient must fail");

        // Partial-block bound, fully legacy variant: unnormalized d' and the
        // subsheaf-rank coefficient. Twists (2,0,0,-3), k=2 between the
        // breakpoints 1 and 3.
        let split = SplittingType::from_twists(&[2, 0, 0, -3]).expect("descending");
        let data = split.hn_profile();
        let (k, h) = (2u32, 1usize);
        let r_next = i64::from(data.blocks()[h].0);
        let d_next = data.blocks()[h].1;
        let r_prime = i64::from(k) - i64::from(data.rank_prefix(h));
        // e_inner = first Segre value of the next subquotient, here O(0)^2.
        let e_inner = segre_p1(&SplittingType::from_twists(&[0, 0]).expect("descending"))
            .get(1)
            .expect("rank-2 subquotient")
            .s;
        let corrected = s_upper_partial_block(&data, k, e_inner).expect("valid interior k");
        let exact = segre_p1(&split).get(k).expect("interior").s;
        assert_eq!(corrected, exact);
        assert_eq!(corrected, -10);
        let d_prime_legacy = r_prime * d_next - e_inner * r_next;
        let legacy = i64::from(k) * data.degree()
            - i64::from(k) * (data.degree_prefix(h) + d_prime_legacy);
        assert_eq!(legacy, -6);
        assert_ne!(legacy, exact, "legacy partial-block bound must fail");

        // Same bound, isolating only the unnormalized-d' defect (coefficient
        // kept correct). Twists (2,-1,-1,-3), k=2.
        let split = SplittingType::from_twists(&[2, -1, -1, -3]).expect("descending");
        let data = split.hn_profile();
        let e_inner = segre_p1(&SplittingType::from_twists(&[-1, -1]).expect("descending"))
            .get(1)
            .expect("rank-2 subquotient")
            .s;
        let corrected = s_upper_partial_block(&data, k, e_inner).expect("valid interior k");
        let exact = segre_p1(&split).get(k).expect("interior").s;
        assert_eq!(corrected, exact);
        assert_eq!(corrected, -10);
        let r_next = i64::from(data.blocks()[h].0);
        let d_next = data.blocks()[h].1;
        let d_prime_legacy = r_prime * d_next - e_inner * r_next;
        let legacy = i64::from(k) * data.degree()
            - i64::from(data.rank()) * (data.degree_prefix(h) + d_prime_legacy);
        assert_eq!(legacy, -6);
        assert_ne!(legacy, exact, "legacy d' normalization must fail");
    });
}

// ------------------------------------------------------------ determinism

struct Invocation {
    doc: &'static str,
    args: &'static [&'static str],
}

fn run_cli(task_path: &PathBuf, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cohiggs"))
        .arg(task_path)
        .args(args)
        .env_remove("COHIGGS_SEED")
        .output()
        .expect("binary runs")
}

#[test]
fn criterion_8_cli_output_is_byte_identical_across_repeat_runs() {
    criterion(8, "byte-identical reruns", None, || {
        let dir = std::env::temp_dir().join(format!("cohiggs-acceptance-{}", std::process::id()));
        std::fs::create_dir_all(&dir).expect("temp dir");
        let cases: &[Invocation] = &[
            Invocation {
                doc: r#"{"curve":{"genus":2,"marked_points":0},"profile":{"hn":[[1,0],[1,-2]]},"task":"classify"}"#,
                args: &[],
            },
            Invocation {
                doc: r#"{"curve":{"genus":0,"marked_points":4},"profile":{"splitting":[0,-3]},"task":"delta"}"#,
                args: &["--oracle"],
            },
            Invocation {
                doc: r#"{"curve":{"genus":0,"marked_points":4},"profile":{"splitting":[2,0,0,-3]},"task":"segre"}"#,
                args: &["--oracle", "--seed", "42"],
            },
            Invocation {
                doc: r#"{"curve":{"genus":0,"marked_points":4},"profile":{"splitting":[2,0,-3]},"task":"basis"}"#,
                args: &["--seed", "42"],
            },
            Invocation {
                doc: r#"{"curve":{"genus":0,"marked_points":4},"profile":{"splitting":[2,0,-3]},"task":"nilpotency","field":[[[],["1/2"],[1,0,0,0]],[[],[],[2,0]],[[],[],[]]]}"#,
                args: &[],
            },
            Invocation {
                doc: r#"{"curve":{"genus":0,"marked_points":4},"profile":{"splitting":[2,0,-3]},"task":"endo","field":[[[],["1/2"],[1,0,0,0]],[[],[],[2,0]],[[],[],[]]]}"#,
                args: &[],
            },
            Invocation {
                doc: r#"{"curve":{"genus":2,"marked_points":0},"profile":{"hn":[[1,0],[1,-1]]},"task":"sweep","sweep":{"bottom_degree":{"from":-6,"to":-1}}}"#,
                args: &["--jobs", "2"],
            },
            Invocation {
                doc: r#"{"curve":{"genus":0,"marked_points":3},"profile":{"splitting":[1,-2]},"task":"sweep","sweep":{"bottom_twist":{"from":-4,"to":-1},"marked_points":[3,4]}}"#,
                args: &[],
            },
        ];
        for (i, case) in cases.iter().enumerate() {
            let path = dir.join(format!("task-{i}.json"));
            std::fs::write(&path, case.doc).expect("write task file");
            for format in ["text", "json", "csv"] {
                let mut args: Vec<&str> = case.args.to_vec();
                args.push("--format");
                args.push(format);
                let first = run_cli(&path, &args);
                let second = run_cli(&path, &args);
                assert_eq!(
                    first.status.code(),
                    second.status.code(),
                    "case {i} format {format}: exit codes differ"
                );
                assert_eq!(first.status.code(), Some(0), "case {i} format {format}");
                assert_eq!(
                    first.stdout, second.stdout,
                    "case {i} format {format}: stdout differs between runs"
                );
                assert_eq!(
                    first.stderr, second.stderr,
                    "case {i} format {format}: stderr differs between runs"
                );
                assert!(!first.stdout.is_empty(), "case {i} format {format}");
            }
        }
        let _ = std::fs::remove_dir_all(&dir);
    });
}

// Guard: the corpus enumerator must stay in sync with the advertised
// corpus size asserted by criterion 1.
#[test]
fn corpus_enumerator_size_is_pinned() {
    assert_eq!(all_splits(5, -6, 6).len(), 8567);
}
