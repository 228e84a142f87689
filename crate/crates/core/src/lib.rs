//! Exact arithmetic for twisted endomorphisms of filtered bundles on curves.
//!
//! Everything is computed over arbitrary-precision rationals; no floats
//! appear anywhere. The crate has three layers:
//!
//! * slope arithmetic on numeric filtration profiles ([`hn`], [`classify`]),
//!   valid on a curve of any genus with marked points;
//! * an exact engine for split bundles on the projective line ([`poly`],
//!   [`split`], [`field`]): twisted endomorphism spaces, iteration,
//!   nilpotency, generic rank, invariant subbundles;
//! * discriminant-style tables and endomorphism algebras built on top
//!   ([`segre`], [`endo`]).

pub mod classify;
pub mod curve;
pub mod endo;
pub mod field;
pub mod hn;
pub mod linalg;
pub mod poly;
pub mod rational;
pub mod segre;
pub mod split;

pub use classify::{
    classify, gcd_vanishing, splitting_guarantee, two_nilpotent_guarantee, ClassifyError,
    ProfileTooShort, SplittingGuarantee, Verdict, VerdictKind,
};
pub use curve::{euler_char, CurveContext, CurveError};
pub use endo::{
    commutant, commutant_dim, end_dim, is_simple_pair, nonsimplicity_certificate, EndoKind,
    EndoSpace, Endomorphism,
};
pub use field::{
    compose, default_nilpotency_cap, delta_dimension, generic_rank, generic_rank_seeded,
    hom_basis, invariant_subbundle_check, iterate, nilpotency_index, CoHiggsFieldP1, FieldError,
    NotNilpotentWithin, ShiftedField, DEFAULT_SEED,
};
pub use hn::{
    ell_indices, index_maps, necessary_condition, nilpotency_bound, rank3_branch, validate_hn,
    HNData, HnError, IndexMaps, NecessaryConditionFails, OrderViolation, Rank3Branch, Rank3Case,
};
pub use poly::{HomogPoly, PolyError};
pub use segre::{
    delta_composition, delta_intermediate_bound, delta_tail, kernel_image_witness,
    oracle_delta_p1, oracle_delta_p1_seeded, oracle_delta_p1_widened, p1_subquotient_deltas,
    p1_tail_deltas, s_at_breakpoints, s_upper_partial_block, segre_complete, segre_p1,
    NotTwoNilpotent, SegreEntry, SegreError, SegreTable,
};
pub use rational::{format_rational, int, parse_rational, rat, Rational};
pub use split::{decompose_pm, SplitError, SplittingType};
