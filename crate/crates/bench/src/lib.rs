//! Shared corpus builders for the benchmark harness.

use cohiggs_core::linalg::next_in_range;
use cohiggs_core::*;

/// Every splitting type of rank <= max_rank with twists in [lo, hi].
pub fn all_splits(max_rank: usize, lo: i64, hi: i64) -> Vec<SplittingType> {
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
pub fn seeded_field(split: &SplittingType, gamma: i64, seed: u64) -> CoHiggsFieldP1 {
    let mut state = seed;
    CoHiggsFieldP1::build(split.clone(), gamma, |_, _, d| {
        let coeffs = (0..=d).map(|_| int(next_in_range(&mut state, -3, 3))).collect();
        HomogPoly::new(d, coeffs).expect("coefficient count matches degree")
    })
    .expect("generated entries satisfy the degree rule")
}
