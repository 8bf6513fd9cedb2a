//! Fixed inputs shared by the benchmarks.

use gitwin_core::gitcore::TorusActionProblem;
use gitwin_core::gradedmod::{GradedFreeComplex, WeightedRing};

/// Rank-three action on `A^6` with mixed-sign weights.
pub fn mixed_problem() -> TorusActionProblem {
    let weights = vec![
        vec![1, 0, -1],
        vec![0, 1, 2],
        vec![-1, -1, 0],
        vec![2, -1, 1],
        vec![1, 1, 1],
        vec![0, -2, 1],
    ];
    TorusActionProblem::standard(3, weights, vec![1, -1, 2]).expect("consistent shapes")
}

/// Weights of the rank-two action whose fan has several chambers.
pub fn fan_weights() -> Vec<Vec<i64>> {
    vec![vec![1, 0], vec![0, 1], vec![1, 1], vec![-1, 1], vec![1, -2], vec![-1, -1]]
}

/// `O(q)` over `k[x, y, z]`.
pub fn twist(q: i64) -> GradedFreeComplex {
    GradedFreeComplex::free_module(WeightedRing::standard(3), q)
}
