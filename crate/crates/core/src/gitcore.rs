//! Semistability, Kempf-optimal destabilizers and the Kempf–Ness
//! stratification for a linear torus action on affine space.
//!
//! Stability of a point only depends on which coordinates are nonzero, so
//! everything is computed per coordinate support. Supports are grouped by
//! their optimal destabilizer; for a linear action every such group is one
//! stratum.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::polyhedra::{
    cone_interior_contains, minimize_norm, primitive_direction, Cone, InnerProduct,
    PolyhedraError, QpProblem, RationalVector,
};
use crate::rational::{self, IntVector, Rational};

/// Largest affine dimension accepted (supports are stored as bitmasks).
pub const MAX_DIM: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GitError {
    #[error(transparent)]
    Polyhedra(#[from] PolyhedraError),
    #[error("weight row {row} has length {found}, expected {expected}")]
    WeightShape { row: usize, expected: usize, found: usize },
    #[error("linearization has length {found}, expected {expected}")]
    LinearizationShape { expected: usize, found: usize },
    #[error("inner product has rank {found}, expected {expected}")]
    InnerProductShape { expected: usize, found: usize },
    #[error("affine dimension {0} exceeds the supported maximum")]
    TooManyCoordinates(usize),
    #[error("torus rank must be positive")]
    ZeroRank,
    #[error("support {support} mentions coordinates outside 0..{dim}")]
    SupportOutOfRange { support: Support, dim: usize },
    #[error("stratum does not belong to this problem: {0}")]
    StratumMismatch(&'static str),
}

/// Set of coordinate indices (0-based) that are allowed to be nonzero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Support(u32);

impl Support {
    pub const EMPTY: Support = Support(0);

    pub fn from_bits(bits: u32) -> Self {
        Support(bits)
    }

    pub fn full(dim: usize) -> Self {
        Support(if dim >= 32 { u32::MAX } else { (1u32 << dim) - 1 })
    }

    pub fn from_indices(indices: &[usize]) -> Self {
        Support(indices.iter().fold(0, |acc, &j| acc | (1 << j)))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn contains(self, j: usize) -> bool {
        self.0 >> j & 1 == 1
    }

    pub fn insert(self, j: usize) -> Self {
        Support(self.0 | (1 << j))
    }

    pub fn is_subset(self, other: Support) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn indices(self) -> Vec<usize> {
        (0..32).filter(|&j| self.contains(j)).collect()
    }

    /// Every support of `{0..dim}`, in increasing bitmask order.
    pub fn all(dim: usize) -> impl Iterator<Item = Support> {
        (0..1u32 << dim).map(Support)
    }

    /// Every subset of `self`, in increasing bitmask order.
    pub fn subsets(self) -> Vec<Support> {
        Support::all(32 - self.0.leading_zeros() as usize)
            .filter(|s| s.is_subset(self))
            .collect()
    }
}

impl fmt::Display for Support {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.indices().iter().map(ToString::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// Linear action of a rank-`k` torus on `A^n` with linearization `χ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusActionProblem {
    rank: usize,
    weights: Vec<IntVector>,
    linearization: IntVector,
    inner_product: InnerProduct,
}

impl TorusActionProblem {
    pub fn new(
        rank: usize,
        weights: Vec<IntVector>,
        linearization: IntVector,
        inner_product: InnerProduct,
    ) -> Result<Self, GitError> {
        if rank == 0 {
            return Err(GitError::ZeroRank);
        }
        if weights.len() > MAX_DIM {
            return Err(GitError::TooManyCoordinates(weights.len()));
        }
        for (row, a) in weights.iter().enumerate() {
            if a.len() != rank {
                return Err(GitError::WeightShape { row, expected: rank, found: a.len() });
            }
        }
        if linearization.len() != rank {
            return Err(GitError::LinearizationShape { expected: rank, found: linearization.len() });
        }
        if inner_product.rank() != rank {
            return Err(GitError::InnerProductShape { expected: rank, found: inner_product.rank() });
        }
        Ok(Self { rank, weights, linearization, inner_product })
    }

    /// Problem with the identity inner product.
    pub fn standard(rank: usize, weights: Vec<IntVector>, linearization: IntVector) -> Result<Self, GitError> {
        Self::new(rank, weights, linearization, InnerProduct::identity(rank))
    }

    /// Rank-one problem with scalar weights.
    pub fn rank_one(weights: &[i64], linearization: i64) -> Self {
        Self::standard(1, weights.iter().map(|&a| vec![a]).collect(), vec![linearization])
            .expect("rank-one data is well formed")
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[IntVector] {
        &self.weights
    }

    pub fn linearization(&self) -> &[i64] {
        &self.linearization
    }

    pub fn inner_product(&self) -> &InnerProduct {
        &self.inner_product
    }

    pub fn with_linearization(&self, linearization: IntVector) -> Result<Self, GitError> {
        Self::new(self.rank, self.weights.clone(), linearization, self.inner_product.clone())
    }

    fn check_support(&self, support: Support) -> Result<(), GitError> {
        if support.is_subset(Support::full(self.dim())) {
            Ok(())
        } else {
            Err(GitError::SupportOutOfRange { support, dim: self.dim() })
        }
    }

    pub(crate) fn support_cone(&self, support: Support) -> Cone {
        let gens = support.indices().iter().map(|&j| self.weights[j].clone()).collect();
        Cone::new(self.rank, gens).expect("weights have the ambient rank")
    }

    /// `⟨λ, a_j⟩` for every coordinate.
    pub fn pairings(&self, lambda: &[i64]) -> Vec<i64> {
        self.weights.iter().map(|a| rational::dot_int(lambda, a)).collect()
    }

    pub fn invariant(&self, lambda: &[i64]) -> NumericalInvariant {
        NumericalInvariant {
            pairing: rational::int(-rational::dot_int(lambda, &self.linearization)),
            norm_squared: self.inner_product.norm_squared_int(lambda),
        }
    }
}

/// `μ = pairing / |λ|` kept as the exact pair (pairing, |λ|²).
#[derive(Debug, Clone)]
pub struct NumericalInvariant {
    pub pairing: Rational,
    pub norm_squared: Rational,
}

impl NumericalInvariant {
    /// `sign(μ) · μ²`.
    pub fn signed_mu_squared(&self) -> Rational {
        let sq = &self.pairing * &self.pairing / &self.norm_squared;
        if self.pairing.is_negative() {
            -sq
        } else {
            sq
        }
    }

    pub fn sign(&self) -> i32 {
        rational::sign(&self.pairing)
    }
}

impl Ord for NumericalInvariant {
    fn cmp(&self, other: &Self) -> Ordering {
        let (s, t) = (self.sign(), other.sign());
        if s != t {
            return s.cmp(&t);
        }
        let lhs = &self.pairing * &self.pairing * &other.norm_squared;
        let rhs = &other.pairing * &other.pairing * &self.norm_squared;
        if s >= 0 {
            lhs.cmp(&rhs)
        } else {
            rhs.cmp(&lhs)
        }
    }
}

impl PartialOrd for NumericalInvariant {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for NumericalInvariant {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for NumericalInvariant {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SupportClass {
    Stable,
    StrictlySemistable,
    Unstable { lambda: IntVector, mu: NumericalInvariant },
}

impl SupportClass {
    pub fn is_semistable(&self) -> bool {
        !matches!(self, SupportClass::Unstable { .. })
    }
}

/// Kempf-optimal destabilizing 1-PS of the support, or `None` if semistable.
pub fn optimal_destabilizer(
    problem: &TorusActionProblem,
    support: Support,
) -> Result<Option<(IntVector, NumericalInvariant)>, GitError> {
    problem.check_support(support)?;
    let normals: Vec<&[i64]> =
        support.indices().iter().map(|&j| problem.weights[j].as_slice()).collect();
    let qp = QpProblem::kempf(problem.inner_product.clone(), &normals, &problem.linearization);
    let Some(opt) = minimize_norm(&qp)? else {
        return Ok(None);
    };
    let lambda = primitive_direction(&opt.minimizer)?;
    let mu = problem.invariant(&lambda);
    Ok(Some((lambda, mu)))
}

pub fn classify_support(problem: &TorusActionProblem, support: Support) -> Result<SupportClass, GitError> {
    if let Some((lambda, mu)) = optimal_destabilizer(problem, support)? {
        return Ok(SupportClass::Unstable { lambda, mu });
    }
    let chi = RationalVector::from_ints(&problem.linearization);
    if cone_interior_contains(&problem.support_cone(support), &chi)? {
        Ok(SupportClass::Stable)
    } else {
        Ok(SupportClass::StrictlySemistable)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stratum {
    pub lambda: IntVector,
    pub mu: NumericalInvariant,
    /// Coordinates with `⟨λ, a_j⟩ = 0`.
    pub fixed_coords: Support,
    /// Coordinates with `⟨λ, a_j⟩ ≥ 0`.
    pub blade_coords: Support,
    /// Unstable supports whose optimal destabilizer is `lambda`, sorted.
    pub member_supports: Vec<Support>,
    pub eta: i64,
    pub omega_weight: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stratification {
    /// Decreasing μ; ties broken by λ then by member supports.
    pub strata: Vec<Stratum>,
    pub semistable_supports: Vec<Support>,
    /// The semistable supports that are not stable.
    pub strictly_semistable_supports: Vec<Support>,
}

impl Stratification {
    pub fn all_semistable(&self) -> bool {
        self.strata.is_empty()
    }

    /// Index of the stratum containing `support`, or `None` if semistable.
    pub fn stratum_of(&self, support: Support) -> Option<usize> {
        self.strata.iter().position(|s| s.member_supports.binary_search(&support).is_ok())
    }
}

/// `(η, ω-weight)` of the 1-PS `lambda`.
pub fn eta_and_omega(problem: &TorusActionProblem, lambda: &[i64]) -> (i64, i64) {
    let pairings = problem.pairings(lambda);
    let eta = pairings.iter().filter(|&&p| p < 0).map(|p| -p).sum();
    (eta, pairings.iter().sum())
}

fn coordinate_sets(problem: &TorusActionProblem, lambda: &[i64]) -> (Support, Support) {
    let pairings = problem.pairings(lambda);
    let fixed = (0..pairings.len()).filter(|&j| pairings[j] == 0).collect::<Vec<_>>();
    let blade = (0..pairings.len()).filter(|&j| pairings[j] >= 0).collect::<Vec<_>>();
    (Support::from_indices(&fixed), Support::from_indices(&blade))
}

pub fn kn_stratification(problem: &TorusActionProblem) -> Result<Stratification, GitError> {
    let mut groups: BTreeMap<IntVector, (NumericalInvariant, Vec<Support>)> = BTreeMap::new();
    let mut semistable = Vec::new();
    let mut strictly = Vec::new();
    for support in Support::all(problem.dim()) {
        match classify_support(problem, support)? {
            SupportClass::Unstable { lambda, mu } => {
                groups.entry(lambda).or_insert_with(|| (mu, Vec::new())).1.push(support);
            }
            SupportClass::Stable => semistable.push(support),
            SupportClass::StrictlySemistable => {
                semistable.push(support);
                strictly.push(support);
            }
        }
    }
    let mut strata: Vec<Stratum> = groups
        .into_iter()
        .map(|(lambda, (mu, member_supports))| {
            let (fixed_coords, blade_coords) = coordinate_sets(problem, &lambda);
            let (eta, omega_weight) = eta_and_omega(problem, &lambda);
            Stratum { lambda, mu, fixed_coords, blade_coords, member_supports, eta, omega_weight }
        })
        .collect();
    strata.sort_by(|x, y| {
        y.mu.cmp(&x.mu)
            .then_with(|| x.lambda.cmp(&y.lambda))
            .then_with(|| x.member_supports.cmp(&y.member_supports))
    });
    Ok(Stratification { strata, semistable_supports: semistable, strictly_semistable_supports: strictly })
}

/// Recomputes `(η, ω-weight, μ)` of a stratum from the problem data.
pub fn stratum_invariants(
    problem: &TorusActionProblem,
    stratum: &Stratum,
) -> Result<(i64, i64, NumericalInvariant), GitError> {
    if stratum.lambda.len() != problem.rank() {
        return Err(GitError::StratumMismatch("1-PS has the wrong rank"));
    }
    if rational::primitive_int(&stratum.lambda).as_ref() != Some(&stratum.lambda) {
        return Err(GitError::StratumMismatch("1-PS is not primitive"));
    }
    let (fixed, blade) = coordinate_sets(problem, &stratum.lambda);
    if fixed != stratum.fixed_coords || blade != stratum.blade_coords {
        return Err(GitError::StratumMismatch("coordinate sets disagree with the weights"));
    }
    let mu = problem.invariant(&stratum.lambda);
    if !mu.pairing.is_positive() || mu.norm_squared.is_zero() {
        return Err(GitError::StratumMismatch("1-PS does not destabilize"));
    }
    let (eta, omega) = eta_and_omega(problem, &stratum.lambda);
    Ok((eta, omega, mu))
}
