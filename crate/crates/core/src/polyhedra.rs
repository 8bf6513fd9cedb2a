//! Exact rational convex geometry: cone membership with certificates,
//! norm minimization over polyhedra, and the facet/ray conversions used to
//! describe chambers of the GIT fan.
//!
//! Everything here is computed with arbitrary-precision rationals. The
//! quadratic programs are solved by enumerating active sets: for every
//! linearly independent set of inequality rows we minimize the objective on
//! the affine subspace where those rows are tight, and keep the best
//! feasible candidate. Strict convexity makes the optimum unique, and the
//! optimum is always one of the candidates.

use std::fmt;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::linalg;
use crate::rational::{self, int, IntVector, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyhedraError {
    #[error("dimension mismatch: expected rank {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("degenerate input: {0}")]
    Degenerate(&'static str),
    #[error("inner product matrix is not symmetric")]
    NotSymmetric,
    #[error("inner product matrix is not positive definite (leading minor {0} is not positive)")]
    NotPositiveDefinite(usize),
    #[error("integer overflow while clearing denominators")]
    Overflow,
}

/// Fixed-length vector of exact rationals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalVector(Vec<Rational>);

impl RationalVector {
    pub fn new(entries: Vec<Rational>) -> Self {
        Self(entries)
    }

    pub fn from_ints(entries: &[i64]) -> Self {
        Self(rational::to_rational_vec(entries))
    }

    pub fn zeros(rank: usize) -> Self {
        Self(vec![Rational::zero(); rank])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<Rational> {
        self.0
    }

    pub fn dot(&self, other: &RationalVector) -> Rational {
        rational::dot(&self.0, &other.0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        Self(self.0.iter().map(|x| x * factor).collect())
    }
}

impl fmt::Display for RationalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(rational::format_rational).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Symmetric positive definite form on the cocharacter lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InnerProduct {
    matrix: Vec<Vec<Rational>>,
}

impl InnerProduct {
    pub fn identity(rank: usize) -> Self {
        let matrix = (0..rank)
            .map(|i| (0..rank).map(|j| int(i64::from(i == j))).collect())
            .collect();
        Self { matrix }
    }

    /// Validates symmetry and positive definiteness (Sylvester's criterion).
    pub fn new(matrix: Vec<Vec<Rational>>) -> Result<Self, PolyhedraError> {
        let k = matrix.len();
        for row in &matrix {
            if row.len() != k {
                return Err(PolyhedraError::DimensionMismatch { expected: k, found: row.len() });
            }
        }
        for i in 0..k {
            for j in 0..i {
                if matrix[i][j] != matrix[j][i] {
                    return Err(PolyhedraError::NotSymmetric);
                }
            }
        }
        for size in 1..=k {
            let minor: Vec<Vec<Rational>> =
                matrix[..size].iter().map(|r| r[..size].to_vec()).collect();
            if !linalg::determinant(&minor).is_positive() {
                return Err(PolyhedraError::NotPositiveDefinite(size));
            }
        }
        Ok(Self { matrix })
    }

    pub fn rank(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &[Vec<Rational>] {
        &self.matrix
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.rank())
    }

    /// `Q v`
    pub fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        linalg::mat_vec(&self.matrix, v)
    }

    /// `vᵀ Q v`
    pub fn norm_squared(&self, v: &[Rational]) -> Rational {
        rational::dot(v, &self.apply(v))
    }

    pub fn norm_squared_int(&self, v: &[i64]) -> Rational {
        self.norm_squared(&rational::to_rational_vec(v))
    }
}

/// Polyhedral cone given by integer generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cone {
    rank: usize,
    generators: Vec<IntVector>,
}

impl Cone {
    /// Drops zero generators and exact duplicates, keeping first occurrences.
    pub fn new(rank: usize, generators: Vec<IntVector>) -> Result<Self, PolyhedraError> {
        let mut kept: Vec<IntVector> = Vec::new();
        for g in generators {
            if g.len() != rank {
                return Err(PolyhedraError::DimensionMismatch { expected: rank, found: g.len() });
            }
            if g.iter().all(|&x| x == 0) || kept.contains(&g) {
                continue;
            }
            kept.push(g);
        }
        Ok(Self { rank, generators: kept })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn generators(&self) -> &[IntVector] {
        &self.generators
    }

    /// Dimension of the linear span of the generators.
    pub fn dimension(&self) -> usize {
        let rows: Vec<Vec<Rational>> =
            self.generators.iter().map(|g| rational::to_rational_vec(g)).collect();
        linalg::rank(&rows, self.rank)
    }

    fn generator_sum(&self) -> Vec<Rational> {
        let mut s = vec![Rational::zero(); self.rank];
        for g in &self.generators {
            for (acc, &x) in s.iter_mut().zip(g) {
                *acc += int(x);
            }
        }
        s
    }
}

/// Outcome of a cone membership query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    /// Nonnegative coefficients (one per generator) reconstructing the point.
    /// The minimum-norm witness is returned, so it is unique.
    Contained { witness: Vec<Rational> },
    /// `⟨s, g⟩ ≤ 0` for every generator and `⟨s, point⟩ = 1`.
    Separated { separator: RationalVector },
}

impl Membership {
    pub fn is_contained(&self) -> bool {
        matches!(self, Membership::Contained { .. })
    }
}

/// Minimize `xᵀQx` subject to `⟨a_i, x⟩ ≥ b_i` and `⟨e_j, x⟩ = f_j`.
#[derive(Debug, Clone)]
pub struct QpProblem {
    objective: InnerProduct,
    inequalities: Vec<(RationalVector, Rational)>,
    equalities: Vec<(RationalVector, Rational)>,
}

impl QpProblem {
    pub fn new(objective: InnerProduct) -> Self {
        Self { objective, inequalities: Vec::new(), equalities: Vec::new() }
    }

    /// The Kempf problem: `⟨λ, a⟩ ≥ 0` for every normal `a`, `⟨λ, −χ⟩ = 1`.
    pub fn kempf(objective: InnerProduct, normals: &[&[i64]], chi: &[i64]) -> Self {
        let mut qp = Self::new(objective);
        for a in normals {
            qp = qp.inequality(RationalVector::from_ints(a), Rational::zero());
        }
        let neg: Vec<i64> = chi.iter().map(|x| -x).collect();
        qp.equality(RationalVector::from_ints(&neg), int(1))
    }

    pub fn inequality(mut self, normal: RationalVector, level: Rational) -> Self {
        self.inequalities.push((normal, level));
        self
    }

    pub fn equality(mut self, normal: RationalVector, level: Rational) -> Self {
        self.equalities.push((normal, level));
        self
    }

    pub fn rank(&self) -> usize {
        self.objective.rank()
    }

    pub fn objective(&self) -> &InnerProduct {
        &self.objective
    }

    pub fn inequalities(&self) -> &[(RationalVector, Rational)] {
        &self.inequalities
    }

    pub fn equalities(&self) -> &[(RationalVector, Rational)] {
        &self.equalities
    }

    fn check_ranks(&self) -> Result<(), PolyhedraError> {
        let k = self.rank();
        for (v, _) in self.inequalities.iter().chain(&self.equalities) {
            if v.rank() != k {
                return Err(PolyhedraError::DimensionMismatch { expected: k, found: v.rank() });
            }
        }
        Ok(())
    }

    pub fn is_feasible_point(&self, x: &RationalVector) -> bool {
        self.inequalities.iter().all(|(a, b)| a.dot(x) >= *b)
            && self.equalities.iter().all(|(e, f)| e.dot(x) == *f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QpOptimum {
    pub minimizer: RationalVector,
    pub value: Rational,
}

/// Exact minimizer of the quadratic program, or `None` when infeasible.
pub fn minimize_norm(problem: &QpProblem) -> Result<Option<QpOptimum>, PolyhedraError> {
    problem.check_ranks()?;
    let k = problem.rank();
    let eq_rows: Vec<Vec<Rational>> =
        problem.equalities.iter().map(|(e, _)| e.entries().to_vec()).collect();
    let eq_rhs: Vec<Rational> = problem.equalities.iter().map(|(_, f)| f.clone()).collect();
    if linalg::solve_affine(&eq_rows, &eq_rhs, k).is_none() {
        return Ok(None);
    }
    let base_rank = linalg::rank(&eq_rows, k);
    let mut search = ActiveSetSearch { problem, k, best: None };
    let mut active = Vec::new();
    search.visit(0, &mut active, &eq_rows, base_rank);
    Ok(search.best.map(|(x, value)| QpOptimum { minimizer: RationalVector::new(x), value }))
}

struct ActiveSetSearch<'a> {
    problem: &'a QpProblem,
    k: usize,
    best: Option<(Vec<Rational>, Rational)>,
}

impl ActiveSetSearch<'_> {
    fn visit(&mut self, start: usize, active: &mut Vec<usize>, rows: &[Vec<Rational>], rank: usize) {
        self.evaluate(active);
        if rank == self.k {
            return;
        }
        for i in start..self.problem.inequalities.len() {
            let mut extended = rows.to_vec();
            extended.push(self.problem.inequalities[i].0.entries().to_vec());
            if linalg::rank(&extended, self.k) == rank + 1 {
                active.push(i);
                self.visit(i + 1, active, &extended, rank + 1);
                active.pop();
            }
        }
    }

    fn evaluate(&mut self, active: &[usize]) {
        let p = self.problem;
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for (e, f) in &p.equalities {
            rows.push(e.entries().to_vec());
            rhs.push(f.clone());
        }
        for &i in active {
            rows.push(p.inequalities[i].0.entries().to_vec());
            rhs.push(p.inequalities[i].1.clone());
        }
        let Some((x0, kernel)) = linalg::solve_affine(&rows, &rhs, self.k) else {
            return;
        };
        let x = if kernel.is_empty() {
            x0
        } else {
            // Minimize over x0 + N y: (NᵀQN) y = −NᵀQ x0.
            let q_kernel: Vec<Vec<Rational>> =
                kernel.iter().map(|v| p.objective.apply(v)).collect();
            let q_x0 = p.objective.apply(&x0);
            let hessian: Vec<Vec<Rational>> = kernel
                .iter()
                .map(|u| q_kernel.iter().map(|qv| rational::dot(u, qv)).collect())
                .collect();
            let gradient: Vec<Rational> =
                kernel.iter().map(|u| -rational::dot(u, &q_x0)).collect();
            let y = linalg::solve_square(&hessian, &gradient)
                .expect("restricted positive definite form is nonsingular");
            let mut x = x0;
            for (coef, v) in y.iter().zip(&kernel) {
                for (xi, vi) in x.iter_mut().zip(v) {
                    *xi += coef * vi;
                }
            }
            x
        };
        let feasible = p
            .inequalities
            .iter()
            .all(|(a, b)| rational::dot(a.entries(), &x) >= *b);
        if !feasible {
            return;
        }
        let value = p.objective.norm_squared(&x);
        if self.best.as_ref().is_none_or(|(_, v)| value < *v) {
            self.best = Some((x, value));
        }
    }
}

/// Unique primitive integer vector on the ray through `v`.
pub fn primitive_direction(v: &RationalVector) -> Result<IntVector, PolyhedraError> {
    if v.is_zero() {
        return Err(PolyhedraError::Degenerate("zero vector has no direction"));
    }
    rational::primitive_integer(v.entries()).ok_or(PolyhedraError::Overflow)
}

/// Decides whether `point` is a nonnegative combination of the generators.
pub fn cone_contains(cone: &Cone, point: &RationalVector) -> Result<Membership, PolyhedraError> {
    if point.rank() != cone.rank {
        return Err(PolyhedraError::DimensionMismatch { expected: cone.rank, found: point.rank() });
    }
    let m = cone.generators.len();
    // Minimum-norm coefficients c ≥ 0 with Σ c_i g_i = point.
    let mut witness_qp = QpProblem::new(InnerProduct::identity(m));
    for i in 0..m {
        let mut e = vec![Rational::zero(); m];
        e[i] = int(1);
        witness_qp = witness_qp.inequality(RationalVector::new(e), Rational::zero());
    }
    for (r, target) in point.entries().iter().enumerate() {
        let row: Vec<Rational> = cone.generators.iter().map(|g| int(g[r])).collect();
        witness_qp = witness_qp.equality(RationalVector::new(row), target.clone());
    }
    if let Some(opt) = minimize_norm(&witness_qp)? {
        return Ok(Membership::Contained { witness: opt.minimizer.into_entries() });
    }
    let mut sep_qp = QpProblem::new(InnerProduct::identity(cone.rank));
    for g in &cone.generators {
        let neg: Vec<i64> = g.iter().map(|x| -x).collect();
        sep_qp = sep_qp.inequality(RationalVector::from_ints(&neg), Rational::zero());
    }
    sep_qp = sep_qp.equality(point.clone(), int(1));
    let opt = minimize_norm(&sep_qp)?.expect("Farkas alternative must hold");
    Ok(Membership::Separated { separator: opt.minimizer })
}

/// Whether `point` lies in the relative interior of the cone.
pub fn cone_relint_contains(cone: &Cone, point: &RationalVector) -> Result<bool, PolyhedraError> {
    if !cone_contains(cone, point)?.is_contained() {
        return Ok(false);
    }
    // On the relative boundary iff some supporting functional vanishes at the
    // point but not on the whole cone.
    let mut qp = QpProblem::new(InnerProduct::identity(cone.rank));
    for g in &cone.generators {
        qp = qp.inequality(RationalVector::from_ints(g), Rational::zero());
    }
    qp = qp
        .equality(point.clone(), Rational::zero())
        .equality(RationalVector::new(cone.generator_sum()), int(1));
    Ok(minimize_norm(&qp)?.is_none())
}

/// Whether `point` lies in the topological interior of the cone.
pub fn cone_interior_contains(cone: &Cone, point: &RationalVector) -> Result<bool, PolyhedraError> {
    Ok(cone.dimension() == cone.rank && cone_relint_contains(cone, point)?)
}

pub(crate) fn combinations(m: usize, r: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, m: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            if m - i < r - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, m, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, m, r, &mut Vec::new(), &mut out);
    out
}

/// Primitive normal of the hyperplane spanned by `rows`, if they span a
/// hyperplane of the rank-`k` space.
pub(crate) fn hyperplane_normal(rows: &[&IntVector], k: usize) -> Option<IntVector> {
    let m: Vec<Vec<Rational>> = rows.iter().map(|r| rational::to_rational_vec(r)).collect();
    let ns = linalg::nullspace(&m, k);
    if ns.len() != 1 {
        return None;
    }
    rational::primitive_integer(&ns[0])
}

/// Inward facet normals `n` (with `⟨n, g⟩ ≥ 0` on the cone) of a
/// full-dimensional cone.
pub fn facets(cone: &Cone) -> Result<Vec<IntVector>, PolyhedraError> {
    let k = cone.rank;
    if cone.dimension() != k {
        return Err(PolyhedraError::Degenerate("facets requested for a lower-dimensional cone"));
    }
    let mut out: Vec<IntVector> = Vec::new();
    for subset in combinations(cone.generators.len(), k - 1) {
        let rows: Vec<&IntVector> = subset.iter().map(|&i| &cone.generators[i]).collect();
        let Some(n) = hyperplane_normal(&rows, k) else { continue };
        let pairings: Vec<i64> = cone.generators.iter().map(|g| rational::dot_int(&n, g)).collect();
        let oriented = if pairings.iter().all(|&p| p >= 0) {
            n
        } else if pairings.iter().all(|&p| p <= 0) {
            n.iter().map(|x| -x).collect()
        } else {
            continue;
        };
        if !out.contains(&oriented) {
            out.push(oriented);
        }
    }
    out.sort();
    Ok(out)
}

/// Extreme rays of the pointed cone `{x : ⟨n_i, x⟩ ≥ 0}`, sorted.
pub fn extreme_rays(normals: &[IntVector], k: usize) -> Vec<IntVector> {
    let mut out: Vec<IntVector> = Vec::new();
    for subset in combinations(normals.len(), k - 1) {
        let rows: Vec<Vec<Rational>> =
            subset.iter().map(|&i| rational::to_rational_vec(&normals[i])).collect();
        let ns = linalg::nullspace(&rows, k);
        if ns.len() != 1 {
            continue;
        }
        let Some(d) = rational::primitive_integer(&ns[0]) else { continue };
        for cand in [d.clone(), d.iter().map(|x| -x).collect::<IntVector>()] {
            if normals.iter().all(|n| rational::dot_int(n, &cand) >= 0) && !out.contains(&cand) {
                out.push(cand);
            }
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn rv(v: &[i64]) -> RationalVector {
        RationalVector::from_ints(v)
    }

    #[test]
    fn positive_combination_of_basis() {
        let cone = Cone::new(2, vec![vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(
            cone_contains(&cone, &rv(&[2, 3])).unwrap(),
            Membership::Contained { witness: vec![int(2), int(3)] }
        );
    }

    #[test]
    fn opposite_ray_is_separated() {
        let cone = Cone::new(1, vec![vec![1]]).unwrap();
        assert_eq!(
            cone_contains(&cone, &rv(&[-1])).unwrap(),
            Membership::Separated { separator: rv(&[-1]) }
        );
    }

    #[test]
    fn minimum_norm_witness_is_returned() {
        let cone = Cone::new(2, vec![vec![1, 0], vec![1, 1], vec![-1, 1]]).unwrap();
        assert_eq!(
            cone_contains(&cone, &rv(&[0, 1])).unwrap(),
            Membership::Contained { witness: vec![int(0), ratio(1, 2), ratio(1, 2)] }
        );
    }

    #[test]
    fn rank_mismatch_is_reported() {
        let cone = Cone::new(2, vec![vec![1, 0]]).unwrap();
        assert_eq!(
            cone_contains(&cone, &rv(&[1])),
            Err(PolyhedraError::DimensionMismatch { expected: 2, found: 1 })
        );
        assert!(Cone::new(2, vec![vec![1]]).is_err());
    }

    #[test]
    fn cone_drops_zero_and_duplicate_generators() {
        let cone = Cone::new(2, vec![vec![0, 0], vec![1, 2], vec![1, 2], vec![3, 0]]).unwrap();
        assert_eq!(cone.generators(), &[vec![1, 2], vec![3, 0]]);
    }

    #[test]
    fn single_equality_closed_form() {
        let qp = QpProblem::kempf(InnerProduct::identity(1), &[], &[1]);
        let opt = minimize_norm(&qp).unwrap().unwrap();
        assert_eq!(opt.minimizer, rv(&[-1]));
        assert_eq!(opt.value, int(1));
    }

    #[test]
    fn contradictory_constraints_are_infeasible() {
        let qp = QpProblem::kempf(InnerProduct::identity(1), &[&[1]], &[1]);
        assert_eq!(minimize_norm(&qp).unwrap(), None);
    }

    #[test]
    fn two_dimensional_active_set() {
        // λ₁ − λ₂ ≥ 0, −λ₁ − λ₂ = 1
        let qp = QpProblem::new(InnerProduct::identity(2))
            .inequality(rv(&[1, -1]), int(0))
            .equality(rv(&[-1, -1]), int(1));
        let opt = minimize_norm(&qp).unwrap().unwrap();
        assert_eq!(opt.minimizer, RationalVector::new(vec![ratio(-1, 2), ratio(-1, 2)]));
        assert_eq!(opt.value, ratio(1, 2));
    }

    #[test]
    fn primitive_directions() {
        let v = RationalVector::new(vec![ratio(-1, 2), ratio(-1, 2)]);
        assert_eq!(primitive_direction(&v).unwrap(), vec![-1, -1]);
        assert_eq!(primitive_direction(&rv(&[4, 6])).unwrap(), vec![2, 3]);
        let axis = RationalVector::new(vec![int(0), ratio(-3, 7)]);
        assert_eq!(primitive_direction(&axis).unwrap(), vec![0, -1]);
        assert!(matches!(primitive_direction(&rv(&[0, 0])), Err(PolyhedraError::Degenerate(_))));
    }

    #[test]
    fn inner_product_validation() {
        assert!(InnerProduct::new(vec![vec![int(2), int(1)], vec![int(1), int(2)]]).is_ok());
        assert_eq!(
            InnerProduct::new(vec![vec![int(0)]]),
            Err(PolyhedraError::NotPositiveDefinite(1))
        );
        assert_eq!(
            InnerProduct::new(vec![vec![int(1), int(2)], vec![int(0), int(1)]]),
            Err(PolyhedraError::NotSymmetric)
        );
        assert_eq!(
            InnerProduct::new(vec![vec![int(1), int(2)], vec![int(2), int(1)]]),
            Err(PolyhedraError::NotPositiveDefinite(2))
        );
    }

    #[test]
    fn interior_and_relative_interior() {
        let quadrant = Cone::new(2, vec![vec![1, 0], vec![0, 1]]).unwrap();
        assert!(cone_interior_contains(&quadrant, &rv(&[1, 1])).unwrap());
        assert!(!cone_interior_contains(&quadrant, &rv(&[1, 0])).unwrap());
        let ray = Cone::new(2, vec![vec![1, 0]]).unwrap();
        assert!(cone_relint_contains(&ray, &rv(&[3, 0])).unwrap());
        assert!(!cone_interior_contains(&ray, &rv(&[3, 0])).unwrap());
        let origin = Cone::new(1, vec![]).unwrap();
        assert!(cone_relint_contains(&origin, &rv(&[0])).unwrap());
    }

    #[test]
    fn facets_and_rays_of_a_simplicial_cone() {
        let cone = Cone::new(2, vec![vec![1, 0], vec![1, 2]]).unwrap();
        let normals = facets(&cone).unwrap();
        assert_eq!(normals, vec![vec![0, 1], vec![2, -1]]);
        assert_eq!(extreme_rays(&normals, 2), vec![vec![1, 0], vec![1, 2]]);
        let half_line = Cone::new(1, vec![vec![3]]).unwrap();
        assert_eq!(facets(&half_line).unwrap(), vec![vec![1]]);
        assert_eq!(extreme_rays(&[vec![1]], 1), vec![vec![1]]);
    }
}
