//! Variation of GIT: the chamber structure of the space of linearizations
//! and the analysis of a single wall crossing.
//!
//! Chambers are found from the hyperplane arrangement spanned by the weights.
//! A generic character determines the set of simplicial weight cones that
//! contain it, and the chamber through it is the intersection of those cones.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::gitcore::{kn_stratification, GitError, Stratification, Stratum, Support, TorusActionProblem};
use crate::linalg;
use crate::polyhedra::{
    combinations, cone_relint_contains, extreme_rays, facets, hyperplane_normal, minimize_norm,
    Cone, InnerProduct, QpProblem, RationalVector,
};
use crate::rational::{self, int, IntVector, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VgitError {
    #[error(transparent)]
    Git(#[from] GitError),
    #[error("weights span a space of rank {span} < {rank}; the fan is degenerate")]
    DegenerateFan { rank: usize, span: usize },
    #[error("linearization is not on a wall (it is {0})")]
    NotOnWall(LinearizationClass),
    #[error("linearization is not in the relative interior of a codimension-one wall")]
    WallCodimension,
    #[error("direction has length {found}, expected {expected}")]
    DirectionShape { expected: usize, found: usize },
    #[error("direction is tangent to the wall: {0} lies on a wall")]
    TangentDirection(&'static str),
}

impl VgitError {
    /// Errors caused by the caller's choice of wall or direction.
    pub fn is_precondition(&self) -> bool {
        !matches!(self, VgitError::Git(_))
    }
}

/// Open full-dimensional chamber, stored by its closure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chamber {
    /// Extreme rays, sorted.
    pub rays: Vec<IntVector>,
    /// Inward facet normals, sorted.
    pub facets: Vec<IntVector>,
    /// An integer point of the interior.
    pub interior_point: IntVector,
}

impl Chamber {
    pub fn cone(&self) -> Cone {
        Cone::new(self.rays[0].len(), self.rays.clone()).expect("rays share a rank")
    }

    /// Whether `chi` lies in the open chamber.
    pub fn interior_contains(&self, chi: &[i64]) -> bool {
        self.facets.iter().all(|n| rational::dot_int(n, chi) > 0)
    }
}

/// Codimension-one face shared by (or bounding) chambers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Wall {
    pub rays: Vec<IntVector>,
    /// Primitive normal with first nonzero entry positive.
    pub normal: IntVector,
    /// One index for a wall on the boundary of the effective cone, two otherwise.
    pub adjacent_chambers: Vec<usize>,
}

impl Wall {
    pub fn cone(&self, rank: usize) -> Cone {
        Cone::new(rank, self.rays.clone()).expect("rays share a rank")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GitFan {
    pub rank: usize,
    pub effective_cone: Cone,
    pub chambers: Vec<Chamber>,
    pub walls: Vec<Wall>,
}

impl GitFan {
    /// Chambers whose interior contains `chi`.
    pub fn chambers_containing(&self, chi: &[i64]) -> Vec<usize> {
        (0..self.chambers.len()).filter(|&i| self.chambers[i].interior_contains(chi)).collect()
    }
}

fn canonical_sign(mut v: IntVector) -> IntVector {
    if v.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
        v.iter_mut().for_each(|x| *x = -*x);
    }
    v
}

/// Hyperplanes spanned by the weights, as canonical primitive normals.
pub fn arrangement(rank: usize, weights: &[IntVector]) -> Vec<IntVector> {
    let nonzero: Vec<&IntVector> = weights.iter().filter(|a| a.iter().any(|&x| x != 0)).collect();
    let mut out: Vec<IntVector> = Vec::new();
    for subset in combinations(nonzero.len(), rank - 1) {
        let rows: Vec<&IntVector> = subset.iter().map(|&i| nonzero[i]).collect();
        if let Some(n) = hyperplane_normal(&rows, rank) {
            let n = canonical_sign(n);
            if !out.contains(&n) {
                out.push(n);
            }
        }
    }
    out.sort();
    out
}

/// One integer interior point for every full-dimensional region of the
/// arrangement, in sign-vector order.
fn arrangement_regions(rank: usize, normals: &[IntVector]) -> Vec<IntVector> {
    fn point_for(rank: usize, normals: &[IntVector], signs: &[i64]) -> Option<Vec<Rational>> {
        let mut qp = QpProblem::new(InnerProduct::identity(rank));
        for (n, &s) in normals.iter().zip(signs) {
            let v: Vec<i64> = n.iter().map(|x| s * x).collect();
            qp = qp.inequality(RationalVector::from_ints(&v), int(1));
        }
        minimize_norm(&qp).expect("ranks agree").map(|o| o.minimizer.into_entries())
    }
    fn rec(
        rank: usize,
        normals: &[IntVector],
        signs: &mut Vec<i64>,
        point: Vec<Rational>,
        out: &mut Vec<IntVector>,
    ) {
        if signs.len() == normals.len() {
            out.push(rational::primitive_integer(&point).expect("interior points are nonzero"));
            return;
        }
        let n = rational::to_rational_vec(&normals[signs.len()]);
        let side = rational::sign(&rational::dot(&n, &point));
        for s in [1i64, -1] {
            signs.push(s);
            // The current point is reused when it already lies strictly on this side.
            let next = if side == s as i32 {
                Some(point.clone())
            } else {
                point_for(rank, &normals[..signs.len()], signs)
            };
            if let Some(p) = next {
                rec(rank, normals, signs, p, out);
            }
            signs.pop();
        }
    }
    let mut out = Vec::new();
    let start = point_for(rank, &[], &[]).expect("empty system is feasible");
    rec(rank, normals, &mut Vec::new(), start, &mut out);
    out
}

/// Bases of the weight matrix whose simplicial cone contains `chi`.
fn containing_bases(rank: usize, weights: &[IntVector], chi: &[i64]) -> Vec<Vec<usize>> {
    let chi = rational::to_rational_vec(chi);
    combinations(weights.len(), rank)
        .into_iter()
        .filter(|basis| {
            // Columns are the basis weights.
            let m: Vec<Vec<Rational>> = (0..rank)
                .map(|r| basis.iter().map(|&j| int(weights[j][r])).collect())
                .collect();
            match linalg::solve_square(&m, &chi) {
                Some(coeffs) => coeffs.iter().all(|c| c >= &Rational::zero()),
                None => false,
            }
        })
        .collect()
}

pub fn git_fan(rank: usize, weights: &[IntVector]) -> Result<GitFan, VgitError> {
    let effective_cone = Cone::new(rank, weights.to_vec()).map_err(GitError::from)?;
    let span = effective_cone.dimension();
    if span < rank {
        return Err(VgitError::DegenerateFan { rank, span });
    }
    let normals = arrangement(rank, weights);
    let mut by_bases: BTreeMap<Vec<Vec<usize>>, IntVector> = BTreeMap::new();
    for point in arrangement_regions(rank, &normals) {
        let bases = containing_bases(rank, weights, &point);
        if !bases.is_empty() {
            by_bases.entry(bases).or_insert(point);
        }
    }
    let mut chambers = Vec::new();
    for (bases, interior_point) in by_bases {
        let mut h: Vec<IntVector> = Vec::new();
        for basis in &bases {
            let cone = Cone::new(rank, basis.iter().map(|&j| weights[j].clone()).collect())
                .map_err(GitError::from)?;
            for n in facets(&cone).map_err(GitError::from)? {
                if !h.contains(&n) {
                    h.push(n);
                }
            }
        }
        let rays = extreme_rays(&h, rank);
        let closure = Cone::new(rank, rays.clone()).map_err(GitError::from)?;
        let facets = facets(&closure).map_err(GitError::from)?;
        chambers.push(Chamber { rays, facets, interior_point });
    }
    chambers.sort_by(|a, b| a.rays.cmp(&b.rays));

    let mut walls: BTreeMap<Vec<IntVector>, Wall> = BTreeMap::new();
    for (idx, chamber) in chambers.iter().enumerate() {
        for n in &chamber.facets {
            let rays: Vec<IntVector> = chamber
                .rays
                .iter()
                .filter(|r| rational::dot_int(n, r) == 0)
                .cloned()
                .collect();
            walls
                .entry(rays.clone())
                .or_insert_with(|| Wall {
                    rays,
                    normal: canonical_sign(n.clone()),
                    adjacent_chambers: Vec::new(),
                })
                .adjacent_chambers
                .push(idx);
        }
    }
    Ok(GitFan { rank, effective_cone, chambers, walls: walls.into_values().collect() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinearizationClass {
    ChamberInterior,
    OnWall,
    OutsideEffectiveCone,
}

impl LinearizationClass {
    pub fn as_str(self) -> &'static str {
        match self {
            LinearizationClass::ChamberInterior => "chamber_interior",
            LinearizationClass::OnWall => "on_wall",
            LinearizationClass::OutsideEffectiveCone => "outside_effective_cone",
        }
    }
}

impl fmt::Display for LinearizationClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

fn class_of(st: &Stratification) -> LinearizationClass {
    if st.semistable_supports.is_empty() {
        LinearizationClass::OutsideEffectiveCone
    } else if st.strictly_semistable_supports.iter().any(|s| !s.is_empty()) {
        LinearizationClass::OnWall
    } else {
        LinearizationClass::ChamberInterior
    }
}

pub fn classify_linearization(problem: &TorusActionProblem) -> Result<LinearizationClass, VgitError> {
    Ok(class_of(&kn_stratification(problem)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Equivalence,
    EmbedMinusIntoPlus,
    EmbedPlusIntoMinus,
    Indeterminate,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Equivalence => "equivalence",
            Verdict::EmbedMinusIntoPlus => "embed_minus_into_plus",
            Verdict::EmbedPlusIntoMinus => "embed_plus_into_minus",
            Verdict::Indeterminate => "indeterminate",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A plus-side stratum matched with the minus-side stratum of the inverse 1-PS.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StratumPair {
    pub lambda_plus: IntVector,
    pub lambda_minus: IntVector,
    pub eta_plus: i64,
    pub eta_minus: i64,
    pub fixed_coords: Support,
    /// Weight of the canonical bundle along the fixed locus with respect to
    /// the minus-side 1-PS; equals `eta_plus − eta_minus`.
    pub omega_weight: i64,
    /// Whether both strata also have identical member supports.
    pub member_supports_match: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WallCrossingReport {
    pub wall_point: IntVector,
    pub direction: IntVector,
    /// The sides are `χ₀ ± ε χ′`.
    pub epsilon: Rational,
    /// Integer characters on the rays of `χ₀ ± ε χ′`.
    pub chi_plus: IntVector,
    pub chi_minus: IntVector,
    /// Strata of each side lying in the semistable locus of `χ₀`, with member
    /// supports restricted to that locus.
    pub plus_strata: Vec<Stratum>,
    pub minus_strata: Vec<Stratum>,
    /// One side lies outside the effective cone.
    pub one_sided: bool,
    pub balanced: bool,
    pub pairs: Vec<StratumPair>,
    pub verdict: Verdict,
    pub cy_shortcut: bool,
}

fn restrict_strata(st: &Stratification, semistable: &[Support]) -> Vec<Stratum> {
    st.strata
        .iter()
        .filter_map(|s| {
            let members: Vec<Support> = s
                .member_supports
                .iter()
                .filter(|m| semistable.binary_search(m).is_ok())
                .copied()
                .collect();
            (!members.is_empty()).then(|| Stratum { member_supports: members, ..s.clone() })
        })
        .collect()
}

pub fn wall_crossing_report(
    problem: &TorusActionProblem,
    direction: &[i64],
) -> Result<WallCrossingReport, VgitError> {
    let k = problem.rank();
    if direction.len() != k {
        return Err(VgitError::DirectionShape { expected: k, found: direction.len() });
    }
    let chi0 = problem.linearization().to_vec();
    let at_wall = kn_stratification(problem)?;
    let class = class_of(&at_wall);
    if class != LinearizationClass::OnWall {
        return Err(VgitError::NotOnWall(class));
    }
    let fan = git_fan(k, problem.weights())?;
    let chi0_vec = RationalVector::from_ints(&chi0);
    let mut on_codim_one = false;
    for wall in &fan.walls {
        if cone_relint_contains(&wall.cone(k), &chi0_vec).map_err(GitError::from)? {
            on_codim_one = true;
            break;
        }
    }
    if !on_codim_one {
        return Err(VgitError::WallCodimension);
    }

    // Stay closer to χ₀ than any arrangement hyperplane not through χ₀.
    let mut scale = Rational::zero();
    for n in arrangement(k, problem.weights()) {
        let at = rational::dot_int(&n, &chi0);
        let along = rational::dot_int(&n, direction);
        if at != 0 && along != 0 {
            scale = scale.max(rational::ratio(along.abs(), at.abs()));
        }
    }
    let big_n = scale.floor().to_integer() + 1;
    let big_n: i64 = i64::try_from(big_n).map_err(|_| GitError::from(crate::PolyhedraError::Overflow))?;
    let side = |s: i64| -> IntVector { chi0.iter().zip(direction).map(|(c, d)| big_n * c + s * d).collect() };
    let (chi_plus, chi_minus) = (side(1), side(-1));

    let plus = kn_stratification(&problem.with_linearization(chi_plus.clone())?)?;
    let minus = kn_stratification(&problem.with_linearization(chi_minus.clone())?)?;
    let (plus_class, minus_class) = (class_of(&plus), class_of(&minus));
    if plus_class == LinearizationClass::OnWall {
        return Err(VgitError::TangentDirection("the plus side"));
    }
    if minus_class == LinearizationClass::OnWall {
        return Err(VgitError::TangentDirection("the minus side"));
    }
    let one_sided = plus_class == LinearizationClass::OutsideEffectiveCone
        || minus_class == LinearizationClass::OutsideEffectiveCone;

    let plus_strata = restrict_strata(&plus, &at_wall.semistable_supports);
    let minus_strata = restrict_strata(&minus, &at_wall.semistable_supports);

    let mut pairs = Vec::new();
    let mut used = vec![false; minus_strata.len()];
    for p in &plus_strata {
        let inverse: IntVector = p.lambda.iter().map(|x| -x).collect();
        let found = (0..minus_strata.len()).find(|&i| {
            !used[i] && minus_strata[i].lambda == inverse && minus_strata[i].fixed_coords == p.fixed_coords
        });
        if let Some(i) = found {
            used[i] = true;
            let m = &minus_strata[i];
            pairs.push(StratumPair {
                lambda_plus: p.lambda.clone(),
                lambda_minus: m.lambda.clone(),
                eta_plus: p.eta,
                eta_minus: m.eta,
                fixed_coords: p.fixed_coords,
                omega_weight: m.omega_weight,
                member_supports_match: p.member_supports == m.member_supports,
            });
        }
    }
    let balanced = !one_sided
        && !pairs.is_empty()
        && pairs.len() == plus_strata.len()
        && pairs.len() == minus_strata.len();
    let verdict = if !balanced {
        Verdict::Indeterminate
    } else if pairs.iter().all(|p| p.omega_weight == 0) {
        Verdict::Equivalence
    } else if pairs.iter().all(|p| p.omega_weight > 0) {
        Verdict::EmbedMinusIntoPlus
    } else if pairs.iter().all(|p| p.omega_weight < 0) {
        Verdict::EmbedPlusIntoMinus
    } else {
        Verdict::Indeterminate
    };
    let cy_shortcut = (0..k).all(|r| problem.weights().iter().map(|a| a[r]).sum::<i64>() == 0);
    Ok(WallCrossingReport {
        wall_point: chi0,
        direction: direction.to_vec(),
        epsilon: rational::ratio(1, big_n),
        chi_plus,
        chi_minus,
        plus_strata,
        minus_strata,
        one_sided,
        balanced,
        pairs,
        verdict,
        cy_shortcut,
    })
}
