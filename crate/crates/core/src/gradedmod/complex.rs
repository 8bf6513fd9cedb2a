//! Bounded complexes of free graded modules and the chain maps between them.
//!
//! Cohomological conventions: `d^p : F^p → F^{p+1}` is stored as a matrix
//! with one row per generator of `F^{p+1}` and one column per generator of
//! `F^p`. The entry from a source generator of weight `s` to a target
//! generator of weight `t` is homogeneous of degree `s − t`.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;

use super::poly::{Poly, PolyMatrix, WeightedRing};
use super::GradedError;
use crate::linalg;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedFreeComplex {
    ring: WeightedRing,
    terms: BTreeMap<i32, Vec<i64>>,
    diffs: BTreeMap<i32, PolyMatrix>,
}

const NO_WEIGHTS: &[i64] = &[];

impl GradedFreeComplex {
    /// Validated constructor. Missing differentials are zero.
    pub fn new(
        ring: WeightedRing,
        terms: BTreeMap<i32, Vec<i64>>,
        diffs: BTreeMap<i32, PolyMatrix>,
    ) -> Result<Self, GradedError> {
        let c = Self::assemble(ring, terms, diffs)?;
        c.validate()?;
        Ok(c)
    }

    /// Checks shapes only; used by constructions that preserve `d² = 0`.
    pub(crate) fn assemble(
        ring: WeightedRing,
        mut terms: BTreeMap<i32, Vec<i64>>,
        mut diffs: BTreeMap<i32, PolyMatrix>,
    ) -> Result<Self, GradedError> {
        terms.retain(|_, w| !w.is_empty());
        for (&p, m) in &diffs {
            let src = terms.get(&p).map_or(0, Vec::len);
            let tgt = terms.get(&(p + 1)).map_or(0, Vec::len);
            if m.rows() != tgt || m.cols() != src {
                return Err(GradedError::Shape(format!(
                    "differential in degree {p} is {}x{}, expected {tgt}x{src}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        diffs.retain(|_, m| !m.is_zero());
        Ok(Self { ring, terms, diffs })
    }

    pub fn zero(ring: WeightedRing) -> Self {
        Self { ring, terms: BTreeMap::new(), diffs: BTreeMap::new() }
    }

    /// The free module of rank one with generator weight `q`, in degree 0.
    pub fn free_module(ring: WeightedRing, q: i64) -> Self {
        Self { ring, terms: BTreeMap::from([(0, vec![q])]), diffs: BTreeMap::new() }
    }

    /// Checks weight homogeneity of every entry and `d² = 0`.
    pub fn validate(&self) -> Result<(), GradedError> {
        for (&p, m) in &self.diffs {
            check_homogeneous(&self.ring, m, self.weights(p), self.weights(p + 1), p)?;
        }
        for (&p, m) in &self.diffs {
            if let Some(next) = self.diffs.get(&(p + 1)) {
                if !next.mul(m).is_zero() {
                    return Err(GradedError::NotComplex(p));
                }
            }
        }
        Ok(())
    }

    pub fn ring(&self) -> &WeightedRing {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Degrees with nonzero terms, increasing.
    pub fn degrees(&self) -> Vec<i32> {
        self.terms.keys().copied().collect()
    }

    pub fn weights(&self, p: i32) -> &[i64] {
        self.terms.get(&p).map_or(NO_WEIGHTS, Vec::as_slice)
    }

    pub fn rank(&self, p: i32) -> usize {
        self.weights(p).len()
    }

    pub fn total_rank(&self) -> usize {
        self.terms.values().map(Vec::len).sum()
    }

    pub fn terms(&self) -> &BTreeMap<i32, Vec<i64>> {
        &self.terms
    }

    /// `d^p`, or `None` when it is zero.
    pub fn differential(&self, p: i32) -> Option<&PolyMatrix> {
        self.diffs.get(&p)
    }

    /// `d^p` as an explicit (possibly zero) matrix.
    pub fn d(&self, p: i32) -> PolyMatrix {
        self.diffs
            .get(&p)
            .cloned()
            .unwrap_or_else(|| PolyMatrix::zeros(self.rank(p + 1), self.rank(p)))
    }

    pub fn min_weight(&self) -> Option<i64> {
        self.terms.values().flatten().copied().min()
    }

    pub fn max_weight(&self) -> Option<i64> {
        self.terms.values().flatten().copied().max()
    }

    /// Range of degrees that may carry nonzero terms, padded by one.
    fn degree_span(&self) -> Vec<i32> {
        match (self.terms.keys().next(), self.terms.keys().next_back()) {
            (Some(&lo), Some(&hi)) => (lo - 1..=hi + 1).collect(),
            _ => Vec::new(),
        }
    }

    /// `F[k]^p = F^{p+k}` with differential `(−1)^k d`.
    pub fn shift(&self, k: i32) -> Self {
        let sign = if k % 2 == 0 { Rational::from_integer(1.into()) } else { Rational::from_integer((-1).into()) };
        Self {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(&p, w)| (p - k, w.clone())).collect(),
            diffs: self.diffs.iter().map(|(&p, m)| (p - k, m.scale(&sign))).collect(),
        }
    }

    /// `Hom(F, A)`: degrees and weights negated, differentials transposed.
    pub fn dual(&self) -> Self {
        Self {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(&p, w)| (-p, w.iter().map(|x| -x).collect())).collect(),
            diffs: self.diffs.iter().map(|(&p, m)| (-p - 1, m.transpose())).collect(),
        }
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self, GradedError> {
        if self.ring != other.ring {
            return Err(GradedError::RingMismatch);
        }
        let mut terms = BTreeMap::new();
        let mut diffs = BTreeMap::new();
        for p in self.degree_span().into_iter().chain(other.degree_span()) {
            let mut w = self.weights(p).to_vec();
            w.extend_from_slice(other.weights(p));
            terms.insert(p, w);
        }
        for &p in terms.keys() {
            let a = self.d(p);
            let b = other.d(p);
            let m = PolyMatrix::block(
                &a,
                &PolyMatrix::zeros(a.rows(), b.cols()),
                &PolyMatrix::zeros(b.rows(), a.cols()),
                &b,
            );
            diffs.insert(p, m);
        }
        Self::assemble(self.ring.clone(), terms, diffs)
    }

    /// Dimension of the weight-`m` part of `F^p`.
    pub fn strand_dim(&self, p: i32, m: i64) -> usize {
        self.weights(p).iter().map(|&w| self.ring.monomials(m - w).len()).sum()
    }

    /// `d^p` restricted to weight `m`, over the monomial bases of the strands.
    pub fn strand_matrix(&self, p: i32, m: i64) -> Vec<Vec<Rational>> {
        let src = strand_basis(&self.ring, self.weights(p), m);
        let tgt = strand_basis(&self.ring, self.weights(p + 1), m);
        let index: HashMap<&(usize, Vec<u32>), usize> = tgt.iter().enumerate().map(|(i, b)| (b, i)).collect();
        let mut out = vec![vec![Rational::zero(); src.len()]; tgt.len()];
        let Some(d) = self.diffs.get(&p) else { return out };
        for (col, (s, alpha)) in src.iter().enumerate() {
            for t in 0..d.rows() {
                for (gamma, c) in d.get(t, *s).terms() {
                    let beta: Vec<u32> = alpha.iter().zip(gamma).map(|(a, b)| a + b).collect();
                    let row = index[&(t, beta)];
                    out[row][col] += c;
                }
            }
        }
        out
    }

    /// `dim H^p(F)_m`, exactly.
    pub fn strand_cohomology(&self, p: i32, m: i64) -> usize {
        let dim = self.strand_dim(p, m);
        if dim == 0 {
            return 0;
        }
        let out_rank = linalg::rank(&self.strand_matrix(p, m), dim);
        let in_rank = linalg::rank(&self.strand_matrix(p - 1, m), self.strand_dim(p - 1, m));
        dim - out_rank - in_rank
    }

    /// Same as [`Self::strand_cohomology`] but may answer zero from a
    /// prime-field computation, which can only overestimate cohomology.
    fn strand_cohomology_vanishes(&self, p: i32, m: i64) -> bool {
        let dim = self.strand_dim(p, m);
        if dim == 0 {
            return true;
        }
        let reduce = |mat: Vec<Vec<Rational>>| -> Option<Vec<Vec<u64>>> {
            mat.iter().map(|r| r.iter().map(linalg::rational_mod).collect()).collect()
        };
        let out = self.strand_matrix(p, m);
        let inc = self.strand_matrix(p - 1, m);
        if let (Some(a), Some(b)) = (reduce(out), reduce(inc)) {
            let r = linalg::rank_mod(a, dim) + linalg::rank_mod(b, self.strand_dim(p - 1, m));
            if r == dim {
                return true;
            }
        }
        self.strand_cohomology(p, m) == 0
    }
}

fn strand_basis(ring: &WeightedRing, weights: &[i64], m: i64) -> Vec<(usize, Vec<u32>)> {
    weights
        .iter()
        .enumerate()
        .flat_map(|(g, &w)| ring.monomials(m - w).into_iter().map(move |e| (g, e)))
        .collect()
}

fn check_homogeneous(
    ring: &WeightedRing,
    m: &PolyMatrix,
    source: &[i64],
    target: &[i64],
    p: i32,
) -> Result<(), GradedError> {
    for (r, &t) in target.iter().enumerate() {
        for (c, &s) in source.iter().enumerate() {
            if !m.get(r, c).is_homogeneous(ring, s - t) {
                return Err(GradedError::NotHomogeneous { degree: p, row: r, col: c });
            }
        }
    }
    Ok(())
}

/// Weights of the cohomology of `σ*F` (all variables set to zero), by degree.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WeightProfile(pub BTreeMap<i32, Vec<i64>>);

impl WeightProfile {
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn all_weights(&self) -> impl Iterator<Item = (i32, i64)> + '_ {
        self.0.iter().flat_map(|(&p, ws)| ws.iter().map(move |&w| (p, w)))
    }

    pub fn total_dim(&self) -> usize {
        self.0.values().map(Vec::len).sum()
    }
}

pub fn restrict_to_fixed(f: &GradedFreeComplex) -> WeightProfile {
    let mut profile = BTreeMap::new();
    let mut all: Vec<i64> = f.terms.values().flatten().copied().collect();
    all.sort_unstable();
    all.dedup();
    for &p in f.terms.keys() {
        let mut found = Vec::new();
        for &wt in &all {
            let idx = |q: i32| -> Vec<usize> {
                f.weights(q).iter().enumerate().filter(|(_, &x)| x == wt).map(|(i, _)| i).collect()
            };
            let (here, next, prev) = (idx(p), idx(p + 1), idx(p - 1));
            if here.is_empty() {
                continue;
            }
            let out_rank = f.diffs.get(&p).map_or(0, |d| {
                linalg::rank(&d.select(&next, &here).constant_parts(), here.len())
            });
            let in_rank = f.diffs.get(&(p - 1)).map_or(0, |d| {
                linalg::rank(&d.select(&here, &prev).constant_parts(), prev.len())
            });
            found.extend(std::iter::repeat_n(wt, here.len() - out_rank - in_rank));
        }
        if !found.is_empty() {
            profile.insert(p, found);
        }
    }
    WeightProfile(profile)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowTest {
    pub passes: bool,
    /// `(degree, weight)` pairs of `σ*F` outside `[w, w + η)`.
    pub offending: Vec<(i32, i64)>,
}

pub fn window_test_complex(f: &GradedFreeComplex, w: i64) -> WindowTest {
    let eta = f.ring.eta();
    let offending: Vec<(i32, i64)> =
        restrict_to_fixed(f).all_weights().filter(|&(_, q)| q < w || q >= w + eta).collect();
    WindowTest { passes: offending.is_empty(), offending }
}

/// Whether every cohomology module of `F` has finite length.
///
/// Cohomology is examined strand by strand in the weights just above the
/// largest generator weight, up to one window width plus the largest
/// variable weight beyond it.
pub fn is_supported_at_origin(f: &GradedFreeComplex) -> bool {
    let Some(top) = f.max_weight() else { return true };
    let c_max = f.ring.weights().iter().copied().max().unwrap_or(1);
    let bound = top + f.ring.eta() + c_max;
    f.terms.keys().all(|&p| (top + 1..=bound).all(|m| f.strand_cohomology_vanishes(p, m)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainMap {
    source: GradedFreeComplex,
    target: GradedFreeComplex,
    maps: BTreeMap<i32, PolyMatrix>,
}

impl ChainMap {
    /// Validated constructor; missing components are zero.
    pub fn new(
        source: GradedFreeComplex,
        target: GradedFreeComplex,
        maps: BTreeMap<i32, PolyMatrix>,
    ) -> Result<Self, GradedError> {
        let f = Self::assemble(source, target, maps)?;
        f.validate()?;
        Ok(f)
    }

    pub(crate) fn assemble(
        source: GradedFreeComplex,
        target: GradedFreeComplex,
        mut maps: BTreeMap<i32, PolyMatrix>,
    ) -> Result<Self, GradedError> {
        if source.ring != target.ring {
            return Err(GradedError::RingMismatch);
        }
        for (&p, m) in &maps {
            if m.rows() != target.rank(p) || m.cols() != source.rank(p) {
                return Err(GradedError::Shape(format!("chain map component in degree {p} has the wrong shape")));
            }
        }
        maps.retain(|_, m| !m.is_zero());
        Ok(Self { source, target, maps })
    }

    pub fn identity(f: &GradedFreeComplex) -> Self {
        let n = f.ring.n();
        let maps = f.terms.iter().map(|(&p, w)| (p, PolyMatrix::identity(w.len(), n))).collect();
        Self { source: f.clone(), target: f.clone(), maps }
    }

    pub fn zero(source: &GradedFreeComplex, target: &GradedFreeComplex) -> Self {
        Self { source: source.clone(), target: target.clone(), maps: BTreeMap::new() }
    }

    pub fn source(&self) -> &GradedFreeComplex {
        &self.source
    }

    pub fn target(&self) -> &GradedFreeComplex {
        &self.target
    }

    pub fn component(&self, p: i32) -> PolyMatrix {
        self.maps
            .get(&p)
            .cloned()
            .unwrap_or_else(|| PolyMatrix::zeros(self.target.rank(p), self.source.rank(p)))
    }

    /// Checks homogeneity and `d_G f = f d_F`.
    pub fn validate(&self) -> Result<(), GradedError> {
        for (&p, m) in &self.maps {
            check_homogeneous(&self.source.ring, m, self.source.weights(p), self.target.weights(p), p)
                .map_err(|_| GradedError::InvalidChainMap(p))?;
        }
        let mut degrees: Vec<i32> = self.source.degree_span();
        degrees.extend(self.target.degree_span());
        degrees.sort_unstable();
        degrees.dedup();
        for p in degrees {
            let lhs = self.target.d(p).mul(&self.component(p));
            let rhs = self.component(p + 1).mul(&self.source.d(p));
            if lhs != rhs {
                return Err(GradedError::InvalidChainMap(p));
            }
        }
        Ok(())
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &ChainMap) -> Result<ChainMap, GradedError> {
        if first.target != self.source {
            return Err(GradedError::Shape("composed chain maps do not share an object".into()));
        }
        let maps = first
            .maps
            .keys()
            .filter(|p| self.maps.contains_key(p))
            .map(|&p| (p, self.maps[&p].mul(&first.maps[&p])))
            .collect();
        Self::assemble(first.source.clone(), self.target.clone(), maps)
    }

    /// `Hom(−, A)` applied to the map: `G^∨ → F^∨`.
    pub fn dual(&self) -> ChainMap {
        ChainMap {
            source: self.target.dual(),
            target: self.source.dual(),
            maps: self.maps.iter().map(|(&p, m)| (-p, m.transpose())).collect(),
        }
    }
}

/// Mapping cone `F^{p+1} ⊕ G^p` with `d = [[−d_F, 0], [f, d_G]]`.
pub fn cone_of_chain_map(f: &ChainMap) -> Result<GradedFreeComplex, GradedError> {
    f.validate()?;
    Ok(cone_unchecked(f))
}

pub(crate) fn cone_unchecked(f: &ChainMap) -> GradedFreeComplex {
    let (src, tgt) = (&f.source, &f.target);
    let mut degrees: Vec<i32> = src.terms.keys().map(|p| p - 1).chain(tgt.terms.keys().copied()).collect();
    degrees.sort_unstable();
    degrees.dedup();
    let mut terms = BTreeMap::new();
    for &p in &degrees {
        let mut w = src.weights(p + 1).to_vec();
        w.extend_from_slice(tgt.weights(p));
        terms.insert(p, w);
    }
    let mut diffs = BTreeMap::new();
    for &p in &degrees {
        let m = PolyMatrix::block(
            &src.d(p + 1).neg(),
            &PolyMatrix::zeros(src.rank(p + 2), tgt.rank(p)),
            &f.component(p + 1),
            &tgt.d(p),
        );
        diffs.insert(p, m);
    }
    GradedFreeComplex::assemble(src.ring.clone(), terms, diffs).expect("cone blocks have consistent shapes")
}

/// Convenience for building single-entry polynomial matrices in tests and
/// constructions.
pub fn column(entries: Vec<Poly>) -> PolyMatrix {
    let rows = entries.into_iter().map(|p| vec![p]).collect();
    PolyMatrix::from_rows(rows, 1)
}
