//! Koszul resolutions of skyscrapers at the origin and the contracting
//! homotopy used to lift maps into them.
//!
//! `K(b)` has the generator `e_J` of weight `b + Σ_{j∈J} c_j` in degree
//! `−|J|` and differential `d(e_J) = Σ_{i∈J} ±x_i e_{J∖i}`, the sign counting
//! the elements of `J` below `i`.

use std::collections::{BTreeMap, HashMap};

use super::complex::GradedFreeComplex;
use super::poly::{Exponent, Poly, PolyMatrix, WeightedRing};
use super::GradedError;
use crate::polyhedra::combinations;
use crate::rational::{int, Rational};

/// `(−1)^{#{l ∈ J : l < i}}`
pub(crate) fn koszul_sign(i: usize, set: &[usize]) -> i64 {
    if set.iter().filter(|&&l| l < i).count() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Subsets of each size in lexicographic order, with their positions.
pub(crate) struct SubsetIndex {
    pub by_size: Vec<Vec<Vec<usize>>>,
    position: HashMap<Vec<usize>, usize>,
}

impl SubsetIndex {
    pub fn new(n: usize) -> Self {
        let by_size: Vec<Vec<Vec<usize>>> = (0..=n).map(|p| combinations(n, p)).collect();
        let position = by_size
            .iter()
            .flat_map(|level| level.iter().enumerate().map(|(i, s)| (s.clone(), i)))
            .collect();
        Self { by_size, position }
    }

    pub fn position(&self, set: &[usize]) -> usize {
        self.position[set]
    }
}

/// The Koszul complex `K(b)`.
pub fn koszul_complex(ring: &WeightedRing, b: i64) -> GradedFreeComplex {
    let n = ring.n();
    let index = SubsetIndex::new(n);
    let mut terms = BTreeMap::new();
    let mut diffs = BTreeMap::new();
    for p in 0..=n {
        let weights = index.by_size[p]
            .iter()
            .map(|set| b + set.iter().map(|&j| ring.weights()[j]).sum::<i64>())
            .collect();
        terms.insert(-(p as i32), weights);
    }
    for p in 1..=n {
        let mut m = PolyMatrix::zeros(index.by_size[p - 1].len(), index.by_size[p].len());
        for (col, set) in index.by_size[p].iter().enumerate() {
            for &i in set {
                let rest: Vec<usize> = set.iter().copied().filter(|&l| l != i).collect();
                let row = index.position(&rest);
                m.set(row, col, Poly::variable(n, i).scale(&int(koszul_sign(i, set))));
            }
        }
        diffs.insert(-(p as i32), m);
    }
    GradedFreeComplex::assemble(ring.clone(), terms, diffs).expect("Koszul shapes are consistent")
}

/// Free resolution of the `m`-dimensional skyscraper of weight `b`.
pub fn koszul_skyscraper(ring: &WeightedRing, b: i64, m: usize) -> Result<GradedFreeComplex, GradedError> {
    if m == 0 {
        return Err(GradedError::Shape("multiplicity must be at least 1".into()));
    }
    let single = koszul_complex(ring, b);
    let mut out = single.clone();
    for _ in 1..m {
        out = out.direct_sum(&single)?;
    }
    Ok(out)
}

/// Contracting homotopy `s(x^α e_J) = Σ_{j∉J} ±α_j x^{α−e_j} e_{J∪j}`,
/// satisfying `ds + sd = (|α| + |J|)·id`. Returns `(J ∪ j, term)` pairs.
pub(crate) fn homotopy(set: &[usize], exp: &Exponent, coef: &Rational) -> Vec<(Vec<usize>, Exponent, Rational)> {
    let mut out = Vec::new();
    for j in 0..exp.len() {
        if exp[j] == 0 || set.contains(&j) {
            continue;
        }
        let mut bigger = set.to_vec();
        bigger.push(j);
        bigger.sort_unstable();
        let mut lowered = exp.clone();
        lowered[j] -= 1;
        let c = coef * int(koszul_sign(j, set) * i64::from(exp[j]));
        out.push((bigger, lowered, c));
    }
    out
}

/// Polynomial degree plus exterior degree, the eigenvalue of `ds + sd`.
pub(crate) fn homotopy_eigenvalue(set: &[usize], exp: &Exponent) -> Rational {
    let total: u32 = exp.iter().sum();
    Rational::from_integer((i64::from(total) + set.len() as i64).into())
}

/// Applies `d` of `K` to `x^α e_J`, returning `(J ∖ i, term)` pairs.
#[cfg(test)]
fn koszul_d(set: &[usize], exp: &Exponent, coef: &Rational) -> Vec<(Vec<usize>, Exponent, Rational)> {
    set.iter()
        .map(|&i| {
            let rest: Vec<usize> = set.iter().copied().filter(|&l| l != i).collect();
            let mut raised = exp.clone();
            raised[i] += 1;
            (rest, raised, coef * int(koszul_sign(i, set)))
        })
        .collect()
}
