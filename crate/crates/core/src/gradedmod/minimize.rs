//! Reduction to a minimal complex by cancelling unit entries of the
//! differentials, optionally tracking the comparison maps.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::complex::{ChainMap, GradedFreeComplex};
use super::poly::PolyMatrix;
use crate::rational::Rational;

/// A minimal complex together with mutually inverse homotopy equivalences.
#[derive(Debug, Clone)]
pub struct Minimization {
    pub complex: GradedFreeComplex,
    /// Minimal complex → original.
    pub inclusion: ChainMap,
    /// Original → minimal complex.
    pub projection: ChainMap,
}

struct Work {
    terms: BTreeMap<i32, Vec<i64>>,
    diffs: BTreeMap<i32, PolyMatrix>,
    /// Per degree: current → original.
    incl: Option<BTreeMap<i32, PolyMatrix>>,
    /// Per degree: original → current.
    proj: Option<BTreeMap<i32, PolyMatrix>>,
}

fn rank_of(terms: &BTreeMap<i32, Vec<i64>>, p: i32) -> usize {
    terms.get(&p).map_or(0, Vec::len)
}

impl Work {
    fn find_unit(&self) -> Option<(i32, usize, usize, Rational)> {
        for (&p, m) in &self.diffs {
            for t in 0..m.rows() {
                for s in 0..m.cols() {
                    let c = m.get(t, s).constant_term();
                    if !c.is_zero() {
                        return Some((p, t, s, c));
                    }
                }
            }
        }
        None
    }

    fn cancel(&mut self, p: i32, t: usize, s: usize, u: Rational) {
        let uinv = Rational::one() / u;
        let rank_p = rank_of(&self.terms, p);
        let rank_q = rank_of(&self.terms, p + 1);
        let keep_c: Vec<usize> = (0..rank_p).filter(|&i| i != s).collect();
        let keep_d: Vec<usize> = (0..rank_q).filter(|&i| i != t).collect();
        let m = self.diffs[&p].clone();

        let mut reduced = m.select(&keep_d, &keep_c);
        for (ei, &e) in keep_d.iter().enumerate() {
            let gamma = m.get(e, s);
            if gamma.is_zero() {
                continue;
            }
            let g = gamma.scale(&uinv);
            for (ci, &c) in keep_c.iter().enumerate() {
                let delta = m.get(t, c);
                if !delta.is_zero() {
                    let prod = g.mul(delta).neg();
                    reduced.entry_mut(ei, ci).add_assign(&prod);
                }
            }
        }
        self.diffs.insert(p, reduced);
        if let Some(prev) = self.diffs.get(&(p - 1)) {
            let all: Vec<usize> = (0..prev.cols()).collect();
            let updated = prev.select(&keep_c, &all);
            self.diffs.insert(p - 1, updated);
        }
        if let Some(next) = self.diffs.get(&(p + 1)) {
            let all: Vec<usize> = (0..next.rows()).collect();
            let updated = next.select(&all, &keep_d);
            self.diffs.insert(p + 1, updated);
        }

        if let Some(incl) = self.incl.as_mut() {
            let old = &incl[&p];
            let rows: Vec<usize> = (0..old.rows()).collect();
            let mut fresh = old.select(&rows, &keep_c);
            for (ci, &c) in keep_c.iter().enumerate() {
                let delta = m.get(t, c);
                if delta.is_zero() {
                    continue;
                }
                let factor = delta.scale(&-uinv.clone());
                for r in 0..old.rows() {
                    let base = old.get(r, s);
                    if !base.is_zero() {
                        let prod = base.mul(&factor);
                        fresh.entry_mut(r, ci).add_assign(&prod);
                    }
                }
            }
            incl.insert(p, fresh);
            let old = &incl[&(p + 1)];
            let rows: Vec<usize> = (0..old.rows()).collect();
            let fresh = old.select(&rows, &keep_d);
            incl.insert(p + 1, fresh);
        }
        if let Some(proj) = self.proj.as_mut() {
            let old = &proj[&p];
            let cols: Vec<usize> = (0..old.cols()).collect();
            let fresh = old.select(&keep_c, &cols);
            proj.insert(p, fresh);
            let old = &proj[&(p + 1)];
            let cols: Vec<usize> = (0..old.cols()).collect();
            let mut fresh = old.select(&keep_d, &cols);
            for (ei, &e) in keep_d.iter().enumerate() {
                let gamma = m.get(e, s);
                if gamma.is_zero() {
                    continue;
                }
                let factor = gamma.scale(&-uinv.clone());
                for col in 0..old.cols() {
                    let base = old.get(t, col);
                    if !base.is_zero() {
                        let prod = factor.mul(base);
                        fresh.entry_mut(ei, col).add_assign(&prod);
                    }
                }
            }
            proj.insert(p + 1, fresh);
        }

        if let Some(w) = self.terms.get_mut(&p) {
            w.remove(s);
        }
        if let Some(w) = self.terms.get_mut(&(p + 1)) {
            w.remove(t);
        }
    }
}

fn run(f: &GradedFreeComplex, track: bool) -> Work {
    let n = f.ring().n();
    let terms = f.terms().clone();
    let diffs: BTreeMap<i32, PolyMatrix> = terms.keys().map(|&p| (p, f.d(p))).collect();
    let identity = || -> BTreeMap<i32, PolyMatrix> {
        terms.iter().map(|(&p, w)| (p, PolyMatrix::identity(w.len(), n))).collect()
    };
    let mut work = Work {
        incl: track.then(identity),
        proj: track.then(identity),
        terms,
        diffs,
    };
    while let Some((p, t, s, u)) = work.find_unit() {
        work.cancel(p, t, s, u);
    }
    work
}

/// Minimal complex homotopy equivalent to `f`.
pub fn minimize(f: &GradedFreeComplex) -> GradedFreeComplex {
    let work = run(f, false);
    GradedFreeComplex::assemble(f.ring().clone(), work.terms, work.diffs)
        .expect("cancellation preserves shapes")
}

pub fn minimize_with_maps(f: &GradedFreeComplex) -> Minimization {
    let work = run(f, true);
    let complex = GradedFreeComplex::assemble(f.ring().clone(), work.terms, work.diffs)
        .expect("cancellation preserves shapes");
    let inclusion = ChainMap::assemble(complex.clone(), f.clone(), work.incl.expect("tracked"))
        .expect("inclusion has consistent shapes");
    let projection = ChainMap::assemble(f.clone(), complex.clone(), work.proj.expect("tracked"))
        .expect("projection has consistent shapes");
    Minimization { complex, inclusion, projection }
}
