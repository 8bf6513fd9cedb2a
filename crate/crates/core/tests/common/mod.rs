#![allow(dead_code)]

use std::collections::BTreeMap;

use gitwin_core::gitcore::{Support, TorusActionProblem};
use gitwin_core::gradedmod::{GradedFreeComplex, Poly, PolyMatrix, WeightedRing};
use gitwin_core::rational::{int, IntVector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Random problem with `k ≤ 3`, `n ≤ 6` and entries in `[−3, 3]`.
pub fn random_problem(rng: &mut ChaCha8Rng) -> TorusActionProblem {
    let k = rng.gen_range(1..=3);
    let n = rng.gen_range(1..=6);
    let weights: Vec<IntVector> = (0..n).map(|_| (0..k).map(|_| rng.gen_range(-3..=3)).collect()).collect();
    let chi: IntVector = (0..k).map(|_| rng.gen_range(-3..=3)).collect();
    TorusActionProblem::standard(k, weights, chi).expect("shapes are consistent")
}

fn dot(a: &[i64], b: &[i64]) -> i128 {
    a.iter().zip(b).map(|(&x, &y)| i128::from(x) * i128::from(y)).sum()
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Every primitive integer vector in `[−r, r]^k`.
pub fn primitive_box(k: usize, r: i64) -> Vec<IntVector> {
    let mut out = Vec::new();
    let mut v = vec![-r; k];
    loop {
        if v.iter().fold(0, |g, &x| gcd(g, x)) == 1 {
            out.push(v.clone());
        }
        let mut i = 0;
        loop {
            if i == k {
                return out;
            }
            if v[i] < r {
                v[i] += 1;
                break;
            }
            v[i] = -r;
            i += 1;
        }
    }
}

/// Exhaustive maximization of `μ(λ) = −⟨λ, χ⟩ / |λ|` over primitive `λ` in the
/// box with `⟨λ, a_j⟩ ≥ 0` on the support, for the standard inner product.
/// Returns every maximizer together with `(pairing, |λ|²)`, or `None` when no
/// `λ` has positive pairing.
pub fn brute_force_destabilizer(
    weights: &[IntVector],
    chi: &[i64],
    support: Support,
    candidates: &[IntVector],
) -> Option<(Vec<IntVector>, i128, i128)> {
    let mut best: Option<(Vec<IntVector>, i128, i128)> = None;
    for lambda in candidates {
        if support.indices().iter().any(|&j| dot(lambda, &weights[j]) < 0) {
            continue;
        }
        let pairing = -dot(lambda, chi);
        if pairing <= 0 {
            continue;
        }
        let norm = dot(lambda, lambda);
        match &mut best {
            None => best = Some((vec![lambda.clone()], pairing, norm)),
            Some((arg, p, q)) => {
                let (lhs, rhs) = (pairing * pairing * *q, *p * *p * norm);
                if lhs > rhs {
                    best = Some((vec![lambda.clone()], pairing, norm));
                } else if lhs == rhs {
                    arg.push(lambda.clone());
                }
            }
        }
    }
    best
}

fn random_poly(rng: &mut ChaCha8Rng, ring: &WeightedRing, degree: i64) -> Poly {
    let mut p = Poly::zero();
    for exp in ring.monomials(degree) {
        let c = rng.gen_range(-2..=2);
        p.add_term(exp, int(c));
    }
    p
}

/// A random bounded complex over `k[x, y, z]` assembled from free modules,
/// two-term maps and Koszul-type three-term pieces, then disguised by random
/// unipotent changes of basis. Generator weights are drawn from `weights`,
/// degrees from `[−2, 2]`, ranks stay at most 3 and entries have degree ≤ 2.
pub fn random_complex(rng: &mut ChaCha8Rng, weights: std::ops::RangeInclusive<i64>) -> GradedFreeComplex {
    let ring = WeightedRing::standard(3);
    let mut f = GradedFreeComplex::zero(ring.clone());
    let pieces = rng.gen_range(1..=3);
    for _ in 0..pieces {
        let piece = match rng.gen_range(0..3) {
            0 => {
                let q = rng.gen_range(weights.clone());
                GradedFreeComplex::free_module(ring.clone(), q).shift(-rng.gen_range(-2..=2))
            }
            1 => {
                let p = rng.gen_range(-2..=1);
                let q = rng.gen_range(weights.clone());
                let deg = rng.gen_range(1..=2);
                let t = q - deg;
                let entry = random_poly(rng, &ring, deg);
                GradedFreeComplex::new(
                    ring.clone(),
                    BTreeMap::from([(p, vec![q]), (p + 1, vec![t])]),
                    BTreeMap::from([(p, PolyMatrix::from_rows(vec![vec![entry]], 1))]),
                )
                .expect("two-term complex")
            }
            _ => {
                // A(q) → A(q−1)² → A(q−2) from a pair of variables.
                let p = rng.gen_range(-2..=0);
                let q = rng.gen_range(weights.clone());
                let i = rng.gen_range(0..3);
                let j = (i + rng.gen_range(1..3)) % 3;
                let (xi, xj) = (Poly::variable(3, i), Poly::variable(3, j));
                GradedFreeComplex::new(
                    ring.clone(),
                    BTreeMap::from([(p, vec![q]), (p + 1, vec![q - 1, q - 1]), (p + 2, vec![q - 2])]),
                    BTreeMap::from([
                        (p, PolyMatrix::from_rows(vec![vec![xj.clone()], vec![xi.neg()]], 1)),
                        (p + 1, PolyMatrix::from_rows(vec![vec![xi, xj]], 2)),
                    ]),
                )
                .expect("Koszul piece")
            }
        };
        if f.degrees().iter().chain(&piece.degrees()).any(|&p| f.rank(p) + piece.rank(p) > 3) {
            continue;
        }
        f = f.direct_sum(&piece).expect("same ring");
    }
    disguise(rng, &f)
}

/// Applies random elementary changes of basis `e_j ↦ e_j + h e_i`.
pub fn disguise(rng: &mut ChaCha8Rng, f: &GradedFreeComplex) -> GradedFreeComplex {
    let ring = f.ring().clone();
    let mut diffs: BTreeMap<i32, PolyMatrix> = f.terms().keys().map(|&p| (p, f.d(p))).collect();
    for _ in 0..4 {
        let degrees = f.degrees();
        if degrees.is_empty() {
            break;
        }
        let p = degrees[rng.gen_range(0..degrees.len())];
        let w = f.weights(p);
        if w.len() < 2 {
            continue;
        }
        let (i, j) = (rng.gen_range(0..w.len()), rng.gen_range(0..w.len()));
        let deg = w[j] - w[i];
        if i == j || !(0..=2).contains(&deg) {
            continue;
        }
        let h = random_poly(rng, &ring, deg);
        let mut t = PolyMatrix::identity(w.len(), 3);
        t.set(i, j, h.clone());
        let mut t_inv = PolyMatrix::identity(w.len(), 3);
        t_inv.set(i, j, h.neg());
        let out = diffs[&p].mul(&t_inv);
        diffs.insert(p, out);
        if let Some(prev) = diffs.get(&(p - 1)) {
            let updated = t.mul(prev);
            diffs.insert(p - 1, updated);
        }
    }
    GradedFreeComplex::new(ring, f.terms().clone(), diffs).expect("change of basis preserves the complex")
}
