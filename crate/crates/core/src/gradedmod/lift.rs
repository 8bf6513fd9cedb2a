//! Lifting a complex into the grade-restriction window `[w, w + η)`.
//!
//! Low step: if the smallest weight `a` of the minimal complex `F` is below
//! `w`, map `F` onto a sum of Koszul complexes `K(a)`, one for each weight-`a`
//! generator, and replace `F` by the shifted cone of that map. The cone
//! differs from `F` by complexes supported at the origin and has no weight-`a`
//! generators after minimization.
//!
//! High step: the low step applied to the dual complex with the dual window.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::complex::{cone_unchecked, ChainMap, GradedFreeComplex};
use super::koszul::{homotopy, homotopy_eigenvalue, koszul_complex, SubsetIndex};
use super::minimize::minimize_with_maps;
use super::poly::{Exponent, Poly, PolyMatrix};
use super::GradedError;
use crate::linalg::{self, SparseSystem};
use crate::rational::{int, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LiftOrder {
    /// Raise the low weights first, then lower the high weights.
    LowFirst,
    /// Lower the high weights first, then raise the low weights.
    HighFirst,
}

#[derive(Debug, Clone)]
pub struct WindowLift {
    /// Minimal complex whose fixed-point weights lie in `[w, w + η)`.
    pub lifted: GradedFreeComplex,
    /// Zig-zag of chain maps connecting the input to the lift. Each leg has a
    /// cone supported at the origin. `legs[0]` touches the input and the
    /// last leg touches the lift.
    pub legs: Vec<ChainMap>,
    /// Number of cone steps performed.
    pub steps: usize,
}

pub fn window_lift(f: &GradedFreeComplex, w: i64) -> Result<WindowLift, GradedError> {
    window_lift_ordered(f, w, LiftOrder::LowFirst)
}

pub fn window_lift_ordered(f: &GradedFreeComplex, w: i64, order: LiftOrder) -> Result<WindowLift, GradedError> {
    let eta = f.ring().eta();
    let guard = match (f.min_weight(), f.max_weight()) {
        (Some(lo), Some(hi)) => (hi.max(w + eta - 1) - lo.min(w)) as usize + eta as usize + 2,
        _ => 0,
    };
    match order {
        LiftOrder::LowFirst => {
            let (low, to_input, s1) = low_phase(f, w, guard)?;
            let (high, to_high, s2) = high_phase(&low, w, guard)?;
            Ok(WindowLift { lifted: high, legs: vec![to_input, to_high], steps: s1 + s2 })
        }
        LiftOrder::HighFirst => {
            let (high, from_input, s1) = high_phase(f, w, guard)?;
            let (low, to_high, s2) = low_phase(&high, w, guard)?;
            Ok(WindowLift { lifted: low, legs: vec![from_input, to_high], steps: s1 + s2 })
        }
    }
}

/// Returns the raised complex `L`, a map `L → F` and the step count.
fn low_phase(f: &GradedFreeComplex, w: i64, guard: usize) -> Result<(GradedFreeComplex, ChainMap, usize), GradedError> {
    let start = minimize_with_maps(f);
    let mut current = start.complex;
    let mut to_input = start.inclusion;
    let mut steps = 0;
    while let Some(a) = current.min_weight().filter(|&a| a < w) {
        steps += 1;
        if steps > guard {
            return Err(GradedError::IterationBound(guard));
        }
        let (next, projection) = low_step(&current, a)?;
        let reduced = minimize_with_maps(&next);
        let step_map = projection.after(&reduced.inclusion)?;
        to_input = to_input.after(&step_map)?;
        current = reduced.complex;
    }
    Ok((current, to_input, steps))
}

/// Returns the lowered complex `H`, a map `F → H` and the step count.
fn high_phase(f: &GradedFreeComplex, w: i64, guard: usize) -> Result<(GradedFreeComplex, ChainMap, usize), GradedError> {
    let dual_window = 1 - w - f.ring().eta();
    let (low, to_dual, steps) = low_phase(&f.dual(), dual_window, guard)?;
    Ok((low.dual(), to_dual.dual(), steps))
}

/// One low step on a minimal complex whose smallest weight is `a`.
/// Returns `F′ = Cone(φ)[−1]` and the projection `F′ → F`.
fn low_step(f: &GradedFreeComplex, a: i64) -> Result<(GradedFreeComplex, ChainMap), GradedError> {
    let ring = f.ring().clone();
    let n = ring.n();
    let index = SubsetIndex::new(n);

    // Weight-a generators, each spawning a shifted copy of K(a).
    let summits: Vec<(i32, usize)> = f
        .terms()
        .iter()
        .flat_map(|(&p, ws)| ws.iter().enumerate().filter(|(_, &x)| x == a).map(move |(i, _)| (p, i)))
        .collect();
    let koszul = koszul_complex(&ring, a);
    let mut target = GradedFreeComplex::zero(ring.clone());
    for &(p, _) in &summits {
        target = target.direct_sum(&koszul.shift(-p))?;
    }
    // Generators of the target in each degree, as (summand, subset).
    let mut layout: BTreeMap<i32, Vec<(usize, Vec<usize>)>> = BTreeMap::new();
    for (g, &(top, _)) in summits.iter().enumerate() {
        for size in 0..=n {
            let p = top - size as i32;
            for set in &index.by_size[size] {
                layout.entry(p).or_default().push((g, set.clone()));
            }
        }
    }
    let position: HashMap<(i32, usize, Vec<usize>), usize> = layout
        .iter()
        .flat_map(|(&p, gens)| gens.iter().enumerate().map(move |(i, (g, s))| ((p, *g, s.clone()), i)))
        .collect();
    let summit_of: HashMap<(i32, usize), usize> =
        summits.iter().enumerate().map(|(g, &key)| (key, g)).collect();

    let degrees: Vec<i32> = f.degrees();
    let mut phi: BTreeMap<i32, PolyMatrix> = BTreeMap::new();
    for &p in degrees.iter().rev() {
        let rows = target.rank(p);
        let mut m = PolyMatrix::zeros(rows, f.rank(p));
        let d = f.d(p);
        let above = phi.get(&(p + 1));
        for h in 0..f.rank(p) {
            if let Some(&g) = summit_of.get(&(p, h)) {
                m.set(position[&(p, g, Vec::new())], h, Poly::one(n));
                continue;
            }
            let Some(above) = above else { continue };
            // z = φ^{p+1}(d h), a cycle of the target in degree p + 1.
            let mut z: Vec<Poly> = vec![Poly::zero(); above.rows()];
            for k in 0..d.rows() {
                let entry = d.get(k, h);
                if entry.is_zero() {
                    continue;
                }
                for (r, slot) in z.iter_mut().enumerate() {
                    let phi_entry = above.get(r, k);
                    if !phi_entry.is_zero() {
                        slot.add_assign(&phi_entry.mul(entry));
                    }
                }
            }
            // Preimage under the target differential via the Koszul homotopy.
            for (r, poly) in z.iter().enumerate() {
                let (g, set) = &layout[&(p + 1)][r];
                let sign = if summits[*g].0 % 2 == 0 { int(1) } else { int(-1) };
                for (exp, coef) in poly.terms() {
                    let eigen = homotopy_eigenvalue(set, exp);
                    if eigen.is_zero() {
                        return Err(GradedError::Internal("weight-a constant in a lifted cycle"));
                    }
                    let scale = &sign / &eigen;
                    for (bigger, lowered, c) in homotopy(set, exp, coef) {
                        let row = position[&(p, *g, bigger)];
                        m.entry_mut(row, h).add_term(lowered, c * &scale);
                    }
                }
            }
        }
        phi.insert(p, m);
    }
    let phi = ChainMap::new(f.clone(), target, phi)
        .map_err(|_| GradedError::Internal("Koszul lift is not a chain map"))?;
    let next = cone_unchecked(&phi).shift(-1);
    let projection_maps = next
        .terms()
        .keys()
        .filter(|&&p| f.rank(p) > 0)
        .map(|&p| {
            let mut m = PolyMatrix::zeros(f.rank(p), next.rank(p));
            for i in 0..f.rank(p) {
                m.set(i, i, Poly::one(n));
            }
            (p, m)
        })
        .collect();
    let projection = ChainMap::assemble(next.clone(), f.clone(), projection_maps)?;
    Ok((next, projection))
}

/// Searches for a chain isomorphism `F₁ → F₂` by solving for the space of
/// chain maps and testing random members. A chain map is an isomorphism
/// exactly when its constant part is invertible in every degree.
pub fn find_isomorphism(
    f1: &GradedFreeComplex,
    f2: &GradedFreeComplex,
    seed: u64,
    trials: usize,
) -> Result<Option<ChainMap>, GradedError> {
    if f1.ring() != f2.ring() {
        return Err(GradedError::RingMismatch);
    }
    let sorted = |f: &GradedFreeComplex| -> BTreeMap<i32, Vec<i64>> {
        f.terms()
            .iter()
            .map(|(&p, w)| {
                let mut w = w.clone();
                w.sort_unstable();
                (p, w)
            })
            .collect()
    };
    if sorted(f1) != sorted(f2) {
        return Ok(None);
    }
    let ring = f1.ring();
    // Unknown coefficients of f^p[t][s] for each monomial of the forced degree.
    let mut vars: Vec<(i32, usize, usize, Exponent)> = Vec::new();
    let mut var_index: HashMap<(i32, usize, usize), Vec<(usize, Exponent)>> = HashMap::new();
    for &p in f1.terms().keys() {
        for (t, &wt) in f2.weights(p).iter().enumerate() {
            for (s, &ws) in f1.weights(p).iter().enumerate() {
                for exp in ring.monomials(ws - wt) {
                    var_index.entry((p, t, s)).or_default().push((vars.len(), exp.clone()));
                    vars.push((p, t, s, exp));
                }
            }
        }
    }
    // d₂ f − f d₁ = 0, coefficient by coefficient.
    let mut equations: BTreeMap<(i32, usize, usize, Exponent), BTreeMap<usize, Rational>> = BTreeMap::new();
    let add = |eqs: &mut BTreeMap<_, BTreeMap<usize, Rational>>, key, var, c: Rational| {
        *eqs.entry(key).or_default().entry(var).or_insert_with(Rational::zero) += c;
    };
    let mut degrees: Vec<i32> = f1.terms().keys().flat_map(|&p| [p - 1, p]).collect();
    degrees.sort_unstable();
    degrees.dedup();
    for p in degrees {
        let (d1, d2) = (f1.d(p), f2.d(p));
        for s in 0..f1.rank(p) {
            // d₂^p f^p
            for t in 0..f2.rank(p) {
                let Some(unknowns) = var_index.get(&(p, t, s)) else { continue };
                for tp in 0..f2.rank(p + 1) {
                    for (gamma, c) in d2.get(tp, t).terms() {
                        for (v, beta) in unknowns {
                            let e: Exponent = beta.iter().zip(gamma).map(|(x, y)| x + y).collect();
                            add(&mut equations, (p, tp, s, e), *v, c.clone());
                        }
                    }
                }
            }
            // − f^{p+1} d₁^p
            for sp in 0..f1.rank(p + 1) {
                let entry = d1.get(sp, s);
                if entry.is_zero() {
                    continue;
                }
                for tp in 0..f2.rank(p + 1) {
                    let Some(unknowns) = var_index.get(&(p + 1, tp, sp)) else { continue };
                    for (gamma, c) in entry.terms() {
                        for (v, beta) in unknowns {
                            let e: Exponent = beta.iter().zip(gamma).map(|(x, y)| x + y).collect();
                            add(&mut equations, (p, tp, s, e), *v, -c.clone());
                        }
                    }
                }
            }
        }
    }
    let mut system = SparseSystem::new();
    for (_, row) in equations {
        system.add_equation(row);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let values = system.solve(vars.len(), |_| int(rng.gen_range(-5..=5)));
        let mut maps: BTreeMap<i32, PolyMatrix> = f1
            .terms()
            .iter()
            .map(|(&p, w)| (p, PolyMatrix::zeros(f2.rank(p), w.len())))
            .collect();
        for ((p, t, s, exp), value) in vars.iter().zip(values) {
            maps.get_mut(p).expect("degree present").entry_mut(*t, *s).add_term(exp.clone(), value);
        }
        let invertible = maps.values().all(|m| !linalg::determinant(&m.constant_parts()).is_zero());
        if invertible {
            let map = ChainMap::new(f1.clone(), f2.clone(), maps)
                .map_err(|_| GradedError::Internal("solved chain map does not commute"))?;
            return Ok(Some(map));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gradedmod::complex::{cone_of_chain_map, restrict_to_fixed, is_supported_at_origin, window_test_complex, WeightProfile};
    use crate::gradedmod::minimize::minimize;
    use crate::gradedmod::poly::WeightedRing;

    /// Whether the fixed-point weights of `f` all lie in `[w, w + η)`.
    fn in_window(f: &GradedFreeComplex, w: i64) -> bool {
        let eta = f.ring().eta();
        restrict_to_fixed(f).all_weights().all(|(_, q)| w <= q && q < w + eta)
    }

    fn check_lift(f: &GradedFreeComplex, w: i64) -> WindowLift {
        let lift = window_lift(f, w).unwrap();
        assert!(window_test_complex(&lift.lifted, w).passes);
        for leg in &lift.legs {
            assert!(is_supported_at_origin(&cone_of_chain_map(leg).unwrap()));
        }
        lift
    }

    #[test]
    fn lift_of_a_high_twist() {
        let ring = WeightedRing::standard(2);
        let lift = check_lift(&GradedFreeComplex::free_module(ring, 2), 0);
        let profile = restrict_to_fixed(&lift.lifted);
        assert_eq!(profile, WeightProfile(BTreeMap::from([(0, vec![1, 1]), (1, vec![0])])));
    }

    #[test]
    fn lift_of_a_low_twist() {
        let ring = WeightedRing::standard(2);
        let lift = check_lift(&GradedFreeComplex::free_module(ring, -1), 0);
        let mut profile = restrict_to_fixed(&lift.lifted);
        for ws in profile.0.values_mut() {
            ws.sort_unstable();
        }
        assert_eq!(profile, WeightProfile(BTreeMap::from([(-1, vec![1]), (0, vec![0, 0])])));
    }

    #[test]
    fn in_window_input_is_only_minimized() {
        let ring = WeightedRing::standard(3);
        let f = GradedFreeComplex::free_module(ring, 1);
        let lift = check_lift(&f, 0);
        assert_eq!(lift.steps, 0);
        assert_eq!(lift.lifted, minimize(&f));
        assert!(in_window(&lift.lifted, 0));
    }

    #[test]
    fn far_twists_need_many_steps() {
        let ring = WeightedRing::standard(2);
        let lift = check_lift(&GradedFreeComplex::free_module(ring.clone(), -4), 0);
        assert!(lift.steps >= 4);
        let other = window_lift_ordered(&GradedFreeComplex::free_module(ring, -4), 0, LiftOrder::HighFirst).unwrap();
        let iso = find_isomorphism(&lift.lifted, &other.lifted, 7, 5).unwrap().unwrap();
        assert!(minimize(&cone_of_chain_map(&iso).unwrap()).is_zero());
    }

    #[test]
    fn isomorphism_search_rejects_different_complexes() {
        let ring = WeightedRing::standard(2);
        let a = GradedFreeComplex::free_module(ring.clone(), 0);
        let b = GradedFreeComplex::free_module(ring, 1);
        assert!(find_isomorphism(&a, &b, 0, 3).unwrap().is_none());
        assert!(find_isomorphism(&a, &a, 0, 3).unwrap().is_some());
    }
}
