mod common;

use gitwin_core::gitcore::{kn_stratification, optimal_destabilizer, Support, TorusActionProblem};
use gitwin_core::gradedmod::{
    cone_of_chain_map, is_supported_at_origin, koszul_skyscraper, minimize, restrict_to_fixed, window_lift,
    ChainMap, WeightedRing,
};
use gitwin_core::polyhedra::{cone_contains, minimize_norm, Cone, InnerProduct, Membership, QpProblem, RationalVector};
use gitwin_core::rational::{int, IntVector, Rational};
use gitwin_core::vgit::{classify_linearization, git_fan, wall_crossing_report, LinearizationClass, Verdict};
use gitwin_core::windows::{enumerate_rules, WindowRule};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Fourier–Motzkin decision of `p ∈ cone(g)`: eliminate the coefficients
/// from `c ≥ 0, Σ c_i g_i = p` and inspect the remaining constant rows.
fn fm_contains(gens: &[IntVector], p: &[i64]) -> bool {
    let m = gens.len();
    // Rows `coef · c ≤ rhs`.
    let mut rows: Vec<(Vec<i128>, i128)> = Vec::new();
    for i in 0..m {
        let mut coef = vec![0; m];
        coef[i] = -1;
        rows.push((coef, 0));
    }
    for r in 0..p.len() {
        let coef: Vec<i128> = gens.iter().map(|g| i128::from(g[r])).collect();
        rows.push((coef.clone(), i128::from(p[r])));
        rows.push((coef.iter().map(|x| -x).collect(), -i128::from(p[r])));
    }
    for v in 0..m {
        let (pos, rest): (Vec<_>, Vec<_>) = rows.into_iter().partition(|(c, _)| c[v] > 0);
        let (neg, zero): (Vec<_>, Vec<_>) = rest.into_iter().partition(|(c, _)| c[v] < 0);
        rows = zero;
        for (cp, bp) in &pos {
            for (cn, bn) in &neg {
                let (s, t) = (-cn[v], cp[v]);
                let coef: Vec<i128> = cp.iter().zip(cn).map(|(x, y)| s * x + t * y).collect();
                let mut row = (coef, s * bp + t * bn);
                let g = row.0.iter().fold(row.1.abs(), |g, &x| gcd(g, x.abs()));
                if g > 1 {
                    row.0.iter_mut().for_each(|x| *x /= g);
                    row.1 /= g;
                }
                rows.push(row);
            }
        }
    }
    rows.iter().all(|(_, b)| *b >= 0)
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn vectors(k: usize, len: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<IntVector>> {
    prop::collection::vec(prop::collection::vec(-3i64..=3, k), len)
}

fn problem(k: usize) -> impl Strategy<Value = TorusActionProblem> {
    (vectors(k, 1..=5), prop::collection::vec(-3i64..=3, k))
        .prop_map(move |(w, chi)| TorusActionProblem::standard(k, w, chi).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn membership_agrees_with_fourier_motzkin(gens in vectors(3, 1..=5), p in prop::collection::vec(-3i64..=3, 3)) {
        let cone = Cone::new(3, gens.clone()).unwrap();
        let point = RationalVector::from_ints(&p);
        let m = cone_contains(&cone, &point).unwrap();
        prop_assert_eq!(m.is_contained(), fm_contains(&gens, &p));
        match m {
            Membership::Contained { witness } => {
                prop_assert_eq!(witness.len(), cone.generators().len());
                for r in 0..3 {
                    let sum: Rational = witness.iter().zip(cone.generators()).map(|(c, g)| c * int(g[r])).sum();
                    prop_assert_eq!(sum, int(p[r]));
                }
                prop_assert!(witness.iter().all(|c| *c >= int(0)));
            }
            Membership::Separated { separator } => {
                for g in cone.generators() {
                    prop_assert!(separator.dot(&RationalVector::from_ints(g)) <= int(0));
                }
                prop_assert_eq!(separator.dot(&point), int(1));
            }
        }
    }

    #[test]
    fn kempf_minimizer_satisfies_the_variational_inequality(normals in vectors(3, 0..=4), chi in prop::collection::vec(-3i64..=3, 3)) {
        let refs: Vec<&[i64]> = normals.iter().map(Vec::as_slice).collect();
        let qp = QpProblem::kempf(InnerProduct::identity(3), &refs, &chi);
        let opt = minimize_norm(&qp).unwrap();
        let candidates = common::primitive_box(3, 2);
        let feasible: Vec<&IntVector> = candidates
            .iter()
            .filter(|v| -dot(v, &chi) > 0 && normals.iter().all(|a| dot(v, a) >= 0))
            .collect();
        match opt {
            None => prop_assert!(feasible.is_empty()),
            Some(opt) => {
                let x = &opt.minimizer;
                prop_assert!(qp.is_feasible_point(x));
                prop_assert_eq!(x.dot(x), opt.value.clone());
                for v in feasible {
                    let y = RationalVector::from_ints(v).scale(&(int(1) / int(-dot(v, &chi))));
                    // ⟨x, y − x⟩ ≥ 0 for every feasible y.
                    prop_assert!(x.dot(&y) - x.dot(x) >= int(0));
                }
            }
        }
    }

    #[test]
    fn destabilizer_is_invariant_under_scaling(p in problem(2), scale in 2i64..=4) {
        let chi: IntVector = p.linearization().iter().map(|x| x * scale).collect();
        let q = p.with_linearization(chi).unwrap();
        for s in Support::all(p.dim()) {
            let a = optimal_destabilizer(&p, s).unwrap().map(|(l, _)| l);
            let b = optimal_destabilizer(&q, s).unwrap().map(|(l, _)| l);
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn strata_partition_the_supports(p in problem(2)) {
        let st = kn_stratification(&p).unwrap();
        for s in Support::all(p.dim()) {
            let hits = st.strata.iter().filter(|x| x.member_supports.contains(&s)).count()
                + usize::from(st.semistable_supports.contains(&s));
            prop_assert_eq!(hits, 1);
        }
        for x in &st.strata {
            let pairings = p.pairings(&x.lambda);
            prop_assert_eq!(x.eta, pairings.iter().filter(|&&v| v < 0).map(|v| -v).sum::<i64>());
            prop_assert_eq!(x.omega_weight, pairings.iter().sum::<i64>());
        }
    }

    #[test]
    fn wall_crossing_eta_identity(pos in prop::collection::vec(1i64..=3, 1..=3), neg in prop::collection::vec(-3i64..=-1, 1..=3)) {
        let weights: Vec<i64> = pos.iter().chain(&neg).copied().collect();
        let r = wall_crossing_report(&TorusActionProblem::rank_one(&weights, 0), &[1]).unwrap();
        prop_assert!(!r.one_sided);
        prop_assert!(r.balanced);
        for pair in &r.pairs {
            prop_assert_eq!(pair.omega_weight, pair.eta_plus - pair.eta_minus);
            prop_assert_eq!(pair.omega_weight, weights.iter().map(|a| a * pair.lambda_minus[0]).sum::<i64>());
        }
        let total: i64 = weights.iter().sum();
        prop_assert_eq!(r.cy_shortcut, total == 0);
        let expected = match total.signum() {
            0 => Verdict::Equivalence,
            1 => Verdict::EmbedMinusIntoPlus,
            _ => Verdict::EmbedPlusIntoMinus,
        };
        prop_assert_eq!(r.verdict, expected);
    }

    #[test]
    fn fan_chambers_are_consistent(weights in vectors(2, 2..=5)) {
        let Ok(fan) = git_fan(2, &weights) else {
            // Only rank-deficient weights may fail.
            let spans = weights.iter().any(|a| weights.iter().any(|b| a[0] * b[1] != a[1] * b[0]));
            prop_assert!(!spans);
            return Ok(());
        };
        prop_assert!(!fan.chambers.is_empty());
        for (i, c) in fan.chambers.iter().enumerate() {
            prop_assert_eq!(fan.chambers_containing(&c.interior_point), vec![i]);
            let p = TorusActionProblem::standard(2, weights.clone(), c.interior_point.clone()).unwrap();
            prop_assert_eq!(classify_linearization(&p).unwrap(), LinearizationClass::ChamberInterior);
            for ray in &c.rays {
                prop_assert!(cone_contains(&fan.effective_cone, &RationalVector::from_ints(ray)).unwrap().is_contained());
            }
        }
        for w in &fan.walls {
            prop_assert!(matches!(w.adjacent_chambers.len(), 1 | 2));
        }
    }

    #[test]
    fn window_width_and_shift(c in prop::collection::vec(1i64..=3, 1..=4), w in -5i64..=5) {
        let eta: i64 = c.iter().sum();
        let rule = |w| WindowRule { lambda: vec![-1], eta, w };
        let set = enumerate_rules(1, vec![rule(w)], 40);
        prop_assert_eq!(set.len() as i64, eta);
        let shifted = enumerate_rules(1, vec![rule(w + 1)], 40);
        let moved: Vec<IntVector> = set.characters.iter().map(|x| vec![x[0] + 1]).collect();
        prop_assert_eq!(shifted.characters, moved);
    }

    #[test]
    fn koszul_profile(c in prop::collection::vec(1i64..=3, 1..=3), b in -4i64..=4, m in 1usize..=2) {
        let ring = WeightedRing::new(c.clone()).unwrap();
        let k = koszul_skyscraper(&ring, b, m).unwrap();
        k.validate().unwrap();
        let profile = restrict_to_fixed(&k);
        prop_assert_eq!(profile.total_dim(), m << c.len());
        let mut seen: Vec<i64> = profile.all_weights().map(|(_, q)| q).collect();
        let mut expected: Vec<i64> = (0..1u32 << c.len())
            .flat_map(|mask| {
                let q = b + (0..c.len()).filter(|j| mask >> j & 1 == 1).map(|j| c[j]).sum::<i64>();
                std::iter::repeat_n(q, m)
            })
            .collect();
        seen.sort_unstable();
        expected.sort_unstable();
        prop_assert_eq!(seen, expected);
        prop_assert!(is_supported_at_origin(&k));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn cones_and_lifts_are_complexes(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = common::random_complex(&mut rng, -2..=4);
        f.validate().unwrap();
        let cone = cone_of_chain_map(&ChainMap::identity(&f)).unwrap();
        cone.validate().unwrap();
        prop_assert!(minimize(&cone).is_zero());
        let lift = window_lift(&f, 0).unwrap();
        lift.lifted.validate().unwrap();
        for leg in &lift.legs {
            leg.validate().unwrap();
            cone_of_chain_map(leg).unwrap().validate().unwrap();
        }
    }
}
