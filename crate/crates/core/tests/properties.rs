use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use mixlab_core::combinatorics::{binomial, colex, colex_rank};
use mixlab_core::exact::ratio;
use mixlab_core::largeness::{sigma_from_ip, sigma_star_evidence, FsFamily, LargenessCert, SeedMatrix};
use mixlab_core::ramsey::{find_homogeneous, rlimit_estimate, Coloring, SimplexArray};
use mixlab_core::{CylinderPattern, GroupCtx, GroupElement, Homomorphism, System};

fn lattice_elem(d: usize) -> impl Strategy<Value = GroupElement> {
    prop::collection::vec(-1000i64..1000, d).prop_map(|v| GroupElement::from_i64s(&v))
}

fn fin_support_elem() -> impl Strategy<Value = GroupElement> {
    prop::collection::vec(-50i64..50, 0..8).prop_map(|mut v| {
        while v.last() == Some(&0) {
            v.pop();
        }
        GroupElement::from_i64s(&v)
    })
}

fn ledrappier_pattern() -> impl Strategy<Value = CylinderPattern> {
    prop::collection::btree_map((-6i64..6, -6i64..6), 0u32..2, 0..6).prop_map(|m| {
        CylinderPattern::new(m.into_iter().map(|((a, b), s)| (GroupElement::from_i64s(&[a, b]), s))).unwrap()
    })
}

proptest! {
    #[test]
    fn lattice_group_laws(a in lattice_elem(3), b in lattice_elem(3), c in lattice_elem(3)) {
        let g = GroupCtx::int_vec(3).unwrap();
        prop_assert_eq!(g.add(&a, &b).unwrap(), g.add(&b, &a).unwrap());
        let l = g.add(&g.add(&a, &b).unwrap(), &c).unwrap();
        let r = g.add(&a, &g.add(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(l, r);
        prop_assert_eq!(g.sub(&a, &a).unwrap(), g.zero());
    }

    #[test]
    fn fin_support_group_laws(a in fin_support_elem(), b in fin_support_elem(), c in fin_support_elem()) {
        let g = GroupCtx::fin_support();
        prop_assert_eq!(g.add(&a, &b).unwrap(), g.add(&b, &a).unwrap());
        let l = g.add(&g.add(&a, &b).unwrap(), &c).unwrap();
        let r = g.add(&a, &g.add(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(l, r);
        prop_assert!(g.contains(&g.sub(&a, &b).unwrap()));
    }

    #[test]
    fn escape_norm_laws(a in lattice_elem(2), s in fin_support_elem()) {
        let g = GroupCtx::int_vec(2).unwrap();
        prop_assert_eq!(g.escape_norm(&a).unwrap().is_zero(), a == g.zero());
        prop_assert_eq!(g.escape_norm(&g.neg(&a).unwrap()).unwrap(), g.escape_norm(&a).unwrap());
        let f = GroupCtx::fin_support();
        prop_assert_eq!(f.escape_norm(&s).unwrap().is_zero(), s == f.zero());
        prop_assert_eq!(f.escape_norm(&f.neg(&s).unwrap()).unwrap(), f.escape_norm(&s).unwrap());
    }

    #[test]
    fn matrix_hom_is_additive(rows in prop::collection::vec(prop::collection::vec(-9i64..9, 3), 3),
                              a in lattice_elem(3), b in lattice_elem(3)) {
        let phi = Homomorphism::matrix_i64(&rows).unwrap();
        let sum = phi.source().add(&a, &b).unwrap();
        let lhs = phi.apply(&sum).unwrap();
        let rhs = phi.target().add(&phi.apply(&a).unwrap(), &phi.apply(&b).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn sequence_homs_are_additive(a in fin_support_elem(), b in fin_support_elem(), p in prop::sample::select(vec![2u64, 3, 5])) {
        let homs = [
            Homomorphism::interleave(),
            Homomorphism::deinterleave(),
            Homomorphism::prime_select(p).unwrap(),
            Homomorphism::scale(GroupCtx::fin_support(), -3),
        ];
        for phi in homs {
            let sum = phi.source().add(&a, &b).unwrap();
            let lhs = phi.apply(&sum).unwrap();
            let rhs = phi.target().add(&phi.apply(&a).unwrap(), &phi.apply(&b).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn folner_windows_nest(k in 1usize..4) {
        for g in [GroupCtx::int(), GroupCtx::int_vec(2).unwrap(), GroupCtx::fin_support()] {
            let fam = g.canonical_folner(4);
            let small: BTreeSet<_> = fam.window(k).unwrap().into_iter().collect();
            let big: BTreeSet<_> = fam.window(k + 1).unwrap().into_iter().collect();
            prop_assert!(small.is_subset(&big));
        }
    }

    #[test]
    fn folner_ratio_increases(g in lattice_elem(2)) {
        let fam = GroupCtx::int_vec(2).unwrap().canonical_folner(40);
        let mut prev = BigRational::zero();
        for k in 1..=40 {
            let r = fam.ratio(k, &g).unwrap();
            prop_assert!(r >= prev);
            prop_assert!(r <= BigRational::one());
            prev = r;
        }
    }

    #[test]
    fn ledrappier_measure_is_shift_invariant(p in ledrappier_pattern(), g in lattice_elem(2)) {
        let sys = System::ledrappier();
        let moved = sys.translate(&g, &p).unwrap();
        prop_assert_eq!(sys.measure(&moved).unwrap(), sys.measure(&p).unwrap());
    }

    #[test]
    fn bernoulli_product_law(shifts in prop::collection::btree_set(-40i64..40, 1..5), syms in prop::collection::vec(0u32..3, 5)) {
        let probs = vec![ratio(1, 2), ratio(1, 3), ratio(1, 6)];
        let sys = System::bernoulli(GroupCtx::int(), probs).unwrap();
        let terms: Vec<_> = shifts
            .iter()
            .zip(&syms)
            .map(|(&g, &s)| (GroupElement::int(g), CylinderPattern::single(GroupElement::int(0), s)))
            .collect();
        let joint = sys.correlate(&terms).unwrap();
        let product: BigRational = terms.iter().map(|(_, a)| sys.measure(a).unwrap().into_inner()).product();
        prop_assert_eq!(joint.into_inner(), product);
    }

    #[test]
    fn correlate_ignores_term_order(ps in prop::collection::vec((ledrappier_pattern(), lattice_elem(2)), 1..4), seed in any::<u64>()) {
        let sys = System::ledrappier();
        let terms: Vec<_> = ps.into_iter().map(|(p, g)| (g, p)).collect();
        let mut shuffled = terms.clone();
        let n = shuffled.len();
        for i in (1..n).rev() {
            shuffled.swap(i, (seed as usize >> (i % 8)) % (i + 1));
        }
        prop_assert_eq!(sys.correlate(&terms).unwrap(), sys.correlate(&shuffled).unwrap());
    }

    #[test]
    fn colex_rank_is_a_bijection(n in 1usize..9, m in 1usize..5) {
        prop_assume!(m <= n);
        let ranks: Vec<usize> = colex(n, m).map(|a| colex_rank(&a)).collect();
        prop_assert_eq!(ranks.len() as u128, binomial(n, m));
        prop_assert!(ranks.iter().enumerate().all(|(i, &r)| i == r));
    }

    #[test]
    fn sigma_from_ip_sums_are_fs_values(gens in prop::collection::vec(1i64..50, 2..7), m in 1usize..4) {
        let mut acc = 0i64;
        let increasing: Vec<GroupElement> = gens.iter().map(|&g| { acc += g; GroupElement::int(acc) }).collect();
        prop_assume!(m <= increasing.len());
        let fam = FsFamily::scalar(GroupCtx::int(), increasing).unwrap();
        let seed = sigma_from_ip(&fam, m).unwrap();
        let pts = seed.enumerate_sigma();
        prop_assert_eq!(pts.len() as u128, binomial(fam.horizon(), m));
        let fs: BTreeSet<Vec<GroupElement>> = fam
            .enumerate()
            .unwrap()
            .into_iter()
            .filter(|p| p.alpha.len() == m)
            .map(|p| p.tuple)
            .collect();
        prop_assert!(pts.iter().all(|p| fs.contains(&p.tuple)));
    }

    #[test]
    fn sigma_certificates_are_dichotomous_and_verify(bound in 0i64..400, modulus in 1i64..7) {
        let z = GroupCtx::int();
        let battery: Vec<SeedMatrix> = (1..=3)
            .map(|s| SeedMatrix::from_fn(z.clone(), 2, 1, 6, |_, t, k| Ok(GroupElement::int((s * k as i64 + t as i64) * (t as i64 + 1)))).unwrap())
            .collect();
        let pred = |t: &[GroupElement]| {
            let v = &t[0].coords()[0];
            v > &BigInt::from(bound) && (v % modulus).is_zero()
        };
        let cert = sigma_star_evidence(pred, &battery).unwrap();
        let kinds = matches!(cert, LargenessCert::EvidenceSigmaStar { .. }) as u8
            + matches!(cert, LargenessCert::RefutesSigmaStar { .. }) as u8;
        prop_assert_eq!(kinds, 1);
        prop_assert!(cert.verify_sigma(pred, &battery));
    }

    #[test]
    fn homogeneous_search_is_sound_and_budget_monotone(m in 1usize..4, n in 4usize..9, seed in any::<u64>(), b1 in 1u64..200, extra in 0u64..2000) {
        prop_assume!(m <= n);
        let col = Coloring::from_fn(m, n, |a| {
            let h = a.iter().fold(seed, |h, &x| h.wrapping_mul(6364136223846793005).wrapping_add(x as u64));
            (h >> 33) as u32 % 3
        }).unwrap();
        let small = find_homogeneous(&col, m, b1).unwrap();
        let large = find_homogeneous(&col, m, b1 + extra).unwrap();
        prop_assert!(small.cert.verify(&col));
        prop_assert!(large.cert.verify(&col));
        prop_assert!(large.cert.size >= small.cert.size);
    }

    #[test]
    fn rlimit_is_sound_and_deterministic(n in 3usize..12, num in prop::collection::vec(0i64..20, 66), den in 1i64..8) {
        let arr = SimplexArray::from_fn(2, n, |a| Ok(ratio(num[(a[0] * 7 + a[1]) % 66], den))).unwrap();
        let eps = ratio(1, 3);
        let e1 = rlimit_estimate(&arr, &eps, 100_000).unwrap();
        let e2 = rlimit_estimate(&arr, &eps, 100_000).unwrap();
        prop_assert!(e1.verify(&arr));
        prop_assert!(e1.max_deviation <= eps);
        prop_assert_eq!(e1, e2);
    }
}
