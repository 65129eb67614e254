use std::collections::BTreeSet;
use std::sync::{Arc, OnceLock};

use burnside_core::crossed::{CrossedElement, CrossedRing};
use burnside_core::group::{builtin, Subgroup, Surjection};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SPECS: [&str; 5] = ["cyclic:2", "cyclic:4", "sym:3", "quaternion:8", "dihedral:4"];

fn rings() -> &'static Vec<Arc<CrossedRing>> {
    static RINGS: OnceLock<Vec<Arc<CrossedRing>>> = OnceLock::new();
    RINGS.get_or_init(|| {
        SPECS.iter().map(|s| CrossedRing::from_group(Arc::new(builtin(s).unwrap()), 200).unwrap()).collect()
    })
}

fn random_element(ring: &Arc<CrossedRing>, rng: &mut ChaCha8Rng, lo: i64) -> CrossedElement {
    let mut terms = Vec::new();
    for i in 0..ring.rank() {
        if rng.gen_bool(0.4) {
            terms.push((i, rng.gen_range(lo..=2)));
        }
    }
    ring.from_integers(&terms)
}

/// Orbits of `{(H, a) : a ∈ C_G(H)}` under simultaneous conjugation,
/// counted by brute force over all subgroups and elements.
fn exhaustive_pair_orbits(ring: &CrossedRing) -> usize {
    let g = ring.group();
    let l = ring.burnside().lattice();
    let mut orbits: BTreeSet<(Vec<usize>, usize)> = BTreeSet::new();
    for h in l.subgroups() {
        for a in g.elements() {
            if !h.elements().iter().all(|&x| g.mul(a, x) == g.mul(x, a)) {
                continue;
            }
            let key = g
                .elements()
                .map(|t| (g.conjugate(t, h).elements().to_vec(), g.conj(t, a)))
                .min()
                .unwrap();
            orbits.insert(key);
        }
    }
    orbits.len()
}

#[test]
fn rank_matches_exhaustive_orbit_count() {
    for ring in rings() {
        assert_eq!(ring.rank(), exhaustive_pair_orbits(ring), "{}", ring.group().label());
    }
    assert_eq!(rings()[0].rank(), 4);
    assert_eq!(rings()[2].rank(), 8);
}

#[test]
fn product_independent_of_representatives() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for ring in rings() {
        let g = ring.group();
        let l = ring.burnside().lattice();
        for x in ring.basis() {
            for y in ring.basis() {
                let (h, k) = (l.class_rep(x.class), l.class_rep(y.class));
                let reps = g.double_cosets(h, k);
                let mut base = ring.product_of_pairs(h, x.marker, k, y.marker, &reps).unwrap();
                base.sort();
                for _ in 0..3 {
                    // Move each double coset representative within its coset
                    // and conjugate both input pairs.
                    let alt: Vec<usize> = reps
                        .iter()
                        .map(|&u| {
                            let hh = h.elements()[rng.gen_range(0..h.order())];
                            let kk = k.elements()[rng.gen_range(0..k.order())];
                            g.mul(g.mul(hh, u), kk)
                        })
                        .collect();
                    let (s, t) = (rng.gen_range(0..g.order()), rng.gen_range(0..g.order()));
                    let (hs, ks) = (g.conjugate(s, h), g.conjugate(t, k));
                    let alt: Vec<usize> = alt.iter().map(|&u| g.mul(g.mul(s, u), g.inv(t))).collect();
                    let mut other = ring.product_of_pairs(&hs, g.conj(s, x.marker), &ks, g.conj(t, y.marker), &alt).unwrap();
                    other.sort();
                    assert_eq!(base, other);
                }
            }
        }
    }
}

#[test]
fn embedding_is_a_unital_monomorphism() {
    for ring in rings() {
        let b = ring.burnside();
        assert_eq!(ring.embed_burnside(&b.one()).unwrap(), ring.one());
        let images: BTreeSet<Vec<usize>> = (0..b.rank())
            .map(|c| ring.embed_burnside(&b.basis(c)).unwrap().coeffs().keys().copied().collect())
            .collect();
        assert_eq!(images.len(), b.rank());
        for i in 0..b.rank() {
            for j in 0..b.rank() {
                let (x, y) = (b.basis(i), b.basis(j));
                let lhs = ring.embed_burnside(&(&x * &y)).unwrap();
                let rhs = &ring.embed_burnside(&x).unwrap() * &ring.embed_burnside(&y).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }
}

#[test]
fn zeta_is_injective() {
    for ring in rings() {
        assert_eq!(ring.zeta_rank(), ring.rank(), "{}", ring.group().label());
    }
}

#[test]
fn hom_counts_decide_isomorphism() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for ring in rings() {
        for _ in 0..40 {
            let x = random_element(ring, &mut rng, 0);
            let y = if rng.gen_bool(0.3) { x.clone() } else { random_element(ring, &mut rng, 0) };
            assert_eq!(ring.iso_by_homcount(&x, &y).unwrap(), x == y);
        }
        let neg = ring.from_integers(&[(0, -1)]);
        assert!(ring.hom_profile(&neg).is_err());
    }
}

fn normal_subgroup(ring: &CrossedRing, order: usize, inside: Option<&Subgroup>) -> Subgroup {
    let g = ring.group();
    ring.burnside()
        .lattice()
        .subgroups()
        .iter()
        .find(|s| s.order() == order && g.is_normal(s) && inside.map_or(true, |n| n.is_subset_of(s)))
        .cloned()
        .unwrap()
}

#[test]
fn crossed_fix_composes() {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    for (spec, lo, hi) in [("dihedral:4", 2, 4), ("sym:4", 4, 12)] {
        let ring = CrossedRing::from_group(Arc::new(builtin(spec).unwrap()), 200).unwrap();
        let small = normal_subgroup(&ring, lo, None);
        let big = normal_subgroup(&ring, hi, Some(&small));
        let (s1, r1, _) = ring.fix_n(&ring.one(), &small).unwrap();
        let s2 = Surjection::quotient(r1.group().clone(), &s1.image(&big)).unwrap();
        let r2 = CrossedRing::from_group(s2.target().clone(), 200).unwrap();
        for _ in 0..30 {
            let x = random_element(&ring, &mut rng, -2);
            let step = r1.fix_along(&ring.fix_along(&x, &s1, &r1).unwrap(), &s2, &r2).unwrap();
            let once = ring.fix_along(&x, &s1.then(&s2), &r2).unwrap();
            assert_eq!(step, once, "{spec}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn commutative_and_associative(seed in any::<u64>(), which in 0usize..5) {
        let ring = &rings()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, y, z) = (random_element(ring, &mut rng, -2), random_element(ring, &mut rng, -2), random_element(ring, &mut rng, -2));
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x * &ring.one(), x);
    }

    #[test]
    fn zeta_is_a_central_ring_homomorphism(seed in any::<u64>(), which in 1usize..5) {
        let ring = &rings()[which];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, y) = (random_element(ring, &mut rng, -2), random_element(ring, &mut rng, -2));
        let (zx, zy) = (ring.zeta(&x).unwrap(), ring.zeta(&y).unwrap());
        prop_assert_eq!(ring.zeta(&(&x * &y)).unwrap(), ring.zeta_product(&zx, &zy));
        prop_assert!(ring.zeta_is_central(&zx));
    }

    #[test]
    fn crossed_fix_is_a_ring_homomorphism(seed in any::<u64>()) {
        let ring = &rings()[4];
        let centre = ring.group().center();
        let (s, q, _) = ring.fix_n(&ring.one(), &centre).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, y) = (random_element(ring, &mut rng, -2), random_element(ring, &mut rng, -2));
        let f = |e: &CrossedElement| ring.fix_along(e, &s, &q).unwrap();
        prop_assert_eq!(f(&(&x * &y)), &f(&x) * &f(&y));
        prop_assert_eq!(f(&ring.one()), q.one());
    }
}
