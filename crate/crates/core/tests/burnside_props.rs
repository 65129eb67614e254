use std::sync::{Arc, OnceLock};

use burnside_core::burnside::{BurnsideElement, BurnsideRing, MulPath};
use burnside_core::group::{builtin, Subgroup};
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn s4() -> &'static Arc<BurnsideRing> {
    static RING: OnceLock<Arc<BurnsideRing>> = OnceLock::new();
    RING.get_or_init(|| BurnsideRing::new(Arc::new(builtin("sym:4").unwrap()), 200).unwrap())
}

fn random_element(ring: &Arc<BurnsideRing>, rng: &mut ChaCha8Rng) -> BurnsideElement {
    let terms: Vec<(usize, i64)> = (0..ring.rank()).map(|c| (c, rng.gen_range(-3..=3))).collect();
    ring.from_integers(&terms)
}

fn normal_of_order(ring: &BurnsideRing, order: usize) -> Subgroup {
    let g = ring.group();
    ring.lattice()
        .subgroups()
        .iter()
        .find(|s| s.order() == order && g.is_normal(s))
        .cloned()
        .unwrap()
}

#[test]
fn transitive_marks() {
    let ring = s4();
    let l = ring.lattice();
    let g = ring.group();
    for c in 0..ring.rank() {
        let h = l.class_rep(c);
        let m = ring.marks(&ring.basis(c));
        let expected = BigRational::from_integer((g.normalizer(h).order() / h.order()).into());
        assert_eq!(m.values[c], expected);
        // [G/H] has no K-fixed points unless K is subconjugate to H.
        for k in 0..ring.rank() {
            if l.class_order(k) > h.order() {
                assert!(m.values[k].is_zero());
            }
        }
    }
    assert!(ring.table_of_marks().is_lower_triangular());
}

#[test]
fn mark_of_first_column_is_index() {
    let ring = s4();
    for c in 0..ring.rank() {
        let idx = 24 / ring.lattice().class_order(c);
        assert_eq!(ring.table_of_marks().mark(0, c), idx as u64);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(seed in any::<u64>()) {
        let ring = s4();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, y, z) = (random_element(ring, &mut rng), random_element(ring, &mut rng), random_element(ring, &mut rng));
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x * &ring.one(), x.clone());
        prop_assert!((&x - &x).is_zero());
    }

    #[test]
    fn marks_are_a_ring_homomorphism(seed in any::<u64>()) {
        let ring = s4();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, y) = (random_element(ring, &mut rng), random_element(ring, &mut rng));
        let (mx, my, mxy) = (x.marks(), y.marks(), (&x * &y).marks());
        for c in 0..ring.rank() {
            prop_assert_eq!(&mxy.values[c], &(&mx.values[c] * &my.values[c]));
            prop_assert_eq!(&(&x + &y).marks().values[c], &(&mx.values[c] + &my.values[c]));
        }
        prop_assert_eq!(ring.from_marks(&mx), x);
    }

    #[test]
    fn double_coset_product_agrees(seed in any::<u64>()) {
        let ring = s4();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, y) = (random_element(ring, &mut rng), random_element(ring, &mut rng));
        prop_assert_eq!(
            x.multiply_with(&y, MulPath::DoubleCoset).unwrap(),
            x.multiply_with(&y, MulPath::Marks).unwrap()
        );
    }

    #[test]
    fn fix_is_a_ring_homomorphism(seed in any::<u64>(), big in any::<bool>()) {
        let ring = s4();
        let n = normal_of_order(ring, if big { 12 } else { 4 });
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, y) = (random_element(ring, &mut rng), random_element(ring, &mut rng));
        let (q, fx) = ring.fix_n(&x, &n).unwrap();
        let fy = ring.fix_along(&y, &q.surjection, &q.ring).unwrap();
        let fxy = ring.fix_along(&(&x * &y), &q.surjection, &q.ring).unwrap();
        prop_assert_eq!(fxy, &fx * &fy);
        prop_assert_eq!(ring.fix_along(&ring.one(), &q.surjection, &q.ring).unwrap(), q.ring.one());
    }

    #[test]
    fn fix_after_inflate_is_identity(seed in any::<u64>()) {
        let ring = s4();
        let n = normal_of_order(ring, 4);
        let (q, _) = ring.fix_n(&ring.one(), &n).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_element(&q.ring, &mut rng);
        let up = q.inflate(ring, &x).unwrap();
        prop_assert_eq!(ring.fix_along(&up, &q.surjection, &q.ring).unwrap(), x);
    }
}

#[test]
fn fix_marks_read_through_preimages() {
    // |Fix_N(X)^{W}| = |X^{π⁻¹(W)}|
    let ring = s4();
    let n = normal_of_order(ring, 4);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let x = random_element(ring, &mut rng);
        let (q, fx) = ring.fix_n(&x, &n).unwrap();
        let mx = x.marks();
        let mf = fx.marks();
        for w in 0..q.ring.rank() {
            let pre = q.surjection.preimage(q.ring.lattice().class_rep(w));
            assert_eq!(mf.values[w], mx.values[ring.class_of_subgroup(&pre)]);
        }
    }
}

#[test]
fn gluck_idempotents_are_orthogonal_and_complete() {
    let ring = s4();
    let es = ring.gluck_idempotents();
    let total = es.iter().fold(ring.zero(), |acc, e| &acc + e);
    assert_eq!(total, ring.one());
    for (i, ei) in es.iter().enumerate() {
        for (j, ej) in es.iter().enumerate() {
            let p = ei * ej;
            if i == j {
                assert_eq!(&p, ei);
            } else {
                assert!(p.is_zero());
            }
        }
        let m = ei.marks();
        for (c, v) in m.values.iter().enumerate() {
            assert_eq!(v.is_one(), c == i);
        }
    }
}

#[test]
fn integral_idempotents_two_ways() {
    for spec in ["sym:4", "alt:5"] {
        let ring = BurnsideRing::new(Arc::new(builtin(spec).unwrap()), 200).unwrap();
        let a = ring.integral_idempotents();
        assert_eq!(a, ring.integral_idempotents_by_gluck_sum());
        for (_, f) in &a {
            assert!(f.is_integral());
            assert_eq!(&(f * f), f);
        }
    }
}
