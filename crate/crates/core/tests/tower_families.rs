use std::sync::Arc;

use burnside_core::error::Error;
use burnside_core::tower::{has_squarefree_index_support, zp_closed_form, QuotientTower};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn a5xz() -> Arc<QuotientTower> {
    QuotientTower::from_spec("a5xz:chain=1,2,4").unwrap()
}

#[test]
fn zp_families_match_closed_form() {
    for p in [2usize, 3] {
        let t = QuotientTower::from_spec(&format!("zp:p={p},depth=5")).unwrap();
        for n in 0..5u32 {
            let fam = t.idempotent_family(&format!("index:p^{n}")).unwrap();
            assert_eq!(fam.first_incompatible_level().unwrap(), None);
            assert!(fam.is_idempotent());
            for (i, x) in fam.plain_levels().unwrap().iter().enumerate() {
                let m = i as u32 + 1;
                assert_eq!(*x, zp_closed_form(t.level(i).burnside(), p, n, m), "p={p} n={n} m={m}");
            }
        }
    }
}

#[test]
fn zhat_full_family_is_squarefree() {
    let t = QuotientTower::from_spec("zhat:depth=4").unwrap();
    let fam = t.idempotent_family("full").unwrap();
    assert!(fam.is_compatible());
    for (i, x) in fam.plain_levels().unwrap().iter().enumerate() {
        let ring = t.level(i).burnside();
        assert_eq!(*x, ring.gluck_idempotent(ring.rank() - 1));
        assert!(has_squarefree_index_support(x));
    }
}

#[test]
fn depth_one_is_plain_gluck() {
    let t = QuotientTower::from_spec("zp:p=3,depth=1").unwrap();
    let fam = t.idempotent_family("full").unwrap();
    let ring = t.level(0).burnside();
    assert_eq!(fam.plain_levels().unwrap()[0], ring.gluck_idempotent(ring.rank() - 1));
}

#[test]
fn corrupted_family_is_located() {
    let t = QuotientTower::from_spec("zp:p=2,depth=4").unwrap();
    let fam = t.idempotent_family("index:p^1").unwrap();
    for level in 0..3 {
        let bad = fam.with_plain_level(level, t.level(level).burnside().one()).unwrap();
        assert_eq!(bad.first_incompatible_level().unwrap(), Some(level));
    }
}

#[test]
fn soluble_towers_have_trivial_census() {
    for spec in ["zp:p=2,depth=4", "zp:p=3,depth=3", "zhat:depth=3"] {
        let t = QuotientTower::from_spec(spec).unwrap();
        let report = t.prosoluble_census_default().unwrap();
        assert!(report.per_level.iter().all(|&n| n == 2), "{spec}");
        assert_eq!(report.coherent.len(), 2);
        assert!(!report.nontrivial);
    }
}

#[test]
fn a5xz_census_has_four_families() {
    let t = a5xz();
    let report = t.prosoluble_census_default().unwrap();
    assert_eq!(report.per_level, vec![4, 4, 4]);
    assert_eq!(report.coherent.len(), 4);
    assert!(report.nontrivial);
    let a5 = t.level(0).burnside();
    let (_, f) = a5.integral_idempotents().into_iter().find(|(c, _)| *c != 0).unwrap();
    let inflated = t.inflated_family(&f).unwrap();
    assert!(inflated.is_compatible());
    assert!(report.coherent.contains(&inflated));
    for (i, x) in inflated.plain_levels().unwrap().iter().enumerate() {
        let ring = t.level(i).burnside();
        let own = ring.integral_idempotents().into_iter().find(|(c, _)| *c != 0).unwrap().1;
        assert_eq!(*x, own);
    }
}

#[test]
fn a5xz_gluck_families() {
    let t = a5xz();
    for spec in ["A5x1", "A5x2", "A4x4", "1x2", "D10x1", "full"] {
        let fam = t.idempotent_family(spec).unwrap();
        assert!(fam.is_compatible(), "{spec}");
        assert!(fam.is_idempotent(), "{spec}");
    }
    assert!(matches!(t.idempotent_family("A5x3"), Err(Error::SpecUnresolvable { .. })));
}

#[test]
fn crossed_transitions_compose() {
    let t = a5xz();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let top = t.level(2).crossed().clone();
    for _ in 0..5 {
        let x = top.from_integers(&(0..4).map(|_| (rng.gen_range(0..top.rank()), rng.gen_range(-3..4))).collect::<Vec<_>>());
        let direct = t.crossed_transition(2, 0, &x).unwrap();
        let stepped = t.crossed_transition(1, 0, &t.crossed_transition(2, 1, &x).unwrap()).unwrap();
        assert_eq!(direct, stepped);
    }
}

#[test]
fn marker_recovery() {
    let t = a5xz();
    let plain = t.inflated_family(&t.level(0).burnside().one()).unwrap().to_crossed().unwrap();
    let chains = t.crossed_family_marker_recovery(&plain).unwrap();
    for c in &chains {
        assert!(c.links.iter().all(|l| l.coset == t.level(l.level).group().identity()));
    }
    // (A₅×ℤ/4, z) with z a generator of the centre.
    let top = t.level(2).crossed().clone();
    let g = t.level(2).group().clone();
    let whole = g.whole();
    let pair = top.canonical_pair(&whole, 1).unwrap();
    let fam = t.crossed_family_from_top(&top.pair_element(pair)).unwrap();
    assert!(fam.is_compatible());
    let chains = t.crossed_family_marker_recovery(&fam).unwrap();
    assert_eq!(chains.len(), 1);
    let cosets: Vec<usize> = chains[0].links.iter().map(|l| l.coset).collect();
    assert_eq!(cosets, vec![1, 1, 0]);
    // Replace the middle level's marker.
    let mid = t.level(1).crossed().clone();
    let wrong = mid.pair_element(mid.canonical_pair(&t.level(1).group().whole(), 0).unwrap());
    let bad = fam.with_crossed_level(1, wrong).unwrap();
    match t.crossed_family_marker_recovery(&bad) {
        Err(Error::IncoherentMarkers { level, .. }) => assert_eq!(level, 1),
        other => panic!("expected incoherent markers, got {other:?}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn transitions_are_ring_maps(seed in any::<u64>()) {
        let t = QuotientTower::from_spec("zhat:depth=4").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let top = t.level(3).burnside().clone();
        let mut pick = || top.from_integers(&(0..3).map(|_| (rng.gen_range(0..top.rank()), rng.gen_range(-4..5))).collect::<Vec<_>>());
        let (x, y) = (pick(), pick());
        for to in 0..3 {
            let tx = t.transition(3, to, &x).unwrap();
            let ty = t.transition(3, to, &y).unwrap();
            prop_assert_eq!(t.transition(3, to, &(&x * &y)).unwrap(), &tx * &ty);
            prop_assert_eq!(t.transition(3, to, &(&x + &y)).unwrap(), &tx + &ty);
        }
        let fx = t.family_from_top(&x).unwrap();
        let fy = t.family_from_top(&y).unwrap();
        prop_assert!(fx.mul(&fy).unwrap().is_compatible());
        prop_assert!(fx.add(&fy).unwrap().is_compatible());
    }

    #[test]
    fn direct_reduction_matches_composite(from in 0usize..3, gap in 0usize..3) {
        let t = QuotientTower::from_spec("a5xz:chain=1,2,4").unwrap();
        let to = from.saturating_sub(gap);
        let composite = t.projection(from, to).unwrap();
        prop_assert_eq!(t.direct_reduction(from, to).unwrap().unwrap(), composite.table().to_vec());
    }
}
