use std::collections::BTreeSet;
use std::sync::Arc;

use burnside_core::group::{builtin, FiniteGroup, HallGroup, SubgroupLattice};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Closure of a generating set under multiplication, written independently
/// of the library's own `generate`.
fn closure(g: &FiniteGroup, gens: &[usize]) -> BTreeSet<usize> {
    let mut set: BTreeSet<usize> = BTreeSet::from([g.identity()]);
    let mut frontier: Vec<usize> = vec![g.identity()];
    while let Some(x) = frontier.pop() {
        for &s in gens {
            let y = g.mul(x, s);
            if set.insert(y) {
                frontier.push(y);
            }
        }
    }
    set
}

fn is_closed(g: &FiniteGroup, s: &BTreeSet<usize>) -> bool {
    s.iter().all(|&a| s.iter().all(|&b| s.contains(&g.mul(a, b))))
}

fn lattice(spec: &str) -> SubgroupLattice {
    SubgroupLattice::new(Arc::new(builtin(spec).unwrap()), 200).unwrap()
}

fn as_sets(l: &SubgroupLattice) -> BTreeSet<BTreeSet<usize>> {
    l.subgroups().iter().map(|s| s.elements().iter().copied().collect()).collect()
}

#[test]
fn lattice_matches_exhaustive_subsets() {
    for spec in ["cyclic:6", "sym:3", "dihedral:4", "quaternion:8", "alt:4", "dihedral:6", "product:cyclic:2×cyclic:4"] {
        let l = lattice(spec);
        let g = l.group();
        let n = g.order();
        let e = g.identity();
        let others: Vec<usize> = g.elements().filter(|&x| x != e).collect();
        let mut found = BTreeSet::new();
        for mask in 0u32..(1 << others.len()) {
            let mut s = BTreeSet::from([e]);
            s.extend(others.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &x)| x));
            if n % s.len() == 0 && is_closed(g, &s) {
                found.insert(s);
            }
        }
        assert_eq!(as_sets(&l), found, "{spec}");
    }
}

#[test]
fn lattice_matches_two_generator_closure() {
    // Every subgroup of these groups is generated by at most two elements.
    for spec in ["sym:4", "alt:5", "product:sym:3×cyclic:4"] {
        let l = lattice(spec);
        let g = l.group();
        let mut found = BTreeSet::new();
        for a in g.elements() {
            for b in a..g.order() {
                found.insert(closure(g, &[a, b]));
            }
        }
        assert_eq!(as_sets(&l), found, "{spec}");
    }
}

#[test]
fn known_subgroup_and_class_counts() {
    for (spec, subgroups, classes) in [
        ("cyclic:6", 4, 4),
        ("sym:3", 6, 4),
        ("dihedral:4", 10, 8),
        ("quaternion:8", 6, 6),
        ("alt:4", 10, 5),
        ("sym:4", 30, 11),
        ("alt:5", 59, 9),
        ("sym:5", 156, 19),
    ] {
        let l = lattice(spec);
        assert_eq!((l.len(), l.num_classes()), (subgroups, classes), "{spec}");
    }
}

#[test]
fn classes_are_conjugacy_classes() {
    let l = lattice("sym:4");
    let g = l.group();
    for (i, s) in l.subgroups().iter().enumerate() {
        let c = l.class_of(i);
        let t = l.transporter(i);
        assert_eq!(g.conjugate(t, s), *l.class_rep(c));
        for x in g.elements() {
            assert_eq!(l.class_of(l.index_of(&g.conjugate(x, s))), c);
        }
    }
    for c in 0..l.num_classes() {
        let rep = l.class_rep(c);
        let members = (0..l.len()).filter(|&i| l.class_of(i) == c).count();
        assert_eq!(members, g.order() / g.normalizer(rep).order());
    }
}

#[test]
fn double_cosets_partition_the_group() {
    let l = lattice("sym:4");
    let g = l.group();
    for h in 0..l.num_classes() {
        for k in 0..l.num_classes() {
            let (hs, ks) = (l.class_rep(h), l.class_rep(k));
            let reps = g.double_cosets(hs, ks);
            let mut seen = vec![false; g.order()];
            for &r in &reps {
                let mut size = 0;
                for &x in hs.elements() {
                    for &y in ks.elements() {
                        let z = g.mul(g.mul(x, r), y);
                        if !seen[z] {
                            seen[z] = true;
                            size += 1;
                        }
                    }
                }
                assert_eq!(size, g.double_coset_size(hs, r, ks));
                // |HgK| = |H||K| / |H ∩ gKg⁻¹|
                let meet = g.intersection(hs, &g.conjugate(r, ks));
                assert_eq!(size, hs.order() * ks.order() / meet.order());
            }
            assert!(seen.iter().all(|&b| b), "classes {h}, {k}");
        }
    }
}

#[test]
fn mobius_inverts_zeta_on_intervals() {
    let l = lattice("sym:4");
    for h in 0..l.len() {
        let col = l.mobius_column(h);
        for k in l.below(h) {
            let sum: i64 = col.iter().filter(|&&(m, _)| l.is_subgroup_of(k, m)).map(|&(_, v)| v).sum();
            assert_eq!(sum, i64::from(k == h), "interval [{k}, {h}]");
        }
    }
}

#[test]
fn mobius_of_whole_group() {
    for (spec, mu) in [("sym:3", 3), ("alt:4", 4), ("sym:4", -12), ("alt:5", -60)] {
        let l = lattice(spec);
        let g = l.group();
        assert_eq!(l.mobius(&g.trivial_subgroup(), &g.whole()).unwrap(), mu, "{spec}");
    }
}

#[test]
fn perfect_cores_and_solubility() {
    for spec in ["cyclic:6", "sym:3", "dihedral:4", "quaternion:8", "alt:4", "sym:4"] {
        let g = builtin(spec).unwrap();
        assert!(g.is_soluble(), "{spec}");
        assert_eq!(g.perfect_core().order(), 1);
    }
    let a5 = builtin("alt:5").unwrap();
    assert!(a5.is_perfect(&a5.whole()));
    let s5 = builtin("sym:5").unwrap();
    assert_eq!(s5.perfect_core().order(), 60);
    assert_eq!(s5.derived_series().iter().map(|s| s.order()).collect::<Vec<_>>(), vec![120, 60]);
}

#[test]
fn o_p_residuals() {
    let s4 = builtin("sym:4").unwrap();
    assert_eq!(s4.o_p(2).unwrap().order(), 12);
    assert_eq!(s4.o_p(3).unwrap().order(), 24);
    let a4 = builtin("alt:4").unwrap();
    assert_eq!(a4.o_p(2).unwrap().order(), 12);
    assert_eq!(a4.o_p(3).unwrap().order(), 4);
    assert!(s4.o_p(4).is_err());
}

#[test]
fn hall_relations() {
    let h = HallGroup::new(3, 2).unwrap();
    let idx: Vec<isize> = h.generator_indices().collect();
    for &i in &idx {
        for &j in &idx {
            let c = h.commutator(&h.generator(i), &h.generator(j));
            if j == i + 1 {
                let z = h.central(j);
                let expected = if i.rem_euclid(2) == 1 { z } else { h.inv(&z) };
                assert_eq!(c, expected, "[g{i}, g{j}]");
            } else if i == j + 1 {
                continue;
            } else {
                assert_eq!(c, h.identity(), "[g{i}, g{j}]");
            }
        }
    }
    for j in h.central_indices() {
        assert!(h.is_central(&h.central(j)));
    }
}

#[test]
fn hall_random_invariants() {
    let h = HallGroup::new(3, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..1000 {
        let (x, y, z) = (h.random_element(&mut rng), h.random_element(&mut rng), h.random_element(&mut rng));
        assert_eq!(h.pow(&x, 3), h.identity());
        let c = h.commutator(&x, &y);
        assert!(h.is_central(&c));
        assert_eq!(h.commutator(&c, &z), h.identity());
        assert_eq!(h.mul(&h.mul(&x, &y), &z), h.mul(&x, &h.mul(&y, &z)));
        assert_eq!(h.mul(&x, &h.inv(&x)), h.identity());
    }
}

#[test]
fn hall_orbit_stabilizer_with_true_centralizer() {
    let h = HallGroup::new(3, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let w = h.random_interior_element(&mut rng);
        let orbit = h.conjugacy_class(&w).len() as u128;
        assert_eq!(orbit * 3u128.pow(h.centralizer_log_order(&w) as u32), h.order());
    }
}
