//! Sampling helpers and brute-force oracles shared by the acceptance checks.

use std::collections::BTreeSet;
use std::sync::Arc;

use burnside_core::burnside::{BurnsideElement, BurnsideRing};
use burnside_core::crossed::{CrossedElement, CrossedRing};
use burnside_core::group::builtin;
use burnside_core::linalg::Field;
use burnside_core::mackey::{MackeyFunctorInstance, Representation};
use rand::Rng;

pub fn burnside(spec: &str) -> Arc<BurnsideRing> {
    BurnsideRing::new(Arc::new(builtin(spec).expect("builtin group")), 200).expect("small lattice")
}

pub fn crossed(spec: &str) -> Arc<CrossedRing> {
    CrossedRing::new(burnside(spec))
}

/// First class whose representative has the given order.
pub fn class_of_order(ring: &BurnsideRing, order: usize) -> Option<usize> {
    let l = ring.lattice();
    (0..l.num_classes()).find(|&c| l.class_order(c) == order)
}

/// About half the classes, coefficients in `-3..=3`.
pub fn random_burnside<R: Rng>(ring: &Arc<BurnsideRing>, rng: &mut R) -> BurnsideElement {
    let mut terms = Vec::new();
    for c in 0..ring.rank() {
        if rng.gen_bool(0.5) {
            terms.push((c, rng.gen_range(-3..=3)));
        }
    }
    ring.from_integers(&terms)
}

/// About a third of the basis pairs, coefficients in `-2..=2`.
pub fn random_crossed<R: Rng>(ring: &Arc<CrossedRing>, rng: &mut R) -> CrossedElement {
    let mut terms = Vec::new();
    for i in 0..ring.rank() {
        if rng.gen_bool(0.3) {
            terms.push((i, rng.gen_range(-2..=2)));
        }
    }
    ring.from_integers(&terms)
}

/// Orbits of `{(H, a) : a ∈ C_G(H)}` under simultaneous conjugation, by
/// taking the least conjugate of every pair.
pub fn exhaustive_pair_orbits(ring: &CrossedRing) -> usize {
    let g = ring.group();
    let mut orbits = BTreeSet::new();
    for h in ring.burnside().lattice().subgroups() {
        for a in g.elements().filter(|&a| h.elements().iter().all(|&x| g.mul(a, x) == g.mul(x, a))) {
            let key = g.elements().map(|t| (g.conjugate(t, h).elements().to_vec(), g.conj(t, a))).min().unwrap();
            orbits.insert(key);
        }
    }
    orbits.len()
}

/// Burnside, fixed-point and fixed-quotient functors, the latter two on
/// the rational regular representation.
pub fn regular_functors(ring: &Arc<BurnsideRing>) -> Vec<MackeyFunctorInstance> {
    let g = ring.group().clone();
    vec![
        MackeyFunctorInstance::burnside(ring.clone()),
        MackeyFunctorInstance::fixed_point(Representation::regular(g.clone(), Field::Rational)),
        MackeyFunctorInstance::fixed_quotient(Representation::regular(g, Field::Rational)),
    ]
}
