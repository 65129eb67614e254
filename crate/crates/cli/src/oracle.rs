//! Slow recomputations used by `--oracle`. Each works from concrete
//! G-sets or brute-force enumeration rather than the formulas the fast
//! path uses.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::sync::Arc;

use burnside_core::burnside::{BurnsideElement, BurnsideRing, MarkVector};
use burnside_core::crossed::{CrossedBasisElement, CrossedElement, CrossedRing, Zeta};
use burnside_core::group::{HallElement, HallGroup};
use burnside_core::mackey::{CrossedGSetConcrete, GSet};
use burnside_core::tower::{CompatibleFamily, QuotientTower};
use burnside_core::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Largest Hall truncation enumerated element by element.
pub const HALL_ENUMERATION_CAP: u128 = 1_000_000;

/// `|(G/K)^H|`, counted on the concrete coset space.
pub fn marks_by_fixed_points(ring: &BurnsideRing) -> Result<Vec<Vec<u64>>> {
    let l = ring.lattice();
    let g = ring.group();
    (0..l.num_classes())
        .map(|k| {
            let x = GSet::from_subgroup(g.clone(), l.class_rep(k))?;
            Ok((0..l.num_classes()).map(|h| x.fixed_points(l.class_rep(h)).len() as u64).collect())
        })
        .collect()
}

/// Primitive idempotents of `ℚ ⊗ B(G)` as preimages of indicator vectors.
pub fn gluck_by_marks(ring: &Arc<BurnsideRing>) -> Vec<(usize, BurnsideElement)> {
    (0..ring.rank()).map(|c| (c, ring.from_marks(&MarkVector::indicator(ring.rank(), c)))).collect()
}

/// Primitive integral idempotents picked out of the full census, labelled
/// by the least perfect class on which their marks are 1.
pub fn integral_by_census(ring: &Arc<BurnsideRing>, class_cap: usize) -> Result<Vec<(usize, BurnsideElement)>> {
    let census = ring.idempotent_census_oracle(class_cap)?;
    let mut out = Vec::new();
    for e in census.iter().filter(|e| !e.is_zero()) {
        let mut primitive = true;
        for f in &census {
            let ef = e * f;
            if !ef.is_zero() && ef != *e {
                primitive = false;
                break;
            }
        }
        if !primitive {
            continue;
        }
        let marks = ring.marks(e);
        let label = ring
            .perfect_classes()
            .into_iter()
            .find(|&c| marks.values[c].is_one())
            .ok_or_else(|| Error::Invariant("primitive idempotent vanishes on every perfect class".into()))?;
        out.push((label, e.clone()));
    }
    out.sort_by_key(|(c, _)| *c);
    Ok(out)
}

/// Canonical pairs of every subgroup with every centralizing element.
pub fn crossed_basis_exhaustive(ring: &CrossedRing) -> Result<Vec<CrossedBasisElement>> {
    let g = ring.group();
    let mut seen = BTreeSet::new();
    for h in ring.burnside().lattice().subgroups() {
        for a in g.elements().filter(|&a| h.elements().iter().all(|&x| g.mul(a, x) == g.mul(x, a))) {
            seen.insert(ring.canonical_pair(h, a)?);
        }
    }
    let mut out: Vec<CrossedBasisElement> = seen.into_iter().collect();
    out.sort_by_key(|b| ring.basis_index(b));
    Ok(out)
}

/// Orbit decomposition of the concrete product of the basis sets.
pub fn crossed_product_concrete(ring: &Arc<CrossedRing>, x: &CrossedElement, y: &CrossedElement) -> Result<CrossedElement> {
    let mut acc: BTreeMap<usize, BigRational> = BTreeMap::new();
    for (&i, ci) in x.coeffs() {
        let xi = CrossedGSetConcrete::from_basis(ring, i);
        for (&j, cj) in y.coeffs() {
            let prod = xi.product(&CrossedGSetConcrete::from_basis(ring, j))?;
            for orbit in prod.set().orbits() {
                let p = orbit[0];
                let pair = ring.canonical_pair(&prod.set().stabilizer(p), prod.marker()[p])?;
                let k = ring.basis_index(&pair).expect("canonical pairs are basis pairs");
                *acc.entry(k).or_insert_with(BigRational::zero) += ci * cj;
            }
        }
    }
    Ok(ring.element(acc))
}

/// `z_U(x)` as the sum of markers over the `U`-fixed points of concrete
/// crossed G-sets.
pub fn zeta_concrete(ring: &CrossedRing, x: &CrossedElement) -> Result<Zeta> {
    if !x.is_integral() {
        return Err(Error::NonIntegerCoefficients);
    }
    let l = ring.burnside().lattice();
    let mut components = vec![BTreeMap::new(); l.num_classes()];
    for (&i, lambda) in x.coeffs() {
        let lambda = lambda.to_integer();
        let set = CrossedGSetConcrete::from_basis(ring, i);
        for (u, comp) in components.iter_mut().enumerate() {
            for p in set.set().fixed_points(l.class_rep(u)) {
                *comp.entry(set.marker()[p]).or_insert_with(BigInt::zero) += &lambda;
            }
        }
    }
    for comp in &mut components {
        comp.retain(|_, v: &mut BigInt| !v.is_zero());
    }
    Ok(Zeta { components })
}

/// Per level the Boolean algebra spanned by the integral idempotents,
/// and the top-level members pushed down the tower.
pub fn tower_census_boolean(tower: &Arc<QuotientTower>) -> Result<(Vec<usize>, Vec<CompatibleFamily>)> {
    let algebras: Vec<Vec<BurnsideElement>> = tower
        .levels()
        .iter()
        .map(|level| {
            let ring = level.burnside();
            let prims: Vec<BurnsideElement> = ring.integral_idempotents().into_iter().map(|(_, e)| e).collect();
            (0u64..1 << prims.len())
                .map(|mask| {
                    prims.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).fold(ring.zero(), |acc, (_, e)| &acc + e)
                })
                .collect()
        })
        .collect();
    let mut coherent = Vec::new();
    for e in algebras.last().expect("towers have a level") {
        let fam = tower.family_from_top(e)?;
        for (i, x) in fam.plain_levels().expect("plain family").iter().enumerate() {
            if !algebras[i].contains(x) {
                return Err(Error::Invariant(format!("pushed-down idempotent missing from level {i}")));
            }
        }
        coherent.push(fam);
    }
    Ok((algebras.iter().map(Vec::len).collect(), coherent))
}

/// Checks each tower map against the stored levels, from the top down:
/// plain members through marks at preimages, crossed members by pushing
/// every pair `(H, a)` with kernel inside `H` to `(π(H), π(a))`.
pub fn first_incompatible_level(family: &CompatibleFamily) -> Result<Option<usize>> {
    let tower = family.tower();
    for i in (0..tower.top()).rev() {
        let pi = tower.map(i);
        let agrees = match (family.plain_levels(), family.crossed_levels()) {
            (Some(xs), _) => {
                let (lo, hi) = (tower.level(i).burnside(), tower.level(i + 1).burnside());
                let (lo_marks, hi_marks) = (lo.marks(&xs[i]), hi.marks(&xs[i + 1]));
                (0..lo.rank()).all(|c| {
                    let pre = hi.class_of_subgroup(&pi.preimage(lo.lattice().class_rep(c)));
                    lo_marks.values[c] == hi_marks.values[pre]
                })
            }
            (_, Some(xs)) => {
                let (lo, hi) = (tower.level(i).crossed(), tower.level(i + 1).crossed());
                let mut pushed: BTreeMap<usize, BigRational> = BTreeMap::new();
                for (&k, v) in xs[i + 1].coeffs() {
                    let b = hi.basis()[k];
                    let h = hi.burnside().lattice().class_rep(b.class);
                    if pi.kernel().is_subset_of(h) {
                        let pair = lo.canonical_pair(&pi.image(h), pi.apply(b.marker))?;
                        let idx = lo.basis_index(&pair).expect("canonical pairs are basis pairs");
                        *pushed.entry(idx).or_insert_with(BigRational::zero) += v;
                    }
                }
                lo.element(pushed) == xs[i]
            }
            _ => unreachable!("a family is plain or crossed"),
        };
        if !agrees {
            return Ok(Some(i));
        }
    }
    Ok(None)
}

/// Every element of a Hall truncation, refusing large ones.
pub fn hall_elements(h: &HallGroup) -> Result<Vec<HallElement>> {
    if h.order() > HALL_ENUMERATION_CAP {
        return Err(Error::CapExceeded { size: usize::try_from(h.order()).unwrap_or(usize::MAX), cap: HALL_ENUMERATION_CAP as usize });
    }
    let id = h.identity();
    let (na, nb) = (id.a.len(), id.b.len());
    let p = h.p();
    let mut out = Vec::with_capacity(h.order() as usize);
    for mut k in 0..h.order() as u64 {
        let mut digits = Vec::with_capacity(na + nb);
        for _ in 0..na + nb {
            digits.push((k % p as u64) as u32);
            k /= p as u64;
        }
        let b = digits.split_off(na);
        out.push(HallElement { a: digits, b });
    }
    Ok(out)
}

/// Orbit size and `log_p |C_G(w)|` by conjugating with every element.
pub fn hall_orbit_and_centralizer(h: &HallGroup, all: &[HallElement], w: &HallElement) -> Result<(usize, usize)> {
    let mut orbit = HashSet::new();
    let mut centralizer = 0u64;
    for x in all {
        let y = h.conj(x, w);
        if y == *w {
            centralizer += 1;
        }
        orbit.insert(y);
    }
    let p = h.p() as u64;
    let mut log = 0;
    let mut c = centralizer;
    while c > 1 && c % p == 0 {
        c /= p;
        log += 1;
    }
    if c != 1 {
        return Err(Error::Invariant(format!("centralizer order {centralizer} is not a power of {p}")));
    }
    Ok((orbit.len(), log))
}
