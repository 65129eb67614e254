//! The crossed Burnside ring `Bᶜ(G)`: Grothendieck ring of G-sets over
//! the conjugation G-set `Gᶜ`.
//!
//! A transitive crossed G-set is `G/H` with marker `gH ↦ g a g⁻¹` for some
//! `a ∈ C_G(H)`; two pairs give isomorphic objects iff they are
//! simultaneously conjugate. The canonical pair puts `H` at its class's
//! canonical representative and then takes the smallest valid marker.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::burnside::{BurnsideElement, BurnsideRing};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Subgroup, Surjection};
use crate::linalg;

/// A canonical pair `(H, a)` with `H` a class representative and `a ∈ C_G(H)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CrossedBasisElement {
    pub class: usize,
    pub marker: usize,
}

#[derive(Debug)]
pub struct CrossedRing {
    burnside: Arc<BurnsideRing>,
    basis: Vec<CrossedBasisElement>,
    index: HashMap<CrossedBasisElement, usize>,
    normalizers: Vec<Subgroup>,
}

impl CrossedRing {
    pub fn new(burnside: Arc<BurnsideRing>) -> Arc<Self> {
        let g = burnside.group().clone();
        let l = burnside.lattice();
        let mut basis = Vec::new();
        let mut normalizers = Vec::new();
        for c in 0..l.num_classes() {
            let h = l.class_rep(c);
            let norm = g.normalizer(h);
            let cent = g.centralizer(h.elements());
            let mut seen = vec![false; g.order()];
            for &a in cent.elements() {
                if seen[a] {
                    continue;
                }
                // a is the smallest member of its N_G(H)-orbit.
                for &n in norm.elements() {
                    seen[g.conj(n, a)] = true;
                }
                basis.push(CrossedBasisElement { class: c, marker: a });
            }
            normalizers.push(norm);
        }
        let index = basis.iter().enumerate().map(|(i, &b)| (b, i)).collect();
        Arc::new(CrossedRing { burnside, basis, index, normalizers })
    }

    pub fn from_group(group: Arc<FiniteGroup>, cap: usize) -> Result<Arc<Self>> {
        Ok(Self::new(BurnsideRing::new(group, cap)?))
    }

    pub fn burnside(&self) -> &Arc<BurnsideRing> {
        &self.burnside
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.burnside.group()
    }

    pub fn basis(&self) -> &[CrossedBasisElement] {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_index(&self, b: &CrossedBasisElement) -> Option<usize> {
        self.index.get(b).copied()
    }

    /// Canonical basis pair for an arbitrary subgroup and marker.
    pub fn canonical_pair(&self, h: &Subgroup, a: usize) -> Result<CrossedBasisElement> {
        Ok(self.canonical_pair_with_conjugator(h, a)?.0)
    }

    /// Canonical pair together with a `t` such that `tHt⁻¹` is the class
    /// representative and `tat⁻¹` is the canonical marker.
    pub fn canonical_pair_with_conjugator(&self, h: &Subgroup, a: usize) -> Result<(CrossedBasisElement, usize)> {
        let g = self.group();
        if !h.elements().iter().all(|&x| g.mul(a, x) == g.mul(x, a)) {
            return Err(Error::InvalidAction(format!("marker {a} does not centralize {}", h.id())));
        }
        let l = self.burnside.lattice();
        let si = l.find(h.elements()).ok_or_else(|| Error::NotSubgroup(h.id()))?;
        let class = l.class_of(si);
        let t = l.transporter(si);
        let moved = g.conj(t, a);
        let (marker, n) = self.normalizers[class].elements().iter().map(|&n| (g.conj(n, moved), n)).min().unwrap();
        Ok((CrossedBasisElement { class, marker }, g.mul(n, t)))
    }

    pub fn zero(self: &Arc<Self>) -> CrossedElement {
        CrossedElement { ring: self.clone(), coeffs: BTreeMap::new() }
    }

    /// `(G/G, 1)`.
    pub fn one(self: &Arc<Self>) -> CrossedElement {
        let top = self.burnside.rank() - 1;
        self.pair_element(CrossedBasisElement { class: top, marker: self.group().identity() })
    }

    pub fn basis_element(self: &Arc<Self>, i: usize) -> CrossedElement {
        self.element([(i, BigRational::one())])
    }

    pub fn pair_element(self: &Arc<Self>, b: CrossedBasisElement) -> CrossedElement {
        self.basis_element(self.index[&b])
    }

    pub fn element(self: &Arc<Self>, coeffs: impl IntoIterator<Item = (usize, BigRational)>) -> CrossedElement {
        let mut map = BTreeMap::new();
        for (i, v) in coeffs {
            assert!(i < self.rank(), "crossed basis index {i} out of range");
            *map.entry(i).or_insert_with(BigRational::zero) += v;
        }
        map.retain(|_, v: &mut BigRational| !v.is_zero());
        CrossedElement { ring: self.clone(), coeffs: map }
    }

    pub fn from_integers(self: &Arc<Self>, coeffs: &[(usize, i64)]) -> CrossedElement {
        self.element(coeffs.iter().map(|&(i, v)| (i, BigRational::from_integer(BigInt::from(v)))))
    }

    fn same_ring(a: &Arc<Self>, b: &Arc<Self>) -> bool {
        Arc::ptr_eq(a, b) || a.group() == b.group()
    }

    /// Product of two transitive crossed G-sets given by actual pairs and
    /// an explicit choice of double coset representatives:
    /// `Σ_{g} (H ∩ gKg⁻¹, a · g b g⁻¹)`, each summand canonicalized.
    pub fn product_of_pairs(
        &self,
        h: &Subgroup,
        a: usize,
        k: &Subgroup,
        b: usize,
        double_coset_reps: &[usize],
    ) -> Result<Vec<CrossedBasisElement>> {
        let g = self.group();
        double_coset_reps
            .iter()
            .map(|&u| {
                let inter = g.intersection(h, &g.conjugate(u, k));
                self.canonical_pair(&inter, g.mul(a, g.conj(u, b)))
            })
            .collect()
    }

    fn basis_product(&self, i: usize, j: usize) -> Vec<usize> {
        let (x, y) = (self.basis[i], self.basis[j]);
        let l = self.burnside.lattice();
        let (h, k) = (l.class_rep(x.class), l.class_rep(y.class));
        let reps = self.group().double_cosets(h, k);
        self.product_of_pairs(h, x.marker, k, y.marker, &reps)
            .expect("product of valid pairs")
            .into_iter()
            .map(|p| self.index[&p])
            .collect()
    }

    pub fn multiply(self: &Arc<Self>, x: &CrossedElement, y: &CrossedElement) -> Result<CrossedElement> {
        if !Self::same_ring(&x.ring, self) || !Self::same_ring(&y.ring, self) {
            return Err(Error::GroupMismatch);
        }
        let mut terms = Vec::new();
        for (&i, ci) in &x.coeffs {
            for (&j, cj) in &y.coeffs {
                let prod = ci * cj;
                for t in self.basis_product(i, j) {
                    terms.push((t, prod.clone()));
                }
            }
        }
        Ok(self.element(terms))
    }

    /// `[G/H] ↦ (G/H, 1)`.
    pub fn embed_burnside(self: &Arc<Self>, x: &BurnsideElement) -> Result<CrossedElement> {
        if x.ring().group() != self.group() {
            return Err(Error::GroupMismatch);
        }
        let e = self.group().identity();
        Ok(self.element(x.coeffs().iter().map(|(&c, v)| (self.index[&CrossedBasisElement { class: c, marker: e }], v.clone()))))
    }

    /// Number of morphisms `(G/H, g) → (G/K, b)`: cosets `sK` with
    /// `H ≤ sKs⁻¹` and `g = s b s⁻¹`.
    pub fn hom_count_pair(&self, h: &Subgroup, gm: usize, k: &Subgroup, b: usize) -> u64 {
        let g = self.group();
        let (reps, _) = g.left_cosets(k);
        reps.iter()
            .filter(|&&s| {
                let si = g.inv(s);
                g.conj(s, b) == gm && h.elements().iter().all(|&x| k.contains(g.conj(si, x)))
            })
            .count() as u64
    }

    /// Morphism count from the transitive `t` into a crossed G-set given as
    /// basis pairs with multiplicities.
    pub fn hom_count(&self, t: CrossedBasisElement, x: &[(CrossedBasisElement, u64)]) -> u64 {
        let l = self.burnside.lattice();
        let h = l.class_rep(t.class);
        x.iter()
            .map(|&(p, mult)| mult * self.hom_count_pair(h, t.marker, l.class_rep(p.class), p.marker))
            .sum()
    }

    /// `hom_count(t, x)` for every basis `t`; `x` must be effective.
    pub fn hom_profile(&self, x: &CrossedElement) -> Result<Vec<u64>> {
        let parts = x.effective_parts()?;
        Ok(self.basis.iter().map(|&t| self.hom_count(t, &parts)).collect())
    }

    /// Isomorphism of effective crossed G-sets decided by morphism counts.
    pub fn iso_by_homcount(&self, x: &CrossedElement, y: &CrossedElement) -> Result<bool> {
        Ok(self.hom_profile(x)? == self.hom_profile(y)?)
    }

    /// `z_U(x) = Σ λ Σ_{sH ∈ (G/H)^U} s a s⁻¹` for every subgroup class `U`.
    pub fn zeta(&self, x: &CrossedElement) -> Result<Zeta> {
        if !x.is_integral() {
            return Err(Error::NonIntegerCoefficients);
        }
        let g = self.group();
        let l = self.burnside.lattice();
        let mut components = vec![BTreeMap::new(); l.num_classes()];
        for (&i, lambda) in &x.coeffs {
            let lambda = lambda.to_integer();
            let b = self.basis[i];
            let h = l.class_rep(b.class);
            let (reps, _) = g.left_cosets(h);
            for (u, comp) in components.iter_mut().enumerate() {
                let us = l.class_rep(u);
                if h.order() % us.order() != 0 {
                    continue;
                }
                for &s in &reps {
                    let si = g.inv(s);
                    if us.elements().iter().all(|&y| h.contains(g.conj(si, y))) {
                        *comp.entry(g.conj(s, b.marker)).or_insert_with(BigInt::zero) += &lambda;
                    }
                }
            }
        }
        for comp in &mut components {
            comp.retain(|_, v: &mut BigInt| !v.is_zero());
        }
        Ok(Zeta { components })
    }

    /// Componentwise product in `∏_U ℤC_G(U)`.
    pub fn zeta_product(&self, a: &Zeta, b: &Zeta) -> Zeta {
        let g = self.group();
        let components = a
            .components
            .iter()
            .zip(&b.components)
            .map(|(x, y)| {
                let mut out: BTreeMap<usize, BigInt> = BTreeMap::new();
                for (&p, cp) in x {
                    for (&q, cq) in y {
                        *out.entry(g.mul(p, q)).or_insert_with(BigInt::zero) += cp * cq;
                    }
                }
                out.retain(|_, v| !v.is_zero());
                out
            })
            .collect();
        Zeta { components }
    }

    /// Whether each `z_U` is supported on `C_G(U)` and commutes with it.
    pub fn zeta_is_central(&self, z: &Zeta) -> bool {
        let g = self.group();
        let l = self.burnside.lattice();
        z.components.iter().enumerate().all(|(u, comp)| {
            let cent = g.centralizer(l.class_rep(u).elements());
            comp.keys().all(|&e| cent.contains(e))
                && cent.elements().iter().all(|&c| {
                    let conj: BTreeMap<usize, BigInt> = comp.iter().map(|(&e, v)| (g.conj(c, e), v.clone())).collect();
                    conj == *comp
                })
        })
    }

    /// Integer matrix of `ζ` on the crossed basis: one row per basis pair,
    /// one column per `(U, element)`.
    pub fn zeta_matrix(self: &Arc<Self>) -> Vec<Vec<BigInt>> {
        let n = self.group().order();
        let classes = self.burnside.rank();
        (0..self.rank())
            .map(|i| {
                let z = self.zeta(&self.basis_element(i)).expect("basis is integral");
                let mut row = vec![BigInt::zero(); classes * n];
                for (u, comp) in z.components.iter().enumerate() {
                    for (&e, v) in comp {
                        row[u * n + e] = v.clone();
                    }
                }
                row
            })
            .collect()
    }

    pub fn zeta_rank(self: &Arc<Self>) -> usize {
        linalg::integer_rank(&self.zeta_matrix())
    }

    /// Crossed `Fix` along `G → Q`: `(H, a) ↦ (π(H), π(a))` when the kernel
    /// lies in `H`, otherwise `0`.
    pub fn fix_along(&self, x: &CrossedElement, surj: &Surjection, target: &Arc<CrossedRing>) -> Result<CrossedElement> {
        if x.ring.group() != self.group()
            || surj.source().as_ref() != self.group().as_ref()
            || surj.target().as_ref() != target.group().as_ref()
        {
            return Err(Error::GroupMismatch);
        }
        let l = self.burnside.lattice();
        let kernel = surj.kernel();
        let mut terms = Vec::new();
        for (&i, v) in &x.coeffs {
            let b = self.basis[i];
            let h = l.class_rep(b.class);
            if kernel.is_subset_of(h) {
                let p = target.canonical_pair(&surj.image(h), surj.apply(b.marker))?;
                terms.push((target.index[&p], v.clone()));
            }
        }
        Ok(target.element(terms))
    }

    /// `×Fix_N`, materializing `G/N`.
    pub fn fix_n(&self, x: &CrossedElement, n: &Subgroup) -> Result<(Surjection, Arc<CrossedRing>, CrossedElement)> {
        let surj = Surjection::quotient(self.group().clone(), n)?;
        let target = CrossedRing::from_group(surj.target().clone(), usize::MAX)?;
        let y = self.fix_along(x, &surj, &target)?;
        Ok((surj, target, y))
    }
}

/// `(z_U)_U`, each a sparse integer combination of group elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Zeta {
    pub components: Vec<BTreeMap<usize, BigInt>>,
}

impl Zeta {
    pub fn add(&self, other: &Zeta) -> Zeta {
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(x, y)| {
                let mut out = x.clone();
                for (&e, v) in y {
                    *out.entry(e).or_insert_with(BigInt::zero) += v;
                }
                out.retain(|_, v| !v.is_zero());
                out
            })
            .collect();
        Zeta { components }
    }
}

/// Rational combination of canonical crossed basis pairs.
#[derive(Clone)]
pub struct CrossedElement {
    ring: Arc<CrossedRing>,
    coeffs: BTreeMap<usize, BigRational>,
}

impl fmt::Debug for CrossedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for CrossedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let l = self.ring.burnside.lattice();
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(&i, v)| {
                let b = self.ring.basis[i];
                format!("{v}({}, {})", l.class_id(b.class), b.marker)
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl PartialEq for CrossedElement {
    fn eq(&self, other: &Self) -> bool {
        CrossedRing::same_ring(&self.ring, &other.ring) && self.coeffs == other.coeffs
    }
}

impl Eq for CrossedElement {}

impl CrossedElement {
    pub fn ring(&self) -> &Arc<CrossedRing> {
        &self.ring
    }

    pub fn coeffs(&self) -> &BTreeMap<usize, BigRational> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.values().all(|v| v.is_integer())
    }

    /// Pairs with multiplicities, for elements with nonnegative integer
    /// coefficients.
    pub fn effective_parts(&self) -> Result<Vec<(CrossedBasisElement, u64)>> {
        self.coeffs
            .iter()
            .map(|(&i, v)| {
                if !v.is_integer() || v < &BigRational::zero() {
                    return Err(Error::NonIntegerCoefficients);
                }
                let m: u64 = v.to_integer().try_into().map_err(|_| Error::NonIntegerCoefficients)?;
                Ok((self.ring.basis[i], m))
            })
            .collect()
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if !CrossedRing::same_ring(&self.ring, &other.ring) {
            return Err(Error::GroupMismatch);
        }
        Ok(self.ring.element(self.coeffs.iter().chain(other.coeffs.iter()).map(|(&i, v)| (i, v.clone()))))
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        self.ring.element(self.coeffs.iter().map(|(&i, v)| (i, v * s)))
    }

    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.ring.multiply(self, other)
    }
}

impl Add for &CrossedElement {
    type Output = CrossedElement;
    fn add(self, rhs: Self) -> CrossedElement {
        self.checked_add(rhs).expect("crossed elements over different groups")
    }
}

impl Neg for &CrossedElement {
    type Output = CrossedElement;
    fn neg(self) -> CrossedElement {
        self.scale(&-BigRational::one())
    }
}

impl Sub for &CrossedElement {
    type Output = CrossedElement;
    fn sub(self, rhs: Self) -> CrossedElement {
        self + &(-rhs)
    }
}

impl Mul for &CrossedElement {
    type Output = CrossedElement;
    fn mul(self, rhs: Self) -> CrossedElement {
        self.multiply(rhs).expect("crossed elements over different groups")
    }
}
