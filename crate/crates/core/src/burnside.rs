//! The Burnside ring of a finite group.
//!
//! Elements are exact rational combinations of transitive G-sets `[G/H]`,
//! indexed by subgroup conjugacy classes in lattice order (subgroup order
//! ascending, then canonical representative). Multiplication has two
//! independent routes: pointwise product of mark vectors, and the
//! double-coset formula `[G/H]·[G/K] = Σ_{u ∈ H\G/K} [G/(H ∩ uKu⁻¹)]`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Subgroup, SubgroupLattice, Surjection};

/// Cap on subgroup classes for the brute-force idempotent census.
pub const DEFAULT_CENSUS_CLASS_CAP: usize = 64;

/// Which multiplication route to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum MulPath {
    #[default]
    Marks,
    DoubleCoset,
}

/// `|(G/K)^H|` for every pair of subgroup classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableOfMarks {
    // marks[h][k] = |(G/K)^H|
    marks: Vec<Vec<u64>>,
}

impl TableOfMarks {
    /// Direct coset scan: counts cosets `gK` with `H ≤ gKg⁻¹`.
    pub fn compute(lattice: &SubgroupLattice) -> Self {
        let g = lattice.group();
        let n = lattice.num_classes();
        let mut marks = vec![vec![0u64; n]; n];
        for k in 0..n {
            let ks = lattice.class_rep(k);
            let (reps, _) = g.left_cosets(ks);
            for h in 0..n {
                let hs = lattice.class_rep(h);
                if ks.order() % hs.order() != 0 {
                    continue;
                }
                marks[h][k] = reps
                    .iter()
                    .filter(|&&r| {
                        let ri = g.inv(r);
                        hs.elements().iter().all(|&x| ks.contains(g.conj(ri, x)))
                    })
                    .count() as u64;
            }
        }
        TableOfMarks { marks }
    }

    pub fn size(&self) -> usize {
        self.marks.len()
    }

    /// `|(G/K)^H|` for class indices `h`, `k`.
    pub fn mark(&self, h: usize, k: usize) -> u64 {
        self.marks[h][k]
    }

    /// Rows indexed by the transitive G-set `G/K`, columns by `H`; lower
    /// triangular with the diagonal `|N_G(K) : K|`.
    pub fn rows(&self) -> Vec<Vec<u64>> {
        let n = self.size();
        (0..n).map(|k| (0..n).map(|h| self.marks[h][k]).collect()).collect()
    }

    pub fn is_lower_triangular(&self) -> bool {
        let n = self.size();
        (0..n).all(|k| (k + 1..n).all(|h| self.marks[h][k] == 0)) && (0..n).all(|k| self.marks[k][k] > 0)
    }
}

/// The Burnside ring `B(G)` with its lattice and table of marks.
#[derive(Debug)]
pub struct BurnsideRing {
    lattice: SubgroupLattice,
    table: TableOfMarks,
    perfect_core_class: Vec<usize>,
}

impl BurnsideRing {
    pub fn new(group: Arc<FiniteGroup>, cap: usize) -> Result<Arc<Self>> {
        let lattice = SubgroupLattice::new(group, cap)?;
        Ok(Self::from_lattice(lattice))
    }

    pub fn from_lattice(lattice: SubgroupLattice) -> Arc<Self> {
        let table = TableOfMarks::compute(&lattice);
        let g = lattice.group().clone();
        let perfect_core_class =
            (0..lattice.num_classes()).map(|c| lattice.classify(&g.perfect_core_of(lattice.class_rep(c)))).collect();
        Arc::new(BurnsideRing { lattice, table, perfect_core_class })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.lattice.group()
    }

    pub fn lattice(&self) -> &SubgroupLattice {
        &self.lattice
    }

    pub fn table_of_marks(&self) -> &TableOfMarks {
        &self.table
    }

    pub fn rank(&self) -> usize {
        self.lattice.num_classes()
    }

    fn same_ring(a: &Arc<Self>, b: &Arc<Self>) -> bool {
        Arc::ptr_eq(a, b) || a.group() == b.group()
    }

    pub fn zero(self: &Arc<Self>) -> BurnsideElement {
        BurnsideElement { ring: self.clone(), coeffs: BTreeMap::new() }
    }

    /// `[G/G]`.
    pub fn one(self: &Arc<Self>) -> BurnsideElement {
        self.basis(self.rank() - 1)
    }

    /// `[G/H]` for class `c`.
    pub fn basis(self: &Arc<Self>, c: usize) -> BurnsideElement {
        self.element([(c, BigRational::one())])
    }

    pub fn element(self: &Arc<Self>, coeffs: impl IntoIterator<Item = (usize, BigRational)>) -> BurnsideElement {
        let mut map = BTreeMap::new();
        for (c, v) in coeffs {
            assert!(c < self.rank(), "class index {c} out of range");
            let e = map.entry(c).or_insert_with(BigRational::zero);
            *e += v;
        }
        map.retain(|_, v: &mut BigRational| !v.is_zero());
        BurnsideElement { ring: self.clone(), coeffs: map }
    }

    pub fn from_integers(self: &Arc<Self>, coeffs: &[(usize, i64)]) -> BurnsideElement {
        self.element(coeffs.iter().map(|&(c, v)| (c, BigRational::from_integer(BigInt::from(v)))))
    }

    /// Class of `H ∩ uKu⁻¹` for every `u ∈ [H\G/K]`.
    fn double_coset_terms(&self, h: usize, k: usize) -> Vec<usize> {
        let g = self.group();
        let (hs, ks) = (self.lattice.class_rep(h), self.lattice.class_rep(k));
        g.double_cosets(hs, ks)
            .into_iter()
            .map(|u| self.lattice.classify(&g.intersection(hs, &g.conjugate(u, ks))))
            .collect()
    }

    pub fn marks(&self, x: &BurnsideElement) -> MarkVector {
        let n = self.rank();
        let values = (0..n)
            .map(|h| {
                x.coeffs.iter().fold(BigRational::zero(), |acc, (&k, c)| {
                    acc + c * BigRational::from_integer(BigInt::from(self.table.mark(h, k)))
                })
            })
            .collect();
        MarkVector { values }
    }

    /// Inverts the triangular table of marks.
    pub fn from_marks(self: &Arc<Self>, v: &MarkVector) -> BurnsideElement {
        let n = self.rank();
        assert_eq!(v.values.len(), n, "mark vector has wrong dimension");
        let mut c = vec![BigRational::zero(); n];
        for h in (0..n).rev() {
            let mut acc = v.values[h].clone();
            for (k, ck) in c.iter().enumerate().skip(h + 1) {
                let m = self.table.mark(h, k);
                if m != 0 && !ck.is_zero() {
                    acc -= ck * BigRational::from_integer(BigInt::from(m));
                }
            }
            c[h] = acc / BigRational::from_integer(BigInt::from(self.table.mark(h, h)));
        }
        self.element(c.into_iter().enumerate())
    }

    pub fn multiply_with(self: &Arc<Self>, x: &BurnsideElement, y: &BurnsideElement, path: MulPath) -> Result<BurnsideElement> {
        if !Self::same_ring(&x.ring, self) || !Self::same_ring(&y.ring, self) {
            return Err(Error::GroupMismatch);
        }
        Ok(match path {
            MulPath::Marks => {
                let (mx, my) = (self.marks(x), self.marks(y));
                let values = mx.values.iter().zip(&my.values).map(|(a, b)| a * b).collect();
                self.from_marks(&MarkVector { values })
            }
            MulPath::DoubleCoset => {
                let mut terms: Vec<(usize, BigRational)> = Vec::new();
                for (&h, ch) in &x.coeffs {
                    for (&k, ck) in &y.coeffs {
                        let prod = ch * ck;
                        for c in self.double_coset_terms(h, k) {
                            terms.push((c, prod.clone()));
                        }
                    }
                }
                self.element(terms)
            }
        })
    }

    /// `e_H = Σ_{K ≤ H} μ(K,H) / |N_G(H):K| · [G/K]`, summed over every
    /// subgroup `K` of the canonical representative `H` of class `c`.
    pub fn gluck_idempotent(self: &Arc<Self>, c: usize) -> BurnsideElement {
        let l = &self.lattice;
        let class = &l.classes()[c];
        let norm = class.normalizer_order as i64;
        let terms = l.mobius_column(class.rep).into_iter().filter(|&(_, mu)| mu != 0).map(|(k, mu)| {
            let korder = l.subgroup(k).order() as i64;
            (l.class_of(k), BigRational::new(BigInt::from(mu * korder), BigInt::from(norm)))
        });
        self.element(terms)
    }

    pub fn gluck_idempotents(self: &Arc<Self>) -> Vec<BurnsideElement> {
        (0..self.rank()).map(|c| self.gluck_idempotent(c)).collect()
    }

    /// Class of the perfect core `K^{(∞)}` of class `c`'s representative.
    pub fn perfect_core_class(&self, c: usize) -> usize {
        self.perfect_core_class[c]
    }

    /// Classes of perfect subgroups together with the trivial class.
    pub fn perfect_classes(&self) -> Vec<usize> {
        (0..self.rank()).filter(|&c| self.perfect_core_class[c] == c).collect()
    }

    /// `f_H = Σ e_K` over classes `K` whose perfect core is conjugate to
    /// `H`, for `H` trivial or perfect. Returned as `(class of H, f_H)`.
    pub fn integral_idempotents(self: &Arc<Self>) -> Vec<(usize, BurnsideElement)> {
        self.perfect_classes()
            .into_iter()
            .map(|h| {
                let values = (0..self.rank())
                    .map(|k| if self.perfect_core_class[k] == h { BigRational::one() } else { BigRational::zero() })
                    .collect();
                (h, self.from_marks(&MarkVector { values }))
            })
            .collect()
    }

    /// Same idempotents, assembled by summing Gluck idempotents instead of
    /// inverting marks.
    pub fn integral_idempotents_by_gluck_sum(self: &Arc<Self>) -> Vec<(usize, BurnsideElement)> {
        self.perfect_classes()
            .into_iter()
            .map(|h| {
                let f = (0..self.rank())
                    .filter(|&k| self.perfect_core_class[k] == h)
                    .fold(self.zero(), |acc, k| &acc + &self.gluck_idempotent(k));
                (h, f)
            })
            .collect()
    }

    /// Every idempotent of `B(G)`, by scanning all 0/1 mark patterns.
    ///
    /// Classes are decided from the largest subgroup down; the coefficient
    /// of `[G/H]` depends only on marks at classes at or above `H`, so a
    /// pattern prefix yielding a non-integral coefficient is abandoned
    /// without losing any integral pattern.
    pub fn idempotent_census_oracle(self: &Arc<Self>, class_cap: usize) -> Result<Vec<BurnsideElement>> {
        let n = self.rank();
        if n > class_cap {
            return Err(Error::CapExceeded { size: n, cap: class_cap });
        }
        let mut found: Vec<Vec<bool>> = Vec::new();
        let mut pattern = vec![false; n];
        let mut coeffs = vec![BigInt::zero(); n];
        self.census_step(n, &mut pattern, &mut coeffs, &mut found);
        found.sort();
        Ok(found
            .into_iter()
            .map(|p| {
                let values = p.iter().map(|&b| if b { BigRational::one() } else { BigRational::zero() }).collect();
                self.from_marks(&MarkVector { values })
            })
            .collect())
    }

    fn census_step(&self, level: usize, pattern: &mut Vec<bool>, coeffs: &mut Vec<BigInt>, found: &mut Vec<Vec<bool>>) {
        if level == 0 {
            found.push(pattern.clone());
            return;
        }
        let h = level - 1;
        let mut rest = BigInt::zero();
        for (k, ck) in coeffs.iter().enumerate().skip(h + 1) {
            let m = self.table.mark(h, k);
            if m != 0 && !ck.is_zero() {
                rest += ck * BigInt::from(m);
            }
        }
        let diag = BigInt::from(self.table.mark(h, h));
        for bit in [false, true] {
            let num = if bit { BigInt::one() } else { BigInt::zero() } - &rest;
            if !(&num % &diag).is_zero() {
                continue;
            }
            pattern[h] = bit;
            coeffs[h] = num / &diag;
            self.census_step(h, pattern, coeffs, found);
        }
        coeffs[h] = BigInt::zero();
    }

    /// `Fix` along a surjection `G → Q`: `[G/V] ↦ [Q/π(V)]` when the kernel
    /// lies in `V`, otherwise `0`.
    pub fn fix_along(&self, x: &BurnsideElement, surj: &Surjection, target: &Arc<BurnsideRing>) -> Result<BurnsideElement> {
        if x.ring.group() != self.group() || surj.source().as_ref() != self.group().as_ref() || surj.target().as_ref() != target.group().as_ref() {
            return Err(Error::GroupMismatch);
        }
        let kernel = surj.kernel();
        let terms: Vec<(usize, BigRational)> = x
            .coeffs
            .iter()
            .filter_map(|(&c, v)| {
                let rep = self.lattice.class_rep(c);
                kernel.is_subset_of(rep).then(|| (target.lattice.classify(&surj.image(rep)), v.clone()))
            })
            .collect();
        Ok(target.element(terms))
    }

    /// Inflation along `G → Q`: `[Q/W] ↦ [G/π⁻¹(W)]`.
    pub fn inflate_along(self: &Arc<Self>, x: &BurnsideElement, surj: &Surjection) -> Result<BurnsideElement> {
        if surj.source().as_ref() != self.group().as_ref() || surj.target().as_ref() != x.ring.group().as_ref() {
            return Err(Error::GroupMismatch);
        }
        let src = &x.ring;
        let terms: Vec<(usize, BigRational)> = x
            .coeffs
            .iter()
            .map(|(&c, v)| (self.lattice.classify(&surj.preimage(src.lattice.class_rep(c))), v.clone()))
            .collect();
        Ok(self.element(terms))
    }

    /// `Fix_N` for a normal subgroup `N`, materializing `G/N`.
    pub fn fix_n(&self, x: &BurnsideElement, n: &Subgroup) -> Result<(Quotient, BurnsideElement)> {
        let surj = Surjection::quotient(self.group().clone(), n)?;
        let ring = BurnsideRing::new(surj.target().clone(), usize::MAX)?;
        let y = self.fix_along(x, &surj, &ring)?;
        Ok((Quotient { surjection: surj, ring }, y))
    }

    /// Class containing `H ≤ G`.
    pub fn class_of_subgroup(&self, s: &Subgroup) -> usize {
        self.lattice.classify(s)
    }
}

/// A materialized quotient `G/N` and its Burnside ring.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub surjection: Surjection,
    pub ring: Arc<BurnsideRing>,
}

impl Quotient {
    pub fn inflate(&self, source: &Arc<BurnsideRing>, x: &BurnsideElement) -> Result<BurnsideElement> {
        source.inflate_along(x, &self.surjection)
    }
}

/// Marks `|X^H|` indexed by subgroup class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkVector {
    pub values: Vec<BigRational>,
}

impl MarkVector {
    pub fn indicator(dim: usize, c: usize) -> Self {
        MarkVector {
            values: (0..dim).map(|i| if i == c { BigRational::one() } else { BigRational::zero() }).collect(),
        }
    }
}

/// A rational combination of transitive G-sets; zero coefficients are
/// never stored.
#[derive(Clone)]
pub struct BurnsideElement {
    ring: Arc<BurnsideRing>,
    coeffs: BTreeMap<usize, BigRational>,
}

impl fmt::Debug for BurnsideElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for BurnsideElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> =
            self.coeffs.iter().map(|(&c, v)| format!("{v}[G/{}]", self.ring.lattice.class_id(c))).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl PartialEq for BurnsideElement {
    fn eq(&self, other: &Self) -> bool {
        BurnsideRing::same_ring(&self.ring, &other.ring) && self.coeffs == other.coeffs
    }
}

impl Eq for BurnsideElement {}

impl BurnsideElement {
    pub fn ring(&self) -> &Arc<BurnsideRing> {
        &self.ring
    }

    pub fn coeffs(&self) -> &BTreeMap<usize, BigRational> {
        &self.coeffs
    }

    pub fn coeff(&self, c: usize) -> BigRational {
        self.coeffs.get(&c).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.values().all(|v| v.is_integer())
    }

    pub fn marks(&self) -> MarkVector {
        self.ring.marks(self)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if !BurnsideRing::same_ring(&self.ring, &other.ring) {
            return Err(Error::GroupMismatch);
        }
        let terms = self.coeffs.iter().chain(other.coeffs.iter()).map(|(&c, v)| (c, v.clone()));
        Ok(self.ring.element(terms))
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        self.ring.element(self.coeffs.iter().map(|(&c, v)| (c, v * s)))
    }

    /// Default (marks) route.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.ring.multiply_with(self, other, MulPath::Marks)
    }

    pub fn multiply_with(&self, other: &Self, path: MulPath) -> Result<Self> {
        self.ring.multiply_with(self, other, path)
    }
}

impl Add for &BurnsideElement {
    type Output = BurnsideElement;
    fn add(self, rhs: Self) -> BurnsideElement {
        self.checked_add(rhs).expect("Burnside elements over different groups")
    }
}

impl Neg for &BurnsideElement {
    type Output = BurnsideElement;
    fn neg(self) -> BurnsideElement {
        self.scale(&-BigRational::one())
    }
}

impl Sub for &BurnsideElement {
    type Output = BurnsideElement;
    fn sub(self, rhs: Self) -> BurnsideElement {
        self + &(-rhs)
    }
}

impl Mul for &BurnsideElement {
    type Output = BurnsideElement;
    fn mul(self, rhs: Self) -> BurnsideElement {
        self.multiply(rhs).expect("Burnside elements over different groups")
    }
}
