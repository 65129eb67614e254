//! Explicit finite groups given by Cayley tables, their subgroups, and the
//! element-level machinery (centralizers, normalizers, double cosets,
//! derived series, conjugacy classes) the rest of the crate is built on.

mod builtin;
mod hall;
mod hom;
mod lattice;
mod perm;

pub use builtin::{builtin, parse_group_spec, GroupSpec};
pub use hall::{ClaimedCentralizer, HallElement, HallGroup};
pub use hom::Surjection;
pub use lattice::{SubgroupClass, SubgroupLattice};
pub use perm::{group_from_permutations, parse_permutation_spec, Permutation};

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on group order for subgroup-lattice work.
pub const DEFAULT_LATTICE_CAP: usize = 200;
/// Default cap on group order for element-only work.
pub const DEFAULT_ELEMENT_CAP: usize = 10_000;
/// Largest order for which associativity is checked on every triple.
const EXHAUSTIVE_ASSOC_LIMIT: usize = 200;
const SAMPLED_ASSOC_TRIPLES: usize = 200_000;

/// Order cap for lattice work, overridable through `BURNSIDE_CAP`.
pub fn lattice_cap() -> usize {
    std::env::var("BURNSIDE_CAP")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_LATTICE_CAP)
}

/// A finite group stored as a Cayley table over element indices `0..order`.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<u32>,
    identity: usize,
    inv: Vec<u32>,
    label: String,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup({}, order {})", self.label, self.order)
    }
}

/// JSON form of a Cayley table.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CayleyJson {
    pub order: usize,
    pub mul: Vec<Vec<usize>>,
    #[serde(default)]
    pub label: String,
}

impl FiniteGroup {
    /// Validates a square index matrix as a group table.
    pub fn from_cayley(table: &[Vec<usize>], label: impl Into<String>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::NoIdentity);
        }
        let mut mul = Vec::with_capacity(n * n);
        for (r, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotSquare { row: r, len: row.len(), order: n });
            }
            for (c, &v) in row.iter().enumerate() {
                if v >= n {
                    return Err(Error::EntryOutOfRange { row: r, col: c, value: v, order: n });
                }
                mul.push(v as u32);
            }
        }
        Self::from_flat(n, mul, label.into())
    }

    pub fn from_cayley_json(json: &CayleyJson) -> Result<Self> {
        if json.mul.len() != json.order {
            return Err(Error::NotSquare { row: 0, len: json.mul.len(), order: json.order });
        }
        let label = if json.label.is_empty() { format!("cayley:{}", json.order) } else { json.label.clone() };
        Self::from_cayley(&json.mul, label)
    }

    pub fn to_cayley_json(&self) -> CayleyJson {
        CayleyJson {
            order: self.order,
            mul: (0..self.order).map(|a| (0..self.order).map(|b| self.mul(a, b)).collect()).collect(),
            label: self.label.clone(),
        }
    }

    pub(crate) fn from_flat(n: usize, mul: Vec<u32>, label: String) -> Result<Self> {
        let at = |a: usize, b: usize| mul[a * n + b] as usize;
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| at(e, x) == x && at(x, e) == x))
            .ok_or(Error::NoIdentity)?;
        let mut inv = vec![0u32; n];
        for g in 0..n {
            let h = (0..n)
                .find(|&h| at(g, h) == identity && at(h, g) == identity)
                .ok_or(Error::NoInverse(g))?;
            inv[g] = h as u32;
        }
        if n <= EXHAUSTIVE_ASSOC_LIMIT {
            for a in 0..n {
                for b in 0..n {
                    let ab = at(a, b);
                    for c in 0..n {
                        if at(ab, c) != at(a, at(b, c)) {
                            return Err(Error::NotAssociative(a, b, c));
                        }
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_ca11);
            for _ in 0..SAMPLED_ASSOC_TRIPLES {
                let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                if at(at(a, b), c) != at(a, at(b, c)) {
                    return Err(Error::NotAssociative(a, b, c));
                }
            }
        }
        Ok(FiniteGroup { order: n, mul, identity, inv, label })
    }

    /// Builds a group from a table already known to satisfy the axioms.
    pub(crate) fn from_trusted(n: usize, mul: Vec<u32>, label: String) -> Self {
        let identity = (0..n).find(|&e| (0..n).all(|x| mul[e * n + x] as usize == x)).expect("identity");
        let mut inv = vec![0u32; n];
        for g in 0..n {
            for h in 0..n {
                if mul[g * n + h] as usize == identity {
                    inv[g] = h as u32;
                    break;
                }
            }
        }
        FiniteGroup { order: n, mul, identity, inv, label }
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    #[inline]
    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub(crate) fn set_label(&mut self, label: String) {
        self.label = label;
    }

    /// `g x g⁻¹`.
    #[inline]
    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    /// `a⁻¹ b⁻¹ a b`.
    pub fn commutator(&self, a: usize, b: usize) -> usize {
        let ab = self.mul(a, b);
        let ba = self.mul(b, a);
        self.mul(self.inv(ba), ab)
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut k = 1;
        let mut x = g;
        while x != self.identity {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn pow(&self, g: usize, k: usize) -> usize {
        let mut acc = self.identity;
        for _ in 0..k {
            acc = self.mul(acc, g);
        }
        acc
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup { elements: vec![self.identity] }
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup { elements: (0..self.order).collect() }
    }

    /// Closure of `gens` under multiplication, as a sorted element list.
    pub fn generate(&self, gens: &[usize]) -> Subgroup {
        let mut seen = vec![false; self.order];
        seen[self.identity] = true;
        let mut queue = VecDeque::from([self.identity]);
        let mut out = vec![self.identity];
        while let Some(x) = queue.pop_front() {
            for &s in gens {
                let y = self.mul(x, s);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                    queue.push_back(y);
                }
            }
        }
        out.sort_unstable();
        Subgroup { elements: out }
    }

    /// Validates an element set as a subgroup.
    pub fn subgroup(&self, elements: impl IntoIterator<Item = usize>) -> Result<Subgroup> {
        let set: BTreeSet<usize> = elements.into_iter().collect();
        if set.iter().any(|&x| x >= self.order) {
            return Err(Error::NotSubgroup("element index out of range".into()));
        }
        let s = Subgroup { elements: set.into_iter().collect() };
        s.validate(self)?;
        Ok(s)
    }

    pub fn centralizer(&self, set: &[usize]) -> Subgroup {
        let elements = (0..self.order)
            .filter(|&g| set.iter().all(|&s| self.mul(g, s) == self.mul(s, g)))
            .collect();
        Subgroup { elements }
    }

    pub fn center(&self) -> Subgroup {
        let all: Vec<usize> = self.elements().collect();
        self.centralizer(&all)
    }

    pub fn normalizer(&self, h: &Subgroup) -> Subgroup {
        let elements = (0..self.order).filter(|&g| h.elements.iter().all(|&x| h.contains(self.conj(g, x)))).collect();
        Subgroup { elements }
    }

    pub fn conjugate(&self, g: usize, h: &Subgroup) -> Subgroup {
        let mut elements: Vec<usize> = h.elements.iter().map(|&x| self.conj(g, x)).collect();
        elements.sort_unstable();
        Subgroup { elements }
    }

    pub fn is_normal(&self, h: &Subgroup) -> bool {
        (0..self.order).all(|g| h.elements.iter().all(|&x| h.contains(self.conj(g, x))))
    }

    pub fn intersection(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        Subgroup { elements: a.elements.iter().copied().filter(|&x| b.contains(x)).collect() }
    }

    /// One representative per double coset `H g K`, namely its smallest index,
    /// in increasing order.
    pub fn double_cosets(&self, h: &Subgroup, k: &Subgroup) -> Vec<usize> {
        let mut covered = vec![false; self.order];
        let mut reps = Vec::new();
        for g in 0..self.order {
            if covered[g] {
                continue;
            }
            reps.push(g);
            for &x in &h.elements {
                let xg = self.mul(x, g);
                for &y in &k.elements {
                    covered[self.mul(xg, y)] = true;
                }
            }
        }
        reps
    }

    /// Size of the double coset `H g K`.
    pub fn double_coset_size(&self, h: &Subgroup, g: usize, k: &Subgroup) -> usize {
        let mut seen = BTreeSet::new();
        for &x in &h.elements {
            let xg = self.mul(x, g);
            for &y in &k.elements {
                seen.insert(self.mul(xg, y));
            }
        }
        seen.len()
    }

    /// Left cosets `gH`, each given by its smallest element, sorted; plus
    /// the coset index of every group element.
    pub fn left_cosets(&self, h: &Subgroup) -> (Vec<usize>, Vec<usize>) {
        let mut which = vec![usize::MAX; self.order];
        let mut reps = Vec::new();
        for g in 0..self.order {
            if which[g] != usize::MAX {
                continue;
            }
            let idx = reps.len();
            reps.push(g);
            for &x in &h.elements {
                which[self.mul(g, x)] = idx;
            }
        }
        (reps, which)
    }

    /// Subgroup generated by all commutators of elements of `h`.
    pub fn derived_subgroup(&self, h: &Subgroup) -> Subgroup {
        let mut comms = BTreeSet::new();
        for &a in &h.elements {
            for &b in &h.elements {
                comms.insert(self.commutator(a, b));
            }
        }
        let gens: Vec<usize> = comms.into_iter().collect();
        self.generate(&gens)
    }

    /// Derived series of `h` down to its stable term (inclusive).
    pub fn derived_series_of(&self, h: &Subgroup) -> Vec<Subgroup> {
        let mut series = vec![h.clone()];
        loop {
            let next = self.derived_subgroup(series.last().unwrap());
            if next == *series.last().unwrap() {
                return series;
            }
            series.push(next);
        }
    }

    pub fn derived_series(&self) -> Vec<Subgroup> {
        self.derived_series_of(&self.whole())
    }

    /// Stable term of the derived series of `h`.
    pub fn perfect_core_of(&self, h: &Subgroup) -> Subgroup {
        self.derived_series_of(h).pop().unwrap()
    }

    pub fn perfect_core(&self) -> Subgroup {
        self.perfect_core_of(&self.whole())
    }

    pub fn is_perfect(&self, h: &Subgroup) -> bool {
        self.derived_subgroup(h) == *h
    }

    pub fn is_soluble(&self) -> bool {
        self.perfect_core().order() == 1
    }

    /// Smallest normal subgroup with `p`-group quotient, generated by the
    /// elements of order prime to `p`.
    pub fn o_p(&self, p: u64) -> Result<Subgroup> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let gens: Vec<usize> =
            (0..self.order).filter(|&g| self.element_order(g) as u64 % p != 0).collect();
        Ok(self.generate(&gens))
    }

    /// Conjugacy classes of elements as `(representative, size)`, the
    /// representative being the smallest index, sorted by representative.
    pub fn element_classes(&self) -> Vec<(usize, usize)> {
        let mut seen = vec![false; self.order];
        let mut out = Vec::new();
        for x in 0..self.order {
            if seen[x] {
                continue;
            }
            let mut size = 0;
            for g in 0..self.order {
                let y = self.conj(g, x);
                if !seen[y] {
                    seen[y] = true;
                    size += 1;
                }
            }
            out.push((x, size));
        }
        out
    }

    /// Direct product, element `(a, b)` at index `a * |B| + b`.
    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup, label: String) -> FiniteGroup {
        let (na, nb) = (a.order, b.order);
        let n = na * nb;
        let mut mul = Vec::with_capacity(n * n);
        for x in 0..n {
            let (xa, xb) = (x / nb, x % nb);
            for y in 0..n {
                let (ya, yb) = (y / nb, y % nb);
                mul.push((a.mul(xa, ya) * nb + b.mul(xb, yb)) as u32);
            }
        }
        FiniteGroup::from_trusted(n, mul, label)
    }
}

/// A subgroup, as a strictly sorted list of element indices of its parent.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup {
    elements: Vec<usize>,
}

impl Subgroup {
    pub(crate) fn from_sorted(elements: Vec<usize>) -> Self {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        Subgroup { elements }
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.elements.len() <= other.elements.len() && self.elements.iter().all(|&x| other.contains(x))
    }

    /// Hyphen-joined element indices, the public name of a subgroup.
    pub fn id(&self) -> String {
        let parts: Vec<String> = self.elements.iter().map(|x| x.to_string()).collect();
        parts.join("-")
    }

    pub fn parse_id(s: &str) -> Result<Vec<usize>> {
        s.split('-')
            .map(|t| t.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad subgroup id '{s}'"))))
            .collect()
    }

    /// Identity, closure under multiplication and inverses, Lagrange.
    pub fn validate(&self, g: &FiniteGroup) -> Result<()> {
        if !self.contains(g.identity()) {
            return Err(Error::NotSubgroup(format!("{} lacks the identity", self.id())));
        }
        for &a in &self.elements {
            if !self.contains(g.inv(a)) {
                return Err(Error::NotSubgroup(format!("{} not closed under inverse at {a}", self.id())));
            }
            for &b in &self.elements {
                if !self.contains(g.mul(a, b)) {
                    return Err(Error::NotSubgroup(format!("{} not closed at ({a}, {b})", self.id())));
                }
            }
        }
        if g.order() % self.order() != 0 {
            return Err(Error::NotSubgroup(format!("order {} does not divide {}", self.order(), g.order())));
        }
        Ok(())
    }
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}
