//! Finite truncations of P. Hall's class-2 group of exponent `p`.
//!
//! The truncation of radius `n` is generated by `g_{-n}, …, g_n`. Adjacent
//! generators satisfy `[g_i, g_{i+1}] = z_{i+1}^{±1}` (plus for odd `i`,
//! minus for even `i`), all other generator pairs commute, and the `z_j`
//! for `-n < j ≤ n` are central of order `p`. Elements are kept in the
//! normal form `g_{-n}^{a_{-n}} ⋯ g_n^{a_n} · z^{b}`.

use std::collections::{HashSet, VecDeque};

use rand::Rng;

use super::is_prime;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HallElement {
    /// Exponent of `g_i` at position `i + n`.
    pub a: Vec<u32>,
    /// Exponent of `z_j` at position `j + n - 1`.
    pub b: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HallGroup {
    p: u32,
    n: usize,
}

/// The generating description `⟨g_l : l ∈ generators⟩ · Z` and its order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClaimedCentralizer {
    pub generators: Vec<isize>,
    pub log_p_order: usize,
}

impl HallGroup {
    pub fn new(p: u64, n: usize) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p == 2 {
            return Err(Error::EvenPrime(p));
        }
        if n == 0 {
            return Err(Error::Parse("Hall truncation radius must be at least 1".into()));
        }
        Ok(HallGroup { p: p as u32, n })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn radius(&self) -> usize {
        self.n
    }

    fn gens(&self) -> usize {
        2 * self.n + 1
    }

    fn centrals(&self) -> usize {
        2 * self.n
    }

    /// `log_p |G|`: one factor per generator and per central `z_j`.
    pub fn log_p_order(&self) -> usize {
        self.gens() + self.centrals()
    }

    pub fn order(&self) -> u128 {
        (self.p as u128).pow(self.log_p_order() as u32)
    }

    pub fn generator_indices(&self) -> std::ops::RangeInclusive<isize> {
        -(self.n as isize)..=(self.n as isize)
    }

    pub fn central_indices(&self) -> std::ops::RangeInclusive<isize> {
        -(self.n as isize) + 1..=(self.n as isize)
    }

    pub fn identity(&self) -> HallElement {
        HallElement { a: vec![0; self.gens()], b: vec![0; self.centrals()] }
    }

    fn gpos(&self, i: isize) -> usize {
        (i + self.n as isize) as usize
    }

    fn zpos(&self, j: isize) -> usize {
        (j + self.n as isize - 1) as usize
    }

    pub fn generator(&self, i: isize) -> HallElement {
        let mut e = self.identity();
        e.a[self.gpos(i)] = 1;
        e
    }

    pub fn central(&self, j: isize) -> HallElement {
        let mut e = self.identity();
        e.b[self.zpos(j)] = 1;
        e
    }

    /// Sign `s(i)` in `[g_i, g_{i+1}] = z_{i+1}^{s(i)}`.
    fn sign(i: isize) -> i64 {
        if i.rem_euclid(2) == 1 {
            1
        } else {
            -1
        }
    }

    /// Product by collection: moving `g_j` of the right factor past `g_{j+1}`
    /// of the left factor picks up `[g_{j+1}, g_j]`.
    pub fn mul(&self, x: &HallElement, y: &HallElement) -> HallElement {
        let p = self.p as i64;
        let a = x.a.iter().zip(&y.a).map(|(&u, &v)| (u + v) % self.p).collect();
        let mut b: Vec<i64> = x.b.iter().zip(&y.b).map(|(&u, &v)| (u + v) as i64).collect();
        for j in -(self.n as isize)..(self.n as isize) {
            let left = x.a[self.gpos(j + 1)] as i64;
            let right = y.a[self.gpos(j)] as i64;
            b[self.zpos(j + 1)] -= Self::sign(j) * left * right;
        }
        HallElement { a, b: b.into_iter().map(|v| v.rem_euclid(p) as u32).collect() }
    }

    pub fn inv(&self, x: &HallElement) -> HallElement {
        let neg = HallElement { a: x.a.iter().map(|&u| (self.p - u) % self.p).collect(), b: vec![0; self.centrals()] };
        // x · neg = z^c for some central c; correct by z^{-c}.
        let prod = self.mul(x, &neg);
        HallElement { a: neg.a, b: prod.b.iter().map(|&c| (self.p - c) % self.p).collect() }
    }

    /// `x⁻¹ y⁻¹ x y`.
    pub fn commutator(&self, x: &HallElement, y: &HallElement) -> HallElement {
        let xy = self.mul(x, y);
        let yx = self.mul(y, x);
        self.mul(&self.inv(&yx), &xy)
    }

    /// `g x g⁻¹`.
    pub fn conj(&self, g: &HallElement, x: &HallElement) -> HallElement {
        self.mul(&self.mul(g, x), &self.inv(g))
    }

    pub fn pow(&self, x: &HallElement, k: u32) -> HallElement {
        let mut acc = self.identity();
        for _ in 0..k {
            acc = self.mul(&acc, x);
        }
        acc
    }

    pub fn is_central(&self, x: &HallElement) -> bool {
        x.a.iter().all(|&u| u == 0)
    }

    pub fn random_element<R: Rng>(&self, rng: &mut R) -> HallElement {
        HallElement {
            a: (0..self.gens()).map(|_| rng.gen_range(0..self.p)).collect(),
            b: (0..self.centrals()).map(|_| rng.gen_range(0..self.p)).collect(),
        }
    }

    /// Random element whose generator support lies in `|i| ≤ n - 1`.
    pub fn random_interior_element<R: Rng>(&self, rng: &mut R) -> HallElement {
        let mut e = self.random_element(rng);
        let (lo, hi) = (self.gpos(-(self.n as isize)), self.gpos(self.n as isize));
        e.a[lo] = 0;
        e.a[hi] = 0;
        e
    }

    /// Generator indices with nonzero exponent.
    pub fn support(&self, x: &HallElement) -> Vec<isize> {
        self.generator_indices().filter(|&i| x.a[self.gpos(i)] != 0).collect()
    }

    /// Orbit of `w` under conjugation, closed under the generators.
    pub fn conjugacy_class(&self, w: &HallElement) -> Vec<HallElement> {
        let gens: Vec<HallElement> = self.generator_indices().map(|i| self.generator(i)).collect();
        let mut seen: HashSet<HallElement> = HashSet::from([w.clone()]);
        let mut queue = VecDeque::from([w.clone()]);
        while let Some(x) = queue.pop_front() {
            for g in &gens {
                let y = self.conj(g, &x);
                if seen.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        let mut out: Vec<HallElement> = seen.into_iter().collect();
        out.sort();
        out
    }

    /// `⟨g_l : |l - i_s| > 1 for every i_s in the support of w⟩ · Z`.
    pub fn claimed_centralizer(&self, w: &HallElement) -> ClaimedCentralizer {
        let support = self.support(w);
        let generators: Vec<isize> =
            self.generator_indices().filter(|&l| support.iter().all(|&i| (l - i).abs() > 1)).collect();
        ClaimedCentralizer { log_p_order: generators.len() + self.centrals(), generators }
    }

    /// Whether `x` lies in the claimed centralizer description.
    pub fn in_claimed_centralizer(&self, c: &ClaimedCentralizer, x: &HallElement) -> bool {
        self.generator_indices().all(|l| x.a[self.gpos(l)] == 0 || c.generators.contains(&l))
    }

    /// `log_p |C_G(w)|`, from the rank over `F_p` of `x ↦ [w, x]`.
    pub fn centralizer_log_order(&self, w: &HallElement) -> usize {
        let p = self.p as i64;
        // Row per central z_{j+1}: coefficient s(j)(a_j x_{j+1} - a_{j+1} x_j).
        let mut rows: Vec<Vec<i64>> = Vec::new();
        for j in -(self.n as isize)..(self.n as isize) {
            let mut row = vec![0i64; self.gens()];
            let (aj, aj1) = (w.a[self.gpos(j)] as i64, w.a[self.gpos(j + 1)] as i64);
            row[self.gpos(j + 1)] = aj.rem_euclid(p);
            row[self.gpos(j)] = (-aj1).rem_euclid(p);
            rows.push(row);
        }
        self.log_p_order() - rank_mod_p(rows, p)
    }
}

fn rank_mod_p(mut rows: Vec<Vec<i64>>, p: i64) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][c] % p != 0) else { continue };
        rows.swap(rank, piv);
        let inv = mod_inv(rows[rank][c], p);
        for r in 0..rows.len() {
            if r != rank && rows[r][c] != 0 {
                let f = rows[r][c] * inv % p;
                for k in 0..cols {
                    rows[r][k] = (rows[r][k] - f * rows[rank][k]).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn mod_inv(a: i64, p: i64) -> i64 {
    let mut acc = 1;
    let mut base = a.rem_euclid(p);
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(HallGroup::new(2, 2), Err(Error::EvenPrime(2)));
        assert_eq!(HallGroup::new(9, 2), Err(Error::NotPrime(9)));
        assert!(HallGroup::new(3, 0).is_err());
    }

    #[test]
    fn adjacency_relations() {
        let h = HallGroup::new(5, 3).unwrap();
        for i in h.generator_indices() {
            for j in h.generator_indices() {
                let c = h.commutator(&h.generator(i), &h.generator(j));
                if j == i + 1 {
                    let z = h.central(j);
                    let expected = if i.rem_euclid(2) == 1 { z } else { h.inv(&z) };
                    assert_eq!(c, expected, "[g{i}, g{j}]");
                } else if i == j + 1 {
                    let z = h.central(i);
                    let expected = if j.rem_euclid(2) == 1 { h.inv(&z) } else { z };
                    assert_eq!(c, expected, "[g{i}, g{j}]");
                } else {
                    assert_eq!(c, h.identity());
                }
            }
        }
    }

    #[test]
    fn exponent_and_class_two() {
        let h = HallGroup::new(3, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let x = h.random_element(&mut rng);
            let y = h.random_element(&mut rng);
            assert_eq!(h.pow(&x, 3), h.identity());
            assert!(h.is_central(&h.commutator(&x, &y)));
            assert_eq!(h.mul(&x, &h.inv(&x)), h.identity());
            assert_eq!(h.mul(&h.inv(&x), &x), h.identity());
        }
    }

    #[test]
    fn class_sizes() {
        let h = HallGroup::new(3, 2).unwrap();
        assert_eq!(h.conjugacy_class(&h.generator(0)).len(), 9);
        assert_eq!(h.conjugacy_class(&h.generator(2)).len(), 3);
        assert_eq!(h.conjugacy_class(&h.central(1)).len(), 1);
    }

    #[test]
    fn exact_centralizer_matches_orbits() {
        let h = HallGroup::new(3, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..30 {
            let w = h.random_interior_element(&mut rng);
            let orbit = h.conjugacy_class(&w).len() as u128;
            assert_eq!(orbit * 3u128.pow(h.centralizer_log_order(&w) as u32), h.order());
        }
    }
}
