//! Finite G-sets, three Mackey functors on them, and the action of crossed
//! G-sets on a Mackey functor.
//!
//! Every functor value is a finite free module over a [`Field`]; a map
//! `X → Y` induces a `dim M(Y) × dim M(X)` matrix under `star` and a
//! `dim M(X) × dim M(Y)` matrix under `upper_star`.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::burnside::BurnsideRing;
use crate::crossed::{CrossedElement, CrossedRing};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Subgroup, SubgroupLattice};
use crate::linalg::{Field, Matrix};

/// A G-set on points `0..len`, stored as a `|G| × len` action table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GSet {
    group: Arc<FiniteGroup>,
    points: usize,
    action: Vec<u32>,
}

impl GSet {
    /// `action[g][x]` is `g·x`.
    pub fn new(group: Arc<FiniteGroup>, points: usize, action: &[Vec<usize>]) -> Result<Self> {
        if action.len() != group.order() {
            return Err(Error::InvalidAction(format!("{} rows for a group of order {}", action.len(), group.order())));
        }
        let mut flat = Vec::with_capacity(group.order() * points);
        for (g, row) in action.iter().enumerate() {
            if row.len() != points {
                return Err(Error::InvalidAction(format!("row {g} has {} entries, expected {points}", row.len())));
            }
            if let Some(&bad) = row.iter().find(|&&y| y >= points) {
                return Err(Error::InvalidAction(format!("point {bad} out of range in row {g}")));
            }
            flat.extend(row.iter().map(|&y| y as u32));
        }
        let x = GSet { group, points, action: flat };
        x.validate()?;
        Ok(x)
    }

    fn validate(&self) -> Result<()> {
        let g = &self.group;
        let e = g.identity();
        if let Some(x) = (0..self.points).find(|&x| self.act(e, x) != x) {
            return Err(Error::InvalidAction(format!("identity moves point {x}")));
        }
        for a in g.elements() {
            for b in g.elements() {
                let ab = g.mul(a, b);
                if let Some(x) = (0..self.points).find(|&x| self.act(ab, x) != self.act(a, self.act(b, x))) {
                    return Err(Error::InvalidAction(format!("({a}·{b})·{x} differs from {a}·({b}·{x})")));
                }
            }
        }
        Ok(())
    }

    pub fn empty(group: Arc<FiniteGroup>) -> Self {
        GSet { group, points: 0, action: Vec::new() }
    }

    /// `G/G`.
    pub fn point(group: Arc<FiniteGroup>) -> Self {
        let n = group.order();
        GSet { group, points: 1, action: vec![0; n] }
    }

    /// Left cosets `G/H`, numbered as by [`FiniteGroup::left_cosets`].
    pub fn from_subgroup(group: Arc<FiniteGroup>, h: &Subgroup) -> Result<Self> {
        h.validate(&group)?;
        let (reps, which) = group.left_cosets(h);
        let mut action = Vec::with_capacity(group.order() * reps.len());
        for g in group.elements() {
            action.extend(reps.iter().map(|&r| which[group.mul(g, r)] as u32));
        }
        Ok(GSet { group, points: reps.len(), action })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.points
    }

    pub fn is_empty(&self) -> bool {
        self.points == 0
    }

    #[inline]
    pub fn act(&self, g: usize, x: usize) -> usize {
        self.action[g * self.points + x] as usize
    }

    pub fn action_rows(&self) -> Vec<Vec<usize>> {
        self.group.elements().map(|g| (0..self.points).map(|x| self.act(g, x)).collect()).collect()
    }

    /// Orbits as sorted point lists, ordered by smallest point.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.points];
        let mut out = Vec::new();
        for x in 0..self.points {
            if seen[x] {
                continue;
            }
            let mut orbit: Vec<usize> = self.group.elements().map(|g| self.act(g, x)).collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &y in &orbit {
                seen[y] = true;
            }
            out.push(orbit);
        }
        out
    }

    pub fn stabilizer(&self, x: usize) -> Subgroup {
        Subgroup::from_sorted(self.group.elements().filter(|&g| self.act(g, x) == x).collect())
    }

    pub fn fixed_points(&self, h: &Subgroup) -> Vec<usize> {
        (0..self.points).filter(|&x| h.elements().iter().all(|&g| self.act(g, x) == x)).collect()
    }

    fn same_group(&self, other: &GSet) -> Result<()> {
        if Arc::ptr_eq(&self.group, &other.group) || self.group == other.group {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }

    /// `X ⊔ Y` with the points of `X` first, and both inclusions.
    pub fn disjoint_union(x: &Arc<GSet>, y: &Arc<GSet>) -> Result<(Arc<GSet>, GMap, GMap)> {
        x.same_group(y)?;
        let (m, n) = (x.points, y.points);
        let mut action = Vec::with_capacity(x.group.order() * (m + n));
        for g in x.group.elements() {
            action.extend((0..m).map(|p| x.act(g, p) as u32));
            action.extend((0..n).map(|p| (m + y.act(g, p)) as u32));
        }
        let u = Arc::new(GSet { group: x.group.clone(), points: m + n, action });
        let inl = GMap { source: x.clone(), target: u.clone(), map: (0..m).collect() };
        let inr = GMap { source: y.clone(), target: u.clone(), map: (m..m + n).collect() };
        Ok((u, inl, inr))
    }

    /// `X × Y` with diagonal action, `(x, y)` at index `x·|Y| + y`, and both
    /// projections.
    pub fn product(x: &Arc<GSet>, y: &Arc<GSet>) -> Result<(Arc<GSet>, GMap, GMap)> {
        x.same_group(y)?;
        let (m, n) = (x.points, y.points);
        let mut action = Vec::with_capacity(x.group.order() * m * n);
        for g in x.group.elements() {
            for a in 0..m {
                let ga = x.act(g, a);
                action.extend((0..n).map(|b| (ga * n + y.act(g, b)) as u32));
            }
        }
        let p = Arc::new(GSet { group: x.group.clone(), points: m * n, action });
        let pl = GMap { source: p.clone(), target: x.clone(), map: (0..m * n).map(|i| i / n.max(1)).collect() };
        let pr = GMap { source: p.clone(), target: y.clone(), map: (0..m * n).map(|i| i % n.max(1)).collect() };
        Ok((p, pl, pr))
    }
}

/// An equivariant map of G-sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GMap {
    source: Arc<GSet>,
    target: Arc<GSet>,
    map: Vec<usize>,
}

impl GMap {
    pub fn new(source: Arc<GSet>, target: Arc<GSet>, map: Vec<usize>) -> Result<Self> {
        source.same_group(&target)?;
        if map.len() != source.len() {
            return Err(Error::InvalidAction(format!("map has {} entries for {} points", map.len(), source.len())));
        }
        if let Some(&bad) = map.iter().find(|&&y| y >= target.len()) {
            return Err(Error::InvalidAction(format!("image {bad} out of range")));
        }
        for g in source.group.elements() {
            if let Some(x) = (0..source.len()).find(|&x| map[source.act(g, x)] != target.act(g, map[x])) {
                return Err(Error::InvalidAction(format!("not equivariant at g={g}, x={x}")));
            }
        }
        Ok(GMap { source, target, map })
    }

    /// The map sending each chosen orbit representative `x` to `y` and
    /// extended by `g·x ↦ g·y`. Every orbit of the source must be listed.
    pub fn from_orbit_images(source: Arc<GSet>, target: Arc<GSet>, images: &[(usize, usize)]) -> Result<Self> {
        source.same_group(&target)?;
        let mut map = vec![usize::MAX; source.len()];
        for &(x, y) in images {
            for g in source.group.elements() {
                let (gx, gy) = (source.act(g, x), target.act(g, y));
                if map[gx] != usize::MAX && map[gx] != gy {
                    return Err(Error::InvalidAction(format!("stabilizer of {x} does not fix {y}")));
                }
                map[gx] = gy;
            }
        }
        if map.contains(&usize::MAX) {
            return Err(Error::InvalidAction("an orbit has no image".into()));
        }
        Ok(GMap { source, target, map })
    }

    pub fn identity(x: Arc<GSet>) -> Self {
        GMap { map: (0..x.len()).collect(), source: x.clone(), target: x }
    }

    pub fn source(&self) -> &Arc<GSet> {
        &self.source
    }

    pub fn target(&self) -> &Arc<GSet> {
        &self.target
    }

    pub fn table(&self) -> &[usize] {
        &self.map
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &GMap) -> Result<GMap> {
        if *self.target != *next.source {
            return Err(Error::TargetMismatch);
        }
        Ok(GMap { source: self.source.clone(), target: next.target.clone(), map: self.map.iter().map(|&x| next.map[x]).collect() })
    }

    fn fibre(&self, y: usize) -> impl Iterator<Item = usize> + '_ {
        self.map.iter().enumerate().filter(move |&(_, &fx)| fx == y).map(|(x, _)| x)
    }
}

/// `W = X ×_Z Y` with its two projections.
#[derive(Clone, Debug)]
pub struct Pullback {
    pub set: Arc<GSet>,
    pub left: GMap,
    pub right: GMap,
}

/// Fibre product of `f: X → Z` and `h: Y → Z`, computed pointwise; pairs
/// are listed in lexicographic order.
pub fn pullback(f: &GMap, h: &GMap) -> Result<Pullback> {
    f.source.same_group(&h.source)?;
    if *f.target != *h.target {
        return Err(Error::TargetMismatch);
    }
    let pairs: Vec<(usize, usize)> = (0..f.source.len())
        .flat_map(|x| (0..h.source.len()).filter(move |&y| f.map[x] == h.map[y]).map(move |y| (x, y)))
        .collect();
    let index: HashMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let g = &f.source.group;
    let mut action = Vec::with_capacity(g.order() * pairs.len());
    for a in g.elements() {
        action.extend(pairs.iter().map(|&(x, y)| index[&(f.source.act(a, x), h.source.act(a, y))] as u32));
    }
    let set = Arc::new(GSet { group: g.clone(), points: pairs.len(), action });
    let left = GMap { source: set.clone(), target: f.source.clone(), map: pairs.iter().map(|p| p.0).collect() };
    let right = GMap { source: set.clone(), target: h.source.clone(), map: pairs.iter().map(|p| p.1).collect() };
    Ok(Pullback { set, left, right })
}

/// Subgroup class of each orbit's stabilizer, sorted.
pub fn orbit_types(x: &GSet, lattice: &SubgroupLattice) -> Vec<usize> {
    let mut t: Vec<usize> = x.orbits().iter().map(|o| lattice.classify(&x.stabilizer(o[0]))).collect();
    t.sort_unstable();
    t
}

/// A linear action of `G` on `V = F^n`, one matrix per group element.
#[derive(Clone, Debug)]
pub struct Representation {
    group: Arc<FiniteGroup>,
    field: Field,
    dim: usize,
    matrices: Vec<Matrix>,
}

impl Representation {
    pub fn new(group: Arc<FiniteGroup>, field: Field, dim: usize, matrices: Vec<Matrix>) -> Result<Self> {
        if matrices.len() != group.order() || matrices.iter().any(|m| m.rows() != dim || m.cols() != dim) {
            return Err(Error::InvalidAction("one dim×dim matrix per group element is required".into()));
        }
        if matrices.iter().any(|m| *m.field() != field) {
            return Err(Error::CoefficientMismatch("matrices over a different field".into()));
        }
        if matrices[group.identity()] != Matrix::identity(&field, dim) {
            return Err(Error::InvalidAction("identity does not act trivially".into()));
        }
        for a in group.elements() {
            for b in group.elements() {
                if matrices[group.mul(a, b)] != matrices[a].mul(&matrices[b]) {
                    return Err(Error::InvalidAction(format!("not a homomorphism at ({a}, {b})")));
                }
            }
        }
        Ok(Representation { group, field, dim, matrices })
    }

    /// Integer matrices embedded into the field.
    pub fn from_integer_matrices(group: Arc<FiniteGroup>, field: Field, matrices: &[Vec<Vec<i64>>]) -> Result<Self> {
        let dim = matrices.first().map_or(0, Vec::len);
        let ms = matrices
            .iter()
            .map(|m| {
                let rows = m.iter().map(|r| r.iter().map(|&v| field.from_i64(v)).collect()).collect();
                Matrix::from_rows(&field, rows, dim)
            })
            .collect();
        Self::new(group, field, dim, ms)
    }

    pub fn trivial(group: Arc<FiniteGroup>, field: Field, dim: usize) -> Self {
        let matrices = vec![Matrix::identity(&field, dim); group.order()];
        Representation { group, field, dim, matrices }
    }

    /// `F[G]` with `g·e_h = e_{gh}`.
    pub fn regular(group: Arc<FiniteGroup>, field: Field) -> Self {
        let n = group.order();
        let matrices = group
            .elements()
            .map(|g| {
                let mut m = Matrix::zeros(&field, n, n);
                for h in 0..n {
                    m.set(group.mul(g, h), h, BigRational::one());
                }
                m
            })
            .collect();
        Representation { group, field, dim: n, matrices }
    }

    /// A one-dimensional representation from a character with values ±1
    /// (or any integers forming a homomorphism into the units).
    pub fn linear_character(group: Arc<FiniteGroup>, field: Field, values: &[i64]) -> Result<Self> {
        let ms: Vec<Vec<Vec<i64>>> = values.iter().map(|&v| vec![vec![v]]).collect();
        Self::from_integer_matrices(group, field, &ms)
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self, g: usize) -> &Matrix {
        &self.matrices[g]
    }

    /// `ρ(s) − I` for every `s ∈ S`, stacked vertically; its kernel is
    /// `V^S`.
    fn stacked_deviation(&self, s: &Subgroup) -> Matrix {
        let n = self.dim;
        let mut m = Matrix::zeros(&self.field, n * s.order(), n);
        for (k, &g) in s.elements().iter().enumerate() {
            for r in 0..n {
                for c in 0..n {
                    let mut v = self.matrices[g].get(r, c).clone();
                    if r == c {
                        v = self.field.sub(&v, &BigRational::one());
                    }
                    m.set(k * n + r, c, v);
                }
            }
        }
        m
    }

    /// `ρ(s) − I` for every `s ∈ S`, side by side; its column space is the
    /// span of `(s − 1)V`.
    fn deviation(&self, s: &Subgroup) -> Matrix {
        let n = self.dim;
        let mut m = Matrix::zeros(&self.field, n, n * s.order());
        for (k, &g) in s.elements().iter().enumerate() {
            let rho = &self.matrices[g];
            for r in 0..n {
                for c in 0..n {
                    let mut v = rho.get(r, c).clone();
                    if r == c {
                        v = self.field.sub(&v, &BigRational::one());
                    }
                    m.set(r, k * n + c, v);
                }
            }
        }
        m
    }
}

/// Per-G-set data shared by the fixed-point and fixed-quotient functors:
/// orbit representatives and, for every point, a group element carrying
/// the representative of its orbit onto it.
struct OrbitFrame {
    reps: Vec<usize>,
    orbit_of: Vec<usize>,
    carrier: Vec<usize>,
    stabilizers: Vec<Subgroup>,
}

impl OrbitFrame {
    fn new(x: &GSet) -> Self {
        let mut orbit_of = vec![usize::MAX; x.len()];
        let mut carrier = vec![usize::MAX; x.len()];
        let mut reps = Vec::new();
        let mut stabilizers = Vec::new();
        for p in 0..x.len() {
            if orbit_of[p] != usize::MAX {
                continue;
            }
            let o = reps.len();
            reps.push(p);
            stabilizers.push(x.stabilizer(p));
            for g in x.group().elements() {
                let y = x.act(g, p);
                if orbit_of[y] == usize::MAX {
                    orbit_of[y] = o;
                    carrier[y] = g;
                }
            }
        }
        OrbitFrame { reps, orbit_of, carrier, stabilizers }
    }
}

/// `FP_V(X)`: equivariant functions `X → V`, coordinatized by their values
/// at orbit representatives in `V^{G_x}`.
#[derive(Debug)]
pub struct FixedPointMackey {
    rep: Representation,
}

struct FpFrame {
    frame: OrbitFrame,
    /// Basis of `V^{G_x}` as columns, and a left inverse, per orbit.
    bases: Vec<(Matrix, Matrix)>,
    offsets: Vec<usize>,
    dim: usize,
}

impl FixedPointMackey {
    fn frame(&self, x: &GSet) -> FpFrame {
        let frame = OrbitFrame::new(x);
        let mut offsets = Vec::new();
        let mut dim = 0;
        let bases: Vec<(Matrix, Matrix)> = frame
            .stabilizers
            .iter()
            .map(|s| {
                let b = self.rep.stacked_deviation(s).kernel();
                let li = b.left_inverse();
                offsets.push(dim);
                dim += b.cols();
                (b, li)
            })
            .collect();
        FpFrame { frame, bases, offsets, dim }
    }

    /// Values of basis function `k` at every point.
    fn function(&self, x: &GSet, fr: &FpFrame, k: usize) -> Vec<Vec<BigRational>> {
        let o = fr.offsets.partition_point(|&off| off <= k) - 1;
        let v = fr.bases[o].0.column(k - fr.offsets[o]);
        (0..x.len())
            .map(|p| {
                if fr.frame.orbit_of[p] == o {
                    self.rep.matrix(fr.frame.carrier[p]).apply(&v)
                } else {
                    vec![BigRational::zero(); self.rep.dim]
                }
            })
            .collect()
    }

    fn coordinates(&self, fr: &FpFrame, values: &[Vec<BigRational>]) -> Vec<BigRational> {
        let mut out = Vec::with_capacity(fr.dim);
        for (o, &r) in fr.frame.reps.iter().enumerate() {
            out.extend(fr.bases[o].1.apply(&values[r]));
        }
        out
    }
}

/// `FQ_V(X) = (V ⊗ F[X])_G`, coordinatized orbitwise in `V_{G_x}`.
#[derive(Debug)]
pub struct FixedQuotientMackey {
    rep: Representation,
    inverses: Vec<Matrix>,
}

struct FqFrame {
    frame: OrbitFrame,
    /// Complement coordinates spanning `V_{G_x}`, and the projection onto
    /// them, per orbit.
    quotients: Vec<(Vec<usize>, Matrix)>,
    offsets: Vec<usize>,
    dim: usize,
}

impl FixedQuotientMackey {
    fn frame(&self, x: &GSet) -> FqFrame {
        let frame = OrbitFrame::new(x);
        let n = self.rep.dim;
        let f = &self.rep.field;
        let mut offsets = Vec::new();
        let mut dim = 0;
        let quotients = frame
            .stabilizers
            .iter()
            .map(|s| {
                let (rref, pivots) = self.rep.deviation(s).transpose().rref();
                let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
                let mut full = Matrix::zeros(f, n, n);
                for (i, _) in pivots.iter().enumerate() {
                    for c in 0..n {
                        full.set(c, i, rref.get(i, c).clone());
                    }
                }
                for (j, &c) in free.iter().enumerate() {
                    full.set(c, pivots.len() + j, BigRational::one());
                }
                let inv = full.inverse().expect("echelon rows and free unit vectors form a basis");
                let mut proj = Matrix::zeros(f, free.len(), n);
                for j in 0..free.len() {
                    for c in 0..n {
                        proj.set(j, c, inv.get(pivots.len() + j, c).clone());
                    }
                }
                offsets.push(dim);
                dim += free.len();
                (free, proj)
            })
            .collect();
        FqFrame { frame, quotients, offsets, dim }
    }

    /// Class of `Σ_p p ⊗ v_p`, using `g·x ⊗ v ~ x ⊗ g⁻¹v`.
    fn coordinates(&self, fr: &FqFrame, values: &[(usize, Vec<BigRational>)]) -> Vec<BigRational> {
        let f = &self.rep.field;
        let mut out = vec![BigRational::zero(); fr.dim];
        for (p, v) in values {
            let o = fr.frame.orbit_of[*p];
            let back = self.inverses[fr.frame.carrier[*p]].apply(v);
            for (j, c) in fr.quotients[o].1.apply(&back).into_iter().enumerate() {
                let slot = &mut out[fr.offsets[o] + j];
                *slot = f.add(slot, &c);
            }
        }
        out
    }

    /// Representative `x_o ⊗ e_c` of basis vector `k`.
    fn lift(&self, fr: &FqFrame, k: usize) -> (usize, Vec<BigRational>) {
        let o = fr.offsets.partition_point(|&off| off <= k) - 1;
        let c = fr.quotients[o].0[k - fr.offsets[o]];
        let mut v = vec![BigRational::zero(); self.rep.dim];
        v[c] = BigRational::one();
        (fr.frame.reps[o], v)
    }
}

/// The Burnside functor: `M(X)` is free on isomorphism classes of spans
/// `G/H → X`, i.e. pairs (subgroup class `H`, point of `X^H`) up to
/// `N_G(H)`, listed by point and then class.
#[derive(Debug)]
pub struct BurnsideMackey {
    ring: Arc<BurnsideRing>,
    field: Field,
    normalizers: Vec<Subgroup>,
    cosets: Vec<OnceLock<Arc<GSet>>>,
}

impl BurnsideMackey {
    pub fn ring(&self) -> &Arc<BurnsideRing> {
        &self.ring
    }

    /// Canonical `(point, class)` basis of `M(X)`.
    pub fn basis(&self, x: &GSet) -> Vec<(usize, usize)> {
        let l = self.ring.lattice();
        let mut out = Vec::new();
        for c in 0..l.num_classes() {
            for p in x.fixed_points(l.class_rep(c)) {
                if self.canonical_fixed(x, c, p) == p {
                    out.push((p, c));
                }
            }
        }
        out.sort_unstable();
        out
    }

    fn canonical_fixed(&self, x: &GSet, c: usize, p: usize) -> usize {
        self.normalizers[c].elements().iter().map(|&n| x.act(n, p)).min().unwrap()
    }

    /// Canonical form of the span `G/K → X`, `gK ↦ g·p`.
    pub fn canonical_span(&self, x: &GSet, k: &Subgroup, p: usize) -> (usize, usize) {
        let l = self.ring.lattice();
        let si = l.find(k.elements()).expect("subgroup of G");
        let c = l.class_of(si);
        (self.canonical_fixed(x, c, x.act(l.transporter(si), p)), c)
    }

    fn coset_set(&self, c: usize) -> &Arc<GSet> {
        self.cosets[c].get_or_init(|| {
            Arc::new(GSet::from_subgroup(self.ring.group().clone(), self.ring.lattice().class_rep(c)).expect("class representative"))
        })
    }
}

#[derive(Debug)]
pub enum MackeyFunctorInstance {
    Burnside(BurnsideMackey),
    FixedPoint(FixedPointMackey),
    FixedQuotient(FixedQuotientMackey),
}

impl MackeyFunctorInstance {
    pub fn burnside(ring: Arc<BurnsideRing>) -> Self {
        Self::burnside_over(ring, Field::Rational)
    }

    pub fn burnside_over(ring: Arc<BurnsideRing>, field: Field) -> Self {
        let g = ring.group().clone();
        let l = ring.lattice();
        let normalizers = (0..l.num_classes()).map(|c| g.normalizer(l.class_rep(c))).collect();
        let cosets = (0..l.num_classes()).map(|_| OnceLock::new()).collect();
        MackeyFunctorInstance::Burnside(BurnsideMackey { ring, field, normalizers, cosets })
    }

    pub fn fixed_point(rep: Representation) -> Self {
        MackeyFunctorInstance::FixedPoint(FixedPointMackey { rep })
    }

    pub fn fixed_quotient(rep: Representation) -> Self {
        let inverses = rep.group.elements().map(|g| rep.matrices[rep.group.inv(g)].clone()).collect();
        MackeyFunctorInstance::FixedQuotient(FixedQuotientMackey { rep, inverses })
    }

    pub fn name(&self) -> &'static str {
        match self {
            MackeyFunctorInstance::Burnside(_) => "burnside",
            MackeyFunctorInstance::FixedPoint(_) => "fixed-point",
            MackeyFunctorInstance::FixedQuotient(_) => "fixed-quotient",
        }
    }

    pub fn field(&self) -> &Field {
        match self {
            MackeyFunctorInstance::Burnside(b) => &b.field,
            MackeyFunctorInstance::FixedPoint(m) => &m.rep.field,
            MackeyFunctorInstance::FixedQuotient(m) => &m.rep.field,
        }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        match self {
            MackeyFunctorInstance::Burnside(b) => b.ring.group(),
            MackeyFunctorInstance::FixedPoint(m) => &m.rep.group,
            MackeyFunctorInstance::FixedQuotient(m) => &m.rep.group,
        }
    }

    fn check_group(&self, x: &GSet) -> Result<()> {
        let g = self.group();
        if Arc::ptr_eq(g, &x.group) || **g == *x.group {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }

    pub fn dim(&self, x: &GSet) -> Result<usize> {
        self.check_group(x)?;
        Ok(match self {
            MackeyFunctorInstance::Burnside(b) => b.basis(x).len(),
            MackeyFunctorInstance::FixedPoint(m) => m.frame(x).dim,
            MackeyFunctorInstance::FixedQuotient(m) => m.frame(x).dim,
        })
    }

    /// Covariant map `M(X) → M(Y)` of `f: X → Y`.
    pub fn star(&self, f: &GMap) -> Result<Matrix> {
        self.check_group(&f.source)?;
        let field = self.field().clone();
        match self {
            MackeyFunctorInstance::Burnside(b) => {
                let (src, tgt) = (b.basis(&f.source), b.basis(&f.target));
                let index: HashMap<(usize, usize), usize> = tgt.iter().enumerate().map(|(i, &p)| (p, i)).collect();
                let mut m = Matrix::zeros(&field, tgt.len(), src.len());
                for (j, &(p, c)) in src.iter().enumerate() {
                    let q = b.canonical_fixed(&f.target, c, f.apply(p));
                    m.add_to(index[&(q, c)], j, &BigRational::one());
                }
                Ok(m)
            }
            MackeyFunctorInstance::FixedPoint(fp) => {
                let (sf, tf) = (fp.frame(&f.source), fp.frame(&f.target));
                let mut m = Matrix::zeros(&field, tf.dim, sf.dim);
                for k in 0..sf.dim {
                    let phi = fp.function(&f.source, &sf, k);
                    let mut pushed = vec![vec![BigRational::zero(); fp.rep.dim]; f.target.len()];
                    for &y in &tf.frame.reps {
                        for x in f.fibre(y) {
                            for (acc, v) in pushed[y].iter_mut().zip(&phi[x]) {
                                *acc = field.add(acc, v);
                            }
                        }
                    }
                    for (i, v) in fp.coordinates(&tf, &pushed).into_iter().enumerate() {
                        m.set(i, k, v);
                    }
                }
                Ok(m)
            }
            MackeyFunctorInstance::FixedQuotient(fq) => {
                let (sf, tf) = (fq.frame(&f.source), fq.frame(&f.target));
                let mut m = Matrix::zeros(&field, tf.dim, sf.dim);
                for k in 0..sf.dim {
                    let (x, v) = fq.lift(&sf, k);
                    for (i, c) in fq.coordinates(&tf, &[(f.apply(x), v)]).into_iter().enumerate() {
                        m.set(i, k, c);
                    }
                }
                Ok(m)
            }
        }
    }

    /// Contravariant map `M(Y) → M(X)` of `f: X → Y`.
    pub fn upper_star(&self, f: &GMap) -> Result<Matrix> {
        self.check_group(&f.source)?;
        let field = self.field().clone();
        match self {
            MackeyFunctorInstance::Burnside(b) => {
                let (src, tgt) = (b.basis(&f.source), b.basis(&f.target));
                let index: HashMap<(usize, usize), usize> = src.iter().enumerate().map(|(i, &p)| (p, i)).collect();
                let mut m = Matrix::zeros(&field, src.len(), tgt.len());
                for (j, &(z, c)) in tgt.iter().enumerate() {
                    let cosets = b.coset_set(c).clone();
                    let span = GMap::from_orbit_images(cosets, f.target.clone(), &[(0, z)])?;
                    let w = pullback(f, &span)?;
                    for orbit in w.set.orbits() {
                        let rep = orbit[0];
                        let key = b.canonical_span(&f.source, &w.set.stabilizer(rep), w.left.apply(rep));
                        m.add_to(index[&key], j, &BigRational::one());
                    }
                }
                Ok(m)
            }
            MackeyFunctorInstance::FixedPoint(fp) => {
                let (sf, tf) = (fp.frame(&f.source), fp.frame(&f.target));
                let mut m = Matrix::zeros(&field, sf.dim, tf.dim);
                for k in 0..tf.dim {
                    let psi = fp.function(&f.target, &tf, k);
                    let pulled: Vec<Vec<BigRational>> = (0..f.source.len()).map(|x| psi[f.apply(x)].clone()).collect();
                    for (i, v) in fp.coordinates(&sf, &pulled).into_iter().enumerate() {
                        m.set(i, k, v);
                    }
                }
                Ok(m)
            }
            MackeyFunctorInstance::FixedQuotient(fq) => {
                let (sf, tf) = (fq.frame(&f.source), fq.frame(&f.target));
                let mut m = Matrix::zeros(&field, sf.dim, tf.dim);
                for k in 0..tf.dim {
                    let (y, v) = fq.lift(&tf, k);
                    let terms: Vec<(usize, Vec<BigRational>)> = f.fibre(y).map(|x| (x, v.clone())).collect();
                    for (i, c) in fq.coordinates(&sf, &terms).into_iter().enumerate() {
                        m.set(i, k, c);
                    }
                }
                Ok(m)
            }
        }
    }
}

/// A G-set with an equivariant marker map into `G` under conjugation.
#[derive(Clone, Debug)]
pub struct CrossedGSetConcrete {
    set: Arc<GSet>,
    marker: Vec<usize>,
}

impl CrossedGSetConcrete {
    pub fn new(set: Arc<GSet>, marker: Vec<usize>) -> Result<Self> {
        let g = set.group().clone();
        if marker.len() != set.len() || marker.iter().any(|&m| m >= g.order()) {
            return Err(Error::InvalidAction("marker table does not match the G-set".into()));
        }
        for a in g.elements() {
            if let Some(x) = (0..set.len()).find(|&x| marker[set.act(a, x)] != g.conj(a, marker[x])) {
                return Err(Error::InvalidAction(format!("marker is not equivariant at g={a}, x={x}")));
            }
        }
        Ok(CrossedGSetConcrete { set, marker })
    }

    /// `G/H` with marker `gH ↦ g a g⁻¹`, for `a ∈ C_G(H)`.
    pub fn from_pair(group: Arc<FiniteGroup>, h: &Subgroup, a: usize) -> Result<Self> {
        if h.elements().iter().any(|&x| group.mul(a, x) != group.mul(x, a)) {
            return Err(Error::InvalidAction(format!("marker {a} does not centralize {}", h.id())));
        }
        let (reps, _) = group.left_cosets(h);
        let marker = reps.iter().map(|&r| group.conj(r, a)).collect();
        let set = Arc::new(GSet::from_subgroup(group, h)?);
        Ok(CrossedGSetConcrete { set, marker })
    }

    /// The transitive crossed G-set of a basis pair.
    pub fn from_basis(ring: &CrossedRing, i: usize) -> Self {
        let b = ring.basis()[i];
        let h = ring.burnside().lattice().class_rep(b.class);
        Self::from_pair(ring.group().clone(), h, b.marker).expect("basis pairs are valid")
    }

    /// `G/G` with marker `1`.
    pub fn unit(group: Arc<FiniteGroup>) -> Self {
        let e = group.identity();
        CrossedGSetConcrete { set: Arc::new(GSet::point(group)), marker: vec![e] }
    }

    pub fn set(&self) -> &Arc<GSet> {
        &self.set
    }

    pub fn marker(&self) -> &[usize] {
        &self.marker
    }

    pub fn disjoint_union(&self, other: &Self) -> Result<Self> {
        let (u, _, _) = GSet::disjoint_union(&self.set, &other.set)?;
        let marker = self.marker.iter().chain(&other.marker).copied().collect();
        Ok(CrossedGSetConcrete { set: u, marker })
    }

    /// `X × X'` with marker `(x, x') ↦ w(x)·w'(x')`.
    pub fn product(&self, other: &Self) -> Result<Self> {
        let (p, pl, pr) = GSet::product(&self.set, &other.set)?;
        let g = self.set.group();
        let marker = (0..p.len()).map(|z| g.mul(self.marker[pl.apply(z)], other.marker[pr.apply(z)])).collect();
        Ok(CrossedGSetConcrete { set: p, marker })
    }
}

/// `η^c_Y = M_*(τ) M^*(π)` on `M(Y)`, with `π(x, y) = y` and
/// `τ(x, y) = w(x)·y` on `X × Y`.
pub fn eta(c: &CrossedGSetConcrete, m: &MackeyFunctorInstance, y: &Arc<GSet>) -> Result<Matrix> {
    let (z, pl, pi) = GSet::product(&c.set, y)?;
    let tau_table = (0..z.len()).map(|p| y.act(c.marker[pl.apply(p)], pi.apply(p))).collect();
    let tau = GMap::new(z, y.clone(), tau_table)?;
    Ok(m.star(&tau)?.mul(&m.upper_star(&pi)?))
}

/// Linear extension of [`eta`] over the crossed basis.
pub fn crossed_to_endomorphism(x: &CrossedElement, m: &MackeyFunctorInstance, y: &Arc<GSet>) -> Result<Matrix> {
    let ring = x.ring();
    let field = m.field().clone();
    let n = m.dim(y)?;
    let mut out = Matrix::zeros(&field, n, n);
    for (&i, v) in x.coeffs() {
        let lambda = field.embed(v)?;
        let e = eta(&CrossedGSetConcrete::from_basis(ring, i), m, y)?;
        out = out.add(&e.scale(&lambda));
    }
    Ok(out)
}

/// A transitive G-set `G/H` for a uniformly chosen subgroup `H`.
pub fn random_transitive<R: Rng>(lattice: &SubgroupLattice, rng: &mut R) -> Arc<GSet> {
    let h = lattice.subgroups().choose(rng).expect("lattice is never empty");
    Arc::new(GSet::from_subgroup(lattice.group().clone(), h).expect("lattice subgroup"))
}

/// A disjoint union of between 1 and `max_orbits` random transitive sets.
pub fn random_gset<R: Rng>(lattice: &SubgroupLattice, rng: &mut R, max_orbits: usize) -> Arc<GSet> {
    let k = rng.gen_range(1..=max_orbits.max(1));
    let mut x = random_transitive(lattice, rng);
    for _ in 1..k {
        x = GSet::disjoint_union(&x, &random_transitive(lattice, rng)).expect("same group").0;
    }
    x
}

/// A random G-set over `z`: up to `max_orbits` orbits `G/K → Z`,
/// `gK ↦ g·p` with `K ≤ G_p`. Empty `z` gives the empty set.
pub fn random_over<R: Rng>(z: &Arc<GSet>, lattice: &SubgroupLattice, rng: &mut R, max_orbits: usize) -> GMap {
    let g = z.group().clone();
    if z.is_empty() {
        return GMap::identity(Arc::new(GSet::empty(g)));
    }
    let k = rng.gen_range(1..=max_orbits.max(1));
    let mut pieces: Vec<(Arc<GSet>, usize)> = Vec::new();
    for _ in 0..k {
        let p = rng.gen_range(0..z.len());
        let stab = z.stabilizer(p);
        let candidates: Vec<&Subgroup> = lattice.subgroups().iter().filter(|s| s.is_subset_of(&stab)).collect();
        let h = *candidates.choose(rng).unwrap();
        pieces.push((Arc::new(GSet::from_subgroup(g.clone(), h).unwrap()), p));
    }
    let mut set = pieces[0].0.clone();
    let mut images = vec![(0, pieces[0].1)];
    for (piece, p) in &pieces[1..] {
        let offset = set.len();
        set = GSet::disjoint_union(&set, piece).unwrap().0;
        images.push((offset, *p));
    }
    GMap::from_orbit_images(set, z.clone(), &images).expect("stabilizers fix their images")
}
