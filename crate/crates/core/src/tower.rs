//! Finite quotient towers `G₁ ← G₂ ← … ← G_d` standing in for a profinite
//! group, and families of (crossed) Burnside elements that are compatible
//! with the `Fix` transitions between consecutive levels.
//!
//! Levels are numbered from 0 (the smallest quotient) upward; the map
//! `maps[i]` goes from level `i + 1` to level `i`.

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::burnside::{BurnsideElement, BurnsideRing, DEFAULT_CENSUS_CLASS_CAP};
use crate::crossed::{CrossedBasisElement, CrossedElement, CrossedRing};
use crate::error::{Error, Result};
use crate::group::{builtin, is_prime, parse_group_spec, CayleyJson, FiniteGroup, Subgroup, SubgroupLattice, Surjection};

/// Default cap on the order of any tower level.
pub const DEFAULT_TOWER_CAP: usize = 480;

/// Tower level cap, overridable through `BURNSIDE_CAP`.
pub fn tower_cap() -> usize {
    std::env::var("BURNSIDE_CAP").ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_TOWER_CAP)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TowerSpec {
    /// `ℤ/p ← ℤ/p² ← …`
    Zp { p: usize, depth: usize },
    /// `ℤ/1! ← ℤ/2! ← …`
    Zhat { depth: usize },
    /// `A₅×ℤ/m₁ ← A₅×ℤ/m₂ ← …`
    A5xZ { chain: Vec<usize> },
    Custom(String),
}

impl fmt::Display for TowerSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TowerSpec::Zp { p, depth } => write!(f, "zp:p={p},depth={depth}"),
            TowerSpec::Zhat { depth } => write!(f, "zhat:depth={depth}"),
            TowerSpec::A5xZ { chain } => {
                let parts: Vec<String> = chain.iter().map(|m| m.to_string()).collect();
                write!(f, "a5xz:chain={}", parts.join(","))
            }
            TowerSpec::Custom(path) => write!(f, "custom:{path}"),
        }
    }
}

fn parse_usize(key: &str, v: &str) -> Result<usize> {
    v.trim().parse().map_err(|_| Error::Parse(format!("bad value for {key}: {v:?}")))
}

pub fn parse_tower_spec(spec: &str) -> Result<TowerSpec> {
    let (kind, rest) = spec.split_once(':').ok_or_else(|| Error::Parse(format!("tower spec {spec:?} has no kind")))?;
    if kind == "custom" {
        return Ok(TowerSpec::Custom(rest.to_string()));
    }
    let mut p = None;
    let mut depth = None;
    let mut chain = None;
    // `chain=1,2,4` swallows the commas that otherwise separate keys.
    let mut key = String::new();
    for item in rest.split(',') {
        let (k, v) = match item.split_once('=') {
            Some((k, v)) => {
                key = k.trim().to_string();
                (key.as_str(), v)
            }
            None if key == "chain" => ("chain", item),
            None => return Err(Error::Parse(format!("expected key=value in {spec:?}"))),
        };
        match k {
            "p" => p = Some(parse_usize(k, v)?),
            "depth" => depth = Some(parse_usize(k, v)?),
            "chain" => chain.get_or_insert_with(Vec::new).push(parse_usize(k, v)?),
            _ => return Err(Error::Parse(format!("unknown tower parameter {k:?}"))),
        }
    }
    let need = |x: Option<usize>, name: &str| x.ok_or_else(|| Error::Parse(format!("{kind} tower needs {name}")));
    let spec = match kind {
        "zp" => TowerSpec::Zp { p: need(p, "p")?, depth: need(depth, "depth")? },
        "zhat" => TowerSpec::Zhat { depth: need(depth, "depth")? },
        "a5xz" => TowerSpec::A5xZ { chain: chain.ok_or_else(|| Error::Parse("a5xz tower needs chain".into()))? },
        _ => return Err(Error::Parse(format!("unknown tower kind {kind:?}"))),
    };
    Ok(spec)
}

/// JSON description of a custom tower: level groups from the bottom up and
/// the surjection tables `level i+1 → level i`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CustomTowerJson {
    pub levels: Vec<LevelJson>,
    pub maps: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LevelJson {
    Spec(String),
    Cayley(CayleyJson),
}

#[derive(Debug)]
pub struct Level {
    burnside: Arc<BurnsideRing>,
    crossed: OnceLock<Arc<CrossedRing>>,
}

impl Level {
    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.burnside.group()
    }

    pub fn burnside(&self) -> &Arc<BurnsideRing> {
        &self.burnside
    }

    pub fn crossed(&self) -> &Arc<CrossedRing> {
        self.crossed.get_or_init(|| CrossedRing::new(self.burnside.clone()))
    }
}

#[derive(Debug)]
pub struct QuotientTower {
    spec: TowerSpec,
    levels: Vec<Level>,
    maps: Vec<Surjection>,
    /// Order of the cyclic factor per level, for the built-in kinds.
    moduli: Vec<usize>,
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

impl QuotientTower {
    pub fn from_spec(spec: &str) -> Result<Arc<Self>> {
        Self::build(parse_tower_spec(spec)?, tower_cap())
    }

    pub fn build(spec: TowerSpec, cap: usize) -> Result<Arc<Self>> {
        let moduli: Vec<usize> = match &spec {
            TowerSpec::Zp { p, depth } => {
                if !is_prime(*p as u64) {
                    return Err(Error::NotPrime(*p as u64));
                }
                if *depth == 0 {
                    return Err(Error::BadDivisorChain("depth must be positive".into()));
                }
                let mut m = 1usize;
                (0..*depth)
                    .map(|_| {
                        m = m.checked_mul(*p).ok_or(Error::CapExceeded { size: usize::MAX, cap })?;
                        Ok(m)
                    })
                    .collect::<Result<_>>()?
            }
            TowerSpec::Zhat { depth } => {
                if *depth == 0 {
                    return Err(Error::BadDivisorChain("depth must be positive".into()));
                }
                (1..=*depth).map(factorial).collect()
            }
            TowerSpec::A5xZ { chain } => {
                if chain.is_empty() || chain.contains(&0) {
                    return Err(Error::BadDivisorChain(format!("{chain:?}")));
                }
                if let Some(w) = chain.windows(2).find(|w| w[1] % w[0] != 0) {
                    return Err(Error::BadDivisorChain(format!("{} does not divide {}", w[0], w[1])));
                }
                chain.clone()
            }
            TowerSpec::Custom(path) => return Self::build_custom(spec.clone(), path, cap),
        };
        let a5 = matches!(spec, TowerSpec::A5xZ { .. });
        let factor = if a5 { 60 } else { 1 };
        if let Some(&big) = moduli.iter().find(|&&m| m.saturating_mul(factor) > cap) {
            return Err(Error::CapExceeded { size: big.saturating_mul(factor), cap });
        }
        let groups: Vec<Arc<FiniteGroup>> = moduli
            .iter()
            .map(|&m| {
                let s = if a5 { format!("product:alt:5×cyclic:{m}") } else { format!("cyclic:{m}") };
                builtin(&s).map(Arc::new)
            })
            .collect::<Result<_>>()?;
        let mut maps = Vec::new();
        for i in 0..groups.len() - 1 {
            let (lo, hi) = (moduli[i], moduli[i + 1]);
            let table = (0..groups[i + 1].order()).map(|x| (x / hi) * lo + (x % hi) % lo).collect();
            maps.push(Surjection::new(groups[i + 1].clone(), groups[i].clone(), table)?);
        }
        Self::assemble(spec, groups, maps, moduli, cap)
    }

    fn build_custom(spec: TowerSpec, path: &str, cap: usize) -> Result<Arc<Self>> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}")))?;
        let json: CustomTowerJson = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{path}: {e}")))?;
        Self::from_custom_json(spec, &json, cap)
    }

    pub fn from_custom_json(spec: TowerSpec, json: &CustomTowerJson, cap: usize) -> Result<Arc<Self>> {
        if json.levels.is_empty() || json.maps.len() + 1 != json.levels.len() {
            return Err(Error::BadDivisorChain(format!(
                "{} levels need {} maps, got {}",
                json.levels.len(),
                json.levels.len().saturating_sub(1),
                json.maps.len()
            )));
        }
        let groups: Vec<Arc<FiniteGroup>> = json
            .levels
            .iter()
            .map(|l| match l {
                LevelJson::Spec(s) => parse_group_spec(s)?.build(cap).map(Arc::new),
                LevelJson::Cayley(c) => {
                    if c.order > cap {
                        return Err(Error::CapExceeded { size: c.order, cap });
                    }
                    FiniteGroup::from_cayley_json(c).map(Arc::new)
                }
            })
            .collect::<Result<_>>()?;
        let maps = json
            .maps
            .iter()
            .enumerate()
            .map(|(i, t)| Surjection::new(groups[i + 1].clone(), groups[i].clone(), t.clone()))
            .collect::<Result<_>>()?;
        Self::assemble(spec, groups, maps, Vec::new(), cap)
    }

    fn assemble(
        spec: TowerSpec,
        groups: Vec<Arc<FiniteGroup>>,
        maps: Vec<Surjection>,
        moduli: Vec<usize>,
        cap: usize,
    ) -> Result<Arc<Self>> {
        let levels = groups
            .into_iter()
            .map(|g| Ok(Level { burnside: BurnsideRing::new(g, cap)?, crossed: OnceLock::new() }))
            .collect::<Result<_>>()?;
        Ok(Arc::new(QuotientTower { spec, levels, maps, moduli }))
    }

    pub fn spec(&self) -> &TowerSpec {
        &self.spec
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn top(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, i: usize) -> &Level {
        &self.levels[i]
    }

    pub fn levels(&self) -> &[Level] {
        &self.levels
    }

    /// The map from level `i + 1` to level `i`.
    pub fn map(&self, i: usize) -> &Surjection {
        &self.maps[i]
    }

    /// Cyclic factor order of each level, empty for custom towers.
    pub fn moduli(&self) -> &[usize] {
        &self.moduli
    }

    /// Composite of the consecutive maps from level `from` down to `to`.
    pub fn projection(&self, from: usize, to: usize) -> Result<Surjection> {
        if to > from || from >= self.depth() {
            return Err(Error::LevelOrder { from, to });
        }
        let mut s = Surjection::identity(self.levels[from].group().clone());
        for i in (to..from).rev() {
            s = s.then(&self.maps[i]);
        }
        Ok(s)
    }

    /// The canonical reduction between two levels computed straight from
    /// the element encoding of a built-in tower, not by composition.
    pub fn direct_reduction(&self, from: usize, to: usize) -> Result<Option<Vec<usize>>> {
        if to > from || from >= self.depth() {
            return Err(Error::LevelOrder { from, to });
        }
        if self.moduli.is_empty() {
            return Ok(None);
        }
        let (hi, lo) = (self.moduli[from], self.moduli[to]);
        Ok(Some((0..self.levels[from].group().order()).map(|x| (x / hi) * lo + (x % hi) % lo).collect()))
    }

    pub fn transition(&self, from: usize, to: usize, x: &BurnsideElement) -> Result<BurnsideElement> {
        let s = self.projection(from, to)?;
        if from == to {
            return Ok(x.clone());
        }
        self.levels[from].burnside().fix_along(x, &s, self.levels[to].burnside())
    }

    pub fn crossed_transition(&self, from: usize, to: usize, x: &CrossedElement) -> Result<CrossedElement> {
        let s = self.projection(from, to)?;
        if from == to {
            return Ok(x.clone());
        }
        self.levels[from].crossed().fix_along(x, &s, self.levels[to].crossed())
    }

    /// The level-`i` image of the open subgroup named by `spec`, or `None`
    /// when the level's kernel is not inside it (the family vanishes
    /// there).
    pub fn resolve_subgroup(&self, spec: &str, i: usize) -> Result<Option<Subgroup>> {
        let unresolvable = |reason: String| Error::SpecUnresolvable { spec: spec.to_string(), reason };
        let g = self.levels[i].group();
        if spec == "full" {
            return Ok(Some(g.whole()));
        }
        if let Some(rest) = spec.strip_prefix("level:") {
            let (lvl, id) = rest.split_once(':').ok_or_else(|| unresolvable("expected level:<i>:<id>".into()))?;
            let lvl: usize = lvl.parse().map_err(|_| unresolvable(format!("bad level {lvl:?}")))?;
            if lvl >= self.depth() {
                return Err(unresolvable(format!("tower has {} levels", self.depth())));
            }
            let h = self.levels[lvl].group().subgroup(Subgroup::parse_id(id)?)?;
            return Ok(if i >= lvl {
                Some(self.projection(i, lvl)?.preimage(&h))
            } else {
                let s = self.projection(lvl, i)?;
                s.kernel().is_subset_of(&h).then(|| s.image(&h))
            });
        }
        match &self.spec {
            TowerSpec::Zp { .. } | TowerSpec::Zhat { .. } => {
                let k = self.parse_index(spec).map_err(unresolvable)?;
                let top = *self.moduli.last().unwrap();
                if top % k != 0 {
                    return Err(unresolvable(format!("index {k} does not divide the top level order {top}")));
                }
                let m = self.moduli[i];
                Ok((m % k == 0).then(|| g.generate(&[k % m])))
            }
            TowerSpec::A5xZ { .. } => {
                let (name, k) = spec.rsplit_once('x').ok_or_else(|| unresolvable("expected <A5-subgroup>x<k>".into()))?;
                let k: usize = k.parse().map_err(|_| unresolvable(format!("bad index {k:?}")))?;
                let a5_part = a5_subgroup(name).ok_or_else(|| unresolvable(format!("unknown A5 subgroup {name:?}")))?;
                let top = *self.moduli.last().unwrap();
                if k == 0 || top % k != 0 {
                    return Err(unresolvable(format!("index {k} does not divide the top cyclic order {top}")));
                }
                let m = self.moduli[i];
                if m % k != 0 {
                    return Ok(None);
                }
                let mut e: Vec<usize> =
                    a5_part.elements().iter().flat_map(|&a| (0..m).step_by(k).map(move |b| a * m + b)).collect();
                e.sort_unstable();
                Ok(Some(g.subgroup(e)?))
            }
            TowerSpec::Custom(_) => Err(unresolvable("custom towers take full or level:<i>:<id>".into())),
        }
    }

    fn parse_index(&self, spec: &str) -> std::result::Result<usize, String> {
        let rest = spec.strip_prefix("index:").ok_or("expected full, index:<k> or index:p^<n>")?;
        let k = match rest.split_once('^') {
            Some((base, exp)) => {
                let base = match (base, &self.spec) {
                    ("p", TowerSpec::Zp { p, .. }) => *p,
                    ("p", _) => return Err("p is only defined on zp towers".into()),
                    (b, _) => b.parse().map_err(|_| format!("bad base {b:?}"))?,
                };
                let exp: u32 = exp.parse().map_err(|_| format!("bad exponent {exp:?}"))?;
                base.checked_pow(exp).ok_or("index overflows")?
            }
            None => rest.parse().map_err(|_| format!("bad index {rest:?}"))?,
        };
        if k == 0 {
            return Err("index must be positive".into());
        }
        Ok(k)
    }

    /// Per level, the Gluck idempotent of the image of the named subgroup
    /// (zero where the subgroup does not contain the level kernel).
    pub fn idempotent_family(self: &Arc<Self>, spec: &str) -> Result<CompatibleFamily> {
        let levels = (0..self.depth())
            .map(|i| {
                let ring = self.levels[i].burnside();
                Ok(match self.resolve_subgroup(spec, i)? {
                    Some(h) => ring.gluck_idempotent(ring.class_of_subgroup(&h)),
                    None => ring.zero(),
                })
            })
            .collect::<Result<_>>()?;
        CompatibleFamily::plain(self.clone(), levels)
    }

    /// Inflates a level-0 element to every level.
    pub fn inflated_family(self: &Arc<Self>, x: &BurnsideElement) -> Result<CompatibleFamily> {
        let levels = (0..self.depth())
            .map(|i| self.levels[i].burnside().inflate_along(x, &self.projection(i, 0)?))
            .collect::<Result<_>>()?;
        CompatibleFamily::plain(self.clone(), levels)
    }

    /// The family determined by a top-level element.
    pub fn family_from_top(self: &Arc<Self>, x: &BurnsideElement) -> Result<CompatibleFamily> {
        let top = self.top();
        let levels = (0..self.depth()).map(|i| self.transition(top, i, x)).collect::<Result<_>>()?;
        CompatibleFamily::plain(self.clone(), levels)
    }

    pub fn crossed_family_from_top(self: &Arc<Self>, x: &CrossedElement) -> Result<CompatibleFamily> {
        let top = self.top();
        let levels = (0..self.depth()).map(|i| self.crossed_transition(top, i, x)).collect::<Result<_>>()?;
        CompatibleFamily::crossed(self.clone(), levels)
    }

    /// Idempotents at each level, and every idempotent family compatible
    /// along the whole tower.
    ///
    /// A compatible family is fixed by its top member, and `Fix` carries
    /// idempotents to idempotents, so the coherent families are exactly the
    /// top-level idempotents pushed down.
    pub fn prosoluble_census(self: &Arc<Self>, class_cap: usize) -> Result<CensusReport> {
        let per_level: Vec<Vec<BurnsideElement>> = self
            .levels
            .iter()
            .map(|l| l.burnside().idempotent_census_oracle(class_cap))
            .collect::<Result<_>>()?;
        let mut coherent = Vec::new();
        for e in per_level.last().unwrap() {
            let fam = self.family_from_top(e)?;
            for (i, x) in fam.plain_levels().unwrap().iter().enumerate() {
                if !per_level[i].contains(x) {
                    return Err(Error::Invariant(format!("Fix of an idempotent left the census at level {i}")));
                }
            }
            coherent.push(fam);
        }
        let nontrivial = coherent.iter().any(|f| !f.is_zero() && !f.is_one());
        Ok(CensusReport { per_level: per_level.iter().map(Vec::len).collect(), coherent, nontrivial })
    }

    pub fn prosoluble_census_default(self: &Arc<Self>) -> Result<CensusReport> {
        self.prosoluble_census(DEFAULT_CENSUS_CLASS_CAP)
    }

    /// Recovers, for every pair in the top member's support, the chain of
    /// marker cosets down the tower and checks it against the stored
    /// levels.
    ///
    /// At level `j` the pair `(U, a)` becomes `(U N_j/N_j, aN_j)` when the
    /// kernel `N_j` lies in `U`. The canonical level-`j` pair `(V, b)` with
    /// its conjugator `t` gives back the coset as `t⁻¹bt`; consecutive
    /// cosets must agree under the tower map, every lifted marker must
    /// satisfy `[a, U] ⊆ N_j`, and the signed sum of the pushed pairs must
    /// reproduce the stored level.
    pub fn crossed_family_marker_recovery(&self, family: &CompatibleFamily) -> Result<Vec<MarkerChain>> {
        let xs = family.crossed_levels().ok_or_else(|| Error::IncoherentMarkers {
            level: 0,
            detail: "marker recovery needs a crossed family".into(),
        })?;
        let top = self.top();
        let top_ring = self.levels[top].crossed();
        let gt = self.levels[top].group();
        let top_lattice = top_ring.burnside().lattice();
        let mut chains: Vec<MarkerChain> = xs[top]
            .coeffs()
            .iter()
            .map(|(&i, v)| {
                let pair = top_ring.basis()[i];
                MarkerChain { top_pair: pair, coefficient: v.clone(), links: Vec::new() }
            })
            .collect();
        for j in (0..=top).rev() {
            let proj = self.projection(top, j)?;
            let ring = self.levels[j].crossed();
            let gj = self.levels[j].group();
            let mut expected = ring.zero();
            for chain in &mut chains {
                let u = top_lattice.class_rep(chain.top_pair.class);
                if !proj.kernel().is_subset_of(u) {
                    continue;
                }
                let a = chain.top_pair.marker;
                if let Some(&x) = u.elements().iter().find(|&&x| !proj.kernel().contains(gt.commutator(a, x))) {
                    return Err(Error::IncoherentMarkers {
                        level: j,
                        detail: format!("[{a}, {x}] is not in the level kernel"),
                    });
                }
                let (pair, t) = ring.canonical_pair_with_conjugator(&proj.image(u), proj.apply(a))?;
                let coset = gj.conj(gj.inv(t), pair.marker);
                if let Some(prev) = chain.links.last() {
                    let down = self.projection(prev.level, j)?;
                    if down.apply(prev.coset) != coset {
                        return Err(Error::IncoherentMarkers {
                            level: j,
                            detail: format!("marker coset {} does not reduce to {coset}", prev.coset),
                        });
                    }
                }
                expected = &expected + &ring.pair_element(pair).scale(&chain.coefficient);
                chain.links.push(MarkerLink { level: j, pair, conjugator: t, coset });
            }
            if expected != xs[j] {
                let diff = &xs[j] - &expected;
                let (&bad, _) = diff.coeffs().iter().next().unwrap();
                let b = ring.basis()[bad];
                return Err(Error::IncoherentMarkers {
                    level: j,
                    detail: format!(
                        "pair ({}, {}) is not accounted for by the top level",
                        ring.burnside().lattice().class_id(b.class),
                        b.marker
                    ),
                });
            }
            // Stored markers must centralize their subgroups modulo the
            // kernel once lifted to the top group.
            for (&i, _) in xs[j].coeffs() {
                let b = ring.basis()[i];
                let v = proj.preimage(ring.burnside().lattice().class_rep(b.class));
                let lift = gt.elements().find(|&x| proj.apply(x) == b.marker).unwrap();
                if v.elements().iter().any(|&x| !proj.kernel().contains(gt.commutator(lift, x))) {
                    return Err(Error::IncoherentMarkers { level: j, detail: format!("marker {} does not centralize", b.marker) });
                }
            }
        }
        Ok(chains)
    }
}

/// Subgroups of `A₅` named by isomorphism type; each type is a single
/// conjugacy class, represented canonically.
pub fn a5_subgroup(name: &str) -> Option<Subgroup> {
    let order = match name {
        "1" => 1,
        "C2" => 2,
        "C3" => 3,
        "V4" => 4,
        "C5" => 5,
        "S3" | "D6" => 6,
        "D10" => 10,
        "A4" => 12,
        "A5" => 60,
        _ => return None,
    };
    static LATTICE: OnceLock<SubgroupLattice> = OnceLock::new();
    let l = LATTICE.get_or_init(|| SubgroupLattice::new(Arc::new(builtin("alt:5").unwrap()), 60).unwrap());
    (0..l.num_classes()).find(|&c| l.class_order(c) == order).map(|c| l.class_rep(c).clone())
}

#[derive(Clone, Debug)]
pub struct MarkerLink {
    pub level: usize,
    /// Canonical level pair.
    pub pair: CrossedBasisElement,
    pub conjugator: usize,
    /// The marker coset `aN_j`, as an element of the level group aligned
    /// with the image of the top subgroup.
    pub coset: usize,
}

#[derive(Clone, Debug)]
pub struct MarkerChain {
    pub top_pair: CrossedBasisElement,
    pub coefficient: BigRational,
    /// From the top level down, over the levels where the pair survives.
    pub links: Vec<MarkerLink>,
}

#[derive(Clone, Debug)]
pub struct CensusReport {
    pub per_level: Vec<usize>,
    pub coherent: Vec<CompatibleFamily>,
    pub nontrivial: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flavor {
    Plain,
    Crossed,
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::Plain => "plain",
            Flavor::Crossed => "crossed",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Members {
    Plain(Vec<BurnsideElement>),
    Crossed(Vec<CrossedElement>),
}

/// One element per tower level; compatible when every transition maps
/// each member onto the one below.
#[derive(Clone, Debug)]
pub struct CompatibleFamily {
    tower: Arc<QuotientTower>,
    members: Members,
}

impl PartialEq for CompatibleFamily {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.tower, &other.tower) && self.members == other.members
    }
}

impl CompatibleFamily {
    pub fn plain(tower: Arc<QuotientTower>, levels: Vec<BurnsideElement>) -> Result<Self> {
        if levels.len() != tower.depth() {
            return Err(Error::BadDivisorChain(format!("{} members for {} levels", levels.len(), tower.depth())));
        }
        if levels.iter().zip(tower.levels()).any(|(x, l)| x.ring().group() != l.group()) {
            return Err(Error::GroupMismatch);
        }
        Ok(CompatibleFamily { tower, members: Members::Plain(levels) })
    }

    pub fn crossed(tower: Arc<QuotientTower>, levels: Vec<CrossedElement>) -> Result<Self> {
        if levels.len() != tower.depth() {
            return Err(Error::BadDivisorChain(format!("{} members for {} levels", levels.len(), tower.depth())));
        }
        if levels.iter().zip(tower.levels()).any(|(x, l)| x.ring().group() != l.group()) {
            return Err(Error::GroupMismatch);
        }
        Ok(CompatibleFamily { tower, members: Members::Crossed(levels) })
    }

    pub fn tower(&self) -> &Arc<QuotientTower> {
        &self.tower
    }

    pub fn flavor(&self) -> Flavor {
        match self.members {
            Members::Plain(_) => Flavor::Plain,
            Members::Crossed(_) => Flavor::Crossed,
        }
    }

    pub fn plain_levels(&self) -> Option<&[BurnsideElement]> {
        match &self.members {
            Members::Plain(v) => Some(v),
            Members::Crossed(_) => None,
        }
    }

    pub fn crossed_levels(&self) -> Option<&[CrossedElement]> {
        match &self.members {
            Members::Crossed(v) => Some(v),
            Members::Plain(_) => None,
        }
    }

    /// Checks `transition(x_{i+1}) = x_i` from the top down and returns the
    /// lower level of the first pair that disagrees.
    pub fn first_incompatible_level(&self) -> Result<Option<usize>> {
        let t = &self.tower;
        for i in (0..t.top()).rev() {
            let ok = match &self.members {
                Members::Plain(v) => t.transition(i + 1, i, &v[i + 1])? == v[i],
                Members::Crossed(v) => t.crossed_transition(i + 1, i, &v[i + 1])? == v[i],
            };
            if !ok {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    pub fn is_compatible(&self) -> bool {
        matches!(self.first_incompatible_level(), Ok(None))
    }

    pub fn is_zero(&self) -> bool {
        match &self.members {
            Members::Plain(v) => v.iter().all(|x| x.is_zero()),
            Members::Crossed(v) => v.iter().all(|x| x.is_zero()),
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.members {
            Members::Plain(v) => v.iter().all(|x| *x == x.ring().one()),
            Members::Crossed(v) => v.iter().all(|x| *x == x.ring().one()),
        }
    }

    /// Every member squares to itself.
    pub fn is_idempotent(&self) -> bool {
        match &self.members {
            Members::Plain(v) => v.iter().all(|x| &(x * x) == x),
            Members::Crossed(v) => v.iter().all(|x| &(x * x) == x),
        }
    }

    fn zip_with(
        &self,
        other: &Self,
        plain: impl Fn(&BurnsideElement, &BurnsideElement) -> Result<BurnsideElement>,
        crossed: impl Fn(&CrossedElement, &CrossedElement) -> Result<CrossedElement>,
    ) -> Result<Self> {
        if !Arc::ptr_eq(&self.tower, &other.tower) {
            return Err(Error::GroupMismatch);
        }
        let members = match (&self.members, &other.members) {
            (Members::Plain(a), Members::Plain(b)) => {
                Members::Plain(a.iter().zip(b).map(|(x, y)| plain(x, y)).collect::<Result<_>>()?)
            }
            (Members::Crossed(a), Members::Crossed(b)) => {
                Members::Crossed(a.iter().zip(b).map(|(x, y)| crossed(x, y)).collect::<Result<_>>()?)
            }
            _ => return Err(Error::GroupMismatch),
        };
        Ok(CompatibleFamily { tower: self.tower.clone(), members })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |x, y| x.checked_add(y), |x, y| x.checked_add(y))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |x, y| x.checked_add(&-y), |x, y| x.checked_add(&-y))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |x, y| x.multiply(y), |x, y| x.multiply(y))
    }

    /// Levelwise embedding of a plain family as a crossed one.
    pub fn to_crossed(&self) -> Result<Self> {
        match &self.members {
            Members::Plain(v) => {
                let levels = v
                    .iter()
                    .enumerate()
                    .map(|(i, x)| self.tower.level(i).crossed().embed_burnside(x))
                    .collect::<Result<_>>()?;
                CompatibleFamily::crossed(self.tower.clone(), levels)
            }
            Members::Crossed(_) => Ok(self.clone()),
        }
    }

    /// Replaces the member at one level, for negative controls.
    pub fn with_plain_level(&self, i: usize, x: BurnsideElement) -> Result<Self> {
        let mut v = self.plain_levels().ok_or(Error::GroupMismatch)?.to_vec();
        v[i] = x;
        CompatibleFamily::plain(self.tower.clone(), v)
    }

    pub fn with_crossed_level(&self, i: usize, x: CrossedElement) -> Result<Self> {
        let mut v = self.crossed_levels().ok_or(Error::GroupMismatch)?.to_vec();
        v[i] = x;
        CompatibleFamily::crossed(self.tower.clone(), v)
    }
}

/// `(1/pⁿ)[G/pⁿG] − (1/pⁿ⁺¹)[G/pⁿ⁺¹G]` in `B(ℤ/pᵐ)` for `m ≥ n + 1`,
/// `(1/pⁿ)[G/1]` for `m = n`, and `0` below.
pub fn zp_closed_form(ring: &Arc<BurnsideRing>, p: usize, n: u32, m: u32) -> BurnsideElement {
    let g = ring.group();
    let pn = p.pow(n);
    let frac = |d: usize| BigRational::new(One::one(), d.into());
    if m < n {
        return ring.zero();
    }
    let index_class = |k: usize| ring.class_of_subgroup(&g.generate(&[k % g.order()]));
    if m == n {
        return ring.element([(index_class(pn), frac(pn))]);
    }
    let pn1 = pn * p;
    ring.element([(index_class(pn), frac(pn)), (index_class(pn1), -frac(pn1))])
}

/// Whether `x` has only integer coefficients whose subgroup indices are
/// squarefree.
pub fn has_squarefree_index_support(x: &BurnsideElement) -> bool {
    let ring = x.ring();
    let order = ring.group().order();
    x.coeffs().keys().all(|&c| {
        let index = order / ring.lattice().class_order(c);
        (2..=index).all(|q| q * q > index || index % (q * q) != 0)
    })
}
