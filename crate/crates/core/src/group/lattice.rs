use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use super::{FiniteGroup, Subgroup};
use crate::error::{Error, Result};

/// One conjugacy class of subgroups.
#[derive(Clone, Debug)]
pub struct SubgroupClass {
    /// Index into [`SubgroupLattice::subgroups`] of the canonical representative.
    pub rep: usize,
    pub members: Vec<usize>,
    pub normalizer_order: usize,
    pub is_normal: bool,
}

/// Every subgroup of a finite group, grouped into conjugacy classes.
///
/// Subgroups are sorted by order, then by sorted element list; the canonical
/// representative of a class is its lexicographically smallest member, and
/// classes are numbered in the order of their representatives.
#[derive(Clone, Debug)]
pub struct SubgroupLattice {
    group: Arc<FiniteGroup>,
    subgroups: Vec<Subgroup>,
    class_of: Vec<usize>,
    classes: Vec<SubgroupClass>,
    // t with t·S·t⁻¹ = canonical representative of S's class.
    transporter: Vec<usize>,
    index: HashMap<Vec<usize>, usize>,
    // le[a][b] <=> subgroups[a] ⊆ subgroups[b]
    le: Vec<Vec<bool>>,
}

impl SubgroupLattice {
    /// Enumerates all subgroups, refusing groups above `cap`.
    pub fn new(group: Arc<FiniteGroup>, cap: usize) -> Result<Self> {
        if group.order() > cap {
            return Err(Error::CapExceeded { size: group.order(), cap });
        }
        let mut subgroups = enumerate_subgroups(&group);
        subgroups.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.elements().cmp(b.elements())));
        let index: HashMap<Vec<usize>, usize> =
            subgroups.iter().enumerate().map(|(i, s)| (s.elements().to_vec(), i)).collect();

        let n = subgroups.len();
        let mut class_of = vec![usize::MAX; n];
        let mut transporter = vec![usize::MAX; n];
        let mut classes = Vec::new();
        for i in 0..n {
            if class_of[i] != usize::MAX {
                continue;
            }
            let c = classes.len();
            let mut members = Vec::new();
            let mut stabilizer = 0;
            for g in group.elements() {
                let conj = group.conjugate(g, &subgroups[i]);
                let j = index[conj.elements()];
                if j == i {
                    stabilizer += 1;
                }
                if class_of[j] == usize::MAX {
                    class_of[j] = c;
                    transporter[j] = group.inv(g);
                    members.push(j);
                }
            }
            members.sort_unstable();
            classes.push(SubgroupClass {
                rep: i,
                is_normal: members.len() == 1,
                members,
                normalizer_order: stabilizer,
            });
        }

        let mut le = vec![vec![false; n]; n];
        for a in 0..n {
            for b in a..n {
                let (sa, sb) = (&subgroups[a], &subgroups[b]);
                if sb.order() % sa.order() == 0 && sa.is_subset_of(sb) {
                    le[a][b] = true;
                }
            }
        }
        Ok(SubgroupLattice { group, subgroups, class_of, classes, transporter, index, le })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn subgroups(&self) -> &[Subgroup] {
        &self.subgroups
    }

    pub fn subgroup(&self, i: usize) -> &Subgroup {
        &self.subgroups[i]
    }

    pub fn classes(&self) -> &[SubgroupClass] {
        &self.classes
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    pub fn class_of(&self, subgroup_index: usize) -> usize {
        self.class_of[subgroup_index]
    }

    /// Canonical representative of class `c`.
    pub fn class_rep(&self, c: usize) -> &Subgroup {
        &self.subgroups[self.classes[c].rep]
    }

    pub fn class_order(&self, c: usize) -> usize {
        self.class_rep(c).order()
    }

    pub fn class_id(&self, c: usize) -> String {
        self.class_rep(c).id()
    }

    pub fn class_by_id(&self, id: &str) -> Result<usize> {
        let elems = Subgroup::parse_id(id)?;
        match self.index.get(&elems) {
            Some(&i) if self.classes[self.class_of[i]].rep == i => Ok(self.class_of[i]),
            _ => Err(Error::UnknownClass(id.to_string())),
        }
    }

    /// Index of a subgroup given by its sorted element list.
    pub fn find(&self, elements: &[usize]) -> Option<usize> {
        self.index.get(elements).copied()
    }

    pub fn index_of(&self, s: &Subgroup) -> usize {
        self.index[s.elements()]
    }

    /// Conjugacy class of an arbitrary subgroup.
    pub fn classify(&self, s: &Subgroup) -> usize {
        self.class_of[self.index_of(s)]
    }

    /// An element `t` with `t·S·t⁻¹` equal to the canonical representative.
    pub fn transporter(&self, subgroup_index: usize) -> usize {
        self.transporter[subgroup_index]
    }

    pub fn is_subgroup_of(&self, a: usize, b: usize) -> bool {
        self.le[a][b]
    }

    /// Indices of all subgroups contained in subgroup `h`.
    pub fn below(&self, h: usize) -> Vec<usize> {
        (0..=h).filter(|&k| self.le[k][h]).collect()
    }

    /// `μ(K, H)` for every `K ≤ H` in the full subgroup poset, as
    /// `(subgroup index, value)` pairs.
    pub fn mobius_column(&self, h: usize) -> Vec<(usize, i64)> {
        let below = self.below(h);
        let mut mu: HashMap<usize, i64> = HashMap::new();
        for &k in below.iter().rev() {
            let v = if k == h {
                1
            } else {
                -below.iter().filter(|&&l| l != k && self.le[k][l]).map(|l| mu[l]).sum::<i64>()
            };
            mu.insert(k, v);
        }
        below.into_iter().map(|k| (k, mu[&k])).collect()
    }

    /// Poset Möbius function `μ(K, H)` on actual subgroups.
    pub fn mobius(&self, k: &Subgroup, h: &Subgroup) -> Result<i64> {
        let (ki, hi) = (self.index_of(k), self.index_of(h));
        if !self.le[ki][hi] {
            return Err(Error::NotContained(k.id(), h.id()));
        }
        Ok(self.mobius_column(hi).into_iter().find(|&(x, _)| x == ki).unwrap().1)
    }

    /// Total number of subgroups.
    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }
}

/// Cyclic-extension layering: starting from the cyclic subgroups, each found
/// subgroup `H` is extended by every cyclic subgroup `⟨c⟩ ⊄ H`. When `c`
/// normalizes `H` the extension is the product set `H⟨c⟩`; otherwise the
/// join is closed explicitly, which is what reaches perfect subgroups.
fn enumerate_subgroups(g: &FiniteGroup) -> Vec<Subgroup> {
    let mut cyclic: Vec<(usize, Subgroup)> = Vec::new();
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    for x in g.elements() {
        let c = g.generate(&[x]);
        if seen.insert(c.elements().to_vec()) {
            cyclic.push((x, c));
        }
    }
    // (subgroup, generators)
    let mut found: Vec<(Subgroup, Vec<usize>)> =
        cyclic.iter().map(|(x, c)| (c.clone(), vec![*x])).collect();
    let mut cursor = 0;
    while cursor < found.len() {
        let (h, gens) = found[cursor].clone();
        cursor += 1;
        let mut member = vec![false; g.order()];
        for &x in h.elements() {
            member[x] = true;
        }
        for (c, cs) in &cyclic {
            if member[*c] {
                continue;
            }
            let normalizes = h.elements().iter().all(|&x| member[g.conj(*c, x)]);
            let ext = if normalizes {
                let mut elems: Vec<usize> =
                    cs.elements().iter().flat_map(|&y| h.elements().iter().map(move |&x| (x, y))).map(|(x, y)| g.mul(x, y)).collect();
                elems.sort_unstable();
                elems.dedup();
                Subgroup::from_sorted(elems)
            } else {
                let mut all = gens.clone();
                all.push(*c);
                g.generate(&all)
            };
            if seen.insert(ext.elements().to_vec()) {
                let mut ngens = gens.clone();
                ngens.push(*c);
                found.push((ext, ngens));
            }
        }
    }
    found.into_iter().map(|(s, _)| s).collect()
}
