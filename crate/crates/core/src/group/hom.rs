use std::sync::Arc;

use super::{FiniteGroup, Subgroup};
use crate::error::{Error, Result};

/// A surjective homomorphism between explicit finite groups, stored as an
/// index table.
#[derive(Clone, Debug)]
pub struct Surjection {
    source: Arc<FiniteGroup>,
    target: Arc<FiniteGroup>,
    map: Vec<usize>,
    kernel: Subgroup,
}

impl Surjection {
    pub fn new(source: Arc<FiniteGroup>, target: Arc<FiniteGroup>, map: Vec<usize>) -> Result<Self> {
        if map.len() != source.order() {
            return Err(Error::InvalidAction(format!(
                "map has {} entries for a group of order {}",
                map.len(),
                source.order()
            )));
        }
        if let Some(&bad) = map.iter().find(|&&y| y >= target.order()) {
            return Err(Error::InvalidAction(format!("image {bad} out of range")));
        }
        for a in source.elements() {
            for b in source.elements() {
                if map[source.mul(a, b)] != target.mul(map[a], map[b]) {
                    return Err(Error::InvalidAction(format!("not a homomorphism at ({a}, {b})")));
                }
            }
        }
        let mut hit = vec![false; target.order()];
        for &y in &map {
            hit[y] = true;
        }
        if let Some(miss) = hit.iter().position(|h| !h) {
            return Err(Error::InvalidAction(format!("element {miss} of the target is not hit")));
        }
        let kernel = Subgroup::from_sorted(source.elements().filter(|&g| map[g] == target.identity()).collect());
        Ok(Surjection { source, target, map, kernel })
    }

    /// The quotient `G/N`, cosets numbered by their smallest element.
    pub fn quotient(g: Arc<FiniteGroup>, n: &Subgroup) -> Result<Self> {
        n.validate(&g)?;
        if !g.is_normal(n) {
            return Err(Error::NotNormal(n.id()));
        }
        let (reps, which) = g.left_cosets(n);
        let m = reps.len();
        let mut mul = Vec::with_capacity(m * m);
        for &a in &reps {
            for &b in &reps {
                mul.push(which[g.mul(a, b)] as u32);
            }
        }
        let label = format!("{}/{}", g.label(), n.id());
        let target = Arc::new(FiniteGroup::from_trusted(m, mul, label));
        Ok(Surjection { source: g, target, map: which, kernel: n.clone() })
    }

    pub fn source(&self) -> &Arc<FiniteGroup> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteGroup> {
        &self.target
    }

    #[inline]
    pub fn apply(&self, g: usize) -> usize {
        self.map[g]
    }

    pub fn table(&self) -> &[usize] {
        &self.map
    }

    pub fn kernel(&self) -> &Subgroup {
        &self.kernel
    }

    pub fn image(&self, s: &Subgroup) -> Subgroup {
        let mut e: Vec<usize> = s.elements().iter().map(|&x| self.map[x]).collect();
        e.sort_unstable();
        e.dedup();
        Subgroup::from_sorted(e)
    }

    pub fn preimage(&self, s: &Subgroup) -> Subgroup {
        Subgroup::from_sorted(self.source.elements().filter(|&g| s.contains(self.map[g])).collect())
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Surjection) -> Surjection {
        assert!(Arc::ptr_eq(&self.target, &other.source) || *self.target == *other.source);
        let map: Vec<usize> = self.map.iter().map(|&x| other.map[x]).collect();
        let kernel = Subgroup::from_sorted(self.source.elements().filter(|&g| map[g] == other.target.identity()).collect());
        Surjection { source: self.source.clone(), target: other.target.clone(), map, kernel }
    }

    pub fn identity(g: Arc<FiniteGroup>) -> Surjection {
        let map = g.elements().collect();
        let kernel = g.trivial_subgroup();
        Surjection { source: g.clone(), target: g, map, kernel }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::builtin;

    #[test]
    fn quotient_of_s4_by_v4() {
        let g = Arc::new(builtin("sym:4").unwrap());
        let v4 = g.derived_series()[2].clone();
        let q = Surjection::quotient(g.clone(), &v4).unwrap();
        assert_eq!(q.target().order(), 6);
        assert!(!q.target().is_abelian());
        assert_eq!(q.kernel(), &v4);
        // the table re-validates as a homomorphism
        Surjection::new(g, q.target().clone(), q.table().to_vec()).unwrap();
    }

    #[test]
    fn quotient_needs_normal() {
        let g = Arc::new(builtin("sym:3").unwrap());
        let t = (0..6).find(|&x| g.element_order(x) == 2).unwrap();
        let c2 = g.generate(&[t]);
        assert!(matches!(Surjection::quotient(g, &c2), Err(Error::NotNormal(_))));
    }

    #[test]
    fn rejects_non_homomorphism() {
        let g = Arc::new(builtin("cyclic:4").unwrap());
        let t = Arc::new(builtin("cyclic:2").unwrap());
        assert!(Surjection::new(g.clone(), t.clone(), vec![0, 1, 1, 0]).is_err());
        assert!(Surjection::new(g, t, vec![0, 1, 0, 1]).is_ok());
    }
}
