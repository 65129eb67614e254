use std::collections::{HashMap, VecDeque};

use super::FiniteGroup;
use crate::error::{Error, Result};

/// A permutation of `0..degree` stored as its image list.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Permutation(pub Vec<u32>);

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation((0..degree as u32).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut hit = vec![false; n];
        for &i in &images {
            if i >= n || hit[i] {
                return Err(Error::Parse(format!("not a bijection: {images:?}")));
            }
            hit[i] = true;
        }
        Ok(Permutation(images.into_iter().map(|i| i as u32).collect()))
    }

    /// Product of disjoint or overlapping cycles, applied right to left.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut p = Permutation::identity(degree);
        for cycle in cycles.iter().rev() {
            let mut c = Permutation::identity(degree);
            for (k, &a) in cycle.iter().enumerate() {
                let b = cycle[(k + 1) % cycle.len()];
                if a >= degree || b >= degree {
                    return Err(Error::Parse(format!("point {} out of range for degree {degree}", a.max(b))));
                }
                c.0[a] = b as u32;
            }
            Permutation::from_images(c.0.iter().map(|&x| x as usize).collect())?;
            p = c.compose(&p);
        }
        Ok(p)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&x| self.0[x as usize]).collect())
    }
}

/// Closure of `generators` under composition, breadth first from the
/// identity; indices follow discovery order.
pub fn group_from_permutations(
    degree: usize,
    generators: &[Permutation],
    cap: usize,
    label: impl Into<String>,
) -> Result<FiniteGroup> {
    for g in generators {
        if g.degree() != degree {
            return Err(Error::Parse(format!("generator has degree {}, expected {degree}", g.degree())));
        }
    }
    let id = Permutation::identity(degree);
    let mut index: HashMap<Permutation, usize> = HashMap::from([(id.clone(), 0)]);
    let mut elems = vec![id];
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for g in generators {
            let y = elems[i].compose(g);
            if !index.contains_key(&y) {
                if elems.len() >= cap {
                    return Err(Error::CapExceeded { size: elems.len() + 1, cap });
                }
                index.insert(y.clone(), elems.len());
                queue.push_back(elems.len());
                elems.push(y);
            }
        }
    }
    let n = elems.len();
    let mut mul = Vec::with_capacity(n * n);
    for a in &elems {
        for b in &elems {
            mul.push(index[&a.compose(b)] as u32);
        }
    }
    Ok(FiniteGroup::from_trusted(n, mul, label.into()))
}

/// Parses `"(0 1 2);(0 1)(2 3);deg=4"`: generators separated by `;`, each a
/// product of 0-based cycles, with a `deg=d` entry giving the degree.
pub fn parse_permutation_spec(spec: &str) -> Result<(usize, Vec<Permutation>)> {
    let mut degree = None;
    let mut raw = Vec::new();
    for part in spec.split(';').map(str::trim).filter(|s| !s.is_empty()) {
        if let Some(d) = part.strip_prefix("deg=") {
            degree = Some(d.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad degree '{d}'")))?);
        } else {
            raw.push(parse_cycles(part)?);
        }
    }
    let degree = degree.ok_or_else(|| Error::Parse("permutation spec needs deg=d".into()))?;
    let gens = raw.iter().map(|c| Permutation::from_cycles(degree, c)).collect::<Result<Vec<_>>>()?;
    Ok((degree, gens))
}

fn parse_cycles(s: &str) -> Result<Vec<Vec<usize>>> {
    let mut cycles = Vec::new();
    let mut rest = s.trim();
    while !rest.is_empty() {
        let body = rest
            .strip_prefix('(')
            .ok_or_else(|| Error::Parse(format!("expected '(' in '{s}'")))?;
        let end = body.find(')').ok_or_else(|| Error::Parse(format!("unclosed cycle in '{s}'")))?;
        let cycle = body[..end]
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<usize>().map_err(|_| Error::Parse(format!("bad point '{t}'"))))
            .collect::<Result<Vec<_>>>()?;
        cycles.push(cycle);
        rest = body[end + 1..].trim_start();
    }
    Ok(cycles)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_orders() {
        let (d, gens) = parse_permutation_spec("(0 1 2);(0 1);deg=3").unwrap();
        assert_eq!(group_from_permutations(d, &gens, 200, "s3").unwrap().order(), 6);
        let (d, gens) = parse_permutation_spec("(0 1 2 3 4);(2 3 4);deg=5").unwrap();
        assert_eq!(group_from_permutations(d, &gens, 200, "a5").unwrap().order(), 60);
        let (d, gens) = parse_permutation_spec("(0 1)(2 3);deg=4").unwrap();
        assert_eq!(group_from_permutations(d, &gens, 200, "c2").unwrap().order(), 2);
    }

    #[test]
    fn discovery_order_is_deterministic() {
        let (d, gens) = parse_permutation_spec("(0 1 2);(0 1);deg=3").unwrap();
        let a = group_from_permutations(d, &gens, 200, "s3").unwrap();
        let b = group_from_permutations(d, &gens, 200, "s3").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.identity(), 0);
    }

    #[test]
    fn cap_is_enforced() {
        let (d, gens) = parse_permutation_spec("(0 1 2 3 4);(0 1);deg=5").unwrap();
        assert!(matches!(group_from_permutations(d, &gens, 100, "s5"), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn bad_specs() {
        assert!(parse_permutation_spec("(0 1 2)").is_err());
        assert!(parse_permutation_spec("(0 5);deg=3").is_err());
        assert!(parse_permutation_spec("(0 1;deg=3").is_err());
    }
}
