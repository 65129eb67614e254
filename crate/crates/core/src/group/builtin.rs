use std::fmt;

use super::perm::{group_from_permutations, parse_permutation_spec, Permutation};
use super::{CayleyJson, FiniteGroup, DEFAULT_ELEMENT_CAP};
use crate::error::{Error, Result};

/// A parsed group spec string. `Display` gives the normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupSpec {
    Cyclic(usize),
    Dihedral(usize),
    Sym(usize),
    Alt(usize),
    Quaternion8,
    Product(Box<GroupSpec>, Box<GroupSpec>),
    Perm(String),
    Cayley(String),
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(n) => write!(f, "cyclic:{n}"),
            GroupSpec::Dihedral(n) => write!(f, "dihedral:{n}"),
            GroupSpec::Sym(n) => write!(f, "sym:{n}"),
            GroupSpec::Alt(n) => write!(f, "alt:{n}"),
            GroupSpec::Quaternion8 => write!(f, "quaternion:8"),
            GroupSpec::Product(a, b) => write!(f, "product:{a}×{b}"),
            GroupSpec::Perm(s) => write!(f, "perm:{s}"),
            GroupSpec::Cayley(p) => write!(f, "cayley:{p}"),
        }
    }
}

fn parse_n(s: &str, what: &str) -> Result<usize> {
    s.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad {what} parameter '{s}'")))
}

pub fn parse_group_spec(spec: &str) -> Result<GroupSpec> {
    let spec = spec.trim();
    let (kind, arg) = spec.split_once(':').ok_or_else(|| Error::Parse(format!("group spec '{spec}' lacks ':'")))?;
    match kind {
        "cyclic" => {
            let n = parse_n(arg, "cyclic")?;
            if n == 0 {
                return Err(Error::Parse("cyclic:0".into()));
            }
            Ok(GroupSpec::Cyclic(n))
        }
        "dihedral" => {
            let n = parse_n(arg, "dihedral")?;
            if n == 0 {
                return Err(Error::Parse("dihedral:0".into()));
            }
            Ok(GroupSpec::Dihedral(n))
        }
        "sym" | "alt" => {
            let n = parse_n(arg, kind)?;
            if !(1..=6).contains(&n) {
                return Err(Error::Parse(format!("{kind}:{n} outside 1..=6")));
            }
            Ok(if kind == "sym" { GroupSpec::Sym(n) } else { GroupSpec::Alt(n) })
        }
        "quaternion" => {
            if arg.trim() != "8" {
                return Err(Error::Parse(format!("only quaternion:8 is supported, got '{arg}'")));
            }
            Ok(GroupSpec::Quaternion8)
        }
        "product" => {
            let cut = arg
                .char_indices()
                .filter(|&(_, c)| c == '×' || c == '*')
                .last()
                .ok_or_else(|| Error::Parse(format!("product spec '{arg}' lacks '×'")))?;
            let (left, right) = (&arg[..cut.0], &arg[cut.0 + cut.1.len_utf8()..]);
            let left = if left.contains('×') || left.contains('*') {
                if left.starts_with("product:") {
                    left.to_string()
                } else {
                    format!("product:{left}")
                }
            } else {
                left.to_string()
            };
            Ok(GroupSpec::Product(Box::new(parse_group_spec(&left)?), Box::new(parse_group_spec(right)?)))
        }
        "perm" => {
            parse_permutation_spec(arg)?;
            Ok(GroupSpec::Perm(arg.trim().to_string()))
        }
        "cayley" => Ok(GroupSpec::Cayley(arg.trim().to_string())),
        other => Err(Error::Parse(format!("unknown group family '{other}'"))),
    }
}

impl GroupSpec {
    pub fn build(&self, cap: usize) -> Result<FiniteGroup> {
        let label = self.to_string();
        let check = |n: usize| if n > cap { Err(Error::CapExceeded { size: n, cap }) } else { Ok(()) };
        let g = match self {
            GroupSpec::Cyclic(n) => {
                check(*n)?;
                let n = *n;
                let mul = (0..n * n).map(|k| ((k / n + k % n) % n) as u32).collect();
                FiniteGroup::from_trusted(n, mul, label)
            }
            GroupSpec::Dihedral(n) => {
                // r^k s^e at index k + n·e.
                let n = *n;
                check(2 * n)?;
                let m = 2 * n;
                let mut mul = Vec::with_capacity(m * m);
                for x in 0..m {
                    let (a, e) = (x % n, x / n);
                    for y in 0..m {
                        let (b, f) = (y % n, y / n);
                        let k = if e == 0 { (a + b) % n } else { (a + n - b) % n };
                        mul.push((k + n * ((e + f) % 2)) as u32);
                    }
                }
                FiniteGroup::from_trusted(m, mul, label)
            }
            GroupSpec::Sym(n) => {
                let n = *n;
                let gens = if n < 2 {
                    vec![]
                } else {
                    vec![
                        Permutation::from_cycles(n, &[(0..n).collect()])?,
                        Permutation::from_cycles(n, &[vec![0, 1]])?,
                    ]
                };
                group_from_permutations(n, &gens, cap, label)?
            }
            GroupSpec::Alt(n) => {
                let n = *n;
                let gens = (2..n).map(|k| Permutation::from_cycles(n, &[vec![0, 1, k]])).collect::<Result<Vec<_>>>()?;
                group_from_permutations(n, &gens, cap, label)?
            }
            GroupSpec::Quaternion8 => quaternion8(label),
            GroupSpec::Product(a, b) => {
                let ga = a.build(cap)?;
                let gb = b.build(cap)?;
                check(ga.order() * gb.order())?;
                FiniteGroup::direct_product(&ga, &gb, label)
            }
            GroupSpec::Perm(s) => {
                let (degree, gens) = parse_permutation_spec(s)?;
                group_from_permutations(degree, &gens, cap, label)?
            }
            GroupSpec::Cayley(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}")))?;
                let json: CayleyJson =
                    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{path}: {e}")))?;
                check(json.order)?;
                let mut g = FiniteGroup::from_cayley_json(&json)?;
                g.set_label(label);
                g
            }
        };
        Ok(g)
    }
}

/// Builds a group from a spec string with the default element cap.
pub fn builtin(spec: &str) -> Result<FiniteGroup> {
    parse_group_spec(spec)?.build(DEFAULT_ELEMENT_CAP)
}

fn quaternion8(label: String) -> FiniteGroup {
    // index = 2·unit + sign, units 1, i, j, k.
    const UNIT: [[(usize, bool); 4]; 4] = [
        [(0, false), (1, false), (2, false), (3, false)],
        [(1, false), (0, true), (3, false), (2, true)],
        [(2, false), (3, true), (0, true), (1, false)],
        [(3, false), (2, false), (1, true), (0, true)],
    ];
    let mut mul = Vec::with_capacity(64);
    for x in 0..8 {
        for y in 0..8 {
            let (u, neg) = UNIT[x / 2][y / 2];
            let sign = (x % 2) ^ (y % 2) ^ usize::from(neg);
            mul.push((2 * u + sign) as u32);
        }
    }
    FiniteGroup::from_trusted(8, mul, label)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_orders() {
        assert_eq!(builtin("cyclic:4").unwrap().order(), 4);
        assert_eq!(builtin("dihedral:4").unwrap().order(), 8);
        assert_eq!(builtin("sym:4").unwrap().order(), 24);
        assert_eq!(builtin("alt:5").unwrap().order(), 60);
        assert_eq!(builtin("alt:2").unwrap().order(), 1);
        assert_eq!(builtin("sym:1").unwrap().order(), 1);
        assert_eq!(builtin("product:alt:5×cyclic:2").unwrap().order(), 120);
        assert_eq!(builtin("product:cyclic:2*cyclic:3*cyclic:2").unwrap().order(), 12);
    }

    #[test]
    fn dihedral_centre_and_quaternion() {
        assert_eq!(builtin("dihedral:4").unwrap().center().order(), 2);
        let q = builtin("quaternion:8").unwrap();
        assert_eq!(q.center().order(), 2);
        assert_eq!((0..8).filter(|&x| q.element_order(x) == 4).count(), 6);
        assert!(!q.is_abelian());
    }

    #[test]
    fn tables_validate() {
        for spec in ["cyclic:6", "dihedral:3", "quaternion:8", "product:sym:3×cyclic:2", "alt:4"] {
            let g = builtin(spec).unwrap();
            let again = FiniteGroup::from_cayley_json(&g.to_cayley_json()).unwrap();
            assert_eq!(again, g, "{spec}");
        }
    }

    #[test]
    fn spec_normal_form_round_trip() {
        for spec in ["cyclic:4", "product:alt:5×cyclic:2", "perm:(0 1 2);(0 1);deg=3", "product:cyclic:2*cyclic:3"] {
            let parsed = parse_group_spec(spec).unwrap();
            assert_eq!(parse_group_spec(&parsed.to_string()).unwrap(), parsed);
        }
    }

    #[test]
    fn parse_errors() {
        for bad in ["cyclic", "cyclic:x", "sym:7", "quaternion:16", "foo:3", "product:cyclic:2"] {
            assert!(matches!(parse_group_spec(bad), Err(Error::Parse(_))), "{bad}");
        }
        assert!(matches!(parse_group_spec("cyclic:300").unwrap().build(200), Err(Error::CapExceeded { .. })));
    }
}
