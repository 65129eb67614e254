//! JSON and CSV forms of the computed objects.
//!
//! Rationals are written as separate numerator and denominator strings.
//! Subgroup classes are named by the hyphen-joined element indices of their
//! canonical representative, which depend on the group's element ordering.

use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::burnside::{BurnsideElement, BurnsideRing, TableOfMarks};
use crate::crossed::{CrossedBasisElement, CrossedElement, CrossedRing};
use crate::error::{Error, Result};
use crate::group::{parse_group_spec, FiniteGroup, SubgroupLattice};
use crate::linalg::Matrix;
use crate::mackey::GSet;
use crate::tower::{CompatibleFamily, Flavor, QuotientTower};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementJson {
    pub group: String,
    pub coeffs: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub class: String,
    pub num: String,
    pub den: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossedJson {
    pub group: String,
    pub coeffs: Vec<CrossedTermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossedTermJson {
    #[serde(rename = "H")]
    pub h: String,
    pub a: usize,
    pub num: String,
    pub den: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyJson {
    pub tower: String,
    pub flavor: String,
    pub levels: Vec<serde_json::Value>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GSetJson {
    pub group: String,
    pub points: usize,
    pub action: Vec<Vec<usize>>,
}

fn parse_rational(num: &str, den: &str) -> Result<BigRational> {
    let n = BigInt::from_str(num).map_err(|_| Error::Parse(format!("bad numerator {num:?}")))?;
    let d = BigInt::from_str(den).map_err(|_| Error::Parse(format!("bad denominator {den:?}")))?;
    if d.is_zero() {
        return Err(Error::Parse("zero denominator".into()));
    }
    Ok(BigRational::new(n, d))
}

fn check_group(label: &str, g: &FiniteGroup) -> Result<()> {
    if label == g.label() {
        Ok(())
    } else {
        Err(Error::GroupMismatch)
    }
}

pub fn element_to_json(x: &BurnsideElement) -> ElementJson {
    let l = x.ring().lattice();
    ElementJson {
        group: x.ring().group().label().to_string(),
        coeffs: x
            .coeffs()
            .iter()
            .map(|(&c, v)| TermJson { class: l.class_id(c), num: v.numer().to_string(), den: v.denom().to_string() })
            .collect(),
    }
}

pub fn element_from_json(json: &ElementJson, ring: &Arc<BurnsideRing>) -> Result<BurnsideElement> {
    check_group(&json.group, ring.group())?;
    let terms = json
        .coeffs
        .iter()
        .map(|t| Ok((ring.lattice().class_by_id(&t.class)?, parse_rational(&t.num, &t.den)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ring.element(terms))
}

pub fn crossed_to_json(x: &CrossedElement) -> CrossedJson {
    let ring = x.ring();
    let l = ring.burnside().lattice();
    CrossedJson {
        group: ring.group().label().to_string(),
        coeffs: x
            .coeffs()
            .iter()
            .map(|(&i, v)| {
                let b = ring.basis()[i];
                CrossedTermJson { h: l.class_id(b.class), a: b.marker, num: v.numer().to_string(), den: v.denom().to_string() }
            })
            .collect(),
    }
}

/// Reads a crossed element; pairs need not be canonical, they are
/// canonicalized against the class representative named by `H`.
pub fn crossed_from_json(json: &CrossedJson, ring: &Arc<CrossedRing>) -> Result<CrossedElement> {
    check_group(&json.group, ring.group())?;
    let l = ring.burnside().lattice();
    let terms = json
        .coeffs
        .iter()
        .map(|t| {
            let class = l.class_by_id(&t.h)?;
            if t.a >= ring.group().order() {
                return Err(Error::Parse(format!("marker {} out of range", t.a)));
            }
            let pair = ring.canonical_pair(l.class_rep(class), t.a)?;
            let i = ring.basis_index(&pair).expect("canonical pairs are basis pairs");
            Ok((i, parse_rational(&t.num, &t.den)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ring.element(terms))
}

pub fn basis_pair_id(ring: &CrossedRing, b: &CrossedBasisElement) -> String {
    format!("{}@{}", ring.burnside().lattice().class_id(b.class), b.marker)
}

pub fn family_to_json(f: &CompatibleFamily) -> FamilyJson {
    let levels: serde_json::Result<Vec<serde_json::Value>> = match f.flavor() {
        Flavor::Plain => f.plain_levels().unwrap().iter().map(|x| serde_json::to_value(element_to_json(x))).collect(),
        Flavor::Crossed => f.crossed_levels().unwrap().iter().map(|x| serde_json::to_value(crossed_to_json(x))).collect(),
    };
    FamilyJson {
        tower: f.tower().spec().to_string(),
        flavor: f.flavor().to_string(),
        levels: levels.expect("plain data serializes"),
    }
}

pub fn family_from_json(json: &FamilyJson, tower: &Arc<QuotientTower>) -> Result<CompatibleFamily> {
    if json.tower != tower.spec().to_string() {
        return Err(Error::GroupMismatch);
    }
    if json.levels.len() != tower.depth() {
        return Err(Error::Parse(format!("{} levels for a tower of depth {}", json.levels.len(), tower.depth())));
    }
    match json.flavor.as_str() {
        "plain" => {
            let levels = json
                .levels
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    let e: ElementJson = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
                    element_from_json(&e, tower.level(i).burnside())
                })
                .collect::<Result<_>>()?;
            CompatibleFamily::plain(tower.clone(), levels)
        }
        "crossed" => {
            let levels = json
                .levels
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    let e: CrossedJson = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
                    crossed_from_json(&e, tower.level(i).crossed())
                })
                .collect::<Result<_>>()?;
            CompatibleFamily::crossed(tower.clone(), levels)
        }
        other => Err(Error::Parse(format!("unknown flavor {other:?}"))),
    }
}

pub fn gset_to_json(x: &GSet) -> GSetJson {
    GSetJson { group: x.group().label().to_string(), points: x.len(), action: x.action_rows() }
}

/// Reads a G-set, building its group from the spec when `group` is `None`.
pub fn gset_from_json(json: &GSetJson, group: Option<&Arc<FiniteGroup>>) -> Result<GSet> {
    let g = match group {
        Some(g) => {
            check_group(&json.group, g)?;
            g.clone()
        }
        None => Arc::new(parse_group_spec(&json.group)?.build(crate::group::DEFAULT_ELEMENT_CAP)?),
    };
    GSet::new(g, json.points, &json.action)
}

/// Header of class ids, then one row per transitive G-set `G/K`, giving
/// `|(G/K)^H|` for every class `H`.
pub fn table_of_marks_csv(lattice: &SubgroupLattice, table: &TableOfMarks) -> String {
    let header: Vec<String> = (0..lattice.num_classes()).map(|c| lattice.class_id(c)).collect();
    let mut s = header.join(",");
    s.push('\n');
    for row in table.rows() {
        let cells: Vec<String> = row.iter().map(u64::to_string).collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}

pub fn matrix_csv(m: &Matrix) -> String {
    m.to_csv()
}
