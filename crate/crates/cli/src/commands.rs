use std::sync::Arc;

use burnside_core::burnside::{BurnsideElement, BurnsideRing, MulPath, DEFAULT_CENSUS_CLASS_CAP};
use burnside_core::crossed::{CrossedElement, CrossedRing, Zeta};
use burnside_core::group::{builtin, lattice_cap, HallElement, HallGroup};
use burnside_core::linalg::{Field, Matrix};
use burnside_core::mackey::{crossed_to_endomorphism, eta, CrossedGSetConcrete, GSet, MackeyFunctorInstance, Representation};
use burnside_core::serial::{
    basis_pair_id, crossed_from_json, crossed_to_json, element_from_json, element_to_json, family_from_json,
    family_to_json, gset_from_json, matrix_csv, table_of_marks_csv, CrossedJson, ElementJson, FamilyJson, GSetJson,
};
use burnside_core::tower::{CompatibleFamily, QuotientTower};
use burnside_core::Error;
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use crate::output::{table, Report};
use crate::{oracle, Failure, FunctorKind, RepKind, TowerAction};

type Outcome = Result<Report, Failure>;

fn ring(spec: &str) -> Result<Arc<BurnsideRing>, Failure> {
    Ok(BurnsideRing::new(Arc::new(builtin(spec)?), lattice_cap())?)
}

/// Inline JSON, or the contents of the named file.
fn read_input(arg: &str) -> Result<String, Failure> {
    let t = arg.trim_start();
    if t.starts_with('{') || t.starts_with('[') {
        return Ok(arg.to_string());
    }
    std::fs::read_to_string(arg).map_err(|e| Failure::Usage(format!("cannot read {arg}: {e}")))
}

fn parse_json<T: DeserializeOwned>(arg: &str) -> Result<T, Failure> {
    let text = read_input(arg)?;
    serde_json::from_str(&text).map_err(|e| Failure::Core(Error::Parse(e.to_string())))
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("plain data serializes")
}

fn element_csv(x: &BurnsideElement) -> String {
    let l = x.ring().lattice();
    let mut s = String::from("class,num,den\n");
    for (&c, v) in x.coeffs() {
        s.push_str(&format!("{},{},{}\n", l.class_id(c), v.numer(), v.denom()));
    }
    s
}

fn crossed_csv(x: &CrossedElement) -> String {
    let mut s = String::from("H,a,num,den\n");
    for t in crossed_to_json(x).coeffs {
        s.push_str(&format!("{},{},{},{}\n", t.h, t.a, t.num, t.den));
    }
    s
}

fn element_report(x: &BurnsideElement) -> Report {
    Report::new(format!("{x}\n"), to_value(&element_to_json(x))).with_csv(element_csv(x))
}

fn crossed_report(x: &CrossedElement) -> Report {
    Report::new(format!("{x}\n"), to_value(&crossed_to_json(x))).with_csv(crossed_csv(x))
}

pub fn tom(spec: &str, slow: bool) -> Outcome {
    let ring = ring(spec)?;
    let l = ring.lattice();
    let n = l.num_classes();
    let (rows, csv) = if slow {
        let rows = oracle::marks_by_fixed_points(&ring)?;
        let header: Vec<String> = (0..n).map(|c| l.class_id(c)).collect();
        let mut csv = header.join(",") + "\n";
        for r in &rows {
            csv.push_str(&r.iter().map(u64::to_string).collect::<Vec<_>>().join(","));
            csv.push('\n');
        }
        (rows, csv)
    } else {
        (ring.table_of_marks().rows(), table_of_marks_csv(l, ring.table_of_marks()))
    };

    let mut header = vec!["K".to_string(), "|K|".to_string()];
    header.extend((0..n).map(|h| format!("H{h}")));
    let cells: Vec<Vec<String>> = rows
        .iter()
        .enumerate()
        .map(|(k, r)| {
            let mut row = vec![k.to_string(), l.class_order(k).to_string()];
            row.extend(r.iter().map(u64::to_string));
            row
        })
        .collect();
    let mut text = format!("table of marks of {}, {n} classes; rows G/K, columns H\n", ring.group().label());
    text.push_str(&table(&header, &cells));
    text.push_str("classes:\n");
    for c in 0..n {
        text.push_str(&format!("  {c}  order {}  {}\n", l.class_order(c), l.class_id(c)));
    }
    let classes: Vec<Value> =
        (0..n).map(|c| json!({"index": c, "id": l.class_id(c), "order": l.class_order(c)})).collect();
    let json = json!({"group": ring.group().label(), "classes": classes, "marks": rows});
    Ok(Report::new(text, json).with_csv(csv))
}

pub fn idem(spec: &str, integral: bool, slow: bool) -> Outcome {
    let ring = ring(spec)?;
    let l = ring.lattice();
    let list: Vec<(usize, BurnsideElement)> = match (integral, slow) {
        (false, false) => ring.gluck_idempotents().into_iter().enumerate().collect(),
        (false, true) => oracle::gluck_by_marks(&ring),
        (true, false) => ring.integral_idempotents(),
        (true, true) => oracle::integral_by_census(&ring, DEFAULT_CENSUS_CLASS_CAP)?,
    };
    let kind = if integral { "integral" } else { "rational" };
    let mut text = format!("{} {kind} primitive idempotents of {}\n", list.len(), ring.group().label());
    let mut csv = String::from("idempotent,class,num,den\n");
    let mut entries = Vec::new();
    for (c, e) in &list {
        text.push_str(&format!("e[{}] = {e}\n", l.class_id(*c)));
        for (&k, v) in e.coeffs() {
            csv.push_str(&format!("{},{},{},{}\n", l.class_id(*c), l.class_id(k), v.numer(), v.denom()));
        }
        entries.push(json!({"class": l.class_id(*c), "element": to_value(&element_to_json(e))}));
    }
    let json = json!({"group": ring.group().label(), "kind": kind, "idempotents": entries});
    Ok(Report::new(text, json).with_csv(csv))
}

pub fn mul(spec: &str, x: &str, y: &str, slow: bool) -> Outcome {
    let ring = ring(spec)?;
    let x = element_from_json(&parse_json::<ElementJson>(x)?, &ring)?;
    let y = element_from_json(&parse_json::<ElementJson>(y)?, &ring)?;
    let path = if slow { MulPath::DoubleCoset } else { MulPath::Marks };
    Ok(element_report(&ring.multiply_with(&x, &y, path)?))
}

fn crossed_ring(spec: &str) -> Result<Arc<CrossedRing>, Failure> {
    Ok(CrossedRing::new(ring(spec)?))
}

pub fn crossed_basis(spec: &str, slow: bool) -> Outcome {
    let ring = crossed_ring(spec)?;
    let l = ring.burnside().lattice();
    let g = ring.group();
    let basis = if slow { oracle::crossed_basis_exhaustive(&ring)? } else { ring.basis().to_vec() };
    let header: Vec<String> = ["index", "H", "|H|", "a", "order(a)"].map(String::from).to_vec();
    let mut rows = Vec::new();
    let mut entries = Vec::new();
    let mut csv = String::from("index,H,a\n");
    for (i, b) in basis.iter().enumerate() {
        rows.push(vec![
            i.to_string(),
            l.class_id(b.class),
            l.class_order(b.class).to_string(),
            b.marker.to_string(),
            g.element_order(b.marker).to_string(),
        ]);
        csv.push_str(&format!("{i},{},{}\n", l.class_id(b.class), b.marker));
        entries.push(json!({"index": i, "H": l.class_id(b.class), "a": b.marker}));
    }
    let text = format!("crossed Burnside ring of {}: rank {}\n{}", g.label(), basis.len(), table(&header, &rows));
    let json = json!({"group": g.label(), "rank": basis.len(), "basis": entries});
    Ok(Report::new(text, json).with_csv(csv))
}

pub fn crossed_mul(spec: &str, x: &str, y: &str, slow: bool) -> Outcome {
    let ring = crossed_ring(spec)?;
    let x = crossed_from_json(&parse_json::<CrossedJson>(x)?, &ring)?;
    let y = crossed_from_json(&parse_json::<CrossedJson>(y)?, &ring)?;
    let z = if slow { oracle::crossed_product_concrete(&ring, &x, &y)? } else { ring.multiply(&x, &y)? };
    Ok(crossed_report(&z))
}

fn zeta_of(ring: &Arc<CrossedRing>, x: &CrossedElement, slow: bool) -> Result<Zeta, Failure> {
    let z = if slow { oracle::zeta_concrete(ring, x)? } else { ring.zeta(x)? };
    if !ring.zeta_is_central(&z) {
        return Err(Error::Invariant("zeta value is not central".into()).into());
    }
    Ok(z)
}

pub fn zeta(spec: &str, x: Option<&str>, slow: bool) -> Outcome {
    let ring = crossed_ring(spec)?;
    let l = ring.burnside().lattice();
    let g = ring.group();
    match x {
        Some(x) => {
            let x = crossed_from_json(&parse_json::<CrossedJson>(x)?, &ring)?;
            let z = zeta_of(&ring, &x, slow)?;
            let mut text = String::new();
            let mut csv = String::from("U,g,coeff\n");
            let mut comps = Vec::new();
            for (u, comp) in z.components.iter().enumerate() {
                let terms: Vec<String> = comp.iter().map(|(e, v)| format!("{v}·g{e}")).collect();
                let shown = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
                text.push_str(&format!("z[{}] = {shown}\n", l.class_id(u)));
                for (e, v) in comp {
                    csv.push_str(&format!("{},{e},{v}\n", l.class_id(u)));
                }
                let terms: Vec<Value> = comp.iter().map(|(e, v)| json!({"g": e, "coeff": v.to_string()})).collect();
                comps.push(json!({"U": l.class_id(u), "terms": terms}));
            }
            Ok(Report::new(text, json!({"group": g.label(), "components": comps})).with_csv(csv))
        }
        None => {
            let matrix = if slow {
                let n = g.order();
                (0..ring.rank())
                    .map(|i| {
                        let z = zeta_of(&ring, &ring.basis_element(i), true)?;
                        let mut row = vec![num_bigint::BigInt::from(0); l.num_classes() * n];
                        for (u, comp) in z.components.iter().enumerate() {
                            for (&e, v) in comp {
                                row[u * n + e] = v.clone();
                            }
                        }
                        Ok(row)
                    })
                    .collect::<Result<Vec<_>, Failure>>()?
            } else {
                ring.zeta_matrix()
            };
            let rank = burnside_core::linalg::integer_rank(&matrix);
            let cols = l.num_classes() * g.order();
            let text = format!(
                "zeta on the crossed basis of {}: {} rows, {cols} columns, rank {rank}{}\n",
                g.label(),
                matrix.len(),
                if rank == matrix.len() { " (injective)" } else { "" }
            );
            let mut csv = String::new();
            for r in &matrix {
                csv.push_str(&r.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","));
                csv.push('\n');
            }
            let rows: Vec<String> = ring.basis().iter().map(|b| basis_pair_id(&ring, b)).collect();
            let entries: Vec<Vec<String>> = matrix.iter().map(|r| r.iter().map(|v| v.to_string()).collect()).collect();
            let json = json!({"group": g.label(), "rank": rank, "rows": rows, "columns": cols, "matrix": entries});
            Ok(Report::new(text, json).with_csv(csv))
        }
    }
}

fn family_report(f: &CompatibleFamily) -> Report {
    let mut text = format!("{} family on {}\n", f.flavor(), f.tower().spec());
    match (f.plain_levels(), f.crossed_levels()) {
        (Some(xs), _) => xs.iter().enumerate().for_each(|(i, x)| text.push_str(&format!("level {i}: {x}\n"))),
        (_, Some(xs)) => xs.iter().enumerate().for_each(|(i, x)| text.push_str(&format!("level {i}: {x}\n"))),
        _ => {}
    }
    Report::new(text, to_value(&family_to_json(f)))
}

pub fn tower(spec: &str, action: &TowerAction, slow: bool) -> Outcome {
    let t = QuotientTower::from_spec(spec)?;
    match action {
        TowerAction::Describe => {
            let header: Vec<String> = ["level", "group", "order", "classes"].map(String::from).to_vec();
            let mut rows = Vec::new();
            let mut levels = Vec::new();
            for (i, level) in t.levels().iter().enumerate() {
                let g = level.group();
                let classes = level.burnside().rank();
                rows.push(vec![i.to_string(), g.label().to_string(), g.order().to_string(), classes.to_string()]);
                levels.push(json!({"level": i, "group": g.label(), "order": g.order(), "classes": classes}));
            }
            let text = format!("tower {}, depth {}\n{}", t.spec(), t.depth(), table(&header, &rows));
            Ok(Report::new(text, json!({"tower": t.spec().to_string(), "levels": levels})))
        }
        TowerAction::Idem { subgroup } => {
            let fam = if slow {
                let levels = (0..t.depth())
                    .map(|i| {
                        let ring = t.level(i).burnside();
                        Ok(match t.resolve_subgroup(subgroup, i)? {
                            Some(h) => {
                                let c = ring.lattice().classify(&h);
                                ring.from_marks(&burnside_core::burnside::MarkVector::indicator(ring.rank(), c))
                            }
                            None => ring.zero(),
                        })
                    })
                    .collect::<Result<Vec<_>, Error>>()?;
                CompatibleFamily::plain(t.clone(), levels)?
            } else {
                t.idempotent_family(subgroup)?
            };
            if let Some(i) = fam.first_incompatible_level()? {
                return Err(Error::Invariant(format!("idempotent family is incompatible at level {i}")).into());
            }
            Ok(family_report(&fam))
        }
        TowerAction::Census => {
            let (per_level, coherent) = if slow {
                oracle::tower_census_boolean(&t)?
            } else {
                let r = t.prosoluble_census_default()?;
                (r.per_level, r.coherent)
            };
            let nontrivial = coherent.iter().any(|f| !f.is_zero() && !f.is_one());
            let mut families: Vec<Value> = coherent.iter().map(|f| to_value(&family_to_json(f))).collect();
            families.sort_by_key(|v| v.to_string());
            let mut text = format!("idempotent census of {}\n", t.spec());
            for (i, n) in per_level.iter().enumerate() {
                text.push_str(&format!("level {i}: {n} idempotents\n"));
            }
            text.push_str(&format!(
                "{} coherent families; {}\n",
                families.len(),
                if nontrivial { "some are nontrivial" } else { "only 0 and 1" }
            ));
            let json = json!({"tower": t.spec().to_string(), "per_level": per_level, "nontrivial": nontrivial, "coherent": families});
            Ok(Report::new(text, json))
        }
        TowerAction::Check { family } => {
            let fam = family_from_json(&parse_json::<FamilyJson>(family)?, &t)?;
            let bad = if slow { oracle::first_incompatible_level(&fam)? } else { fam.first_incompatible_level()? };
            let text = match bad {
                None => format!("compatible across all {} levels\n", t.depth()),
                Some(i) => format!("incompatible: level {} does not map to level {i}\n", i + 1),
            };
            let json = json!({"tower": t.spec().to_string(), "compatible": bad.is_none(), "first_incompatible_level": bad});
            Ok(Report::new(text, json))
        }
        TowerAction::Markers { family } => markers(&t, &parse_json::<FamilyJson>(family)?, slow),
    }
}

/// One chain per top pair: `(level, canonical pair, marker coset)` from
/// the top down.
fn markers(t: &Arc<QuotientTower>, json: &FamilyJson, slow: bool) -> Outcome {
    let fam = family_from_json(json, t)?;
    // The checks live in the library; the slow path only recomputes the
    // cosets by projecting the top marker.
    let chains = t.crossed_family_marker_recovery(&fam)?;
    let top = t.top();
    let top_ring = t.level(top).crossed();
    let mut out: Vec<(String, BigRational, Vec<(usize, String, usize)>)> = Vec::new();
    for chain in &chains {
        let links = if slow {
            let u = top_ring.burnside().lattice().class_rep(chain.top_pair.class);
            let mut links = Vec::new();
            for j in (0..=top).rev() {
                let proj = t.projection(top, j)?;
                if proj.kernel().is_subset_of(u) {
                    let ring = t.level(j).crossed();
                    let pair = ring.canonical_pair(&proj.image(u), proj.apply(chain.top_pair.marker))?;
                    links.push((j, basis_pair_id(ring, &pair), proj.apply(chain.top_pair.marker)));
                }
            }
            links
        } else {
            chain.links.iter().map(|k| (k.level, basis_pair_id(t.level(k.level).crossed(), &k.pair), k.coset)).collect()
        };
        out.push((basis_pair_id(top_ring, &chain.top_pair), chain.coefficient.clone(), links));
    }
    let mut text = format!("{} marker chains on {}\n", out.len(), t.spec());
    let mut entries = Vec::new();
    for (top_id, coeff, links) in &out {
        text.push_str(&format!("{coeff} × {top_id}\n"));
        for (level, pair, coset) in links {
            text.push_str(&format!("  level {level}: {pair}, coset {coset}\n"));
        }
        let links: Vec<Value> =
            links.iter().map(|(level, pair, coset)| json!({"level": level, "pair": pair, "coset": coset})).collect();
        entries.push(json!({"top": top_id, "coefficient": coeff.to_string(), "links": links}));
    }
    Ok(Report::new(text, json!({"tower": t.spec().to_string(), "chains": entries})))
}

fn parse_field(p: u64) -> Result<Field, Failure> {
    if p == 0 {
        Ok(Field::Rational)
    } else {
        Ok(Field::prime(p)?)
    }
}

/// `G/<id>` terms joined by `+`, or G-set JSON.
fn parse_gset(arg: &str, ring: &Arc<BurnsideRing>) -> Result<Arc<GSet>, Failure> {
    let g = ring.group();
    if arg.trim_start().starts_with('{') || arg.ends_with(".json") {
        return Ok(Arc::new(gset_from_json(&parse_json::<GSetJson>(arg)?, Some(g))?));
    }
    let mut acc = Arc::new(GSet::empty(g.clone()));
    for term in arg.split('+') {
        let id = term
            .trim()
            .strip_prefix("G/")
            .ok_or_else(|| Failure::Usage(format!("expected G/<class id>, got {term:?}")))?;
        let l = ring.lattice();
        let orbit = Arc::new(GSet::from_subgroup(g.clone(), l.class_rep(l.class_by_id(id)?))?);
        acc = GSet::disjoint_union(&acc, &orbit)?.0;
    }
    Ok(acc)
}

#[allow(clippy::too_many_arguments)]
pub fn mackey(
    spec: &str,
    functor: FunctorKind,
    field: u64,
    rep: RepKind,
    y: &str,
    pair: Option<&str>,
    crossed: Option<&str>,
    slow: bool,
) -> Outcome {
    let field = parse_field(field)?;
    let cring = crossed_ring(spec)?;
    let ring = cring.burnside().clone();
    let g = ring.group().clone();
    let y = parse_gset(y, &ring)?;
    let representation = || match rep {
        RepKind::Regular => Representation::regular(g.clone(), field.clone()),
        RepKind::Trivial => Representation::trivial(g.clone(), field.clone(), 1),
    };
    let m = match functor {
        FunctorKind::Burnside => MackeyFunctorInstance::burnside_over(ring.clone(), field.clone()),
        FunctorKind::FixedPoint => MackeyFunctorInstance::fixed_point(representation()),
        FunctorKind::FixedQuotient => MackeyFunctorInstance::fixed_quotient(representation()),
    };
    let dim = m.dim(&y)?;
    let head = format!("{} functor of {} over {field}, |Y| = {}, dim M(Y) = {dim}\n", m.name(), g.label(), y.len());
    let base = json!({"group": g.label(), "functor": m.name(), "field": field.to_string(), "points": y.len(), "dim": dim});

    let l = ring.lattice();
    let matrix: Matrix = match (pair, crossed) {
        (None, None) => return Ok(Report::new(head, base)),
        (Some(p), _) => {
            let (id, a) = p.rsplit_once('@').ok_or_else(|| Failure::Usage(format!("expected <class id>@<marker>, got {p:?}")))?;
            let a: usize = a.parse().map_err(|_| Failure::Usage(format!("bad marker {a:?}")))?;
            if a >= g.order() {
                return Err(Failure::Usage(format!("marker {a} out of range")));
            }
            let h = l.class_rep(l.class_by_id(id)?);
            if slow {
                eta(&CrossedGSetConcrete::from_pair(g.clone(), h, a)?, &m, &y)?
            } else {
                if h.elements().iter().any(|&x| g.mul(a, x) != g.mul(x, a)) {
                    return Err(Error::InvalidAction(format!("marker {a} does not centralize {id}")).into());
                }
                crossed_to_endomorphism(&cring.pair_element(cring.canonical_pair(h, a)?), &m, &y)?
            }
        }
        (None, Some(c)) => {
            let json = parse_json::<CrossedJson>(c)?;
            if slow {
                // Acts term by term with the pairs as written, not canonicalized.
                let mut total = Matrix::zeros(&field, dim, dim);
                for t in &json.coeffs {
                    let h = l.class_rep(l.class_by_id(&t.h)?);
                    let r: BigRational = format!("{}/{}", t.num, t.den)
                        .parse()
                        .map_err(|_| Failure::Core(Error::Parse(format!("bad coefficient {}/{}", t.num, t.den))))?;
                    let e = eta(&CrossedGSetConcrete::from_pair(g.clone(), h, t.a)?, &m, &y)?;
                    total = total.add(&e.scale(&field.embed(&r)?));
                }
                total
            } else {
                crossed_to_endomorphism(&crossed_from_json(&json, &cring)?, &m, &y)?
            }
        }
    };
    let header: Vec<String> = (0..matrix.cols()).map(|c| format!("c{c}")).collect();
    let rows: Vec<Vec<String>> = (0..matrix.rows()).map(|r| matrix.row(r).iter().map(|v| v.to_string()).collect()).collect();
    let text = format!("{head}endomorphism of M(Y):\n{}", table(&header, &rows));
    let mut json = base;
    json["matrix"] = to_value(&rows);
    Ok(Report::new(text, json).with_csv(matrix_csv(&matrix)))
}

fn word(h: &HallGroup, x: &HallElement) -> String {
    let mut parts = Vec::new();
    for i in h.generator_indices() {
        let e = x.a[(i + h.radius() as isize) as usize];
        if e != 0 {
            parts.push(format!("g{i}^{e}"));
        }
    }
    for j in h.central_indices() {
        let e = x.b[(j + h.radius() as isize - 1) as usize];
        if e != 0 {
            parts.push(format!("z{j}^{e}"));
        }
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("·")
    }
}

pub fn hall(p: u64, n: usize, samples: usize, seed: u64, slow: bool) -> Outcome {
    const RELATION_SAMPLES: usize = 200;
    let h = HallGroup::new(p, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let all = if slow { Some(oracle::hall_elements(&h)?) } else { None };
    let orbit_and_log = |w: &HallElement| -> Result<(usize, usize), Failure> {
        Ok(match &all {
            Some(all) => oracle::hall_orbit_and_centralizer(&h, all, w)?,
            None => (h.conjugacy_class(w).len(), h.centralizer_log_order(w)),
        })
    };

    let id = h.identity();
    let mut exponent = true;
    let mut class_two = true;
    for _ in 0..RELATION_SAMPLES {
        let (x, y, z) = (h.random_element(&mut rng), h.random_element(&mut rng), h.random_element(&mut rng));
        exponent &= h.pow(&x, h.p()) == id;
        class_two &= h.commutator(&h.commutator(&x, &y), &z) == id;
    }
    let mut adjacency = true;
    for i in h.generator_indices() {
        for j in h.generator_indices() {
            let c = h.commutator(&h.generator(i), &h.generator(j));
            adjacency &= h.is_central(&c) && ((i - j).abs() == 1) == (c != id);
        }
    }

    let mut interior = Vec::new();
    let mut text = format!("Hall group p={p}, n={n}: |G| = {p}^{}\n", h.log_p_order());
    text.push_str(&format!("exponent {p}: {exponent}\nclass 2: {class_two}\nadjacent generators only: {adjacency}\n"));
    let expected = (p * p) as usize;
    for i in -(n as isize - 1)..=(n as isize - 1) {
        let (size, _) = orbit_and_log(&h.generator(i))?;
        text.push_str(&format!("class of g{i}: {size} elements (expected {expected})\n"));
        interior.push(json!({"i": i, "size": size, "expected": expected}));
    }

    let mut sampled = Vec::new();
    let mut consistent = 0;
    let mut first_bad: Option<String> = None;
    let order = h.order();
    for _ in 0..samples {
        let w = h.random_interior_element(&mut rng);
        let (orbit, true_log) = orbit_and_log(&w)?;
        let formula = h.claimed_centralizer(&w);
        let ok = orbit as u128 * (p as u128).pow(formula.log_p_order as u32) == order;
        if ok {
            consistent += 1;
        } else if first_bad.is_none() {
            first_bad = Some(format!(
                "{}: support {:?}, |orbit| = {orbit}, formula gives |C| = {p}^{}, true |C| = {p}^{true_log}",
                word(&h, &w),
                h.support(&w),
                formula.log_p_order
            ));
        }
        sampled.push(json!({
            "word": word(&h, &w),
            "support": h.support(&w),
            "orbit": orbit,
            "formula_log_p": formula.log_p_order,
            "true_log_p": true_log,
            "orbit_stabilizer": ok,
        }));
    }
    text.push_str(&format!(
        "centralizer formula <g_l : |l - i| > 1 for i in supp w>·Z matches orbit-stabilizer on {consistent}/{samples} interior words\n"
    ));
    if let Some(bad) = &first_bad {
        text.push_str(&format!("first failure: {bad}\n"));
    }
    let json = json!({
        "p": p,
        "n": n,
        "log_p_order": h.log_p_order(),
        "exponent_p": exponent,
        "class_two": class_two,
        "adjacent_only": adjacency,
        "interior_classes": interior,
        "samples": sampled,
        "formula_consistent": consistent,
    });
    Ok(Report::new(text, json))
}
