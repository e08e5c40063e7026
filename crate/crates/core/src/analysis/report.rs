use serde::Serialize;
use serde_json::{json, Value};

use super::{
    climb, det_character_equal, residual_image, small_or_large, trivial_semisimplification, CharacterVector,
    ResidualVerdict, SmallOrLarge, TrivialLevel, DEFAULT_K_MAX,
};
use crate::cubic::CubicFamily;
use crate::error::{Error, Result};
use crate::oracle::Oracle;
use crate::selmer::{Discriminant, SelmerBasis};
use crate::sets::{T0Set, T1Set, T2Set};

/// Trees deeper than this are cut off in the rendering.
pub const TREE_DEPTH_CAP: u32 = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Width {
    Zero,
    One,
    AtLeastTwo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReportOptions {
    pub k_max: u32,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions { k_max: DEFAULT_K_MAX }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TreeVertex {
    pub id: usize,
    pub depth: u32,
    /// First edge out of the centre: "b", "c" or "abcd".
    pub branch: Option<&'static str>,
    pub label: Option<String>,
    /// Whether the tree continues beyond this leaf.
    pub extends: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Tree {
    pub vertices: Vec<TreeVertex>,
    pub edges: Vec<(usize, usize)>,
    pub truncated: bool,
}

impl Tree {
    fn single(label: &str) -> Tree {
        let v = TreeVertex { id: 0, depth: 0, branch: None, label: Some(label.into()), extends: Some(false) };
        Tree { vertices: vec![v], edges: Vec::new(), truncated: false }
    }

    fn edge(a: &Discriminant, b: &Discriminant) -> Tree {
        let v = |id, d: &Discriminant| TreeVertex {
            id,
            depth: id as u32,
            branch: None,
            label: Some(d.label.clone()),
            extends: Some(false),
        };
        Tree { vertices: vec![v(0, a), v(1, b)], edges: vec![(0, 1)], truncated: false }
    }

    /// All paths of length `depth` from a centre with three neighbours;
    /// leaves carry the discriminant of their branch when known.
    fn ball(depth: u32, leaves: Option<&[Discriminant; 3]>) -> Tree {
        let shown = depth.min(TREE_DEPTH_CAP);
        let mut vertices = vec![TreeVertex {
            id: 0,
            depth: 0,
            branch: None,
            label: Some("1".into()),
            extends: if depth == 0 { None } else { Some(true) },
        }];
        let mut edges = Vec::new();
        let names = ["b", "c", "abcd"];
        let mut frontier: Vec<(usize, usize)> = Vec::new();
        for (b, _) in names.iter().enumerate() {
            if shown == 0 {
                break;
            }
            frontier.push((vertices.len(), b));
            vertices.push(TreeVertex { id: vertices.len(), depth: 1, branch: Some(names[b]), label: None, extends: None });
            edges.push((0, vertices.len() - 1));
        }
        for d in 2..=shown {
            let mut next = Vec::new();
            for &(parent, b) in &frontier {
                for _ in 0..2 {
                    let id = vertices.len();
                    vertices.push(TreeVertex { id, depth: d, branch: Some(names[b]), label: None, extends: None });
                    edges.push((parent, id));
                    next.push((id, b));
                }
            }
            frontier = next;
        }
        for v in vertices.iter_mut().skip(1) {
            if v.depth < depth {
                v.label = Some("1".into());
                v.extends = Some(true);
            } else if let Some(ls) = leaves {
                let b = names.iter().position(|n| Some(*n) == v.branch).expect("branch");
                v.label = Some(ls[b].label.clone());
                v.extends = Some(ls[b].is_trivial());
            }
        }
        Tree { vertices, edges, truncated: depth > TREE_DEPTH_CAP }
    }
}

#[derive(Debug, Clone)]
pub struct IsogenyReport {
    /// Basis over which all exponent vectors are expressed.
    pub basis: SelmerBasis,
    pub residual: ResidualVerdict,
    pub width: Width,
    pub small_pair: Option<(Discriminant, Discriminant)>,
    pub trivial_level: Option<TrivialLevel>,
    pub det_is_norm: Option<bool>,
    pub trivial_semisimplification: Option<bool>,
    pub tree: Tree,
}

impl IsogenyReport {
    pub fn structure(&self) -> Option<&CharacterVector> {
        match &self.trivial_level {
            Some(TrivialLevel::Exact { structure: Some(s), .. }) => Some(s),
            _ => None,
        }
    }

    pub fn leaves(&self) -> Option<[Discriminant; 3]> {
        self.structure().map(|s| s.leaves(&self.basis))
    }

    pub fn to_json(&self) -> Value {
        let residual = match &self.residual {
            ResidualVerdict::Reducible => json!({ "reducible": true }),
            ResidualVerdict::Irreducible { cubic, group } => {
                json!({ "reducible": false, "cubic": cubic.to_string(), "group": format!("{group:?}") })
            }
        };
        let level = match &self.trivial_level {
            None => Value::Null,
            Some(TrivialLevel::Exact { k, .. }) => json!({ "k": k, "exact": true }),
            Some(TrivialLevel::AtLeast(k)) => json!({ "k": k, "exact": false }),
        };
        let structure = match self.structure() {
            None => Value::Null,
            Some(s) => {
                let [b, c, abcd] = s.leaves(&self.basis);
                let [a, d] = s.diagonal(&self.basis);
                json!({
                    "level": s.level,
                    "det": disc_json(&self.basis.discriminant(&s.det)),
                    "leaves": [disc_json(&b), disc_json(&c), disc_json(&abcd)],
                    "diagonal": [disc_json(&a), disc_json(&d)],
                    "image_order_log2": s.image_order_log2,
                    "branch": s.branch,
                })
            }
        };
        json!({
            "field": self.basis.field(),
            "bad_set": self.basis.bad_set().iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            "basis": self.basis.elements().iter().map(|e| e.to_string()).collect::<Vec<_>>(),
            "residual": residual,
            "width": self.width,
            "small_pair": self.small_pair.as_ref().map(|(a, b)| vec![disc_json(a), disc_json(b)]),
            "trivial_level": level,
            "structure": structure,
            "det_is_norm": self.det_is_norm,
            "trivial_semisimplification": self.trivial_semisimplification,
            "tree": self.tree,
        })
    }
}

pub fn disc_json(d: &Discriminant) -> Value {
    json!({ "label": d.label, "repr": d.repr.to_string(), "exponents": d.exponents })
}

/// The full pipeline: residual image, then small/large, then the trivial
/// level and the triviality certificate.
pub fn isogeny_report(
    o: &dyn Oracle,
    fam: &CubicFamily,
    t0: &T0Set,
    t1: &T1Set,
    t2: &T2Set,
    opts: &ReportOptions,
) -> Result<IsogenyReport> {
    let basis = t1.dual_basis.clone();
    let det_is_norm = norm_check(o, t1)?;
    let residual = residual_image(o, fam, t0)?;
    let mut report = IsogenyReport {
        basis,
        residual: residual.clone(),
        width: Width::Zero,
        small_pair: None,
        trivial_level: None,
        det_is_norm,
        trivial_semisimplification: None,
        tree: Tree::single("irreducible"),
    };
    if let ResidualVerdict::Irreducible { .. } = residual {
        return Ok(report);
    }
    match small_or_large(o, t2, t1)? {
        SmallOrLarge::Small(a, b) => {
            report.width = Width::One;
            report.tree = Tree::edge(&a, &b);
            report.small_pair = Some((a, b));
            report.trivial_level = Some(TrivialLevel::Exact { k: 0, structure: None });
        }
        SmallOrLarge::Large => {
            report.width = Width::AtLeastTwo;
            let level = climb(o, t1, t2, opts.k_max)?;
            report.tree = match &level {
                TrivialLevel::Exact { k, structure: Some(s) } => Tree::ball(*k, Some(&s.leaves(&report.basis))),
                TrivialLevel::Exact { k, structure: None } | TrivialLevel::AtLeast(k) => Tree::ball(*k, None),
            };
            report.trivial_level = Some(level);
        }
    }
    report.trivial_semisimplification = match trivial_semisimplification(o, t1, t2) {
        Ok(b) => Some(b),
        Err(Error::ExactnessRequired { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(report)
}

/// `det = N(p)` on T1, exactly when the oracle is exact and otherwise modulo
/// the precision it gives.
fn norm_check(o: &dyn Oracle, t1: &T1Set) -> Result<Option<bool>> {
    let mut bits = u32::MAX;
    for p in &t1.primes {
        let (_, det) = o.query(p)?.parts(p)?;
        bits = bits.min(det.precision.bits());
    }
    let norm = |p: &crate::field::Prime| p.norm() as i128;
    if t1.primes.is_empty() {
        return Ok(Some(true));
    }
    match bits {
        0 => Ok(None),
        u32::MAX => det_character_equal(o, norm, t1, None).map(Some),
        n => det_character_equal(o, norm, t1, Some(n)).map(Some),
    }
}
