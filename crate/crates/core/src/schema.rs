//! The input document: a JSON tree describing a finite group, a truncated
//! G-simplicial set, a coefficient system, and optionally a fibration. All
//! identifiers are names; the loader resolves them with located errors.

use crate::coefficients::{CoefficientError, LocalSystem};
use crate::group::{FiniteGroup, GroupError};
use crate::gspace::{GContext, GSimplicialSet, GSpaceError};
use crate::linalg::{LinAlg, Mat};
use crate::serre::{Fibration, SerreError};
use crate::simplicial::{
    NondegSpec, SimplicialError, SimplicialMap, TruncatedSimplicialSet, DEFAULT_LEVEL_LIMIT,
};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SchemaError {
    #[error("could not parse the document: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("group: {0}")]
    Group(#[from] GroupError),
    #[error("unknown group element {0:?}")]
    UnknownElement(String),
    #[error("{0:?} is not a subgroup of the given group")]
    UnknownSubgroup(String),
    #[error("unknown simplex {0:?} at level {1}")]
    UnknownSimplex(String, usize),
    #[error("space: {0}")]
    Space(#[from] SimplicialError),
    #[error("action: {0}")]
    Action(#[from] GSpaceError),
    #[error("coefficients: {0}")]
    Coefficient(#[from] CoefficientError),
    #[error("matrix for {context}: entry {num}/{den} is not valid over {ring}")]
    BadEntry { context: String, num: i64, den: i64, ring: String },
    #[error("matrix for {context} is ragged or empty where a rectangle was expected")]
    RaggedMatrix { context: String },
    #[error("expected one action table per group element in declaration order")]
    ActionOrder,
    #[error("fibration: {0}")]
    Fibration(#[from] SerreError),
    #[error("the document has no fibration block")]
    NoFibration,
    #[error("ring tag {0:?} is not one of Z, Q, Fp:<prime>")]
    BadRing(String),
}

/// A matrix entry: a plain integer, or a fraction as a `[num, den]` pair.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NumEntry {
    Int(i64),
    Frac(i64, i64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroupSpec {
    pub names: Vec<String>,
    /// table[a][b] = index of a·b
    pub table: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimplexSpec {
    pub name: String,
    pub faces: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ActionSpec {
    pub element: String,
    /// per level: nondegenerate simplex name -> image name
    pub images: Vec<BTreeMap<String, String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpaceSpec {
    pub truncation: usize,
    /// nondegenerate simplices per level; faces may name degenerate simplices
    /// by their canonical names such as "s0(v)"
    pub simplices: Vec<Vec<SimplexSpec>>,
    /// one table per group element, in declaration order
    pub action: Vec<ActionSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankSpec {
    pub subgroup: Vec<String>,
    pub vertex: String,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeMatrixSpec {
    pub subgroup: Vec<String>,
    pub edge: String,
    pub matrix: Vec<Vec<NumEntry>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitMatrixSpec {
    pub from: Vec<String>,
    pub to: Vec<String>,
    pub rep: String,
    pub vertex: String,
    pub matrix: Vec<Vec<NumEntry>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoefficientSpec {
    pub ring: String,
    pub ranks: Vec<RankSpec>,
    #[serde(default)]
    pub edges: Vec<EdgeMatrixSpec>,
    #[serde(default)]
    pub orbit_maps: Vec<OrbitMatrixSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FibrationSpec {
    /// the total space over the same group
    pub total: SpaceSpec,
    /// coefficient system on the total space
    pub coefficients: CoefficientSpec,
    /// per level: nondegenerate total simplex name -> base simplex name
    pub map: Vec<BTreeMap<String, String>>,
    /// optional fiber coefficient systems on the base, one per degree q
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fiber_systems: Option<Vec<CoefficientSpec>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputDocument {
    pub group: GroupSpec,
    pub space: SpaceSpec,
    pub coefficients: CoefficientSpec,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fibration: Option<FibrationSpec>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RingTag {
    Z,
    Q,
    Fp(u64),
}

impl RingTag {
    pub fn parse(tag: &str) -> Result<RingTag, SchemaError> {
        match tag {
            "Z" => Ok(RingTag::Z),
            "Q" => Ok(RingTag::Q),
            other => {
                if let Some(p) = other.strip_prefix("Fp:") {
                    let p: u64 = p.parse().map_err(|_| SchemaError::BadRing(other.into()))?;
                    crate::linalg::PrimeField::new(p)
                        .map_err(|_| SchemaError::BadRing(other.into()))?;
                    return Ok(RingTag::Fp(p));
                }
                Err(SchemaError::BadRing(other.into()))
            }
        }
    }

    pub fn render(&self) -> String {
        match self {
            RingTag::Z => "Z".into(),
            RingTag::Q => "Q".into(),
            RingTag::Fp(p) => format!("Fp:{p}"),
        }
    }
}

pub fn parse_document(text: &str) -> Result<InputDocument, SchemaError> {
    Ok(serde_json::from_str(text)?)
}

pub fn serialize_document(doc: &InputDocument) -> String {
    serde_json::to_string_pretty(doc).expect("document serialization cannot fail")
}

/// Hex SHA-256 of the raw document bytes.
pub fn input_digest(text: &str) -> String {
    let mut h = Sha256::new();
    h.update(text.as_bytes());
    format!("{:x}", h.finalize())
}

pub fn build_group(spec: &GroupSpec) -> Result<FiniteGroup, SchemaError> {
    Ok(FiniteGroup::new(spec.names.clone(), spec.table.clone())?)
}

pub fn build_gspace(group: &FiniteGroup, spec: &SpaceSpec) -> Result<GSimplicialSet, SchemaError> {
    let mut input: Vec<Vec<NondegSpec>> = spec
        .simplices
        .iter()
        .map(|level| {
            level
                .iter()
                .map(|s| NondegSpec { name: s.name.clone(), faces: s.faces.clone() })
                .collect()
        })
        .collect();
    input.resize(spec.truncation + 1, vec![]);
    let set = TruncatedSimplicialSet::from_nondegenerate(&input, DEFAULT_LEVEL_LIMIT)?;
    set.validate()?;
    if spec.action.len() != group.order() {
        return Err(SchemaError::Action(GSpaceError::ActionCount(
            spec.action.len(),
            group.order(),
        )));
    }
    let mut images = vec![];
    for (g, a) in spec.action.iter().enumerate() {
        if group.element(&a.element) != Some(g) {
            return Err(SchemaError::ActionOrder);
        }
        let mut per_level = vec![std::collections::HashMap::new(); set.n_max() + 1];
        for (n, level) in a.images.iter().enumerate() {
            for (src, dst) in level {
                let s = set
                    .index_of(n, src)
                    .ok_or_else(|| SchemaError::UnknownSimplex(src.clone(), n))?;
                let d = set
                    .index_of(n, dst)
                    .ok_or_else(|| SchemaError::UnknownSimplex(dst.clone(), n))?;
                per_level[n].insert(s, d);
            }
        }
        images.push(per_level);
    }
    Ok(GSimplicialSet::from_nondegenerate_action(group.clone(), set, &images)?)
}

fn resolve_subgroup(ctx: &GContext, names: &[String]) -> Result<usize, SchemaError> {
    let group = &ctx.gs.group;
    let mut elems = vec![];
    for n in names {
        elems.push(group.element(n).ok_or_else(|| SchemaError::UnknownElement(n.clone()))?);
    }
    elems.sort_unstable();
    ctx.cat
        .subgroup_index(&elems)
        .ok_or_else(|| SchemaError::UnknownSubgroup(format!("{{{}}}", names.join(","))))
}

fn resolve_simplex(
    ctx: &GContext,
    n: usize,
    name: &str,
) -> Result<usize, SchemaError> {
    ctx.gs
        .space
        .index_of(n, name)
        .ok_or_else(|| SchemaError::UnknownSimplex(name.to_string(), n))
}

fn build_matrix<R: LinAlg>(
    ring: &R,
    tag: &str,
    context: &str,
    rows: &[Vec<NumEntry>],
) -> Result<Mat<R>, SchemaError> {
    let r = rows.len();
    let c = rows.first().map(|row| row.len()).unwrap_or(0);
    if rows.iter().any(|row| row.len() != c) {
        return Err(SchemaError::RaggedMatrix { context: context.to_string() });
    }
    let mut m = Mat::zero(ring.clone(), r, c);
    for (i, row) in rows.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            let (num, den) = match e {
                NumEntry::Int(n) => (*n, 1),
                NumEntry::Frac(n, d) => (*n, *d),
            };
            let v = if den == 1 {
                ring.from_i64(num)
            } else {
                let inv = ring.inv(&ring.from_i64(den)).ok_or(SchemaError::BadEntry {
                    context: context.to_string(),
                    num,
                    den,
                    ring: tag.to_string(),
                })?;
                ring.mul(&ring.from_i64(num), &inv)
            };
            m.set(i, j, v);
        }
    }
    Ok(m)
}

pub fn build_system<R: LinAlg>(
    ring: R,
    tag: &str,
    ctx: &GContext,
    spec: &CoefficientSpec,
) -> Result<LocalSystem<R>, SchemaError> {
    let nsub = ctx.cat.subgroups.len();
    let mut ranks = vec![std::collections::HashMap::new(); nsub];
    for r in &spec.ranks {
        let h = resolve_subgroup(ctx, &r.subgroup)?;
        let v = resolve_simplex(ctx, 0, &r.vertex)?;
        ranks[h].insert(v, r.rank);
    }
    let mut edge_mats = vec![std::collections::HashMap::new(); nsub];
    for e in &spec.edges {
        let h = resolve_subgroup(ctx, &e.subgroup)?;
        let idx = resolve_simplex(ctx, 1, &e.edge)?;
        let m = build_matrix(&ring, tag, &format!("edge {}", e.edge), &e.matrix)?;
        edge_mats[h].insert(idx, m);
    }
    let mut orbit_mats = std::collections::HashMap::new();
    for o in &spec.orbit_maps {
        let from = resolve_subgroup(ctx, &o.from)?;
        let to = resolve_subgroup(ctx, &o.to)?;
        let g = ctx
            .gs
            .group
            .element(&o.rep)
            .ok_or_else(|| SchemaError::UnknownElement(o.rep.clone()))?;
        let m = ctx.cat.morphism(from, to, g).ok_or_else(|| {
            SchemaError::UnknownSubgroup(format!("no orbit morphism with representative {}", o.rep))
        })?;
        let v = resolve_simplex(ctx, 0, &o.vertex)?;
        let mat = build_matrix(
            &ring,
            tag,
            &format!("orbit morphism {} at {}", o.rep, o.vertex),
            &o.matrix,
        )?;
        orbit_mats
            .entry((m.from, m.to, m.rep))
            .or_insert_with(std::collections::HashMap::new)
            .insert(v, mat);
    }
    let sys = LocalSystem { ring, ranks, edge_mats, orbit_mats };
    sys.check_well_defined(ctx)?;
    Ok(sys)
}

/// The base context, built from the document's group and space.
pub fn build_context(doc: &InputDocument) -> Result<GContext, SchemaError> {
    let group = build_group(&doc.group)?;
    let gs = build_gspace(&group, &doc.space)?;
    Ok(GContext::new(gs))
}

/// The fibration block: total space over the same group, projection to the
/// document's main space.
pub fn build_fibration(doc: &InputDocument) -> Result<Fibration, SchemaError> {
    let spec = doc.fibration.as_ref().ok_or(SchemaError::NoFibration)?;
    let group = build_group(&doc.group)?;
    let base = build_gspace(&group, &doc.space)?;
    let total = build_gspace(&group, &spec.total)?;
    let mut images = vec![std::collections::HashMap::new(); total.space.n_max() + 1];
    for (n, level) in spec.map.iter().enumerate() {
        for (src, dst) in level {
            let s = total
                .space
                .index_of(n, src)
                .ok_or_else(|| SchemaError::UnknownSimplex(src.clone(), n))?;
            let d = base
                .space
                .index_of(n, dst)
                .ok_or_else(|| SchemaError::UnknownSimplex(dst.clone(), n))?;
            images[n].insert(s, d);
        }
    }
    let map = SimplicialMap::from_nondegenerate_images(&total.space, &base.space, &images);
    Ok(Fibration::new(total, base, map)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::IntRing;

    fn circle_doc() -> String {
        r#"{
          "group": { "names": ["e"], "table": [[0]] },
          "space": {
            "truncation": 2,
            "simplices": [
              [ { "name": "v", "faces": [] } ],
              [ { "name": "e1", "faces": ["v", "v"] } ]
            ],
            "action": [ { "element": "e", "images": [ { "v": "v" }, { "e1": "e1" } ] } ]
          },
          "coefficients": {
            "ring": "Z",
            "ranks": [ { "subgroup": ["e"], "vertex": "v", "rank": 1 } ],
            "edges": [ { "subgroup": ["e"], "edge": "e1", "matrix": [[-1]] } ]
          }
        }"#
        .to_string()
    }

    #[test]
    fn parses_and_builds() {
        let doc = parse_document(&circle_doc()).unwrap();
        let ctx = build_context(&doc).unwrap();
        assert_eq!(ctx.gs.space.nondegenerate(1).len(), 1);
        let sys = build_system(IntRing, "Z", &ctx, &doc.coefficients).unwrap();
        let h = crate::bredon::bredon_cohomology(&ctx, &sys, &[0, 1]).unwrap();
        assert_eq!(h[0].render(), "0");
        assert_eq!(h[1].render(), "Z/2");
    }

    #[test]
    fn round_trips() {
        let doc = parse_document(&circle_doc()).unwrap();
        let text = serialize_document(&doc);
        let again = parse_document(&text).unwrap();
        assert_eq!(doc, again);
        assert_eq!(text, serialize_document(&again));
    }

    #[test]
    fn unknown_face_is_located() {
        let bad = circle_doc().replace("[\"v\", \"v\"]", "[\"w\", \"v\"]");
        let doc = parse_document(&bad).unwrap();
        match build_context(&doc) {
            Err(SchemaError::Space(SimplicialError::UnknownFace { .. })) => {}
            other => panic!("expected an unknown-face error, got {:?}", other.is_ok()),
        }
    }

    #[test]
    fn fraction_entries_need_a_field() {
        let bad = circle_doc().replace("[[-1]]", "[[[1, 2]]]");
        let doc = parse_document(&bad).unwrap();
        let ctx = build_context(&doc).unwrap();
        assert!(matches!(
            build_system(IntRing, "Z", &ctx, &doc.coefficients),
            Err(SchemaError::BadEntry { den: 2, .. })
        ));
        let sys = build_system(crate::linalg::RatField, "Q", &ctx, &doc.coefficients).unwrap();
        let h = crate::bredon::bredon_cohomology(&ctx, &sys, &[0, 1]).unwrap();
        // a 1/2-twisted line over Q is still acyclic in degree 0
        assert_eq!(h[0].render(), "0");
    }

    #[test]
    fn ring_tags() {
        assert_eq!(RingTag::parse("Z").unwrap(), RingTag::Z);
        assert_eq!(RingTag::parse("Fp:5").unwrap(), RingTag::Fp(5));
        assert!(RingTag::parse("Fp:4").is_err());
        assert!(RingTag::parse("R").is_err());
    }
}
