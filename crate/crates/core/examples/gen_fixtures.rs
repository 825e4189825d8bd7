//! Regenerates the derived fixture documents (currently the product
//! fibration) from the library's own constructions. Run from the workspace
//! root:
//!
//!     cargo run -p bredon --example gen_fixtures
//!
//! The emitted files are committed; this exists so they can be rebuilt after
//! schema changes.

use bredon::schema::{
    parse_document, serialize_document, ActionSpec, CoefficientSpec, FibrationSpec, GroupSpec,
    InputDocument, RankSpec, SimplexSpec, SpaceSpec,
};
use bredon::simplicial::{
    canonical_degenerate_name, NondegSpec, TruncatedSimplicialSet, DEFAULT_LEVEL_LIMIT,
};
use std::collections::BTreeMap;

fn canonical_name(set: &TruncatedSimplicialSet, n: usize, idx: usize) -> String {
    let (word, base_level, base) = set.decompose(n, idx);
    if word.is_empty() {
        set.name(n, idx).to_string()
    } else {
        canonical_degenerate_name(word, set.name(base_level, base))
    }
}

fn space_spec(set: &TruncatedSimplicialSet) -> SpaceSpec {
    let simplices: Vec<Vec<SimplexSpec>> = (0..=set.n_max())
        .map(|n| {
            set.nondegenerate(n)
                .into_iter()
                .map(|i| SimplexSpec {
                    name: set.name(n, i).to_string(),
                    faces: if n == 0 {
                        vec![]
                    } else {
                        (0..=n).map(|k| canonical_name(set, n - 1, set.face(n, i, k))).collect()
                    },
                })
                .collect()
        })
        .collect();
    let identity_images: Vec<BTreeMap<String, String>> = (0..=set.n_max())
        .map(|n| {
            set.nondegenerate(n)
                .into_iter()
                .map(|i| (set.name(n, i).to_string(), set.name(n, i).to_string()))
                .collect()
        })
        .collect();
    SpaceSpec {
        truncation: set.n_max(),
        simplices,
        action: vec![ActionSpec { element: "e".into(), images: identity_images }],
    }
}

fn constant_rank_one(set: &TruncatedSimplicialSet) -> CoefficientSpec {
    CoefficientSpec {
        ring: "Q".into(),
        ranks: set
            .nondegenerate(0)
            .into_iter()
            .map(|v| RankSpec {
                subgroup: vec!["e".into()],
                vertex: set.name(0, v).to_string(),
                rank: 1,
            })
            .collect(),
        edges: set
            .nondegenerate(1)
            .into_iter()
            .map(|e| bredon::schema::EdgeMatrixSpec {
                subgroup: vec!["e".into()],
                edge: set.name(1, e).to_string(),
                matrix: vec![vec![bredon::schema::NumEntry::Int(1)]],
            })
            .collect(),
        orbit_maps: vec![],
    }
}

fn main() {
    let t2_input = vec![
        vec![NondegSpec { name: "v".into(), faces: vec![] }],
        vec![
            NondegSpec { name: "a".into(), faces: vec!["v".into(), "v".into()] },
            NondegSpec { name: "b".into(), faces: vec!["v".into(), "v".into()] },
            NondegSpec { name: "c".into(), faces: vec!["v".into(), "v".into()] },
        ],
        vec![
            NondegSpec { name: "U".into(), faces: vec!["b".into(), "c".into(), "a".into()] },
            NondegSpec { name: "L".into(), faces: vec!["a".into(), "c".into(), "b".into()] },
        ],
        vec![],
    ];
    let t2 = TruncatedSimplicialSet::from_nondegenerate(&t2_input, DEFAULT_LEVEL_LIMIT).unwrap();
    let mut s1_input = vec![
        vec![NondegSpec { name: "w".into(), faces: vec![] }],
        vec![NondegSpec { name: "z".into(), faces: vec!["w".into(), "w".into()] }],
    ];
    s1_input.resize(4, vec![]);
    let s1 = TruncatedSimplicialSet::from_nondegenerate(&s1_input, DEFAULT_LEVEL_LIMIT).unwrap();
    let prod = TruncatedSimplicialSet::product(&t2, &s1, DEFAULT_LEVEL_LIMIT).unwrap();

    // projection to the first factor, on nondegenerate simplices
    let map: Vec<BTreeMap<String, String>> = (0..=prod.n_max())
        .map(|n| {
            let s1_size = s1.size(n);
            prod.nondegenerate(n)
                .into_iter()
                .map(|i| (prod.name(n, i).to_string(), canonical_name(&t2, n, i / s1_size)))
                .collect()
        })
        .collect();

    let doc = InputDocument {
        group: GroupSpec { names: vec!["e".into()], table: vec![vec![0]] },
        space: space_spec(&t2),
        coefficients: constant_rank_one(&t2),
        fibration: Some(FibrationSpec {
            total: space_spec(&prod),
            coefficients: constant_rank_one(&prod),
            map,
            fiber_systems: None,
        }),
    };
    let text = serialize_document(&doc);
    parse_document(&text).expect("generated document must round-trip");
    let out = concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures/product_t2_s1.json");
    std::fs::write(out, text + "\n").unwrap();
    println!("wrote {out}");
}
