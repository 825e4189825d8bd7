//! Acceptance gate: one check per shipped guarantee, each printing a
//! pass/fail line. Run with `cargo test --test acceptance -- --nocapture`
//! to see the lines; any failure fails the single test at the end.

use bredon::bredon::{build_complex, bredon_cohomology};
use bredon::coefficients::{random_system, LocalSystem};
use bredon::eilenberg::verify_eilenberg;
use bredon::groupoid::{PiMor, PiWord};
use bredon::gspace::{GContext, GSimplicialSet};
use bredon::group::FiniteGroup;
use bredon::linalg::IntRing;
use bredon::report::{cmd_serre, cmd_validate};
use bredon::schema::{build_context, build_system, parse_document, InputDocument, SchemaError};
use bredon::simplicial::TruncatedSimplicialSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;
use std::path::PathBuf;

fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn read_fixture(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).expect("fixture exists")
}

fn load(name: &str) -> (InputDocument, GContext) {
    let doc = parse_document(&read_fixture(name)).unwrap();
    let ctx = build_context(&doc).unwrap();
    (doc, ctx)
}

const VALID_FIXTURES: &[&str] = &[
    "pt.json",
    "point_z2.json",
    "s1.json",
    "s1_twisted.json",
    "s1_2.json",
    "w2.json",
    "t2.json",
    "t2_twisted.json",
    "k2.json",
    "k2_oriented.json",
    "s1_id_fibration.json",
    "double_cover_s1.json",
    "product_t2_s1.json",
];

/// δ∘δ = 0 on the full and the compatible complex, for every fixture and 100
/// seeded sign systems of rank at most 3.
fn coboundary_squares_to_zero() -> Result<(), String> {
    for name in VALID_FIXTURES {
        let (_, ctx) = load(name);
        for seed in 0..100u64 {
            let rank = 1 + (seed as usize) % 3;
            let sys = random_system(&ctx, IntRing, rank, seed, false);
            sys.check_well_defined(&ctx).map_err(|e| format!("{name} seed {seed}: {e}"))?;
            let b = build_complex(&ctx, &sys).map_err(|e| format!("{name} seed {seed}: {e}"))?;
            for d in [&b.full.d, &b.complex.d] {
                for n in 0..d.len().saturating_sub(1) {
                    if !d[n + 1].matmul(&d[n]).is_zero() {
                        return Err(format!("{name} seed {seed}: d∘d != 0 in degree {n}"));
                    }
                }
            }
        }
    }
    Ok(())
}

/// The two-pipeline comparison on the one-vertex fixtures: matrix equality,
/// kernel equality, inverse maps, identical ranks and divisors.
fn pipelines_agree() -> Result<(), String> {
    for name in ["s1_twisted.json", "w2.json", "t2.json", "t2_twisted.json", "k2_oriented.json"] {
        let (doc, ctx) = load(name);
        let sys = build_system(IntRing, "Z", &ctx, &doc.coefficients)
            .map_err(|e| format!("{name}: {e}"))?;
        let report = verify_eilenberg(&ctx, &sys).map_err(|e| format!("{name}: {e}"))?;
        if !report.all_ok() {
            return Err(format!("{name}: {:?}", report.failures));
        }
        if report.bredon_shapes != report.invariant_shapes {
            return Err(format!("{name}: shape tables differ"));
        }
    }
    Ok(())
}

/// Minimal integer Smith normal form over i64, written directly against the
/// fixture face tables; shares nothing with the library pipelines.
mod oracle {
    pub fn snf_diagonal(mut m: Vec<Vec<i64>>) -> Vec<i64> {
        let rows = m.len();
        let cols = if rows == 0 { 0 } else { m[0].len() };
        let mut out = vec![];
        let mut top = 0;
        while top < rows.min(cols) {
            // find a nonzero pivot
            let mut pivot = None;
            'outer: for i in top..rows {
                for j in top..cols {
                    if m[i][j] != 0 {
                        pivot = Some((i, j));
                        break 'outer;
                    }
                }
            }
            let Some((pi, pj)) = pivot else { break };
            m.swap(top, pi);
            for row in m.iter_mut() {
                row.swap(top, pj);
            }
            loop {
                let mut done = true;
                for i in top + 1..rows {
                    while m[i][top] != 0 {
                        let q = m[i][top] / m[top][top];
                        for j in 0..cols {
                            m[i][j] -= q * m[top][j];
                        }
                        if m[i][top] != 0 {
                            m.swap(top, i);
                            done = false;
                        }
                    }
                }
                for j in top + 1..cols {
                    while m[top][j] != 0 {
                        let q = m[top][j] / m[top][top];
                        for i in 0..rows {
                            m[i][j] -= q * m[i][top];
                        }
                        if m[top][j] != 0 {
                            for row in m.iter_mut() {
                                row.swap(top, j);
                            }
                            done = false;
                        }
                    }
                }
                if done {
                    break;
                }
            }
            out.push(m[top][top].abs());
            top += 1;
        }
        out.retain(|&d| d != 0);
        out
    }

    /// rank of the integer matrix = number of nonzero diagonal entries
    pub fn rank(m: Vec<Vec<i64>>) -> usize {
        snf_diagonal(m).len()
    }
}

/// Full (non-equivariant) twisted simplicial cochain complex of a trivial-G
/// fixture, from the face tables and per-edge signs; cohomology via the
/// oracle SNF.
fn classical_cohomology(
    set: &TruncatedSimplicialSet,
    signs: &HashMap<usize, i64>,
    n: usize,
) -> (usize, Vec<i64>) {
    let d = |k: usize| -> Vec<Vec<i64>> {
        let src = set.nondegenerate(k);
        let tgt = set.nondegenerate(k + 1);
        let col_of: HashMap<usize, usize> = src.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let mut m = vec![vec![0i64; src.len()]; tgt.len()];
        for (row, &x) in tgt.iter().enumerate() {
            for j in 0..=k + 1 {
                let face = set.face(k + 1, x, j);
                let Some(&col) = col_of.get(&face) else { continue };
                if j == 0 {
                    let lead = set.apply_monotone(&[0, 1], k + 1, x);
                    let s = if set.is_nondegenerate(1, lead) { signs[&lead] } else { 1 };
                    m[row][col] += s;
                } else if j % 2 == 0 {
                    m[row][col] += 1;
                } else {
                    m[row][col] -= 1;
                }
            }
        }
        m
    };
    let c_n = set.nondegenerate(n).len();
    let rank_dn = oracle::rank(d(n));
    let (rank_prev, torsion) = if n == 0 {
        (0, vec![])
    } else {
        let diag = oracle::snf_diagonal(d(n - 1));
        let t: Vec<i64> = diag.iter().copied().filter(|&x| x > 1).collect();
        (diag.len(), t)
    };
    (c_n - rank_dn - rank_prev, torsion)
}

/// Classical values through the trivial-group degeneration, against the
/// independent oracle above.
fn classical_values() -> Result<(), String> {
    struct Case {
        fixture: &'static str,
        signs: &'static [(&'static str, i64)],
        expect: &'static [(&'static str, usize, &'static [i64])],
    }
    let cases = [
        Case {
            fixture: "s1_twisted.json",
            signs: &[("a", -1)],
            expect: &[("H0", 0, &[]), ("H1", 0, &[2])],
        },
        Case {
            fixture: "t2.json",
            signs: &[("a", 1), ("b", 1), ("c", 1)],
            expect: &[("H0", 1, &[]), ("H1", 2, &[]), ("H2", 1, &[])],
        },
        Case {
            fixture: "k2.json",
            signs: &[("a", 1), ("b", 1), ("c", 1)],
            expect: &[("H0", 1, &[]), ("H1", 1, &[]), ("H2", 0, &[2])],
        },
    ];
    for case in cases {
        let (doc, ctx) = load(case.fixture);
        let set = &ctx.gs.space;
        let signs: HashMap<usize, i64> = case
            .signs
            .iter()
            .map(|&(name, s)| (set.index_of(1, name).unwrap(), s))
            .collect();
        let sys = build_system(IntRing, "Z", &ctx, &doc.coefficients)
            .map_err(|e| format!("{}: {e}", case.fixture))?;
        let degrees: Vec<usize> = (0..case.expect.len()).collect();
        let engine = bredon_cohomology(&ctx, &sys, &degrees)
            .map_err(|e| format!("{}: {e}", case.fixture))?;
        for (n, &(label, rank, torsion)) in case.expect.iter().enumerate() {
            let (o_rank, o_tors) = classical_cohomology(set, &signs, n);
            if (o_rank, o_tors.as_slice()) != (rank, torsion) {
                return Err(format!("{} {label}: oracle got ({o_rank}, {o_tors:?})", case.fixture));
            }
            let e_tors: Vec<i64> = engine[n]
                .torsion
                .iter()
                .map(|t| t.to_string().parse().unwrap())
                .collect();
            if engine[n].rank != rank || e_tors != torsion {
                return Err(format!(
                    "{} {label}: engine got ({}, {e_tors:?})",
                    case.fixture, engine[n].rank
                ));
            }
        }
    }
    Ok(())
}

/// A free action computes the cohomology of its quotient.
fn free_action_matches_quotient() -> Result<(), String> {
    let (doc, ctx) = load("s1_2.json");
    let sys = build_system(IntRing, "Z", &ctx, &doc.coefficients).map_err(|e| e.to_string())?;
    let equivariant = bredon_cohomology(&ctx, &sys, &[0, 1]).map_err(|e| e.to_string())?;
    let (quotient, _) = ctx.gs.quotient().map_err(|e| e.to_string())?;
    let qctx = GContext::new(GSimplicialSet::trivial_action(FiniteGroup::trivial(), quotient));
    let qsys = LocalSystem::constant(&qctx, IntRing, 1);
    let plain = bredon_cohomology(&qctx, &qsys, &[0, 1]).map_err(|e| e.to_string())?;
    if equivariant != plain {
        return Err(format!("{equivariant:?} vs quotient {plain:?}"));
    }
    if equivariant[0].rank != 1 || equivariant[1].rank != 1 {
        return Err(format!("expected ranks (1,1), got {equivariant:?}"));
    }
    Ok(())
}

/// The point with a group action has the cohomology of the coefficient value.
fn point_axiom() -> Result<(), String> {
    let (doc, ctx) = load("point_z2.json");
    let sys = build_system(IntRing, "Z", &ctx, &doc.coefficients).map_err(|e| e.to_string())?;
    let h = bredon_cohomology(&ctx, &sys, &[0, 1, 2]).map_err(|e| e.to_string())?;
    let rendered: Vec<String> = h.iter().map(|s| s.render()).collect();
    if rendered != ["Z", "0", "0"] {
        return Err(format!("got {rendered:?}"));
    }
    Ok(())
}

/// A random edge-path in the h-fixed complex ending at the given vertex.
fn random_word_into(
    ctx: &GContext,
    rng: &mut ChaCha8Rng,
    h: usize,
    tgt: usize,
    len: usize,
) -> Option<PiWord> {
    let set = &ctx.gs.space;
    let edges = ctx.fixed_nondegenerate(h, 1);
    if edges.is_empty() {
        return Some(PiWord::identity(tgt));
    }
    // walk forward from tgt, then reverse the whole path
    let mut walk = PiWord::identity(tgt);
    for _ in 0..len {
        let mut options = vec![];
        for &e in &edges {
            if set.face(1, e, 1) == walk.tgt {
                options.push((e, true));
            }
            if set.face(1, e, 0) == walk.tgt {
                options.push((e, false));
            }
        }
        if options.is_empty() {
            break;
        }
        let (e, dir) = options[rng.gen_range(0..options.len())];
        let step = if dir {
            PiWord::from_edge(set, e)
        } else {
            PiWord::from_edge(set, e).inverse()
        };
        walk = walk.then(&step);
    }
    Some(walk.inverse())
}

/// 200 random composable triples per fixture: contravariant functoriality and
/// associativity of the coefficient functor, as exact matrix identities.
fn functor_laws() -> Result<(), String> {
    for name in VALID_FIXTURES {
        let (doc, ctx) = load(name);
        let sys = if doc.coefficients.ring == "Z" {
            build_system(IntRing, "Z", &ctx, &doc.coefficients)
                .map_err(|e| format!("{name}: {e}"))?
        } else {
            random_system(&ctx, IntRing, 2, 7, false)
        };
        sys.check_well_defined(&ctx).map_err(|e| format!("{name}: {e}"))?;
        let mut rng = ChaCha8Rng::seed_from_u64(0xE11E);
        let cat = &ctx.cat;
        let gs = &ctx.gs;
        let mut all_mors = vec![];
        for a in 0..cat.subgroups.len() {
            for b in 0..cat.subgroups.len() {
                all_mors.extend(cat.hom_set(a, b));
            }
        }
        let mut done = 0;
        let mut attempts = 0;
        while done < 200 {
            attempts += 1;
            if attempts > 20_000 {
                return Err(format!("{name}: could not build 200 composable triples"));
            }
            let g3 = all_mors[rng.gen_range(0..all_mors.len())].clone();
            let from2: Vec<_> = all_mors.iter().filter(|m| m.to == g3.from).collect();
            if from2.is_empty() {
                continue;
            }
            let g2 = from2[rng.gen_range(0..from2.len())].clone();
            let from1: Vec<_> = all_mors.iter().filter(|m| m.to == g2.from).collect();
            if from1.is_empty() {
                continue;
            }
            let g1 = from1[rng.gen_range(0..from1.len())].clone();
            let y3 = {
                let vs = ctx.fixed_vertices(g3.to);
                if vs.is_empty() {
                    continue;
                }
                vs[rng.gen_range(0..vs.len())]
            };
            let len = rng.gen_range(0..3);
            let Some(w3) = random_word_into(&ctx, &mut rng, g3.from, gs.act(g3.rep, 0, y3), len)
            else {
                continue;
            };
            let m3 = PiMor { gmor: g3.clone(), word: w3 };
            let Some(w2) =
                random_word_into(&ctx, &mut rng, g2.from, gs.act(g2.rep, 0, m3.word.src), len)
            else {
                continue;
            };
            let m2 = PiMor { gmor: g2.clone(), word: w2 };
            let Some(w1) =
                random_word_into(&ctx, &mut rng, g1.from, gs.act(g1.rep, 0, m2.word.src), len)
            else {
                continue;
            };
            let m1 = PiMor { gmor: g1.clone(), word: w1 };

            let c21 = PiMor::compose(cat, gs, &m2, &m1);
            let c32 = PiMor::compose(cat, gs, &m3, &m2);
            let left = PiMor::compose(cat, gs, &m3, &c21);
            let right = PiMor::compose(cat, gs, &c32, &m1);
            let e_left = sys.evaluate(&ctx, &left);
            let e_right = sys.evaluate(&ctx, &right);
            if e_left != e_right {
                return Err(format!("{name}: associativity fails on a random triple"));
            }
            // contravariance: M(m2 ∘ m1) = M(m1) · M(m2)
            let direct = sys.evaluate(&ctx, &m1).matmul(&sys.evaluate(&ctx, &m2));
            if sys.evaluate(&ctx, &c21) != direct {
                return Err(format!("{name}: mixed naturality fails on a random pair"));
            }
            done += 1;
        }
    }
    Ok(())
}

/// Field-coefficient spectral sequences on the three shipped fibrations.
fn serre_suite() -> Result<(), String> {
    // identity fibration: single row, E2^{p,0} = H^p(X; Q)
    let r = cmd_serre(&read_fixture("s1_id_fibration.json"), None, 2).map_err(|e| e.to_string())?;
    let s = r.serre.as_ref().unwrap();
    if !r.ok || !s.collapse_at_two {
        return Err("identity fibration does not collapse".into());
    }
    for e in &s.e2 {
        if e.q != 0 {
            return Err(format!("identity fibration has E2 off the q=0 row: {e:?}"));
        }
    }
    let dims: Vec<usize> = s.e2.iter().map(|e| e.dim).collect();
    if dims != [1, 1] {
        return Err(format!("identity fibration row is {dims:?}"));
    }

    // product: collapse at E2, abutment for n <= 2
    let r = cmd_serre(&read_fixture("product_t2_s1.json"), None, 3).map_err(|e| e.to_string())?;
    let s = r.serre.as_ref().unwrap();
    if !r.ok || !s.collapse_at_two || !s.abutment_ok || !s.e2_agrees {
        return Err("product fibration comparison failed".into());
    }
    if s.total_cohomology != [1, 3, 3] {
        return Err(format!("product abutment totals {:?}", s.total_cohomology));
    }

    // double cover with supplied monodromy: abutment dims (1, 1)
    let r = cmd_serre(&read_fixture("double_cover_s1.json"), None, 2).map_err(|e| e.to_string())?;
    let s = r.serre.as_ref().unwrap();
    if !r.ok || !s.abutment_ok || s.monodromy_trivial {
        return Err("double cover comparison failed".into());
    }
    if s.total_cohomology != [1, 1] {
        return Err(format!("double cover abutment totals {:?}", s.total_cohomology));
    }
    Ok(())
}

/// Corrupted variants are rejected with a located witness.
fn mutation_detection() -> Result<(), String> {
    let cases: [(&str, fn(&SchemaError) -> bool, &str); 3] = [
        ("corrupt_interval_faces.json", |e| matches!(e, SchemaError::Space(_)), "\"T\""),
        ("corrupt_t2_relation.json", |e| matches!(e, SchemaError::Coefficient(_)), "\"U\""),
        ("corrupt_s1_2_action.json", |e| matches!(e, SchemaError::Action(_)), "\"g\""),
    ];
    for (name, kind_ok, witness) in cases {
        match cmd_validate(&read_fixture(name), None, 0) {
            Ok(_) => return Err(format!("{name} was accepted")),
            Err(bredon::report::CommandError::Schema(e)) => {
                if !kind_ok(&e) {
                    return Err(format!("{name}: wrong error kind: {e}"));
                }
                if !e.to_string().contains(witness) {
                    return Err(format!("{name}: witness {witness:?} missing from {e}"));
                }
            }
            Err(other) => return Err(format!("{name}: unexpected error {other}")),
        }
    }
    Ok(())
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Result<(), String>); 8] = [
        ("1 coboundary squares to zero", coboundary_squares_to_zero),
        ("2 invariant pipeline agreement", pipelines_agree),
        ("3 classical values vs independent oracle", classical_values),
        ("4 free action matches quotient", free_action_matches_quotient),
        ("5 point axiom", point_axiom),
        ("6 functor laws on random triples", functor_laws),
        ("7 fibration spectral sequences", serre_suite),
        ("8 mutation detection", mutation_detection),
    ];
    let mut failed = vec![];
    for (label, run) in criteria {
        match run() {
            Ok(()) => println!("criterion {label}: pass"),
            Err(msg) => {
                println!("criterion {label}: FAIL ({msg})");
                failed.push(label);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
