//! Machine-readable reports and the command implementations behind the CLI.
//! Reports are deterministic: sorted keys, no timestamps, digests of the raw
//! input.

use crate::bredon::{bredon_cohomology, build_complex, BredonError};
use crate::coefficients::random_system;
use crate::eilenberg::{verify_eilenberg, EilenbergError};
use crate::linalg::{GroupShape, IntRing, PrimeField, RatField};
use crate::schema::{
    build_context, build_fibration, build_system, input_digest, parse_document, InputDocument,
    RingTag, SchemaError,
};
use crate::serre::{e2_compare, SerreError};
use crate::spectral::SpectralPage;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CommandError {
    #[error(transparent)]
    Schema(#[from] SchemaError),
    #[error(transparent)]
    Bredon(#[from] BredonError),
    #[error(transparent)]
    Eilenberg(#[from] EilenbergError),
    #[error(transparent)]
    Serre(#[from] SerreError),
    #[error("the Serre command needs field coefficients; pass --ring Q or --ring Fp:<prime>")]
    FieldRequired,
    #[error("empty degree range")]
    EmptyDegrees,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegreeShape {
    pub degree: usize,
    pub rank: usize,
    pub divisors: Vec<String>,
    pub rendered: String,
}

fn degree_shape(degree: usize, s: &GroupShape) -> DegreeShape {
    DegreeShape {
        degree,
        rank: s.rank,
        divisors: s.torsion.iter().map(|t| t.to_string()).collect(),
        rendered: s.render(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EilenbergSection {
    pub matrix_equal: bool,
    pub kernels_equal: bool,
    pub maps_inverse: bool,
    pub equivariance_ok: bool,
    pub cohomology_agree: bool,
    pub bredon: Vec<DegreeShape>,
    pub invariant: Vec<DegreeShape>,
    pub failures: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PageEntry {
    pub p: usize,
    pub q: i64,
    pub dim: usize,
}

fn page_entries(page: &SpectralPage) -> Vec<PageEntry> {
    page.dims.iter().map(|(&(p, q), &dim)| PageEntry { p, q, dim }).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SerreSection {
    pub deg_max: usize,
    pub e2: Vec<PageEntry>,
    pub expected_e2: Vec<PageEntry>,
    pub e2_agrees: bool,
    pub pages: Vec<(usize, Vec<PageEntry>)>,
    pub infinity: Vec<PageEntry>,
    pub collapse_at_two: bool,
    pub total_cohomology: Vec<usize>,
    pub abutment_ok: bool,
    pub monodromy_trivial: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub ring: String,
    pub input_digest: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// false signals a computational mismatch (exit code 1)
    pub ok: bool,
    pub messages: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cohomology: Option<Vec<DegreeShape>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eilenberg: Option<EilenbergSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub serre: Option<SerreSection>,
}

impl Report {
    fn new(command: &str, ring: &str, digest: String) -> Self {
        Report {
            command: command.to_string(),
            ring: ring.to_string(),
            input_digest: digest,
            seed: None,
            ok: true,
            messages: vec![],
            cohomology: None,
            eilenberg: None,
            serre: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    /// Aligned text for terminals; the caller may append timing, which is
    /// deliberately kept out of the JSON form.
    pub fn render_human(&self) -> String {
        let mut out = vec![format!("command: {}  ring: {}  ok: {}", self.command, self.ring, self.ok)];
        out.push(format!("input:   {}", self.input_digest));
        if let Some(coh) = &self.cohomology {
            out.push("degree  cohomology".into());
            for d in coh {
                out.push(format!("{:>6}  {}", d.degree, d.rendered));
            }
        }
        if let Some(e) = &self.eilenberg {
            out.push(format!(
                "eilenberg: matrices {} kernels {} maps {} equivariance {} cohomology {}",
                e.matrix_equal, e.kernels_equal, e.maps_inverse, e.equivariance_ok, e.cohomology_agree
            ));
            for (b, i) in e.bredon.iter().zip(&e.invariant) {
                out.push(format!("{:>6}  {}  |  {}", b.degree, b.rendered, i.rendered));
            }
        }
        if let Some(s) = &self.serre {
            out.push(format!(
                "serre: E2 agrees {}  collapse at E2 {}  abutment {}  monodromy trivial {}",
                s.e2_agrees, s.collapse_at_two, s.abutment_ok, s.monodromy_trivial
            ));
            for e in &s.e2 {
                out.push(format!("  E2^({},{}) = {}", e.p, e.q, e.dim));
            }
            out.push(format!("  H^n totals: {:?}", s.total_cohomology));
        }
        for m in &self.messages {
            out.push(format!("note: {m}"));
        }
        out.join("\n")
    }
}

fn effective_ring(doc: &InputDocument, override_tag: Option<RingTag>) -> Result<RingTag, SchemaError> {
    match override_tag {
        Some(t) => Ok(t),
        None => RingTag::parse(&doc.coefficients.ring),
    }
}

fn degree_list(requested: Option<(usize, usize)>, n_max: usize) -> Result<Vec<usize>, CommandError> {
    let (a, b) = requested.unwrap_or((0, n_max.saturating_sub(1)));
    if a > b {
        return Err(CommandError::EmptyDegrees);
    }
    Ok((a..=b).collect())
}

macro_rules! dispatch_ring {
    ($tag:expr, $ring:ident, $body:block) => {
        match $tag {
            RingTag::Z => {
                let $ring = IntRing;
                $body
            }
            RingTag::Q => {
                let $ring = RatField;
                $body
            }
            RingTag::Fp(p) => {
                let $ring = PrimeField::new(p).expect("tag was validated");
                $body
            }
        }
    };
}

/// Structural validation: group, space, action, coefficients, optional
/// fibration, plus a seeded random-coefficient smoke test of δδ = 0.
pub fn cmd_validate(text: &str, override_tag: Option<RingTag>, seed: u64) -> Result<Report, CommandError> {
    let doc = parse_document(text)?;
    let tag = effective_ring(&doc, override_tag)?;
    let ctx = build_context(&doc)?;
    dispatch_ring!(tag, ring, {
        build_system(ring, &tag.render(), &ctx, &doc.coefficients)?;
    });
    let mut report = Report::new("validate", &tag.render(), input_digest(text));
    report.seed = Some(seed);
    // a random well-formed system exercises the same complex machinery
    let probe = random_system(&ctx, IntRing, 2, seed, true);
    probe.check_well_defined(&ctx).map_err(SchemaError::Coefficient)?;
    build_complex(&ctx, &probe)?; // constructor asserts d∘d = 0
    report.messages.push("structure, action, coefficients valid".into());
    if doc.fibration.is_some() {
        build_fibration(&doc)?;
        report.messages.push("fibration block valid".into());
    }
    Ok(report)
}

pub fn cmd_cohomology(
    text: &str,
    degrees: Option<(usize, usize)>,
    override_tag: Option<RingTag>,
) -> Result<Report, CommandError> {
    let doc = parse_document(text)?;
    let tag = effective_ring(&doc, override_tag)?;
    let ctx = build_context(&doc)?;
    let degs = degree_list(degrees, ctx.gs.space.n_max())?;
    let mut report = Report::new("cohomology", &tag.render(), input_digest(text));
    dispatch_ring!(tag, ring, {
        let sys = build_system(ring, &tag.render(), &ctx, &doc.coefficients)?;
        let shapes = bredon_cohomology(&ctx, &sys, &degs)?;
        report.cohomology =
            Some(degs.iter().zip(&shapes).map(|(&n, s)| degree_shape(n, s)).collect());
    });
    Ok(report)
}

pub fn cmd_eilenberg(text: &str, override_tag: Option<RingTag>) -> Result<Report, CommandError> {
    let doc = parse_document(text)?;
    let tag = effective_ring(&doc, override_tag)?;
    let ctx = build_context(&doc)?;
    let mut report = Report::new("eilenberg", &tag.render(), input_digest(text));
    dispatch_ring!(tag, ring, {
        let sys = build_system(ring, &tag.render(), &ctx, &doc.coefficients)?;
        let v = verify_eilenberg(&ctx, &sys)?;
        report.ok = v.all_ok();
        report.eilenberg = Some(EilenbergSection {
            matrix_equal: v.matrix_equal,
            kernels_equal: v.kernels_equal,
            maps_inverse: v.maps_inverse,
            equivariance_ok: v.equivariance_ok,
            cohomology_agree: v.cohomology_agree,
            bredon: v.degrees.iter().zip(&v.bredon_shapes).map(|(&n, s)| degree_shape(n, s)).collect(),
            invariant: v
                .degrees
                .iter()
                .zip(&v.invariant_shapes)
                .map(|(&n, s)| degree_shape(n, s))
                .collect(),
            failures: v.failures,
        });
    });
    Ok(report)
}

pub fn cmd_serre(text: &str, override_tag: Option<RingTag>, rmax: usize) -> Result<Report, CommandError> {
    let doc = parse_document(text)?;
    let tag = effective_ring(&doc, override_tag)?;
    if tag == RingTag::Z {
        return Err(CommandError::FieldRequired);
    }
    let fib = build_fibration(&doc)?;
    let spec = doc.fibration.as_ref().expect("build_fibration checked presence");
    let mut report = Report::new("serre", &tag.render(), input_digest(text));
    macro_rules! run {
        ($ring:expr) => {{
            let ring = $ring;
            let sys = build_system(ring.clone(), &tag.render(), &fib.total, &spec.coefficients)?;
            let supplied = match &spec.fiber_systems {
                None => None,
                Some(list) => {
                    let mut out = vec![];
                    for s in list {
                        out.push(build_system(ring.clone(), &tag.render(), &fib.base, s)?);
                    }
                    Some(out)
                }
            };
            let r = e2_compare(&fib, &sys, supplied.as_deref(), rmax)?;
            report.ok = r.e2_agrees && r.abutment_ok;
            report.serre = Some(SerreSection {
                deg_max: r.deg_max,
                e2: page_entries(&r.e2),
                expected_e2: r
                    .expected_e2
                    .iter()
                    .map(|(&(p, q), &dim)| PageEntry { p, q, dim })
                    .collect(),
                e2_agrees: r.e2_agrees,
                pages: r.pages.iter().enumerate().map(|(i, pg)| (i + 2, page_entries(pg))).collect(),
                infinity: page_entries(&r.infinity),
                collapse_at_two: r.collapse_at_two,
                total_cohomology: r.total_cohomology,
                abutment_ok: r.abutment_ok,
                monodromy_trivial: r.monodromy_trivial,
            });
        }};
    }
    match tag {
        RingTag::Z => unreachable!(),
        RingTag::Q => run!(RatField),
        RingTag::Fp(p) => run!(PrimeField::new(p).expect("tag was validated")),
    }
    Ok(report)
}
