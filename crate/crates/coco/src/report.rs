//! Report assembly and rendering for the `coco` command-line tool.
//!
//! JSON reports follow one top-level shape, `{meta, validation, ideals,
//! krein, bounds, verdict}`, with sections omitted when a subcommand does
//! not produce them. Complex numbers serialize as `[re, im]` pairs, and
//! all indices (fibers, ideals, points) are 1-based. Rendering is fully
//! deterministic: identical inputs, seed, and tolerances give
//! byte-identical output.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::{validate_axioms, CoherentConfiguration, ValidationMode, ValidationReport};
use crate::decomp::{decompose, verify_units, MatrixUnitBasis, UnitCheckReport};
use crate::gq::{ClosedFormTable, GqFeasibility};
use crate::krein::{
    feasibility_report, krein_all, BoundCheck, FeasibilityReport, KreinTable, StructuralChecks,
    TripleCheck, Verdict,
};
use crate::linalg::CMatrix;
use crate::tol::{self, Tolerances};
use crate::{Error, Result};

/// Provenance block present in every report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub tool: String,
    pub version: String,
    pub source: String,
    pub seed: u64,
    pub tolerances: Tolerances,
    pub n: usize,
    pub fibers: Vec<usize>,
}

impl Meta {
    pub fn new(
        source: &str,
        seed: u64,
        tolerances: Tolerances,
        n: usize,
        fibers: Vec<usize>,
    ) -> Self {
        Meta {
            tool: "coco".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            source: source.into(),
            seed,
            tolerances,
            n,
            fibers,
        }
    }
}

/// Summary of one simple ideal; all labels 1-based.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdealReport {
    pub index: usize,
    pub support: Vec<usize>,
    pub degree: usize,
    pub multiplicity: u64,
    pub conjugate_partner: usize,
}

/// Decomposition section: ideal inventory and basis health.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdealsSection {
    pub count: usize,
    pub ideals: Vec<IdealReport>,
    /// Σ e_s²; equals the rank of the configuration.
    pub sum_degree_squares: usize,
    /// Σ h_s·e_s; equals the number of points.
    pub sum_multiplicity_degree: u64,
    pub unit_residuals: UnitCheckReport,
    pub unit_residuals_pass: bool,
}

pub fn ideals_section(basis: &MatrixUnitBasis, checks: &UnitCheckReport) -> IdealsSection {
    let ideals: Vec<IdealReport> = basis
        .ideals
        .iter()
        .enumerate()
        .map(|(i, ideal)| IdealReport {
            index: i + 1,
            support: ideal.support.iter().map(|k| k + 1).collect(),
            degree: ideal.degree(),
            multiplicity: ideal.multiplicity,
            conjugate_partner: ideal.conjugate_partner + 1,
        })
        .collect();
    IdealsSection {
        count: ideals.len(),
        sum_degree_squares: basis.ideals.iter().map(|i| i.degree() * i.degree()).sum(),
        sum_multiplicity_degree: basis
            .ideals
            .iter()
            .map(|i| i.multiplicity * i.degree() as u64)
            .sum(),
        ideals,
        unit_residuals: *checks,
        unit_residuals_pass: checks.pass(tol::UNIT_RESIDUAL),
    }
}

/// One Krein matrix with its full entries and PSD status; the triple and
/// support fibers are 1-based, entries are `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KreinEntryReport {
    pub triple: (usize, usize, usize),
    pub support: Vec<usize>,
    pub matrix: Vec<Vec<[f64; 2]>>,
    pub min_eigenvalue: f64,
    pub status: Verdict,
}

/// Closure residual for one unordered ideal pair, 1-based.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairClosure {
    pub pair: (usize, usize),
    pub residual: f64,
}

/// Krein section: the table itself plus the aggregate health checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KreinSection {
    pub entries: Vec<KreinEntryReport>,
    pub closure: Vec<PairClosure>,
    pub max_closure_residual: f64,
    pub structural: StructuralChecks,
    pub structural_pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<TripleCheck>,
}

pub fn krein_section(table: &KreinTable, feas: &FeasibilityReport) -> KreinSection {
    let by_triple: std::collections::BTreeMap<(usize, usize, usize), &TripleCheck> =
        feas.triples.iter().map(|c| (c.triple, c)).collect();
    let mut entries = Vec::new();
    for (&(s, t, u), q) in &table.entries {
        if s > t {
            continue;
        }
        let check = by_triple[&(s + 1, t + 1, u + 1)];
        entries.push(KreinEntryReport {
            triple: (s + 1, t + 1, u + 1),
            support: table
                .triple_support(s, t, u)
                .iter()
                .map(|k| k + 1)
                .collect(),
            matrix: q.to_pairs(),
            min_eigenvalue: check.min_eigenvalue,
            status: check.status,
        });
    }
    let closure: Vec<PairClosure> = table
        .closure
        .iter()
        .filter(|(&(s, t), _)| s <= t)
        .map(|(&(s, t), &residual)| PairClosure {
            pair: (s + 1, t + 1),
            residual,
        })
        .collect();
    let max_closure_residual = closure.iter().fold(0.0f64, |m, c| m.max(c.residual));
    KreinSection {
        entries,
        closure,
        max_closure_residual,
        structural: feas.structural,
        structural_pass: feas.structural_pass,
        witness: feas.krein_witness.clone(),
    }
}

/// One closed-form matrix entry, keyed by 1-based ideal triple.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormEntry {
    pub triple: (usize, usize, usize),
    pub matrix: Vec<Vec<[f64; 2]>>,
}

/// Serializable view of a closed-form Krein table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormReport {
    pub s: u64,
    pub t: u64,
    pub multiplicities: [f64; 4],
    pub supports: [Vec<usize>; 4],
    pub entries: Vec<ClosedFormEntry>,
}

pub fn closed_form_report(table: &ClosedFormTable) -> ClosedFormReport {
    ClosedFormReport {
        s: table.s,
        t: table.t,
        multiplicities: table.multiplicities,
        supports: table.supports.clone(),
        entries: table
            .matrices
            .iter()
            .map(|(&triple, m)| ClosedFormEntry {
                triple,
                matrix: m.to_pairs(),
            })
            .collect(),
    }
}

/// Top-level report, `{meta, validation, ideals, krein, bounds, verdict}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub meta: Meta,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub validation: Option<ValidationReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ideals: Option<IdealsSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub krein: Option<KreinSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounds: Option<Vec<BoundCheck>>,
    pub verdict: String,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization cannot fail");
        s.push('\n');
        s
    }
}

pub fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Feasible => "feasible",
        Verdict::Boundary => "boundary",
        Verdict::Infeasible => "infeasible",
    }
}

/// Runs the full pipeline (exhaustive validation, decomposition, Krein
/// table, feasibility tests) and assembles the standard report. Fails on
/// axiom violations and non-fiber-commutative input.
pub fn analyze(
    cc: &CoherentConfiguration,
    source: &str,
    seed: u64,
    tols: &Tolerances,
) -> Result<Report> {
    let validation = validate_axioms(cc, ValidationMode::Exhaustive);
    if !validation.axioms_pass() {
        return Err(Error::Malformed(first_axiom_failure(&validation)));
    }
    let basis = decompose(cc, seed, tols)?;
    let checks = verify_units(cc, &basis);
    let table = krein_all(&basis)?;
    let feas = feasibility_report(&table, &basis, tols)?;
    Ok(Report {
        meta: Meta::new(source, seed, *tols, cc.n(), cc.fiber_sizes().to_vec()),
        validation: Some(validation),
        ideals: Some(ideals_section(&basis, &checks)),
        krein: Some(krein_section(&table, &feas)),
        bounds: Some(feas.bounds.clone()),
        verdict: verdict_name(feas.verdict).to_string(),
    })
}

fn first_axiom_failure(v: &ValidationReport) -> String {
    let checks = [
        ("identity", &v.identity),
        ("partition", &v.partition),
        ("transpose", &v.transpose),
        ("intersection", &v.intersection),
    ];
    for (name, check) in checks {
        if !check.pass {
            return match &check.witness {
                Some(w) => format!("{name} axiom fails: {w}"),
                None => format!("{name} axiom fails"),
            };
        }
    }
    "axiom failure without a recorded witness".to_string()
}

fn format_fibers(fibers: &[usize]) -> String {
    let inner: Vec<String> = fibers.iter().map(|k| k.to_string()).collect();
    format!("{{{}}}", inner.join(","))
}

fn format_triple((s, t, u): (usize, usize, usize)) -> String {
    format!("Q_{{{s},{t}}}^{u}")
}

fn format_complex(z: Complex64) -> String {
    if z.im.abs() < 1e-12 {
        format!("{:.6}", z.re)
    } else {
        format!("{:.6}{:+.6}i", z.re, z.im)
    }
}

fn format_matrix(m: &CMatrix, indent: &str) -> String {
    let mut out = String::new();
    let mut widths = vec![0usize; m.cols()];
    for c in 0..m.cols() {
        for r in 0..m.rows() {
            widths[c] = widths[c].max(format_complex(m[(r, c)]).len());
        }
    }
    for r in 0..m.rows() {
        let row: Vec<String> = (0..m.cols())
            .map(|c| format!("{:>w$}", format_complex(m[(r, c)]), w = widths[c]))
            .collect();
        let _ = writeln!(out, "{indent}[ {} ]", row.join("  "));
    }
    out
}

/// Renders a pipeline report as human-readable text.
pub fn render_text(report: &Report) -> String {
    let mut out = String::new();
    let meta = &report.meta;
    let _ = writeln!(out, "{} {}", meta.tool, meta.version);
    let fibers: Vec<String> = meta.fibers.iter().map(|m| m.to_string()).collect();
    let _ = writeln!(
        out,
        "source: {} | seed: {} | n = {} | fibers: [{}]",
        meta.source,
        meta.seed,
        meta.n,
        fibers.join(", ")
    );

    if let Some(v) = &report.validation {
        let _ = writeln!(out, "\nvalidation");
        let mark = |c: &crate::config::AxiomCheck| if c.pass { "pass" } else { "FAIL" };
        let _ = writeln!(
            out,
            "  identity: {}  partition: {}  transpose: {}  intersection: {}",
            mark(&v.identity),
            mark(&v.partition),
            mark(&v.transpose),
            mark(&v.intersection)
        );
        for check in [&v.identity, &v.partition, &v.transpose, &v.intersection] {
            if let Some(w) = &check.witness {
                let _ = writeln!(out, "  witness: {w}");
            }
        }
        if let Some(cells) = v.sampled_cells {
            let _ = writeln!(out, "  sampled cells: {cells}");
        }
        let commutative = if v.fiber_commutative {
            "yes".to_string()
        } else if let Some((fiber, i, j, k)) = v.commutativity_witness {
            format!("no (fiber {fiber}: p({i},{j};{k}) != p({j},{i};{k}))")
        } else {
            "no".to_string()
        };
        let _ = writeln!(
            out,
            "  fiber-commutative: {}  fiber-symmetric: {}",
            commutative,
            if v.fiber_symmetric { "yes" } else { "no" }
        );
    }

    if let Some(ideals) = &report.ideals {
        let _ = writeln!(out, "\nideals ({})", ideals.count);
        for i in &ideals.ideals {
            let _ = writeln!(
                out,
                "  #{}: support {}, degree {}, multiplicity {}, conjugate #{}",
                i.index,
                format_fibers(&i.support),
                i.degree,
                i.multiplicity,
                i.conjugate_partner
            );
        }
        let _ = writeln!(
            out,
            "  sum e^2 = {} | sum h*e = {}",
            ideals.sum_degree_squares, ideals.sum_multiplicity_degree
        );
        let u = &ideals.unit_residuals;
        let _ = writeln!(
            out,
            "  unit residuals: product {:.1e}, star {:.1e}, conjugation {:.1e}, resolution {:.1e}, span {:.1e} ({})",
            u.product_residual,
            u.star_residual,
            u.conjugation_residual,
            u.resolution_residual,
            u.span_residual,
            if ideals.unit_residuals_pass { "pass" } else { "FAIL" }
        );
    }

    if let Some(krein) = &report.krein {
        let _ = writeln!(out, "\nkrein ({} matrices)", krein.entries.len());
        let _ = writeln!(
            out,
            "  max closure residual: {:.1e}",
            krein.max_closure_residual
        );
        let s = &krein.structural;
        let _ = writeln!(
            out,
            "  structural residuals: hermitian {:.1e}, symmetry {:.1e}, principal-left {:.1e}, principal-right {:.1e}, trace {:.1e} ({})",
            s.hermitian,
            s.pair_symmetry,
            s.principal_left,
            s.principal_right,
            s.trace_consistency,
            if krein.structural_pass { "pass" } else { "FAIL" }
        );
        for e in &krein.entries {
            let _ = writeln!(
                out,
                "  {} over fibers {}: min eigenvalue {:.9}, {}",
                format_triple(e.triple),
                format_fibers(&e.support),
                e.min_eigenvalue,
                verdict_name(e.status)
            );
        }
        if let Some(w) = &krein.witness {
            let _ = writeln!(
                out,
                "  witness: {} has min eigenvalue {:.12}",
                format_triple(w.triple),
                w.min_eigenvalue
            );
        }
    }

    if let Some(bounds) = &report.bounds {
        let _ = writeln!(out, "\nabsolute bounds ({} pairs)", bounds.len());
        for b in bounds {
            let _ = writeln!(
                out,
                "  ({},{}): {} <= {} {}{}",
                b.pair.0,
                b.pair.1,
                b.lhs,
                b.rhs,
                if b.pass { "pass" } else { "FAIL" },
                if b.tight { ", tight" } else { "" }
            );
        }
    }

    let _ = writeln!(out, "\nverdict: {}", report.verdict);
    out
}

/// Renders the closed-form Krein table of a parameter pair as text.
pub fn render_closed_form_text(table: &ClosedFormTable) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "closed-form Krein matrices for a quadrangle of order ({}, {})",
        table.s, table.t
    );
    let h: Vec<String> = table
        .multiplicities
        .iter()
        .map(|h| format!("{h:.6}"))
        .collect();
    let _ = writeln!(out, "multiplicities: [{}]", h.join(", "));
    let f: Vec<String> = table
        .supports
        .iter()
        .enumerate()
        .map(|(i, s)| format!("F_{} = {}", i + 1, format_fibers(s)))
        .collect();
    let _ = writeln!(out, "supports: {}", f.join(", "));
    for (&triple, matrix) in &table.matrices {
        let _ = writeln!(out, "{}:", format_triple(triple));
        out.push_str(&format_matrix(matrix, "  "));
    }
    out
}

/// Renders a single-pair screening verdict as text.
pub fn render_gq_feasibility_text(feas: &GqFeasibility) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "GQ({},{}) screening: {}",
        feas.s,
        feas.t,
        verdict_name(feas.verdict)
    );
    if let Some(w) = &feas.witness {
        let _ = writeln!(
            out,
            "  witness: {} has min eigenvalue {:.12}",
            format_triple(w.triple),
            w.min_eigenvalue
        );
    }
    for c in &feas.checks {
        let _ = writeln!(
            out,
            "  {}: min eigenvalue {:.9}, {}",
            format_triple(c.triple),
            c.min_eigenvalue,
            verdict_name(c.status)
        );
    }
    out
}

/// Renders a screening sweep as a fixed-width table.
pub fn render_sweep_text(rows: &[GqFeasibility]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{:>3} {:>3}  {:<10}  witness", "s", "t", "verdict");
    for r in rows {
        let witness = match &r.witness {
            Some(w) => format!("{} = {:.9}", format_triple(w.triple), w.min_eigenvalue),
            None => "-".to_string(),
        };
        let _ = writeln!(
            out,
            "{:>3} {:>3}  {:<10}  {}",
            r.s,
            r.t,
            verdict_name(r.verdict),
            witness
        );
    }
    out
}
