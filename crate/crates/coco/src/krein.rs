//! Matrices of Krein parameters and the feasibility tests built on them.
//!
//! For ideals s, t, u with common support fibers F = F_s ∩ F_t ∩ F_u, the
//! Krein matrix Q_{s,t}^u is indexed by F×F and collects the coefficients
//! of the Hadamard products of matrix units:
//!
//!   ε_{i,j}^s ∘ ε_{i,j}^t = (1/√(|X_i||X_j|)) Σ_u (Q_{s,t}^u)_{i,j} ε_{i,j}^u.
//!
//! Every Q_{s,t}^u of an actual configuration is Hermitian and positive
//! semidefinite; a negative eigenvalue certifies that no configuration
//! with the given algebraic data exists. The absolute bound supplies a
//! second, rank-based test. Both run on the gauge-fixed basis from
//! [`crate::decomp`], and their verdicts do not depend on the gauge.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decomp::MatrixUnitBasis;
use crate::linalg::{hermitian_eig, numeric_rank, CMatrix};
use crate::tol::{self, Tolerances};
use crate::{Error, Result};

/// Feasibility status of a parameter pair or a single Krein matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Feasible,
    Boundary,
    Infeasible,
}

/// One Krein matrix with its smallest eigenvalue and status. The triple
/// holds 1-based ideal labels, so (3,3,3) names Q_{3,3}^3.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TripleCheck {
    pub triple: (usize, usize, usize),
    pub min_eigenvalue: f64,
    pub status: Verdict,
}

/// All Krein matrices of a decomposition, keyed by 0-based ideal triples
/// (s, t, u); both (s,t,u) and (t,s,u) are present for pairs that share
/// support. Closure residuals measure how exactly the Hadamard products
/// of units re-expand in the unit basis.
#[derive(Debug, Clone, PartialEq)]
pub struct KreinTable {
    pub supports: Vec<Vec<usize>>,
    pub multiplicities: Vec<u64>,
    pub conjugate: Vec<usize>,
    pub fiber_sizes: Vec<usize>,
    pub entries: BTreeMap<(usize, usize, usize), CMatrix>,
    pub closure: BTreeMap<(usize, usize), f64>,
}

impl KreinTable {
    pub fn ideal_count(&self) -> usize {
        self.supports.len()
    }

    pub fn get(&self, s: usize, t: usize, u: usize) -> Option<&CMatrix> {
        self.entries.get(&(s, t, u))
    }

    /// Fibers indexing Q_{s,t}^u, ascending.
    pub fn triple_support(&self, s: usize, t: usize, u: usize) -> Vec<usize> {
        self.supports[s]
            .iter()
            .filter(|k| self.supports[t].contains(k) && self.supports[u].contains(k))
            .copied()
            .collect()
    }
}

fn classify(min_eig: f64, max_eig: f64, tol_psd: f64) -> Verdict {
    let scale = min_eig.abs().max(max_eig.abs()).max(1.0);
    if min_eig < -tol_psd * scale {
        Verdict::Infeasible
    } else if min_eig <= tol_psd * scale {
        Verdict::Boundary
    } else {
        Verdict::Feasible
    }
}

/// Computes all Q_{s,t}^u for one ordered pair (s, t), together with the
/// worst Hadamard-closure residual over the pair's blocks.
fn compute_pair(
    basis: &MatrixUnitBasis,
    s: usize,
    t: usize,
) -> Result<(BTreeMap<usize, CMatrix>, f64)> {
    let ideals = &basis.ideals;
    let common: Vec<usize> = ideals[s]
        .support
        .iter()
        .filter(|k| ideals[t].support.contains(k))
        .copied()
        .collect();

    let mut positions: BTreeMap<usize, BTreeMap<usize, usize>> = BTreeMap::new();
    let mut matrices: BTreeMap<usize, CMatrix> = BTreeMap::new();
    for (u, ideal) in ideals.iter().enumerate() {
        let su: Vec<usize> = common
            .iter()
            .filter(|k| ideal.support.contains(k))
            .copied()
            .collect();
        if su.is_empty() {
            continue;
        }
        positions.insert(u, su.iter().enumerate().map(|(p, &k)| (k, p)).collect());
        matrices.insert(u, CMatrix::zeros(su.len(), su.len()));
    }

    let mut worst = 0.0f64;
    for &i in &common {
        for &j in &common {
            let had = ideals[s].unit(i, j).hadamard(ideals[t].unit(i, j));
            let scale = ((basis.fiber_sizes[i] * basis.fiber_sizes[j]) as f64).sqrt();
            let mut reconstruction = CMatrix::zeros(had.rows(), had.cols());
            for (&u, q) in &mut matrices {
                let Some(unit) = ideals[u].units.get(&(i, j)) else {
                    continue;
                };
                let coeff = unit.inner(&had) / ideals[u].multiplicity as f64;
                reconstruction = &reconstruction + &unit.scaled(coeff);
                q[(positions[&u][&i], positions[&u][&j])] = coeff * scale;
            }
            worst = worst.max(had.dist_fro(&reconstruction));
        }
    }
    if worst > tol::CLOSURE_GATE {
        return Err(Error::HadamardClosure {
            s: s + 1,
            t: t + 1,
            residual: worst,
        });
    }
    Ok((matrices, worst))
}

/// Computes one Krein matrix Q_{s,t}^u (0-based ideal indices) and the
/// closure residual of its (s, t) pair.
pub fn krein_matrix(
    basis: &MatrixUnitBasis,
    s: usize,
    t: usize,
    u: usize,
) -> Result<(CMatrix, f64)> {
    let r = basis.ideals.len();
    for idx in [s, t, u] {
        if idx >= r {
            return Err(Error::NoSuchIdeal(idx + 1));
        }
    }
    let (mut matrices, residual) = compute_pair(basis, s, t)?;
    if matrices.is_empty() {
        return Err(Error::EmptySupport { s: s + 1, t: t + 1 });
    }
    matrices.remove(&u).map(|q| (q, residual)).ok_or_else(|| {
        Error::InvalidArgument(format!(
            "ideals ({},{},{}) share no fiber; the Krein matrix is empty",
            s + 1,
            t + 1,
            u + 1
        ))
    })
}

/// Computes the full table of Krein matrices and closure residuals.
pub fn krein_all(basis: &MatrixUnitBasis) -> Result<KreinTable> {
    let r = basis.ideals.len();
    let pairs: Vec<(usize, usize)> = (0..r).flat_map(|s| (s..r).map(move |t| (s, t))).collect();
    let results: Vec<(usize, usize, BTreeMap<usize, CMatrix>, f64)> = pairs
        .into_par_iter()
        .map(|(s, t)| compute_pair(basis, s, t).map(|(m, res)| (s, t, m, res)))
        .collect::<Result<_>>()?;

    let mut entries = BTreeMap::new();
    let mut closure = BTreeMap::new();
    for (s, t, matrices, residual) in results {
        if matrices.is_empty() {
            continue;
        }
        for (u, q) in matrices {
            if s != t {
                entries.insert((t, s, u), q.clone());
            }
            entries.insert((s, t, u), q);
        }
        closure.insert((s, t), residual);
        closure.insert((t, s), residual);
    }

    Ok(KreinTable {
        supports: basis.ideals.iter().map(|i| i.support.clone()).collect(),
        multiplicities: basis.ideals.iter().map(|i| i.multiplicity).collect(),
        conjugate: basis.ideals.iter().map(|i| i.conjugate_partner).collect(),
        fiber_sizes: basis.fiber_sizes.clone(),
        entries,
        closure,
    })
}

/// Tests every Krein matrix for positive semidefiniteness. One check per
/// unordered pair (s, t) and ideal u; any actual configuration passes all
/// of them.
pub fn krein_condition(table: &KreinTable, tols: &Tolerances) -> Result<Vec<TripleCheck>> {
    let mut checks = Vec::new();
    for (&(s, t, u), q) in &table.entries {
        if s > t {
            continue;
        }
        let eig = hermitian_eig(q, tols.eig)?;
        let (min, max) = (eig.eigenvalues[0], *eig.eigenvalues.last().unwrap());
        checks.push(TripleCheck {
            triple: (s + 1, t + 1, u + 1),
            min_eigenvalue: min,
            status: classify(min, max, tols.psd),
        });
    }
    Ok(checks)
}

/// Builds the matrix Q̃_{s,t}^u(B, C) with entries B'∘C'∘Q_{s,t}^u on the
/// common support, zero-padded to F_u×F_u, and tests it for positive
/// semidefiniteness. B must be Hermitian PSD over F_s and C over F_t;
/// for any actual configuration the result is again PSD.
pub fn general_krein_check(
    table: &KreinTable,
    s: usize,
    t: usize,
    u: usize,
    b: &CMatrix,
    c: &CMatrix,
    tols: &Tolerances,
) -> Result<(CMatrix, TripleCheck)> {
    let r = table.ideal_count();
    for idx in [s, t, u] {
        if idx >= r {
            return Err(Error::NoSuchIdeal(idx + 1));
        }
    }
    for (m, fibers) in [(b, &table.supports[s]), (c, &table.supports[t])] {
        if m.rows() != fibers.len() || m.cols() != fibers.len() {
            return Err(Error::InvalidArgument(format!(
                "input matrix is {}×{} but the ideal is supported on {} fibers",
                m.rows(),
                m.cols(),
                fibers.len()
            )));
        }
        let eig = hermitian_eig(m, tols.eig)?;
        let min = eig.eigenvalues[0];
        let scale = min
            .abs()
            .max(eig.eigenvalues.last().unwrap().abs())
            .max(1.0);
        if min < -tols.psd * scale {
            return Err(Error::InputNotPsd { min_eig: min });
        }
    }

    let q = table.get(s, t, u).ok_or_else(|| {
        Error::InvalidArgument(format!(
            "ideals ({},{},{}) share no fiber; the check is vacuous",
            s + 1,
            t + 1,
            u + 1
        ))
    })?;
    let triple_fibers = table.triple_support(s, t, u);
    let pos = |fibers: &[usize], k: usize| fibers.iter().position(|&x| x == k).unwrap();

    let mut padded = CMatrix::zeros(table.supports[u].len(), table.supports[u].len());
    for (a, &i) in triple_fibers.iter().enumerate() {
        for (d, &j) in triple_fibers.iter().enumerate() {
            let value = b[(pos(&table.supports[s], i), pos(&table.supports[s], j))]
                * c[(pos(&table.supports[t], i), pos(&table.supports[t], j))]
                * q[(a, d)];
            padded[(pos(&table.supports[u], i), pos(&table.supports[u], j))] = value;
        }
    }

    let eig = hermitian_eig(&padded, tols.eig)?;
    let (min, max) = (eig.eigenvalues[0], *eig.eigenvalues.last().unwrap());
    let check = TripleCheck {
        triple: (s + 1, t + 1, u + 1),
        min_eigenvalue: min,
        status: classify(min, max, tols.psd),
    };
    Ok((padded, check))
}

/// One line of the absolute-bound ledger for an unordered ideal pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    /// 1-based ideal labels, s ≤ t.
    pub pair: (usize, usize),
    /// Σ_u h_u · rank Q_{s,t}^u over ideals u sharing support.
    pub lhs: u64,
    /// h_s·h_t for s ≠ t, h_s(h_s+1)/2 for s = t.
    pub rhs: u64,
    pub tight: bool,
    pub pass: bool,
}

/// Evaluates the absolute bound for every unordered pair of ideals.
/// Triples with empty common support contribute rank 0.
pub fn absolute_bound(table: &KreinTable, tols: &Tolerances) -> Result<Vec<BoundCheck>> {
    let r = table.ideal_count();
    let h = &table.multiplicities;
    let mut checks = Vec::new();
    for s in 0..r {
        for t in s..r {
            let mut lhs = 0u64;
            for (u, &hu) in h.iter().enumerate() {
                if let Some(q) = table.get(s, t, u) {
                    lhs += hu * numeric_rank(q, tols.rank)? as u64;
                }
            }
            let rhs = if s == t {
                h[s] * (h[s] + 1) / 2
            } else {
                h[s] * h[t]
            };
            checks.push(BoundCheck {
                pair: (s + 1, t + 1),
                lhs,
                rhs,
                tight: lhs == rhs,
                pass: lhs <= rhs,
            });
        }
    }
    Ok(checks)
}

/// Residuals of the structural identities every Krein table must satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StructuralChecks {
    /// max ‖Q − Q*‖ over all stored matrices.
    pub hermitian: f64,
    /// max ‖Q_{s,t}^u − Q_{t,s}^u‖; exact here because Hadamard products
    /// commute entrywise, kept as a table-integrity guard.
    pub pair_symmetry: f64,
    /// Q_{1,s}^t = δ_{s,t}·J on the common support.
    pub principal_left: f64,
    /// Q_{s,t}^1 = δ_{ŝ,t}·h_t·J on the common support.
    pub principal_right: f64,
    /// tr ε_{i,i}^s independent of i and equal to the recorded h_s.
    pub trace_consistency: f64,
}

impl StructuralChecks {
    pub fn max(&self) -> f64 {
        self.hermitian
            .max(self.pair_symmetry)
            .max(self.principal_left)
            .max(self.principal_right)
            .max(self.trace_consistency)
    }

    pub fn pass(&self, tol: f64) -> bool {
        self.max() <= tol
    }
}

/// Measures the structural identities of the table against the basis it
/// was computed from.
pub fn structural_checks(table: &KreinTable, basis: &MatrixUnitBasis) -> StructuralChecks {
    let r = table.ideal_count();
    let principal = MatrixUnitBasis::PRINCIPAL;

    let mut hermitian = 0.0f64;
    let mut pair_symmetry = 0.0f64;
    for (&(s, t, u), q) in &table.entries {
        hermitian = hermitian.max(q.hermitian_residual());
        if let Some(mirror) = table.get(t, s, u) {
            pair_symmetry = pair_symmetry.max(q.dist_fro(mirror));
        }
    }

    let mut principal_left = 0.0f64;
    let mut principal_right = 0.0f64;
    for s in 0..r {
        for t in 0..r {
            if let Some(q) = table.get(principal, s, t) {
                let expected = if s == t {
                    CMatrix::ones(q.rows(), q.cols())
                } else {
                    CMatrix::zeros(q.rows(), q.cols())
                };
                principal_left = principal_left.max(q.dist_max(&expected));
            }
            if let Some(q) = table.get(s, t, principal) {
                let expected = if table.conjugate[s] == t {
                    CMatrix::ones(q.rows(), q.cols())
                        .scaled(Complex64::new(table.multiplicities[t] as f64, 0.0))
                } else {
                    CMatrix::zeros(q.rows(), q.cols())
                };
                principal_right = principal_right.max(q.dist_max(&expected));
            }
        }
    }

    let mut trace_consistency = 0.0f64;
    for ideal in &basis.ideals {
        let h = ideal.multiplicity as f64;
        for &i in &ideal.support {
            let tr = ideal.unit(i, i).trace();
            trace_consistency = trace_consistency.max((tr - Complex64::new(h, 0.0)).norm());
        }
    }

    StructuralChecks {
        hermitian,
        pair_symmetry,
        principal_left,
        principal_right,
        trace_consistency,
    }
}

/// Aggregated feasibility evidence: per-triple PSD checks, the
/// absolute-bound ledger, structural residuals, and one overall verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub triples: Vec<TripleCheck>,
    pub bounds: Vec<BoundCheck>,
    pub structural: StructuralChecks,
    pub structural_pass: bool,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub krein_witness: Option<TripleCheck>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound_witness: Option<BoundCheck>,
}

/// Runs every feasibility test and aggregates the verdict: infeasible when
/// any Krein matrix fails PSD, any absolute bound fails, or a structural
/// identity breaks; otherwise boundary when some Krein matrix of three
/// non-principal ideals has a zero eigenvalue (principal-ideal matrices
/// are all-ones patterns and singular by construction); otherwise
/// feasible.
pub fn feasibility_report(
    table: &KreinTable,
    basis: &MatrixUnitBasis,
    tols: &Tolerances,
) -> Result<FeasibilityReport> {
    let triples = krein_condition(table, tols)?;
    let bounds = absolute_bound(table, tols)?;
    let structural = structural_checks(table, basis);
    let structural_pass = structural.pass(tol::UNIT_RESIDUAL);

    let krein_witness = triples
        .iter()
        .filter(|c| c.status == Verdict::Infeasible)
        .min_by(|a, b| a.min_eigenvalue.partial_cmp(&b.min_eigenvalue).unwrap())
        .cloned();
    let bound_witness = bounds.iter().find(|b| !b.pass).cloned();

    let principal_label = MatrixUnitBasis::PRINCIPAL + 1;
    let boundary = triples.iter().any(|c| {
        c.status == Verdict::Boundary
            && c.triple.0 != principal_label
            && c.triple.1 != principal_label
            && c.triple.2 != principal_label
    });

    let verdict = if krein_witness.is_some() || bound_witness.is_some() || !structural_pass {
        Verdict::Infeasible
    } else if boundary {
        Verdict::Boundary
    } else {
        Verdict::Feasible
    };

    Ok(FeasibilityReport {
        triples,
        bounds,
        structural,
        structural_pass,
        verdict,
        krein_witness,
        bound_witness,
    })
}
