//! Generalized quadrangles: small generators, validation, conversion to
//! two-fiber coherent configurations, and a closed-form feasibility
//! screener for parameter pairs (s, t).
//!
//! A generalized quadrangle of order (s, t) is a point-line incidence
//! structure in which every line has s+1 points, every point lies on t+1
//! lines, and for every non-incident point-line pair (p, l) there is
//! exactly one pair (q, m) with q on l, p on m, and q on m.
//!
//! The screener never builds an incidence structure: the Krein matrices of
//! the associated two-fiber configuration are known in closed form as
//! rational expressions in (s, t) (up to one square root in an off-diagonal
//! entry), so candidate parameters can be tested directly. Entries are
//! evaluated in floating point from exact integer inputs.

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::CoherentConfiguration;
use crate::linalg::{hermitian_eig, CMatrix};
use crate::{tol, Error, Result};

/// A point-line incidence structure with flags stored as (point, line)
/// pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct IncidenceStructure {
    points: usize,
    lines: usize,
    flags: BTreeSet<(usize, usize)>,
}

impl IncidenceStructure {
    pub fn new(
        points: usize,
        lines: usize,
        flags: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let flags: BTreeSet<(usize, usize)> = flags.into_iter().collect();
        for &(p, l) in &flags {
            if p >= points || l >= lines {
                return Err(Error::InvalidArgument(format!(
                    "flag ({p},{l}) outside {points} points / {lines} lines"
                )));
            }
        }
        Ok(IncidenceStructure {
            points,
            lines,
            flags,
        })
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn lines(&self) -> usize {
        self.lines
    }

    pub fn flags(&self) -> &BTreeSet<(usize, usize)> {
        &self.flags
    }

    pub fn incident(&self, p: usize, l: usize) -> bool {
        self.flags.contains(&(p, l))
    }

    /// Lines through each point.
    pub fn point_lines(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.points];
        for &(p, l) in &self.flags {
            out[p].push(l);
        }
        out
    }

    /// Points on each line.
    pub fn line_points(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.lines];
        for &(p, l) in &self.flags {
            out[l].push(p);
        }
        out
    }
}

/// The (s+1) × (s+1) grid: rows and columns as lines. Order (s, 1).
pub fn gen_gq_grid(s: u64) -> Result<IncidenceStructure> {
    if s < 1 {
        return Err(Error::InvalidArgument("grid needs s >= 1".into()));
    }
    let w = s as usize + 1;
    let mut flags = Vec::new();
    for r in 0..w {
        for c in 0..w {
            flags.push((r * w + c, r));
            flags.push((r * w + c, w + c));
        }
    }
    IncidenceStructure::new(w * w, 2 * w, flags)
}

/// The dual grid: 2(t+1) points (rows and columns), (t+1)² cell lines.
/// Order (1, t).
pub fn gen_gq_dualgrid(t: u64) -> Result<IncidenceStructure> {
    if t < 1 {
        return Err(Error::InvalidArgument("dual grid needs t >= 1".into()));
    }
    let w = t as usize + 1;
    let mut flags = Vec::new();
    for r in 0..w {
        for c in 0..w {
            flags.push((r, r * w + c));
            flags.push((w + c, r * w + c));
        }
    }
    IncidenceStructure::new(2 * w, w * w, flags)
}

/// The unique generalized quadrangle of order (2, 2): points are the 15
/// unordered pairs (duads) of a 6-element set, lines are the 15 partitions
/// of that set into three duads (synthemes), incidence is membership.
pub fn gen_gq_w2() -> IncidenceStructure {
    let mut duads = Vec::new();
    for a in 0..6usize {
        for b in (a + 1)..6 {
            duads.push((a, b));
        }
    }
    let duad_index = |d: (usize, usize)| duads.iter().position(|&x| x == d).unwrap();

    fn matchings(elems: &[usize]) -> Vec<Vec<(usize, usize)>> {
        if elems.is_empty() {
            return vec![Vec::new()];
        }
        let a = elems[0];
        let mut out = Vec::new();
        for &b in &elems[1..] {
            let rest: Vec<usize> = elems[1..].iter().copied().filter(|&e| e != b).collect();
            for mut m in matchings(&rest) {
                m.insert(0, (a, b));
                out.push(m);
            }
        }
        out
    }

    let synthemes = matchings(&[0, 1, 2, 3, 4, 5]);
    let mut flags = Vec::new();
    for (l, syn) in synthemes.iter().enumerate() {
        for &d in syn {
            flags.push((duad_index(d), l));
        }
    }
    IncidenceStructure::new(15, 15, flags).expect("duad/syntheme construction is well-formed")
}

/// Checks the three quadrangle axioms and returns (s, t). Degenerate
/// structures (no anti-flag, or s = 0 or t = 0) are rejected.
pub fn validate_gq(inc: &IncidenceStructure) -> Result<(u64, u64)> {
    if inc.points == 0 || inc.lines == 0 {
        return Err(Error::GqViolation {
            axiom: 1,
            detail: "structure has no points or no lines".into(),
        });
    }
    let line_points = inc.line_points();
    let point_lines = inc.point_lines();

    let size = line_points[0].len();
    if let Some(l) = line_points.iter().position(|pts| pts.len() != size) {
        return Err(Error::GqViolation {
            axiom: 1,
            detail: format!(
                "line 0 has {size} points but line {l} has {}",
                line_points[l].len()
            ),
        });
    }
    if size < 2 {
        return Err(Error::GqViolation {
            axiom: 1,
            detail: format!("lines have {size} point(s); s = |line| - 1 must be at least 1"),
        });
    }
    let degree = point_lines[0].len();
    if let Some(p) = point_lines.iter().position(|ls| ls.len() != degree) {
        return Err(Error::GqViolation {
            axiom: 2,
            detail: format!(
                "point 0 lies on {degree} lines but point {p} lies on {}",
                point_lines[p].len()
            ),
        });
    }
    if degree < 2 {
        return Err(Error::GqViolation {
            axiom: 2,
            detail: format!("points lie on {degree} line(s); t = degree - 1 must be at least 1"),
        });
    }

    let mut saw_anti_flag = false;
    for p in 0..inc.points {
        for (l, points_on_l) in line_points.iter().enumerate() {
            if inc.incident(p, l) {
                continue;
            }
            saw_anti_flag = true;
            let mut pairs = 0usize;
            for &q in points_on_l {
                pairs += point_lines[p]
                    .iter()
                    .filter(|&&m| point_lines[q].contains(&m))
                    .count();
            }
            if pairs != 1 {
                return Err(Error::GqViolation {
                    axiom: 3,
                    detail: format!(
                        "non-incident pair (point {p}, line {l}) sees {pairs} collinearity pairs, expected exactly 1"
                    ),
                });
            }
        }
    }
    if !saw_anti_flag {
        return Err(Error::GqViolation {
            axiom: 3,
            detail: "every point lies on every line; no anti-flag exists to determine (s, t)"
                .into(),
        });
    }
    Ok((size as u64 - 1, degree as u64 - 1))
}

/// Color layout of the two-fiber configuration built from a quadrangle:
/// point block 0..2, point-line block 3..4, line-point block 5..6,
/// line block 7..9.
pub const GQ_COLOR_LABELS: [&str; 10] = [
    "point-id",
    "collinear",
    "non-collinear",
    "on-line",
    "off-line",
    "through-point",
    "not-through-point",
    "line-id",
    "concurrent",
    "non-concurrent",
];

/// Converts a validated quadrangle into a coherent configuration on the
/// fibers (points, lines) with the ten colors of [`GQ_COLOR_LABELS`].
pub fn gq_to_configuration(inc: &IncidenceStructure) -> Result<CoherentConfiguration> {
    validate_gq(inc)?;
    let np = inc.points;
    let nl = inc.lines;
    let n = np + nl;
    let point_lines = inc.point_lines();
    let line_points = inc.line_points();

    let collinear = |p: usize, q: usize| point_lines[p].iter().any(|m| point_lines[q].contains(m));
    let concurrent = |l: usize, m: usize| line_points[l].iter().any(|p| line_points[m].contains(p));

    let mut rows = vec![vec![0u32; n]; n];
    for (x, row) in rows.iter_mut().enumerate() {
        for (y, cell) in row.iter_mut().enumerate() {
            *cell = match (x < np, y < np) {
                (true, true) => {
                    if x == y {
                        0
                    } else if collinear(x, y) {
                        1
                    } else {
                        2
                    }
                }
                (true, false) => {
                    if inc.incident(x, y - np) {
                        3
                    } else {
                        4
                    }
                }
                (false, true) => {
                    if inc.incident(y, x - np) {
                        5
                    } else {
                        6
                    }
                }
                (false, false) => {
                    if x == y {
                        7
                    } else if concurrent(x - np, y - np) {
                        8
                    } else {
                        9
                    }
                }
            };
        }
    }
    CoherentConfiguration::from_parts(
        vec![np, nl],
        rows,
        Some(GQ_COLOR_LABELS.iter().map(|s| s.to_string()).collect()),
    )
}

pub use crate::krein::{TripleCheck, Verdict};

/// Closed-form screening result for one parameter pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GqFeasibility {
    pub s: u64,
    pub t: u64,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<TripleCheck>,
    pub checks: Vec<TripleCheck>,
}

/// All closed-form Krein matrices of the (hypothetical) quadrangle
/// configuration of order (s, t), keyed by 1-based ideal triples.
///
/// Ideal 1 is principal; ideal 2 is the other ideal supported on both
/// fibers; ideals 3 and 4 live on the point and line fiber respectively.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedFormTable {
    pub s: u64,
    pub t: u64,
    /// h_1..h_4; integral for genuine quadrangles but rational in general.
    pub multiplicities: [f64; 4],
    /// F_1..F_4 as 1-based fiber sets.
    pub supports: [Vec<usize>; 4],
    pub matrices: BTreeMap<(usize, usize, usize), CMatrix>,
}

const GQ_SUPPORTS: [&[usize]; 4] = [&[1, 2], &[1, 2], &[1], &[2]];

fn support_intersection(a: usize, b: usize, u: usize) -> Vec<usize> {
    GQ_SUPPORTS[a - 1]
        .iter()
        .copied()
        .filter(|f| GQ_SUPPORTS[b - 1].contains(f) && GQ_SUPPORTS[u - 1].contains(f))
        .collect()
}

fn sigma(s: f64, t: f64) -> f64 {
    (s + 1.0) * (t * t * (s * t + 2.0 * s - 1.0) + s * (s * t - 2.0 * t - 1.0))
}

fn tau(s: f64, t: f64) -> f64 {
    (s + t).powf(1.5) * (s * t - 1.0) * ((s + 1.0) * (t + 1.0)).sqrt()
}

fn gq_multiplicities(s: f64, t: f64) -> [f64; 4] {
    [
        1.0,
        s * t * (s + 1.0) * (t + 1.0) / (s + t),
        s * s * (s * t + 1.0) / (s + t),
        t * t * (s * t + 1.0) / (s + t),
    ]
}

/// The (a, b, u) entry family on the support F_a ∩ F_b ∩ F_u, or None when
/// that support is empty. Indices are 1-based ideals.
fn closed_q(s: f64, t: f64, a: usize, b: usize, u: usize) -> Option<CMatrix> {
    let support = support_intersection(a, b, u);
    if support.is_empty() {
        return None;
    }
    let d = support.len();
    let h = gq_multiplicities(s, t);
    let d2 = (s + t) * (s + t);

    let constant = |v: f64| CMatrix::from_fn(d, d, |_, _| Complex64::new(v, 0.0));

    if a == 1 || b == 1 {
        let other = if a == 1 { b } else { a };
        return Some(constant(if other == u { 1.0 } else { 0.0 }));
    }
    if u == 1 {
        return Some(constant(if a == b { h[b - 1] } else { 0.0 }));
    }
    let (lo, hi) = (a.min(b), a.max(b));
    let value = match (lo, hi, u) {
        (2, 2, 2) => {
            let m = CMatrix::from_real_rows(&[
                vec![sigma(s, t) / d2, tau(s, t) / d2],
                vec![tau(s, t) / d2, sigma(t, s) / d2],
            ]);
            return Some(m);
        }
        (2, 2, 3) => t * (s * t + 1.0) * (s + 1.0) * (t + 1.0) / d2,
        (2, 2, 4) => s * (s * t + 1.0) * (s + 1.0) * (t + 1.0) / d2,
        (2, 3, 2) => s * (s * t + 1.0) * (s * t + 1.0) / d2,
        (2, 3, 3) => t * (t + 1.0) * (s + 1.0) * (s + 1.0) * (s - 1.0) / d2,
        (2, 4, 2) => t * (s * t + 1.0) * (s * t + 1.0) / d2,
        (2, 4, 4) => s * (s + 1.0) * (t + 1.0) * (t + 1.0) * (t - 1.0) / d2,
        (3, 3, 2) => s * (s * t + 1.0) * (s + 1.0) * (s - 1.0) / d2,
        (3, 3, 3) => (s * t + 1.0) * (s - 1.0) * (s * s - t) / d2,
        (4, 4, 2) => t * (s * t + 1.0) * (t + 1.0) * (t - 1.0) / d2,
        (4, 4, 4) => (s * t + 1.0) * (t - 1.0) * (t * t - s) / d2,
        _ => unreachable!("all nonempty supports are covered"),
    };
    Some(constant(value))
}

/// Evaluates every closed-form Krein matrix for parameters (s, t) ≥ 1.
pub fn gq_closed_form(s: u64, t: u64) -> Result<ClosedFormTable> {
    if s < 1 || t < 1 {
        return Err(Error::InvalidArgument(format!(
            "quadrangle parameters must be at least 1, got ({s}, {t})"
        )));
    }
    let (sf, tf) = (s as f64, t as f64);
    let mut matrices = BTreeMap::new();
    for a in 1..=4usize {
        for b in 1..=4usize {
            for u in 1..=4usize {
                if let Some(m) = closed_q(sf, tf, a, b, u) {
                    matrices.insert((a, b, u), m);
                }
            }
        }
    }
    Ok(ClosedFormTable {
        s,
        t,
        multiplicities: gq_multiplicities(sf, tf),
        supports: [vec![1, 2], vec![1, 2], vec![1], vec![2]],
        matrices,
    })
}

/// Screens a parameter pair against the closed-form Krein matrices that
/// genuinely depend on (s, t): the triples over ideals {2, 3, 4}. The
/// remaining triples involve the principal ideal and are structurally
/// positive semidefinite for every (s, t), so they carry no information.
pub fn gq_feasibility(s: u64, t: u64) -> Result<GqFeasibility> {
    let table = gq_closed_form(s, t)?;
    let mut checks = Vec::new();
    for (&(a, b, u), m) in &table.matrices {
        if a == 1 || b == 1 || u == 1 || a > b {
            continue;
        }
        let eig = hermitian_eig(m, tol::EIG)?;
        let min = eig.eigenvalues[0];
        let max = eig.eigenvalues[eig.eigenvalues.len() - 1];
        let scale = min.abs().max(max.abs()).max(1.0);
        let status = if min < -tol::PSD * scale {
            Verdict::Infeasible
        } else if min.abs() <= tol::PSD * scale {
            Verdict::Boundary
        } else {
            Verdict::Feasible
        };
        checks.push(TripleCheck {
            triple: (a, b, u),
            min_eigenvalue: min,
            status,
        });
    }

    let worst_negative = checks
        .iter()
        .filter(|c| c.status == Verdict::Infeasible)
        .min_by(|x, y| x.min_eigenvalue.partial_cmp(&y.min_eigenvalue).unwrap());
    let (verdict, witness) = match worst_negative {
        Some(w) => (Verdict::Infeasible, Some(w.clone())),
        None => match checks.iter().find(|c| c.status == Verdict::Boundary) {
            Some(w) => (Verdict::Boundary, Some(w.clone())),
            None => (Verdict::Feasible, None),
        },
    };
    Ok(GqFeasibility {
        s,
        t,
        verdict,
        witness,
        checks,
    })
}

/// Single-fiber cyclic distance scheme on n ≥ 3 points; the colors are the
/// circular distances 0..⌊n/2⌋.
pub fn gen_cyclic_scheme(n: u64) -> Result<CoherentConfiguration> {
    if n < 3 {
        return Err(Error::InvalidArgument("cyclic scheme needs n >= 3".into()));
    }
    let n = n as usize;
    let rows: Vec<Vec<u32>> = (0..n)
        .map(|x| {
            (0..n)
                .map(|y| {
                    let d = (y + n - x) % n;
                    d.min(n - d) as u32
                })
                .collect()
        })
        .collect();
    CoherentConfiguration::from_parts(vec![n], rows, None)
}

/// The binary Hamming scheme on 2-bit words: 4 points, colors 0..2 by
/// Hamming distance.
pub fn gen_hamming_2_2() -> CoherentConfiguration {
    let rows: Vec<Vec<u32>> = (0..4usize)
        .map(|x| (0..4).map(|y| ((x ^ y) as u32).count_ones()).collect())
        .collect();
    CoherentConfiguration::from_parts(vec![4], rows, None)
        .expect("hamming construction is well-formed")
}

/// Builds a bundled example configuration by family name.
pub fn generate(family: &str, param: Option<u64>) -> Result<CoherentConfiguration> {
    let need = |what: &str| {
        Error::InvalidArgument(format!("generator '{family}' needs a {what} parameter"))
    };
    let no_param = || Error::InvalidArgument(format!("generator '{family}' takes no parameter"));
    match family {
        "gq-w2" => {
            if param.is_some() {
                return Err(no_param());
            }
            gq_to_configuration(&gen_gq_w2())
        }
        "gq-grid" => gq_to_configuration(&gen_gq_grid(param.ok_or_else(|| need("side"))?)?),
        "gq-dualgrid" => gq_to_configuration(&gen_gq_dualgrid(param.ok_or_else(|| need("side"))?)?),
        "cyclic" => gen_cyclic_scheme(param.ok_or_else(|| need("size"))?),
        "hamming-2-2" => {
            if param.is_some() {
                return Err(no_param());
            }
            Ok(gen_hamming_2_2())
        }
        other => Err(Error::UnknownFamily(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{validate_axioms, ValidationMode};
    use approx::assert_abs_diff_eq;

    #[test]
    fn grid_is_a_quadrangle() {
        let g = gen_gq_grid(2).unwrap();
        assert_eq!(g.points(), 9);
        assert_eq!(g.lines(), 6);
        assert_eq!(validate_gq(&g).unwrap(), (2, 1));
        let g1 = gen_gq_grid(1).unwrap();
        assert_eq!(validate_gq(&g1).unwrap(), (1, 1));
    }

    #[test]
    fn dual_grid_is_a_quadrangle() {
        let g = gen_gq_dualgrid(3).unwrap();
        assert_eq!(g.points(), 8);
        assert_eq!(g.lines(), 16);
        assert_eq!(validate_gq(&g).unwrap(), (1, 3));
    }

    #[test]
    fn w2_is_the_order_two_quadrangle() {
        let g = gen_gq_w2();
        assert_eq!(g.points(), 15);
        assert_eq!(g.lines(), 15);
        assert_eq!(g.flags().len(), 45);
        assert_eq!(validate_gq(&g).unwrap(), (2, 2));
    }

    #[test]
    fn rejects_degenerate_and_broken_structures() {
        let complete = IncidenceStructure::new(2, 2, [(0, 0), (0, 1), (1, 0), (1, 1)]).unwrap();
        match validate_gq(&complete) {
            Err(Error::GqViolation { axiom: 3, .. }) => {}
            other => panic!("expected an axiom-3 degeneracy, got {other:?}"),
        }

        let mut flags: Vec<(usize, usize)> = gen_gq_w2().flags().iter().copied().collect();
        flags.pop();
        let broken = IncidenceStructure::new(15, 15, flags).unwrap();
        assert!(matches!(
            validate_gq(&broken),
            Err(Error::GqViolation { .. })
        ));

        let empty = IncidenceStructure::new(0, 0, []).unwrap();
        assert!(matches!(
            validate_gq(&empty),
            Err(Error::GqViolation { axiom: 1, .. })
        ));
    }

    #[test]
    fn quadrangle_configurations_validate() {
        for inc in [
            gen_gq_w2(),
            gen_gq_grid(2).unwrap(),
            gen_gq_dualgrid(2).unwrap(),
        ] {
            let cc = gq_to_configuration(&inc).unwrap();
            assert_eq!(cc.rank(), 10);
            assert_eq!(cc.fiber_count(), 2);
            let report = validate_axioms(&cc, ValidationMode::Exhaustive);
            assert!(report.axioms_pass());
            assert!(report.fiber_commutative);
            assert!(report.fiber_symmetric);
        }
    }

    #[test]
    fn w2_configuration_shape() {
        let cc = gq_to_configuration(&gen_gq_w2()).unwrap();
        assert_eq!(cc.fiber_sizes(), &[15, 15]);
        assert_eq!(cc.degree(1), 6);
        assert_eq!(cc.degree(2), 8);
        assert_eq!(cc.degree(3), 3);
        assert_eq!(cc.labels().unwrap()[9], "non-concurrent");
    }

    #[test]
    fn closed_form_at_order_two() {
        let table = gq_closed_form(2, 2).unwrap();
        assert_eq!(table.multiplicities, [1.0, 9.0, 5.0, 5.0]);
        let q333 = &table.matrices[&(3, 3, 3)];
        assert_abs_diff_eq!(q333[(0, 0)].re, 0.625, epsilon = 1e-12);
        let q444 = &table.matrices[&(4, 4, 4)];
        assert_abs_diff_eq!(q444[(0, 0)].re, 0.625, epsilon = 1e-12);
        let q221 = &table.matrices[&(2, 2, 1)];
        for i in 0..2 {
            for j in 0..2 {
                assert_abs_diff_eq!(q221[(i, j)].re, 9.0, epsilon = 1e-12);
            }
        }
        let q331 = &table.matrices[&(3, 3, 1)];
        assert_abs_diff_eq!(q331[(0, 0)].re, 5.0, epsilon = 1e-12);
        let q222 = &table.matrices[&(2, 2, 2)];
        assert_abs_diff_eq!(q222[(0, 0)].re, 78.0 / 16.0, epsilon = 1e-12);
        assert_abs_diff_eq!(q222[(0, 1)].re, 72.0 / 16.0, epsilon = 1e-12);
        let eig = hermitian_eig(q222, tol::EIG).unwrap();
        assert_abs_diff_eq!(eig.eigenvalues[0], 6.0 / 16.0, epsilon = 1e-10);
        assert_abs_diff_eq!(eig.eigenvalues[1], 150.0 / 16.0, epsilon = 1e-10);
        assert_eq!(table.matrices.len(), 46);
        assert!(!table.matrices.contains_key(&(3, 4, 1)));
    }

    #[test]
    fn closed_form_at_grid_order() {
        let table = gq_closed_form(2, 1).unwrap();
        assert_eq!(table.multiplicities, [1.0, 4.0, 4.0, 1.0]);
        assert_abs_diff_eq!(table.matrices[&(4, 4, 4)][(0, 0)].re, 0.0, epsilon = 1e-15);
        let q222 = &table.matrices[&(2, 2, 2)];
        assert_abs_diff_eq!(q222[(0, 0)].re, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(q222[(0, 1)].re, 2.0f64.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(q222[(1, 1)].re, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn screener_verdicts() {
        let bad = gq_feasibility(2, 5).unwrap();
        assert_eq!(bad.verdict, Verdict::Infeasible);
        let witness = bad.witness.unwrap();
        assert_eq!(witness.triple, (3, 3, 3));
        assert_abs_diff_eq!(witness.min_eigenvalue, -11.0 / 49.0, epsilon = 1e-12);

        let edge = gq_feasibility(2, 4).unwrap();
        assert_eq!(edge.verdict, Verdict::Boundary);
        assert_eq!(edge.witness.unwrap().triple, (3, 3, 3));

        let good = gq_feasibility(3, 3).unwrap();
        assert_eq!(good.verdict, Verdict::Feasible);
        assert!(good.witness.is_none());

        assert!(gq_feasibility(0, 2).is_err());
    }

    #[test]
    fn screener_matches_square_inequalities() {
        for s in 2..=8u64 {
            for t in 2..=8u64 {
                let expect_infeasible = s * s < t || t * t < s;
                let got = gq_feasibility(s, t).unwrap();
                assert_eq!(
                    got.verdict == Verdict::Infeasible,
                    expect_infeasible,
                    "(s,t) = ({s},{t}) -> {:?}",
                    got.verdict
                );
            }
        }
    }

    #[test]
    fn bundled_schemes_validate() {
        for cc in [gen_cyclic_scheme(5).unwrap(), gen_hamming_2_2()] {
            let report = validate_axioms(&cc, ValidationMode::Exhaustive);
            assert!(report.axioms_pass());
            assert!(report.fiber_commutative);
            assert!(report.fiber_symmetric);
        }
        assert_eq!(gen_cyclic_scheme(5).unwrap().rank(), 3);
        assert_eq!(gen_cyclic_scheme(3).unwrap().rank(), 2);
        assert!(gen_cyclic_scheme(2).is_err());
        assert_eq!(gen_hamming_2_2().rank(), 3);
    }

    #[test]
    fn generator_dispatch() {
        assert_eq!(generate("gq-w2", None).unwrap().n(), 30);
        assert_eq!(generate("gq-grid", Some(2)).unwrap().n(), 15);
        assert_eq!(generate("gq-dualgrid", Some(2)).unwrap().n(), 15);
        assert_eq!(generate("cyclic", Some(7)).unwrap().n(), 7);
        assert_eq!(generate("hamming-2-2", None).unwrap().n(), 4);
        assert!(matches!(
            generate("petersen", None),
            Err(Error::UnknownFamily(_))
        ));
        assert!(matches!(
            generate("gq-grid", None),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            generate("gq-w2", Some(3)),
            Err(Error::InvalidArgument(_))
        ));
    }
}
