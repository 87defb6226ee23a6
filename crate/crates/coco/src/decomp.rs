//! Decomposition of the adjacency algebra of a fiber-commutative coherent
//! configuration into simple two-sided ideals, each presented by a basis of
//! matrix units.
//!
//! Stage one jointly diagonalizes every fiber algebra: a seeded random
//! Hermitian combination of the diagonal-block colors is diagonalized, its
//! eigenspaces are grouped and refined until every color acts as a scalar
//! on every group, and each group yields a primitive idempotent of the
//! fiber. Stage two links idempotents of different fibers whenever an
//! off-diagonal block carries mass between them; the connected components
//! are the simple ideals. Stage three builds matrix units inside each
//! ideal from its root fiber outward, normalizes them, and fixes the gauge
//! so that complex conjugation maps the basis of an ideal onto the basis
//! of its conjugate partner (for self-paired ideals, onto itself).
//!
//! The construction is deterministic for a fixed seed, and the quantities
//! that feed feasibility verdicts (supports, multiplicities, Krein
//! matrices up to gauge) do not depend on the seed at all.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::{commutativity_witness, intersection_numbers, CoherentConfiguration};
use crate::linalg::{hermitian_eig, CMatrix};
use crate::tol::{self, Tolerances};
use crate::{Error, Result};

/// A primitive idempotent of one fiber algebra: the orthogonal projection
/// onto a joint eigenspace of the fiber's colors.
#[derive(Debug, Clone, PartialEq)]
pub struct FiberIdempotent {
    pub fiber: usize,
    /// Hermitian idempotent of shape m×m for a fiber of m points.
    pub projection: CMatrix,
    /// Dimension of the eigenspace (the trace of the projection).
    pub rank: usize,
    /// Scalar by which each diagonal-block color acts, in color-id order.
    pub eigenvalues: Vec<Complex64>,
}

/// One simple ideal with its matrix units.
#[derive(Debug, Clone, PartialEq)]
pub struct IdealUnits {
    /// Fibers the ideal is supported on, ascending, 0-based.
    pub support: Vec<usize>,
    /// Unit ε_{i,j} for every ordered pair of support fibers, stored as its
    /// block of shape |X_i| × |X_j|.
    pub units: BTreeMap<(usize, usize), CMatrix>,
    /// Common trace of the diagonal units.
    pub multiplicity: u64,
    /// Index of the ideal whose basis is the entrywise conjugate of this
    /// one; equals the ideal's own index when conjugation fixes it.
    pub conjugate_partner: usize,
    /// Fiber-idempotent index backing each diagonal unit.
    pub members: BTreeMap<usize, usize>,
}

impl IdealUnits {
    /// Number of support fibers.
    pub fn degree(&self) -> usize {
        self.support.len()
    }

    pub fn unit(&self, i: usize, j: usize) -> &CMatrix {
        &self.units[&(i, j)]
    }
}

/// The full decomposition: ideal 0 is always the principal ideal, whose
/// units are the normalized all-ones blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixUnitBasis {
    pub ideals: Vec<IdealUnits>,
    pub fiber_sizes: Vec<usize>,
    pub seed: u64,
}

impl MatrixUnitBasis {
    pub const PRINCIPAL: usize = 0;

    /// Largest number of support fibers over all ideals.
    pub fn max_degree(&self) -> usize {
        self.ideals
            .iter()
            .map(IdealUnits::degree)
            .max()
            .unwrap_or(0)
    }
}

/// Common trace of each ideal's diagonal units.
pub fn multiplicities(basis: &MatrixUnitBasis) -> Vec<u64> {
    basis.ideals.iter().map(|i| i.multiplicity).collect()
}

fn group_by_gaps(values: &[f64], gap: f64) -> Vec<Vec<usize>> {
    let mut groups: Vec<Vec<usize>> = vec![vec![0]];
    for i in 1..values.len() {
        if values[i] - values[i - 1] > gap {
            groups.push(vec![i]);
        } else {
            groups.last_mut().unwrap().push(i);
        }
    }
    groups
}

/// Splits the column space of `v` until every color block acts on every
/// part as a scalar. Returns the refined orthonormal bases.
fn refine_group(
    fiber: usize,
    blocks: &[CMatrix],
    v: CMatrix,
    eig_tol: f64,
) -> Result<Vec<CMatrix>> {
    let dim = v.cols();
    for a in blocks {
        let scale = a.fro_norm().max(1.0);
        let av = a * &v;
        let theta = v.inner(&av) / dim as f64;
        let residual = (&av - &v.scaled(theta)).fro_norm();
        if residual <= tol::EIG_GROUPING * scale {
            continue;
        }
        let hermitian_part = CMatrix::from_fn(a.rows(), a.cols(), |i, j| {
            (a[(i, j)] + a[(j, i)].conj()) * 0.5
        });
        let skew_part = CMatrix::from_fn(a.rows(), a.cols(), |i, j| {
            (a[(i, j)] - a[(j, i)].conj()) * Complex64::new(0.0, -0.5)
        });
        for part in [hermitian_part, skew_part] {
            let small = &v.adjoint() * &(&part * &v);
            let eig = hermitian_eig(&small, eig_tol)?;
            let rho = eig
                .eigenvalues
                .iter()
                .fold(0.0f64, |m, &l| m.max(l.abs()))
                .max(1e-300);
            let groups = group_by_gaps(&eig.eigenvalues, tol::EIG_GROUPING * rho);
            if groups.len() > 1 {
                let mut refined = Vec::new();
                for group in groups {
                    let w = eig.eigenvectors.select_columns(&group);
                    refined.extend(refine_group(fiber, blocks, &v * &w, eig_tol)?);
                }
                return Ok(refined);
            }
        }
        return Err(Error::Numerical(format!(
            "fiber {}: joint diagonalization failed with residual {residual:.3e}; \
             the fiber algebra does not act by scalars on a common eigenspace and is \
             therefore not commutative",
            fiber + 1
        )));
    }
    Ok(vec![v])
}

/// Computes the primitive idempotents of the algebra spanned by fiber
/// `k`'s diagonal-block colors, by joint diagonalization against a seeded
/// random Hermitian combination.
pub fn fiber_primitive_idempotents(
    cc: &CoherentConfiguration,
    k: usize,
    seed: u64,
    tols: &Tolerances,
) -> Result<Vec<FiberIdempotent>> {
    let m = cc.fiber_sizes()[k];
    let colors = cc.block_colors(k, k);
    let blocks: Vec<CMatrix> = colors.iter().map(|&c| cc.block_matrix(c)).collect();

    let mut rng =
        ChaCha8Rng::seed_from_u64(seed.wrapping_add((k as u64).wrapping_mul(0x9E3779B97F4A7C15)));
    let mut h = CMatrix::zeros(m, m);
    for a in &blocks {
        let c = rng.random::<f64>();
        let d = rng.random::<f64>();
        let at = a.transpose();
        h = &h + &(a + &at).scaled(Complex64::new(c, 0.0));
        h = &h + &(a - &at).scaled(Complex64::new(0.0, d));
    }

    let eig = hermitian_eig(&h, tols.eig)?;
    let rho = eig.eigenvalues.iter().fold(0.0f64, |x, &l| x.max(l.abs()));
    if rho < 1e-12 {
        return Err(Error::Numerical(format!(
            "fiber {}: probe matrix is numerically zero",
            k + 1
        )));
    }
    let normalized: Vec<f64> = eig.eigenvalues.iter().map(|&l| l / rho).collect();

    let mut bases = Vec::new();
    for group in group_by_gaps(&normalized, tol::EIG_GROUPING) {
        let v = eig.eigenvectors.select_columns(&group);
        bases.extend(refine_group(k, &blocks, v, tols.eig)?);
    }

    if bases.len() != colors.len() {
        return Err(Error::Numerical(format!(
            "fiber {}: found {} joint eigenspaces but the fiber algebra has dimension {}",
            k + 1,
            bases.len(),
            colors.len()
        )));
    }

    let mut idempotents: Vec<FiberIdempotent> = bases
        .into_iter()
        .map(|v| {
            let dim = v.cols();
            let eigenvalues: Vec<Complex64> = blocks
                .iter()
                .map(|a| v.inner(&(a * &v)) / dim as f64)
                .collect();
            FiberIdempotent {
                fiber: k,
                projection: &v * &v.adjoint(),
                rank: dim,
                eigenvalues,
            }
        })
        .collect();

    let key = |e: &FiberIdempotent| -> Vec<(i64, i64)> {
        e.eigenvalues
            .iter()
            .map(|z| ((z.re * 1e6).round() as i64, (z.im * 1e6).round() as i64))
            .collect()
    };
    idempotents.sort_by_key(|e| std::cmp::Reverse(key(e)));

    let total: f64 = idempotents.iter().map(|e| e.rank as f64).sum();
    let sum = idempotents
        .iter()
        .fold(CMatrix::zeros(m, m), |acc, e| &acc + &e.projection);
    if total as usize != m || sum.dist_max(&CMatrix::identity(m)) > 1e-8 {
        return Err(Error::Numerical(format!(
            "fiber {}: idempotents do not resolve the identity",
            k + 1
        )));
    }
    Ok(idempotents)
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        if self.0[x] != x {
            let root = self.find(self.0[x]);
            self.0[x] = root;
        }
        self.0[x]
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.0[hi] = lo;
        }
    }
}

/// A connected component of linked fiber idempotents: one prospective
/// simple ideal, before units are built.
#[derive(Debug, Clone, PartialEq)]
pub struct IdealSketch {
    /// fiber -> index into that fiber's idempotent list.
    pub members: BTreeMap<usize, usize>,
}

/// Links idempotents of different fibers whenever some off-diagonal color
/// block carries Frobenius mass between their ranges, and returns the
/// connected components.
pub fn link_ideals(
    cc: &CoherentConfiguration,
    idempotents: &[Vec<FiberIdempotent>],
) -> Result<Vec<IdealSketch>> {
    let f = cc.fiber_count();
    let mut offsets = vec![0usize];
    for list in idempotents {
        offsets.push(offsets.last().unwrap() + list.len());
    }
    let mut dsu = Dsu::new(*offsets.last().unwrap());

    for k in 0..f {
        for l in (k + 1)..f {
            let colors = cc.block_colors(k, l);
            if colors.is_empty() {
                continue;
            }
            let blocks: Vec<CMatrix> = colors.iter().map(|&c| cc.block_matrix(c)).collect();
            let total: f64 = blocks.iter().map(|b| b.fro_norm().powi(2)).sum();
            for (a, ea) in idempotents[k].iter().enumerate() {
                for (b, eb) in idempotents[l].iter().enumerate() {
                    let strength: f64 = blocks
                        .iter()
                        .map(|m| (&(&ea.projection * m) * &eb.projection).fro_norm().powi(2))
                        .sum();
                    if strength > tol::LINK * total {
                        dsu.union(offsets[k] + a, offsets[l] + b);
                    }
                }
            }
        }
    }

    let mut components: BTreeMap<usize, IdealSketch> = BTreeMap::new();
    for k in 0..f {
        for a in 0..idempotents[k].len() {
            let root = dsu.find(offsets[k] + a);
            let sketch = components.entry(root).or_insert_with(|| IdealSketch {
                members: BTreeMap::new(),
            });
            if let Some(&other) = sketch.members.get(&k) {
                return Err(Error::Numerical(format!(
                    "ideal linkage joined idempotents {other} and {a} of fiber {}; \
                     this contradicts fiber-commutativity and signals a numerical failure \
                     or an invalid input",
                    k + 1
                )));
            }
            sketch.members.insert(k, a);
        }
    }
    Ok(components.into_values().collect())
}

fn idempotent<'a>(
    idempotents: &'a [Vec<FiberIdempotent>],
    sketch: &IdealSketch,
    fiber: usize,
) -> &'a FiberIdempotent {
    &idempotents[fiber][sketch.members[&fiber]]
}

/// Finds, for each sketch, the sketch whose root idempotent is the complex
/// conjugate of its own.
fn conjugate_pairing(
    idempotents: &[Vec<FiberIdempotent>],
    sketches: &[IdealSketch],
) -> Result<Vec<usize>> {
    let mut by_member: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (s, sketch) in sketches.iter().enumerate() {
        for (&fiber, &idx) in &sketch.members {
            by_member.insert((fiber, idx), s);
        }
    }
    let mut partner = Vec::with_capacity(sketches.len());
    for (s, sketch) in sketches.iter().enumerate() {
        let (&root, _) = sketch.members.iter().next().expect("sketches are nonempty");
        let conj = idempotent(idempotents, sketch, root).projection.conj();
        let (best, dist) = idempotents[root]
            .iter()
            .enumerate()
            .map(|(b, e)| (b, e.projection.dist_fro(&conj)))
            .min_by(|x, y| x.1.partial_cmp(&y.1).unwrap())
            .expect("fibers have at least one idempotent");
        let m = idempotents[root][best].projection.rows() as f64;
        if dist > 1e-6 * m.sqrt().max(1.0) {
            return Err(Error::Numerical(format!(
                "no idempotent of fiber {} matches the conjugate of ideal {}'s root \
                 (best distance {dist:.3e})",
                root + 1,
                s + 1
            )));
        }
        partner.push(by_member[&(root, best)]);
    }
    for (s, &p) in partner.iter().enumerate() {
        if partner[p] != s || sketches[p].members.keys().ne(sketches[s].members.keys()) {
            return Err(Error::Numerical(
                "conjugation does not pair the ideals consistently".into(),
            ));
        }
    }
    Ok(partner)
}

fn check_multiplicity(
    idempotents: &[Vec<FiberIdempotent>],
    sketch: &IdealSketch,
    index: usize,
    tols: &Tolerances,
) -> Result<u64> {
    let mut traces = sketch
        .members
        .iter()
        .map(|(&fiber, _)| idempotent(idempotents, sketch, fiber).projection.trace().re);
    let first = traces.next().expect("sketches are nonempty");
    let h = first.round();
    if (first - h).abs() > tols.integrality || h < 1.0 {
        return Err(Error::NonIntegralTrace {
            ideal: index + 1,
            trace: first,
        });
    }
    if traces.any(|t| (t - h).abs() > tols.integrality) {
        return Err(Error::Numerical(format!(
            "ideal {}: diagonal units have unequal traces",
            index + 1
        )));
    }
    Ok(h as u64)
}

/// Builds the gauge-fixed matrix units of one sketch from its root fiber
/// outward. Returns the ordered units keyed by fiber pairs.
fn build_ideal_units(
    cc: &CoherentConfiguration,
    idempotents: &[Vec<FiberIdempotent>],
    sketch: &IdealSketch,
    index: usize,
    self_conjugate: bool,
) -> Result<BTreeMap<(usize, usize), CMatrix>> {
    let support: Vec<usize> = sketch.members.keys().copied().collect();
    let root = support[0];
    let e_root = &idempotent(idempotents, sketch, root).projection;
    let h = e_root.trace().re;

    let mut root_units: BTreeMap<usize, CMatrix> = BTreeMap::new();
    root_units.insert(root, e_root.clone());

    for &i in &support[1..] {
        let e_i = &idempotent(idempotents, sketch, i).projection;
        let mut picked = None;
        for color in cc.block_colors(root, i) {
            let a = cc.block_matrix(color);
            let b = &(e_root * &a) * e_i;
            if b.fro_norm().powi(2) > tol::LINK * a.fro_norm().powi(2).max(1.0) {
                picked = Some((color, b));
                break;
            }
        }
        let (color, b) = picked.ok_or_else(|| {
            Error::UnitConstruction(format!(
                "ideal {}: no color of block ({},{}) carries mass between the linked idempotents",
                index + 1,
                root + 1,
                i + 1
            ))
        })?;
        let c = b.fro_norm().powi(2) / h;
        let bbs = &b * &b.adjoint();
        let residual = bbs.dist_fro(&e_root.scaled(Complex64::new(c, 0.0)));
        if residual > tol::UNIT_RESIDUAL * c * e_root.fro_norm().max(1.0) {
            return Err(Error::UnitConstruction(format!(
                "ideal {}: color {color} of block ({},{}) gives B·B* that is not a scalar \
                 multiple of the root idempotent (residual {residual:.3e}); the ideal does \
                 not restrict to rank-h bridges",
                index + 1,
                root + 1,
                i + 1
            )));
        }
        let unit = b.scaled(Complex64::new(1.0 / c.sqrt(), 0.0));
        let gram = &unit.adjoint() * &unit;
        if gram.dist_fro(e_i) > tol::UNIT_RESIDUAL * e_i.fro_norm().max(1.0) {
            return Err(Error::UnitConstruction(format!(
                "ideal {}: bridge to fiber {} does not square back to that fiber's idempotent",
                index + 1,
                i + 1
            )));
        }
        root_units.insert(i, unit);
    }

    if self_conjugate {
        for &i in &support[1..] {
            let unit = root_units[&i].clone();
            let mut zeta = unit.inner(&unit.conj()) / h;
            let modulus = zeta.norm();
            if (modulus - 1.0).abs() > 1e-6 {
                return Err(Error::UnitConstruction(format!(
                    "ideal {} is self-conjugate but conjugation does not act on its \
                     ({},{}) unit by a phase (|ζ| = {modulus:.6})",
                    index + 1,
                    root + 1,
                    i + 1
                )));
            }
            zeta /= modulus;
            let drift = unit.conj().dist_fro(&unit.scaled(zeta));
            if drift > tol::UNIT_RESIDUAL * h.sqrt().max(1.0) {
                return Err(Error::UnitConstruction(format!(
                    "ideal {}: conjugation phase fit leaves residual {drift:.3e} on the \
                     ({},{}) unit",
                    index + 1,
                    root + 1,
                    i + 1
                )));
            }
            let w = Complex64::from_polar(1.0, zeta.arg() / 2.0);
            root_units.insert(i, unit.scaled(w));
        }
    }

    let mut units = BTreeMap::new();
    for &i in &support {
        units.insert(
            (i, i),
            idempotent(idempotents, sketch, i).projection.clone(),
        );
    }
    for &i in &support[1..] {
        units.insert((root, i), root_units[&i].clone());
        units.insert((i, root), root_units[&i].adjoint());
    }
    for &i in &support[1..] {
        for &j in &support[1..] {
            if i != j {
                units.insert((i, j), &root_units[&i].adjoint() * &root_units[&j]);
            }
        }
    }

    if self_conjugate {
        for ((i, j), unit) in &units {
            let drift = unit.conj().dist_fro(unit);
            if drift > tol::UNIT_RESIDUAL * h.sqrt().max(1.0) {
                return Err(Error::UnitConstruction(format!(
                    "ideal {}: self-conjugate gauge fix failed on unit ({},{}) with \
                     residual {drift:.3e}",
                    index + 1,
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    Ok(units)
}

/// Builds the sorted, gauge-fixed matrix-unit bases of all ideals.
///
/// Ideal order: the principal ideal first, then descending number of
/// support fibers, ascending least support fiber, ascending multiplicity,
/// and finally the member idempotent indices as a tiebreak.
pub fn build_matrix_units(
    cc: &CoherentConfiguration,
    idempotents: &[Vec<FiberIdempotent>],
    sketches: Vec<IdealSketch>,
    seed: u64,
    tols: &Tolerances,
) -> Result<MatrixUnitBasis> {
    let f = cc.fiber_count();
    let m0 = cc.fiber_sizes()[0];
    let flat = CMatrix::ones(m0, m0).scaled(Complex64::new(1.0 / m0 as f64, 0.0));
    let (flat_idx, flat_dist) = idempotents[0]
        .iter()
        .enumerate()
        .map(|(i, e)| (i, e.projection.dist_fro(&flat)))
        .min_by(|x, y| x.1.partial_cmp(&y.1).unwrap())
        .expect("fiber 1 has at least one idempotent");
    if flat_dist > 1e-6 {
        return Err(Error::Numerical(format!(
            "fiber 1 has no all-ones idempotent (best distance {flat_dist:.3e})"
        )));
    }

    let mut sketches = sketches;
    let principal_pos = sketches
        .iter()
        .position(|s| s.members.get(&0) == Some(&flat_idx))
        .expect("the all-ones idempotent lies in some component");
    if sketches[principal_pos].members.len() != f {
        return Err(Error::Numerical(
            "the principal ideal is not supported on every fiber".into(),
        ));
    }

    let sort_key = |sk: &IdealSketch| {
        let degree = sk.members.len();
        let min_fiber = *sk.members.keys().next().unwrap();
        let h = idempotent(idempotents, sk, min_fiber).rank;
        let members: Vec<(usize, usize)> = sk.members.iter().map(|(&k, &a)| (k, a)).collect();
        (usize::MAX - degree, min_fiber, h, members)
    };
    let principal = sketches.remove(principal_pos);
    sketches.sort_by_key(sort_key);
    sketches.insert(0, principal);

    let partner = conjugate_pairing(idempotents, &sketches)?;

    let mut built: Vec<Option<IdealUnits>> = vec![None; sketches.len()];
    for s in 0..sketches.len() {
        if built[s].is_some() {
            continue;
        }
        let multiplicity = check_multiplicity(idempotents, &sketches[s], s, tols)?;
        let units = build_ideal_units(cc, idempotents, &sketches[s], s, partner[s] == s)?;
        let support: Vec<usize> = sketches[s].members.keys().copied().collect();
        if partner[s] != s {
            let twin = partner[s];
            built[twin] = Some(IdealUnits {
                support: support.clone(),
                units: units.iter().map(|(&k, m)| (k, m.conj())).collect(),
                multiplicity,
                conjugate_partner: s,
                members: sketches[twin].members.clone(),
            });
        }
        built[s] = Some(IdealUnits {
            support,
            units,
            multiplicity,
            conjugate_partner: partner[s],
            members: sketches[s].members.clone(),
        });
    }
    let ideals: Vec<IdealUnits> = built.into_iter().map(Option::unwrap).collect();

    let rank: usize = ideals.iter().map(|i| i.degree() * i.degree()).sum();
    let n: u64 = ideals
        .iter()
        .map(|i| i.multiplicity * i.degree() as u64)
        .sum();
    if rank != cc.rank() || n != cc.n() as u64 {
        return Err(Error::Numerical(format!(
            "decomposition accounts for rank {rank} and {n} points, expected rank {} and {} \
             points; the ideal linkage is incomplete",
            cc.rank(),
            cc.n()
        )));
    }

    let principal = &ideals[MatrixUnitBasis::PRINCIPAL];
    for (&(i, j), unit) in &principal.units {
        let scale = ((cc.fiber_sizes()[i] * cc.fiber_sizes()[j]) as f64).sqrt();
        let expect = CMatrix::ones(cc.fiber_sizes()[i], cc.fiber_sizes()[j])
            .scaled(Complex64::new(1.0 / scale, 0.0));
        if unit.dist_max(&expect) > 1e-8 {
            return Err(Error::Numerical(format!(
                "principal unit ({},{}) deviates from the normalized all-ones block",
                i + 1,
                j + 1
            )));
        }
    }

    Ok(MatrixUnitBasis {
        ideals,
        fiber_sizes: cc.fiber_sizes().to_vec(),
        seed,
    })
}

/// Runs the full decomposition pipeline. The input must satisfy the
/// configuration axioms; fiber-commutativity is verified here exactly on
/// the intersection tensor before any numerics run.
pub fn decompose(
    cc: &CoherentConfiguration,
    seed: u64,
    tols: &Tolerances,
) -> Result<MatrixUnitBasis> {
    let tensor = intersection_numbers(cc);
    if let Some((fiber, i, j, k, p_ij, p_ji)) = commutativity_witness(cc, &tensor) {
        return Err(Error::NotFiberCommutative {
            fiber,
            i,
            j,
            k,
            p_ij,
            p_ji,
        });
    }
    let idempotents: Vec<Vec<FiberIdempotent>> = (0..cc.fiber_count())
        .into_par_iter()
        .map(|k| fiber_primitive_idempotents(cc, k, seed, tols))
        .collect::<Result<_>>()?;
    let sketches = link_ideals(cc, &idempotents)?;
    build_matrix_units(cc, &idempotents, sketches, seed, tols)
}

/// Residuals of the defining relations of a matrix-unit basis; all are
/// near zero for a healthy construction.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct UnitCheckReport {
    /// ε_{i,j} ε_{j,l} = ε_{i,l} within an ideal; cross-ideal products
    /// vanish.
    pub product_residual: f64,
    /// ε_{i,j}* = ε_{j,i}.
    pub star_residual: f64,
    /// conj(ε^s) equals the units of the conjugate partner.
    pub conjugation_residual: f64,
    /// Diagonal units of each fiber sum to the identity.
    pub resolution_residual: f64,
    /// Each unit lies in the span of its block's colors.
    pub span_residual: f64,
    /// Units vanish outside their block; zero by representation.
    pub block_residual: f64,
}

impl UnitCheckReport {
    pub fn max(&self) -> f64 {
        self.product_residual
            .max(self.star_residual)
            .max(self.conjugation_residual)
            .max(self.resolution_residual)
            .max(self.span_residual)
            .max(self.block_residual)
    }

    pub fn pass(&self, tol: f64) -> bool {
        self.max() <= tol
    }
}

/// Measures how well the basis satisfies the matrix-unit relations, the
/// star and conjugation symmetries, the resolution of identity, and
/// membership in the adjacency algebra.
pub fn verify_units(cc: &CoherentConfiguration, basis: &MatrixUnitBasis) -> UnitCheckReport {
    let ideals = &basis.ideals;

    let mut product: f64 = 0.0;
    for s in ideals {
        for (&(i, j), left) in &s.units {
            for (&(k, l), right) in &s.units {
                if j != k {
                    continue;
                }
                let got = left * right;
                product = product.max(got.dist_fro(s.unit(i, l)));
            }
        }
    }
    for (a, s) in ideals.iter().enumerate() {
        for t in &ideals[a + 1..] {
            for (&(_, j), left) in &s.units {
                for (&(k, _), right) in &t.units {
                    if j == k {
                        product = product.max((left * right).fro_norm());
                    }
                }
            }
        }
    }

    let mut star: f64 = 0.0;
    for s in ideals {
        for (&(i, j), unit) in &s.units {
            star = star.max(unit.adjoint().dist_fro(s.unit(j, i)));
        }
    }

    let mut conjugation: f64 = 0.0;
    for s in ideals {
        let twin = &ideals[s.conjugate_partner];
        for (&(i, j), unit) in &s.units {
            conjugation = conjugation.max(unit.conj().dist_fro(twin.unit(i, j)));
        }
    }

    let mut resolution: f64 = 0.0;
    for (k, &m) in basis.fiber_sizes.iter().enumerate() {
        let sum = ideals
            .iter()
            .filter(|s| s.support.contains(&k))
            .fold(CMatrix::zeros(m, m), |acc, s| &acc + s.unit(k, k));
        resolution = resolution.max(sum.dist_fro(&CMatrix::identity(m)));
    }

    let mut span: f64 = 0.0;
    for s in ideals {
        for (&(i, j), unit) in &s.units {
            let mut projected = CMatrix::zeros(unit.rows(), unit.cols());
            for color in cc.block_colors(i, j) {
                let a = cc.block_matrix(color);
                let coeff = a.inner(unit) / a.fro_norm().powi(2);
                projected = &projected + &a.scaled(coeff);
            }
            span = span.max(projected.dist_fro(unit));
        }
    }

    UnitCheckReport {
        product_residual: product,
        star_residual: star,
        conjugation_residual: conjugation,
        resolution_residual: resolution,
        span_residual: span,
        block_residual: 0.0,
    }
}

/// Applies the gauge transformation ε_{i,j} -> conj(z_i) z_j ε_{i,j} to
/// one ideal (z indexed along its support) and restores the conjugation
/// pairing: the partner ideal is overwritten with the conjugated basis,
/// and a self-paired ideal is re-fixed by the half-phase convention, which
/// collapses complex phases to sign patterns.
pub fn regauge(basis: &MatrixUnitBasis, ideal: usize, z: &[Complex64]) -> Result<MatrixUnitBasis> {
    let s = ideal;
    if s >= basis.ideals.len() {
        return Err(Error::NoSuchIdeal(s + 1));
    }
    let support = basis.ideals[s].support.clone();
    if z.len() != support.len() {
        return Err(Error::InvalidArgument(format!(
            "gauge vector has {} entries for an ideal supported on {} fibers",
            z.len(),
            support.len()
        )));
    }
    let mut phases = Vec::with_capacity(z.len());
    for (idx, &zi) in z.iter().enumerate() {
        let modulus = zi.norm();
        if (modulus - 1.0).abs() > 1e-9 {
            return Err(Error::NonUnimodular {
                index: idx,
                modulus,
            });
        }
        phases.push(zi / modulus);
    }
    let phase_of = |fiber: usize| phases[support.iter().position(|&k| k == fiber).unwrap()];

    let mut out = basis.clone();
    for ((i, j), unit) in &mut out.ideals[s].units {
        *unit = unit.scaled(phase_of(*i).conj() * phase_of(*j));
    }

    let twin = out.ideals[s].conjugate_partner;
    if twin != s {
        out.ideals[twin].units = out.ideals[s]
            .units
            .iter()
            .map(|(&k, m)| (k, m.conj()))
            .collect();
        return Ok(out);
    }

    let root = support[0];
    let h = out.ideals[s].multiplicity as f64;
    let mut root_units: BTreeMap<usize, CMatrix> = BTreeMap::new();
    for &i in &support[1..] {
        let unit = out.ideals[s].unit(root, i).clone();
        let mut zeta = unit.inner(&unit.conj()) / h;
        zeta /= zeta.norm();
        let w = Complex64::from_polar(1.0, zeta.arg() / 2.0);
        root_units.insert(i, unit.scaled(w));
    }
    for &i in &support[1..] {
        out.ideals[s]
            .units
            .insert((root, i), root_units[&i].clone());
        out.ideals[s]
            .units
            .insert((i, root), root_units[&i].adjoint());
        for &j in &support[1..] {
            if i != j {
                out.ideals[s]
                    .units
                    .insert((i, j), &root_units[&i].adjoint() * &root_units[&j]);
            }
        }
    }
    Ok(out)
}
