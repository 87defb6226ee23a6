//! Coherent configurations given as color matrices over partitioned point
//! sets, with structural validation and intersection numbers.
//!
//! A configuration on fibers X_1, …, X_f assigns every ordered pair of
//! points a color. The four defining axioms:
//!
//! 1. each fiber's diagonal is a single color that appears nowhere else;
//! 2. the colors partition X × X and each color lies in one fiber block;
//! 3. the transpose of a color class is again a color class;
//! 4. for colors I, J and any cell (x, y) of color K, the number of points
//!    z with color(x, z) = I and color(z, y) = J depends only on (I, J, K).
//!
//! Axiom 2 is enforced while parsing (every cell carries exactly one color
//! id, and ids may not straddle blocks); the rest are checked by
//! [`validate_axioms`]. The counts from axiom 4 form the
//! [`IntersectionTensor`], on which fiber-commutativity and fiber-symmetry
//! are exact integer tests.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;

use num_complex::Complex64;

use crate::linalg::CMatrix;
use crate::{Error, Result};

/// JSON document form: fiber sizes, the n×n color matrix, and optional
/// per-color labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigDocument {
    pub fibers: Vec<usize>,
    pub colors: Vec<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

/// Everything recorded about one color class.
#[derive(Debug, Clone, PartialEq)]
pub struct ColorMeta {
    /// Fiber block (k, l) the color lives in.
    pub block: (usize, usize),
    /// Transpose partner candidate, read off the first cell; axiom 3
    /// validation confirms it is consistent.
    pub transpose: u32,
    /// Whether the color is exactly the diagonal of its fiber.
    pub is_identity: bool,
    /// All cells of this color in global coordinates, row-major order.
    pub positions: Vec<(u32, u32)>,
}

/// A parsed coherent-configuration candidate: structurally sound (square,
/// consistent fiber sizes, contiguous color ids, block-respecting colors)
/// but not yet checked against axioms 1, 3, and 4.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherentConfiguration {
    fiber_sizes: Vec<usize>,
    offsets: Vec<usize>,
    color: Vec<u32>,
    colors: Vec<ColorMeta>,
    labels: Option<Vec<String>>,
}

impl CoherentConfiguration {
    /// Builds a configuration from fiber sizes and a row-major color
    /// matrix, computing all per-color metadata.
    pub fn from_parts(
        fiber_sizes: Vec<usize>,
        color_rows: Vec<Vec<u32>>,
        labels: Option<Vec<String>>,
    ) -> Result<Self> {
        if fiber_sizes.is_empty() {
            return Err(Error::Malformed("no fibers given".into()));
        }
        if let Some(k) = fiber_sizes.iter().position(|&m| m == 0) {
            return Err(Error::Malformed(format!("fiber {} is empty", k + 1)));
        }
        let mut offsets = vec![0usize];
        for &m in &fiber_sizes {
            offsets.push(offsets.last().unwrap() + m);
        }
        let n = *offsets.last().unwrap();
        if color_rows.len() != n {
            return Err(Error::Malformed(format!(
                "fiber sizes sum to {n} but the color matrix has {} rows",
                color_rows.len()
            )));
        }
        if let Some(i) = color_rows.iter().position(|row| row.len() != n) {
            return Err(Error::Malformed(format!(
                "color matrix is not square: row {} has {} entries, expected {n}",
                i,
                color_rows[i].len()
            )));
        }

        let mut color = Vec::with_capacity(n * n);
        for row in &color_rows {
            color.extend_from_slice(row);
        }
        let rank = match color.iter().max() {
            Some(&m) => m as usize + 1,
            None => return Err(Error::Malformed("empty color matrix".into())),
        };
        let mut positions: Vec<Vec<(u32, u32)>> = vec![Vec::new(); rank];
        for x in 0..n {
            for y in 0..n {
                positions[color[x * n + y] as usize].push((x as u32, y as u32));
            }
        }
        if let Some(c) = positions.iter().position(Vec::is_empty) {
            return Err(Error::Malformed(format!(
                "color ids must be contiguous: {c} never occurs but {} does",
                rank - 1
            )));
        }
        if let Some(l) = &labels {
            if l.len() != rank {
                return Err(Error::Malformed(format!(
                    "{} labels given for {rank} colors",
                    l.len()
                )));
            }
        }

        let fiber_of = |x: usize| offsets.partition_point(|&o| o <= x) - 1;
        let mut colors = Vec::with_capacity(rank);
        for (c, pos) in positions.iter().enumerate() {
            let (x0, y0) = pos[0];
            let block = (fiber_of(x0 as usize), fiber_of(y0 as usize));
            for &(x, y) in pos {
                let b = (fiber_of(x as usize), fiber_of(y as usize));
                if b != block {
                    return Err(Error::BlockStraddle {
                        color: c as u32,
                        a0: block.0 + 1,
                        a1: block.1 + 1,
                        b0: b.0 + 1,
                        b1: b.1 + 1,
                    });
                }
            }
            let fiber_size = fiber_sizes[block.0];
            let is_identity =
                block.0 == block.1 && pos.len() == fiber_size && pos.iter().all(|&(x, y)| x == y);
            colors.push(ColorMeta {
                block,
                transpose: color[y0 as usize * n + x0 as usize],
                is_identity,
                positions: pos.clone(),
            });
        }

        Ok(CoherentConfiguration {
            fiber_sizes,
            offsets,
            color,
            colors,
            labels,
        })
    }

    pub fn from_document(doc: ConfigDocument) -> Result<Self> {
        CoherentConfiguration::from_parts(doc.fibers, doc.colors, doc.labels)
    }

    pub fn to_document(&self) -> ConfigDocument {
        let n = self.n();
        ConfigDocument {
            fibers: self.fiber_sizes.clone(),
            colors: (0..n)
                .map(|x| self.color[x * n..(x + 1) * n].to_vec())
                .collect(),
            labels: self.labels.clone(),
        }
    }

    /// Total number of points.
    pub fn n(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    /// Number of colors.
    pub fn rank(&self) -> usize {
        self.colors.len()
    }

    pub fn fiber_count(&self) -> usize {
        self.fiber_sizes.len()
    }

    pub fn fiber_sizes(&self) -> &[usize] {
        &self.fiber_sizes
    }

    /// Index of the first point of fiber `k`.
    pub fn offset(&self, k: usize) -> usize {
        self.offsets[k]
    }

    pub fn fiber_of(&self, x: usize) -> usize {
        self.offsets.partition_point(|&o| o <= x) - 1
    }

    pub fn color_at(&self, x: usize, y: usize) -> u32 {
        self.color[x * self.n() + y]
    }

    pub fn color_meta(&self, c: u32) -> &ColorMeta {
        &self.colors[c as usize]
    }

    pub fn colors(&self) -> &[ColorMeta] {
        &self.colors
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Color ids of block (k, l), ascending.
    pub fn block_colors(&self, k: usize, l: usize) -> Vec<u32> {
        (0..self.rank() as u32)
            .filter(|&c| self.colors[c as usize].block == (k, l))
            .collect()
    }

    /// The identity color of fiber `k`, if axiom 1 holds for that fiber.
    pub fn identity_color(&self, k: usize) -> Option<u32> {
        (0..self.rank() as u32).find(|&c| {
            let m = &self.colors[c as usize];
            m.is_identity && m.block == (k, k)
        })
    }

    /// Constant row sum of a color inside its block.
    pub fn degree(&self, c: u32) -> usize {
        let m = &self.colors[c as usize];
        m.positions.len() / self.fiber_sizes[m.block.0]
    }

    /// The color's 0/1 adjacency matrix as a dense complex block of shape
    /// |X_k| × |X_l|.
    pub fn block_matrix(&self, c: u32) -> CMatrix {
        let m = &self.colors[c as usize];
        let (k, l) = m.block;
        let (ox, oy) = (self.offsets[k], self.offsets[l]);
        let mut b = CMatrix::zeros(self.fiber_sizes[k], self.fiber_sizes[l]);
        for &(x, y) in &m.positions {
            b[(x as usize - ox, y as usize - oy)] = Complex64::ONE;
        }
        b
    }
}

/// Parses the JSON document form.
pub fn parse_json(s: &str) -> Result<CoherentConfiguration> {
    let doc: ConfigDocument = serde_json::from_str(s)?;
    CoherentConfiguration::from_document(doc)
}

pub fn to_json(cc: &CoherentConfiguration) -> String {
    serde_json::to_string_pretty(&cc.to_document()).expect("document serialization cannot fail")
}

/// Witness for a failed axiom, pointing at concrete cells and colors.
/// Points and fibers are reported 1-based.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum AxiomWitness {
    /// A diagonal cell whose color differs from the fiber's first diagonal
    /// color.
    DiagonalSplit {
        fiber: usize,
        point: usize,
        color: u32,
        expected: u32,
    },
    /// A diagonal color that also appears off the diagonal.
    OffDiagonalIdentity { color: u32, x: usize, y: usize },
    /// A cell whose mirror cell has the wrong color.
    TransposeMismatch {
        color: u32,
        x: usize,
        y: usize,
        expected: u32,
        found: u32,
    },
    /// A cell where the count of two-step paths disagrees with the count at
    /// the color's reference cell.
    IntersectionMismatch {
        i: u32,
        j: u32,
        k: u32,
        x: usize,
        y: usize,
        expected: u32,
        found: u32,
    },
}

impl fmt::Display for AxiomWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomWitness::DiagonalSplit { fiber, point, color, expected } => write!(
                f,
                "fiber {fiber}: diagonal cell ({point},{point}) has color {color}, expected {expected}"
            ),
            AxiomWitness::OffDiagonalIdentity { color, x, y } => {
                write!(f, "diagonal color {color} also appears at off-diagonal cell ({x},{y})")
            }
            AxiomWitness::TransposeMismatch { color, x, y, expected, found } => write!(
                f,
                "color {color} at ({x},{y}) mirrors to color {found} at ({y},{x}), expected {expected}"
            ),
            AxiomWitness::IntersectionMismatch { i, j, k, x, y, expected, found } => write!(
                f,
                "p({i},{j};{k}) is ambiguous: {found} paths at cell ({x},{y}), {expected} at the reference cell"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomCheck {
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<AxiomWitness>,
}

impl AxiomCheck {
    fn pass() -> Self {
        AxiomCheck {
            pass: true,
            witness: None,
        }
    }

    fn fail(witness: AxiomWitness) -> Self {
        AxiomCheck {
            pass: false,
            witness: Some(witness),
        }
    }
}

/// Outcome of checking the four axioms plus the commutativity flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub n: usize,
    pub rank: usize,
    pub fibers: Vec<usize>,
    pub identity: AxiomCheck,
    pub partition: AxiomCheck,
    pub transpose: AxiomCheck,
    pub intersection: AxiomCheck,
    pub fiber_commutative: bool,
    pub fiber_symmetric: bool,
    /// First (fiber, I, J, K) with p(I,J;K) ≠ p(J,I;K), 1-based fiber.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub commutativity_witness: Option<(usize, u32, u32, u32)>,
    /// Number of randomly sampled cells, when not exhaustive.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sampled_cells: Option<usize>,
}

impl ValidationReport {
    /// True when all four axioms hold.
    pub fn axioms_pass(&self) -> bool {
        self.identity.pass && self.partition.pass && self.transpose.pass && self.intersection.pass
    }
}

/// How much of axiom 4 to check: every cell, or a seeded random sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ValidationMode {
    Exhaustive,
    Sampled { cells: usize, seed: u64 },
}

fn check_identity(cc: &CoherentConfiguration) -> AxiomCheck {
    for k in 0..cc.fiber_count() {
        let (lo, hi) = (cc.offset(k), cc.offset(k) + cc.fiber_sizes[k]);
        let c0 = cc.color_at(lo, lo);
        for x in lo..hi {
            let c = cc.color_at(x, x);
            if c != c0 {
                return AxiomCheck::fail(AxiomWitness::DiagonalSplit {
                    fiber: k + 1,
                    point: x,
                    color: c,
                    expected: c0,
                });
            }
        }
        let meta = cc.color_meta(c0);
        if !meta.is_identity {
            let &(x, y) = meta
                .positions
                .iter()
                .find(|&&(x, y)| x != y)
                .expect("a non-identity diagonal color must have an off-diagonal cell");
            return AxiomCheck::fail(AxiomWitness::OffDiagonalIdentity {
                color: c0,
                x: x as usize,
                y: y as usize,
            });
        }
    }
    AxiomCheck::pass()
}

fn check_transpose(cc: &CoherentConfiguration) -> AxiomCheck {
    for (c, meta) in cc.colors.iter().enumerate() {
        let t = meta.transpose;
        for &(x, y) in &meta.positions {
            let found = cc.color_at(y as usize, x as usize);
            if found != t {
                return AxiomCheck::fail(AxiomWitness::TransposeMismatch {
                    color: c as u32,
                    x: x as usize,
                    y: y as usize,
                    expected: t,
                    found,
                });
            }
        }
    }
    AxiomCheck::pass()
}

/// Path-count table for the reference cell of every color: entry
/// [K][I·rank + J] is the number of z with color(x,z) = I, color(z,y) = J
/// at the first cell (x,y) of color K.
fn reference_tables(cc: &CoherentConfiguration) -> Vec<Vec<u32>> {
    let r = cc.rank();
    let n = cc.n();
    cc.colors
        .iter()
        .map(|meta| {
            let (x, y) = meta.positions[0];
            let mut table = vec![0u32; r * r];
            for z in 0..n {
                let i = cc.color_at(x as usize, z) as usize;
                let j = cc.color_at(z, y as usize) as usize;
                table[i * r + j] += 1;
            }
            table
        })
        .collect()
}

fn cell_mismatch(
    cc: &CoherentConfiguration,
    reference: &[Vec<u32>],
    buf: &mut [u32],
    x: usize,
    y: usize,
) -> Option<AxiomWitness> {
    let r = cc.rank();
    let n = cc.n();
    buf.fill(0);
    for z in 0..n {
        let i = cc.color_at(x, z) as usize;
        let j = cc.color_at(z, y) as usize;
        buf[i * r + j] += 1;
    }
    let k = cc.color_at(x, y);
    let expect = &reference[k as usize];
    for i in 0..r {
        for j in 0..r {
            if buf[i * r + j] != expect[i * r + j] {
                return Some(AxiomWitness::IntersectionMismatch {
                    i: i as u32,
                    j: j as u32,
                    k,
                    x,
                    y,
                    expected: expect[i * r + j],
                    found: buf[i * r + j],
                });
            }
        }
    }
    None
}

fn check_intersection(cc: &CoherentConfiguration, mode: ValidationMode) -> AxiomCheck {
    let reference = reference_tables(cc);
    let r = cc.rank();
    let n = cc.n();
    let witness = match mode {
        ValidationMode::Exhaustive => (0..n)
            .into_par_iter()
            .map(|x| {
                let mut buf = vec![0u32; r * r];
                (0..n).find_map(|y| cell_mismatch(cc, &reference, &mut buf, x, y))
            })
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .next(),
        ValidationMode::Sampled { cells, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut buf = vec![0u32; r * r];
            (0..cells).find_map(|_| {
                let x = rng.random_range(0..n);
                let y = rng.random_range(0..n);
                cell_mismatch(cc, &reference, &mut buf, x, y)
            })
        }
    };
    match witness {
        Some(w) => AxiomCheck::fail(w),
        None => AxiomCheck::pass(),
    }
}

/// Checks axioms 1, 3, and 4 (axiom 2 is structural after parsing) and,
/// when they hold, computes the fiber-commutativity and fiber-symmetry
/// flags from the intersection tensor.
pub fn validate_axioms(cc: &CoherentConfiguration, mode: ValidationMode) -> ValidationReport {
    let identity = check_identity(cc);
    let transpose = check_transpose(cc);
    let intersection = check_intersection(cc, mode);

    let mut report = ValidationReport {
        n: cc.n(),
        rank: cc.rank(),
        fibers: cc.fiber_sizes.clone(),
        identity,
        partition: AxiomCheck::pass(),
        transpose,
        intersection,
        fiber_commutative: false,
        fiber_symmetric: false,
        commutativity_witness: None,
        sampled_cells: match mode {
            ValidationMode::Exhaustive => None,
            ValidationMode::Sampled { cells, .. } => Some(cells),
        },
    };
    if report.axioms_pass() {
        let tensor = intersection_numbers(cc);
        let (commutative, symmetric) = fiber_flags(cc, &tensor);
        report.fiber_commutative = commutative;
        report.fiber_symmetric = symmetric;
        if !commutative {
            report.commutativity_witness =
                commutativity_witness(cc, &tensor).map(|(k, i, j, kk, _, _)| (k, i, j, kk));
        }
    }
    report
}

/// The intersection numbers p(I,J;K), read off at each color's reference
/// cell. Meaningful once axiom 4 has been validated.
#[derive(Debug, Clone, PartialEq)]
pub struct IntersectionTensor {
    rank: usize,
    p: Vec<u32>,
}

impl IntersectionTensor {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn get(&self, i: u32, j: u32, k: u32) -> u32 {
        let r = self.rank;
        self.p[(i as usize * r + j as usize) * r + k as usize]
    }
}

pub fn intersection_numbers(cc: &CoherentConfiguration) -> IntersectionTensor {
    let r = cc.rank();
    let reference = reference_tables(cc);
    let mut p = vec![0u32; r * r * r];
    for (k, table) in reference.iter().enumerate() {
        for i in 0..r {
            for j in 0..r {
                p[(i * r + j) * r + k] = table[i * r + j];
            }
        }
    }
    IntersectionTensor { rank: r, p }
}

/// First commutativity violation as (fiber, I, J, K, p(I,J;K), p(J,I;K)),
/// fiber 1-based, or None when every fiber block commutes.
pub fn commutativity_witness(
    cc: &CoherentConfiguration,
    tensor: &IntersectionTensor,
) -> Option<(usize, u32, u32, u32, u32, u32)> {
    for k in 0..cc.fiber_count() {
        let colors = cc.block_colors(k, k);
        for (a, &i) in colors.iter().enumerate() {
            for &j in &colors[a + 1..] {
                for &kk in &colors {
                    let p_ij = tensor.get(i, j, kk);
                    let p_ji = tensor.get(j, i, kk);
                    if p_ij != p_ji {
                        return Some((k + 1, i, j, kk, p_ij, p_ji));
                    }
                }
            }
        }
    }
    None
}

/// (fiber_commutative, fiber_symmetric), both exact integer tests on the
/// tensor. Symmetry of every diagonal block implies commutativity.
pub fn fiber_flags(cc: &CoherentConfiguration, tensor: &IntersectionTensor) -> (bool, bool) {
    let commutative = commutativity_witness(cc, tensor).is_none();
    let symmetric = (0..cc.fiber_count()).all(|k| {
        cc.block_colors(k, k)
            .iter()
            .all(|&c| cc.color_meta(c).transpose == c)
    });
    (commutative, symmetric)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pentagon() -> CoherentConfiguration {
        let n = 5usize;
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
        CoherentConfiguration::from_parts(vec![n], rows, None).unwrap()
    }

    fn z3_directed() -> CoherentConfiguration {
        let rows = vec![vec![0, 1, 2], vec![2, 0, 1], vec![1, 2, 0]];
        CoherentConfiguration::from_parts(vec![3], rows, None).unwrap()
    }

    fn s3_regular() -> CoherentConfiguration {
        let elements: [[usize; 3]; 6] = [
            [0, 1, 2],
            [1, 0, 2],
            [2, 1, 0],
            [0, 2, 1],
            [1, 2, 0],
            [2, 0, 1],
        ];
        let compose = |f: [usize; 3], g: [usize; 3]| [f[g[0]], f[g[1]], f[g[2]]];
        let invert = |f: [usize; 3]| {
            let mut inv = [0usize; 3];
            for (i, &fi) in f.iter().enumerate() {
                inv[fi] = i;
            }
            inv
        };
        let index = |p: [usize; 3]| elements.iter().position(|&e| e == p).unwrap() as u32;
        let rows: Vec<Vec<u32>> = (0..6)
            .map(|x| {
                (0..6)
                    .map(|y| index(compose(invert(elements[x]), elements[y])))
                    .collect()
            })
            .collect();
        CoherentConfiguration::from_parts(vec![6], rows, None).unwrap()
    }

    #[test]
    fn parse_round_trip() {
        let cc = pentagon();
        let json = to_json(&cc);
        let back = parse_json(&json).unwrap();
        assert_eq!(cc, back);
    }

    #[test]
    fn document_shape() {
        let json =
            r#"{"fibers": [1, 1], "colors": [[0, 1], [2, 3]], "labels": ["e1", "a", "b", "e2"]}"#;
        let cc = parse_json(json).unwrap();
        assert_eq!(cc.n(), 2);
        assert_eq!(cc.rank(), 4);
        assert_eq!(cc.fiber_count(), 2);
        assert_eq!(cc.labels().unwrap()[3], "e2");
        let report = validate_axioms(&cc, ValidationMode::Exhaustive);
        assert!(report.axioms_pass());
    }

    #[test]
    fn rejects_malformed_documents() {
        let not_square =
            CoherentConfiguration::from_parts(vec![2], vec![vec![0, 1], vec![1]], None);
        assert!(matches!(not_square, Err(Error::Malformed(_))));

        let bad_sizes =
            CoherentConfiguration::from_parts(vec![3], vec![vec![0, 1], vec![1, 0]], None);
        assert!(matches!(bad_sizes, Err(Error::Malformed(_))));

        let gap = CoherentConfiguration::from_parts(vec![2], vec![vec![0, 2], vec![2, 0]], None);
        assert!(matches!(gap, Err(Error::Malformed(_))));

        let empty_fiber =
            CoherentConfiguration::from_parts(vec![2, 0], vec![vec![0, 1], vec![1, 0]], None);
        assert!(matches!(empty_fiber, Err(Error::Malformed(_))));

        let bad_labels = CoherentConfiguration::from_parts(
            vec![2],
            vec![vec![0, 1], vec![1, 0]],
            Some(vec!["only-one".into()]),
        );
        assert!(matches!(bad_labels, Err(Error::Malformed(_))));
    }

    #[test]
    fn rejects_block_straddle() {
        let out = CoherentConfiguration::from_parts(vec![1, 1], vec![vec![0, 1], vec![1, 2]], None);
        match out {
            Err(Error::BlockStraddle { color: 1, .. }) => {}
            other => panic!("expected a block-straddle error for color 1, got {other:?}"),
        }
    }

    #[test]
    fn pentagon_validates() {
        let cc = pentagon();
        let report = validate_axioms(&cc, ValidationMode::Exhaustive);
        assert!(report.axioms_pass());
        assert!(report.fiber_commutative);
        assert!(report.fiber_symmetric);
        assert_eq!(report.rank, 3);
        assert_eq!(cc.degree(1), 2);
        assert_eq!(cc.degree(0), 1);
    }

    #[test]
    fn directed_triangle_is_commutative_not_symmetric() {
        let cc = z3_directed();
        let report = validate_axioms(&cc, ValidationMode::Exhaustive);
        assert!(report.axioms_pass());
        assert!(report.fiber_commutative);
        assert!(!report.fiber_symmetric);
        assert_eq!(cc.color_meta(1).transpose, 2);
    }

    #[test]
    fn group_algebra_of_s3_is_not_fiber_commutative() {
        let cc = s3_regular();
        let report = validate_axioms(&cc, ValidationMode::Exhaustive);
        assert!(report.axioms_pass());
        assert!(!report.fiber_commutative);
        assert!(!report.fiber_symmetric);
        let (fiber, i, j, k) = report.commutativity_witness.unwrap();
        assert_eq!(fiber, 1);
        let tensor = intersection_numbers(&cc);
        assert_ne!(tensor.get(i, j, k), tensor.get(j, i, k));
    }

    #[test]
    fn intersection_numbers_of_pentagon() {
        let cc = pentagon();
        let t = intersection_numbers(&cc);
        assert_eq!(t.get(1, 1, 0), 2);
        assert_eq!(t.get(1, 1, 2), 1);
        assert_eq!(t.get(1, 2, 1), 1);
        assert_eq!(t.get(0, 1, 1), 1);
        assert_eq!(t.get(1, 1, 1), 0);
        assert_eq!(t.get(2, 2, 1), 1);
    }

    #[test]
    fn path_graph_fails_intersection_axiom() {
        let rows = vec![vec![0, 1, 2], vec![1, 0, 1], vec![2, 1, 0]];
        let cc = CoherentConfiguration::from_parts(vec![3], rows, None).unwrap();
        let report = validate_axioms(&cc, ValidationMode::Exhaustive);
        assert!(report.identity.pass);
        assert!(report.transpose.pass);
        assert!(!report.intersection.pass);
        assert!(matches!(
            report.intersection.witness,
            Some(AxiomWitness::IntersectionMismatch { .. })
        ));
        assert!(!report.axioms_pass());

        let sampled = validate_axioms(
            &cc,
            ValidationMode::Sampled {
                cells: 200,
                seed: 1,
            },
        );
        assert!(!sampled.intersection.pass);
        assert_eq!(sampled.sampled_cells, Some(200));
    }

    #[test]
    fn sampled_mode_passes_valid_input() {
        let cc = pentagon();
        let report = validate_axioms(
            &cc,
            ValidationMode::Sampled {
                cells: 100,
                seed: 42,
            },
        );
        assert!(report.axioms_pass());
    }

    #[test]
    fn detects_identity_violations() {
        let rows = vec![vec![0, 0], vec![1, 0]];
        let cc = CoherentConfiguration::from_parts(vec![2], rows, None).unwrap();
        let report = validate_axioms(&cc, ValidationMode::Exhaustive);
        assert!(matches!(
            report.identity.witness,
            Some(AxiomWitness::OffDiagonalIdentity { color: 0, .. })
        ));

        let rows = vec![vec![0, 2], vec![2, 1]];
        let cc = CoherentConfiguration::from_parts(vec![2], rows, None).unwrap();
        let report = validate_axioms(&cc, ValidationMode::Exhaustive);
        assert!(matches!(
            report.identity.witness,
            Some(AxiomWitness::DiagonalSplit { point: 1, .. })
        ));
    }

    #[test]
    fn detects_transpose_violation() {
        let rows = vec![vec![0, 1, 1], vec![2, 0, 1], vec![1, 2, 0]];
        let cc = CoherentConfiguration::from_parts(vec![3], rows, None).unwrap();
        let report = validate_axioms(&cc, ValidationMode::Exhaustive);
        assert!(report.identity.pass);
        assert!(!report.transpose.pass);
        match report.transpose.witness {
            Some(AxiomWitness::TransposeMismatch { color: 1, .. }) => {}
            other => panic!("expected a transpose mismatch for color 1, got {other:?}"),
        }
    }

    #[test]
    fn block_structure_accessors() {
        let json = r#"{"fibers": [1, 2], "colors": [[0, 1, 1], [2, 3, 4], [2, 4, 3]]}"#;
        let cc = parse_json(json).unwrap();
        assert!(validate_axioms(&cc, ValidationMode::Exhaustive).axioms_pass());
        assert_eq!(cc.block_colors(0, 1), vec![1]);
        assert_eq!(cc.block_colors(1, 0), vec![2]);
        assert_eq!(cc.block_colors(1, 1), vec![3, 4]);
        assert_eq!(cc.identity_color(0), Some(0));
        assert_eq!(cc.identity_color(1), Some(3));
        assert_eq!(cc.fiber_of(0), 0);
        assert_eq!(cc.fiber_of(2), 1);
        let b = cc.block_matrix(1);
        assert_eq!((b.rows(), b.cols()), (1, 2));
        assert_eq!(b[(0, 1)], Complex64::ONE);
        let row_sums: Vec<u32> = (0..cc.rank() as u32).map(|c| cc.degree(c) as u32).collect();
        assert_eq!(row_sums, vec![1, 2, 1, 1, 1]);
    }
}
