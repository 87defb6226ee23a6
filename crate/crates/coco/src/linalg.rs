//! Dense complex matrices and a cyclic Jacobi eigensolver for Hermitian
//! matrices.
//!
//! Everything downstream works with blocks of at most a few dozen rows, so
//! the representation is a plain row-major `Vec<Complex64>` and the solver
//! favors reproducibility over large-scale performance: rotations are applied
//! in a fixed sweep order, so identical inputs give bit-identical results.

use num_complex::Complex64;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use crate::tol;
use crate::{Error, Result};

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            data: vec![Complex64::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::ONE;
        }
        m
    }

    pub fn ones(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            data: vec![Complex64::ONE; rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        CMatrix { rows, cols, data }
    }

    /// Builds a matrix from real entries given row by row. Panics if the
    /// rows are ragged.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        CMatrix::from_fn(r, c, |i, j| Complex64::new(rows[i][j], 0.0))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn all_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn transpose(&self) -> Self {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(Complex64::conj).collect(),
        }
    }

    pub fn adjoint(&self) -> Self {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    /// Entrywise (Hadamard) product. Panics on shape mismatch.
    pub fn hadamard(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a * b)
                .collect(),
        }
    }

    pub fn scaled(&self, z: Complex64) -> Self {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * z).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    pub fn fro_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Frobenius inner product ⟨A, B⟩ = tr(A* B).
    pub fn inner(&self, other: &Self) -> Complex64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn dist_fro(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn dist_max(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// max |H − H*| over all entries; zero for Hermitian matrices.
    pub fn hermitian_residual(&self) -> f64 {
        assert!(self.is_square());
        let mut r: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                r = r.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        r
    }

    /// Entries as `[re, im]` pairs, row by row.
    pub fn to_pairs(&self) -> Vec<Vec<[f64; 2]>> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| [self[(i, j)].re, self[(i, j)].im])
                    .collect()
            })
            .collect()
    }

    pub fn from_pairs(pairs: &[Vec<[f64; 2]>]) -> Self {
        let r = pairs.len();
        let c = pairs.first().map_or(0, Vec::len);
        assert!(pairs.iter().all(|row| row.len() == c), "ragged rows");
        CMatrix::from_fn(r, c, |i, j| Complex64::new(pairs[i][j][0], pairs[i][j][1]))
    }

    fn off_diagonal_fro(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                if i != j {
                    s += self[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    }

    /// Columns `cols` of `self`, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        CMatrix::from_fn(self.rows, cols.len(), |i, j| self[(i, cols[j])])
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matrix product");
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex64::ZERO {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

/// Eigenvalues (ascending) and a unitary matrix of corresponding
/// eigenvector columns.
#[derive(Debug, Clone)]
pub struct EigDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

const MAX_SWEEPS: usize = 60;

/// Diagonalizes a Hermitian matrix by cyclic Jacobi rotations.
///
/// Each rotation absorbs the phase of the pivot entry into a
/// `diag(1, e^{-iφ})` factor, reducing the 2×2 pivot block to a real
/// symmetric one, and then applies the classical rotation that annihilates
/// it. Sweeps run in a fixed row-major pivot order until the off-diagonal
/// Frobenius mass drops below `tol` times the Frobenius norm of the input.
///
/// Fails if the matrix is empty, non-square, non-finite, or violates
/// Hermiticity by more than `tol` relative to its largest entry.
pub fn hermitian_eig(h: &CMatrix, tol: f64) -> Result<EigDecomposition> {
    let n = h.rows();
    if n == 0 || h.cols() == 0 {
        return Err(Error::EmptyMatrix);
    }
    if !h.is_square() {
        return Err(Error::InvalidArgument(format!(
            "eigensolver needs a square matrix, got {}x{}",
            h.rows(),
            h.cols()
        )));
    }
    if !h.all_finite() {
        return Err(Error::NonFiniteEntry);
    }
    let residual = h.hermitian_residual();
    if residual > tol * h.max_abs().max(1.0) {
        return Err(Error::NotHermitian { residual });
    }

    let mut a = CMatrix::from_fn(n, n, |i, j| (h[(i, j)] + h[(j, i)].conj()) * 0.5);
    let mut v = CMatrix::identity(n);
    let target = tol * h.fro_norm();

    let mut sweeps = 0;
    while a.off_diagonal_fro() > target {
        if sweeps == MAX_SWEEPS {
            return Err(Error::Numerical(format!(
                "Jacobi iteration did not converge within {MAX_SWEEPS} sweeps (off-diagonal mass {:.3e}, target {:.3e})",
                a.off_diagonal_fro(),
                target
            )));
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let pivot = a[(p, q)];
                let m = pivot.norm();
                if m < f64::MIN_POSITIVE {
                    continue;
                }
                let phase = pivot / m;
                let tau = (a[(q, q)].re - a[(p, p)].re) / (2.0 * m);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                let sp = phase.conj() * s;
                let cp = phase.conj() * c;
                for r in 0..n {
                    let x = a[(p, r)];
                    let y = a[(q, r)];
                    a[(p, r)] = x * c - y * sp.conj();
                    a[(q, r)] = x * s + y * cp.conj();
                }
                for r in 0..n {
                    let x = a[(r, p)];
                    let y = a[(r, q)];
                    a[(r, p)] = x * c - y * sp;
                    a[(r, q)] = x * s + y * cp;
                    let vx = v[(r, p)];
                    let vy = v[(r, q)];
                    v[(r, p)] = vx * c - vy * sp;
                    v[(r, q)] = vx * s + vy * cp;
                }
                a[(p, q)] = Complex64::ZERO;
                a[(q, p)] = Complex64::ZERO;
                a[(p, p)].im = 0.0;
                a[(q, q)].im = 0.0;
            }
        }
    }
    Ok(sorted_eig(a, v))
}

fn sorted_eig(a: CMatrix, v: CMatrix) -> EigDecomposition {
    let n = a.rows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).unwrap());
    EigDecomposition {
        eigenvalues: order.iter().map(|&i| a[(i, i)].re).collect(),
        eigenvectors: v.select_columns(&order),
    }
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(h: &CMatrix) -> Result<f64> {
    Ok(hermitian_eig(h, tol::EIG)?.eigenvalues[0])
}

/// Tests positive semidefiniteness with slack `tol` relative to
/// max(1, spectral norm). Empty matrices are vacuously positive
/// semidefinite.
pub fn psd(h: &CMatrix, tol: f64) -> Result<bool> {
    if h.rows() == 0 && h.cols() == 0 {
        return Ok(true);
    }
    let eig = hermitian_eig(h, crate::tol::EIG)?;
    let lo = eig.eigenvalues[0];
    let hi = eig.eigenvalues[eig.eigenvalues.len() - 1];
    let scale = lo.abs().max(hi.abs()).max(1.0);
    Ok(lo >= -tol * scale)
}

/// Number of singular values above `tol · max(1, σ_max)`, computed from the
/// eigenvalues of M*M. Zero and numerically-zero matrices have rank 0.
pub fn numeric_rank(m: &CMatrix, tol: f64) -> Result<usize> {
    if m.rows() == 0 || m.cols() == 0 {
        return Ok(0);
    }
    if !m.all_finite() {
        return Err(Error::NonFiniteEntry);
    }
    let gram = &m.adjoint() * m;
    let eig = hermitian_eig(&gram, crate::tol::EIG)?;
    let sigma: Vec<f64> = eig.eigenvalues.iter().map(|&l| l.max(0.0).sqrt()).collect();
    let top = sigma.last().copied().unwrap_or(0.0);
    let cutoff = tol * top.max(1.0);
    Ok(sigma.iter().filter(|&&s| s > cutoff).count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> CMatrix {
        let mut h = CMatrix::zeros(n, n);
        for i in 0..n {
            h[(i, i)] = Complex64::new(rng.random::<f64>() * 2.0 - 1.0, 0.0);
            for j in (i + 1)..n {
                let z = Complex64::new(
                    rng.random::<f64>() * 2.0 - 1.0,
                    rng.random::<f64>() * 2.0 - 1.0,
                );
                h[(i, j)] = z;
                h[(j, i)] = z.conj();
            }
        }
        h
    }

    #[test]
    fn identity_eigenvalues() {
        let eig = hermitian_eig(&CMatrix::identity(3), tol::EIG).unwrap();
        assert_eq!(eig.eigenvalues.len(), 3);
        for l in eig.eigenvalues {
            assert_abs_diff_eq!(l, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn all_ones_eigenvalues() {
        let eig = hermitian_eig(&CMatrix::ones(4, 4), tol::EIG).unwrap();
        let expect = [0.0, 0.0, 0.0, 4.0];
        for (l, e) in eig.eigenvalues.iter().zip(expect) {
            assert_abs_diff_eq!(*l, e, epsilon = 1e-10);
        }
    }

    #[test]
    fn pentagon_cycle_spectrum() {
        let n = 5;
        let adj = CMatrix::from_fn(n, n, |i, j| {
            let d = (i + n - j) % n;
            if d == 1 || d == n - 1 {
                Complex64::ONE
            } else {
                Complex64::ZERO
            }
        });
        let eig = hermitian_eig(&adj, tol::EIG).unwrap();
        let phi = (1.0 + 5.0_f64.sqrt()) / 2.0;
        let expect = [-phi, -phi, phi - 1.0, phi - 1.0, 2.0];
        for (l, e) in eig.eigenvalues.iter().zip(expect) {
            assert_abs_diff_eq!(*l, e, epsilon = 1e-10);
        }
    }

    #[test]
    fn random_hermitian_invariants() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [1, 2, 3, 5, 8, 13, 21, 34] {
            let h = random_hermitian(n, &mut rng);
            let eig = hermitian_eig(&h, tol::EIG).unwrap();
            let v = &eig.eigenvectors;
            let vtv = &v.adjoint() * v;
            assert!(
                vtv.dist_max(&CMatrix::identity(n)) < 1e-12,
                "n={n}: V not unitary"
            );
            let lambda = CMatrix::from_fn(n, n, |i, j| {
                if i == j {
                    Complex64::new(eig.eigenvalues[i], 0.0)
                } else {
                    Complex64::ZERO
                }
            });
            let recon = &(v * &lambda) * &v.adjoint();
            let scale = h.fro_norm().max(1.0);
            assert!(
                recon.dist_fro(&h) < 10.0 * tol::EIG * scale,
                "n={n}: reconstruction residual {}",
                recon.dist_fro(&h)
            );
            for k in 1..eig.eigenvalues.len() {
                assert!(eig.eigenvalues[k - 1] <= eig.eigenvalues[k]);
            }
        }
    }

    #[test]
    fn eigenvalues_shift_with_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let h = random_hermitian(6, &mut rng);
        let shifted = &h + &CMatrix::identity(6).scaled(Complex64::new(2.5, 0.0));
        let a = hermitian_eig(&h, tol::EIG).unwrap().eigenvalues;
        let b = hermitian_eig(&shifted, tol::EIG).unwrap().eigenvalues;
        for (x, y) in a.iter().zip(b) {
            assert_abs_diff_eq!(x + 2.5, y, epsilon = 1e-9);
        }
    }

    #[test]
    fn rejects_non_hermitian_and_empty() {
        let mut m = CMatrix::zeros(2, 2);
        m[(0, 1)] = Complex64::ONE;
        assert!(matches!(
            hermitian_eig(&m, tol::EIG),
            Err(Error::NotHermitian { .. })
        ));
        assert!(matches!(
            hermitian_eig(&CMatrix::zeros(0, 0), tol::EIG),
            Err(Error::EmptyMatrix)
        ));
    }

    #[test]
    fn psd_examples() {
        let pos = CMatrix::from_real_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]]);
        let indef = CMatrix::from_real_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]);
        assert!(psd(&pos, tol::PSD).unwrap());
        assert!(!psd(&indef, tol::PSD).unwrap());
        assert_abs_diff_eq!(min_eigenvalue(&pos).unwrap(), 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(min_eigenvalue(&indef).unwrap(), -1.0, epsilon = 1e-10);
        assert!(psd(&CMatrix::zeros(0, 0), tol::PSD).unwrap());
    }

    #[test]
    fn rank_examples() {
        assert_eq!(numeric_rank(&CMatrix::zeros(3, 3), tol::RANK).unwrap(), 0);
        assert_eq!(numeric_rank(&CMatrix::ones(2, 2), tol::RANK).unwrap(), 1);
        assert_eq!(numeric_rank(&CMatrix::identity(4), tol::RANK).unwrap(), 4);
        let noise = CMatrix::from_real_rows(&[vec![1e-13]]);
        assert_eq!(numeric_rank(&noise, tol::RANK).unwrap(), 0);
        let rect = CMatrix::from_real_rows(&[vec![1.0, 2.0, 3.0], vec![2.0, 4.0, 6.0]]);
        assert_eq!(numeric_rank(&rect, tol::RANK).unwrap(), 1);
    }

    #[test]
    fn rank_invariant_under_unitary_conjugation() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let h = random_hermitian(7, &mut rng);
        let u = hermitian_eig(&h, tol::EIG).unwrap().eigenvectors;
        let m = random_hermitian(7, &mut rng);
        let conj = &(&u.adjoint() * &m) * &u;
        assert_eq!(
            numeric_rank(&m, tol::RANK).unwrap(),
            numeric_rank(&conj, tol::RANK).unwrap()
        );
    }

    #[test]
    fn deterministic_output() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let h = random_hermitian(9, &mut rng);
        let a = hermitian_eig(&h, tol::EIG).unwrap();
        let b = hermitian_eig(&h, tol::EIG).unwrap();
        assert_eq!(a.eigenvalues, b.eigenvalues);
        assert_eq!(a.eigenvectors, b.eigenvectors);
    }
}
