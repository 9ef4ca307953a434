//! Dense complex matrices and the spectral routines the solvers are built on.
//!
//! The eigensolver is a cyclic Jacobi iteration for Hermitian matrices:
//! slower than Householder reduction on large inputs but extremely robust,
//! deterministic, and accurate to near machine precision on the desk-scale
//! matrices this crate works with.

use num_complex::Complex64;

use crate::error::Error;
use crate::Result;

/// Row-major dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Build from real entries, row major.
    pub fn from_real(rows: usize, cols: usize, entries: &[f64]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        ComplexMatrix {
            rows,
            cols,
            data: entries.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        }
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn validate_finite(&self) -> Result<()> {
        for z in &self.data {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::InvalidMatrix("non-finite entry".into()));
            }
        }
        Ok(())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch in matmul");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest deviation |H[i][j] - conj(H[j][i])|.
    pub fn hermitian_deviation(&self) -> f64 {
        assert!(self.is_square());
        let mut dev: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    /// (H + H*)/2.
    pub fn hermitize(&self) -> Self {
        assert!(self.is_square());
        Self::from_fn(self.rows, self.cols, |i, j| {
            (self[(i, j)] + self[(j, i)].conj()) * 0.5
        })
    }

    /// Kronecker product.
    pub fn kron(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out[(i * other.rows + k, j * other.cols + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        out
    }

    /// Principal submatrix on the given row/column index lists.
    pub fn submatrix(&self, row_idx: &[usize], col_idx: &[usize]) -> Self {
        Self::from_fn(row_idx.len(), col_idx.len(), |i, j| {
            self[(row_idx[i], col_idx[j])]
        })
    }

    /// Assemble the Hermitian block matrix [[X, A], [A*, Y]].
    pub fn block2(x: &Self, a: &Self, y: &Self) -> Self {
        let (m, n) = (a.rows, a.cols);
        assert_eq!((x.rows, x.cols), (m, m));
        assert_eq!((y.rows, y.cols), (n, n));
        Self::from_fn(m + n, m + n, |i, j| match (i < m, j < m) {
            (true, true) => x[(i, j)],
            (true, false) => a[(i, j - m)],
            (false, true) => a[(j, i - m)].conj(),
            (false, false) => y[(i - m, j - m)],
        })
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Full spectral decomposition of a Hermitian matrix: H = V diag(w) V*.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    /// Eigenvalues in ascending order.
    pub eigenvalues: Vec<f64>,
    /// Unitary matrix whose columns are the matching eigenvectors.
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    /// V diag(w) V*.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        ComplexMatrix::from_fn(n, n, |i, j| {
            let mut s = Complex64::new(0.0, 0.0);
            for k in 0..n {
                s += v[(i, k)] * self.eigenvalues[k] * v[(j, k)].conj();
            }
            s
        })
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }
}

/// Spectral decomposition of a Hermitian matrix.
///
/// The input is checked to be Hermitian within `tol` (relative to its
/// largest entry) and symmetrized before the iteration, so tiny asymmetry
/// from upstream arithmetic is tolerated but genuinely non-Hermitian input
/// is rejected.
pub fn eigh(h: &ComplexMatrix, tol: f64) -> Result<EigenDecomposition> {
    if !h.is_square() {
        return Err(Error::InvalidMatrix("eigh requires a square matrix".into()));
    }
    h.validate_finite()?;
    let scale = h.max_abs().max(1.0);
    let dev = h.hermitian_deviation();
    if dev > tol * scale {
        return Err(Error::NotHermitian {
            deviation: dev,
            tol: tol * scale,
        });
    }
    Ok(jacobi_eigh(&h.hermitize()))
}

/// Cyclic Jacobi for an exactly Hermitian matrix.
///
/// Each rotation first absorbs the phase of the pivot so the 2x2 problem
/// is real, then applies the classical Rutishauser rotation. Eigenvalues
/// come out ascending, eigenvectors as the matching columns.
pub(crate) fn jacobi_eigh(h: &ComplexMatrix) -> EigenDecomposition {
    let n = h.rows;
    let mut w = h.clone();
    let mut v = ComplexMatrix::identity(n);
    if n <= 1 {
        return sorted_eigen(&w, v);
    }

    let fro = w.frobenius_norm();
    if fro == 0.0 {
        return sorted_eigen(&w, v);
    }
    let stop = (1e-14 * fro) * (1e-14 * fro);

    for _sweep in 0..120 {
        let mut off: f64 = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                off += 2.0 * w[(i, j)].norm_sqr();
            }
        }
        if off <= stop {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = w[(p, q)];
                let b = apq.norm();
                if b < 1e-280 {
                    continue;
                }
                let phase = apq / b; // e^{i phi}
                let app = w[(p, p)].re;
                let aqq = w[(q, q)].re;
                let tau = (aqq - app) / (2.0 * b);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let ephi = phase; // e^{i phi}
                let ephi_c = phase.conj(); // e^{-i phi}

                // W <- W U, columns p and q
                for i in 0..n {
                    let wip = w[(i, p)];
                    let tmp = ephi_c * w[(i, q)];
                    w[(i, p)] = wip * c - tmp * s;
                    w[(i, q)] = wip * s + tmp * c;
                }
                // W <- U* W, rows p and q
                for j in 0..n {
                    let wpj = w[(p, j)];
                    let tmp = ephi * w[(q, j)];
                    w[(p, j)] = wpj * c - tmp * s;
                    w[(q, j)] = wpj * s + tmp * c;
                }
                // exact zeros on the pivot, real diagonal
                w[(p, q)] = Complex64::new(0.0, 0.0);
                w[(q, p)] = Complex64::new(0.0, 0.0);
                w[(p, p)] = Complex64::new(w[(p, p)].re, 0.0);
                w[(q, q)] = Complex64::new(w[(q, q)].re, 0.0);

                // V <- V U
                for i in 0..n {
                    let vip = v[(i, p)];
                    let tmp = ephi_c * v[(i, q)];
                    v[(i, p)] = vip * c - tmp * s;
                    v[(i, q)] = vip * s + tmp * c;
                }
            }
        }
    }

    sorted_eigen(&w, v)
}

fn sorted_eigen(w: &ComplexMatrix, v: ComplexMatrix) -> EigenDecomposition {
    let n = w.rows;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| w[(a, a)].re.partial_cmp(&w[(b, b)].re).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&k| w[(k, k)].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    EigenDecomposition {
        eigenvalues,
        eigenvectors,
    }
}

/// Projection onto the PSD cone in Frobenius norm: symmetrize, clip
/// negative eigenvalues to zero, reassemble.
pub fn psd_project(h: &ComplexMatrix) -> ComplexMatrix {
    let sym = h.hermitize();
    let eig = jacobi_eigh(&sym);
    let n = sym.rows;
    let v = &eig.eigenvectors;
    ComplexMatrix::from_fn(n, n, |i, j| {
        let mut s = Complex64::new(0.0, 0.0);
        for k in 0..n {
            let lam = eig.eigenvalues[k];
            if lam > 0.0 {
                s += v[(i, k)] * lam * v[(j, k)].conj();
            }
        }
        s
    })
}

/// Singular values in descending order, via the spectrum of A*A.
pub fn singular_values(a: &ComplexMatrix) -> Vec<f64> {
    let gram = a.adjoint().matmul(a);
    let eig = jacobi_eigh(&gram.hermitize());
    let mut svs: Vec<f64> = eig.eigenvalues.iter().map(|&l| l.max(0.0).sqrt()).collect();
    svs.sort_by(|x, y| y.partial_cmp(x).unwrap());
    svs
}

/// Lower-triangular Cholesky factor of a Hermitian positive definite
/// matrix, or None if a pivot fails.
pub fn cholesky(h: &ComplexMatrix) -> Option<ComplexMatrix> {
    let n = h.rows;
    let mut l = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        let mut d = h[(j, j)].re;
        for k in 0..j {
            d -= l[(j, k)].norm_sqr();
        }
        if !(d > 0.0) || !d.is_finite() {
            return None;
        }
        let dj = d.sqrt();
        l[(j, j)] = Complex64::new(dj, 0.0);
        for i in (j + 1)..n {
            let mut s = h[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)].conj();
            }
            l[(i, j)] = s / dj;
        }
    }
    Some(l)
}

/// log det H from its Cholesky factor.
pub fn chol_logdet(l: &ComplexMatrix) -> f64 {
    (0..l.rows).map(|i| l[(i, i)].re.ln()).sum::<f64>() * 2.0
}

/// H^{-1} from the Cholesky factor of H.
pub fn chol_inverse(l: &ComplexMatrix) -> ComplexMatrix {
    let n = l.rows;
    // invert L column by column, then H^{-1} = L^{-*} L^{-1}
    let mut linv = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        linv[(j, j)] = Complex64::new(1.0 / l[(j, j)].re, 0.0);
        for i in (j + 1)..n {
            let mut s = Complex64::new(0.0, 0.0);
            for k in j..i {
                s += l[(i, k)] * linv[(k, j)];
            }
            linv[(i, j)] = -s / l[(i, i)].re;
        }
    }
    let mut out = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut s = Complex64::new(0.0, 0.0);
            for k in i.max(j)..n {
                s += linv[(k, i)].conj() * linv[(k, j)];
            }
            out[(i, j)] = s;
        }
    }
    out
}

/// Solve the symmetric positive definite system A x = b (A is K x K,
/// row major, f64). Jacobi-scales the system first (the barrier Hessians
/// are badly anisotropic near the central path tail), adds an escalating
/// ridge if the factorization fails, and finishes with one pass of
/// iterative refinement.
pub fn solve_spd(a: &[f64], b: &[f64]) -> Option<Vec<f64>> {
    let k = b.len();
    assert_eq!(a.len(), k * k);
    // D^{-1/2} A D^{-1/2} y = D^{-1/2} b,  x = D^{-1/2} y
    let d: Vec<f64> = (0..k)
        .map(|i| {
            let v = a[i * k + i];
            if v > 0.0 && v.is_finite() {
                v.sqrt()
            } else {
                1.0
            }
        })
        .collect();
    let mut asc = vec![0.0_f64; k * k];
    for i in 0..k {
        for j in 0..k {
            asc[i * k + j] = a[i * k + j] / (d[i] * d[j]);
        }
    }
    let bsc: Vec<f64> = (0..k).map(|i| b[i] / d[i]).collect();

    let mut ridge = 0.0_f64;
    let mut y = None;
    for _attempt in 0..8 {
        if let Some(sol) = try_chol_solve(&asc, &bsc, ridge) {
            y = Some(sol);
            break;
        }
        ridge = if ridge == 0.0 { 1e-13 } else { ridge * 100.0 };
    }
    let mut y = y?;
    // one step of iterative refinement in the scaled system
    let mut resid = vec![0.0_f64; k];
    for i in 0..k {
        let mut s = bsc[i];
        for j in 0..k {
            s -= asc[i * k + j] * y[j];
        }
        resid[i] = s;
    }
    if let Some(corr) = try_chol_solve(&asc, &resid, ridge) {
        for i in 0..k {
            y[i] += corr[i];
        }
    }
    Some((0..k).map(|i| y[i] / d[i]).collect())
}

fn try_chol_solve(a: &[f64], b: &[f64], ridge: f64) -> Option<Vec<f64>> {
    let k = b.len();
    let mut l = vec![0.0_f64; k * k];
    for j in 0..k {
        let mut d = a[j * k + j] + ridge;
        for t in 0..j {
            d -= l[j * k + t] * l[j * k + t];
        }
        if !(d > 0.0) || !d.is_finite() {
            return None;
        }
        let dj = d.sqrt();
        l[j * k + j] = dj;
        for i in (j + 1)..k {
            let mut s = a[i * k + j];
            for t in 0..j {
                s -= l[i * k + t] * l[j * k + t];
            }
            l[i * k + j] = s / dj;
        }
    }
    let mut y = vec![0.0; k];
    for i in 0..k {
        let mut s = b[i];
        for t in 0..i {
            s -= l[i * k + t] * y[t];
        }
        y[i] = s / l[i * k + i];
    }
    let mut x = vec![0.0; k];
    for i in (0..k).rev() {
        let mut s = y[i];
        for t in (i + 1)..k {
            s -= l[t * k + i] * x[t];
        }
        x[i] = s / l[i * k + i];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cm(rows: usize, cols: usize, re: &[f64]) -> ComplexMatrix {
        ComplexMatrix::from_real(rows, cols, re)
    }

    #[test]
    fn eigh_identity() {
        let eig = eigh(&ComplexMatrix::identity(2), 1e-12).unwrap();
        assert!((eig.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((eig.eigenvalues[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eigh_pauli_x() {
        let eig = eigh(&cm(2, 2, &[0.0, 1.0, 1.0, 0.0]), 1e-12).unwrap();
        assert!((eig.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((eig.eigenvalues[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eigh_diagonal() {
        let eig = eigh(&cm(2, 2, &[2.0, 0.0, 0.0, 3.0]), 1e-12).unwrap();
        assert_eq!(eig.eigenvalues, vec![2.0, 3.0]);
        // standard basis vectors up to phase
        assert!((eig.eigenvectors[(0, 0)].norm() - 1.0).abs() < 1e-14);
        assert!((eig.eigenvectors[(1, 1)].norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eigh_rejects_non_hermitian() {
        let m = cm(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert!(matches!(eigh(&m, 1e-9), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn eigh_complex_hermitian_reconstructs() {
        // fixed complex Hermitian 4x4
        let mut h = ComplexMatrix::zeros(4, 4);
        let vals = [
            (0, 0, 1.5, 0.0),
            (1, 1, -0.25, 0.0),
            (2, 2, 0.75, 0.0),
            (3, 3, 2.0, 0.0),
            (0, 1, 0.3, -0.7),
            (0, 2, -1.1, 0.2),
            (0, 3, 0.0, 0.9),
            (1, 2, 0.4, 0.4),
            (1, 3, -0.6, 0.1),
            (2, 3, 0.05, -0.3),
        ];
        for &(i, j, re, im) in &vals {
            h[(i, j)] = Complex64::new(re, im);
            h[(j, i)] = Complex64::new(re, -im);
        }
        let eig = eigh(&h, 1e-12).unwrap();
        let err = eig.reconstruct().sub(&h).frobenius_norm();
        assert!(err < 1e-12 * h.frobenius_norm().max(1.0), "err = {err}");
        // unitarity
        let vtv = eig.eigenvectors.adjoint().matmul(&eig.eigenvectors);
        let dev = vtv.sub(&ComplexMatrix::identity(4)).frobenius_norm();
        assert!(dev < 1e-12, "V*V deviates by {dev}");
        // eigenvalues ascending
        for k in 1..4 {
            assert!(eig.eigenvalues[k] >= eig.eigenvalues[k - 1]);
        }
    }

    #[test]
    fn psd_project_cases() {
        // PSD input unchanged
        let a = cm(2, 2, &[2.0, 1.0, 1.0, 2.0]);
        assert!(psd_project(&a).sub(&a).frobenius_norm() < 1e-13);
        // clip a negative diagonal entry
        let b = cm(2, 2, &[-1.0, 0.0, 0.0, 2.0]);
        let pb = psd_project(&b);
        assert!(pb.sub(&cm(2, 2, &[0.0, 0.0, 0.0, 2.0])).frobenius_norm() < 1e-13);
        // [[0,1],[1,0]] -> [[1/2,1/2],[1/2,1/2]]
        let c = cm(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let pc = psd_project(&c);
        assert!(pc.sub(&cm(2, 2, &[0.5, 0.5, 0.5, 0.5])).frobenius_norm() < 1e-13);
        // idempotence
        assert!(psd_project(&pc).sub(&pc).frobenius_norm() < 1e-13);
    }

    #[test]
    fn cholesky_roundtrip_and_inverse() {
        let mut h = cm(3, 3, &[4.0, 1.0, 0.5, 1.0, 3.0, -0.25, 0.5, -0.25, 2.0]);
        h[(0, 1)] += Complex64::new(0.0, 0.4);
        h[(1, 0)] -= Complex64::new(0.0, 0.4);
        let l = cholesky(&h).expect("pd");
        let rec = l.matmul(&l.adjoint());
        assert!(rec.sub(&h).frobenius_norm() < 1e-12);
        let hinv = chol_inverse(&l);
        let prod = h.matmul(&hinv);
        assert!(prod.sub(&ComplexMatrix::identity(3)).frobenius_norm() < 1e-11);
        let not_pd = cm(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        assert!(cholesky(&not_pd).is_none());
    }

    #[test]
    fn singular_values_of_ones() {
        let j = cm(3, 3, &[1.0; 9]);
        let sv = singular_values(&j);
        assert!((sv[0] - 3.0).abs() < 1e-12);
        assert!(sv[1].abs() < 1e-7 && sv[2].abs() < 1e-7);
    }

    #[test]
    fn solve_spd_small() {
        let a = vec![4.0, 1.0, 1.0, 3.0];
        let b = vec![1.0, 2.0];
        let x = solve_spd(&a, &b).unwrap();
        assert!((4.0 * x[0] + x[1] - 1.0).abs() < 1e-12);
        assert!((x[0] + 3.0 * x[1] - 2.0).abs() < 1e-12);
    }
}
