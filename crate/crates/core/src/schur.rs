//! The completely bounded Schur multiplier norm of a complex matrix.
//!
//! The value is computed through the block factorization characterization:
//!
//!   ||A||_S = min { t : exists Hermitian X, Y with
//!                   [[X, A], [A*, Y]] >= 0, X_ii <= t, Y_jj <= t }.
//!
//! A square-root factorization of the optimal block matrix yields vectors
//! p_i, q_j with A[i][j] = <p_i, q_j> and max ||p_i|| max ||q_j|| = t, and
//! the dual of the same program yields a certified lower bound of the form
//! 2 Re tr(W* A) / (sum lambda + sum mu) for a PSD matrix
//! [[diag lambda, -W], [-W*, diag mu]].
//!
//! Solver pipeline: exact fast paths (zero, Hermitian PSD, rank one),
//! a bisection + alternating-projection (Dykstra) phase that brackets the
//! value cheaply on larger inputs, then a barrier phase that drives the
//! bracket to the requested tolerance and emits the dual certificate.

use num_complex::Complex64;

use crate::error::Error;
use crate::linalg::{jacobi_eigh, psd_project, ComplexMatrix};
use crate::sdp::{HermBasis, SdpProblem};
use crate::Result;

/// Hard cap on rows + cols accepted by [`schur_norm`].
pub const MAX_SIZE: usize = 8192;

/// Which route produced a [`SchurNormResult`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveMethod {
    Zero,
    HermitianPsd,
    RankOne,
    TightBracket,
    Sdp,
}

/// Dual certificate: the data of a PSD matrix
/// [[diag(lambda), -W], [-W*, diag(mu)]] normalized to unit diagonal mass.
/// Any such matrix certifies ||A||_S >= 2 Re tr(W* A) / (sum lambda + mu).
#[derive(Clone, Debug)]
pub struct DualCertificate {
    pub lambda: Vec<f64>,
    pub mu: Vec<f64>,
    pub w: ComplexMatrix,
}

impl DualCertificate {
    /// The certified bound, re-evaluated from scratch.
    pub fn bound(&self, a: &ComplexMatrix) -> f64 {
        let tau: f64 = self.lambda.iter().sum::<f64>() + self.mu.iter().sum::<f64>();
        if tau <= 0.0 {
            return 0.0;
        }
        let mut pairing = 0.0;
        for i in 0..a.rows {
            for j in 0..a.cols {
                pairing += (self.w[(i, j)].conj() * a[(i, j)]).re;
            }
        }
        2.0 * pairing / tau
    }

    /// Minimum eigenvalue of the certificate matrix; must be >= -eps for
    /// the bound to be trustworthy.
    pub fn min_eigenvalue(&self) -> f64 {
        let m = self.lambda.len();
        let n = self.mu.len();
        let z = ComplexMatrix::from_fn(m + n, m + n, |i, j| match (i < m, j < m) {
            (true, true) => {
                if i == j {
                    Complex64::new(self.lambda[i], 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }
            (true, false) => -self.w[(i, j - m)],
            (false, true) => -self.w[(j, i - m)].conj(),
            (false, false) => {
                if i == j {
                    Complex64::new(self.mu[i - m], 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }
        });
        jacobi_eigh(&z).min_eigenvalue()
    }
}

/// Outcome of one Schur-norm computation.
#[derive(Clone, Debug)]
pub struct SchurNormResult {
    /// The computed norm (primal optimum, an upper bound on the truth).
    pub value: f64,
    /// Vectors realizing A[i][j] = <p_i, q_j>, dimension <= rows + cols.
    pub p_vectors: Vec<Vec<Complex64>>,
    pub q_vectors: Vec<Vec<Complex64>>,
    /// Certified lower bound (from the dual certificate, floored by the
    /// largest entry modulus).
    pub lower_bound: f64,
    /// value - lower_bound, clipped at zero.
    pub gap: f64,
    pub iterations: usize,
    pub tolerance: f64,
    pub method: SolveMethod,
    pub dual: Option<DualCertificate>,
}

/// Completely bounded Schur norm with primal factorization and certified
/// lower bound. Deterministic for fixed input.
pub fn schur_norm(a: &ComplexMatrix, tol: f64) -> Result<SchurNormResult> {
    if a.rows + a.cols > MAX_SIZE {
        return Err(Error::InvalidMatrix(format!(
            "rows + cols = {} exceeds {MAX_SIZE}",
            a.rows + a.cols
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidMatrix("tolerance must be positive".into()));
    }
    a.validate_finite()?;
    let scale = a.max_abs();
    if scale == 0.0 {
        return Ok(zero_result(a, tol));
    }
    if let Some(res) = psd_fast_path(a, tol) {
        return Ok(res);
    }
    if let Some(res) = rank_one_fast_path(a, tol) {
        return Ok(res);
    }

    let (m, n) = (a.rows, a.cols);
    let lower0 = scale;
    let row_bound = (0..m)
        .map(|i| a.row(i).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .fold(0.0, f64::max);
    let col_bound = (0..n)
        .map(|j| (0..m).map(|i| a[(i, j)].norm_sqr()).sum::<f64>().sqrt())
        .fold(0.0, f64::max);
    let upper0 = row_bound.min(col_bound);
    if upper0 <= lower0 * (1.0 + tol) {
        return Ok(tight_bracket_result(a, tol, lower0, upper0));
    }

    // work on the scaled matrix so the value lies in (0, 1]
    let ahat = a.scale(Complex64::new(1.0 / upper0, 0.0));
    let mut iterations = 0usize;

    // Dykstra/bisection phase on larger problems: brackets the value and
    // provides a feasible warm start for the barrier.
    let mut lo = lower0 / upper0;
    let hi = 1.0f64;
    let mut warm: Option<ComplexMatrix> = None;
    if m + n >= 14 {
        let (new_lo, new_hi, point, its) = dykstra_bisect(&ahat, lo, hi);
        iterations += its;
        lo = new_lo;
        let _ = new_hi;
        warm = point;
    }

    // barrier phase, driven by the certified duality gap: every eta round
    // extracts a cleaned dual certificate and stops as soon as the
    // certificate proves the value to the requested accuracy
    let (problem, mut z) = build_schur_problem(&ahat, warm.as_ref(), hi);
    let mut eta = problem.initial_eta(&z);
    let mut best_t = f64::INFINITY;
    let mut best_h: Option<ComplexMatrix> = None;
    let mut best_bound = lo; // scaled entrywise floor
    let mut best_dual: Option<DualCertificate> = None;
    let mut stalls = 0u32;
    loop {
        let state = problem.center(&mut z, eta, 60);
        iterations += state.steps;
        let t = z[0];
        if t < best_t {
            best_t = t;
            best_h = Some(ComplexMatrix::from_fn(m + n, m + n, |i, j| state.h[(i, j)]));
        }
        if let Some(cert) = extract_dual(&state.h_inv, m, n) {
            if cert.min_eigenvalue() > -1e-13 {
                let b = cert.bound(&ahat);
                if b > best_bound {
                    best_bound = b;
                    best_dual = Some(cert);
                }
            }
        }
        let value = best_t * upper0;
        let gap = (best_t - best_bound).max(0.0) * upper0;
        let allowed = (10.0 * tol).max(10.0 * tol * value);
        if gap <= 0.7 * allowed {
            break;
        }
        if state.moved {
            stalls = 0;
        } else if state.decrement_sq > 0.01 {
            stalls += 1;
        }
        if stalls >= 2 || iterations > 2500 {
            break;
        }
        eta *= 6.0;
    }

    let value = best_t * upper0;
    let h_main = best_h.expect("at least one centering round ran");
    let (p_vectors, q_vectors) = factor_block(&h_main, m, n, upper0);

    let lower_bound = (best_bound * upper0).max(lower0).min(value);
    let gap = (value - lower_bound).max(0.0);

    let allowed = (10.0 * tol).max(10.0 * tol * value);
    if gap > allowed {
        return Err(Error::SolverDidNotConverge {
            value,
            lower_bound,
            iterations,
        });
    }

    Ok(SchurNormResult {
        value,
        p_vectors,
        q_vectors,
        lower_bound,
        gap,
        iterations,
        tolerance: tol,
        method: SolveMethod::Sdp,
        dual: best_dual,
    })
}

fn zero_result(a: &ComplexMatrix, tol: f64) -> SchurNormResult {
    SchurNormResult {
        value: 0.0,
        p_vectors: vec![vec![]; a.rows],
        q_vectors: vec![vec![]; a.cols],
        lower_bound: 0.0,
        gap: 0.0,
        iterations: 0,
        tolerance: tol,
        method: SolveMethod::Zero,
        dual: None,
    }
}

/// Square Hermitian PSD input: the norm is exactly the largest diagonal
/// entry, witnessed by the Gram factorization of A itself.
fn psd_fast_path(a: &ComplexMatrix, tol: f64) -> Option<SchurNormResult> {
    if !a.is_square() {
        return None;
    }
    let scale = a.max_abs();
    if a.hermitian_deviation() > tol * scale {
        return None;
    }
    let sym = a.hermitize();
    let eig = jacobi_eigh(&sym);
    if eig.min_eigenvalue() < -tol * scale {
        return None;
    }
    let n = a.rows;
    let (imax, value) =
        (0..n)
            .map(|i| (i, sym[(i, i)].re))
            .fold(
                (0, f64::NEG_INFINITY),
                |acc, c| if c.1 > acc.1 { c } else { acc },
            );
    // p_i = q_i = row i of V sqrt(Lambda_+)
    let v = &eig.eigenvectors;
    let vecs: Vec<Vec<Complex64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|k| v[(i, k)] * eig.eigenvalues[k].max(0.0).sqrt())
                .collect()
        })
        .collect();
    let w = ComplexMatrix::from_fn(n, n, |i, j| {
        if i == imax && j == imax {
            Complex64::new(0.5, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let mut lambda = vec![0.0; n];
    let mut mu = vec![0.0; n];
    lambda[imax] = 0.5;
    mu[imax] = 0.5;
    Some(SchurNormResult {
        value,
        p_vectors: vecs.clone(),
        q_vectors: vecs,
        lower_bound: value,
        gap: 0.0,
        iterations: 0,
        tolerance: tol,
        method: SolveMethod::HermitianPsd,
        dual: Some(DualCertificate { lambda, mu, w }),
    })
}

/// Rank-one input A = a b*: the norm is exactly the product of the sup
/// norms of a and b.
fn rank_one_fast_path(a: &ComplexMatrix, tol: f64) -> Option<SchurNormResult> {
    let (m, n) = (a.rows, a.cols);
    // spectrum of the smaller Gram matrix
    let gram = if n <= m {
        a.adjoint().matmul(a)
    } else {
        a.matmul(&a.adjoint())
    };
    let eig = jacobi_eigh(&gram.hermitize());
    let k = gram.rows;
    let top = eig.eigenvalues[k - 1].max(0.0);
    let second = if k >= 2 {
        eig.eigenvalues[k - 2].max(0.0)
    } else {
        0.0
    };
    // eigenvalue screen at the solver's resolution; the exact entrywise
    // reconstruction check below is the decisive gate
    if top == 0.0 || second > 1e-13 * top {
        return None;
    }
    let sigma = top.sqrt();
    // unit vector on the small side, then the paired side via A
    let v_small: Vec<Complex64> = (0..k).map(|i| eig.eigenvectors[(i, k - 1)]).collect();
    let (avec, bvec): (Vec<Complex64>, Vec<Complex64>) = if n <= m {
        // v_small is the right singular vector v; a = A v
        let av: Vec<Complex64> = (0..m)
            .map(|i| (0..n).map(|j| a[(i, j)] * v_small[j]).sum::<Complex64>())
            .collect();
        (av, v_small)
    } else {
        // v_small is the left singular vector u; b = A* u, a = u * sigma^2/|b|...
        let bv: Vec<Complex64> = (0..n)
            .map(|j| {
                (0..m)
                    .map(|i| a[(i, j)].conj() * v_small[i])
                    .sum::<Complex64>()
            })
            .collect();
        // A = u (A* u)^* exactly in the rank-one case
        (v_small, bv)
    };
    let _ = sigma;
    let amax = avec.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let bmax = bvec.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let value = amax * bmax;
    // verify the rank-one reconstruction really matches A
    let mut err: f64 = 0.0;
    for i in 0..m {
        for j in 0..n {
            err = err.max((avec[i] * bvec[j].conj() - a[(i, j)]).norm());
        }
    }
    if err > 1e-11 * a.max_abs().max(1e-300) {
        return None;
    }
    let s = (bmax / amax.max(1e-300)).sqrt();
    let p_vectors: Vec<Vec<Complex64>> = avec.iter().map(|&x| vec![x * s]).collect();
    let q_vectors: Vec<Vec<Complex64>> = bvec.iter().map(|&x| vec![x / s]).collect();
    // entrywise dual at the argmax pair
    let imax = (0..m).fold(0, |acc, i| {
        if avec[i].norm() > avec[acc].norm() {
            i
        } else {
            acc
        }
    });
    let jmax = (0..n).fold(0, |acc, j| {
        if bvec[j].norm() > bvec[acc].norm() {
            j
        } else {
            acc
        }
    });
    let aij = a[(imax, jmax)];
    let w = ComplexMatrix::from_fn(m, n, |i, j| {
        if i == imax && j == jmax && aij.norm() > 0.0 {
            aij / aij.norm() * 0.5
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let mut lambda = vec![0.0; m];
    let mut mu = vec![0.0; n];
    lambda[imax] = 0.5;
    mu[jmax] = 0.5;
    Some(SchurNormResult {
        value,
        p_vectors,
        q_vectors,
        lower_bound: value,
        gap: 0.0,
        iterations: 0,
        tolerance: tol,
        method: SolveMethod::RankOne,
        dual: Some(DualCertificate { lambda, mu, w }),
    })
}

/// Entry bound and factorization bound already coincide: report the row
/// factorization (p_i = row_i, q_j = e_j, balanced).
fn tight_bracket_result(a: &ComplexMatrix, tol: f64, lower0: f64, upper0: f64) -> SchurNormResult {
    let (m, n) = (a.rows, a.cols);
    let c = upper0.sqrt();
    let p_vectors: Vec<Vec<Complex64>> = (0..m)
        .map(|i| a.row(i).iter().map(|&z| z / c).collect())
        .collect();
    let q_vectors: Vec<Vec<Complex64>> = (0..n)
        .map(|j| {
            (0..n)
                .map(|k| {
                    if k == j {
                        Complex64::new(c, 0.0)
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                })
                .collect()
        })
        .collect();
    // entrywise dual at the largest entry
    let mut best = (0usize, 0usize, 0.0f64);
    for i in 0..m {
        for j in 0..n {
            if a[(i, j)].norm() > best.2 {
                best = (i, j, a[(i, j)].norm());
            }
        }
    }
    let (imax, jmax, mag) = best;
    let w = ComplexMatrix::from_fn(m, n, |i, j| {
        if i == imax && j == jmax {
            a[(imax, jmax)] / mag * 0.5
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let mut lambda = vec![0.0; m];
    let mut mu = vec![0.0; n];
    lambda[imax] = 0.5;
    mu[jmax] = 0.5;
    SchurNormResult {
        value: upper0,
        p_vectors,
        q_vectors,
        lower_bound: lower0,
        gap: upper0 - lower0,
        iterations: 0,
        tolerance: tol,
        method: SolveMethod::TightBracket,
        dual: Some(DualCertificate { lambda, mu, w }),
    }
}

/// Alternating projections between the PSD cone and the affine set
/// { H : off-diagonal block = A, diagonal = t } with a Dykstra correction
/// on the cone side; bisection over t. Confirmed-feasible t values shrink
/// the upper end, confirmed-infeasible ones raise the lower end, and
/// ambiguous runs stop the phase with the bracket still valid.
fn dykstra_bisect(
    ahat: &ComplexMatrix,
    mut lo: f64,
    mut hi: f64,
) -> (f64, f64, Option<ComplexMatrix>, usize) {
    let (m, n) = (ahat.rows, ahat.cols);
    let nmat = m + n;
    let scale = (nmat as f64).sqrt();
    let mut warm = None;
    let mut total_iters = 0usize;
    for _step in 0..6 {
        if hi - lo <= 0.05 * hi {
            break;
        }
        let t = 0.5 * (lo + hi);
        let project_affine = |h: &ComplexMatrix| -> ComplexMatrix {
            ComplexMatrix::from_fn(nmat, nmat, |i, j| match (i < m, j < m) {
                (true, false) => ahat[(i, j - m)],
                (false, true) => ahat[(j, i - m)].conj(),
                _ => {
                    if i == j {
                        Complex64::new(t, 0.0)
                    } else {
                        h[(i, j)]
                    }
                }
            })
        };
        let mut h = project_affine(&ComplexMatrix::zeros(nmat, nmat));
        let mut correction = ComplexMatrix::zeros(nmat, nmat);
        let mut residual = f64::INFINITY;
        let mut prev_residual = f64::INFINITY;
        let mut verdict = 0i8;
        for it in 0..160 {
            total_iters += 1;
            let cone = psd_project(&h.add(&correction));
            correction = h.add(&correction).sub(&cone);
            let affine = project_affine(&cone);
            residual = affine.sub(&cone).frobenius_norm();
            h = affine;
            if residual <= 1e-11 * scale {
                verdict = 1;
                warm = Some(cone);
                break;
            }
            if it % 20 == 19 {
                if prev_residual - residual <= 1e-3 * residual && residual > 1e-4 * scale {
                    verdict = -1;
                    break;
                }
                prev_residual = residual;
            }
        }
        match verdict {
            1 => hi = t,
            -1 => lo = t.min(hi),
            _ => break,
        }
        let _ = residual;
    }
    (lo, hi, warm, total_iters)
}

/// Build the barrier program for min t on the scaled matrix, together
/// with a strictly feasible starting point.
fn build_schur_problem(
    ahat: &ComplexMatrix,
    warm: Option<&ComplexMatrix>,
    hi: f64,
) -> (SdpProblem, Vec<f64>) {
    let (m, n) = (ahat.rows, ahat.cols);
    let nmat = m + n;
    let dim = 2 * nmat; // main block + one 1x1 cap per diagonal entry

    let mut h0 = ComplexMatrix::zeros(dim, dim);
    for i in 0..m {
        for j in 0..n {
            h0[(i, m + j)] = ahat[(i, j)];
            h0[(m + j, i)] = ahat[(i, j)].conj();
        }
    }

    let mut basis: Vec<HermBasis> = Vec::new();
    // variable 0: t, present in every cap slot
    basis.push(HermBasis {
        entries: (0..nmat)
            .map(|i| (nmat + i, nmat + i, Complex64::new(1.0, 0.0)))
            .collect(),
    });
    // X then Y entries; diagonals couple to their cap slot
    let mut index_of_diag = Vec::new();
    for (offset, size) in [(0usize, m), (m, n)] {
        for i in 0..size {
            for j in i..size {
                if i == j {
                    index_of_diag.push(basis.len());
                    basis.push(HermBasis {
                        entries: vec![
                            (offset + i, offset + i, Complex64::new(1.0, 0.0)),
                            (
                                nmat + offset + i,
                                nmat + offset + i,
                                Complex64::new(-1.0, 0.0),
                            ),
                        ],
                    });
                } else {
                    basis.push(HermBasis::single(
                        offset + i,
                        offset + j,
                        Complex64::new(1.0, 0.0),
                    ));
                    basis.push(HermBasis::single(
                        offset + i,
                        offset + j,
                        Complex64::new(0.0, 1.0),
                    ));
                }
            }
        }
    }
    let k = basis.len();
    let mut objective = vec![0.0; k];
    objective[0] = 1.0;

    // strictly feasible start: from the Dykstra point if present, else the
    // balanced row-Gram construction
    let mut z0 = vec![0.0; k];
    let start_block: ComplexMatrix = match warm {
        Some(h) => {
            let ridge = 0.05 * hi.max(1e-6);
            let mut hh = h.clone();
            for i in 0..nmat {
                hh[(i, i)] += ridge;
            }
            hh
        }
        None => {
            let gram = ahat.matmul(&ahat.adjoint());
            ComplexMatrix::from_fn(nmat, nmat, |i, j| match (i < m, j < m) {
                (true, true) => {
                    gram[(i, j)]
                        + if i == j {
                            Complex64::new(0.1, 0.0)
                        } else {
                            Complex64::new(0.0, 0.0)
                        }
                }
                (false, false) => {
                    if i == j {
                        Complex64::new(1.1, 0.0)
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                }
                (true, false) => ahat[(i, j - m)],
                (false, true) => ahat[(j, i - m)].conj(),
            })
        }
    };
    let max_diag = (0..nmat)
        .map(|i| start_block[(i, i)].re)
        .fold(0.0, f64::max);
    let t0 = 1.2 * max_diag.max(hi);
    z0[0] = t0;
    // copy X/Y entries of the start block into z0
    let mut idx = 1usize;
    for (offset, size) in [(0usize, m), (m, n)] {
        for i in 0..size {
            for j in i..size {
                if i == j {
                    z0[idx] = start_block[(offset + i, offset + i)].re;
                    idx += 1;
                } else {
                    z0[idx] = start_block[(offset + i, offset + j)].re;
                    z0[idx + 1] = start_block[(offset + i, offset + j)].im;
                    idx += 2;
                }
            }
        }
    }
    let _ = index_of_diag;

    (
        SdpProblem {
            dim,
            h0,
            basis,
            objective,
        },
        z0,
    )
}

/// p_i / q_j rows of the square root of the (rescaled) block matrix.
fn factor_block(
    h_main: &ComplexMatrix,
    m: usize,
    n: usize,
    rescale: f64,
) -> (Vec<Vec<Complex64>>, Vec<Vec<Complex64>>) {
    let eig = jacobi_eigh(&h_main.hermitize());
    let nmat = m + n;
    let v = &eig.eigenvectors;
    let root = rescale.sqrt();
    let f: Vec<Vec<Complex64>> = (0..nmat)
        .map(|i| {
            (0..nmat)
                .map(|k| v[(i, k)] * eig.eigenvalues[k].max(0.0).sqrt() * root)
                .collect()
        })
        .collect();
    let p = f[..m].to_vec();
    let q = f[m..].to_vec();
    (p, q)
}

/// Clean the inverse of the block matrix into a structurally exact dual
/// certificate. The certified bound is invariant under scaling of the
/// certificate, so no eta normalization is needed.
fn extract_dual(h_inv: &ComplexMatrix, m: usize, n: usize) -> Option<DualCertificate> {
    let lambda: Vec<f64> = (0..m).map(|i| h_inv[(i, i)].re.max(0.0)).collect();
    let mu: Vec<f64> = (0..n).map(|j| h_inv[(m + j, m + j)].re.max(0.0)).collect();
    let w = ComplexMatrix::from_fn(m, n, |i, j| -h_inv[(i, m + j)]);
    let mut cert = DualCertificate { lambda, mu, w };
    // PSD repair: a diagonal shift keeps the structure and only dilutes
    // the bound through the trace normalization
    let min_eig = cert.min_eigenvalue();
    if min_eig < 0.0 {
        let shift = -min_eig * (1.0 + 1e-6) + 1e-300;
        for l in cert.lambda.iter_mut() {
            *l += shift;
        }
        for u in cert.mu.iter_mut() {
            *u += shift;
        }
    }
    Some(cert)
}

/// Independent re-evaluation of a [`SchurNormResult`]: primal feasibility
/// (the factorization reproduces A and respects the norm bound) and weak
/// duality. Failures are reported, never thrown.
#[derive(Clone, Debug)]
pub struct CertificateReport {
    pub pass: bool,
    /// max over entries of |<p_i, q_j> - A[i][j]| / (1 + |A[i][j]|)
    pub reconstruction_violation: f64,
    /// max(0, max||p|| * max||q|| - value (1 + tol))
    pub norm_bound_violation: f64,
    pub weak_duality_ok: bool,
    pub entrywise_ok: bool,
    /// smallest eigenvalue of the dual certificate matrix, if present
    pub dual_min_eigenvalue: Option<f64>,
    pub messages: Vec<String>,
}

pub fn verify_certificate(a: &ComplexMatrix, result: &SchurNormResult) -> CertificateReport {
    let tol = result.tolerance;
    let mut messages = Vec::new();

    let mut recon: f64 = 0.0;
    if result.p_vectors.len() == a.rows && result.q_vectors.len() == a.cols {
        for i in 0..a.rows {
            for j in 0..a.cols {
                let mut s = Complex64::new(0.0, 0.0);
                let dim = result.p_vectors[i].len().min(result.q_vectors[j].len());
                for k in 0..dim {
                    s += result.p_vectors[i][k] * result.q_vectors[j][k].conj();
                }
                let dev = (s - a[(i, j)]).norm() / (1.0 + a[(i, j)].norm());
                recon = recon.max(dev);
            }
        }
    } else {
        recon = f64::INFINITY;
        messages.push("factorization has wrong shape".into());
    }

    let pmax = result
        .p_vectors
        .iter()
        .map(|p| p.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .fold(0.0, f64::max);
    let qmax = result
        .q_vectors
        .iter()
        .map(|q| q.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .fold(0.0, f64::max);
    let norm_bound_violation = (pmax * qmax - result.value * (1.0 + tol)).max(0.0);

    let weak_duality_ok = result.lower_bound <= result.value + tol * (1.0 + result.value);
    let entrywise_ok = result.lower_bound >= a.max_abs() - tol * (1.0 + a.max_abs());

    let dual_min_eigenvalue = result.dual.as_ref().map(|d| d.min_eigenvalue());
    if let Some(me) = dual_min_eigenvalue {
        if me < -1e-9 {
            messages.push(format!("dual certificate not PSD: min eig {me:.3e}"));
        }
    }
    if let Some(d) = &result.dual {
        let b = d.bound(a);
        if b > result.value + 10.0 * tol * (1.0 + result.value) {
            messages.push(format!(
                "dual bound {b:.9} exceeds primal value {:.9}",
                result.value
            ));
        }
    }

    let recon_ok = recon <= 10.0 * tol;
    if !recon_ok {
        messages.push(format!("reconstruction violation {recon:.3e}"));
    }
    if norm_bound_violation > 0.0 {
        messages.push(format!("norm bound violated by {norm_bound_violation:.3e}"));
    }
    if !weak_duality_ok {
        messages.push("weak duality violated: lower bound above value".into());
    }
    if !entrywise_ok {
        messages.push("lower bound below the entrywise floor".into());
    }

    CertificateReport {
        pass: recon_ok
            && norm_bound_violation == 0.0
            && weak_duality_ok
            && entrywise_ok
            && dual_min_eigenvalue.is_none_or(|m| m >= -1e-9),
        reconstruction_violation: recon,
        norm_bound_violation,
        weak_duality_ok,
        entrywise_ok,
        dual_min_eigenvalue,
        messages,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(rows: usize, cols: usize, entries: &[f64]) -> ComplexMatrix {
        ComplexMatrix::from_real(rows, cols, entries)
    }

    #[test]
    fn identity_has_norm_one() {
        for n in [1usize, 2, 5, 8] {
            let r = schur_norm(&ComplexMatrix::identity(n), 1e-8).unwrap();
            assert!((r.value - 1.0).abs() < 1e-9, "n={n}: {}", r.value);
            assert_eq!(r.method, SolveMethod::HermitianPsd);
            assert!(verify_certificate(&ComplexMatrix::identity(n), &r).pass);
        }
    }

    #[test]
    fn permutation_matrix_has_norm_one() {
        let a = real(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let r = schur_norm(&a, 1e-8).unwrap();
        assert!((r.value - 1.0).abs() < 1e-6, "{}", r.value);
        assert!(r.gap <= 1e-6);
    }

    #[test]
    fn all_ones_is_rank_one() {
        let a = real(4, 4, &[1.0; 16]);
        let r = schur_norm(&a, 1e-8).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
        assert!(verify_certificate(&a, &r).pass);
    }

    #[test]
    fn triangular_two_by_two_regression() {
        // [[1,0],[1,1]] has norm 2/sqrt(3); the acceptance suite certifies
        // this against the factorization oracle before trusting it
        let a = real(2, 2, &[1.0, 0.0, 1.0, 1.0]);
        let r = schur_norm(&a, 1e-9).unwrap();
        let expect = 2.0 / 3.0_f64.sqrt();
        assert!((r.value - expect).abs() < 1e-6, "value {}", r.value);
        assert!(r.gap <= 1e-6, "gap {}", r.gap);
        assert!(verify_certificate(&a, &r).pass);
    }

    #[test]
    fn zero_matrix_short_circuits() {
        let a = ComplexMatrix::zeros(3, 2);
        let r = schur_norm(&a, 1e-8).unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(r.method, SolveMethod::Zero);
    }

    #[test]
    fn corrupted_result_fails_verification() {
        let a = real(2, 2, &[1.0, 0.0, 1.0, 1.0]);
        let mut r = schur_norm(&a, 1e-8).unwrap();
        for p in r.p_vectors.iter_mut() {
            for z in p.iter_mut() {
                *z = Complex64::new(0.0, 0.0);
            }
        }
        let rep = verify_certificate(&a, &r);
        assert!(!rep.pass);
        assert!(rep.reconstruction_violation > 0.4);

        let mut r2 = schur_norm(&a, 1e-8).unwrap();
        r2.lower_bound = r2.value + 1.0;
        let rep2 = verify_certificate(&a, &r2);
        assert!(!rep2.pass);
        assert!(!rep2.weak_duality_ok);
    }
}
