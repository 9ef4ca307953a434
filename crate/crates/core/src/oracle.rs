//! Slow, independent reference computations used to cross-check the fast
//! solvers.
//!
//! Nothing here shares code with the SDP path: the Schur-norm oracle works
//! directly on the factorization definition (minimize the product of the
//! largest row norms of P and Q subject to P Q* = A) by alternating exact
//! least-norm solves with many seeded random restarts, and the
//! Fourier-norm oracle minimizes ||h||_2 ||k||_2 over representations
//! u(x) = <lambda(x) h, k> by randomized local search.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::group::FiniteGroup;
use crate::linalg::ComplexMatrix;

/// Brute-force Schur-norm oracle: minimize max_i ||p_i|| * max_j ||q_j||
/// over factorizations A[i][j] = <p_i, q_j> with vectors of dimension
/// `dim`. Deterministic for a fixed seed.
///
/// Each restart draws a random Q, then alternates the two exact
/// half-steps: for fixed Q every p_i is the least-norm solution of its
/// interpolation constraints (which also minimizes max_i ||p_i||), and
/// symmetrically for fixed P. The objective is nonincreasing along the
/// alternation, so each restart converges to a local minimum; restarts
/// handle the global search.
pub fn schur_norm_bruteforce(a: &ComplexMatrix, dim: usize, restarts: usize, seed: u64) -> f64 {
    let scale = a.max_abs();
    if scale == 0.0 {
        return 0.0;
    }
    let n = a.cols;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = f64::INFINITY;
    for _ in 0..restarts {
        let q0 = random_matrix(&mut rng, n, dim);
        let (q, obj) = alternate(a, q0, 200);
        // adaptive random search over Q with the P side always optimal;
        // the alternation only provides the warm start
        let polished = local_search(a, q, obj, &mut rng);
        if polished < best {
            best = polished;
        }
    }
    best
}

/// Objective at Q with the P side solved exactly: max ||p_i(Q)|| * max ||q_j||,
/// or infinity when the interpolation constraints are not solvable.
fn objective_at(a: &ComplexMatrix, q: &ComplexMatrix) -> f64 {
    let p = min_rownorm_left(a, q);
    if reconstruction_error(a, &p, q) > 1e-9 * a.max_abs() {
        return f64::INFINITY;
    }
    max_row_norm(&p) * max_row_norm(q)
}

/// Accept-improvement random search over Q with an adaptive step size,
/// run in annealing cycles so the step size recovers after a freeze.
fn local_search(
    a: &ComplexMatrix,
    mut q: ComplexMatrix,
    mut obj: f64,
    rng: &mut ChaCha8Rng,
) -> f64 {
    for cycle in 0..3 {
        let mut sigma = 0.3 / (1 << cycle) as f64;
        for _ in 0..1500 {
            let trial = ComplexMatrix::from_fn(q.rows, q.cols, |i, j| {
                q[(i, j)]
                    + Complex64::new(
                        sigma * rng.gen_range(-1.0..1.0),
                        sigma * rng.gen_range(-1.0..1.0),
                    )
            });
            let val = objective_at(a, &trial);
            if val < obj {
                q = trial;
                obj = val;
                sigma = (sigma * 1.4).min(0.5);
            } else {
                sigma *= 0.975;
                if sigma < 1e-10 {
                    break;
                }
            }
        }
    }
    obj
}

/// Alternate the two exact half-steps from the given Q; returns the final
/// Q and the objective, or infinity when the factorization failed to
/// reproduce A.
fn alternate(a: &ComplexMatrix, q0: ComplexMatrix, iters: usize) -> (ComplexMatrix, f64) {
    let scale = a.max_abs();
    let mut q = q0;
    let mut p = min_rownorm_left(a, &q);
    let mut last = f64::INFINITY;
    for _ in 0..iters {
        p = min_rownorm_left(a, &q);
        q = min_rownorm_right(a, &p);
        let obj = max_row_norm(&p) * max_row_norm(&q);
        if last - obj < 1e-14 * scale {
            last = obj.min(last);
            break;
        }
        last = obj;
    }
    let err = reconstruction_error(a, &p, &q);
    if err < 1e-9 * scale {
        (q, last)
    } else {
        (q, f64::INFINITY)
    }
}

/// max_i ||row_i||_2.
fn max_row_norm(mat: &ComplexMatrix) -> f64 {
    (0..mat.rows)
        .map(|i| mat.row(i).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .fold(0.0, f64::max)
}

fn reconstruction_error(a: &ComplexMatrix, p: &ComplexMatrix, q: &ComplexMatrix) -> f64 {
    let mut err: f64 = 0.0;
    for i in 0..a.rows {
        for j in 0..a.cols {
            let mut s = Complex64::new(0.0, 0.0);
            for k in 0..p.cols {
                s += p[(i, k)] * q[(j, k)].conj();
            }
            err = err.max((s - a[(i, j)]).norm());
        }
    }
    err
}

fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    })
}

/// For fixed Q, each row p_i is the least-norm solution of
/// <p_i, q_j> = A[i][j] for all j: p_i = sum_j c_j q_j with G c = a_i,
/// G[j][l] = <q_l, q_j>. The Gram matrix is often rank deficient along
/// the alternation, so the solve goes through an eigenvalue-cutoff
/// pseudo-inverse rather than a ridged factorization.
fn min_rownorm_left(a: &ComplexMatrix, q: &ComplexMatrix) -> ComplexMatrix {
    let n = a.cols;
    let d = q.cols;
    let mut g = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        for l in 0..n {
            let mut s = Complex64::new(0.0, 0.0);
            for k in 0..d {
                s += q[(l, k)] * q[(j, k)].conj();
            }
            g[(j, l)] = s;
        }
    }
    let eig = crate::linalg::jacobi_eigh(&g);
    let lmax = eig.max_eigenvalue().max(1e-300);
    let cutoff = 1e-12 * lmax;
    let v = &eig.eigenvectors;
    // Ginv = V diag(1/lambda clipped) V*
    let ginv = ComplexMatrix::from_fn(n, n, |r, s| {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..n {
            if eig.eigenvalues[k] > cutoff {
                acc += v[(r, k)] * v[(s, k)].conj() / eig.eigenvalues[k];
            }
        }
        acc
    });
    let mut p = ComplexMatrix::zeros(a.rows, d);
    for i in 0..a.rows {
        // c = Ginv a_i, then p_i = sum_j c_j q_j
        for k in 0..d {
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..n {
                let mut c = Complex64::new(0.0, 0.0);
                for l in 0..n {
                    c += ginv[(j, l)] * a[(i, l)];
                }
                s += c * q[(j, k)];
            }
            p[(i, k)] = s;
        }
    }
    p
}

/// Symmetric half-step: for fixed P, each q_j is the least-norm solution
/// of <p_i, q_j> = A[i][j] for all i. Implemented via the adjoint system.
fn min_rownorm_right(a: &ComplexMatrix, p: &ComplexMatrix) -> ComplexMatrix {
    // <p_i, q_j> = A[i][j]  <=>  <q_j, p_i> = conj(A[i][j]).
    let a_star = a.adjoint();
    min_rownorm_left(&a_star, p)
}

/// Reference value for 2x2 oracle cross-checks: the oracle itself, with
/// the defaults the acceptance checks use.
pub fn schur_norm_bruteforce_default(a: &ComplexMatrix) -> f64 {
    schur_norm_bruteforce(a, (a.rows + a.cols).min(4), 60, 0x5eed)
}

/// Fourier-algebra factorization oracle: minimize ||h||_2 ||k||_2 over
/// pairs with u(x) = <lambda(x) h, k> for all x, by randomized local
/// search over k with h solved exactly from the linear system.
///
/// For the left regular representation, lambda(x) h (y) = h(x^{-1} y),
/// so u(x) = sum_y h(x^{-1} y) conj(k(y)).
pub fn fourier_norm_bruteforce(
    group: &FiniteGroup,
    u: &[Complex64],
    restarts: usize,
    seed: u64,
) -> f64 {
    let n = group.order();
    assert_eq!(u.len(), n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = f64::INFINITY;
    for _ in 0..restarts {
        let mut k: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        normalize(&mut k);
        let mut cur = objective(group, u, &k);
        let mut sigma = 0.5;
        for _ in 0..600 {
            let trial: Vec<Complex64> = k
                .iter()
                .map(|z| {
                    z + Complex64::new(
                        sigma * rng.gen_range(-1.0..1.0),
                        sigma * rng.gen_range(-1.0..1.0),
                    )
                })
                .collect();
            let mut trial = trial;
            normalize(&mut trial);
            let val = objective(group, u, &trial);
            if val < cur {
                k = trial;
                cur = val;
            } else {
                sigma *= 0.98;
                if sigma < 1e-9 {
                    break;
                }
            }
        }
        best = best.min(cur);
    }
    best
}

fn normalize(v: &mut [Complex64]) {
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 {
        for z in v.iter_mut() {
            *z /= norm;
        }
    }
}

/// ||h(k)||_2 * ||k||_2 where h is the exact solve of the interpolation
/// system for the given k (infinite when the system is singular).
fn objective(group: &FiniteGroup, u: &[Complex64], k: &[Complex64]) -> f64 {
    let n = group.order();
    // u(x) = sum_z h(z) conj(k(x z))   [substituting y = x z]
    let mut m = ComplexMatrix::zeros(n, n);
    for x in 0..n {
        for z in 0..n {
            m[(x, z)] = k[group.mul(x, z)].conj();
        }
    }
    match solve_general(&m, u) {
        Some(h) => {
            let hn = h.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            let kn = k.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            hn * kn
        }
        None => f64::INFINITY,
    }
}

/// Gaussian elimination with partial pivoting; None if singular.
fn solve_general(m: &ComplexMatrix, b: &[Complex64]) -> Option<Vec<Complex64>> {
    let n = m.rows;
    let mut a = m.clone();
    let mut x: Vec<Complex64> = b.to_vec();
    for col in 0..n {
        let mut piv = col;
        let mut pmax = a[(col, col)].norm();
        for r in (col + 1)..n {
            if a[(r, col)].norm() > pmax {
                pmax = a[(r, col)].norm();
                piv = r;
            }
        }
        if pmax < 1e-12 {
            return None;
        }
        if piv != col {
            for c in 0..n {
                let tmp = a[(col, c)];
                a[(col, c)] = a[(piv, c)];
                a[(piv, c)] = tmp;
            }
            x.swap(col, piv);
        }
        let d = a[(col, col)];
        for r in (col + 1)..n {
            let f = a[(r, col)] / d;
            if f.norm() == 0.0 {
                continue;
            }
            for c in col..n {
                let v = a[(col, c)];
                a[(r, c)] -= f * v;
            }
            let xc = x[col];
            x[r] -= f * xc;
        }
    }
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for row in (0..n).rev() {
        let mut s = x[row];
        for c in (row + 1)..n {
            s -= a[(row, c)] * out[c];
        }
        out[row] = s / a[(row, row)];
    }
    Some(out)
}
