//! Randomized invariants of the Schur-norm solver, checked against the
//! independent factorization oracle where one exists.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use herzschur::linalg::ComplexMatrix;
use herzschur::oracle::schur_norm_bruteforce;
use herzschur::schur::{schur_norm, verify_certificate};

const TOL: f64 = 1e-7;

fn random_matrix(rng: &mut ChaCha8Rng, m: usize, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(m, n, |_, _| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    })
}

fn random_real_matrix(rng: &mut ChaCha8Rng, m: usize, n: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(m, n, |_, _| Complex64::new(rng.gen_range(-1.0..1.0), 0.0))
}

#[test]
fn oracle_equivalence_on_small_sign_matrices() {
    // all 81 real 2x2 matrices with entries in {-1, 0, 1}
    let vals = [-1.0, 0.0, 1.0];
    let mut max_dev: f64 = 0.0;
    for a in vals {
        for b in vals {
            for c in vals {
                for d in vals {
                    let m = ComplexMatrix::from_real(2, 2, &[a, b, c, d]);
                    let sdp = schur_norm(&m, 1e-7).unwrap();
                    let oracle = schur_norm_bruteforce(&m, 4, 60, 7);
                    max_dev = max_dev.max((sdp.value - oracle).abs());
                    assert!(
                        (sdp.value - oracle).abs() <= 1e-4,
                        "matrix [[{a},{b}],[{c},{d}]]: sdp {} vs oracle {}",
                        sdp.value,
                        oracle
                    );
                }
            }
        }
    }
    println!("max |sdp - oracle| over 81 sign matrices: {max_dev:.3e}");
}

#[test]
fn permutation_invariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for trial in 0..6 {
        let n = 3 + trial % 3;
        let a = random_matrix(&mut rng, n, n);
        let base = schur_norm(&a, TOL).unwrap().value;
        // a fixed cyclic row shift and a column swap
        let pa = ComplexMatrix::from_fn(n, n, |i, j| a[((i + 1) % n, j)]);
        let paq = ComplexMatrix::from_fn(n, n, |i, j| pa[(i, if j < 2 { 1 - j } else { j })]);
        let shuffled = schur_norm(&paq, TOL).unwrap().value;
        assert!(
            (base - shuffled).abs() <= 2.0 * TOL * (1.0 + base),
            "trial {trial}: {base} vs {shuffled}"
        );
    }
}

#[test]
fn submatrix_monotonicity() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for trial in 0..6 {
        let n = 4 + trial % 3;
        let a = random_matrix(&mut rng, n, n);
        let full = schur_norm(&a, TOL).unwrap().value;
        let keep: Vec<usize> = (0..n - 1).collect();
        let sub = a.submatrix(&keep, &keep);
        let part = schur_norm(&sub, TOL).unwrap().value;
        assert!(
            part <= full + 2.0 * TOL * (1.0 + full),
            "trial {trial}: submatrix {part} > full {full}"
        );
    }
}

#[test]
fn entrywise_lower_bound_and_certificates() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for trial in 0..8 {
        let (m, n) = (2 + trial % 4, 2 + (trial / 2) % 4);
        let a = random_matrix(&mut rng, m, n);
        let r = schur_norm(&a, TOL).unwrap();
        assert!(r.value >= a.max_abs() - 10.0 * TOL);
        assert!(r.lower_bound >= a.max_abs() - 10.0 * TOL);
        assert!(r.gap <= (10.0 * TOL).max(10.0 * TOL * r.value));
        let rep = verify_certificate(&a, &r);
        assert!(rep.pass, "trial {trial}: {:?}", rep.messages);
    }
}

#[test]
fn psd_case_matches_max_diagonal() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for trial in 0..6 {
        let n = 3 + trial;
        let b = random_matrix(&mut rng, n, n);
        let a = b.matmul(&b.adjoint());
        let r = schur_norm(&a, TOL).unwrap();
        let maxdiag = (0..n).map(|i| a[(i, i)].re).fold(f64::MIN, f64::max);
        assert!(
            (r.value - maxdiag).abs() <= 2.0 * TOL * (1.0 + maxdiag),
            "trial {trial}: {} vs {maxdiag}",
            r.value
        );
    }
}

#[test]
fn tensor_submultiplicativity() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for trial in 0..4 {
        let a = random_real_matrix(&mut rng, 2, 2);
        let b = random_real_matrix(&mut rng, 3, 3);
        let na = schur_norm(&a, TOL).unwrap().value;
        let nb = schur_norm(&b, TOL).unwrap().value;
        let nab = schur_norm(&a.kron(&b), TOL).unwrap().value;
        assert!(
            nab <= na * nb + 3.0 * TOL * (1.0 + na * nb),
            "trial {trial}: {nab} > {na} * {nb}"
        );
    }
}

#[test]
fn conjugate_and_transpose_symmetry() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for trial in 0..4 {
        let a = random_matrix(&mut rng, 3, 4);
        let base = schur_norm(&a, TOL).unwrap().value;
        let conj = schur_norm(&a.conj(), TOL).unwrap().value;
        let tran = schur_norm(&a.transpose(), TOL).unwrap().value;
        assert!(
            (base - conj).abs() <= 2.0 * TOL * (1.0 + base),
            "trial {trial}"
        );
        assert!(
            (base - tran).abs() <= 2.0 * TOL * (1.0 + base),
            "trial {trial}"
        );
    }
}

#[test]
fn rank_one_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..6 {
        let m = 2 + rng.gen_range(0..6);
        let n = 2 + rng.gen_range(0..6);
        let a: Vec<Complex64> = (0..m)
            .map(|_| Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)))
            .collect();
        let b: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)))
            .collect();
        let mat = ComplexMatrix::from_fn(m, n, |i, j| a[i] * b[j].conj());
        let expect = a.iter().map(|z| z.norm()).fold(0.0, f64::max)
            * b.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let r = schur_norm(&mat, TOL).unwrap();
        assert!(
            (r.value - expect).abs() <= 1e-9 * (1.0 + expect),
            "{} vs {expect}",
            r.value
        );
    }
}
