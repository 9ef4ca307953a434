//! Small interior-point machinery for linear objectives over affine
//! families of positive semidefinite Hermitian matrices.
//!
//! The problem shape is: variables z in R^K, a Hermitian matrix
//! H(z) = H0 + sum_k z_k E_k that must stay positive semidefinite, and a
//! linear objective <c, z> to minimize. Scalar inequality constraints are
//! folded in by the caller as extra 1x1 diagonal blocks of H. The engine
//! exposes one primitive, Newton centering of the barrier function
//! eta <c, z> - log det H(z); callers drive the eta schedule and decide
//! when their own certificates are good enough. H(z)^{-1} at an
//! (approximate) center is, up to scale, the dual variable they turn into
//! certified bounds.

use num_complex::Complex64;

use crate::linalg::{chol_inverse, chol_logdet, cholesky, solve_spd, ComplexMatrix};

/// One Hermitian basis element, stored as its upper-triangular entries.
/// An entry (i, j, c) with i < j stands for c at (i,j) plus conj(c) at
/// (j,i); an entry (i, i, c) requires real c.
#[derive(Clone, Debug)]
pub struct HermBasis {
    pub entries: Vec<(usize, usize, Complex64)>,
}

impl HermBasis {
    pub fn single(i: usize, j: usize, c: Complex64) -> Self {
        HermBasis {
            entries: vec![(i, j, c)],
        }
    }

    fn add_to(&self, m: &mut ComplexMatrix, z: f64) {
        for &(i, j, c) in &self.entries {
            m[(i, j)] += c * z;
            if i != j {
                m[(j, i)] += c.conj() * z;
            }
        }
    }

    /// Re tr(S E) for Hermitian S.
    fn inner(&self, s: &ComplexMatrix) -> f64 {
        let mut acc = 0.0;
        for &(i, j, c) in &self.entries {
            if i == j {
                acc += c.re * s[(i, i)].re;
            } else {
                acc += 2.0 * (c * s[(j, i)]).re;
            }
        }
        acc
    }
}

/// Linear SDP in inequality form. `dim` is the full matrix dimension
/// including any 1x1 cap blocks appended by the caller.
pub struct SdpProblem {
    pub dim: usize,
    pub h0: ComplexMatrix,
    pub basis: Vec<HermBasis>,
    /// Objective coefficients; the engine minimizes <objective, z>.
    pub objective: Vec<f64>,
}

/// State after a centering run.
pub struct CenterState {
    pub h: ComplexMatrix,
    pub h_inv: ComplexMatrix,
    pub steps: usize,
    /// whether any Newton step was accepted during this run
    pub moved: bool,
    /// the last Newton decrement squared; large values with `moved ==
    /// false` mean the line search hit its numerical floor
    pub decrement_sq: f64,
}

impl SdpProblem {
    pub fn h_at(&self, z: &[f64]) -> ComplexMatrix {
        let mut h = self.h0.clone();
        for (k, e) in self.basis.iter().enumerate() {
            if z[k] != 0.0 {
                e.add_to(&mut h, z[k]);
            }
        }
        h
    }

    pub fn objective_value(&self, z: &[f64]) -> f64 {
        self.objective.iter().zip(z).map(|(c, z)| c * z).sum()
    }

    /// A starting eta that balances the objective against the barrier
    /// gradient at z.
    pub fn initial_eta(&self, z: &[f64]) -> f64 {
        let h = self.h_at(z);
        let chol = cholesky(&h).expect("initial point must be strictly feasible");
        let h_inv = chol_inverse(&chol);
        let gnorm = self
            .basis
            .iter()
            .map(|e| {
                let v = e.inner(&h_inv);
                v * v
            })
            .sum::<f64>()
            .sqrt();
        let cnorm = self
            .objective
            .iter()
            .map(|c| c * c)
            .sum::<f64>()
            .sqrt()
            .max(1e-12);
        (gnorm / cnorm).clamp(1.0, 1e3)
    }

    /// Damped Newton minimization of eta <c, z> - log det H(z) from the
    /// strictly feasible point z, which is updated in place.
    pub fn center(&self, z: &mut Vec<f64>, eta: f64, max_steps: usize) -> CenterState {
        let k = self.basis.len();
        let mut h = self.h_at(z);
        let mut chol = cholesky(&h).expect("center requires a strictly feasible point");
        let mut moved = false;
        let mut steps = 0usize;
        let mut last_decrement = 0.0_f64;
        let mut h_inv = chol_inverse(&chol);
        while steps < max_steps {
            steps += 1;
            let mut grad = vec![0.0_f64; k];
            for (idx, e) in self.basis.iter().enumerate() {
                grad[idx] = eta * self.objective[idx] - e.inner(&h_inv);
            }
            let mut hess = vec![0.0_f64; k * k];
            for a in 0..k {
                for b in a..k {
                    let v = hess_entry(&self.basis[a], &self.basis[b], &h_inv);
                    hess[a * k + b] = v;
                    hess[b * k + a] = v;
                }
            }
            let neg_grad: Vec<f64> = grad.iter().map(|g| -g).collect();
            let dz = match solve_spd(&hess, &neg_grad) {
                Some(d) => d,
                None => break,
            };
            let decrement_sq: f64 = grad.iter().zip(&dz).map(|(g, d)| -g * d).sum();
            if !decrement_sq.is_finite() {
                break;
            }
            last_decrement = decrement_sq;
            if decrement_sq <= 1e-4 {
                break;
            }
            let f0 = eta * self.objective_value(z) - chol_logdet(&chol);
            let mut alpha = 1.0_f64;
            let mut accepted = false;
            for _bt in 0..60 {
                let zt: Vec<f64> = z.iter().zip(&dz).map(|(a, d)| a + alpha * d).collect();
                let ht = self.h_at(&zt);
                if let Some(ct) = cholesky(&ht) {
                    let ft = eta * self.objective_value(&zt) - chol_logdet(&ct);
                    if ft < f0 - 1e-4 * alpha * decrement_sq || ft < f0 {
                        *z = zt;
                        h = ht;
                        chol = ct;
                        h_inv = chol_inverse(&chol);
                        accepted = true;
                        moved = true;
                        break;
                    }
                }
                alpha *= 0.5;
            }
            if !accepted {
                break;
            }
            if decrement_sq <= 0.01 {
                break;
            }
        }
        CenterState {
            h,
            h_inv,
            steps,
            moved,
            decrement_sq: last_decrement,
        }
    }

    /// Plain path following with the duality-measure stop nu/eta <=
    /// gap_target; enough for callers that do not need their own
    /// certificate-driven termination.
    pub fn minimize(&self, z0: Vec<f64>, gap_target: f64, max_newton: usize) -> BarrierSolution {
        let nu = self.dim as f64;
        let mut z = z0;
        let mut eta = self.initial_eta(&z);
        let mut steps = 0usize;
        let mut converged = false;
        let mut last = self.center(&mut z, eta, 60);
        steps += last.steps;
        let mut stalls = 0u32;
        loop {
            if nu / eta <= gap_target {
                converged = true;
                break;
            }
            if steps >= max_newton || stalls >= 2 {
                break;
            }
            eta *= 6.0;
            let state = self.center(&mut z, eta, 60);
            steps += state.steps;
            if state.moved {
                stalls = 0;
            } else if state.decrement_sq > 0.01 {
                // a genuine stall: Newton wants to move but cannot
                stalls += 1;
            }
            last = state;
        }
        BarrierSolution {
            z,
            h: last.h,
            h_inv: last.h_inv,
            eta,
            newton_steps: steps,
            gap_measure: nu / eta,
            converged,
        }
    }
}

/// Outcome of [`SdpProblem::minimize`].
pub struct BarrierSolution {
    pub z: Vec<f64>,
    pub h: ComplexMatrix,
    pub h_inv: ComplexMatrix,
    pub eta: f64,
    pub newton_steps: usize,
    pub gap_measure: f64,
    pub converged: bool,
}

/// Re tr(Hinv Ea Hinv Eb) for two sparse Hermitian basis elements.
fn hess_entry(ea: &HermBasis, eb: &HermBasis, hinv: &ComplexMatrix) -> f64 {
    // expand each entry (i,j,c) into its one or two rank-one pieces
    // c e_i e_j^* (+ conj(c) e_j e_i^* when i != j); then
    // tr(Hinv (a e_u e_v^*) Hinv (b e_r e_s^*)) = a b Hinv[v,r] Hinv[s,u].
    let mut acc = Complex64::new(0.0, 0.0);
    for &(i, j, c) in &ea.entries {
        for &(r, s, d) in &eb.entries {
            acc += c * d * hinv[(j, r)] * hinv[(s, i)];
            if r != s {
                acc += c * d.conj() * hinv[(j, s)] * hinv[(r, i)];
            }
            if i != j {
                acc += c.conj() * d * hinv[(i, r)] * hinv[(s, j)];
                if r != s {
                    acc += c.conj() * d.conj() * hinv[(i, s)] * hinv[(r, j)];
                }
            }
        }
    }
    acc.re
}

#[cfg(test)]
mod tests {
    use super::*;

    // minimize t subject to [[t, 1], [1, t]] >= 0  => t* = 1.
    #[test]
    fn barrier_minimizes_simple_lmi() {
        let mut h0 = ComplexMatrix::zeros(2, 2);
        h0[(0, 1)] = Complex64::new(1.0, 0.0);
        h0[(1, 0)] = Complex64::new(1.0, 0.0);
        let basis = vec![HermBasis {
            entries: vec![
                (0, 0, Complex64::new(1.0, 0.0)),
                (1, 1, Complex64::new(1.0, 0.0)),
            ],
        }];
        let problem = SdpProblem {
            dim: 2,
            h0,
            basis,
            objective: vec![1.0],
        };
        let sol = problem.minimize(vec![3.0], 1e-8, 600);
        assert!(sol.converged);
        assert!(
            (sol.z[0] - 1.0).abs() < 1e-6,
            "t = {} should be close to 1",
            sol.z[0]
        );
    }

    // minimize -x subject to diag(1-x, 1+x) >= 0 => x* = 1.
    #[test]
    fn barrier_handles_diagonal_caps() {
        let mut h0 = ComplexMatrix::zeros(2, 2);
        h0[(0, 0)] = Complex64::new(1.0, 0.0);
        h0[(1, 1)] = Complex64::new(1.0, 0.0);
        let basis = vec![HermBasis {
            entries: vec![
                (0, 0, Complex64::new(-1.0, 0.0)),
                (1, 1, Complex64::new(1.0, 0.0)),
            ],
        }];
        let problem = SdpProblem {
            dim: 2,
            h0,
            basis,
            objective: vec![-1.0],
        };
        let sol = problem.minimize(vec![0.0], 1e-9, 1000);
        assert!((sol.z[0] - 1.0).abs() < 1e-7, "x = {}", sol.z[0]);
    }
}
