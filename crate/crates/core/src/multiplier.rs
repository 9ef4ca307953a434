//! Scalar functions on groups and windows, and their norms: the
//! Herz-Schur (completely bounded Schur) norm B2, the Fourier-algebra
//! norm A, the predual norm Q, positive definiteness and the sup norm.
//!
//! For a finite group the B2 norm of u is exactly the Schur norm of the
//! matrix M[x][y] = u(y^{-1} x) over all group elements. For a window of
//! an infinite group the same matrix over the window elements is a finite
//! section, so the computed value is a certified lower bound for any
//! ambient extension and is flagged as such.

use num_complex::Complex64;
use rand::Rng;

use crate::error::Error;
use crate::group::{FiniteGroup, Subgroup};
use crate::linalg::{jacobi_eigh, singular_values, ComplexMatrix};
use crate::schur::{schur_norm, SchurNormResult};
use crate::sdp::{HermBasis, SdpProblem};
use crate::window::GroupWindow;
use crate::Result;

/// What a multiplier's values are indexed by.
#[derive(Clone, Debug)]
pub enum Carrier {
    /// Values indexed by group elements.
    Group(FiniteGroup),
    /// Values indexed by the window's difference set.
    Window(GroupWindow),
}

impl Carrier {
    /// Number of values a multiplier on this carrier stores.
    pub fn value_count(&self) -> usize {
        match self {
            Carrier::Group(g) => g.order(),
            Carrier::Window(w) => w.diff_set().len(),
        }
    }

    /// Side length of the Schur matrix built over this carrier.
    pub fn matrix_size(&self) -> usize {
        match self {
            Carrier::Group(g) => g.order(),
            Carrier::Window(w) => w.len(),
        }
    }
}

/// A complex-valued function on a group (or on a window's difference
/// set), with a free-form construction trace.
#[derive(Clone, Debug)]
pub struct Multiplier {
    pub carrier: Carrier,
    values: Vec<Complex64>,
    pub provenance: Vec<String>,
}

impl Multiplier {
    pub fn from_values(carrier: Carrier, values: Vec<Complex64>, provenance: &str) -> Result<Self> {
        if values.len() != carrier.value_count() {
            return Err(Error::InvalidMultiplier(format!(
                "{} values for a carrier needing {}",
                values.len(),
                carrier.value_count()
            )));
        }
        for v in &values {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::InvalidMultiplier("non-finite value".into()));
            }
        }
        Ok(Multiplier {
            carrier,
            values,
            provenance: vec![provenance.to_string()],
        })
    }

    pub fn constant(carrier: Carrier, c: Complex64) -> Self {
        let n = carrier.value_count();
        Multiplier {
            carrier,
            values: vec![c; n],
            provenance: vec![format!("constant({c})")],
        }
    }

    /// The delta function at the identity.
    pub fn delta_identity(group: &FiniteGroup) -> Self {
        Self::delta(group, group.identity())
    }

    pub fn delta(group: &FiniteGroup, element: usize) -> Self {
        let mut values = vec![Complex64::new(0.0, 0.0); group.order()];
        values[element] = Complex64::new(1.0, 0.0);
        Multiplier {
            carrier: Carrier::Group(group.clone()),
            values,
            provenance: vec![format!("delta({})", group.label(element))],
        }
    }

    /// Indicator of an element subset.
    pub fn indicator(group: &FiniteGroup, subset: &[usize]) -> Self {
        let mut values = vec![Complex64::new(0.0, 0.0); group.order()];
        for &x in subset {
            values[x] = Complex64::new(1.0, 0.0);
        }
        Multiplier {
            carrier: Carrier::Group(group.clone()),
            values,
            provenance: vec![format!("indicator({} elements)", subset.len())],
        }
    }

    pub fn subgroup_indicator(sub: &Subgroup) -> Self {
        let mut m = Self::indicator(sub.parent(), sub.elements());
        m.provenance = vec![format!("indicator(subgroup of order {})", sub.order())];
        m
    }

    /// g -> exp(-t * wordlength(g)) on a finite group with the given
    /// generating set.
    pub fn exp_neg_wordlength(group: &FiniteGroup, gens: &[usize], t: f64) -> Result<Self> {
        let values: Result<Vec<Complex64>> = group
            .elements()
            .map(|g| {
                group
                    .word_length(gens, g)
                    .map(|l| Complex64::new((-t * l as f64).exp(), 0.0))
            })
            .collect();
        Ok(Multiplier {
            carrier: Carrier::Group(group.clone()),
            values: values?,
            provenance: vec![format!("exp(-{t} * wordlength)")],
        })
    }

    /// d -> exp(-t |d|) on a window's difference set.
    pub fn window_exp_neg_wordlength(window: &GroupWindow, t: f64) -> Self {
        let values = window
            .diff_set()
            .iter()
            .map(|d| Complex64::new((-t * d.length() as f64).exp(), 0.0))
            .collect();
        Multiplier {
            carrier: Carrier::Window(window.clone()),
            values,
            provenance: vec![format!("exp(-{t} * |d|) on window")],
        }
    }

    /// Random complex multiplier with entries uniform in the unit square.
    pub fn random(group: &FiniteGroup, rng: &mut impl Rng) -> Self {
        let values = (0..group.order())
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        Multiplier {
            carrier: Carrier::Group(group.clone()),
            values,
            provenance: vec!["random".into()],
        }
    }

    /// Random real multiplier.
    pub fn random_real(group: &FiniteGroup, rng: &mut impl Rng) -> Self {
        let values = (0..group.order())
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), 0.0))
            .collect();
        Multiplier {
            carrier: Carrier::Group(group.clone()),
            values,
            provenance: vec!["random real".into()],
        }
    }

    /// Random positive definite multiplier u(g) = <lambda(g) h, h> with
    /// ||h|| = 1, so u(e) = 1 and the B2 norm equals u(e).
    pub fn random_positive_definite(group: &FiniteGroup, rng: &mut impl Rng) -> Self {
        let n = group.order();
        let mut h: Vec<Complex64> = (0..n)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        let norm = h.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in h.iter_mut() {
            *z /= norm;
        }
        // u(g) = sum_y h(g^{-1} y) conj(h(y))
        let values: Vec<Complex64> = group
            .elements()
            .map(|g| {
                let ginv = group.inv(g);
                (0..n).map(|y| h[group.mul(ginv, y)] * h[y].conj()).sum()
            })
            .collect();
        Multiplier {
            carrier: Carrier::Group(group.clone()),
            values,
            provenance: vec!["random positive definite (matrix coefficient)".into()],
        }
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn value(&self, idx: usize) -> Complex64 {
        self.values[idx]
    }

    /// Pointwise real part (u + conj(u)) / 2.
    pub fn real_part(&self) -> Self {
        Multiplier {
            carrier: self.carrier.clone(),
            values: self
                .values
                .iter()
                .map(|z| Complex64::new(z.re, 0.0))
                .collect(),
            provenance: push_step(&self.provenance, "real part"),
        }
    }

    /// The Schur matrix M[x][y] = u(y^{-1} x) over the carrier.
    pub fn schur_matrix(&self) -> ComplexMatrix {
        match &self.carrier {
            Carrier::Group(g) => {
                let n = g.order();
                ComplexMatrix::from_fn(n, n, |x, y| self.values[g.mul(g.inv(y), x)])
            }
            Carrier::Window(w) => {
                let n = w.len();
                ComplexMatrix::from_fn(n, n, |x, y| self.values[w.diff(x, y)])
            }
        }
    }

    pub fn group(&self) -> Option<&FiniteGroup> {
        match &self.carrier {
            Carrier::Group(g) => Some(g),
            Carrier::Window(_) => None,
        }
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

pub(crate) fn push_step(provenance: &[String], step: &str) -> Vec<String> {
    let mut p = provenance.to_vec();
    p.push(step.to_string());
    p
}

/// B2 norm outcome; `section_lower_bound` marks window carriers, where
/// the finite section certifies only a lower bound for the ambient norm.
#[derive(Clone, Debug)]
pub struct B2Norm {
    pub value: f64,
    pub section_lower_bound: bool,
    pub schur: SchurNormResult,
}

/// Herz-Schur norm of the multiplier (exact for finite groups, section
/// value for windows).
pub fn b2_norm(u: &Multiplier, tol: f64) -> Result<B2Norm> {
    let m = u.schur_matrix();
    let schur = schur_norm(&m, tol)?;
    Ok(B2Norm {
        value: schur.value,
        section_lower_bound: matches!(u.carrier, Carrier::Window(_)),
        schur,
    })
}

/// Positive definiteness report: the minimum eigenvalue of the kernel
/// matrix u(y^{-1} x).
#[derive(Clone, Debug)]
pub struct PosDefReport {
    pub positive: bool,
    pub min_eigenvalue: f64,
}

pub fn is_positive_definite(u: &Multiplier, tol: f64) -> Result<PosDefReport> {
    let m = u.schur_matrix();
    let dev = m.hermitian_deviation();
    if dev > tol * m.max_abs().max(1.0) {
        // a positive definite function must have a Hermitian kernel
        return Ok(PosDefReport {
            positive: false,
            min_eigenvalue: f64::NEG_INFINITY,
        });
    }
    let eig = jacobi_eigh(&m.hermitize());
    let min = eig.min_eigenvalue();
    Ok(PosDefReport {
        positive: min >= -tol,
        min_eigenvalue: min,
    })
}

/// Fourier-algebra norm on a finite group: the normalized trace norm of
/// the convolution operator sum_x u(x) lambda(x), that is
/// (1/|G|) sum of its singular values.
pub fn fourier_norm(u: &Multiplier) -> Result<f64> {
    let g = u
        .group()
        .ok_or_else(|| Error::InvalidMultiplier("fourier norm requires a finite group".into()))?;
    let n = g.order();
    // Lambda[i][j] = u(i j^{-1})
    let lambda = ComplexMatrix::from_fn(n, n, |i, j| u.value(g.mul(i, g.inv(j))));
    let svs = singular_values(&lambda);
    Ok(svs.iter().sum::<f64>() / n as f64)
}

/// Predual-norm outcome: the value together with the maximizing
/// multiplier in the B2 unit ball.
#[derive(Clone, Debug)]
pub struct QNorm {
    pub value: f64,
    pub maximizer: Multiplier,
    pub tolerance: f64,
}

/// Q norm: sup { |sum_x f(x) u(x)| : ||u||_B2 <= 1 }, computed as a
/// linear objective over the SDP-representable unit ball (the block-PSD
/// witness with unit diagonal caps).
pub fn q_norm(f: &Multiplier, tol: f64) -> Result<QNorm> {
    let g = f
        .group()
        .ok_or_else(|| Error::InvalidMultiplier("q norm requires a finite group".into()))?
        .clone();
    let n = g.order();
    let dim = 4 * n; // block matrix 2n + one cap per diagonal entry

    let mut h0 = ComplexMatrix::zeros(dim, dim);
    for i in 0..2 * n {
        h0[(2 * n + i, 2 * n + i)] = Complex64::new(1.0, 0.0);
    }

    let mut basis: Vec<HermBasis> = Vec::new();
    let mut objective: Vec<f64> = Vec::new();
    // u variables: 2 reals per group element
    for gidx in 0..n {
        let mut entries_re = Vec::new();
        let mut entries_im = Vec::new();
        for y in 0..n {
            // x with y^{-1} x = g  <=>  x = y g
            let x = g.mul(y, gidx);
            entries_re.push((x, n + y, Complex64::new(1.0, 0.0)));
            entries_im.push((x, n + y, Complex64::new(0.0, 1.0)));
        }
        basis.push(HermBasis {
            entries: entries_re,
        });
        objective.push(-f.value(gidx).re);
        basis.push(HermBasis {
            entries: entries_im,
        });
        objective.push(f.value(gidx).im);
    }
    // X and Y entries with caps 1 - diag >= 0
    for (offset, cap_offset) in [(0usize, 2 * n), (n, 3 * n)] {
        for i in 0..n {
            for j in i..n {
                if i == j {
                    basis.push(HermBasis {
                        entries: vec![
                            (offset + i, offset + i, Complex64::new(1.0, 0.0)),
                            (cap_offset + i, cap_offset + i, Complex64::new(-1.0, 0.0)),
                        ],
                    });
                    objective.push(0.0);
                } else {
                    basis.push(HermBasis::single(
                        offset + i,
                        offset + j,
                        Complex64::new(1.0, 0.0),
                    ));
                    objective.push(0.0);
                    basis.push(HermBasis::single(
                        offset + i,
                        offset + j,
                        Complex64::new(0.0, 1.0),
                    ));
                    objective.push(0.0);
                }
            }
        }
    }

    // start: u = 0, X = Y = I/2
    let mut z0 = vec![0.0; basis.len()];
    let mut idx = 2 * n;
    for _block in 0..2 {
        for i in 0..n {
            for j in i..n {
                if i == j {
                    z0[idx] = 0.5;
                    idx += 1;
                } else {
                    idx += 2;
                }
            }
        }
    }

    let problem = SdpProblem {
        dim,
        h0,
        basis,
        objective,
    };
    let sol = problem.minimize(z0, 0.5 * tol, 900);
    if !sol.converged && sol.gap_measure > 10.0 * tol {
        return Err(Error::SolverDidNotConverge {
            value: -problem.objective_value(&sol.z),
            lower_bound: f64::NAN,
            iterations: sol.newton_steps,
        });
    }

    let u_values: Vec<Complex64> = (0..n)
        .map(|gidx| Complex64::new(sol.z[2 * gidx], sol.z[2 * gidx + 1]))
        .collect();
    let maximizer = Multiplier {
        carrier: Carrier::Group(g),
        values: u_values,
        provenance: vec![format!(
            "q-norm maximizer for [{}]",
            f.provenance.join("; ")
        )],
    };
    let attained = (0..n)
        .map(|gi| (f.value(gi) * maximizer.value(gi)).re)
        .sum::<f64>();
    Ok(QNorm {
        value: attained,
        maximizer,
        tolerance: tol,
    })
}

/// Bundle of every norm this module computes for one multiplier.
#[derive(Clone, Debug)]
pub struct NormReport {
    pub b2: Option<f64>,
    pub fourier: Option<f64>,
    pub q: Option<f64>,
    pub sup: f64,
    pub pos_def: Option<bool>,
    pub min_eigenvalue: Option<f64>,
    pub section_lower_bound: bool,
    pub tolerance: f64,
}

/// Compute every norm available on the multiplier's carrier.
pub fn norm_report(u: &Multiplier, tol: f64) -> Result<NormReport> {
    let b2 = b2_norm(u, tol)?;
    let pd = is_positive_definite(u, tol)?;
    let (fourier, q) = match u.carrier {
        Carrier::Group(_) => (Some(fourier_norm(u)?), Some(q_norm(u, tol)?.value)),
        Carrier::Window(_) => (None, None),
    };
    Ok(NormReport {
        b2: Some(b2.value),
        fourier,
        q,
        sup: u.sup_norm(),
        pos_def: Some(pd.positive),
        min_eigenvalue: Some(pd.min_eigenvalue),
        section_lower_bound: b2.section_lower_bound,
        tolerance: tol,
    })
}
