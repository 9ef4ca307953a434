//! Finite-dimensional traced von Neumann algebras: multi-matrix algebras
//! with a faithful trace state, group algebras of finite groups, Fourier
//! multiplier operators, conditional expectations, corners, weighted
//! direct sums, tensor products and trace changes.
//!
//! Every algebra here is a *-subalgebra of an ambient multi-matrix
//! algebra, carried together with a tau-orthonormal basis of itself.
//! Linear maps are stored as matrices over that basis (their L2 matrix),
//! which makes the L2 extension literally a field access and keeps all
//! structural operations (sums, tensors, compressions) uniform.

use num_complex::Complex64;
use rand::Rng;

use crate::error::Error;
use crate::group::{FiniteGroup, Subgroup};
use crate::linalg::{jacobi_eigh, singular_values, ComplexMatrix};
use crate::multiplier::{b2_norm, Carrier, Multiplier};
use crate::Result;

/// Largest allowed total matrix dimension of an ambient algebra.
pub const MAX_TOTAL_DIM: usize = 512;

/// A multi-matrix algebra sum_b M_{n_b} with block weights mu_b > 0
/// normalized so tau(x) = sum_b mu_b Tr(x_b) is a state.
#[derive(Clone, Debug, PartialEq)]
pub struct TracedAlgebra {
    blocks: Vec<usize>,
    weights: Vec<f64>,
}

impl TracedAlgebra {
    /// Build from block sizes and strictly positive raw weights; the
    /// weights are rescaled so that tau(1) = 1.
    pub fn new(blocks: Vec<usize>, raw_weights: Vec<f64>) -> Result<Self> {
        if blocks.is_empty() || blocks.len() != raw_weights.len() {
            return Err(Error::InvalidTrace(
                "need one positive weight per block".into(),
            ));
        }
        if blocks.contains(&0) {
            return Err(Error::InvalidTrace("zero-size block".into()));
        }
        let total: usize = blocks.iter().sum();
        if total > MAX_TOTAL_DIM {
            return Err(Error::InvalidTrace(format!(
                "total dimension {total} exceeds {MAX_TOTAL_DIM}"
            )));
        }
        if raw_weights.iter().any(|&w| !(w > 0.0) || !w.is_finite()) {
            return Err(Error::InvalidTrace(
                "weights must be strictly positive".into(),
            ));
        }
        let mass: f64 = blocks
            .iter()
            .zip(&raw_weights)
            .map(|(&n, &w)| n as f64 * w)
            .sum();
        let weights = raw_weights.iter().map(|w| w / mass).collect();
        Ok(TracedAlgebra { blocks, weights })
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Sum of block sizes.
    pub fn total_dim(&self) -> usize {
        self.blocks.iter().sum()
    }

    /// Dimension of the algebra as a vector space.
    pub fn l2_dim(&self) -> usize {
        self.blocks.iter().map(|n| n * n).sum()
    }

    pub fn zero(&self) -> AlgebraElement {
        AlgebraElement {
            blocks: self
                .blocks
                .iter()
                .map(|&n| ComplexMatrix::zeros(n, n))
                .collect(),
        }
    }

    pub fn one(&self) -> AlgebraElement {
        AlgebraElement {
            blocks: self
                .blocks
                .iter()
                .map(|&n| ComplexMatrix::identity(n))
                .collect(),
        }
    }

    pub fn random(&self, rng: &mut impl Rng) -> AlgebraElement {
        AlgebraElement {
            blocks: self
                .blocks
                .iter()
                .map(|&n| {
                    ComplexMatrix::from_fn(n, n, |_, _| {
                        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                    })
                })
                .collect(),
        }
    }

    pub fn trace(&self, x: &AlgebraElement) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (b, m) in x.blocks.iter().enumerate() {
            let mut tr = Complex64::new(0.0, 0.0);
            for i in 0..m.rows {
                tr += m[(i, i)];
            }
            acc += tr * self.weights[b];
        }
        acc
    }

    /// <x, y>_tau = tau(y* x).
    pub fn inner(&self, x: &AlgebraElement, y: &AlgebraElement) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (b, (xb, yb)) in x.blocks.iter().zip(&y.blocks).enumerate() {
            let mut s = Complex64::new(0.0, 0.0);
            for i in 0..xb.rows {
                for j in 0..xb.cols {
                    s += yb[(i, j)].conj() * xb[(i, j)];
                }
            }
            acc += s * self.weights[b];
        }
        acc
    }

    pub fn l2_norm(&self, x: &AlgebraElement) -> f64 {
        self.inner(x, x).re.max(0.0).sqrt()
    }

    /// Operator norm: the largest singular value over the blocks.
    pub fn op_norm(&self, x: &AlgebraElement) -> f64 {
        x.blocks
            .iter()
            .map(|m| singular_values(m).first().copied().unwrap_or(0.0))
            .fold(0.0, f64::max)
    }
}

/// A block-diagonal element of a [`TracedAlgebra`].
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraElement {
    pub blocks: Vec<ComplexMatrix>,
}

impl AlgebraElement {
    pub fn add(&self, other: &Self) -> Self {
        AlgebraElement {
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        AlgebraElement {
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        AlgebraElement {
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| a.matmul(b))
                .collect(),
        }
    }

    pub fn adjoint(&self) -> Self {
        AlgebraElement {
            blocks: self.blocks.iter().map(|m| m.adjoint()).collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        AlgebraElement {
            blocks: self.blocks.iter().map(|m| m.scale(s)).collect(),
        }
    }

    /// Deviation from being a projection: max of ||p - p*|| and ||p^2 - p||.
    pub fn projection_defect(&self) -> f64 {
        let adj = self.adjoint();
        let sq = self.mul(self);
        let d1 = self
            .blocks
            .iter()
            .zip(&adj.blocks)
            .map(|(a, b)| a.sub(b).max_abs())
            .fold(0.0, f64::max);
        let d2 = self
            .blocks
            .iter()
            .zip(&sq.blocks)
            .map(|(a, b)| b.sub(a).max_abs())
            .fold(0.0, f64::max);
        d1.max(d2)
    }

    pub fn max_abs(&self) -> f64 {
        self.blocks.iter().map(|m| m.max_abs()).fold(0.0, f64::max)
    }
}

/// The group algebra of a finite group in its left regular
/// representation: lambda(g) delta_h = delta_{gh}, with the canonical
/// trace tau(x) = <x delta_e, delta_e>.
#[derive(Clone, Debug)]
pub struct GroupAlgebra {
    group: FiniteGroup,
    ambient: TracedAlgebra,
}

impl GroupAlgebra {
    pub fn new(group: &FiniteGroup) -> Self {
        let n = group.order();
        // single block with weight 1/n; on the span of the lambda(g) the
        // normalized matrix trace agrees with <x delta_e, delta_e>
        let ambient = TracedAlgebra::new(vec![n], vec![1.0]).expect("small block");
        GroupAlgebra {
            group: group.clone(),
            ambient,
        }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn ambient(&self) -> &TracedAlgebra {
        &self.ambient
    }

    /// The permutation matrix of lambda(g).
    pub fn lambda(&self, g: usize) -> AlgebraElement {
        let n = self.group.order();
        let mut m = ComplexMatrix::zeros(n, n);
        for h in 0..n {
            m[(self.group.mul(g, h), h)] = Complex64::new(1.0, 0.0);
        }
        AlgebraElement { blocks: vec![m] }
    }

    /// sum_g c_g lambda(g).
    pub fn from_coefficients(&self, c: &[Complex64]) -> AlgebraElement {
        let n = self.group.order();
        assert_eq!(c.len(), n);
        let mut m = ComplexMatrix::zeros(n, n);
        for g in 0..n {
            if c[g].re != 0.0 || c[g].im != 0.0 {
                for h in 0..n {
                    m[(self.group.mul(g, h), h)] += c[g];
                }
            }
        }
        AlgebraElement { blocks: vec![m] }
    }

    /// Fourier coefficients c_g = tau(lambda(g)* x); exact on the span of
    /// the lambda(g).
    pub fn coefficients(&self, x: &AlgebraElement) -> Vec<Complex64> {
        let n = self.group.order();
        let m = &x.blocks[0];
        (0..n)
            .map(|g| {
                // tau(lambda(g)* x) = (1/n) sum_h x[(g h, h)]... with
                // lambda(g)*[h, gh] = 1: trace picks x[gh, h]
                let mut s = Complex64::new(0.0, 0.0);
                for h in 0..n {
                    s += m[(self.group.mul(g, h), h)];
                }
                s / n as f64
            })
            .collect()
    }

    /// Numerical dimension of the center: the number of near-1
    /// eigenvalues of the class-averaging projector on coefficients.
    pub fn center_dimension(&self) -> usize {
        let n = self.group.order();
        let mut avg = ComplexMatrix::zeros(n, n);
        for h in self.group.elements() {
            // conjugation permutation g -> h g h^{-1}
            for g in self.group.elements() {
                let tgt = self.group.conj(h, g);
                avg[(tgt, g)] += Complex64::new(1.0 / n as f64, 0.0);
            }
        }
        let eig = jacobi_eigh(&avg.hermitize());
        eig.eigenvalues.iter().filter(|&&l| l > 0.5).count()
    }
}

/// A finite-dimensional traced algebra presented as a *-subalgebra of an
/// ambient multi-matrix algebra, together with a tau-orthonormal basis.
/// The basis doubles as the orthonormal basis of L2 of the algebra.
#[derive(Clone, Debug)]
pub struct VnAlgebra {
    pub ambient: TracedAlgebra,
    /// trace normalization against the ambient trace: the algebra trace
    /// is tau(x) / tau(unit), which matters for corners
    trace_scale: f64,
    onb: Vec<AlgebraElement>,
    /// set for group algebras: coordinates in the lambda basis can be
    /// read off the identity column exactly, with no rounding
    group_coords: Option<FiniteGroup>,
    pub label: String,
}

impl VnAlgebra {
    /// The full multi-matrix algebra with its matrix-unit basis.
    pub fn full_matrix(algebra: &TracedAlgebra) -> Self {
        let mut onb = Vec::with_capacity(algebra.l2_dim());
        for (b, &n) in algebra.blocks().iter().enumerate() {
            let w = algebra.weights()[b];
            for i in 0..n {
                for j in 0..n {
                    let mut x = algebra.zero();
                    x.blocks[b][(i, j)] = Complex64::new(1.0 / w.sqrt(), 0.0);
                    onb.push(x);
                }
            }
        }
        VnAlgebra {
            ambient: algebra.clone(),
            trace_scale: 1.0,
            onb,
            group_coords: None,
            label: format!("multi-matrix {:?}", algebra.blocks()),
        }
    }

    /// The group algebra L(G) inside its regular representation, with
    /// orthonormal basis {lambda(g)}.
    pub fn group_algebra(ga: &GroupAlgebra) -> Self {
        let onb = ga.group().elements().map(|g| ga.lambda(g)).collect();
        VnAlgebra {
            ambient: ga.ambient().clone(),
            trace_scale: 1.0,
            onb,
            group_coords: Some(ga.group().clone()),
            label: format!("L({})", ga.group().name()),
        }
    }

    pub fn dim(&self) -> usize {
        self.onb.len()
    }

    pub fn basis(&self) -> &[AlgebraElement] {
        &self.onb
    }

    /// The algebra trace (tau_p for corners, tau otherwise).
    pub fn trace(&self, x: &AlgebraElement) -> Complex64 {
        self.ambient.trace(x) * self.trace_scale
    }

    pub fn inner(&self, x: &AlgebraElement, y: &AlgebraElement) -> Complex64 {
        self.ambient.inner(x, y) * self.trace_scale
    }

    pub fn l2_norm(&self, x: &AlgebraElement) -> f64 {
        self.inner(x, x).re.max(0.0).sqrt()
    }

    /// Coordinates of x in the orthonormal basis. For group algebras
    /// the lambda coefficients of an element x = sum_g c_g lambda(g) sit
    /// verbatim in the identity column, so they are read off exactly.
    pub fn coords(&self, x: &AlgebraElement) -> Vec<Complex64> {
        if let Some(g) = &self.group_coords {
            let m = &x.blocks[0];
            return (0..g.order()).map(|idx| m[(idx, 0)]).collect();
        }
        self.onb.iter().map(|b| self.inner(x, b)).collect()
    }

    pub fn from_coords(&self, c: &[Complex64]) -> AlgebraElement {
        let mut acc = self.ambient.zero();
        for (k, b) in self.onb.iter().enumerate() {
            if c[k].re != 0.0 || c[k].im != 0.0 {
                acc = acc.add(&b.scale(c[k]));
            }
        }
        acc
    }

    /// Random element of the subalgebra.
    pub fn random(&self, rng: &mut impl Rng) -> AlgebraElement {
        let c: Vec<Complex64> = (0..self.dim())
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        self.from_coords(&c)
    }
}

/// What a map is, for cb-norm dispatch and report rendering.
#[derive(Clone, Debug)]
pub enum MapKind {
    Identity,
    Fourier(Multiplier),
    ConditionalExpectation,
    Compression,
    DirectSum,
    Tensor,
    General,
}

/// A linear map on a [`VnAlgebra`], stored as its matrix over the
/// algebra's orthonormal basis. In finite dimension this matrix IS the
/// L2 extension of the map; compactness of that extension is automatic
/// and recorded as such.
#[derive(Clone, Debug)]
pub struct VnMap {
    pub algebra: VnAlgebra,
    l2: ComplexMatrix,
    pub kind: MapKind,
    /// compactness of the L2 extension; trivially true at finite scale
    pub l2_compact: bool,
}

impl VnMap {
    pub fn identity(algebra: &VnAlgebra) -> Self {
        VnMap {
            algebra: algebra.clone(),
            l2: ComplexMatrix::identity(algebra.dim()),
            kind: MapKind::Identity,
            l2_compact: true,
        }
    }

    /// An arbitrary linear map from its matrix over the basis.
    pub fn from_l2_matrix(algebra: &VnAlgebra, l2: ComplexMatrix, kind: MapKind) -> Self {
        assert_eq!(l2.rows, algebra.dim());
        assert_eq!(l2.cols, algebra.dim());
        VnMap {
            algebra: algebra.clone(),
            l2,
            kind,
            l2_compact: true,
        }
    }

    pub fn apply(&self, x: &AlgebraElement) -> AlgebraElement {
        let c = self.algebra.coords(x);
        let n = self.algebra.dim();
        let mut out = vec![Complex64::new(0.0, 0.0); n];
        for k in 0..n {
            for l in 0..n {
                out[k] += self.l2[(k, l)] * c[l];
            }
        }
        self.algebra.from_coords(&out)
    }

    /// The matrix of the map in the orthonormal basis of L2 of the
    /// algebra (its L2 extension).
    pub fn l2_matrix(&self) -> &ComplexMatrix {
        &self.l2
    }

    /// Operator norm of the L2 extension.
    pub fn l2_operator_norm(&self) -> f64 {
        singular_values(&self.l2).first().copied().unwrap_or(0.0)
    }

    /// Deviation from tau-symmetry <Tx, y> = <x, Ty>, which on the
    /// orthonormal basis is Hermitianity of the L2 matrix.
    pub fn symmetry_defect(&self) -> f64 {
        self.l2.hermitian_deviation()
    }

    /// Completely bounded norm, exposed only where it reduces to a Schur
    /// norm computation: Fourier multipliers (and identities), their
    /// direct sums and tensor products carry their symbol's B2 norm;
    /// anything else is refused.
    pub fn cb_norm(&self, tol: f64) -> Result<f64> {
        match &self.kind {
            MapKind::Identity => Ok(1.0),
            MapKind::Fourier(u) => Ok(b2_norm(u, tol)?.value),
            other => Err(Error::CbNormUnsupported(format!("{other:?}"))),
        }
    }
}

/// The Fourier multiplier operator T lambda(g) = u(g) lambda(g) on L(G).
/// Its cb norm is by definition the B2 norm of the symbol.
pub fn fourier_multiplier_op(ga: &GroupAlgebra, u: &Multiplier) -> Result<VnMap> {
    let g = u
        .group()
        .ok_or_else(|| Error::InvalidMultiplier("fourier op needs a group carrier".into()))?;
    if g.order() != ga.group().order() {
        return Err(Error::InvalidMultiplier(
            "symbol does not live on the algebra's group".into(),
        ));
    }
    let algebra = VnAlgebra::group_algebra(ga);
    let n = algebra.dim();
    let mut l2 = ComplexMatrix::zeros(n, n);
    for g_idx in 0..n {
        l2[(g_idx, g_idx)] = u.value(g_idx);
    }
    Ok(VnMap {
        algebra,
        l2,
        kind: MapKind::Fourier(u.clone()),
        l2_compact: true,
    })
}

/// Recover the symbol u(g) = tau(lambda(g)* T(lambda(g))) of a map on a
/// group algebra. For Fourier multiplier operators this is an exact
/// roundtrip.
pub fn recover_symbol(ga: &GroupAlgebra, t: &VnMap) -> Multiplier {
    let group = ga.group().clone();
    let algebra = VnAlgebra::group_algebra(ga);
    let values: Vec<Complex64> = group
        .elements()
        .map(|g| {
            // tau(lambda(g)* T lambda(g)) is the lambda(g) coefficient of
            // T lambda(g), which the group coordinate path reads exactly
            let lam = ga.lambda(g);
            let tl = t.apply(&lam);
            algebra.coords(&tl)[g]
        })
        .collect();
    Multiplier::from_values(
        Carrier::Group(group),
        values,
        "recovered symbol tau(lambda(g)* T lambda(g))",
    )
    .expect("lengths match")
}

/// Trace-preserving conditional expectation of L(G) onto L(H): Fourier
/// coefficients off the subgroup are killed.
pub fn conditional_expectation(ga: &GroupAlgebra, h: &Subgroup) -> Result<VnMap> {
    if h.parent().order() != ga.group().order() {
        return Err(Error::InvalidMultiplier(
            "subgroup does not live in the algebra's group".into(),
        ));
    }
    let algebra = VnAlgebra::group_algebra(ga);
    let n = algebra.dim();
    let mut l2 = ComplexMatrix::zeros(n, n);
    for g in 0..n {
        if h.contains(g) {
            l2[(g, g)] = Complex64::new(1.0, 0.0);
        }
    }
    Ok(VnMap {
        algebra,
        l2,
        kind: MapKind::ConditionalExpectation,
        l2_compact: true,
    })
}

/// The corner algebra (pMp, tau_p) with tau_p = tau(p)^{-1} tau, its
/// orthonormal basis obtained by Gram-Schmidt from p e_ij p, and the
/// compressed map S = P T P restricted to the corner.
pub struct Compression {
    pub corner: VnAlgebra,
    pub map: VnMap,
    pub trace_of_p: f64,
}

pub fn compress(parent: &VnAlgebra, t: &VnMap, p: &AlgebraElement) -> Result<Compression> {
    let defect = p.projection_defect();
    if defect > 1e-10 {
        return Err(Error::NotProjection(format!("defect {defect:.3e}")));
    }
    let tau_p = parent.ambient.trace(p).re;
    if tau_p <= 1e-12 {
        return Err(Error::NotProjection("zero projection".into()));
    }

    // orthonormal basis of p M p from candidates p b p
    let mut onb: Vec<AlgebraElement> = Vec::new();
    for b in parent.basis() {
        let cand = p.mul(b).mul(p);
        // Gram-Schmidt against what we have, under tau_p
        let mut v = cand;
        for existing in &onb {
            let coeff = parent.ambient.inner(&v, existing).unscale(tau_p);
            v = v.sub(&existing.scale(coeff));
        }
        let norm = (parent.ambient.inner(&v, &v).re / tau_p).max(0.0).sqrt();
        if norm > 1e-9 {
            onb.push(v.scale(Complex64::new(1.0 / norm, 0.0)));
        }
    }
    let corner = VnAlgebra {
        ambient: parent.ambient.clone(),
        trace_scale: parent.trace_scale / tau_p,
        onb,
        group_coords: None,
        label: format!("corner of {}", parent.label),
    };

    // S = P(T(x)) for x in the corner, expressed over the corner basis
    let dim = corner.dim();
    let mut l2 = ComplexMatrix::zeros(dim, dim);
    for (l, bl) in corner.basis().iter().enumerate() {
        let image = p.mul(&t.apply(bl)).mul(p);
        for (k, bk) in corner.basis().iter().enumerate() {
            l2[(k, l)] = corner.inner(&image, bk);
        }
    }
    Ok(Compression {
        map: VnMap {
            algebra: corner.clone(),
            l2,
            kind: MapKind::Compression,
            l2_compact: true,
        },
        corner,
        trace_of_p: tau_p,
    })
}

trait Unscale {
    fn unscale(self, s: f64) -> Complex64;
}
impl Unscale for Complex64 {
    fn unscale(self, s: f64) -> Complex64 {
        self / s
    }
}

/// Weighted direct sum of algebras: block concatenation of the ambients
/// with trace sum alpha_i tau_i.
pub fn direct_sum(parts: &[(VnAlgebra, f64)]) -> Result<VnAlgebra> {
    if parts.is_empty() {
        return Err(Error::InvalidTrace("empty direct sum".into()));
    }
    let total: f64 = parts.iter().map(|(_, a)| a).sum();
    if (total - 1.0).abs() > 1e-9 || parts.iter().any(|(_, a)| !(*a > 0.0)) {
        return Err(Error::InvalidTrace(format!(
            "weights must be positive and sum to 1 (got {total})"
        )));
    }
    for (a, _) in parts {
        if (a.trace_scale - 1.0).abs() > 1e-15 {
            return Err(Error::InvalidTrace(
                "direct sums of corner algebras are not supported".into(),
            ));
        }
    }
    let mut blocks = Vec::new();
    let mut weights = Vec::new();
    for (alg, alpha) in parts {
        for (b, &n) in alg.ambient.blocks().iter().enumerate() {
            blocks.push(n);
            weights.push(alg.ambient.weights()[b] * alpha);
        }
    }
    // weights already sum correctly: sum alpha_i * 1 = 1
    let ambient = TracedAlgebra { blocks, weights };
    let mut onb = Vec::new();
    for (i, (alg, alpha)) in parts.iter().enumerate() {
        for b in alg.basis() {
            let mut embedded: Vec<ComplexMatrix> = Vec::new();
            for (j, (other, _)) in parts.iter().enumerate() {
                if i == j {
                    embedded.extend(b.blocks.iter().cloned());
                } else {
                    embedded.extend(
                        other
                            .ambient
                            .blocks()
                            .iter()
                            .map(|&n| ComplexMatrix::zeros(n, n)),
                    );
                }
            }
            onb.push(
                AlgebraElement { blocks: embedded }.scale(Complex64::new(1.0 / alpha.sqrt(), 0.0)),
            );
        }
    }
    let label = parts
        .iter()
        .map(|(a, _)| a.label.clone())
        .collect::<Vec<_>>()
        .join(" + ");
    Ok(VnAlgebra {
        ambient,
        trace_scale: 1.0,
        onb,
        group_coords: None,
        label,
    })
}

/// Blockwise direct sum of maps on the summands.
pub fn sum_map(sum: &VnAlgebra, parts: &[(VnMap, f64)]) -> Result<VnMap> {
    let dims: usize = parts.iter().map(|(m, _)| m.algebra.dim()).sum();
    if dims != sum.dim() {
        return Err(Error::InvalidTrace(
            "map dimensions do not match the sum".into(),
        ));
    }
    let mut l2 = ComplexMatrix::zeros(dims, dims);
    let mut offset = 0;
    for (m, _) in parts {
        let d = m.algebra.dim();
        for i in 0..d {
            for j in 0..d {
                l2[(offset + i, offset + j)] = m.l2_matrix()[(i, j)];
            }
        }
        offset += d;
    }
    Ok(VnMap {
        algebra: sum.clone(),
        l2,
        kind: MapKind::DirectSum,
        l2_compact: true,
    })
}

/// Tensor product algebra: blocks are pairwise Kronecker products, the
/// trace is the product trace, and the basis is the tensor basis.
pub fn tensor(a: &VnAlgebra, b: &VnAlgebra) -> Result<VnAlgebra> {
    if (a.trace_scale - 1.0).abs() > 1e-15 || (b.trace_scale - 1.0).abs() > 1e-15 {
        return Err(Error::InvalidTrace(
            "tensor products of corner algebras are not supported".into(),
        ));
    }
    let mut blocks = Vec::new();
    let mut weights = Vec::new();
    for (ba, &na) in a.ambient.blocks().iter().enumerate() {
        for (bb, &nb) in b.ambient.blocks().iter().enumerate() {
            blocks.push(na * nb);
            weights.push(a.ambient.weights()[ba] * b.ambient.weights()[bb]);
        }
    }
    let total: usize = blocks.iter().sum();
    if total > MAX_TOTAL_DIM {
        return Err(Error::InvalidTrace(format!(
            "tensor dimension {total} exceeds {MAX_TOTAL_DIM}"
        )));
    }
    let ambient = TracedAlgebra { blocks, weights };
    let mut onb = Vec::new();
    for xa in a.basis() {
        for xb in b.basis() {
            let mut blocks = Vec::new();
            for ma in &xa.blocks {
                for mb in &xb.blocks {
                    blocks.push(ma.kron(mb));
                }
            }
            onb.push(AlgebraElement { blocks });
        }
    }
    Ok(VnAlgebra {
        ambient,
        trace_scale: 1.0,
        onb,
        group_coords: None,
        label: format!("({}) x ({})", a.label, b.label),
    })
}

/// (T1 tensor T2)(x1 tensor x2) = T1 x1 tensor T2 x2, extended linearly;
/// on orthonormal bases this is the Kronecker product of the L2 matrices.
pub fn tensor_map(prod: &VnAlgebra, t1: &VnMap, t2: &VnMap) -> Result<VnMap> {
    if t1.algebra.dim() * t2.algebra.dim() != prod.dim() {
        return Err(Error::InvalidTrace(
            "map dimensions do not match the tensor algebra".into(),
        ));
    }
    Ok(VnMap {
        algebra: prod.clone(),
        l2: t1.l2_matrix().kron(t2.l2_matrix()),
        kind: MapKind::Tensor,
        l2_compact: true,
    })
}

/// Radon-Nikodym data relating two faithful traces on a multi-matrix
/// algebra: tau'(x) = tau(h x) with h central (block-constant), plus the
/// (1+eps)-dyadic spectral slicing of h and the per-slice condition
/// numbers of h^{1/2}.
#[derive(Clone, Debug)]
pub struct TraceChange {
    /// h value on each block
    pub h_values: Vec<f64>,
    /// groups of block indices with h in one (1+eps) dyadic slice
    pub spectral_blocks: Vec<Vec<usize>>,
    /// sup ||h^{1/2}|| ||h^{-1/2}|| within each slice
    pub slice_condition_numbers: Vec<f64>,
    pub epsilon: f64,
}

pub fn trace_change(
    algebra: &TracedAlgebra,
    new_raw_weights: &[f64],
    epsilon: f64,
) -> Result<TraceChange> {
    if new_raw_weights.len() != algebra.blocks().len() {
        return Err(Error::InvalidTrace("one weight per block required".into()));
    }
    if new_raw_weights.iter().any(|&w| !(w > 0.0)) {
        return Err(Error::InvalidTrace("new trace must be faithful".into()));
    }
    if !(epsilon > 0.0) {
        return Err(Error::InvalidTrace("epsilon must be positive".into()));
    }
    let scaled = TracedAlgebra::new(algebra.blocks().to_vec(), new_raw_weights.to_vec())?;
    let h_values: Vec<f64> = scaled
        .weights()
        .iter()
        .zip(algebra.weights())
        .map(|(nw, ow)| nw / ow)
        .collect();
    // dyadic slicing by floor(log_{1+eps} h)
    let mut keyed: Vec<(i64, usize)> = h_values
        .iter()
        .enumerate()
        .map(|(b, &h)| ((h.ln() / (1.0 + epsilon).ln()).floor() as i64, b))
        .collect();
    keyed.sort();
    let mut spectral_blocks: Vec<Vec<usize>> = Vec::new();
    let mut slice_condition_numbers = Vec::new();
    let mut cur_key = None;
    for (key, b) in keyed {
        if cur_key != Some(key) {
            spectral_blocks.push(Vec::new());
            cur_key = Some(key);
        }
        spectral_blocks.last_mut().unwrap().push(b);
    }
    for slice in &spectral_blocks {
        let hmax = slice.iter().map(|&b| h_values[b]).fold(f64::MIN, f64::max);
        let hmin = slice.iter().map(|&b| h_values[b]).fold(f64::MAX, f64::min);
        slice_condition_numbers.push((hmax / hmin).sqrt());
    }
    Ok(TraceChange {
        h_values,
        spectral_blocks,
        slice_condition_numbers,
        epsilon,
    })
}

impl TraceChange {
    /// The central element h as an algebra element.
    pub fn h_element(&self, algebra: &TracedAlgebra) -> AlgebraElement {
        AlgebraElement {
            blocks: algebra
                .blocks()
                .iter()
                .zip(&self.h_values)
                .map(|(&n, &h)| ComplexMatrix::identity(n).scale(Complex64::new(h, 0.0)))
                .collect(),
        }
    }

    /// U x = h^{1/2} x, the isometry L2(M, tau') -> L2(M, tau).
    pub fn u_apply(&self, algebra: &TracedAlgebra, x: &AlgebraElement) -> AlgebraElement {
        AlgebraElement {
            blocks: algebra
                .blocks()
                .iter()
                .zip(&self.h_values)
                .zip(&x.blocks)
                .map(|((_, &h), m)| m.scale(Complex64::new(h.sqrt(), 0.0)))
                .collect(),
        }
    }
}

/// Fell absorption at finite scale: with V delta_g = delta_g tensor
/// delta_g, the compression V* (lambda(g) tensor a) V equals
/// tau(lambda(g)* a) lambda(g). Returns the largest entrywise deviation
/// over all g and a basis of a's.
pub fn fell_absorption_defect(group: &FiniteGroup) -> f64 {
    let ga = GroupAlgebra::new(group);
    let n = group.order();
    // V as an n^2 x n matrix
    let mut v = ComplexMatrix::zeros(n * n, n);
    for g in 0..n {
        v[(g * n + g, g)] = Complex64::new(1.0, 0.0);
    }
    let vstar = v.adjoint();
    let mut defect: f64 = 0.0;
    for g in 0..n {
        let lam_g = &ga.lambda(g).blocks[0];
        for h in 0..n {
            let lam_h = &ga.lambda(h).blocks[0];
            let big = lam_g.kron(lam_h);
            let compressed = vstar.matmul(&big).matmul(&v);
            // expected: tau(lambda(g)* lambda(h)) lambda(g) = delta_{gh} lambda(g)
            let expected = if g == h {
                lam_g.clone()
            } else {
                ComplexMatrix::zeros(n, n)
            };
            defect = defect.max(compressed.sub(&expected).max_abs());
        }
    }
    defect
}
