//! Constructive multiplier transforms, each paired (in the test suites)
//! with the norm inequality it must satisfy: restriction to subgroups,
//! extension by zero, direct products, bi-invariant averaging,
//! convolution by probability densities, quotient lift/push, cocycle
//! induction, Folner averaging over coset spaces, proper-function
//! semigroups exp(-t psi), and cutoff norms on windows.
//!
//! Exact-equality contracts (bi-invariance of averages, induction through
//! a projection cocycle matching the quotient lift) are met by grouping
//! sums over equal values before any division, so the same floating-point
//! expression is evaluated on both sides.

use num_complex::Complex64;

use crate::error::Error;
use crate::group::{FiniteGroup, QuotientMap, Subgroup};
use crate::linalg::ComplexMatrix;
use crate::multiplier::{b2_norm, push_step, Carrier, Multiplier};
use crate::sdp::{HermBasis, SdpProblem};
use crate::window::GroupWindow;
use crate::Result;

/// u|_H as a multiplier on the subgroup's own group structure.
pub fn restrict(u: &Multiplier, h: &Subgroup) -> Result<Multiplier> {
    let g = u
        .group()
        .ok_or_else(|| Error::InvalidMultiplier("restrict needs a group carrier".into()))?;
    if g.order() != h.parent().order() {
        return Err(Error::InvalidMultiplier(
            "subgroup does not live in the multiplier's group".into(),
        ));
    }
    let values = h.elements().iter().map(|&p| u.value(p)).collect();
    Multiplier::from_values(
        Carrier::Group(h.as_group().clone()),
        values,
        &format!("restricted to subgroup of order {}", h.order()),
    )
}

/// Extension by zero from a subgroup to its parent; the B2 norm is
/// preserved (asserted by the test suites, not by this function).
pub fn extend_by_zero(u: &Multiplier, h: &Subgroup) -> Result<Multiplier> {
    let small = u
        .group()
        .ok_or_else(|| Error::InvalidMultiplier("extend needs a group carrier".into()))?;
    if small.order() != h.order() {
        return Err(Error::InvalidMultiplier(
            "multiplier does not live on the subgroup".into(),
        ));
    }
    let parent = h.parent();
    let values = parent
        .elements()
        .map(|p| match h.from_parent(p) {
            Some(s) => u.value(s),
            None => Complex64::new(0.0, 0.0),
        })
        .collect();
    Multiplier::from_values(
        Carrier::Group(parent.clone()),
        values,
        "extended by zero to the parent group",
    )
}

/// (u x v)(g, h) = u(g) v(h) on the direct product, whose Schur matrix is
/// the tensor product of the two factors' Schur matrices.
pub fn product_multiplier(u: &Multiplier, v: &Multiplier) -> Result<(Multiplier, FiniteGroup)> {
    let g = u
        .group()
        .ok_or_else(|| Error::InvalidMultiplier("product needs group carriers".into()))?;
    let h = v
        .group()
        .ok_or_else(|| Error::InvalidMultiplier("product needs group carriers".into()))?;
    let product = FiniteGroup::direct_product(g, h)?;
    let hn = h.order();
    let values = (0..product.order())
        .map(|idx| u.value(idx / hn) * v.value(idx % hn))
        .collect();
    let m = Multiplier::from_values(
        Carrier::Group(product.clone()),
        values,
        "product multiplier",
    )?;
    Ok((m, product))
}

/// K-bi-invariant average u^K(x) = |K|^{-2} sum_{k,k'} u(k x k').
///
/// The sum is evaluated once per double coset K x K and assigned to every
/// member, so bi-invariance holds exactly.
pub fn average_biinvariant(u: &Multiplier, k: &Subgroup) -> Result<Multiplier> {
    let g = u
        .group()
        .ok_or_else(|| Error::InvalidMultiplier("average needs a group carrier".into()))?;
    if g.order() != k.parent().order() {
        return Err(Error::InvalidMultiplier(
            "subgroup does not live in the multiplier's group".into(),
        ));
    }
    let n = g.order();
    let ksize = k.order() as f64;
    let mut values = vec![Complex64::new(0.0, 0.0); n];
    let mut assigned = vec![false; n];
    for x in 0..n {
        if assigned[x] {
            continue;
        }
        // the double coset of x, with the average computed once
        let mut members = Vec::new();
        let mut sum = Complex64::new(0.0, 0.0);
        for &ka in k.elements() {
            let kx = g.mul(ka, x);
            for &kb in k.elements() {
                let kxk = g.mul(kx, kb);
                sum += u.value(kxk);
                members.push(kxk);
            }
        }
        let avg = sum / (ksize * ksize);
        for m in members {
            if !assigned[m] {
                values[m] = avg;
                assigned[m] = true;
            }
        }
    }
    Multiplier::from_values(
        Carrier::Group(g.clone()),
        values,
        &format!("bi-invariant average over subgroup of order {}", k.order()),
    )
}

/// Convolution (h * u)(x) = sum_y h(y) u(y^{-1} x) by a probability
/// density h on the group.
pub fn convolve(h: &[f64], u: &Multiplier) -> Result<Multiplier> {
    let g = u
        .group()
        .ok_or_else(|| Error::InvalidMultiplier("convolve needs a group carrier".into()))?;
    let n = g.order();
    if h.len() != n {
        return Err(Error::NotProbabilityDensity(format!(
            "density has {} entries for a group of order {n}",
            h.len()
        )));
    }
    if h.iter().any(|&x| x < 0.0 || !x.is_finite()) {
        return Err(Error::NotProbabilityDensity("negative entry".into()));
    }
    let total: f64 = h.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::NotProbabilityDensity(format!("sums to {total}")));
    }
    let values = (0..n)
        .map(|x| {
            (0..n)
                .map(|y| u.value(g.mul(g.inv(y), x)) * h[y])
                .sum::<Complex64>()
        })
        .collect();
    Multiplier::from_values(Carrier::Group(g.clone()), values, "convolved by a density")
}

/// Pull a multiplier on G/K back to G (constant on cosets).
pub fn lift_from_quotient(q: &QuotientMap, v: &Multiplier) -> Result<Multiplier> {
    let target = v
        .group()
        .ok_or_else(|| Error::InvalidMultiplier("lift needs a group carrier".into()))?;
    if target.order() != q.target().order() {
        return Err(Error::InvalidMultiplier(
            "multiplier does not live on the quotient".into(),
        ));
    }
    let values = q
        .source()
        .elements()
        .map(|x| v.value(q.project(x)))
        .collect();
    Multiplier::from_values(
        Carrier::Group(q.source().clone()),
        values,
        "lifted from quotient",
    )
}

/// Push a coset-constant multiplier on G down to G/K. Constancy on every
/// coset is required exactly; the first deviation is reported.
pub fn push_to_quotient(q: &QuotientMap, u: &Multiplier) -> Result<Multiplier> {
    let source = u
        .group()
        .ok_or_else(|| Error::InvalidMultiplier("push needs a group carrier".into()))?;
    if source.order() != q.source().order() {
        return Err(Error::InvalidMultiplier(
            "multiplier does not live on the quotient's source".into(),
        ));
    }
    for x in source.elements() {
        let rep = q.section(q.project(x));
        if u.value(x) != u.value(rep) {
            return Err(Error::NotCosetConstant(format!(
                "{} (coset of {})",
                source.label(x),
                source.label(rep)
            )));
        }
    }
    let values = q
        .target()
        .elements()
        .map(|c| u.value(q.section(c)))
        .collect();
    Multiplier::from_values(
        Carrier::Group(q.target().clone()),
        values,
        "pushed to quotient",
    )
}

/// A finite G-space with an invariant probability measure.
#[derive(Clone, Debug)]
pub struct FiniteActionSpace {
    pub group: FiniteGroup,
    pub points: usize,
    /// action[g * points + x] = g . x
    action: Vec<usize>,
    pub measure: Vec<f64>,
}

impl FiniteActionSpace {
    pub fn new(
        group: FiniteGroup,
        points: usize,
        action: Vec<usize>,
        measure: Vec<f64>,
    ) -> Result<Self> {
        if action.len() != group.order() * points || measure.len() != points {
            return Err(Error::InvalidAction("table sizes do not match".into()));
        }
        if action.iter().any(|&y| y >= points) {
            return Err(Error::InvalidAction(
                "action lands outside the point set".into(),
            ));
        }
        let space = FiniteActionSpace {
            group,
            points,
            action,
            measure,
        };
        // identity acts trivially
        for x in 0..points {
            if space.act(0, x) != x {
                return Err(Error::InvalidAction(format!("identity moves point {x}")));
            }
        }
        // action axiom, exhaustively
        for g in space.group.elements() {
            for h in space.group.elements() {
                let gh = space.group.mul(g, h);
                for x in 0..points {
                    if space.act(gh, x) != space.act(g, space.act(h, x)) {
                        return Err(Error::InvalidAction(format!(
                            "({}, {}) fails the action axiom at point {x}",
                            space.group.label(g),
                            space.group.label(h)
                        )));
                    }
                }
            }
        }
        // probability measure, invariant pointwise
        let total: f64 = space.measure.iter().sum();
        if space.measure.iter().any(|&m| m < 0.0) || (total - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidAction(format!(
                "measure is not a probability measure (total {total})"
            )));
        }
        for g in space.group.elements() {
            for x in 0..points {
                if (space.measure[space.act(g, x)] - space.measure[x]).abs() > 1e-12 {
                    return Err(Error::InvalidAction(format!(
                        "measure not invariant under {} at point {x}",
                        space.group.label(g)
                    )));
                }
            }
        }
        Ok(space)
    }

    #[inline]
    pub fn act(&self, g: usize, x: usize) -> usize {
        self.action[g * self.points + x]
    }

    pub fn uniform(&self) -> bool {
        self.measure
            .iter()
            .all(|&m| (m - 1.0 / self.points as f64).abs() < 1e-15)
    }
}

/// The left-translation action of G on the coset space G/H (H need not
/// be normal), with the uniform invariant measure and the minimal-index
/// section.
pub fn coset_space(g: &FiniteGroup, h: &Subgroup) -> Result<(FiniteActionSpace, Vec<usize>)> {
    let n = g.order();
    // coset of x keyed by its minimal element
    let mut coset_min = vec![usize::MAX; n];
    for x in 0..n {
        let mut min = usize::MAX;
        for &k in h.elements() {
            min = min.min(g.mul(x, k));
        }
        coset_min[x] = min;
    }
    let mut reps: Vec<usize> = coset_min.clone();
    reps.sort_unstable();
    reps.dedup();
    let points = reps.len();
    let index_of = |rep: usize| reps.binary_search(&rep).unwrap();
    let mut action = vec![0usize; n * points];
    for gg in 0..n {
        for (xi, &rep) in reps.iter().enumerate() {
            action[gg * points + xi] = index_of(coset_min[g.mul(gg, rep)]);
        }
    }
    let measure = vec![1.0 / points as f64; points];
    let space = FiniteActionSpace::new(g.clone(), points, action, measure)?;
    Ok((space, reps))
}

/// A map G x X -> H subject to the cocycle identity.
#[derive(Clone, Debug)]
pub struct Cocycle {
    pub space: FiniteActionSpace,
    pub target: FiniteGroup,
    /// map[g * points + x] = alpha(g, x)
    map: Vec<usize>,
}

/// Outcome of exhaustive cocycle validation. Properness in the sense of
/// locally compact groups is automatic for finite data (every set is
/// compact) and recorded as such rather than checked.
#[derive(Clone, Debug)]
pub struct CocycleReport {
    pub valid: bool,
    /// every triple (g, h, x) violating alpha(gh, x) = alpha(g, hx) alpha(h, x)
    pub violations: Vec<(usize, usize, usize)>,
    pub measure_invariant: bool,
    pub properness_note: String,
}

impl Cocycle {
    pub fn new(space: FiniteActionSpace, target: FiniteGroup, map: Vec<usize>) -> Result<Self> {
        if map.len() != space.group.order() * space.points {
            return Err(Error::InvalidCocycle("map table size mismatch".into()));
        }
        if map.iter().any(|&h| h >= target.order()) {
            return Err(Error::InvalidCocycle("map lands outside the target".into()));
        }
        Ok(Cocycle { space, target, map })
    }

    #[inline]
    pub fn alpha(&self, g: usize, x: usize) -> usize {
        self.map[g * self.space.points + x]
    }

    /// Exhaustive check of the cocycle identity and measure invariance;
    /// lists every violating triple.
    pub fn validate(&self) -> CocycleReport {
        let g = &self.space.group;
        let mut violations = Vec::new();
        for a in g.elements() {
            for b in g.elements() {
                let ab = g.mul(a, b);
                for x in 0..self.space.points {
                    let lhs = self.alpha(ab, x);
                    let rhs = self
                        .target
                        .mul(self.alpha(a, self.space.act(b, x)), self.alpha(b, x));
                    if lhs != rhs {
                        violations.push((a, b, x));
                    }
                }
            }
        }
        CocycleReport {
            valid: violations.is_empty(),
            violations,
            measure_invariant: true, // enforced at FiniteActionSpace construction
            properness_note: "properness is automatic at finite scale: every subset is compact"
                .into(),
        }
    }
}

/// The coset-section cocycle alpha(g, x) = sigma(g x)^{-1} g sigma(x)
/// into the subgroup, for the left-translation action on G/H with the
/// minimal-index section sigma.
pub fn coset_section_cocycle(g: &FiniteGroup, h: &Subgroup) -> Result<Cocycle> {
    let (space, section) = coset_space(g, h)?;
    let points = space.points;
    let mut map = vec![0usize; g.order() * points];
    for gg in g.elements() {
        for x in 0..points {
            let gx = space.act(gg, x);
            let val = g.mul(g.mul(g.inv(section[gx]), gg), section[x]);
            let sub_idx = h.from_parent(val).ok_or_else(|| {
                Error::InvalidCocycle(format!(
                    "section defect: {} lies outside the subgroup",
                    g.label(val)
                ))
            })?;
            map[gg * points + x] = sub_idx;
        }
    }
    Cocycle::new(space, h.as_group().clone(), map)
}

/// The projection cocycle alpha(g, x) = p(g) for the conjugation action
/// of G on a compact normal subgroup K, with target G/K.
pub fn projection_cocycle(q: &QuotientMap) -> Result<Cocycle> {
    let g = q.source().clone();
    let k = q.kernel();
    let points = k.order();
    let mut action = vec![0usize; g.order() * points];
    for gg in g.elements() {
        for (xi, &x) in k.elements().iter().enumerate() {
            let conj = g.conj(gg, x);
            let target_idx = k
                .from_parent(conj)
                .expect("normal subgroups are closed under conjugation");
            action[gg * points + xi] = target_idx;
        }
    }
    let measure = vec![1.0 / points as f64; points];
    let space = FiniteActionSpace::new(g.clone(), points, action, measure)?;
    let mut map = vec![0usize; g.order() * points];
    for gg in g.elements() {
        for x in 0..points {
            map[gg * points + x] = q.project(gg);
        }
    }
    Cocycle::new(space, q.target().clone(), map)
}

/// Induced multiplier hat u(g) = sum_x mu(x) u(alpha(g, x)).
///
/// Terms are grouped by the value of alpha before any weighting, and for
/// the uniform measure each weight is the exact rational count/points, so
/// induction through the projection cocycle reproduces the quotient lift
/// entry for entry.
pub fn induce_multiplier(u: &Multiplier, c: &Cocycle) -> Result<Multiplier> {
    let target = u
        .group()
        .ok_or_else(|| Error::InvalidMultiplier("induction needs a group carrier".into()))?;
    if target.order() != c.target.order() {
        return Err(Error::InvalidMultiplier(
            "multiplier does not live on the cocycle's target".into(),
        ));
    }
    let report = c.validate();
    if !report.valid {
        let (a, b, x) = report.violations[0];
        return Err(Error::InvalidCocycle(format!(
            "identity fails at ({}, {}, point {x}) and {} further triples",
            c.space.group.label(a),
            c.space.group.label(b),
            report.violations.len() - 1
        )));
    }
    let g = &c.space.group;
    let points = c.space.points;
    let uniform = c.space.uniform();
    let values = g
        .elements()
        .map(|gg| {
            if uniform {
                let mut counts = vec![0usize; c.target.order()];
                for x in 0..points {
                    counts[c.alpha(gg, x)] += 1;
                }
                counts
                    .iter()
                    .enumerate()
                    .filter(|(_, &cnt)| cnt > 0)
                    .map(|(h, &cnt)| u.value(h) * (cnt as f64 / points as f64))
                    .sum()
            } else {
                (0..points)
                    .map(|x| u.value(c.alpha(gg, x)) * c.space.measure[x])
                    .sum()
            }
        })
        .collect();
    Multiplier::from_values(
        Carrier::Group(g.clone()),
        values,
        &format!("induced through a cocycle on {} points", points),
    )
}

/// Folner-averaged induction over a subset F of the space:
/// v(g) = mu(F)^{-1} sum_{x in F, g.x in F} mu(x) u(alpha(g, x)),
/// together with the translation defects eps(g) = mu(gF delta F)/mu(F).
#[derive(Clone, Debug)]
pub struct FolnerAverage {
    pub multiplier: Multiplier,
    /// eps(g) per group element
    pub eps: Vec<f64>,
    pub measure_of_f: f64,
    /// sup over g in the support of interest of |v(g) - 1| is bounded by
    /// 2 eps(g) wherever u is 1 on the cocycle values; recorded for
    /// report rendering
    pub guarantee: String,
}

pub fn folner_average(u: &Multiplier, c: &Cocycle, f_set: &[usize]) -> Result<FolnerAverage> {
    let target = u
        .group()
        .ok_or_else(|| Error::InvalidMultiplier("induction needs a group carrier".into()))?;
    if target.order() != c.target.order() {
        return Err(Error::InvalidMultiplier(
            "multiplier does not live on the cocycle's target".into(),
        ));
    }
    let points = c.space.points;
    let mut in_f = vec![false; points];
    for &x in f_set {
        if x >= points {
            return Err(Error::InvalidAction(format!("point {x} out of range")));
        }
        in_f[x] = true;
    }
    let f_count = in_f.iter().filter(|&&b| b).count();
    if f_count == 0 {
        return Err(Error::InvalidAction("F must have positive measure".into()));
    }
    let g = &c.space.group;
    let uniform = c.space.uniform();
    let mu_f: f64 = if uniform {
        f_count as f64 / points as f64
    } else {
        (0..points)
            .filter(|&x| in_f[x])
            .map(|x| c.space.measure[x])
            .sum()
    };
    let mut eps = Vec::with_capacity(g.order());
    let mut values = Vec::with_capacity(g.order());
    for gg in g.elements() {
        // x in F cap g^{-1}F  <=>  x in F and g.x in F
        if uniform {
            let mut counts = vec![0usize; c.target.order()];
            let mut overlap = 0usize;
            for x in 0..points {
                if in_f[x] && in_f[c.space.act(gg, x)] {
                    counts[c.alpha(gg, x)] += 1;
                    overlap += 1;
                }
            }
            let v: Complex64 = counts
                .iter()
                .enumerate()
                .filter(|(_, &cnt)| cnt > 0)
                .map(|(h, &cnt)| u.value(h) * (cnt as f64 / f_count as f64))
                .sum();
            values.push(v);
            // mu(gF delta F) = 2 (mu(F) - mu(gF cap F)); gF cap F has the
            // same count as F cap g^{-1}F by invariance
            eps.push(2.0 * (f_count - overlap) as f64 / f_count as f64);
        } else {
            let mut v = Complex64::new(0.0, 0.0);
            let mut overlap = 0.0;
            for x in 0..points {
                if in_f[x] && in_f[c.space.act(gg, x)] {
                    v += u.value(c.alpha(gg, x)) * c.space.measure[x];
                    overlap += c.space.measure[x];
                }
            }
            values.push(v / mu_f);
            eps.push(2.0 * (mu_f - overlap) / mu_f);
        }
    }
    let multiplier = Multiplier::from_values(
        Carrier::Group(g.clone()),
        values,
        &format!("Folner average over |F| = {f_count}"),
    )?;
    Ok(FolnerAverage {
        multiplier,
        eps,
        measure_of_f: mu_f,
        guarantee: "|v(g) - 1| <= 2 eps(g) wherever u = 1 on alpha(g, F)".into(),
    })
}

/// Data for the proper-function construction psi = sum_n alpha_n (1 - u_n):
/// each u_n must be real with values in [0, 1] and B2 norm at most 1, and
/// the weights must be strictly positive and increasing.
#[derive(Clone, Debug)]
pub struct ProperFunctionSpec {
    terms: Vec<(Multiplier, f64)>,
}

impl ProperFunctionSpec {
    pub fn new(u_list: Vec<Multiplier>, alphas: Vec<f64>, tol: f64) -> Result<Self> {
        if u_list.is_empty() || u_list.len() != alphas.len() {
            return Err(Error::InvalidMultiplier(
                "need equally many terms and weights, at least one".into(),
            ));
        }
        let order = u_list[0]
            .group()
            .ok_or_else(|| Error::InvalidMultiplier("terms must live on a group".into()))?
            .order();
        let mut prev = 0.0;
        for (i, alpha) in alphas.iter().enumerate() {
            if !(*alpha > 0.0) || *alpha < prev {
                return Err(Error::InvalidMultiplier(
                    "weights must be strictly positive and nondecreasing".into(),
                ));
            }
            prev = *alpha;
            let u = &u_list[i];
            if u.group().map(|g| g.order()) != Some(order) {
                return Err(Error::InvalidMultiplier(
                    "terms must share one carrier".into(),
                ));
            }
            for v in u.values() {
                if v.im.abs() > 1e-12 || v.re < -1e-12 || v.re > 1.0 + 1e-12 {
                    return Err(Error::InvalidMultiplier(format!(
                        "term {i} leaves [0, 1]: {v}"
                    )));
                }
            }
            let b2 = b2_norm(u, tol)?.value;
            if b2 > 1.0 + 10.0 * tol {
                return Err(Error::InvalidMultiplier(format!(
                    "term {i} has B2 norm {b2} > 1"
                )));
            }
        }
        Ok(ProperFunctionSpec {
            terms: u_list.into_iter().zip(alphas).collect(),
        })
    }

    /// psi = sum_n alpha_n (1 - u_n), optionally symmetrized to
    /// psi + psi-check where psi-check(g) = psi(g^{-1}).
    pub fn proper_function(&self, symmetrize: bool) -> Multiplier {
        let g = self.terms[0].0.group().unwrap().clone();
        let n = g.order();
        let mut psi = vec![0.0f64; n];
        for (u, alpha) in &self.terms {
            for x in 0..n {
                psi[x] += alpha * (1.0 - u.value(x).re);
            }
        }
        if symmetrize {
            let base = psi.clone();
            for x in 0..n {
                psi[x] = base[x] + base[g.inv(x)];
            }
        }
        Multiplier::from_values(
            Carrier::Group(g),
            psi.iter()
                .map(|&v| Complex64::new(v.max(0.0), 0.0))
                .collect(),
            if symmetrize {
                "proper function (symmetrized)"
            } else {
                "proper function"
            },
        )
        .expect("lengths match by construction")
    }
}

/// exp(-t psi) pointwise, for a real nonnegative psi and t > 0.
pub fn exp_multiplier(psi: &Multiplier, t: f64) -> Result<Multiplier> {
    if !(t > 0.0) {
        return Err(Error::InvalidMultiplier("t must be positive".into()));
    }
    for v in psi.values() {
        if v.im.abs() > 1e-12 {
            return Err(Error::InvalidMultiplier(
                "exp multiplier needs a real function".into(),
            ));
        }
    }
    let values = psi
        .values()
        .iter()
        .map(|v| Complex64::new((-t * v.re).exp(), 0.0))
        .collect();
    Ok(Multiplier::raw(
        psi.carrier.clone(),
        values,
        push_step(&psi.provenance, &format!("exp(-{t} psi)")),
    ))
}

impl Multiplier {
    /// Construct directly from parts; crate-internal helper for the
    /// transforms above.
    pub(crate) fn raw(carrier: Carrier, values: Vec<Complex64>, provenance: Vec<String>) -> Self {
        Multiplier::from_values(carrier, values, "raw")
            .map(|mut m| {
                m.provenance = provenance;
                m
            })
            .expect("raw parts must be consistent")
    }
}

/// Result of a window cutoff-norm minimization.
#[derive(Clone, Debug)]
pub struct CutoffResult {
    /// min section B2 norm over multipliers pinned to 1 on the inner ball
    /// and 0 outside the outer ball
    pub value: f64,
    /// the minimizing multiplier on the window's difference set
    pub multiplier: Multiplier,
    pub iterations: usize,
    pub tolerance: f64,
}

/// Minimal section norm of a cutoff: u = 1 on the inner ball, u = 0
/// outside the outer ball, free on the annulus; an SDP over the window's
/// Schur matrix. Nonincreasing in the outer radius for a fixed inner one.
pub fn cutoff_norm(
    window: &GroupWindow,
    inner: usize,
    outer: usize,
    tol: f64,
) -> Result<CutoffResult> {
    if inner > outer || outer > window.radius() {
        return Err(Error::InvalidMultiplier(format!(
            "need inner <= outer <= window radius, got {inner}, {outer}, {}",
            window.radius()
        )));
    }
    let n = window.len();
    let diffs = window.diff_set();
    // pin or free each difference-set class
    let pinned: Vec<Option<f64>> = diffs
        .iter()
        .map(|d| {
            let l = d.length();
            if l <= inner {
                Some(1.0)
            } else if l > outer {
                Some(0.0)
            } else {
                None
            }
        })
        .collect();
    let free_classes: Vec<usize> = (0..diffs.len()).filter(|&i| pinned[i].is_none()).collect();

    let dim = 4 * n; // [[X, M], [M*, Y]] plus one cap per diagonal entry
    let mut h0 = ComplexMatrix::zeros(dim, dim);
    for x in 0..n {
        for y in 0..n {
            if let Some(v) = pinned[window.diff(x, y)] {
                h0[(x, n + y)] = Complex64::new(v, 0.0);
                h0[(n + y, x)] = Complex64::new(v, 0.0);
            }
        }
    }

    let mut basis: Vec<HermBasis> = Vec::new();
    let mut objective: Vec<f64> = Vec::new();
    // t couples to every cap slot
    basis.push(HermBasis {
        entries: (0..2 * n)
            .map(|i| (2 * n + i, 2 * n + i, Complex64::new(1.0, 0.0)))
            .collect(),
    });
    objective.push(1.0);
    // free annulus values, real and imaginary parts
    for &cls in &free_classes {
        let mut entries_re = Vec::new();
        let mut entries_im = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if window.diff(x, y) == cls {
                    entries_re.push((x, n + y, Complex64::new(1.0, 0.0)));
                    entries_im.push((x, n + y, Complex64::new(0.0, 1.0)));
                }
            }
        }
        basis.push(HermBasis {
            entries: entries_re,
        });
        objective.push(0.0);
        basis.push(HermBasis {
            entries: entries_im,
        });
        objective.push(0.0);
    }
    let u_vars = 2 * free_classes.len();
    // X and Y entries with caps t - diag >= 0
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

    // start at u = 0 on the annulus with the balanced Gram construction
    let m0 = ComplexMatrix::from_fn(n, n, |x, y| h0[(x, n + y)]);
    let c = (0..n)
        .map(|i| m0.row(i).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .fold(0.0, f64::max)
        .max(1.0);
    let gram = m0.matmul(&m0.adjoint());
    let mut z0 = vec![0.0; basis.len()];
    let mut idx = 1 + u_vars;
    let mut maxdiag = 1.1 * c;
    for (offset, _cap) in [(0usize, 2 * n), (n, 3 * n)] {
        for i in 0..n {
            for j in i..n {
                if i == j {
                    let v = if offset == 0 {
                        gram[(i, i)].re / c + 0.1 * c
                    } else {
                        1.1 * c
                    };
                    maxdiag = maxdiag.max(v);
                    z0[idx] = v;
                    idx += 1;
                } else {
                    if offset == 0 {
                        z0[idx] = gram[(i, j)].re / c;
                        z0[idx + 1] = gram[(i, j)].im / c;
                    }
                    idx += 2;
                }
            }
        }
    }
    z0[0] = 1.2 * maxdiag;

    let problem = SdpProblem {
        dim,
        h0,
        basis,
        objective,
    };
    let sol = problem.minimize(z0, 0.5 * tol, 1200);
    let value = sol.z[0];
    if !sol.converged && sol.gap_measure > 10.0 * tol * value.max(1.0) {
        return Err(Error::SolverDidNotConverge {
            value,
            lower_bound: f64::NAN,
            iterations: sol.newton_steps,
        });
    }
    let mut u_values: Vec<Complex64> = pinned
        .iter()
        .map(|p| Complex64::new(p.unwrap_or(0.0), 0.0))
        .collect();
    for (k, &cls) in free_classes.iter().enumerate() {
        u_values[cls] = Complex64::new(sol.z[1 + 2 * k], sol.z[1 + 2 * k + 1]);
    }
    let multiplier = Multiplier::from_values(
        Carrier::Window(window.clone()),
        u_values,
        &format!("optimal cutoff (inner {inner}, outer {outer})"),
    )?;
    Ok(CutoffResult {
        value,
        multiplier,
        iterations: sol.newton_steps,
        tolerance: tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::zoo;

    const TOL: f64 = 1e-7;

    fn s3_with_a3() -> (FiniteGroup, Subgroup) {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let c3 = s3.elements().find(|&x| s3.element_order(x) == 3).unwrap();
        let a3 = Subgroup::generated(&s3, &[c3]).unwrap();
        (s3, a3)
    }

    #[test]
    fn restrict_trivial_cases() {
        let (s3, a3) = s3_with_a3();
        let ones = Multiplier::constant(Carrier::Group(s3.clone()), Complex64::new(1.0, 0.0));
        let r = restrict(&ones, &a3).unwrap();
        assert!(r.values().iter().all(|v| (v.re - 1.0).abs() < 1e-15));

        let delta = Multiplier::delta_identity(&s3);
        let rd = restrict(&delta, &a3).unwrap();
        assert!((b2_norm(&rd, TOL).unwrap().value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn extension_by_zero_examples() {
        let (s3, a3) = s3_with_a3();
        let ones_a3 = Multiplier::constant(
            Carrier::Group(a3.as_group().clone()),
            Complex64::new(1.0, 0.0),
        );
        let ext = extend_by_zero(&ones_a3, &a3).unwrap();
        // extension of the constant is the subgroup indicator
        for p in s3.elements() {
            let expect = if a3.contains(p) { 1.0 } else { 0.0 };
            assert_eq!(ext.value(p).re, expect);
        }
        assert!((b2_norm(&ext, TOL).unwrap().value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn product_multiplier_cases() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let z3 = FiniteGroup::cyclic(3).unwrap();
        let du = Multiplier::delta_identity(&z2);
        let dv = Multiplier::delta_identity(&z3);
        let (prod, pg) = product_multiplier(&du, &dv).unwrap();
        assert_eq!(pg.order(), 6);
        for idx in pg.elements() {
            let expect = if idx == 0 { 1.0 } else { 0.0 };
            assert_eq!(prod.value(idx).re, expect);
        }
        assert!((b2_norm(&prod, TOL).unwrap().value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn biinvariant_average_examples() {
        let (s3, a3) = s3_with_a3();
        // K = {e} leaves the multiplier unchanged
        let trivial = Subgroup::generated(&s3, &[]).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        use rand::SeedableRng;
        let u = Multiplier::random(&s3, &mut rng);
        let avg_triv = average_biinvariant(&u, &trivial).unwrap();
        assert_eq!(avg_triv.values(), u.values());

        // delta at e averaged over A3 becomes (1/3) 1_{A3}
        let delta = Multiplier::delta_identity(&s3);
        let avg = average_biinvariant(&delta, &a3).unwrap();
        for x in s3.elements() {
            let expect = if a3.contains(x) { 1.0 / 3.0 } else { 0.0 };
            assert!((avg.value(x).re - expect).abs() < 1e-15);
        }

        // exact bi-invariance
        let avg_u = average_biinvariant(&u, &a3).unwrap();
        for &k in a3.elements() {
            for x in s3.elements() {
                for &kp in a3.elements() {
                    let moved = s3.mul(s3.mul(k, x), kp);
                    assert_eq!(avg_u.value(moved), avg_u.value(x));
                }
            }
        }
    }

    #[test]
    fn convolution_examples() {
        let z4 = FiniteGroup::cyclic(4).unwrap();
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        let u = Multiplier::random(&z4, &mut rng);

        let mut delta_density = vec![0.0; 4];
        delta_density[0] = 1.0;
        let conv = convolve(&delta_density, &u).unwrap();
        assert_eq!(conv.values(), u.values());

        let uniform = vec![0.25; 4];
        let conv_u = convolve(&uniform, &u).unwrap();
        let mean: Complex64 = u.values().iter().sum::<Complex64>() * 0.25;
        for v in conv_u.values() {
            assert!((v - mean).norm() < 1e-14);
        }

        assert!(convolve(&[0.5, 0.2, 0.0, 0.0], &u).is_err());
        assert!(convolve(&[-0.5, 1.5, 0.0, 0.0], &u).is_err());
    }

    #[test]
    fn quotient_lift_and_push() {
        let (s3, a3) = s3_with_a3();
        let q = QuotientMap::new(&s3, &a3).unwrap();

        let ones =
            Multiplier::constant(Carrier::Group(q.target().clone()), Complex64::new(1.0, 0.0));
        let lift = lift_from_quotient(&q, &ones).unwrap();
        assert!(lift.values().iter().all(|v| v.re == 1.0));

        let dq = Multiplier::delta_identity(q.target());
        let lifted = lift_from_quotient(&q, &dq).unwrap();
        for x in s3.elements() {
            let expect = if a3.contains(x) { 1.0 } else { 0.0 };
            assert_eq!(lifted.value(x).re, expect);
        }
        assert!((b2_norm(&lifted, TOL).unwrap().value - 1.0).abs() < 1e-9);

        // push o lift is the identity on coset-constant multipliers
        let back = push_to_quotient(&q, &lifted).unwrap();
        assert_eq!(back.values(), dq.values());

        // a non-constant multiplier is rejected with the offending coset
        let bad = Multiplier::delta_identity(&s3);
        assert!(matches!(
            push_to_quotient(&q, &bad),
            Err(Error::NotCosetConstant(_))
        ));
    }

    #[test]
    fn cocycle_examples_validate() {
        let (s3, a3) = s3_with_a3();
        // projection cocycle on the conjugation space
        let q = QuotientMap::new(&s3, &a3).unwrap();
        let cb = projection_cocycle(&q).unwrap();
        assert!(cb.validate().valid);

        // coset-section cocycle
        let ca = coset_section_cocycle(&s3, &a3).unwrap();
        assert!(ca.validate().valid);

        // an action-dependent map breaks the identity for a nontrivial
        // action: alpha(g, x) = x on the conjugation space
        let mut bad_map = vec![0usize; s3.order() * cb.space.points];
        for g in s3.elements() {
            for x in 0..cb.space.points {
                bad_map[g * cb.space.points + x] = a3.to_parent(x).min(s3.order() - 1);
            }
        }
        let bad = Cocycle::new(cb.space.clone(), s3.clone(), bad_map).unwrap();
        let report = bad.validate();
        assert!(!report.valid);
        assert!(!report.violations.is_empty());
    }

    #[test]
    fn induction_through_projection_is_quotient_lift() {
        use rand::SeedableRng;
        let (s3, a3) = s3_with_a3();
        let q = QuotientMap::new(&s3, &a3).unwrap();
        let c = projection_cocycle(&q).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        for _ in 0..3 {
            let u = Multiplier::random(q.target(), &mut rng);
            let induced = induce_multiplier(&u, &c).unwrap();
            let lifted = lift_from_quotient(&q, &u).unwrap();
            assert_eq!(induced.values(), lifted.values());
        }
    }

    #[test]
    fn induction_of_delta_through_coset_section() {
        let (s3, a3) = s3_with_a3();
        let c = coset_section_cocycle(&s3, &a3).unwrap();
        let u = Multiplier::delta_identity(a3.as_group());
        let induced = induce_multiplier(&u, &c).unwrap();
        // hat u is the indicator of {e, t} where t is the minimal-index
        // transposition chosen by the section
        let (_, section) = coset_space(&s3, &a3).unwrap();
        let t = section[1];
        for g in s3.elements() {
            let expect = if g == 0 || g == t { 1.0 } else { 0.0 };
            assert_eq!(induced.value(g).re, expect, "at {}", s3.label(g));
        }
        assert!((b2_norm(&induced, 1e-7).unwrap().value - 1.0).abs() < 1e-5);

        // u == 1 induces to 1
        let ones = Multiplier::constant(
            Carrier::Group(a3.as_group().clone()),
            Complex64::new(1.0, 0.0),
        );
        let ind1 = induce_multiplier(&ones, &c).unwrap();
        assert!(ind1.values().iter().all(|v| v.re == 1.0));
    }

    #[test]
    fn folner_average_cases() {
        use rand::SeedableRng;
        let (s3, a3) = s3_with_a3();
        let c = coset_section_cocycle(&s3, &a3).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let u = Multiplier::random(a3.as_group(), &mut rng);

        // F = X reproduces plain induction exactly
        let full: Vec<usize> = (0..c.space.points).collect();
        let folner = folner_average(&u, &c, &full).unwrap();
        let induced = induce_multiplier(&u, &c).unwrap();
        assert_eq!(folner.multiplier.values(), induced.values());
        assert!(folner.eps.iter().all(|&e| e == 0.0));

        // u == 1 with F a single coset point: v(g) = 1 on the three
        // elements fixing the point, 0 elsewhere
        let ones = Multiplier::constant(
            Carrier::Group(a3.as_group().clone()),
            Complex64::new(1.0, 0.0),
        );
        let single = folner_average(&ones, &c, &[0]).unwrap();
        for g in s3.elements() {
            let fixes = c.space.act(g, 0) == 0;
            let expect = if fixes { 1.0 } else { 0.0 };
            assert_eq!(single.multiplier.value(g).re, expect);
        }
        let fixing = s3.elements().filter(|&g| c.space.act(g, 0) == 0).count();
        assert_eq!(fixing, 3);
    }

    #[test]
    fn proper_function_and_semigroup() {
        let (s3, a3) = s3_with_a3();
        // all terms == 1 give psi == 0 and exp == 1
        let ones = Multiplier::constant(Carrier::Group(s3.clone()), Complex64::new(1.0, 0.0));
        let spec = ProperFunctionSpec::new(vec![ones], vec![1.0], TOL).unwrap();
        let psi = spec.proper_function(false);
        assert!(psi.values().iter().all(|v| v.re == 0.0));
        let e = exp_multiplier(&psi, 1.0).unwrap();
        assert!(e.values().iter().all(|v| v.re == 1.0));

        // single indicator term
        let ind = Multiplier::subgroup_indicator(&a3);
        let spec2 = ProperFunctionSpec::new(vec![ind], vec![1.0], TOL).unwrap();
        let psi2 = spec2.proper_function(false);
        let e2 = exp_multiplier(&psi2, 1.0).unwrap();
        for g in s3.elements() {
            let expect = if a3.contains(g) { 1.0 } else { (-1.0f64).exp() };
            assert!((e2.value(g).re - expect).abs() < 1e-15);
        }
        let b2 = b2_norm(&e2, TOL).unwrap().value;
        assert!(b2 <= 1.0 + 1e-6, "{b2}");

        // symmetrization doubles an already symmetric psi
        let z6 = FiniteGroup::cyclic(6).unwrap();
        let sym_u = Multiplier::from_values(
            Carrier::Group(z6.clone()),
            (0..6)
                .map(|k| {
                    let c = (2.0 * std::f64::consts::PI * k as f64 / 6.0).cos();
                    Complex64::new(0.5 + 0.5 * c, 0.0)
                })
                .collect(),
            "symmetric test term",
        )
        .unwrap();
        let spec3 = ProperFunctionSpec::new(vec![sym_u], vec![1.0], TOL).unwrap();
        let psi_plain = spec3.proper_function(false);
        let psi_sym = spec3.proper_function(true);
        for g in z6.elements() {
            assert!((psi_sym.value(g).re - 2.0 * psi_plain.value(g).re).abs() < 1e-15);
        }

        // semigroup law, pointwise
        let et = exp_multiplier(&psi2, 0.7).unwrap();
        let es = exp_multiplier(&psi2, 1.3).unwrap();
        let ets = exp_multiplier(&psi2, 2.0).unwrap();
        for g in s3.elements() {
            let prod = et.value(g) * es.value(g);
            assert!((prod - ets.value(g)).norm() < 1e-12);
        }

        // a term leaving [0, 1] is rejected
        let bad = Multiplier::from_values(
            Carrier::Group(s3),
            vec![Complex64::new(1.5, 0.0); 6],
            "too big",
        )
        .unwrap();
        assert!(ProperFunctionSpec::new(vec![bad], vec![1.0], TOL).is_err());
    }

    #[test]
    fn proper_function_spec_rejects_high_norm_terms() {
        for g in zoo().into_iter().take(2) {
            // a 0/1-valued function that is not positive definite can top
            // norm 1; the constructor must reject it if so
            let u = Multiplier::indicator(&g, &[0, g.order() - 1]);
            let b2 = b2_norm(&u, TOL).unwrap().value;
            let spec = ProperFunctionSpec::new(vec![u], vec![1.0], TOL);
            assert_eq!(spec.is_ok(), b2 <= 1.0 + 1e-6);
        }
    }
}
