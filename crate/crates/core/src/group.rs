//! Exact finite group arithmetic: Cayley tables, subgroups, quotients and
//! direct products.
//!
//! All group data is table driven with dense integer element indices, so
//! multiplication is O(1) and every downstream matrix can be indexed by
//! elements directly. Index 0 is always the identity. Construction
//! verifies the group axioms exhaustively and fails loudly with a witness
//! when a table is not a group.

use std::collections::HashMap;

use crate::error::Error;
use crate::Result;

/// A finite group given by its complete multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<u16>,
    inv: Vec<u16>,
    labels: Vec<String>,
    name: String,
}

impl FiniteGroup {
    /// Build and verify a group from an explicit Cayley table.
    ///
    /// The identity may sit at any index in the input; elements are
    /// re-indexed so that it ends up at index 0.
    pub fn from_table(name: &str, labels: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        if labels.len() != n {
            return Err(Error::InvalidGroup(format!(
                "{} labels for {} elements",
                labels.len(),
                n
            )));
        }
        if n > u16::MAX as usize {
            return Err(Error::InvalidGroup(format!("order {n} too large")));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidGroup(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for &v in row {
                if v >= n {
                    return Err(Error::InvalidGroup(format!(
                        "entry {v} out of range in row {i}"
                    )));
                }
            }
        }

        // locate the identity
        let mut identity = None;
        for e in 0..n {
            if (0..n).all(|x| table[e][x] == x && table[x][e] == x) {
                identity = Some(e);
                break;
            }
        }
        let e = identity.ok_or_else(|| Error::InvalidGroup("no identity element".into()))?;

        // re-index so the identity is 0 (swap 0 <-> e)
        let perm: Vec<usize> = (0..n)
            .map(|i| {
                if i == 0 {
                    e
                } else if i == e {
                    0
                } else {
                    i
                }
            })
            .collect();
        let inv_perm = perm.clone(); // a transposition is its own inverse
        let mut mul = vec![0u16; n * n];
        for a in 0..n {
            for b in 0..n {
                mul[a * n + b] = inv_perm[table[perm[a]][perm[b]]] as u16;
            }
        }
        let labels: Vec<String> = (0..n).map(|i| labels[perm[i]].clone()).collect();

        let g = FiniteGroup {
            order: n,
            mul,
            inv: vec![0; n],
            labels,
            name: name.to_string(),
        };
        g.finish_verified()
    }

    /// Internal constructor for tables that are correct by construction;
    /// still runs the full axiom check.
    fn from_raw(name: String, labels: Vec<String>, mul: Vec<u16>, order: usize) -> Result<Self> {
        let g = FiniteGroup {
            order,
            mul,
            inv: vec![0; order],
            labels,
            name,
        };
        g.finish_verified()
    }

    fn finish_verified(mut self) -> Result<Self> {
        let n = self.order;
        // identity at 0
        for x in 0..n {
            if self.mul[x] as usize != x || self.mul[x * n] as usize != x {
                return Err(Error::InvalidGroup(format!(
                    "element 0 ({}) is not an identity",
                    self.labels[0]
                )));
            }
        }
        // inverses
        let mut inv = vec![None; n];
        for x in 0..n {
            for y in 0..n {
                if self.mul[x * n + y] == 0 && self.mul[y * n + x] == 0 {
                    inv[x] = Some(y as u16);
                    break;
                }
            }
        }
        for (x, i) in inv.iter().enumerate() {
            match i {
                Some(v) => self.inv[x] = *v,
                None => {
                    return Err(Error::InvalidGroup(format!(
                        "element {} has no inverse",
                        self.labels[x]
                    )))
                }
            }
        }
        // associativity, exhaustively
        for x in 0..n {
            for y in 0..n {
                let xy = self.mul[x * n + y] as usize;
                for z in 0..n {
                    let yz = self.mul[y * n + z] as usize;
                    if self.mul[xy * n + z] != self.mul[x * n + yz] {
                        return Err(Error::InvalidGroup(format!(
                            "not associative at ({}, {}, {})",
                            self.labels[x], self.labels[y], self.labels[z]
                        )));
                    }
                }
            }
        }
        Ok(self)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn element_by_label(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn element_order(&self, x: usize) -> usize {
        let mut acc = x;
        let mut k = 1;
        while acc != 0 {
            acc = self.mul(acc, x);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        for a in 0..self.order {
            for b in (a + 1)..self.order {
                if self.mul(a, b) != self.mul(b, a) {
                    return false;
                }
            }
        }
        true
    }

    /// Conjugate: g x g^{-1}.
    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    /// Cyclic group of order n with addition mod n.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGroup("cyclic(0) is empty".into()));
        }
        let mut mul = vec![0u16; n * n];
        for a in 0..n {
            for b in 0..n {
                mul[a * n + b] = ((a + b) % n) as u16;
            }
        }
        let labels = (0..n).map(|i| i.to_string()).collect();
        Self::from_raw(format!("Z/{n}"), labels, mul, n)
    }

    /// Dihedral group of order 2n: rotations r^k and reflections s r^k.
    pub fn dihedral(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGroup("dihedral(0) is empty".into()));
        }
        let order = 2 * n;
        // index k in 0..n: r^k ; index n+k: s r^k
        let idx = |flip: bool, k: usize| if flip { n + k } else { k };
        let mut mul = vec![0u16; order * order];
        for a in 0..order {
            for b in 0..order {
                let (fa, ka) = (a >= n, a % n);
                let (fb, kb) = (b >= n, b % n);
                // (s^fa r^ka)(s^fb r^kb) = s^(fa xor fb) r^(kb + (-1)^fb ka)
                let k = if fb {
                    (n + kb - ka % n) % n
                } else {
                    (ka + kb) % n
                };
                mul[a * order + b] = idx(fa ^ fb, k) as u16;
            }
        }
        let labels: Vec<String> = (0..order)
            .map(|i| {
                let (f, k) = (i >= n, i % n);
                match (f, k) {
                    (false, 0) => "e".into(),
                    (false, 1) => "r".into(),
                    (false, k) => format!("r{k}"),
                    (true, 0) => "s".into(),
                    (true, 1) => "sr".into(),
                    (true, k) => format!("sr{k}"),
                }
            })
            .collect();
        Self::from_raw(format!("D{n}"), labels, mul, order)
    }

    /// Symmetric group on n letters, n <= 6. Elements are permutations in
    /// lexicographic one-line order, so the identity is index 0;
    /// composition is (p * q)(i) = p(q(i)).
    pub fn symmetric(n: usize) -> Result<Self> {
        if n == 0 || n > 6 {
            return Err(Error::InvalidGroup(format!(
                "symmetric({n}) unsupported; need 1 <= n <= 6"
            )));
        }
        let perms = permutations(n);
        let order = perms.len();
        let index: HashMap<Vec<u8>, usize> = perms
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        let mut mul = vec![0u16; order * order];
        for (a, pa) in perms.iter().enumerate() {
            for (b, pb) in perms.iter().enumerate() {
                let comp: Vec<u8> = (0..n).map(|i| pa[pb[i] as usize]).collect();
                mul[a * order + b] = index[&comp] as u16;
            }
        }
        let labels = perms.iter().map(|p| cycle_notation(p)).collect();
        Self::from_raw(format!("S{n}"), labels, mul, order)
    }

    /// Direct product with componentwise multiplication; the element
    /// (a, b) has index a * |H| + b, so coordinate projections are index
    /// arithmetic (see [`product_split`]).
    pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> Result<Self> {
        let n = g.order * h.order;
        if n > u16::MAX as usize {
            return Err(Error::InvalidGroup(format!("product order {n} too large")));
        }
        let mut mul = vec![0u16; n * n];
        for a1 in 0..g.order {
            for b1 in 0..h.order {
                let x = a1 * h.order + b1;
                for a2 in 0..g.order {
                    for b2 in 0..h.order {
                        let y = a2 * h.order + b2;
                        mul[x * n + y] = (g.mul(a1, a2) * h.order + h.mul(b1, b2)) as u16;
                    }
                }
            }
        }
        let labels = (0..n)
            .map(|x| format!("({},{})", g.labels[x / h.order], h.labels[x % h.order]))
            .collect();
        Self::from_raw(format!("{}x{}", g.name, h.name), labels, mul, n)
    }

    /// Graph distance from the identity in the Cayley graph generated by
    /// `gens` and their inverses.
    pub fn word_length(&self, gens: &[usize], g: usize) -> Result<usize> {
        let mut dist = vec![usize::MAX; self.order];
        dist[0] = 0;
        let mut queue = std::collections::VecDeque::new();
        queue.push_back(0usize);
        let mut step_set: Vec<usize> = gens.to_vec();
        step_set.extend(gens.iter().map(|&s| self.inv(s)));
        step_set.sort_unstable();
        step_set.dedup();
        while let Some(x) = queue.pop_front() {
            for &s in &step_set {
                let y = self.mul(x, s);
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        if dist[g] == usize::MAX {
            Err(Error::Unreachable(self.labels[g].clone()))
        } else {
            Ok(dist[g])
        }
    }
}

/// Coordinate projections of a direct-product index.
pub fn product_split(order_right: usize, idx: usize) -> (usize, usize) {
    (idx / order_right, idx % order_right)
}

fn permutations(n: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut cur: Vec<u8> = (0..n as u8).collect();
    heap_collect(&mut cur, n, &mut out);
    out.sort();
    out
}

fn heap_collect(cur: &mut Vec<u8>, k: usize, out: &mut Vec<Vec<u8>>) {
    if k == 1 {
        out.push(cur.clone());
        return;
    }
    for i in 0..k {
        heap_collect(cur, k - 1, out);
        if k.is_multiple_of(2) {
            cur.swap(i, k - 1);
        } else {
            cur.swap(0, k - 1);
        }
    }
}

fn cycle_notation(p: &[u8]) -> String {
    let n = p.len();
    let mut seen = vec![false; n];
    let mut parts = Vec::new();
    for start in 0..n {
        if seen[start] || p[start] as usize == start {
            seen[start] = true;
            continue;
        }
        let mut cyc = vec![start];
        seen[start] = true;
        let mut next = p[start] as usize;
        while next != start {
            seen[next] = true;
            cyc.push(next);
            next = p[next] as usize;
        }
        parts.push(format!(
            "({})",
            cyc.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join("")
        ));
    }
    if parts.is_empty() {
        "e".to_string()
    } else {
        parts.join("")
    }
}

/// A verified subgroup, carried together with its own group structure and
/// the index translations in both directions.
#[derive(Clone, Debug)]
pub struct Subgroup {
    parent: FiniteGroup,
    /// Parent indices of the subgroup elements, ascending (so the
    /// identity is first).
    elements: Vec<usize>,
    as_group: FiniteGroup,
    from_parent: Vec<Option<usize>>,
}

impl Subgroup {
    /// Smallest subgroup of `parent` containing `gens`.
    pub fn generated(parent: &FiniteGroup, gens: &[usize]) -> Result<Self> {
        for &g in gens {
            if g >= parent.order() {
                return Err(Error::InvalidGroup(format!(
                    "generator index {g} out of range"
                )));
            }
        }
        let mut in_set = vec![false; parent.order()];
        in_set[0] = true;
        for &g in gens {
            in_set[g] = true;
        }
        // close under multiplication (inverses follow in a finite group)
        loop {
            let members: Vec<usize> = (0..parent.order()).filter(|&i| in_set[i]).collect();
            let mut grew = false;
            for &a in &members {
                for &b in &members {
                    let c = parent.mul(a, b);
                    if !in_set[c] {
                        in_set[c] = true;
                        grew = true;
                    }
                }
            }
            if !grew {
                break;
            }
        }
        let elements: Vec<usize> = (0..parent.order()).filter(|&i| in_set[i]).collect();
        Self::from_elements(parent, elements)
    }

    /// Wrap an explicit element set (must be closed; verified).
    pub fn from_elements(parent: &FiniteGroup, mut elements: Vec<usize>) -> Result<Self> {
        elements.sort_unstable();
        elements.dedup();
        if elements.first() != Some(&0) {
            return Err(Error::InvalidGroup(
                "subgroup must contain the identity".into(),
            ));
        }
        let mut from_parent = vec![None; parent.order()];
        for (i, &e) in elements.iter().enumerate() {
            from_parent[e] = Some(i);
        }
        let m = elements.len();
        let mut table = vec![0u16; m * m];
        for (i, &a) in elements.iter().enumerate() {
            for (j, &b) in elements.iter().enumerate() {
                let c = parent.mul(a, b);
                let k = from_parent[c].ok_or_else(|| {
                    Error::InvalidGroup(format!(
                        "not closed: {} * {} = {} lies outside",
                        parent.label(a),
                        parent.label(b),
                        parent.label(c)
                    ))
                })?;
                table[i * m + j] = k as u16;
            }
        }
        let labels = elements
            .iter()
            .map(|&e| parent.label(e).to_string())
            .collect();
        let as_group =
            FiniteGroup::from_raw(format!("{}<{}>", parent.name(), m), labels, table, m)?;
        Ok(Subgroup {
            parent: parent.clone(),
            elements,
            as_group,
            from_parent,
        })
    }

    pub fn parent(&self) -> &FiniteGroup {
        &self.parent
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Parent indices of the members, ascending.
    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn as_group(&self) -> &FiniteGroup {
        &self.as_group
    }

    pub fn contains(&self, parent_idx: usize) -> bool {
        self.from_parent[parent_idx].is_some()
    }

    /// Parent index of subgroup element i.
    pub fn to_parent(&self, sub_idx: usize) -> usize {
        self.elements[sub_idx]
    }

    /// Subgroup index of a parent element, if it belongs.
    pub fn from_parent(&self, parent_idx: usize) -> Option<usize> {
        self.from_parent[parent_idx]
    }

    pub fn is_normal(&self) -> bool {
        self.normality_witness().is_none()
    }

    /// A conjugation pushing some member outside, if one exists.
    pub fn normality_witness(&self) -> Option<(usize, usize)> {
        for g in self.parent.elements() {
            for &x in &self.elements {
                if !self.contains(self.parent.conj(g, x)) {
                    return Some((g, x));
                }
            }
        }
        None
    }
}

/// A surjective homomorphism onto a quotient group with a fixed section.
#[derive(Clone, Debug)]
pub struct QuotientMap {
    source: FiniteGroup,
    kernel: Subgroup,
    target: FiniteGroup,
    /// source index -> target index
    projection: Vec<usize>,
    /// target index -> the minimal-index coset representative
    section: Vec<usize>,
}

impl QuotientMap {
    /// G / N for a normal subgroup N, with the minimal-index
    /// representative as the section.
    pub fn new(source: &FiniteGroup, kernel: &Subgroup) -> Result<Self> {
        if let Some((g, x)) = kernel.normality_witness() {
            return Err(Error::NotNormal {
                conjugator: source.label(g).to_string(),
                element: source.label(x).to_string(),
            });
        }
        let n = source.order();
        // coset of g: the set gN; keyed by its minimal element
        let mut coset_min = vec![usize::MAX; n];
        for g in 0..n {
            let mut min = usize::MAX;
            for &k in kernel.elements() {
                min = min.min(source.mul(g, k));
            }
            coset_min[g] = min;
        }
        let mut reps: Vec<usize> = coset_min.clone();
        reps.sort_unstable();
        reps.dedup();
        let order = reps.len();
        let rep_index: HashMap<usize, usize> =
            reps.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let projection: Vec<usize> = (0..n).map(|g| rep_index[&coset_min[g]]).collect();
        let mut table = vec![0u16; order * order];
        for (i, &a) in reps.iter().enumerate() {
            for (j, &b) in reps.iter().enumerate() {
                table[i * order + j] = projection[source.mul(a, b)] as u16;
            }
        }
        let labels = reps
            .iter()
            .map(|&r| format!("[{}]", source.label(r)))
            .collect();
        let target = FiniteGroup::from_raw(
            format!("{}/{}", source.name(), kernel.order()),
            labels,
            table,
            order,
        )?;
        Ok(QuotientMap {
            source: source.clone(),
            kernel: kernel.clone(),
            target,
            projection,
            section: reps,
        })
    }

    pub fn source(&self) -> &FiniteGroup {
        &self.source
    }

    pub fn kernel(&self) -> &Subgroup {
        &self.kernel
    }

    pub fn target(&self) -> &FiniteGroup {
        &self.target
    }

    pub fn project(&self, g: usize) -> usize {
        self.projection[g]
    }

    pub fn section(&self, c: usize) -> usize {
        self.section[c]
    }
}

/// The small finite groups every randomized suite draws from.
pub fn zoo() -> Vec<FiniteGroup> {
    vec![
        FiniteGroup::cyclic(2).unwrap(),
        FiniteGroup::cyclic(3).unwrap(),
        FiniteGroup::cyclic(4).unwrap(),
        FiniteGroup::symmetric(3).unwrap(),
        FiniteGroup::dihedral(4).unwrap(),
        FiniteGroup::direct_product(
            &FiniteGroup::cyclic(2).unwrap(),
            &FiniteGroup::cyclic(3).unwrap(),
        )
        .unwrap(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_two_squares_to_identity() {
        let g = FiniteGroup::cyclic(2).unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(g.mul(1, 1), 0);
    }

    #[test]
    fn symmetric_three_shape() {
        let g = FiniteGroup::symmetric(3).unwrap();
        assert_eq!(g.order(), 6);
        let involutions = g.elements().filter(|&x| x != 0 && g.mul(x, x) == 0).count();
        assert_eq!(involutions, 3);
        assert!(!g.is_abelian());
    }

    #[test]
    fn non_associative_table_rejected() {
        // 3x3 latin square with identity that is not a group
        // (Z/3 table with one pair of entries swapped breaks associativity)
        let table = vec![vec![0, 1, 2], vec![1, 0, 2], vec![2, 2, 1]];
        let labels = vec!["e".into(), "a".into(), "b".into()];
        let err = FiniteGroup::from_table("bad", labels, table).unwrap_err();
        let msg = format!("{err}");
        assert!(msg.contains("not a group"), "{msg}");
    }

    #[test]
    fn identity_reindexed_to_zero() {
        // Z/2 with identity at position 1
        let table = vec![vec![0, 1], vec![1, 0]];
        // here index 0 is the identity already; now shuffle
        let table2 = vec![vec![1, 0], vec![0, 1]]; // identity is index 1
        let g = FiniteGroup::from_table("z2", vec!["a".into(), "e".into()], table2).unwrap();
        assert_eq!(g.label(0), "e");
        assert_eq!(g.mul(1, 1), 0);
        let g1 = FiniteGroup::from_table("z2", vec!["e".into(), "a".into()], table).unwrap();
        assert_eq!(g1.label(0), "e");
    }

    #[test]
    fn subgroup_closure_cases() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let three_cycle = s3.elements().find(|&x| s3.element_order(x) == 3).unwrap();
        let a3 = Subgroup::generated(&s3, &[three_cycle]).unwrap();
        assert_eq!(a3.order(), 3);

        let trivial = Subgroup::generated(&s3, &[]).unwrap();
        assert_eq!(trivial.order(), 1);

        let z6 = FiniteGroup::cyclic(6).unwrap();
        let h = Subgroup::generated(&z6, &[2]).unwrap();
        assert_eq!(h.elements(), &[0, 2, 4]);
    }

    #[test]
    fn quotient_cases() {
        let s3 = FiniteGroup::symmetric(3).unwrap();
        let three_cycle = s3.elements().find(|&x| s3.element_order(x) == 3).unwrap();
        let a3 = Subgroup::generated(&s3, &[three_cycle]).unwrap();
        let q = QuotientMap::new(&s3, &a3).unwrap();
        assert_eq!(q.target().order(), 2);
        // projection o section = identity on target
        for c in q.target().elements() {
            assert_eq!(q.project(q.section(c)), c);
        }

        // G / {e} is an isomorphic copy
        let triv = Subgroup::generated(&s3, &[]).unwrap();
        let q2 = QuotientMap::new(&s3, &triv).unwrap();
        assert_eq!(q2.target().order(), 6);
        for g in s3.elements() {
            assert_eq!(q2.project(g), g);
        }

        // order-2 subgroups of S3 are not normal
        let transposition = s3
            .elements()
            .find(|&x| x != 0 && s3.element_order(x) == 2)
            .unwrap();
        let h2 = Subgroup::generated(&s3, &[transposition]).unwrap();
        assert!(matches!(
            QuotientMap::new(&s3, &h2),
            Err(Error::NotNormal { .. })
        ));
    }

    #[test]
    fn direct_product_cases() {
        let z2 = FiniteGroup::cyclic(2).unwrap();
        let z3 = FiniteGroup::cyclic(3).unwrap();
        let p = FiniteGroup::direct_product(&z2, &z3).unwrap();
        assert_eq!(p.order(), 6);
        // (1,1) has order 6, so the product is cyclic
        let idx_one_one = 3 + 1;
        assert_eq!(p.element_order(idx_one_one), 6);

        let e = FiniteGroup::cyclic(1).unwrap();
        let p2 = FiniteGroup::direct_product(&z3, &e).unwrap();
        assert_eq!(p2.order(), 3);
        for a in 0..3 {
            for b in 0..3 {
                assert_eq!(p2.mul(a, b), z3.mul(a, b));
            }
        }

        let s3 = FiniteGroup::symmetric(3).unwrap();
        assert_eq!(FiniteGroup::direct_product(&s3, &z2).unwrap().order(), 12);
    }

    #[test]
    fn word_length_bfs() {
        let z5 = FiniteGroup::cyclic(5).unwrap();
        assert_eq!(z5.word_length(&[1], 3).unwrap(), 2); // -1 twice
        assert_eq!(z5.word_length(&[1], 0).unwrap(), 0);
        let z4 = FiniteGroup::cyclic(4).unwrap();
        assert!(matches!(
            z4.word_length(&[2], 1),
            Err(Error::Unreachable(_))
        ));
    }

    #[test]
    fn symmetric_out_of_range_rejected() {
        assert!(FiniteGroup::symmetric(7).is_err());
        assert!(FiniteGroup::symmetric(0).is_err());
    }

    #[test]
    fn zoo_members_verified() {
        let groups = zoo();
        assert_eq!(groups.len(), 6);
        let orders: Vec<usize> = groups.iter().map(|g| g.order()).collect();
        assert_eq!(orders, vec![2, 3, 4, 6, 8, 6]);
    }
}
