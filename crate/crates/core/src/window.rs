//! Finite windows of infinite discrete groups: Cayley balls in free groups
//! (exact reduced-word arithmetic) and in integer lattices (vector
//! arithmetic), together with their materialized difference sets.
//!
//! A window never claims anything about the ambient group beyond exact
//! multiplication: the Schur matrix built over a window is a finite
//! section, so norm values computed on it are certified lower bounds for
//! any ambient extension.

use std::collections::HashMap;

use crate::error::Error;
use crate::Result;

/// Default cap on window sizes; Schur-norm matrices scale cubically.
pub const DEFAULT_WINDOW_CAP: usize = 4096;

/// The ambient group of a window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ambient {
    /// Free group of the given rank, elements as reduced words.
    Free { rank: usize },
    /// Z^d with componentwise addition.
    Lattice { dim: usize },
}

/// An ambient element: a reduced word (letters +-1..+-rank) or a lattice
/// vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elem {
    Word(Vec<i8>),
    Vector(Vec<i64>),
}

impl Elem {
    pub fn is_identity(&self) -> bool {
        match self {
            Elem::Word(w) => w.is_empty(),
            Elem::Vector(v) => v.iter().all(|&x| x == 0),
        }
    }

    /// Word length: reduced length for free groups, l^1 norm for lattices
    /// (the Cayley distance for the standard generators).
    pub fn length(&self) -> usize {
        match self {
            Elem::Word(w) => w.len(),
            Elem::Vector(v) => v.iter().map(|x| x.unsigned_abs() as usize).sum(),
        }
    }

    pub fn display(&self) -> String {
        match self {
            Elem::Word(w) if w.is_empty() => "e".to_string(),
            Elem::Word(w) => w
                .iter()
                .map(|&l| {
                    let base = (b'a' + (l.unsigned_abs() - 1)) as char;
                    if l > 0 {
                        base.to_string()
                    } else {
                        format!("{base}^-1")
                    }
                })
                .collect::<Vec<_>>()
                .join("."),
            Elem::Vector(v) => format!(
                "({})",
                v.iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            ),
        }
    }
}

impl Ambient {
    pub fn identity(&self) -> Elem {
        match self {
            Ambient::Free { .. } => Elem::Word(vec![]),
            Ambient::Lattice { dim } => Elem::Vector(vec![0; *dim]),
        }
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        match (self, a, b) {
            (Ambient::Free { .. }, Elem::Word(x), Elem::Word(y)) => {
                let mut out = x.clone();
                for &l in y {
                    if out.last().is_some_and(|&t| t == -l) {
                        out.pop();
                    } else {
                        out.push(l);
                    }
                }
                Elem::Word(out)
            }
            (Ambient::Lattice { .. }, Elem::Vector(x), Elem::Vector(y)) => {
                Elem::Vector(x.iter().zip(y).map(|(a, b)| a + b).collect())
            }
            _ => panic!("element does not belong to this ambient group"),
        }
    }

    pub fn inv(&self, a: &Elem) -> Elem {
        match (self, a) {
            (Ambient::Free { .. }, Elem::Word(x)) => {
                Elem::Word(x.iter().rev().map(|&l| -l).collect())
            }
            (Ambient::Lattice { .. }, Elem::Vector(x)) => {
                Elem::Vector(x.iter().map(|&v| -v).collect())
            }
            _ => panic!("element does not belong to this ambient group"),
        }
    }

    /// The standard generators (without inverses).
    pub fn generators(&self) -> Vec<Elem> {
        match self {
            Ambient::Free { rank } => (1..=*rank as i8).map(|l| Elem::Word(vec![l])).collect(),
            Ambient::Lattice { dim } => (0..*dim)
                .map(|i| {
                    let mut v = vec![0i64; *dim];
                    v[i] = 1;
                    Elem::Vector(v)
                })
                .collect(),
        }
    }
}

/// A finite subset of an infinite discrete group, with its difference set
/// {y^{-1} x : x, y in elements} materialized and indexed.
#[derive(Clone, Debug)]
pub struct GroupWindow {
    pub ambient: Ambient,
    elements: Vec<Elem>,
    index: HashMap<Elem, usize>,
    diff_set: Vec<Elem>,
    diff_index: HashMap<Elem, usize>,
    /// diff_table[x * n + y] = index of y^{-1} x in diff_set
    diff_table: Vec<usize>,
    radius: usize,
}

impl GroupWindow {
    /// All elements of word length <= radius, with the default size cap.
    pub fn ball(ambient: Ambient, radius: usize) -> Result<Self> {
        Self::ball_capped(ambient, radius, DEFAULT_WINDOW_CAP)
    }

    /// Ball window with an explicit size cap; refuses with a size report
    /// when the ball is larger than the cap.
    pub fn ball_capped(ambient: Ambient, radius: usize, cap: usize) -> Result<Self> {
        let size = ball_size(&ambient, radius);
        if size > cap {
            return Err(Error::WindowTooLarge { size, cap });
        }
        // breadth-first enumeration, then sort by (length, element) so the
        // ordering is deterministic and the identity comes first
        let mut seen: HashMap<Elem, usize> = HashMap::new();
        let mut frontier = vec![ambient.identity()];
        seen.insert(ambient.identity(), 0);
        let mut gens = ambient.generators();
        let invs: Vec<Elem> = gens.iter().map(|g| ambient.inv(g)).collect();
        gens.extend(invs);
        for depth in 1..=radius {
            let mut next = Vec::new();
            for x in &frontier {
                for g in &gens {
                    let y = ambient.mul(x, g);
                    if !seen.contains_key(&y) {
                        seen.insert(y.clone(), depth);
                        next.push(y);
                    }
                }
            }
            frontier = next;
        }
        let mut elements: Vec<Elem> = seen.into_keys().collect();
        elements.sort_by(|a, b| a.length().cmp(&b.length()).then_with(|| a.cmp(b)));
        Self::from_elements(ambient, elements, radius)
    }

    /// Window over an explicit element list (distinct, any origin).
    pub fn from_elements(ambient: Ambient, elements: Vec<Elem>, radius: usize) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, e) in elements.iter().enumerate() {
            if index.insert(e.clone(), i).is_some() {
                return Err(Error::InvalidGroup(format!(
                    "duplicate window element {}",
                    e.display()
                )));
            }
        }
        let n = elements.len();
        let mut diff_index: HashMap<Elem, usize> = HashMap::new();
        let mut diff_set: Vec<Elem> = Vec::new();
        let mut diff_table = vec![0usize; n * n];
        // first pass materializes the set, sorted for determinism
        for y in &elements {
            let y_inv = ambient.inv(y);
            for x in &elements {
                let d = ambient.mul(&y_inv, x);
                if !diff_index.contains_key(&d) {
                    diff_index.insert(d.clone(), 0);
                    diff_set.push(d);
                }
            }
        }
        diff_set.sort_by(|a, b| a.length().cmp(&b.length()).then_with(|| a.cmp(b)));
        for (i, d) in diff_set.iter().enumerate() {
            diff_index.insert(d.clone(), i);
        }
        for (xi, x) in elements.iter().enumerate() {
            for (yi, y) in elements.iter().enumerate() {
                let d = ambient.mul(&ambient.inv(y), x);
                diff_table[xi * n + yi] = diff_index[&d];
            }
        }
        Ok(GroupWindow {
            ambient,
            elements,
            index,
            diff_set,
            diff_index,
            diff_table,
            radius,
        })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn elements(&self) -> &[Elem] {
        &self.elements
    }

    pub fn diff_set(&self) -> &[Elem] {
        &self.diff_set
    }

    pub fn element_index(&self, e: &Elem) -> Option<usize> {
        self.index.get(e).copied()
    }

    pub fn diff_of(&self, e: &Elem) -> Option<usize> {
        self.diff_index.get(e).copied()
    }

    /// Index into the difference set of y^{-1} x.
    pub fn diff(&self, x: usize, y: usize) -> usize {
        self.diff_table[x * self.elements.len() + y]
    }
}

fn ball_size(ambient: &Ambient, radius: usize) -> usize {
    match ambient {
        // 1 + 2r * ((2r-1)^R - 1)/(2r - 2), counted incrementally
        Ambient::Free { rank } => {
            let r = *rank;
            if r == 0 {
                return 1;
            }
            let mut total = 1usize;
            let mut shell = 2 * r;
            for _ in 1..=radius {
                total = total.saturating_add(shell);
                shell = shell.saturating_mul(2 * r - 1);
            }
            total
        }
        Ambient::Lattice { dim } => {
            // sum over k of ways to write word length <= radius in Z^d
            let d = *dim;
            let mut count = vec![0usize; radius + 1];
            count[0] = 1;
            for _ in 0..d {
                let mut next = vec![0usize; radius + 1];
                for used in 0..=radius {
                    if count[used] == 0 {
                        continue;
                    }
                    for step in 0..=(radius - used) {
                        let ways = if step == 0 { 1 } else { 2 };
                        next[used + step] = next[used + step].saturating_add(count[used] * ways);
                    }
                }
                count = next;
            }
            count.iter().sum()
        }
    }
}
