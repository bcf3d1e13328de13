//! Exact sparse linear algebra over `Q(i)`.
//!
//! Vectors are sparse maps from column index to coefficient. Every echelon
//! form here uses the *largest* nonzero column of a row as its pivot. When
//! columns are numbered so that a filtration piece is a prefix, the rows
//! whose pivot lies in that prefix span exactly the intersection of the row
//! space with the piece.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use crate::scalar::GaussianRational;

pub type SparseVec = BTreeMap<usize, GaussianRational>;

pub fn sparse_from<I: IntoIterator<Item = (usize, GaussianRational)>>(it: I) -> SparseVec {
    let mut v = SparseVec::new();
    for (k, c) in it {
        axpy_entry(&mut v, k, &c);
    }
    v
}

fn axpy_entry(v: &mut SparseVec, k: usize, c: &GaussianRational) {
    if c.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match v.entry(k) {
        Entry::Vacant(e) => {
            e.insert(c.clone());
        }
        Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

/// `v -= c * row`
pub fn sub_scaled(v: &mut SparseVec, row: &SparseVec, c: &GaussianRational) {
    for (&k, a) in row {
        axpy_entry(v, k, &-(a * c));
    }
}

pub fn scale(v: &SparseVec, c: &GaussianRational) -> SparseVec {
    v.iter().map(|(&k, a)| (k, a * c)).collect()
}

/// A semi-echelon basis of a subspace.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: Vec<SparseVec>,
    /// Row combination (over inserted-vector indices) producing each row.
    combos: Vec<SparseVec>,
    pivot_row: HashMap<usize, usize>,
    inserted: usize,
    track: bool,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    /// An echelon form that records how each row arose, so that
    /// [`Echelon::insert`] can report kernel combinations.
    pub fn tracking() -> Self {
        Echelon { track: true, ..Self::default() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Number of basis rows whose pivot column is `< bound`.
    pub fn rank_below(&self, bound: usize) -> usize {
        self.pivot_row.keys().filter(|&&p| p < bound).count()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivot_row.keys().copied()
    }

    /// The basis rows in insertion order; each is monic at its pivot.
    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_row.contains_key(&col)
    }

    /// Adds `v` to the span. Returns `Err(kernel_combo)` if `v` was already
    /// dependent: the combination of inserted vectors summing to zero (empty
    /// unless tracking).
    pub fn insert(&mut self, v: SparseVec) -> Result<(), SparseVec> {
        let idx = self.inserted;
        self.inserted += 1;
        let mut v = v;
        let mut combo = SparseVec::new();
        if self.track {
            combo.insert(idx, GaussianRational::one());
        }
        loop {
            let Some((&col, c)) = v.iter().next_back() else {
                return Err(combo);
            };
            match self.pivot_row.get(&col) {
                Some(&r) => {
                    let c = c.clone();
                    sub_scaled(&mut v, &self.rows[r], &c);
                    if self.track {
                        sub_scaled(&mut combo, &self.combos[r], &c);
                    }
                }
                None => {
                    let inv = c.inv().expect("nonzero pivot");
                    self.pivot_row.insert(col, self.rows.len());
                    self.rows.push(scale(&v, &inv));
                    self.combos.push(scale(&combo, &inv));
                    return Ok(());
                }
            }
        }
    }

    /// Inserts, ignoring dependency information.
    pub fn add(&mut self, v: SparseVec) -> bool {
        self.insert(v).is_ok()
    }

    /// Canonical remainder of `v` modulo the span: no pivot column survives.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut v = v.clone();
        let mut bound = usize::MAX;
        loop {
            let next = v.range(..bound).next_back().map(|(&k, c)| (k, c.clone()));
            let Some((col, c)) = next else { break };
            match self.pivot_row.get(&col) {
                Some(&r) => sub_scaled(&mut v, &self.rows[r], &c),
                None => bound = col,
            }
        }
        v
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    /// Fully reduced basis rows, sorted by increasing pivot.
    pub fn reduced_rows(&self) -> Vec<SparseVec> {
        let mut order: Vec<(usize, usize)> = self.pivot_row.iter().map(|(&p, &r)| (p, r)).collect();
        order.sort();
        let mut done: HashMap<usize, SparseVec> = HashMap::new();
        let mut out = Vec::with_capacity(order.len());
        for (p, r) in order {
            let mut row = self.rows[r].clone();
            let others: Vec<usize> = row.keys().copied().filter(|&k| k != p && done.contains_key(&k)).collect();
            for k in others {
                if let Some(c) = row.get(&k).cloned() {
                    sub_scaled(&mut row, &done[&k], &c);
                }
            }
            done.insert(p, row.clone());
            out.push(row);
        }
        out
    }
}

/// Kernel of the linear map sending domain basis vector `j` to `images[j]`.
pub fn kernel(images: &[SparseVec]) -> Vec<SparseVec> {
    let mut ech = Echelon::tracking();
    let mut out = Vec::new();
    for img in images {
        if let Err(combo) = ech.insert(img.clone()) {
            out.push(combo);
        }
    }
    out
}

/// Rank of a list of vectors.
pub fn rank(vectors: &[SparseVec]) -> usize {
    let mut ech = Echelon::new();
    for v in vectors {
        ech.add(v.clone());
    }
    ech.rank()
}

/// Rank of a dense matrix given by rows.
pub fn dense_rank(rows: &[Vec<GaussianRational>]) -> usize {
    let sparse: Vec<SparseVec> = rows
        .iter()
        .map(|r| sparse_from(r.iter().cloned().enumerate()))
        .collect();
    rank(&sparse)
}
