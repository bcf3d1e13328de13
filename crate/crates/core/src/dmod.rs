//! D-module invariants of a foliation presented by commuting vector fields.
//!
//! With `M = D / D*(v_1..v_r)` and the `v_j` commuting with a regular sequence
//! of symbols, the Koszul complex resolves `M`, so `RHom(M, M)` is the Koszul
//! cochain complex `M -> M^r -> ... -> M` whose differentials are left
//! multiplication `[P] -> [v_j P]`. That complex is infinite dimensional; it
//! is sampled here inside the Bernstein filtration pieces `F_m`.
//!
//! # Truncation
//!
//! Write `b_j` for the Bernstein degree of `v_j`, `b = max b_j`, and
//! `L_N = sum_j F_(N - b_j) * v_j`. At level `m` with lookahead `a` and
//! `N = m + a`, the space of cochains is `W = F_m^(r choose k)` and
//!
//! ```text
//! Z_m = { c in W : delta(c) in L_(N+b)^(r choose k+1) }
//! B_m = W ∩ (delta(F_(N-b)^(r choose k-1)) + L_N^(r choose k))
//! ```
//!
//! Since the `v_j` commute, `B_m ⊂ Z_m` and `dim Z_m - dim B_m` is the
//! reported truncated dimension. The lookahead lets boundaries and ideal
//! elements reach above level `m` before cancelling back into it.

use std::collections::HashMap;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::foliation::{combinations, rank_profile, FoliationPresentation, RankProfile};
use crate::groebner::{groebner_basis, is_unit_ideal, krull_dimension};
use crate::linalg::{kernel, sparse_from, Echelon, SparseVec};
use crate::monomial::{monomials_up_to, Monomial, MonomialOrder};
use crate::poly::{Poly, Vars};
use crate::scalar::GaussianRational;
use crate::weyl::{bernstein_monomials, symbol_vars, SymbolPoly, WeylMonomial, WeylOp};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypothesisReport {
    pub pairwise_commuting: bool,
    pub failing_pair: Option<(usize, usize)>,
    pub commutator: Option<WeylOp>,
    pub symbols: Vec<SymbolPoly>,
    /// Dimension of `V(symbols)` in the cotangent bundle.
    pub symbol_ideal_dimension: i64,
    pub symbols_regular_sequence: bool,
}

impl HypothesisReport {
    pub fn passed(&self) -> bool {
        self.pairwise_commuting && self.symbols_regular_sequence
    }
}

/// Checks that the generators commute and that their symbols form a regular
/// sequence, i.e. cut out a subvariety of codimension `r` in `2n` variables.
pub fn check_hypotheses(f: &FoliationPresentation) -> Result<HypothesisReport> {
    let ops = f.operators();
    let mut failing_pair = None;
    let mut commutator = None;
    'outer: for i in 0..ops.len() {
        for j in i + 1..ops.len() {
            let c = ops[i].commutator(&ops[j])?;
            if !c.is_zero() {
                failing_pair = Some((i, j));
                commutator = Some(c);
                break 'outer;
            }
        }
    }
    let symbols: Vec<SymbolPoly> = ops.iter().map(WeylOp::principal_symbol).collect::<Result<_>>()?;
    let sv = symbol_vars(f.vars());
    let polys: Vec<Poly> = symbols.iter().map(|s| s.poly.clone()).collect();
    let dim = krull_dimension(&sv, &polys)?;
    let expected = (2 * f.nvars()) as i64 - f.len() as i64;
    Ok(HypothesisReport {
        pairwise_commuting: failing_pair.is_none(),
        failing_pair,
        commutator,
        symbols,
        symbol_ideal_dimension: dim,
        symbols_regular_sequence: dim >= 0 && dim == expected,
    })
}

fn require_hypotheses(f: &FoliationPresentation) -> Result<HypothesisReport> {
    let h = check_hypotheses(f)?;
    if !h.pairwise_commuting {
        let (i, j) = h.failing_pair.expect("failing pair");
        return Err(Error::HypothesesNotVerified(format!(
            "generators {i} and {j} do not commute: [v{i}, v{j}] = {}",
            h.commutator.as_ref().expect("commutator")
        )));
    }
    if !h.symbols_regular_sequence {
        return Err(Error::HypothesesNotVerified(format!(
            "symbols cut out a variety of dimension {}, expected {}",
            h.symbol_ideal_dimension,
            2 * f.nvars() - f.len()
        )));
    }
    Ok(h)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharVariety {
    pub generators: Vec<SymbolPoly>,
    pub dimension: i64,
    pub codimension: i64,
}

/// `V(symbols)` in the cotangent bundle; its codimension must equal the rank.
pub fn characteristic_variety(f: &FoliationPresentation) -> Result<CharVariety> {
    let h = require_hypotheses(f)?;
    let dimension = h.symbol_ideal_dimension;
    let codimension = 2 * f.nvars() as i64 - dimension;
    let rk = rank_profile(f)?.rk as i64;
    if codimension != rk {
        return Err(Error::Inconsistent(format!("codimension {codimension} differs from rank {rk}")));
    }
    Ok(CharVariety { generators: h.symbols, dimension, codimension })
}

/// Monomials sorted by increasing degree with an index and degree prefixes.
struct Graded<K> {
    mons: Vec<K>,
    index: HashMap<K, usize>,
    /// `prefix[d]` is the number of monomials of degree at most `d`.
    prefix: Vec<usize>,
}

impl<K: Clone + Hash + Eq> Graded<K> {
    fn new(mons: Vec<K>, degree: impl Fn(&K) -> u32, top: u32) -> Self {
        let index = mons.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        let prefix = (0..=top).map(|d| mons.iter().filter(|m| degree(m) <= d).count()).collect();
        Graded { mons, index, prefix }
    }

    fn upto(&self, d: u32) -> usize {
        self.prefix[(d as usize).min(self.prefix.len() - 1)]
    }
}

/// Subsets of `0..r` by size, with the sign of `e_j ∧ e_J`.
struct Exterior {
    subsets: Vec<Vec<Vec<usize>>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
}

impl Exterior {
    fn new(r: usize) -> Self {
        let subsets: Vec<Vec<Vec<usize>>> = (0..=r).map(|k| combinations(r, k)).collect();
        let index = subsets
            .iter()
            .map(|s| s.iter().enumerate().map(|(i, j)| (j.clone(), i)).collect())
            .collect();
        Exterior { subsets, index }
    }

    fn count(&self, k: usize) -> usize {
        self.subsets.get(k).map_or(0, Vec::len)
    }

    /// Terms of `delta(e_J)`: `(j, negative, index of J ∪ {j})` for `j ∉ J`.
    fn wedges(&self, k: usize, comp: usize) -> Vec<(usize, bool, usize)> {
        let set = &self.subsets[k][comp];
        let r = self.subsets.len() - 1;
        (0..r)
            .filter(|j| !set.contains(j))
            .map(|j| {
                let before = set.iter().filter(|&&i| i < j).count();
                let mut t = set.clone();
                t.push(j);
                t.sort_unstable();
                (j, before % 2 == 1, self.index[k + 1][&t])
            })
            .collect()
    }
}

fn add_scaled(v: &mut SparseVec, row: &SparseVec, negative: bool) {
    for (&c, a) in row {
        let a = if negative { -a } else { a.clone() };
        let e = v.entry(c).or_insert_with(GaussianRational::zero);
        *e += &a;
        if e.is_zero() {
            v.remove(&c);
        }
    }
}

fn flatten(parts: &[SparseVec]) -> SparseVec {
    let c = parts.len();
    let mut out = SparseVec::new();
    for (comp, p) in parts.iter().enumerate() {
        for (&idx, a) in p {
            out.insert(idx * c + comp, a.clone());
        }
    }
    out
}

fn embed(v: &SparseVec, comp: usize, c: usize) -> SparseVec {
    v.iter().map(|(&idx, a)| (idx * c + comp, a.clone())).collect()
}

/// Cohomology of a graded or filtered Koszul complex, by degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KoszulReport {
    pub degree_cap: u32,
    pub lookahead: u32,
    /// `dims[p][d]`: cohomology at position `p` among cochains of degree `<= d`.
    pub dims: Vec<Vec<usize>>,
    /// Every position below the top has zero cohomology in every degree.
    pub exact_below_top: bool,
}

/// Cohomology of the Koszul cochain complex `R -> R^r -> ... -> R` of `elems`
/// in the polynomial ring over `vars`, restricted to total degree `<= d` for
/// each `d <= cap`. Cocycles are exact; boundaries may come from preimages of
/// degree up to `d` plus the largest degree of `elems`.
pub fn koszul_cohomology(vars: &Vars, elems: &[Poly], cap: u32) -> Result<KoszulReport> {
    let r = elems.len();
    let s = elems.iter().filter_map(Poly::degree).max().unwrap_or(0);
    let lookahead = s;
    let top = cap + lookahead + s;
    let grading = Graded::new(monomials_up_to(vars.len(), top), Monomial::degree, top);
    let ext = Exterior::new(r);
    let images: Vec<Vec<SparseVec>> = elems
        .iter()
        .map(|g| {
            (0..grading.upto(top - s))
                .map(|idx| {
                    let prod = g.mul_monomial(&grading.mons[idx], &GaussianRational::one());
                    sparse_from(prod.terms().map(|(m, c)| (grading.index[m], c.clone())))
                })
                .collect()
        })
        .collect();
    let delta = |k: usize, comp: usize, idx: usize| -> Vec<SparseVec> {
        let mut parts = vec![SparseVec::new(); ext.count(k + 1)];
        for (j, neg, t) in ext.wedges(k, comp) {
            add_scaled(&mut parts[t], &images[j][idx], neg);
        }
        parts
    };
    let mut dims = vec![vec![0; cap as usize + 1]; r + 1];
    for (k, row) in dims.iter_mut().enumerate() {
        let ck = ext.count(k);
        for d in 0..=cap {
            let w = grading.upto(d);
            let z = if k == r {
                w * ck
            } else {
                let mut ech = Echelon::new();
                for comp in 0..ck {
                    for idx in 0..w {
                        ech.add(flatten(&delta(k, comp, idx)));
                    }
                }
                w * ck - ech.rank()
            };
            let bdim = if k == 0 {
                0
            } else {
                let mut ech = Echelon::new();
                for comp in 0..ext.count(k - 1) {
                    for idx in 0..grading.upto(d + lookahead) {
                        ech.add(flatten(&delta(k - 1, comp, idx)));
                    }
                }
                ech.rank_below(w * ck)
            };
            row[d as usize] = z.checked_sub(bdim).ok_or_else(|| Error::Inconsistent("boundaries exceed cocycles".into()))?;
        }
    }
    let exact_below_top = dims[..r].iter().all(|row| row.iter().all(|&x| x == 0));
    Ok(KoszulReport { degree_cap: cap, lookahead, dims, exact_below_top })
}

/// Koszul cohomology of the principal symbols of the generators.
pub fn koszul_graded_exactness(f: &FoliationPresentation, cap: u32) -> Result<KoszulReport> {
    let h = require_hypotheses(f)?;
    let polys: Vec<Poly> = h.symbols.iter().map(|s| s.poly.clone()).collect();
    koszul_cohomology(&symbol_vars(f.vars()), &polys, cap)
}

/// Parameters of the truncated cohomology computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TruncationConfig {
    pub m_max: u32,
    /// Extra levels for boundaries and ideal elements; `None` means twice the
    /// largest generator degree.
    pub lookahead: Option<u32>,
    /// Number of trailing levels used to judge stabilization.
    pub window: usize,
}

impl Default for TruncationConfig {
    fn default() -> Self {
        TruncationConfig { m_max: 6, lookahead: None, window: 3 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedCohomologyReport {
    pub levels: Vec<u32>,
    pub lookahead: u32,
    pub window: usize,
    /// `dims[k][i]` is the dimension at position `k` and level `levels[i]`.
    pub dims: Vec<Vec<usize>>,
    /// Whether the last `window` levels agree on being zero or nonzero.
    pub stabilized: Vec<bool>,
    /// Stabilized with nonzero dimensions.
    pub stabilized_nonzero: Vec<bool>,
    /// Whether the last `window` dimensions are literally equal.
    pub constant_tail: Vec<bool>,
    /// `delta ∘ delta = 0` checked exactly at each level.
    pub dd_zero: Vec<bool>,
}

struct EndoComplex {
    r: usize,
    b: u32,
    lookahead: u32,
    grading: Graded<WeylMonomial>,
    ext: Exterior,
    /// `left[j][idx] = v_j * mon_idx`
    left: Vec<Vec<SparseVec>>,
    /// `L_N` for the levels needed.
    ideals: HashMap<u32, Echelon>,
}

impl EndoComplex {
    fn new(f: &FoliationPresentation, m_max: u32, lookahead: u32) -> Result<Self> {
        let ops = f.operators();
        let degs: Vec<u32> = ops.iter().map(|o| o.bernstein_degree().expect("nonzero generator")).collect();
        let b = degs.iter().copied().max().unwrap_or(0);
        let top = m_max + lookahead.max(b) + b;
        let vars = f.vars();
        let n = f.nvars();
        let grading = Graded::new(bernstein_monomials(n, top), WeylMonomial::degree, top);
        let to_sparse = |op: &WeylOp| -> SparseVec { sparse_from(op.terms().map(|(m, c)| (grading.index[m], c.clone()))) };
        let mon_op = |idx: usize| WeylOp::term(vars, grading.mons[idx].clone(), GaussianRational::one());

        let mut left = Vec::with_capacity(ops.len());
        let mut right = Vec::with_capacity(ops.len());
        for (v, &bj) in ops.iter().zip(&degs) {
            let upto = grading.upto(top - bj);
            let mut l = Vec::with_capacity(upto);
            let mut rr = Vec::with_capacity(upto);
            for idx in 0..upto {
                let p = mon_op(idx);
                l.push(to_sparse(&v.checked_mul(&p)?));
                rr.push(to_sparse(&p.checked_mul(v)?));
            }
            left.push(l);
            right.push(rr);
        }

        let needed: Vec<u32> = (0..=m_max).flat_map(|m| [m + lookahead, m + lookahead + b]).collect();
        let last = needed.iter().copied().max().unwrap_or(0);
        let mut ideals = HashMap::new();
        let mut ech = Echelon::new();
        for level in 0..=last {
            for (j, &bj) in degs.iter().enumerate() {
                if level < bj {
                    continue;
                }
                let (lo, hi) = if level == bj { (0, grading.upto(0)) } else { (grading.upto(level - bj - 1), grading.upto(level - bj)) };
                for row in &right[j][lo..hi] {
                    ech.add(row.clone());
                }
            }
            if needed.contains(&level) {
                ideals.insert(level, ech.clone());
            }
        }
        Ok(EndoComplex { r: ops.len(), b, lookahead, grading, ext: Exterior::new(ops.len()), left, ideals })
    }

    fn delta(&self, k: usize, comp: usize, idx: usize) -> Vec<SparseVec> {
        let mut parts = vec![SparseVec::new(); self.ext.count(k + 1)];
        for (j, neg, t) in self.ext.wedges(k, comp) {
            add_scaled(&mut parts[t], &self.left[j][idx], neg);
        }
        parts
    }

    /// `delta` of an arbitrary cochain given componentwise.
    fn delta_vec(&self, k: usize, cochain: &[SparseVec]) -> Vec<SparseVec> {
        let mut parts = vec![SparseVec::new(); self.ext.count(k + 1)];
        for (comp, v) in cochain.iter().enumerate() {
            for (j, neg, t) in self.ext.wedges(k, comp) {
                for (&idx, a) in v {
                    let row: SparseVec = self.left[j][idx].iter().map(|(&c, x)| (c, x * a)).collect();
                    add_scaled(&mut parts[t], &row, neg);
                }
            }
        }
        parts
    }

    /// Images of the level-`m` cochains at position `k`, reduced modulo `L_(N+b)`.
    fn cocycle_images(&self, k: usize, m: u32) -> Vec<SparseVec> {
        let ideal = &self.ideals[&(m + self.lookahead + self.b)];
        let w = self.grading.upto(m);
        let mut out = Vec::with_capacity(w * self.ext.count(k));
        for comp in 0..self.ext.count(k) {
            for idx in 0..w {
                let parts: Vec<SparseVec> = self.delta(k, comp, idx).iter().map(|p| ideal.reduce(p)).collect();
                out.push(flatten(&parts));
            }
        }
        out
    }

    fn cocycle_dim(&self, k: usize, m: u32) -> usize {
        let w = self.grading.upto(m) * self.ext.count(k);
        if k == self.r {
            return w;
        }
        let mut ech = Echelon::new();
        for v in self.cocycle_images(k, m) {
            ech.add(v);
        }
        w - ech.rank()
    }

    fn boundary_dim(&self, k: usize, m: u32) -> usize {
        let n_level = m + self.lookahead;
        let ideal = &self.ideals[&n_level];
        let c = self.ext.count(k);
        let mut ech = Echelon::new();
        for comp in 0..c {
            for row in ideal.rows() {
                ech.add(embed(row, comp, c));
            }
        }
        if k > 0 && n_level >= self.b {
            for comp in 0..self.ext.count(k - 1) {
                for idx in 0..self.grading.upto(n_level - self.b) {
                    ech.add(flatten(&self.delta(k - 1, comp, idx)));
                }
            }
        }
        ech.rank_below(self.grading.upto(m) * c)
    }

    fn dim(&self, k: usize, m: u32) -> Result<usize> {
        let z = self.cocycle_dim(k, m);
        let b = self.boundary_dim(k, m);
        z.checked_sub(b)
            .ok_or_else(|| Error::Inconsistent(format!("boundaries exceed cocycles at position {k}, level {m}")))
    }

    /// `delta(delta(c)) = 0` exactly for every basis cochain of level `m`.
    fn dd_zero(&self, m: u32) -> bool {
        let w = self.grading.upto(m);
        (0..self.r.saturating_sub(1)).all(|k| {
            (0..self.ext.count(k)).all(|comp| {
                (0..w).all(|idx| {
                    let once = self.delta(k, comp, idx);
                    self.delta_vec(k + 1, &once).iter().all(SparseVec::is_empty)
                })
            })
        })
    }
}

fn default_lookahead(f: &FoliationPresentation) -> u32 {
    2 * f.operators().iter().filter_map(WeylOp::bernstein_degree).max().unwrap_or(0)
}

fn build_complex(f: &FoliationPresentation, m_max: u32, lookahead: Option<u32>) -> Result<EndoComplex> {
    let b = f.operators().iter().filter_map(WeylOp::bernstein_degree).max().unwrap_or(0);
    if m_max < b {
        return Err(Error::TruncationTooSmall { m_max: m_max as usize, needed: b as usize });
    }
    EndoComplex::new(f, m_max, lookahead.unwrap_or_else(|| default_lookahead(f)))
}

/// Truncated dimensions of `H^k(RHom(M, M))` for `k = 0..r` and levels `0..=m_max`.
pub fn truncated_endo_cohomology(f: &FoliationPresentation, config: &TruncationConfig) -> Result<TruncatedCohomologyReport> {
    require_hypotheses(f)?;
    let cx = build_complex(f, config.m_max, config.lookahead)?;
    let levels: Vec<u32> = (0..=config.m_max).collect();
    let tasks: Vec<(usize, u32)> = (0..=cx.r).flat_map(|k| levels.iter().map(move |&m| (k, m))).collect();
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(tasks.len().max(1));
    let results: Vec<Result<usize>> = std::thread::scope(|s| {
        let cx = &cx;
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let mine: Vec<(usize, u32)> = tasks.iter().copied().skip(w).step_by(workers).collect();
                s.spawn(move || mine.into_iter().map(|(k, m)| cx.dim(k, m)).collect::<Vec<_>>())
            })
            .collect();
        let per_worker: Vec<Vec<Result<usize>>> = handles.into_iter().map(|h| h.join().expect("worker panicked")).collect();
        let mut out: Vec<Option<Result<usize>>> = (0..tasks.len()).map(|_| None).collect();
        for (w, res) in per_worker.into_iter().enumerate() {
            for (i, r) in res.into_iter().enumerate() {
                out[w + i * workers] = Some(r);
            }
        }
        out.into_iter().map(|r| r.expect("every task ran")).collect()
    });
    let mut dims = vec![Vec::with_capacity(levels.len()); cx.r + 1];
    for ((k, _), r) in tasks.iter().zip(results) {
        dims[*k].push(r?);
    }
    let dd_zero = levels.iter().map(|&m| cx.dd_zero(m)).collect();
    let w = config.window;
    let tail = |row: &Vec<usize>| -> Option<Vec<usize>> {
        (w > 0 && row.len() >= w).then(|| row[row.len() - w..].to_vec())
    };
    let stabilized: Vec<bool> = dims
        .iter()
        .map(|row| tail(row).is_some_and(|t| t.iter().all(|&x| x == 0) || t.iter().all(|&x| x > 0)))
        .collect();
    let stabilized_nonzero = dims
        .iter()
        .zip(&stabilized)
        .map(|(row, &s)| s && row.last().is_some_and(|&x| x > 0))
        .collect();
    let constant_tail = dims.iter().map(|row| tail(row).is_some_and(|t| t.windows(2).all(|p| p[0] == p[1]))).collect();
    Ok(TruncatedCohomologyReport {
        levels,
        lookahead: cx.lookahead,
        window: w,
        dims,
        stabilized,
        stabilized_nonzero,
        constant_tail,
        dd_zero,
    })
}

/// A common zero of all generator coefficients certifies `H^r != 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Found(Vec<GaussianRational>),
    /// The coefficients have a common zero, but no rational one was found.
    ExistsNoRationalPoint,
    Absent,
}

impl Witness {
    pub fn exists(&self) -> bool {
        !matches!(self, Witness::Absent)
    }
}

fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs().to_u64()?;
    if n > 1 << 40 {
        return None;
    }
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(BigInt::from(d));
            if d * d != n {
                out.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    Some(out)
}

/// Rational roots of a univariate polynomial with rational coefficients,
/// given lowest degree first.
fn rational_roots(coeffs: &[BigRational]) -> Vec<BigRational> {
    let Some(low) = coeffs.iter().position(|c| !c.is_zero()) else { return vec![BigRational::zero()] };
    let mut out = Vec::new();
    if low > 0 {
        out.push(BigRational::zero());
    }
    let c = &coeffs[low..];
    if c.len() < 2 {
        return out;
    }
    let den = c.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = c.iter().map(|x| (x * BigRational::from_integer(den.clone())).to_integer()).collect();
    let (Some(ps), Some(qs)) = (divisors(&ints[0]), divisors(ints.last().expect("nonempty"))) else { return out };
    for p in &ps {
        for q in &qs {
            for cand in [BigRational::new(p.clone(), q.clone()), -BigRational::new(p.clone(), q.clone())] {
                if out.contains(&cand) {
                    continue;
                }
                let val = c.iter().rev().fold(BigRational::zero(), |acc, a| acc * &cand + a);
                if val.is_zero() {
                    out.push(cand);
                }
            }
        }
    }
    out.sort();
    out
}

/// Candidate values for variable `i` from a polynomial in that variable alone.
fn univariate_candidates(p: &Poly, i: usize) -> Vec<GaussianRational> {
    let deg = p.degree().unwrap_or(0) as usize;
    let mut re = vec![BigRational::zero(); deg + 1];
    let mut im = vec![BigRational::zero(); deg + 1];
    for (m, c) in p.terms() {
        re[m.0[i] as usize] = c.re.clone();
        im[m.0[i] as usize] = c.im.clone();
    }
    let base = if re.iter().any(|x| !x.is_zero()) { &re } else { &im };
    let other = if std::ptr::eq(base, &re) { &im } else { &re };
    rational_roots(base)
        .into_iter()
        .filter(|x| other.iter().rev().fold(BigRational::zero(), |acc, a| acc * x + a).is_zero())
        .map(GaussianRational::real)
        .collect()
}

fn search_point(vars: &Vars, gens: &[Poly], i: usize, point: &mut Vec<GaussianRational>) -> Result<bool> {
    let gb = groebner_basis(vars, gens, MonomialOrder::Lex)?;
    if gb.is_unit() {
        return Ok(false);
    }
    if gb.is_zero_ideal() {
        for k in (0..=i).rev() {
            point[k] = GaussianRational::zero();
        }
        return Ok(true);
    }
    // lex with variable 0 largest: elements in variable i alone eliminate the others
    let univariate: Vec<&Poly> = gb
        .basis
        .iter()
        .filter(|p| p.terms().all(|(m, _)| m.support().all(|k| k == i)))
        .collect();
    let candidates: Vec<GaussianRational> = match univariate.first() {
        Some(p) => univariate_candidates(p, i),
        None => [0, 1, -1, 2, -2].into_iter().map(GaussianRational::from).collect(),
    };
    for c in candidates {
        let next: Vec<Poly> = gb.basis.iter().map(|p| p.substitute(i, &c)).filter(|p| !p.is_zero()).collect();
        point[i] = c;
        if i == 0 {
            if next.is_empty() {
                return Ok(true);
            }
            continue;
        }
        if search_point(vars, &next, i - 1, point)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Looks for a common zero of every coefficient of every generator.
pub fn top_cohomology_witness(f: &FoliationPresentation) -> Result<Witness> {
    let vars = f.vars();
    let coeffs = f.all_coefficients();
    if is_unit_ideal(vars, &coeffs)? {
        return Ok(Witness::Absent);
    }
    let n = f.nvars();
    let mut point = vec![GaussianRational::zero(); n];
    if n > 0 && search_point(vars, &coeffs, n - 1, &mut point)? {
        for c in &coeffs {
            if !c.eval(&point)?.is_zero() {
                return Err(Error::Inconsistent("witness point does not annihilate the coefficients".into()));
            }
        }
        return Ok(Witness::Found(point));
    }
    Ok(Witness::ExistsNoRationalPoint)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Evidence {
    /// The class of `1` is a nonzero endomorphism.
    IdentityClass,
    /// A common zero of the generators.
    CommonZero(Witness),
    /// Nonzero truncated dimensions over the stabilization window.
    Truncation(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DIrrEntry {
    pub k: usize,
    pub evidence: Evidence,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DIrrReport {
    pub sequence: Vec<DIrrEntry>,
    pub d_irr: usize,
    pub geometric_irr: usize,
    pub theorem1_consistent: bool,
}

/// Combines the truncated table, the witness and the rank profile.
pub fn assemble_d_irregularity(
    cohomology: &TruncatedCohomologyReport,
    witness: &Witness,
    profile: &RankProfile,
) -> DIrrReport {
    let r = cohomology.dims.len() - 1;
    let mut sequence = vec![DIrrEntry { k: 0, evidence: Evidence::IdentityClass }];
    for k in 1..=r {
        if k == r && witness.exists() {
            sequence.push(DIrrEntry { k, evidence: Evidence::CommonZero(witness.clone()) });
        } else if cohomology.stabilized_nonzero[k] {
            let row = &cohomology.dims[k];
            let tail = row[row.len() - cohomology.window..].to_vec();
            sequence.push(DIrrEntry { k, evidence: Evidence::Truncation(tail) });
        }
    }
    let d_irr = sequence.iter().map(|e| e.k).max().unwrap_or(0);
    DIrrReport { sequence, d_irr, geometric_irr: profile.irr, theorem1_consistent: d_irr == profile.irr }
}

/// The degrees `k` with `H^k(RHom(M, M)) != 0` as supported by exact
/// certificates and truncated evidence, compared with the irregularity.
pub fn d_irregularity(f: &FoliationPresentation, config: &TruncationConfig) -> Result<DIrrReport> {
    let cohomology = truncated_endo_cohomology(f, config)?;
    let witness = top_cohomology_witness(f)?;
    let profile = rank_profile(f)?;
    Ok(assemble_d_irregularity(&cohomology, &witness, &profile))
}

/// Basis of the polynomials of degree `<= max_degree` killed by every generator.
pub fn first_integrals(f: &FoliationPresentation, max_degree: u32) -> Result<Vec<Poly>> {
    let vars = f.vars();
    let mons = monomials_up_to(f.nvars(), max_degree);
    let index: HashMap<Monomial, usize> = mons.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
    let r = f.len();
    let mut images = Vec::with_capacity(mons.len());
    for m in &mons {
        let p = Poly::monomial(vars, m.clone(), GaussianRational::one());
        let mut img = SparseVec::new();
        for (j, v) in f.generators().iter().enumerate() {
            let q = v.apply(&p)?;
            // vector fields can raise the degree; index the image by a fresh list
            for (mm, c) in q.terms() {
                img.insert(image_coord(&index, mm, j, r), c.clone());
            }
        }
        images.push(img);
    }
    let mut ech = Echelon::new();
    for v in kernel(&images) {
        ech.add(v);
    }
    Ok(ech
        .reduced_rows()
        .into_iter()
        .map(|row| Poly::from_terms(vars, row.into_iter().map(|(i, c)| (mons[i].clone(), c))))
        .collect())
}

fn image_coord(index: &HashMap<Monomial, usize>, m: &Monomial, j: usize, r: usize) -> usize {
    match index.get(m) {
        Some(&i) => 2 * (i * r + j),
        // outside the degree window: a unique odd coordinate
        None => {
            let h = m.0.iter().fold(j as u64, |acc, &e| acc.wrapping_mul(1_000_003).wrapping_add(e as u64 + 1));
            2 * (h as usize % (1 << 40)) + 1
        }
    }
}

/// Representatives of the level-`m` part of the idealizer of `D*I` modulo `D*I`.
#[derive(Clone, Debug)]
pub struct IdealizerBasis {
    pub level: u32,
    pub representatives: Vec<WeylOp>,
    vars: Vars,
    index: HashMap<WeylMonomial, usize>,
    span: Echelon,
    bound: usize,
}

impl IdealizerBasis {
    /// Whether `op` (of level `<= m`) is congruent to a combination of the representatives.
    pub fn contains_class(&self, op: &WeylOp) -> bool {
        let mut v = SparseVec::new();
        for (m, c) in op.terms() {
            match self.index.get(m) {
                Some(&i) if i < self.bound => {
                    v.insert(i, c.clone());
                }
                _ => return false,
            }
        }
        self.span.contains(&v)
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }
}

/// The level-`m` part of `H^0`, with explicit representatives.
pub fn idealizer_truncated(f: &FoliationPresentation, m: u32, lookahead: Option<u32>) -> Result<IdealizerBasis> {
    require_hypotheses(f)?;
    let cx = build_complex(f, m, lookahead)?;
    let w = cx.grading.upto(m);
    let in_ideal: Vec<SparseVec> = cx.ideals[&(m + cx.lookahead)]
        .rows()
        .iter()
        .filter(|row| row.keys().next_back().is_some_and(|&p| p < w))
        .cloned()
        .collect();
    let mut modulo = Echelon::new();
    for row in &in_ideal {
        modulo.add(row.clone());
    }
    let mut reps = Echelon::new();
    for z in kernel(&cx.cocycle_images(0, m)) {
        reps.add(modulo.reduce(&z));
    }
    let vars = f.vars().clone();
    let representatives = reps
        .reduced_rows()
        .into_iter()
        .map(|row| {
            let mut op = WeylOp::zero(&vars);
            for (i, c) in row {
                op.add_term(cx.grading.mons[i].clone(), &c);
            }
            op
        })
        .collect::<Vec<_>>();
    let mut span = modulo;
    for r in reps.rows() {
        span.add(r.clone());
    }
    let index = cx.grading.mons[..w].iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
    Ok(IdealizerBasis { level: m, representatives, vars, index, span, bound: w })
}
