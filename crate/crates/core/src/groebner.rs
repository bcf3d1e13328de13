//! Buchberger's algorithm over `Q(i)` for ideals and submodules of free modules.
//!
//! Ideals are the rank-one case of the module engine. Module terms are
//! compared position-over-term: a smaller position index is larger, ties are
//! broken by the monomial order. Pairs are pruned with the Gebauer–Möller
//! update and selected by the normal strategy (smallest lcm first).

use std::cmp::Ordering;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::monomial::{Monomial, MonomialOrder};
use crate::poly::{same_vars, Poly, PolyVector, Vars};
use crate::scalar::GaussianRational;

#[derive(Clone, Debug, PartialEq, Eq)]
struct Term {
    pos: usize,
    mon: Monomial,
    coeff: GaussianRational,
}

/// A module element as a list of terms in increasing term order (lead last).
#[derive(Clone, Debug, PartialEq, Eq)]
struct ModElem {
    terms: Vec<Term>,
}

fn cmp_term(order: MonomialOrder, a: (usize, &Monomial), b: (usize, &Monomial)) -> Ordering {
    b.0.cmp(&a.0).then_with(|| order.cmp(a.1, b.1))
}

impl ModElem {
    fn from_vector(v: &[Poly], order: MonomialOrder) -> ModElem {
        let mut terms: Vec<Term> = v
            .iter()
            .enumerate()
            .flat_map(|(pos, p)| p.terms().map(move |(m, c)| Term { pos, mon: m.clone(), coeff: c.clone() }))
            .collect();
        terms.sort_by(|a, b| cmp_term(order, (a.pos, &a.mon), (b.pos, &b.mon)));
        ModElem { terms }
    }

    fn to_vector(&self, vars: &Vars, rank: usize) -> Vec<Poly> {
        let mut out = vec![Poly::zero(vars); rank];
        for t in &self.terms {
            out[t.pos].add_term(t.mon.clone(), &t.coeff);
        }
        out
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn lead(&self) -> &Term {
        self.terms.last().expect("nonzero element")
    }

    fn monic(mut self) -> ModElem {
        if let Some(t) = self.terms.last() {
            if !t.coeff.is_one() {
                let inv = t.coeff.inv().expect("nonzero");
                for t in &mut self.terms {
                    t.coeff = &t.coeff * &inv;
                }
            }
        }
        self
    }

    /// `self - c * mon * other`, merged in term order.
    fn sub_scaled(&self, mon: &Monomial, c: &GaussianRational, other: &ModElem, order: MonomialOrder) -> ModElem {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let shifted = other.terms.iter().map(|t| Term { pos: t.pos, mon: t.mon.mul(mon), coeff: -(&t.coeff * c) });
        let mut a = self.terms.iter().cloned().peekable();
        let mut b = shifted.peekable();
        loop {
            let ord = match (a.peek(), b.peek()) {
                (None, None) => break,
                (Some(_), None) => Ordering::Less,
                (None, Some(_)) => Ordering::Greater,
                (Some(x), Some(y)) => cmp_term(order, (x.pos, &x.mon), (y.pos, &y.mon)),
            };
            match ord {
                Ordering::Less => out.push(a.next().unwrap()),
                Ordering::Greater => out.push(b.next().unwrap()),
                Ordering::Equal => {
                    let mut x = a.next().unwrap();
                    let y = b.next().unwrap();
                    x.coeff += &y.coeff;
                    if !x.coeff.is_zero() {
                        out.push(x);
                    }
                }
            }
        }
        ModElem { terms: out }
    }
}

/// Full reduction of `p` by the elements of `basis` selected by `active`.
fn reduce(p: ModElem, basis: &[ModElem], active: &[usize], order: MonomialOrder) -> ModElem {
    let mut p = p;
    let mut rem: Vec<Term> = Vec::new();
    while let Some(lt) = p.terms.last().cloned() {
        let divisor = active.iter().map(|&i| &basis[i]).find(|g| {
            let l = g.lead();
            l.pos == lt.pos && l.mon.divides(&lt.mon)
        });
        match divisor {
            Some(g) => {
                let l = g.lead();
                let q = l.mon.quotient_of(&lt.mon);
                let c = &lt.coeff / &l.coeff;
                p = p.sub_scaled(&q, &c, g, order);
            }
            None => {
                p.terms.pop();
                rem.push(lt);
            }
        }
    }
    rem.reverse();
    ModElem { terms: rem }
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    pos: usize,
    lcm: Monomial,
}

struct Buchberger {
    order: MonomialOrder,
    ideal_mode: bool,
    basis: Vec<ModElem>,
    active: Vec<usize>,
    pairs: Vec<Pair>,
}

impl Buchberger {
    fn coprime(&self, a: &Monomial, b: &Monomial) -> bool {
        self.ideal_mode && a.is_coprime(b)
    }

    /// Gebauer–Möller update with the new element `h`.
    fn update(&mut self, h: ModElem) {
        let hi = self.basis.len();
        let (hpos, hmon) = (h.lead().pos, h.lead().mon.clone());
        self.basis.push(h);

        let mut c: Vec<Pair> = self
            .active
            .iter()
            .filter(|&&g| self.basis[g].lead().pos == hpos)
            .map(|&g| Pair { i: g, j: hi, pos: hpos, lcm: hmon.lcm(&self.basis[g].lead().mon) })
            .collect();
        let mut d: Vec<Pair> = Vec::new();
        while let Some(p) = c.pop() {
            let gmon = &self.basis[p.i].lead().mon;
            let dominated = c.iter().chain(d.iter()).any(|q| q.lcm.divides(&p.lcm));
            if self.coprime(&hmon, gmon) || !dominated {
                d.push(p);
            }
        }
        let e: Vec<Pair> = d
            .into_iter()
            .filter(|p| !self.coprime(&hmon, &self.basis[p.i].lead().mon))
            .collect();

        let basis = &self.basis;
        self.pairs.retain(|p| {
            if p.pos != hpos || !hmon.divides(&p.lcm) {
                return true;
            }
            let l1 = hmon.lcm(&basis[p.i].lead().mon);
            let l2 = hmon.lcm(&basis[p.j].lead().mon);
            l1 == p.lcm || l2 == p.lcm
        });
        self.pairs.extend(e);

        let active: Vec<usize> = self
            .active
            .iter()
            .copied()
            .filter(|&g| {
                let l = self.basis[g].lead();
                !(l.pos == hpos && hmon.divides(&l.mon))
            })
            .collect();
        self.active = active;
        self.active.push(hi);
    }

    fn next_pair(&mut self) -> Option<Pair> {
        let order = self.order;
        let best = self
            .pairs
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| {
                cmp_term(order, (a.pos, &a.lcm), (b.pos, &b.lcm)).then_with(|| (a.i, a.j).cmp(&(b.i, b.j)))
            })
            .map(|(k, _)| k)?;
        Some(self.pairs.swap_remove(best))
    }

    fn s_poly(&self, p: &Pair) -> ModElem {
        let (f, g) = (&self.basis[p.i], &self.basis[p.j]);
        let one = GaussianRational::one();
        let tf = f.lead().mon.quotient_of(&p.lcm);
        let tg = g.lead().mon.quotient_of(&p.lcm);
        let zero = ModElem { terms: Vec::new() };
        let a = zero.sub_scaled(&tf, &-one.clone(), f, self.order);
        a.sub_scaled(&tg, &one, g, self.order)
    }

    fn run(order: MonomialOrder, ideal_mode: bool, gens: Vec<ModElem>) -> Vec<ModElem> {
        let mut bb = Buchberger { order, ideal_mode, basis: Vec::new(), active: Vec::new(), pairs: Vec::new() };
        for g in gens {
            let h = reduce(g, &bb.basis, &bb.active, order);
            if !h.is_zero() {
                bb.update(h.monic());
            }
        }
        while let Some(p) = bb.next_pair() {
            let s = bb.s_poly(&p);
            let h = reduce(s, &bb.basis, &bb.active, order);
            if !h.is_zero() {
                bb.update(h.monic());
            }
        }
        bb.into_reduced()
    }

    fn into_reduced(self) -> Vec<ModElem> {
        let order = self.order;
        // active elements already have pairwise non-divisible leads
        let mut elems: Vec<ModElem> = self.active.iter().map(|&i| self.basis[i].clone()).collect();
        let idx: Vec<usize> = (0..elems.len()).collect();
        for k in 0..elems.len() {
            let others: Vec<usize> = idx.iter().copied().filter(|&j| j != k).collect();
            let lead = elems[k].terms.pop().expect("nonzero");
            let tail = reduce(ModElem { terms: std::mem::take(&mut elems[k].terms) }, &elems, &others, order);
            let mut terms = tail.terms;
            terms.push(lead);
            elems[k] = ModElem { terms };
        }
        elems.sort_by(|a, b| {
            let (x, y) = (a.lead(), b.lead());
            cmp_term(order, (y.pos, &y.mon), (x.pos, &x.mon))
        });
        elems
    }
}

/// A reduced Gröbner basis of a polynomial ideal.
///
/// Elements are monic and sorted by decreasing leading monomial; the empty
/// basis is the zero ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedGB {
    pub basis: Vec<Poly>,
    pub order: MonomialOrder,
    pub vars: Vars,
}

fn check_uniform<'a, I: IntoIterator<Item = &'a Poly>>(vars: &Vars, polys: I) -> Result<()> {
    if polys.into_iter().all(|p| same_vars(p.vars(), vars)) {
        Ok(())
    } else {
        Err(Error::AmbientMismatch)
    }
}

/// Reduced Gröbner basis of the ideal generated by `gens`.
pub fn groebner_basis(vars: &Vars, gens: &[Poly], order: MonomialOrder) -> Result<ReducedGB> {
    check_uniform(vars, gens)?;
    let elems = gens.iter().map(|g| ModElem::from_vector(std::slice::from_ref(g), order)).collect();
    let gb = Buchberger::run(order, true, elems);
    let basis = gb.into_iter().map(|e| e.to_vector(vars, 1).pop().unwrap()).collect();
    Ok(ReducedGB { basis, order, vars: vars.clone() })
}

impl ReducedGB {
    pub fn is_unit(&self) -> bool {
        self.basis.len() == 1 && self.basis[0].is_constant()
    }

    pub fn is_zero_ideal(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.basis
            .iter()
            .map(|p| p.leading_term(self.order).expect("nonzero").0.clone())
            .collect()
    }

    pub fn normal_form(&self, p: &Poly) -> Result<Poly> {
        normal_form(p, self)
    }

    pub fn contains(&self, p: &Poly) -> Result<bool> {
        Ok(normal_form(p, self)?.is_zero())
    }
}

/// Remainder of `p` on division by `gb`: no term divisible by a leading monomial.
pub fn normal_form(p: &Poly, gb: &ReducedGB) -> Result<Poly> {
    check_uniform(&gb.vars, [p])?;
    let order = gb.order;
    let basis: Vec<ModElem> = gb.basis.iter().map(|g| ModElem::from_vector(std::slice::from_ref(g), order)).collect();
    let active: Vec<usize> = (0..basis.len()).collect();
    let r = reduce(ModElem::from_vector(std::slice::from_ref(p), order), &basis, &active, order);
    Ok(r.to_vector(&gb.vars, 1).pop().unwrap())
}

pub fn ideal_membership(p: &Poly, gens: &[Poly]) -> Result<bool> {
    let vars = p.vars().clone();
    let gb = groebner_basis(&vars, gens, MonomialOrder::GrevLex)?;
    gb.contains(p)
}

/// Whether `1` lies in the ideal, i.e. `V(gens)` is empty over the algebraic closure.
pub fn is_unit_ideal(vars: &Vars, gens: &[Poly]) -> Result<bool> {
    Ok(groebner_basis(vars, gens, MonomialOrder::GrevLex)?.is_unit())
}

/// Dimension of a monomial ideal given by generators: the largest set of
/// variables `S` such that no generator is supported inside `S`. `-1` when a
/// generator is the constant monomial.
pub fn monomial_ideal_dimension(n: usize, leads: &[Monomial]) -> i64 {
    if leads.iter().any(Monomial::is_one) {
        return -1;
    }
    let supports: Vec<u64> = leads.iter().map(|m| m.support().fold(0u64, |acc, i| acc | (1 << i))).collect();
    let mut best = 0;
    for s in 0u64..(1u64 << n) {
        let size = s.count_ones() as i64;
        if size > best && supports.iter().all(|&sup| sup & !s != 0) {
            best = size;
        }
    }
    best
}

/// Krull dimension of `V(gens)`, read off the grevlex initial ideal; `-1` for the unit ideal.
pub fn krull_dimension(vars: &Vars, gens: &[Poly]) -> Result<i64> {
    let gb = groebner_basis(vars, gens, MonomialOrder::GrevLex)?;
    Ok(monomial_ideal_dimension(vars.len(), &gb.leading_monomials()))
}

fn module_gb(vars: &Vars, gens: &[PolyVector], rank: usize, order: MonomialOrder) -> Result<Vec<ModElem>> {
    for g in gens {
        if g.rank() != rank {
            return Err(Error::LengthMismatch { expected: rank, got: g.rank() });
        }
        check_uniform(vars, &g.entries)?;
    }
    let elems = gens.iter().map(|g| ModElem::from_vector(&g.entries, order)).collect();
    Ok(Buchberger::run(order, rank == 1, elems))
}

/// Generators of the syzygies of the vectors `gens` in a free module of rank `rank`:
/// all `(a_1..a_k)` with `sum a_j * gens_j = 0`.
pub fn module_syzygies(vars: &Vars, gens: &[PolyVector], rank: usize) -> Result<Vec<PolyVector>> {
    let k = gens.len();
    let mut ext = Vec::with_capacity(k);
    for (j, g) in gens.iter().enumerate() {
        if g.rank() != rank {
            return Err(Error::LengthMismatch { expected: rank, got: g.rank() });
        }
        let mut entries = g.entries.clone();
        for l in 0..k {
            entries.push(if l == j { Poly::one(vars) } else { Poly::zero(vars) });
        }
        ext.push(PolyVector::new(entries));
    }
    let order = MonomialOrder::GrevLex;
    let gb = module_gb(vars, &ext, rank + k, order)?;
    let mut syz: Vec<PolyVector> = gb
        .into_iter()
        .filter(|e| e.terms.iter().all(|t| t.pos >= rank))
        .map(|e| PolyVector::new(e.to_vector(vars, rank + k).split_off(rank)))
        .collect();
    // drop generators implied by the others
    let mut i = syz.len();
    while i > 0 {
        i -= 1;
        let others: Vec<PolyVector> = syz.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, v)| v.clone()).collect();
        if !others.is_empty() && module_membership(vars, &syz[i], &others)? {
            syz.remove(i);
        }
    }
    Ok(syz)
}

/// Syzygies of a list of polynomials.
pub fn syzygy_module(vars: &Vars, gens: &[Poly]) -> Result<Vec<PolyVector>> {
    let vecs: Vec<PolyVector> = gens.iter().map(|g| PolyVector::new(vec![g.clone()])).collect();
    module_syzygies(vars, &vecs, 1)
}

/// Whether `v` lies in the submodule generated by `gens`.
pub fn module_membership(vars: &Vars, v: &PolyVector, gens: &[PolyVector]) -> Result<bool> {
    check_uniform(vars, &v.entries)?;
    if v.is_zero() {
        return Ok(true);
    }
    let rank = v.rank();
    let order = MonomialOrder::GrevLex;
    let gb = module_gb(vars, gens, rank, order)?;
    let active: Vec<usize> = (0..gb.len()).collect();
    Ok(reduce(ModElem::from_vector(&v.entries, order), &gb, &active, order).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::vars;

    fn xy() -> Vars {
        vars(&["x", "y"]).unwrap()
    }

    fn ps(v: &Vars, s: &[&str]) -> Vec<Poly> {
        s.iter().map(|t| Poly::parse(t, v).unwrap()).collect()
    }

    fn pv(v: &Vars, s: &[&str]) -> PolyVector {
        PolyVector::new(ps(v, s))
    }

    #[test]
    fn lex_basis_of_small_system() {
        let v = xy();
        let gens = ps(&v, &["x*y - 1", "y^2 - 1"]);
        let gb = groebner_basis(&v, &gens, MonomialOrder::Lex).unwrap();
        assert_eq!(gb.basis, ps(&v, &["x - y", "y^2 - 1"]));
        for g in &gens {
            assert!(gb.normal_form(g).unwrap().is_zero());
        }
    }

    #[test]
    fn trivial_bases() {
        let v = xy();
        let gb = groebner_basis(&v, &ps(&v, &["x"]), MonomialOrder::GrevLex).unwrap();
        assert_eq!(gb.basis, ps(&v, &["x"]));
        let gb = groebner_basis(&v, &ps(&v, &["x", "x + 1"]), MonomialOrder::GrevLex).unwrap();
        assert_eq!(gb.basis, ps(&v, &["1"]));
        assert!(groebner_basis(&v, &[], MonomialOrder::GrevLex).unwrap().is_zero_ideal());
    }

    #[test]
    fn normal_forms() {
        let v = xy();
        let gb = groebner_basis(&v, &ps(&v, &["x*y"]), MonomialOrder::GrevLex).unwrap();
        assert!(normal_form(&Poly::parse("x^2*y", &v).unwrap(), &gb).unwrap().is_zero());
        let gb = groebner_basis(&v, &ps(&v, &["x^2"]), MonomialOrder::GrevLex).unwrap();
        assert_eq!(normal_form(&Poly::parse("x^2 + y", &v).unwrap(), &gb).unwrap(), ps(&v, &["y"])[0]);
        let gb = groebner_basis(&v, &ps(&v, &["x*y - 1", "y^2 - 1"]), MonomialOrder::Lex).unwrap();
        // x^2 -> x*y -> y^2 -> 1: the remainder may not keep y^2, which is
        // divisible by the leading monomial of y^2 - 1
        let nf = normal_form(&Poly::parse("x^2", &v).unwrap(), &gb).unwrap();
        assert_eq!(nf, Poly::one(&v));
        for t in ["x^2 - y^2", "x^2 - 1"] {
            assert!(ideal_membership(&Poly::parse(t, &v).unwrap(), &ps(&v, &["x*y - 1", "y^2 - 1"])).unwrap());
        }
    }

    #[test]
    fn membership_examples() {
        let v = xy();
        let gens = ps(&v, &["x^2", "x*y"]);
        assert!(!ideal_membership(&Poly::parse("x", &v).unwrap(), &gens).unwrap());
        assert!(ideal_membership(&Poly::parse("x^2*y^3", &v).unwrap(), &gens).unwrap());
        assert!(ideal_membership(&Poly::zero(&v), &gens).unwrap());
    }

    #[test]
    fn unit_ideal_examples() {
        let v = xy();
        assert!(is_unit_ideal(&v, &ps(&v, &["x", "x + 1"])).unwrap());
        assert!(!is_unit_ideal(&v, &ps(&v, &["x", "y"])).unwrap());
        assert!(!is_unit_ideal(&v, &ps(&v, &["x^2 + y^2", "x"])).unwrap());
        let gb = groebner_basis(&v, &ps(&v, &["x^2 + y^2", "x"]), MonomialOrder::GrevLex).unwrap();
        assert_eq!(gb.basis, ps(&v, &["y^2", "x"]));
    }

    #[test]
    fn dimension_examples() {
        let v = xy();
        assert_eq!(krull_dimension(&v, &ps(&v, &["x"])).unwrap(), 1);
        assert_eq!(krull_dimension(&v, &ps(&v, &["x", "y"])).unwrap(), 0);
        assert_eq!(krull_dimension(&v, &ps(&v, &["x^2", "x*y"])).unwrap(), 1);
        assert_eq!(krull_dimension(&v, &ps(&v, &["x", "x + 1"])).unwrap(), -1);
        assert_eq!(krull_dimension(&v, &[]).unwrap(), 2);
    }

    #[test]
    fn syzygy_examples() {
        let v = xy();
        let s = syzygy_module(&v, &ps(&v, &["x", "y"])).unwrap();
        assert_eq!(s, vec![pv(&v, &["y", "-x"])]);
        assert!(syzygy_module(&v, &ps(&v, &["x"])).unwrap().is_empty());
        assert_eq!(syzygy_module(&v, &ps(&v, &["x", "x"])).unwrap(), vec![pv(&v, &["1", "-1"])]);
        // zero generator
        assert_eq!(syzygy_module(&v, &ps(&v, &["0", "x"])).unwrap(), vec![pv(&v, &["1", "0"])]);
    }

    #[test]
    fn syzygies_satisfy_their_relation() {
        let v = xy();
        let gens = ps(&v, &["x^2*y - y", "x*y^2 + x", "x^3 - y^3"]);
        let s = syzygy_module(&v, &gens).unwrap();
        assert!(!s.is_empty());
        for vec in &s {
            let rel = vec.dot(&PolyVector::new(gens.clone())).unwrap();
            assert!(rel.is_zero());
        }
        // the Koszul syzygies lie in the computed module
        let koszul = PolyVector::new(vec![gens[1].clone(), -&gens[0], Poly::zero(&v)]);
        assert!(module_membership(&v, &koszul, &s).unwrap());
    }

    #[test]
    fn module_membership_examples() {
        let v = xy();
        let g = vec![pv(&v, &["y", "-x"])];
        assert!(module_membership(&v, &pv(&v, &["y", "-x"]), &g).unwrap());
        let g = vec![pv(&v, &["0", "x"]), pv(&v, &["y", "0"])];
        assert!(!module_membership(&v, &pv(&v, &["x", "-y"]), &g).unwrap());
        assert!(module_membership(&v, &pv(&v, &["x*y", "x^2"]), &g).unwrap());
        assert!(module_membership(&v, &PolyVector::zero(&v, 2), &g).unwrap());
        assert!(matches!(
            module_membership(&v, &pv(&v, &["x"]), &g),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn permutation_invariance() {
        let v = vars(&["x", "y", "z"]).unwrap();
        let gens = ps(&v, &["x*y - z", "y*z - x", "x*z - y^2"]);
        let a = groebner_basis(&v, &gens, MonomialOrder::GrevLex).unwrap();
        let mut rev = gens.clone();
        rev.reverse();
        let b = groebner_basis(&v, &rev, MonomialOrder::GrevLex).unwrap();
        assert_eq!(a, b);
        for g in &gens {
            assert!(a.contains(g).unwrap());
        }
    }
}
