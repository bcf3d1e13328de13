//! The Weyl algebra `A_n` of polynomial-coefficient differential operators.
//!
//! Operators are stored normally ordered: every term is `c * x^a * d^b` with
//! all multiplications by coordinates to the left of all derivatives. The
//! product restores normal order with
//! `d^b * x^c = sum_k prod_i C(b_i, k_i) * c_i!/(c_i - k_i)! * x^(c-k) * d^(b-k)`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::expr::{self, ExprTarget};
use crate::monomial::{monomials_up_to, Monomial};
use crate::poly::{monomial_string, same_vars, write_terms, Poly, Vars};
use crate::scalar::GaussianRational;

/// A normally ordered monomial `x^x * d^d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeylMonomial {
    pub x: Monomial,
    pub d: Monomial,
}

impl WeylMonomial {
    pub fn new(x: Monomial, d: Monomial) -> Self {
        WeylMonomial { x, d }
    }

    /// Total degree in `x` and `d` (Bernstein degree).
    pub fn degree(&self) -> u32 {
        self.x.degree() + self.d.degree()
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct WeylOp {
    vars: Vars,
    terms: BTreeMap<WeylMonomial, GaussianRational>,
}

fn falling(c: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, j| acc * BigInt::from(c - j))
}

fn binomial(b: u32, k: u32) -> BigInt {
    falling(b, k) / falling(k, k)
}

/// Coefficient list of `d^b * x^c` in normal order, as `(x-exp, d-exp, coeff)`.
fn reorder(b: &Monomial, c: &Monomial) -> Vec<(Monomial, Monomial, BigInt)> {
    let mut acc: Vec<(Vec<u32>, Vec<u32>, BigInt)> = vec![(Vec::new(), Vec::new(), BigInt::one())];
    for (&bi, &ci) in b.0.iter().zip(&c.0) {
        let mut next = Vec::new();
        for (xs, ds, coef) in &acc {
            for k in 0..=bi.min(ci) {
                let w = binomial(bi, k) * falling(ci, k);
                let mut xs = xs.clone();
                let mut ds = ds.clone();
                xs.push(ci - k);
                ds.push(bi - k);
                next.push((xs, ds, coef * &w));
            }
        }
        acc = next;
    }
    acc.into_iter().map(|(x, d, c)| (Monomial(x), Monomial(d), c)).collect()
}

impl WeylOp {
    pub fn zero(vars: &Vars) -> Self {
        WeylOp { vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn one(vars: &Vars) -> Self {
        Self::constant(vars, GaussianRational::one())
    }

    pub fn constant(vars: &Vars, c: GaussianRational) -> Self {
        let n = vars.len();
        Self::term(vars, WeylMonomial::new(Monomial::one(n), Monomial::one(n)), c)
    }

    pub fn term(vars: &Vars, m: WeylMonomial, c: GaussianRational) -> Self {
        let mut op = Self::zero(vars);
        op.add_term(m, &c);
        op
    }

    /// Multiplication by the coordinate `x_i`.
    pub fn x(vars: &Vars, i: usize) -> Self {
        let n = vars.len();
        Self::term(vars, WeylMonomial::new(Monomial::var(n, i), Monomial::one(n)), GaussianRational::one())
    }

    /// The derivation `d/dx_i`.
    pub fn d(vars: &Vars, i: usize) -> Self {
        let n = vars.len();
        Self::term(vars, WeylMonomial::new(Monomial::one(n), Monomial::var(n, i)), GaussianRational::one())
    }

    /// A polynomial as a multiplication operator.
    pub fn from_poly(p: &Poly) -> Self {
        let n = p.nvars();
        let mut op = Self::zero(p.vars());
        for (m, c) in p.terms() {
            op.add_term(WeylMonomial::new(m.clone(), Monomial::one(n)), c);
        }
        op
    }

    /// Parses an operator; identifiers are variables or `d<var>` for the derivation.
    ///
    /// Products keep their written order, so `dx*x` is `x*dx + 1`.
    pub fn parse(text: &str, vars: &Vars) -> Result<Self> {
        let e = expr::parse(text)?;
        expr::fold(&e, &mut |leaf| match leaf {
            expr::Leaf::Number(c) => Ok(WeylOp::constant(vars, c.clone())),
            expr::Leaf::Ident(name, offset) => {
                if let Some(i) = vars.iter().position(|v| v == name) {
                    return Ok(WeylOp::x(vars, i));
                }
                if let Some(rest) = name.strip_prefix('d') {
                    if let Some(i) = vars.iter().position(|v| v == rest) {
                        return Ok(WeylOp::d(vars, i));
                    }
                }
                Err(Error::UnknownIdentifier { name: name.clone(), offset: *offset })
            }
        })
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&WeylMonomial, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: WeylMonomial, c: &GaussianRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Highest total derivative degree; `None` for zero.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.d.degree()).max()
    }

    /// Highest total degree in `x` and `d`; `None` for zero.
    pub fn bernstein_degree(&self) -> Option<u32> {
        self.terms.keys().map(WeylMonomial::degree).max()
    }

    fn check_same(&self, other: &WeylOp) -> Result<()> {
        if same_vars(&self.vars, &other.vars) {
            Ok(())
        } else {
            Err(Error::AmbientMismatch)
        }
    }

    pub fn checked_add(&self, other: &WeylOp) -> Result<WeylOp> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &WeylOp) -> Result<WeylOp> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), &-c);
        }
        Ok(out)
    }

    pub fn scale(&self, c: &GaussianRational) -> WeylOp {
        let mut out = WeylOp::zero(&self.vars);
        for (m, a) in &self.terms {
            out.add_term(m.clone(), &(a * c));
        }
        out
    }

    /// Product in `A_n`, restoring normal order.
    pub fn checked_mul(&self, other: &WeylOp) -> Result<WeylOp> {
        self.check_same(other)?;
        let mut out = WeylOp::zero(&self.vars);
        let mut cache: BTreeMap<(&Monomial, &Monomial), Vec<(Monomial, Monomial, BigInt)>> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let c = ca * cb;
                let expansion = cache.entry((&ma.d, &mb.x)).or_insert_with(|| reorder(&ma.d, &mb.x));
                for (x, d, w) in expansion.iter() {
                    let coeff = &c * &GaussianRational::real(BigRational::from_integer(w.clone()));
                    out.add_term(WeylMonomial::new(ma.x.mul(x), d.mul(&mb.d)), &coeff);
                }
            }
        }
        Ok(out)
    }

    pub fn commutator(&self, other: &WeylOp) -> Result<WeylOp> {
        self.checked_mul(other)?.checked_sub(&other.checked_mul(self)?)
    }

    /// The top-order part with `d_i` replaced by `xi_i`, a polynomial on the
    /// cotangent bundle in variables `(x_1..x_n, xi_1..xi_n)`.
    pub fn principal_symbol(&self) -> Result<SymbolPoly> {
        let ord = self.order().ok_or(Error::ZeroOperator)?;
        let sv = symbol_vars(&self.vars);
        let mut p = Poly::zero(&sv);
        for (m, c) in &self.terms {
            if m.d.degree() == ord {
                let mut e = m.x.0.clone();
                e.extend_from_slice(&m.d.0);
                p.add_term(Monomial(e), c);
            }
        }
        Ok(SymbolPoly { poly: p, order: ord })
    }

    /// Action on polynomials: `x^a d^b (f) = x^a * (d^b f)`.
    pub fn apply(&self, f: &Poly) -> Result<Poly> {
        if !same_vars(&self.vars, f.vars()) {
            return Err(Error::AmbientMismatch);
        }
        let mut out = Poly::zero(&self.vars);
        for (m, c) in &self.terms {
            let mut g = f.clone();
            for (i, &k) in m.d.0.iter().enumerate() {
                for _ in 0..k {
                    g = g.diff(i)?;
                }
            }
            if g.is_zero() {
                continue;
            }
            out = &out + &g.mul_monomial(&m.x, c);
        }
        Ok(out)
    }

    /// Writes the operator in the grammar with `d<var>` derivation tokens.
    pub fn to_grammar_string(&self) -> String {
        self.to_string()
    }
}

impl ExprTarget for WeylOp {
    fn add(&self, rhs: &Self) -> Self {
        self.checked_add(rhs).expect("ambient mismatch")
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.checked_sub(rhs).expect("ambient mismatch")
    }
    fn mul(&self, rhs: &Self) -> Self {
        self.checked_mul(rhs).expect("ambient mismatch")
    }
    fn neg(&self) -> Self {
        self.scale(&-GaussianRational::one())
    }
    fn pow(&self, e: u32) -> Self {
        let mut acc = WeylOp::one(&self.vars);
        for _ in 0..e {
            acc = acc.checked_mul(self).expect("same ambient");
        }
        acc
    }
}

/// Prints terms by decreasing Bernstein degree, then decreasing grevlex on `(x, d)`.
impl fmt::Display for WeylOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dnames: Vec<String> = self.vars.iter().map(|v| format!("d{v}")).collect();
        let key = |m: &WeylMonomial| {
            let mut e = m.x.0.clone();
            e.extend_from_slice(&m.d.0);
            Monomial(e)
        };
        let mut t: Vec<_> = self.terms.iter().collect();
        t.sort_by(|a, b| crate::monomial::MonomialOrder::GrevLex.cmp(&key(b.0), &key(a.0)));
        write_terms(
            f,
            t.into_iter().map(|(m, c)| {
                let xs = monomial_string(&self.vars, &m.x);
                let ds = monomial_string(&dnames, &m.d);
                let s = match (xs.is_empty(), ds.is_empty()) {
                    (true, _) => ds,
                    (false, true) => xs,
                    (false, false) => format!("{xs}*{ds}"),
                };
                (s, c)
            }),
        )
    }
}

impl fmt::Debug for WeylOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeylOp({self})")
    }
}

/// Variables of the cotangent bundle: the coordinates followed by `xi_<var>`.
pub fn symbol_vars(vars: &Vars) -> Vars {
    let mut names: Vec<String> = vars.to_vec();
    names.extend(vars.iter().map(|v| format!("xi_{v}")));
    names.into()
}

/// A principal symbol: a polynomial in `(x, xi)` homogeneous of degree
/// `order` in `xi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolPoly {
    pub poly: Poly,
    pub order: u32,
}

impl fmt::Display for SymbolPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly)
    }
}

/// All normally ordered monomials `x^a d^b` with `|a| + |b| <= level`, by
/// increasing Bernstein degree. There are `C(2n + level, 2n)` of them.
pub fn bernstein_monomials(n: usize, level: u32) -> Vec<WeylMonomial> {
    monomials_up_to(2 * n, level)
        .into_iter()
        .map(|m| {
            let mut x = m.0;
            let d = x.split_off(n);
            WeylMonomial::new(Monomial(x), Monomial(d))
        })
        .collect()
}

/// The monomial basis of the Bernstein filtration piece `F_level` as operators.
pub fn bernstein_basis(vars: &Vars, level: u32) -> Vec<WeylOp> {
    bernstein_monomials(vars.len(), level)
        .into_iter()
        .map(|m| WeylOp::term(vars, m, GaussianRational::one()))
        .collect()
}
