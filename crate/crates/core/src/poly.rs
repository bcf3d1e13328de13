//! Sparse multivariate polynomials over `Q(i)`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::expr::{self, Expr};
use crate::monomial::{Monomial, MonomialOrder};
use crate::scalar::GaussianRational;

/// An ordered list of variable names shared by polynomials over one ring.
pub type Vars = Arc<[String]>;

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Builds a validated variable list: distinct identifiers, none equal to `i`.
pub fn vars<S: AsRef<str>>(names: &[S]) -> Result<Vars> {
    let mut seen = std::collections::BTreeSet::new();
    for n in names {
        let n = n.as_ref();
        if !is_identifier(n) {
            return Err(Error::InvalidVariables(format!("`{n}` is not an identifier")));
        }
        if n == "i" {
            return Err(Error::InvalidVariables("`i` is reserved for the imaginary unit".into()));
        }
        if !seen.insert(n.to_string()) {
            return Err(Error::InvalidVariables(format!("`{n}` declared twice")));
        }
    }
    Ok(names.iter().map(|s| s.as_ref().to_string()).collect::<Vec<_>>().into())
}

pub(crate) fn same_vars(a: &Vars, b: &Vars) -> bool {
    Arc::ptr_eq(a, b) || a[..] == b[..]
}

#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    vars: Vars,
    terms: BTreeMap<Monomial, GaussianRational>,
}

impl Poly {
    pub fn zero(vars: &Vars) -> Self {
        Poly { vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(vars: &Vars, c: GaussianRational) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(vars.len()), c);
        }
        p
    }

    pub fn one(vars: &Vars) -> Self {
        Self::constant(vars, GaussianRational::one())
    }

    pub fn var(vars: &Vars, i: usize) -> Self {
        Self::monomial(vars, Monomial::var(vars.len(), i), GaussianRational::one())
    }

    pub fn monomial(vars: &Vars, m: Monomial, c: GaussianRational) -> Self {
        debug_assert_eq!(m.len(), vars.len());
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn from_terms<I>(vars: &Vars, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, GaussianRational)>,
    {
        let mut p = Self::zero(vars);
        for (m, c) in terms {
            p.add_term(m, &c);
        }
        p
    }

    /// Parses the expression grammar; identifiers must be declared variables.
    pub fn parse(text: &str, vars: &Vars) -> Result<Self> {
        let e = expr::parse(text)?;
        Self::from_expr(&e, vars)
    }

    pub(crate) fn from_expr(e: &Expr, vars: &Vars) -> Result<Self> {
        expr::fold(e, &mut |leaf| match leaf {
            expr::Leaf::Number(c) => Ok(Poly::constant(vars, c.clone())),
            expr::Leaf::Ident(name, offset) => match vars.iter().position(|v| v == name) {
                Some(i) => Ok(Poly::var(vars, i)),
                None => Err(Error::UnknownIdentifier { name: name.clone(), offset: *offset }),
            },
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

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> GaussianRational {
        self.terms.get(m).cloned().unwrap_or_else(GaussianRational::zero)
    }

    pub fn constant_term(&self) -> GaussianRational {
        self.coeff(&Monomial::one(self.nvars()))
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn add_term(&mut self, m: Monomial, c: &GaussianRational) {
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

    pub fn leading_term(&self, order: MonomialOrder) -> Option<(&Monomial, &GaussianRational)> {
        self.terms.iter().max_by(|a, b| order.cmp(a.0, b.0))
    }

    /// Terms sorted by decreasing `order`.
    pub fn sorted_terms(&self, order: MonomialOrder) -> Vec<(Monomial, GaussianRational)> {
        let mut t: Vec<_> = self.terms.iter().map(|(m, c)| (m.clone(), c.clone())).collect();
        t.sort_by(|a, b| order.cmp(&b.0, &a.0));
        t
    }

    pub fn scale(&self, c: &GaussianRational) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.vars);
        }
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &GaussianRational) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.vars);
        }
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(k, a)| (k.mul(m), a * c)).collect(),
        }
    }

    fn check_same(&self, other: &Poly) -> Result<()> {
        if same_vars(&self.vars, &other.vars) {
            Ok(())
        } else {
            Err(Error::AmbientMismatch)
        }
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), &-c);
        }
        Ok(out)
    }

    /// Exact product; fails when the ambient variable lists differ.
    pub fn checked_mul(&self, other: &Poly) -> Result<Poly> {
        self.check_same(other)?;
        let mut out = Poly::zero(&self.vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), &(ca * cb));
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(&self.vars);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Formal partial derivative with respect to variable `var`.
    pub fn diff(&self, var: usize) -> Result<Poly> {
        if var >= self.nvars() {
            return Err(Error::IndexOutOfRange { index: var, len: self.nvars() });
        }
        let mut out = Poly::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[var] -= 1;
            out.add_term(m2, &(c * &GaussianRational::from(e as i64)));
        }
        Ok(out)
    }

    pub fn eval(&self, point: &[GaussianRational]) -> Result<GaussianRational> {
        if point.len() != self.nvars() {
            return Err(Error::LengthMismatch { expected: self.nvars(), got: point.len() });
        }
        let mut acc = GaussianRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t = &t * &x.pow(e);
                }
            }
            acc += &t;
        }
        Ok(acc)
    }

    /// Substitutes a value for one variable, keeping the ambient.
    pub fn substitute(&self, var: usize, value: &GaussianRational) -> Poly {
        let mut out = Poly::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            let mut m2 = m.clone();
            m2.0[var] = 0;
            out.add_term(m2, &(c * &value.pow(e)));
        }
        out
    }

    /// Re-embeds into a larger ambient; `map[i]` is the new index of variable `i`.
    pub fn embed(&self, target: &Vars, map: &[usize]) -> Poly {
        let n = target.len();
        let mut out = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut e = vec![0; n];
            for (i, &k) in m.0.iter().enumerate() {
                e[map[i]] += k;
            }
            out.add_term(Monomial(e), c);
        }
        out
    }

    /// Divides by the leading coefficient under `order`.
    pub fn monic(&self, order: MonomialOrder) -> Poly {
        match self.leading_term(order) {
            None => self.clone(),
            Some((_, c)) => {
                let inv = c.inv().expect("nonzero leading coefficient");
                self.scale(&inv)
            }
        }
    }

    /// Exact quotient `self / d`, `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let order = MonomialOrder::GrevLex;
        let (lm, lc) = d.leading_term(order)?;
        let (lm, lc_inv) = (lm.clone(), lc.inv()?);
        let mut rem = self.clone();
        let mut q = Poly::zero(&self.vars);
        while let Some((m, c)) = rem.leading_term(order) {
            if !lm.divides(m) {
                return None;
            }
            let t = lm.quotient_of(m);
            let c = c * &lc_inv;
            rem = &rem - &d.mul_monomial(&t, &c);
            q.add_term(t, &c);
        }
        Some(q)
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.checked_add(rhs).expect("ambient mismatch")
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.checked_sub(rhs).expect("ambient mismatch")
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.checked_mul(rhs).expect("ambient mismatch")
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-GaussianRational::one())
    }
}

/// Writes `coeff * monomial` terms, sign pulled out, with `names` for the variables.
pub(crate) fn write_terms<'a, I>(f: &mut fmt::Formatter<'_>, terms: I) -> fmt::Result
where
    I: IntoIterator<Item = (String, &'a GaussianRational)>,
{
    let mut first = true;
    for (mono, c) in terms {
        let neg = c.is_negative_like();
        let abs = if neg { -c } else { c.clone() };
        if first {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, "{}", if neg { " - " } else { " + " })?;
        }
        first = false;
        match (mono.is_empty(), abs.is_one()) {
            (true, _) => write!(f, "{abs}")?,
            (false, true) => write!(f, "{mono}")?,
            (false, false) => write!(f, "{abs}*{mono}")?,
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

pub(crate) fn monomial_string(names: &[String], m: &Monomial) -> String {
    let mut parts = Vec::new();
    for (name, &e) in names.iter().zip(&m.0) {
        match e {
            0 => {}
            1 => parts.push(name.clone()),
            _ => parts.push(format!("{name}^{e}")),
        }
    }
    parts.join("*")
}

/// Prints in the expression grammar, terms in decreasing grevlex order.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut t: Vec<_> = self.terms.iter().collect();
        t.sort_by(|a, b| MonomialOrder::GrevLex.cmp(b.0, a.0));
        write_terms(f, t.into_iter().map(|(m, c)| (monomial_string(&self.vars, m), c)))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

/// A fixed-length vector of polynomials over one ambient: an element of a free module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyVector {
    pub entries: Vec<Poly>,
}

impl PolyVector {
    pub fn new(entries: Vec<Poly>) -> Self {
        PolyVector { entries }
    }

    pub fn zero(vars: &Vars, rank: usize) -> Self {
        PolyVector { entries: vec![Poly::zero(vars); rank] }
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Poly::is_zero)
    }

    /// `sum_i self[i] * other[i]`.
    pub fn dot(&self, other: &PolyVector) -> Result<Poly> {
        if self.rank() != other.rank() {
            return Err(Error::LengthMismatch { expected: self.rank(), got: other.rank() });
        }
        let vars = match self.entries.first() {
            Some(p) => p.vars().clone(),
            None => return Err(Error::LengthMismatch { expected: 1, got: 0 }),
        };
        let mut acc = Poly::zero(&vars);
        for (a, b) in self.entries.iter().zip(&other.entries) {
            acc = acc.checked_add(&a.checked_mul(b)?)?;
        }
        Ok(acc)
    }
}

impl fmt::Display for PolyVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}
