//! Modules of polynomial vector fields on affine space.
//!
//! A foliation is presented by finitely many vector fields `v_j = sum_i a_ji d_i`.
//! Most invariants here are read off the `r x n` coefficient matrix `(a_ji)`:
//! its rank over the fraction field, its minor ideals and its syzygies.

use std::fmt;


use crate::error::{Error, Result};
use crate::groebner::{is_unit_ideal, krull_dimension, module_membership, module_syzygies};
use crate::linalg::dense_rank;
use crate::monomial::Monomial;
use crate::poly::{same_vars, Poly, PolyVector, Vars};
use crate::scalar::GaussianRational;
use crate::weyl::{WeylMonomial, WeylOp};

/// A vector field `sum_i a_i d_i` with polynomial coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct VectorField {
    vars: Vars,
    coeffs: Vec<Poly>,
}

impl VectorField {
    pub fn new(vars: &Vars, coeffs: Vec<Poly>) -> Result<Self> {
        if coeffs.len() != vars.len() {
            return Err(Error::LengthMismatch { expected: vars.len(), got: coeffs.len() });
        }
        if !coeffs.iter().all(|c| same_vars(c.vars(), vars)) {
            return Err(Error::AmbientMismatch);
        }
        Ok(VectorField { vars: vars.clone(), coeffs })
    }

    pub fn zero(vars: &Vars) -> Self {
        VectorField { vars: vars.clone(), coeffs: vec![Poly::zero(vars); vars.len()] }
    }

    /// The coordinate field `d_i`.
    pub fn coordinate(vars: &Vars, i: usize) -> Self {
        let mut v = Self::zero(vars);
        v.coeffs[i] = Poly::one(vars);
        v
    }

    /// Reads a vector field off an operator. Every term must have derivative
    /// degree exactly one.
    pub fn from_weyl(op: &WeylOp) -> Result<Self> {
        let vars = op.vars().clone();
        let mut v = Self::zero(&vars);
        for (m, c) in op.terms() {
            match m.d.degree() {
                1 => {
                    let i = m.d.support().next().expect("degree one");
                    v.coeffs[i].add_term(m.x.clone(), c);
                }
                0 => {
                    return Err(Error::NotAVectorField(format!(
                        "nonzero constant term in `{}`",
                        op.to_grammar_string()
                    )))
                }
                k => {
                    return Err(Error::NotAVectorField(format!(
                        "order {k} term in `{}`",
                        op.to_grammar_string()
                    )))
                }
            }
        }
        Ok(v)
    }

    /// Parses the operator grammar (`x*dy - y*dx`) and checks it is a vector field.
    pub fn parse(text: &str, vars: &Vars) -> Result<Self> {
        Self::from_weyl(&WeylOp::parse(text, vars)?)
    }

    pub fn to_weyl(&self) -> WeylOp {
        let n = self.vars.len();
        let mut op = WeylOp::zero(&self.vars);
        for (i, a) in self.coeffs.iter().enumerate() {
            for (m, c) in a.terms() {
                op.add_term(WeylMonomial::new(m.clone(), Monomial::var(n, i)), c);
            }
        }
        op
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn coefficients(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn to_vector(&self) -> PolyVector {
        PolyVector::new(self.coeffs.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Poly::is_zero)
    }

    /// `v(f) = sum_i a_i * df/dx_i`
    pub fn apply(&self, f: &Poly) -> Result<Poly> {
        if !same_vars(&self.vars, f.vars()) {
            return Err(Error::AmbientMismatch);
        }
        let mut out = Poly::zero(&self.vars);
        for (i, a) in self.coeffs.iter().enumerate() {
            if !a.is_zero() {
                out = &out + &(a * &f.diff(i)?);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, f: &Poly) -> Result<VectorField> {
        let coeffs = self.coeffs.iter().map(|a| a.checked_mul(f)).collect::<Result<_>>()?;
        Ok(VectorField { vars: self.vars.clone(), coeffs })
    }

    pub fn checked_add(&self, other: &VectorField) -> Result<VectorField> {
        if !same_vars(&self.vars, &other.vars) {
            return Err(Error::AmbientMismatch);
        }
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(VectorField { vars: self.vars.clone(), coeffs })
    }

    /// Evaluates the coefficients at a point.
    pub fn at(&self, point: &[GaussianRational]) -> Result<Vec<GaussianRational>> {
        self.coeffs.iter().map(|a| a.eval(point)).collect()
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_weyl())
    }
}

impl fmt::Debug for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VectorField({self})")
    }
}

/// `[v, w]_k = sum_i (v_i * d_i w_k - w_i * d_i v_k)`
pub fn lie_bracket(v: &VectorField, w: &VectorField) -> Result<VectorField> {
    if !same_vars(&v.vars, &w.vars) {
        return Err(Error::AmbientMismatch);
    }
    let coeffs = (0..v.vars.len())
        .map(|k| Ok(&v.apply(&w.coeffs[k])? - &w.apply(&v.coeffs[k])?))
        .collect::<Result<_>>()?;
    Ok(VectorField { vars: v.vars.clone(), coeffs })
}

/// A finite nonempty list of nonzero vector fields over one ambient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoliationPresentation {
    vars: Vars,
    generators: Vec<VectorField>,
}

impl FoliationPresentation {
    pub fn new(vars: &Vars, generators: Vec<VectorField>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::InvalidPresentation("no generators".into()));
        }
        for (j, g) in generators.iter().enumerate() {
            if !same_vars(&g.vars, vars) {
                return Err(Error::AmbientMismatch);
            }
            if g.is_zero() {
                return Err(Error::InvalidPresentation(format!("generator {j} is zero")));
            }
        }
        Ok(FoliationPresentation { vars: vars.clone(), generators })
    }

    pub fn parse<S: AsRef<str>>(vars: &Vars, fields: &[S]) -> Result<Self> {
        let gens = fields.iter().map(|s| VectorField::parse(s.as_ref(), vars)).collect::<Result<_>>()?;
        Self::new(vars, gens)
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn generators(&self) -> &[VectorField] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// The coefficient matrix, one row per generator.
    pub fn matrix(&self) -> Vec<Vec<Poly>> {
        self.generators.iter().map(|g| g.coeffs.clone()).collect()
    }

    pub fn vectors(&self) -> Vec<PolyVector> {
        self.generators.iter().map(VectorField::to_vector).collect()
    }

    pub fn operators(&self) -> Vec<WeylOp> {
        self.generators.iter().map(VectorField::to_weyl).collect()
    }

    /// Every coefficient of every generator.
    pub fn all_coefficients(&self) -> Vec<Poly> {
        self.generators.iter().flat_map(|g| g.coeffs.iter().filter(|c| !c.is_zero()).cloned()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieClosureReport {
    pub closed: bool,
    pub failing_pair: Option<(usize, usize)>,
    /// The bracket of the failing pair.
    pub bracket: Option<VectorField>,
}

/// Whether every generator bracket lies in the module spanned by the generators.
///
/// Pairs suffice: `[fv, gw] = fg[v,w] + f v(g) w - g w(f) v`.
pub fn check_lie_subalgebra(f: &FoliationPresentation) -> Result<LieClosureReport> {
    let gens = f.vectors();
    let r = f.len();
    for i in 0..r {
        for j in i + 1..r {
            let b = lie_bracket(&f.generators[i], &f.generators[j])?;
            if !module_membership(&f.vars, &b.to_vector(), &gens)? {
                return Ok(LieClosureReport { closed: false, failing_pair: Some((i, j)), bracket: Some(b) });
            }
        }
    }
    Ok(LieClosureReport { closed: true, failing_pair: None, bracket: None })
}

/// Generators of a module of 1-forms, each a covector of `dx_i` coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneFormModule {
    pub vars: Vars,
    pub generators: Vec<PolyVector>,
}

impl OneFormModule {
    pub fn pair(&self, k: usize, v: &VectorField) -> Result<Poly> {
        self.generators[k].dot(&v.to_vector())
    }

    /// Writes generator `k` as `a*dx + b*dy`.
    pub fn form_string(&self, k: usize) -> String {
        let mut out = String::new();
        for (i, c) in self.generators[k].entries.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let text = c.to_string();
            let (negative, body) = match text.strip_prefix('-') {
                Some(rest) if c.len() == 1 => (true, rest.to_string()),
                _ => (false, text),
            };
            let name = format!("d{}", self.vars[i]);
            let term = if body == "1" {
                name
            } else if c.len() == 1 {
                format!("{body}*{name}")
            } else {
                format!("({body})*{name}")
            };
            match (out.is_empty(), negative) {
                (true, true) => out.push('-'),
                (true, false) => {}
                (false, true) => out.push_str(" - "),
                (false, false) => out.push_str(" + "),
            }
            out.push_str(&term);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

/// Columns of a list of length-`n` vectors: `n` vectors of length `rows.len()`.
fn columns(vars: &Vars, rows: &[PolyVector], n: usize) -> Vec<PolyVector> {
    (0..n)
        .map(|i| PolyVector::new(rows.iter().map(|r| r.entries[i].clone()).collect()))
        .map(|c| if c.entries.is_empty() { PolyVector::zero(vars, 0) } else { c })
        .collect()
}

/// Covectors annihilating every vector in `rows`; all of `R^n` when `rows` is empty.
fn annihilator(vars: &Vars, rows: &[PolyVector], n: usize) -> Result<Vec<PolyVector>> {
    if rows.is_empty() {
        return Ok((0..n)
            .map(|i| PolyVector::new((0..n).map(|k| if k == i { Poly::one(vars) } else { Poly::zero(vars) }).collect()))
            .collect());
    }
    module_syzygies(vars, &columns(vars, rows, n), rows.len())
}

/// All 1-forms pairing to zero with every generator.
pub fn orthogonal_complement(f: &FoliationPresentation) -> Result<OneFormModule> {
    let generators = annihilator(&f.vars, &f.vectors(), f.nvars())?;
    Ok(OneFormModule { vars: f.vars.clone(), generators })
}

/// Whether the generator module equals the annihilator of its orthogonal
/// complement. Fails for presentations that are not saturated, such as `x*dx`
/// on the line.
pub fn double_orthogonal_check(f: &FoliationPresentation) -> Result<bool> {
    let n = f.nvars();
    let perp = orthogonal_complement(f)?;
    let perp_perp = annihilator(&f.vars, &perp.generators, n)?;
    let gens = f.vectors();
    for g in &gens {
        if !module_membership(&f.vars, g, &perp_perp)? {
            return Ok(false);
        }
    }
    for p in &perp_perp {
        if !module_membership(&f.vars, p, &gens)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegrabilityReport {
    pub forms: OneFormModule,
    /// `pairings[k][i][j] = d(omega_k)(v_i, v_j)`
    pub pairings: Vec<Vec<Vec<Poly>>>,
    pub all_zero: bool,
}

/// Evaluates `d omega(v_i, v_j) = v_i<omega, v_j> - v_j<omega, v_i> - <omega, [v_i, v_j]>`
/// for every generator `omega` of the orthogonal complement.
pub fn dual_integrability_check(f: &FoliationPresentation) -> Result<IntegrabilityReport> {
    let forms = orthogonal_complement(f)?;
    let r = f.len();
    let mut pairings = Vec::with_capacity(forms.generators.len());
    let mut all_zero = true;
    for k in 0..forms.generators.len() {
        let mut table = vec![vec![Poly::zero(&f.vars); r]; r];
        let inner: Vec<Poly> = f.generators.iter().map(|v| forms.pair(k, v)).collect::<Result<_>>()?;
        for i in 0..r {
            for j in 0..r {
                if i == j {
                    continue;
                }
                let (vi, vj) = (&f.generators[i], &f.generators[j]);
                let b = lie_bracket(vi, vj)?;
                let value = &(&vi.apply(&inner[j])? - &vj.apply(&inner[i])?) - &forms.pair(k, &b)?;
                all_zero &= value.is_zero();
                table[i][j] = value;
            }
        }
        pairings.push(table);
    }
    Ok(IntegrabilityReport { forms, pairings, all_zero })
}

/// Rank over the fraction field by fraction-free elimination.
pub fn fraction_field_rank(matrix: &[Vec<Poly>], vars: &Vars) -> Result<usize> {
    let mut m: Vec<Vec<Poly>> = matrix.to_vec();
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut prev = Poly::one(vars);
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(rank, p);
        for i in rank + 1..rows {
            for j in c + 1..cols {
                let num = &(&m[rank][c] * &m[i][j]) - &(&m[i][c] * &m[rank][j]);
                m[i][j] = num
                    .div_exact(&prev)
                    .ok_or_else(|| Error::Inconsistent("inexact fraction-free division".into()))?;
            }
            m[i][c] = Poly::zero(vars);
        }
        prev = m[rank][c].clone();
        rank += 1;
    }
    Ok(rank)
}

pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

fn determinant(m: &[Vec<Poly>], vars: &Vars) -> Poly {
    match m.len() {
        0 => Poly::one(vars),
        1 => m[0][0].clone(),
        n => {
            let mut acc = Poly::zero(vars);
            for c in 0..n {
                if m[0][c].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<Poly>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, p)| p.clone()).collect())
                    .collect();
                let t = &m[0][c] * &determinant(&minor, vars);
                acc = if c % 2 == 0 { &acc + &t } else { &acc - &t };
            }
            acc
        }
    }
}

/// The nonzero `t x t` minors of the coefficient matrix, without repeats.
/// The empty minor (`t = 0`) is `1`.
pub fn minors(f: &FoliationPresentation, t: usize) -> Vec<Poly> {
    let m = f.matrix();
    let (r, n) = (m.len(), f.nvars());
    let mut out: Vec<Poly> = Vec::new();
    for rs in combinations(r, t) {
        for cs in combinations(n, t) {
            let sub: Vec<Vec<Poly>> = rs.iter().map(|&i| cs.iter().map(|&j| m[i][j].clone()).collect()).collect();
            let d = determinant(&sub, &f.vars);
            if !d.is_zero() && !out.contains(&d) {
                out.push(d);
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RankProfile {
    pub rk: usize,
    pub cork: usize,
    pub irr: usize,
}

/// Generic rank, minimal pointwise rank over the algebraic closure, and their difference.
pub fn rank_profile(f: &FoliationPresentation) -> Result<RankProfile> {
    let rk = fraction_field_rank(&f.matrix(), &f.vars)?;
    let mut cork = rk;
    for t in 0..rk {
        if !is_unit_ideal(&f.vars, &minors(f, t + 1))? {
            cork = t;
            break;
        }
    }
    Ok(RankProfile { rk, cork, irr: rk - cork })
}

/// The locus where the fiber dimension is `rk - j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stratum {
    pub j: usize,
    /// Minors of size `rk - j + 1`; empty for `j = 0`.
    pub vanishing_ideal: Vec<Poly>,
    /// Minors of size `rk - j`.
    pub nonvanishing_ideal: Vec<Poly>,
    /// Dimension of the zero set of the vanishing ideal.
    pub closure_dimension: i64,
    pub nonempty: bool,
}

fn fresh_name(vars: &Vars) -> String {
    let mut name = "t".to_string();
    while vars.contains(&name) {
        name.push('_');
    }
    name
}

/// Whether `V(vanishing) \ V(nonvanishing)` has a point over the algebraic
/// closure, by adding `1 - t*g` for each `g` in turn.
pub fn locally_closed_nonempty(vars: &Vars, vanishing: &[Poly], nonvanishing: &[Poly]) -> Result<bool> {
    let mut names: Vec<String> = vars.to_vec();
    names.push(fresh_name(vars));
    let ext = crate::poly::vars(&names)?;
    let map: Vec<usize> = (0..vars.len()).collect();
    let base: Vec<Poly> = vanishing.iter().map(|p| p.embed(&ext, &map)).collect();
    let t = Poly::var(&ext, vars.len());
    for g in nonvanishing {
        let mut gens = base.clone();
        gens.push(&Poly::one(&ext) - &(&t * &g.embed(&ext, &map)));
        if !is_unit_ideal(&ext, &gens)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// The strata `X_0, ..., X_irr`.
pub fn strata(f: &FoliationPresentation) -> Result<Vec<Stratum>> {
    let profile = rank_profile(f)?;
    let mut out = Vec::with_capacity(profile.irr + 1);
    for j in 0..=profile.irr {
        let vanishing = minors(f, profile.rk - j + 1);
        let nonvanishing = minors(f, profile.rk - j);
        let closure_dimension = krull_dimension(&f.vars, &vanishing)?;
        let nonempty = locally_closed_nonempty(&f.vars, &vanishing, &nonvanishing)?;
        out.push(Stratum { j, vanishing_ideal: vanishing, nonvanishing_ideal: nonvanishing, closure_dimension, nonempty });
    }
    Ok(out)
}

/// Dimension of the span of the generators at a point.
pub fn evaluate_fiber(f: &FoliationPresentation, point: &[GaussianRational]) -> Result<usize> {
    if point.len() != f.nvars() {
        return Err(Error::LengthMismatch { expected: f.nvars(), got: point.len() });
    }
    let rows: Vec<Vec<GaussianRational>> = f.generators.iter().map(|g| g.at(point)).collect::<Result<_>>()?;
    Ok(dense_rank(&rows))
}

/// The foliation of Hamiltonian fields `v_k = sum_j pi_kj d_j` of a Poisson bracket.
pub fn hamiltonian_foliation(vars: &Vars, poisson: &[Vec<Poly>]) -> Result<FoliationPresentation> {
    let n = vars.len();
    if poisson.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: poisson.len() });
    }
    for row in poisson {
        if row.len() != n {
            return Err(Error::LengthMismatch { expected: n, got: row.len() });
        }
        if !row.iter().all(|p| same_vars(p.vars(), vars)) {
            return Err(Error::AmbientMismatch);
        }
    }
    for i in 0..n {
        for j in i..n {
            if !(&poisson[i][j] + &poisson[j][i]).is_zero() {
                return Err(Error::NotAntisymmetric(i, j));
            }
        }
    }
    // {x_i, h} = sum_b pi_ib d_b h
    let ham = |i: usize, h: &Poly| -> Result<Poly> {
        let mut acc = Poly::zero(vars);
        for b in 0..n {
            if !poisson[i][b].is_zero() {
                acc = &acc + &(&poisson[i][b] * &h.diff(b)?);
            }
        }
        Ok(acc)
    };
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let s = &(&ham(i, &poisson[j][k])? + &ham(j, &poisson[k][i])?) + &ham(k, &poisson[i][j])?;
                if !s.is_zero() {
                    return Err(Error::JacobiFailure(i, j, k));
                }
            }
        }
    }
    let gens: Vec<VectorField> = poisson
        .iter()
        .map(|row| VectorField { vars: vars.clone(), coeffs: row.clone() })
        .filter(|v| !v.is_zero())
        .collect();
    if gens.is_empty() {
        return Err(Error::InvalidPresentation("the Poisson bivector is zero".into()));
    }
    FoliationPresentation::new(vars, gens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::vars;
    use num_traits::{One, Zero};
    use proptest::prelude::*;

    fn xy() -> Vars {
        vars(&["x", "y"]).unwrap()
    }

    fn fol(v: &Vars, fields: &[&str]) -> FoliationPresentation {
        FoliationPresentation::parse(v, fields).unwrap()
    }

    fn vf(s: &str, v: &Vars) -> VectorField {
        VectorField::parse(s, v).unwrap()
    }

    fn p(s: &str, v: &Vars) -> Poly {
        Poly::parse(s, v).unwrap()
    }

    #[test]
    fn brackets() {
        let v = xy();
        assert!(lie_bracket(&vf("x*dx", &v), &vf("y*dy", &v)).unwrap().is_zero());
        assert_eq!(lie_bracket(&vf("dx", &v), &vf("x*dx", &v)).unwrap(), vf("dx", &v));
        assert_eq!(lie_bracket(&vf("x*dy", &v), &vf("y*dx", &v)).unwrap(), vf("x*dx - y*dy", &v));
        for (a, b) in [("dx", "x*dx"), ("x*dy", "y*dx"), ("x^2*dy + y*dx", "x*y*dx")] {
            let (a, b) = (vf(a, &v), vf(b, &v));
            let via_weyl = a.to_weyl().commutator(&b.to_weyl()).unwrap();
            assert_eq!(lie_bracket(&a, &b).unwrap().to_weyl(), via_weyl);
        }
    }

    #[test]
    fn rejects_non_fields() {
        let v = xy();
        assert!(matches!(VectorField::parse("dx*dx", &v), Err(Error::NotAVectorField(_))));
        assert!(matches!(VectorField::parse("x + dx", &v), Err(Error::NotAVectorField(_))));
        assert!(matches!(FoliationPresentation::parse(&v, &["dx - dx"]), Err(Error::InvalidPresentation(_))));
        let none: [&str; 0] = [];
        assert!(FoliationPresentation::parse(&v, &none).is_err());
    }

    #[test]
    fn lie_closure() {
        let v = xy();
        assert!(check_lie_subalgebra(&fol(&v, &["x*dx", "y*dy"])).unwrap().closed);
        assert!(check_lie_subalgebra(&fol(&v, &["dx", "x*dx"])).unwrap().closed);
        let r = check_lie_subalgebra(&fol(&v, &["x*dy", "y*dx"])).unwrap();
        assert!(!r.closed);
        assert_eq!(r.failing_pair, Some((0, 1)));
        assert_eq!(r.bracket.unwrap(), vf("x*dx - y*dy", &v));
    }

    #[test]
    fn orthogonal_modules() {
        let v = xy();
        let euler = orthogonal_complement(&fol(&v, &["x*dx + y*dy"])).unwrap();
        assert_eq!(euler.generators.len(), 1);
        let g = &euler.generators[0];
        // proportional to y dx - x dy
        assert!((&(&g.entries[0] * &p("x", &v)) + &(&g.entries[1] * &p("y", &v))).is_zero());
        assert_eq!(g.entries[0].degree(), Some(1));
        let form = euler.form_string(0);
        assert!(form == "y*dx - x*dy" || form == "-y*dx + x*dy", "{form}");
        let dx = orthogonal_complement(&fol(&v, &["dx"])).unwrap();
        assert_eq!(dx.generators.len(), 1);
        assert!(dx.generators[0].entries[0].is_zero());
        assert!(dx.generators[0].entries[1].is_constant());
        assert!(orthogonal_complement(&fol(&v, &["dx", "dy"])).unwrap().generators.is_empty());
    }

    #[test]
    fn double_orthogonal() {
        let v = xy();
        assert!(double_orthogonal_check(&fol(&v, &["x*dx + y*dy"])).unwrap());
        assert!(double_orthogonal_check(&fol(&v, &["dx"])).unwrap());
        assert!(double_orthogonal_check(&fol(&v, &["dy", "-dx"])).unwrap());
        let line = vars(&["x"]).unwrap();
        assert!(!double_orthogonal_check(&fol(&line, &["x*dx"])).unwrap());
    }

    #[test]
    fn integrability_pairings() {
        let v = xy();
        assert!(dual_integrability_check(&fol(&v, &["x*dx + y*dy"])).unwrap().all_zero);
        let v3 = vars(&["x", "y", "z"]).unwrap();
        let rep = dual_integrability_check(&fol(&v3, &["dy", "dx + y*dz"])).unwrap();
        assert!(!rep.all_zero);
        assert_eq!(rep.forms.generators.len(), 1);
        // the form is c * (dz - y dx); the pairing is -c
        let c = rep.forms.generators[0].entries[2].clone();
        assert_eq!(rep.pairings[0][0][1], -&c);
        assert_eq!(rep.pairings[0][1][0], c);
        assert!(dual_integrability_check(&fol(&v3, &["dx", "dy"])).unwrap().all_zero);
    }

    #[test]
    fn profiles_and_strata() {
        let v = xy();
        let euler = fol(&v, &["x*dx + y*dy"]);
        assert_eq!(rank_profile(&euler).unwrap(), RankProfile { rk: 1, cork: 0, irr: 1 });
        let s = strata(&euler).unwrap();
        assert_eq!(s.len(), 2);
        assert!(s[0].vanishing_ideal.is_empty());
        assert_eq!(s[0].closure_dimension, 2);
        assert_eq!(s[1].closure_dimension, 0);
        assert!(s.iter().all(|st| st.nonempty));

        assert_eq!(rank_profile(&fol(&v, &["dx"])).unwrap(), RankProfile { rk: 1, cork: 1, irr: 0 });
        assert_eq!(strata(&fol(&v, &["dx"])).unwrap().len(), 1);

        let diag = fol(&v, &["x*dx", "y*dy"]);
        assert_eq!(rank_profile(&diag).unwrap(), RankProfile { rk: 2, cork: 0, irr: 2 });
        let s = strata(&diag).unwrap();
        assert_eq!(s.iter().map(|st| st.closure_dimension).collect::<Vec<_>>(), vec![2, 1, 0]);
        assert_eq!(s[1].vanishing_ideal, vec![p("x*y", &v)]);
        assert!(s.iter().all(|st| st.nonempty));
    }

    #[test]
    fn fibers() {
        let v = xy();
        let euler = fol(&v, &["x*dx + y*dy"]);
        let one = GaussianRational::one();
        let zero = GaussianRational::zero();
        assert_eq!(evaluate_fiber(&euler, &[one.clone(), one.clone()]).unwrap(), 1);
        assert_eq!(evaluate_fiber(&euler, &[zero.clone(), zero.clone()]).unwrap(), 0);
        assert_eq!(evaluate_fiber(&fol(&v, &["dx"]), &[zero.clone(), one.clone()]).unwrap(), 1);
        assert!(evaluate_fiber(&euler, &[zero]).is_err());
    }

    #[test]
    fn poisson() {
        let v = xy();
        let z = Poly::zero(&v);
        let one = Poly::one(&v);
        let sympl = hamiltonian_foliation(&v, &[vec![z.clone(), one.clone()], vec![-&one, z.clone()]]).unwrap();
        assert_eq!(sympl.generators(), &[vf("dy", &v), vf("-dx", &v)]);
        assert_eq!(rank_profile(&sympl).unwrap(), RankProfile { rk: 2, cork: 2, irr: 0 });

        assert!(matches!(
            hamiltonian_foliation(&v, &[vec![z.clone(), z.clone()], vec![z.clone(), z.clone()]]),
            Err(Error::InvalidPresentation(_))
        ));
        assert_eq!(
            hamiltonian_foliation(&v, &[vec![z.clone(), one.clone()], vec![one.clone(), z.clone()]]),
            Err(Error::NotAntisymmetric(0, 1))
        );
        let x = p("x", &v);
        let pi = hamiltonian_foliation(&v, &[vec![z.clone(), x.clone()], vec![-&x, z.clone()]]).unwrap();
        assert_eq!(pi.generators(), &[vf("x*dy", &v), vf("-x*dx", &v)]);
        assert_eq!(rank_profile(&pi).unwrap(), RankProfile { rk: 2, cork: 0, irr: 2 });

        // {x, y} = z, {y, z} = x, {z, x} = y is a Lie-Poisson structure; perturbing it breaks Jacobi
        let v3 = vars(&["x", "y", "z"]).unwrap();
        let q = |s: &str| p(s, &v3);
        let lie = |zx: &str| {
            vec![
                vec![q("0"), q("z"), q(&format!("-({zx})"))],
                vec![q("-z"), q("0"), q("x")],
                vec![q(zx), q("-x"), q("0")],
            ]
        };
        assert!(hamiltonian_foliation(&v3, &lie("y")).is_ok());
        assert_eq!(hamiltonian_foliation(&v3, &lie("x*y")), Err(Error::JacobiFailure(0, 1, 2)));
    }

    #[test]
    fn bareiss_rank_matches_generic_evaluation() {
        let v = xy();
        let m = vec![
            vec![p("x", &v), p("y", &v), p("x*y", &v)],
            vec![p("x^2", &v), p("x*y", &v), p("x^2*y", &v)],
            vec![p("1", &v), p("y", &v), p("x + y", &v)],
        ];
        assert_eq!(fraction_field_rank(&m, &v).unwrap(), 2);
    }

    fn arb_coeff(v: Vars) -> impl Strategy<Value = Poly> {
        proptest::collection::vec((0u32..3, 0u32..3, -2i64..=2), 0..3).prop_map(move |ts| {
            Poly::from_terms(&v, ts.into_iter().map(|(a, b, c)| (Monomial(vec![a, b]), GaussianRational::from(c))))
        })
    }

    fn arb_field() -> impl Strategy<Value = VectorField> {
        let v = xy();
        (arb_coeff(v.clone()), arb_coeff(v.clone())).prop_map(move |(a, b)| VectorField::new(&v, vec![a, b]).unwrap())
    }

    fn arb_presentation() -> impl Strategy<Value = FoliationPresentation> {
        proptest::collection::vec(arb_field(), 1..3).prop_map(|mut gens| {
            let v = xy();
            for g in &mut gens {
                if g.is_zero() {
                    *g = VectorField::coordinate(&v, 0);
                }
            }
            FoliationPresentation::new(&v, gens).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn bracket_is_antisymmetric_and_satisfies_jacobi(a in arb_field(), b in arb_field(), c in arb_field()) {
            let ab = lie_bracket(&a, &b).unwrap();
            let ba = lie_bracket(&b, &a).unwrap();
            prop_assert!(ab.checked_add(&ba).unwrap().is_zero());
            let j1 = lie_bracket(&a, &lie_bracket(&b, &c).unwrap()).unwrap();
            let j2 = lie_bracket(&b, &lie_bracket(&c, &a).unwrap()).unwrap();
            let j3 = lie_bracket(&c, &ab).unwrap();
            prop_assert!(j1.checked_add(&j2).unwrap().checked_add(&j3).unwrap().is_zero());
            prop_assert_eq!(ab.to_weyl(), a.to_weyl().commutator(&b.to_weyl()).unwrap());
        }

        #[test]
        fn rank_profile_is_invariant_under_row_operations(
            f in arb_presentation(),
            mult in arb_coeff(xy()),
            pick in 0usize..4,
        ) {
            let before = rank_profile(&f).unwrap();
            prop_assert!(before.cork <= before.rk && before.rk <= 2);
            if f.len() > 1 {
                let (i, j) = (pick % 2, 1 - pick % 2);
                let mut gens = f.generators().to_vec();
                let shifted = gens[i].checked_add(&gens[j].scale(&mult).unwrap()).unwrap();
                if !shifted.is_zero() {
                    gens[i] = shifted;
                    let g = FoliationPresentation::new(f.vars(), gens).unwrap();
                    prop_assert_eq!(rank_profile(&g).unwrap(), before);
                }
            }
        }

        #[test]
        fn fibers_lie_between_corank_and_rank(
            f in arb_presentation(),
            pts in proptest::collection::vec((-3i64..=3, 1i64..=3, -3i64..=3, 1i64..=3), 50),
        ) {
            let prof = rank_profile(&f).unwrap();
            for (a, b, c, d) in pts {
                let point = [GaussianRational::from_ratio(a, b), GaussianRational::from_ratio(c, d)];
                let k = evaluate_fiber(&f, &point).unwrap();
                prop_assert!(k <= prof.rk && k >= prof.cork);
            }
        }

        #[test]
        fn orthogonal_forms_annihilate_generators(f in arb_presentation()) {
            let perp = orthogonal_complement(&f).unwrap();
            for k in 0..perp.generators.len() {
                for g in f.generators() {
                    prop_assert!(perp.pair(k, g).unwrap().is_zero());
                }
            }
            if check_lie_subalgebra(&f).unwrap().closed {
                prop_assert!(dual_integrability_check(&f).unwrap().all_zero);
            }
        }
    }
}
