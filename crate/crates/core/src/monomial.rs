//! Exponent vectors and monomial orders.

use std::cmp::Ordering;

use crate::error::{Error, Result};

/// `x_0^e_0 * ... * x_{n-1}^e_{n-1}`, one exponent per ambient variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Monomial(e)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self.divides(other)`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(b, a)| b - a).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// Indices of variables with a positive exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, _)| i)
    }
}

/// A multiplicative well-order on monomials.
///
/// Variable 0 is the largest variable in every order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MonomialOrder {
    Lex,
    GrevLex,
    /// Block order: grevlex on the first `k` variables, ties broken by
    /// grevlex on the remaining ones. Eliminates the first block.
    Elimination(usize),
}

fn grevlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db).then_with(|| {
        for (x, y) in a.iter().zip(b).rev() {
            if x != y {
                // smaller exponent in the last differing variable wins
                return y.cmp(x);
            }
        }
        Ordering::Equal
    })
}

impl MonomialOrder {
    /// Compares without checking lengths.
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match *self {
            MonomialOrder::Lex => a.0.cmp(&b.0),
            MonomialOrder::GrevLex => grevlex(&a.0, &b.0),
            MonomialOrder::Elimination(k) => {
                let k = k.min(a.0.len());
                grevlex(&a.0[..k], &b.0[..k]).then_with(|| grevlex(&a.0[k..], &b.0[k..]))
            }
        }
    }
}

/// Checked comparison of two monomials over the same ambient.
pub fn compare_monomials(order: MonomialOrder, m1: &Monomial, m2: &Monomial) -> Result<Ordering> {
    if m1.len() != m2.len() {
        return Err(Error::AmbientMismatch);
    }
    Ok(order.cmp(m1, m2))
}

/// All exponent vectors in `n` variables of total degree exactly `d`,
/// in decreasing lex order.
pub fn monomials_of_degree(n: usize, d: u32) -> Vec<Monomial> {
    fn rec(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if prefix.len() + 1 == n {
            prefix.push(d);
            out.push(Monomial(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in (0..=d).rev() {
            prefix.push(e);
            rec(n, d - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(Monomial(Vec::new()));
        }
        return out;
    }
    rec(n, d, &mut Vec::with_capacity(n), &mut out);
    out
}

/// All exponent vectors of total degree at most `d`, by increasing degree.
pub fn monomials_up_to(n: usize, d: u32) -> Vec<Monomial> {
    (0..=d).flat_map(|k| monomials_of_degree(n, k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(e: &[u32]) -> Monomial {
        Monomial(e.to_vec())
    }

    /// Textbook grevlex: compare degrees, then the rightmost nonzero entry of
    /// the difference vector a - b is negative iff a > b.
    fn grevlex_textbook(a: &[u32], b: &[u32]) -> Ordering {
        let da: i64 = a.iter().map(|&x| x as i64).sum();
        let db: i64 = b.iter().map(|&x| x as i64).sum();
        if da != db {
            return da.cmp(&db);
        }
        let diff: Vec<i64> = a.iter().zip(b).map(|(&x, &y)| x as i64 - y as i64).collect();
        match diff.iter().rev().find(|&&d| d != 0) {
            None => Ordering::Equal,
            Some(&d) if d < 0 => Ordering::Greater,
            Some(_) => Ordering::Less,
        }
    }

    #[test]
    fn grevlex_matches_textbook_on_small_monomials() {
        let all = monomials_up_to(2, 3);
        assert_eq!(all.len(), 10);
        for a in &all {
            for b in &all {
                assert_eq!(MonomialOrder::GrevLex.cmp(a, b), grevlex_textbook(&a.0, &b.0));
            }
        }
        assert_eq!(
            compare_monomials(MonomialOrder::GrevLex, &m(&[2, 1]), &m(&[1, 2])).unwrap(),
            Ordering::Greater
        );
    }

    #[test]
    fn lex_and_reflexive_cases() {
        assert_eq!(MonomialOrder::Lex.cmp(&m(&[1, 0]), &m(&[0, 5])), Ordering::Greater);
        for o in [MonomialOrder::Lex, MonomialOrder::GrevLex, MonomialOrder::Elimination(1)] {
            assert_eq!(o.cmp(&m(&[2, 3]), &m(&[2, 3])), Ordering::Equal);
        }
        assert_eq!(
            compare_monomials(MonomialOrder::Lex, &m(&[1]), &m(&[1, 0])),
            Err(Error::AmbientMismatch)
        );
    }

    #[test]
    fn elimination_order_eliminates_first_block() {
        let o = MonomialOrder::Elimination(1);
        // x beats any power of y
        assert_eq!(o.cmp(&m(&[1, 0, 0]), &m(&[0, 7, 3])), Ordering::Greater);
        assert_eq!(o.cmp(&m(&[0, 2, 0]), &m(&[0, 1, 1])), Ordering::Greater);
    }

    #[test]
    fn enumeration_counts() {
        // C(n+d, n)
        assert_eq!(monomials_up_to(3, 4).len(), 35);
        assert_eq!(monomials_of_degree(4, 2).len(), 10);
    }

    fn exps() -> impl Strategy<Value = Vec<u32>> {
        proptest::collection::vec(0u32..5, 3)
    }

    proptest! {
        #[test]
        fn orders_are_multiplicative_well_orders(a in exps(), b in exps(), k in exps()) {
            let (a, b, k) = (Monomial(a), Monomial(b), Monomial(k));
            for o in [MonomialOrder::Lex, MonomialOrder::GrevLex, MonomialOrder::Elimination(1), MonomialOrder::Elimination(2)] {
                prop_assert_ne!(o.cmp(&Monomial::one(3), &a), Ordering::Greater);
                let ab = o.cmp(&a, &b);
                prop_assert_eq!(o.cmp(&a.mul(&k), &b.mul(&k)), ab);
                prop_assert_eq!(o.cmp(&b, &a), ab.reverse());
            }
        }
    }
}
