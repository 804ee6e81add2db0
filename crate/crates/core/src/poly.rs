//! Exact one-variable Laurent polynomials with big-integer coefficients.
//!
//! The variable is a type parameter so that brackets (in `A`), Jones
//! polynomials (stored in `t^{1/2}`) and Poincaré/Euler series (in `q`) can
//! never be added to each other by accident. Conversions between them are
//! explicit functions.

use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

/// Marker trait naming the variable of a [`LaurentPoly`].
pub trait Variable: Copy + Default + fmt::Debug + PartialEq + Eq {
    /// Render `x^e` for exponent `e != 0` (without coefficient).
    fn power(e: i64) -> String;
}

/// Kauffman's variable `A`.
#[derive(Copy, Clone, Default, Debug, PartialEq, Eq)]
pub struct VarA;

/// The Jones variable, stored by exponent of `t^{1/2}`.
#[derive(Copy, Clone, Default, Debug, PartialEq, Eq)]
pub struct VarHalfT;

/// The quantum grading variable `q`.
#[derive(Copy, Clone, Default, Debug, PartialEq, Eq)]
pub struct VarQ;

impl Variable for VarA {
    fn power(e: i64) -> String {
        if e == 1 {
            "A".into()
        } else {
            format!("A^{e}")
        }
    }
}

impl Variable for VarHalfT {
    fn power(e: i64) -> String {
        match (e % 2 == 0, e / 2) {
            (true, 1) => "t".into(),
            (true, k) => format!("t^{k}"),
            (false, _) => format!("t^({e}/2)"),
        }
    }
}

impl Variable for VarQ {
    fn power(e: i64) -> String {
        if e == 1 {
            "q".into()
        } else {
            format!("q^{e}")
        }
    }
}

/// A Laurent polynomial: exponent -> nonzero coefficient.
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentPoly<V: Variable> {
    terms: BTreeMap<i64, BigInt>,
    _var: PhantomData<V>,
}

pub type PolyA = LaurentPoly<VarA>;
pub type PolyT = LaurentPoly<VarHalfT>;
pub type PolyQ = LaurentPoly<VarQ>;

impl<V: Variable> Default for LaurentPoly<V> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<V: Variable> LaurentPoly<V> {
    pub fn zero() -> Self {
        LaurentPoly {
            terms: BTreeMap::new(),
            _var: PhantomData,
        }
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    pub fn monomial(coeff: impl Into<BigInt>, exp: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, coeff.into());
        p
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs; repeated
    /// exponents are summed.
    pub fn from_terms<C: Into<BigInt>>(terms: impl IntoIterator<Item = (i64, C)>) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c.into());
        }
        p
    }

    pub fn add_term(&mut self, exp: i64, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp).or_insert_with(BigInt::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        self.terms.get(&exp).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Sum of absolute values of the coefficients.
    pub fn l1_norm(&self) -> BigInt {
        self.terms.values().map(|c| c.abs()).sum()
    }

    /// Multiply by `x^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
            _var: PhantomData,
        }
    }

    /// Substitute `x -> c * y^k` into a polynomial in another variable.
    pub fn substitute<W: Variable>(&self, k: i64, sign_flip_odd: bool) -> LaurentPoly<W> {
        let mut out = LaurentPoly::<W>::zero();
        for (e, c) in &self.terms {
            let mut c = c.clone();
            if sign_flip_odd && e.rem_euclid(2) == 1 {
                c = -c;
            }
            out.add_term(e * k, c);
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Exact division by `x^k` when every exponent is divisible by `k`.
    pub fn compress(&self, k: i64) -> Option<Self> {
        if self.terms.keys().any(|e| e % k != 0) {
            return None;
        }
        Some(LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (e / k, c.clone())).collect(),
            _var: PhantomData,
        })
    }

    /// `(exponent, coefficient)` pairs with coefficients as decimal strings.
    pub fn to_pairs(&self) -> Vec<(i64, String)> {
        self.terms.iter().map(|(e, c)| (*e, c.to_string())).collect()
    }
}

impl<V: Variable> fmt::Display for LaurentPoly<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            if *e == 0 {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", V::power(*e))?;
            } else {
                write!(f, "{abs}{}", V::power(*e))?;
            }
        }
        Ok(())
    }
}

impl<V: Variable> fmt::Debug for LaurentPoly<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<V: Variable> Serialize for LaurentPoly<V> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_pairs().serialize(s)
    }
}

impl<V: Variable> Add for &LaurentPoly<V> {
    type Output = LaurentPoly<V>;
    fn add(self, rhs: Self) -> LaurentPoly<V> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<V: Variable> AddAssign<&LaurentPoly<V>> for LaurentPoly<V> {
    fn add_assign(&mut self, rhs: &LaurentPoly<V>) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, c.clone());
        }
    }
}

impl<V: Variable> Neg for &LaurentPoly<V> {
    type Output = LaurentPoly<V>;
    fn neg(self) -> LaurentPoly<V> {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
            _var: PhantomData,
        }
    }
}

impl<V: Variable> Sub for &LaurentPoly<V> {
    type Output = LaurentPoly<V>;
    fn sub(self, rhs: Self) -> LaurentPoly<V> {
        self + &(-rhs)
    }
}

impl<V: Variable> Mul for &LaurentPoly<V> {
    type Output = LaurentPoly<V>;
    fn mul(self, rhs: Self) -> LaurentPoly<V> {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl<V: Variable> std::iter::Sum for LaurentPoly<V> {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        let mut acc = Self::zero();
        for p in iter {
            acc += &p;
        }
        acc
    }
}

/// Convert a Jones polynomial (in `t^{1/2}`) to the `q` variable used by
/// Euler characteristics: `t^{1/2} -> -q`, so `V(q^2)` for knots.
pub fn jones_in_q(v: &PolyT) -> PolyQ {
    v.substitute(1, true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_cancels_terms() {
        let p = PolyA::from_terms([(-8, 1), (-4, -1), (0, 1)]);
        let q = PolyA::from_terms([(-4, 1), (4, 2)]);
        let s = &p + &q;
        assert_eq!(s, PolyA::from_terms([(-8, 1), (0, 1), (4, 2)]));
        assert_eq!((&s - &s), PolyA::zero());
    }

    #[test]
    fn display_half_integer_t() {
        let v = PolyT::from_terms([(-4, 1), (-2, -1), (0, 1), (1, -1), (2, -1), (4, 1)]);
        assert_eq!(v.to_string(), "t^-2 - t^-1 + 1 - t^(1/2) - t + t^2");
    }

    #[test]
    fn unknot_quantum_factor() {
        let f = PolyQ::from_terms([(-1, 1), (1, 1)]);
        assert_eq!(f.pow(2), PolyQ::from_terms([(-2, 1), (0, 2), (2, 1)]));
        assert_eq!(f.l1_norm(), BigInt::from(2));
    }
}
