//! Dense univariate polynomials over a [`Field`], lowest degree first.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::field::Field;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly<F: Field> {
    field: F,
    coeffs: Vec<F::Elem>,
}

impl<F: Field> Poly<F> {
    pub fn new(field: &F, mut coeffs: Vec<F::Elem>) -> Self {
        while coeffs.last().is_some_and(|c| field.is_zero(c)) {
            coeffs.pop();
        }
        Poly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn from_i64s(field: &F, coeffs: &[i64]) -> Self {
        Self::new(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn zero(field: &F) -> Self {
        Self::new(field, Vec::new())
    }

    pub fn one(field: &F) -> Self {
        Self::constant(field, field.one())
    }

    pub fn constant(field: &F, c: F::Elem) -> Self {
        Self::new(field, vec![c])
    }

    /// c·t^k
    pub fn monomial(field: &F, c: F::Elem, k: usize) -> Self {
        let mut coeffs = vec![field.zero(); k + 1];
        coeffs[k] = c;
        Self::new(field, coeffs)
    }

    pub fn t(field: &F) -> Self {
        Self::monomial(field, field.one(), 1)
    }

    /// t − a
    pub fn linear(field: &F, a: &F::Elem) -> Self {
        Self::new(field, vec![field.neg(a), field.one()])
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn coeffs(&self) -> &[F::Elem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> F::Elem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial counted as 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn leading(&self) -> F::Elem {
        self.coeffs.last().cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| self.field.is_one(c))
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn monic(&self) -> Self {
        match self.field.inv(&self.leading()) {
            Some(li) => self.scale(&li),
            None => self.clone(),
        }
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let f = &self.field;
        Self::new(f, self.coeffs.iter().map(|a| f.mul(a, c)).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            f,
            (0..n).map(|i| f.add(&self.coeff(i), &other.coeff(i))).collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            f,
            (0..n).map(|i| f.sub(&self.coeff(i), &other.coeff(i))).collect(),
        )
    }

    pub fn neg(&self) -> Self {
        let f = &self.field;
        Self::new(f, self.coeffs.iter().map(|a| f.neg(a)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let f = &self.field;
        if self.is_zero() || other.is_zero() {
            return Self::zero(f);
        }
        let mut out = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(&out[i + j], &f.mul(a, b));
            }
        }
        Self::new(f, out)
    }

    pub fn pow(&self, mut e: usize) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn divrem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let f = &self.field;
        let dd = divisor
            .degree()
            .ok_or_else(|| Error::InvalidPoly("division by the zero polynomial".into()))?;
        let lead_inv = f.inv(&divisor.leading()).expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(f), self.clone()));
        }
        let mut quot = vec![f.zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = f.mul(&rem[k + dd], &lead_inv);
            if f.is_zero(&c) {
                continue;
            }
            for (j, b) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = f.sub(&rem[k + j], &f.mul(&c, b));
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((Self::new(f, quot), Self::new(f, rem)))
    }

    pub fn rem(&self, divisor: &Self) -> Result<Self> {
        Ok(self.divrem(divisor)?.1)
    }

    /// Quotient, failing if the division leaves a remainder.
    pub fn exact_div(&self, divisor: &Self) -> Result<Self> {
        let (q, r) = self.divrem(divisor)?;
        if !r.is_zero() {
            return Err(Error::InvalidPoly(format!("{divisor} does not divide {self}")));
        }
        Ok(q)
    }

    pub fn divides(&self, other: &Self) -> bool {
        !self.is_zero() && other.rem(self).map(|r| r.is_zero()).unwrap_or(false)
    }

    /// Monic gcd (zero if both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Returns `(g, s, t)` with `s·self + t·other = g`, `g` monic.
    pub fn ext_gcd(&self, other: &Self) -> (Self, Self, Self) {
        let f = &self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(f), Self::zero(f));
        let (mut t0, mut t1) = (Self::zero(f), Self::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1).expect("nonzero divisor");
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1));
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1));
            t0 = std::mem::replace(&mut t1, t);
        }
        match f.inv(&r0.leading()) {
            Some(li) => (r0.scale(&li), s0.scale(&li), t0.scale(&li)),
            None => (r0, s0, t0),
        }
    }

    pub fn lcm(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.field);
        }
        let g = self.gcd(other);
        self.mul(other).exact_div(&g).expect("gcd divides").monic()
    }

    pub fn derivative(&self) -> Self {
        let f = &self.field;
        Self::new(
            f,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| f.mul(c, &f.from_i64(i as i64)))
                .collect(),
        )
    }

    pub fn eval(&self, x: &F::Elem) -> F::Elem {
        let f = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
    }

    /// self^e mod m.
    pub fn pow_mod(&self, e: &BigUint, m: &Self) -> Result<Self> {
        let mut base = self.rem(m)?;
        let mut acc = Self::one(&self.field).rem(m)?;
        let bits = e.bits();
        for i in 0..bits {
            if e.bit(i) {
                acc = acc.mul(&base).rem(m)?;
            }
            if i + 1 < bits {
                base = base.mul(&base).rem(m)?;
            }
        }
        if e.is_zero() {
            return Self::one(&self.field).rem(m);
        }
        Ok(acc)
    }

    /// Composition self(g).
    pub fn compose(&self, g: &Self) -> Self {
        let f = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(f), |acc, c| acc.mul(g).add(&Self::constant(f, c.clone())))
    }

    /// Reciprocal polynomial p♯(t) = p(0)⁻¹ tᵈ p(1/t); always monic.
    pub fn reciprocal(&self) -> Result<Self> {
        let f = &self.field;
        if self.is_zero() || f.is_zero(&self.coeffs[0]) {
            return Err(Error::InvalidPoly(format!(
                "{self} has zero constant term, reciprocal undefined"
            )));
        }
        let c0_inv = f.inv(&self.coeffs[0]).expect("nonzero");
        let rev: Vec<_> = self.coeffs.iter().rev().map(|c| f.mul(c, &c0_inv)).collect();
        Ok(Self::new(f, rev))
    }

    pub fn is_palindromial(&self) -> Result<bool> {
        Ok(self.reciprocal()? == self.monic() && self.is_monic())
    }

    /// For an even-degree palindromial p of degree 2d, the monic R of degree d with
    /// p(t) = tᵈ·R(t + t⁻¹).
    pub fn trace_decompose(&self) -> Result<Self> {
        let f = &self.field;
        let not_even = || {
            Error::InvalidPoly(format!("{self} is not an even-degree palindromial"))
        };
        let n = self.degree().ok_or_else(not_even)?;
        if n == 0 || n % 2 == 1 || !self.is_palindromial()? {
            return Err(not_even());
        }
        let d = n / 2;
        // basis[j] = t^(d-j) (t^2+1)^j = t^d (t + 1/t)^j
        let t2p1 = Self::from_i64s(f, &[1, 0, 1]);
        let basis: Vec<Self> = (0..=d)
            .map(|j| Self::monomial(f, f.one(), d - j).mul(&t2p1.pow(j)))
            .collect();
        let mut rest = self.clone();
        let mut r = vec![f.zero(); d + 1];
        for j in (0..=d).rev() {
            let c = rest.coeff(d + j);
            rest = rest.sub(&basis[j].scale(&c));
            r[j] = c;
        }
        if !rest.is_zero() {
            return Err(not_even());
        }
        Ok(Self::new(f, r))
    }

    /// Canonical monic form used for sorting and map keys.
    pub fn sort_key(&self) -> (usize, &[F::Elem]) {
        (self.coeffs.len(), &self.coeffs)
    }
}

impl<F: Field> PartialOrd for Poly<F> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<F: Field> Ord for Poly<F> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key().cmp(&other.sort_key())
    }
}

fn short_scalar<F: Field>(f: &F, c: &F::Elem) -> String {
    let s = f.format(c);
    match s.strip_suffix("/1") {
        Some(t) => t.to_string(),
        None => s,
    }
}

impl<F: Field> fmt::Display for Poly<F> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(out, "0");
        }
        let f = &self.field;
        let mut first = true;
        for k in (0..self.coeffs.len()).rev() {
            let c = &self.coeffs[k];
            if f.is_zero(c) {
                continue;
            }
            let s = short_scalar(f, c);
            let (neg, mag) = match s.strip_prefix('-') {
                Some(m) => (true, m.to_string()),
                None => (false, s),
            };
            if first {
                if neg {
                    write!(out, "-")?;
                }
            } else {
                write!(out, "{}", if neg { "-" } else { "+" })?;
            }
            first = false;
            let mag = if mag.contains('/') && k > 0 {
                format!("({mag})")
            } else {
                mag
            };
            match k {
                0 => write!(out, "{mag}")?,
                _ => {
                    if mag != "1" {
                        write!(out, "{mag}")?;
                    }
                    if k == 1 {
                        write!(out, "t")?;
                    } else {
                        write!(out, "t^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    fn fp(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn reciprocal_examples() {
        let q = Rationals;
        let tm1 = Poly::from_i64s(&q, &[-1, 1]);
        assert_eq!(tm1.reciprocal().unwrap(), tm1);
        let sym = Poly::from_i64s(&q, &[1, 3, 1]);
        assert_eq!(sym.reciprocal().unwrap(), sym);
        // t^2+t+2 over F5: 2^-1 (2t^2+t+1) = 3(2t^2+t+1) = t^2+3t+3
        let f5 = fp(5);
        let p = Poly::from_i64s(&f5, &[2, 1, 1]);
        assert_eq!(p.reciprocal().unwrap(), Poly::from_i64s(&f5, &[3, 3, 1]));
        assert!(Poly::from_i64s(&f5, &[0, 1]).reciprocal().is_err());
    }

    #[test]
    fn palindromial_examples() {
        let f3 = fp(3);
        let f5 = fp(5);
        assert!(Poly::from_i64s(&f3, &[1, 0, 1]).is_palindromial().unwrap());
        assert!(!Poly::from_i64s(&f5, &[2, 1]).is_palindromial().unwrap());
        assert!(Poly::from_i64s(&f5, &[-1, 1]).is_palindromial().unwrap());
        assert!(Poly::from_i64s(&f5, &[0, 0, 1]).is_palindromial().is_err());
    }

    #[test]
    fn trace_decompose_examples() {
        let q = Rationals;
        let f3 = fp(3);
        let f5 = fp(5);
        assert_eq!(
            Poly::from_i64s(&q, &[1, 0, 1]).trace_decompose().unwrap(),
            Poly::t(&q)
        );
        assert_eq!(
            Poly::from_i64s(&f5, &[1, 1, 1]).trace_decompose().unwrap(),
            Poly::from_i64s(&f5, &[1, 1])
        );
        assert_eq!(
            Poly::from_i64s(&f3, &[1, 0, 0, 0, 1]).trace_decompose().unwrap(),
            Poly::from_i64s(&f3, &[1, 0, 1])
        );
        assert!(Poly::from_i64s(&f5, &[-1, 1]).trace_decompose().is_err());
        assert!(Poly::from_i64s(&f5, &[2, 1, 1]).trace_decompose().is_err());
    }

    #[test]
    fn division_and_gcd() {
        let f7 = fp(7);
        let a = Poly::from_i64s(&f7, &[-1, 0, 1]); // (t-1)(t+1)
        let b = Poly::from_i64s(&f7, &[-1, 1]);
        let (q, r) = a.divrem(&b).unwrap();
        assert!(r.is_zero());
        assert_eq!(q, Poly::from_i64s(&f7, &[1, 1]));
        assert_eq!(a.gcd(&b), b);
        let (g, s, t) = a.ext_gcd(&Poly::from_i64s(&f7, &[2, 1]));
        assert!(g.is_constant());
        assert_eq!(
            s.mul(&a).add(&t.mul(&Poly::from_i64s(&f7, &[2, 1]))),
            g
        );
    }

    #[test]
    fn display() {
        let f5 = fp(5);
        assert_eq!(Poly::from_i64s(&f5, &[3, 1]).to_string(), "t+3");
        assert_eq!(Poly::from_i64s(&f5, &[1, 0, 1]).to_string(), "t^2+1");
        let q = Rationals;
        assert_eq!(Poly::from_i64s(&q, &[-1, 0, 2]).to_string(), "2t^2-1");
    }

    #[test]
    fn pow_mod_matches_repeated_multiplication() {
        let f3 = fp(3);
        let m = Poly::from_i64s(&f3, &[2, 1, 0, 1]);
        let x = Poly::t(&f3);
        let direct = x.pow(11).rem(&m).unwrap();
        assert_eq!(x.pow_mod(&BigUint::from(11u32), &m).unwrap(), direct);
    }

    use proptest::prelude::*;

    proptest! {
        #[test]
        fn reciprocal_is_an_involution(cs in prop::collection::vec(0u64..7, 1..7)) {
            let f7 = fp(7);
            let mut v: Vec<u64> = cs.clone();
            v.insert(0, 1 + cs[0] % 6); // nonzero constant term
            v.push(1);
            let p = Poly::new(&f7, v);
            prop_assert_eq!(p.reciprocal().unwrap().reciprocal().unwrap(), p);
        }
    }
}
