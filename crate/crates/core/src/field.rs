//! Exact scalar fields: odd prime fields and the rationals.
//!
//! Everything downstream is generic over [`Field`]. The two concrete base
//! fields additionally implement [`BaseField`], which carries the operations
//! that only make sense over a prime field or over the rationals (square
//! classes, parsing, polynomial factorization).

use std::fmt;
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng as _;

use crate::error::{Error, Result};

/// Seeded generator used by every randomized routine in the crate.
pub type Rng = rand_chacha::ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> Rng {
    use rand::SeedableRng;
    Rng::seed_from_u64(seed)
}

pub trait Field: Clone + fmt::Debug + PartialEq + Eq + Send + Sync {
    type Elem: Clone + fmt::Debug + PartialEq + Eq + Hash + Ord + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// 0 for the rationals.
    fn characteristic(&self) -> u64;
    /// Number of elements, `None` when infinite.
    fn size(&self) -> Option<u128>;
    fn random(&self, rng: &mut Rng) -> Self::Elem;
    fn format(&self, a: &Self::Elem) -> String;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }
}

/// Which base field a document or isopair lives over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldDescriptor {
    Prime(u64),
    Rational,
}

impl FieldDescriptor {
    pub fn prime(p: u64) -> Result<Self> {
        PrimeField::new(p).map(|_| FieldDescriptor::Prime(p))
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDescriptor::Prime(p) => write!(f, "F_{p}"),
            FieldDescriptor::Rational => write!(f, "Q"),
        }
    }
}

/// Operations specific to the two supported base fields.
pub trait BaseField: Field {
    fn descriptor(&self) -> FieldDescriptor;
    fn parse(&self, s: &str) -> Result<Self::Elem>;
    /// Square-class test; only decidable here over a prime field.
    fn is_square(&self, a: &Self::Elem) -> Result<bool>;
    fn is_finite(&self) -> bool {
        self.size().is_some()
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// The prime field F_p with p an odd prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p == 2 {
            return Err(Error::InvalidField("characteristic 2 is not supported".into()));
        }
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not an odd prime")));
        }
        if p >= 1 << 32 {
            return Err(Error::InvalidField(format!("{p} is too large")));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Canonical residue of a signed integer.
    pub fn elem(&self, n: i64) -> u64 {
        n.rem_euclid(self.p as i64) as u64
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_i64(&self, n: i64) -> u64 {
        self.elem(n)
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        (a * b) % self.p
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        // extended Euclid on signed values
        let (mut r0, mut r1) = (self.p as i64, *a as i64);
        let (mut s0, mut s1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        Some(self.elem(s0))
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn size(&self) -> Option<u128> {
        Some(self.p as u128)
    }
    fn random(&self, rng: &mut Rng) -> u64 {
        rng.gen_range(0..self.p)
    }
    fn format(&self, a: &u64) -> String {
        a.to_string()
    }
}

impl BaseField for PrimeField {
    fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor::Prime(self.p)
    }

    fn parse(&self, s: &str) -> Result<u64> {
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let n = self.parse(n)?;
            let d = self.parse(d)?;
            return self
                .div(&n, &d)
                .ok_or_else(|| Error::Parse(format!("zero denominator in {s:?}")));
        }
        let v: BigInt = s
            .parse()
            .map_err(|_| Error::Parse(format!("not an integer: {s:?}")))?;
        let m = BigInt::from(self.p);
        let r = ((v % &m) + &m) % &m;
        Ok(r.try_into().expect("residue fits"))
    }

    fn is_square(&self, a: &u64) -> Result<bool> {
        if *a == 0 {
            return Ok(true);
        }
        Ok(self.pow(a, (self.p - 1) / 2) == 1)
    }
}

/// The rational numbers with arbitrary-precision numerators and denominators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn size(&self) -> Option<u128> {
        None
    }
    fn random(&self, rng: &mut Rng) -> BigRational {
        let n: i64 = rng.gen_range(-9..=9);
        let d: i64 = rng.gen_range(1..=9);
        BigRational::new(n.into(), d.into())
    }
    fn format(&self, a: &BigRational) -> String {
        format!("{}/{}", a.numer(), a.denom())
    }
}

impl BaseField for Rationals {
    fn descriptor(&self) -> FieldDescriptor {
        FieldDescriptor::Rational
    }

    fn parse(&self, s: &str) -> Result<BigRational> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not a rational: {s:?}"));
        match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(bad());
                }
                Ok(BigRational::new(n, d))
            }
            None => {
                let n: BigInt = s.parse().map_err(|_| bad())?;
                Ok(BigRational::from_integer(n))
            }
        }
    }

    fn is_square(&self, a: &BigRational) -> Result<bool> {
        if a.is_negative() {
            return Ok(false);
        }
        let n = a.numer();
        let d = a.denom();
        let sq = |x: &BigInt| {
            let r = x.sqrt();
            &r * &r == *x
        };
        Ok(sq(n) && sq(d))
    }
}
