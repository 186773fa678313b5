//! Polynomial factorization into monic irreducibles.
//!
//! Over F_p: squarefree decomposition, distinct-degree splitting and
//! Cantor–Zassenhaus equal-degree splitting driven by a seeded generator.
//! Over ℚ: squarefree decomposition plus rational-root extraction; a
//! root-free part of degree 2 or 3 is irreducible, anything larger has to be
//! supplied by the caller as a hint.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::field::{seeded_rng, Field, PrimeField, Rationals};
use crate::poly::Poly;

/// Monic irreducible factors with multiplicities, sorted by [`Poly`]'s ordering.
pub type Factors<F> = Vec<(Poly<F>, usize)>;

fn finish<F: Field>(mut out: Factors<F>) -> Factors<F> {
    out.sort();
    // merge equal factors coming from different squarefree layers
    let mut merged: Factors<F> = Vec::with_capacity(out.len());
    for (p, m) in out {
        match merged.last_mut() {
            Some((q, n)) if *q == p => *n += m,
            _ => merged.push((p, m)),
        }
    }
    merged
}

/// Squarefree decomposition in characteristic p (p-th roots taken coefficientwise).
fn squarefree_fp(f: &Poly<PrimeField>) -> Vec<(Poly<PrimeField>, usize)> {
    let field = *f.field();
    let p = field.modulus() as usize;
    let mut out = Vec::new();
    let one = Poly::one(&field);
    let c0 = f.gcd(&f.derivative());
    let mut w = f.exact_div(&c0).unwrap().monic();
    let mut c = c0;
    let mut i = 1;
    while w != one {
        let y = w.gcd(&c);
        let fac = w.exact_div(&y).unwrap().monic();
        if fac != one {
            out.push((fac, i));
        }
        w = y;
        c = c.exact_div(&w).unwrap().monic();
        i += 1;
    }
    if c != one {
        let root: Vec<u64> = c.coeffs().iter().step_by(p).cloned().collect();
        let root = Poly::new(&field, root);
        for (g, m) in squarefree_fp(&root) {
            out.push((g, m * p));
        }
    }
    out
}

fn distinct_degree(g: &Poly<PrimeField>) -> Result<Vec<(usize, Poly<PrimeField>)>> {
    let field = *g.field();
    let q = BigUint::from(field.modulus());
    let x = Poly::t(&field);
    let mut rest = g.clone();
    let mut h = x.clone();
    let mut out = Vec::new();
    let mut d = 0;
    while rest.deg() >= 2 * (d + 1) {
        d += 1;
        h = h.pow_mod(&q, &rest)?;
        let fac = rest.gcd(&h.sub(&x));
        if !fac.is_constant() {
            rest = rest.exact_div(&fac)?.monic();
            h = h.rem(&rest)?;
            out.push((d, fac));
        }
    }
    if !rest.is_constant() {
        out.push((rest.deg(), rest));
    }
    Ok(out)
}

fn equal_degree(
    g: &Poly<PrimeField>,
    d: usize,
    rng: &mut crate::field::Rng,
    out: &mut Vec<Poly<PrimeField>>,
) -> Result<()> {
    let field = *g.field();
    let n = g.deg();
    if n == d {
        out.push(g.monic());
        return Ok(());
    }
    let e = (BigUint::from(field.modulus()).pow(d as u32) - 1u32) / 2u32;
    let one = Poly::one(&field);
    loop {
        let a = Poly::new(&field, (0..n).map(|_| field.random(rng)).collect());
        if a.is_constant() {
            continue;
        }
        let b = a.pow_mod(&e, g)?.sub(&one);
        let h = g.gcd(&b);
        if !h.is_constant() && h.deg() < n {
            let other = g.exact_div(&h)?.monic();
            equal_degree(&h, d, rng, out)?;
            equal_degree(&other, d, rng, out)?;
            return Ok(());
        }
    }
}

pub fn factor_prime(f: &Poly<PrimeField>, seed: u64) -> Result<Factors<PrimeField>> {
    if f.is_zero() {
        return Err(Error::InvalidPoly("cannot factor the zero polynomial".into()));
    }
    let f = f.monic();
    let mut rng = seeded_rng(seed);
    let mut out = Vec::new();
    for (part, mult) in squarefree_fp(&f) {
        for (d, block) in distinct_degree(&part)? {
            let mut irr = Vec::new();
            equal_degree(&block, d, &mut rng, &mut irr)?;
            out.extend(irr.into_iter().map(|p| (p, mult)));
        }
    }
    Ok(finish(out))
}

fn squarefree_char0(f: &Poly<Rationals>) -> Vec<(Poly<Rationals>, usize)> {
    let field = Rationals;
    let one = Poly::one(&field);
    let mut out = Vec::new();
    let c0 = f.gcd(&f.derivative());
    let mut w = f.exact_div(&c0).unwrap().monic();
    let mut c = c0;
    let mut i = 1;
    while w != one {
        let y = w.gcd(&c);
        let fac = w.exact_div(&y).unwrap().monic();
        if fac != one {
            out.push((fac, i));
        }
        w = y;
        c = c.exact_div(&w).unwrap().monic();
        i += 1;
    }
    out
}

const TRIAL_LIMIT: u64 = 1_000_000;

fn positive_divisors(n: &BigInt) -> Result<Vec<BigInt>> {
    let mut n = n.abs();
    if n.is_zero() {
        return Err(Error::Factorization("divisors of zero".into()));
    }
    let mut primes: Vec<(BigInt, u32)> = Vec::new();
    let mut d = 2u64;
    while d <= TRIAL_LIMIT {
        let bd = BigInt::from(d);
        if &bd * &bd > n {
            break;
        }
        let mut e = 0;
        while (&n % &bd).is_zero() {
            n /= &bd;
            e += 1;
        }
        if e > 0 {
            primes.push((bd, e));
        }
        d += 1;
    }
    if !n.is_one() {
        let bl = BigInt::from(TRIAL_LIMIT);
        if n > &bl * &bl {
            return Err(Error::Factorization(
                "coefficient too large for rational-root search".into(),
            ));
        }
        primes.push((n, 1));
    }
    let mut divs = vec![BigInt::one()];
    for (p, e) in primes {
        let mut next = Vec::new();
        for dv in &divs {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(dv * &pk);
                pk *= &p;
            }
        }
        divs = next;
    }
    divs.sort();
    Ok(divs)
}

/// Integer coefficients of a primitive multiple of `f`.
fn integerize(f: &Poly<Rationals>) -> Vec<BigInt> {
    let lcm = f
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = f
        .coeffs()
        .iter()
        .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    ints.into_iter().map(|c| c / &g).collect()
}

fn rational_roots(f: &Poly<Rationals>) -> Result<Vec<BigRational>> {
    let field = Rationals;
    let mut roots = Vec::new();
    let mut g = f.monic();
    if g.deg() == 0 {
        return Ok(roots);
    }
    if field.is_zero(&g.coeff(0)) {
        roots.push(BigRational::zero());
        g = g.exact_div(&Poly::t(&field))?;
    }
    if g.deg() == 0 {
        return Ok(roots);
    }
    let ints = integerize(&g);
    let nums = positive_divisors(&ints[0])?;
    let dens = positive_divisors(ints.last().unwrap())?;
    for n in &nums {
        for d in &dens {
            if !n.gcd(d).is_one() {
                continue;
            }
            for s in [1i32, -1] {
                let r = BigRational::new(n * BigInt::from(s), d.clone());
                if field.is_zero(&g.eval(&r)) {
                    roots.push(r);
                }
            }
        }
    }
    roots.sort();
    roots.dedup();
    Ok(roots)
}

pub fn factor_rational(
    f: &Poly<Rationals>,
    hints: &[Poly<Rationals>],
) -> Result<Factors<Rationals>> {
    if f.is_zero() {
        return Err(Error::InvalidPoly("cannot factor the zero polynomial".into()));
    }
    let field = Rationals;
    let mut out = Vec::new();
    for (part, mult) in squarefree_char0(&f.monic()) {
        let mut rest = part;
        for h in hints {
            let h = h.monic();
            if h.deg() > 0 && h.divides(&rest) {
                rest = rest.exact_div(&h)?.monic();
                out.push((h, mult));
            }
        }
        for r in rational_roots(&rest)? {
            let lin = Poly::linear(&field, &r);
            rest = rest.exact_div(&lin)?.monic();
            out.push((lin, mult));
        }
        match rest.deg() {
            0 => {}
            2 | 3 => out.push((rest, mult)),
            d => {
                return Err(Error::Factorization(format!(
                    "root-free factor {rest} of degree {d} over Q needs a factorization hint"
                )))
            }
        }
    }
    Ok(finish(out))
}

pub fn is_irreducible_prime(p: &Poly<PrimeField>) -> Result<bool> {
    if p.deg() == 0 {
        return Ok(false);
    }
    let fs = factor_prime(p, 0)?;
    Ok(fs.len() == 1 && fs[0].1 == 1)
}

pub fn is_irreducible_rational(p: &Poly<Rationals>) -> Result<bool> {
    match p.deg() {
        0 => Ok(false),
        1 => Ok(true),
        2 | 3 => Ok(rational_roots(p)?.is_empty()),
        _ => {
            if !rational_roots(p)?.is_empty() {
                return Ok(false);
            }
            Err(Error::Factorization(format!(
                "cannot decide irreducibility of {p} over Q"
            )))
        }
    }
}

/// Uniform access to factorization for the two base fields.
pub trait Factorize: crate::field::BaseField {
    fn factor_with(&self, p: &Poly<Self>, seed: u64, hints: &[Poly<Self>]) -> Result<Factors<Self>>;
    fn is_irreducible(&self, p: &Poly<Self>) -> Result<bool>;

    fn factor(&self, p: &Poly<Self>) -> Result<Factors<Self>> {
        self.factor_with(p, 0, &[])
    }
}

impl Factorize for PrimeField {
    fn factor_with(&self, p: &Poly<Self>, seed: u64, _hints: &[Poly<Self>]) -> Result<Factors<Self>> {
        factor_prime(p, seed)
    }
    fn is_irreducible(&self, p: &Poly<Self>) -> Result<bool> {
        is_irreducible_prime(p)
    }
}

impl Factorize for Rationals {
    fn factor_with(&self, p: &Poly<Self>, _seed: u64, hints: &[Poly<Self>]) -> Result<Factors<Self>> {
        factor_rational(p, hints)
    }
    fn is_irreducible(&self, p: &Poly<Self>) -> Result<bool> {
        is_irreducible_rational(p)
    }
}

/// All monic irreducible polynomials of the given degree over a small prime field.
pub fn irreducibles_of_degree(field: &PrimeField, degree: usize) -> Vec<Poly<PrimeField>> {
    let p = field.modulus();
    let total = p.to_u128().unwrap().pow(degree as u32);
    let mut out = Vec::new();
    for idx in 0..total {
        let mut coeffs = Vec::with_capacity(degree + 1);
        let mut k = idx;
        for _ in 0..degree {
            coeffs.push((k % p as u128) as u64);
            k /= p as u128;
        }
        coeffs.push(1);
        let poly = Poly::new(field, coeffs);
        if is_irreducible_prime(&poly).unwrap_or(false) {
            out.push(poly);
        }
    }
    out
}
