use std::fmt;

use crate::error::{Error, Result};
use crate::factor::Factorize;
use crate::field::Field;
use crate::isopair::{h, hyperbolic_extension, Epsilon, Isopair};
use crate::linalg::{companion, primary_factors, JordanMap};
use crate::matrix::Matrix;
use crate::poly::Poly;
use crate::wall::{compute_all_for, is_hyperbolic_hermitian, is_hyperbolic_symmetric};

use super::gl::factor_gl;
use super::isometry::by_hyperbolic;
use super::{verify_certificate, Certificate, Group, SearchOptions};

/// The first failing condition of the symplectic criterion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Obstruction {
    /// Every (p, r, n_{p,r}) with n_{p,r} odd.
    OddJordan(Vec<(String, usize, usize)>),
    NonHyperbolicHermitian { poly: String, r: usize },
    NonHyperbolicQuadratic { eta: i64, r: usize },
}

impl fmt::Display for Obstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Obstruction::OddJordan(list) => {
                let parts: Vec<String> = list
                    .iter()
                    .map(|(p, r, n)| format!("n_{{{p},{r}}}={n} odd"))
                    .collect();
                write!(f, "odd Jordan number: {}", parts.join(", "))
            }
            Obstruction::NonHyperbolicHermitian { poly, r } => {
                write!(f, "non-hyperbolic Hermitian invariant at ({poly}, {r})")
            }
            Obstruction::NonHyperbolicQuadratic { eta, r } => {
                let p = if *eta == 1 { "t-1" } else { "t+1" };
                write!(f, "non-hyperbolic quadratic invariant at ({p}, {r})")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecisionReport<F: Field> {
    pub bireflectional: bool,
    pub witness: Option<Certificate<F>>,
    pub obstruction: Option<Obstruction>,
}

fn require_symplectic<F: Field>(pair: &Isopair<F>) -> Result<()> {
    if pair.epsilon() != Epsilon::Minus {
        return Err(Error::Precondition("expected a symplectic (ε = −1) isopair".into()));
    }
    Ok(())
}

fn decide_with<F: Factorize>(pair: &Isopair<F>, primes: &[Poly<F>]) -> Result<DecisionReport<F>> {
    require_symplectic(pair)?;
    if !pair.field().is_finite() {
        return Err(Error::Unsupported(
            "the symplectic decision needs a finite field".into(),
        ));
    }
    let w = compute_all_for(pair, primes)?;
    let odd: Vec<(String, usize, usize)> = w
        .jordan
        .iter()
        .filter(|(_, n)| *n % 2 == 1)
        .map(|((p, r), n)| (p.to_string(), *r, *n))
        .collect();
    let obstruction = if !odd.is_empty() {
        Some(Obstruction::OddJordan(odd))
    } else if let Some(((p, r), _)) = w
        .hermitian
        .iter()
        .find(|(_, h)| !is_hyperbolic_hermitian(h).unwrap_or(false))
    {
        Some(Obstruction::NonHyperbolicHermitian {
            poly: p.to_string(),
            r: *r,
        })
    } else if let Some(((eta, r), _)) = w
        .quadratic
        .iter()
        .find(|(_, g)| !is_hyperbolic_symmetric(*g).unwrap_or(false))
    {
        Some(Obstruction::NonHyperbolicQuadratic {
            eta: eta.as_i64(),
            r: *r,
        })
    } else {
        None
    };
    Ok(DecisionReport {
        bireflectional: obstruction.is_none(),
        witness: None,
        obstruction,
    })
}

/// Bireflectionality in Sp(b): all Jordan numbers even and all Wall invariants hyperbolic.
pub fn decide_sp<F: Factorize>(pair: &Isopair<F>) -> Result<DecisionReport<F>> {
    let primes = primary_factors(pair.u(), 0, &[])?;
    decide_with(pair, &primes)
}

/// v with n_{p,r}(v) = ½·n_{p,r}(u): companion blocks sorted by (p, r).
pub fn halved_v<F: Field>(field: &F, jordan: &JordanMap<F>) -> Result<Matrix<F>> {
    let mut blocks = Vec::new();
    for ((p, r), n) in jordan {
        if n % 2 == 1 {
            return Err(Error::NotBireflectional(format!("n_{{{p},{r}}}={n} odd")));
        }
        for _ in 0..n / 2 {
            blocks.push(companion(&p.pow(*r)));
        }
    }
    Ok(Matrix::block_diag(field, &blocks))
}

/// Involutions s1, s2 in Sp(b) with s1·s2 = u, via an isometry to H₋₁(v).
pub fn factor_sp<F: Factorize>(pair: &Isopair<F>, opts: &SearchOptions) -> Result<Certificate<F>> {
    let primes = primary_factors(pair.u(), opts.seed, &[])?;
    let report = decide_with(pair, &primes)?;
    if let Some(ob) = report.obstruction {
        return Err(Error::NotBireflectional(ob.to_string()));
    }
    let f = pair.field();
    let w = compute_all_for(pair, &primes)?;
    let v = halved_v(f, &w.jordan)?;
    let gl = factor_gl(&v)?;
    let target = hyperbolic_extension(&v, Epsilon::Minus)?;
    let phi = by_hyperbolic(pair, &target, &primes, opts)?;
    let phi_inv = phi.inverse()?;
    let conj = |a: &Matrix<F>| -> Result<Matrix<F>> { Ok(phi_inv.mul(&h(a)?).mul(&phi)) };
    let cert = Certificate {
        s1: conj(&gl.s1)?,
        s2: conj(&gl.s2)?,
        group: Group::Sp,
        gram: Some(pair.gram().clone()),
        seed: opts.seed,
    };
    if !verify_certificate(pair.u(), &cert) {
        return Err(Error::Verification("symplectic factorization".into()));
    }
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    fn j2(f: &PrimeField) -> Matrix<PrimeField> {
        Matrix::from_i64(f, &[&[0, 1], &[-1, 0]])
    }

    #[test]
    fn decide_examples() {
        let f3 = PrimeField::new(3).unwrap();
        let minus = Isopair::new(Epsilon::Minus, j2(&f3), Matrix::scalar(&f3, 2, 2)).unwrap();
        assert!(decide_sp(&minus).unwrap().bireflectional);
        let f5 = PrimeField::new(5).unwrap();
        let d = Isopair::new(Epsilon::Minus, j2(&f5), Matrix::from_i64(&f5, &[&[2, 0], &[0, 3]]))
            .unwrap();
        let rep = decide_sp(&d).unwrap();
        assert!(!rep.bireflectional);
        let msg = rep.obstruction.unwrap().to_string();
        assert!(msg.contains("n_{t+3,1}=1 odd"), "{msg}");
        assert!(msg.contains("odd Jordan number"));
        let q = crate::field::Rationals;
        let qp = Isopair::new(Epsilon::Minus, j2_q(&q), Matrix::identity(&q, 2)).unwrap();
        assert!(matches!(decide_sp(&qp), Err(Error::Unsupported(_))));
    }

    fn j2_q(q: &crate::field::Rationals) -> Matrix<crate::field::Rationals> {
        Matrix::from_i64(q, &[&[0, 1], &[-1, 0]])
    }

    #[test]
    fn factor_sp_examples() {
        let f3 = PrimeField::new(3).unwrap();
        let minus = Isopair::new(Epsilon::Minus, j2(&f3), Matrix::scalar(&f3, 2, 2)).unwrap();
        let cert = factor_sp(&minus, &SearchOptions::default()).unwrap();
        assert!(verify_certificate(minus.u(), &cert));
        let p = Poly::from_i64s(&f3, &[1, 0, 1]);
        let hp = hyperbolic_extension(&companion(&p), Epsilon::Minus).unwrap();
        assert!(decide_sp(&hp).unwrap().bireflectional);
        let cert = factor_sp(&hp, &SearchOptions::default()).unwrap();
        assert!(verify_certificate(hp.u(), &cert));
    }
}
