use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{companion, frobenius};
use crate::matrix::Matrix;
use crate::poly::Poly;

use super::{Certificate, Group};

/// On the companion basis of a palindromial q: the involution u^k x ↦ u^{−k} x.
pub fn gl_involution<F: Field>(q: &Poly<F>) -> Result<Matrix<F>> {
    if !q.is_palindromial()? {
        return Err(Error::NotSimilarToInverse(q.to_string()));
    }
    let f = q.field();
    let c = companion(q);
    let ci = c.inverse()?;
    let d = q.deg();
    let mut cols = Vec::with_capacity(d);
    let mut v = vec![f.zero(); d];
    v[0] = f.one();
    for _ in 0..d {
        let next = ci.mul_vec(&v);
        cols.push(std::mem::replace(&mut v, next));
    }
    Ok(Matrix::from_columns(f, d, &cols))
}

/// u = s1·s2 with s2 built per cyclic summand and s1 = u·s2.
pub fn factor_gl<F: Field>(u: &Matrix<F>) -> Result<Certificate<F>> {
    if !u.is_square() {
        return Err(Error::Dimension("u must be square".into()));
    }
    if !u.is_invertible() {
        return Err(Error::Singular);
    }
    let f = u.field();
    let fr = frobenius(u);
    let blocks = fr
        .factors
        .iter()
        .map(gl_involution)
        .collect::<Result<Vec<_>>>()?;
    let p = &fr.basis;
    let s = p.mul(&Matrix::block_diag(f, &blocks)).mul(&p.inverse()?);
    let cert = Certificate {
        s1: u.mul(&s),
        s2: s,
        group: Group::GL,
        gram: None,
        seed: 0,
    };
    if !super::verify_certificate(u, &cert) {
        return Err(Error::Verification("GL factorization".into()));
    }
    Ok(cert)
}
