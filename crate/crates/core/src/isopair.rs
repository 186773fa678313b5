//! ε-isopairs (b, u) and the hyperbolic constructions H_ε(u), h(u), κ(b).
//!
//! Conventions: b(x, y) = xᵀGy for column vectors; on V × V* the first n
//! coordinates are V and the last n the dual basis, with Gram [[0, εI], [I, 0]].

use std::fmt;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{restrict_map, Subspace};
use crate::matrix::Matrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Epsilon {
    Plus,
    Minus,
}

impl Epsilon {
    pub fn from_i64(e: i64) -> Result<Self> {
        match e {
            1 => Ok(Epsilon::Plus),
            -1 => Ok(Epsilon::Minus),
            _ => Err(Error::Parse(format!("epsilon must be 1 or -1, got {e}"))),
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Epsilon::Plus => 1,
            Epsilon::Minus => -1,
        }
    }

    pub fn scalar<F: Field>(self, f: &F) -> F::Elem {
        f.from_i64(self.as_i64())
    }
}

impl fmt::Display for Epsilon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_i64())
    }
}

/// List of violated isopair invariants; empty when valid.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub failures: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn validate<F: Field>(eps: Epsilon, gram: &Matrix<F>, u: &Matrix<F>) -> ValidationReport {
    let mut failures = Vec::new();
    if !gram.is_square() {
        failures.push("gram is not square".to_string());
    }
    if !u.is_square() {
        failures.push("u is not square".to_string());
    }
    if gram.rows() != u.rows() || gram.cols() != u.cols() {
        failures.push("gram and u have different sizes".to_string());
    }
    if !failures.is_empty() {
        return ValidationReport { failures };
    }
    if !gram.is_invertible() {
        failures.push("degenerate: gram is singular".to_string());
    }
    match eps {
        Epsilon::Plus if !gram.is_symmetric() => {
            failures.push("gram is not symmetric".to_string())
        }
        Epsilon::Minus if !gram.is_alternating() => {
            failures.push("gram is not alternating".to_string())
        }
        _ => {}
    }
    if u.transpose().mul(gram).mul(u) != *gram {
        failures.push("u is not an isometry: uᵀGu ≠ G".to_string());
    }
    ValidationReport { failures }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Isopair<F: Field> {
    epsilon: Epsilon,
    gram: Matrix<F>,
    u: Matrix<F>,
}

impl<F: Field> Isopair<F> {
    pub fn new(epsilon: Epsilon, gram: Matrix<F>, u: Matrix<F>) -> Result<Self> {
        let report = validate(epsilon, &gram, &u);
        if !report.is_valid() {
            return Err(Error::Precondition(report.failures.join("; ")));
        }
        Ok(Isopair { epsilon, gram, u })
    }

    pub fn new_unchecked(epsilon: Epsilon, gram: Matrix<F>, u: Matrix<F>) -> Self {
        debug_assert!(validate(epsilon, &gram, &u).is_valid());
        Isopair { epsilon, gram, u }
    }

    /// The zero-dimensional isopair, identity for ⊥.
    pub fn empty(field: &F, epsilon: Epsilon) -> Self {
        Isopair {
            epsilon,
            gram: Matrix::zeros(field, 0, 0),
            u: Matrix::zeros(field, 0, 0),
        }
    }

    pub fn epsilon(&self) -> Epsilon {
        self.epsilon
    }
    pub fn gram(&self) -> &Matrix<F> {
        &self.gram
    }
    pub fn u(&self) -> &Matrix<F> {
        &self.u
    }
    pub fn field(&self) -> &F {
        self.gram.field()
    }
    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn validate(&self) -> ValidationReport {
        validate(self.epsilon, &self.gram, &self.u)
    }

    pub fn form(&self, x: &[F::Elem], y: &[F::Elem]) -> F::Elem {
        let f = self.field();
        x.iter()
            .zip(self.gram.mul_vec(y))
            .fold(f.zero(), |acc, (a, b)| f.add(&acc, &f.mul(a, &b)))
    }

    pub fn is_isometry(&self, m: &Matrix<F>) -> bool {
        m.rows() == self.dim() && m.transpose().mul(&self.gram).mul(m) == self.gram
    }

    pub fn perp_sum(&self, other: &Self) -> Result<Self> {
        if self.epsilon != other.epsilon {
            return Err(Error::Precondition("orthogonal sum of mixed ε".into()));
        }
        if self.field() != other.field() {
            return Err(Error::Precondition("orthogonal sum over different fields".into()));
        }
        let f = self.field();
        Ok(Isopair {
            epsilon: self.epsilon,
            gram: Matrix::block_diag(f, &[self.gram.clone(), other.gram.clone()]),
            u: Matrix::block_diag(f, &[self.u.clone(), other.u.clone()]),
        })
    }

    pub fn perp_sum_all(field: &F, epsilon: Epsilon, parts: &[Self]) -> Result<Self> {
        parts
            .iter()
            .try_fold(Self::empty(field, epsilon), |acc, p| acc.perp_sum(p))
    }

    /// b-orthogonal complement of the column span of `basis`.
    pub fn perp(&self, basis: &Matrix<F>) -> Subspace<F> {
        Subspace::kernel(&basis.transpose().mul(&self.gram))
    }

    pub fn is_regular(&self, basis: &Matrix<F>) -> bool {
        basis.transpose().mul(&self.gram).mul(basis).is_invertible()
    }

    /// (b, u) restricted to the column span of `basis`, in that basis.
    pub fn restrict(&self, basis: &Matrix<F>) -> Result<Self> {
        if basis.rank() != basis.cols() {
            return Err(Error::Precondition("restriction basis is dependent".into()));
        }
        let g = basis.transpose().mul(&self.gram).mul(basis);
        if !g.is_invertible() {
            return Err(Error::Precondition("subspace is not regular".into()));
        }
        let u = restrict_map(&self.u, basis)?;
        Ok(Isopair {
            epsilon: self.epsilon,
            gram: g,
            u,
        })
    }

    /// The isopair (gᵀGg, g⁻¹ug), isometric to self via g.
    pub fn transport(&self, g: &Matrix<F>) -> Result<Self> {
        let gi = g.inverse()?;
        Ok(Isopair {
            epsilon: self.epsilon,
            gram: g.transpose().mul(&self.gram).mul(g),
            u: gi.mul(&self.u).mul(g),
        })
    }

    /// (b, u⁻¹).
    pub fn inverse(&self) -> Self {
        Isopair {
            epsilon: self.epsilon,
            gram: self.gram.clone(),
            u: self.u.inverse().expect("isometries are invertible"),
        }
    }

    pub fn with_u(&self, u: Matrix<F>) -> Result<Self> {
        Self::new(self.epsilon, self.gram.clone(), u)
    }
}

/// Gram [[0, εI], [I, 0]] of H_V^ε.
pub fn hyperbolic_gram<F: Field>(field: &F, n: usize, eps: Epsilon) -> Matrix<F> {
    let e = eps.scalar(field);
    Matrix::from_fn(field, 2 * n, 2 * n, |i, j| {
        if i < n && j == i + n {
            e.clone()
        } else if i >= n && j + n == i {
            field.one()
        } else {
            field.zero()
        }
    })
}

/// h(u) = u ⊕ (u⁻¹)ᵀ.
pub fn h<F: Field>(u: &Matrix<F>) -> Result<Matrix<F>> {
    let uit = u.inverse()?.transpose();
    Ok(Matrix::block_diag(u.field(), &[u.clone(), uit]))
}

/// H_ε(u) = (H_V^ε, h(u)).
pub fn hyperbolic_extension<F: Field>(u: &Matrix<F>, eps: Epsilon) -> Result<Isopair<F>> {
    if !u.is_square() {
        return Err(Error::Dimension("u must be square".into()));
    }
    Ok(Isopair {
        epsilon: eps,
        gram: hyperbolic_gram(u.field(), u.rows(), eps),
        u: h(u)?,
    })
}

fn check_form_type<F: Field>(g: &Matrix<F>, eps: Epsilon) -> Result<()> {
    let ok = match eps {
        Epsilon::Plus => g.is_symmetric(),
        Epsilon::Minus => g.is_alternating(),
    };
    if !ok {
        return Err(Error::Precondition(format!(
            "form must be {} for ε = {eps}",
            if eps == Epsilon::Plus { "symmetric" } else { "alternating" }
        )));
    }
    Ok(())
}

/// κ(b) = [[0, G⁻¹], [G, 0]].
pub fn kappa<F: Field>(b: &Matrix<F>, eps: Epsilon) -> Result<Matrix<F>> {
    check_form_type(b, eps)?;
    let f = b.field();
    let n = b.rows();
    let bi = b.inverse()?;
    let z = Matrix::zeros(f, n, n);
    Ok(z.hstack(&bi).vstack(&b.hstack(&z)))
}

/// (κ(b)·κ(c), h(G_b⁻¹G_c)); the two entries are equal.
pub fn kappa_compose<F: Field>(
    b: &Matrix<F>,
    c: &Matrix<F>,
    eps: Epsilon,
) -> Result<(Matrix<F>, Matrix<F>)> {
    let lhs = kappa(b, eps)?.mul(&kappa(c, eps)?);
    let rhs = h(&b.inverse()?.mul(c))?;
    Ok((lhs, rhs))
}

/// Gram of the form b with v = κ(b).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KappaForm<F: Field> {
    pub gram: Matrix<F>,
}

pub fn recognize_kappa<F: Field>(v: &Matrix<F>, eps: Epsilon) -> Result<KappaForm<F>> {
    if !v.is_square() || v.rows() % 2 != 0 {
        return Err(Error::Dimension("κ-type involutions have even size".into()));
    }
    let f = v.field();
    let n = v.rows() / 2;
    if !v.mul(v).is_identity() {
        return Err(Error::Precondition("not an involution".into()));
    }
    let g = hyperbolic_gram(f, n, eps);
    if v.transpose().mul(&g).mul(v) != g {
        return Err(Error::Precondition("not an isometry of H_V".into()));
    }
    if !v.submatrix(0, n, 0, n).is_zero() || !v.submatrix(n, 2 * n, n, 2 * n).is_zero() {
        return Err(Error::Precondition("does not exchange V and V*".into()));
    }
    let b = v.submatrix(n, 2 * n, 0, n);
    check_form_type(&b, eps)?;
    Ok(KappaForm { gram: b })
}

/// Permutation Ψ from the coordinates of H_ε(u₁ ⊕ u₂), (x₁, x₂, φ₁, φ₂),
/// to those of H_ε(u₁) ⊥ H_ε(u₂), (x₁, φ₁, x₂, φ₂).
pub fn psi<F: Field>(field: &F, n1: usize, n2: usize) -> Matrix<F> {
    let n = n1 + n2;
    // target index of each source coordinate
    let target = |s: usize| {
        if s < n1 {
            s
        } else if s < n {
            2 * n1 + (s - n1)
        } else if s < n + n1 {
            n1 + (s - n)
        } else {
            2 * n1 + n2 + (s - n - n1)
        }
    };
    let mut m = Matrix::zeros(field, 2 * n, 2 * n);
    for s in 0..2 * n {
        m.set(target(s), s, field.one());
    }
    m
}
