//! The quadratic-extension machinery L = F[t]/(p) for an irreducible
//! palindromial p ≠ t±1: the involution t̄ ↦ t̄⁻¹, the fixed field K,
//! the linear form f_p and the sesquilinear lift of F-bilinear forms.

use crate::error::{Error, Result};
use crate::factor::Factorize;
use crate::field::{Field, Rng};
use crate::linalg::Subspace;
use crate::matrix::Matrix;
use crate::poly::Poly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionField<F: Field> {
    base: F,
    modulus: Poly<F>,
    trace_poly: Poly<F>,
    t_inverse: Vec<F::Elem>,
    /// 2d×d, column j = (t̄+t̄⁻¹)^j in the power basis.
    k_basis: Matrix<F>,
    /// Matrix of the involution in the power basis.
    involution: Matrix<F>,
    /// Row vector w with f_p(λ) = w·λ.
    fp_row: Vec<F::Elem>,
    /// Inverse of M[a][c] = f_p(t̄^{a+c}).
    pairing_inv: Matrix<F>,
}

/// Coefficients of λ in the power basis 1, t̄, …, t̄^{2d−1}.
pub type ExtElem<F> = Vec<<F as Field>::Elem>;

impl<F: Field> ExtensionField<F> {
    pub fn new(modulus: &Poly<F>) -> Result<Self>
    where
        F: Factorize,
    {
        if !modulus.field().is_irreducible(modulus)? {
            return Err(Error::InvalidPoly(format!("{modulus} is reducible")));
        }
        Self::new_unchecked(modulus)
    }

    /// Skips the irreducibility test; `modulus` must be an irreducible
    /// palindromial of even degree.
    pub fn new_unchecked(modulus: &Poly<F>) -> Result<Self> {
        let f = modulus.field().clone();
        let trace_poly = modulus.trace_decompose()?;
        let n = modulus.deg();
        let d = n / 2;
        if !f.is_one(&modulus.coeff(0)) {
            return Err(Error::InvalidPoly(format!("{modulus} has p(0) ≠ 1")));
        }
        let mut ext = ExtensionField {
            base: f.clone(),
            modulus: modulus.clone(),
            trace_poly,
            t_inverse: vec![],
            k_basis: Matrix::zeros(&f, n, d),
            involution: Matrix::zeros(&f, n, n),
            fp_row: vec![],
            pairing_inv: Matrix::zeros(&f, n, n),
        };
        // t̄⁻¹ = −(t̄^{2d−1} + c_{2d−1} t̄^{2d−2} + … + c₁) since p(0) = 1
        let mut tinv = vec![f.zero(); n];
        for (k, slot) in tinv.iter_mut().enumerate() {
            *slot = f.neg(&modulus.coeff(k + 1));
        }
        ext.t_inverse = tinv;
        let s = ext.add(&ext.gen(), &ext.t_inverse);
        let mut cols = Vec::with_capacity(d);
        let mut acc = ext.one();
        for _ in 0..d {
            cols.push(acc.clone());
            acc = ext.mul(&acc, &s);
        }
        ext.k_basis = Matrix::from_columns(&f, n, &cols);
        let mut icols = Vec::with_capacity(n);
        let mut acc = ext.one();
        for _ in 0..n {
            icols.push(acc.clone());
            acc = ext.mul(&acc, &ext.t_inverse);
        }
        ext.involution = Matrix::from_columns(&f, n, &icols);
        // ℓ: first coordinate in k_basis, as a row functional on L
        let left = ext
            .k_basis
            .transpose()
            .solve_matrix(&Matrix::identity(&f, d))
            .ok_or_else(|| Error::InvalidPoly("degenerate trace basis".into()))?
            .transpose();
        let ell = left.submatrix(0, 1, 0, n);
        ext.fp_row = ell.mul(&Matrix::identity(&f, n).add(&ext.involution)).row(0);
        let mut m = Matrix::zeros(&f, n, n);
        let mut pw = ext.one();
        let mut powers = Vec::with_capacity(2 * n);
        for _ in 0..2 * n {
            powers.push(pw.clone());
            pw = ext.mul(&pw, &ext.gen());
        }
        for a in 0..n {
            for c in 0..n {
                m.set(a, c, ext.f_p(&powers[a + c]));
            }
        }
        ext.pairing_inv = m
            .inverse()
            .map_err(|_| Error::InvalidPoly("trace pairing is degenerate".into()))?;
        Ok(ext)
    }

    pub fn base(&self) -> &F {
        &self.base
    }
    pub fn modulus(&self) -> &Poly<F> {
        &self.modulus
    }
    pub fn trace_poly(&self) -> &Poly<F> {
        &self.trace_poly
    }
    pub fn t_inverse(&self) -> &ExtElem<F> {
        &self.t_inverse
    }
    pub fn k_basis(&self) -> &Matrix<F> {
        &self.k_basis
    }
    /// Degree of L over F.
    pub fn degree(&self) -> usize {
        self.modulus.deg()
    }

    /// The class t̄ of t.
    pub fn gen(&self) -> ExtElem<F> {
        self.from_poly(&Poly::t(&self.base))
    }

    pub fn embed(&self, c: &F::Elem) -> ExtElem<F> {
        self.from_poly(&Poly::constant(&self.base, c.clone()))
    }

    pub fn from_poly(&self, p: &Poly<F>) -> ExtElem<F> {
        let r = p.rem(&self.modulus).expect("nonzero modulus");
        (0..self.degree()).map(|i| r.coeff(i)).collect()
    }

    pub fn to_poly(&self, a: &ExtElem<F>) -> Poly<F> {
        Poly::new(&self.base, a.clone())
    }

    pub fn involution(&self, a: &ExtElem<F>) -> ExtElem<F> {
        self.involution.mul_vec(a)
    }

    /// f_p(λ) = e_R(ψ(λ + λ•)).
    pub fn f_p(&self, a: &ExtElem<F>) -> F::Elem {
        let f = &self.base;
        self.fp_row
            .iter()
            .zip(a)
            .fold(f.zero(), |acc, (w, x)| f.add(&acc, &f.mul(w, x)))
    }

    /// The unique λ with f_p(t̄^a λ) = rhs[a] for a < 2d.
    pub fn solve_pairing(&self, rhs: &[F::Elem]) -> ExtElem<F> {
        self.pairing_inv.mul_vec(rhs)
    }

    /// A unit η with η• = −η, namely t̄ − t̄⁻¹.
    pub fn skew_unit(&self) -> ExtElem<F> {
        self.sub(&self.gen(), &self.t_inverse)
    }

    pub fn is_in_fixed_field(&self, a: &ExtElem<F>) -> bool {
        self.involution(a) == *a
    }

    /// Conjugate transpose with respect to •.
    pub fn conj_transpose(&self, m: &Matrix<Self>) -> Matrix<Self> {
        Matrix::from_fn(self, m.cols(), m.rows(), |i, j| self.involution(m.get(j, i)))
    }
}

impl<F: Field> Field for ExtensionField<F> {
    type Elem = ExtElem<F>;

    fn zero(&self) -> Self::Elem {
        vec![self.base.zero(); self.degree()]
    }
    fn one(&self) -> Self::Elem {
        let mut v = self.zero();
        v[0] = self.base.one();
        v
    }
    fn from_i64(&self, n: i64) -> Self::Elem {
        self.embed(&self.base.from_i64(n))
    }
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.iter().zip(b).map(|(x, y)| self.base.add(x, y)).collect()
    }
    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        a.iter().map(|x| self.base.neg(x)).collect()
    }
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.from_poly(&self.to_poly(a).mul(&self.to_poly(b)))
    }
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem> {
        let pa = self.to_poly(a);
        if pa.is_zero() {
            return None;
        }
        let (g, s, _) = pa.ext_gcd(&self.modulus);
        if !g.is_constant() {
            return None;
        }
        let ginv = self.base.inv(&g.coeff(0))?;
        Some(self.from_poly(&s.scale(&ginv)))
    }
    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.iter().all(|x| self.base.is_zero(x))
    }
    fn characteristic(&self) -> u64 {
        self.base.characteristic()
    }
    fn size(&self) -> Option<u128> {
        self.base.size()?.checked_pow(self.degree() as u32)
    }
    fn random(&self, rng: &mut Rng) -> Self::Elem {
        (0..self.degree()).map(|_| self.base.random(rng)).collect()
    }
    fn format(&self, a: &Self::Elem) -> String {
        self.to_poly(a).to_string()
    }
}

/// Output of [`sesquilift`]: the Gram matrix over L and the L-basis
/// (columns, as F-vectors) it refers to.
#[derive(Clone, Debug)]
pub struct Lift<F: Field> {
    pub gram: Matrix<ExtensionField<F>>,
    pub basis: Matrix<F>,
}

/// Lift an F-bilinear form B on an L-space (t̄ acting by `action`) to the
/// unique B^L with B(x, λy) = f_p(λ·B^L(x, y)).
pub fn sesquilift<F: Field>(
    ext: &ExtensionField<F>,
    b: &Matrix<F>,
    action: &Matrix<F>,
) -> Result<Lift<F>> {
    let f = ext.base();
    let n = b.rows();
    let e = ext.degree();
    if !b.is_square() || action.rows() != n || !action.is_square() {
        return Err(Error::Dimension("form and action must be square of equal size".into()));
    }
    if n % e != 0 {
        return Err(Error::Dimension(format!(
            "dimension {n} is not a multiple of [L:F] = {e}"
        )));
    }
    let tinv = action.inverse()?;
    if tinv.transpose().mul(b) != b.mul(action) {
        return Err(Error::Precondition(
            "form is not compatible with the involution".into(),
        ));
    }
    // L-basis greedily by orbits of the action
    let mut span = Subspace::zero(f, n);
    let mut gens: Vec<Vec<F::Elem>> = Vec::new();
    for i in 0..n {
        if span.dim() == n {
            break;
        }
        let mut v = vec![f.zero(); n];
        v[i] = f.one();
        if span.contains(&v) {
            continue;
        }
        let orbit = crate::linalg::krylov(action, &v, e);
        span = span.sum(&Subspace::span(&orbit));
        gens.push(v);
    }
    let m = gens.len();
    let powers: Vec<Matrix<F>> = (0..e).map(|a| action.pow(a)).collect();
    let mut gram = Matrix::zeros(ext, m, m);
    for i in 0..m {
        let bi = Matrix::from_rows(f, vec![gens[i].clone()])?.mul(b);
        for j in 0..m {
            let rhs: Vec<F::Elem> = powers
                .iter()
                .map(|pa| bi.mul_vec(&pa.mul_vec(&gens[j]))[0].clone())
                .collect();
            gram.set(i, j, ext.solve_pairing(&rhs));
        }
    }
    Ok(Lift {
        gram,
        basis: Matrix::from_columns(f, n, &gens),
    })
}
