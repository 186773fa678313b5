//! Subspaces, minimal polynomials, invariant factors and Jordan numbers.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::factor::Factorize;
use crate::field::Field;
use crate::matrix::Matrix;
use crate::poly::Poly;

/// A subspace of F^n held by a canonical basis: the transpose of the
/// nonzero rows of the RREF of any spanning set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace<F: Field> {
    basis: Matrix<F>,
}

impl<F: Field> Subspace<F> {
    /// Span of the columns of `m`.
    pub fn span(m: &Matrix<F>) -> Self {
        let (r, pivots) = m.transpose().rref();
        let k = pivots.len();
        Subspace {
            basis: r.submatrix(0, k, 0, m.rows()).transpose(),
        }
    }

    pub fn zero(field: &F, n: usize) -> Self {
        Subspace {
            basis: Matrix::zeros(field, n, 0),
        }
    }

    pub fn full(field: &F, n: usize) -> Self {
        Subspace {
            basis: Matrix::identity(field, n),
        }
    }

    pub fn kernel(m: &Matrix<F>) -> Self {
        Self::span(&m.kernel())
    }

    pub fn image(m: &Matrix<F>) -> Self {
        Self::span(m)
    }

    pub fn basis(&self) -> &Matrix<F> {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn ambient(&self) -> usize {
        self.basis.rows()
    }

    pub fn field(&self) -> &F {
        self.basis.field()
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        self.coords(v).is_some()
    }

    pub fn contains_space(&self, other: &Self) -> bool {
        self.basis.solve_matrix(&other.basis).is_some()
    }

    /// Coordinates of `v` in the canonical basis.
    pub fn coords(&self, v: &[F::Elem]) -> Option<Vec<F::Elem>> {
        let col = Matrix::column_vector(self.field(), v);
        self.basis.solve_matrix(&col).map(|x| x.col(0))
    }

    pub fn sum(&self, other: &Self) -> Self {
        Self::span(&self.basis.hstack(&other.basis))
    }

    pub fn intersect(&self, other: &Self) -> Self {
        let f = self.field();
        if self.dim() == 0 || other.dim() == 0 {
            return Self::zero(f, self.ambient());
        }
        let k = self.basis.hstack(&other.basis.neg()).kernel();
        let top = k.submatrix(0, self.dim(), 0, k.cols());
        Self::span(&self.basis.mul(&top))
    }

    /// Image of the subspace under `m`.
    pub fn map(&self, m: &Matrix<F>) -> Self {
        Self::span(&m.mul(&self.basis))
    }

    pub fn is_invariant(&self, u: &Matrix<F>) -> bool {
        self.contains_space(&self.map(u))
    }

    /// Columns of `larger`'s basis (greedy, in order) completing `self` to `larger`.
    pub fn complement_in(&self, larger: &Self) -> Matrix<F> {
        let f = self.field();
        let mut acc = self.basis.clone();
        let mut rank = acc.cols();
        let mut chosen = Vec::new();
        for j in 0..larger.dim() {
            let c = larger.basis.select_cols(&[j]);
            let trial = acc.hstack(&c);
            let r = trial.rank();
            if r > rank {
                acc = trial;
                rank = r;
                chosen.push(larger.basis.col(j));
            }
        }
        Matrix::from_columns(f, self.ambient(), &chosen)
    }
}

/// Matrix of the restriction of `u` to the column span of `basis`
/// (assumed invariant), in that basis.
pub fn restrict_map<F: Field>(u: &Matrix<F>, basis: &Matrix<F>) -> Result<Matrix<F>> {
    basis
        .solve_matrix(&u.mul(basis))
        .ok_or_else(|| Error::Precondition("subspace is not invariant".into()))
}

/// p(u) by Horner's rule.
pub fn eval_poly<F: Field>(p: &Poly<F>, u: &Matrix<F>) -> Matrix<F> {
    let f = u.field();
    let n = u.rows();
    let mut acc = Matrix::zeros(f, n, n);
    for c in p.coeffs().iter().rev() {
        acc = acc.mul(u).add_scalar(c);
    }
    acc
}

/// Standard companion matrix: ones on the subdiagonal, last column −q₀, …, −q_{d−1}.
pub fn companion<F: Field>(q: &Poly<F>) -> Matrix<F> {
    assert!(q.is_monic(), "companion of a non-monic polynomial");
    let f = q.field();
    let d = q.deg();
    let mut m = Matrix::zeros(f, d, d);
    for i in 1..d {
        m.set(i, i - 1, f.one());
    }
    for i in 0..d {
        m.set(i, d - 1, f.neg(&q.coeff(i)));
    }
    m
}

/// Krylov matrix [x, ux, …, u^{k−1}x].
pub fn krylov<F: Field>(u: &Matrix<F>, x: &[F::Elem], k: usize) -> Matrix<F> {
    let mut cols = Vec::with_capacity(k);
    let mut v = x.to_vec();
    for _ in 0..k {
        let next = u.mul_vec(&v);
        cols.push(std::mem::replace(&mut v, next));
    }
    Matrix::from_columns(u.field(), u.rows(), &cols)
}

/// Monic generator of {q : q(u)x = 0}.
pub fn local_minimal_polynomial<F: Field>(u: &Matrix<F>, x: &[F::Elem]) -> Poly<F> {
    let f = u.field();
    let n = u.rows();
    let mut cols: Vec<Vec<F::Elem>> = Vec::new();
    let mut v = x.to_vec();
    loop {
        let k = Matrix::from_columns(f, n, &cols);
        if let Some(c) = k.solve_matrix(&Matrix::column_vector(f, &v)) {
            let mut coeffs: Vec<F::Elem> = c.col(0).iter().map(|a| f.neg(a)).collect();
            coeffs.push(f.one());
            return Poly::new(f, coeffs);
        }
        let next = u.mul_vec(&v);
        cols.push(std::mem::replace(&mut v, next));
    }
}

/// A vector whose local minimal polynomial is the minimal polynomial of `u`,
/// together with that polynomial.
pub fn maximal_vector<F: Field>(u: &Matrix<F>) -> (Vec<F::Elem>, Poly<F>) {
    let f = u.field();
    let n = u.rows();
    let mut x = vec![f.zero(); n];
    let mut a = Poly::one(f);
    for i in 0..n {
        let mut e = vec![f.zero(); n];
        e[i] = f.one();
        let b = local_minimal_polynomial(u, &e);
        if b.divides(&a) {
            continue;
        }
        // coprime splitting a'·b' = lcm(a, b) with a' | a, b' | b
        let mut a1 = a.clone();
        let mut b1 = b.exact_div(&a.gcd(&b)).expect("gcd divides");
        loop {
            let g = a1.gcd(&b1);
            if g.is_constant() {
                break;
            }
            a1 = a1.exact_div(&g).expect("gcd divides");
            b1 = b1.mul(&g);
        }
        let xa = eval_poly(&a.exact_div(&a1).expect("a' | a"), u).mul_vec(&x);
        let xb = eval_poly(&b.exact_div(&b1).expect("b' | b"), u).mul_vec(&e);
        x = xa.iter().zip(&xb).map(|(p, q)| f.add(p, q)).collect();
        a = a1.mul(&b1);
        debug_assert_eq!(local_minimal_polynomial(u, &x), a);
    }
    (x, a)
}

pub fn minimal_polynomial<F: Field>(u: &Matrix<F>) -> Poly<F> {
    assert!(u.is_square());
    maximal_vector(u).1
}

/// Rational canonical (Frobenius) decomposition.
#[derive(Clone, Debug)]
pub struct Frobenius<F: Field> {
    /// Columns: concatenated Krylov bases of the cyclic summands.
    pub basis: Matrix<F>,
    /// Minimal polynomials of the summands, each divisible by the next.
    pub factors: Vec<Poly<F>>,
}

impl<F: Field> Frobenius<F> {
    /// block_diag of the companions; equals basis⁻¹·u·basis.
    pub fn normal_form(&self, field: &F) -> Matrix<F> {
        let blocks: Vec<_> = self.factors.iter().map(companion).collect();
        Matrix::block_diag(field, &blocks)
    }

    /// (offset, size) of each summand inside `basis`.
    pub fn blocks(&self) -> Vec<(usize, usize)> {
        let mut off = 0;
        self.factors
            .iter()
            .map(|q| {
                let b = (off, q.deg());
                off += q.deg();
                b
            })
            .collect()
    }
}

/// Factorization-free cyclic decomposition: split off the Krylov space of a
/// maximal vector with an invariant complement, then recurse.
pub fn frobenius<F: Field>(u: &Matrix<F>) -> Frobenius<F> {
    assert!(u.is_square());
    let f = u.field();
    let n = u.rows();
    if n == 0 {
        return Frobenius {
            basis: Matrix::zeros(f, 0, 0),
            factors: vec![],
        };
    }
    let (x, m) = maximal_vector(u);
    let d = m.deg();
    let k = krylov(u, &x, d);
    if d == n {
        return Frobenius {
            basis: k,
            factors: vec![m],
        };
    }
    // functional φ with φ(u^j x) = δ_{j,d−1}; W = ∩ ker φ∘u^i is an invariant complement
    let mut e = vec![f.zero(); d];
    e[d - 1] = f.one();
    let (phi, _) = k
        .transpose()
        .solve(&e)
        .expect("dimensions agree")
        .expect("Krylov columns are independent");
    let mut rows = Vec::with_capacity(d);
    let mut row = Matrix::from_rows(f, vec![phi]).expect("one row");
    for _ in 0..d {
        rows.push(row.row(0));
        row = row.mul(u);
    }
    let w = Matrix::from_rows(f, rows).expect("rectangular").kernel();
    let uw = restrict_map(u, &w).expect("complement is invariant");
    let sub = frobenius(&uw);
    let mut factors = vec![m];
    factors.extend(sub.factors);
    Frobenius {
        basis: k.hstack(&w.mul(&sub.basis)),
        factors,
    }
}

/// Invariant factors p₁ | p₂ | … | p_r of u (nonconstant, ascending), via
/// Smith reduction of tI − u over F[t].
pub fn invariant_factors<F: Field>(u: &Matrix<F>) -> Vec<Poly<F>> {
    assert!(u.is_square());
    let f = u.field();
    let n = u.rows();
    let mut a: Vec<Vec<Poly<F>>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c = Poly::constant(f, f.neg(u.get(i, j)));
                    if i == j {
                        c.add(&Poly::t(f))
                    } else {
                        c
                    }
                })
                .collect()
        })
        .collect();
    let mut diag = Vec::with_capacity(n);
    for k in 0..n {
        loop {
            // pivot of least degree in the trailing block
            let mut best: Option<(usize, usize, usize)> = None;
            for (i, row) in a.iter().enumerate().skip(k) {
                for (j, e) in row.iter().enumerate().skip(k) {
                    if let Some(d) = e.degree() {
                        if best.map_or(true, |(_, _, bd)| d < bd) {
                            best = Some((i, j, d));
                        }
                    }
                }
            }
            let Some((pi, pj, _)) = best else {
                break;
            };
            a.swap(k, pi);
            for row in a.iter_mut() {
                row.swap(k, pj);
            }
            let piv = a[k][k].clone();
            let mut dirty = false;
            for i in k + 1..n {
                let (q, r) = a[i][k].divrem(&piv).expect("nonzero pivot");
                if !q.is_zero() {
                    for j in k..n {
                        a[i][j] = a[i][j].sub(&q.mul(&a[k][j]));
                    }
                }
                dirty |= !r.is_zero();
            }
            for j in k + 1..n {
                let (q, r) = a[k][j].divrem(&piv).expect("nonzero pivot");
                if !q.is_zero() {
                    for row in a.iter_mut().skip(k) {
                        let v = row[j].sub(&q.mul(&row[k]));
                        row[j] = v;
                    }
                }
                dirty |= !r.is_zero();
            }
            if dirty {
                continue;
            }
            // pivot must divide the whole trailing block
            let bad = (k + 1..n)
                .flat_map(|i| (k + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !piv.divides(&a[i][j]));
            match bad {
                Some((i, _)) => {
                    for j in k..n {
                        a[k][j] = a[k][j].add(&a[i][j]);
                    }
                }
                None => break,
            }
        }
        diag.push(a[k][k].clone());
    }
    let mut out: Vec<Poly<F>> = diag
        .into_iter()
        .filter(|p| !p.is_zero() && !p.is_constant())
        .map(|p| p.monic())
        .collect();
    out.sort_by_key(|p| p.deg());
    out
}

pub fn characteristic_polynomial<F: Field>(u: &Matrix<F>) -> Poly<F> {
    invariant_factors(u)
        .iter()
        .fold(Poly::one(u.field()), |acc, p| acc.mul(p))
}

/// True iff every invariant factor is a palindromial.
pub fn similar_to_inverse<F: Field>(u: &Matrix<F>) -> Result<bool> {
    Ok(first_non_palindromic_factor(u)?.is_none())
}

pub fn first_non_palindromic_factor<F: Field>(u: &Matrix<F>) -> Result<Option<Poly<F>>> {
    if !u.is_invertible() {
        return Err(Error::Singular);
    }
    for p in invariant_factors(u) {
        if !p.is_palindromial()? {
            return Ok(Some(p));
        }
    }
    Ok(None)
}

/// Ranks of p(u)^k for k = 0, 1, … until they stabilise (last entry repeated once).
fn power_ranks<F: Field>(u: &Matrix<F>, p: &Poly<F>) -> Vec<usize> {
    let pu = eval_poly(p, u);
    let mut ranks = vec![u.rows()];
    let mut acc = Matrix::identity(u.field(), u.rows());
    loop {
        acc = acc.mul(&pu);
        let r = acc.rank();
        let stable = r == *ranks.last().expect("nonempty");
        ranks.push(r);
        if stable {
            return ranks;
        }
    }
}

/// n_{p,r} from the rank formula; `p` is assumed irreducible.
pub fn jordan_number_unchecked<F: Field>(u: &Matrix<F>, p: &Poly<F>, r: usize) -> usize {
    assert!(r >= 1);
    let ranks = power_ranks(u, p);
    let rk = |k: usize| ranks[k.min(ranks.len() - 1)];
    (rk(r - 1) + rk(r + 1) - 2 * rk(r)) / p.deg()
}

pub fn jordan_number<F: Factorize>(u: &Matrix<F>, p: &Poly<F>, r: usize) -> Result<usize> {
    if r == 0 {
        return Err(Error::Precondition("r must be positive".into()));
    }
    if !u.is_invertible() {
        return Err(Error::Singular);
    }
    if !u.field().is_irreducible(&p.monic())? {
        return Err(Error::InvalidPoly(format!("{p} is reducible")));
    }
    Ok(jordan_number_unchecked(u, &p.monic(), r))
}

/// All nonzero Jordan numbers n_{p,r}(u), keyed by (p, r).
pub type JordanMap<F> = BTreeMap<(Poly<F>, usize), usize>;

/// Jordan numbers over a supplied list of monic irreducibles.
pub fn jordan_numbers_for<F: Field>(u: &Matrix<F>, primes: &[Poly<F>]) -> JordanMap<F> {
    let mut out = BTreeMap::new();
    for p in primes {
        let ranks = power_ranks(u, p);
        for r in 1..ranks.len() - 1 {
            let n = (ranks[r - 1] + ranks[r + 1] - 2 * ranks[r]) / p.deg();
            if n > 0 {
                out.insert((p.clone(), r), n);
            }
        }
    }
    out
}

/// Monic irreducible factors of the minimal polynomial.
pub fn primary_factors<F: Factorize>(
    u: &Matrix<F>,
    seed: u64,
    hints: &[Poly<F>],
) -> Result<Vec<Poly<F>>> {
    let m = minimal_polynomial(u);
    Ok(u.field()
        .factor_with(&m, seed, hints)?
        .into_iter()
        .map(|(p, _)| p)
        .collect())
}

pub fn jordan_numbers<F: Factorize>(u: &Matrix<F>) -> Result<JordanMap<F>> {
    let primes = primary_factors(u, 0, &[])?;
    Ok(jordan_numbers_for(u, &primes))
}
