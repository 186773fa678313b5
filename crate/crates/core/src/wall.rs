//! Wall invariants of an isopair: Jordan numbers, Hermitian forms over
//! L = F[t]/(p) for palindromic p ≠ t±1, and symmetric forms for t±1.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::ext::{sesquilift, ExtensionField};
use crate::factor::Factorize;
use crate::field::{BaseField, Field};
use crate::isopair::{Epsilon, Isopair};
use crate::linalg::{eval_poly, jordan_numbers_for, primary_factors, JordanMap, Subspace};
use crate::matrix::Matrix;
use crate::poly::Poly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FormKind {
    Hermitian,
    Skew,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermitianForm<F: Field> {
    pub ext: ExtensionField<F>,
    pub gram: Matrix<ExtensionField<F>>,
    pub kind: FormKind,
}

impl<F: Field> HermitianForm<F> {
    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.gram.is_invertible()
    }

    /// gram† = ±gram according to `kind`.
    pub fn has_kind(&self) -> bool {
        let ct = self.ext.conj_transpose(&self.gram);
        match self.kind {
            FormKind::Hermitian => ct == self.gram,
            FormKind::Skew => ct == self.gram.neg(),
        }
    }

    pub fn scale(&self, c: &<ExtensionField<F> as Field>::Elem, kind: FormKind) -> Self {
        HermitianForm {
            ext: self.ext.clone(),
            gram: self.gram.scale(c),
            kind,
        }
    }

    pub fn neg(&self) -> Self {
        HermitianForm {
            ext: self.ext.clone(),
            gram: self.gram.neg(),
            kind: self.kind,
        }
    }
}

/// Scale a skew-Hermitian form by η⁻¹, η = t̄ − t̄⁻¹; Hermitian input is returned unchanged.
pub fn skew_to_hermitian<F: Field>(h: &HermitianForm<F>) -> HermitianForm<F> {
    match h.kind {
        FormKind::Hermitian => h.clone(),
        FormKind::Skew => {
            let eta_inv = h.ext.inv(&h.ext.skew_unit()).expect("η is a unit");
            h.scale(&eta_inv, FormKind::Hermitian)
        }
    }
}

fn require_finite<F: BaseField>(f: &F, what: &str) -> Result<()> {
    if f.is_finite() {
        Ok(())
    } else {
        Err(Error::Unsupported(format!("{what} over {} needs a finite field", f.descriptor())))
    }
}

/// n even and (−1)^{n/2}·det G a square.
pub fn is_hyperbolic_symmetric<F: BaseField>(g: &Matrix<F>) -> Result<bool> {
    let f = g.field();
    require_finite(f, "hyperbolicity")?;
    let n = g.rows();
    if n % 2 == 1 {
        return Ok(false);
    }
    let sign = if (n / 2) % 2 == 0 { f.one() } else { f.from_i64(-1) };
    f.is_square(&f.mul(&sign, &g.det()))
}

/// Finite-field Hermitian forms are hyperbolic iff of even dimension.
pub fn is_hyperbolic_hermitian<F: BaseField>(h: &HermitianForm<F>) -> Result<bool> {
    require_finite(h.ext.base(), "hyperbolicity")?;
    Ok(skew_to_hermitian(h).dim() % 2 == 0)
}

/// The filtration Ker M^k and Im M for one primary part.
struct Filtration<F: Field> {
    kers: Vec<Subspace<F>>,
    image: Subspace<F>,
    m: Matrix<F>,
}

impl<F: Field> Filtration<F> {
    fn new(m: Matrix<F>, depth: usize) -> Self {
        let f = m.field();
        let n = m.rows();
        let mut kers = vec![Subspace::zero(f, n)];
        let mut acc = Matrix::identity(f, n);
        for _ in 0..=depth {
            acc = acc.mul(&m);
            kers.push(Subspace::kernel(&acc));
        }
        Filtration {
            image: Subspace::image(&m),
            kers,
            m,
        }
    }

    fn ker(&self, k: usize) -> &Subspace<F> {
        &self.kers[k.min(self.kers.len() - 1)]
    }

    /// Representatives of Ker M^r / (Ker M^{r−1} + Im M ∩ Ker M^r) and the denominator.
    fn quotient(&self, r: usize) -> (Matrix<F>, Subspace<F>) {
        let top = self.ker(r);
        let denom = self.ker(r - 1).sum(&self.image.intersect(top));
        (denom.complement_in(top), denom)
    }
}

/// Matrix of the map induced by `u` on span(reps) modulo `denom`.
fn quotient_action<F: Field>(u: &Matrix<F>, reps: &Matrix<F>, denom: &Subspace<F>) -> Matrix<F> {
    let l = denom.dim();
    let k = reps.cols();
    let x = denom
        .basis()
        .hstack(reps)
        .solve_matrix(&u.mul(reps))
        .expect("quotient is invariant");
    x.submatrix(l, l + k, 0, k)
}

fn v_of<F: Field>(p: &Isopair<F>) -> Matrix<F> {
    p.u().add(&p.u().inverse().expect("isometry is invertible"))
}

fn check_palindromic_prime<F: Field>(p: &Poly<F>) -> Result<Poly<F>> {
    if p.deg() < 2 || !p.is_palindromial()? {
        return Err(Error::Precondition(format!(
            "{p} is not a palindromial of degree ≥ 2; t±1 use the quadratic invariants"
        )));
    }
    p.trace_decompose()
}


/// Representatives of V_{p,r} for a palindromic irreducible p ≠ t±1.
pub fn wall_space_basis<F: Field>(pair: &Isopair<F>, p: &Poly<F>, r: usize) -> Result<Matrix<F>> {
    if r == 0 {
        return Err(Error::Precondition("r must be positive".into()));
    }
    let m = check_palindromic_prime(p)?;
    let filt = Filtration::new(eval_poly(&m, &v_of(pair)), r);
    Ok(filt.quotient(r).0)
}

/// b_{p,r}(x, y) = b(x, m(v)^{r−1} y) on V_{p,r}, lifted to L.
pub fn hermitian_wall<F: Field>(pair: &Isopair<F>, p: &Poly<F>, r: usize) -> Result<HermitianForm<F>> {
    let ext = ExtensionField::new_unchecked(p)?;
    hermitian_wall_in(pair, &ext, r, None)
}

fn hermitian_wall_in<F: Field>(
    pair: &Isopair<F>,
    ext: &ExtensionField<F>,
    r: usize,
    filt: Option<&Filtration<F>>,
) -> Result<HermitianForm<F>> {
    if r == 0 {
        return Err(Error::Precondition("r must be positive".into()));
    }
    let m = check_palindromic_prime(ext.modulus())?;
    let owned;
    let filt = match filt {
        Some(fl) => fl,
        None => {
            owned = Filtration::new(eval_poly(&m, &v_of(pair)), r);
            &owned
        }
    };
    let (reps, denom) = filt.quotient(r);
    let kind = match pair.epsilon() {
        Epsilon::Plus => FormKind::Hermitian,
        Epsilon::Minus => FormKind::Skew,
    };
    if reps.cols() == 0 {
        return Ok(HermitianForm {
            ext: ext.clone(),
            gram: Matrix::zeros(ext, 0, 0),
            kind,
        });
    }
    let b = reps
        .transpose()
        .mul(pair.gram())
        .mul(&filt.m.pow(r - 1))
        .mul(&reps);
    let action = quotient_action(pair.u(), &reps, &denom);
    let lift = sesquilift(ext, &b, &action)?;
    Ok(HermitianForm {
        ext: ext.clone(),
        gram: lift.gram,
        kind,
    })
}

fn check_quadratic_parity(eps: Epsilon, r: usize) -> Result<()> {
    let ok = match eps {
        Epsilon::Plus => r % 2 == 1,
        Epsilon::Minus => r >= 2 && r % 2 == 0,
    };
    if !ok {
        return Err(Error::Precondition(format!(
            "r = {r} has the wrong parity for ε = {eps}"
        )));
    }
    Ok(())
}

/// Kernel-form operator for the t − η invariant of exponent r.
fn quadratic_operator<F: Field>(pair: &Isopair<F>, eta: Epsilon, r: usize) -> Matrix<F> {
    let f = pair.field();
    let u = pair.u();
    let ui = u.inverse().expect("isometry is invertible");
    let two_eta = f.from_i64(2 * eta.as_i64());
    let shifted = u.add(&ui).add_scalar(&f.neg(&two_eta));
    match pair.epsilon() {
        Epsilon::Plus => shifted.pow((r - 1) / 2),
        Epsilon::Minus => u.sub(&ui).mul(&shifted.pow((r - 2) / 2)),
    }
}

/// Symmetric Gram of the quadratic Wall invariant at (t − η, r).
pub fn quadratic_wall<F: Field>(pair: &Isopair<F>, eta: Epsilon, r: usize) -> Result<Matrix<F>> {
    check_quadratic_parity(pair.epsilon(), r)?;
    let f = pair.field();
    let m = pair.u().add_scalar(&f.neg(&eta.scalar(f)));
    let filt = Filtration::new(m, r);
    Ok(quadratic_wall_in(pair, eta, r, &filt))
}

fn quadratic_wall_in<F: Field>(
    pair: &Isopair<F>,
    eta: Epsilon,
    r: usize,
    filt: &Filtration<F>,
) -> Matrix<F> {
    let (reps, _) = filt.quotient(r);
    reps.transpose()
        .mul(pair.gram())
        .mul(&quadratic_operator(pair, eta, r))
        .mul(&reps)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WallInvariants<F: Field> {
    pub epsilon: Epsilon,
    pub jordan: JordanMap<F>,
    pub hermitian: BTreeMap<(Poly<F>, usize), HermitianForm<F>>,
    pub quadratic: BTreeMap<(Epsilon, usize), Matrix<F>>,
}

impl<F: Field> WallInvariants<F> {
    /// All forms negated.
    pub fn negated(&self) -> Self {
        WallInvariants {
            epsilon: self.epsilon,
            jordan: self.jordan.clone(),
            hermitian: self.hermitian.iter().map(|(k, h)| (k.clone(), h.neg())).collect(),
            quadratic: self.quadratic.iter().map(|(k, g)| (*k, g.neg())).collect(),
        }
    }
}

pub fn eta_of<F: Field>(p: &Poly<F>) -> Option<Epsilon> {
    let f = p.field();
    if *p == Poly::linear(f, &f.one()) {
        Some(Epsilon::Plus)
    } else if *p == Poly::linear(f, &f.from_i64(-1)) {
        Some(Epsilon::Minus)
    } else {
        None
    }
}

pub fn compute_all<F: Factorize>(pair: &Isopair<F>) -> Result<WallInvariants<F>> {
    compute_all_with(pair, &[])
}

/// As [`compute_all`], with factorization hints for the rationals.
pub fn compute_all_with<F: Factorize>(
    pair: &Isopair<F>,
    hints: &[Poly<F>],
) -> Result<WallInvariants<F>> {
    let primes = primary_factors(pair.u(), 0, hints)?;
    compute_all_for(pair, &primes)
}

/// Wall invariants given the monic irreducible factors of the minimal polynomial.
pub fn compute_all_for<F: Field>(pair: &Isopair<F>, primes: &[Poly<F>]) -> Result<WallInvariants<F>> {
    let jordan = jordan_numbers_for(pair.u(), primes);
    let mut hermitian = BTreeMap::new();
    let mut quadratic = BTreeMap::new();
    let f = pair.field();
    for p in primes {
        let rs: Vec<usize> = jordan
            .iter()
            .filter(|((q, _), _)| q == p)
            .map(|((_, r), _)| *r)
            .collect();
        let Some(&rmax) = rs.iter().max() else {
            continue;
        };
        if let Some(eta) = eta_of(p) {
            let filt = Filtration::new(pair.u().add_scalar(&f.neg(&eta.scalar(f))), rmax);
            for &r in &rs {
                if check_quadratic_parity(pair.epsilon(), r).is_ok() {
                    quadratic.insert((eta, r), quadratic_wall_in(pair, eta, r, &filt));
                }
            }
        } else if p.deg() >= 2 && p.is_palindromial()? {
            let ext = ExtensionField::new_unchecked(p)?;
            let m = ext.trace_poly().clone();
            let filt = Filtration::new(eval_poly(&m, &v_of(pair)), rmax);
            for &r in &rs {
                hermitian.insert((p.clone(), r), hermitian_wall_in(pair, &ext, r, Some(&filt))?);
            }
        }
    }
    Ok(WallInvariants {
        epsilon: pair.epsilon(),
        jordan,
        hermitian,
        quadratic,
    })
}

/// Equivalence of Wall invariant systems over a finite field.
pub fn invariants_equivalent<F: BaseField>(a: &WallInvariants<F>, b: &WallInvariants<F>) -> Result<bool> {
    let f = match (a.quadratic.values().next(), b.quadratic.values().next()) {
        (Some(g), _) | (_, Some(g)) => Some(g.field().clone()),
        _ => None,
    };
    let hf = a
        .hermitian
        .values()
        .chain(b.hermitian.values())
        .next()
        .map(|h| h.ext.base().clone());
    if let Some(f) = f.as_ref().or(hf.as_ref()) {
        require_finite(f, "invariant comparison")?;
    }
    if a.epsilon != b.epsilon || a.jordan != b.jordan {
        return Ok(false);
    }
    if a.hermitian.len() != b.hermitian.len() || a.quadratic.len() != b.quadratic.len() {
        return Ok(false);
    }
    for (k, h) in &a.hermitian {
        match b.hermitian.get(k) {
            Some(h2) if h2.dim() == h.dim() => {}
            _ => return Ok(false),
        }
    }
    for (k, g) in &a.quadratic {
        let Some(g2) = b.quadratic.get(k) else {
            return Ok(false);
        };
        if g.rows() != g2.rows() {
            return Ok(false);
        }
        let f = g.field();
        if !f.is_square(&f.mul(&g.det(), &g2.det()))? {
            return Ok(false);
        }
    }
    Ok(true)
}
