//! Isometries Φ between isopairs: Φ·u₁ = u₂·Φ and Φᵀ·G₂·Φ = G₁.

use crate::error::{Error, Result};
use crate::factor::Factorize;
use crate::field::{seeded_rng, BaseField, Field};
use crate::isopair::Isopair;
use crate::linalg::{frobenius, primary_factors};
use crate::matrix::Matrix;
use crate::poly::Poly;
use crate::wall::{compute_all_for, invariants_equivalent, is_hyperbolic_hermitian, is_hyperbolic_symmetric};

use super::decompose::{hyperbolic_split, witt_isometry};
use super::SearchOptions;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Sample (or enumerate) the linear space of intertwiners.
    Intertwiner,
    /// Both sides hyperbolic: compose Lagrangian frames with a similarity.
    Hyperbolic,
    /// Split off matching pieces and recurse on the complements.
    Witt,
}

pub const LADDER: [Strategy; 3] = [Strategy::Intertwiner, Strategy::Hyperbolic, Strategy::Witt];

pub fn is_isometry_between<F: Field>(p1: &Isopair<F>, p2: &Isopair<F>, phi: &Matrix<F>) -> bool {
    phi.rows() == p2.dim()
        && phi.cols() == p1.dim()
        && phi.is_invertible()
        && phi.mul(p1.u()) == p2.u().mul(phi)
        && phi.transpose().mul(p2.gram()).mul(phi) == *p1.gram()
}

pub fn find_isometry<F: Factorize>(
    p1: &Isopair<F>,
    p2: &Isopair<F>,
    opts: &SearchOptions,
) -> Result<Matrix<F>> {
    let primes = primary_factors(p1.u(), opts.seed, &[])?;
    find_isometry_with(p1, p2, &primes, &LADDER, opts)
}

/// The strategy ladder restricted to `strategies`; `primes` are the
/// irreducible factors of the minimal polynomial of u₁.
pub fn find_isometry_with<F: BaseField>(
    p1: &Isopair<F>,
    p2: &Isopair<F>,
    primes: &[Poly<F>],
    strategies: &[Strategy],
    opts: &SearchOptions,
) -> Result<Matrix<F>> {
    if p1.epsilon() != p2.epsilon() || p1.dim() != p2.dim() || p1.field() != p2.field() {
        return Err(Error::Precondition("isopairs differ in ε, field or dimension".into()));
    }
    let w1 = compute_all_for(p1, primes)?;
    let w2 = compute_all_for(p2, primes)?;
    if p1.field().is_finite() && !invariants_equivalent(&w1, &w2)? {
        return Err(Error::Precondition("Wall invariants differ".into()));
    }
    if w1.jordan != w2.jordan {
        return Err(Error::Precondition("Jordan numbers differ".into()));
    }
    let mut last = None;
    for s in strategies {
        let attempt = match s {
            Strategy::Intertwiner => by_intertwiner(p1, p2, opts),
            Strategy::Hyperbolic => {
                let hyperbolic = !p1.field().is_finite()
                    || (w1.hermitian.values().all(|h| is_hyperbolic_hermitian(h).unwrap_or(false))
                        && w1.quadratic.values().all(|g| is_hyperbolic_symmetric(g).unwrap_or(false)));
                if hyperbolic {
                    by_hyperbolic(p1, p2, primes, opts)
                } else {
                    Err(Error::Precondition("not hyperbolic".into()))
                }
            }
            Strategy::Witt => witt_isometry(p1, p2, primes, opts),
        };
        match attempt {
            Ok(phi) if is_isometry_between(p1, p2, &phi) => return Ok(phi),
            Ok(_) => last = Some(Error::Verification("candidate isometry".into())),
            Err(e) => last = Some(e),
        }
    }
    Err(last.unwrap_or_else(|| Error::Precondition("no strategy given".into())))
}

/// Basis of {X : X·u₁ = u₂·X}, as matrices.
fn intertwiners<F: Field>(u1: &Matrix<F>, u2: &Matrix<F>) -> Vec<Matrix<F>> {
    let f = u1.field();
    let n = u1.rows();
    let mut sys = Matrix::zeros(f, n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            let row = i * n + j;
            for k in 0..n {
                let a = sys.get(row, i * n + k).clone();
                sys.set(row, i * n + k, f.add(&a, u1.get(k, j)));
                let b = sys.get(row, k * n + j).clone();
                sys.set(row, k * n + j, f.sub(&b, u2.get(i, k)));
            }
        }
    }
    let k = sys.kernel();
    (0..k.cols())
        .map(|c| Matrix::from_fn(f, n, n, |i, j| k.get(i * n + j, c).clone()))
        .collect()
}

fn by_intertwiner<F: Field>(p1: &Isopair<F>, p2: &Isopair<F>, opts: &SearchOptions) -> Result<Matrix<F>> {
    let f = p1.field();
    let basis = intertwiners(p1.u(), p2.u());
    let n = p1.dim();
    let combine = |coeffs: &[F::Elem]| {
        basis
            .iter()
            .zip(coeffs)
            .fold(Matrix::zeros(f, n, n), |acc, (b, c)| acc.add(&b.scale(c)))
    };
    let ok = |x: &Matrix<F>| x.transpose().mul(p2.gram()).mul(x) == *p1.gram() && x.is_invertible();
    let total = f
        .size()
        .and_then(|q| q.checked_pow(basis.len() as u32))
        .filter(|&t| t <= opts.budget as u128);
    if let (Some(total), Some(q)) = (total, f.size()) {
        // exhaustive
        for idx in 0..total {
            let mut rest = idx;
            let coeffs: Vec<F::Elem> = (0..basis.len())
                .map(|_| {
                    let c = f.from_i64((rest % q) as i64);
                    rest /= q;
                    c
                })
                .collect();
            let x = combine(&coeffs);
            if ok(&x) {
                return Ok(x);
            }
        }
        return Err(Error::Precondition("no intertwiner is an isometry".into()));
    }
    let mut rng = seeded_rng(opts.seed);
    for _ in 0..opts.budget {
        let coeffs: Vec<F::Elem> = basis.iter().map(|_| f.random(&mut rng)).collect();
        let x = combine(&coeffs);
        if ok(&x) {
            return Ok(x);
        }
    }
    Err(Error::BudgetExhausted {
        what: "sampling intertwiners".into(),
        seed: opts.seed,
    })
}

/// Φ = N₂·diag(φ, φ⁻ᵀ)·N₁⁻¹ with φ·A₁·φ⁻¹ = A₂ from Frobenius forms.
pub(crate) fn by_hyperbolic<F: Field>(
    p1: &Isopair<F>,
    p2: &Isopair<F>,
    primes: &[Poly<F>],
    opts: &SearchOptions,
) -> Result<Matrix<F>> {
    let f = p1.field();
    let (n1, a1) = hyperbolic_split(p1, primes, opts)?;
    let (n2, a2) = hyperbolic_split(p2, primes, opts)?;
    let fr1 = frobenius(&a1);
    let fr2 = frobenius(&a2);
    if fr1.factors != fr2.factors {
        return Err(Error::Precondition("hyperbolic parts are not similar".into()));
    }
    let phi = fr2.basis.mul(&fr1.basis.inverse()?);
    let d = Matrix::block_diag(f, &[phi.clone(), phi.inverse()?.transpose()]);
    Ok(n2.mul(&d).mul(&n1.inverse()?))
}
