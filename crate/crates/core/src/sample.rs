//! Seeded random isometries, isopairs and involution products.

use rand::seq::SliceRandom;
use rand::Rng as _;

use crate::error::Result;
use crate::field::{Field, Rng};
use crate::isopair::{hyperbolic_extension, Epsilon, Isopair};
use crate::matrix::Matrix;

fn random_vector<F: Field>(f: &F, n: usize, rng: &mut Rng) -> Vec<F::Elem> {
    loop {
        let v: Vec<F::Elem> = (0..n).map(|_| f.random(rng)).collect();
        if v.iter().any(|a| !f.is_zero(a)) {
            return v;
        }
    }
}

/// Random nondegenerate ε-form of dimension n (n even for ε = −1).
pub fn random_form<F: Field>(f: &F, epsilon: Epsilon, n: usize, rng: &mut Rng) -> Matrix<F> {
    let base = match epsilon {
        Epsilon::Plus => {
            let d: Vec<Matrix<F>> = (0..n)
                .map(|_| loop {
                    let a = f.random(rng);
                    if !f.is_zero(&a) {
                        return Matrix::scalar(f, 1, a);
                    }
                })
                .collect();
            Matrix::block_diag(f, &d)
        }
        Epsilon::Minus => {
            let j = Matrix::from_i64(f, &[&[0, 1], &[-1, 0]]);
            Matrix::block_diag(f, &vec![j; n / 2])
        }
    };
    let g = Matrix::random_invertible(f, n, rng);
    g.transpose().mul(&base).mul(&g)
}

/// Product of k random reflections (ε = +1) or transvections (ε = −1) of b.
pub fn random_isometry<F: Field>(
    gram: &Matrix<F>,
    epsilon: Epsilon,
    k: usize,
    rng: &mut Rng,
) -> Matrix<F> {
    let f = gram.field();
    let n = gram.rows();
    let mut u = Matrix::identity(f, n);
    let mut done = 0;
    while done < k && n > 0 {
        let v = random_vector(f, n, rng);
        let col = Matrix::column_vector(f, &v);
        let row = col.transpose().mul(gram);
        let c = match epsilon {
            Epsilon::Minus => f.random(rng),
            Epsilon::Plus => {
                let bvv = row.mul(&col).get(0, 0).clone();
                match f.inv(&bvv) {
                    Some(i) => f.neg(&f.mul(&f.from_i64(2), &i)),
                    None => continue,
                }
            }
        };
        u = u.mul(&Matrix::identity(f, n).add(&col.mul(&row).scale(&c)));
        done += 1;
    }
    u
}

/// Orthogonal sum of random pieces of total dimension n, transported by a
/// random invertible: hyperbolic extensions H_ε(v) and (random form,
/// random isometry) pairs.
pub fn random_isopair<F: Field>(
    f: &F,
    epsilon: Epsilon,
    n: usize,
    rng: &mut Rng,
) -> Result<Isopair<F>> {
    let step = match epsilon {
        Epsilon::Plus => 1,
        Epsilon::Minus => 2,
    };
    let mut parts = Vec::new();
    let mut left = n - n % step;
    while left > 0 {
        let hyperbolic = left >= 2 && rng.gen_bool(0.4);
        let d = if hyperbolic {
            2 * rng.gen_range(1..=left / 2)
        } else {
            step * rng.gen_range(1..=left / step)
        };
        if hyperbolic {
            let v = Matrix::random_invertible(f, d / 2, rng);
            parts.push(hyperbolic_extension(&v, epsilon)?);
        } else {
            let g = random_form(f, epsilon, d, rng);
            let k = rng.gen_range(0..=2 * d);
            let u = random_isometry(&g, epsilon, k, rng);
            parts.push(Isopair::new_unchecked(epsilon, g, u));
        }
        left -= d;
    }
    parts.shuffle(rng);
    let p = Isopair::perp_sum_all(f, epsilon, &parts)?;
    p.transport(&Matrix::random_invertible(f, p.dim(), rng))
}

/// g·diag(±1)·g⁻¹ for random g.
pub fn random_involution<F: Field>(f: &F, n: usize, rng: &mut Rng) -> Result<Matrix<F>> {
    let g = Matrix::random_invertible(f, n, rng);
    let one = f.one();
    let d = Matrix::from_fn(f, n, n, |i, j| {
        if i != j {
            f.zero()
        } else if rng.gen_bool(0.5) {
            one.clone()
        } else {
            f.neg(&one)
        }
    });
    Ok(g.mul(&d).mul(&g.inverse()?))
}

/// (s1, s2, s1·s2) for random involutions s1, s2.
pub fn random_involution_product<F: Field>(
    f: &F,
    n: usize,
    rng: &mut Rng,
) -> Result<(Matrix<F>, Matrix<F>, Matrix<F>)> {
    let s1 = random_involution(f, n, rng)?;
    let s2 = random_involution(f, n, rng)?;
    let u = s1.mul(&s2);
    Ok((s1, s2, u))
}
