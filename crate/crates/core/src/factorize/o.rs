use crate::error::{Error, Result};
use crate::factor::Factorize;
use crate::isopair::{h, Epsilon, Isopair};
use crate::linalg::{krylov, maximal_vector, primary_factors};
use crate::matrix::Matrix;

use super::decompose::{decompose_pieces, Mode, Piece, PieceKind};
use super::gl::{factor_gl, gl_involution};
use super::{verify_certificate, Certificate, Group, SearchOptions};

/// Local involution s with s·local_u·s = local_u⁻¹ preserving the local form.
fn local_involution<F: crate::field::Field>(piece: &Piece<F>) -> Result<Matrix<F>> {
    match piece.kind {
        PieceKind::Cyclic => gl_involution(&piece.poly),
        PieceKind::Hyperbolic => {
            let c = piece.block_matrix();
            if piece.prime.is_palindromial()? {
                let cert = factor_gl(&c)?;
                return h(&cert.s2);
            }
            // p^r·p♯^r is palindromic and h(C) is cyclic
            let (z, q) = maximal_vector(&piece.local_u);
            if q.deg() != piece.dim() {
                return Err(Error::Verification("pair block is not cyclic".into()));
            }
            let k = krylov(&piece.local_u, &z, q.deg());
            Ok(k.mul(&gl_involution(&q)?).mul(&k.inverse()?))
        }
    }
}

/// Involutions s1, s2 in O(b) with s1·s2 = u, built piecewise on an
/// orthogonal decomposition.
pub fn factor_o<F: Factorize>(pair: &Isopair<F>, opts: &SearchOptions) -> Result<Certificate<F>> {
    if pair.epsilon() != Epsilon::Plus {
        return Err(Error::Precondition("expected an orthogonal (ε = +1) isopair".into()));
    }
    let f = pair.field();
    let n = pair.dim();
    let primes = primary_factors(pair.u(), opts.seed, &[])?;
    let pieces = decompose_pieces(pair, &primes, Mode::Indecomposable, opts)?;
    let locals = pieces
        .iter()
        .map(local_involution)
        .collect::<Result<Vec<_>>>()?;
    let frame = Matrix::hcat(
        f,
        n,
        &pieces.iter().map(|p| p.basis.clone()).collect::<Vec<_>>(),
    );
    let s = if n == 0 {
        Matrix::identity(f, 0)
    } else {
        frame.mul(&Matrix::block_diag(f, &locals)).mul(&frame.inverse()?)
    };
    let cert = Certificate {
        s1: pair.u().mul(&s),
        s2: s,
        group: Group::O,
        gram: Some(pair.gram().clone()),
        seed: opts.seed,
    };
    if !verify_certificate(pair.u(), &cert) {
        return Err(Error::Verification("orthogonal factorization".into()));
    }
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{seeded_rng, PrimeField};
    use crate::isopair::hyperbolic_extension;

    #[test]
    fn factor_o_examples() {
        let f = PrimeField::new(5).unwrap();
        let i = Matrix::identity(&f, 2);
        let p = Isopair::new(Epsilon::Plus, i.clone(), i.clone()).unwrap();
        assert!(verify_certificate(p.u(), &factor_o(&p, &SearchOptions::default()).unwrap()));
        let mut rng = seeded_rng(11);
        for _ in 0..10 {
            let v = Matrix::random_invertible(&f, 2, &mut rng);
            let hp = hyperbolic_extension(&v, Epsilon::Plus).unwrap();
            let g = Matrix::random_invertible(&f, 4, &mut rng);
            let tp = hp.transport(&g).unwrap();
            let cert = factor_o(&tp, &SearchOptions::default()).unwrap();
            assert!(verify_certificate(tp.u(), &cert));
        }
        let sp = Isopair::new(
            Epsilon::Minus,
            Matrix::from_i64(&f, &[&[0, 1], &[-1, 0]]),
            i,
        )
        .unwrap();
        assert!(factor_o(&sp, &SearchOptions::default()).is_err());
    }
}
