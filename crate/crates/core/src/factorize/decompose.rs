//! Orthogonal splitting of an isopair into cyclic pieces and hyperbolic blocks.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::factor::Factorize;
use crate::field::{seeded_rng, Field, Rng};
use crate::isopair::{hyperbolic_gram, Epsilon, Isopair};
use crate::linalg::{companion, eval_poly, krylov, primary_factors, Subspace};
use crate::matrix::Matrix;
use crate::poly::Poly;
use crate::wall::eta_of;

use super::SearchOptions;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Indecomposable pieces (cyclic where possible).
    Indecomposable,
    /// Only hyperbolic blocks H_ε(C).
    Hyperbolic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PieceKind {
    /// Regular cyclic subspace; `basis` is the Krylov basis of its generator.
    Cyclic,
    /// Block isometric to H_ε(C) via the frame `basis`.
    Hyperbolic,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece<F: Field> {
    pub kind: PieceKind,
    /// Columns in ambient coordinates.
    pub basis: Matrix<F>,
    /// basis⁻¹·u·basis: companion(q) for cyclic pieces, h(C) for blocks.
    pub local_u: Matrix<F>,
    /// Minimal polynomial of the generator x.
    pub poly: Poly<F>,
    pub prime: Poly<F>,
    pub r: usize,
}

impl<F: Field> Piece<F> {
    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    /// For a block, C with local_u = h(C).
    pub fn block_matrix(&self) -> Matrix<F> {
        let d = self.dim() / 2;
        self.local_u.submatrix(0, d, 0, d)
    }

    fn embedded(mut self, e: &Matrix<F>) -> Self {
        self.basis = e.mul(&self.basis);
        self
    }
}

fn random_in<F: Field>(basis: &Matrix<F>, rng: &mut Rng) -> Vec<F::Elem> {
    let f = basis.field();
    let c: Vec<F::Elem> = (0..basis.cols()).map(|_| f.random(rng)).collect();
    basis.mul_vec(&c)
}

/// Largest r with n_{p,r}(u) > 0, or 0.
fn max_exponent<F: Field>(u: &Matrix<F>, p: &Poly<F>) -> usize {
    let pu = eval_poly(p, u);
    let mut acc = Matrix::identity(u.field(), u.rows());
    let mut prev = u.rows();
    let mut r = 0;
    loop {
        acc = acc.mul(&pu);
        let rk = acc.rank();
        if rk == prev {
            return r;
        }
        prev = rk;
        r += 1;
    }
}

fn has_order<F: Field>(pr: &Matrix<F>, x: &[F::Elem]) -> bool {
    let f = pr.field();
    pr.mul_vec(x).iter().any(|a| !f.is_zero(a))
}

fn exhausted(what: &str, opts: &SearchOptions) -> Error {
    Error::BudgetExhausted {
        what: what.to_string(),
        seed: opts.seed,
    }
}

/// Shared state of one splitting run.
struct Splitter<'a, F: Field> {
    primes: &'a [Poly<F>],
    mode: Mode,
    rng: Rng,
    opts: SearchOptions,
    flips: BTreeMap<(Poly<F>, usize), usize>,
}

impl<F: Field> Splitter<'_, F> {
    fn next_piece(&mut self, pair: &Isopair<F>) -> Result<Piece<F>> {
        let u = pair.u();
        let (p, r) = self
            .primes
            .iter()
            .map(|p| (p, max_exponent(u, p)))
            .find(|(_, r)| *r > 0)
            .ok_or_else(|| Error::Precondition("minimal polynomial has unlisted factors".into()))?;
        let p = p.clone();
        let pal = p.is_palindromial()?;
        let right_parity = match pair.epsilon() {
            Epsilon::Plus => r % 2 == 1,
            Epsilon::Minus => r % 2 == 0,
        };
        let cyclic = self.mode == Mode::Indecomposable
            && pal
            && (eta_of(&p).is_none() || right_parity);
        if cyclic {
            return self.cyclic(pair, &p, r);
        }
        let (xp, yp) = if pal {
            (p.clone(), p.clone())
        } else {
            let ps = p.reciprocal()?;
            let key = (p.clone().min(ps.clone()), r);
            let count = self.flips.entry(key).or_insert(0);
            let flip = self.mode == Mode::Hyperbolic && *count % 2 == 1;
            *count += 1;
            if flip {
                (ps, p.clone())
            } else {
                (p.clone(), ps)
            }
        };
        self.block(pair, &xp, &yp, r, pal)
    }

    fn cyclic(&mut self, pair: &Isopair<F>, p: &Poly<F>, r: usize) -> Result<Piece<F>> {
        let u = pair.u();
        let q = p.pow(r);
        let d = q.deg();
        let ker = Subspace::kernel(&eval_poly(&q, u));
        let lower = eval_poly(&p.pow(r - 1), u);
        for _ in 0..self.opts.budget {
            let x = random_in(ker.basis(), &mut self.rng);
            if !has_order(&lower, &x) {
                continue;
            }
            let k = krylov(u, &x, d);
            if k.transpose().mul(pair.gram()).mul(&k).is_invertible() {
                return Ok(Piece {
                    kind: PieceKind::Cyclic,
                    basis: k,
                    local_u: companion(&q),
                    poly: q,
                    prime: p.clone(),
                    r,
                });
            }
        }
        Err(exhausted(&format!("searching a regular cyclic vector for ({p})^{r}"), &self.opts))
    }

    fn block(
        &mut self,
        pair: &Isopair<F>,
        xp: &Poly<F>,
        yp: &Poly<F>,
        r: usize,
        pal: bool,
    ) -> Result<Piece<F>> {
        let f = pair.field();
        let u = pair.u();
        let g = pair.gram();
        let qx = xp.pow(r);
        let d = qx.deg();
        let kx = Subspace::kernel(&eval_poly(&qx, u));
        let ky = Subspace::kernel(&eval_poly(&yp.pow(r), u));
        let lx = eval_poly(&xp.pow(r - 1), u);
        let ly = eval_poly(&yp.pow(r - 1), u);
        let mut spent = 0;
        while spent < self.opts.budget {
            spent += 1;
            let x = random_in(kx.basis(), &mut self.rng);
            if !has_order(&lx, &x) {
                continue;
            }
            let xk = krylov(u, &x, d);
            if pal && !xk.transpose().mul(g).mul(&xk).is_zero() {
                continue;
            }
            let xg = xk.transpose().mul(g);
            let c = companion(&qx);
            for _ in 0..32 {
                spent += 1;
                let y = random_in(ky.basis(), &mut self.rng);
                if !has_order(&ly, &y) {
                    continue;
                }
                let mut yk = krylov(u, &y, d);
                let k = xg.mul(&yk);
                if !k.is_invertible() {
                    continue;
                }
                if pal {
                    let Some(shift) = isotropic_correction(g, &xk, &yk, &c) else {
                        continue;
                    };
                    let y2: Vec<F::Elem> =
                        y.iter().zip(xk.mul_vec(&shift)).map(|(a, b)| f.add(a, &b)).collect();
                    yk = krylov(u, &y2, d);
                    if !yk.transpose().mul(g).mul(&yk).is_zero() {
                        continue;
                    }
                }
                let k = xg.mul(&yk);
                let eps = pair.epsilon().scalar(f);
                let frame = xk.hstack(&yk.mul(&k.inverse()?.scale(&eps)));
                let local_u = Matrix::block_diag(f, &[c.clone(), c.inverse()?.transpose()]);
                debug_assert_eq!(
                    frame.transpose().mul(g).mul(&frame),
                    hyperbolic_gram(f, d, pair.epsilon())
                );
                debug_assert_eq!(u.mul(&frame), frame.mul(&local_u));
                return Ok(Piece {
                    kind: PieceKind::Hyperbolic,
                    basis: frame,
                    local_u,
                    poly: qx,
                    prime: xp.clone(),
                    r,
                });
            }
        }
        Err(exhausted(
            &format!("searching a hyperbolic block for ({xp})^{r}"),
            &self.opts,
        ))
    }
}

/// c with A(y + X·c) totally isotropic, given X = K(x) isotropic and u·X = X·C.
fn isotropic_correction<F: Field>(
    g: &Matrix<F>,
    xk: &Matrix<F>,
    yk: &Matrix<F>,
    c: &Matrix<F>,
) -> Option<Vec<F::Elem>> {
    let f = g.field();
    let d = xk.cols();
    let yy = yk.transpose().mul(g).mul(yk);
    let yx = yk.transpose().mul(g).mul(xk);
    let xy = xk.transpose().mul(g).mul(yk);
    let cp: Vec<Matrix<F>> = (0..d).map(|k| c.pow(k)).collect();
    let mut rows = Vec::with_capacity(d * d);
    let mut rhs = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            // b(u^i y, X C^j c) + b(X C^i c, u^j y) = −b(u^i y, u^j y)
            let r1 = Matrix::from_rows(f, vec![yx.row(i)]).ok()?.mul(&cp[j]);
            let col = Matrix::column_vector(f, &xy.col(j));
            let r2 = cp[i].transpose().mul(&col).transpose();
            rows.push(r1.add(&r2).row(0));
            rhs.push(f.neg(yy.get(i, j)));
        }
    }
    let a = Matrix::from_rows(f, rows).ok()?;
    a.solve(&rhs).ok()?.map(|(x, _)| x)
}

fn run<F: Field>(
    pair: &Isopair<F>,
    primes: &[Poly<F>],
    mode: Mode,
    opts: &SearchOptions,
) -> Result<Vec<Piece<F>>> {
    let f = pair.field();
    let mut s = Splitter {
        primes,
        mode,
        rng: seeded_rng(opts.seed),
        opts: *opts,
        flips: BTreeMap::new(),
    };
    let mut out = Vec::new();
    let mut cur = pair.clone();
    let mut embed = Matrix::identity(f, pair.dim());
    while cur.dim() > 0 {
        let piece = s.next_piece(&cur)?;
        let perp = cur.perp(&piece.basis).basis().clone();
        out.push(piece.embedded(&embed));
        cur = cur.restrict(&perp)?;
        embed = embed.mul(&perp);
    }
    Ok(out)
}

/// Witt-style isometry P1 → P2: split a piece off P1, find a matching piece
/// in P2, recurse on the orthogonal complements.
pub(crate) fn witt_isometry<F: Field>(
    p1: &Isopair<F>,
    p2: &Isopair<F>,
    primes: &[Poly<F>],
    opts: &SearchOptions,
) -> Result<Matrix<F>> {
    let mut primes = primes.to_vec();
    primes.sort();
    let mut s = Splitter {
        primes: &primes,
        mode: Mode::Indecomposable,
        rng: seeded_rng(opts.seed),
        opts: *opts,
        flips: BTreeMap::new(),
    };
    s.witt(p1, p2)
}

impl<F: Field> Splitter<'_, F> {
    fn witt(&mut self, p1: &Isopair<F>, p2: &Isopair<F>) -> Result<Matrix<F>> {
        let f = p1.field();
        let n = p1.dim();
        if n == 0 {
            return Ok(Matrix::zeros(f, 0, 0));
        }
        let piece = self.next_piece(p1)?;
        let b1 = piece.basis.clone();
        let b2 = match piece.kind {
            PieceKind::Cyclic => self.matching_cyclic(p1, p2, &piece)?,
            PieceKind::Hyperbolic => {
                let pal = piece.prime.is_palindromial()?;
                let yp = if pal { piece.prime.clone() } else { piece.prime.reciprocal()? };
                self.block(p2, &piece.prime, &yp, piece.r, pal)?.basis
            }
        };
        let perp1 = p1.perp(&b1).basis().clone();
        let perp2 = p2.perp(&b2).basis().clone();
        if perp1.cols() != perp2.cols() {
            return Err(Error::Precondition("isopairs have different invariants".into()));
        }
        let sub = self.witt(&p1.restrict(&perp1)?, &p2.restrict(&perp2)?)?;
        let src = b1.hstack(&perp1);
        let dst = b2.hstack(&perp2.mul(&sub));
        Ok(dst.mul(&src.inverse()?))
    }

    /// z in P2 whose Krylov Gram equals that of the cyclic piece of P1.
    fn matching_cyclic(
        &mut self,
        p1: &Isopair<F>,
        p2: &Isopair<F>,
        piece: &Piece<F>,
    ) -> Result<Matrix<F>> {
        let target = piece.basis.transpose().mul(p1.gram()).mul(&piece.basis);
        let u = p2.u();
        let d = piece.poly.deg();
        let ker = Subspace::kernel(&eval_poly(&piece.poly, u));
        if ker.dim() < d {
            return Err(Error::Precondition("isopairs have different Jordan numbers".into()));
        }
        for _ in 0..self.opts.budget {
            let z = random_in(ker.basis(), &mut self.rng);
            let k = krylov(u, &z, d);
            if k.transpose().mul(p2.gram()).mul(&k) == target {
                return Ok(k);
            }
        }
        Err(exhausted(
            &format!("matching a cyclic piece for {}", piece.poly),
            &self.opts,
        ))
    }
}

/// Pieces of an orthogonal decomposition, given the irreducible factors of
/// the minimal polynomial in sorted order.
pub fn decompose_pieces<F: Field>(
    pair: &Isopair<F>,
    primes: &[Poly<F>],
    mode: Mode,
    opts: &SearchOptions,
) -> Result<Vec<Piece<F>>> {
    let mut primes = primes.to_vec();
    primes.sort();
    run(pair, &primes, mode, opts)
}

/// Orthogonal decomposition into indecomposable isopairs (local coordinates).
pub fn decompose<F: Factorize>(pair: &Isopair<F>, opts: &SearchOptions) -> Result<Vec<Isopair<F>>> {
    let primes = primary_factors(pair.u(), opts.seed, &[])?;
    decompose_pieces(pair, &primes, Mode::Indecomposable, opts)?
        .iter()
        .map(|pc| pair.restrict(&pc.basis))
        .collect()
}

/// (N, A) with Nᵀ·G·N = Gram of H_ε and N⁻¹·u·N = h(A), for an isopair all
/// of whose Wall invariants are hyperbolic. Non-palindromic blocks alternate
/// orientation so that A is similar to A⁻¹ when the Jordan numbers are even.
pub fn hyperbolic_split<F: Field>(
    pair: &Isopair<F>,
    primes: &[Poly<F>],
    opts: &SearchOptions,
) -> Result<(Matrix<F>, Matrix<F>)> {
    let f = pair.field();
    let n = pair.dim();
    let pieces = decompose_pieces(pair, primes, Mode::Hyperbolic, opts)?;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut cs = Vec::new();
    for pc in &pieces {
        let d = pc.dim() / 2;
        xs.push(pc.basis.submatrix(0, n, 0, d));
        ys.push(pc.basis.submatrix(0, n, d, 2 * d));
        cs.push(pc.block_matrix());
    }
    let frame = Matrix::hcat(f, n, &xs).hstack(&Matrix::hcat(f, n, &ys));
    Ok((frame, Matrix::block_diag(f, &cs)))
}
