//! Small hand-checked cases across the public API.

use bireflect::ext::{sesquilift, ExtensionField};
use bireflect::factor::Factorize;
use bireflect::factorize::{
    decompose, factor_o, factor_sp, find_isometry, halved_v, verify_certificate, SearchOptions,
};
use bireflect::isopair::{
    h, hyperbolic_extension, kappa, recognize_kappa, validate, Epsilon, Isopair,
};
use bireflect::linalg::{
    companion, invariant_factors, jordan_number, jordan_numbers, minimal_polynomial, similar_to_inverse,
};
use bireflect::oracle::{census, enumerate_group, standard_gram, DEFAULT_CAP};
use bireflect::sample::random_isometry;
use bireflect::wall::{
    compute_all, hermitian_wall, invariants_equivalent, is_hyperbolic_hermitian, is_hyperbolic_symmetric,
    quadratic_wall, wall_space_basis, FormKind,
};
use bireflect::{seeded_rng, Field, Matrix, Poly, PrimeField, Rationals};

fn fp(p: u64) -> PrimeField {
    PrimeField::new(p).unwrap()
}

fn j2(f: &PrimeField) -> Matrix<PrimeField> {
    Matrix::from_i64(f, &[&[0, 1], &[-1, 0]])
}

#[test]
fn polynomials() {
    let f5 = fp(5);
    let f3 = fp(3);
    let q = Rationals;
    assert_eq!(
        Poly::from_i64s(&f5, &[2, 1, 1]).reciprocal().unwrap(),
        Poly::from_i64s(&f5, &[3, 3, 1])
    );
    let p = Poly::from_i64s(&q, &[1, 3, 1]);
    assert_eq!(p.reciprocal().unwrap(), p);
    assert!(Poly::from_i64s(&f3, &[1, 0, 1]).is_palindromial().unwrap());
    assert!(!Poly::from_i64s(&f5, &[2, 1]).is_palindromial().unwrap());
    assert!(Poly::from_i64s(&q, &[-1, 1]).is_palindromial().unwrap());

    let fac = f5.factor(&Poly::from_i64s(&f5, &[-1, 0, 1])).unwrap();
    assert_eq!(fac, vec![(Poly::from_i64s(&f5, &[1, 1]), 1), (Poly::from_i64s(&f5, &[4, 1]), 1)]);
    let t2p1 = Poly::from_i64s(&f3, &[1, 0, 1]);
    assert_eq!(f3.factor(&t2p1).unwrap(), vec![(t2p1.clone(), 1)]);
    assert_eq!(f3.factor(&t2p1.pow(2)).unwrap(), vec![(t2p1.clone(), 2)]);

    assert_eq!(Poly::from_i64s(&q, &[1, 0, 1]).trace_decompose().unwrap(), Poly::from_i64s(&q, &[0, 1]));
    assert_eq!(
        Poly::from_i64s(&f5, &[1, 1, 1]).trace_decompose().unwrap(),
        Poly::from_i64s(&f5, &[1, 1])
    );
    assert_eq!(
        Poly::from_i64s(&f3, &[1, 0, 0, 0, 1]).trace_decompose().unwrap(),
        Poly::from_i64s(&f3, &[1, 0, 1])
    );
}

#[test]
fn quadratic_extension() {
    let f3 = fp(3);
    let l = ExtensionField::new(&Poly::from_i64s(&f3, &[1, 0, 1])).unwrap();
    let t = l.gen();
    assert_eq!(l.involution(&t), l.add(&t, &t));
    assert_eq!(l.f_p(&l.one()), 2);
    assert_eq!(l.f_p(&t), 0);
    let k = l.add(&t, &l.t_inverse().clone());
    assert_eq!(l.involution(&k), k);

    // B(λ, μ) = f_p(λ•μ) on L itself lifts to B^L(x, y) = x•y
    let action = companion(l.modulus());
    let b = Matrix::from_fn(&f3, 2, 2, |i, j| {
        let ei = l.from_poly(&Poly::monomial(&f3, 1, i));
        let ej = l.from_poly(&Poly::monomial(&f3, 1, j));
        l.f_p(&l.mul(&l.involution(&ei), &ej))
    });
    let lift = sesquilift(&l, &b, &action).unwrap();
    assert_eq!(lift.gram.rows(), 1);
    let x: Vec<u64> = lift.basis.col(0);
    assert_eq!(*lift.gram.get(0, 0), l.mul(&l.involution(&x), &x));
    let zero = sesquilift(&l, &Matrix::zeros(&f3, 2, 2), &action).unwrap();
    assert!(zero.gram.is_zero());
}

#[test]
fn linear_algebra() {
    let f5 = fp(5);
    let f3 = fp(3);
    let a = Matrix::from_i64(&f5, &[&[1, 2], &[2, 4]]);
    let (x, ker) = a.solve(&[1, 2]).unwrap().unwrap();
    assert_eq!(a.mul_vec(&x), vec![1, 2]);
    assert_eq!(ker.cols(), 1);
    assert_eq!(Matrix::zeros(&f5, 3, 3).kernel().cols(), 3);
    assert_eq!(Matrix::identity(&f5, 4).rank(), 4);

    let d23 = Matrix::from_i64(&f5, &[&[2, 0], &[0, 3]]);
    let d22 = Matrix::from_i64(&f5, &[&[2, 0], &[0, 2]]);
    assert_eq!(minimal_polynomial(&d23), Poly::from_i64s(&f5, &[1, 0, 1]));
    assert_eq!(minimal_polynomial(&Matrix::identity(&f5, 3)), Poly::from_i64s(&f5, &[-1, 1]));
    let tp3 = Poly::from_i64s(&f5, &[3, 1]);
    assert_eq!(invariant_factors(&d22), vec![tp3.clone(), tp3]);
    assert!(similar_to_inverse(&d23).unwrap());
    assert!(!similar_to_inverse(&d22).unwrap());
    assert!(similar_to_inverse(&Matrix::identity(&f5, 3)).unwrap());

    let t2p1 = Poly::from_i64s(&f3, &[1, 0, 1]);
    assert_eq!(companion(&t2p1), Matrix::from_i64(&f3, &[&[0, 2], &[1, 0]]));
    let c = companion(&t2p1.pow(2));
    assert_eq!(minimal_polynomial(&c), t2p1.pow(2));
    assert_eq!(jordan_number(&c, &t2p1, 2).unwrap(), 1);
    assert_eq!(jordan_number(&c, &t2p1, 1).unwrap(), 0);
    let unip = Matrix::from_i64(&f3, &[&[1, 1], &[0, 1]]);
    assert_eq!(jordan_number(&unip, &Poly::from_i64s(&f3, &[-1, 1]), 2).unwrap(), 1);
    assert_eq!(jordan_number(&Matrix::identity(&f3, 2), &Poly::from_i64s(&f3, &[-1, 1]), 1).unwrap(), 2);
}

#[test]
fn isopairs_and_extensions() {
    let f5 = fp(5);
    assert!(validate(Epsilon::Minus, &j2(&f5), &Matrix::identity(&f5, 2)).is_valid());
    assert!(validate(Epsilon::Minus, &j2(&f5), &Matrix::from_i64(&f5, &[&[2, 0], &[0, 3]])).is_valid());
    let degenerate = Matrix::from_i64(&f5, &[&[1, 0], &[0, 0]]);
    assert!(!validate(Epsilon::Plus, &degenerate, &Matrix::identity(&f5, 2)).is_valid());

    let h1 = hyperbolic_extension(&Matrix::identity(&f5, 1), Epsilon::Plus).unwrap();
    assert_eq!(h1.gram(), &Matrix::from_i64(&f5, &[&[0, 1], &[1, 0]]));
    assert!(h1.u().is_identity());
    let h2 = hyperbolic_extension(&Matrix::from_i64(&f5, &[&[2]]), Epsilon::Minus).unwrap();
    assert_eq!(h2.gram(), &Matrix::from_i64(&f5, &[&[0, 4], &[1, 0]]));
    assert_eq!(h2.u(), &Matrix::from_i64(&f5, &[&[2, 0], &[0, 3]]));

    let empty = Isopair::empty(&f5, Epsilon::Plus);
    assert_eq!(h1.perp_sum(&empty).unwrap(), h1);

    // φ ⊕ φ⁻ᵀ carries H_ε(u) to H_ε(φuφ⁻¹)
    let mut rng = seeded_rng(1);
    for eps in [Epsilon::Plus, Epsilon::Minus] {
        let u = Matrix::random_invertible(&f5, 3, &mut rng);
        let phi = Matrix::random_invertible(&f5, 3, &mut rng);
        let pi = phi.inverse().unwrap();
        let a = hyperbolic_extension(&u, eps).unwrap();
        let b = hyperbolic_extension(&phi.mul(&u).mul(&pi), eps).unwrap();
        let big = Matrix::block_diag(&f5, &[phi.clone(), pi.transpose()]);
        assert_eq!(big.mul(a.u()), b.u().mul(&big));
        assert_eq!(big.transpose().mul(b.gram()).mul(&big), *a.gram());
    }

    // restricting H₋₁(u₁ ⊕ u₂) to the (x₁, φ₁) coordinates gives H₋₁(u₁)
    let u1 = Matrix::random_invertible(&f5, 2, &mut rng);
    let u2 = Matrix::random_invertible(&f5, 1, &mut rng);
    let whole = hyperbolic_extension(&Matrix::block_diag(&f5, &[u1.clone(), u2]), Epsilon::Minus).unwrap();
    let sel = Matrix::identity(&f5, 6).select_cols(&[0, 1, 3, 4]);
    assert_eq!(whole.restrict(&sel).unwrap(), hyperbolic_extension(&u1, Epsilon::Minus).unwrap());
    let isotropic = Matrix::identity(&f5, 6).select_cols(&[0]);
    assert!(whole.restrict(&isotropic).is_err());
}

#[test]
fn kappa_examples() {
    let f5 = fp(5);
    let f3 = fp(3);
    let k = kappa(&j2(&f5), Epsilon::Minus).unwrap();
    let hg = bireflect::isopair::hyperbolic_gram(&f5, 2, Epsilon::Minus);
    assert!(validate(Epsilon::Minus, &hg, &k).is_valid());
    assert_eq!(recognize_kappa(&k, Epsilon::Minus).unwrap().gram, j2(&f5));
    let swap = Matrix::from_i64(&f5, &[&[0, 1], &[1, 0]]);
    assert_eq!(recognize_kappa(&swap, Epsilon::Plus).unwrap().gram, Matrix::identity(&f5, 1));
    let b = Matrix::from_i64(&f3, &[&[0, 1], &[-1, 0]]);
    let v = kappa(&b, Epsilon::Minus).unwrap();
    assert_eq!(recognize_kappa(&v, Epsilon::Minus).unwrap().gram, b);
    let kb = kappa(&b, Epsilon::Minus).unwrap();
    assert!(kb.mul(&kb).is_identity());
    let (lhs, rhs) = bireflect::isopair::kappa_compose(&b, &b, Epsilon::Minus).unwrap();
    assert!(lhs.is_identity() && rhs.is_identity());
}

#[test]
fn wall_invariants() {
    let f3 = fp(3);
    let f5 = fp(5);
    let t2p1 = Poly::from_i64s(&f3, &[1, 0, 1]);
    let hp = hyperbolic_extension(&companion(&t2p1), Epsilon::Minus).unwrap();
    assert_eq!(wall_space_basis(&hp, &t2p1, 1).unwrap().cols(), 4);
    assert_eq!(wall_space_basis(&hp, &t2p1, 2).unwrap().cols(), 0);
    let herm = hermitian_wall(&hp, &t2p1, 1).unwrap();
    assert_eq!(herm.dim(), 2);
    assert_eq!(herm.kind, FormKind::Skew);
    assert!(herm.is_nondegenerate() && herm.has_kind());
    assert!(is_hyperbolic_hermitian(&herm).unwrap());
    let absent = hermitian_wall(&hp, &Poly::from_i64s(&f3, &[2, 2, 1]), 1);
    assert!(absent.map(|h| h.dim() == 0).unwrap_or(true));

    let minus = Isopair::new(Epsilon::Minus, j2(&f3), Matrix::identity(&f3, 2).neg()).unwrap();
    assert_eq!(quadratic_wall(&minus, Epsilon::Minus, 2).unwrap().rows(), 0);
    let unip = Matrix::from_i64(&f3, &[&[1, 1], &[0, 1]]);
    let hu = hyperbolic_extension(&unip, Epsilon::Minus).unwrap();
    let q = quadratic_wall(&hu, Epsilon::Plus, 2).unwrap();
    assert_eq!(q.rows(), 2);
    assert!(is_hyperbolic_symmetric(&q).unwrap());
    let one = Isopair::new(Epsilon::Plus, Matrix::identity(&f3, 1), Matrix::identity(&f3, 1)).unwrap();
    assert_eq!(quadratic_wall(&one, Epsilon::Plus, 1).unwrap(), Matrix::identity(&f3, 1));

    assert!(is_hyperbolic_symmetric(&Matrix::from_i64(&f5, &[&[0, 1], &[1, 0]])).unwrap());
    assert!(!is_hyperbolic_symmetric(&Matrix::identity(&f3, 2)).unwrap());
    assert!(is_hyperbolic_symmetric(&Matrix::from_i64(&f3, &[&[1, 0], &[0, -1]])).unwrap());

    let w = compute_all(&Isopair::new(Epsilon::Plus, Matrix::identity(&f5, 3), Matrix::identity(&f5, 3)).unwrap())
        .unwrap();
    assert_eq!(w.jordan.len(), 1);
    assert!(w.hermitian.is_empty());
    assert_eq!(w.quadratic.keys().copied().collect::<Vec<_>>(), vec![(Epsilon::Plus, 1)]);

    let hd = hyperbolic_extension(&Matrix::from_i64(&f5, &[&[2, 0], &[0, 3]]), Epsilon::Minus).unwrap();
    let w = compute_all(&hd).unwrap();
    assert_eq!(w.jordan.values().copied().collect::<Vec<_>>(), vec![2, 2]);
    assert!(w.hermitian.is_empty() && w.quadratic.is_empty());

    let form = |d: &[i64]| {
        let g = Matrix::block_diag(&f5, &d.iter().map(|&x| Matrix::from_i64(&f5, &[&[x]])).collect::<Vec<_>>());
        let n = d.len();
        compute_all(&Isopair::new(Epsilon::Plus, g, Matrix::identity(&f5, n)).unwrap()).unwrap()
    };
    assert!(invariants_equivalent(&form(&[1, 1]), &form(&[2, 2])).unwrap());
    assert!(!invariants_equivalent(&form(&[1]), &form(&[2])).unwrap());
    assert!(invariants_equivalent(&form(&[1, 2]), &form(&[1, 2])).unwrap());
}

#[test]
fn decompositions() {
    let f5 = fp(5);
    let p = hyperbolic_extension(&Matrix::from_i64(&f5, &[&[3]]), Epsilon::Minus).unwrap();
    let pieces = decompose(&p, &SearchOptions::default()).unwrap();
    assert_eq!(pieces.len(), 1);
    let j = jordan_numbers(pieces[0].u()).unwrap();
    assert_eq!(
        j.keys().map(|(q, r)| (q.to_string(), *r)).collect::<Vec<_>>(),
        vec![("t+2".to_string(), 1), ("t+3".to_string(), 1)]
    );

    let f3 = fp(3);
    let t2p1 = Poly::from_i64s(&f3, &[1, 0, 1]);
    let a = hyperbolic_extension(&companion(&t2p1), Epsilon::Plus).unwrap();
    let b = Isopair::new(Epsilon::Plus, Matrix::identity(&f3, 2), companion(&t2p1)).unwrap();
    let c = hyperbolic_extension(&Matrix::from_i64(&f3, &[&[1, 1], &[0, 1]]), Epsilon::Plus).unwrap();
    let sum = Isopair::perp_sum_all(&f3, Epsilon::Plus, &[a.clone(), b.clone(), c.clone()]).unwrap();
    let pieces = decompose(&sum, &SearchOptions::default()).unwrap();
    let dims: usize = pieces.iter().map(Isopair::dim).sum();
    assert_eq!(dims, sum.dim());
    let rebuilt = Isopair::perp_sum_all(&f3, Epsilon::Plus, &pieces).unwrap();
    assert!(invariants_equivalent(&compute_all(&rebuilt).unwrap(), &compute_all(&sum).unwrap()).unwrap());
    let whole = jordan_numbers(sum.u()).unwrap();
    let mut parts = std::collections::BTreeMap::new();
    for p in &pieces {
        for (k, n) in jordan_numbers(p.u()).unwrap() {
            *parts.entry(k).or_insert(0) += n;
        }
    }
    assert_eq!(parts, whole);
}

#[test]
fn factorizations() {
    let f3 = fp(3);
    let t2p1 = Poly::from_i64s(&f3, &[1, 0, 1]);
    let rot = Isopair::new(Epsilon::Plus, Matrix::identity(&f3, 2), companion(&t2p1)).unwrap();
    let c = factor_o(&rot, &SearchOptions::default()).unwrap();
    assert!(verify_certificate(rot.u(), &c));
    let id = Isopair::new(Epsilon::Plus, Matrix::from_i64(&f3, &[&[1, 1], &[1, 2]]), Matrix::identity(&f3, 2))
        .unwrap();
    let c = factor_o(&id, &SearchOptions::default()).unwrap();
    assert!(c.s1.is_identity() && c.s2.is_identity());

    let hp = hyperbolic_extension(&companion(&t2p1), Epsilon::Minus).unwrap();
    let c = factor_sp(&hp, &SearchOptions::default()).unwrap();
    assert!(verify_certificate(hp.u(), &c));
    let minus = Isopair::new(Epsilon::Minus, j2(&f3), Matrix::identity(&f3, 2).neg()).unwrap();
    let c = factor_sp(&minus, &SearchOptions::default()).unwrap();
    assert!(verify_certificate(minus.u(), &c));
    assert!(h(&c.s1).is_ok());
}

#[test]
fn sp4_elements_match_their_halved_extension() {
    let f3 = fp(3);
    let g = standard_gram(&f3, Epsilon::Minus, 4).unwrap();
    let mut rng = seeded_rng(12);
    let mut found = 0;
    while found < 10 {
        let u = random_isometry(&g, Epsilon::Minus, 6, &mut rng);
        let p = Isopair::new(Epsilon::Minus, g.clone(), u).unwrap();
        if !bireflect::factorize::decide_sp(&p).unwrap().bireflectional {
            continue;
        }
        let w = compute_all(&p).unwrap();
        let v = halved_v(&f3, &w.jordan).unwrap();
        let target = hyperbolic_extension(&v, Epsilon::Minus).unwrap();
        let phi = find_isometry(&p, &target, &SearchOptions::default()).unwrap();
        assert_eq!(phi.mul(p.u()), target.u().mul(&phi));
        assert_eq!(phi.transpose().mul(target.gram()).mul(&phi), *p.gram());
        found += 1;
    }
}

#[test]
fn orthogonal_census_is_all_true() {
    let f3 = fp(3);
    let g = enumerate_group(&standard_gram(&f3, Epsilon::Plus, 2).unwrap(), Epsilon::Plus, 0, DEFAULT_CAP).unwrap();
    let rows = census(&g, &SearchOptions::default()).unwrap();
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| r.oracle && r.decide));
    let f5 = fp(5);
    let g = enumerate_group(&standard_gram(&f5, Epsilon::Minus, 2).unwrap(), Epsilon::Minus, 0, DEFAULT_CAP).unwrap();
    let rows = census(&g, &SearchOptions::default()).unwrap();
    assert_eq!((rows.len(), rows.iter().filter(|r| r.oracle).count()), (120, 2));
}
