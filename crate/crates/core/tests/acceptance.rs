//! Acceptance criteria, one line per criterion. Runs as a plain binary.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::Rng as _;

use bireflect::factorize::{decide_sp, factor_gl, factor_o, factor_sp, verify_certificate, SearchOptions};
use bireflect::isopair::{h, hyperbolic_extension, kappa, kappa_compose, psi, Epsilon, Isopair};
use bireflect::linalg::jordan_numbers;
use bireflect::oracle::{enumerate_group, standard_gram, GroupEnumeration, DEFAULT_CAP};
use bireflect::poly::Poly;
use bireflect::sample::{random_form, random_involution_product, random_isopair};
use bireflect::wall::{compute_all, invariants_equivalent, is_hyperbolic_hermitian, is_hyperbolic_symmetric};
use bireflect::{seeded_rng, Field, Matrix, PrimeField, Rationals};

type Outcome = Result<String, String>;

fn sp_group(p: u64, n: usize) -> GroupEnumeration {
    let f = PrimeField::new(p).unwrap();
    let g = standard_gram(&f, Epsilon::Minus, n).unwrap();
    enumerate_group(&g, Epsilon::Minus, 0, DEFAULT_CAP).unwrap()
}

fn pair_of(g: &GroupEnumeration, u: &Matrix<PrimeField>) -> Isopair<PrimeField> {
    Isopair::new(g.epsilon, g.gram.clone(), u.clone()).unwrap()
}

fn agreement(g: &GroupEnumeration, u: &Matrix<PrimeField>) -> Result<bool, String> {
    let pair = pair_of(g, u);
    let decide = decide_sp(&pair).map_err(|e| e.to_string())?.bireflectional;
    let witness = g.witness(u).map_err(|e| e.to_string())?;
    if let Some(w) = &witness {
        if !verify_certificate(u, w) {
            return Err(format!("oracle witness fails for {u:?}"));
        }
    }
    if decide != witness.is_some() {
        return Err(format!("decide={decide} oracle={} for {:?}", witness.is_some(), u.to_rows()));
    }
    Ok(decide)
}

fn criterion_1() -> Outcome {
    let mut summary = Vec::new();
    for (p, order) in [(3, 24), (5, 120)] {
        let g = sp_group(p, 2);
        if g.order() != order {
            return Err(format!("|Sp2(F{p})| = {}", g.order()));
        }
        let mut yes = Vec::new();
        for u in &g.elements {
            if agreement(&g, u)? {
                yes.push(u.clone());
            }
        }
        let f = g.gram.field();
        let pm = [Matrix::identity(f, 2), Matrix::identity(f, 2).neg()];
        if yes.len() != 2 || !pm.iter().all(|m| yes.contains(m)) {
            return Err(format!("Sp2(F{p}): {} bireflectional", yes.len()));
        }
        summary.push(format!("Sp2(F{p}) {order}/2"));
    }
    Ok(summary.join(", "))
}

fn criterion_2(sp4: &GroupEnumeration) -> Outcome {
    if sp4.order() != 51840 {
        return Err(format!("|Sp4(F3)| = {}", sp4.order()));
    }
    let mut rng = seeded_rng(2);
    let mut yes = 0;
    for _ in 0..500 {
        let u = &sp4.elements[rng.gen_range(0..sp4.order())];
        if agreement(sp4, u)? {
            yes += 1;
        }
    }
    Ok(format!("500 samples agree, {yes} bireflectional"))
}

fn criterion_3() -> Outcome {
    let mut rng = seeded_rng(3);
    for i in 0..200 {
        let p = [3, 5, 7][i % 3];
        let f = PrimeField::new(p).unwrap();
        let n = rng.gen_range(1..=6);
        let u = Matrix::random_invertible(&f, n, &mut rng);
        let pair = hyperbolic_extension(&u, Epsilon::Minus).unwrap();
        let w = compute_all(&pair).map_err(|e| e.to_string())?;
        let herm = w.hermitian.values().all(|x| is_hyperbolic_hermitian(x).unwrap());
        let quad = w.quadratic.values().all(|x| is_hyperbolic_symmetric(x).unwrap());
        if !herm || !quad {
            return Err(format!("H_-1(u) not hyperbolic for u = {:?} over F{p}", u.to_rows()));
        }
    }
    Ok("200/200 hyperbolic".into())
}

fn criterion_4() -> Outcome {
    let mut rng = seeded_rng(4);
    for i in 0..100 {
        let f = PrimeField::new([3, 5, 7][i % 3]).unwrap();
        let n = rng.gen_range(1..=6);
        let (_, _, u) = random_involution_product(&f, n, &mut rng).unwrap();
        let c = factor_gl(&u).map_err(|e| format!("F_p: {e}"))?;
        if !verify_certificate(&u, &c) {
            return Err("F_p certificate".into());
        }
    }
    let q = Rationals;
    for _ in 0..100 {
        let n = rng.gen_range(1..=4);
        let (_, _, u) = random_involution_product(&q, n, &mut rng).unwrap();
        let c = factor_gl(&u).map_err(|e| format!("Q: {e}"))?;
        if !verify_certificate(&u, &c) {
            return Err("Q certificate".into());
        }
    }
    Ok("200/200 verified".into())
}

fn criterion_5() -> Outcome {
    let mut rng = seeded_rng(5);
    for i in 0..100 {
        let f = PrimeField::new([3, 5][i % 2]).unwrap();
        let n = rng.gen_range(1..=8);
        let pair = random_isopair(&f, Epsilon::Plus, n, &mut rng).unwrap();
        let c = factor_o(&pair, &SearchOptions::with_seed(i as u64))
            .map_err(|e| format!("{e} on {:?} / {:?}", pair.gram().to_rows(), pair.u().to_rows()))?;
        if !verify_certificate(pair.u(), &c) {
            return Err("certificate".into());
        }
    }
    Ok("100/100 verified".into())
}

fn criterion_6(sp4: &GroupEnumeration) -> Outcome {
    let opts = SearchOptions::default();
    let check = |g: &GroupEnumeration, u: &Matrix<PrimeField>| -> Result<(), String> {
        let pair = pair_of(g, u);
        let c = factor_sp(&pair, &opts).map_err(|e| format!("{e} on {:?}", u.to_rows()))?;
        if verify_certificate(u, &c) {
            Ok(())
        } else {
            Err("certificate".into())
        }
    };
    let mut small = 0;
    for p in [3, 5] {
        let g = sp_group(p, 2);
        for u in &g.elements {
            if decide_sp(&pair_of(&g, u)).unwrap().bireflectional {
                check(&g, u)?;
                small += 1;
            }
        }
    }
    let mut idx: Vec<usize> = (0..sp4.order()).collect();
    idx.shuffle(&mut seeded_rng(6));
    let mut big = 0;
    for i in idx {
        if big == 100 {
            break;
        }
        let u = &sp4.elements[i];
        if decide_sp(&pair_of(sp4, u)).unwrap().bireflectional {
            check(sp4, u)?;
            big += 1;
        }
    }
    if big < 100 {
        return Err(format!("only {big} decide-true Sp4(F3) elements"));
    }
    Ok(format!("{small} Sp2 + {big} Sp4(F3) certificates"))
}

fn criterion_7() -> Outcome {
    let mut rng = seeded_rng(7);
    for i in 0..100 {
        let f = PrimeField::new([3, 5, 7][i % 3]).unwrap();
        for eps in [Epsilon::Plus, Epsilon::Minus] {
            let n = 2 * rng.gen_range(1..=3);
            let b = random_form(&f, eps, n, &mut rng);
            let c = random_form(&f, eps, n, &mut rng);
            let (lhs, _) = kappa_compose(&b, &c, eps).unwrap();
            let v = b.inverse().unwrap().mul(&c);
            let vit = v.inverse().unwrap().transpose();
            let expected = Matrix::block_diag(&f, &[v, vit]);
            let kb = kappa(&b, eps).unwrap();
            let hg = bireflect::isopair::hyperbolic_gram(&f, n, eps);
            if lhs != expected || !kb.mul(&kb).is_identity() || kb.transpose().mul(&hg).mul(&kb) != hg {
                return Err(format!("κ identity fails for ε={eps}"));
            }
        }
    }
    for i in 0..100 {
        let f = PrimeField::new([3, 5, 7][i % 3]).unwrap();
        let n = rng.gen_range(1..=6);
        let u = Matrix::random_invertible(&f, n, &mut rng);
        let ju = jordan_numbers(&u).unwrap();
        let jh = jordan_numbers(&h(&u).unwrap()).unwrap();
        let get = |p: &Poly<PrimeField>, k: usize| ju.get(&(p.clone(), k)).copied().unwrap_or(0);
        for ((p, k), m) in &jh {
            let ps = p.reciprocal().unwrap();
            if *m != get(p, *k) + get(&ps, *k) {
                return Err(format!("Jordan law fails at ({p},{k}) for {:?}", u.to_rows()));
            }
        }
        let total: usize = jh.iter().map(|((p, k), m)| p.deg() * k * m).sum();
        if total != 2 * n {
            return Err("Jordan numbers of h(u) do not fill the space".into());
        }
    }
    for i in 0..50 {
        let f = PrimeField::new([3, 5][i % 2]).unwrap();
        let n1 = rng.gen_range(1..=3);
        let n2 = rng.gen_range(1..=3);
        let u1 = Matrix::random_invertible(&f, n1, &mut rng);
        let u2 = Matrix::random_invertible(&f, n2, &mut rng);
        for eps in [Epsilon::Plus, Epsilon::Minus] {
            let whole = hyperbolic_extension(&Matrix::block_diag(&f, &[u1.clone(), u2.clone()]), eps).unwrap();
            let a = hyperbolic_extension(&u1, eps).unwrap();
            let b = hyperbolic_extension(&u2, eps).unwrap();
            let sum = a.perp_sum(&b).unwrap();
            let p = psi(&f, n1, n2);
            let pi = p.inverse().unwrap();
            if p.mul(whole.u()).mul(&pi) != *sum.u() || p.transpose().mul(sum.gram()).mul(&p) != *whole.gram() {
                return Err("Ψ identity fails".into());
            }
        }
    }
    Ok("κ: 200, Jordan law: 100, Ψ: 100".into())
}

fn criterion_8() -> Outcome {
    let mut rng = seeded_rng(8);
    for eps in [Epsilon::Plus, Epsilon::Minus] {
        for i in 0..200 {
            let f = PrimeField::new([3, 5][i % 2]).unwrap();
            let n = rng.gen_range(1..=6);
            let pair = random_isopair(&f, eps, n, &mut rng).unwrap();
            let w = compute_all(&pair).map_err(|e| e.to_string())?;
            let wi = compute_all(&pair.inverse()).map_err(|e| e.to_string())?;
            let expected = match eps {
                Epsilon::Plus => w.clone(),
                Epsilon::Minus => w.negated(),
            };
            if !invariants_equivalent(&wi, &expected).unwrap() {
                return Err(format!("ε={eps}: (b,u⁻¹) invariants differ for {:?}", pair.u().to_rows()));
            }
            for ((p, r), m) in &w.jordan {
                let wrong = match eps {
                    Epsilon::Plus => r % 2 == 0,
                    Epsilon::Minus => r % 2 == 1,
                };
                let pm1 = Poly::linear(&f, &f.one()) == *p || Poly::linear(&f, &f.from_i64(-1)) == *p;
                if pm1 && wrong && m % 2 == 1 {
                    return Err(format!("ε={eps}: n_{{{p},{r}}}={m} odd"));
                }
            }
        }
    }
    Ok("400/400".into())
}

fn criterion_9() -> Outcome {
    let f = PrimeField::new(5).unwrap();
    let g = Matrix::from_i64(&f, &[&[0, 1], &[-1, 0]]);
    let u = Matrix::from_i64(&f, &[&[2, 0], &[0, 3]]);
    let pair = Isopair::new(Epsilon::Minus, g, u.clone()).unwrap();
    let rep = decide_sp(&pair).map_err(|e| e.to_string())?;
    let msg = rep.obstruction.as_ref().map(|o| o.to_string()).unwrap_or_default();
    if rep.bireflectional || !msg.contains("odd Jordan number") {
        return Err(format!("decide: {}, {msg}", rep.bireflectional));
    }
    let oracle = bireflect::oracle::oracle_bireflectional(&pair, DEFAULT_CAP).map_err(|e| e.to_string())?;
    if oracle.is_some() {
        return Err("oracle found a witness".into());
    }
    Ok(msg)
}

fn run(id: usize, limit: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = f();
    let took = start.elapsed();
    let (ok, detail) = match out {
        Ok(d) if took <= limit => (true, d),
        Ok(d) => (false, format!("{d}; over time limit {limit:?}")),
        Err(e) => (false, e),
    };
    println!(
        "criterion {id}: {} ({:.2}s) {detail}",
        if ok { "PASS" } else { "FAIL" },
        took.as_secs_f64()
    );
    ok
}

fn main() -> ExitCode {
    let mins = |m: u64| Duration::from_secs(60 * m);
    let start = Instant::now();
    let sp4 = sp_group(3, 4);
    println!("enumerated Sp4(F3) in {:.2}s", start.elapsed().as_secs_f64());
    let results = [
        run(1, Duration::from_secs(10), criterion_1),
        run(2, mins(5), || criterion_2(&sp4)),
        run(3, mins(1), criterion_3),
        run(4, mins(1), criterion_4),
        run(5, mins(5), criterion_5),
        run(6, mins(10), || criterion_6(&sp4)),
        run(7, mins(1), criterion_7),
        run(8, mins(2), criterion_8),
        run(9, Duration::from_secs(60), criterion_9),
    ];
    let passed = results.iter().filter(|r| **r).count();
    println!("{passed}/{} criteria passed", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
