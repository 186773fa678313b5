//! Brute-force ground truth over small prime fields: enumerate Isom(b) and
//! search for an involution conjugating u to u⁻¹.

use std::collections::{HashSet, VecDeque};

use rand::Rng as _;

use crate::error::{Error, Result};
use crate::factorize::{decide_sp, factor_o, verify_certificate, Certificate, Group, SearchOptions};
use crate::field::{seeded_rng, Field, PrimeField};
use crate::isopair::{Epsilon, Isopair};
use crate::linalg::minimal_polynomial;
use crate::matrix::Matrix;

pub const DEFAULT_CAP: usize = 100_000;

#[derive(Clone, Debug)]
pub struct GroupEnumeration {
    pub gram: Matrix<PrimeField>,
    pub epsilon: Epsilon,
    /// Sorted by entries.
    pub elements: Vec<Matrix<PrimeField>>,
    pub involutions: Vec<Matrix<PrimeField>>,
}

/// |Sp_n(F_q)| for n ≤ 4.
pub fn known_order(epsilon: Epsilon, n: usize, q: u64) -> Option<u128> {
    let q = q as u128;
    match (epsilon, n) {
        (Epsilon::Minus, 0) => Some(1),
        (Epsilon::Minus, 2) => Some(q * (q * q - 1)),
        (Epsilon::Minus, 4) => Some(q.pow(4) * (q * q - 1) * (q.pow(4) - 1)),
        _ => None,
    }
}

/// [[0, I], [−I, 0]] for ε = −1, I for ε = +1.
pub fn standard_gram(field: &PrimeField, epsilon: Epsilon, n: usize) -> Result<Matrix<PrimeField>> {
    match epsilon {
        Epsilon::Plus => Ok(Matrix::identity(field, n)),
        Epsilon::Minus => {
            if n % 2 == 1 {
                return Err(Error::Dimension("symplectic dimension must be even".into()));
            }
            let m = n / 2;
            Ok(Matrix::from_fn(field, n, n, |i, j| {
                if j == i + m {
                    field.one()
                } else if i == j + m {
                    field.neg(&field.one())
                } else {
                    field.zero()
                }
            }))
        }
    }
}

fn all_vectors(f: &PrimeField, n: usize) -> Vec<Vec<u64>> {
    let q = f.modulus();
    let total = q.pow(n as u32);
    (1..total)
        .map(|mut idx| {
            (0..n)
                .map(|_| {
                    let c = idx % q;
                    idx /= q;
                    c
                })
                .collect()
        })
        .collect()
}

/// x ↦ x + a·b(v,x)·v
fn transvection(g: &Matrix<PrimeField>, v: &[u64], a: u64) -> Matrix<PrimeField> {
    let f = g.field();
    let n = g.rows();
    let col = Matrix::column_vector(f, v);
    let row = col.transpose().mul(g);
    Matrix::identity(f, n).add(&col.mul(&row).scale(&a))
}

/// x ↦ x − 2·b(v,x)/b(v,v)·v, or None for isotropic v.
fn reflection(g: &Matrix<PrimeField>, v: &[u64]) -> Option<Matrix<PrimeField>> {
    let f = g.field();
    let n = g.rows();
    let col = Matrix::column_vector(f, v);
    let row = col.transpose().mul(g);
    let bvv = row.mul(&col).get(0, 0).clone();
    let c = f.neg(&f.mul(&2, &f.inv(&bvv)?));
    Some(Matrix::identity(f, n).add(&col.mul(&row).scale(&c)))
}

fn closure(
    f: &PrimeField,
    n: usize,
    gens: &[Matrix<PrimeField>],
    cap: usize,
) -> Result<Vec<Matrix<PrimeField>>> {
    let id = Matrix::identity(f, n);
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(id.clone());
    queue.push_back(id);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.mul(g);
            if !seen.contains(&y) {
                if seen.len() >= cap {
                    return Err(Error::CapExceeded(cap));
                }
                seen.insert(y.clone());
                queue.push_back(y);
            }
        }
    }
    let mut out: Vec<_> = seen.into_iter().collect();
    out.sort_by(|a, b| a.data().cmp(b.data()));
    Ok(out)
}

/// Isom(b) by BFS closure. Symplectic groups start from a few seeded random
/// transvections and fall back to all of them; orthogonal groups use all
/// reflections.
pub fn enumerate_group(
    gram: &Matrix<PrimeField>,
    epsilon: Epsilon,
    seed: u64,
    cap: usize,
) -> Result<GroupEnumeration> {
    let f = gram.field().clone();
    let n = gram.rows();
    let g = gram;
    let eps = epsilon.scalar(&f);
    if !gram.is_square() || !gram.is_invertible() || gram.transpose() != gram.scale(&eps) {
        return Err(Error::Precondition("gram is not a nondegenerate ε-form".into()));
    }
    let vectors = all_vectors(&f, n);
    let elements = match epsilon {
        Epsilon::Minus => {
            let mut rng = seeded_rng(seed);
            let target = known_order(epsilon, n, f.modulus());
            let mut found = None;
            if let (Some(order), false) = (target, vectors.is_empty()) {
                let gens: Vec<_> = (0..4)
                    .map(|_| {
                        let v = &vectors[rng.gen_range(0..vectors.len())];
                        let a = rng.gen_range(1..f.modulus());
                        transvection(g, v, a)
                    })
                    .collect();
                let els = closure(&f, n, &gens, cap)?;
                if els.len() as u128 == order {
                    found = Some(els);
                }
            }
            match found {
                Some(els) => els,
                None => {
                    let gens: Vec<_> = vectors
                        .iter()
                        .flat_map(|v| (1..f.modulus()).map(move |a| (v, a)))
                        .map(|(v, a)| transvection(g, v, a))
                        .collect();
                    closure(&f, n, &gens, cap)?
                }
            }
        }
        Epsilon::Plus => {
            let gens: Vec<_> = vectors.iter().filter_map(|v| reflection(g, v)).collect();
            closure(&f, n, &gens, cap)?
        }
    };
    let involutions = elements
        .iter()
        .filter(|s| s.mul(s).is_identity())
        .cloned()
        .collect();
    Ok(GroupEnumeration {
        gram: gram.clone(),
        epsilon,
        elements,
        involutions,
    })
}

impl GroupEnumeration {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn group(&self) -> Group {
        match self.epsilon {
            Epsilon::Plus => Group::O,
            Epsilon::Minus => Group::Sp,
        }
    }

    pub fn contains(&self, u: &Matrix<PrimeField>) -> bool {
        self.elements
            .binary_search_by(|x| x.data().cmp(u.data()))
            .is_ok()
    }

    /// s2 = s and s1 = u·s for the first involution s with s·u·s = u⁻¹.
    pub fn witness(&self, u: &Matrix<PrimeField>) -> Result<Option<Certificate<PrimeField>>> {
        let ui = u.inverse()?;
        Ok(self
            .involutions
            .iter()
            .find(|s| s.mul(u).mul(s) == ui)
            .map(|s| Certificate {
                s1: u.mul(s),
                s2: s.clone(),
                group: self.group(),
                gram: Some(self.gram.clone()),
                seed: 0,
            }))
    }
}

/// Exhaustive decision, with the witness pair when bireflectional.
pub fn oracle_bireflectional(
    pair: &Isopair<PrimeField>,
    cap: usize,
) -> Result<Option<Certificate<PrimeField>>> {
    let group = enumerate_group(pair.gram(), pair.epsilon(), 0, cap)?;
    if !group.contains(pair.u()) {
        return Err(Error::Precondition("u is not in the enumerated group".into()));
    }
    group.witness(pair.u())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusRow {
    pub id: usize,
    pub trace: String,
    pub minimal_polynomial: String,
    pub decide: bool,
    pub oracle: bool,
}

impl CensusRow {
    pub fn agrees(&self) -> bool {
        self.decide == self.oracle
    }
}

/// Oracle verdicts joined with decide_sp (ε = −1) or a verifying factor_o (ε = +1).
pub fn census(group: &GroupEnumeration, opts: &SearchOptions) -> Result<Vec<CensusRow>> {
    let f = group.gram.field();
    group
        .elements
        .iter()
        .enumerate()
        .map(|(id, u)| {
            let pair = Isopair::new_unchecked(group.epsilon, group.gram.clone(), u.clone());
            let witness = group.witness(u)?;
            if let Some(w) = &witness {
                if !verify_certificate(u, w) {
                    return Err(Error::Verification("oracle witness".into()));
                }
            }
            let decide = match group.epsilon {
                Epsilon::Minus => decide_sp(&pair)?.bireflectional,
                Epsilon::Plus => factor_o(&pair, opts).is_ok(),
            };
            let trace = (0..u.rows()).fold(f.zero(), |acc, i| f.add(&acc, u.get(i, i)));
            Ok(CensusRow {
                id,
                trace: f.format(&trace),
                minimal_polynomial: minimal_polynomial(u).to_string(),
                decide,
                oracle: witness.is_some(),
            })
        })
        .collect()
}

pub fn census_csv(rows: &[CensusRow]) -> String {
    let mut out = String::from("element_id,trace,minimal_polynomial,decide,oracle\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.id, r.trace, r.minimal_polynomial, r.decide, r.oracle
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_group_orders() {
        let f3 = PrimeField::new(3).unwrap();
        let j = standard_gram(&f3, Epsilon::Minus, 2).unwrap();
        let sp2 = enumerate_group(&j, Epsilon::Minus, 0, DEFAULT_CAP).unwrap();
        assert_eq!(sp2.order(), 24);
        assert_eq!(sp2.involutions.len(), 2);
        let o2 = enumerate_group(&standard_gram(&f3, Epsilon::Plus, 2).unwrap(), Epsilon::Plus, 0, DEFAULT_CAP)
            .unwrap();
        // ⟨1,1⟩ over F₃ is anisotropic: O₂⁻(3) is dihedral of order 8
        assert_eq!(o2.order(), 8);
        assert!(matches!(enumerate_group(&j, Epsilon::Minus, 0, 10), Err(Error::CapExceeded(10))));
    }

    #[test]
    fn oracle_examples() {
        let f3 = PrimeField::new(3).unwrap();
        let j = standard_gram(&f3, Epsilon::Minus, 2).unwrap();
        let minus = Isopair::new(Epsilon::Minus, j.clone(), Matrix::scalar(&f3, 2, 2)).unwrap();
        let w = oracle_bireflectional(&minus, DEFAULT_CAP).unwrap().unwrap();
        assert!(verify_certificate(minus.u(), &w));
        let unip = Isopair::new(Epsilon::Minus, j, Matrix::from_i64(&f3, &[&[1, 1], &[0, 1]])).unwrap();
        assert!(oracle_bireflectional(&unip, DEFAULT_CAP).unwrap().is_none());
    }

    #[test]
    fn census_examples() {
        let f3 = PrimeField::new(3).unwrap();
        let g = enumerate_group(&standard_gram(&f3, Epsilon::Minus, 2).unwrap(), Epsilon::Minus, 0, DEFAULT_CAP)
            .unwrap();
        let rows = census(&g, &SearchOptions::default()).unwrap();
        assert_eq!(rows.len(), 24);
        assert_eq!(rows.iter().filter(|r| r.oracle).count(), 2);
        assert!(rows.iter().all(CensusRow::agrees));
        let o = enumerate_group(&standard_gram(&f3, Epsilon::Plus, 2).unwrap(), Epsilon::Plus, 0, DEFAULT_CAP)
            .unwrap();
        let rows = census(&o, &SearchOptions::default()).unwrap();
        assert!(rows.iter().all(|r| r.oracle && r.decide));
        assert!(census_csv(&rows).starts_with("element_id,trace"));
    }
}
