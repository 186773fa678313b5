//! Two-involution factorizations in GL, O and Sp, with certificates.

mod decompose;
mod gl;
mod isometry;
mod o;
mod sp;

use std::fmt;

use crate::field::Field;
use crate::matrix::Matrix;

pub use decompose::{decompose, decompose_pieces, hyperbolic_split, Mode, Piece, PieceKind};
pub use gl::{factor_gl, gl_involution};
pub use isometry::{find_isometry, find_isometry_with, Strategy};
pub use o::factor_o;
pub use sp::{decide_sp, factor_sp, halved_v, DecisionReport, Obstruction};

/// Seed and sample budget for the randomized searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    pub seed: u64,
    pub budget: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            seed: 0,
            budget: 10_000,
        }
    }
}

impl SearchOptions {
    pub fn with_seed(seed: u64) -> Self {
        SearchOptions {
            seed,
            ..Self::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Group {
    GL,
    O,
    Sp,
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Group::GL => "gl",
            Group::O => "o",
            Group::Sp => "sp",
        })
    }
}

/// Involutions with s1·s2 = u, plus the form they must preserve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate<F: Field> {
    pub s1: Matrix<F>,
    pub s2: Matrix<F>,
    pub group: Group,
    pub gram: Option<Matrix<F>>,
    pub seed: u64,
}

/// Exact check of every certificate condition.
pub fn verify_certificate<F: Field>(u: &Matrix<F>, cert: &Certificate<F>) -> bool {
    let n = u.rows();
    let shape_ok = |m: &Matrix<F>| m.rows() == n && m.cols() == n;
    if !u.is_square() || !shape_ok(&cert.s1) || !shape_ok(&cert.s2) {
        return false;
    }
    if !cert.s1.mul(&cert.s1).is_identity() || !cert.s2.mul(&cert.s2).is_identity() {
        return false;
    }
    if cert.s1.mul(&cert.s2) != *u {
        return false;
    }
    match (&cert.gram, cert.group) {
        (None, Group::GL) => true,
        (Some(g), Group::O | Group::Sp) => {
            shape_ok(g)
                && cert.s1.transpose().mul(g).mul(&cert.s1) == *g
                && cert.s2.transpose().mul(g).mul(&cert.s2) == *g
        }
        _ => false,
    }
}
