//! Second homology of the one-point blow-up of `S^2 x S^2` in the basis
//! `A, B, E` (first factor, second factor, exceptional class), with
//! `A.B = 1`, `A.A = B.B = 0`, `E.E = -1` and `c_1 = 2A + 2B - E` read
//! through Poincaré duality so that `c_1(E) = 1` and `c_1(A) = 2`.

use num_integer::Roots;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_arith::QField;
use crate::exec::Exec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct H2Class {
    pub alpha: i64,
    pub beta: i64,
    pub gamma: i64,
}

impl H2Class {
    pub const fn new(alpha: i64, beta: i64, gamma: i64) -> Self {
        H2Class { alpha, beta, gamma }
    }

    pub fn neg(self) -> Self {
        H2Class::new(-self.alpha, -self.beta, -self.gamma)
    }
}

pub fn intersection(x: H2Class, y: H2Class) -> i64 {
    x.alpha * y.beta + x.beta * y.alpha - x.gamma * y.gamma
}

pub fn c1_eval(x: H2Class) -> i64 {
    2 * x.alpha + 2 * x.beta + x.gamma
}

/// Symplectic area `a alpha + b beta + c gamma`.
pub fn omega_eval(x: H2Class, a: &QField, b: &QField, c: &QField) -> QField {
    a * &QField::from_int(x.alpha) + b * &QField::from_int(x.beta) + c * &QField::from_int(x.gamma)
}

fn satisfies(x: H2Class) -> bool {
    intersection(x, x) == -2 && c1_eval(x) == 0
}

fn check_bound(bound: i64) -> Result<()> {
    if bound < 1 {
        return Err(Error::OutOfRange(format!("bound {bound} must be at least 1")));
    }
    Ok(())
}

/// All classes with coefficients in `[-bound, bound]`, self-intersection
/// `-2` and `c_1 = 0`, sorted.
///
/// Substituting `gamma = -2(alpha + beta)` turns the conditions into
/// `2 alpha^2 + 3 alpha beta + 2 beta^2 = 1`. Read as a quadratic in `beta`
/// its discriminant is `8 - 7 alpha^2`, so only `|alpha| <= 1` can occur and
/// the search is a handful of cases.
pub fn find_lemma_classes(bound: i64) -> Result<Vec<H2Class>> {
    check_bound(bound)?;
    let mut out = Vec::new();
    for alpha in -1i64..=1 {
        let disc = 8 - 7 * alpha * alpha;
        let r = disc.sqrt();
        if r * r != disc {
            continue;
        }
        for num in [-3 * alpha + r, -3 * alpha - r] {
            if num % 4 != 0 {
                continue;
            }
            let beta = num / 4;
            let x = H2Class::new(alpha, beta, -2 * (alpha + beta));
            if [x.alpha, x.beta, x.gamma].iter().all(|c| c.abs() <= bound) && satisfies(x) {
                out.push(x);
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Exhaustive search over the cube `[-bound, bound]^3`, parallel over `alpha`.
pub fn brute_force_classes(bound: i64, exec: Exec) -> Result<Vec<H2Class>> {
    check_bound(bound)?;
    let alphas: Vec<i64> = (-bound..=bound).collect();
    let mut out: Vec<H2Class> = exec
        .map(&alphas, |&alpha| {
            let mut hits = Vec::new();
            for beta in -bound..=bound {
                for gamma in -bound..=bound {
                    let x = H2Class::new(alpha, beta, gamma);
                    if satisfies(x) {
                        hits.push(x);
                    }
                }
            }
            hits
        })
        .into_iter()
        .flatten()
        .collect();
    out.sort();
    Ok(out)
}

/// The solutions whose symplectic area vanishes as well.
pub fn area_zero_classes(bound: i64, a: &QField, b: &QField, c: &QField) -> Result<Vec<H2Class>> {
    Ok(find_lemma_classes(bound)?.into_iter().filter(|x| omega_eval(*x, a, b, c).is_zero()).collect())
}
