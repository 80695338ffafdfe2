//! Exact inertia of symmetric rational matrices.
//!
//! Two independent algorithms: symmetric congruence reduction, and Descartes'
//! rule on the characteristic polynomial (exact because symmetric matrices have
//! only real eigenvalues).

use std::fmt;

use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::lattice::{Int, IntMatrix, Rat, RatMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InertiaError {
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("congruence matrix is singular")]
    Singular,
    #[error("congruence matrix is {found}x{found}, expected {expected}x{expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("characteristic polynomial has non-real roots")]
    NonRealRoots,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct Signature {
    pub n_plus: usize,
    pub n_minus: usize,
    pub n_zero: usize,
}

impl Signature {
    pub fn new(n_plus: usize, n_minus: usize, n_zero: usize) -> Self {
        Signature { n_plus, n_minus, n_zero }
    }

    pub fn dim(&self) -> usize {
        self.n_plus + self.n_minus + self.n_zero
    }

    /// Signature of `-S`.
    pub fn negated(&self) -> Self {
        Signature::new(self.n_minus, self.n_plus, self.n_zero)
    }
}

impl std::ops::Add for Signature {
    type Output = Signature;

    fn add(self, o: Signature) -> Signature {
        Signature::new(self.n_plus + o.n_plus, self.n_minus + o.n_minus, self.n_zero + o.n_zero)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.n_plus, self.n_minus, self.n_zero)
    }
}

fn require_symmetric(s: &RatMatrix) -> Result<(), InertiaError> {
    if s.is_symmetric() {
        Ok(())
    } else {
        Err(InertiaError::NotSymmetric)
    }
}

pub fn inertia_congruence(s: &RatMatrix) -> Result<Signature, InertiaError> {
    require_symmetric(s)?;
    let mut a = s.clone();
    let mut active: Vec<usize> = (0..a.rows()).collect();
    let mut sig = Signature::default();
    while !active.is_empty() {
        let mut pivot: Option<usize> = None;
        for &k in &active {
            let v = &a[(k, k)];
            if !v.is_zero() && pivot.is_none_or(|p| v.abs() > a[(p, p)].abs()) {
                pivot = Some(k);
            }
        }
        let Some(p) = pivot else {
            let off = active
                .iter()
                .flat_map(|&i| active.iter().map(move |&j| (i, j)))
                .find(|&(i, j)| i != j && !a[(i, j)].is_zero());
            match off {
                // a_ii becomes 2 a_ij, which is nonzero.
                Some((i, j)) => {
                    for c in 0..a.cols() {
                        let x = a[(j, c)].clone();
                        a[(i, c)] += x;
                    }
                    for r in 0..a.rows() {
                        let x = a[(r, j)].clone();
                        a[(r, i)] += x;
                    }
                    continue;
                }
                None => {
                    sig.n_zero += active.len();
                    break;
                }
            }
        };
        let pv = a[(p, p)].clone();
        if pv.is_positive() {
            sig.n_plus += 1;
        } else {
            sig.n_minus += 1;
        }
        active.retain(|&k| k != p);
        for &r in &active {
            let factor = &a[(r, p)] / &pv;
            if factor.is_zero() {
                continue;
            }
            for &c in &active {
                let delta = &factor * &a[(p, c)];
                a[(r, c)] -= delta;
            }
        }
        for &r in &active {
            a[(r, p)] = Rat::zero();
            a[(p, r)] = Rat::zero();
        }
    }
    Ok(sig)
}

/// Coefficients `c_0..c_n` of `det(xI - A)`, by Faddeev-LeVerrier.
pub fn characteristic_polynomial(a: &IntMatrix) -> Vec<Int> {
    let n = a.rows();
    let mut coeffs = vec![Int::zero(); n + 1];
    coeffs[n] = Int::from(1);
    let mut m = IntMatrix::zeros(n, n);
    for k in 1..=n {
        let mut next = a.mul(&m);
        for i in 0..n {
            next[(i, i)] += &coeffs[n + 1 - k];
        }
        let am = a.mul(&next);
        let trace: Int = (0..n).map(|i| am[(i, i)].clone()).sum();
        // Exact: the trace is always divisible by k.
        coeffs[n - k] = -trace / Int::from(k);
        m = next;
    }
    coeffs
}

fn sign_variations<'a>(coeffs: impl Iterator<Item = &'a Int>) -> usize {
    let signs: Vec<bool> = coeffs.filter(|c| !c.is_zero()).map(Signed::is_positive).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

pub fn inertia_charpoly(s: &RatMatrix) -> Result<Signature, InertiaError> {
    require_symmetric(s)?;
    let n = s.rows();
    let p = characteristic_polynomial(&s.clear_denominators());
    let n_zero = p.iter().position(|c| !c.is_zero()).unwrap_or(n);
    let q = &p[n_zero..];
    let n_plus = sign_variations(q.iter());
    let flipped: Vec<Int> = q.iter().enumerate().map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() }).collect();
    let n_minus = sign_variations(flipped.iter());
    if n_plus + n_minus + n_zero != n {
        return Err(InertiaError::NonRealRoots);
    }
    Ok(Signature::new(n_plus, n_minus, n_zero))
}

/// Runs both algorithms; callers compare the results.
pub fn inertia_both(s: &RatMatrix) -> Result<(Signature, Signature), InertiaError> {
    Ok((inertia_congruence(s)?, inertia_charpoly(s)?))
}

/// Compares `inertia(A^T S A)` with `inertia(S)`.
pub fn check_sylvester(s: &RatMatrix, a: &RatMatrix) -> Result<bool, InertiaError> {
    require_symmetric(s)?;
    if !a.is_square() || a.rows() != s.rows() {
        return Err(InertiaError::DimensionMismatch { expected: s.rows(), found: a.rows() });
    }
    if a.det().expect("checked square").is_zero() {
        return Err(InertiaError::Singular);
    }
    let congruent = a.transpose().mul(s).mul(a);
    Ok(inertia_congruence(&congruent)? == inertia_congruence(s)?)
}
