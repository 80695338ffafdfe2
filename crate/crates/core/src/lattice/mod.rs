//! Exact integer and rational arithmetic, lattice normal forms, and
//! quotient-lattice coordinates.

mod matrix;
mod normal_form;

pub use matrix::{max_abs, minors_2x2, IntMatrix, Matrix, RatMatrix};
pub use normal_form::{
    hermite_normal_form, smith_normal_form, unimodular_inverse, HermiteForm, SmithForm,
};

use num_integer::Integer;
use num_traits::{Signed, Zero};
use thiserror::Error;

pub type Int = num_bigint::BigInt;
pub type Rat = num_rational::BigRational;
pub type IntVector = Vec<Int>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("zero vector has no primitive generator")]
    ZeroVector,
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is {rows}x{cols}, need at least 2x2")]
    TooSmall { rows: usize, cols: usize },
    #[error("vector lies in the rational span of the sublattice")]
    InSpan,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("rows have different lengths")]
    Ragged,
}

pub fn int_vector(coords: &[i64]) -> IntVector {
    coords.iter().map(|&x| Int::from(x)).collect()
}

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(num.into(), den.into())
}

pub fn rat_int(x: i64) -> Rat {
    Rat::from_integer(x.into())
}

pub fn to_rat_vector(v: &[Int]) -> Vec<Rat> {
    v.iter().map(|x| Rat::from_integer(x.clone())).collect()
}

/// Nonnegative gcd of all coordinates.
pub fn content(v: &[Int]) -> Int {
    v.iter().fold(Int::zero(), |g, x| g.gcd(x))
}

/// Divides `v` by the gcd of its coordinates.
pub fn primitive(v: &[Int]) -> Result<IntVector, LatticeError> {
    let g = content(v);
    if g.is_zero() {
        return Err(LatticeError::ZeroVector);
    }
    Ok(v.iter().map(|x| x / &g).collect())
}

pub fn is_primitive(v: &[Int]) -> bool {
    content(v) == Int::from(1)
}

/// Rank over the rationals of a list of integer vectors sharing a length.
pub fn rank_of(vectors: &[&[Int]]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    let rows = vectors.iter().map(|v| to_rat_vector(v)).collect();
    RatMatrix::from_rows(rows).map_or(0, |m| m.rank())
}

/// The projection `Z^n -> Z^n / sat(L)` for a sublattice `L`, in a basis of
/// the quotient that depends only on the saturation of `L`.
///
/// The saturated basis is put in Hermite form before the Smith reduction that
/// produces the quotient coordinates, so any two generating sets of the same
/// saturated lattice give the same map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientMap {
    ambient_dim: usize,
    rank: usize,
    /// `n x (n - rank)`; a row vector `v` maps to `v * projection`.
    projection: IntMatrix,
}

impl QuotientMap {
    pub fn new(gens: &[IntVector], ambient_dim: usize) -> Result<Self, LatticeError> {
        if let Some(g) = gens.iter().find(|g| g.len() != ambient_dim) {
            return Err(LatticeError::DimensionMismatch { expected: ambient_dim, found: g.len() });
        }
        let a = if gens.is_empty() {
            IntMatrix::empty(ambient_dim)
        } else {
            IntMatrix::from_rows(gens.to_vec())?
        };
        let sf = smith_normal_form(&a);
        let rank = sf.rank();
        if rank == 0 {
            return Ok(QuotientMap {
                ambient_dim,
                rank,
                projection: IntMatrix::identity(ambient_dim),
            });
        }
        let v_inv = unimodular_inverse(&sf.v).expect("Smith transform is unimodular");
        let saturated = v_inv.select(&(0..rank).collect::<Vec<_>>(), &(0..ambient_dim).collect::<Vec<_>>());
        let canonical = hermite_normal_form(&saturated).h;
        let sf2 = smith_normal_form(&canonical);
        let cols: Vec<usize> = (rank..ambient_dim).collect();
        let projection = sf2.v.select(&(0..ambient_dim).collect::<Vec<_>>(), &cols);
        Ok(QuotientMap { ambient_dim, rank, projection })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn quotient_dim(&self) -> usize {
        self.ambient_dim - self.rank
    }

    pub fn project(&self, v: &[Int]) -> Result<IntVector, LatticeError> {
        if v.len() != self.ambient_dim {
            return Err(LatticeError::DimensionMismatch { expected: self.ambient_dim, found: v.len() });
        }
        Ok(self.projection.vec_mul(v))
    }

    pub fn project_rat(&self, v: &[Rat]) -> Vec<Rat> {
        self.projection.to_rat().vec_mul(v)
    }

    /// Primitive generator of the ray spanned by the class of `v`.
    pub fn primitive_class(&self, v: &[Int]) -> Result<IntVector, LatticeError> {
        let image = self.project(v)?;
        primitive(&image).map_err(|_| LatticeError::InSpan)
    }
}

/// Primitive generator, in `Z^n / sat(span(gens))`, of the ray through the class of `v`.
pub fn quotient_primitive(gens: &[IntVector], v: &[Int]) -> Result<IntVector, LatticeError> {
    QuotientMap::new(gens, v.len())?.primitive_class(v)
}

/// Sign of a rational as -1, 0, 1.
pub fn sign(x: &Rat) -> i8 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}
