//! Weighted simplicial rational fans.

mod faces;
mod validate;

pub use faces::{
    codim1_faces, is_balanced, is_connected_codim1, is_locally_extremal, is_nondegenerate,
    is_strongly_extremal_sufficient, is_unimodular, local_extremality_failures, non_unimodular_cones,
    BalanceFailure, BalanceReport, Face, FaceIncidence,
};
pub use validate::{validate_fan, ConePairViolation, ValidityReport, ViolationKind};

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::lattice::{is_primitive, rank_of, Int, IntVector, Rat};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FanError {
    #[error("fan dimension must be at least 1")]
    ZeroDimension,
    #[error("ray {index} has {found} coordinates, ambient dimension is {expected}")]
    RayDimension { index: usize, expected: usize, found: usize },
    #[error("ray {index} is zero")]
    ZeroRay { index: usize },
    #[error("ray {index} is not primitive")]
    NotPrimitive { index: usize },
    #[error("rays {first} and {second} coincide")]
    DuplicateRay { first: usize, second: usize },
    #[error("cone {cone} refers to ray {ray}, but the fan has {count} rays")]
    RayIndexOutOfRange { cone: usize, ray: usize, count: usize },
    #[error("cone {cone} lists a ray twice")]
    RepeatedRayInCone { cone: usize },
    #[error("cone {cone} has {found} rays, fan dimension is {expected}")]
    WrongConeSize { cone: usize, expected: usize, found: usize },
    #[error("cone {cone} is not simplicial (generators are dependent)")]
    NotSimplicial { cone: usize },
    #[error("ray {index} is used by no cone")]
    UnusedRay { index: usize },
    #[error("fan is not balanced")]
    NotBalanced,
}

/// Primitive nonzero integral direction.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ray(IntVector);

impl Ray {
    pub fn new(direction: IntVector) -> Option<Ray> {
        is_primitive(&direction).then_some(Ray(direction))
    }

    pub fn coords(&self) -> &[Int] {
        &self.0
    }

    pub fn into_inner(self) -> IntVector {
        self.0
    }
}

impl fmt::Display for Ray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str(")")
    }
}

/// A maximal cone given by indices into the fan's ray table.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightedCone {
    rays: Vec<usize>,
    pub weight: Rat,
}

impl WeightedCone {
    /// Ray indices are stored sorted.
    pub fn new(mut rays: Vec<usize>, weight: Rat) -> Self {
        rays.sort_unstable();
        WeightedCone { rays, weight }
    }

    pub fn rays(&self) -> &[usize] {
        &self.rays
    }

    pub fn contains_ray(&self, r: usize) -> bool {
        self.rays.binary_search(&r).is_ok()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedFan {
    ambient_dim: usize,
    dim: usize,
    rays: Vec<Ray>,
    cones: Vec<WeightedCone>,
    isolated_rays_allowed: bool,
}

impl WeightedFan {
    pub fn new(
        ambient_dim: usize,
        dim: usize,
        rays: Vec<IntVector>,
        cones: Vec<WeightedCone>,
    ) -> Result<Self, FanError> {
        Self::build(ambient_dim, dim, rays, cones, false)
    }

    /// Like [`WeightedFan::new`], but rays that belong to no cone are kept.
    pub fn with_isolated_rays(
        ambient_dim: usize,
        dim: usize,
        rays: Vec<IntVector>,
        cones: Vec<WeightedCone>,
    ) -> Result<Self, FanError> {
        Self::build(ambient_dim, dim, rays, cones, true)
    }

    fn build(
        ambient_dim: usize,
        dim: usize,
        rays: Vec<IntVector>,
        cones: Vec<WeightedCone>,
        isolated_rays_allowed: bool,
    ) -> Result<Self, FanError> {
        if dim == 0 {
            return Err(FanError::ZeroDimension);
        }
        let mut checked = Vec::with_capacity(rays.len());
        for (index, r) in rays.into_iter().enumerate() {
            if r.len() != ambient_dim {
                return Err(FanError::RayDimension { index, expected: ambient_dim, found: r.len() });
            }
            if r.iter().all(Zero::is_zero) {
                return Err(FanError::ZeroRay { index });
            }
            match Ray::new(r) {
                Some(ray) => checked.push(ray),
                None => return Err(FanError::NotPrimitive { index }),
            }
        }
        for i in 0..checked.len() {
            for j in 0..i {
                if checked[i] == checked[j] {
                    return Err(FanError::DuplicateRay { first: j, second: i });
                }
            }
        }
        let mut used = vec![false; checked.len()];
        for (ci, cone) in cones.iter().enumerate() {
            if cone.rays.windows(2).any(|w| w[0] == w[1]) {
                return Err(FanError::RepeatedRayInCone { cone: ci });
            }
            if cone.rays.len() != dim {
                return Err(FanError::WrongConeSize { cone: ci, expected: dim, found: cone.rays.len() });
            }
            for &r in &cone.rays {
                if r >= checked.len() {
                    return Err(FanError::RayIndexOutOfRange { cone: ci, ray: r, count: checked.len() });
                }
                used[r] = true;
            }
            let gens: Vec<&[Int]> = cone.rays.iter().map(|&r| checked[r].coords()).collect();
            if rank_of(&gens) != dim {
                return Err(FanError::NotSimplicial { cone: ci });
            }
        }
        if !isolated_rays_allowed {
            if let Some(index) = used.iter().position(|u| !u) {
                return Err(FanError::UnusedRay { index });
            }
        }
        Ok(WeightedFan { ambient_dim, dim, rays: checked, cones, isolated_rays_allowed })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[Ray] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> &[Int] {
        self.rays[i].coords()
    }

    pub fn cones(&self) -> &[WeightedCone] {
        &self.cones
    }

    pub fn isolated_rays_allowed(&self) -> bool {
        self.isolated_rays_allowed
    }

    /// Index of the cone with exactly these rays, in any order.
    pub fn find_cone(&self, rays: &[usize]) -> Option<usize> {
        let mut key = rays.to_vec();
        key.sort_unstable();
        self.cones.iter().position(|c| c.rays == key)
    }

    pub fn find_ray(&self, coords: &[Int]) -> Option<usize> {
        self.rays.iter().position(|r| r.coords() == coords)
    }

    pub fn nonzero_cones(&self) -> impl Iterator<Item = (usize, &WeightedCone)> {
        self.cones.iter().enumerate().filter(|(_, c)| !c.weight.is_zero())
    }

    pub fn is_positive(&self) -> bool {
        self.cones.iter().all(|c| !c.weight.is_negative())
    }

    /// Rays that lie in no cone of nonzero weight.
    pub fn unsupported_rays(&self) -> Vec<usize> {
        let support: BTreeSet<usize> =
            self.nonzero_cones().flat_map(|(_, c)| c.rays.iter().copied()).collect();
        (0..self.rays.len()).filter(|r| !support.contains(r)).collect()
    }

    /// Same fan with every weight multiplied by `c`.
    pub fn scaled(&self, c: &Rat) -> WeightedFan {
        let mut out = self.clone();
        for cone in &mut out.cones {
            cone.weight = &cone.weight * c;
        }
        out
    }

    /// Relabels rays by `perm` (old index `i` becomes `perm[i]`) and reorders the cones.
    pub fn relabeled(&self, perm: &[usize], cone_order: &[usize]) -> Result<WeightedFan, FanError> {
        let mut rays = vec![IntVector::new(); self.rays.len()];
        for (old, &new) in perm.iter().enumerate() {
            rays[new] = self.rays[old].coords().to_vec();
        }
        let cones = cone_order
            .iter()
            .map(|&ci| {
                let c = &self.cones[ci];
                WeightedCone::new(c.rays.iter().map(|&r| perm[r]).collect(), c.weight.clone())
            })
            .collect();
        Self::build(self.ambient_dim, self.dim, rays, cones, self.isolated_rays_allowed)
    }

    /// Rebuilds the fan with an extra cone appended.
    pub fn with_cone(&self, cone: WeightedCone) -> Result<WeightedFan, FanError> {
        let mut cones = self.cones.clone();
        cones.push(cone);
        Self::build(
            self.ambient_dim,
            self.dim,
            self.rays.iter().map(|r| r.coords().to_vec()).collect(),
            cones,
            self.isolated_rays_allowed,
        )
    }
}
