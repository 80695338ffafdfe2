use std::collections::BTreeMap;

use itertools::Itertools;
use num_traits::{One, Zero};

use super::{FanError, WeightedFan};
use crate::lattice::{rank_of, smith_normal_form, Int, IntMatrix, IntVector, QuotientMap, Rat};

/// One maximal cone through a codimension-1 face.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceIncidence {
    pub cone: usize,
    /// Primitive generator of the cone's image in the face's normal lattice.
    pub u: IntVector,
    pub weight: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    /// Sorted ray indices; empty for the apex of a 1-dimensional fan.
    pub rays: Vec<usize>,
    pub incident: Vec<FaceIncidence>,
}

impl Face {
    pub fn nonzero(&self) -> impl Iterator<Item = &FaceIncidence> {
        self.incident.iter().filter(|inc| !inc.weight.is_zero())
    }
}

/// All codimension-1 faces, sorted by ray set, each with its incident cones
/// in cone order.
pub fn codim1_faces(fan: &WeightedFan) -> Vec<Face> {
    let mut faces: BTreeMap<Vec<usize>, Vec<(usize, usize)>> = BTreeMap::new();
    for (ci, cone) in fan.cones().iter().enumerate() {
        for (k, &apex) in cone.rays().iter().enumerate() {
            let mut face = cone.rays().to_vec();
            face.remove(k);
            faces.entry(face).or_default().push((ci, apex));
        }
    }
    faces
        .into_iter()
        .map(|(rays, cones)| {
            let gens: Vec<IntVector> = rays.iter().map(|&r| fan.ray(r).to_vec()).collect();
            let quotient = QuotientMap::new(&gens, fan.ambient_dim()).expect("ray dimensions agree");
            let incident = cones
                .into_iter()
                .map(|(ci, apex)| FaceIncidence {
                    cone: ci,
                    u: quotient
                        .primitive_class(fan.ray(apex))
                        .expect("simplicial cone: apex ray is off the face span"),
                    weight: fan.cones()[ci].weight.clone(),
                })
                .collect();
            Face { rays, incident }
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BalanceFailure {
    pub face: Vec<usize>,
    /// The weighted sum of the `u` vectors, in quotient coordinates.
    pub residual: Vec<Rat>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BalanceReport {
    pub failures: Vec<BalanceFailure>,
}

impl BalanceReport {
    pub fn is_balanced(&self) -> bool {
        self.failures.is_empty()
    }
}

pub fn is_balanced(fan: &WeightedFan) -> BalanceReport {
    let failures = codim1_faces(fan)
        .into_iter()
        .filter_map(|face| {
            let dim = face.incident.first().map_or(0, |inc| inc.u.len());
            let mut residual = vec![Rat::zero(); dim];
            for inc in &face.incident {
                for (acc, x) in residual.iter_mut().zip(&inc.u) {
                    *acc += &inc.weight * Rat::from_integer(x.clone());
                }
            }
            (!residual.iter().all(Zero::is_zero)).then_some(BalanceFailure { face: face.rays, residual })
        })
        .collect();
    BalanceReport { failures }
}

/// Faces at which some proper subset of the nonzero-weight `u` vectors is dependent.
pub fn local_extremality_failures(fan: &WeightedFan) -> Vec<Vec<usize>> {
    codim1_faces(fan)
        .into_iter()
        .filter(|face| {
            let us: Vec<&[Int]> = face.nonzero().map(|inc| inc.u.as_slice()).collect();
            let k = us.len();
            // Every proper subset is independent iff every (k-1)-subset is.
            k >= 2 && us.iter().combinations(k - 1).any(|sub| {
                let sub: Vec<&[Int]> = sub.into_iter().copied().collect();
                rank_of(&sub) < k - 1
            })
        })
        .map(|face| face.rays)
        .collect()
}

pub fn is_locally_extremal(fan: &WeightedFan) -> bool {
    local_extremality_failures(fan).is_empty()
}

/// Nonzero-weight maximal cones are connected through shared codimension-1 faces.
pub fn is_connected_codim1(fan: &WeightedFan) -> bool {
    let mut parent: Vec<usize> = (0..fan.cones().len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for face in codim1_faces(fan) {
        let members: Vec<usize> = face.nonzero().map(|inc| inc.cone).collect();
        for w in members.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            parent[a] = b;
        }
    }
    let roots: Vec<usize> = fan
        .nonzero_cones()
        .map(|(ci, _)| find(&mut parent, ci))
        .unique()
        .collect();
    roots.len() <= 1
}

/// Sufficient (not necessary) test for strong extremality of a balanced fan.
pub fn is_strongly_extremal_sufficient(fan: &WeightedFan) -> Result<bool, FanError> {
    if !is_balanced(fan).is_balanced() {
        return Err(FanError::NotBalanced);
    }
    Ok(is_locally_extremal(fan) && is_connected_codim1(fan))
}

/// Support spans the ambient space.
pub fn is_nondegenerate(fan: &WeightedFan) -> bool {
    let rays: Vec<&[Int]> = fan
        .nonzero_cones()
        .flat_map(|(_, c)| c.rays().iter().copied())
        .unique()
        .map(|r| fan.ray(r))
        .collect();
    rank_of(&rays) == fan.ambient_dim()
}

pub fn non_unimodular_cones(fan: &WeightedFan) -> Vec<usize> {
    fan.cones()
        .iter()
        .enumerate()
        .filter(|(_, c)| {
            let rows = c.rays().iter().map(|&r| fan.ray(r).to_vec()).collect();
            let m = IntMatrix::from_rows(rows).expect("rays share a dimension");
            let factors = smith_normal_form(&m).invariant_factors();
            factors.len() != c.rays().len() || !factors.iter().all(One::is_one)
        })
        .map(|(ci, _)| ci)
        .collect()
}

/// Every cone is generated by part of a lattice basis.
pub fn is_unimodular(fan: &WeightedFan) -> bool {
    non_unimodular_cones(fan).is_empty()
}
