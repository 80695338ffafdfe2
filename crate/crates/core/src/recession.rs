//! Recession cones of V-polyhedra and the recession fan of a weighted complex.

use itertools::Itertools;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::fan::{WeightedCone, WeightedFan};
use crate::lattice::{is_primitive, rank_of, Int, IntVector, Rat, RatMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecessionError {
    #[error("polyhedron has no vertices")]
    NoVertices,
    #[error("polyhedron has points of different dimensions")]
    MixedDimension,
    #[error("ray {index} is zero or not primitive")]
    BadRay { index: usize },
    #[error("cell {cell} has dimension {found}, complex dimension is {expected}")]
    CellDimension { cell: usize, expected: usize, found: usize },
    #[error("cell {cell} lives in R^{found}, expected R^{expected}")]
    AmbientMismatch { cell: usize, expected: usize, found: usize },
    #[error("recession cone of cell {cell} is not simplicial")]
    UnsupportedNonSimplicialRecession { cell: usize },
    #[error("recession cone of cell {cell} is not a cone of the fan")]
    NotCompatible { cell: usize },
    #[error("fan has dimension {fan}, complex has dimension {complex}")]
    DimensionMismatch { fan: usize, complex: usize },
}

/// `conv(vertices) + cone(rays)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VPolyhedron {
    vertices: Vec<Vec<Rat>>,
    rays: Vec<IntVector>,
}

impl VPolyhedron {
    pub fn new(vertices: Vec<Vec<Rat>>, rays: Vec<IntVector>) -> Result<Self, RecessionError> {
        let n = vertices.first().ok_or(RecessionError::NoVertices)?.len();
        if vertices.iter().any(|v| v.len() != n) || rays.iter().any(|r| r.len() != n) {
            return Err(RecessionError::MixedDimension);
        }
        if let Some(index) = rays.iter().position(|r| !is_primitive(r)) {
            return Err(RecessionError::BadRay { index });
        }
        Ok(VPolyhedron { vertices, rays })
    }

    /// The cone `cone(rays)` with apex at the origin.
    pub fn cone(rays: Vec<IntVector>, ambient_dim: usize) -> Result<Self, RecessionError> {
        Self::new(vec![vec![Rat::zero(); ambient_dim]], rays)
    }

    pub fn vertices(&self) -> &[Vec<Rat>] {
        &self.vertices
    }

    pub fn rays(&self) -> &[IntVector] {
        &self.rays
    }

    pub fn ambient_dim(&self) -> usize {
        self.vertices[0].len()
    }

    pub fn dim(&self) -> usize {
        let base = &self.vertices[0];
        let dirs: Vec<Vec<Rat>> = self.vertices[1..]
            .iter()
            .map(|v| v.iter().zip(base).map(|(a, b)| a - b).collect())
            .chain(self.rays.iter().map(|r| r.iter().map(|x| Rat::from_integer(x.clone())).collect()))
            .collect();
        if dirs.is_empty() {
            return 0;
        }
        RatMatrix::from_rows(dirs).expect("checked dimensions").rank()
    }

    pub fn translated(&self, b: &[Rat]) -> VPolyhedron {
        let vertices = self.vertices.iter().map(|v| v.iter().zip(b).map(|(x, y)| x + y).collect()).collect();
        VPolyhedron { vertices, rays: self.rays.clone() }
    }
}

/// Minimal ray set of `rec(P) = cone(rays of P)`, sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecessionCone {
    pub rays: Vec<IntVector>,
}

impl RecessionCone {
    pub fn dim(&self) -> usize {
        let r: Vec<&[Int]> = self.rays.iter().map(Vec::as_slice).collect();
        rank_of(&r)
    }

    pub fn is_simplicial(&self) -> bool {
        self.dim() == self.rays.len()
    }
}

/// Whether `x` is a nonnegative combination of `gens` (Caratheodory: some
/// independent subset suffices).
fn in_cone(x: &[Int], gens: &[&[Int]]) -> bool {
    if x.iter().all(Zero::is_zero) {
        return true;
    }
    let n = x.len();
    let target: Vec<Rat> = x.iter().map(|v| Rat::from_integer(v.clone())).collect();
    let top = rank_of(gens).min(gens.len());
    (1..=top).any(|k| {
        gens.iter().combinations(k).any(|sub| {
            let sub: Vec<&[Int]> = sub.into_iter().copied().collect();
            if rank_of(&sub) != k {
                return false;
            }
            let m = RatMatrix::from_fn(n, k, |i, j| Rat::from_integer(sub[j][i].clone()));
            m.solve_unique(&target).is_some_and(|c| c.iter().all(|t| !t.is_negative()))
        })
    })
}

/// Depends only on the rays of `p`.
pub fn recession_cone(p: &VPolyhedron) -> RecessionCone {
    let mut rays: Vec<IntVector> = p.rays.iter().cloned().unique().collect();
    let mut k = 0;
    while k < rays.len() {
        let others: Vec<&[Int]> = rays.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, r)| r.as_slice()).collect();
        if in_cone(&rays[k], &others) {
            rays.remove(k);
        } else {
            k += 1;
        }
    }
    rays.sort();
    RecessionCone { rays }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedVComplex {
    ambient_dim: usize,
    dim: usize,
    cells: Vec<(VPolyhedron, Rat)>,
}

impl WeightedVComplex {
    pub fn new(ambient_dim: usize, dim: usize, cells: Vec<(VPolyhedron, Rat)>) -> Result<Self, RecessionError> {
        for (cell, (p, _)) in cells.iter().enumerate() {
            if p.ambient_dim() != ambient_dim {
                return Err(RecessionError::AmbientMismatch { cell, expected: ambient_dim, found: p.ambient_dim() });
            }
            if p.dim() != dim {
                return Err(RecessionError::CellDimension { cell, expected: dim, found: p.dim() });
            }
        }
        Ok(WeightedVComplex { ambient_dim, dim, cells })
    }

    /// Every maximal cone of `fan` as a cell with apex 0.
    pub fn from_fan(fan: &WeightedFan) -> Self {
        let cells = fan
            .cones()
            .iter()
            .map(|c| {
                let rays = c.rays().iter().map(|&r| fan.ray(r).to_vec()).collect();
                (VPolyhedron::cone(rays, fan.ambient_dim()).expect("fan rays are primitive"), c.weight.clone())
            })
            .collect();
        WeightedVComplex { ambient_dim: fan.ambient_dim(), dim: fan.dim(), cells }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cells(&self) -> &[(VPolyhedron, Rat)] {
        &self.cells
    }

    pub fn translated(&self, b: &[Rat]) -> WeightedVComplex {
        let cells = self.cells.iter().map(|(p, w)| (p.translated(b), w.clone())).collect();
        WeightedVComplex { ambient_dim: self.ambient_dim, dim: self.dim, cells }
    }
}

/// Sorted ray indices of the cone of `sigma` equal to `rec`, if there is one.
fn match_cone(rec: &RecessionCone, sigma: &WeightedFan) -> Option<Vec<usize>> {
    let mut idx: Vec<usize> = rec.rays.iter().map(|r| sigma.find_ray(r)).collect::<Option<_>>()?;
    idx.sort_unstable();
    sigma
        .cones()
        .iter()
        .any(|c| idx.iter().all(|&r| c.contains_ray(r)))
        .then_some(idx)
}

fn cell_cones(c: &WeightedVComplex, sigma: &WeightedFan) -> Result<Vec<Option<Vec<usize>>>, RecessionError> {
    c.cells
        .iter()
        .enumerate()
        .map(|(cell, (p, _))| {
            if p.ambient_dim() != sigma.ambient_dim() {
                return Err(RecessionError::AmbientMismatch { cell, expected: sigma.ambient_dim(), found: p.ambient_dim() });
            }
            let rec = recession_cone(p);
            if !rec.is_simplicial() {
                return Err(RecessionError::UnsupportedNonSimplicialRecession { cell });
            }
            Ok(match_cone(&rec, sigma))
        })
        .collect()
}

/// Every cell's recession cone is a cone (of any dimension) of `sigma`.
pub fn is_compatible(c: &WeightedVComplex, sigma: &WeightedFan) -> Result<bool, RecessionError> {
    Ok(cell_cones(c, sigma)?.iter().all(Option::is_some))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecessionFan {
    pub fan: WeightedFan,
    /// Cells whose recession cone has dimension below `p`; they contribute to no weight.
    pub lower_dimensional: Vec<usize>,
}

/// Weights `sigma`'s maximal cones by the summed weights of cells recessing onto them.
pub fn recession_fan(c: &WeightedVComplex, sigma: &WeightedFan) -> Result<RecessionFan, RecessionError> {
    if sigma.dim() != c.dim {
        return Err(RecessionError::DimensionMismatch { fan: sigma.dim(), complex: c.dim });
    }
    let matched = cell_cones(c, sigma)?;
    let mut weights = vec![Rat::zero(); sigma.cones().len()];
    let mut lower_dimensional = Vec::new();
    for (cell, m) in matched.into_iter().enumerate() {
        let rays = m.ok_or(RecessionError::NotCompatible { cell })?;
        if rays.len() < c.dim {
            lower_dimensional.push(cell);
            continue;
        }
        let ci = sigma.find_cone(&rays).expect("full-size match is a maximal cone");
        weights[ci] += &c.cells[cell].1;
    }
    let cones = sigma.cones().iter().zip(weights).map(|(cone, w)| WeightedCone::new(cone.rays().to_vec(), w)).collect();
    let rays = sigma.rays().iter().map(|r| r.coords().to_vec()).collect();
    let fan = if sigma.isolated_rays_allowed() {
        WeightedFan::with_isolated_rays(sigma.ambient_dim(), sigma.dim(), rays, cones)
    } else {
        WeightedFan::new(sigma.ambient_dim(), sigma.dim(), rays, cones)
    }
    .expect("same combinatorics as sigma");
    Ok(RecessionFan { fan, lower_dimensional })
}
