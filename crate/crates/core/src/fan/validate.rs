use itertools::Itertools;
use num_traits::{Signed, Zero};

use super::WeightedFan;
use crate::lattice::{rank_of, to_rat_vector, Int, Rat, RatMatrix};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    /// Both cones have the same ray set.
    Duplicate,
    /// The intersection contains a point outside the cone on the shared rays.
    Overlap { witness: Vec<Rat> },
    /// A ray that belongs to neither cone lies inside the first cone.
    RayInside { ray: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConePairViolation {
    pub first: usize,
    pub second: usize,
    pub kind: ViolationKind,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidityReport {
    pub non_simplicial: Vec<usize>,
    pub violations: Vec<ConePairViolation>,
}

impl ValidityReport {
    pub fn is_valid(&self) -> bool {
        self.non_simplicial.is_empty() && self.violations.is_empty()
    }
}

/// Checks that the cones are simplicial and meet pairwise in common faces.
pub fn validate_fan(fan: &WeightedFan) -> ValidityReport {
    let mut report = ValidityReport::default();
    for (ci, cone) in fan.cones().iter().enumerate() {
        let gens: Vec<&[Int]> = cone.rays().iter().map(|&r| fan.ray(r)).collect();
        if rank_of(&gens) != cone.rays().len() {
            report.non_simplicial.push(ci);
        }
    }
    let cones = fan.cones();
    for a in 0..cones.len() {
        for b in a + 1..cones.len() {
            if cones[a].rays() == cones[b].rays() {
                report.violations.push(ConePairViolation { first: a, second: b, kind: ViolationKind::Duplicate });
                continue;
            }
            if let Some(witness) = overlap_witness(fan, cones[a].rays(), cones[b].rays()) {
                report.violations.push(ConePairViolation {
                    first: a,
                    second: b,
                    kind: ViolationKind::Overlap { witness },
                });
            }
        }
    }
    // Rays outside every cone must not sit inside one.
    let isolated: Vec<usize> = (0..fan.rays().len())
        .filter(|&r| !cones.iter().any(|c| c.contains_ray(r)))
        .collect();
    for &r in &isolated {
        for (ci, cone) in cones.iter().enumerate() {
            if cone_coefficients(fan, cone.rays(), &to_rat_vector(fan.ray(r)))
                .is_some_and(|coef| coef.iter().all(|x| !x.is_negative()))
            {
                report.violations.push(ConePairViolation {
                    first: ci,
                    second: ci,
                    kind: ViolationKind::RayInside { ray: r },
                });
            }
        }
    }
    report
}

/// Coefficients of `x` on the (independent) generators, if `x` is in their span.
pub(crate) fn cone_coefficients(fan: &WeightedFan, rays: &[usize], x: &[Rat]) -> Option<Vec<Rat>> {
    let gens = RatMatrix::from_fn(fan.ambient_dim(), rays.len(), |i, j| Rat::from_integer(fan.ray(rays[j])[i].clone()));
    gens.solve_unique(x)
}

/// Finds a point of `cone(a) ∩ cone(b)` outside `cone(a ∩ b)`.
///
/// Points of the intersection are pairs of coefficient vectors `(s, t) >= 0`
/// with `sum s_i a_i = sum t_j b_j`, i.e. the nonnegative part of a linear
/// subspace. That cone is pointed, so it is enough to test its extreme rays,
/// which are enumerated exactly: an extreme ray is cut out by `d - 1`
/// independent coordinate equations inside the `d`-dimensional subspace.
fn overlap_witness(fan: &WeightedFan, a: &[usize], b: &[usize]) -> Option<Vec<Rat>> {
    let n = fan.ambient_dim();
    let m = a.len() + b.len();
    let system = RatMatrix::from_fn(n, m, |i, j| {
        if j < a.len() {
            Rat::from_integer(fan.ray(a[j])[i].clone())
        } else {
            -Rat::from_integer(fan.ray(b[j - a.len()])[i].clone())
        }
    });
    let basis = system.nullspace();
    let d = basis.len();
    if d == 0 {
        return None;
    }
    // m x d matrix whose columns span the solution subspace.
    let z = RatMatrix::from_fn(m, d, |i, k| basis[k][i].clone());
    let allowed: Vec<bool> = a
        .iter()
        .map(|r| b.contains(r))
        .chain(b.iter().map(|r| a.contains(r)))
        .collect();
    for tight in (0..m).combinations(d - 1) {
        let sub = z.select(&tight, &(0..d).collect::<Vec<_>>());
        let line = sub.nullspace();
        if line.len() != 1 {
            continue;
        }
        let mut point = z.mul_vec(&line[0]);
        if point.iter().all(|x| !x.is_positive()) {
            point.iter_mut().for_each(|x| *x = -x.clone());
        }
        if point.iter().any(Signed::is_negative) || point.iter().all(Zero::is_zero) {
            continue;
        }
        let escapes = point.iter().zip(&allowed).any(|(x, &ok)| !ok && !x.is_zero());
        if escapes {
            let coeffs = &point[..a.len()];
            let witness = (0..n)
                .map(|i| {
                    a.iter()
                        .zip(coeffs)
                        .fold(Rat::zero(), |acc, (&r, c)| acc + c * Rat::from_integer(fan.ray(r)[i].clone()))
                })
                .collect();
            return Some(witness);
        }
    }
    None
}
