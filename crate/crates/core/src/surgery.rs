//! The edge surgeries `F -> F+_ij` and `F -> F-_ij`, and the tilde construction.

use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::fan::{is_balanced, is_nondegenerate, is_unimodular, FanError, WeightedCone, WeightedFan};
use crate::graph::{fan_laplacian, GraphError};
use crate::inertia::{inertia_congruence, InertiaError, Signature};
use crate::lattice::{content, minors_2x2, rank_of, Int, IntMatrix, IntVector, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SurgeryKind {
    Plus,
    Minus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SurgeryStep {
    pub kind: SurgeryKind,
    pub edge: (usize, usize),
}

/// The tilde hypothesis that failed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Hypothesis {
    Balanced,
    Unimodular,
    NonDegenerate,
    /// Two negative edges share a vertex.
    Disjoint { first: (usize, usize), second: (usize, usize) },
    /// A negative edge is not in general position in the input fan.
    GeneralPositionInInput { edge: (usize, usize) },
    /// A negative edge lost general position after earlier surgeries.
    GeneralPositionAfterSurgery { edge: (usize, usize), after: usize },
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Hypothesis::Balanced => f.write_str("fan is not balanced"),
            Hypothesis::Unimodular => f.write_str("fan is not unimodular"),
            Hypothesis::NonDegenerate => f.write_str("fan is degenerate"),
            Hypothesis::Disjoint { first, second } => {
                write!(f, "negative edges {first:?} and {second:?} share a vertex")
            }
            Hypothesis::GeneralPositionInInput { edge } => {
                write!(f, "negative edge {edge:?} is not in general position in the input fan")
            }
            Hypothesis::GeneralPositionAfterSurgery { edge, after } => write!(
                f,
                "negative edge {edge:?} is not in general position after {after} earlier surgeries"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SurgeryError {
    #[error("surgery needs a 2-dimensional fan, got dimension {found}")]
    WrongDimension { found: usize },
    #[error("no nonzero-weight cone on rays {i} and {j}")]
    NoSuchEdge { i: usize, j: usize },
    #[error("cone on rays {i} and {j} is not unimodular")]
    NotUnimodularEdge { i: usize, j: usize },
    #[error("edge ({i}, {j}) is not in general position")]
    NotGeneralPosition { i: usize, j: usize },
    #[error("tilde precondition failed: {0}")]
    PreconditionFailed(Hypothesis),
    #[error("point has {found} coordinates, expected {expected}")]
    PointLength { expected: usize, found: usize },
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Inertia(#[from] InertiaError),
}

fn require_dim2(fan: &WeightedFan) -> Result<(), SurgeryError> {
    if fan.dim() != 2 {
        return Err(SurgeryError::WrongDimension { found: fan.dim() });
    }
    Ok(())
}

/// Index of the nonzero-weight cone on `{i, j}`.
pub fn find_edge(fan: &WeightedFan, i: usize, j: usize) -> Result<usize, SurgeryError> {
    require_dim2(fan)?;
    fan.find_cone(&[i, j])
        .filter(|&c| !fan.cones()[c].weight.is_zero())
        .ok_or(SurgeryError::NoSuchEdge { i, j })
}

fn sum(a: &[Int], b: &[Int]) -> IntVector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn neg(a: &[Int]) -> IntVector {
    a.iter().map(|x| -x).collect()
}

fn rebuild(fan: &WeightedFan, removed: usize, new_rays: Vec<IntVector>, new_cones: Vec<WeightedCone>) -> Result<WeightedFan, SurgeryError> {
    let mut rays: Vec<IntVector> = fan.rays().iter().map(|r| r.coords().to_vec()).collect();
    rays.extend(new_rays);
    let mut cones: Vec<WeightedCone> = fan
        .cones()
        .iter()
        .enumerate()
        .filter(|&(ci, _)| ci != removed)
        .map(|(_, c)| c.clone())
        .collect();
    cones.extend(new_cones);
    let out = if fan.isolated_rays_allowed() {
        WeightedFan::with_isolated_rays(fan.ambient_dim(), 2, rays, cones)
    } else {
        WeightedFan::new(fan.ambient_dim(), 2, rays, cones)
    };
    Ok(out?)
}

/// Subdivides `cone(u_i, u_j)` at `n = u_i + u_j`, appended as the last ray.
pub fn op_plus(fan: &WeightedFan, i: usize, j: usize) -> Result<WeightedFan, SurgeryError> {
    let ci = find_edge(fan, i, j)?;
    let (ui, uj) = (fan.ray(i), fan.ray(j));
    let pair = IntMatrix::from_rows(vec![ui.to_vec(), uj.to_vec()]).expect("rays share a dimension");
    let minors = minors_2x2(&pair).expect("2 x n with n >= 2");
    if !content(&minors).is_one() {
        return Err(SurgeryError::NotUnimodularEdge { i, j });
    }
    let w = fan.cones()[ci].weight.clone();
    let n = fan.rays().len();
    rebuild(
        fan,
        ci,
        vec![sum(ui, uj)],
        vec![WeightedCone::new(vec![i, n], w.clone()), WeightedCone::new(vec![j, n], w)],
    )
}

/// Spans of edge `(i, j)` and every other edge meet only in shared endpoints.
pub fn is_general_position(fan: &WeightedFan, i: usize, j: usize) -> Result<bool, SurgeryError> {
    let ci = find_edge(fan, i, j)?;
    let own = [fan.ray(i), fan.ray(j)];
    Ok(fan.nonzero_cones().filter(|&(k, _)| k != ci).all(|(_, c)| {
        let shared = c.rays().iter().filter(|&&r| r == i || r == j).count();
        let all = [own[0], own[1], fan.ray(c.rays()[0]), fan.ray(c.rays()[1])];
        // dim(span A ∩ span B) = 2 + 2 - dim(span A + span B)
        4 - rank_of(&all) == shared
    }))
}

/// Replaces `cone(u_i, u_j)` by three cones through `-u_i`, `-u_j` (appended
/// in that order), each with the negated weight.
pub fn op_minus(fan: &WeightedFan, i: usize, j: usize) -> Result<WeightedFan, SurgeryError> {
    let ci = find_edge(fan, i, j)?;
    if !is_general_position(fan, i, j)? {
        return Err(SurgeryError::NotGeneralPosition { i, j });
    }
    let w = -fan.cones()[ci].weight.clone();
    let (ni, nj) = (fan.rays().len(), fan.rays().len() + 1);
    rebuild(
        fan,
        ci,
        vec![neg(fan.ray(i)), neg(fan.ray(j))],
        vec![
            WeightedCone::new(vec![ni, nj], w.clone()),
            WeightedCone::new(vec![ni, j], w.clone()),
            WeightedCone::new(vec![i, nj], w),
        ],
    )
}

pub fn apply_step(fan: &WeightedFan, step: SurgeryStep) -> Result<WeightedFan, SurgeryError> {
    let (i, j) = step.edge;
    match step.kind {
        SurgeryKind::Plus => op_plus(fan, i, j),
        SurgeryKind::Minus => op_minus(fan, i, j),
    }
}

/// Ray pairs of negative-weight 2-cones, sorted.
pub fn negative_edges(fan: &WeightedFan) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = fan
        .cones()
        .iter()
        .filter(|c| c.weight.is_negative())
        .map(|c| (c.rays()[0], c.rays()[1]))
        .collect();
    out.sort_unstable();
    out
}

/// Applies `op_minus` to every negative edge in sorted order.
pub fn tilde(fan: &WeightedFan) -> Result<WeightedFan, SurgeryError> {
    require_dim2(fan)?;
    let fail = |h| Err(SurgeryError::PreconditionFailed(h));
    if !is_balanced(fan).is_balanced() {
        return fail(Hypothesis::Balanced);
    }
    if !is_unimodular(fan) {
        return fail(Hypothesis::Unimodular);
    }
    if !is_nondegenerate(fan) {
        return fail(Hypothesis::NonDegenerate);
    }
    let edges = negative_edges(fan);
    for (a, &e) in edges.iter().enumerate() {
        for &f in &edges[a + 1..] {
            if e.0 == f.0 || e.0 == f.1 || e.1 == f.0 || e.1 == f.1 {
                return fail(Hypothesis::Disjoint { first: e, second: f });
            }
        }
        if !is_general_position(fan, e.0, e.1)? {
            return fail(Hypothesis::GeneralPositionInInput { edge: e });
        }
    }
    let mut current = fan.clone();
    for (k, &(i, j)) in edges.iter().enumerate() {
        if !is_general_position(&current, i, j)? {
            return fail(Hypothesis::GeneralPositionAfterSurgery { edge: (i, j), after: k });
        }
        current = op_minus(&current, i, j)?;
    }
    Ok(current)
}

/// Signature of `L_{G(F)}` by congruence.
pub fn fan_signature(fan: &WeightedFan) -> Result<Signature, SurgeryError> {
    let (_, lap) = fan_laplacian(fan)?;
    Ok(inertia_congruence(lap.matrix())?)
}

fn delta(before: &WeightedFan, after: &WeightedFan, point: &[Rat]) -> Result<Rat, SurgeryError> {
    let big = after.rays().len();
    if point.len() != big {
        return Err(SurgeryError::PointLength { expected: big, found: point.len() });
    }
    let (_, l_after) = fan_laplacian(after)?;
    let (_, l_before) = fan_laplacian(before)?;
    Ok(l_after.quadratic_form(point) - l_before.quadratic_form(&point[..before.rays().len()]))
}

/// `Q_{G(F+_ij)}(point) - Q_{G(F)}(point restricted to the old vertices)`.
pub fn quadratic_delta_plus(fan: &WeightedFan, i: usize, j: usize, point: &[Rat]) -> Result<Rat, SurgeryError> {
    delta(fan, &op_plus(fan, i, j)?, point)
}

/// As [`quadratic_delta_plus`], for `F-_ij`.
pub fn quadratic_delta_minus(fan: &WeightedFan, i: usize, j: usize, point: &[Rat]) -> Result<Rat, SurgeryError> {
    delta(fan, &op_minus(fan, i, j)?, point)
}

/// `w (y - x1 - x2)^2`.
pub fn plus_closed_form(w: &Rat, x1: &Rat, x2: &Rat, y: &Rat) -> Rat {
    let t = y - x1 - x2;
    w * &t * &t
}

/// `w (y1 + x1)(y2 + x2)`, as printed for the minus surgery.
pub fn minus_closed_form(w: &Rat, x1: &Rat, x2: &Rat, y1: &Rat, y2: &Rat) -> Rat {
    w * (y1 + x1) * (y2 + x2)
}

/// What `Q = x^T L x` actually gives for the minus surgery: twice [`minus_closed_form`].
pub fn minus_closed_form_derived(w: &Rat, x1: &Rat, x2: &Rat, y1: &Rat, y2: &Rat) -> Rat {
    minus_closed_form(w, x1, x2, y1, y2) * Rat::from_integer(2.into())
}
