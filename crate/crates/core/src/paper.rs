//! The K_{4,4} construction: a balanced 2-dimensional fan in R^4 whose tilde
//! surgery has a Laplacian with three negative eigenvalues.

use crate::fan::{WeightedCone, WeightedFan};
use crate::lattice::{int_vector, IntMatrix, IntVector, Rat};

/// Rows are `f_1, ..., f_4` in the standard basis `e_1, ..., e_4`.
pub const K44_MATRIX: [[i64; 4]; 4] = [[0, 1, 1, 1], [1, 0, -1, 1], [1, 1, 0, -1], [1, -1, 1, 0]];

pub fn k44_matrix() -> IntMatrix {
    IntMatrix::from_fn(4, 4, |i, j| K44_MATRIX[i][j].into())
}

fn unit(j: usize) -> IntVector {
    let mut v = [0i64; 4];
    v[j] = 1;
    int_vector(&v)
}

/// Rays `e_1..e_4` (indices 0..3) then `f_1..f_4` (indices 4..7). The cone
/// `cone(e_j, f_i)` has weight `M_ij`; the four with `M_ii = 0` are kept.
pub fn paper_k44() -> WeightedFan {
    let mut rays: Vec<IntVector> = (0..4).map(unit).collect();
    rays.extend(K44_MATRIX.iter().map(|row| int_vector(row)));
    let mut cones = Vec::with_capacity(16);
    for j in 0..4 {
        for i in 0..4 {
            cones.push(WeightedCone::new(vec![j, 4 + i], Rat::from_integer(K44_MATRIX[i][j].into())));
        }
    }
    WeightedFan::new(4, 2, rays, cones).expect("K44 construction is a well-formed fan")
}

/// Vertices in the order `+e1..+e4, +f1..+f4, -e2, -e3, -e4, -f2, -f3, -f4`.
pub fn paper_vertex_vectors() -> Vec<IntVector> {
    let e: Vec<IntVector> = (0..4).map(unit).collect();
    let f: Vec<IntVector> = K44_MATRIX.iter().map(|row| int_vector(row)).collect();
    let neg = |v: &IntVector| v.iter().map(|x| -x).collect::<IntVector>();
    let mut out = Vec::with_capacity(14);
    out.extend(e.iter().cloned());
    out.extend(f.iter().cloned());
    out.extend(e[1..].iter().map(neg));
    out.extend(f[1..].iter().map(neg));
    out
}

/// Ray indices of `fan` in the paper's vertex order, if every vector is a ray.
pub fn paper_vertex_order(fan: &WeightedFan) -> Option<Vec<usize>> {
    let vectors = paper_vertex_vectors();
    if vectors.len() != fan.rays().len() {
        return None;
    }
    vectors.iter().map(|v| fan.find_ray(v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::{is_balanced, is_unimodular, validate_fan};
    use crate::lattice::Int;

    #[test]
    fn k44_is_a_balanced_unimodular_fan() {
        let fan = paper_k44();
        assert_eq!(fan.cones().len(), 16);
        assert!(validate_fan(&fan).is_valid());
        assert!(is_balanced(&fan).is_balanced());
        assert!(is_unimodular(&fan));
        assert_eq!(k44_matrix().det().unwrap(), Int::from(-9));
    }

    #[test]
    fn vertex_order_needs_fourteen_rays() {
        assert_eq!(paper_vertex_order(&paper_k44()), None);
    }
}
