//! Edge-weighted geometric graphs, vertex balancing, and the tropical Laplacian.

use num_traits::Zero;
use thiserror::Error;

use crate::fan::WeightedFan;
use crate::lattice::{Int, IntVector, Rat, RatMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph of a fan needs a 2-dimensional fan, got dimension {found}")]
    WrongDimension { found: usize },
    #[error("vertex {index} is zero")]
    ZeroVertex { index: usize },
    #[error("vertices {first} and {second} coincide")]
    DuplicateVertex { first: usize, second: usize },
    #[error("vertex {index} has {found} coordinates, expected {expected}")]
    VertexDimension { index: usize, expected: usize, found: usize },
    #[error("edge ({i}, {j}) refers to a missing vertex")]
    VertexOutOfRange { i: usize, j: usize },
    #[error("self-loop at vertex {vertex}")]
    SelfLoop { vertex: usize },
    #[error("edge ({i}, {j}) appears twice")]
    DuplicateEdge { i: usize, j: usize },
    #[error("not balanced at vertex {vertex}: residual {}", fmt_vec(.residual))]
    NotBalanced { vertex: usize, residual: Vec<Rat> },
    #[error("vertex order is not a permutation of 0..{count}")]
    BadOrder { count: usize },
    #[error("Laplacian does not match the graph at ({row}, {col})")]
    Mismatch { row: usize, col: usize },
}

fn fmt_vec(v: &[Rat]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(","))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub weight: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeomGraph {
    vertices: Vec<IntVector>,
    edges: Vec<Edge>,
}

impl GeomGraph {
    /// Edge endpoints are normalized so that `i < j`.
    pub fn new(vertices: Vec<IntVector>, edges: Vec<Edge>) -> Result<Self, GraphError> {
        let dim = vertices.first().map_or(0, Vec::len);
        for (index, v) in vertices.iter().enumerate() {
            if v.len() != dim {
                return Err(GraphError::VertexDimension { index, expected: dim, found: v.len() });
            }
            if v.iter().all(Zero::is_zero) {
                return Err(GraphError::ZeroVertex { index });
            }
            if let Some(first) = vertices[..index].iter().position(|w| w == v) {
                return Err(GraphError::DuplicateVertex { first, second: index });
            }
        }
        let mut normalized: Vec<Edge> = Vec::with_capacity(edges.len());
        for e in edges {
            let (i, j) = (e.i.min(e.j), e.i.max(e.j));
            if j >= vertices.len() {
                return Err(GraphError::VertexOutOfRange { i, j });
            }
            if i == j {
                return Err(GraphError::SelfLoop { vertex: i });
            }
            if normalized.iter().any(|f| f.i == i && f.j == j) {
                return Err(GraphError::DuplicateEdge { i, j });
            }
            normalized.push(Edge { i, j, weight: e.weight });
        }
        Ok(GeomGraph { vertices, edges: normalized })
    }

    pub fn vertices(&self) -> &[IntVector] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn ambient_dim(&self) -> usize {
        self.vertices.first().map_or(0, Vec::len)
    }

    /// `(neighbor, weight)` pairs of vertex `v`, in edge order.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = (usize, &Rat)> {
        self.edges.iter().filter_map(move |e| {
            if e.i == v {
                Some((e.j, &e.weight))
            } else if e.j == v {
                Some((e.i, &e.weight))
            } else {
                None
            }
        })
    }

    pub fn isolated_vertices(&self) -> Vec<usize> {
        (0..self.vertices.len())
            .filter(|&v| self.neighbors(v).next().is_none())
            .collect()
    }
}

/// Vertices are the fan's rays; edges are its 2-cones of nonzero weight.
pub fn graph_of_fan(fan: &WeightedFan) -> Result<GeomGraph, GraphError> {
    if fan.dim() != 2 {
        return Err(GraphError::WrongDimension { found: fan.dim() });
    }
    let vertices = fan.rays().iter().map(|r| r.coords().to_vec()).collect();
    let edges = fan
        .nonzero_cones()
        .map(|(_, c)| Edge { i: c.rays()[0], j: c.rays()[1], weight: c.weight.clone() })
        .collect();
    GeomGraph::new(vertices, edges)
}

/// A graph together with the scalars `d_i` with `d_i u_i = sum_j w_ij u_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BalancedGraph {
    graph: GeomGraph,
    d: Vec<Rat>,
}

impl BalancedGraph {
    pub fn graph(&self) -> &GeomGraph {
        &self.graph
    }

    pub fn d(&self) -> &[Rat] {
        &self.d
    }
}

fn to_rat(x: &Int) -> Rat {
    Rat::from_integer(x.clone())
}

/// Solves the balancing relation at every vertex. The `d_i` are unique since
/// vertices are nonzero.
pub fn balance_coefficients(graph: &GeomGraph) -> Result<BalancedGraph, GraphError> {
    let n = graph.ambient_dim();
    let mut d = Vec::with_capacity(graph.vertices.len());
    for (v, u) in graph.vertices.iter().enumerate() {
        let mut s = vec![Rat::zero(); n];
        for (nb, w) in graph.neighbors(v) {
            for (acc, x) in s.iter_mut().zip(&graph.vertices[nb]) {
                *acc += w * to_rat(x);
            }
        }
        let k = u.iter().position(|x| !x.is_zero()).expect("vertices are nonzero");
        let dv = &s[k] / to_rat(&u[k]);
        let residual: Vec<Rat> = s.iter().zip(u).map(|(si, ui)| si - &dv * to_rat(ui)).collect();
        if !residual.iter().all(Zero::is_zero) {
            return Err(GraphError::NotBalanced { vertex: v, residual });
        }
        d.push(dv);
    }
    Ok(BalancedGraph { graph: graph.clone(), d })
}

/// Symmetric matrix with rows and columns listed in `order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TropicalLaplacian {
    /// `order[k]` is the vertex in row and column `k`.
    order: Vec<usize>,
    matrix: RatMatrix,
}

impl TropicalLaplacian {
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> RatMatrix {
        self.matrix
    }

    /// `x^T L x`, with `x` indexed by position in the order.
    pub fn quadratic_form(&self, x: &[Rat]) -> Rat {
        let lx = self.matrix.mul_vec(x);
        x.iter().zip(&lx).fold(Rat::zero(), |acc, (a, b)| acc + a * b)
    }

    /// Checks `L U = 0` where the rows of `U` are the vertex coordinates in order.
    pub fn annihilates_vertices(&self, graph: &GeomGraph) -> bool {
        let u = RatMatrix::from_fn(self.order.len(), graph.ambient_dim(), |k, c| {
            to_rat(&graph.vertices[self.order[k]][c])
        });
        self.matrix.mul(&u).is_zero()
    }
}

pub fn identity_order(count: usize) -> Vec<usize> {
    (0..count).collect()
}

fn check_order(order: &[usize], count: usize) -> Result<(), GraphError> {
    let mut seen = vec![false; count];
    if order.len() != count {
        return Err(GraphError::BadOrder { count });
    }
    for &v in order {
        if v >= count || seen[v] {
            return Err(GraphError::BadOrder { count });
        }
        seen[v] = true;
    }
    Ok(())
}

pub fn tropical_laplacian(b: &BalancedGraph, order: &[usize]) -> Result<TropicalLaplacian, GraphError> {
    let count = b.graph.vertices.len();
    check_order(order, count)?;
    let mut position = vec![0; count];
    for (k, &v) in order.iter().enumerate() {
        position[v] = k;
    }
    let mut matrix = RatMatrix::zeros(count, count);
    for (v, dv) in b.d.iter().enumerate() {
        matrix[(position[v], position[v])] = dv.clone();
    }
    for e in &b.graph.edges {
        let (a, c) = (position[e.i], position[e.j]);
        matrix[(a, c)] = -e.weight.clone();
        matrix[(c, a)] = -e.weight.clone();
    }
    Ok(TropicalLaplacian { order: order.to_vec(), matrix })
}

/// Laplacian of `G(F)` in ray-index order.
pub fn fan_laplacian(fan: &WeightedFan) -> Result<(BalancedGraph, TropicalLaplacian), GraphError> {
    let balanced = balance_coefficients(&graph_of_fan(fan)?)?;
    let lap = tropical_laplacian(&balanced, &identity_order(fan.rays().len()))?;
    Ok((balanced, lap))
}

/// Splits `L_G = L(G) - D(G)` into the combinatorial Laplacian `L(G)` and the
/// diagonal geometric part `D(G)`, both in the order of `lap`.
pub fn split_parts(lap: &TropicalLaplacian, b: &BalancedGraph) -> Result<(RatMatrix, RatMatrix), GraphError> {
    let expected = tropical_laplacian(b, &lap.order)?;
    let count = lap.order.len();
    for r in 0..count {
        for c in 0..count {
            if expected.matrix[(r, c)] != lap.matrix[(r, c)] {
                return Err(GraphError::Mismatch { row: r, col: c });
            }
        }
    }
    let mut combinatorial = lap.matrix.clone();
    let mut geometric = RatMatrix::zeros(count, count);
    for (k, &v) in lap.order.iter().enumerate() {
        let degree = b.graph.neighbors(v).fold(Rat::zero(), |acc, (_, w)| acc + w);
        geometric[(k, k)] = &degree - &b.d[v];
        combinatorial[(k, k)] = degree;
    }
    Ok((combinatorial, geometric))
}
