//! Shared generators and oracles. Oracles here deliberately avoid the
//! library's own algorithms where a direct computation exists.

#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tropicert::fan::{WeightedCone, WeightedFan};
use tropicert::lattice::{Int, IntMatrix, IntVector, Rat, RatMatrix};
use tropicert::paper::paper_k44;
use tropicert::surgery::{op_minus, op_plus, SurgeryKind, SurgeryStep};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_rat(rng: &mut impl Rng, bound: i64, max_den: i64) -> Rat {
    Rat::new(rng.gen_range(-bound..=bound).into(), rng.gen_range(1..=max_den).into())
}

pub fn random_point(rng: &mut impl Rng, len: usize) -> Vec<Rat> {
    (0..len).map(|_| random_rat(rng, 9, 5)).collect()
}

pub fn random_symmetric(rng: &mut impl Rng, n: usize, bound: i64, max_den: i64) -> RatMatrix {
    let mut s = RatMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let x = random_rat(rng, bound, max_den);
            s[(i, j)] = x.clone();
            s[(j, i)] = x;
        }
    }
    s
}

/// Low-rank symmetric matrix `B^T D B`, which exercises the zero-eigenvalue path.
pub fn random_degenerate_symmetric(rng: &mut impl Rng, n: usize) -> RatMatrix {
    let r = rng.gen_range(0..=n);
    let b = RatMatrix::from_fn(r, n, |_, _| Rat::from_integer(rng.gen_range(-3..=3).into()));
    let d = RatMatrix::from_fn(r, r, |i, j| if i == j { Rat::from_integer(rng.gen_range(-2..=2).into()) } else { Rat::from_integer(0.into()) });
    b.transpose().mul(&d).mul(&b)
}

/// Product of random elementary integer matrices.
pub fn random_unimodular(rng: &mut impl Rng, n: usize, steps: usize) -> IntMatrix {
    let mut a = IntMatrix::identity(n);
    if n < 2 {
        return a;
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let c = Int::from(rng.gen_range(-2..=2));
        for k in 0..n {
            let add = &a[(j, k)] * &c;
            a[(i, k)] += add;
        }
        if rng.gen_bool(0.2) {
            a.swap_rows(i, j);
        }
    }
    a
}

pub fn random_invertible_rat(rng: &mut impl Rng, n: usize) -> RatMatrix {
    loop {
        let a = RatMatrix::from_fn(n, n, |_, _| random_rat(rng, 5, 3));
        if !num_traits::Zero::is_zero(&a.det().unwrap()) {
            return a;
        }
    }
}

/// Surgery steps that apply to `fan`, the new fan each produces, in random order.
pub fn applicable(fan: &WeightedFan, kind: SurgeryKind, rng: &mut impl Rng) -> Option<(SurgeryStep, WeightedFan)> {
    let mut edges: Vec<(usize, usize)> = fan.nonzero_cones().map(|(_, c)| (c.rays()[0], c.rays()[1])).collect();
    edges.shuffle(rng);
    edges.into_iter().find_map(|edge| {
        let result = match kind {
            SurgeryKind::Plus => op_plus(fan, edge.0, edge.1),
            SurgeryKind::Minus => op_minus(fan, edge.0, edge.1),
        };
        result.ok().map(|f| (SurgeryStep { kind, edge }, f))
    })
}

/// Random mix of plus and minus surgeries starting from the K44 fan.
pub fn random_surgery_fan(rng: &mut impl Rng, steps: usize) -> WeightedFan {
    let mut fan = paper_k44();
    for _ in 0..steps {
        let kind = if rng.gen_bool(0.6) { SurgeryKind::Plus } else { SurgeryKind::Minus };
        if let Some((_, next)) = applicable(&fan, kind, rng) {
            fan = next;
        }
    }
    fan
}

/// Image of `fan` under `x -> A x` for unimodular `A`.
pub fn transformed(fan: &WeightedFan, a: &IntMatrix) -> WeightedFan {
    let rays: Vec<IntVector> = fan.rays().iter().map(|r| a.mul_vec(r.coords())).collect();
    WeightedFan::new(fan.ambient_dim(), fan.dim(), rays, fan.cones().to_vec()).expect("unimodular image is a fan")
}

pub fn with_weight(fan: &WeightedFan, cone: usize, w: Rat) -> WeightedFan {
    let mut cones = fan.cones().to_vec();
    cones[cone] = WeightedCone::new(cones[cone].rays().to_vec(), w);
    WeightedFan::new(
        fan.ambient_dim(),
        fan.dim(),
        fan.rays().iter().map(|r| r.coords().to_vec()).collect(),
        cones,
    )
    .unwrap()
}

/// Direct `x^T L x` from the edge list and the coefficients `d`.
pub fn quadratic_oracle(d: &[Rat], edges: &[(usize, usize, Rat)], x: &[Rat]) -> Rat {
    let mut q = Rat::from_integer(0.into());
    for (i, di) in d.iter().enumerate() {
        q += di * &x[i] * &x[i];
    }
    for (i, j, w) in edges {
        q -= Rat::from_integer(2.into()) * w * &x[*i] * &x[*j];
    }
    q
}

/// Reads a whitespace-separated integer matrix.
pub fn read_matrix(text: &str) -> RatMatrix {
    let rows: Vec<Vec<Rat>> = text
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.split_whitespace().map(|t| Rat::from_integer(t.parse::<Int>().unwrap())).collect())
        .collect();
    RatMatrix::from_rows(rows).unwrap()
}

/// Determinant by cofactor expansion along the first row.
pub fn cofactor_det(a: &[Vec<Rat>]) -> Rat {
    let n = a.len();
    if n == 0 {
        return Rat::from_integer(1.into());
    }
    let mut total = Rat::from_integer(0.into());
    for j in 0..n {
        if num_traits::Zero::is_zero(&a[0][j]) {
            continue;
        }
        let minor: Vec<Vec<Rat>> = a[1..].iter().map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, x)| x.clone()).collect()).collect();
        let term = &a[0][j] * cofactor_det(&minor);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}
