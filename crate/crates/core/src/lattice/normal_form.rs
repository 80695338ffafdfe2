//! Hermite and Smith normal forms over the integers.
//!
//! Both are computed by elementary unimodular operations while the same
//! operations are replayed on identity matrices, so the transforms come out
//! exactly. Pivot choices are fixed (smallest absolute value, lowest index)
//! so outputs are reproducible.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{Int, IntMatrix};

/// Row-style Hermite normal form `H = U A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermiteForm {
    pub h: IntMatrix,
    pub u: IntMatrix,
}

/// Smith normal form `S = U A V`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub s: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// Nonzero diagonal entries `d_1 | d_2 | ...`.
    pub fn invariant_factors(&self) -> Vec<Int> {
        (0..self.s.rows().min(self.s.cols()))
            .map(|i| self.s[(i, i)].clone())
            .take_while(|d| !d.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

fn add_row_multiple(m: &mut IntMatrix, dst: usize, src: usize, k: &Int) {
    if k.is_zero() {
        return;
    }
    for j in 0..m.cols() {
        let delta = &m[(src, j)] * k;
        m[(dst, j)] += delta;
    }
}

fn add_col_multiple(m: &mut IntMatrix, dst: usize, src: usize, k: &Int) {
    if k.is_zero() {
        return;
    }
    for i in 0..m.rows() {
        let delta = &m[(i, src)] * k;
        m[(i, dst)] += delta;
    }
}

fn negate_row(m: &mut IntMatrix, i: usize) {
    for j in 0..m.cols() {
        let x = -m[(i, j)].clone();
        m[(i, j)] = x;
    }
}

/// Row-style HNF: pivots strictly move right, are positive, and entries
/// above each pivot lie in `[0, pivot)`. Zero rows collect at the bottom.
pub fn hermite_normal_form(a: &IntMatrix) -> HermiteForm {
    let (m, n) = (a.rows(), a.cols());
    let mut h = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        loop {
            let pick = (r..m)
                .filter(|&i| !h[(i, c)].is_zero())
                .min_by(|&x, &y| h[(x, c)].abs().cmp(&h[(y, c)].abs()).then(x.cmp(&y)));
            let Some(p) = pick else { break };
            h.swap_rows(r, p);
            u.swap_rows(r, p);
            let mut done = true;
            for i in r + 1..m {
                if h[(i, c)].is_zero() {
                    continue;
                }
                let q = -h[(i, c)].div_floor(&h[(r, c)]);
                add_row_multiple(&mut h, i, r, &q);
                add_row_multiple(&mut u, i, r, &q);
                if !h[(i, c)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        if h[(r, c)].is_negative() {
            negate_row(&mut h, r);
            negate_row(&mut u, r);
        }
        for i in 0..r {
            let q = -h[(i, c)].div_floor(&h[(r, c)]);
            add_row_multiple(&mut h, i, r, &q);
            add_row_multiple(&mut u, i, r, &q);
        }
        r += 1;
    }
    HermiteForm { h, u }
}

/// Smith normal form with unimodular `U`, `V` such that `U A V = S`.
pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let (m, n) = (a.rows(), a.cols());
    let mut s = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    for t in 0..m.min(n) {
        'pivot: loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if s[(i, j)].is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| s[(i, j)].abs() < s[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break 'pivot };
            s.swap_rows(t, pi);
            u.swap_rows(t, pi);
            s.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..m {
                let q = -s[(i, t)].div_floor(&s[(t, t)]);
                add_row_multiple(&mut s, i, t, &q);
                add_row_multiple(&mut u, i, t, &q);
                clean &= s[(i, t)].is_zero();
            }
            for j in t + 1..n {
                let q = -s[(t, j)].div_floor(&s[(t, t)]);
                add_col_multiple(&mut s, j, t, &q);
                add_col_multiple(&mut v, j, t, &q);
                clean &= s[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            // Divisibility: fold an offending row into row t and go again.
            let offender = (t + 1..m)
                .find(|&i| (t + 1..n).any(|j| !s[(i, j)].is_multiple_of(&s[(t, t)])));
            match offender {
                Some(i) => {
                    add_row_multiple(&mut s, t, i, &Int::one());
                    add_row_multiple(&mut u, t, i, &Int::one());
                }
                None => break 'pivot,
            }
        }
        if s[(t, t)].is_negative() {
            negate_row(&mut s, t);
            negate_row(&mut u, t);
        }
    }
    SmithForm { s, u, v }
}

/// Inverse of a unimodular integer matrix.
pub fn unimodular_inverse(a: &IntMatrix) -> Option<IntMatrix> {
    let inv = a.to_rat().inverse()?;
    if inv.iter().any(|x| !x.is_integer()) {
        return None;
    }
    Some(inv.map(|x| x.to_integer()))
}
