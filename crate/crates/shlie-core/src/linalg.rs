//! Dense exact-rational matrices: Gaussian elimination with a
//! smallest-entry pivot heuristic, rank, kernel bases, and linear solving
//! with inconsistency certificates.

use crate::scalar::{pivot_magnitude, rat, Rat};
use num_traits::Zero;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Rat>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, rat(1));
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> &Rat {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rat) {
        self.data[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let cur = out.get(i, j).clone();
                        out.set(i, j, cur + a * b);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = Rat::zero();
                for j in 0..self.cols {
                    let a = self.get(i, j);
                    if !a.is_zero() && !v[j].is_zero() {
                        acc = acc + a * &v[j];
                    }
                }
                acc
            })
            .collect()
    }
}

/// Reduced row echelon form together with the pivot columns. Pivot rows are
/// chosen by the smallest `|numerator·denominator|` among candidates, ties
/// broken by row order, which keeps intermediate entries small and the
/// result deterministic.
pub struct Echelon {
    pub mat: Matrix,
    pub pivots: Vec<usize>,
    /// Row-operation transform: `transform · original = mat`.
    pub transform: Matrix,
}

pub fn rref(input: &Matrix) -> Echelon {
    let mut m = input.clone();
    let mut t = Matrix::identity(input.rows);
    let mut pivots = Vec::new();
    let mut row = 0usize;
    for col in 0..m.cols {
        if row >= m.rows {
            break;
        }
        // pick the pivot with the smallest magnitude product
        let mut best: Option<(usize, num_bigint::BigInt)> = None;
        for r in row..m.rows {
            let v = m.get(r, col);
            if v.is_zero() {
                continue;
            }
            let mag = pivot_magnitude(v);
            match &best {
                None => best = Some((r, mag)),
                Some((_, bm)) if mag < *bm => best = Some((r, mag)),
                _ => {}
            }
        }
        let Some((prow, _)) = best else { continue };
        if prow != row {
            for c in 0..m.cols {
                let a = m.get(row, c).clone();
                let b = m.get(prow, c).clone();
                m.set(row, c, b);
                m.set(prow, c, a);
            }
            for c in 0..t.cols {
                let a = t.get(row, c).clone();
                let b = t.get(prow, c).clone();
                t.set(row, c, b);
                t.set(prow, c, a);
            }
        }
        let inv = rat(1) / m.get(row, col).clone();
        for c in 0..m.cols {
            let v = m.get(row, c).clone();
            m.set(row, c, v * &inv);
        }
        for c in 0..t.cols {
            let v = t.get(row, c).clone();
            t.set(row, c, v * &inv);
        }
        for r in 0..m.rows {
            if r == row || m.get(r, col).is_zero() {
                continue;
            }
            let factor = m.get(r, col).clone();
            for c in 0..m.cols {
                let v = m.get(r, c).clone() - &factor * m.get(row, c);
                m.set(r, c, v);
            }
            for c in 0..t.cols {
                let v = t.get(r, c).clone() - &factor * t.get(row, c);
                t.set(r, c, v);
            }
        }
        pivots.push(col);
        row += 1;
    }
    Echelon {
        mat: m,
        pivots,
        transform: t,
    }
}

pub fn rank(m: &Matrix) -> usize {
    rref(m).pivots.len()
}

/// Basis of the right kernel, from the reduced echelon form: one vector per
/// free column, deterministic order.
pub fn kernel_basis(m: &Matrix) -> Vec<Vec<Rat>> {
    let ech = rref(m);
    let pivot_set: std::collections::BTreeSet<usize> = ech.pivots.iter().copied().collect();
    let mut out = Vec::new();
    for free in 0..m.cols {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![Rat::zero(); m.cols];
        v[free] = rat(1);
        for (prow, &pcol) in ech.pivots.iter().enumerate() {
            let c = ech.mat.get(prow, free);
            if !c.is_zero() {
                v[pcol] = -c.clone();
            }
        }
        out.push(v);
    }
    out
}

/// Either an exact solution of `A·x = b` or a certificate `y` with
/// `yᵀ·A = 0` and `yᵀ·b ≠ 0`.
pub enum SolveOutcome {
    Solution(Vec<Rat>),
    Inconsistent { certificate: Vec<Rat> },
}

pub fn solve(a: &Matrix, b: &[Rat]) -> SolveOutcome {
    assert_eq!(a.rows, b.len());
    let mut aug = Matrix::zero(a.rows, a.cols + 1);
    for r in 0..a.rows {
        for c in 0..a.cols {
            aug.set(r, c, a.get(r, c).clone());
        }
        aug.set(r, a.cols, b[r].clone());
    }
    let ech = rref(&aug);
    // inconsistent iff some pivot sits in the augmented column
    if let Some(prow) = ech.pivots.iter().position(|&c| c == a.cols) {
        let certificate: Vec<Rat> = (0..a.rows)
            .map(|c| ech.transform.get(prow, c).clone())
            .collect();
        return SolveOutcome::Inconsistent { certificate };
    }
    let mut x = vec![Rat::zero(); a.cols];
    for (prow, &pcol) in ech.pivots.iter().enumerate() {
        x[pcol] = ech.mat.get(prow, a.cols).clone();
    }
    SolveOutcome::Solution(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;
    use rand::{Rng, SeedableRng};

    #[test]
    fn rank_and_kernel_of_small_matrix() {
        let mut m = Matrix::zero(3, 3);
        let vals = [[1, 2, 3], [2, 4, 6], [1, 0, 1]];
        for r in 0..3 {
            for c in 0..3 {
                m.set(r, c, rat(vals[r][c]));
            }
        }
        assert_eq!(rank(&m), 2);
        let ker = kernel_basis(&m);
        assert_eq!(ker.len(), 1);
        for v in &ker {
            let img = m.mul_vec(v);
            assert!(img.iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn solve_and_certificate() {
        let mut m = Matrix::zero(2, 2);
        m.set(0, 0, rat(2));
        m.set(0, 1, rat(1));
        m.set(1, 0, rat(4));
        m.set(1, 1, rat(2));
        match solve(&m, &[rat(3), rat(6)]) {
            SolveOutcome::Solution(x) => {
                assert_eq!(m.mul_vec(&x), vec![rat(3), rat(6)]);
            }
            _ => panic!("expected a solution"),
        }
        match solve(&m, &[rat(3), rat(7)]) {
            SolveOutcome::Inconsistent { certificate } => {
                let mut ya = vec![Rat::zero(); 2];
                for c in 0..2 {
                    for r in 0..2 {
                        ya[c] = ya[c].clone() + &certificate[r] * m.get(r, c);
                    }
                }
                assert!(ya.iter().all(|x| x.is_zero()));
                let yb = &certificate[0] * rat(3) + &certificate[1] * rat(7);
                assert!(!yb.is_zero());
            }
            _ => panic!("expected inconsistency"),
        }
    }

    #[test]
    fn random_rank_nullity() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let rows = rng.gen_range(1..6);
            let cols = rng.gen_range(1..6);
            let mut m = Matrix::zero(rows, cols);
            for r in 0..rows {
                for c in 0..cols {
                    m.set(r, c, ratio(rng.gen_range(-4i64..=4), rng.gen_range(1i64..=3)));
                }
            }
            let rk = rank(&m);
            let ker = kernel_basis(&m);
            assert_eq!(rk + ker.len(), cols);
            for v in &ker {
                assert!(m.mul_vec(v).iter().all(|x| x.is_zero()));
            }
        }
    }
}
