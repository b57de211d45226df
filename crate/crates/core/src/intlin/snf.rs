use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;
use crate::error::{Error, Result};

/// `u * m * v == d`, with `u`, `v` unimodular and `d` diagonal with a
/// nonnegative divisibility chain. The inverses of `u` and `v` are tracked
/// alongside because several callers need a basis change in both directions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfResult {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
}

impl SnfResult {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols())).map(|i| self.d[(i, i)].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().take_while(|x| !x.is_zero()).count()
    }

    /// Nonzero diagonal entries, in chain order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.diagonal().into_iter().filter(|x| !x.is_zero()).collect()
    }
}

struct Reducer {
    d: IntMatrix,
    u: IntMatrix,
    v: IntMatrix,
    u_inv: IntMatrix,
    v_inv: IntMatrix,
}

impl Reducer {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.d.swap_rows(a, b);
        self.u.swap_rows(a, b);
        self.u_inv.swap_cols(a, b);
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.d.swap_cols(a, b);
        self.v.swap_cols(a, b);
        self.v_inv.swap_rows(a, b);
    }

    /// row[dst] += k * row[src]
    fn add_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.d.add_row_multiple(dst, src, k);
        self.u.add_row_multiple(dst, src, k);
        self.u_inv.add_col_multiple(src, dst, &-k);
    }

    /// col[dst] += k * col[src]
    fn add_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        self.d.add_col_multiple(dst, src, k);
        self.v.add_col_multiple(dst, src, k);
        self.v_inv.add_row_multiple(src, dst, &-k);
    }

    fn negate_row(&mut self, i: usize) {
        self.d.negate_row(i);
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }

    fn pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.d.rows() {
            for j in t..self.d.cols() {
                let x = &self.d[(i, j)];
                if x.is_zero() {
                    continue;
                }
                match best {
                    Some((bi, bj)) if self.d[(bi, bj)].abs() <= x.abs() => {}
                    _ => best = Some((i, j)),
                }
            }
        }
        best
    }
}

/// Smith normal form by unimodular row and column operations.
///
/// Deterministic: the pivot is always the first entry of minimal absolute
/// value in row-major order of the remaining block.
pub fn smith_normal_form(m: &IntMatrix) -> SnfResult {
    let (rows, cols) = (m.rows(), m.cols());
    let mut r = Reducer {
        d: m.clone(),
        u: IntMatrix::identity(rows),
        v: IntMatrix::identity(cols),
        u_inv: IntMatrix::identity(rows),
        v_inv: IntMatrix::identity(cols),
    };
    for t in 0..rows.min(cols) {
        loop {
            let Some((pi, pj)) = r.pivot(t) else {
                return finish(r);
            };
            r.swap_rows(t, pi);
            r.swap_cols(t, pj);
            let p = r.d[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..rows {
                let q = &r.d[(i, t)] / &p;
                if !q.is_zero() {
                    r.add_row(i, t, &-q);
                }
                if !r.d[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                let q = &r.d[(t, j)] / &p;
                if !q.is_zero() {
                    r.add_col(j, t, &-q);
                }
                if !r.d[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !r.d[(i, j)].is_multiple_of(&p));
            match bad {
                Some((i, _)) => r.add_row(t, i, &BigInt::one()),
                None => break,
            }
        }
        if r.d[(t, t)].sign() == Sign::Minus {
            r.negate_row(t);
        }
    }
    finish(r)
}

fn finish(r: Reducer) -> SnfResult {
    SnfResult { u: r.u, d: r.d, v: r.v, u_inv: r.u_inv, v_inv: r.v_inv }
}

/// A particular integer solution together with a basis of the kernel lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZSolution {
    pub particular: Vec<BigInt>,
    pub kernel: Vec<Vec<BigInt>>,
}

/// Solves `a x = b` over the integers. `Ok(None)` means no integer solution.
pub fn solve_z(a: &IntMatrix, b: &[BigInt]) -> Result<Option<ZSolution>> {
    if b.len() != a.rows() {
        return Err(Error::Dimension(format!(
            "right-hand side has length {} but matrix has {} rows",
            b.len(),
            a.rows()
        )));
    }
    let snf = smith_normal_form(a);
    let c = snf.u.mul_vec(b);
    let rank = snf.rank();
    let mut y = vec![BigInt::zero(); a.cols()];
    for i in 0..a.rows() {
        if i < rank {
            let (q, rem) = c[i].div_rem(&snf.d[(i, i)]);
            if !rem.is_zero() {
                return Ok(None);
            }
            y[i] = q;
        } else if !c[i].is_zero() {
            return Ok(None);
        }
    }
    let particular = snf.v.mul_vec(&y);
    let kernel = (rank..a.cols()).map(|j| snf.v.column(j)).collect();
    Ok(Some(ZSolution { particular, kernel }))
}

/// Determinant of a square matrix by fraction-free elimination.
pub fn determinant(m: &IntMatrix) -> BigInt {
    assert_eq!(m.rows(), m.cols(), "determinant of a non-square matrix");
    let n = m.rows();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[(k, k)].is_zero() {
            match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                Some(i) => {
                    a.swap_rows(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                a[(i, j)] = v;
            }
        }
        prev = a[(k, k)].clone();
    }
    sign * &a[(n - 1, n - 1)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intlin::matrix::ivec;

    fn check(m: &IntMatrix) -> SnfResult {
        let s = smith_normal_form(m);
        assert_eq!(s.u.mul(m).mul(&s.v), s.d);
        assert_eq!(s.u.mul(&s.u_inv), IntMatrix::identity(m.rows()));
        assert_eq!(s.v.mul(&s.v_inv), IntMatrix::identity(m.cols()));
        let diag = s.diagonal();
        for w in diag.windows(2) {
            if !w[0].is_zero() {
                assert!(w[1].is_multiple_of(&w[0]));
            } else {
                assert!(w[1].is_zero());
            }
        }
        s
    }

    #[test]
    fn identity_is_fixed() {
        let s = check(&IntMatrix::identity(2));
        assert_eq!(s.d, IntMatrix::identity(2));
        assert_eq!(s.u, IntMatrix::identity(2));
        assert_eq!(s.v, IntMatrix::identity(2));
    }

    #[test]
    fn rank_one_example() {
        let s = check(&IntMatrix::from_i64(&[&[2, 4], &[4, 8]]));
        assert_eq!(s.diagonal(), ivec(&[2, 0]));
    }

    #[test]
    fn zero_row() {
        let s = check(&IntMatrix::zeros(1, 3));
        assert!(s.d.is_zero());
    }

    #[test]
    fn chain_needs_fixup() {
        // diag(2, 3) has invariant factors 1, 6
        let s = check(&IntMatrix::from_i64(&[&[2, 0], &[0, 3]]));
        assert_eq!(s.diagonal(), ivec(&[1, 6]));
    }

    #[test]
    fn solve_examples() {
        let s = solve_z(&IntMatrix::from_i64(&[&[1]]), &ivec(&[5])).unwrap().unwrap();
        assert_eq!(s.particular, ivec(&[5]));
        assert!(s.kernel.is_empty());

        assert!(solve_z(&IntMatrix::from_i64(&[&[2]]), &ivec(&[1])).unwrap().is_none());

        let s = solve_z(&IntMatrix::from_i64(&[&[1, -1]]), &ivec(&[0])).unwrap().unwrap();
        assert_eq!(s.particular, ivec(&[0, 0]));
        assert_eq!(s.kernel.len(), 1);
        let k = &s.kernel[0];
        assert!(k == &ivec(&[1, 1]) || k == &ivec(&[-1, -1]));
    }

    #[test]
    fn solve_rejects_bad_dimensions() {
        assert!(solve_z(&IntMatrix::from_i64(&[&[1, 2]]), &ivec(&[1, 2])).is_err());
    }

    #[test]
    fn determinant_small() {
        assert_eq!(determinant(&IntMatrix::from_i64(&[&[2, 1], &[1, 3]])), BigInt::from(5));
        assert_eq!(
            determinant(&IntMatrix::from_i64(&[&[0, 1, 2], &[1, 0, 3], &[4, -3, 8]])),
            BigInt::from(-2)
        );
    }
}
