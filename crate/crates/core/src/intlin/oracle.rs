//! Brute-force references for the exact solvers, used by the property and
//! acceptance suites.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::diophantine::hilbert_basis;
use super::matrix::IntMatrix;
use super::snf::determinant;
use crate::error::{Budget, Result};

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = Vec::new();
    for first in 0..=n - k {
        for rest in combinations(n - first - 1, k - 1) {
            let mut c = vec![first];
            c.extend(rest.iter().map(|r| r + first + 1));
            out.push(c);
        }
    }
    out
}

/// Invariant factors `D_k / D_{k-1}`, where `D_k` is the gcd of all `k×k`
/// minors.
pub fn minor_gcd_invariant_factors(m: &IntMatrix) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut prev = BigInt::from(1);
    for k in 1..=m.rows().min(m.cols()) {
        let mut g = BigInt::zero();
        for rows in combinations(m.rows(), k) {
            for cols in combinations(m.cols(), k) {
                g = g.gcd(&determinant(&m.select_rows(&rows).select_columns(&cols)));
            }
        }
        if g.is_zero() {
            break;
        }
        out.push(&g / &prev);
        prev = g;
    }
    out
}

/// Whether `A x ≡ b` row by row (`moduli[i] = 0` for exact rows).
pub fn satisfies(a: &IntMatrix, x: &[i64], b: &[i64], moduli: &[i64]) -> bool {
    (0..a.rows()).all(|i| {
        let v: BigInt = a.row(i).iter().zip(x).map(|(c, xi)| c * BigInt::from(*xi)).sum::<BigInt>() - b[i];
        if moduli[i] == 0 {
            v.is_zero()
        } else {
            v.mod_floor(&BigInt::from(moduli[i])).is_zero()
        }
    })
}

fn boxed(k: usize, bound: i64) -> impl Iterator<Item = Vec<i64>> {
    let side = (bound + 1) as u64;
    let total = side.pow(k as u32);
    (0..total).map(move |mut c| {
        let mut v = vec![0i64; k];
        for slot in v.iter_mut().rev() {
            *slot = (c % side) as i64;
            c /= side;
        }
        v
    })
}

/// The nonzero solutions of `A x ≡ 0` in `[0, bound]^k` that are minimal
/// for the componentwise order, sorted.
pub fn bounded_minimal_solutions(a: &IntMatrix, moduli: &[i64], bound: i64) -> Vec<Vec<i64>> {
    let zero = vec![0; a.rows()];
    let sols: Vec<Vec<i64>> =
        boxed(a.cols(), bound).filter(|x| x.iter().any(|&c| c != 0) && satisfies(a, x, &zero, moduli)).collect();
    let below = |x: &Vec<i64>, y: &Vec<i64>| x != y && x.iter().zip(y).all(|(a, b)| a <= b);
    let mut min: Vec<Vec<i64>> = sols.iter().filter(|y| !sols.iter().any(|x| below(x, y))).cloned().collect();
    min.sort();
    min
}

/// Some `x ∈ [0, bound]^k` with `A x ≡ b`.
pub fn bounded_feasible(a: &IntMatrix, b: &[i64], moduli: &[i64], bound: i64) -> Option<Vec<i64>> {
    boxed(a.cols(), bound).find(|x| satisfies(a, x, b, moduli))
}

/// The largest absolute entry of a vector.
pub fn sup_norm(v: &[BigInt]) -> BigInt {
    v.iter().map(|x| x.abs()).max().unwrap_or_default()
}

/// Compares the Hilbert basis of `A x ≡ 0` with the minimal solutions found
/// by enumerating `[0, bound]^k`. A solution is minimal in the box exactly
/// when it is minimal overall, so the two lists must agree on the box.
/// Returns a description of the first disagreement.
pub fn hilbert_disagreement(a: &IntMatrix, moduli: &[i64], bound: i64, budget: &Budget) -> Result<Option<String>> {
    let slacks: Vec<(usize, BigInt)> =
        moduli.iter().enumerate().filter(|(_, m)| **m != 0).map(|(i, m)| (i, BigInt::from(*m))).collect();
    let hb = hilbert_basis(a, &slacks, budget)?;
    let zero = vec![0; a.rows()];
    let mut inside = Vec::new();
    for v in &hb.vectors {
        let Some(small) = v.iter().map(|c| i64::try_from(c).ok()).collect::<Option<Vec<i64>>>() else {
            return Ok(Some(format!("basis vector {:?} overflows", v)));
        };
        if !satisfies(a, &small, &zero, moduli) {
            return Ok(Some(format!("basis vector {:?} is not a solution", small)));
        }
        if small.iter().all(|&c| c <= bound) {
            inside.push(small);
        }
    }
    inside.sort();
    let brute = bounded_minimal_solutions(a, moduli, bound);
    if inside != brute {
        return Ok(Some(format!("basis {:?} but enumeration {:?}", inside, brute)));
    }
    Ok(None)
}
