//! Nonnegative solutions of linear Diophantine systems.
//!
//! Both entry points run the Contejean–Devie completion: starting from the
//! unit vectors, a candidate `x` with defect `A x != 0` is only extended by
//! `e_j` when `<A x, A e_j> < 0`, and candidates dominating an already found
//! minimal solution are discarded. The procedure is complete and terminates;
//! the node budget turns an impractically large search into `ResourceLimit`.
//!
//! Torsion rows (`A_i λ ≡ b_i (mod m)`) are handled by reducing the row into
//! `[0, m)` and adding one nonnegative slack column `-m`. After the reduction
//! `A_i λ >= 0` for every `λ >= 0`, so a single nonnegative multiplier suffices.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use super::matrix::IntMatrix;
use crate::error::{Budget, Error, ResourceLimit, Result};

/// Minimal generating set of `{λ ∈ ℕ^k : A λ ≡ 0}`, sorted lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertBasis {
    pub vectors: Vec<Vec<BigInt>>,
}

/// A row index carrying a congruence modulo `modulus` instead of an equation.
pub type ModularSlack = (usize, BigInt);

/// Searches for `λ ∈ ℕ^k` with `A λ ≡ b`. Returns `Ok(None)` when the search
/// certifies infeasibility.
pub fn nonneg_feasible(
    a: &IntMatrix,
    b: &[BigInt],
    modular_slacks: &[ModularSlack],
    budget: &Budget,
) -> Result<Option<Vec<BigInt>>> {
    if b.len() != a.rows() {
        return Err(Error::Dimension(format!(
            "right-hand side has length {} but matrix has {} rows",
            b.len(),
            a.rows()
        )));
    }
    let sys = Prepared::new(a, Some(b), modular_slacks)?;
    let k = a.cols();
    if sys.rhs_is_zero {
        return Ok(Some(vec![BigInt::zero(); k]));
    }
    let found = run(&sys, Goal::FirstWithRhs, budget)?;
    Ok(found.into_iter().next().map(|x| x[..k].iter().map(|&v| BigInt::from(v)).collect()))
}

/// Hilbert basis of the homogeneous system `A λ ≡ 0`.
pub fn hilbert_basis(
    a: &IntMatrix,
    modular_slacks: &[ModularSlack],
    budget: &Budget,
) -> Result<HilbertBasis> {
    let sys = Prepared::new(a, None, modular_slacks)?;
    let k = a.cols();
    let found = run(&sys, Goal::AllMinimal, budget)?;
    let mut vectors: Vec<Vec<BigInt>> = found
        .into_iter()
        .map(|x| x[..k].iter().map(|&v| BigInt::from(v)).collect::<Vec<_>>())
        .filter(|v| v.iter().any(|c| !c.is_zero()))
        .collect();
    vectors.sort();
    vectors.dedup();
    Ok(HilbertBasis { vectors })
}

/// The system after torsion reduction, as a list of columns.
struct Prepared {
    columns: Vec<Vec<BigInt>>,
    /// Index of the right-hand-side variable (bounded by 1), if any.
    rhs_var: Option<usize>,
    rhs_is_zero: bool,
}

impl Prepared {
    fn new(a: &IntMatrix, b: Option<&[BigInt]>, slacks: &[ModularSlack]) -> Result<Self> {
        let rows = a.rows();
        let mut modulus: Vec<Option<BigInt>> = vec![None; rows];
        for (row, m) in slacks {
            if *row >= rows {
                return Err(Error::Dimension(format!("slack row {} out of range", row)));
            }
            if m < &BigInt::from(2) {
                return Err(Error::Precondition(format!("modulus {} must be at least 2", m)));
            }
            if modulus[*row].is_some() {
                return Err(Error::Precondition(format!("row {} has two slacks", row)));
            }
            modulus[*row] = Some(m.clone());
        }
        let reduce = |i: usize, x: &BigInt| match &modulus[i] {
            Some(m) => x.mod_floor(m),
            None => x.clone(),
        };
        let mut columns: Vec<Vec<BigInt>> =
            (0..a.cols()).map(|j| (0..rows).map(|i| reduce(i, &a[(i, j)])).collect()).collect();
        for (i, m) in modulus.iter().enumerate() {
            if let Some(m) = m {
                let mut c = vec![BigInt::zero(); rows];
                c[i] = -m.clone();
                columns.push(c);
            }
        }
        let mut rhs_var = None;
        let mut rhs_is_zero = true;
        if let Some(b) = b {
            let rb: Vec<BigInt> = b.iter().enumerate().map(|(i, x)| reduce(i, x)).collect();
            rhs_is_zero = rb.iter().all(Zero::is_zero);
            rhs_var = Some(columns.len());
            columns.push(rb.into_iter().map(|x| -x).collect());
        }
        Ok(Prepared { columns, rhs_var, rhs_is_zero })
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Goal {
    AllMinimal,
    FirstWithRhs,
}

/// Arithmetic needed by the completion loop; `None` signals overflow.
trait Coeff: Clone + Ord + Zero {
    fn from_big(x: &BigInt) -> Option<Self>;
    fn checked_add(&self, o: &Self) -> Option<Self>;
    fn checked_mul(&self, o: &Self) -> Option<Self>;
}

impl Coeff for i128 {
    fn from_big(x: &BigInt) -> Option<Self> {
        x.to_i64().map(i128::from)
    }
    fn checked_add(&self, o: &Self) -> Option<Self> {
        i128::checked_add(*self, *o)
    }
    fn checked_mul(&self, o: &Self) -> Option<Self> {
        i128::checked_mul(*self, *o)
    }
}

impl Coeff for BigInt {
    fn from_big(x: &BigInt) -> Option<Self> {
        Some(x.clone())
    }
    fn checked_add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn checked_mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
}

enum Abort {
    Overflow,
    Budget(ResourceLimit),
}

fn run(sys: &Prepared, goal: Goal, budget: &Budget) -> Result<Vec<Vec<u64>>> {
    let small = sys.columns.iter().flatten().all(|x| x.abs() < BigInt::from(1u64 << 40));
    if small {
        match complete::<i128>(sys, goal, budget) {
            Ok(v) => return Ok(v),
            Err(Abort::Budget(e)) => return Err(e.into()),
            Err(Abort::Overflow) => {}
        }
    }
    match complete::<BigInt>(sys, goal, budget) {
        Ok(v) => Ok(v),
        Err(Abort::Budget(e)) => Err(e.into()),
        Err(Abort::Overflow) => unreachable!("arbitrary precision cannot overflow"),
    }
}

fn complete<T: Coeff>(
    sys: &Prepared,
    goal: Goal,
    budget: &Budget,
) -> std::result::Result<Vec<Vec<u64>>, Abort> {
    let n = sys.columns.len();
    let cols: Vec<Vec<T>> = sys
        .columns
        .iter()
        .map(|c| c.iter().map(|x| T::from_big(x).ok_or(Abort::Overflow)).collect())
        .collect::<std::result::Result<_, _>>()?;
    // Gram matrix of the columns: <A e_i, A e_j>.
    let mut gram = vec![vec![T::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            gram[i][j] = dot(&cols[i], &cols[j])?;
        }
    }

    let mut nodes: u64 = 0;
    let limit = budget.limit();
    let charge = |nodes: &mut u64| -> std::result::Result<(), Abort> {
        *nodes += 1;
        if *nodes > limit {
            budget.record(*nodes);
            Err(Abort::Budget(ResourceLimit { limit }))
        } else {
            Ok(())
        }
    };

    let mut minimal: Vec<Vec<u64>> = Vec::new();
    // candidate -> (defect A x, <A x, A e_j> for every j)
    let mut frontier: BTreeMap<Vec<u64>, (Vec<T>, Vec<T>)> = BTreeMap::new();
    for j in 0..n {
        charge(&mut nodes)?;
        let mut x = vec![0u64; n];
        x[j] = 1;
        frontier.insert(x, (cols[j].clone(), gram[j].clone()));
    }

    while !frontier.is_empty() {
        let mut solved = BTreeSet::new();
        for (x, (defect, _)) in &frontier {
            if defect.iter().all(Zero::is_zero) {
                solved.insert(x.clone());
            }
        }
        for x in &solved {
            frontier.remove(x);
            if goal == Goal::FirstWithRhs && sys.rhs_var.is_some_and(|r| x[r] == 1) {
                budget.record(nodes);
                return Ok(vec![x.clone()]);
            }
        }
        minimal.extend(solved);

        let mut next: BTreeMap<Vec<u64>, (Vec<T>, Vec<T>)> = BTreeMap::new();
        for (x, (defect, products)) in &frontier {
            for j in 0..n {
                if products[j] >= T::zero() {
                    continue;
                }
                if sys.rhs_var == Some(j) && x[j] >= 1 {
                    continue;
                }
                let mut y = x.clone();
                y[j] += 1;
                if next.contains_key(&y) || dominates_any(&y, &minimal) {
                    continue;
                }
                charge(&mut nodes)?;
                let d = add(defect, &cols[j])?;
                let p = add(products, &gram[j])?;
                next.insert(y, (d, p));
            }
        }
        frontier = next;
    }
    budget.record(nodes);
    match goal {
        Goal::AllMinimal => Ok(minimal),
        Goal::FirstWithRhs => Ok(Vec::new()),
    }
}

fn dominates_any(y: &[u64], minimal: &[Vec<u64>]) -> bool {
    minimal.iter().any(|m| m.iter().zip(y).all(|(a, b)| a <= b))
}

fn dot<T: Coeff>(a: &[T], b: &[T]) -> std::result::Result<T, Abort> {
    let mut s = T::zero();
    for (x, y) in a.iter().zip(b) {
        s = s.checked_add(&x.checked_mul(y).ok_or(Abort::Overflow)?).ok_or(Abort::Overflow)?;
    }
    Ok(s)
}

fn add<T: Coeff>(a: &[T], b: &[T]) -> std::result::Result<Vec<T>, Abort> {
    a.iter().zip(b).map(|(x, y)| x.checked_add(y).ok_or(Abort::Overflow)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intlin::matrix::ivec;

    fn b() -> Budget {
        Budget::default()
    }

    #[test]
    fn feasible_simple() {
        let a = IntMatrix::from_i64(&[&[1, 1]]);
        let w = nonneg_feasible(&a, &ivec(&[2]), &[], &b()).unwrap().unwrap();
        assert_eq!(a.mul_vec(&w), ivec(&[2]));
        assert!(w.iter().all(|x| !x.is_negative()));
    }

    #[test]
    fn infeasible_parity() {
        let a = IntMatrix::from_i64(&[&[2]]);
        assert_eq!(nonneg_feasible(&a, &ivec(&[3]), &[], &b()).unwrap(), None);
    }

    #[test]
    fn precomma_difference_not_positive() {
        // generators (1,1) and (0,1) as columns; (2,1) is not reachable
        let a = IntMatrix::from_i64(&[&[1, 0], &[1, 1]]);
        assert_eq!(nonneg_feasible(&a, &ivec(&[2, 1]), &[], &b()).unwrap(), None);
        let w = nonneg_feasible(&a, &ivec(&[1, 4]), &[], &b()).unwrap().unwrap();
        assert_eq!(w, ivec(&[1, 3]));
    }

    #[test]
    fn modular_row() {
        // 3 λ ≡ 1 (mod 4) -> λ = 3
        let a = IntMatrix::from_i64(&[&[3]]);
        let w = nonneg_feasible(&a, &ivec(&[1]), &[(0, BigInt::from(4))], &b()).unwrap().unwrap();
        assert_eq!(w, ivec(&[3]));
        // 2 λ ≡ 1 (mod 4) impossible
        let a = IntMatrix::from_i64(&[&[2]]);
        assert_eq!(nonneg_feasible(&a, &ivec(&[1]), &[(0, BigInt::from(4))], &b()).unwrap(), None);
    }

    #[test]
    fn zero_rhs_is_trivially_feasible() {
        let a = IntMatrix::from_i64(&[&[1, -1]]);
        assert_eq!(nonneg_feasible(&a, &ivec(&[0]), &[], &b()).unwrap(), Some(ivec(&[0, 0])));
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let a = IntMatrix::from_i64(&[&[1, 1]]);
        let r = nonneg_feasible(&a, &ivec(&[50]), &[], &Budget::new(10));
        assert!(matches!(r, Err(Error::ResourceLimit(_))));
    }

    #[test]
    fn bad_modulus_rejected() {
        let a = IntMatrix::from_i64(&[&[1]]);
        assert!(nonneg_feasible(&a, &ivec(&[1]), &[(0, BigInt::from(1))], &b()).is_err());
        assert!(nonneg_feasible(&a, &ivec(&[1]), &[(3, BigInt::from(2))], &b()).is_err());
    }

    #[test]
    fn hilbert_examples() {
        let h = hilbert_basis(&IntMatrix::from_i64(&[&[1, -1]]), &[], &b()).unwrap();
        assert_eq!(h.vectors, vec![ivec(&[1, 1])]);

        let h = hilbert_basis(&IntMatrix::zeros(0, 2), &[], &b()).unwrap();
        assert_eq!(h.vectors, vec![ivec(&[0, 1]), ivec(&[1, 0])]);

        let h = hilbert_basis(&IntMatrix::from_i64(&[&[1, 1]]), &[], &b()).unwrap();
        assert!(h.vectors.is_empty());
    }

    #[test]
    fn hilbert_classic() {
        // x + 2y = 3z : minimal solutions (3,0,1), (1,1,1), (0,3,2)
        let h = hilbert_basis(&IntMatrix::from_i64(&[&[1, 2, -3]]), &[], &b()).unwrap();
        assert_eq!(h.vectors, vec![ivec(&[0, 3, 2]), ivec(&[1, 1, 1]), ivec(&[3, 0, 1])]);
    }

    #[test]
    fn hilbert_modular() {
        // λ1 + λ2 ≡ 0 (mod 2)
        let h = hilbert_basis(&IntMatrix::from_i64(&[&[1, 1]]), &[(0, BigInt::from(2))], &b())
            .unwrap();
        assert_eq!(h.vectors, vec![ivec(&[0, 2]), ivec(&[1, 1]), ivec(&[2, 0])]);
    }
}
