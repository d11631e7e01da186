//! Integer linear algebra: column Hermite reduction and affine solves over Z.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::NumericsError;

/// Dense row-major integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<i64>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self, NumericsError> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(NumericsError::Shape("ragged rows".into()));
        }
        Ok(IntegerMatrix { rows: rows.len(), cols, data: rows.concat() })
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul_vec(&self, x: &[i64]) -> Vec<i64> {
        (0..self.rows).map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum()).collect()
    }

    /// Exact determinant by fraction-free elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m: Vec<Vec<BigInt>> = (0..n).map(|i| self.row(i).iter().map(|&v| BigInt::from(v)).collect()).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&r| !m[r][k].is_zero()) else {
                return BigInt::zero();
            };
            if p != k {
                m.swap(p, k);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = v / &prev;
                }
                m[i][k] = BigInt::zero();
            }
            prev = m[k][k].clone();
        }
        if n == 0 {
            return BigInt::one();
        }
        sign * &m[n - 1][n - 1]
    }
}

type BigMatrix = Vec<Vec<BigInt>>;

/// Column Hermite reduction: returns (H, U) with A U = H, U unimodular and
/// H in column echelon form with positive pivots.
fn column_hermite(a: &IntegerMatrix) -> (BigMatrix, BigMatrix, Vec<(usize, usize)>) {
    let (m, n) = (a.rows, a.cols);
    let mut h: Vec<Vec<BigInt>> = (0..m).map(|i| a.row(i).iter().map(|&v| BigInt::from(v)).collect()).collect();
    let mut u: Vec<Vec<BigInt>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect();
    let mut pivots = Vec::new();
    let mut col = 0;
    for row in 0..m {
        if col == n {
            break;
        }
        // gcd-combine columns col.. on this row into column col
        loop {
            let nz: Vec<usize> = (col..n).filter(|&j| !h[row][j].is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            let p = *nz.iter().min_by_key(|&&j| h[row][j].abs()).unwrap();
            swap_cols(&mut h, &mut u, col, p);
            let mut done = true;
            for j in col + 1..n {
                if h[row][j].is_zero() {
                    continue;
                }
                let q = h[row][j].div_floor(&h[row][col]);
                sub_col(&mut h, &mut u, j, col, &q);
                if !h[row][j].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[row][col].is_zero() {
            continue;
        }
        if h[row][col].is_negative() {
            neg_col(&mut h, &mut u, col);
        }
        // reduce earlier columns modulo the pivot
        for j in 0..col {
            let q = h[row][j].div_floor(&h[row][col]);
            if !q.is_zero() {
                sub_col(&mut h, &mut u, j, col, &q);
            }
        }
        pivots.push((row, col));
        col += 1;
    }
    (h, u, pivots)
}

fn swap_cols(h: &mut [Vec<BigInt>], u: &mut [Vec<BigInt>], a: usize, b: usize) {
    if a == b {
        return;
    }
    for r in h.iter_mut().chain(u.iter_mut()) {
        r.swap(a, b);
    }
}

fn sub_col(h: &mut [Vec<BigInt>], u: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt) {
    for r in h.iter_mut().chain(u.iter_mut()) {
        let v = &r[src] * q;
        r[dst] -= v;
    }
}

fn neg_col(h: &mut [Vec<BigInt>], u: &mut [Vec<BigInt>], c: usize) {
    for r in h.iter_mut().chain(u.iter_mut()) {
        r[c] = -r[c].clone();
    }
}

/// Integer solution of A x = b, or `Infeasible`.
///
/// Free directions of the kernel are set to zero, so the result is
/// deterministic for a given input.
pub fn solve_integer_affine(a: &IntegerMatrix, b: &[i64]) -> Result<Vec<i64>, NumericsError> {
    if b.len() != a.rows {
        return Err(NumericsError::Shape(format!("rhs has {} entries, matrix has {} rows", b.len(), a.rows)));
    }
    let (h, u, pivots) = column_hermite(a);
    let mut y = vec![BigInt::zero(); a.cols];
    let mut next = 0;
    for row in 0..a.rows {
        let mut acc = BigInt::from(b[row]);
        for (j, yj) in y.iter().enumerate() {
            if !yj.is_zero() {
                acc -= &h[row][j] * yj;
            }
        }
        if next < pivots.len() && pivots[next].0 == row {
            let c = pivots[next].1;
            let (q, r) = acc.div_rem(&h[row][c]);
            if !r.is_zero() {
                return Err(NumericsError::Infeasible);
            }
            y[c] = q;
            next += 1;
        } else if !acc.is_zero() {
            return Err(NumericsError::Infeasible);
        }
    }
    (0..a.cols)
        .map(|i| {
            let v: BigInt = u[i].iter().zip(&y).map(|(p, q)| p * q).sum();
            v.to_i64().ok_or(NumericsError::Shape("solution overflows i64".into()))
        })
        .collect()
}

/// Integer kernel basis of A, as columns of the unimodular transform.
pub fn integer_kernel(a: &IntegerMatrix) -> Vec<Vec<i64>> {
    let (_, u, pivots) = column_hermite(a);
    (pivots.len()..a.cols)
        .map(|c| (0..a.cols).map(|i| u[i][c].to_i64().expect("kernel entry overflows i64")).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parity_obstruction() {
        let a = IntegerMatrix::from_rows(&[vec![2]]).unwrap();
        assert_eq!(solve_integer_affine(&a, &[1]), Err(NumericsError::Infeasible));
        assert_eq!(solve_integer_affine(&a, &[4]).unwrap(), vec![2]);
    }

    #[test]
    fn bezout() {
        let a = IntegerMatrix::from_rows(&[vec![6, 10, 15]]).unwrap();
        let x = solve_integer_affine(&a, &[1]).unwrap();
        assert_eq!(a.mul_vec(&x), vec![1]);
    }

    #[test]
    fn inconsistent_rows() {
        let a = IntegerMatrix::from_rows(&[vec![1, 1], vec![1, 1]]).unwrap();
        assert_eq!(solve_integer_affine(&a, &[1, 2]), Err(NumericsError::Infeasible));
    }

    #[test]
    fn exact_determinant() {
        let a = IntegerMatrix::from_rows(&[vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]]).unwrap();
        assert_eq!(a.det(), BigInt::from(4));
        let s = IntegerMatrix::from_rows(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(s.det(), BigInt::from(-1));
    }

    proptest! {
        #[test]
        fn solves_consistent_systems(
            entries in proptest::collection::vec(-4i64..=4, 12),
            x0 in proptest::collection::vec(-3i64..=3, 4),
        ) {
            let a = IntegerMatrix { rows: 3, cols: 4, data: entries };
            let b = a.mul_vec(&x0);
            let x = solve_integer_affine(&a, &b).unwrap();
            prop_assert_eq!(a.mul_vec(&x), b);
            for k in integer_kernel(&a) {
                prop_assert!(a.mul_vec(&k).iter().all(|&v| v == 0));
            }
        }
    }
}
