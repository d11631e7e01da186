use nalgebra::DMatrix;

use super::{NumericsError, C64};

pub type CMatrix = DMatrix<C64>;

pub fn cmatrix_from_rows(rows: &[Vec<C64>]) -> Result<CMatrix, NumericsError> {
    let n = rows.len();
    let m = rows.first().map_or(0, |r| r.len());
    if rows.iter().any(|r| r.len() != m) {
        return Err(NumericsError::Shape("ragged rows".into()));
    }
    if rows.iter().flatten().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(NumericsError::NonFinite);
    }
    Ok(CMatrix::from_fn(n, m, |i, j| rows[i][j]))
}

/// Determinant by LU with partial pivoting.
pub fn det_complex(m: &CMatrix) -> C64 {
    assert!(m.is_square(), "det of a non-square matrix");
    if m.nrows() == 0 {
        return C64::new(1.0, 0.0);
    }
    m.clone().lu().determinant()
}

pub fn inverse_complex(m: &CMatrix) -> Option<CMatrix> {
    m.clone().lu().try_inverse()
}

pub fn solve_complex(m: &CMatrix, b: &[C64]) -> Option<Vec<C64>> {
    let rhs = nalgebra::DVector::from_column_slice(b);
    m.clone().lu().solve(&rhs).map(|v| v.iter().copied().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn small_determinants() {
        assert_eq!(det_complex(&CMatrix::identity(4, 4)), c(1.0, 0.0));
        let d = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(2.0, 0.0), c(0.0, 3.0)]));
        assert!((det_complex(&d) - c(0.0, 6.0)).norm() < 1e-15);
    }

    #[test]
    fn determinant_of_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let m = CMatrix::from_fn(5, 5, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let inv = inverse_complex(&m).unwrap();
        assert!((det_complex(&m) * det_complex(&inv) - 1.0).norm() < 1e-10);
    }

    #[test]
    fn rejects_non_finite() {
        let rows = vec![vec![c(f64::NAN, 0.0)]];
        assert_eq!(cmatrix_from_rows(&rows).unwrap_err(), NumericsError::NonFinite);
    }
}
