//! Numerical kernels shared by the two pipelines.

pub mod dilog;
pub mod lattice;
pub mod linalg;
pub mod newton;

pub use dilog::{bloch_wigner, li2};
pub use lattice::{integer_kernel, solve_integer_affine, IntegerMatrix};
pub use linalg::{cmatrix_from_rows, det_complex, inverse_complex, CMatrix};
pub use newton::{newton_solve, NewtonOptions, NewtonOutcome, RationalSystem};

pub type C64 = num_complex::Complex64;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NumericsError {
    #[error("argument lies on the branch cut [1, inf)")]
    BranchCut,
    #[error("degenerate argument")]
    Degenerate,
    #[error("non-finite value")]
    NonFinite,
    #[error("newton iteration diverged")]
    Diverged,
    #[error("singular jacobian")]
    SingularJacobian,
    #[error("integer system has no solution")]
    Infeasible,
    #[error("shape mismatch: {0}")]
    Shape(String),
}

/// Sign representative with nonnegative imaginary part.
pub fn canonical_sign(z: C64) -> C64 {
    if z.im < 0.0 || (z.im == 0.0 && z.re < 0.0) {
        -z
    } else {
        z
    }
}

/// min(|a - b|, |a + b|) together with the sign attaining it.
pub fn sign_discrepancy(a: C64, b: C64) -> (i8, f64) {
    let plus = (a - b).norm();
    let minus = (a + b).norm();
    if plus <= minus {
        (1, plus)
    } else {
        (-1, minus)
    }
}

/// Relative agreement up to sign.
pub fn rel_pm(a: C64, b: C64) -> f64 {
    sign_discrepancy(a, b).1 / a.norm().max(b.norm()).max(f64::MIN_POSITIVE)
}
