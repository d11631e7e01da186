use super::linalg::{solve_complex, CMatrix};
use super::{NumericsError, C64};

/// A square system F(x) = 0 with a closed-form Jacobian.
///
/// Evaluation returns `None` at poles so the solver can back off.
pub trait RationalSystem {
    fn dim(&self) -> usize;
    fn residual(&self, x: &[C64]) -> Option<Vec<C64>>;
    fn jacobian(&self, x: &[C64]) -> Option<CMatrix>;
}

#[derive(Debug, Clone, Copy)]
pub struct NewtonOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub max_halvings: usize,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions { tol: 1e-12, max_iter: 100, max_halvings: 20 }
    }
}

#[derive(Debug, Clone)]
pub struct NewtonOutcome {
    pub x: Vec<C64>,
    pub residual: f64,
    pub iterations: usize,
}

fn max_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn finite(v: &[C64]) -> bool {
    v.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Damped Newton iteration with step halving.
pub fn newton_solve<S: RationalSystem + ?Sized>(
    sys: &S,
    seed: &[C64],
    opts: &NewtonOptions,
) -> Result<NewtonOutcome, NumericsError> {
    let mut x = seed.to_vec();
    let mut f = sys.residual(&x).filter(|f| finite(f)).ok_or(NumericsError::Diverged)?;
    let mut r = max_norm(&f);
    for it in 0..opts.max_iter {
        if r < opts.tol {
            return Ok(NewtonOutcome { x, residual: r, iterations: it });
        }
        let jac = sys.jacobian(&x).ok_or(NumericsError::SingularJacobian)?;
        let neg: Vec<C64> = f.iter().map(|z| -z).collect();
        let dx = solve_complex(&jac, &neg).ok_or(NumericsError::SingularJacobian)?;
        if !finite(&dx) {
            return Err(NumericsError::SingularJacobian);
        }
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..=opts.max_halvings {
            let trial: Vec<C64> = x.iter().zip(&dx).map(|(a, d)| a + d * lambda).collect();
            if let Some(ft) = sys.residual(&trial).filter(|f| finite(f)) {
                let rt = max_norm(&ft);
                if rt < r {
                    x = trial;
                    f = ft;
                    r = rt;
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !accepted {
            return Err(NumericsError::Diverged);
        }
    }
    if r < opts.tol {
        Ok(NewtonOutcome { x, residual: r, iterations: opts.max_iter })
    } else {
        Err(NumericsError::Diverged)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Linear(C64);
    impl RationalSystem for Linear {
        fn dim(&self) -> usize {
            1
        }
        fn residual(&self, x: &[C64]) -> Option<Vec<C64>> {
            Some(vec![x[0] - self.0])
        }
        fn jacobian(&self, _x: &[C64]) -> Option<CMatrix> {
            Some(CMatrix::from_element(1, 1, C64::new(1.0, 0.0)))
        }
    }

    struct Quadratic;
    impl RationalSystem for Quadratic {
        fn dim(&self) -> usize {
            1
        }
        fn residual(&self, x: &[C64]) -> Option<Vec<C64>> {
            Some(vec![x[0] * x[0] - x[0] + 1.0])
        }
        fn jacobian(&self, x: &[C64]) -> Option<CMatrix> {
            Some(CMatrix::from_element(1, 1, x[0] * 2.0 - 1.0))
        }
    }

    #[test]
    fn linear_in_one_step() {
        let c = C64::new(0.3, -2.0);
        let out = newton_solve(&Linear(c), &[C64::new(5.0, 5.0)], &NewtonOptions::default()).unwrap();
        assert_eq!(out.iterations, 1);
        assert!((out.x[0] - c).norm() < 1e-15);
    }

    #[test]
    fn quadratic_roots() {
        let opts = NewtonOptions::default();
        let up = newton_solve(&Quadratic, &[C64::new(0.0, 1.0)], &opts).unwrap();
        let down = newton_solve(&Quadratic, &[C64::new(0.0, -1.0)], &opts).unwrap();
        let s = 3f64.sqrt() / 2.0;
        assert!((up.x[0] - C64::new(0.5, s)).norm() < 1e-12);
        assert!((down.x[0] - C64::new(0.5, -s)).norm() < 1e-12);
    }

    #[test]
    fn deterministic_iterates() {
        let opts = NewtonOptions::default();
        let a = newton_solve(&Quadratic, &[C64::new(1.7, 0.2)], &opts).unwrap();
        let b = newton_solve(&Quadratic, &[C64::new(1.7, 0.2)], &opts).unwrap();
        assert_eq!(a.x[0].re.to_bits(), b.x[0].re.to_bits());
        assert_eq!(a.x[0].im.to_bits(), b.x[0].im.to_bits());
    }
}
