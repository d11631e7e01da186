//! Complex dilogarithm and the Bloch–Wigner function.

use num_complex::Complex64;
use std::f64::consts::PI;

use super::NumericsError;

const PI2_6: f64 = PI * PI / 6.0;

/// B_n / (n+1)! for n = 0, 1, 2, 4, 6, ... (odd n > 1 vanish).
#[allow(clippy::excessive_precision)]
const BERNOULLI_COEFFS: [f64; 22] = [
    1.00000000000000000e+00,
    -2.50000000000000000e-01,
    2.77777777777777762e-02,
    -2.77777777777777778e-04,
    4.72411186696900978e-06,
    -9.18577307466196408e-08,
    1.89788699889710005e-09,
    -4.06476164514422560e-11,
    8.92169102045645230e-13,
    -1.99392958607210744e-14,
    4.51898002961991825e-16,
    -1.03565176121812472e-17,
    2.39521862102618698e-19,
    -5.58178587432500898e-21,
    1.30915075541832125e-22,
    -3.08741980242674029e-24,
    7.31597565270220293e-26,
    -1.74084565723400088e-27,
    4.15763564461389988e-29,
    -9.96214848828462168e-31,
    2.39403442489616522e-32,
    -5.76834735536738970e-34,
];

fn series_small(z: Complex64) -> Complex64 {
    // |z| <= 1/2: plain power series
    let mut term = z;
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 1..200 {
        let add = term / (k * k) as f64;
        sum += add;
        if add.norm() < 1e-18 * sum.norm().max(1e-300) {
            break;
        }
        term *= z;
    }
    sum
}

fn series_bernoulli(z: Complex64) -> Complex64 {
    // |z| <= 1, Re z <= 1/2: expansion in u = -log(1 - z)
    let u = -(Complex64::new(1.0, 0.0) - z).ln();
    let u2 = u * u;
    let mut sum = u * BERNOULLI_COEFFS[0] + u2 * BERNOULLI_COEFFS[1];
    let mut p = u2 * u;
    for c in &BERNOULLI_COEFFS[2..] {
        let add = p * *c;
        sum += add;
        if add.norm() < 1e-18 * sum.norm() {
            break;
        }
        p *= u2;
    }
    sum
}

fn li2_unit_disk(z: Complex64) -> Complex64 {
    if z.norm() <= 0.5 {
        return series_small(z);
    }
    if z.re > 0.5 {
        // reflection
        let one = Complex64::new(1.0, 0.0);
        let w = one - z;
        let rest = if w.norm() <= 0.5 { series_small(w) } else { series_bernoulli(w) };
        return -rest + PI2_6 - z.ln() * w.ln();
    }
    series_bernoulli(z)
}

/// Principal branch of Li2. Fails on the open cut (1, ∞).
pub fn li2(z: Complex64) -> Result<Complex64, NumericsError> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(NumericsError::NonFinite);
    }
    if z.im.abs() <= 1e-13 && z.re > 1.0 + 1e-13 {
        return Err(NumericsError::BranchCut);
    }
    if z == Complex64::new(0.0, 0.0) {
        return Ok(z);
    }
    if (z - 1.0).norm() == 0.0 {
        return Ok(Complex64::new(PI2_6, 0.0));
    }
    if z.norm() <= 1.0 {
        return Ok(li2_unit_disk(z));
    }
    // inversion
    let w = z.inv();
    let l = (-z).ln();
    Ok(-li2_unit_disk(w) - PI2_6 - 0.5 * l * l)
}

/// D(z) = Im Li2(z) + arg(1 - z) log|z|.
pub fn bloch_wigner(z: Complex64) -> Result<f64, NumericsError> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(NumericsError::NonFinite);
    }
    if z.norm() == 0.0 || (z - 1.0).norm() == 0.0 {
        return Err(NumericsError::Degenerate);
    }
    if z.im == 0.0 {
        return Ok(0.0);
    }
    if z.norm() > 1.0 {
        // D(1/z) = -D(z), keeps the evaluation inside the unit disk
        return bloch_wigner(z.inv()).map(|d| -d);
    }
    let one = Complex64::new(1.0, 0.0);
    Ok(li2_unit_disk(z).im + (one - z).arg() * z.norm().ln())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn li2_slow(z: Complex64) -> Complex64 {
        let mut s = c(0.0, 0.0);
        let mut t = z;
        for k in 1..4000 {
            s += t / (k * k) as f64;
            t *= z;
        }
        s
    }

    #[test]
    fn classical_values() {
        assert!(li2(c(0.0, 0.0)).unwrap().norm() < 1e-15);
        assert!((li2(c(1.0, 0.0)).unwrap() - PI2_6).norm() < 1e-14);
        let half = PI * PI / 12.0 - 0.5 * 2f64.ln().powi(2);
        assert!((li2(c(0.5, 0.0)).unwrap() - half).norm() < 1e-14);
        let minus_one = -PI * PI / 12.0;
        assert!((li2(c(-1.0, 0.0)).unwrap() - minus_one).norm() < 1e-14);
    }

    #[test]
    fn matches_direct_series_inside_disk() {
        for &(re, im) in &[(0.3, 0.6), (-0.7, 0.2), (0.6, -0.5), (0.1, 0.85), (-0.4, -0.7)] {
            let z = c(re, im);
            assert!((li2(z).unwrap() - li2_slow(z)).norm() < 1e-13, "{z}");
        }
    }

    #[test]
    fn cut_rejected() {
        assert!(matches!(li2(c(2.0, 0.0)), Err(NumericsError::BranchCut)));
        assert!(li2(c(2.0, 1e-6)).is_ok());
    }

    #[test]
    fn bloch_wigner_regular_tetrahedron() {
        let z = Complex64::from_polar(1.0, PI / 3.0);
        // Clausen series: D(e^{iθ}) = Σ sin(nθ)/n²
        let mut cl = 0.0;
        for n in 1..2_000_000u64 {
            cl += ((n as f64) * PI / 3.0).sin() / (n as f64).powi(2);
        }
        let d = bloch_wigner(z).unwrap();
        assert!((d - cl).abs() < 1e-10, "{d} {cl}");
        assert!((d - 1.014_941_606_409_653_6).abs() < 1e-12);
    }

    #[test]
    fn bloch_wigner_symmetries() {
        let z = c(0.3, 0.8);
        let d = bloch_wigner(z).unwrap();
        assert!((bloch_wigner(z.conj()).unwrap() + d).abs() < 1e-14);
        // five-fold invariance under z -> 1 - 1/z
        let one = c(1.0, 0.0);
        assert!((bloch_wigner(one - z.inv()).unwrap() - d).abs() < 1e-13);
        assert!((bloch_wigner(c(3.0, 0.0)).unwrap()).abs() < 1e-15);
        assert!(bloch_wigner(c(1.0, 0.0)).is_err());
    }
}
