//! Yokota potential, its critical-point system and the Ohtsuki-Takata
//! invariant.

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::knot_diagram::{Corner, OpenDiagram, Position};
use crate::numerics::{bloch_wigner, det_complex, newton_solve, CMatrix, NewtonOptions, RationalSystem};

/// Π x_i^{e_i}.
pub fn monomial(x: &[C64], e: &[i64]) -> C64 {
    x.iter().zip(e).filter(|(_, &k)| k != 0).fold(C64::new(1.0, 0.0), |acc, (xi, &k)| acc * xi.powi(k as i32))
}

/// One signed dilogarithm term `sign * Li2(u)`, u = Π x^exponents.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub sign: i8,
    pub exponents: Vec<i64>,
    pub crossing: usize,
    pub position: Position,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Potential {
    pub n_vars: usize,
    pub terms: Vec<Term>,
}

pub fn build_potential(corners: &[Corner]) -> Result<Potential> {
    let terms: Vec<Term> = corners
        .iter()
        .filter(|c| c.essential)
        .map(|c| {
            let sign: i8 = if c.first_over { 1 } else { -1 };
            Term {
                sign,
                exponents: c.shape_exponents.iter().map(|&e| e * sign as i64).collect(),
                crossing: c.crossing,
                position: c.position,
            }
        })
        .collect();
    if terms.is_empty() {
        return Err(Error::EmptyPotential);
    }
    Ok(Potential { n_vars: terms[0].exponents.len(), terms })
}

fn mono_name(e: &[i64]) -> String {
    let num: Vec<String> = e
        .iter()
        .enumerate()
        .filter(|(_, &k)| k > 0)
        .map(|(i, &k)| if k == 1 { format!("x{}", i + 1) } else { format!("x{}^{k}", i + 1) })
        .collect();
    let den: Vec<String> = e
        .iter()
        .enumerate()
        .filter(|(_, &k)| k < 0)
        .map(|(i, &k)| if k == -1 { format!("x{}", i + 1) } else { format!("x{}^{}", i + 1, -k) })
        .collect();
    let top = if num.is_empty() { "1".to_string() } else { num.join("*") };
    if den.is_empty() {
        top
    } else {
        format!("{top}/{}", den.join("*"))
    }
}

impl Potential {
    /// Human-readable form, e.g. `Li2(x1) - Li2(1/x1)`.
    pub fn display(&self) -> String {
        let mut out = String::new();
        for (k, t) in self.terms.iter().enumerate() {
            let op = match (k, t.sign) {
                (0, 1) => "",
                (0, _) => "-",
                (_, 1) => " + ",
                _ => " - ",
            };
            out.push_str(&format!("{op}Li2({})", mono_name(&t.exponents)));
        }
        out
    }

    /// V(x) on the principal branch.
    pub fn value(&self, x: &[C64]) -> Result<C64> {
        let mut v = C64::new(0.0, 0.0);
        for t in &self.terms {
            v += crate::numerics::li2(monomial(x, &t.exponents))? * t.sign as f64;
        }
        Ok(v)
    }

    /// x_j ∂V/∂x_j = Σ -s e_j log(1 - u), principal branch.
    pub fn log_derivatives(&self, x: &[C64]) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); self.n_vars];
        for t in &self.terms {
            let l = (C64::new(1.0, 0.0) - monomial(x, &t.exponents)).ln();
            for (o, &e) in out.iter_mut().zip(&t.exponents) {
                *o -= l * (t.sign as f64 * e as f64);
            }
        }
        out
    }

    /// H_ij = x_i ∂/∂x_i (x_j ∂V/∂x_j) = Σ s e_i e_j u/(1-u).
    pub fn hessian(&self, x: &[C64]) -> CMatrix {
        let n = self.n_vars;
        let mut h = CMatrix::zeros(n, n);
        for t in &self.terms {
            let u = monomial(x, &t.exponents);
            let w = u / (C64::new(1.0, 0.0) - u) * t.sign as f64;
            for i in 0..n {
                if t.exponents[i] == 0 {
                    continue;
                }
                for j in 0..n {
                    h[(i, j)] += w * (t.exponents[i] * t.exponents[j]) as f64;
                }
            }
        }
        h
    }
}

/// exp(x_i ∂V/∂x_i) = Π_c (1 - u_c)^{-s_c e_i^c}.
#[derive(Debug, Clone)]
pub struct CriticalSystem {
    pub potential: Potential,
}

pub fn critical_system(v: &Potential) -> CriticalSystem {
    CriticalSystem { potential: v.clone() }
}

impl CriticalSystem {
    pub fn n_vars(&self) -> usize {
        self.potential.n_vars
    }

    /// E_1..E_n, or `None` at a pole.
    pub fn equations(&self, x: &[C64]) -> Option<Vec<C64>> {
        if x.iter().any(|z| z.norm() == 0.0) {
            return None;
        }
        let mut e = vec![C64::new(1.0, 0.0); self.n_vars()];
        for t in &self.potential.terms {
            let one_minus = C64::new(1.0, 0.0) - monomial(x, &t.exponents);
            if one_minus.norm() < 1e-300 {
                return None;
            }
            for (ei, &k) in e.iter_mut().zip(&t.exponents) {
                if k != 0 {
                    *ei *= one_minus.powi(-(t.sign as i32) * k as i32);
                }
            }
        }
        Some(e)
    }

    /// Product form of E_i.
    pub fn display(&self, i: usize) -> String {
        let mut parts = Vec::new();
        for t in &self.potential.terms {
            let k = -(t.sign as i64) * t.exponents[i];
            if k != 0 {
                parts.push(format!("(1 - {})^{k}", mono_name(&t.exponents)));
            }
        }
        format!("E{} = {}", i + 1, parts.join(" "))
    }

    pub fn max_residual(&self, x: &[C64]) -> f64 {
        match self.equations(x) {
            Some(e) => e.iter().map(|v| (v - 1.0).norm()).fold(0.0, f64::max),
            None => f64::INFINITY,
        }
    }
}

impl RationalSystem for CriticalSystem {
    fn dim(&self) -> usize {
        self.n_vars()
    }

    fn residual(&self, x: &[C64]) -> Option<Vec<C64>> {
        self.equations(x).map(|e| e.into_iter().map(|v| v - 1.0).collect())
    }

    fn jacobian(&self, x: &[C64]) -> Option<CMatrix> {
        // ∂E_i/∂x_j = E_i H_ij / x_j
        let e = self.equations(x)?;
        let h = self.potential.hessian(x);
        let n = self.n_vars();
        Some(CMatrix::from_fn(n, n, |i, j| e[i] * h[(i, j)] / x[j]))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SeedPolicy {
    pub seed: u64,
    pub random_restarts: usize,
    /// Use the full product grid when it has at most this many points,
    /// the diagonal of the grid otherwise.
    pub grid_limit: usize,
}

impl Default for SeedPolicy {
    fn default() -> Self {
        SeedPolicy { seed: 0, random_restarts: 200, grid_limit: 256 }
    }
}

const GRID: [f64; 4] = [-2.0, -1.0, 0.5, 1.5];

impl SeedPolicy {
    pub fn seeds(&self, n: usize) -> Vec<Vec<C64>> {
        let values: Vec<C64> = GRID.iter().flat_map(|&a| GRID.iter().map(move |&b| C64::new(a, b))).collect();
        let mut out = Vec::new();
        let full = (values.len() as f64).powi(n as i32);
        if full <= self.grid_limit as f64 {
            let mut idx = vec![0usize; n];
            loop {
                out.push(idx.iter().map(|&k| values[k]).collect());
                let mut k = 0;
                while k < n {
                    idx[k] += 1;
                    if idx[k] < values.len() {
                        break;
                    }
                    idx[k] = 0;
                    k += 1;
                }
                if k == n {
                    break;
                }
            }
        } else {
            out.extend(values.iter().map(|&v| vec![v; n]));
        }
        // log-normal modulus at three spreads; arguments alternate between
        // the lower half-plane and the full circle
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let pi = std::f64::consts::PI;
        for k in 0..self.random_restarts {
            let spread = [0.3, 0.7, 1.5][k % 3];
            let lower = k % 2 == 0;
            out.push(
                (0..n)
                    .map(|_| {
                        let g: f64 = rng.sample(StandardNormal);
                        let theta: f64 = if lower { -rng.gen_range(0.0..pi) } else { rng.gen_range(-pi..pi) };
                        C64::from_polar((spread * g).exp(), theta)
                    })
                    .collect(),
            );
        }
        out
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeometricSolution {
    pub x: Vec<C64>,
    pub volume: f64,
    pub residual: f64,
}

/// Corner shapes z = x_a/x_b of the essential corners, in potential order.
pub fn corner_shapes(v: &Potential, x: &[C64]) -> Vec<C64> {
    v.terms
        .iter()
        .map(|t| {
            let u = monomial(x, &t.exponents);
            if t.sign > 0 {
                u
            } else {
                u.inv()
            }
        })
        .collect()
}

/// Volume -Σ D(z) over the corner shapes, or `None` if a shape degenerates.
pub fn volume(v: &Potential, x: &[C64]) -> Option<f64> {
    let mut vol = 0.0;
    for z in corner_shapes(v, x) {
        if z.norm() < 1e-10 || (z - 1.0).norm() < 1e-10 {
            return None;
        }
        vol -= bloch_wigner(z).ok()?;
    }
    Some(vol)
}

/// All distinct nondegenerate roots reached from the seed policy.
pub fn find_roots(sys: &CriticalSystem, policy: &SeedPolicy) -> Vec<GeometricSolution> {
    let opts = NewtonOptions::default();
    let mut roots: Vec<GeometricSolution> = Vec::new();
    for seed in policy.seeds(sys.n_vars()) {
        let Ok(out) = newton_solve(sys, &seed, &opts) else { continue };
        if roots.iter().any(|r| r.x.iter().zip(&out.x).all(|(a, b)| (a - b).norm() < 1e-8)) {
            continue;
        }
        let Some(vol) = volume(&sys.potential, &out.x) else { continue };
        roots.push(GeometricSolution { x: out.x, volume: vol, residual: out.residual });
    }
    roots
}

/// Root of maximal volume.
pub fn solve_geometric(sys: &CriticalSystem, policy: &SeedPolicy) -> Result<GeometricSolution> {
    let roots = find_roots(sys, policy);
    let count = roots.len();
    let best = roots
        .into_iter()
        .max_by(|a, b| a.volume.total_cmp(&b.volume))
        .ok_or_else(|| Error::NoGeometricSolution("no root converged".into()))?;
    if best.volume <= 1e-6 {
        return Err(Error::NoGeometricSolution(format!("{count} roots, none with positive volume")));
    }
    Ok(best)
}

/// Factor of a normalizing function attached to one essential corner.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum Factor {
    /// 1 - z^sigma.
    OneMinus { corner: usize, exponents: Vec<i64> },
    /// z^power.
    Power { corner: usize, exponents: Vec<i64>, power: i64 },
}

impl Factor {
    pub fn eval(&self, x: &[C64]) -> C64 {
        match self {
            Factor::OneMinus { exponents, .. } => C64::new(1.0, 0.0) - monomial(x, exponents),
            Factor::Power { exponents, power, .. } => monomial(x, exponents).powi(*power as i32),
        }
    }
}

fn product(fs: &[Factor], x: &[C64]) -> C64 {
    fs.iter().fold(C64::new(1.0, 0.0), |acc, f| acc * f.eval(x))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NormalizerPair {
    pub omega1: Vec<Factor>,
    /// Orientation running from the ∞-endpoint.
    pub omega2: Vec<Factor>,
    pub omega2_reversed: Vec<Factor>,
}

impl NormalizerPair {
    pub fn omega1(&self, x: &[C64]) -> C64 {
        product(&self.omega1, x)
    }
    pub fn omega2(&self, x: &[C64]) -> C64 {
        product(&self.omega2, x)
    }
    pub fn omega2_reversed(&self, x: &[C64]) -> C64 {
        product(&self.omega2_reversed, x)
    }
}

/// Ω1 takes 1 - z^σ at the essential E and W corners (σ = +1 on A
/// crossings, -1 on B). Ω2 takes z^{-2σ} at the corner between the
/// incoming underpass and the outgoing overpass.
pub fn normalizers(d: &OpenDiagram) -> NormalizerPair {
    let n = d.n_crossings();
    let mut under_in = vec![0; n];
    let mut over_out = vec![0; n];
    let mut under_out = vec![0; n];
    let mut over_in = vec![0; n];
    for v in &d.walk {
        if v.over {
            over_out[v.crossing] = v.slot_out;
            over_in[v.crossing] = v.slot_in;
        } else {
            under_in[v.crossing] = v.slot_in;
            under_out[v.crossing] = v.slot_out;
        }
    }
    let mut pair = NormalizerPair { omega1: Vec::new(), omega2: Vec::new(), omega2_reversed: Vec::new() };
    for (k, c) in d.corners.iter().enumerate().filter(|(_, c)| c.essential) {
        let sigma = d.crossings[c.crossing].sign as i64;
        let e: Vec<i64> = c.shape_exponents.iter().map(|&v| v * sigma).collect();
        if !c.position.is_vertical() {
            pair.omega1.push(Factor::OneMinus { corner: k, exponents: e });
        }
        let pair_of = |a: usize, b: usize| {
            let (s0, s1) = c.slots;
            (s0 == a && s1 == b) || (s0 == b && s1 == a)
        };
        let x = c.crossing;
        let power = Factor::Power { corner: k, exponents: c.shape_exponents.clone(), power: -2 * sigma };
        if pair_of(under_in[x], over_out[x]) {
            pair.omega2.push(power.clone());
        }
        if pair_of(under_out[x], over_in[x]) {
            pair.omega2_reversed.push(power);
        }
    }
    pair
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OtInvariant {
    pub omega: C64,
    pub det_hessian: C64,
    pub omega1: C64,
    pub omega2: C64,
    /// ω computed with the reversed orientation in Ω2.
    pub omega_reversed: C64,
}

/// ω = (Ω1 Ω2 / 2) det H at the solution, up to sign.
pub fn ot_invariant(v: &Potential, norms: &NormalizerPair, sol: &GeometricSolution) -> Result<OtInvariant> {
    let x = &sol.x;
    let det_h = det_complex(&v.hessian(x));
    if det_h.norm() < 1e-12 {
        return Err(Error::SingularHessian(det_h.norm()));
    }
    let (o1, o2) = (norms.omega1(x), norms.omega2(x));
    Ok(OtInvariant {
        omega: o1 * o2 * det_h / 2.0,
        det_hessian: det_h,
        omega1: o1,
        omega2: o2,
        omega_reversed: o1 * norms.omega2_reversed(x) * det_h / 2.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knot_diagram::{build_two_bridge, TwistVector};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn six_one() -> (OpenDiagram, Potential) {
        let d = build_two_bridge(&TwistVector::new(vec![4, 2]).unwrap()).unwrap();
        let v = build_potential(&d.corners).unwrap();
        (d, v)
    }

    #[test]
    fn six_one_potential_matches_display() {
        let (_, v) = six_one();
        assert_eq!(v.terms.len(), 8);
        let mut got: Vec<(i8, Vec<i64>)> = v.terms.iter().map(|t| (t.sign, t.exponents.clone())).collect();
        let mut want = vec![
            (1, vec![1, 0, 0]),
            (-1, vec![-1, 0, 0]),
            (1, vec![-1, 1, 0]),
            (-1, vec![0, 1, 0]),
            (-1, vec![0, -1, 0]),
            (1, vec![0, -1, 1]),
            (-1, vec![0, 0, 1]),
            (-1, vec![0, 0, -1]),
        ];
        got.sort();
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn six_one_equations_match_rational_forms() {
        let (_, v) = six_one();
        let sys = critical_system(&v);
        let x = [c(0.3, -0.7), c(-1.1, 0.4), c(0.8, 0.9)];
        let e = sys.equations(&x).unwrap();
        let (x1, x2, x3) = (x[0], x[1], x[2]);
        let one = c(1.0, 0.0);
        let want = [(-x1 + x2) / ((x1 - one) * (x1 - one)), x1 * (x2 - x3) / (-x1 + x2), x2 * x3 / (-x2 + x3)];
        for (a, b) in e.iter().zip(&want) {
            assert!((a - b).norm() < 1e-12 * b.norm(), "{a} {b}");
        }
    }

    #[test]
    fn toy_potential() {
        let v = Potential {
            n_vars: 1,
            terms: vec![
                Term { sign: 1, exponents: vec![1], crossing: 0, position: Position::N },
                Term { sign: -1, exponents: vec![-1], crossing: 0, position: Position::S },
            ],
        };
        let sys = critical_system(&v);
        let x = c(0.4, 0.9);
        let e = sys.equations(&[x]).unwrap()[0];
        let want = 1.0 / ((1.0 - x) * (1.0 - 1.0 / x));
        assert!((e - want).norm() < 1e-13);
        let r = (x * x - x + 1.0).norm();
        assert!(r > 1e-3);
        let root = c(0.5, -(3f64.sqrt()) / 2.0);
        assert!((sys.equations(&[root]).unwrap()[0] - 1.0).norm() < 1e-13);
    }

    #[test]
    fn hessian_matches_finite_differences() {
        let (_, v) = six_one();
        let x = [c(0.9, -1.5), c(-1.5, -1.2), c(-0.7, -0.2)];
        let h = v.hessian(&x);
        let step = 1e-6;
        for i in 0..3 {
            let mut xp = x;
            let mut xm = x;
            xp[i] *= 1.0 + step;
            xm[i] *= 1.0 - step;
            let (fp, fm) = (v.log_derivatives(&xp), v.log_derivatives(&xm));
            for j in 0..3 {
                let fd = (fp[j] - fm[j]) / (2.0 * step);
                assert!((fd - h[(i, j)]).norm() < 1e-6, "{i}{j}: {fd} {}", h[(i, j)]);
            }
        }
    }

    #[test]
    fn six_one_normalizers() {
        let (d, v) = six_one();
        let norms = normalizers(&d);
        let x = [c(0.3, -0.7), c(-1.1, 0.4), c(0.8, 0.9)];
        let want = (1.0 - x[1] / x[0]) * (1.0 - x[2] / x[1]);
        assert!((norms.omega1(&x) - want).norm() < 1e-14);
        assert!((norms.omega2(&x) - 1.0).norm() < 1e-14);
        assert_eq!(v.terms.len(), 8);
    }

    #[test]
    fn empty_potential() {
        assert!(matches!(build_potential(&[]), Err(Error::EmptyPotential)));
    }
}
