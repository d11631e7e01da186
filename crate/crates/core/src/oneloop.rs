//! 1-loop invariant of the collapsed triangulation, the variable reduction
//! linking it to the potential, and the determinant identities between τ
//! and ω.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::knot_diagram::{Corner, Position};
use crate::numerics::{
    bloch_wigner, det_complex, newton_solve, rel_pm, sign_discrepancy, CMatrix, IntegerMatrix, NewtonOptions,
    RationalSystem, C64,
};
use crate::potential::{monomial, NormalizerPair, Potential};
use crate::triangulation::{zetas, EdgeKind, Flattening, GluingData, IdealTriangulation};

const DEGENERATE_TOL: f64 = 1e-10;

/// Shapes with their log-derivatives ζ, ζ', ζ''.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ShapeSolution {
    pub z: Vec<C64>,
    pub zeta: Vec<[C64; 3]>,
}

impl ShapeSolution {
    pub fn new(z: Vec<C64>) -> Result<Self> {
        if let Some(j) = z.iter().position(|w| w.norm() < DEGENERATE_TOL || (w - 1.0).norm() < DEGENERATE_TOL) {
            return Err(Error::DegenerateShape(j));
        }
        let zeta = z.iter().map(|&w| zetas(w)).collect();
        Ok(ShapeSolution { z, zeta })
    }

    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }

    /// ζ^f = Π ζ_j^{f_j} ζ'_j^{f'_j} ζ''_j^{f''_j}.
    pub fn zeta_power(&self, fl: &Flattening) -> C64 {
        (0..self.len())
            .map(|j| {
                let [a, b, c] = self.zeta[j];
                a.powi(fl.f[j] as i32) * b.powi(fl.fp[j] as i32) * c.powi(fl.fpp[j] as i32)
            })
            .product()
    }

    /// z, z' = 1/(1 - z), z'' = 1 - 1/z.
    pub fn params(&self, j: usize) -> [C64; 3] {
        let one = C64::new(1.0, 0.0);
        let z = self.z[j];
        [z, one / (one - z), one - one / z]
    }

    /// Σ D(z_j).
    pub fn volume(&self) -> f64 {
        self.z.iter().map(|&z| bloch_wigner(z).unwrap_or(f64::NAN)).sum()
    }
}

/// Shapes z_j = x^{e_j} of the corner tetrahedra.
pub fn shapes_from_x(x: &[C64], corners: &[Corner]) -> Result<ShapeSolution> {
    ShapeSolution::new(corners.iter().map(|c| monomial(x, &c.shape_exponents)).collect())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OneLoopResult {
    pub tau: C64,
    pub determinant: C64,
    /// ζ^f.
    pub flattening_weight: C64,
    pub replaced_row: usize,
}

/// τ = det(G_μ ζ + G'_μ ζ' + G''_μ ζ'') / (2 ζ^f).
pub fn one_loop(gd: &GluingData, fl: &Flattening, zs: &ShapeSolution) -> Result<OneLoopResult> {
    let det = det_complex(&gd.one_loop_matrix(&zs.zeta));
    if det.norm() < 1e-14 {
        return Err(Error::SingularMatrix(det.norm()));
    }
    let w = zs.zeta_power(fl);
    Ok(OneLoopResult { tau: det / (2.0 * w), determinant: det, flattening_weight: w, replaced_row: gd.replaced_row })
}

fn row_product(rows: [&[i64]; 3], zs: &ShapeSolution) -> C64 {
    (0..zs.len())
        .map(|j| {
            let p = zs.params(j);
            (0..3).map(|q| p[q].powi(rows[q][j] as i32)).product::<C64>()
        })
        .product()
}

/// |Π z^G z'^G' z''^G'' - 1| for every edge, followed by the meridian.
pub fn gluing_residuals(gd: &GluingData, zs: &ShapeSolution) -> Vec<f64> {
    let mut out: Vec<f64> =
        (0..gd.n).map(|i| (row_product([&gd.g[i], &gd.gp[i], &gd.gpp[i]], zs) - 1.0).norm()).collect();
    let m = &gd.meridian;
    out.push((row_product([&m.c, &m.cp, &m.cpp], zs) - 1.0).norm());
    out
}

/// Edge equations with the replaced row swapped for the meridian, in
/// product form.
pub struct GluingSystem<'a> {
    pub gd: &'a GluingData,
}

impl GluingSystem<'_> {
    fn rows(&self, i: usize) -> [&[i64]; 3] {
        let gd = self.gd;
        if i == gd.replaced_row {
            [&gd.meridian.c, &gd.meridian.cp, &gd.meridian.cpp]
        } else {
            [&gd.g[i], &gd.gp[i], &gd.gpp[i]]
        }
    }
}

impl RationalSystem for GluingSystem<'_> {
    fn dim(&self) -> usize {
        self.gd.n
    }

    fn residual(&self, z: &[C64]) -> Option<Vec<C64>> {
        let zs = ShapeSolution::new(z.to_vec()).ok()?;
        Some((0..self.gd.n).map(|i| row_product(self.rows(i), &zs) - 1.0).collect())
    }

    fn jacobian(&self, z: &[C64]) -> Option<CMatrix> {
        let zs = ShapeSolution::new(z.to_vec()).ok()?;
        let n = self.gd.n;
        let p: Vec<C64> = (0..n).map(|i| row_product(self.rows(i), &zs)).collect();
        Some(CMatrix::from_fn(n, n, |i, j| {
            let r = self.rows(i);
            let zt = zs.zeta[j];
            p[i] * (zt[0] * r[0][j] as f64 + zt[1] * r[1][j] as f64 + zt[2] * r[2][j] as f64)
        }))
    }
}

/// Newton refinement of approximate shapes.
pub fn refine_shapes(gd: &GluingData, z: &[C64]) -> Result<ShapeSolution> {
    let out = newton_solve(&GluingSystem { gd }, z, &NewtonOptions::default())?;
    ShapeSolution::new(out.x)
}

/// Solution of the gluing equations with the largest |Σ D(z)| among
/// random starts.
pub fn solve_shapes(gd: &GluingData, seed: u64, restarts: usize) -> Result<ShapeSolution> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(f64, ShapeSolution)> = None;
    for k in 0..restarts {
        let sgn = if k % 2 == 0 { -1.0 } else { 1.0 };
        let z: Vec<C64> =
            (0..gd.n).map(|_| C64::new(rng.gen_range(-1.0..2.0), sgn * rng.gen_range(0.2..2.0))).collect();
        let Ok(zs) = refine_shapes(gd, &z) else { continue };
        let vol = zs.volume().abs();
        if vol.is_finite() && best.as_ref().is_none_or(|(v, _)| vol > *v + 1e-9) {
            best = Some((vol, zs));
        }
    }
    best.map(|(_, zs)| zs).ok_or_else(|| Error::NoGeometricSolution("gluing equations have no solution".into()))
}

/// One elimination: equation `row` solved for shape `variable`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EliminationStep {
    pub row: usize,
    pub kind: String,
    pub variable: usize,
    pub det_before: C64,
    pub det_after: C64,
    /// Largest relative deviation from det_before = ±det_after / z_k over
    /// the solution and the perturbed points.
    pub residual: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Reduction {
    pub steps: Vec<EliminationStep>,
    /// Shapes left as variables, in edge-row order of the remaining O/U rows.
    pub free: Vec<usize>,
    /// Rows of the reduced system.
    pub rows: Vec<usize>,
    /// Exponent of free shape l in shape j.
    pub substitution: Vec<Vec<i64>>,
    pub det_full: C64,
    pub det_reduced: C64,
    /// Product of the eliminated shapes.
    pub eliminated_product: C64,
    /// Product of the free shapes.
    pub free_product: C64,
    /// det_full against ±det_reduced / eliminated_product.
    pub chain_residual: f64,
}

/// Monomial equations in shapes and free variables during the reduction.
struct Reducer<'a> {
    gd: &'a GluingData,
    n: usize,
    /// m[j][l]: exponent of shape l (free) in shape j.
    m: Vec<Vec<i64>>,
    free: Vec<bool>,
    rows: Vec<usize>,
}

impl Reducer<'_> {
    fn row(&self, i: usize) -> [&[i64]; 3] {
        let gd = self.gd;
        if i == gd.replaced_row {
            [&gd.meridian.c, &gd.meridian.cp, &gd.meridian.cpp]
        } else {
            [&gd.g[i], &gd.gp[i], &gd.gpp[i]]
        }
    }

    fn free_vars(&self) -> Vec<usize> {
        (0..self.n).filter(|&l| self.free[l]).collect()
    }

    /// Shapes at given values of the free variables.
    fn shapes(&self, w: &[C64]) -> Vec<C64> {
        (0..self.n)
            .map(|j| self.free_vars().iter().zip(w).map(|(&l, &v)| v.powi(self.m[j][l] as i32)).product())
            .collect()
    }

    /// ∂g_i/∂w_l = Σ_j M_ij m_jl z_j / w_l over the current rows and free variables.
    fn jacobian(&self, zs: &ShapeSolution) -> CMatrix {
        let fv = self.free_vars();
        CMatrix::from_fn(self.rows.len(), fv.len(), |a, b| {
            let r = self.row(self.rows[a]);
            let l = fv[b];
            (0..self.n)
                .filter(|&j| self.m[j][l] != 0)
                .map(|j| {
                    let zt = zs.zeta[j];
                    let mij = zt[0] * r[0][j] as f64 + zt[1] * r[1][j] as f64 + zt[2] * r[2][j] as f64;
                    mij * self.m[j][l] as f64 * zs.z[j] / zs.z[l]
                })
                .sum()
        })
    }

    /// Exponents of the free variables in row `i`, which must involve z only.
    fn row_exponents(&self, i: usize) -> Result<Vec<i64>> {
        let r = self.row(i);
        if r[1].iter().chain(r[2]).any(|&v| v != 0) {
            return Err(Error::EliminationCycle(format!("row {i} involves z' or z''")));
        }
        let mut e = vec![0i64; self.n];
        for j in 0..self.n {
            if r[0][j] != 0 {
                for l in 0..self.n {
                    e[l] += r[0][j] * self.m[j][l];
                }
            }
        }
        Ok(e)
    }

    /// Solves row `i` for free shape `k`.
    fn eliminate(&mut self, i: usize, k: usize) -> Result<()> {
        if !self.free[k] {
            return Err(Error::EliminationCycle(format!("shape {k} already eliminated before row {i}")));
        }
        let e = self.row_exponents(i)?;
        let ek = e[k];
        if ek.abs() != 1 {
            return Err(Error::EliminationCycle(format!("shape {k} has exponent {ek} in row {i}")));
        }
        // z_k = Π_{l != k} z_l^{-e_l / e_k}
        let sub: Vec<i64> = (0..self.n).map(|l| if l == k { 0 } else { -e[l] * ek }).collect();
        for j in 0..self.n {
            let c = self.m[j][k];
            if c != 0 {
                self.m[j][k] = 0;
                for l in 0..self.n {
                    self.m[j][l] += c * sub[l];
                }
            }
        }
        self.free[k] = false;
        self.rows.retain(|&r| r != i);
        Ok(())
    }
}

fn tet_at(tri: &IdealTriangulation, edge: usize, pos: Position) -> Vec<usize> {
    tri.edges[edge].incidences.iter().map(|&(t, _)| t).filter(|&t| tri.tets[t].position == pos).collect()
}

/// Eliminates one shape per C-edge (its S corner), per R-edge (the N corner
/// of its bottommost crossing) and one through the meridian, leaving the
/// O/U equations in the remaining shapes. The meridian replaces the last
/// O/U row.
pub fn reduce_variables(gd: &GluingData, zs: &ShapeSolution, tri: &IdealTriangulation) -> Result<Reduction> {
    let n_ou = tri.n_ou();
    let gd = gd.with_replaced_row(n_ou - 1);
    let n = gd.n;
    let mut red = Reducer {
        gd: &gd,
        n,
        m: (0..n).map(|j| (0..n).map(|l| i64::from(j == l)).collect()).collect(),
        free: vec![true; n],
        rows: (0..n).collect(),
    };

    let mut plan: Vec<(usize, String, Option<usize>)> = Vec::new();
    let mut c_rows = tri.edge_rows_of(EdgeKind::C);
    c_rows.sort_by_key(|&i| tri.edges[i].members[0].index);
    for i in c_rows {
        let s = tet_at(tri, i, Position::S);
        let k = s.first().copied().ok_or_else(|| Error::EliminationCycle(format!("C-edge {i} has no S corner")))?;
        plan.push((i, "C".into(), Some(k)));
    }
    let mut r_rows = tri.edge_rows_of(EdgeKind::R);
    let top = |i: usize| tri.edges[i].incidences.iter().map(|&(t, _)| tri.tets[t].crossing).min().unwrap_or(0);
    r_rows.sort_by_key(|&i| top(i));
    for i in r_rows {
        let k = tet_at(tri, i, Position::N).into_iter().max_by_key(|&t| tri.tets[t].crossing);
        let k = k.ok_or_else(|| Error::EliminationCycle(format!("R-edge {i} has no N corner")))?;
        plan.push((i, "R".into(), Some(k)));
    }
    plan.push((gd.replaced_row, "meridian".into(), None));

    let mut rng = ChaCha8Rng::seed_from_u64(0x7265_6475);
    let det_full = det_complex(&red.jacobian(zs));
    let mut steps = Vec::new();
    let mut eliminated_product = C64::new(1.0, 0.0);
    for (i, kind, pref) in plan {
        let k = match pref {
            Some(k) => k,
            None => {
                let e = red.row_exponents(i)?;
                let last = (0..n).rev().find(|&j| gd.meridian.c[j] != 0 && red.free[j] && e[j].abs() == 1);
                last.or_else(|| (0..n).find(|&j| red.free[j] && e[j].abs() == 1))
                    .ok_or_else(|| Error::EliminationCycle("meridian has no free shape with exponent ±1".into()))?
            }
        };
        let before = red.free_vars();
        let snapshot = (red.m.clone(), red.free.clone(), red.rows.clone());
        red.eliminate(i, k)?;
        let det_before = {
            let after = (red.m.clone(), red.free.clone(), red.rows.clone());
            (red.m, red.free, red.rows) = snapshot.clone();
            let d = det_complex(&red.jacobian(zs));
            (red.m, red.free, red.rows) = after;
            d
        };
        let det_after = det_complex(&red.jacobian(zs));
        let mut residual = rel_pm(det_before, det_after / zs.z[k]);
        // same identity at points of the current solution set
        for _ in 0..10 {
            let w: Vec<C64> = red
                .free_vars()
                .iter()
                .map(|_| C64::from_polar(rng.gen_range(0.6..1.6), rng.gen_range(-3.0..3.0)))
                .collect();
            let Ok(pz) = ShapeSolution::new(red.shapes(&w)) else { continue };
            let a = det_complex(&red.jacobian(&pz));
            let after = (red.m.clone(), red.free.clone(), red.rows.clone());
            (red.m, red.free, red.rows) = snapshot.clone();
            let b = det_complex(&red.jacobian(&pz));
            (red.m, red.free, red.rows) = after;
            residual = residual.max(rel_pm(b, a / pz.z[k]));
        }
        debug_assert!(before.contains(&k));
        eliminated_product *= zs.z[k];
        steps.push(EliminationStep { row: i, kind, variable: k, det_before, det_after, residual });
    }

    let free = red.free_vars();
    let det_reduced = det_complex(&red.jacobian(zs));
    let free_product: C64 = free.iter().map(|&l| zs.z[l]).product();
    let chain_residual = rel_pm(det_full, det_reduced / eliminated_product);
    Ok(Reduction {
        steps,
        free,
        rows: red.rows.clone(),
        substitution: red.m,
        det_full,
        det_reduced,
        eliminated_product,
        free_product,
        chain_residual,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HessianCheck {
    /// det H against ±(Π free z) det J_reduced.
    pub residual: f64,
    pub det_hessian: C64,
    pub rhs: C64,
    /// Determinant of the x-exponents of the free shapes.
    pub exponent_det: i64,
    /// Residual of the reduced equations at the solution.
    pub equation_residual: f64,
}

/// Compares the Hessian of the potential with the reduced Jacobian.
pub fn verify_hessian_identity(
    v: &Potential,
    x: &[C64],
    red: &Reduction,
    gd: &GluingData,
    zs: &ShapeSolution,
    corners: &[Corner],
) -> HessianCheck {
    let det_h = det_complex(&v.hessian(x));
    let rhs = red.free_product * red.det_reduced;
    let rows: Vec<Vec<i64>> = red.free.iter().map(|&l| corners[l].shape_exponents.clone()).collect();
    let exponent_det = IntegerMatrix::from_rows(&rows).ok().and_then(|m| i64::try_from(m.det()).ok()).unwrap_or(0);
    let equation_residual =
        red.rows.iter().map(|&i| (row_product([&gd.g[i], &gd.gp[i], &gd.gpp[i]], zs) - 1.0).norm()).fold(0.0, f64::max);
    HessianCheck { residual: rel_pm(det_h, rhs), det_hessian: det_h, rhs, exponent_det, equation_residual }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NormalizerCheck {
    /// Ω1 Ω2 against ±(ζ_1 ⋯ ζ_N) / ζ^{f+g}.
    pub residual: f64,
    pub lhs: C64,
    pub rhs: C64,
    /// Ω1 Ω2 against ±1/ζ^f for the base flattening f.
    pub base_residual: f64,
    /// ζ^g for the transfer g.
    pub transfer_weight: C64,
    /// Tetrahedra whose shapes multiply to Π z_j.
    pub end_tets: Option<(usize, usize)>,
    /// ζ_1 ⋯ ζ_N against 1/(z_1 z_N).
    pub end_residual: f64,
    /// Largest |Π ζ - 1| over crossings carrying exactly three tetrahedra.
    pub crossing_residual: f64,
}

/// Checks the normalizer identity and its pieces at the solution.
pub fn verify_normalizer_identity(
    norms: &NormalizerPair,
    x: &[C64],
    base: &Flattening,
    transfer: &Flattening,
    zs: &ShapeSolution,
    tri: &IdealTriangulation,
    corners: &[Corner],
) -> NormalizerCheck {
    let one = C64::new(1.0, 0.0);
    let lhs = norms.omega1(x) * norms.omega2(x);
    let prod_zeta: C64 = zs.zeta.iter().map(|t| t[0]).product();
    let full = base.plus(transfer);
    let rhs = prod_zeta / zs.zeta_power(&full);
    let base_residual = rel_pm(lhs, one / zs.zeta_power(base));

    let n = zs.len();
    let total: Vec<i64> =
        (0..corners[0].shape_exponents.len()).map(|a| corners.iter().map(|c| c.shape_exponents[a]).sum()).collect();
    let end_tets = (0..n).flat_map(|i| (i + 1..n).map(move |k| (i, k))).find(|&(i, k)| {
        corners[i].shape_exponents.iter().zip(&corners[k].shape_exponents).zip(&total).all(|((a, b), t)| a + b == *t)
    });
    let end_residual = end_tets.map_or(f64::NAN, |(i, k)| rel_pm(prod_zeta, one / (zs.z[i] * zs.z[k])));

    let mut per_crossing: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (j, t) in tri.tets.iter().enumerate() {
        per_crossing.entry(t.crossing).or_default().push(j);
    }
    let crossing_residual = per_crossing
        .values()
        .filter(|ts| ts.len() == 3)
        .map(|ts| (ts.iter().map(|&j| zs.zeta[j][0]).product::<C64>() - 1.0).norm())
        .fold(0.0, f64::max);

    NormalizerCheck {
        residual: rel_pm(lhs, rhs),
        lhs,
        rhs,
        base_residual,
        transfer_weight: zs.zeta_power(transfer),
        end_tets,
        end_residual,
        crossing_residual,
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub tau: C64,
    pub omega: C64,
    pub sign: i8,
    pub discrepancy: f64,
    pub relative: f64,
    pub pass: bool,
    pub volume: f64,
    pub residuals: BTreeMap<String, f64>,
}

pub const COMPARISON_TOL: f64 = 1e-9;

/// Sign and size of the disagreement between τ and ±ω.
pub fn compare(tau: C64, omega: C64) -> ComparisonReport {
    let (sign, discrepancy) = sign_discrepancy(tau, omega);
    let relative = discrepancy / tau.norm();
    ComparisonReport {
        tau,
        omega,
        sign,
        discrepancy,
        relative,
        pass: relative <= COMPARISON_TOL,
        volume: 0.0,
        residuals: BTreeMap::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn zeta_relation() {
        let zs = ShapeSolution::new(vec![c(0.3, -1.2), c(-2.0, 0.5), c(1.5, 1.5)]).unwrap();
        for t in &zs.zeta {
            assert!((t[2] + t[0] * t[1]).norm() < 1e-14);
        }
    }

    #[test]
    fn degenerate_shapes_rejected() {
        assert!(matches!(ShapeSolution::new(vec![c(0.5, 0.5), c(1.0, 0.0)]), Err(Error::DegenerateShape(1))));
        assert!(matches!(ShapeSolution::new(vec![c(0.0, 0.0)]), Err(Error::DegenerateShape(0))));
    }

    #[test]
    fn compare_identical_and_opposite() {
        let t = c(0.487465, 1.738045);
        let r = compare(t, t);
        assert_eq!((r.sign, r.discrepancy), (1, 0.0));
        let r = compare(t, -t);
        assert_eq!(r.sign, -1);
        assert!(r.pass);
        assert!(!compare(t, t * 1.01).pass);
    }
}
