//! Lowest eigenpairs of `H(s)`, schedule sweeps with minimal-gap
//! refinement, and principal eigenvalues of (sub)graphs.

pub mod golden;
pub mod lanczos;

use std::io::Write;

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::hamiltonian::{AnnealInstance, SchedulePoint};
pub use golden::golden_section_min;
pub use lanczos::{lowest_eigenpairs, Eigenpairs, LanczosConfig, SymmetricOperator};

/// Gaps below this are treated as exact crossings.
pub const DEGENERATE_GAP: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct SolverOptions {
    /// Largest dimension handled by dense diagonalization.
    pub dense_max: usize,
    pub lanczos: LanczosConfig,
    /// Absolute tolerance in `s` for the minimal-gap refinement.
    pub refine_tol: f64,
    /// Evaluate sweep points on the rayon pool.
    pub parallel: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            dense_max: 2048,
            lanczos: LanczosConfig::default(),
            refine_tol: 1e-4,
            parallel: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Dense,
    Lanczos,
}

/// The two lowest eigenpairs of `H(s)`.
#[derive(Clone, Debug)]
pub struct LowestTwo {
    pub e0: f64,
    pub e1: f64,
    /// Normalized ground vector, sign fixed so its entries sum to a non-negative value.
    pub ground: Vec<f64>,
    pub excited: Vec<f64>,
    pub residuals: [f64; 2],
    pub method: Method,
}

impl LowestTwo {
    pub fn gap(&self) -> f64 {
        self.e1 - self.e0
    }
}

struct AtSchedule<'a> {
    inst: &'a AnnealInstance,
    s: f64,
}

impl SymmetricOperator for AtSchedule<'_> {
    fn dim(&self) -> usize {
        self.inst.dim()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        self.inst.apply_h_unchecked(self.s, x, y);
    }
}

/// Two lowest eigenpairs of `H(s)`: dense for `N <= dense_max`, Lanczos otherwise.
pub fn lowest_two(inst: &AnnealInstance, s: SchedulePoint, opts: &SolverOptions) -> Result<LowestTwo> {
    let n = inst.dim();
    if n < 2 {
        return Err(Error::Parameter("need at least two basis states".into()));
    }
    let (values, mut vectors, residuals, method) = if n <= opts.dense_max {
        let (values, vectors) = dense_lowest(inst.dense_matrix(s.value()), 2);
        (values, vectors, [0.0; 2], Method::Dense)
    } else {
        let op = AtSchedule { inst, s: s.value() };
        let pairs = lowest_eigenpairs(&op, 2, &opts.lanczos)?;
        (pairs.values, pairs.vectors, [pairs.residuals[0], pairs.residuals[1]], Method::Lanczos)
    };
    for v in &mut vectors {
        fix_sign(v);
    }
    let excited = vectors.pop().expect("two vectors");
    let ground = vectors.pop().expect("two vectors");
    Ok(LowestTwo {
        e0: values[0],
        e1: values[1],
        ground,
        excited,
        residuals,
        method,
    })
}

/// Lowest `k` eigenpairs of a dense symmetric matrix, ascending.
pub fn dense_lowest(m: DMatrix<f64>, k: usize) -> (Vec<f64>, Vec<Vec<f64>>) {
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    order
        .into_iter()
        .take(k)
        .map(|i| (eig.eigenvalues[i], eig.eigenvectors.column(i).iter().copied().collect()))
        .unzip()
}

/// All eigenvalues of a dense symmetric matrix, ascending.
pub fn dense_spectrum(m: DMatrix<f64>) -> Vec<f64> {
    let mut v: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

fn fix_sign(v: &mut [f64]) {
    let sum: f64 = v.iter().sum();
    let flip = if sum.abs() > 1e-12 {
        sum < 0.0
    } else {
        // Fall back to the largest-magnitude entry.
        v.iter().copied().fold(0.0f64, |a, x| if x.abs() > a.abs() { x } else { a }) < 0.0
    };
    if flip {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

/// One schedule value of a sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumPoint {
    pub s: f64,
    pub e0: f64,
    pub e1: f64,
    pub gap: f64,
    /// Overlap of the ground state with the target ground state.
    pub fidelity: f64,
    /// `⟨Ψ0| H_T - H_D |Ψ0⟩`.
    pub de0_ds: f64,
    /// Gap below [`DEGENERATE_GAP`]; fidelity then uses the two-level projector.
    pub degenerate: bool,
    /// Ground-vector residual `‖H v - e0 v‖` (0 for the dense path).
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnnealSweep {
    pub points: Vec<SpectrumPoint>,
    pub s_min: f64,
    pub g_min: f64,
}

impl AnnealSweep {
    pub fn degenerate_points(&self) -> impl Iterator<Item = &SpectrumPoint> {
        self.points.iter().filter(|p| p.degenerate)
    }
}

/// Uniform grid of `points` values spanning `[lo, hi]`.
pub fn uniform_grid(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>> {
    if points < 2 || !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) || lo >= hi {
        return Err(Error::Parameter(format!(
            "grid needs >= 2 points inside [0, 1], got {points} on [{lo}, {hi}]"
        )));
    }
    Ok((0..points)
        .map(|k| lo + (hi - lo) * k as f64 / (points - 1) as f64)
        .collect())
}

/// Evaluate one sweep point.
pub fn spectrum_point(inst: &AnnealInstance, s: f64, opts: &SolverOptions) -> Result<SpectrumPoint> {
    let sp = SchedulePoint::new(s)?;
    let low = lowest_two(inst, sp, opts)?;
    let target = inst.target();
    let g = target.ground_index();
    let gap = low.gap();
    let degenerate = gap < DEGENERATE_GAP;
    let mut fidelity = low.ground[g].powi(2);
    if degenerate {
        fidelity += low.excited[g].powi(2);
    }
    let mut hd = vec![0.0; inst.dim()];
    inst.apply_driver(&low.ground, &mut hd)?;
    let de0_ds = low
        .ground
        .iter()
        .zip(target.energies())
        .zip(&hd)
        .map(|((v, e), h)| v * (e * v - h))
        .sum();
    Ok(SpectrumPoint {
        s,
        e0: low.e0,
        e1: low.e1,
        gap,
        fidelity: fidelity.min(1.0),
        de0_ds,
        degenerate,
        residual: low.residuals[0],
    })
}

/// Evaluate `grid` and refine the minimal gap by golden-section search inside
/// the grid cells around the smallest sampled gap.
pub fn sweep(inst: &AnnealInstance, grid: &[f64], opts: &SolverOptions) -> Result<AnnealSweep> {
    if grid.len() < 2 {
        return Err(Error::Parameter("sweep grid needs at least two points".into()));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Parameter("sweep grid must be strictly increasing".into()));
    }
    let points: Vec<SpectrumPoint> = if opts.parallel {
        grid.par_iter().map(|&s| spectrum_point(inst, s, opts)).collect::<Result<_>>()?
    } else {
        grid.iter().map(|&s| spectrum_point(inst, s, opts)).collect::<Result<_>>()?
    };
    let (s_min, g_min) = refine_min_gap(inst, &points, opts)?;
    Ok(AnnealSweep { points, s_min, g_min })
}

/// Golden-section refinement of the minimal gap around the grid minimum.
pub fn refine_min_gap(inst: &AnnealInstance, points: &[SpectrumPoint], opts: &SolverOptions) -> Result<(f64, f64)> {
    let i = points
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.gap.total_cmp(&b.1.gap))
        .map(|(i, _)| i)
        .expect("non-empty grid");
    let lo = points[i.saturating_sub(1)].s;
    let hi = points[(i + 1).min(points.len() - 1)].s;
    let (s_ref, g_ref) = golden_section_min(
        |s| lowest_two(inst, SchedulePoint::new(s)?, opts).map(|l| l.gap()),
        lo,
        hi,
        opts.refine_tol,
    )?;
    log::debug!("grid minimum {:.3e} at s = {}, refined {g_ref:.3e} at s = {s_ref}", points[i].gap, points[i].s);
    Ok(if g_ref < points[i].gap {
        (s_ref, g_ref)
    } else {
        (points[i].s, points[i].gap)
    })
}

/// Right end of the grid cell with the largest fidelity increase, if that
/// increase exceeds `threshold`.
pub fn fidelity_jump(sweep: &AnnealSweep, threshold: f64) -> Option<f64> {
    largest_fidelity_step(sweep).and_then(|(s, step)| (step > threshold).then_some(s))
}

/// Largest single-cell fidelity increase and the right end of its cell.
pub fn largest_fidelity_step(sweep: &AnnealSweep) -> Option<(f64, f64)> {
    sweep
        .points
        .windows(2)
        .map(|w| (w[1].s, w[1].fidelity - w[0].fidelity))
        .max_by(|a, b| a.1.total_cmp(&b.1))
}

struct NegAdjacency<'a>(&'a Graph);

impl SymmetricOperator for NegAdjacency<'_> {
    fn dim(&self) -> usize {
        self.0.n()
    }

    fn apply(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = -self.0.neighbors(i).map(|j| x[j]).sum::<f64>();
        }
    }
}

/// Largest adjacency eigenvalue `λ` and its normalized eigenvector, with
/// non-negative entries when the graph is connected.
pub fn principal_eigenvalue(g: &Graph, opts: &SolverOptions) -> Result<(f64, Vec<f64>)> {
    let n = g.n();
    if n == 0 {
        return Err(Error::EmptySet);
    }
    if n == 1 {
        return Ok((0.0, vec![1.0]));
    }
    let (lambda, mut v) = if n <= opts.dense_max {
        let (vals, mut vecs) = dense_lowest(-g.dense_adjacency(), 1);
        (-vals[0], vecs.pop().expect("one vector"))
    } else {
        let mut pairs = lowest_eigenpairs(&NegAdjacency(g), 1, &opts.lanczos)?;
        (-pairs.values[0], pairs.vectors.pop().expect("one vector"))
    };
    fix_sign(&mut v);
    Ok((lambda, v))
}

/// Sweep profile as CSV with header `s,e0,e1,gap,fidelity,de0_ds`.
pub fn write_sweep_csv<W: Write>(sweep: &AnnealSweep, mut out: W) -> std::io::Result<()> {
    writeln!(out, "s,e0,e1,gap,fidelity,de0_ds")?;
    for p in &sweep.points {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            sig12(p.s),
            sig12(p.e0),
            sig12(p.e1),
            sig12(p.gap),
            sig12(p.fidelity),
            sig12(p.de0_ds)
        )?;
    }
    Ok(())
}

/// 12 significant digits in scientific notation.
pub fn sig12(x: f64) -> String {
    let rounded: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    format!("{rounded}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::{Normalization, TargetSpectrum};
    use approx::assert_abs_diff_eq;

    fn inst(g: Graph, e: Vec<f64>, norm: Normalization) -> AnnealInstance {
        AnnealInstance::new(g, TargetSpectrum::new(e).unwrap(), norm).unwrap()
    }

    #[test]
    fn driver_spectrum_of_cube() {
        let i = inst(Graph::hypercube(3).unwrap(), vec![0.0; 8], Normalization::NormalizedByD);
        let low = lowest_two(&i, SchedulePoint::new(0.0).unwrap(), &SolverOptions::default()).unwrap();
        assert_abs_diff_eq!(low.e0, -1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(low.e1, -1.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(low.gap(), 2.0 / 3.0, epsilon = 1e-12);
        assert!(low.ground.iter().all(|&x| x > 0.0));
    }

    #[test]
    fn end_of_schedule_is_the_target() {
        let e = vec![0.3, -0.7, 0.1, 0.9, -0.2, 0.4, 0.0, 0.8];
        let i = inst(Graph::hypercube(3).unwrap(), e, Normalization::NormalizedByD);
        let low = lowest_two(&i, SchedulePoint::new(1.0).unwrap(), &SolverOptions::default()).unwrap();
        assert_abs_diff_eq!(low.e0, -0.7, epsilon = 1e-12);
        assert_abs_diff_eq!(low.e1, -0.2, epsilon = 1e-12);
        assert_abs_diff_eq!(low.ground[1], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn two_qubit_against_characteristic_oracle() {
        // H(1/2) for E = (-1, 0, 0, 1) on the square, normalized driver:
        // symmetric sector {e0, (e1+e2)/√2, e3} plus the antisymmetric state at 0.
        let i = inst(Graph::hypercube(2).unwrap(), vec![-1.0, 0.0, 0.0, 1.0], Normalization::NormalizedByD);
        let low = lowest_two(&i, SchedulePoint::new(0.5).unwrap(), &SolverOptions::default()).unwrap();
        // Symmetric block [[-1/2, -√2/4, 0], [-√2/4, 0, -√2/4], [0, -√2/4, 1/2]]:
        // characteristic polynomial -λ³ + λ/2 = 0 → λ ∈ {0, ±1/√2}.
        assert_abs_diff_eq!(low.e0, -std::f64::consts::FRAC_1_SQRT_2, epsilon = 1e-10);
        assert_abs_diff_eq!(low.e1, 0.0, epsilon = 1e-10);
    }

    #[test]
    fn two_level_closed_form() {
        // N = 2, d = 1: H = [[-s, -(1-s)], [-(1-s), s]] → gap = 2√(s² + (1-s)²).
        let i = inst(Graph::complete(2), vec![-1.0, 1.0], Normalization::NormalizedByD);
        let grid = uniform_grid(0.0, 1.0, 21).unwrap();
        let sw = sweep(&i, &grid, &SolverOptions::default()).unwrap();
        for p in &sw.points {
            let s = p.s;
            assert_abs_diff_eq!(p.gap, 2.0 * (s * s + (1.0 - s).powi(2)).sqrt(), epsilon = 1e-12);
        }
        assert_abs_diff_eq!(sw.s_min, 0.5, epsilon = 1e-4);
        assert_abs_diff_eq!(sw.g_min, std::f64::consts::SQRT_2, epsilon = 1e-8);
    }

    #[test]
    fn flat_target_flags_degeneracy() {
        let i = inst(Graph::hypercube(3).unwrap(), vec![0.5; 8], Normalization::NormalizedByD);
        let grid = uniform_grid(0.0, 1.0, 11).unwrap();
        let sw = sweep(&i, &grid, &SolverOptions::default()).unwrap();
        // Gap is (1-s)·2/3, degenerate only at s = 1.
        for p in &sw.points[..10] {
            assert_abs_diff_eq!(p.gap, (1.0 - p.s) * 2.0 / 3.0, epsilon = 1e-12);
            assert!(!p.degenerate);
        }
        assert!(sw.points[10].degenerate);
        assert_eq!(sw.degenerate_points().count(), 1);
    }

    #[test]
    fn principal_eigenvalues() {
        let (l, v) = principal_eigenvalue(&Graph::complete(4), &SolverOptions::default()).unwrap();
        assert_abs_diff_eq!(l, 3.0, epsilon = 1e-12);
        assert!(v.iter().all(|&x| x > 0.0));
        let (l, _) = principal_eigenvalue(&Graph::path(3), &SolverOptions::default()).unwrap();
        assert_abs_diff_eq!(l, 2f64.sqrt(), epsilon = 1e-12);

        // Lanczos path on a large cycle.
        let opts = SolverOptions {
            dense_max: 10,
            ..Default::default()
        };
        let (l, v) = principal_eigenvalue(&Graph::cycle(64).unwrap(), &opts).unwrap();
        assert_abs_diff_eq!(l, 2.0, epsilon = 1e-10);
        assert!(v.iter().all(|&x| x > -1e-10));
    }

    #[test]
    fn fidelity_jump_detection() {
        let mk = |f: &[(f64, f64)]| AnnealSweep {
            points: f
                .iter()
                .map(|&(s, fidelity)| SpectrumPoint {
                    s,
                    e0: 0.0,
                    e1: 1.0,
                    gap: 1.0,
                    fidelity,
                    de0_ds: 0.0,
                    degenerate: false,
                    residual: 0.0,
                })
                .collect(),
            s_min: 0.0,
            g_min: 1.0,
        };
        let smooth = mk(&(0..=10).map(|k| (k as f64 / 10.0, k as f64 / 10.0)).collect::<Vec<_>>());
        assert_eq!(fidelity_jump(&smooth, 0.5), None);
        let step = mk(&(0..=10)
            .map(|k| {
                let s = k as f64 / 10.0;
                (s, if k >= 7 { 1.0 } else { 0.0 })
            })
            .collect::<Vec<_>>());
        assert_abs_diff_eq!(fidelity_jump(&step, 0.5).unwrap(), 0.7, epsilon = 1e-15);
    }

    #[test]
    fn csv_layout() {
        let i = inst(Graph::complete(2), vec![-1.0, 1.0], Normalization::NormalizedByD);
        let sw = sweep(&i, &[0.0, 1.0], &SolverOptions::default()).unwrap();
        let mut buf = Vec::new();
        write_sweep_csv(&sw, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "s,e0,e1,gap,fidelity,de0_ds");
        assert_eq!(lines.len(), 3);
        assert!(lines[1].starts_with("0,-1,1,"));
    }
}
