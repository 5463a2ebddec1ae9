//! End-to-end analysis of one instance: first-order bounds, optional exact
//! sweep, fidelity jump and the perturbative baseline.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::bounds::{bounds_report, BoundsReport, LocalMinimum};
use crate::error::Result;
use crate::graph::induced_subgraph;
use crate::hamiltonian::AnnealInstance;
use crate::instances::LabeledInstance;
use crate::ndpt::predict_crossing_ndpt;
use crate::spectral::{fidelity_jump, sig12, sweep, uniform_grid, AnnealSweep, SolverOptions};
use crate::symmetry::{equitable_partition, quotient_matrix, QuotientJson};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug)]
pub struct AnalyzeOptions {
    /// Uniform grid size on `[0, 1]`; `None` skips the exact sweep.
    pub grid: Option<usize>,
    pub use_symmetry: bool,
    pub ndpt: bool,
    /// Minimal single-cell fidelity increase reported as a jump.
    pub fidelity_threshold: f64,
    pub solver: SolverOptions,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            grid: Some(201),
            use_symmetry: false,
            ndpt: false,
            fidelity_threshold: 0.5,
            solver: SolverOptions::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub schema: u32,
    pub seed: Option<u64>,
    #[serde(flatten)]
    pub bounds: BoundsReport,
    pub v_size: usize,
    pub s_min: Option<f64>,
    pub g_min: Option<f64>,
    pub fidelity_jump: Option<f64>,
    pub degenerate_points: usize,
    pub ndpt_s_cross: Option<f64>,
    pub ndpt_s_cross_global_first_order: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub quotient: Option<QuotientJson>,
}

/// Analyze a labeled instance; the sweep is returned for CSV output.
pub fn analyze(li: &LabeledInstance, seed: Option<u64>, opts: &AnalyzeOptions) -> Result<(AnalysisReport, Option<AnnealSweep>)> {
    let ndpt = if opts.ndpt { Some(predict_crossing_ndpt(li)?) } else { None };
    let (mut report, sw) = analyze_with(&li.instance, &li.local_min, seed, opts)?;
    if let Some(p) = ndpt {
        report.ndpt_s_cross = p.s_cross;
        report.ndpt_s_cross_global_first_order = p.s_cross_global_first_order;
    }
    Ok((report, sw))
}

/// Analyze an instance against an explicit local minimum (no baseline).
pub fn analyze_with(
    inst: &AnnealInstance,
    lm: &LocalMinimum,
    seed: Option<u64>,
    opts: &AnalyzeOptions,
) -> Result<(AnalysisReport, Option<AnnealSweep>)> {
    let mut lm = lm.clone();
    let mut quotient = None;
    if opts.use_symmetry {
        lm = lm.with_symmetry(inst.driver())?;
        let (sub, _) = induced_subgraph(inst.driver(), &lm.v)?;
        if sub.is_connected() {
            quotient = Some(QuotientJson::from(&quotient_matrix(&sub, &equitable_partition(&sub))?));
        }
    }
    let bounds = bounds_report(inst, &lm, opts.use_symmetry)?;
    let sw = match opts.grid {
        Some(points) => Some(sweep(inst, &uniform_grid(0.0, 1.0, points)?, &opts.solver)?),
        None => None,
    };
    let report = AnalysisReport {
        schema: SCHEMA_VERSION,
        seed,
        bounds,
        v_size: lm.v.len(),
        s_min: sw.as_ref().map(|s| s.s_min),
        g_min: sw.as_ref().map(|s| s.g_min),
        fidelity_jump: sw.as_ref().and_then(|s| fidelity_jump(s, opts.fidelity_threshold)),
        degenerate_points: sw.as_ref().map_or(0, |s| s.degenerate_points().count()),
        ndpt_s_cross: None,
        ndpt_s_cross_global_first_order: None,
        quotient,
    };
    Ok((report, sw))
}

/// One row of a local-weight sweep of the WMIS instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WmisSweepRow {
    pub w_l: f64,
    pub delta_e_t: f64,
    pub s_min_exact: Option<f64>,
    pub bound_lo: f64,
    pub bound_hi: f64,
    pub bound_hi_sym: Option<f64>,
    pub ndpt_s_cross: Option<f64>,
}

pub const WMIS_SWEEP_HEADER: &str = "w_l,delta_e_t,s_min_exact,bound_lo,bound_hi,bound_hi_sym,ndpt_s_cross";

/// One row of a batch scatter of toy instances.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScatterRow {
    pub seed: u64,
    pub class: crate::bounds::Classification,
    pub s_min: Option<f64>,
    pub s_star_lower: f64,
    pub s_star_upper: f64,
    pub s_prime: f64,
    pub ndpt_s_cross: Option<f64>,
}

pub const SCATTER_HEADER: &str = "seed,class,s_min,s_star_lower,s_star_upper,s_prime,ndpt_s_cross";

impl ScatterRow {
    pub fn from_report(seed: u64, r: &AnalysisReport) -> Self {
        ScatterRow {
            seed,
            class: r.bounds.classification,
            s_min: r.s_min,
            s_star_lower: r.bounds.s_star_lower(),
            s_star_upper: r.bounds.s_star_upper(),
            s_prime: r.bounds.s_prime,
            ndpt_s_cross: r.ndpt_s_cross,
        }
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(sig12).unwrap_or_default()
}

pub fn write_wmis_sweep_csv<W: Write>(rows: &[WmisSweepRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{WMIS_SWEEP_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            sig12(r.w_l),
            sig12(r.delta_e_t),
            opt(r.s_min_exact),
            sig12(r.bound_lo),
            sig12(r.bound_hi),
            opt(r.bound_hi_sym),
            opt(r.ndpt_s_cross)
        )?;
    }
    Ok(())
}

pub fn write_scatter_csv<W: Write>(rows: &[ScatterRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{SCATTER_HEADER}")?;
    for r in rows {
        let class = serde_json::to_value(r.class).expect("enum serializes");
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.seed,
            class.as_str().unwrap_or_default(),
            opt(r.s_min),
            sig12(r.s_star_lower),
            sig12(r.s_star_upper),
            sig12(r.s_prime),
            opt(r.ndpt_s_cross)
        )?;
    }
    Ok(())
}
