//! Non-degenerate Rayleigh-Schrödinger perturbation theory around the
//! diagonal target, used as a baseline for the crossing location.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hamiltonian::AnnealInstance;
use crate::instances::LabeledInstance;

/// Scan resolution for bracketing crossings on `(0, 1]`.
const SCAN_POINTS: usize = 2000;
const ROOT_TOL: f64 = 1e-6;

/// First-order energy of basis state `z`: the driver has no diagonal, so
/// this is `s E_z`.
pub fn first_order_energy(inst: &AnnealInstance, z: usize, s: f64) -> f64 {
    s * inst.target().energies()[z]
}

/// `s E_z + Σ_{z'∈N(z)} c²(1-s)² / (s (E_z - E_z'))`.
pub fn second_order_energy(inst: &AnnealInstance, z: usize, s: f64) -> Result<f64> {
    if !(s > 0.0 && s <= 1.0) {
        return Err(Error::Parameter(format!("second-order energy needs s in (0, 1], got {s}")));
    }
    let e = inst.target().energies();
    let c = inst.coupling();
    let weight = (c * (1.0 - s)).powi(2) / s;
    let mut correction = 0.0;
    for j in inst.driver().neighbors(z) {
        let gap = e[z] - e[j];
        if gap == 0.0 {
            return Err(Error::Divergence { state: z, neighbor: j });
        }
        correction += weight / gap;
    }
    Ok(s * e[z] + correction)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NdptPrediction {
    /// Crossing with second-order corrections on both curves.
    pub s_cross: Option<f64>,
    /// Crossing when the global minimum is kept at first order.
    pub s_cross_global_first_order: Option<f64>,
    /// The two levels meet only at `s = 1` (`ΔE_T = 0`).
    pub boundary_degenerate: bool,
    pub local_state: usize,
    pub global_state: usize,
    /// `(s, E_local, E_global)` on a coarse grid, both at second order.
    #[serde(skip)]
    pub curve: Vec<(f64, f64, f64)>,
}

/// Predicted crossing of the local representative and the global minimum.
pub fn predict_crossing_ndpt(li: &LabeledInstance) -> Result<NdptPrediction> {
    let inst = &li.instance;
    let (local, global) = (li.local_representative(), li.global_node);
    // Surface divergences before scanning.
    second_order_energy(inst, local, 0.5)?;
    second_order_energy(inst, global, 0.5)?;

    let e = inst.target().energies();
    let curve = (1..=100)
        .map(|k| {
            let s = k as f64 / 100.0;
            Ok((s, second_order_energy(inst, local, s)?, second_order_energy(inst, global, s)?))
        })
        .collect::<Result<Vec<_>>>()?;
    if e[local] == e[global] {
        return Ok(NdptPrediction {
            s_cross: None,
            s_cross_global_first_order: None,
            boundary_degenerate: true,
            local_state: local,
            global_state: global,
            curve,
        });
    }
    let both = |s: f64| -> f64 {
        second_order_energy(inst, local, s).expect("checked") - second_order_energy(inst, global, s).expect("checked")
    };
    let first_global =
        |s: f64| -> f64 { second_order_energy(inst, local, s).expect("checked") - first_order_energy(inst, global, s) };
    Ok(NdptPrediction {
        s_cross: last_root(both),
        s_cross_global_first_order: last_root(first_global),
        boundary_degenerate: false,
        local_state: local,
        global_state: global,
        curve,
    })
}

/// Largest root of `f` on `(0, 1]`, bracketed on a uniform scan and bisected.
pub fn last_root(f: impl Fn(f64) -> f64) -> Option<f64> {
    let mut hi = 1.0;
    let mut f_hi = f(hi);
    if f_hi == 0.0 {
        return Some(hi);
    }
    for k in (1..SCAN_POINTS).rev() {
        let lo = k as f64 / SCAN_POINTS as f64;
        let f_lo = f(lo);
        if f_lo == 0.0 {
            return Some(lo);
        }
        if f_lo.signum() != f_hi.signum() {
            return Some(bisect(&f, lo, hi, f_lo));
        }
        hi = lo;
        f_hi = f_lo;
    }
    None
}

fn bisect(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, mut f_lo: f64) -> f64 {
    while hi - lo > ROOT_TOL {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if fm.signum() == f_lo.signum() {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
