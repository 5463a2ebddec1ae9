//! First-order degenerate perturbation bounds on the energy of a state
//! localized in a local minimum `V`, the crossing location `s*` with the
//! global minimum, the delocalized crossing `s'`, and the resulting
//! classification of an instance.
//!
//! All formulas are written for a driver `H_D = -c A_G` on a `d`-regular
//! graph, so the normalized (`c = 1/d`) and unnormalized (`c = 1`)
//! conventions share one code path.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{
    conductance, connected_components, induced_subgraph, max_degree_in, Graph, NodeSet, Rational,
};
use crate::hamiltonian::{AnnealInstance, Normalization};
use crate::spectral::{principal_eigenvalue, SolverOptions};
use crate::symmetry::improved_lambda_upper;

/// A (nearly) degenerate set of target states treated as one level.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalMinimum {
    pub v: NodeSet,
    /// Representative energy `E_V^T` of the set.
    pub e_v_target: f64,
    pub phi: Rational,
    pub dmax: usize,
    pub lambda_v: Option<f64>,
    pub symmetry_bound: Option<f64>,
}

impl LocalMinimum {
    /// Requires `G(V)` connected; split disconnected sets with
    /// [`split_components`] first.
    pub fn new(g: &Graph, v: NodeSet, e_v_target: f64) -> Result<Self> {
        let (sub, _) = induced_subgraph(g, &v)?;
        if !sub.is_connected() {
            return Err(Error::Validation(format!(
                "induced subgraph of the local minimum has {} components",
                connected_components(&sub).len()
            )));
        }
        Ok(LocalMinimum {
            phi: conductance(g, &v)?,
            dmax: max_degree_in(g, &v)?,
            v,
            e_v_target,
            lambda_v: None,
            symmetry_bound: None,
        })
    }

    /// Uses the minimum target energy over `v` as `E_V^T`, rejecting sets
    /// whose energies spread wider than `epsilon`.
    pub fn from_energies(inst: &AnnealInstance, v: NodeSet, epsilon: f64) -> Result<Self> {
        let e = inst.target().energies();
        if v.is_empty() {
            return Err(Error::EmptySet);
        }
        let lo = v.members().iter().map(|&z| e[z]).fold(f64::INFINITY, f64::min);
        let hi = v.members().iter().map(|&z| e[z]).fold(f64::NEG_INFINITY, f64::max);
        if hi - lo > epsilon * (1.0 + 1e-9) + 1e-12 {
            return Err(Error::Validation(format!(
                "local minimum energies span {} > epsilon = {epsilon}",
                hi - lo
            )));
        }
        Self::new(inst.driver(), v, lo)
    }

    /// Attach `λ_V` from an exact principal-eigenvalue computation.
    pub fn with_lambda(mut self, g: &Graph, opts: &SolverOptions) -> Result<Self> {
        let (sub, _) = induced_subgraph(g, &self.v)?;
        self.lambda_v = Some(principal_eigenvalue(&sub, opts)?.0);
        Ok(self)
    }

    /// Attach the symmetry-improved upper bound on `λ_V`.
    pub fn with_symmetry(mut self, g: &Graph) -> Result<Self> {
        let (sub, _) = induced_subgraph(g, &self.v)?;
        self.symmetry_bound = Some(improved_lambda_upper(&sub)?);
        Ok(self)
    }

    /// `d - φ(V)`, the lower bound on `λ_V`.
    pub fn avg_degree(&self, d: usize) -> f64 {
        to_f64(Rational::from_integer(d as i64) - self.phi)
    }
}

/// Connected pieces of `v` as separate node sets.
pub fn split_components(g: &Graph, v: &NodeSet) -> Result<Vec<NodeSet>> {
    let (sub, map) = induced_subgraph(g, v)?;
    connected_components(&sub)
        .into_iter()
        .map(|c| NodeSet::new(g, c.members().iter().map(|&i| map[i])))
        .collect()
}

/// Finds the nearly degenerate set around the lowest non-ground target level:
/// states within `epsilon` of the lowest excited energy, restricted to the
/// driver-connected piece containing the lowest such state.
pub fn infer_local_minimum(inst: &AnnealInstance, epsilon: f64) -> Result<LocalMinimum> {
    let t = inst.target();
    if t.is_ground_degenerate() {
        return Err(Error::DegenerateGround("target ground state is degenerate".into()));
    }
    let e = t.energies();
    let g = t.ground_index();
    let seed = (0..e.len())
        .filter(|&z| z != g)
        .min_by(|&a, &b| e[a].total_cmp(&e[b]))
        .ok_or_else(|| Error::DegenerateGround("single-state target".into()))?;
    let cutoff = e[seed] + epsilon * (1.0 + 1e-9) + 1e-12;
    let g_ref = inst.driver();
    let mut members = vec![seed];
    let mut seen = vec![false; e.len()];
    seen[seed] = true;
    let mut head = 0;
    while head < members.len() {
        let i = members[head];
        head += 1;
        for j in g_ref.neighbors(i) {
            if !seen[j] && j != g && e[j] <= cutoff {
                seen[j] = true;
                members.push(j);
            }
        }
    }
    LocalMinimum::from_energies(inst, NodeSet::new(g_ref, members)?, epsilon)
}

fn to_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Energy of the delocalized driver ground state, first order in `H_T`:
/// `E_D0 (1-s) + s ⟨E_T⟩` with `E_D0 = -c d`.
pub fn e_deloc(inst: &AnnealInstance, s: f64) -> Result<f64> {
    Ok(inst.driver_ground_energy()? * (1.0 - s) + s * inst.target().mean_energy())
}

/// Energy of the (non-degenerate) global minimum: `s E_0^T`.
pub fn e_global(inst: &AnnealInstance, s: f64) -> Result<f64> {
    if inst.target().is_ground_degenerate() {
        return Err(Error::DegenerateGround(
            "degenerate target ground state; model it as a LocalMinimum".into(),
        ));
    }
    Ok(s * inst.target().ground_energy())
}

/// Lower and upper bounds on the localized energy `E_V(s)`:
/// `-c(1-s) d_max + s E_V` and `-c(1-s)(d - φ) + s E_V`.
pub fn e_local_bounds(lm: &LocalMinimum, s: f64, d: usize, convention: Normalization) -> (f64, f64) {
    let c = convention.coupling(d);
    let lower = -c * (1.0 - s) * lm.dmax as f64 + s * lm.e_v_target;
    let upper = -c * (1.0 - s) * lm.avg_degree(d) + s * lm.e_v_target;
    (lower, upper)
}

/// Crossing of `-c(1-s) λ + s E_V` with `s E_0`: `λ / (λ + ΔE_T / c)`.
pub fn crossing_for_lambda(lambda: f64, delta_e_t: f64, coupling: f64) -> f64 {
    lambda / (lambda + delta_e_t / coupling)
}

/// Conductance (lower) and degree (upper) bounds on `s*`. With
/// `use_symmetry` and a symmetry bound attached, the upper bound uses it.
pub fn s_star_bounds(
    lm: &LocalMinimum,
    d: usize,
    delta_e_t: f64,
    convention: Normalization,
    use_symmetry: bool,
) -> Result<(f64, f64)> {
    s_star_bounds_with_coupling(lm, d, delta_e_t, convention.coupling(d), use_symmetry)
}

/// [`s_star_bounds`] with an explicit driver coupling `c`.
pub fn s_star_bounds_with_coupling(
    lm: &LocalMinimum,
    d: usize,
    delta_e_t: f64,
    coupling: f64,
    use_symmetry: bool,
) -> Result<(f64, f64)> {
    if delta_e_t <= 0.0 || delta_e_t.is_nan() {
        return Err(Error::DegenerateGround(format!(
            "local minimum does not lie above the global minimum (ΔE_T = {delta_e_t})"
        )));
    }
    let lower = crossing_for_lambda(lm.avg_degree(d), delta_e_t, coupling);
    let top = match (use_symmetry, lm.symmetry_bound) {
        (true, Some(b)) => b,
        _ => lm.dmax as f64,
    };
    Ok((lower, crossing_for_lambda(top, delta_e_t, coupling)))
}

/// Crossing of the delocalized and global energies:
/// `|E_D0| / (|E_D0| + ⟨E_T⟩ - E_0^T)`.
pub fn s_prime(inst: &AnnealInstance) -> Result<f64> {
    let t = inst.target();
    let spread = t.mean_energy() - t.ground_energy();
    if spread <= 0.0 {
        return Err(Error::DegenerateGround("flat target spectrum".into()));
    }
    let e_d0 = -inst.driver_ground_energy()?;
    Ok(e_d0 / (e_d0 + spread))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Classification {
    #[serde(rename = "qpt")]
    Qpt,
    #[serde(rename = "no_qpt")]
    NoQpt,
    #[serde(rename = "undecidable")]
    Undecidable,
}

/// `s'` after the degree bound: no localized-localized transition.
/// `s'` before the conductance bound: a first-order transition.
/// Ties and anything in between are undecidable.
pub fn classify(s_prime: f64, lower: f64, upper: f64) -> Classification {
    if s_prime > upper {
        Classification::NoQpt
    } else if s_prime < lower {
        Classification::Qpt
    } else {
        Classification::Undecidable
    }
}

/// `(E_1^T - ⟨E_T⟩) / (E_0^T - ⟨E_T⟩)`, shared by the no-transition conditions.
fn flatness_ratio(inst: &AnnealInstance) -> Result<f64> {
    let t = inst.target();
    let mean = t.mean_energy();
    let denom = t.ground_energy() - mean;
    if denom == 0.0 {
        return Err(Error::DegenerateGround("flat target spectrum".into()));
    }
    let e1 = t
        .first_excited_energy()
        .ok_or_else(|| Error::DegenerateGround("single-state target".into()))?;
    Ok((e1 - mean) / denom)
}

/// Sufficient condition for no first-order transition in terms of the
/// Cheeger constant `φ_0` of the driver graph.
pub fn no_qpt_condition_conductance(inst: &AnnealInstance, phi0: Rational) -> Result<bool> {
    let d = inst.degree()?;
    Ok(flatness_ratio(inst)? < to_f64(phi0) / d as f64)
}

/// The same condition through the gap `delta_e_d` of the normalized driver
/// `-A_G / d` (ground energy -1).
pub fn no_qpt_condition_gap(inst: &AnnealInstance, delta_e_d: f64) -> Result<bool> {
    Ok(flatness_ratio(inst)? < delta_e_d / 2.0)
}

/// Everything the first-order analysis says about one instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    #[serde(rename = "s_star")]
    pub s_star: [f64; 2],
    #[serde(rename = "s_star_sym")]
    pub s_star_upper_sym: Option<f64>,
    pub s_prime: f64,
    #[serde(rename = "class")]
    pub classification: Classification,
    #[serde(with = "rational_string")]
    pub phi: Rational,
    pub dmax: usize,
    pub delta_e_t: f64,
}

impl BoundsReport {
    pub fn s_star_lower(&self) -> f64 {
        self.s_star[0]
    }

    pub fn s_star_upper(&self) -> f64 {
        self.s_star[1]
    }

    /// Tightest available upper bound.
    pub fn effective_upper(&self) -> f64 {
        self.s_star_upper_sym.unwrap_or(self.s_star[1])
    }
}

/// Bounds, `s'` and classification for a local minimum of `inst`. When the
/// symmetry bound is attached and requested, it is reported separately and
/// used for classification.
pub fn bounds_report(inst: &AnnealInstance, lm: &LocalMinimum, use_symmetry: bool) -> Result<BoundsReport> {
    let d = inst.degree()?;
    let c = inst.coupling();
    let delta_e_t = lm.e_v_target - inst.target().ground_energy();
    let (lower, upper) = s_star_bounds_with_coupling(lm, d, delta_e_t, c, false)?;
    let sym = if use_symmetry && lm.symmetry_bound.is_some() {
        Some(s_star_bounds_with_coupling(lm, d, delta_e_t, c, true)?.1)
    } else {
        None
    };
    let sp = s_prime(inst)?;
    Ok(BoundsReport {
        s_star: [lower, upper],
        s_star_upper_sym: sym,
        s_prime: sp,
        classification: classify(sp, lower, sym.unwrap_or(upper)),
        phi: lm.phi,
        dmax: lm.dmax,
        delta_e_t,
    })
}

pub(crate) mod rational_string {
    use super::Rational;
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        let (p, q) = text.split_once('/').unwrap_or((&text, "1"));
        let p: i64 = p.trim().parse().map_err(D::Error::custom)?;
        let q: i64 = q.trim().parse().map_err(D::Error::custom)?;
        if q == 0 {
            return Err(D::Error::custom("zero denominator"));
        }
        Ok(Rational::new(p, q))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::TargetSpectrum;
    use approx::assert_abs_diff_eq;

    fn manual_lm(phi: Rational, dmax: usize, e_v: f64) -> LocalMinimum {
        let g = Graph::complete(2);
        LocalMinimum {
            v: NodeSet::new(&g, [0]).unwrap(),
            e_v_target: e_v,
            phi,
            dmax,
            lambda_v: None,
            symmetry_bound: None,
        }
    }

    fn cube_instance(e: Vec<f64>) -> AnnealInstance {
        let n_q = (e.len() as f64).log2() as u32;
        AnnealInstance::new(Graph::hypercube(n_q).unwrap(), TargetSpectrum::new(e).unwrap(), Normalization::NormalizedByD).unwrap()
    }

    #[test]
    fn hand_evaluated_s_star() {
        let lm = manual_lm(Rational::from_integer(2), 7, 0.0);
        let (lo, hi) = s_star_bounds(&lm, 8, 1.0, Normalization::NormalizedByD, false).unwrap();
        assert_abs_diff_eq!(lo, 0.75 / 1.75, epsilon = 1e-15);
        assert_abs_diff_eq!(hi, 7.0 / 15.0, epsilon = 1e-15);
    }

    #[test]
    fn s_star_limits_and_errors() {
        let lm = manual_lm(Rational::from_integer(2), 7, 0.0);
        let (lo, hi) = s_star_bounds(&lm, 8, 1e-12, Normalization::NormalizedByD, false).unwrap();
        assert!(1.0 - lo < 1e-10 && 1.0 - hi < 1e-10);
        assert!(matches!(
            s_star_bounds(&lm, 8, 0.0, Normalization::NormalizedByD, false),
            Err(Error::DegenerateGround(_))
        ));
    }

    #[test]
    fn unnormalized_wmis_numbers() {
        let mut lm = manual_lm(Rational::new(1539, 135), 9, 0.0);
        lm.symmetry_bound = Some(2.0 * 3f64.sqrt() + 3.0);
        let (lo, hi) = s_star_bounds(&lm, 15, 2.4, Normalization::Unnormalized, false).unwrap();
        assert_abs_diff_eq!(lo, 0.6, epsilon = 1e-12);
        assert_abs_diff_eq!(hi, 9.0 / 11.4, epsilon = 1e-12);
        let (_, sym) = s_star_bounds(&lm, 15, 2.4, Normalization::Unnormalized, true).unwrap();
        assert_abs_diff_eq!(sym, 6.464_101_615_137_754 / 8.864_101_615_137_754, epsilon = 1e-12);
        assert_abs_diff_eq!(sym, 0.7292, epsilon = 1e-4);
    }

    #[test]
    fn local_energy_bounds() {
        // Regular G(V): φ = d - d_max makes both bounds equal.
        let lm = manual_lm(Rational::from_integer(5), 3, -0.4);
        for s in [0.0, 0.3, 0.8, 1.0] {
            let (lo, hi) = e_local_bounds(&lm, s, 8, Normalization::NormalizedByD);
            assert_abs_diff_eq!(lo, hi, epsilon = 1e-15);
        }
        let (lo, hi) = e_local_bounds(&lm, 1.0, 8, Normalization::NormalizedByD);
        assert_eq!((lo, hi), (-0.4, -0.4));

        let e_v = -50.0;
        let lm = manual_lm(Rational::new(1539, 135), 9, e_v);
        let (lo, hi) = e_local_bounds(&lm, 0.5, 15, Normalization::Unnormalized);
        assert_abs_diff_eq!(lo, -0.5 * 9.0 + 0.5 * e_v, epsilon = 1e-12);
        assert_abs_diff_eq!(hi, 0.5 * (11.4 - 15.0) + 0.5 * e_v, epsilon = 1e-12);
    }

    #[test]
    fn deloc_and_global() {
        let inst = cube_instance(vec![-1.0, 0.5, 0.5, 0.0]);
        assert_eq!(e_deloc(&inst, 0.0).unwrap(), -1.0);
        assert_abs_diff_eq!(e_deloc(&inst, 0.5).unwrap(), -0.5, epsilon = 1e-15);
        assert_eq!(e_global(&inst, 0.0).unwrap(), 0.0);
        assert_eq!(e_global(&inst, 0.5).unwrap(), -0.5);
        let degen = cube_instance(vec![-1.0, -1.0, 0.5, 1.5]);
        assert!(matches!(e_global(&degen, 0.5), Err(Error::DegenerateGround(_))));
    }

    #[test]
    fn s_prime_values() {
        assert_abs_diff_eq!(s_prime(&cube_instance(vec![-1.0, 0.5, 0.5, 0.0])).unwrap(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(s_prime(&cube_instance(vec![-1.0, 2.0, 2.0, 1.0])).unwrap(), 1.0 / 3.0, epsilon = 1e-15);
        assert!(matches!(s_prime(&cube_instance(vec![0.2; 4])), Err(Error::DegenerateGround(_))));
    }

    #[test]
    fn classification_rules() {
        assert_eq!(classify(0.9, 0.4, 0.6), Classification::NoQpt);
        assert_eq!(classify(0.3, 0.4, 0.6), Classification::Qpt);
        assert_eq!(classify(0.5, 0.4, 0.6), Classification::Undecidable);
        assert_eq!(classify(0.6, 0.4, 0.6), Classification::Undecidable);
        assert_eq!(classify(0.4, 0.4, 0.6), Classification::Undecidable);
    }

    #[test]
    fn conductance_condition() {
        // E_0 = -1, E_1 = -0.9, mean 0 over 16 states; φ_0/d = 0.5 → 0.9 < 0.5 fails.
        let mut e = vec![0.0; 16];
        e[0] = -1.0;
        e[1] = -0.9;
        e[2] = 1.9;
        let inst = AnnealInstance::new(Graph::complete(16), TargetSpectrum::new(e).unwrap(), Normalization::NormalizedByD).unwrap();
        assert_abs_diff_eq!(inst.target().mean_energy(), 0.0, epsilon = 1e-15);
        assert!(!no_qpt_condition_conductance(&inst, Rational::new(15, 2)).unwrap());

        // E_1 = ⟨E_T⟩ gives a zero ratio.
        let mut e = vec![0.0; 16];
        e[0] = -1.0;
        e[1] = 1.0;
        let inst = AnnealInstance::new(Graph::complete(16), TargetSpectrum::new(e).unwrap(), Normalization::NormalizedByD).unwrap();
        assert!(no_qpt_condition_conductance(&inst, Rational::new(1, 100)).unwrap());

        let flat = AnnealInstance::new(Graph::complete(4), TargetSpectrum::new(vec![1.0; 4]).unwrap(), Normalization::NormalizedByD).unwrap();
        assert!(no_qpt_condition_conductance(&flat, Rational::from_integer(1)).is_err());
    }

    #[test]
    fn gap_condition_on_four_cube() {
        // ΔE_D = 2/4 for the normalized 4-cube. Pit at -1, one level at a, rest
        // tuned to make ⟨E_T⟩ = 0 so the ratio is -a.
        let build = |a: f64| {
            let mut e = vec![0.0; 16];
            e[0] = -1.0;
            e[1] = a;
            let rest = -(a - 1.0) / 14.0;
            for x in e.iter_mut().skip(2) {
                *x = rest;
            }
            cube_instance(e)
        };
        let inst = build(-0.2);
        let ratio = flatness_ratio(&inst).unwrap();
        assert_abs_diff_eq!(ratio, 0.2, epsilon = 1e-12);
        assert!(no_qpt_condition_gap(&inst, 0.5).unwrap());
        let inst = build(-0.3);
        assert!(!no_qpt_condition_gap(&inst, 0.5).unwrap());
    }

    #[test]
    fn report_json_shape() {
        let r = BoundsReport {
            s_star: [0.6, 0.75],
            s_star_upper_sym: None,
            s_prime: 0.12,
            classification: Classification::Qpt,
            phi: Rational::new(1539, 135),
            dmax: 9,
            delta_e_t: 2.4,
        };
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["phi"], "57/5");
        assert_eq!(v["class"], "qpt");
        assert_eq!(v["s_star_sym"], serde_json::Value::Null);
        let back: BoundsReport = serde_json::from_value(v).unwrap();
        assert_eq!(back, r);
    }
}
