//! The two experiment families: toy landscapes on random regular graphs and
//! the 15-qubit weighted maximum independent set instance.

mod toy;
mod wmis;

pub use toy::{gen_toy, ToyParams, TOY_BACKGROUND_ENERGY};
pub use wmis::{
    build_wmis, verify_wmis_counts, wmis_classes, wmis_local_min_set, wmis_target_energies, CountCheck, WmisClasses,
    WmisParams, WmisVerification, WMIS_QUBITS,
};

use serde::{Deserialize, Serialize};

use crate::bounds::LocalMinimum;
use crate::error::Result;
use crate::graph::NodeSet;
use crate::hamiltonian::{AnnealInstance, InstanceJson, LocalMinJson};

/// Generator record stored next to a generated instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Provenance {
    Toy {
        params: ToyParams,
        /// Size actually used, after sampling when not fixed.
        v_size: usize,
        global_node: usize,
        v0: usize,
        distance: usize,
        delta_e_t: f64,
        /// Energy of every node outside the global minimum and `V`.
        background_energy: f64,
        phi: String,
        dmax: usize,
    },
    Wmis {
        params: WmisParams,
        ground_state: usize,
        delta_e_t: f64,
    },
    /// Read from an instance file.
    Loaded,
}

/// An instance together with its known global and local minima.
#[derive(Clone, Debug)]
pub struct LabeledInstance {
    pub instance: AnnealInstance,
    pub global_node: usize,
    pub local_min: LocalMinimum,
    pub provenance: Provenance,
}

impl LabeledInstance {
    /// `E_V^T - E_0^T`.
    pub fn delta_e_t(&self) -> f64 {
        self.local_min.e_v_target - self.instance.target().energies()[self.global_node]
    }

    /// Representative state of `V` used for perturbative comparisons: the
    /// lowest-energy member, ties to the lowest id.
    pub fn local_representative(&self) -> usize {
        let e = self.instance.target().energies();
        *self
            .local_min
            .v
            .members()
            .iter()
            .min_by(|&&a, &&b| e[a].total_cmp(&e[b]).then(a.cmp(&b)))
            .expect("local minimum is non-empty")
    }

    /// The representative is exactly degenerate with a driver neighbor, which
    /// makes its second-order correction diverge.
    pub fn is_ndpt_degenerate(&self) -> bool {
        let e = self.instance.target().energies();
        let z = self.local_representative();
        self.instance.driver().neighbors(z).any(|j| e[j] == e[z])
    }

    /// Instance file contents, including the local minimum.
    pub fn to_json(&self, epsilon: Option<f64>) -> InstanceJson {
        let mut json = InstanceJson::from_instance(&self.instance);
        json.local_min = Some(LocalMinJson {
            v: self.local_min.v.members().to_vec(),
            epsilon,
        });
        if let Provenance::Toy { params, .. } = &self.provenance {
            json.seed = Some(params.seed);
        }
        json
    }
}

/// Local minimum stored in an instance file, if any.
pub fn local_min_from_json(inst: &AnnealInstance, json: &InstanceJson) -> Result<Option<LocalMinimum>> {
    let Some(lm) = &json.local_min else {
        return Ok(None);
    };
    let v = NodeSet::new(inst.driver(), lm.v.iter().copied())?;
    Ok(Some(match lm.epsilon {
        Some(eps) => LocalMinimum::from_energies(inst, v, eps)?,
        None => {
            let e = inst.target().energies();
            let lowest = v.members().iter().map(|&z| e[z]).fold(f64::INFINITY, f64::min);
            LocalMinimum::new(inst.driver(), v, lowest)?
        }
    }))
}
