use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{LabeledInstance, Provenance};
use crate::bounds::LocalMinimum;
use crate::error::{Error, Result};
use crate::graph::{bfs_farthest_pair, seeded_rng, Graph, NodeSet};
use crate::hamiltonian::{AnnealInstance, Normalization, TargetSpectrum};

/// Energy of nodes outside the global minimum and the grown local minimum.
pub const TOY_BACKGROUND_ENERGY: f64 = 0.0;

/// Sampling range of `|V|` when no size is requested.
const DEFAULT_V_SIZE: std::ops::RangeInclusive<usize> = 8..=48;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToyParams {
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default = "default_d")]
    pub d: usize,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    /// Desired `|V|`; sampled from 8..=48 when absent.
    #[serde(default)]
    pub target_v_size: Option<usize>,
    #[serde(default)]
    pub seed: u64,
}

fn default_n() -> usize {
    256
}

fn default_d() -> usize {
    8
}

fn default_epsilon() -> f64 {
    0.01
}

impl Default for ToyParams {
    fn default() -> Self {
        ToyParams {
            n: default_n(),
            d: default_d(),
            epsilon: default_epsilon(),
            target_v_size: None,
            seed: 0,
        }
    }
}

impl ToyParams {
    pub fn with_seed(seed: u64) -> Self {
        ToyParams {
            seed,
            ..Default::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.epsilon >= 0.0 && self.epsilon.is_finite()) {
            return Err(Error::Parameter(format!("epsilon must be >= 0, got {}", self.epsilon)));
        }
        if self.target_v_size == Some(0) {
            return Err(Error::Parameter("target_v_size must be at least 1".into()));
        }
        Ok(())
    }
}

/// Random `d`-regular landscape with a single-node global minimum and a
/// local minimum grown at the farthest node from it.
pub fn gen_toy(p: &ToyParams) -> Result<LabeledInstance> {
    p.validate()?;
    let mut rng = seeded_rng(p.seed);
    let g = Graph::random_regular_with(p.n, p.d, &mut rng)?;
    let (global, v0, distance) = bfs_farthest_pair(&g)?;
    let delta_e_t = loop {
        let x: f64 = rng.random();
        if x > 0.0 {
            break x;
        }
    };
    let v_size = match p.target_v_size {
        Some(k) => k,
        None => rng.random_range(DEFAULT_V_SIZE),
    };

    let mut blocked = vec![false; g.n()];
    blocked[global] = true;
    for j in g.neighbors(global) {
        blocked[j] = true;
    }
    let mut in_v = vec![false; g.n()];
    in_v[v0] = true;
    let mut v = vec![v0];
    while v.len() < v_size {
        let mut frontier: Vec<usize> = v
            .iter()
            .flat_map(|&i| g.neighbors(i))
            .filter(|&j| !in_v[j] && !blocked[j])
            .collect();
        frontier.sort_unstable();
        frontier.dedup();
        if frontier.is_empty() {
            return Err(Error::Generation(format!(
                "local minimum stopped growing at {} of {v_size} nodes",
                v.len()
            )));
        }
        let pick = frontier[rng.random_range(0..frontier.len())];
        in_v[pick] = true;
        v.push(pick);
    }

    let base = -1.0 + delta_e_t;
    let mut energies = vec![TOY_BACKGROUND_ENERGY; g.n()];
    energies[global] = -1.0;
    for &z in &v {
        energies[z] = base + p.epsilon;
    }
    energies[v0] = base;

    let v = NodeSet::new(&g, v)?;
    let local_min = LocalMinimum::new(&g, v, base)?;
    let provenance = Provenance::Toy {
        params: p.clone(),
        v_size,
        global_node: global,
        v0,
        distance,
        delta_e_t,
        background_energy: TOY_BACKGROUND_ENERGY,
        phi: format!("{}/{}", local_min.phi.numer(), local_min.phi.denom()),
        dmax: local_min.dmax,
    };
    let instance = AnnealInstance::new(g, TargetSpectrum::new(energies)?, Normalization::NormalizedByD)?;
    Ok(LabeledInstance {
        instance,
        global_node: global,
        local_min,
        provenance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{conductance, max_degree_in, Rational};

    #[test]
    fn singleton_sits_at_farthest_distance() {
        let li = gen_toy(&ToyParams {
            target_v_size: Some(1),
            ..ToyParams::with_seed(3)
        })
        .unwrap();
        let Provenance::Toy { distance, v0, .. } = li.provenance else { panic!() };
        assert_eq!(li.local_min.v.members(), &[v0]);
        assert_eq!(li.instance.driver().bfs_distances(li.global_node)[v0], distance);
        assert_eq!(li.local_min.dmax, 0);
        assert_eq!(li.local_min.phi, Rational::from_integer(8));
    }

    #[test]
    fn recomputed_quantities_match_provenance() {
        for seed in 0..100 {
            let li = gen_toy(&ToyParams::with_seed(seed)).unwrap();
            let g = li.instance.driver();
            let Provenance::Toy { phi, dmax, v_size, delta_e_t, .. } = &li.provenance else { panic!() };
            let v = &li.local_min.v;
            let r = conductance(g, v).unwrap();
            assert_eq!(&format!("{}/{}", r.numer(), r.denom()), phi);
            assert_eq!(max_degree_in(g, v).unwrap(), *dmax);
            assert_eq!(v.len(), *v_size);
            assert!((8..=48).contains(v_size));
            assert!(!v.contains(li.global_node));
            for j in g.neighbors(li.global_node) {
                assert!(!v.contains(j));
            }
            let t = li.instance.target();
            assert_eq!(t.ground_index(), li.global_node);
            assert!(!t.is_ground_degenerate());
            assert!((li.delta_e_t() - delta_e_t).abs() < 1e-15);
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let a = gen_toy(&ToyParams::with_seed(7)).unwrap();
        let b = gen_toy(&ToyParams::with_seed(7)).unwrap();
        assert_eq!(a.provenance, b.provenance);
        assert_eq!(a.instance.target().energies(), b.instance.target().energies());
        let c = gen_toy(&ToyParams::with_seed(8)).unwrap();
        assert_ne!(a.instance.target().energies(), c.instance.target().energies());
    }

    #[test]
    fn zero_epsilon_is_flagged() {
        let li = gen_toy(&ToyParams {
            epsilon: 0.0,
            target_v_size: Some(5),
            ..ToyParams::with_seed(2)
        })
        .unwrap();
        assert!(li.is_ndpt_degenerate());
        let li = gen_toy(&ToyParams {
            target_v_size: Some(5),
            ..ToyParams::with_seed(2)
        })
        .unwrap();
        assert!(!li.is_ndpt_degenerate());
    }

    #[test]
    fn blocked_growth() {
        // K5: every node neighbors the global minimum.
        let err = gen_toy(&ToyParams {
            n: 5,
            d: 4,
            target_v_size: Some(2),
            ..Default::default()
        })
        .unwrap_err();
        assert!(matches!(err, Error::Generation(_)));
        assert!(gen_toy(&ToyParams { n: 5, d: 3, ..Default::default() }).is_err());
        assert!(gen_toy(&ToyParams { epsilon: -0.1, ..Default::default() }).is_err());
    }
}
