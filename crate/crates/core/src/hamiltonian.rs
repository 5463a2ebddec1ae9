//! The interpolated annealing Hamiltonian `H(s) = (1-s) H_D + s H_T` with a
//! graph driver `H_D = -c A_G` and a diagonal target `H_T`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphJson};

/// Diagonal target energies `E_z^T` indexed by basis state.
#[derive(Clone, Debug, PartialEq)]
pub struct TargetSpectrum {
    energies: Vec<f64>,
    ground_index: usize,
    mean_energy: f64,
}

impl TargetSpectrum {
    pub fn new(energies: Vec<f64>) -> Result<Self> {
        if energies.is_empty() {
            return Err(Error::Parameter("target spectrum is empty".into()));
        }
        if let Some(z) = energies.iter().position(|e| !e.is_finite()) {
            return Err(Error::Parameter(format!("energy of state {z} is not finite")));
        }
        let ground_index = energies
            .iter()
            .enumerate()
            .fold(0, |best, (z, &e)| if e < energies[best] { z } else { best });
        let mean_energy = neumaier_sum(&energies) / energies.len() as f64;
        Ok(TargetSpectrum {
            energies,
            ground_index,
            mean_energy,
        })
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    /// Lowest index attaining the minimum energy.
    pub fn ground_index(&self) -> usize {
        self.ground_index
    }

    pub fn ground_energy(&self) -> f64 {
        self.energies[self.ground_index]
    }

    /// `⟨E_T⟩`, the uniform average of all target energies.
    pub fn mean_energy(&self) -> f64 {
        self.mean_energy
    }

    /// Second-smallest energy counted with multiplicity (`E_1^T`).
    pub fn first_excited_energy(&self) -> Option<f64> {
        let g = self.ground_index;
        self.energies
            .iter()
            .enumerate()
            .filter(|&(z, _)| z != g)
            .map(|(_, &e)| e)
            .min_by(f64::total_cmp)
    }

    /// True when another state shares the ground energy.
    pub fn is_ground_degenerate(&self) -> bool {
        self.first_excited_energy() == Some(self.ground_energy())
    }
}

/// Compensated summation.
pub(crate) fn neumaier_sum(values: &[f64]) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for &v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// How the driver adjacency is scaled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Normalization {
    /// `H_D = -(1/d) A_G`, ground energy -1.
    #[serde(rename = "per_d")]
    NormalizedByD,
    /// `H_D = -A_G`, ground energy -d (transverse field `-Σσ^x` on a hypercube).
    #[serde(rename = "none")]
    Unnormalized,
}

impl Normalization {
    /// Magnitude `c` of the driver's off-diagonal matrix elements.
    pub fn coupling(self, degree: usize) -> f64 {
        match self {
            Normalization::NormalizedByD => 1.0 / degree as f64,
            Normalization::Unnormalized => 1.0,
        }
    }
}

/// A value of the interpolation parameter, validated to lie in `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct SchedulePoint(f64);

impl SchedulePoint {
    pub fn new(s: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&s) {
            return Err(Error::Parameter(format!("schedule value {s} outside [0, 1]")));
        }
        Ok(SchedulePoint(s))
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }
}

/// Driver graph plus diagonal target: everything that defines `H(s)`.
#[derive(Clone, Debug)]
pub struct AnnealInstance {
    driver: Graph,
    target: TargetSpectrum,
    normalization: Normalization,
}

impl AnnealInstance {
    pub fn new(driver: Graph, target: TargetSpectrum, normalization: Normalization) -> Result<Self> {
        if driver.n() != target.len() {
            return Err(Error::Dimension {
                expected: driver.n(),
                got: target.len(),
            });
        }
        if normalization == Normalization::NormalizedByD && driver.degree().is_none_or(|d| d == 0) {
            return Err(Error::Irregular);
        }
        Ok(AnnealInstance {
            driver,
            target,
            normalization,
        })
    }

    pub fn driver(&self) -> &Graph {
        &self.driver
    }

    pub fn target(&self) -> &TargetSpectrum {
        &self.target
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    pub fn dim(&self) -> usize {
        self.driver.n()
    }

    /// Regularity degree of the driver.
    pub fn degree(&self) -> Result<usize> {
        self.driver.degree().ok_or(Error::Irregular)
    }

    /// Off-diagonal magnitude `c` of `H_D = -c A_G`.
    pub fn coupling(&self) -> f64 {
        match self.normalization {
            Normalization::NormalizedByD => 1.0 / self.driver.degree().expect("checked at construction") as f64,
            Normalization::Unnormalized => 1.0,
        }
    }

    /// Ground energy of `H_D`: -1 normalized, -d unnormalized.
    pub fn driver_ground_energy(&self) -> Result<f64> {
        let d = self.degree()?;
        Ok(match self.normalization {
            Normalization::NormalizedByD => -1.0,
            Normalization::Unnormalized => -(d as f64),
        })
    }

    /// `y = H_D x`.
    pub fn apply_driver(&self, x: &[f64], y: &mut [f64]) -> Result<()> {
        self.check_dims(x, y)?;
        self.driver_into(-self.coupling(), x, y);
        Ok(())
    }

    /// `y = H(s) x`, matrix-free in `O(N d)`.
    pub fn apply_h(&self, s: SchedulePoint, x: &[f64], y: &mut [f64]) -> Result<()> {
        self.check_dims(x, y)?;
        self.apply_h_unchecked(s.value(), x, y);
        Ok(())
    }

    pub(crate) fn apply_h_unchecked(&self, s: f64, x: &[f64], y: &mut [f64]) {
        self.driver_into(-(1.0 - s) * self.coupling(), x, y);
        for ((yz, &xz), &e) in y.iter_mut().zip(x).zip(self.target.energies()) {
            *yz += s * e * xz;
        }
    }

    /// `y = scale * A_G x`.
    fn driver_into(&self, scale: f64, x: &[f64], y: &mut [f64]) {
        if scale == 0.0 {
            y.iter_mut().for_each(|v| *v = 0.0);
            return;
        }
        match self.driver.hypercube_dims() {
            Some(dims) => {
                for (z, yz) in y.iter_mut().enumerate() {
                    let mut acc = 0.0;
                    for b in 0..dims {
                        acc += x[z ^ (1usize << b)];
                    }
                    *yz = scale * acc;
                }
            }
            None => {
                for (z, yz) in y.iter_mut().enumerate() {
                    *yz = scale * self.driver.neighbors(z).map(|j| x[j]).sum::<f64>();
                }
            }
        }
    }

    fn check_dims(&self, x: &[f64], y: &[f64]) -> Result<()> {
        for len in [x.len(), y.len()] {
            if len != self.dim() {
                return Err(Error::Dimension {
                    expected: self.dim(),
                    got: len,
                });
            }
        }
        Ok(())
    }

    /// Explicit `H(s)`; only sensible for small `N`.
    pub fn dense_matrix(&self, s: f64) -> nalgebra::DMatrix<f64> {
        let n = self.dim();
        let off = -(1.0 - s) * self.coupling();
        let mut h = nalgebra::DMatrix::zeros(n, n);
        for z in 0..n {
            h[(z, z)] = s * self.target.energies()[z];
            for j in self.driver.neighbors(z) {
                h[(z, j)] = off;
            }
        }
        h
    }
}

/// Node set of a local minimum as stored next to an instance. Without
/// `epsilon` the energy spread of the set is not checked.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct LocalMinJson {
    pub v: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
}

/// On-disk instance form.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct InstanceJson {
    pub graph: GraphJson,
    pub energies: Vec<f64>,
    pub normalization: Normalization,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub local_min: Option<LocalMinJson>,
    /// Generator seed, when the instance was generated.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl InstanceJson {
    pub fn from_instance(inst: &AnnealInstance) -> Self {
        InstanceJson {
            graph: GraphJson::from(inst.driver()),
            energies: inst.target().energies().to_vec(),
            normalization: inst.normalization(),
            local_min: None,
            seed: None,
        }
    }

    pub fn to_instance(&self) -> Result<AnnealInstance> {
        let g = Graph::try_from(self.graph.clone())?;
        AnnealInstance::new(g, TargetSpectrum::new(self.energies.clone())?, self.normalization)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};

    fn random_instance(seed: u64, norm: Normalization) -> AnnealInstance {
        let g = Graph::random_regular(40, 5 + (seed as usize % 2), seed).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let e = (0..40).map(|_| rng.random_range(-2.0..2.0)).collect();
        AnnealInstance::new(g, TargetSpectrum::new(e).unwrap(), norm).unwrap()
    }

    #[test]
    fn spectrum_bookkeeping() {
        let t = TargetSpectrum::new(vec![0.5, -1.0, 0.25, -1.0]).unwrap();
        assert_eq!(t.ground_index(), 1);
        assert_eq!(t.first_excited_energy(), Some(-1.0));
        assert!(t.is_ground_degenerate());
        assert_abs_diff_eq!(t.mean_energy(), -0.3125, epsilon = 1e-15);
        assert!(TargetSpectrum::new(vec![]).is_err());
        assert!(TargetSpectrum::new(vec![f64::NAN]).is_err());
    }

    #[test]
    fn compensated_mean_of_many_values() {
        let mut values = vec![1e16];
        values.extend(std::iter::repeat_n(1.0, 10_000));
        values.push(-1e16);
        assert_eq!(neumaier_sum(&values), 10_000.0);
    }

    #[test]
    fn s_one_is_pointwise_target() {
        let inst = random_instance(3, Normalization::NormalizedByD);
        let x: Vec<f64> = (0..40).map(|i| (i as f64).sin()).collect();
        let mut y = vec![0.0; 40];
        inst.apply_h(SchedulePoint::new(1.0).unwrap(), &x, &mut y).unwrap();
        for z in 0..40 {
            assert_abs_diff_eq!(y[z], inst.target().energies()[z] * x[z], epsilon = 1e-15);
        }
    }

    #[test]
    fn uniform_vector_is_driver_ground_state() {
        let inst = random_instance(4, Normalization::NormalizedByD);
        let x = vec![0.3; 40];
        let mut y = vec![0.0; 40];
        inst.apply_h(SchedulePoint::new(0.0).unwrap(), &x, &mut y).unwrap();
        for v in y {
            assert_abs_diff_eq!(v, -0.3, epsilon = 1e-14);
        }
    }

    #[test]
    fn two_qubit_hand_matvec() {
        let g = Graph::hypercube(2).unwrap();
        let t = TargetSpectrum::new(vec![-1.0, 0.0, 0.0, 1.0]).unwrap();
        let inst = AnnealInstance::new(g, t, Normalization::NormalizedByD).unwrap();
        let mut y = vec![0.0; 4];
        inst.apply_h(SchedulePoint::new(0.5).unwrap(), &[1.0, 0.0, 0.0, 0.0], &mut y).unwrap();
        assert_eq!(y, vec![-0.5, -0.25, -0.25, 0.0]);
    }

    #[test]
    fn dimension_mismatch() {
        let inst = random_instance(1, Normalization::Unnormalized);
        let mut y = vec![0.0; 40];
        assert!(matches!(
            inst.apply_h(SchedulePoint::new(0.2).unwrap(), &[0.0; 39], &mut y),
            Err(Error::Dimension { expected: 40, got: 39 })
        ));
        assert!(AnnealInstance::new(
            Graph::complete(4),
            TargetSpectrum::new(vec![0.0; 5]).unwrap(),
            Normalization::NormalizedByD
        )
        .is_err());
        assert!(SchedulePoint::new(1.5).is_err());
    }

    #[test]
    fn driver_ground_energies() {
        let cube = Graph::hypercube(15).unwrap();
        let flat = TargetSpectrum::new(vec![0.0; 1 << 15]).unwrap();
        let inst = AnnealInstance::new(cube, flat, Normalization::Unnormalized).unwrap();
        assert_eq!(inst.driver_ground_energy().unwrap(), -15.0);

        let k4 = AnnealInstance::new(
            Graph::complete(4),
            TargetSpectrum::new(vec![0.0; 4]).unwrap(),
            Normalization::NormalizedByD,
        )
        .unwrap();
        assert_eq!(k4.driver_ground_energy().unwrap(), -1.0);

        assert!(matches!(
            AnnealInstance::new(Graph::star(3), TargetSpectrum::new(vec![0.0; 4]).unwrap(), Normalization::NormalizedByD),
            Err(Error::Irregular)
        ));
        let star = AnnealInstance::new(Graph::star(3), TargetSpectrum::new(vec![0.0; 4]).unwrap(), Normalization::Unnormalized).unwrap();
        assert!(matches!(star.driver_ground_energy(), Err(Error::Irregular)));
    }

    #[test]
    fn hypercube_matvec_matches_explicit_lists() {
        let cube = Graph::hypercube(4).unwrap();
        let explicit = Graph::from_edges(16, &cube.edges()).unwrap();
        let e: Vec<f64> = (0..16).map(|z| (z as f64 * 0.37).cos()).collect();
        let a = AnnealInstance::new(cube, TargetSpectrum::new(e.clone()).unwrap(), Normalization::Unnormalized).unwrap();
        let b = AnnealInstance::new(explicit, TargetSpectrum::new(e).unwrap(), Normalization::Unnormalized).unwrap();
        let x: Vec<f64> = (0..16).map(|z| z as f64 - 7.5).collect();
        let (mut ya, mut yb) = (vec![0.0; 16], vec![0.0; 16]);
        let s = SchedulePoint::new(0.3).unwrap();
        a.apply_h(s, &x, &mut ya).unwrap();
        b.apply_h(s, &x, &mut yb).unwrap();
        for (p, q) in ya.iter().zip(&yb) {
            assert_abs_diff_eq!(p, q, epsilon = 1e-13);
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn dot(a: &[f64], b: &[f64]) -> f64 {
            a.iter().zip(b).map(|(x, y)| x * y).sum()
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(64))]

            #[test]
            fn operator_is_symmetric(seed in 0u64..1000, s in 0.0f64..=1.0, xs in proptest::collection::vec(-1.0f64..1.0, 80)) {
                let inst = random_instance(seed, Normalization::NormalizedByD);
                let (x, y) = xs.split_at(40);
                let (mut hx, mut hy) = (vec![0.0; 40], vec![0.0; 40]);
                let s = SchedulePoint::new(s).unwrap();
                inst.apply_h(s, x, &mut hx).unwrap();
                inst.apply_h(s, y, &mut hy).unwrap();
                prop_assert!((dot(x, &hy) - dot(&hx, y)).abs() < 1e-12);
            }

            #[test]
            fn operator_is_affine_in_s(seed in 0u64..1000, s in 0.0f64..=1.0, x in proptest::collection::vec(-1.0f64..1.0, 40)) {
                let inst = random_instance(seed, Normalization::Unnormalized);
                let (mut y0, mut y1, mut ys) = (vec![0.0; 40], vec![0.0; 40], vec![0.0; 40]);
                inst.apply_h(SchedulePoint::new(0.0).unwrap(), &x, &mut y0).unwrap();
                inst.apply_h(SchedulePoint::new(1.0).unwrap(), &x, &mut y1).unwrap();
                inst.apply_h(SchedulePoint::new(s).unwrap(), &x, &mut ys).unwrap();
                for z in 0..40 {
                    prop_assert!((ys[z] - ((1.0 - s) * y0[z] + s * y1[z])).abs() < 1e-12);
                }
            }
        }
    }
}
