//! Weighted maximum independent set on a 15-node problem graph, encoded as an
//! Ising target on the 15-cube.
//!
//! Problem graph: solution nodes `0..6` (weight `w_g`, mutually independent)
//! and three triangles `{6,7,8}`, `{9,10,11}`, `{12,13,14}` of local nodes
//! (weight `w_l`); every solution node is adjacent to all nine local nodes.
//! A node is selected when its bit is 0, i.e. `σ^z = +1`.

use serde::{Deserialize, Serialize};

use super::{LabeledInstance, Provenance};
use crate::bounds::LocalMinimum;
use crate::error::{Error, Result};
use crate::graph::{edge_boundary, induced_subgraph, max_degree_in, Graph, NodeSet};
use crate::hamiltonian::{AnnealInstance, Normalization, TargetSpectrum};
use crate::symmetry::{equitable_partition, gershgorin_bound, quotient_matrix};

pub const WMIS_QUBITS: u32 = 15;
const SOLUTION_NODES: usize = 6;
const TRIANGLES: [[usize; 3]; 3] = [[6, 7, 8], [9, 10, 11], [12, 13, 14]];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WmisParams {
    #[serde(default = "unit")]
    pub w_g: f64,
    pub w_l: f64,
    #[serde(default = "two")]
    pub j: f64,
}

fn unit() -> f64 {
    1.0
}

fn two() -> f64 {
    2.0
}

impl WmisParams {
    pub fn new(w_l: f64) -> Self {
        WmisParams { w_g: 1.0, w_l, j: 2.0 }
    }

    /// `4(6 w_g - 3 w_l)`: distance of the shallow local minima above the solution.
    pub fn expected_delta_e_t(&self) -> f64 {
        4.0 * (6.0 * self.w_g - 3.0 * self.w_l)
    }

    fn validate(&self) -> Result<()> {
        if !(self.w_l > 0.0 && self.w_l < 2.0 * self.w_g) {
            return Err(Error::Parameter(format!(
                "w_l must lie in (0, 2 w_g) = (0, {}), got {}",
                2.0 * self.w_g,
                self.w_l
            )));
        }
        if !(self.j > self.w_g.min(self.w_l) && self.j > self.w_l) {
            return Err(Error::Parameter(format!(
                "coupling {} must exceed the smaller weight of every edge",
                self.j
            )));
        }
        Ok(())
    }
}

fn problem_edges() -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for s in 0..SOLUTION_NODES {
        for t in TRIANGLES.iter().flatten() {
            edges.push((s, *t));
        }
    }
    for [a, b, c] in TRIANGLES {
        edges.extend([(a, b), (b, c), (a, c)]);
    }
    edges
}

/// Diagonal of `Σ h_i σ_i + Σ J σ_i σ_j` with `h_i = Σ_j J - 2 w_i`.
pub fn wmis_target_energies(p: &WmisParams) -> Vec<f64> {
    let nq = WMIS_QUBITS as usize;
    let weight = |i: usize| if i < SOLUTION_NODES { p.w_g } else { p.w_l };
    let edges = problem_edges();
    let mut h = vec![0.0; nq];
    for &(a, b) in &edges {
        h[a] += p.j;
        h[b] += p.j;
    }
    for (i, hi) in h.iter_mut().enumerate() {
        *hi -= 2.0 * weight(i);
    }
    let spin = |z: usize, i: usize| if z >> i & 1 == 0 { 1.0 } else { -1.0 };
    (0..1usize << nq)
        .map(|z| {
            let field: f64 = (0..nq).map(|i| h[i] * spin(z, i)).sum();
            let coupling: f64 = edges.iter().map(|&(a, b)| p.j * spin(z, a) * spin(z, b)).sum();
            field + coupling
        })
        .collect()
}

/// Bitstrings of the three local-minimum classes. All solution nodes are
/// unselected; "marked" local qubits are selected (bit 0).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WmisClasses {
    /// One marked qubit per triangle.
    pub a: Vec<usize>,
    /// One marked in two triangles, two marked in the third.
    pub b: Vec<usize>,
    /// One marked in two triangles, none in the third.
    pub c: Vec<usize>,
}

pub fn wmis_classes() -> WmisClasses {
    let solution_mask = (1usize << SOLUTION_NODES) - 1;
    let all_local = TRIANGLES.iter().flatten().fold(0usize, |m, &q| m | 1 << q);
    // Marked subsets of one triangle, by size.
    let marks = |t: usize, k: usize| -> Vec<usize> {
        let tri = TRIANGLES[t];
        let mut out = Vec::new();
        for sub in 0u32..8 {
            if sub.count_ones() as usize == k {
                out.push((0..3).filter(|&i| sub >> i & 1 == 1).fold(0usize, |m, i| m | 1 << tri[i]));
            }
        }
        out
    };
    let build = |counts: [usize; 3]| -> Vec<usize> {
        let mut out = Vec::new();
        for m0 in marks(0, counts[0]) {
            for m1 in marks(1, counts[1]) {
                for m2 in marks(2, counts[2]) {
                    out.push((solution_mask | all_local) & !(m0 | m1 | m2));
                }
            }
        }
        out
    };
    let mut a = build([1, 1, 1]);
    let mut b: Vec<usize> = [[2, 1, 1], [1, 2, 1], [1, 1, 2]].into_iter().flat_map(build).collect();
    let mut c: Vec<usize> = [[0, 1, 1], [1, 0, 1], [1, 1, 0]].into_iter().flat_map(build).collect();
    a.sort_unstable();
    b.sort_unstable();
    c.sort_unstable();
    WmisClasses { a, b, c }
}

/// The 135 states of the local minimum.
pub fn wmis_local_min_set() -> NodeSet {
    let cube = Graph::hypercube(WMIS_QUBITS).expect("15 qubits are in range");
    let cls = wmis_classes();
    NodeSet::new(&cube, cls.a.into_iter().chain(cls.b).chain(cls.c)).expect("bitstrings fit the cube")
}

/// Unnormalized transverse-field anneal of the WMIS target, labeled with its
/// solution and local minimum. Fails if the construction does not reproduce
/// the reference counts.
pub fn build_wmis(p: &WmisParams) -> Result<LabeledInstance> {
    p.validate()?;
    let cube = Graph::hypercube(WMIS_QUBITS)?;
    let target = TargetSpectrum::new(wmis_target_energies(p))?;
    let ground = target.ground_index();
    let v = wmis_local_min_set();
    let e = target.energies();
    let e_v = v.members().iter().map(|&z| e[z]).fold(f64::INFINITY, f64::min);
    let local_min = LocalMinimum::new(&cube, v, e_v)?;
    let delta_e_t = e_v - target.ground_energy();
    let instance = AnnealInstance::new(cube, target, Normalization::Unnormalized)?;
    let li = LabeledInstance {
        instance,
        global_node: ground,
        local_min,
        provenance: Provenance::Wmis {
            params: p.clone(),
            ground_state: ground,
            delta_e_t,
        },
    };
    let report = verify_wmis_counts(&li);
    if !report.all_pass() {
        return Err(Error::Validation(format!("WMIS construction fails count checks: {report}")));
    }
    Ok(li)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountCheck {
    pub name: String,
    pub expected: f64,
    pub got: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WmisVerification {
    pub checks: Vec<CountCheck>,
}

impl WmisVerification {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CountCheck> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

impl std::fmt::Display for WmisVerification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.all_pass() {
            return write!(f, "all {} checks pass", self.checks.len());
        }
        let parts: Vec<String> = self
            .failures()
            .map(|c| format!("{}: expected {}, got {}", c.name, c.expected, c.got))
            .collect();
        write!(f, "{}", parts.join("; "))
    }
}

fn check(name: &str, expected: f64, got: f64, tolerance: f64) -> CountCheck {
    CountCheck {
        name: name.to_string(),
        expected,
        got,
        tolerance,
        pass: (expected - got).abs() <= tolerance,
    }
}

/// Recompute the local-minimum counts, the class quotient and `ΔE_T` from
/// scratch and compare against the reference values.
pub fn verify_wmis_counts(li: &LabeledInstance) -> WmisVerification {
    let g = li.instance.driver();
    let v = &li.local_min.v;
    let mut checks = vec![check("|V|", 135.0, v.len() as f64, 0.0)];
    let boundary = edge_boundary(g, v).map_or(f64::NAN, |b| b as f64);
    checks.push(check("|∂V|", 1539.0, boundary, 0.0));
    let dmax = max_degree_in(g, v).map_or(f64::NAN, |d| d as f64);
    checks.push(check("d_max(V)", 9.0, dmax, 0.0));

    let expected_de = match &li.provenance {
        Provenance::Wmis { params, .. } => params.expected_delta_e_t(),
        _ => f64::NAN,
    };
    let t = li.instance.target();
    let e = t.energies();
    let e_v = v.members().iter().map(|&z| e[z]).fold(f64::INFINITY, f64::min);
    checks.push(check("ΔE_T", expected_de, e_v - t.ground_energy(), 1e-12));

    let r3 = 3f64.sqrt();
    let reference = [[0.0, 2.0 * r3, 3.0], [2.0 * r3, 0.0, 0.0], [3.0, 0.0, 0.0]];
    let reference_sizes = [27usize, 81, 27];
    let (mut sizes_ok, mut deviation, mut gersh) = (false, f64::NAN, f64::NAN);
    if let Ok((sub, _)) = induced_subgraph(g, v) {
        let p = equitable_partition(&sub);
        if let Ok(q) = quotient_matrix(&sub, &p) {
            gersh = gershgorin_bound(&q);
            if q.class_sizes.len() == 3 {
                deviation = f64::INFINITY;
                for perm in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
                    if (0..3).any(|a| q.class_sizes[perm[a]] != reference_sizes[a]) {
                        continue;
                    }
                    sizes_ok = true;
                    let mut dev = 0.0f64;
                    for a in 0..3 {
                        for b in 0..3 {
                            dev = dev.max((q.entries[(perm[a], perm[b])] - reference[a][b]).abs());
                        }
                    }
                    deviation = deviation.min(dev);
                }
            }
        }
    }
    checks.push(check("class sizes {27, 81, 27}", 1.0, if sizes_ok { 1.0 } else { 0.0 }, 0.0));
    checks.push(check("quotient matrix deviation", 0.0, deviation, 1e-12));
    checks.push(check("quotient Gershgorin", 2.0 * r3 + 3.0, gersh, 1e-12));
    WmisVerification { checks }
}
