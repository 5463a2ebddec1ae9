//! Graph-theoretic bounds on the location of first-order quantum phase
//! transitions in adiabatic annealing, with exact-diagonalization checks.
//!
//! The annealing Hamiltonian is `H(s) = (1-s) H_D + s H_T` with a driver
//! `H_D = -c A_G` on a regular graph `G` over basis states and a diagonal
//! target `H_T`. A local minimum `V` of the target is characterized by its
//! conductance and maximal induced degree, which bracket the point where
//! the state localized in `V` crosses the global minimum.

pub mod analysis;
pub mod bounds;
pub mod error;
pub mod graph;
pub mod hamiltonian;
pub mod instances;
pub mod ndpt;
pub mod spectral;
pub mod symmetry;

pub use analysis::{analyze, analyze_with, AnalysisReport, AnalyzeOptions};
pub use bounds::{
    bounds_report, classify, e_deloc, e_global, e_local_bounds, infer_local_minimum, no_qpt_condition_conductance,
    no_qpt_condition_gap, s_prime, s_star_bounds, BoundsReport, Classification, LocalMinimum,
};
pub use error::{Error, Result};
pub use graph::{
    bfs_farthest_pair, cheeger_constant, conductance, edge_boundary, induced_subgraph, max_degree_in, Graph, GraphJson,
    NodeSet, Rational,
};
pub use hamiltonian::{AnnealInstance, InstanceJson, Normalization, SchedulePoint, TargetSpectrum};
pub use instances::{build_wmis, gen_toy, verify_wmis_counts, LabeledInstance, Provenance, ToyParams, WmisParams};
pub use ndpt::{predict_crossing_ndpt, second_order_energy, NdptPrediction};
pub use spectral::{lowest_two, principal_eigenvalue, sweep, AnnealSweep, LowestTwo, SolverOptions, SpectrumPoint};
pub use symmetry::{equitable_partition, gershgorin_bound, improved_lambda_upper, quotient_matrix, Partition, QuotientMatrix};
