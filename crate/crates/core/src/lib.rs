//! Distribution equivalence classes of partially linear additive structural
//! equation models with Gaussian noise (PLSEMs).
//!
//! The crate provides, in layers:
//!
//! * [`graph`]: DAGs and PDAGs with the exact combinatorial machinery
//!   (patterns, v-structures, covered edges, Markov equivalence);
//! * [`meek`]: orientation rules R1-R4, maximally oriented PDAGs and
//!   consistent DAG extensions;
//! * [`func`] / [`model`]: the model calculus, including the closed-form
//!   covered linear edge reversal that maps a model to a distribution-
//!   equivalent one with a single edge flipped;
//! * [`oracle`]: population-exact equivalence classes of a known model;
//! * [`scoring`]: additive spline regression and node scores;
//! * [`estimators`]: the score-based procedures recovering the class (or
//!   its maximally oriented representative) from data;
//! * [`sim`]: random instance generators, recovery experiments and a
//!   timing benchmark.

pub mod data;
pub mod error;
pub mod estimators;
pub mod func;
pub mod graph;
pub mod graph_text;
pub mod meek;
pub mod model;
pub mod model_file;
pub mod oracle;
pub mod rng;
pub mod scoring;
pub mod sim;

#[cfg(test)]
pub(crate) mod testutil;

pub use data::DataMatrix;
pub use error::{Error, Result};
pub use estimators::{
    compute_gdpx, compute_gdpx_with, list_all_dags_plsem, list_all_dags_with,
    orientation_metrics, DecisionRecord, EquivResult, EstimationConfig, OrientationMetrics,
    Verdict,
};
pub use func::{EdgeFunction, FunctionAtom};
pub use graph::{Dag, NodeId, Pdag};
pub use meek::{
    consistent_extensions, cover_for_edge, maximally_oriented, meek_closure,
    meek_closure_with_order, orientation_implied, BackgroundKnowledge, Rule,
};
pub use model::{Plsem, PlsemFunction};
pub use oracle::{fixed_pairs, nonlinear_children, oracle_enumerate, oracle_gdpx, FixedPairSet};
pub use scoring::{covered_reversal_delta, fit_additive_node, spline_basis, BasisConfig, NodeFit};
pub use sim::{
    benchmark_timing, random_dag, random_plsem, run_experiment, ExperimentRow, SimConfig,
    TimingRow,
};
