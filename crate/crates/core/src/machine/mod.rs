//! Machines, configurations and the step/run semantics.

mod definition;
mod exec;
mod model;
mod text;
mod tree;

pub use definition::{
    AxisMoves, Geometry, MachineBuilder, MachineDefinition, MovementSet, ObservableDecl, Outcome,
    OutcomePattern, OutputSpec, RowSpec, StateId, TapeSpec, Transition,
};
pub use exec::{
    measure, measurement_branches, random_qubit, seeded_rng, Configuration, FreshCells, RunOptions,
    RunResult, TraceEntry, DEFAULT_MAX_STEPS,
};
pub use model::{validate_model, ModelViolation, ResourceModel};
pub use text::{format_machine, parse_machine};
pub use tree::{
    branch_tree, compare_marginals, marginals, merged_distribution, BranchTree, Marginal,
    MergedBranch, TreeOptions, DEFAULT_BRANCH_CAP,
};
