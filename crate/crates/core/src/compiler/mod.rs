//! Lowering passes between resource models and conformance checks.

mod movements;
mod report;
mod same_tape;

use std::fmt;
use std::str::FromStr;

pub use movements::lower_movements;
pub use report::{ExpansionEntry, LoweringReport};
pub use same_tape::lower_same_tape_measurements;

use crate::error::{Error, Result};
use crate::machine::{validate_model, MachineDefinition, ModelViolation, OutcomePattern, ResourceModel};
use crate::observables::ModelName;

/// How a same-tape two-qubit measurement is realized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Backend {
    /// Move one operand to the one-cell tape with the three-measurement
    /// transfer, measure, move it back. Targets `M_F`.
    #[default]
    Transfer,
    /// Teleport one operand to the second tape and back. Targets `M_D`.
    Teleport,
}

impl Backend {
    pub fn target(self) -> ModelName {
        match self {
            Backend::Transfer => ModelName::F,
            Backend::Teleport => ModelName::D,
        }
    }
}

impl FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "transfer" => Ok(Backend::Transfer),
            "teleport" => Ok(Backend::Teleport),
            _ => Err(Error::Lookup(format!("unknown backend `{s}`"))),
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Transfer => "transfer",
            Backend::Teleport => "teleport",
        })
    }
}

/// Violations of `model` by `machine`; empty iff it conforms.
pub fn check_conformance(machine: &MachineDefinition, model: ModelName) -> Vec<ModelViolation> {
    validate_model(machine, &ResourceModel::named(model))
}

pub(crate) fn require(machine: &MachineDefinition, model: ModelName) -> Result<()> {
    let v = check_conformance(machine, model);
    if v.is_empty() {
        return Ok(());
    }
    let list: Vec<String> = v.iter().map(ToString::to_string).collect();
    Err(Error::ModelViolation(format!("machine is not in {model}: {}", list.join("; "))))
}

pub(crate) fn pattern_text(on: OutcomePattern, k: usize) -> String {
    match on {
        OutcomePattern::Any => "_".into(),
        OutcomePattern::Sign(s) if s > 0 => "+".into(),
        OutcomePattern::Sign(_) => "-".into(),
        OutcomePattern::Exact(t) => t.format(k),
    }
}

fn identity(machine: &MachineDefinition, source: ModelName, target: ModelName) -> (MachineDefinition, LoweringReport) {
    let n = machine.states().len();
    (
        machine.clone(),
        LoweringReport {
            source_model: source,
            target_model: target,
            backend: None,
            state_count_before: n,
            state_count_after: n,
            inserted_gadget_count: 0,
            expansion: Vec::new(),
        },
    )
}

/// Lower `machine` from `source` to `target`. Supported routes are
/// `A → F` (transfer), `A → D` (teleport), `F → G` and `A → G`. A machine
/// that already conforms to `target` is returned unchanged.
pub fn compile(
    machine: &MachineDefinition,
    source: ModelName,
    target: ModelName,
    backend: Backend,
) -> Result<(MachineDefinition, LoweringReport)> {
    require(machine, source)?;
    if check_conformance(machine, target).is_empty() {
        return Ok(identity(machine, source, target));
    }
    use ModelName::*;
    match (source, target) {
        (F, G) => lower_movements(machine),
        (A, t) if t == backend.target() => lower_same_tape_measurements(machine, backend),
        (A, G) if backend == Backend::Transfer => {
            let (mid, first) = lower_same_tape_measurements(machine, backend)?;
            let (out, second) = lower_movements(&mid)?;
            Ok((out, first.then(second)))
        }
        _ => Err(Error::Precondition(format!(
            "no lowering from {source} to {target} with the {backend} backend"
        ))),
    }
}
