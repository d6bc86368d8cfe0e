//! Resource models `M_A` to `M_G` and conformance checks.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use super::definition::{AxisMoves, MachineDefinition, MovementSet, TapeSpec};
use crate::observables::{named_set, ModelName};

/// Tapes, heads, movement set and observable set of one model.
#[derive(Debug, Clone, PartialEq)]
pub struct ResourceModel {
    pub name: ModelName,
    pub tapes: Vec<TapeSpec>,
    pub head_tapes: Vec<usize>,
    pub moves: MovementSet,
    /// Observables must act on this many qubits.
    pub arity: usize,
    /// Named set the observables must belong to; `None` admits every
    /// observable of the right arity.
    pub observables: Option<ModelName>,
}

impl ResourceModel {
    pub fn named(name: ModelName) -> Self {
        use AxisMoves::Any;
        use ModelName::*;
        use TapeSpec::{Finite, Infinite};
        let (tapes, head_tapes, moves, arity, observables) = match name {
            A => (vec![Infinite], vec![0, 0], vec![Any, Any], 2, Some(A)),
            B => (vec![Infinite], vec![0], vec![Any], 1, None),
            C => (vec![Infinite], vec![0], vec![AxisMoves::unit()], 1, Some(C)),
            D => (vec![Infinite, Infinite], vec![0, 1], vec![Any, Any], 2, Some(D)),
            E => (vec![Finite(2), Infinite], vec![0, 1], vec![AxisMoves::unit(), Any], 2, Some(E)),
            F => (vec![Finite(1), Infinite], vec![0, 1], vec![AxisMoves::zero(), Any], 2, Some(F)),
            G => (
                vec![Finite(1), Infinite],
                vec![0, 1],
                vec![AxisMoves::zero(), AxisMoves::unit()],
                2,
                Some(G),
            ),
        };
        ResourceModel {
            name,
            tapes,
            head_tapes,
            moves: MovementSet(moves),
            arity,
            observables,
        }
    }

    pub fn all() -> Vec<ResourceModel> {
        ModelName::ALL.iter().map(|&m| ResourceModel::named(m)).collect()
    }
}

impl fmt::Display for ResourceModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tapes: Vec<String> = self.tapes.iter().map(ToString::to_string).collect();
        write!(
            f,
            "{}: tapes {} heads {:?} moves {} observables {}",
            self.name,
            tapes.join(","),
            self.head_tapes,
            self.moves,
            match self.observables {
                Some(m) => format!("O_{}", m.letter()),
                None => format!("any {}-qubit", self.arity),
            }
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelViolation {
    TapeCount { expected: usize, found: usize },
    TapeLength { tape: usize, expected: String, found: String },
    HeadCount { expected: usize, found: usize },
    HeadAssignment { head: usize, expected: usize, found: usize },
    Movement { state: String, outcome: String, movement: Vec<i64> },
    ObservableArity { observable: String, expected: usize, found: usize },
    ObservableNotInSet { observable: String, set: String },
}

impl fmt::Display for ModelViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelViolation::TapeCount { expected, found } => {
                write!(f, "tape count: expected {expected}, found {found}")
            }
            ModelViolation::TapeLength { tape, expected, found } => {
                write!(f, "tape {tape} length: expected {expected}, found {found}")
            }
            ModelViolation::HeadCount { expected, found } => {
                write!(f, "head count: expected {expected}, found {found}")
            }
            ModelViolation::HeadAssignment { head, expected, found } => {
                write!(f, "head {head} runs on tape {found}, expected tape {expected}")
            }
            ModelViolation::Movement { state, outcome, movement } => {
                write!(f, "movement {movement:?} from ({state}, {outcome}) is not in D")
            }
            ModelViolation::ObservableArity { observable, expected, found } => write!(
                f,
                "observable arity: `{observable}` acts on {found} qubits, expected {expected}"
            ),
            ModelViolation::ObservableNotInSet { observable, set } => {
                write!(f, "observable `{observable}` is not in {set}")
            }
        }
    }
}

/// Everything in `machine` that the model does not allow. Only the image of
/// `δ` is inspected, so a declared but unused observable is not a violation.
pub fn validate_model(machine: &MachineDefinition, model: &ResourceModel) -> Vec<ModelViolation> {
    let mut out = Vec::new();
    let g = machine.geometry();
    if g.tapes.len() != model.tapes.len() {
        out.push(ModelViolation::TapeCount {
            expected: model.tapes.len(),
            found: g.tapes.len(),
        });
    } else {
        for (i, (a, b)) in model.tapes.iter().zip(&g.tapes).enumerate() {
            if a != b {
                out.push(ModelViolation::TapeLength {
                    tape: i,
                    expected: a.to_string(),
                    found: b.to_string(),
                });
            }
        }
    }
    let heads_ok = g.heads() == model.head_tapes.len();
    if !heads_ok {
        out.push(ModelViolation::HeadCount {
            expected: model.head_tapes.len(),
            found: g.heads(),
        });
    } else {
        for (h, (&a, &b)) in model.head_tapes.iter().zip(&g.head_tapes).enumerate() {
            if a != b {
                out.push(ModelViolation::HeadAssignment {
                    head: h,
                    expected: a,
                    found: b,
                });
            }
        }
    }
    let set = model.observables.map(named_set);
    let mut seen_obs = BTreeSet::new();
    let mut seen_moves = BTreeSet::new();
    for (q, tag, t) in machine.transitions() {
        if !model.moves.contains(&t.movement) && seen_moves.insert((q, t.movement.clone())) {
            out.push(ModelViolation::Movement {
                state: machine.state_name(q).to_string(),
                outcome: tag.format(machine.heads()),
                movement: t.movement.clone(),
            });
        }
        let obs = machine.observable(t);
        if !seen_obs.insert(obs.name().to_string()) {
            continue;
        }
        if obs.arity() != model.arity {
            out.push(ModelViolation::ObservableArity {
                observable: obs.name().to_string(),
                expected: model.arity,
                found: obs.arity(),
            });
            continue;
        }
        if obs.is_trivial() {
            continue;
        }
        if let Some(set) = &set {
            if !set.contains(obs) {
                out.push(ModelViolation::ObservableNotInSet {
                    observable: obs.name().to_string(),
                    set: format!("O_{}", set.name.letter()),
                });
            }
        }
    }
    out
}
