use std::collections::BTreeMap;

use crate::error::Result;
use crate::machine::{MachineBuilder, MachineDefinition, OutcomePattern, RowSpec};
use crate::quantum::CellId;

#[derive(Debug, Clone, PartialEq)]
pub enum RowAction {
    Goto {
        to: String,
        observable: String,
        movement: Vec<i64>,
    },
    /// Leave the fragment. `at` is where the heads are when the row fires.
    Exit { label: String, at: Vec<i64> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct FragmentRow {
    pub from: String,
    pub on: OutcomePattern,
    pub action: RowAction,
    pub aux: bool,
}

/// What an exit of a fragment does once wired into a machine: measure
/// `observable` where the heads are, then move them to `at` (or leave them
/// in place) and continue in `to`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExitAction {
    pub to: String,
    pub observable: String,
    pub at: Option<Vec<i64>>,
}

impl ExitAction {
    /// Trivial measurement on `heads` heads.
    pub fn trivial(to: &str, heads: usize, at: Option<Vec<i64>>) -> Self {
        ExitAction {
            to: to.to_string(),
            observable: "I".repeat(heads),
            at,
        }
    }
}

/// Rows of a gadget with one entry state and labelled exits.
#[derive(Debug, Clone, PartialEq)]
pub struct MachineFragment {
    pub prefix: String,
    pub entry: String,
    /// Head positions the entry state expects.
    pub entry_at: Vec<i64>,
    pub exits: Vec<String>,
    pub rows: Vec<FragmentRow>,
    /// Role name (`j`, `a`, `b`, `c`, ...) to cell.
    pub cells: BTreeMap<String, CellId>,
}

pub(crate) fn offset(from: &[i64], to: &[i64]) -> Vec<i64> {
    from.iter().zip(to).map(|(a, b)| b - a).collect()
}

impl MachineFragment {
    pub fn states(&self) -> Vec<&str> {
        let mut v: Vec<&str> = vec![self.entry.as_str()];
        for r in &self.rows {
            if !v.contains(&r.from.as_str()) {
                v.push(&r.from);
            }
        }
        v
    }

    /// Add the rows to `b`, wiring each exit label through `exits`.
    pub fn link(&self, b: &mut MachineBuilder, exits: &dyn Fn(&str) -> ExitAction) {
        for r in &self.rows {
            let (to, observable, movement) = match &r.action {
                RowAction::Goto {
                    to,
                    observable,
                    movement,
                } => (to.clone(), observable.clone(), movement.clone()),
                RowAction::Exit { label, at } => {
                    let e = exits(label);
                    let movement = match &e.at {
                        Some(target) => offset(at, target),
                        None => vec![0; at.len()],
                    };
                    (e.to, e.observable, movement)
                }
            };
            b.add(RowSpec {
                from: r.from.clone(),
                on: r.on,
                to,
                observable,
                movement,
                aux: r.aux,
            });
        }
    }

    /// A machine running only this fragment from heads at the origin; every
    /// exit goes to the final state after moving the heads to `exit_at`.
    pub fn standalone(&self, base: MachineBuilder, exit_at: Option<Vec<i64>>) -> Result<MachineDefinition> {
        let k = base.geometry().heads();
        let final_state = base.final_name().to_string();
        let origin = vec![0; k];
        let mut b = if self.entry_at == origin {
            base.initial(&self.entry)
        } else {
            let start = format!("{}start", self.prefix);
            let mut b = base.initial(&start);
            b.add(RowSpec {
                from: start,
                on: OutcomePattern::Any,
                to: self.entry.clone(),
                observable: "I".repeat(k),
                movement: self.entry_at.clone(),
                aux: false,
            });
            b
        };
        self.link(&mut b, &|_| ExitAction::trivial(&final_state, k, exit_at.clone()));
        b.build()
    }
}
