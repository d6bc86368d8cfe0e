use std::collections::{BTreeSet, VecDeque};

use super::report::{ExpansionEntry, LoweringReport};
use super::{pattern_text, require};
use crate::error::Result;
use crate::machine::{
    AxisMoves, MachineBuilder, MachineDefinition, MovementSet, ObservableDecl, Outcome, OutcomePattern, RowSpec,
    StateId, Transition,
};
use crate::observables::ModelName;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum Node {
    /// The walk after a jump's first unit move; reads the jump's outcome.
    Walk { to: StateId, tau: i64, left: i64 },
    /// Later unit moves, outcome sign remembered in the name.
    Chain { to: StateId, tau: i64, left: i64, sign: i8 },
    /// `to` entered with the outcome sign `sign` regardless of `λ`.
    Carry { to: StateId, sign: i8 },
}

fn sign_char(s: i64) -> char {
    if s < 0 {
        '-'
    } else {
        '+'
    }
}

struct Lowering<'a> {
    m: &'a MachineDefinition,
    b: MachineBuilder,
    seen: BTreeSet<Node>,
    work: VecDeque<Node>,
}

impl Lowering<'_> {
    fn name(&self, n: &Node) -> String {
        let q = |s: StateId| self.m.state_name(s);
        match *n {
            Node::Walk { to, tau, left } => format!("{}[{}{left}]", q(to), sign_char(tau)),
            Node::Chain { to, tau, left, sign } => {
                format!("{}[{}{left}|{}]", q(to), sign_char(tau), sign_char(sign as i64))
            }
            Node::Carry { to, sign } => format!("{}[{}]", q(to), sign_char(sign as i64)),
        }
    }

    fn target(&mut self, n: Node) -> String {
        if let Node::Carry { to, .. } = n {
            if to == self.m.final_state() {
                return self.m.state_name(to).to_string();
            }
        }
        let name = self.name(&n);
        if self.seen.insert(n.clone()) {
            self.work.push_back(n);
        }
        name
    }

    /// Emit `from on -> ...` for `t`, splitting long jumps. Returns the
    /// number of states on the walk.
    fn transition(&mut self, from: &str, on: OutcomePattern, t: &Transition) -> usize {
        let d = t.movement[1];
        let obs = self.m.observable(t).name().to_string();
        if d.abs() <= 1 {
            self.b.add(RowSpec {
                from: from.into(),
                on,
                to: self.m.state_name(t.next).into(),
                observable: obs,
                movement: t.movement.clone(),
                aux: t.aux,
            });
            return 0;
        }
        let tau = d.signum();
        let to = self.target(Node::Walk {
            to: t.next,
            tau,
            left: d.abs() - 1,
        });
        self.b.add(RowSpec {
            from: from.into(),
            on,
            to,
            observable: obs,
            movement: vec![t.movement[0], tau],
            aux: t.aux,
        });
        d.unsigned_abs() as usize - 1 + usize::from(t.next != self.m.final_state())
    }

    fn step_on(&mut self, to: StateId, tau: i64, left: i64, sign: i8) -> String {
        if left == 0 {
            self.target(Node::Carry { to, sign })
        } else {
            self.target(Node::Chain { to, tau, left, sign })
        }
    }

    fn node(&mut self, n: Node) {
        let from = self.name(&n);
        let unit = |tau: i64| vec![0, tau];
        match n {
            Node::Walk { to, tau, left } => {
                for sign in [1i8, -1] {
                    let next = self.step_on(to, tau, left - 1, sign);
                    self.b.add(walk_row(&from, OutcomePattern::Sign(sign), next, unit(tau)));
                }
            }
            Node::Chain { to, tau, left, sign } => {
                let next = self.step_on(to, tau, left - 1, sign);
                self.b.add(walk_row(&from, OutcomePattern::Any, next, unit(tau)));
            }
            Node::Carry { to, sign } => {
                let tag = Outcome::from_eigenvalue(sign as f64);
                let t = self.m.delta(to, tag).expect("total").clone();
                self.transition(&from, OutcomePattern::Any, &t);
            }
        }
    }
}

fn walk_row(from: &str, on: OutcomePattern, to: String, movement: Vec<i64>) -> RowSpec {
    RowSpec {
        from: from.into(),
        on,
        to,
        observable: "II".into(),
        movement,
        aux: true,
    }
}

/// Replace every jump of the second head by unit moves through walk states
/// holding `I⊗I` measurements. A walk remembers the jump's outcome sign and
/// ends in a copy of the target state's row for that sign.
pub fn lower_movements(machine: &MachineDefinition) -> Result<(MachineDefinition, LoweringReport)> {
    require(machine, ModelName::F)?;
    let m = machine;
    let b = m
        .to_builder()
        .moves(MovementSet(vec![AxisMoves::zero(), AxisMoves::unit()]))
        .observables(ObservableDecl::Set(ModelName::G));
    let mut l = Lowering {
        m,
        b,
        seen: BTreeSet::new(),
        work: VecDeque::new(),
    };
    let mut expansion = Vec::new();
    let mut k_max = 1;
    for q in 0..m.states().len() {
        if q == m.final_state() {
            continue;
        }
        for (on, t) in m.grouped_rows(q) {
            k_max = k_max.max(t.movement[1].abs());
            let inserted = l.transition(m.state_name(q), on, &t.clone());
            let walk = t.movement[1].unsigned_abs().max(1) as usize;
            expansion.push(ExpansionEntry {
                state: m.state_name(q).into(),
                on: pattern_text(on, m.heads()),
                target_rows: walk,
                inserted_states: inserted,
            });
        }
    }
    while let Some(n) = l.work.pop_front() {
        l.node(n);
    }
    let out = l.b.build()?;
    let before = m.states().len();
    let after = out.states().len();
    assert!(
        after <= before * (6 * k_max as usize + 3),
        "walk states exceed the finiteness bound"
    );
    require(&out, ModelName::G)?;
    Ok((
        out,
        LoweringReport {
            source_model: ModelName::F,
            target_model: ModelName::G,
            backend: None,
            state_count_before: before,
            state_count_after: after,
            inserted_gadget_count: 0,
            expansion,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::{branch_tree, format_machine, parse_machine, TreeOptions};
    use crate::quantum::{CellId, RegisterState};

    const JUMPY: &str = "\
tapes: 1,inf
heads: 2 (0,1)
moves: {0}xZ
observables: F
input: head 1
output: head 1 width 1
q0 _ -> q1 XX (0,3)
q1 + -> q2 IZ (0,-3)
q1 - -> qf ZZ (0,-2)
q2 _ -> qf XI (0,0)
";

    #[test]
    fn jumps_become_unit_moves() {
        let src = parse_machine(JUMPY).unwrap();
        let (out, report) = lower_movements(&src).unwrap();
        assert!(crate::compiler::check_conformance(&out, ModelName::G).is_empty());
        assert_eq!(report.expansion[0].target_rows, 3);
        assert_eq!(parse_machine(&format_machine(&out)).unwrap(), out);
        let input = RegisterState::basis(vec![CellId::new(1, 0)], &[false]).unwrap();
        let opts = TreeOptions::with_max_steps(200);
        let a = branch_tree(&src, &input, &opts).unwrap();
        let b = branch_tree(&out, &input, &opts).unwrap();
        let d = crate::machine::compare_marginals(&a.marginals(), &b.marginals());
        assert!(d < 1e-9, "{d}");
    }
}
