use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::report::{ExpansionEntry, LoweringReport};
use super::{pattern_text, require, Backend};
use crate::error::{Error, Result};
use crate::machine::{
    Geometry, MachineBuilder, MachineDefinition, MovementSet, ObservableDecl, Outcome, OutcomePattern, RowSpec,
    StateId, Transition,
};
use crate::observables::{named_set, ModelName, Observable, ObservableSet};
use crate::programs::{emit_loop, offset, teleport_steps, transfer_steps, Decision, ExitAction, Segment, Step};

/// Largest head separation the compiled control keeps track of.
pub const MAX_OFFSET: i64 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Entry {
    /// Source state with the real `λ`.
    Direct,
    /// Source state entered after a gadget, with the simulated sign.
    Carry(i8),
}

/// Where things live in the target: source cell `i` is cell `scale·i` under
/// the data head, the operand parking cell is cell 0 under the other head.
struct Layout {
    backend: Backend,
    data: usize,
    scale: i64,
    set: ObservableSet,
}

impl Layout {
    fn new(backend: Backend) -> Self {
        match backend {
            Backend::Transfer => Layout {
                backend,
                data: 1,
                scale: 1,
                set: named_set(ModelName::F),
            },
            Backend::Teleport => Layout {
                backend,
                data: 0,
                scale: 2,
                set: named_set(ModelName::D),
            },
        }
    }

    fn other(&self) -> usize {
        1 - self.data
    }

    /// Head positions with the data head on source-relative cell `rel`.
    fn at(&self, rel: i64) -> Vec<i64> {
        let mut v = vec![0, 0];
        v[self.data] = self.scale * rel;
        v
    }

    /// Move the data cell at `rel` into the parking cell.
    fn park(&self, rel: i64) -> Vec<Step> {
        let cell = self.scale * rel;
        match self.backend {
            Backend::Transfer => transfer_steps((self.data, cell), (self.other(), 0)),
            Backend::Teleport => teleport_steps((self.data, cell), (self.other(), 0), 1, cell + 1),
        }
    }

    fn unpark(&self, rel: i64) -> Vec<Step> {
        let cell = self.scale * rel;
        match self.backend {
            Backend::Transfer => transfer_steps((self.other(), 0), (self.data, cell)),
            Backend::Teleport => teleport_steps((self.other(), 0), (self.data, cell), cell + 1, 1),
        }
    }

    fn spelling(&self, obs: &Observable) -> Result<String> {
        self.set
            .members
            .iter()
            .find(|m| m.same_operator(obs))
            .map(|m| m.name().to_string())
            .ok_or_else(|| Error::UnsupportedObservable(obs.name().to_string()))
    }

    /// One-qubit factor `letter` on the data head.
    fn single(&self, letter: char) -> Result<String> {
        let mut v = ['I', 'I'];
        v[self.data] = letter;
        let name: String = v.iter().collect();
        self.spelling(&Observable::named(&name)?)
    }
}

struct Lowering<'a> {
    m: &'a MachineDefinition,
    layout: Layout,
    b: MachineBuilder,
    seen: BTreeSet<(StateId, i64, Entry)>,
    work: VecDeque<(StateId, i64, Entry)>,
    gadgets: BTreeMap<String, Vec<i64>>,
    gadget_count: usize,
}

fn ii_row(from: &str, on: OutcomePattern, to: String, movement: Vec<i64>) -> RowSpec {
    RowSpec {
        from: from.into(),
        on,
        to,
        observable: "II".into(),
        movement,
        aux: true,
    }
}

impl Lowering<'_> {
    fn state_name(&self, q: StateId, off: i64, e: Entry) -> String {
        let base = self.m.state_name(q);
        match (e, off) {
            (Entry::Direct, 0) => base.to_string(),
            (Entry::Direct, _) => format!("{base}[{off}]"),
            (Entry::Carry(s), _) => format!("{base}[{off}|{}]", if s < 0 { '-' } else { '+' }),
        }
    }

    fn visit(&mut self, q: StateId, off: i64, e: Entry) -> Result<String> {
        if q == self.m.final_state() {
            return Ok(self.m.state_name(q).to_string());
        }
        if off.abs() > MAX_OFFSET {
            return Err(Error::Resource(format!(
                "head separation exceeds {MAX_OFFSET} cells at state `{}`",
                self.m.state_name(q)
            )));
        }
        if self.seen.insert((q, off, e)) {
            self.work.push_back((q, off, e));
        }
        Ok(self.state_name(q, off, e))
    }

    /// Source-relative position the data head must end on after `t`.
    fn landing(&self, t: &Transition, off: i64) -> i64 {
        if t.next == self.m.final_state() && self.m.output().head == 0 {
            off + t.movement[0]
        } else {
            t.movement[1]
        }
    }

    fn emit(&mut self, from: &str, on: OutcomePattern, q: StateId, key: &str, t: &Transition, off: i64) -> Result<()> {
        let obs = self.m.observable(t).clone();
        let off2 = off + t.movement[0] - t.movement[1];
        let land = self.landing(t, off);
        if obs.is_trivial() {
            let to = self.visit(t.next, off2, Entry::Direct)?;
            self.b.add(RowSpec {
                from: from.into(),
                on,
                to,
                observable: "II".into(),
                movement: self.layout.at(land),
                aux: t.aux,
            });
            return Ok(());
        }
        let support = obs.support().to_vec();
        if support.len() == 1 {
            let h = support[0];
            let letter = obs
                .name()
                .chars()
                .nth(h)
                .filter(|c| obs.name().chars().count() == 2 && "XYZ".contains(*c))
                .ok_or_else(|| Error::UnsupportedObservable(obs.name().to_string()))?;
            let spelled = self.layout.single(letter)?;
            let rel = if h == 0 { off } else { 0 };
            let to = self.visit(t.next, off2, Entry::Direct)?;
            if rel == 0 {
                self.b.add(RowSpec {
                    from: from.into(),
                    on,
                    to,
                    observable: spelled,
                    movement: self.layout.at(land),
                    aux: t.aux,
                });
            } else {
                let helper = format!("{key}.h");
                if !self.gadgets.contains_key(&helper) {
                    self.gadgets.insert(helper.clone(), self.layout.at(rel));
                    self.b.add(RowSpec {
                        from: helper.clone(),
                        on: OutcomePattern::Any,
                        to,
                        observable: spelled,
                        movement: offset(&self.layout.at(rel), &self.layout.at(land)),
                        aux: t.aux,
                    });
                }
                self.b.add(ii_row(from, on, helper, self.layout.at(rel)));
            }
            return Ok(());
        }
        if off == 0 {
            return Err(Error::Construction(format!(
                "two-qubit measurement with both heads on one cell from state `{}`",
                self.m.state_name(q)
            )));
        }
        // the parked operand's factor sits on the other head in the target
        let direct_is_head0_parked = self.layout.other() == 0;
        let unswapped = self.layout.spelling(&obs).ok();
        let swapped = obs.swapped().ok().and_then(|s| self.layout.spelling(&s).ok());
        let (mover, spelled) = match (direct_is_head0_parked, unswapped, swapped) {
            (true, Some(s), _) => (0, s),
            (true, None, Some(s)) => (1, s),
            (false, Some(s), _) => (1, s),
            (false, None, Some(s)) => (0, s),
            _ => return Err(Error::UnsupportedObservable(obs.name().to_string())),
        };
        let rm = if mover == 0 { off } else { 0 };
        let ro = if mover == 0 { 0 } else { off };
        let entry = format!("{key}.f");
        if !self.gadgets.contains_key(&entry) {
            self.gadget_count += 2;
            let at = self.gadget(key, t, rm, ro, off2, land, spelled)?;
            self.gadgets.insert(entry.clone(), at);
        }
        self.b.add(ii_row(from, on, format!("{entry}in"), self.gadgets[&entry].clone()));
        Ok(())
    }

    #[allow(clippy::too_many_arguments)]
    fn gadget(&mut self, key: &str, t: &Transition, rm: i64, ro: i64, off2: i64, land: i64, spelled: String) -> Result<Vec<i64>> {
        let l = &self.layout;
        let there = Segment {
            steps: l.park(rm),
            exit: Some(Decision::OnIdentity),
        };
        let back = Segment {
            steps: l.unpark(rm),
            exit: None,
        };
        let measure = format!("{key}.m");
        let read = format!("{key}.n");
        let fwd = emit_loop(&format!("{key}.f"), &[there.clone(), back.clone()], &|_| "done".into(), true);
        let other_at = l.at(ro);
        fwd.link(&mut self.b, &|_| ExitAction {
            to: measure.clone(),
            observable: "II".into(),
            at: Some(other_at.clone()),
        });
        self.b.add(RowSpec {
            from: measure.clone(),
            on: OutcomePattern::Any,
            to: read.clone(),
            observable: spelled,
            movement: vec![0, 0],
            aux: t.aux,
        });
        for sign in [1i8, -1] {
            let s = if sign < 0 { '-' } else { '+' };
            let prefix = format!("{key}.b{s}");
            let to = self.visit(t.next, off2, Entry::Carry(sign))?;
            let l = &self.layout;
            let home = emit_loop(
                &prefix,
                &[
                    Segment {
                        steps: l.unpark(rm),
                        exit: Some(Decision::OnIdentity),
                    },
                    Segment {
                        steps: l.park(rm),
                        exit: None,
                    },
                ],
                &|_| "done".into(),
                true,
            );
            let land_at = l.at(land);
            let mv = offset(&l.at(ro), &home.entry_at);
            home.link(&mut self.b, &|_| ExitAction {
                to: to.clone(),
                observable: "II".into(),
                at: Some(land_at.clone()),
            });
            self.b.add(ii_row(&read, OutcomePattern::Sign(sign), format!("{prefix}in"), mv));
        }
        Ok(fwd.entry_at)
    }

    fn node(&mut self, q: StateId, off: i64, e: Entry, expansion: &mut BTreeMap<(String, String), (usize, usize)>) -> Result<()> {
        let from = self.state_name(q, off, e);
        let groups: Vec<(OutcomePattern, Transition)> =
            self.m.grouped_rows(q).into_iter().map(|(p, t)| (p, t.clone())).collect();
        let k = self.m.heads();
        let chosen: Vec<(OutcomePattern, OutcomePattern, Transition)> = match e {
            Entry::Direct => groups.into_iter().map(|(p, t)| (p, p, t)).collect(),
            Entry::Carry(s) => {
                let tag = Outcome::from_eigenvalue(s as f64);
                let (p, t) = groups
                    .into_iter()
                    .find(|(p, _)| p.matches(tag))
                    .expect("total");
                vec![(OutcomePattern::Any, p, t)]
            }
        };
        for (on, group, t) in chosen {
            let g = pattern_text(group, k);
            let key = format!("{}[{}|{off}]", self.m.state_name(q), g);
            let rows = self.b.rows().count();
            let states = self.b.rows().map(|r| r.from.clone()).collect::<BTreeSet<_>>().len();
            self.emit(&from, on, q, &key, &t, off)?;
            let slot = expansion.entry((self.m.state_name(q).to_string(), g)).or_default();
            slot.0 += self.b.rows().count() - rows;
            slot.1 += self.b.rows().map(|r| r.from.clone()).collect::<BTreeSet<_>>().len() - states;
        }
        Ok(())
    }
}

/// Realize the two-head single-tape machine on two tapes. Every source cell
/// lives on the data tape; a two-qubit measurement moves one operand to the
/// other tape, measures, and moves it back. The head separation is kept in
/// the control state, and the simulated outcome sign is carried through the
/// return trip in the state name.
pub fn lower_same_tape_measurements(
    machine: &MachineDefinition,
    backend: Backend,
) -> Result<(MachineDefinition, LoweringReport)> {
    require(machine, ModelName::A)?;
    let m = machine;
    let layout = Layout::new(backend);
    let (geometry, moves) = match backend {
        Backend::Transfer => (Geometry::finite_and_infinite(1), MovementSet::parse("{0}xZ")?),
        Backend::Teleport => (Geometry::two_infinite(), MovementSet::all(2)),
    };
    let target = backend.target();
    let b = MachineBuilder::new(geometry)
        .moves(moves)
        .observables(ObservableDecl::Set(target))
        .initial(m.state_name(m.initial()))
        .final_state(m.state_name(m.final_state()))
        .lambda0(m.lambda0())
        .input_head(layout.data)
        .output(layout.data, m.output().width)
        .stride(m.stride() * layout.scale as usize);
    let mut l = Lowering {
        m,
        layout,
        b,
        seen: BTreeSet::new(),
        work: VecDeque::new(),
        gadgets: BTreeMap::new(),
        gadget_count: 0,
    };
    l.visit(m.initial(), 0, Entry::Direct)?;
    let mut acc = BTreeMap::new();
    while let Some((q, off, e)) = l.work.pop_front() {
        l.node(q, off, e, &mut acc)?;
    }
    let gadgets = l.gadget_count;
    let out = l.b.build()?;
    require(&out, target)?;
    let expansion = acc
        .into_iter()
        .map(|((state, on), (rows, states))| ExpansionEntry {
            state,
            on,
            target_rows: rows,
            inserted_states: states,
        })
        .collect();
    Ok((
        out.clone(),
        LoweringReport {
            source_model: ModelName::A,
            target_model: target,
            backend: Some(backend.to_string()),
            state_count_before: m.states().len(),
            state_count_after: out.states().len(),
            inserted_gadget_count: gadgets,
            expansion,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::{branch_tree, compare_marginals, format_machine, parse_machine, TreeOptions};
    use crate::quantum::RegisterState;
    use num_complex::Complex64;

    const PAIR: &str = "\
tapes: inf
heads: 2 (0,0)
moves: Z^2
observables: A
output: head 0 width 2
q0 _ -> q1 II (0,1)
q1 _ -> q2 XX (0,0)
q2 + -> qf ZI (0,-1)
q2 - -> q3 XX+YX (0,0)
q3 _ -> qf ZZ (0,-1)
";

    fn input(m: &MachineDefinition) -> RegisterState {
        let c = |a: f64, b: f64| Complex64::new(a, b);
        RegisterState::normalized(
            m.input_cells(2),
            vec![c(0.3, 0.1), c(-0.5, 0.2), c(0.1, 0.7), c(0.2, -0.2)],
        )
        .unwrap()
    }

    fn agrees(backend: Backend) {
        let src = parse_machine(PAIR).unwrap();
        let (out, report) = lower_same_tape_measurements(&src, backend).unwrap();
        assert!(crate::compiler::check_conformance(&out, backend.target()).is_empty());
        assert_eq!(parse_machine(&format_machine(&out)).unwrap(), out);
        assert_eq!(report.inserted_gadget_count, 6);
        let opts = TreeOptions::with_max_steps(match backend { Backend::Transfer => 1500, Backend::Teleport => 600 });
        let a = crate::machine::merged_distribution(&src, &input(&src), &opts).unwrap().0;
        let b = crate::machine::merged_distribution(&out, &input(&out), &opts).unwrap().0;
        let ma = crate::machine::marginals(a.iter().map(|x| (x.probability, x.observed.clone(), &x.result)));
        let mb = crate::machine::marginals(b.iter().map(|x| (x.probability, x.observed.clone(), &x.result)));
        let d = compare_marginals(&ma, &mb);
        let running: f64 = b.iter().filter(|x| !x.result.halted).map(|x| x.probability).sum();
        assert!(running < 0.02, "{running}");
        assert!(d <= running + 1e-9, "{d} with {running} still running");
        let exact = branch_tree(&src, &input(&src), &opts).unwrap();
        assert!(compare_marginals(&exact.marginals(), &ma) < 1e-9);
    }

    #[test]
    fn transfer_backend_preserves_marginals() {
        agrees(Backend::Transfer);
    }

    #[test]
    fn teleport_backend_preserves_marginals() {
        agrees(Backend::Teleport);
    }

    #[test]
    fn single_cell_measurement_needs_no_gadget() {
        let src = parse_machine(
            "tapes: inf\nheads: 2 (0,0)\nmoves: Z^2\nobservables: A\nq0 _ -> qf XI (0,0)\n",
        )
        .unwrap();
        let (out, report) = lower_same_tape_measurements(&src, Backend::Transfer).unwrap();
        assert_eq!(report.inserted_gadget_count, 0);
        assert_eq!(out.states().len(), 2);
    }
}
