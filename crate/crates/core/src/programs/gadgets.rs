//! Measurement gadgets built from looped measurement sequences with a
//! classically tracked Pauli frame.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::fragment::{offset, FragmentRow, MachineFragment, RowAction};
use crate::error::{Error, Result};
use crate::machine::{Geometry, MachineBuilder, MachineDefinition, MovementSet, ObservableDecl, OutcomePattern};
use crate::observables::ModelName;
use crate::quantum::CellId;

/// Spelling with `letter` on the listed heads and `I` elsewhere.
pub(crate) fn spell(heads: usize, ops: &[(usize, char)]) -> String {
    let mut v = vec!['I'; heads];
    for &(h, c) in ops {
        v[h] = c;
    }
    v.into_iter().collect()
}

/// One measurement: the observable, the head positions it needs and the
/// frame bits toggled when the outcome is `−1`.
#[derive(Debug, Clone)]
pub(crate) struct Step {
    pub observable: String,
    pub at: Vec<i64>,
    pub flips: u32,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Decision {
    /// Leave after the segment, labelling the exit with the frame.
    Always,
    /// Leave after the segment if the frame is the identity.
    OnIdentity,
}

#[derive(Debug, Clone)]
pub(crate) struct Segment {
    pub steps: Vec<Step>,
    pub exit: Option<Decision>,
}

/// Segments run cyclically. A state `{prefix}{s}.{i}.{f}` holds the frame
/// `f` from before step `i` of segment `s`, whose outcome is in `λ`.
pub(crate) fn emit_loop(
    prefix: &str,
    segments: &[Segment],
    label: &dyn Fn(u32) -> String,
    aux: bool,
) -> MachineFragment {
    let n = segments.len();
    let name = |s: usize, i: usize, f: u32| format!("{prefix}{s}.{i}.{f}");
    let at = |s: usize, i: usize| &segments[s].steps[i].at;
    let next_at = |s: usize, i: usize| {
        if i + 1 < segments[s].steps.len() {
            at(s, i + 1)
        } else {
            at((s + 1) % n, 0)
        }
    };
    let perform = |s: usize, i: usize, f: u32| RowAction::Goto {
        to: name(s, i, f),
        observable: segments[s].steps[i].observable.clone(),
        movement: offset(at(s, i), next_at(s, i)),
    };
    let entry = format!("{prefix}in");
    let mut rows = vec![FragmentRow {
        from: entry.clone(),
        on: OutcomePattern::Any,
        action: perform(0, 0, 0),
        aux,
    }];
    let mut exits = BTreeSet::new();
    let mut seen = BTreeSet::from([(0usize, 0usize, 0u32)]);
    let mut work = VecDeque::from([(0usize, 0usize, 0u32)]);
    while let Some((s, i, f)) = work.pop_front() {
        for sign in [1i8, -1] {
            let f2 = if sign < 0 { f ^ segments[s].steps[i].flips } else { f };
            let (action, next) = if i + 1 < segments[s].steps.len() {
                (perform(s, i + 1, f2), Some((s, i + 1, f2)))
            } else {
                let here = next_at(s, i).clone();
                match segments[s].exit {
                    Some(Decision::Always) => (RowAction::Exit { label: label(f2), at: here }, None),
                    Some(Decision::OnIdentity) if f2 == 0 => (RowAction::Exit { label: label(0), at: here }, None),
                    _ => {
                        let s2 = (s + 1) % n;
                        (perform(s2, 0, f2), Some((s2, 0, f2)))
                    }
                }
            };
            if let RowAction::Exit { label, .. } = &action {
                exits.insert(label.clone());
            }
            rows.push(FragmentRow {
                from: name(s, i, f),
                on: OutcomePattern::Sign(sign),
                action,
                aux,
            });
            if let Some(key) = next {
                if seen.insert(key) {
                    work.push_back(key);
                }
            }
        }
    }
    MachineFragment {
        prefix: prefix.to_string(),
        entry,
        entry_at: at(0, 0).clone(),
        exits: exits.into_iter().collect(),
        rows,
        cells: BTreeMap::new(),
    }
}

/// Transfer of the cell `from` to `to` on the other head: Z on the
/// destination, X⊗X on both, Z on the source. Frame bits: 1 = X, 2 = Z on
/// the destination.
pub(crate) fn transfer_steps(from: (usize, i64), to: (usize, i64)) -> Vec<Step> {
    let mut at = vec![0; 2];
    at[from.0] = from.1;
    at[to.0] = to.1;
    vec![
        Step {
            observable: spell(2, &[(to.0, 'Z')]),
            at: at.clone(),
            flips: 1,
        },
        Step {
            observable: "XX".into(),
            at: at.clone(),
            flips: 2,
        },
        Step {
            observable: spell(2, &[(from.0, 'Z')]),
            at,
            flips: 1,
        },
    ]
}

/// The six Bell-preparation measurements on the pair `p0`, `p1` (one head)
/// through the auxiliary cell `x` (the other head). `flips` gives the frame
/// bits toggled by each of the six outcomes.
pub(crate) fn bell_steps(pair_head: usize, p0: i64, p1: i64, x: i64, flips: [u32; 6]) -> Vec<Step> {
    let xh = 1 - pair_head;
    let pos = |pair: i64| {
        let mut v = vec![0; 2];
        v[pair_head] = pair;
        v[xh] = x;
        v
    };
    let z_pair = spell(2, &[(pair_head, 'Z')]);
    let z_aux = spell(2, &[(xh, 'Z')]);
    vec![
        Step { observable: z_pair.clone(), at: pos(p0), flips: flips[0] },
        Step { observable: z_pair, at: pos(p1), flips: flips[1] },
        Step { observable: z_aux.clone(), at: pos(p1), flips: flips[2] },
        Step { observable: "XX".into(), at: pos(p0), flips: flips[3] },
        Step { observable: "XX".into(), at: pos(p1), flips: flips[4] },
        Step { observable: z_aux, at: pos(p1), flips: flips[5] },
    ]
}

/// Teleport `src` to `dst` through the helper `hlp` (same head as `dst`)
/// and the auxiliary `aux` (same head as `src`). Frame bits: 1 = X, 2 = Z
/// on the destination.
pub(crate) fn teleport_steps(src: (usize, i64), dst: (usize, i64), hlp: i64, aux: i64) -> Vec<Step> {
    let mut steps = bell_steps(dst.0, dst.1, hlp, aux, [1, 1, 1, 2, 2, 1]);
    let mut at = vec![0; 2];
    at[src.0] = src.1;
    at[dst.0] = hlp;
    steps.push(Step { observable: "ZZ".into(), at: at.clone(), flips: 1 });
    steps.push(Step { observable: "XX".into(), at, flips: 2 });
    steps
}

fn check_two_tapes(cells: &[(&str, CellId)], same: &[(&str, &str)], different: &[(&str, &str)]) -> Result<()> {
    let get = |n: &str| cells.iter().find(|(r, _)| *r == n).map(|(_, c)| *c).expect("role");
    for (_, c) in cells {
        if c.tape > 1 {
            return Err(Error::Construction(format!("cell {c} is not on tape 0 or 1")));
        }
    }
    for (x, y) in same {
        if get(x).tape != get(y).tape {
            return Err(Error::Construction(format!("`{x}` and `{y}` must share a tape")));
        }
        if get(x) == get(y) {
            return Err(Error::Construction(format!("`{x}` and `{y}` must be distinct cells")));
        }
    }
    for (x, y) in different {
        if get(x).tape == get(y).tape {
            return Err(Error::Construction(format!("`{x}` and `{y}` must be on different tapes")));
        }
    }
    Ok(())
}

fn roles(cells: &[(&str, CellId)]) -> BTreeMap<String, CellId> {
    cells.iter().map(|(r, c)| (r.to_string(), *c)).collect()
}

/// Transfer `j` to `a` (different tapes, head `t` on tape `t`), repeating
/// the transfer back and forth until the residual on `a` is the identity.
/// The single exit is labelled `done`.
pub fn build_state_transfer(j: CellId, a: CellId) -> Result<MachineFragment> {
    let cells = [("j", j), ("a", a)];
    check_two_tapes(&cells, &[], &[("j", "a")])?;
    let (js, as_) = ((j.tape, j.index), (a.tape, a.index));
    let segments = [
        Segment { steps: transfer_steps(js, as_), exit: Some(Decision::OnIdentity) },
        Segment { steps: transfer_steps(as_, js), exit: None },
    ];
    let mut f = emit_loop("tr", &segments, &|_| "done".into(), false);
    f.cells = roles(&cells);
    Ok(f)
}

/// Six-measurement Bell preparation of `a`, `b` through `c`. Exits are
/// labelled `a<P>b<P>c<bit>` with the frame left on each cell.
pub fn build_bell_prep(a: CellId, b: CellId, c: CellId) -> Result<MachineFragment> {
    let cells = [("a", a), ("b", b), ("c", c)];
    check_two_tapes(&cells, &[("a", "b")], &[("a", "c")])?;
    let segments = [Segment {
        steps: bell_steps(a.tape, a.index, b.index, c.index, [1, 4, 1, 2, 8, 4 | 16]),
        exit: Some(Decision::Always),
    }];
    let label = |f: u32| {
        let p = |x: u32, z: u32| crate::analysis::Pauli::from_bits(f & x != 0, f & z != 0);
        format!("a{}b{}c{}", p(1, 2), p(4, 8), (f >> 4) & 1)
    };
    let mut f = emit_loop("bp", &segments, &label, false);
    f.cells = roles(&cells);
    Ok(f)
}

/// Teleport `j` to `a` using the helper `b` and auxiliary `c`. On a non
/// identity residual the state is teleported back to `j` (reusing `c` and
/// `b`, which the Bell preparation re-initializes) and the attempt repeats.
pub fn build_teleport(j: CellId, a: CellId, b: CellId, c: CellId) -> Result<MachineFragment> {
    let cells = [("j", j), ("a", a), ("b", b), ("c", c)];
    check_two_tapes(&cells, &[("j", "c"), ("a", "b")], &[("j", "a")])?;
    let segments = [
        Segment {
            steps: teleport_steps((j.tape, j.index), (a.tape, a.index), b.index, c.index),
            exit: Some(Decision::OnIdentity),
        },
        Segment {
            steps: teleport_steps((a.tape, a.index), (j.tape, j.index), c.index, b.index),
            exit: None,
        },
    ];
    let mut f = emit_loop("tp", &segments, &|_| "done".into(), false);
    f.cells = roles(&cells);
    Ok(f)
}

/// Standalone transfer machine in `M_F`: the input on cell 0 of the
/// infinite tape, the output on the one-cell tape.
pub fn state_transfer_machine() -> MachineDefinition {
    let f = build_state_transfer(CellId::new(1, 0), CellId::new(0, 0)).expect("fixed layout");
    let base = MachineBuilder::new(Geometry::finite_and_infinite(1))
        .moves(MovementSet::parse("{0}xZ").expect("literal"))
        .observables(ObservableDecl::Set(ModelName::F))
        .input_head(1)
        .output(0, 1);
    f.standalone(base, Some(vec![0, 0])).expect("fixed layout")
}

/// Standalone teleportation machine in `M_D`: `j` = lower 0, `c` = lower 1,
/// `a` = upper 0, `b` = upper 1; the output is `a`.
pub fn teleport_machine() -> MachineDefinition {
    let f = build_teleport(CellId::new(0, 0), CellId::new(1, 0), CellId::new(1, 1), CellId::new(0, 1))
        .expect("fixed layout");
    let base = MachineBuilder::new(Geometry::two_infinite())
        .moves(MovementSet::all(2))
        .observables(ObservableDecl::Set(ModelName::D))
        .input_head(0)
        .output(1, 1);
    f.standalone(base, Some(vec![0, 0])).expect("fixed layout")
}

/// Standalone Bell preparation in `M_D`: `a`, `b` = upper 0, 1 and
/// `c` = lower 0; the output is `(a, b)`.
pub fn bell_prep_machine() -> MachineDefinition {
    let f = build_bell_prep(CellId::new(1, 0), CellId::new(1, 1), CellId::new(0, 0)).expect("fixed layout");
    let base = MachineBuilder::new(Geometry::two_infinite())
        .moves(MovementSet::all(2))
        .observables(ObservableDecl::Set(ModelName::D))
        .output(1, 2);
    f.standalone(base, Some(vec![0, 0])).expect("fixed layout")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::{branch_tree, TreeOptions};
    use crate::quantum::RegisterState;

    #[test]
    fn transfer_of_basis_state_is_one_pass() {
        let m = state_transfer_machine();
        let input = RegisterState::basis(vec![CellId::new(1, 0)], &[false]).unwrap();
        let tree = branch_tree(&m, &input, &TreeOptions::with_max_steps(4)).unwrap();
        // Z on a and X⊗X are random, Z on j then fixes the X bit
        let halted: f64 = tree.halted_mass();
        assert!((halted - 0.25).abs() < 1e-12, "{halted}");
        for (_, r) in tree.branches.iter().filter(|(_, r)| r.halted) {
            assert_eq!(r.final_config.step_count, 4);
        }
    }

    #[test]
    fn layouts_are_checked() {
        let c = |t, i| CellId::new(t, i);
        assert!(build_state_transfer(c(0, 0), c(0, 1)).is_err());
        assert!(build_bell_prep(c(0, 0), c(1, 0), c(0, 1)).is_err());
        assert!(build_teleport(c(0, 0), c(1, 0), c(1, 1), c(1, 2)).is_err());
    }

    #[test]
    fn fragment_names_are_prefixed() {
        let f = build_teleport(CellId::new(0, 0), CellId::new(1, 0), CellId::new(1, 1), CellId::new(0, 1)).unwrap();
        assert!(f.states().iter().all(|s| s.starts_with("tp")));
        assert_eq!(f.exits, vec!["done".to_string()]);
    }
}
