//! Classical bits on qubit tapes: writing a basis value with X and Z
//! measurements, and embedding binary Turing machines.

use std::collections::{BTreeMap, BTreeSet};

use super::fragment::{ExitAction, FragmentRow, MachineFragment, RowAction};
use crate::error::{Error, Result};
use crate::machine::{
    AxisMoves, Geometry, MachineBuilder, MachineDefinition, MovementSet, ObservableDecl, OutcomePattern, RowSpec,
};
use crate::observables::ModelName;
use crate::quantum::CellId;

fn sign_of(bit: u8) -> i8 {
    if bit == 0 {
        1
    } else {
        -1
    }
}

/// Drive the cell under the single head to `|bit⟩`: alternate X and Z
/// until Z reports `bit`. With `literal` the first measurement is X
/// regardless of the cell; otherwise the cell is read first.
pub fn build_classical_write(bit: u8, cell: CellId, literal: bool) -> Result<MachineFragment> {
    if bit > 1 {
        return Err(Error::Construction(format!("bit must be 0 or 1, got {bit}")));
    }
    if cell.tape != 0 {
        return Err(Error::Construction(format!("cell {cell} is not on tape 0")));
    }
    let p = format!("w{bit}.");
    let st = |s: &str| format!("{p}{s}");
    let goto = |to: &str, obs: &str| RowAction::Goto {
        to: st(to),
        observable: obs.into(),
        movement: vec![0],
    };
    let row = |from: &str, on, action| FragmentRow {
        from: st(from),
        on,
        action,
        aux: false,
    };
    let first = if literal { goto("x", "X") } else { goto("z", "Z") };
    let rows = vec![
        row("in", OutcomePattern::Any, first),
        row("x", OutcomePattern::Any, goto("z", "Z")),
        row(
            "z",
            OutcomePattern::Sign(sign_of(bit)),
            RowAction::Exit {
                label: "done".into(),
                at: vec![cell.index],
            },
        ),
        row("z", OutcomePattern::Sign(-sign_of(bit)), goto("x", "X")),
    ];
    Ok(MachineFragment {
        prefix: p.clone(),
        entry: st("in"),
        entry_at: vec![cell.index],
        exits: vec!["done".into()],
        rows,
        cells: BTreeMap::from([("w".to_string(), cell)]),
    })
}

fn classical_base() -> MachineBuilder {
    MachineBuilder::new(Geometry::one_tape(1))
        .moves(MovementSet(vec![AxisMoves::unit()]))
        .observables(ObservableDecl::Set(ModelName::C))
}

/// Standalone `M_C` machine writing `bit` to cell 0.
pub fn classical_write_machine(bit: u8, literal: bool) -> Result<MachineDefinition> {
    build_classical_write(bit, CellId::new(0, 0), literal)?.standalone(classical_base(), Some(vec![0]))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TmRule {
    pub write: u8,
    pub movement: i64,
    pub next: String,
}

/// A deterministic Turing machine over `{0, 1}` with one head.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassicalTm {
    pub initial: String,
    pub halt: String,
    pub rules: BTreeMap<(String, u8), TmRule>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TmRun {
    pub tape: BTreeMap<i64, u8>,
    pub head: i64,
    pub steps: usize,
    pub halted: bool,
}

impl TmRun {
    pub fn cells(&self, from: i64, width: usize) -> Vec<u8> {
        (0..width as i64).map(|i| self.tape.get(&(from + i)).copied().unwrap_or(0)).collect()
    }
}

impl ClassicalTm {
    pub fn new(initial: &str, halt: &str) -> Self {
        ClassicalTm {
            initial: initial.into(),
            halt: halt.into(),
            rules: BTreeMap::new(),
        }
    }

    pub fn rule(mut self, state: &str, read: u8, write: u8, movement: i64, next: &str) -> Self {
        self.rules.insert(
            (state.into(), read),
            TmRule {
                write,
                movement,
                next: next.into(),
            },
        );
        self
    }

    pub fn states(&self) -> Vec<String> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        let mut push = |s: &String| {
            if seen.insert(s.clone()) {
                out.push(s.clone());
            }
        };
        push(&self.initial);
        for ((s, _), r) in &self.rules {
            push(s);
            push(&r.next);
        }
        out
    }

    /// Every non-halting state reads both symbols, writes bits and moves
    /// by at most one cell.
    pub fn check(&self) -> Result<()> {
        if self.initial == self.halt {
            return Err(Error::Construction("initial and halting states must differ".into()));
        }
        for s in self.states() {
            for b in 0..2u8 {
                let key = (s.clone(), b);
                match self.rules.get(&key) {
                    None if s != self.halt => {
                        return Err(Error::Construction(format!("no rule for state `{s}` reading {b}")))
                    }
                    Some(_) if s == self.halt => {
                        return Err(Error::Construction(format!("halting state `{s}` has a rule")))
                    }
                    Some(r) if r.write > 1 || r.movement.abs() > 1 => {
                        return Err(Error::Construction(format!("rule for `{s}` reading {b} is not binary with unit moves")))
                    }
                    _ => {}
                }
            }
        }
        for (_, b) in self.rules.keys() {
            if *b > 1 {
                return Err(Error::Construction(format!("read symbol {b} is not a bit")));
            }
        }
        Ok(())
    }

    /// Run on `input` written at cells `0..`, blank cells reading 0.
    pub fn run(&self, input: &[u8], max_steps: usize) -> TmRun {
        let mut tape: BTreeMap<i64, u8> = input.iter().enumerate().map(|(i, &b)| (i as i64, b)).collect();
        let mut head = 0i64;
        let mut state = self.initial.clone();
        let mut steps = 0;
        while state != self.halt && steps < max_steps {
            let b = tape.get(&head).copied().unwrap_or(0);
            let Some(r) = self.rules.get(&(state.clone(), b)) else { break };
            tape.insert(head, r.write);
            head += r.movement;
            state = r.next.clone();
            steps += 1;
        }
        TmRun {
            tape,
            head,
            steps,
            halted: state == self.halt,
        }
    }

    /// Three-bit increment, most significant bit on cell 0. Walks to the
    /// last cell, carries back and halts on cell 0.
    pub fn increment3() -> Self {
        let mut tm = ClassicalTm::new("s0", "h");
        for b in 0..2 {
            tm = tm
                .rule("s0", b, b, 1, "s1")
                .rule("s1", b, b, 1, "c2")
                .rule("b1", b, b, -1, "h")
                .rule("b0", b, b, 0, "h");
        }
        tm.rule("c2", 0, 1, -1, "b1")
            .rule("c2", 1, 0, -1, "c1")
            .rule("c1", 0, 1, -1, "b0")
            .rule("c1", 1, 0, -1, "c0")
            .rule("c0", 0, 1, 0, "h")
            .rule("c0", 1, 0, 0, "h")
    }

    /// Negate cell 0.
    pub fn bit_flip() -> Self {
        ClassicalTm::new("s", "h").rule("s", 0, 1, 0, "h").rule("s", 1, 0, 0, "h")
    }
}

/// `M_C` machine simulating `tm`: each step reads the cell with Z, then
/// either moves on or rewrites the cell with the X/Z write loop first.
pub fn embed_classical_tm(tm: &ClassicalTm, output_width: usize) -> Result<MachineDefinition> {
    tm.check()?;
    let read = |s: &str| format!("R.{s}");
    let decide = |s: &str| format!("D.{s}");
    let mut b = classical_base().initial(&read(&tm.initial)).output(0, output_width);
    let fin = b.final_name().to_string();
    let target = |s: &str| if s == tm.halt { fin.clone() } else { read(s) };
    for s in tm.states().into_iter().filter(|s| *s != tm.halt) {
        b.row(&read(&s), OutcomePattern::Any, &decide(&s), "Z", &[0]);
        for bit in 0..2u8 {
            let r = &tm.rules[&(s.clone(), bit)];
            let on = OutcomePattern::Sign(sign_of(bit));
            let next = target(&r.next);
            if r.write == bit {
                b.row(&decide(&s), on, &next, "I", &[r.movement]);
                continue;
            }
            let mut w = build_classical_write(r.write, CellId::new(0, 0), true)?;
            let prefix = format!("W.{s}.{bit}.");
            w.rows.retain(|row| row.from != w.entry);
            for row in &mut w.rows {
                row.aux = true;
                row.from = row.from.replacen(&w.prefix, &prefix, 1);
                if let RowAction::Goto { to, .. } = &mut row.action {
                    *to = to.replacen(&w.prefix, &prefix, 1);
                }
            }
            b.add(RowSpec {
                from: decide(&s),
                on,
                to: format!("{prefix}x"),
                observable: "X".into(),
                movement: vec![0],
                aux: true,
            });
            w.link(&mut b, &|_| ExitAction {
                to: next.clone(),
                observable: "I".into(),
                at: Some(vec![r.movement]),
            });
        }
    }
    b.build()
}
