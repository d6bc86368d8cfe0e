use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::observables::{named_set, set_spellings, ModelName, Observable};
use crate::quantum::CellId;

/// A classical outcome tag in `{−1,+1}^k`, stored as a bit mask where bit
/// `i` set means component `i` is `−1`.
///
/// Measuring an observable with eigenvalue `m` yields the tag `(m, +1, …, +1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Outcome(u8);

impl Outcome {
    pub const PLUS: Outcome = Outcome(0);
    pub const MINUS: Outcome = Outcome(1);

    pub fn from_bits(bits: u8) -> Self {
        Outcome(bits)
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn from_eigenvalue(m: f64) -> Self {
        if m < 0.0 {
            Outcome::MINUS
        } else {
            Outcome::PLUS
        }
    }

    /// Sign of the first component.
    pub fn sign(self) -> i8 {
        if self.0 & 1 == 1 {
            -1
        } else {
            1
        }
    }

    /// `(1 − m)/2` for the first component: 0 for `+1`, 1 for `−1`.
    pub fn bit(self) -> u8 {
        self.0 & 1
    }

    /// All `2^k` tags in ascending order.
    pub fn all(k: usize) -> impl Iterator<Item = Outcome> {
        (0..(1u16 << k)).map(|b| Outcome(b as u8))
    }

    pub fn format(self, k: usize) -> String {
        (0..k)
            .map(|i| if self.0 >> i & 1 == 1 { '-' } else { '+' })
            .collect()
    }

    pub fn parse(text: &str, k: usize) -> Result<Self> {
        if text.chars().count() != k {
            return Err(Error::Validation(format!(
                "outcome tag `{text}` must have {k} signs"
            )));
        }
        let mut bits = 0u8;
        for (i, ch) in text.chars().enumerate() {
            match ch {
                '+' => {}
                '-' => bits |= 1 << i,
                _ => return Err(Error::Validation(format!("bad sign `{ch}` in tag `{text}`"))),
            }
        }
        Ok(Outcome(bits))
    }
}

/// Which outcome tags a transition row applies to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OutcomePattern {
    Any,
    /// Every tag whose first component has this sign.
    Sign(i8),
    Exact(Outcome),
}

impl OutcomePattern {
    pub fn matches(self, o: Outcome) -> bool {
        match self {
            OutcomePattern::Any => true,
            OutcomePattern::Sign(s) => o.sign() == s,
            OutcomePattern::Exact(t) => t == o,
        }
    }

    fn rank(self) -> u8 {
        match self {
            OutcomePattern::Any => 0,
            OutcomePattern::Sign(_) => 1,
            OutcomePattern::Exact(_) => 2,
        }
    }

    pub fn eigen(m: i8) -> Self {
        OutcomePattern::Sign(if m < 0 { -1 } else { 1 })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TapeSpec {
    Finite(usize),
    Infinite,
}

impl TapeSpec {
    pub fn contains(self, index: i64) -> bool {
        match self {
            TapeSpec::Finite(len) => index >= 0 && (index as u64) < len as u64,
            TapeSpec::Infinite => true,
        }
    }
}

impl fmt::Display for TapeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TapeSpec::Finite(n) => write!(f, "{n}"),
            TapeSpec::Infinite => f.write_str("inf"),
        }
    }
}

/// Allowed displacements of one head.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AxisMoves {
    Any,
    Set(Vec<i64>),
}

impl AxisMoves {
    pub fn contains(&self, d: i64) -> bool {
        match self {
            AxisMoves::Any => true,
            AxisMoves::Set(v) => v.contains(&d),
        }
    }

    pub fn unit() -> Self {
        AxisMoves::Set(vec![-1, 0, 1])
    }

    pub fn zero() -> Self {
        AxisMoves::Set(vec![0])
    }

    /// `true` if every move allowed here is allowed by `other`.
    pub fn subset_of(&self, other: &AxisMoves) -> bool {
        match (self, other) {
            (_, AxisMoves::Any) => true,
            (AxisMoves::Any, AxisMoves::Set(_)) => false,
            (AxisMoves::Set(a), AxisMoves::Set(_)) => a.iter().all(|&d| other.contains(d)),
        }
    }
}

impl fmt::Display for AxisMoves {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxisMoves::Any => f.write_str("Z"),
            AxisMoves::Set(v) => {
                let parts: Vec<String> = v.iter().map(i64::to_string).collect();
                write!(f, "{{{}}}", parts.join(","))
            }
        }
    }
}

/// Movement set `D`, a product of per-head sets.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MovementSet(pub Vec<AxisMoves>);

impl MovementSet {
    pub fn all(k: usize) -> Self {
        MovementSet(vec![AxisMoves::Any; k])
    }

    pub fn contains(&self, d: &[i64]) -> bool {
        d.len() == self.0.len() && self.0.iter().zip(d).all(|(a, &x)| a.contains(x))
    }

    pub fn heads(&self) -> usize {
        self.0.len()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if let Some(k) = t.strip_prefix("Z^") {
            let k: usize = k
                .trim()
                .parse()
                .map_err(|_| Error::Validation(format!("bad movement set `{text}`")))?;
            return Ok(MovementSet::all(k));
        }
        let mut axes = Vec::new();
        for part in t.split(['x', '×']) {
            let p = part.trim();
            if p == "Z" {
                axes.push(AxisMoves::Any);
                continue;
            }
            let inner = p
                .strip_prefix('{')
                .and_then(|s| s.strip_suffix('}'))
                .ok_or_else(|| Error::Validation(format!("bad movement set `{text}`")))?;
            let mut values = Vec::new();
            for v in inner.split(',').map(str::trim).filter(|v| !v.is_empty()) {
                let v: i64 = v
                    .trim_start_matches('+')
                    .parse()
                    .map_err(|_| Error::Validation(format!("bad movement `{v}`")))?;
                if !values.contains(&v) {
                    values.push(v);
                }
            }
            values.sort_unstable();
            axes.push(AxisMoves::Set(values));
        }
        Ok(MovementSet(axes))
    }
}

impl fmt::Display for MovementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(AxisMoves::to_string).collect();
        f.write_str(&parts.join("x"))
    }
}

/// Declared observable set `O` of a machine.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ObservableDecl {
    Set(ModelName),
    List(Vec<String>),
}

impl ObservableDecl {
    pub fn members(&self) -> Result<Vec<Observable>> {
        match self {
            ObservableDecl::Set(m) => Ok(named_set(*m).members),
            ObservableDecl::List(names) => names.iter().map(|n| Observable::named(n)).collect(),
        }
    }

    pub fn spellings(&self) -> Vec<String> {
        match self {
            ObservableDecl::Set(m) => set_spellings(*m).into_iter().map(String::from).collect(),
            ObservableDecl::List(v) => v.clone(),
        }
    }
}

impl fmt::Display for ObservableDecl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ObservableDecl::Set(m) => write!(f, "{}", m.letter()),
            ObservableDecl::List(v) => f.write_str(&v.join(",")),
        }
    }
}

/// Tapes and the tape each head runs on.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Geometry {
    pub tapes: Vec<TapeSpec>,
    pub head_tapes: Vec<usize>,
}

impl Geometry {
    pub fn heads(&self) -> usize {
        self.head_tapes.len()
    }

    pub fn one_tape(heads: usize) -> Self {
        Geometry {
            tapes: vec![TapeSpec::Infinite],
            head_tapes: vec![0; heads],
        }
    }

    /// A finite tape of `len` cells (head 0) and an infinite tape (head 1).
    pub fn finite_and_infinite(len: usize) -> Self {
        Geometry {
            tapes: vec![TapeSpec::Finite(len), TapeSpec::Infinite],
            head_tapes: vec![0, 1],
        }
    }

    pub fn two_infinite() -> Self {
        Geometry {
            tapes: vec![TapeSpec::Infinite, TapeSpec::Infinite],
            head_tapes: vec![0, 1],
        }
    }
}

/// Which head marks the quantum output at halt, and how many cells wide it is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct OutputSpec {
    pub head: usize,
    pub width: usize,
}

pub type StateId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Transition {
    pub next: StateId,
    /// Index into [`MachineDefinition::observable_table`].
    pub observable: usize,
    pub movement: Vec<i64>,
    /// Bookkeeping measurement of a compiled gadget, not part of the
    /// simulated computation.
    pub aux: bool,
}

/// `(Q, Σ, O, δ)` together with tapes, heads and I/O conventions.
#[derive(Debug, Clone, PartialEq)]
pub struct MachineDefinition {
    states: Vec<String>,
    index: HashMap<String, StateId>,
    initial: StateId,
    final_state: StateId,
    geometry: Geometry,
    moves: MovementSet,
    declared: ObservableDecl,
    table: Vec<Observable>,
    delta: Vec<Option<Transition>>,
    lambda0: Outcome,
    input_head: usize,
    output: OutputSpec,
    stride: usize,
}

impl MachineDefinition {
    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn state_name(&self, id: StateId) -> &str {
        &self.states[id]
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.index.get(name).copied()
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn final_state(&self) -> StateId {
        self.final_state
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geometry
    }

    pub fn heads(&self) -> usize {
        self.geometry.heads()
    }

    /// `|Σ| = 2^k`.
    pub fn alphabet_size(&self) -> usize {
        1 << self.heads()
    }

    pub fn outcomes(&self) -> impl Iterator<Item = Outcome> {
        Outcome::all(self.heads())
    }

    pub fn movement_set(&self) -> &MovementSet {
        &self.moves
    }

    pub fn declared_observables(&self) -> &ObservableDecl {
        &self.declared
    }

    pub fn observable_table(&self) -> &[Observable] {
        &self.table
    }

    pub fn observable(&self, t: &Transition) -> &Observable {
        &self.table[t.observable]
    }

    pub fn lambda0(&self) -> Outcome {
        self.lambda0
    }

    pub fn input_head(&self) -> usize {
        self.input_head
    }

    pub fn output(&self) -> OutputSpec {
        self.output
    }

    /// Spacing of consecutive input and output cells on their tapes.
    pub fn stride(&self) -> usize {
        self.stride
    }

    /// `δ(q, λ)`; `None` only for the final state.
    pub fn delta(&self, q: StateId, lambda: Outcome) -> Option<&Transition> {
        self.delta
            .get(q * self.alphabet_size() + lambda.bits() as usize)
            .and_then(Option::as_ref)
    }

    /// All defined `(q, λ, transition)` entries in state then tag order.
    pub fn transitions(&self) -> impl Iterator<Item = (StateId, Outcome, &Transition)> {
        let sigma = self.alphabet_size();
        self.delta.iter().enumerate().filter_map(move |(i, t)| {
            t.as_ref()
                .map(|t| (i / sigma, Outcome::from_bits((i % sigma) as u8), t))
        })
    }

    /// Cells holding an `n`-qubit input: `0, s, .., (n-1)s` on the input
    /// head's tape, where `s` is the stride.
    pub fn input_cells(&self, n: usize) -> Vec<CellId> {
        let tape = self.geometry.head_tapes[self.input_head];
        (0..n as i64)
            .map(|i| CellId::new(tape, i * self.stride as i64))
            .collect()
    }

    /// The rows of `q` with tags merged: one `_` row if every tag agrees,
    /// otherwise a sign row per agreeing sign group and exact rows for the rest.
    pub fn grouped_rows(&self, q: StateId) -> Vec<(OutcomePattern, &Transition)> {
        let k = self.heads();
        let tags: Vec<Outcome> = self.outcomes().collect();
        let Some(first) = self.delta(q, tags[0]) else { return Vec::new() };
        if tags.iter().all(|&t| self.delta(q, t) == Some(first)) {
            return vec![(OutcomePattern::Any, first)];
        }
        let mut out = Vec::new();
        for sign in [1i8, -1] {
            let group: Vec<Outcome> = tags.iter().copied().filter(|t| t.sign() == sign).collect();
            let t0 = self.delta(q, group[0]).expect("total");
            if k > 1 && group.iter().all(|&t| self.delta(q, t) == Some(t0)) {
                out.push((OutcomePattern::Sign(sign), t0));
            } else {
                for t in group {
                    out.push((OutcomePattern::Exact(t), self.delta(q, t).expect("total")));
                }
            }
        }
        out
    }

    /// Builder pre-filled with everything except the rows.
    pub fn to_builder(&self) -> MachineBuilder {
        let mut b = MachineBuilder::new(self.geometry.clone())
            .moves(self.moves.clone())
            .observables(self.declared.clone())
            .initial(&self.states[self.initial])
            .final_state(&self.states[self.final_state])
            .lambda0(self.lambda0)
            .input_head(self.input_head)
            .output(self.output.head, self.output.width)
            .stride(self.stride);
        for s in &self.states {
            b.declare_state(s);
        }
        b
    }
}

#[derive(Debug, Clone)]
pub struct RowSpec {
    pub from: String,
    pub on: OutcomePattern,
    pub to: String,
    pub observable: String,
    pub movement: Vec<i64>,
    pub aux: bool,
}

/// Collects rows by state name and checks the machine constraints in
/// [`MachineBuilder::build`].
#[derive(Debug, Clone)]
pub struct MachineBuilder {
    geometry: Geometry,
    moves: Option<MovementSet>,
    declared: Option<ObservableDecl>,
    initial: String,
    final_state: String,
    lambda0: Outcome,
    input_head: usize,
    output: OutputSpec,
    stride: usize,
    states: Vec<String>,
    rows: Vec<(usize, RowSpec)>,
}

impl MachineBuilder {
    pub fn new(geometry: Geometry) -> Self {
        MachineBuilder {
            geometry,
            moves: None,
            declared: None,
            initial: "q0".into(),
            final_state: "qf".into(),
            lambda0: Outcome::PLUS,
            input_head: 0,
            output: OutputSpec { head: 0, width: 1 },
            stride: 1,
            states: Vec::new(),
            rows: Vec::new(),
        }
    }

    pub fn moves(mut self, moves: MovementSet) -> Self {
        self.moves = Some(moves);
        self
    }

    pub fn observables(mut self, decl: ObservableDecl) -> Self {
        self.declared = Some(decl);
        self
    }

    pub fn initial(mut self, name: &str) -> Self {
        self.initial = name.into();
        self
    }

    pub fn final_state(mut self, name: &str) -> Self {
        self.final_state = name.into();
        self
    }

    pub fn lambda0(mut self, tag: Outcome) -> Self {
        self.lambda0 = tag;
        self
    }

    pub fn input_head(mut self, head: usize) -> Self {
        self.input_head = head;
        self
    }

    pub fn output(mut self, head: usize, width: usize) -> Self {
        self.output = OutputSpec { head, width };
        self
    }

    pub fn stride(mut self, stride: usize) -> Self {
        self.stride = stride;
        self
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geometry
    }

    pub fn initial_name(&self) -> &str {
        &self.initial
    }

    pub fn final_name(&self) -> &str {
        &self.final_state
    }

    /// Fix the position of a state in the state list.
    pub fn declare_state(&mut self, name: &str) {
        if !self.states.iter().any(|s| s == name) {
            self.states.push(name.to_string());
        }
    }

    pub fn add(&mut self, row: RowSpec) -> &mut Self {
        self.add_at_line(0, row)
    }

    pub(crate) fn add_at_line(&mut self, line: usize, row: RowSpec) -> &mut Self {
        self.rows.push((line, row));
        self
    }

    pub fn row(
        &mut self,
        from: &str,
        on: OutcomePattern,
        to: &str,
        observable: &str,
        movement: &[i64],
    ) -> &mut Self {
        self.add(RowSpec {
            from: from.into(),
            on,
            to: to.into(),
            observable: observable.into(),
            movement: movement.to_vec(),
            aux: false,
        })
    }

    pub fn rows(&self) -> impl Iterator<Item = &RowSpec> {
        self.rows.iter().map(|(_, r)| r)
    }

    pub fn build(self) -> Result<MachineDefinition> {
        let k = self.geometry.heads();
        let fail = |line: usize, msg: String| -> Error {
            if line > 0 {
                Error::parse(line, msg)
            } else {
                Error::Construction(msg)
            }
        };
        if k == 0 {
            return Err(Error::Construction("a machine needs at least one head".into()));
        }
        if k > 4 {
            return Err(Error::Construction("at most four heads are supported".into()));
        }
        if self.geometry.tapes.is_empty() {
            return Err(Error::Construction("a machine needs at least one tape".into()));
        }
        for (h, &t) in self.geometry.head_tapes.iter().enumerate() {
            if t >= self.geometry.tapes.len() {
                return Err(Error::Construction(format!("head {h} assigned to missing tape {t}")));
            }
        }
        if self.input_head >= k || self.output.head >= k {
            return Err(Error::Construction("input/output head out of range".into()));
        }
        if self.stride == 0 {
            return Err(Error::Construction("stride must be positive".into()));
        }
        if self.initial == self.final_state {
            return Err(Error::Construction("initial and final states must differ".into()));
        }
        if self.lambda0.bits() as usize >= 1 << k {
            return Err(Error::Construction("lambda0 is not in the alphabet".into()));
        }
        let moves = self.moves.unwrap_or_else(|| MovementSet::all(k));
        if moves.heads() != k {
            return Err(Error::Construction(format!(
                "movement set has {} components for {k} heads",
                moves.heads()
            )));
        }
        let declared = self
            .declared
            .ok_or_else(|| Error::Construction("observable set not declared".into()))?;
        let allowed = declared.members()?;

        let mut states = Vec::new();
        let mut index = HashMap::new();
        let mut intern = |name: &str, states: &mut Vec<String>| -> StateId {
            *index.entry(name.to_string()).or_insert_with(|| {
                states.push(name.to_string());
                states.len() - 1
            })
        };
        intern(&self.initial, &mut states);
        intern(&self.final_state, &mut states);
        for s in &self.states {
            intern(s, &mut states);
        }
        for (_, r) in &self.rows {
            intern(&r.from, &mut states);
            intern(&r.to, &mut states);
        }
        let initial = index[&self.initial];
        let final_state = index[&self.final_state];

        let mut table: Vec<Observable> = Vec::new();
        let mut table_index: HashMap<String, usize> = HashMap::new();
        let sigma = 1usize << k;
        let mut delta: Vec<Option<(u8, Transition)>> = vec![None; states.len() * sigma];
        for (line, r) in &self.rows {
            let line = *line;
            let from = index[&r.from];
            if from == final_state {
                return Err(fail(line, format!("row leaves the final state `{}`", r.from)));
            }
            let obs_idx = match table_index.get(&r.observable) {
                Some(&i) => i,
                None => {
                    let obs = Observable::named(&r.observable)
                        .map_err(|e| fail(line, e.to_string()))?;
                    if obs.arity() != k {
                        return Err(fail(
                            line,
                            format!("observable `{}` acts on {} qubits but the machine has {k} heads", r.observable, obs.arity()),
                        ));
                    }
                    if obs
                        .branches()
                        .iter()
                        .any(|b| (b.eigenvalue.abs() - 1.0).abs() > 1e-8)
                    {
                        return Err(fail(
                            line,
                            format!("observable `{}` has outcomes outside {{-1,+1}}", r.observable),
                        ));
                    }
                    if !obs.is_trivial() && !allowed.iter().any(|a| a.same_operator(&obs)) {
                        return Err(fail(
                            line,
                            format!("observable `{}` is not in the declared set {declared}", r.observable),
                        ));
                    }
                    table.push(obs);
                    table_index.insert(r.observable.clone(), table.len() - 1);
                    table.len() - 1
                }
            };
            if r.movement.len() != k {
                return Err(fail(line, format!("movement needs {k} components")));
            }
            if !moves.contains(&r.movement) {
                return Err(fail(
                    line,
                    format!("movement {:?} is not in D = {moves}", r.movement),
                ));
            }
            let t = Transition {
                next: index[&r.to],
                observable: obs_idx,
                movement: r.movement.clone(),
                aux: r.aux,
            };
            let rank = r.on.rank();
            for tag in Outcome::all(k) {
                if !r.on.matches(tag) {
                    continue;
                }
                let slot = &mut delta[from * sigma + tag.bits() as usize];
                match slot {
                    Some((prev_rank, prev)) if *prev_rank == rank => {
                        if *prev != t {
                            return Err(fail(
                                line,
                                format!("conflicting rows for ({}, {})", r.from, tag.format(k)),
                            ));
                        }
                    }
                    Some((prev_rank, _)) if *prev_rank > rank => {}
                    _ => *slot = Some((rank, t.clone())),
                }
            }
        }
        for q in 0..states.len() {
            if q == final_state {
                continue;
            }
            for tag in Outcome::all(k) {
                if delta[q * sigma + tag.bits() as usize].is_none() {
                    return Err(Error::Construction(format!(
                        "delta is not total: no row for ({}, {})",
                        states[q],
                        tag.format(k)
                    )));
                }
            }
        }
        // number observables by first use in (state, tag) order
        let mut delta: Vec<Option<Transition>> = delta.into_iter().map(|s| s.map(|(_, t)| t)).collect();
        let mut renumber: Vec<Option<usize>> = vec![None; table.len()];
        let mut ordered = Vec::with_capacity(table.len());
        for t in delta.iter_mut().flatten() {
            let idx = *renumber[t.observable].get_or_insert_with(|| {
                ordered.push(table[t.observable].clone());
                ordered.len() - 1
            });
            t.observable = idx;
        }
        Ok(MachineDefinition {
            states,
            index,
            initial,
            final_state,
            geometry: self.geometry,
            moves,
            declared,
            table: ordered,
            delta,
            lambda0: self.lambda0,
            input_head: self.input_head,
            output: self.output,
            stride: self.stride,
        })
    }
}
