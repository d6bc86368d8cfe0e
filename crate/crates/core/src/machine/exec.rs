//! Step and run semantics.
//!
//! A step looks up `δ(q, λ)`, measures the observable on the cells under the
//! heads, records the outcome as the new `λ`, switches to the next classical
//! state and only then moves the heads.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::definition::{MachineDefinition, Outcome, StateId, Transition};
use crate::error::{Error, Result};
use crate::observables::Observable;
use crate::quantum::{CellId, QubitInit, RegisterState, DEFAULT_MAX_QUBITS, TOLERANCE};

/// Step budget used when callers don't pick one.
pub const DEFAULT_MAX_STEPS: u64 = 10_000;

/// How cells are initialized when they first enter the register.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FreshCells {
    Zero,
    /// A seeded random product state; each cell's state depends only on the
    /// seed and the cell address.
    RandomProduct { seed: u64 },
}

impl FreshCells {
    pub fn init_for(&self, cell: CellId) -> QubitInit {
        match *self {
            FreshCells::Zero => QubitInit::Zero,
            FreshCells::RandomProduct { seed } => {
                let mix = seed
                    ^ (cell.tape as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
                    ^ (cell.index as u64).wrapping_mul(0xC2B2_AE3D_27D4_EB4F);
                random_qubit(&mut ChaCha8Rng::seed_from_u64(mix))
            }
        }
    }
}

/// Haar-random single-qubit state.
pub fn random_qubit<R: Rng + ?Sized>(rng: &mut R) -> QubitInit {
    let cos_theta: f64 = rng.random_range(-1.0..=1.0);
    let phi: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    let half = cos_theta.acos() / 2.0;
    QubitInit::Amplitudes(
        Complex64::new(half.cos(), 0.0),
        Complex64::from_polar(half.sin(), phi),
    )
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    pub max_steps: u64,
    pub fresh: FreshCells,
    pub max_qubits: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            max_steps: DEFAULT_MAX_STEPS,
            fresh: FreshCells::Zero,
            max_qubits: DEFAULT_MAX_QUBITS,
        }
    }
}

impl RunOptions {
    pub fn with_max_steps(max_steps: u64) -> Self {
        RunOptions {
            max_steps,
            ..Default::default()
        }
    }
}

/// `(|ψ⟩, l, λ, q)` plus a step counter.
#[derive(Debug, Clone, PartialEq)]
pub struct Configuration {
    pub state: RegisterState,
    /// Cell under each head.
    pub heads: Vec<CellId>,
    pub last_outcome: Outcome,
    pub classical_state: StateId,
    pub step_count: u64,
}

impl Configuration {
    pub fn head_positions(&self) -> Vec<i64> {
        self.heads.iter().map(|c| c.index).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceEntry {
    pub step: u64,
    pub state: String,
    pub observable: String,
    pub heads: Vec<i64>,
    pub outcome: Outcome,
    pub eigenvalue: f64,
    pub probability: f64,
    pub aux: bool,
    #[serde(skip)]
    pub trivial: bool,
}

impl TraceEntry {
    /// Whether the entry belongs to the simulated computation: a real
    /// measurement that is not gadget bookkeeping.
    pub fn is_observed(&self) -> bool {
        !self.aux && !self.trivial
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub halted: bool,
    pub final_config: Configuration,
    pub trace: Vec<TraceEntry>,
    pub output_cells: Vec<CellId>,
}

impl RunResult {
    /// Outcome signs of the observed (non-bookkeeping) measurements.
    pub fn observed_outcomes(&self) -> Vec<i8> {
        self.trace
            .iter()
            .filter(|e| e.is_observed())
            .map(|e| e.outcome.sign())
            .collect()
    }

    /// Pure state of the output cells, if unentangled with the rest.
    pub fn output_state(&self) -> Result<Option<RegisterState>> {
        self.final_config.state.factor_out(&self.output_cells)
    }
}

/// Every outcome of measuring `obs` on the cells under the heads, with its
/// probability, in ascending eigenvalue order. Zero-probability branches are
/// dropped.
pub fn measurement_branches(
    config: &Configuration,
    obs: &Observable,
) -> Result<Vec<(f64, Outcome, Configuration)>> {
    if obs.is_trivial() {
        let mut next = config.clone();
        let tag = Outcome::from_eigenvalue(obs.local_branches()[0].eigenvalue);
        next.last_outcome = tag;
        return Ok(vec![(1.0, tag, next)]);
    }
    if obs.arity() != config.heads.len() {
        return Err(Error::Structural(format!(
            "{}-qubit observable measured with {} heads",
            obs.arity(),
            config.heads.len()
        )));
    }
    let support = obs.support();
    let targets: Vec<CellId> = support.iter().map(|&h| config.heads[h]).collect();
    for (i, &a) in support.iter().enumerate() {
        for &b in &support[i + 1..] {
            if config.heads[a] == config.heads[b] {
                return Err(Error::OverlappingHeads {
                    first: a,
                    second: b,
                    cell: config.heads[a],
                });
            }
        }
    }
    let mut out = Vec::with_capacity(obs.local_branches().len());
    let mut total = 0.0;
    for branch in obs.local_branches() {
        if let Some((p, state)) = config.state.project(&branch.projector, &targets)? {
            total += p;
            let tag = Outcome::from_eigenvalue(branch.eigenvalue);
            out.push((
                p,
                tag,
                Configuration {
                    state,
                    heads: config.heads.clone(),
                    last_outcome: tag,
                    classical_state: config.classical_state,
                    step_count: config.step_count,
                },
            ));
        }
    }
    if out.is_empty() {
        return Err(Error::Numeric("every measurement branch has zero probability".into()));
    }
    if (total - 1.0).abs() > TOLERANCE {
        return Err(Error::Numeric(format!("branch probabilities sum to {total}")));
    }
    Ok(out)
}

/// Sample one outcome of `obs` by cumulative probability.
pub fn measure<R: Rng + ?Sized>(
    config: &Configuration,
    obs: &Observable,
    rng: &mut R,
) -> Result<(Outcome, Configuration)> {
    let branches = measurement_branches(config, obs)?;
    let (_, tag, next) = sample(branches, rng);
    Ok((tag, next))
}

fn sample<T, R: Rng + ?Sized>(branches: Vec<(f64, Outcome, T)>, rng: &mut R) -> (f64, Outcome, T) {
    let r: f64 = rng.random();
    let mut acc = 0.0;
    let last = branches.len() - 1;
    for (i, b) in branches.into_iter().enumerate() {
        acc += b.0;
        if r < acc || i == last {
            return b;
        }
    }
    unreachable!("branches is non-empty")
}

impl MachineDefinition {
    /// Configuration with `input` on the input tape and every head at cell 0.
    pub fn initial_configuration(&self, input: &RegisterState) -> Result<Configuration> {
        let expected = self.input_cells(input.num_qubits());
        let mut sorted: Vec<CellId> = input.cells().to_vec();
        sorted.sort();
        if sorted != expected {
            return Err(Error::Precondition(format!(
                "input cells must be {:?} on the input tape",
                expected.iter().map(ToString::to_string).collect::<Vec<_>>()
            )));
        }
        let tape = self.geometry().tapes[self.geometry().head_tapes[self.input_head()]];
        if let Some(last) = expected.last() {
            if !tape.contains(last.index) {
                return Err(Error::Precondition("input does not fit on the input tape".into()));
            }
        }
        let heads = self
            .geometry()
            .head_tapes
            .iter()
            .map(|&t| CellId::new(t, 0))
            .collect();
        Ok(Configuration {
            state: input.reorder(&expected)?,
            heads,
            last_outcome: self.lambda0(),
            classical_state: self.initial(),
            step_count: 0,
        })
    }

    /// Every branch of one transition from `config`.
    pub fn step_branches(
        &self,
        config: &Configuration,
        opts: &RunOptions,
    ) -> Result<Vec<(f64, Configuration, TraceEntry)>> {
        let q = config.classical_state;
        if q == self.final_state() {
            return Err(Error::Precondition("the machine has already halted".into()));
        }
        let t: &Transition = self.delta(q, config.last_outcome).ok_or_else(|| {
            Error::Precondition(format!("no transition from `{}`", self.state_name(q)))
        })?;
        let obs = self.observable(t);
        let mut config = config.clone();
        if !obs.is_trivial() {
            let fresh: Vec<CellId> = obs
                .support()
                .iter()
                .map(|&h| config.heads[h])
                .filter(|c| !config.state.contains(*c))
                .collect();
            if !fresh.is_empty() {
                let mut cells = fresh.clone();
                cells.dedup();
                let inits: Vec<QubitInit> = cells.iter().map(|&c| opts.fresh.init_for(c)).collect();
                config.state = config.state.extend_each(&cells, &inits, opts.max_qubits)?;
            }
        }
        let heads_before = config.head_positions();
        let branches = measurement_branches(&config, obs)?;
        let mut out = Vec::with_capacity(branches.len());
        for (p, tag, mut next) in branches {
            next.classical_state = t.next;
            next.step_count += 1;
            self.move_heads(&mut next, &t.movement)?;
            let entry = TraceEntry {
                step: next.step_count,
                state: self.state_name(q).to_string(),
                observable: obs.name().to_string(),
                heads: heads_before.clone(),
                outcome: tag,
                eigenvalue: if tag.sign() < 0 { -1.0 } else { 1.0 },
                probability: p,
                aux: t.aux,
                trivial: obs.is_trivial(),
            };
            out.push((p, next, entry));
        }
        Ok(out)
    }

    fn move_heads(&self, config: &mut Configuration, movement: &[i64]) -> Result<()> {
        if !self.movement_set().contains(movement) {
            return Err(Error::ModelViolation(format!(
                "movement {movement:?} is not in D = {}",
                self.movement_set()
            )));
        }
        for (h, (cell, d)) in config.heads.iter_mut().zip(movement).enumerate() {
            let index = cell.index + d;
            if !self.geometry().tapes[cell.tape].contains(index) {
                return Err(Error::Movement {
                    head: h,
                    tape: cell.tape,
                    index,
                });
            }
            cell.index = index;
        }
        Ok(())
    }

    /// One sampled transition.
    pub fn step<R: Rng + ?Sized>(
        &self,
        config: &Configuration,
        rng: &mut R,
        opts: &RunOptions,
    ) -> Result<(Configuration, TraceEntry)> {
        let branches = self
            .step_branches(config, opts)?
            .into_iter()
            .map(|(p, c, e)| (p, e.outcome, (c, e)))
            .collect();
        let (_, _, (c, e)) = sample(branches, rng);
        Ok((c, e))
    }

    /// Run until the final state or until `opts.max_steps` transitions.
    pub fn run<R: Rng + ?Sized>(
        &self,
        input: &RegisterState,
        rng: &mut R,
        opts: &RunOptions,
    ) -> Result<RunResult> {
        let mut config = self.initial_configuration(input)?;
        let mut trace = Vec::new();
        while config.classical_state != self.final_state() && config.step_count < opts.max_steps {
            let (next, entry) = self.step(&config, rng, opts)?;
            trace.push(entry);
            config = next;
        }
        self.finish(config, trace, opts)
    }

    pub(crate) fn finish(
        &self,
        mut config: Configuration,
        trace: Vec<TraceEntry>,
        opts: &RunOptions,
    ) -> Result<RunResult> {
        let halted = config.classical_state == self.final_state();
        let out = self.output();
        let head = config.heads[out.head];
        let stride = self.stride() as i64;
        let output_cells: Vec<CellId> = (0..out.width as i64)
            .map(|i| CellId::new(head.tape, head.index + i * stride))
            .collect();
        let missing: Vec<CellId> = output_cells
            .iter()
            .copied()
            .filter(|c| !config.state.contains(*c))
            .collect();
        if !missing.is_empty() {
            let inits: Vec<QubitInit> = missing.iter().map(|&c| opts.fresh.init_for(c)).collect();
            config.state = config
                .state
                .extend_each(&missing, &inits, opts.max_qubits.max(config.state.num_qubits() + missing.len()))?;
        }
        Ok(RunResult {
            halted,
            final_config: config,
            trace,
            output_cells,
        })
    }
}

/// Seeded generator used for runs and trials.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
