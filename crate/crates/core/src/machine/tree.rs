//! Exhaustive enumeration of measurement branches.

use std::collections::{BTreeMap, HashMap};

use num_complex::Complex64;

use super::definition::MachineDefinition;
use super::exec::{Configuration, RunOptions, RunResult, TraceEntry};
use crate::error::{Error, Result};
use crate::quantum::{CellId, Operator, RegisterState, TRUNCATION};

pub const DEFAULT_BRANCH_CAP: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TreeOptions {
    /// Fuel, fresh-cell policy and qubit cap.
    pub run: RunOptions,
    /// Maximum number of leaves (or live configurations per layer when merging).
    pub cap: usize,
    /// Branches below this probability are dropped and their mass reported.
    pub prune: f64,
}

impl Default for TreeOptions {
    fn default() -> Self {
        TreeOptions {
            run: RunOptions::default(),
            cap: DEFAULT_BRANCH_CAP,
            prune: TRUNCATION,
        }
    }
}

impl TreeOptions {
    pub fn with_max_steps(max_steps: u64) -> Self {
        TreeOptions {
            run: RunOptions::with_max_steps(max_steps),
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone)]
pub struct BranchTree {
    pub branches: Vec<(f64, RunResult)>,
    pub pruned_mass: f64,
}

impl BranchTree {
    pub fn total_probability(&self) -> f64 {
        self.branches.iter().map(|(p, _)| p).sum()
    }

    pub fn halted_mass(&self) -> f64 {
        self.branches
            .iter()
            .filter(|(_, r)| r.halted)
            .map(|(p, _)| p)
            .sum()
    }

    pub fn marginals(&self) -> Vec<Marginal> {
        marginals(
            self.branches
                .iter()
                .map(|(p, r)| (*p, r.observed_outcomes(), r)),
        )
    }
}

/// Every outcome path of a run, depth first, with exact probabilities.
pub fn branch_tree(
    machine: &MachineDefinition,
    input: &RegisterState,
    opts: &TreeOptions,
) -> Result<BranchTree> {
    let start = machine.initial_configuration(input)?;
    let mut stack: Vec<(f64, Configuration, Vec<TraceEntry>)> = vec![(1.0, start, Vec::new())];
    let mut branches = Vec::new();
    let mut pruned_mass = 0.0;
    while let Some((p, config, trace)) = stack.pop() {
        if config.classical_state == machine.final_state() || config.step_count >= opts.run.max_steps {
            if branches.len() >= opts.cap {
                return Err(Error::Resource(format!(
                    "branch tree exceeds {} leaves",
                    opts.cap
                )));
            }
            branches.push((p, machine.finish(config, trace, &opts.run)?));
            continue;
        }
        let children = machine.step_branches(&config, &opts.run)?;
        // reversed so the first branch is explored first
        for (q, next, entry) in children.into_iter().rev() {
            let mass = p * q;
            if mass < opts.prune {
                pruned_mass += mass;
                continue;
            }
            let mut t = trace.clone();
            t.push(entry);
            stack.push((mass, next, t));
        }
    }
    Ok(BranchTree {
        branches,
        pruned_mass,
    })
}

/// A leaf of [`merged_distribution`]: paths that reach the same
/// configuration with the same observed outcomes are merged.
#[derive(Debug, Clone)]
pub struct MergedBranch {
    pub probability: f64,
    pub observed: Vec<i8>,
    pub result: RunResult,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct ConfigKey {
    state: usize,
    lambda: u8,
    heads: Vec<CellId>,
    observed: Vec<i8>,
    cells: Vec<CellId>,
    amplitudes: Vec<(i64, i64)>,
}

fn canonical_amplitudes(state: &RegisterState) -> Result<(Vec<CellId>, Vec<(i64, i64)>)> {
    let mut cells = state.cells().to_vec();
    cells.sort();
    let s = state.reorder(&cells)?;
    let amps = s.amplitudes();
    let pivot = amps.iter().find(|a| a.norm() > 1e-4).copied().unwrap_or(Complex64::new(1.0, 0.0));
    let phase = pivot.conj() / pivot.norm();
    let key = amps
        .iter()
        .map(|a| {
            let z = a * phase;
            ((z.re * 1e9).round() as i64, (z.im * 1e9).round() as i64)
        })
        .collect();
    Ok((cells, key))
}

/// Breadth-first enumeration that merges identical configurations.
///
/// The result is the distribution of (configuration, observed outcomes) at
/// halt or at fuel exhaustion. It stays small for machines with
/// repeat-until-success loops, where [`branch_tree`] grows exponentially.
pub fn merged_distribution(
    machine: &MachineDefinition,
    input: &RegisterState,
    opts: &TreeOptions,
) -> Result<(Vec<MergedBranch>, f64)> {
    let start = machine.initial_configuration(input)?;
    let mut layer: Vec<(f64, Configuration, Vec<i8>)> = vec![(1.0, start, Vec::new())];
    let mut leaves = Vec::new();
    let mut pruned = 0.0;
    while !layer.is_empty() {
        let mut next_layer: Vec<(f64, Configuration, Vec<i8>)> = Vec::new();
        let mut seen: HashMap<ConfigKey, usize> = HashMap::new();
        for (p, config, observed) in layer {
            if config.classical_state == machine.final_state() || config.step_count >= opts.run.max_steps {
                leaves.push(MergedBranch {
                    probability: p,
                    result: machine.finish(config, Vec::new(), &opts.run)?,
                    observed,
                });
                continue;
            }
            for (q, next, entry) in machine.step_branches(&config, &opts.run)? {
                let mass = p * q;
                if mass < opts.prune {
                    pruned += mass;
                    continue;
                }
                let mut obs = observed.clone();
                if entry.is_observed() {
                    obs.push(entry.outcome.sign());
                }
                let (cells, amplitudes) = canonical_amplitudes(&next.state)?;
                let key = ConfigKey {
                    state: next.classical_state,
                    lambda: next.last_outcome.bits(),
                    heads: next.heads.clone(),
                    observed: obs.clone(),
                    cells,
                    amplitudes,
                };
                match seen.get(&key) {
                    Some(&i) => next_layer[i].0 += mass,
                    None => {
                        if next_layer.len() >= opts.cap {
                            return Err(Error::Resource(format!(
                                "more than {} distinct configurations in one layer",
                                opts.cap
                            )));
                        }
                        seen.insert(key, next_layer.len());
                        next_layer.push((mass, next, obs));
                    }
                }
            }
        }
        layer = next_layer;
    }
    Ok((leaves, pruned))
}

/// Probability and averaged output density for one (halt flag, observed
/// outcome sequence) class.
#[derive(Debug, Clone)]
pub struct Marginal {
    pub halted: bool,
    pub observed: Vec<i8>,
    pub probability: f64,
    /// Output density matrix averaged over the class, in output-cell order.
    pub output: Operator,
}

pub fn marginals<'a>(branches: impl IntoIterator<Item = (f64, Vec<i8>, &'a RunResult)>) -> Vec<Marginal> {
    let mut acc: BTreeMap<(bool, Vec<i8>), (f64, Option<Operator>)> = BTreeMap::new();
    for (p, observed, r) in branches {
        let rho = r
            .final_config
            .state
            .reduced_density(&r.output_cells)
            .expect("output cells are materialized at halt")
            .scale(Complex64::new(p, 0.0));
        let slot = acc.entry((r.halted, observed)).or_insert((0.0, None));
        slot.0 += p;
        slot.1 = Some(match slot.1.take() {
            Some(sum) => sum.add(&rho).expect("output widths agree"),
            None => rho,
        });
    }
    acc.into_iter()
        .map(|((halted, observed), (p, rho))| Marginal {
            halted,
            observed,
            probability: p,
            output: rho
                .expect("class is non-empty")
                .scale(Complex64::new(if p > 0.0 { 1.0 / p } else { 0.0 }, 0.0)),
        })
        .collect()
}

/// Largest discrepancy between two marginal lists: class probabilities and
/// probability-weighted output densities.
pub fn compare_marginals(a: &[Marginal], b: &[Marginal]) -> f64 {
    let index = |m: &[Marginal]| -> BTreeMap<(bool, Vec<i8>), (f64, Operator)> {
        m.iter()
            .map(|x| {
                (
                    (x.halted, x.observed.clone()),
                    (x.probability, x.output.scale(Complex64::new(x.probability, 0.0))),
                )
            })
            .collect()
    };
    let (ia, ib) = (index(a), index(b));
    let mut worst: f64 = 0.0;
    for key in ia.keys().chain(ib.keys()) {
        match (ia.get(key), ib.get(key)) {
            (Some((pa, ra)), Some((pb, rb))) => {
                worst = worst.max((pa - pb).abs());
                worst = if ra.dim() == rb.dim() {
                    worst.max(ra.max_abs_diff(rb))
                } else {
                    f64::INFINITY
                };
            }
            (Some((p, _)), None) | (None, Some((p, _))) => worst = worst.max(*p),
            (None, None) => unreachable!(),
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::text::parse_machine;

    fn cell(i: i64) -> CellId {
        CellId::new(0, i)
    }

    #[test]
    fn z_on_plus_splits_evenly() {
        let m = parse_machine("tapes: inf\nheads: 1 (0)\nobservables: C\nq0 _ -> qf Z (0)\n").unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let input = RegisterState::new(vec![cell(0)], vec![Complex64::new(h, 0.0); 2]).unwrap();
        let tree = branch_tree(&m, &input, &TreeOptions::with_max_steps(5)).unwrap();
        assert_eq!(tree.branches.len(), 2);
        for (p, r) in &tree.branches {
            assert!((p - 0.5).abs() < 1e-12);
            assert!(r.halted);
        }
        // ascending eigenvalue order
        assert_eq!(tree.branches[0].1.observed_outcomes(), vec![-1]);
        assert_eq!(tree.branches[1].1.observed_outcomes(), vec![1]);
    }

    #[test]
    fn deterministic_machine_has_one_branch() {
        let m = parse_machine(
            "tapes: inf\nheads: 1 (0)\nmoves: {-1,0,1}\nobservables: C\n\
             q0 _ -> q1 Z (1)\nq1 _ -> qf Z (-1)\n",
        )
        .unwrap();
        let input = RegisterState::basis(vec![cell(0)], &[true]).unwrap();
        let tree = branch_tree(&m, &input, &TreeOptions::with_max_steps(10)).unwrap();
        assert_eq!(tree.branches.len(), 1);
        assert!((tree.total_probability() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn merging_matches_plain_enumeration() {
        let m = parse_machine(
            "tapes: inf\nheads: 1 (0)\nobservables: C\n\
             q0 _ -> q1 X (0)\nq1 _ -> q2 Z (0)\nq2 _ -> qf X (0)\n",
        )
        .unwrap();
        let input = RegisterState::basis(vec![cell(0)], &[false]).unwrap();
        let opts = TreeOptions::with_max_steps(10);
        let tree = branch_tree(&m, &input, &opts).unwrap();
        let (merged, pruned) = merged_distribution(&m, &input, &opts).unwrap();
        assert_eq!(pruned, 0.0);
        let a = tree.marginals();
        let b = marginals(merged.iter().map(|x| (x.probability, x.observed.clone(), &x.result)));
        assert!(compare_marginals(&a, &b) < 1e-12);
    }

    #[test]
    fn cap_is_enforced() {
        let m = parse_machine(
            "tapes: inf\nheads: 1 (0)\nobservables: C\nq0 + -> q1 X (0)\nq0 - -> q1 X (0)\n\
             q1 _ -> q0 Z (0)\n",
        )
        .unwrap();
        let input = RegisterState::basis(vec![cell(0)], &[false]).unwrap();
        let opts = TreeOptions {
            cap: 8,
            ..TreeOptions::with_max_steps(20)
        };
        assert!(matches!(branch_tree(&m, &input, &opts), Err(Error::Resource(_))));
    }
}
