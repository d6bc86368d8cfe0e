use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::Result;
use crate::machine::{merged_distribution, MachineDefinition, RunOptions, RunResult, TraceEntry, TreeOptions};
use crate::quantum::RegisterState;

/// Significant-digit formatting used for amplitudes.
pub fn sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - exp).max(0) as usize;
    format!("{x:.decimals$}")
}

pub fn signs(v: &[i8]) -> String {
    if v.is_empty() {
        return "(none)".into();
    }
    v.iter().map(|&s| if s < 0 { '-' } else { '+' }).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct RunStats {
    pub qubits: usize,
    pub observed_measurements: usize,
    pub bookkeeping_measurements: usize,
    pub output_cells: Vec<String>,
    pub output_entangled: bool,
    /// Probability of reading each basis value of the output cells.
    pub output_probabilities: Vec<f64>,
}

/// Result of one seeded run, serialized as `{halted, steps, outcomes,
/// output_state, stats}` (plus `trace` when requested).
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub halted: bool,
    pub steps: u64,
    pub outcomes: Vec<i8>,
    /// `[re, im]` per basis value of the output cells; empty when the
    /// output is entangled with the rest of the register.
    pub output_state: Vec<[f64; 2]>,
    pub stats: RunStats,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<TraceEntry>>,
}

impl RunReport {
    pub fn new(r: &RunResult, with_trace: bool) -> Result<Self> {
        let state: Option<RegisterState> = r.output_state()?;
        let rho = r.final_config.state.reduced_density(&r.output_cells)?;
        Ok(RunReport {
            halted: r.halted,
            steps: r.final_config.step_count,
            outcomes: r.observed_outcomes(),
            output_state: state
                .as_ref()
                .map(|s| s.amplitudes().iter().map(|a| [a.re, a.im]).collect())
                .unwrap_or_default(),
            stats: RunStats {
                qubits: r.final_config.state.num_qubits(),
                observed_measurements: r.trace.iter().filter(|e| e.is_observed()).count(),
                bookkeeping_measurements: r.trace.iter().filter(|e| e.aux && !e.trivial).count(),
                output_cells: r.output_cells.iter().map(ToString::to_string).collect(),
                output_entangled: state.is_none(),
                output_probabilities: (0..rho.dim()).map(|i| rho.get(i, i).re).collect(),
            },
            trace: with_trace.then(|| r.trace.clone()),
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "halted: {}", self.halted);
        let _ = writeln!(s, "steps: {}", self.steps);
        let _ = writeln!(s, "outcomes: {}", signs(&self.outcomes));
        let w = self.stats.output_cells.len();
        let _ = writeln!(s, "output cells: {}", self.stats.output_cells.join(" "));
        if let Some(trace) = &self.trace {
            let _ = writeln!(s, "trace:");
            for e in trace {
                let heads: Vec<String> = e.heads.iter().map(ToString::to_string).collect();
                let _ = writeln!(
                    s,
                    "  {:>5} {} {} @({}) -> {} p={}{}",
                    e.step,
                    e.state,
                    e.observable,
                    heads.join(","),
                    if e.outcome.sign() < 0 { '-' } else { '+' },
                    sig(e.probability, 6),
                    if e.aux { " aux" } else { "" }
                );
            }
        }
        if self.stats.output_entangled {
            let _ = writeln!(s, "output is entangled with other cells; basis probabilities:");
            for (i, p) in self.stats.output_probabilities.iter().enumerate() {
                let _ = writeln!(s, "  |{}> {}", basis(i, w), sig(*p, 10));
            }
            return s;
        }
        let _ = writeln!(s, "output state:");
        for (i, [re, im]) in self.output_state.iter().enumerate() {
            let mag = re.hypot(*im);
            if mag < 1e-12 {
                continue;
            }
            let phase = im.atan2(*re).to_degrees();
            let _ = writeln!(s, "  |{}> magnitude {} phase {} deg", basis(i, w), sig(mag, 10), sig(phase, 10));
        }
        if let Some(i) = self.stats.output_probabilities.iter().position(|p| (p - 1.0).abs() < 1e-10) {
            let _ = writeln!(s, "output basis value: {}", basis(i, w));
        }
        s
    }
}

fn basis(i: usize, width: usize) -> String {
    (0..width).rev().map(|b| if i >> b & 1 == 1 { '1' } else { '0' }).collect()
}

/// One (halt flag, observed outcomes) class of the trials.
#[derive(Debug, Clone, Serialize)]
pub struct ClassComparison {
    pub halted: bool,
    pub outcomes: String,
    pub exact: f64,
    pub empirical: f64,
    /// `|empirical − exact|` in binomial standard deviations.
    pub deviation_sigmas: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TrialStats {
    pub trials: usize,
    pub halted_fraction: f64,
    /// Observed outcome sequence to count.
    pub histogram: BTreeMap<String, usize>,
    pub steps_mean: f64,
    pub steps_stddev: f64,
    /// Mean number of measurements of each observable per trial.
    pub observable_means: BTreeMap<String, f64>,
    /// Present when the exact distribution could be enumerated.
    pub exact: Option<Vec<ClassComparison>>,
}

/// Runs `trials` seeded simulations with seeds `base_seed + i`.
pub fn run_trials(
    machine: &MachineDefinition,
    input: &RegisterState,
    trials: usize,
    base_seed: u64,
    opts: &RunOptions,
    exact_cap: usize,
) -> Result<TrialStats> {
    let mut histogram: BTreeMap<String, usize> = BTreeMap::new();
    let mut classes: BTreeMap<(bool, String), usize> = BTreeMap::new();
    let mut halted = 0usize;
    let mut steps = Vec::with_capacity(trials);
    let mut obs_counts: BTreeMap<String, usize> = BTreeMap::new();
    for i in 0..trials {
        let mut rng = crate::machine::seeded_rng(base_seed.wrapping_add(i as u64));
        let r = machine.run(input, &mut rng, opts)?;
        let key = signs(&r.observed_outcomes());
        *histogram.entry(key.clone()).or_default() += 1;
        *classes.entry((r.halted, key)).or_default() += 1;
        halted += usize::from(r.halted);
        steps.push(r.final_config.step_count as f64);
        for e in r.trace.iter().filter(|e| !e.trivial) {
            *obs_counts.entry(e.observable.clone()).or_default() += 1;
        }
    }
    let n = trials.max(1) as f64;
    let mean = steps.iter().sum::<f64>() / n;
    let var = steps.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / n;
    let tree_opts = TreeOptions {
        run: *opts,
        cap: exact_cap,
        ..Default::default()
    };
    let exact = merged_distribution(machine, input, &tree_opts).ok().map(|(leaves, _)| {
        let mut exact: BTreeMap<(bool, String), f64> = BTreeMap::new();
        for l in &leaves {
            *exact.entry((l.result.halted, signs(&l.observed))).or_default() += l.probability;
        }
        let mut keys: Vec<(bool, String)> = exact.keys().chain(classes.keys()).cloned().collect();
        keys.sort();
        keys.dedup();
        keys.into_iter()
            .map(|k| {
                let p = exact.get(&k).copied().unwrap_or(0.0);
                let f = classes.get(&k).copied().unwrap_or(0) as f64 / n;
                let sd = (p * (1.0 - p) / n).sqrt();
                ClassComparison {
                    halted: k.0,
                    outcomes: k.1,
                    exact: p,
                    empirical: f,
                    deviation_sigmas: if sd > 0.0 {
                        (f - p).abs() / sd
                    } else if (f - p).abs() < 1e-12 {
                        0.0
                    } else {
                        f64::INFINITY
                    },
                }
            })
            .collect()
    });
    Ok(TrialStats {
        trials,
        halted_fraction: halted as f64 / n,
        histogram,
        steps_mean: mean,
        steps_stddev: var.sqrt(),
        observable_means: obs_counts.into_iter().map(|(k, c)| (k, c as f64 / n)).collect(),
        exact,
    })
}

impl TrialStats {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "trials: {}", self.trials);
        let _ = writeln!(s, "halted_fraction: {}", sig(self.halted_fraction, 10));
        let _ = writeln!(s, "steps: mean {} stddev {}", sig(self.steps_mean, 10), sig(self.steps_stddev, 10));
        for (o, m) in &self.observable_means {
            let _ = writeln!(s, "measurements of {o}: mean {}", sig(*m, 10));
        }
        let mut hist: Vec<(&String, &usize)> = self.histogram.iter().collect();
        hist.sort_by(|a, b| b.1.cmp(a.1).then(a.0.cmp(b.0)));
        let _ = writeln!(s, "histogram ({} distinct outcome sequences):", hist.len());
        for (k, c) in hist.iter().take(32) {
            let _ = writeln!(s, "  {c:>8} {k}");
        }
        match &self.exact {
            Some(rows) => {
                let worst = rows.iter().map(|r| r.deviation_sigmas).fold(0.0, f64::max);
                let _ = writeln!(s, "exact vs empirical ({} classes, worst deviation {} sigma):", rows.len(), sig(worst, 4));
                let mut rows: Vec<&ClassComparison> = rows.iter().collect();
                rows.sort_by(|a, b| b.exact.total_cmp(&a.exact));
                for r in rows.iter().take(32) {
                    let _ = writeln!(
                        s,
                        "  {} {} exact {} empirical {}",
                        if r.halted { "halt" } else { "run " },
                        r.outcomes,
                        sig(r.exact, 6),
                        sig(r.empirical, 6)
                    );
                }
            }
            None => {
                let _ = writeln!(s, "exact distribution: not enumerable within the cap");
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(sig(0.6, 10), "0.6000000000");
        assert_eq!(sig(53.130102354, 10), "53.13010235");
        assert_eq!(sig(-0.0000000000001, 3), "-0.000000000000100");
        assert_eq!(sig(0.0, 10), "0");
    }
}
