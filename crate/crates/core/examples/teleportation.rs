//! Teleportation built from a measurement-only Bell pair, retried until
//! the residual is the identity.

use mqtm::cli::run_trials;
use mqtm::machine::{branch_tree, RunOptions, TreeOptions};
use mqtm::programs::teleport_machine;
use mqtm::quantum::{CellId, RegisterState};
use num_complex::Complex64;

fn main() -> mqtm::Result<()> {
    let m = teleport_machine();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let input = RegisterState::new(vec![CellId::new(0, 0)], vec![Complex64::new(h, 0.0), Complex64::new(0.0, h)])?;
    let first = (1..40)
        .find(|&f| {
            branch_tree(&m, &input, &TreeOptions::with_max_steps(f))
                .map(|t| t.halted_mass() > 0.0)
                .unwrap_or(false)
        })
        .expect("halts");
    let tree = branch_tree(&m, &input, &TreeOptions::with_max_steps(first))?;
    println!("first attempt: {first} steps, halted mass {:.6}", tree.halted_mass());
    let stats = run_trials(&m, &input, 4000, 0, &RunOptions::default(), 0)?;
    println!("{} trials: halted {:.4}, mean steps {:.2}", stats.trials, stats.halted_fraction, stats.steps_mean);
    Ok(())
}
