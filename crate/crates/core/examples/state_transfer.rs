//! Move a qubit between tapes with Z, X⊗X, Z measurements, repeating until
//! the residual Pauli is the identity.

use mqtm::machine::{branch_tree, seeded_rng, RunOptions, TreeOptions};
use mqtm::programs::{state_transfer_machine, transfer_residual};
use mqtm::quantum::{CellId, RegisterState};
use num_complex::Complex64;

fn main() -> mqtm::Result<()> {
    let m = state_transfer_machine();
    let psi = vec![Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)];
    let input = RegisterState::new(vec![CellId::new(1, 0)], psi.clone())?;
    let target = RegisterState::new(vec![CellId::new(0, 0)], psi)?;

    let r = m.run(&input, &mut seeded_rng(3), &RunOptions::default())?;
    let out = r.output_state()?.expect("output is unentangled");
    println!("halted after {} steps, fidelity {:.12}", r.final_config.step_count, out.fidelity(&target)?);
    for e in r.trace.iter().filter(|e| !e.trivial) {
        println!("  {:>8} {:<3} -> {:+}", e.state, e.observable, e.outcome.sign());
    }

    for fuel in [4, 10, 16, 22] {
        let tree = branch_tree(&m, &input, &TreeOptions::with_max_steps(fuel))?;
        println!("fuel {fuel:>2}: halted mass {:.6}", tree.halted_mass());
    }
    for (i, j, k) in [(1, 1, 1), (-1, 1, 1), (1, -1, -1)] {
        println!("residual for ({i:+},{j:+},{k:+}): {}", transfer_residual(i, j, k));
    }
    Ok(())
}
