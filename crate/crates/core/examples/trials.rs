//! Seeded trials against the exact branch distribution.

use mqtm::cli::run_trials;
use mqtm::machine::RunOptions;
use mqtm::programs::classical_write_machine;
use mqtm::quantum::{CellId, RegisterState};

fn main() -> mqtm::Result<()> {
    let m = classical_write_machine(0, false)?;
    let input = RegisterState::basis(vec![CellId::new(0, 0)], &[true])?;
    let stats = run_trials(&m, &input, 10_000, 0, &RunOptions::default(), 1 << 12)?;
    print!("{}", stats.to_text());
    Ok(())
}
