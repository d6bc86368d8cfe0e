//! A binary Turing machine embedded in X/Z measurements on one tape.

use mqtm::machine::{merged_distribution, TreeOptions};
use mqtm::programs::{embed_classical_tm, ClassicalTm};
use mqtm::quantum::{CellId, RegisterState};

fn main() -> mqtm::Result<()> {
    let tm = ClassicalTm::increment3();
    let m = embed_classical_tm(&tm, 3)?;
    println!("{} classical states, {} machine states", tm.states().len(), m.states().len());
    let cells: Vec<CellId> = (0..3).map(|i| CellId::new(0, i)).collect();
    for n in 0..8u8 {
        let bits: Vec<bool> = (0..3).map(|i| n >> (2 - i) & 1 == 1).collect();
        let input = RegisterState::basis(cells.clone(), &bits)?;
        let (leaves, _) = merged_distribution(&m, &input, &TreeOptions::with_max_steps(100_000))?;
        let leaf = leaves.iter().find(|l| l.result.halted).expect("halts");
        let out: String = leaf
            .result
            .output_cells
            .iter()
            .map(|&c| if leaf.result.final_config.state.probability_one(c).unwrap() > 0.5 { '1' } else { '0' })
            .collect();
        let mass: f64 = leaves.iter().filter(|l| l.result.halted).map(|l| l.probability).sum();
        println!("{n:03b} -> {out} (halted mass {mass:.9})");
    }
    Ok(())
}
