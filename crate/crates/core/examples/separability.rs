//! Single-qubit measurements never entangle; a CNOT does.

use mqtm::analysis::{entanglement_entropy, is_fully_product, schmidt_rank, Bipartition};
use mqtm::machine::{parse_machine, FreshCells, RunOptions};
use mqtm::quantum::{CellId, Operator, RegisterState};

fn main() -> mqtm::Result<()> {
    let m = parse_machine(
        "tapes: inf\nheads: 1 (0)\nmoves: {-1,0,1}\nobservables: C\n\
         q0 _ -> q1 X (1)\nq1 _ -> q2 Z (1)\nq2 _ -> q3 X (-1)\nq3 _ -> qf Z (0)\n",
    )?;
    let opts = RunOptions {
        fresh: FreshCells::RandomProduct { seed: 2 },
        ..Default::default()
    };
    let mut config = m.initial_configuration(&RegisterState::empty())?;
    let mut rng = mqtm::machine::seeded_rng(0);
    while config.classical_state != m.final_state() {
        let (next, e) = m.step(&config, &mut rng, &opts)?;
        println!("{} {} -> {:+}: fully product {}", e.state, e.observable, e.outcome.sign(), is_fully_product(&next.state));
        config = next;
    }

    let cells = vec![CellId::new(0, 0), CellId::new(0, 1)];
    let s = RegisterState::basis(cells.clone(), &[false, false])?
        .apply(&Operator::hadamard(), &cells[..1])?
        .apply(&Operator::cnot(), &cells)?;
    let cut = Bipartition::new(&s, &cells[..1])?;
    println!("CNOT(H x I)|00>: Schmidt rank {}, entropy {:.3} bits", schmidt_rank(&s, &cut)?, entanglement_entropy(&s, &cut)?);
    Ok(())
}
