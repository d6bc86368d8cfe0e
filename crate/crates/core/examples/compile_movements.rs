//! Lower arbitrary head jumps to unit steps and compare outcome statistics.

use mqtm::compiler::{check_conformance, lower_movements};
use mqtm::machine::{branch_tree, TreeOptions};
use mqtm::observables::ModelName;
use mqtm::programs::stock_machines;
use mqtm::quantum::{CellId, RegisterState};

fn main() -> mqtm::Result<()> {
    let m = stock_machines().into_iter().find(|(n, _)| *n == "jumps").expect("stock").1;
    let (g, report) = lower_movements(&m)?;
    print!("{}", report.to_text());
    println!("conforms to M_G: {}", check_conformance(&g, ModelName::G).is_empty());
    let input = RegisterState::basis(vec![CellId::new(1, 0), CellId::new(1, 1)], &[true, false])?;
    let a = branch_tree(&m, &input, &TreeOptions::with_max_steps(100))?;
    let b = branch_tree(&g, &input, &TreeOptions::with_max_steps(10_000))?;
    println!("marginal difference {:.2e}", mqtm::machine::compare_marginals(&a.marginals(), &b.marginals()));
    Ok(())
}
