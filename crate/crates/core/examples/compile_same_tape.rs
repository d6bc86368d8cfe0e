//! Replace same-tape two-qubit measurements by transfer or teleport gadgets.

use mqtm::compiler::{compile, Backend};
use mqtm::machine::{compare_marginals, marginals, merged_distribution, MachineDefinition, Marginal, TreeOptions};
use mqtm::observables::ModelName;
use mqtm::programs::stock_machines;
use mqtm::quantum::RegisterState;
use num_complex::Complex64;

fn exact(m: &MachineDefinition, input: &RegisterState, fuel: u64) -> mqtm::Result<(f64, Vec<Marginal>)> {
    let (leaves, _) = merged_distribution(m, input, &TreeOptions::with_max_steps(fuel))?;
    let halted = leaves.iter().filter(|l| l.result.halted).map(|l| l.probability).sum();
    Ok((halted, marginals(leaves.iter().map(|l| (l.probability, l.observed.clone(), &l.result)))))
}

fn main() -> mqtm::Result<()> {
    let m = stock_machines().into_iter().find(|(n, _)| *n == "pair_xx").expect("stock").1;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let amps = vec![Complex64::new(h, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.0), Complex64::new(0.0, 0.5)];
    let (_, reference) = exact(&m, &RegisterState::new(m.input_cells(2), amps.clone())?, 10)?;
    for backend in [Backend::Transfer, Backend::Teleport] {
        let (out, report) = compile(&m, ModelName::A, backend.target(), backend)?;
        println!(
            "{backend}: {} -> {} states, inserted_gadget_count {}",
            report.state_count_before, report.state_count_after, report.inserted_gadget_count
        );
        let input = RegisterState::new(out.input_cells(2), amps.clone())?;
        for fuel in [200, 800] {
            let (halted, lowered) = exact(&out, &input, fuel)?;
            println!(
                "  fuel {fuel}: halted mass {halted:.9}, marginal difference {:.2e}",
                compare_marginals(&reference, &lowered)
            );
        }
    }
    Ok(())
}
