//! Six measurements leave two cells in a Bell pair up to a known Pauli frame.

use mqtm::machine::{branch_tree, FreshCells, RunOptions, TreeOptions};
use mqtm::programs::{bell_prep_frame, bell_prep_machine, PauliFrame};
use mqtm::quantum::{CellId, RegisterState};
use num_complex::Complex64;

fn main() -> mqtm::Result<()> {
    let m = bell_prep_machine();
    let opts = TreeOptions {
        run: RunOptions {
            fresh: FreshCells::RandomProduct { seed: 5 },
            ..Default::default()
        },
        ..Default::default()
    };
    let tree = branch_tree(&m, &RegisterState::empty(), &opts)?;
    let ab = [CellId::new(1, 0), CellId::new(1, 1)];
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let z = Complex64::new(0.0, 0.0);
    let bell = RegisterState::new(ab.to_vec(), vec![h, z, z, h])?;
    println!("{} branches", tree.branches.len());
    for (p, r) in tree.branches.iter().take(8) {
        let o: [i8; 6] = r.observed_outcomes().try_into().expect("six outcomes");
        let (fa, fb, c) = bell_prep_frame(o);
        let pair = r.final_config.state.factor_out(&ab)?.expect("pair is unentangled");
        let mut frame = PauliFrame::identity();
        frame.push(ab[0], fa);
        frame.push(ab[1], fb);
        let f = frame.apply(&pair)?.fidelity(&bell)?;
        println!("  p={p:.4} outcomes {o:?}: frame {fa}{fb}, c={}, fidelity after correction {f:.12}", u8::from(c));
    }
    Ok(())
}
