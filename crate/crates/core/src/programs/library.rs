use crate::machine::{parse_machine, MachineDefinition};

use super::{
    bell_prep_machine, classical_write_machine, embed_classical_tm, state_transfer_machine, teleport_machine,
    ClassicalTm,
};

const LOOP: &str = "\
tapes: inf
heads: 1 (0)
moves: {-1,0,1}
observables: C
q0 _ -> q0 Z (0)
";

const PAIR_XX: &str = "\
tapes: inf
heads: 2 (0,0)
moves: Z^2
observables: A
output: head 0 width 2
q0 _ -> q1 II (0,1)
q1 _ -> qf XX (0,-1)
";

const JUMPS: &str = "\
tapes: 1,inf
heads: 2 (0,1)
moves: {0}xZ
observables: F
input: head 1
output: head 1 width 2
q0 _ -> q1 XX (0,4)
q1 + -> q2 IZ (0,-3)
q1 - -> q2 ZZ (0,-4)
q2 + -> qf XX+XY (0,-1)
q2 - -> qf IX (0,0)
";

/// The machines shipped as text files, by file stem.
pub fn stock_machines() -> Vec<(&'static str, MachineDefinition)> {
    let parse = |t: &str| parse_machine(t).expect("stock machine");
    vec![
        ("transfer", state_transfer_machine()),
        ("teleport", teleport_machine()),
        ("bell_prep", bell_prep_machine()),
        ("write0", classical_write_machine(0, false).expect("stock machine")),
        ("increment3", embed_classical_tm(&ClassicalTm::increment3(), 3).expect("stock machine")),
        ("bitflip", embed_classical_tm(&ClassicalTm::bit_flip(), 1).expect("stock machine")),
        ("loop", parse(LOOP)),
        ("pair_xx", parse(PAIR_XX)),
        ("jumps", parse(JUMPS)),
    ]
}
