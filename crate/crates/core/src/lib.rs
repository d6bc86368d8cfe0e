//! Simulation and compilation of measurement-based quantum Turing machines.
//!
//! A machine is a classical finite control that reads the outcome of its
//! last measurement and picks the next observable and head movement. The
//! quantum tapes are kept as a dense state vector over the visited cells.
//!
//! ```
//! use mqtm::machine::{parse_machine, seeded_rng, RunOptions};
//! use mqtm::quantum::{CellId, RegisterState};
//!
//! let m = parse_machine(
//!     "tapes: inf\nheads: 1 (0)\nmoves: {-1,0,1}\nobservables: C\n\
//!      q0 _ -> qf Z (0)\n",
//! )
//! .unwrap();
//! let input = RegisterState::basis(vec![CellId::new(0, 0)], &[true]).unwrap();
//! let r = m.run(&input, &mut seeded_rng(1), &RunOptions::default()).unwrap();
//! assert!(r.halted);
//! assert_eq!(r.observed_outcomes(), vec![-1]);
//! ```

pub mod analysis;
pub mod cli;
pub mod compiler;
pub mod error;
pub mod machine;
pub mod observables;
pub mod programs;
pub mod quantum;

pub use error::{Error, Result};
pub use machine::{MachineDefinition, Outcome, RunOptions, RunResult};
pub use observables::{named_set, spectral_decompose, ModelName, Observable};
pub use quantum::{CellId, Operator, RegisterState};
