//! Measurement programs: Pauli-frame bookkeeping, reusable fragments and
//! the standard gadgets.

mod classical;
mod fragment;
mod frame;
mod gadgets;
mod library;

pub use classical::{
    build_classical_write, classical_write_machine, embed_classical_tm, ClassicalTm, TmRule, TmRun,
};
pub use library::stock_machines;
pub use fragment::{ExitAction, FragmentRow, MachineFragment, RowAction};
pub use frame::{bell_prep_frame, teleport_residual, transfer_residual, PauliFrame};
pub use gadgets::{
    bell_prep_machine, build_bell_prep, build_state_transfer, build_teleport, state_transfer_machine,
    teleport_machine,
};

pub(crate) use fragment::offset;
pub(crate) use gadgets::{emit_loop, teleport_steps, transfer_steps, Decision, Segment, Step};
