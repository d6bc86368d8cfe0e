use std::collections::BTreeMap;
use std::fmt;

use crate::analysis::Pauli;
use crate::error::Result;
use crate::quantum::{CellId, RegisterState};

/// Known Pauli byproduct per cell, phase discarded.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PauliFrame(BTreeMap<CellId, Pauli>);

impl PauliFrame {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn get(&self, cell: CellId) -> Pauli {
        self.0.get(&cell).copied().unwrap_or(Pauli::I)
    }

    /// Multiply `p` into the frame of `cell`.
    pub fn push(&mut self, cell: CellId, p: Pauli) {
        let next = self.get(cell).compose(p);
        if next == Pauli::I {
            self.0.remove(&cell);
        } else {
            self.0.insert(cell, next);
        }
    }

    /// Multiply `X^x Z^z` into the frame, with `x`, `z` the `(1 − m)/2` bits.
    pub fn push_bits(&mut self, cell: CellId, x: bool, z: bool) {
        self.push(cell, Pauli::from_bits(x, z));
    }

    pub fn compose(&self, other: &PauliFrame) -> PauliFrame {
        let mut out = self.clone();
        for (&c, &p) in &other.0 {
            out.push(c, p);
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (CellId, Pauli)> + '_ {
        self.0.iter().map(|(&c, &p)| (c, p))
    }

    /// Apply the frame's Paulis as unitaries. Each Pauli is its own inverse
    /// up to phase, so this also undoes the frame.
    pub fn apply(&self, state: &RegisterState) -> Result<RegisterState> {
        let mut s = state.clone();
        for (c, p) in self.iter() {
            s = s.apply(&p.matrix(), &[c])?;
        }
        Ok(s)
    }
}

impl fmt::Display for PauliFrame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("I");
        }
        let parts: Vec<String> = self.iter().map(|(c, p)| format!("{p}@{c}")).collect();
        f.write_str(&parts.join(" "))
    }
}

fn bit(m: i8) -> bool {
    m < 0
}

/// Residual on the destination after one state transfer with outcomes
/// `i` (Z on the destination), `j` (X⊗X) and `k` (Z on the source):
/// `X^{k'} Z^{j'} X^{i'}`.
pub fn transfer_residual(i: i8, j: i8, k: i8) -> Pauli {
    Pauli::from_bits(bit(i) ^ bit(k), bit(j))
}

/// Frame of the Bell-preparation sequence with outcomes
/// `[i, j, k, l, m, n]`: the Paulis on `a` and `b`, and whether the
/// auxiliary cell ends in `|1⟩`.
pub fn bell_prep_frame(o: [i8; 6]) -> (Pauli, Pauli, bool) {
    let [i, j, k, l, m, n] = o.map(bit);
    (
        Pauli::from_bits(k ^ i, l),
        Pauli::from_bits(n ^ j, m),
        n,
    )
}

/// Residual on the teleportation destination given the Bell-preparation
/// outcomes and the Z⊗Z (`s`) and X⊗X (`t`) outcomes of the Bell
/// measurement.
pub fn teleport_residual(prep: [i8; 6], s: i8, t: i8) -> Pauli {
    let (fa, fb, _) = bell_prep_frame(prep);
    let (ax, az) = fa.bits();
    let (bx, bz) = fb.bits();
    Pauli::from_bits(ax ^ bx ^ bit(s), az ^ bz ^ bit(t))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frame_group_law() {
        let c = CellId::new(0, 0);
        let mut f = PauliFrame::identity();
        f.push(c, Pauli::X);
        f.push(c, Pauli::X);
        assert!(f.is_identity());
        f.push(c, Pauli::X);
        f.push(c, Pauli::Z);
        assert_eq!(f.get(c), Pauli::Y);
        let mut g = PauliFrame::identity();
        g.push(c, Pauli::Y);
        assert!(f.compose(&g).is_identity());
    }

    #[test]
    fn residual_exponents() {
        assert_eq!(transfer_residual(1, 1, 1), Pauli::I);
        assert_eq!(transfer_residual(-1, 1, -1), Pauli::I);
        assert_eq!(transfer_residual(-1, 1, 1), Pauli::X);
        assert_eq!(transfer_residual(1, -1, 1), Pauli::Z);
        assert_eq!(bell_prep_frame([1; 6]), (Pauli::I, Pauli::I, false));
    }
}
