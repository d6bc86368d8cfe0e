//! Separability, entanglement and Pauli-frame diagnostics for pure states.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quantum::{CellId, Operator, RegisterState};

/// Singular values below this count as zero.
pub const RANK_THRESHOLD: f64 = 1e-8;

/// A cut of the register into `left` and its complement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    pub left: Vec<CellId>,
    pub right: Vec<CellId>,
}

impl Bipartition {
    /// `left` against every other cell of `state`.
    pub fn new(state: &RegisterState, left: &[CellId]) -> Result<Self> {
        for c in left {
            if !state.contains(*c) {
                return Err(Error::Structural(format!("cut cell {c} is not in the state")));
            }
        }
        let right = state
            .cells()
            .iter()
            .copied()
            .filter(|c| !left.contains(c))
            .collect();
        Ok(Bipartition {
            left: left.to_vec(),
            right,
        })
    }

    fn check(&self, state: &RegisterState) -> Result<()> {
        let mut all: Vec<CellId> = self.left.iter().chain(&self.right).copied().collect();
        all.sort();
        let before = all.len();
        all.dedup();
        let mut cells = state.cells().to_vec();
        cells.sort();
        if all.len() != before || all != cells {
            return Err(Error::Structural(
                "bipartition must split the state's cells into two disjoint sets".into(),
            ));
        }
        Ok(())
    }
}

fn singular_values(state: &RegisterState, cut: &Bipartition) -> Result<Vec<f64>> {
    cut.check(state)?;
    let (_, m) = state.split_matrix(&cut.left)?;
    Ok(m.singular_values().iter().copied().collect())
}

pub fn schmidt_rank(state: &RegisterState, cut: &Bipartition) -> Result<usize> {
    Ok(singular_values(state, cut)?
        .into_iter()
        .filter(|&s| s > RANK_THRESHOLD)
        .count()
        .max(1))
}

/// Von Neumann entropy of either side of the cut, in bits.
pub fn entanglement_entropy(state: &RegisterState, cut: &Bipartition) -> Result<f64> {
    Ok(singular_values(state, cut)?
        .into_iter()
        .map(|s| s * s)
        .filter(|&p| p > 1e-15)
        .map(|p| -p * p.log2())
        .sum())
}

/// Schmidt rank 1 across every single-cell cut.
pub fn is_fully_product(state: &RegisterState) -> bool {
    state.cells().iter().all(|&c| {
        Bipartition::new(state, &[c])
            .and_then(|cut| schmidt_rank(state, &cut))
            .map(|r| r == 1)
            .unwrap_or(false)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn matrix(self) -> Operator {
        match self {
            Pauli::I => Operator::identity(1),
            Pauli::X => Operator::pauli_x(),
            Pauli::Y => Operator::pauli_y(),
            Pauli::Z => Operator::pauli_z(),
        }
    }

    /// `(x, z)` exponents with `P ∝ X^x Z^z`.
    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    /// Product with phase discarded.
    pub fn compose(self, other: Pauli) -> Pauli {
        let (a, b) = (self.bits(), other.bits());
        Pauli::from_bits(a.0 ^ b.0, a.1 ^ b.1)
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// The Pauli tensor `P` over `cells` with `P·state = reference` up to global
/// phase. Ties go to the candidate with the most identities, then to the
/// first in `I, X, Y, Z` order.
pub fn identify_pauli_frame(
    state: &RegisterState,
    reference: &RegisterState,
    cells: &[CellId],
) -> Option<Vec<Pauli>> {
    let n = cells.len();
    let mut candidates: Vec<Vec<Pauli>> = (0..4usize.pow(n as u32))
        .map(|mut code| {
            (0..n)
                .map(|_| {
                    let p = Pauli::ALL[code % 4];
                    code /= 4;
                    p
                })
                .collect()
        })
        .collect();
    candidates.sort_by_key(|c| c.iter().filter(|&&p| p != Pauli::I).count());
    candidates.into_iter().find(|frame| {
        let mut s = state.clone();
        for (&c, p) in cells.iter().zip(frame) {
            if *p == Pauli::I {
                continue;
            }
            s = match s.apply(&p.matrix(), &[c]) {
                Ok(s) => s,
                Err(_) => return false,
            };
        }
        s.fidelity(reference)
            .map(|f| (f - 1.0).abs() < 1e-8)
            .unwrap_or(false)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::Operator;
    use num_complex::Complex64;

    fn cells(n: i64) -> Vec<CellId> {
        (0..n).map(|i| CellId::new(0, i)).collect()
    }

    fn bell() -> RegisterState {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        RegisterState::new(
            cells(2),
            vec![
                Complex64::new(h, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(h, 0.0),
            ],
        )
        .unwrap()
    }

    #[test]
    fn ranks() {
        let c = cells(2);
        let s = RegisterState::basis(c.clone(), &[false, false]).unwrap();
        assert_eq!(schmidt_rank(&s, &Bipartition::new(&s, &c[..1]).unwrap()).unwrap(), 1);
        let b = bell();
        assert_eq!(schmidt_rank(&b, &Bipartition::new(&b, &c[..1]).unwrap()).unwrap(), 2);
        assert!((entanglement_entropy(&b, &Bipartition::new(&b, &c[..1]).unwrap()).unwrap() - 1.0).abs() < 1e-12);
        let plus_one = RegisterState::basis(c.clone(), &[false, true])
            .unwrap()
            .apply(&Operator::hadamard(), &c[..1])
            .unwrap();
        assert_eq!(schmidt_rank(&plus_one, &Bipartition::new(&plus_one, &c[..1]).unwrap()).unwrap(), 1);
    }

    #[test]
    fn bad_cut() {
        let s = bell();
        let cut = Bipartition {
            left: vec![CellId::new(0, 0)],
            right: vec![CellId::new(0, 0)],
        };
        assert!(matches!(schmidt_rank(&s, &cut), Err(Error::Structural(_))));
    }

    #[test]
    fn fully_product() {
        assert!(is_fully_product(&RegisterState::basis(cells(3), &[false, true, false]).unwrap()));
        let with_extra = bell().extend(&[CellId::new(0, 2)], crate::quantum::QubitInit::Zero).unwrap();
        assert!(!is_fully_product(&with_extra));
    }

    #[test]
    fn frames() {
        let c = cells(1);
        let zero = RegisterState::basis(c.clone(), &[false]).unwrap();
        let one = RegisterState::basis(c.clone(), &[true]).unwrap();
        assert_eq!(identify_pauli_frame(&one, &zero, &c), Some(vec![Pauli::X]));
        assert_eq!(identify_pauli_frame(&zero, &zero, &c), Some(vec![Pauli::I]));
        let plus = zero.apply(&Operator::hadamard(), &c).unwrap();
        assert_eq!(identify_pauli_frame(&plus, &zero, &c), None);
    }

    #[test]
    fn group_law() {
        for p in Pauli::ALL {
            assert_eq!(p.compose(p), Pauli::I);
            for q in Pauli::ALL {
                for r in Pauli::ALL {
                    assert_eq!(p.compose(q).compose(r), p.compose(q.compose(r)));
                }
            }
        }
        assert_eq!(Pauli::X.compose(Pauli::Z), Pauli::Y);
    }
}
