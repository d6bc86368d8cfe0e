//! Dense state vectors over the tape cells a machine has touched.
//!
//! A [`RegisterState`] pairs a normalized amplitude vector with the list of
//! cells that make up its tensor factors. The first cell in `cell_order` is
//! the most significant bit of the basis index, so `|01⟩` on `(c0, c1)` is
//! amplitude index 1.

use std::collections::HashSet;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance used for norm checks and operator identities.
pub const TOLERANCE: f64 = 1e-10;

/// Amplitudes smaller than this after a projection are flushed to zero.
pub const TRUNCATION: f64 = 1e-12;

/// Register size limit used when none is given explicitly.
pub const DEFAULT_MAX_QUBITS: usize = 14;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I_UNIT: Complex64 = Complex64::new(0.0, 1.0);

/// Address of one quantum cell: a tape and a signed position on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CellId {
    pub tape: usize,
    pub index: i64,
}

impl CellId {
    pub const fn new(tape: usize, index: i64) -> Self {
        CellId { tape, index }
    }
}

impl fmt::Display for CellId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t{}[{}]", self.tape, self.index)
    }
}

/// Square complex matrix acting on `qubits` qubits, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    qubits: usize,
    data: Vec<Complex64>,
}

impl Operator {
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 || !dim.is_power_of_two() {
            return Err(Error::Structural(format!(
                "operator dimension {dim} is not a power of two"
            )));
        }
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::Structural("operator matrix is not square".into()));
        }
        Ok(Operator {
            qubits: dim.trailing_zeros() as usize,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn from_real(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    fn raw(qubits: usize, data: Vec<Complex64>) -> Self {
        debug_assert_eq!(data.len(), 1 << (2 * qubits));
        Operator { qubits, data }
    }

    pub fn zeros(qubits: usize) -> Self {
        let dim = 1usize << qubits;
        Self::raw(qubits, vec![ZERO; dim * dim])
    }

    pub fn identity(qubits: usize) -> Self {
        let mut op = Self::zeros(qubits);
        let dim = op.dim();
        for i in 0..dim {
            op.data[i * dim + i] = ONE;
        }
        op
    }

    pub fn pauli_x() -> Self {
        Self::from_real(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap()
    }

    pub fn pauli_y() -> Self {
        Self::raw(1, vec![ZERO, -I_UNIT, I_UNIT, ZERO])
    }

    pub fn pauli_z() -> Self {
        Self::from_real(&[&[1.0, 0.0], &[0.0, -1.0]]).unwrap()
    }

    pub fn hadamard() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self::from_real(&[&[h, h], &[h, -h]]).unwrap()
    }

    /// Controlled NOT with the first qubit as control.
    pub fn cnot() -> Self {
        Self::from_real(&[
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
            &[0.0, 0.0, 1.0, 0.0],
        ])
        .unwrap()
    }

    /// Projector `|v⟩⟨v|` for a (not necessarily normalized) vector.
    pub fn outer(v: &[Complex64]) -> Result<Self> {
        if !v.len().is_power_of_two() {
            return Err(Error::Structural("vector length is not a power of two".into()));
        }
        let dim = v.len();
        let mut data = Vec::with_capacity(dim * dim);
        for a in v {
            for b in v {
                data.push(a * b.conj());
            }
        }
        Ok(Self::raw(dim.trailing_zeros() as usize, data))
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.qubits
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim() + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        let dim = self.dim();
        self.data[row * dim + col] = value;
    }

    pub fn kron(&self, other: &Operator) -> Operator {
        let (da, db) = (self.dim(), other.dim());
        let dim = da * db;
        let mut data = vec![ZERO; dim * dim];
        for ar in 0..da {
            for ac in 0..da {
                let a = self.get(ar, ac);
                if a == ZERO {
                    continue;
                }
                for br in 0..db {
                    for bc in 0..db {
                        data[(ar * db + br) * dim + ac * db + bc] = a * other.get(br, bc);
                    }
                }
            }
        }
        Operator::raw(self.qubits + other.qubits, data)
    }

    pub fn matmul(&self, other: &Operator) -> Result<Operator> {
        if self.qubits != other.qubits {
            return Err(Error::Structural(format!(
                "cannot multiply {}-qubit and {}-qubit operators",
                self.qubits, other.qubits
            )));
        }
        let dim = self.dim();
        let mut data = vec![ZERO; dim * dim];
        for r in 0..dim {
            for k in 0..dim {
                let a = self.get(r, k);
                if a == ZERO {
                    continue;
                }
                for c in 0..dim {
                    data[r * dim + c] += a * other.get(k, c);
                }
            }
        }
        Ok(Operator::raw(self.qubits, data))
    }

    pub fn add(&self, other: &Operator) -> Result<Operator> {
        if self.qubits != other.qubits {
            return Err(Error::Structural("operator sizes differ".into()));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(Operator::raw(self.qubits, data))
    }

    pub fn sub(&self, other: &Operator) -> Result<Operator> {
        self.add(&other.scale(-ONE))
    }

    pub fn scale(&self, factor: Complex64) -> Operator {
        Operator::raw(self.qubits, self.data.iter().map(|a| a * factor).collect())
    }

    pub fn adjoint(&self) -> Operator {
        let dim = self.dim();
        let mut data = vec![ZERO; dim * dim];
        for r in 0..dim {
            for c in 0..dim {
                data[c * dim + r] = self.get(r, c).conj();
            }
        }
        Operator::raw(self.qubits, data)
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|i| self.get(i, i)).sum()
    }

    /// Largest entry-wise distance to another operator of the same size.
    pub fn max_abs_diff(&self, other: &Operator) -> f64 {
        if self.qubits != other.qubits {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Operator, tol: f64) -> bool {
        self.max_abs_diff(other) <= tol
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.approx_eq(&self.adjoint(), tol)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.adjoint()
            .matmul(self)
            .map(|p| p.approx_eq(&Operator::identity(self.qubits), tol))
            .unwrap_or(false)
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.data.iter().all(|a| a.norm() <= tol)
    }

    pub fn to_nalgebra(&self) -> nalgebra::DMatrix<Complex64> {
        nalgebra::DMatrix::from_row_slice(self.dim(), self.dim(), &self.data)
    }

    pub fn from_nalgebra(m: &nalgebra::DMatrix<Complex64>) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = (0..m.nrows())
            .map(|r| (0..m.ncols()).map(|c| m[(r, c)]).collect())
            .collect();
        Self::from_rows(&rows)
    }
}

/// Initial state given to cells that enter the register.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum QubitInit {
    Zero,
    One,
    /// Unnormalized amplitudes `(a, b)` for `a|0⟩ + b|1⟩`.
    Amplitudes(Complex64, Complex64),
}

impl QubitInit {
    pub fn amplitudes(&self) -> Result<[Complex64; 2]> {
        match *self {
            QubitInit::Zero => Ok([ONE, ZERO]),
            QubitInit::One => Ok([ZERO, ONE]),
            QubitInit::Amplitudes(a, b) => {
                let norm = (a.norm_sqr() + b.norm_sqr()).sqrt();
                if norm < TRUNCATION {
                    return Err(Error::Validation("qubit amplitudes are all zero".into()));
                }
                Ok([a / norm, b / norm])
            }
        }
    }
}

/// Normalized state of the visited cells.
#[derive(Debug, Clone, PartialEq)]
pub struct RegisterState {
    cells: Vec<CellId>,
    amplitudes: Vec<Complex64>,
}

impl Default for RegisterState {
    fn default() -> Self {
        Self::empty()
    }
}

impl RegisterState {
    /// The zero-qubit register, amplitude vector `[1]`.
    pub fn empty() -> Self {
        RegisterState {
            cells: Vec::new(),
            amplitudes: vec![ONE],
        }
    }

    pub fn new(cells: Vec<CellId>, amplitudes: Vec<Complex64>) -> Result<Self> {
        check_distinct(&cells)?;
        if amplitudes.len() != 1usize << cells.len() {
            return Err(Error::Structural(format!(
                "{} amplitudes for {} cells",
                amplitudes.len(),
                cells.len()
            )));
        }
        let state = RegisterState { cells, amplitudes };
        let norm = state.norm();
        if (norm - 1.0).abs() > TOLERANCE {
            return Err(Error::Validation(format!("state norm is {norm}, expected 1")));
        }
        Ok(state)
    }

    /// Like [`RegisterState::new`] but rescales the vector to unit norm.
    pub fn normalized(cells: Vec<CellId>, mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm < TRUNCATION {
            return Err(Error::Numeric("cannot normalize a zero vector".into()));
        }
        for a in &mut amplitudes {
            *a /= norm;
        }
        Self::new(cells, amplitudes)
    }

    /// Computational basis state; `bits[i]` belongs to `cells[i]`.
    pub fn basis(cells: Vec<CellId>, bits: &[bool]) -> Result<Self> {
        if bits.len() != cells.len() {
            return Err(Error::Structural("bit string length differs from cell count".into()));
        }
        let index = bits.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize);
        let mut amplitudes = vec![ZERO; 1 << cells.len()];
        amplitudes[index] = ONE;
        Self::new(cells, amplitudes)
    }

    pub fn product(cells: Vec<CellId>, qubits: &[QubitInit]) -> Result<Self> {
        if qubits.len() != cells.len() {
            return Err(Error::Structural("one initial state is needed per cell".into()));
        }
        Self::empty().extend_each(&cells, qubits, DEFAULT_MAX_QUBITS.max(cells.len()))
    }

    pub fn cells(&self) -> &[CellId] {
        &self.cells
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn num_qubits(&self) -> usize {
        self.cells.len()
    }

    pub fn contains(&self, cell: CellId) -> bool {
        self.cells.contains(&cell)
    }

    pub fn position(&self, cell: CellId) -> Result<usize> {
        self.cells
            .iter()
            .position(|&c| c == cell)
            .ok_or(Error::UnknownCell(cell))
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Tensor the register with fresh cells, all prepared in `init`.
    pub fn extend(&self, new_cells: &[CellId], init: QubitInit) -> Result<Self> {
        let inits = vec![init; new_cells.len()];
        self.extend_each(new_cells, &inits, DEFAULT_MAX_QUBITS)
    }

    /// Tensor the register with fresh cells, each with its own initial state.
    pub fn extend_each(
        &self,
        new_cells: &[CellId],
        inits: &[QubitInit],
        max_qubits: usize,
    ) -> Result<Self> {
        if inits.len() != new_cells.len() {
            return Err(Error::Structural("one initial state is needed per new cell".into()));
        }
        let mut cells = self.cells.clone();
        cells.extend_from_slice(new_cells);
        check_distinct(&cells)?;
        if cells.len() > max_qubits {
            return Err(Error::TooManyQubits {
                requested: cells.len(),
                limit: max_qubits,
            });
        }
        let mut amplitudes = self.amplitudes.clone();
        for init in inits {
            let [a0, a1] = init.amplitudes()?;
            amplitudes = amplitudes.iter().flat_map(|&x| [x * a0, x * a1]).collect();
        }
        Ok(RegisterState { cells, amplitudes })
    }

    /// Apply a norm-preserving operator to `targets` (identity elsewhere).
    ///
    /// The first target is the most significant qubit of `op`.
    pub fn apply(&self, op: &Operator, targets: &[CellId]) -> Result<Self> {
        let amplitudes = self.apply_raw(op, targets)?;
        let out = RegisterState {
            cells: self.cells.clone(),
            amplitudes,
        };
        let norm = out.norm();
        if (norm - 1.0).abs() > TOLERANCE {
            return Err(Error::Validation(format!(
                "operator changed the norm to {norm}; use project for non-unitary maps"
            )));
        }
        Ok(out)
    }

    /// `⟨ψ|P|ψ⟩` for an operator on `targets`.
    pub fn expectation(&self, op: &Operator, targets: &[CellId]) -> Result<f64> {
        let transformed = self.apply_raw(op, targets)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&transformed)
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            .re)
    }

    /// Apply a projector and renormalize.
    ///
    /// Returns the branch probability and the post-measurement state, or `None`
    /// when the branch has (numerically) zero weight.
    pub fn project(&self, projector: &Operator, targets: &[CellId]) -> Result<Option<(f64, Self)>> {
        let mut amplitudes = self.apply_raw(projector, targets)?;
        let probability: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if probability < TRUNCATION * TRUNCATION {
            return Ok(None);
        }
        let scale = probability.sqrt();
        for a in &mut amplitudes {
            *a /= scale;
            if a.norm() < TRUNCATION {
                *a = ZERO;
            }
        }
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        for a in &mut amplitudes {
            *a /= norm;
        }
        Ok(Some((
            probability,
            RegisterState {
                cells: self.cells.clone(),
                amplitudes,
            },
        )))
    }

    fn apply_raw(&self, op: &Operator, targets: &[CellId]) -> Result<Vec<Complex64>> {
        if targets.len() != op.qubits() {
            return Err(Error::Structural(format!(
                "{}-qubit operator applied to {} targets",
                op.qubits(),
                targets.len()
            )));
        }
        check_distinct(targets)?;
        let n = self.num_qubits();
        let masks: Vec<usize> = targets
            .iter()
            .map(|&c| self.position(c).map(|p| 1usize << (n - 1 - p)))
            .collect::<Result<_>>()?;
        let all: usize = masks.iter().sum();
        let dim = op.dim();
        // offsets[s] is the basis offset of sub-index s over the target bits
        let offsets: Vec<usize> = (0..dim)
            .map(|s| {
                masks
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| s >> (targets.len() - 1 - k) & 1 == 1)
                    .map(|(_, m)| m)
                    .sum()
            })
            .collect();
        let mut out = self.amplitudes.clone();
        let mut local = vec![ZERO; dim];
        for base in 0..self.amplitudes.len() {
            if base & all != 0 {
                continue;
            }
            for (s, off) in offsets.iter().enumerate() {
                local[s] = self.amplitudes[base | off];
            }
            for (r, off) in offsets.iter().enumerate() {
                out[base | off] = (0..dim).map(|c| op.get(r, c) * local[c]).sum();
            }
        }
        Ok(out)
    }

    /// Permute the tensor factors into `new_order`.
    pub fn reorder(&self, new_order: &[CellId]) -> Result<Self> {
        if new_order.len() != self.cells.len() {
            return Err(Error::Structural("new order is not a permutation of the cells".into()));
        }
        check_distinct(new_order)?;
        let n = self.num_qubits();
        let source_pos: Vec<usize> = new_order
            .iter()
            .map(|&c| {
                self.position(c).map_err(|_| {
                    Error::Structural(format!("cell {c} is not in the register"))
                })
            })
            .collect::<Result<_>>()?;
        let mut amplitudes = vec![ZERO; self.amplitudes.len()];
        for (new_index, slot) in amplitudes.iter_mut().enumerate() {
            let mut old_index = 0usize;
            for (k, &p) in source_pos.iter().enumerate() {
                if new_index >> (n - 1 - k) & 1 == 1 {
                    old_index |= 1 << (n - 1 - p);
                }
            }
            *slot = self.amplitudes[old_index];
        }
        Ok(RegisterState {
            cells: new_order.to_vec(),
            amplitudes,
        })
    }

    /// `|⟨a|b⟩|` after bringing `other` into this state's cell order.
    pub fn fidelity(&self, other: &RegisterState) -> Result<f64> {
        let mut mine: Vec<CellId> = self.cells.clone();
        let mut theirs: Vec<CellId> = other.cells.clone();
        mine.sort();
        theirs.sort();
        if mine != theirs {
            return Err(Error::Structural("states are defined over different cells".into()));
        }
        let other = other.reorder(&self.cells)?;
        let overlap: Complex64 = self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum();
        Ok(overlap.norm().min(1.0))
    }

    /// Amplitude matrix with `left` cells indexing rows and the rest columns.
    pub fn split_matrix(&self, left: &[CellId]) -> Result<(Vec<CellId>, nalgebra::DMatrix<Complex64>)> {
        check_distinct(left)?;
        let rest: Vec<CellId> = self
            .cells
            .iter()
            .copied()
            .filter(|c| !left.contains(c))
            .collect();
        let mut order = left.to_vec();
        order.extend_from_slice(&rest);
        let reordered = self.reorder(&order)?;
        let rows = 1usize << left.len();
        let cols = 1usize << rest.len();
        Ok((
            rest,
            nalgebra::DMatrix::from_row_slice(rows, cols, &reordered.amplitudes),
        ))
    }

    /// Reduced density matrix of `cells` (in the given order).
    pub fn reduced_density(&self, cells: &[CellId]) -> Result<Operator> {
        let (_, m) = self.split_matrix(cells)?;
        let rho = &m * m.adjoint();
        Operator::from_nalgebra(&rho)
    }

    /// Pure state of `cells` if they are unentangled with the rest.
    pub fn factor_out(&self, cells: &[CellId]) -> Result<Option<RegisterState>> {
        let rho = self.reduced_density(cells)?;
        let purity = rho.matmul(&rho)?.trace().re;
        if (purity - 1.0).abs() > 1e-8 {
            return Ok(None);
        }
        let dim = rho.dim();
        let col = (0..dim)
            .max_by(|&a, &b| rho.get(a, a).re.total_cmp(&rho.get(b, b).re))
            .unwrap_or(0);
        let amplitudes: Vec<Complex64> = (0..dim).map(|r| rho.get(r, col)).collect();
        RegisterState::normalized(cells.to_vec(), amplitudes).map(Some)
    }

    /// Probability that a computational-basis readout of `cell` gives 1.
    pub fn probability_one(&self, cell: CellId) -> Result<f64> {
        let pos = self.position(cell)?;
        let mask = 1usize << (self.num_qubits() - 1 - pos);
        Ok(self
            .amplitudes
            .iter()
            .enumerate()
            .filter(|(i, _)| i & mask != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }
}

fn check_distinct(cells: &[CellId]) -> Result<()> {
    let mut seen = HashSet::with_capacity(cells.len());
    for &c in cells {
        if !seen.insert(c) {
            return Err(Error::Structural(format!("cell {c} appears twice")));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const H: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn c(i: i64) -> CellId {
        CellId::new(0, i)
    }

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn extend_with_basis_state() {
        let s = RegisterState::basis(vec![c(0)], &[false]).unwrap();
        let e = s.extend(&[c(1)], QubitInit::Zero).unwrap();
        assert_eq!(e.cells(), &[c(0), c(1)]);
        assert_eq!(e.amplitudes(), &[ONE, ZERO, ZERO, ZERO]);
    }

    #[test]
    fn extend_superposition_by_two_cells() {
        let s = RegisterState::new(vec![c(0)], vec![re(H), re(H)]).unwrap();
        let e = s.extend(&[c(1), c(2)], QubitInit::Zero).unwrap();
        let mut expected = vec![ZERO; 8];
        expected[0] = re(H);
        expected[4] = re(H);
        assert_eq!(e.amplitudes(), expected.as_slice());
    }

    #[test]
    fn extend_with_nothing_is_identity() {
        let s = RegisterState::new(vec![c(0)], vec![re(0.6), re(0.8)]).unwrap();
        assert_eq!(s.extend(&[], QubitInit::Zero).unwrap(), s);
    }

    #[test]
    fn extend_rejects_duplicates_and_oversize() {
        let s = RegisterState::basis(vec![c(0)], &[false]).unwrap();
        assert!(matches!(
            s.extend(&[c(0)], QubitInit::Zero),
            Err(Error::Structural(_))
        ));
        let cells: Vec<CellId> = (1..15).map(c).collect();
        assert!(matches!(
            s.extend(&cells, QubitInit::Zero),
            Err(Error::TooManyQubits { requested: 15, limit: 14 })
        ));
    }

    #[test]
    fn bell_circuit_entangles() {
        let s = RegisterState::basis(vec![c(0), c(1)], &[false, false]).unwrap();
        let u = Operator::cnot()
            .matmul(&Operator::hadamard().kron(&Operator::identity(1)))
            .unwrap();
        let out = s.apply(&u, &[c(0), c(1)]).unwrap();
        let bell = RegisterState::new(vec![c(0), c(1)], vec![re(H), ZERO, ZERO, re(H)]).unwrap();
        assert!((out.fidelity(&bell).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn identity_and_flip() {
        let s = RegisterState::new(vec![c(0)], vec![re(0.6), Complex64::new(0.0, 0.8)]).unwrap();
        assert_eq!(s.apply(&Operator::identity(1), &[c(0)]).unwrap(), s);
        let one = RegisterState::basis(vec![c(0)], &[true]).unwrap();
        let flipped = one.apply(&Operator::pauli_x(), &[c(0)]).unwrap();
        assert_eq!(flipped.amplitudes(), &[ONE, ZERO]);
    }

    #[test]
    fn apply_errors() {
        let s = RegisterState::basis(vec![c(0)], &[false]).unwrap();
        assert!(matches!(
            s.apply(&Operator::pauli_x(), &[c(3)]),
            Err(Error::UnknownCell(_))
        ));
        assert!(matches!(
            s.apply(&Operator::cnot(), &[c(0)]),
            Err(Error::Structural(_))
        ));
    }

    #[test]
    fn fidelity_cases() {
        let zero = RegisterState::basis(vec![c(0)], &[false]).unwrap();
        let one = RegisterState::basis(vec![c(0)], &[true]).unwrap();
        assert!((zero.fidelity(&zero).unwrap() - 1.0).abs() < 1e-12);
        assert!(zero.fidelity(&one).unwrap().abs() < 1e-12);
        let phase = Complex64::from_polar(1.0, 0.7);
        let psi = RegisterState::new(vec![c(0)], vec![re(0.6), re(0.8)]).unwrap();
        let rotated =
            RegisterState::new(vec![c(0)], vec![re(0.6) * phase, re(0.8) * phase]).unwrap();
        assert!((psi.fidelity(&rotated).unwrap() - 1.0).abs() < 1e-12);
        let other = RegisterState::basis(vec![c(1)], &[false]).unwrap();
        assert!(zero.fidelity(&other).is_err());
    }

    #[test]
    fn reorder_swaps_bits() {
        let s = RegisterState::basis(vec![c(0), c(1)], &[false, true]).unwrap();
        let r = s.reorder(&[c(1), c(0)]).unwrap();
        assert_eq!(r.cells(), &[c(1), c(0)]);
        assert_eq!(r.amplitudes()[2], ONE);
        assert_eq!(s.reorder(&[c(0), c(1)]).unwrap(), s);
        let sym =
            RegisterState::new(vec![c(0), c(1)], vec![ZERO, re(H), re(H), ZERO]).unwrap();
        assert_eq!(
            sym.reorder(&[c(1), c(0)]).unwrap().amplitudes(),
            sym.amplitudes()
        );
        assert!(s.reorder(&[c(0), c(2)]).is_err());
        assert!(s.reorder(&[c(0)]).is_err());
    }

    #[test]
    fn projection_truncates_and_renormalizes() {
        let s = RegisterState::new(vec![c(0)], vec![re(0.6), re(0.8)]).unwrap();
        let p0 = Operator::from_real(&[&[1.0, 0.0], &[0.0, 0.0]]).unwrap();
        let (p, post) = s.project(&p0, &[c(0)]).unwrap().unwrap();
        assert!((p - 0.36).abs() < 1e-12);
        assert_eq!(post.amplitudes(), &[ONE, ZERO]);
        let zero = RegisterState::basis(vec![c(0)], &[false]).unwrap();
        let p1 = Operator::from_real(&[&[0.0, 0.0], &[0.0, 1.0]]).unwrap();
        assert!(zero.project(&p1, &[c(0)]).unwrap().is_none());
    }

    #[test]
    fn factor_out_detects_entanglement() {
        let bell = RegisterState::new(vec![c(0), c(1)], vec![re(H), ZERO, ZERO, re(H)]).unwrap();
        assert!(bell.factor_out(&[c(0)]).unwrap().is_none());
        let prod = RegisterState::new(vec![c(0)], vec![re(0.6), re(0.8)])
            .unwrap()
            .extend(&[c(1)], QubitInit::One)
            .unwrap();
        let f = prod.factor_out(&[c(0)]).unwrap().unwrap();
        let expect = RegisterState::new(vec![c(0)], vec![re(0.6), re(0.8)]).unwrap();
        assert!((f.fidelity(&expect).unwrap() - 1.0).abs() < 1e-10);
    }
}
