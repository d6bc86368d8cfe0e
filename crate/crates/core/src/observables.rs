//! Observables as spectral decompositions, and the named observable sets of
//! the resource models.
//!
//! Observables are spelled as Pauli strings, one letter per head, e.g. `XZ`
//! is X on the cell under head 0 and Z on the cell under head 1. A sum such
//! as `XX+XY` denotes the normalized sum `(X⊗X + X⊗Y)/√2`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantum::{Operator, ONE, TOLERANCE};

/// Eigenvalues closer than this share one branch.
pub const EIGEN_CLUSTER: f64 = 1e-8;

/// One measurement outcome: an eigenvalue and the projector onto its eigenspace.
#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    pub eigenvalue: f64,
    pub projector: Operator,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    name: String,
    matrix: Operator,
    branches: Vec<Branch>,
    support: Vec<usize>,
    local: Vec<Branch>,
}

impl Observable {
    /// Library observable by spelling (`X`, `ZI`, `XX+XY`, ...).
    pub fn named(spelling: &str) -> Result<Self> {
        let matrix = pauli_sum(spelling)?;
        Self::from_matrix(spelling, matrix)
    }

    /// Trivial observable on `arity` qubits; measuring it does nothing.
    pub fn trivial(arity: usize) -> Self {
        Self::named(&"I".repeat(arity.max(1))).expect("identity is a valid spelling")
    }

    pub fn from_matrix(name: &str, matrix: Operator) -> Result<Self> {
        let branches = decompose(&matrix)?;
        let (support, local_matrix) = local_form(&matrix)?;
        let local = match &local_matrix {
            Some(m) => decompose(m)?,
            None => vec![Branch {
                eigenvalue: branches[0].eigenvalue,
                projector: Operator::identity(0),
            }],
        };
        Ok(Observable {
            name: name.to_string(),
            matrix,
            branches,
            support,
            local,
        })
    }

    /// Build from explicit branches without any checks; see [`validate`].
    pub fn from_branches(name: &str, branches: Vec<Branch>) -> Result<Self> {
        let first = branches
            .first()
            .ok_or_else(|| Error::Validation("observable without branches".into()))?;
        let qubits = first.projector.qubits();
        let mut matrix = Operator::zeros(qubits);
        for b in &branches {
            matrix = matrix.add(&b.projector.scale(Complex64::new(b.eigenvalue, 0.0)))?;
        }
        Ok(Observable {
            name: name.to_string(),
            support: (0..qubits).collect(),
            local: branches.clone(),
            matrix,
            branches,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.matrix.qubits()
    }

    pub fn matrix(&self) -> &Operator {
        &self.matrix
    }

    /// Branches over the full arity, sorted by ascending eigenvalue.
    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    /// Head positions on which the observable acts non-trivially.
    pub fn support(&self) -> &[usize] {
        &self.support
    }

    /// Branches restricted to [`Observable::support`], same order as `branches`.
    pub fn local_branches(&self) -> &[Branch] {
        &self.local
    }

    pub fn is_trivial(&self) -> bool {
        self.support.is_empty()
    }

    /// Same observable with the two tensor factors exchanged.
    pub fn swapped(&self) -> Result<Self> {
        if self.arity() != 2 {
            return Err(Error::Structural("only two-qubit observables can be swapped".into()));
        }
        let swap = Operator::from_real(&[
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 1.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
        ])?;
        let matrix = swap.matmul(&self.matrix)?.matmul(&swap)?;
        let name = swap_spelling(&self.name).unwrap_or_else(|| format!("swap({})", self.name));
        Self::from_matrix(&name, matrix)
    }

    pub fn same_operator(&self, other: &Observable) -> bool {
        self.matrix.approx_eq(&other.matrix, TOLERANCE)
    }
}

impl fmt::Display for Observable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// Decompose a hermitian matrix into eigenvalue branches.
pub fn spectral_decompose(matrix: &Operator) -> Result<Observable> {
    Observable::from_matrix("custom", matrix.clone())
}

fn decompose(matrix: &Operator) -> Result<Vec<Branch>> {
    if !matrix.is_hermitian(TOLERANCE) {
        return Err(Error::Validation("observable matrix is not hermitian".into()));
    }
    let q = matrix.qubits();
    let id = Operator::identity(q);
    let half = Complex64::new(0.5, 0.0);
    if matrix.matmul(matrix)?.approx_eq(&id, TOLERANCE) {
        if matrix.approx_eq(&id, TOLERANCE) {
            return Ok(vec![Branch {
                eigenvalue: 1.0,
                projector: id,
            }]);
        }
        if matrix.approx_eq(&id.scale(-ONE), TOLERANCE) {
            return Ok(vec![Branch {
                eigenvalue: -1.0,
                projector: id,
            }]);
        }
        return Ok(vec![
            Branch {
                eigenvalue: -1.0,
                projector: id.sub(matrix)?.scale(half),
            },
            Branch {
                eigenvalue: 1.0,
                projector: id.add(matrix)?.scale(half),
            },
        ]);
    }
    general_decompose(matrix)
}

fn general_decompose(matrix: &Operator) -> Result<Vec<Branch>> {
    let eig = nalgebra::SymmetricEigen::new(matrix.to_nalgebra());
    let mut pairs: Vec<(f64, usize)> = eig
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, i))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut branches: Vec<(Vec<f64>, Operator)> = Vec::new();
    for (value, col) in pairs {
        let v: Vec<Complex64> = eig.eigenvectors.column(col).iter().copied().collect();
        let p = Operator::outer(&v)?;
        match branches.last_mut() {
            Some((values, proj)) if (value - values[0]).abs() <= EIGEN_CLUSTER => {
                values.push(value);
                *proj = proj.add(&p)?;
            }
            _ => branches.push((vec![value], p)),
        }
    }
    Ok(branches
        .into_iter()
        .map(|(values, projector)| Branch {
            eigenvalue: values.iter().sum::<f64>() / values.len() as f64,
            projector,
        })
        .collect())
}

/// Support and the restricted matrix when some tensor factors are identity.
fn local_form(matrix: &Operator) -> Result<(Vec<usize>, Option<Operator>)> {
    let q = matrix.qubits();
    let scalar = matrix.get(0, 0);
    if matrix.approx_eq(&Operator::identity(q).scale(scalar), TOLERANCE) {
        return Ok((Vec::new(), None));
    }
    if q == 2 {
        let quarter = Complex64::new(0.5, 0.0);
        // A ⊗ I and I ⊗ B candidates via partial traces
        let mut a = Operator::zeros(1);
        let mut b = Operator::zeros(1);
        for r in 0..2 {
            for c in 0..2 {
                a.set(r, c, (matrix.get(2 * r, 2 * c) + matrix.get(2 * r + 1, 2 * c + 1)) * quarter);
                b.set(r, c, (matrix.get(r, c) + matrix.get(r + 2, c + 2)) * quarter);
            }
        }
        if a.kron(&Operator::identity(1)).approx_eq(matrix, TOLERANCE) {
            return Ok((vec![0], Some(a)));
        }
        if Operator::identity(1).kron(&b).approx_eq(matrix, TOLERANCE) {
            return Ok((vec![1], Some(b)));
        }
    }
    Ok(((0..q).collect(), Some(matrix.clone())))
}

fn pauli(letter: char) -> Result<Operator> {
    match letter {
        'I' => Ok(Operator::identity(1)),
        'X' => Ok(Operator::pauli_x()),
        'Y' => Ok(Operator::pauli_y()),
        'Z' => Ok(Operator::pauli_z()),
        other => Err(Error::Lookup(format!("`{other}` is not a Pauli letter"))),
    }
}

fn pauli_sum(spelling: &str) -> Result<Operator> {
    let terms: Vec<&str> = spelling.split('+').map(str::trim).collect();
    let width = terms[0].chars().count();
    if width == 0 || width > 2 || terms.iter().any(|t| t.chars().count() != width) {
        return Err(Error::Lookup(format!("unknown observable `{spelling}`")));
    }
    let mut total = Operator::zeros(width);
    for term in &terms {
        let mut op: Option<Operator> = None;
        for ch in term.chars() {
            let p = pauli(ch).map_err(|_| Error::Lookup(format!("unknown observable `{spelling}`")))?;
            op = Some(match op {
                None => p,
                Some(acc) => acc.kron(&p),
            });
        }
        total = total.add(&op.expect("non-empty term"))?;
    }
    let scale = 1.0 / (terms.len() as f64).sqrt();
    Ok(total.scale(Complex64::new(scale, 0.0)))
}

fn swap_spelling(spelling: &str) -> Option<String> {
    let terms: Vec<String> = spelling
        .split('+')
        .map(|t| t.chars().rev().collect::<String>())
        .collect();
    if terms.iter().all(|t| t.chars().count() == 2) {
        Some(terms.join("+"))
    } else {
        None
    }
}

/// Problems found by [`validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NotHermitian { branch: usize },
    NotIdempotent { branch: usize },
    NotOrthogonal { first: usize, second: usize },
    DuplicateEigenvalue { first: usize, second: usize },
    Incomplete,
    SizeMismatch { branch: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotHermitian { branch } => write!(f, "projector {branch} is not hermitian"),
            Violation::NotIdempotent { branch } => {
                write!(f, "non-idempotent projector {branch}")
            }
            Violation::NotOrthogonal { first, second } => {
                write!(f, "projectors {first} and {second} are not orthogonal")
            }
            Violation::DuplicateEigenvalue { first, second } => {
                write!(f, "branches {first} and {second} share an eigenvalue")
            }
            Violation::Incomplete => write!(f, "incomplete: projectors do not sum to identity"),
            Violation::SizeMismatch { branch } => {
                write!(f, "projector {branch} has the wrong dimension")
            }
        }
    }
}

/// Check the postulate structure of an observable's branches.
pub fn validate(obs: &Observable) -> Vec<Violation> {
    let mut out = Vec::new();
    let branches = obs.branches();
    let q = obs.arity();
    let mut sum = Operator::zeros(q);
    for (i, b) in branches.iter().enumerate() {
        let p = &b.projector;
        if p.qubits() != q {
            out.push(Violation::SizeMismatch { branch: i });
            continue;
        }
        if !p.is_hermitian(TOLERANCE) {
            out.push(Violation::NotHermitian { branch: i });
        }
        if !p.matmul(p).map(|pp| pp.approx_eq(p, TOLERANCE)).unwrap_or(false) {
            out.push(Violation::NotIdempotent { branch: i });
        }
        sum = sum.add(p).expect("sizes checked");
    }
    for i in 0..branches.len() {
        for j in i + 1..branches.len() {
            let (a, b) = (&branches[i], &branches[j]);
            if a.projector.qubits() != q || b.projector.qubits() != q {
                continue;
            }
            if (a.eigenvalue - b.eigenvalue).abs() <= EIGEN_CLUSTER {
                out.push(Violation::DuplicateEigenvalue { first: i, second: j });
            }
            let prod = a.projector.matmul(&b.projector).expect("sizes checked");
            if !prod.is_zero(TOLERANCE) {
                out.push(Violation::NotOrthogonal { first: i, second: j });
            }
        }
    }
    if !sum.approx_eq(&Operator::identity(q), TOLERANCE) {
        out.push(Violation::Incomplete);
    }
    out
}

/// The seven resource models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ModelName {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl ModelName {
    pub const ALL: [ModelName; 7] = [
        ModelName::A,
        ModelName::B,
        ModelName::C,
        ModelName::D,
        ModelName::E,
        ModelName::F,
        ModelName::G,
    ];

    pub fn letter(self) -> char {
        match self {
            ModelName::A => 'A',
            ModelName::B => 'B',
            ModelName::C => 'C',
            ModelName::D => 'D',
            ModelName::E => 'E',
            ModelName::F => 'F',
            ModelName::G => 'G',
        }
    }
}

impl fmt::Display for ModelName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "M_{}", self.letter())
    }
}

impl FromStr for ModelName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let t = t
            .strip_prefix("M_")
            .or_else(|| t.strip_prefix("O_"))
            .unwrap_or(t);
        match t {
            "A" | "a" => Ok(ModelName::A),
            "B" | "b" => Ok(ModelName::B),
            "C" | "c" => Ok(ModelName::C),
            "D" | "d" => Ok(ModelName::D),
            "E" | "e" => Ok(ModelName::E),
            "F" | "f" => Ok(ModelName::F),
            "G" | "g" => Ok(ModelName::G),
            _ => Err(Error::Lookup(format!("unknown model `{s}`"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ObservableSet {
    pub name: ModelName,
    pub members: Vec<Observable>,
}

impl ObservableSet {
    pub fn contains(&self, obs: &Observable) -> bool {
        self.members.iter().any(|m| m.same_operator(obs))
    }

    pub fn spellings(&self) -> Vec<&str> {
        self.members.iter().map(Observable::name).collect()
    }
}

const TWO_QUBIT_CORE: [&str; 6] = ["XX", "ZZ", "XZ", "ZX", "XI", "ZI"];

/// Spellings of the observable set of a model, in the order they are listed
/// in the model definitions.
pub fn set_spellings(model: ModelName) -> Vec<&'static str> {
    let mut v: Vec<&'static str> = Vec::new();
    match model {
        ModelName::A => {
            v.extend(TWO_QUBIT_CORE);
            v.extend(["XX+YX", "XX+XY"]);
        }
        // M_B admits any one-qubit observables; X and Z stand in for the family.
        ModelName::B | ModelName::C => v.extend(["X", "Z"]),
        ModelName::D | ModelName::E => {
            v.extend(TWO_QUBIT_CORE);
            v.extend(["IX", "IZ", "XX+XY", "XX+YX"]);
        }
        ModelName::F | ModelName::G => {
            v.extend(TWO_QUBIT_CORE);
            v.extend(["IX", "IZ", "XX+XY"]);
        }
    }
    v
}

pub fn named_set(model: ModelName) -> ObservableSet {
    ObservableSet {
        name: model,
        members: set_spellings(model)
            .into_iter()
            .map(|s| Observable::named(s).expect("library spelling"))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::{I_UNIT, ZERO};

    fn proj(rows: &[&[f64]]) -> Operator {
        Operator::from_real(rows).unwrap()
    }

    #[test]
    fn z_decomposes_into_basis_projectors() {
        let z = spectral_decompose(&Operator::pauli_z()).unwrap();
        assert_eq!(z.branches().len(), 2);
        assert_eq!(z.branches()[0].eigenvalue, -1.0);
        assert!(z.branches()[0]
            .projector
            .approx_eq(&proj(&[&[0.0, 0.0], &[0.0, 1.0]]), 1e-12));
        assert_eq!(z.branches()[1].eigenvalue, 1.0);
        assert!(z.branches()[1]
            .projector
            .approx_eq(&proj(&[&[1.0, 0.0], &[0.0, 0.0]]), 1e-12));
        assert!(validate(&z).is_empty());
    }

    #[test]
    fn pauli_relations() {
        let (x, y, z) = (Operator::pauli_x(), Operator::pauli_y(), Operator::pauli_z());
        let id = Operator::identity(1);
        for p in [&x, &y, &z] {
            assert!(p.matmul(p).unwrap().approx_eq(&id, 1e-15));
        }
        assert!(x.matmul(&y).unwrap().approx_eq(&z.scale(I_UNIT), 1e-15));
    }

    #[test]
    fn named_sets_have_cited_sizes() {
        assert_eq!(named_set(ModelName::A).members.len(), 8);
        assert_eq!(set_spellings(ModelName::C), vec!["X", "Z"]);
        let f = named_set(ModelName::F);
        assert_eq!(f.members.len(), 9);
        assert_eq!(f.members.last().unwrap().name(), "XX+XY");
        assert_eq!(named_set(ModelName::D).members.len(), 10);
    }

    #[test]
    fn support_of_partial_observables() {
        assert_eq!(Observable::named("XI").unwrap().support(), &[0]);
        assert_eq!(Observable::named("IZ").unwrap().support(), &[1]);
        assert_eq!(Observable::named("XZ").unwrap().support(), &[0, 1]);
        let ii = Observable::named("II").unwrap();
        assert!(ii.is_trivial());
        assert_eq!(ii.branches().len(), 1);
        assert_eq!(ii.local_branches()[0].projector.qubits(), 0);
    }

    #[test]
    fn swapped_spelling() {
        let o = Observable::named("XX+YX").unwrap();
        let s = o.swapped().unwrap();
        assert_eq!(s.name(), "XX+XY");
        assert!(s.same_operator(&Observable::named("XX+XY").unwrap()));
    }

    #[test]
    fn unknown_spellings_and_non_hermitian() {
        assert!(matches!(Observable::named("Q"), Err(Error::Lookup(_))));
        assert!(matches!(Observable::named("XXX"), Err(Error::Lookup(_))));
        let m = Operator::from_rows(&[vec![ZERO, ONE], vec![ZERO, ZERO]]).unwrap();
        assert!(matches!(spectral_decompose(&m), Err(Error::Validation(_))));
    }

    #[test]
    fn validate_reports_defects() {
        let incomplete = Observable::from_branches(
            "half",
            vec![Branch {
                eigenvalue: 1.0,
                projector: proj(&[&[1.0, 0.0], &[0.0, 0.0]]),
            }],
        )
        .unwrap();
        assert_eq!(validate(&incomplete), vec![Violation::Incomplete]);
        let bad = Observable::from_branches(
            "bad",
            vec![
                Branch {
                    eigenvalue: 1.0,
                    projector: proj(&[&[2.0, 0.0], &[0.0, 0.0]]),
                },
                Branch {
                    eigenvalue: -1.0,
                    projector: proj(&[&[0.0, 0.0], &[0.0, 1.0]]),
                },
            ],
        )
        .unwrap();
        let v = validate(&bad);
        assert!(v.contains(&Violation::NotIdempotent { branch: 0 }));
        assert!(v.contains(&Violation::Incomplete));
    }

    #[test]
    fn model_names_parse() {
        assert_eq!("M_G".parse::<ModelName>().unwrap(), ModelName::G);
        assert_eq!("c".parse::<ModelName>().unwrap(), ModelName::C);
        assert!("H".parse::<ModelName>().is_err());
    }
}
