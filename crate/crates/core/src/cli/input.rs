use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quantum::{CellId, RegisterState};

/// Amplitudes read from an input spec, before placement on a tape.
#[derive(Debug, Clone, PartialEq)]
pub struct InputSpec {
    pub qubits: usize,
    pub amplitudes: Vec<Complex64>,
    /// Set when the amplitudes had to be rescaled to unit norm.
    pub warning: Option<String>,
}

impl InputSpec {
    /// Accepted forms:
    ///
    /// * a basis string such as `011` (empty for no input);
    /// * one `a|0>+b|1>` term per qubit, qubits separated by `;`, with
    ///   complex coefficients like `0.6`, `-0.2+0.5i` or `(0.1-1i)`;
    /// * a full amplitude vector `[c0, c1, ...]` of length `2^n`.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        let amplitudes = if t.chars().all(|c| c == '0' || c == '1') {
            let mut v = vec![Complex64::new(0.0, 0.0); 1 << t.len()];
            let index = t.chars().fold(0usize, |acc, c| acc * 2 + usize::from(c == '1'));
            v[index] = Complex64::new(1.0, 0.0);
            v
        } else if let Some(inner) = t.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            let v = inner
                .split(',')
                .map(|c| complex(c.trim()))
                .collect::<Result<Vec<_>>>()?;
            if !v.len().is_power_of_two() {
                return Err(Error::Validation(format!(
                    "amplitude vector has {} entries, not a power of two",
                    v.len()
                )));
            }
            v
        } else {
            let mut v = vec![Complex64::new(1.0, 0.0)];
            for part in t.split(';') {
                let [a0, a1] = ket(part.trim())?;
                v = v.iter().flat_map(|x| [x * a0, x * a1]).collect();
            }
            v
        };
        let qubits = amplitudes.len().trailing_zeros() as usize;
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-12 {
            return Err(Error::Validation("input has zero norm".into()));
        }
        let warning = ((norm - 1.0).abs() > 1e-6).then(|| format!("input norm {norm} rescaled to 1"));
        Ok(InputSpec {
            qubits,
            amplitudes: amplitudes.into_iter().map(|a| a / norm).collect(),
            warning,
        })
    }

    pub fn place(&self, cells: Vec<CellId>) -> Result<RegisterState> {
        RegisterState::new(cells, self.amplitudes.clone())
    }
}

fn complex(text: &str) -> Result<Complex64> {
    let t = text.trim();
    let t = t.strip_prefix('(').and_then(|s| s.strip_suffix(')')).unwrap_or(t).trim();
    match t {
        "" | "+" => return Ok(Complex64::new(1.0, 0.0)),
        "-" => return Ok(Complex64::new(-1.0, 0.0)),
        _ => {}
    }
    let t = t.strip_prefix('+').unwrap_or(t);
    Complex64::from_str(t).map_err(|_| Error::Validation(format!("bad complex number `{text}`")))
}

/// Coefficients of `|0>` and `|1>` in one qubit's term list.
fn ket(text: &str) -> Result<[Complex64; 2]> {
    let mut out = [Complex64::new(0.0, 0.0); 2];
    let mut seen = [false; 2];
    let mut rest = text;
    while !rest.trim().is_empty() {
        let bar = rest
            .find('|')
            .ok_or_else(|| Error::Validation(format!("expected `|0>` or `|1>` in `{text}`")))?;
        let coeff = complex(&rest[..bar])?;
        let after = &rest[bar..];
        let b = if after.starts_with("|0>") {
            0
        } else if after.starts_with("|1>") {
            1
        } else {
            return Err(Error::Validation(format!("bad ket in `{text}`")));
        };
        if seen[b] {
            return Err(Error::Validation(format!("|{b}> appears twice in `{text}`")));
        }
        seen[b] = true;
        out[b] = coeff;
        rest = &after[3..];
    }
    if !seen[0] && !seen[1] {
        return Err(Error::Validation(format!("no kets in `{text}`")));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn forms() {
        let s = InputSpec::parse("011").unwrap();
        assert_eq!(s.qubits, 3);
        assert_eq!(s.amplitudes[3], c(1.0, 0.0));
        let s = InputSpec::parse("0.6|0>+0.8|1>").unwrap();
        assert_eq!(s.amplitudes, vec![c(0.6, 0.0), c(0.8, 0.0)]);
        assert!(s.warning.is_none());
        let s = InputSpec::parse("|1>; (0.6+0.8i)|0>").unwrap();
        assert_eq!(s.amplitudes[2], c(0.6, 0.8));
        let s = InputSpec::parse("[1, 1]").unwrap();
        assert!(s.warning.is_some());
        assert!((s.amplitudes[0].re - 0.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(InputSpec::parse("").unwrap().qubits, 0);
        let s = InputSpec::parse("-0.2-0.1i|1>+1|0>").unwrap();
        assert!(s.amplitudes[1].im < 0.0 && s.amplitudes[1].re < 0.0);
    }

    #[test]
    fn rejects() {
        assert!(InputSpec::parse("0.6|2>").is_err());
        assert!(InputSpec::parse("[1,0,0]").is_err());
        assert!(InputSpec::parse("0|0>+0|1>").is_err());
    }
}
