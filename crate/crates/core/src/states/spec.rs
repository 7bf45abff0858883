//! Textual state descriptions.
//!
//! A spec is either a named family on a single line,
//!
//! ```text
//! werner
//! d_lambda_alpha 0.7745966 0.8660254
//! bell Phi+
//! mixed
//! ```
//!
//! or a literal 4×4 complex matrix given as 16 lines of `re im`, row-major.
//! Blank lines and anything after `#` are ignored.

use std::fmt;

use num_complex::Complex;
use thiserror::Error;

use super::{d_lambda_alpha, werner_state, BellState, DensityOperator, StateError};
use crate::qlinalg::ComplexMatrix;
use crate::real::Real;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecError {
    #[error("empty state spec")]
    Empty,
    #[error("unknown state family `{0}`")]
    UnknownFamily(String),
    #[error("unknown Bell state `{0}` (expected Phi+, Phi-, Psi+ or Psi-)")]
    UnknownBellState(String),
    #[error("`{family}` takes {expected} argument(s), got {got}")]
    Arity {
        family: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("line {line}: cannot parse `{token}` as a number")]
    BadNumber { line: usize, token: String },
    #[error("line {line}: expected `re im`, got {got} field(s)")]
    BadMatrixLine { line: usize, got: usize },
    #[error("matrix spec needs 16 entries, got {0}")]
    MatrixSize(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    Werner,
    DLambdaAlpha { lambda: f64, alpha: f64 },
    Bell(BellState),
    MaximallyMixed,
    /// Row-major entries.
    Matrix(Vec<Complex<f64>>),
}

impl StateSpec {
    pub fn to_density<T: Real>(&self) -> Result<DensityOperator<T>, StateError> {
        match self {
            StateSpec::Werner => Ok(werner_state()),
            StateSpec::DLambdaAlpha { lambda, alpha } => d_lambda_alpha(T::lit(*lambda), T::lit(*alpha)),
            StateSpec::Bell(b) => Ok(b.density()),
            StateSpec::MaximallyMixed => Ok(DensityOperator::maximally_mixed()),
            StateSpec::Matrix(entries) => {
                let data = entries
                    .iter()
                    .map(|z| Complex::new(T::lit(z.re), T::lit(z.im)))
                    .collect();
                DensityOperator::new(ComplexMatrix::from_row_major(4, 4, data)?)
            }
        }
    }

    /// `(λ, α)` for members of the `D_{λ,α}` family.
    pub fn family_parameters(&self) -> Option<(f64, f64)> {
        match *self {
            StateSpec::DLambdaAlpha { lambda, alpha } => Some((lambda, alpha)),
            _ => None,
        }
    }
}

impl fmt::Display for StateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateSpec::Werner => f.write_str("werner"),
            StateSpec::DLambdaAlpha { lambda, alpha } => write!(f, "d_lambda_alpha {lambda} {alpha}"),
            StateSpec::Bell(b) => write!(f, "bell {b}"),
            StateSpec::MaximallyMixed => f.write_str("mixed"),
            StateSpec::Matrix(_) => f.write_str("matrix"),
        }
    }
}

fn parse_bell(name: &str) -> Result<BellState, SpecError> {
    let norm: String = name
        .chars()
        .map(|c| match c {
            'Φ' | 'φ' => 'f',
            'Ψ' | 'ψ' => 's',
            '\u{2212}' => '-',
            c => c.to_ascii_lowercase(),
        })
        .collect();
    let state = match norm.as_str() {
        "phi+" | "f+" | "phi_plus" | "phiplus" => BellState::PhiPlus,
        "phi-" | "f-" | "phi_minus" | "phiminus" => BellState::PhiMinus,
        "psi+" | "s+" | "psi_plus" | "psiplus" => BellState::PsiPlus,
        "psi-" | "s-" | "psi_minus" | "psiminus" | "singlet" => BellState::PsiMinus,
        _ => return Err(SpecError::UnknownBellState(name.to_string())),
    };
    Ok(state)
}

fn number(line: usize, token: &str) -> Result<f64, SpecError> {
    token
        .parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| SpecError::BadNumber {
            line,
            token: token.to_string(),
        })
}

fn expect_arity(family: &'static str, args: &[&str], expected: usize) -> Result<(), SpecError> {
    if args.len() == expected {
        Ok(())
    } else {
        Err(SpecError::Arity {
            family,
            expected,
            got: args.len(),
        })
    }
}

/// Parses a spec string or the contents of a state file.
pub fn parse_state_spec(text: &str) -> Result<StateSpec, SpecError> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect();
    let Some(&(first_no, first)) = lines.first() else {
        return Err(SpecError::Empty);
    };
    let tokens: Vec<&str> = first.split_whitespace().collect();
    let head = tokens[0];
    if head.parse::<f64>().is_err() {
        let args = &tokens[1..];
        return match head.to_ascii_lowercase().as_str() {
            "werner" => expect_arity("werner", args, 0).map(|_| StateSpec::Werner),
            "mixed" => expect_arity("mixed", args, 0).map(|_| StateSpec::MaximallyMixed),
            "bell" => {
                expect_arity("bell", args, 1)?;
                parse_bell(args[0]).map(StateSpec::Bell)
            }
            "d_lambda_alpha" => {
                expect_arity("d_lambda_alpha", args, 2)?;
                Ok(StateSpec::DLambdaAlpha {
                    lambda: number(first_no, args[0])?,
                    alpha: number(first_no, args[1])?,
                })
            }
            _ => Err(SpecError::UnknownFamily(head.to_string())),
        };
    }
    let mut entries = Vec::with_capacity(16);
    for &(line, content) in &lines {
        let fields: Vec<&str> = content.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(SpecError::BadMatrixLine {
                line,
                got: fields.len(),
            });
        }
        entries.push(Complex::new(number(line, fields[0])?, number(line, fields[1])?));
    }
    if entries.len() != 16 {
        return Err(SpecError::MatrixSize(entries.len()));
    }
    Ok(StateSpec::Matrix(entries))
}

/// Serialises a density operator in the 16-line matrix format.
pub fn format_matrix<T: Real>(d: &DensityOperator<T>) -> String {
    d.matrix()
        .entries()
        .iter()
        .map(|z| format!("{} {}\n", z.re, z.im))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_families() {
        assert_eq!(parse_state_spec("werner").unwrap(), StateSpec::Werner);
        assert_eq!(parse_state_spec("  bell Phi+ ").unwrap(), StateSpec::Bell(BellState::PhiPlus));
        assert_eq!(parse_state_spec("bell Φ+").unwrap(), StateSpec::Bell(BellState::PhiPlus));
        assert_eq!(parse_state_spec("bell Ψ−").unwrap(), StateSpec::Bell(BellState::PsiMinus));
        assert_eq!(
            parse_state_spec("# channel\nd_lambda_alpha 0.7745966 0.8660254\n").unwrap(),
            StateSpec::DLambdaAlpha {
                lambda: 0.7745966,
                alpha: 0.8660254
            }
        );
    }

    #[test]
    fn spec_errors() {
        assert_eq!(parse_state_spec(" \n# nothing\n"), Err(SpecError::Empty));
        assert!(matches!(parse_state_spec("bogus"), Err(SpecError::UnknownFamily(_))));
        assert!(matches!(parse_state_spec("bell Chi+"), Err(SpecError::UnknownBellState(_))));
        assert!(matches!(parse_state_spec("d_lambda_alpha 0.5"), Err(SpecError::Arity { .. })));
        assert!(matches!(
            parse_state_spec("d_lambda_alpha 0.5 x"),
            Err(SpecError::BadNumber { line: 1, .. })
        ));
        assert!(matches!(parse_state_spec("0.25 0\n0 0"), Err(SpecError::MatrixSize(2))));
        assert!(matches!(parse_state_spec("0.25 0 1"), Err(SpecError::BadMatrixLine { line: 1, got: 3 })));
    }

    #[test]
    fn matrix_file_roundtrip() {
        let w = werner_state::<f64>();
        let text = format_matrix(&w);
        assert_eq!(text.lines().count(), 16);
        let spec = parse_state_spec(&text).unwrap();
        let back = spec.to_density::<f64>().unwrap();
        assert_eq!(back.matrix(), w.matrix());
        assert_eq!(spec.to_string(), "matrix");
    }

    #[test]
    fn invalid_matrix_is_rejected_at_conversion() {
        let mut text = String::new();
        for i in 0..16 {
            let v = if i == 0 { 1.2 } else if i == 15 { -0.2 } else { 0.0 };
            text.push_str(&format!("{v} 0\n"));
        }
        let spec = parse_state_spec(&text).unwrap();
        assert!(matches!(spec.to_density::<f64>(), Err(StateError::NotPositive(_))));
    }

    #[test]
    fn display_roundtrips_named_specs() {
        for s in ["werner", "mixed", "bell Psi-", "d_lambda_alpha 0.5 0.25"] {
            let spec = parse_state_spec(s).unwrap();
            assert_eq!(parse_state_spec(&spec.to_string()).unwrap(), spec);
        }
    }
}
