//! State ingestion: the JSON state-file format and the compact builtin
//! grammar used on the command line.
//!
//! A state file is either raw amplitudes,
//! `{"n": 2, "amps": [[re, im], [re, im], ...]}` with `2^n` entries in the
//! qubit-1-most-significant index order, or a named shorthand such as
//! `{"builtin": "ghz", "n": 4}`, `{"builtin": "dicke", "n": 6, "k": 2}` or
//! `{"builtin": "product", "parts": [ ... ]}`.
//!
//! The compact grammar joins factors with `+` (first factor on the most
//! significant qubits): `ghz:4`, `w:5`, `dicke:6,2`, `zero:3`, `basis:3,5`,
//! `ghz:3+zero:5`, `ghz:4+ghz:4`.

use num_complex::Complex64;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::state::StateVector;

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum StateSpec {
    Builtin(BuiltinSpec),
    Raw(RawState),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawState {
    pub n: usize,
    pub amps: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "builtin", rename_all = "lowercase")]
pub enum BuiltinSpec {
    Ghz { n: usize },
    W { n: usize },
    Dicke { n: usize, k: usize },
    Zero { n: usize },
    Basis { n: usize, index: usize },
    Product { parts: Vec<StateSpec> },
}

impl StateSpec {
    pub fn build(&self) -> Result<StateVector> {
        match self {
            StateSpec::Raw(raw) => {
                let amps: Vec<Complex64> =
                    raw.amps.iter().map(|&(re, im)| Complex64::new(re, im)).collect();
                StateVector::new(raw.n, amps)
            }
            StateSpec::Builtin(b) => b.build(),
        }
    }
}

impl BuiltinSpec {
    pub fn build(&self) -> Result<StateVector> {
        match self {
            BuiltinSpec::Ghz { n } => StateVector::ghz(*n),
            BuiltinSpec::W { n } => StateVector::w(*n),
            BuiltinSpec::Dicke { n, k } => StateVector::dicke(*n, *k),
            BuiltinSpec::Zero { n } => StateVector::zero(*n),
            BuiltinSpec::Basis { n, index } => StateVector::basis(*n, *index),
            BuiltinSpec::Product { parts } => {
                let factors =
                    parts.iter().map(|p| p.build()).collect::<Result<Vec<_>>>()?;
                StateVector::product(&factors)
            }
        }
    }
}

/// Parses a JSON state file.
pub fn state_from_json(text: &str) -> Result<StateVector> {
    let spec: StateSpec = serde_json::from_str(text)
        .map_err(|e| Error::StateSpec(format!("malformed state file: {e}")))?;
    spec.build()
}

/// Parses the compact builtin grammar.
pub fn state_from_builtin(spec: &str) -> Result<StateVector> {
    let mut factors = Vec::new();
    for term in spec.split('+') {
        factors.push(parse_term(term.trim())?);
    }
    StateVector::product(&factors)
}

fn parse_term(term: &str) -> Result<StateVector> {
    let bad = |msg: &str| Error::StateSpec(format!("{msg} in builtin term '{term}'"));
    let (name, args) = match term.split_once(':') {
        Some((n, a)) => (n, a),
        None => return Err(bad("missing ':<params>'")),
    };
    let ints: Vec<usize> = args
        .split(',')
        .map(|x| x.trim().parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| bad("non-integer parameter"))?;
    match (name, ints.as_slice()) {
        ("ghz", [n]) => StateVector::ghz(*n),
        ("w", [n]) => StateVector::w(*n),
        ("dicke", [n, k]) => StateVector::dicke(*n, *k),
        ("zero", [n]) => StateVector::zero(*n),
        ("basis", [n, index]) => StateVector::basis(*n, *index),
        _ => Err(bad("unknown builtin or wrong parameter count")),
    }
}
