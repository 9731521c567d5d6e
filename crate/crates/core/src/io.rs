//! JSON formats for states and pair selections.
//!
//! State files look like
//!
//! ```json
//! {"n": 3, "d": 2, "kind": "pure",
//!  "amplitudes": [{"index": "001", "re": 0.5773502691896258, "im": 0.0}]}
//! ```
//!
//! or, for mixed states, carry `"kind": "mixed"` and a row-major
//! `"matrix": [[re, im], ...]` with `d^(2n)` entries. Pair selections are lists
//! of two-element index-string arrays: `[["001","100"],["001","010"]]`.

use std::fmt::Display;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize, Serializer};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::indices::{IndexPair, MultiIndex, Space};
use crate::states::{DensityMatrix, PureState};
use crate::witness::PairSet;

/// Serializes any value through its `Display` form.
pub fn serialize_display<T: Display, S: Serializer>(value: &T, serializer: S) -> std::result::Result<S::Ok, S::Error> {
    serializer.collect_str(value)
}

/// Serializes a list of values through their `Display` forms.
pub fn serialize_display_vec<T: Display, S: Serializer>(values: &[T], serializer: S) -> std::result::Result<S::Ok, S::Error> {
    serializer.collect_seq(values.iter().map(|v| v.to_string()))
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateFile {
    n: usize,
    d: usize,
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    amplitudes: Option<Vec<Amplitude>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    matrix: Option<Vec<[f64; 2]>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Amplitude {
    index: String,
    re: f64,
    #[serde(default)]
    im: f64,
}

/// A state read from a file.
#[derive(Clone, Debug, PartialEq)]
pub enum LoadedState {
    Pure(PureState),
    Mixed(DensityMatrix),
}

impl LoadedState {
    pub fn space(&self) -> Space {
        match self {
            LoadedState::Pure(psi) => psi.space(),
            LoadedState::Mixed(rho) => rho.space(),
        }
    }

    /// The density matrix, forming the projector for pure states.
    pub fn density(&self) -> DensityMatrix {
        match self {
            LoadedState::Pure(psi) => psi.projector(),
            LoadedState::Mixed(rho) => rho.clone(),
        }
    }

    pub fn as_pure(&self) -> Option<&PureState> {
        match self {
            LoadedState::Pure(psi) => Some(psi),
            LoadedState::Mixed(_) => None,
        }
    }
}

/// Parses a state file; every state invariant is enforced.
pub fn parse_state(text: &str) -> Result<LoadedState> {
    let file: StateFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let space = Space::new(file.n, file.d)?;
    match (file.kind.as_str(), file.amplitudes, file.matrix) {
        ("pure", Some(amps), None) => {
            let mut seen = std::collections::BTreeSet::new();
            let entries = amps
                .into_iter()
                .map(|a| {
                    let eta = MultiIndex::parse(&a.index, space)?;
                    if !seen.insert(eta.rank()) {
                        return Err(Error::Parse(format!("index {} listed twice", a.index)));
                    }
                    if !a.re.is_finite() || !a.im.is_finite() {
                        return Err(Error::Parse(format!("non-finite amplitude at {}", a.index)));
                    }
                    Ok((eta, C64::new(a.re, a.im)))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(LoadedState::Pure(PureState::new(space, entries)?))
        }
        ("mixed", None, Some(entries)) => {
            let dim = space.dim();
            if entries.len() != dim * dim {
                return Err(Error::Parse(format!("matrix has {} entries, expected {}", entries.len(), dim * dim)));
            }
            if entries.iter().flatten().any(|x| !x.is_finite()) {
                return Err(Error::Parse("non-finite matrix entry".into()));
            }
            let matrix = DMatrix::from_fn(dim, dim, |r, c| {
                let [re, im] = entries[r * dim + c];
                C64::new(re, im)
            });
            Ok(LoadedState::Mixed(DensityMatrix::new(space, matrix)?))
        }
        ("pure", _, _) => Err(Error::Parse("a pure state needs \"amplitudes\" and no \"matrix\"".into())),
        ("mixed", _, _) => Err(Error::Parse("a mixed state needs \"matrix\" and no \"amplitudes\"".into())),
        (other, _, _) => Err(Error::Parse(format!("unknown state kind {other:?} (expected pure or mixed)"))),
    }
}

/// JSON form of a pure state.
pub fn pure_state_json(psi: &PureState) -> Value {
    let space = psi.space();
    let amplitudes = psi
        .support()
        .map(|(eta, c)| Amplitude { index: eta.to_string(), re: c.re, im: c.im })
        .collect();
    let file = StateFile { n: space.n, d: space.d, kind: "pure".into(), amplitudes: Some(amplitudes), matrix: None };
    serde_json::to_value(file).expect("state serializes")
}

/// JSON form of a density matrix.
pub fn density_json(rho: &DensityMatrix) -> Value {
    let space = rho.space();
    let dim = space.dim();
    let mut entries = Vec::with_capacity(dim * dim);
    for r in 0..dim {
        for c in 0..dim {
            let z = rho.entry(r, c);
            entries.push([z.re, z.im]);
        }
    }
    let file = StateFile { n: space.n, d: space.d, kind: "mixed".into(), amplitudes: None, matrix: Some(entries) };
    serde_json::to_value(file).expect("state serializes")
}

/// Parses a pair selection; `n` comes from the index length and `d` must be given.
pub fn parse_pair_set(text: &str, d: usize) -> Result<PairSet> {
    let raw: Vec<[String; 2]> = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let Some(first) = raw.first() else {
        return Err(Error::Parse("pair selection is empty".into()));
    };
    let space = Space::new(first[0].len(), d)?;
    let pairs = raw.iter().map(|[a, b]| IndexPair::parse(a, b, space)).collect::<Result<Vec<_>>>()?;
    PairSet::new(space, pairs)
}

/// JSON form of a pair selection.
pub fn pair_set_json(pairs: &PairSet) -> Value {
    Value::Array(
        pairs
            .pairs()
            .iter()
            .map(|p| Value::Array(vec![Value::String(p.first().to_string()), Value::String(p.second().to_string())]))
            .collect(),
    )
}

/// Rounds to `digits` significant digits.
pub fn round_significant(x: f64, digits: i32) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let magnitude = x.abs().log10().floor() as i32;
    let scale = 10f64.powi(digits - 1 - magnitude);
    let rounded = (x * scale).round() / scale;
    // Reparse to drop binary noise from the division.
    format!("{:.*e}", (digits - 1).max(0) as usize, rounded).parse().unwrap_or(rounded)
}

/// Rounds every float in a JSON tree to 12 significant digits.
pub fn round_json(value: Value) -> Value {
    match value {
        Value::Number(n) if n.is_f64() => {
            let x = round_significant(n.as_f64().expect("f64"), 12);
            serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
        }
        Value::Array(items) => Value::Array(items.into_iter().map(round_json).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, v)| (k, round_json(v))).collect()),
        other => other,
    }
}
