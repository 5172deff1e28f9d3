//! JSON interchange for states.
//!
//! Pure states: `{"n_qubits": n, "amplitudes": [[re, im], ...]}` with
//! `2^n` entries in computational-basis order. Density matrices:
//! `{"n_qubits": n, "matrix": [[[re, im], ...], ...]}` row-major. Parsed
//! states pass through full validation, so malformed physics (norm, trace,
//! positivity) is rejected with the same errors as direct construction.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmath::matrix::{CMat, CVec};
use crate::qmath::state::{DensityMatrix, PureState};

use num_complex::Complex64;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PureStateJson {
    pub n_qubits: usize,
    pub amplitudes: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DensityMatrixJson {
    pub n_qubits: usize,
    pub matrix: Vec<Vec<[f64; 2]>>,
}

/// A state file may hold either representation; which one is detected by key.
#[derive(Debug, Clone)]
pub enum LoadedState {
    Pure(PureState),
    Density(DensityMatrix),
}

impl From<&PureState> for PureStateJson {
    fn from(psi: &PureState) -> Self {
        Self {
            n_qubits: psi.n_qubits(),
            amplitudes: psi.amplitudes().iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl TryFrom<PureStateJson> for PureState {
    type Error = Error;

    fn try_from(j: PureStateJson) -> Result<Self> {
        let amps = CVec::from_vec(
            j.amplitudes.iter().map(|&[re, im]| Complex64::new(re, im)).collect(),
        );
        PureState::new(j.n_qubits, amps)
    }
}

impl From<&DensityMatrix> for DensityMatrixJson {
    fn from(rho: &DensityMatrix) -> Self {
        let d = rho.dim();
        let matrix = (0..d)
            .map(|i| (0..d).map(|j| {
                let z = rho.matrix()[[i, j]];
                [z.re, z.im]
            }).collect())
            .collect();
        Self { n_qubits: rho.n_qubits(), matrix }
    }
}

impl TryFrom<DensityMatrixJson> for DensityMatrix {
    type Error = Error;

    fn try_from(j: DensityMatrixJson) -> Result<Self> {
        let rows = j.matrix.len();
        for row in &j.matrix {
            if row.len() != rows {
                return Err(Error::Json(format!(
                    "matrix is not square: row of length {} in a {rows}-row matrix",
                    row.len()
                )));
            }
        }
        let mat = CMat::from_shape_fn((rows, rows), |(i, k)| {
            let [re, im] = j.matrix[i][k];
            Complex64::new(re, im)
        });
        DensityMatrix::new(j.n_qubits, mat)
    }
}

impl PureState {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&PureStateJson::from(self)).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let j: PureStateJson =
            serde_json::from_str(s).map_err(|e| Error::Json(e.to_string()))?;
        j.try_into()
    }
}

impl DensityMatrix {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&DensityMatrixJson::from(self)).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let j: DensityMatrixJson =
            serde_json::from_str(s).map_err(|e| Error::Json(e.to_string()))?;
        j.try_into()
    }
}

/// Parses either state representation, detecting the kind by its key.
pub fn state_from_json(s: &str) -> Result<LoadedState> {
    let value: serde_json::Value =
        serde_json::from_str(s).map_err(|e| Error::Json(e.to_string()))?;
    let obj = value.as_object().ok_or_else(|| Error::Json("expected a JSON object".into()))?;
    if obj.contains_key("amplitudes") {
        Ok(LoadedState::Pure(PureState::from_json(s)?))
    } else if obj.contains_key("matrix") {
        Ok(LoadedState::Density(DensityMatrix::from_json(s)?))
    } else {
        Err(Error::Json("expected an \"amplitudes\" or \"matrix\" key".into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::matrix::max_abs_diff;

    #[test]
    fn pure_roundtrip() {
        let psi = PureState::w(3).unwrap();
        let back = PureState::from_json(&psi.to_json()).unwrap();
        assert_eq!(back.n_qubits(), 3);
        assert!(max_abs_diff(back.density().matrix(), psi.density().matrix()) == 0.0);
    }

    #[test]
    fn density_roundtrip() {
        let rho = DensityMatrix::werner(0.4).unwrap();
        let back = DensityMatrix::from_json(&rho.to_json()).unwrap();
        assert!(max_abs_diff(back.matrix(), rho.matrix()) == 0.0);
    }

    #[test]
    fn detection_by_key() {
        let psi = PureState::bell();
        match state_from_json(&psi.to_json()).unwrap() {
            LoadedState::Pure(p) => assert_eq!(p.n_qubits(), 2),
            LoadedState::Density(_) => panic!("detected wrong kind"),
        }
        let rho = DensityMatrix::maximally_mixed(1);
        match state_from_json(&rho.to_json()).unwrap() {
            LoadedState::Density(d) => assert_eq!(d.n_qubits(), 1),
            LoadedState::Pure(_) => panic!("detected wrong kind"),
        }
    }

    #[test]
    fn rejects_malformed_physics() {
        // bad norm
        let s = r#"{"n_qubits": 1, "amplitudes": [[1.0, 0.0], [1.0, 0.0]]}"#;
        assert!(PureState::from_json(s).is_err());
        // wrong amplitude count
        let s = r#"{"n_qubits": 2, "amplitudes": [[1.0, 0.0], [0.0, 0.0]]}"#;
        assert!(PureState::from_json(s).is_err());
        // trace two
        let s = r#"{"n_qubits": 1, "matrix": [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]]}"#;
        assert!(DensityMatrix::from_json(s).is_err());
        // ragged matrix
        let s = r#"{"n_qubits": 1, "matrix": [[[0.5, 0.0]], [[0.0, 0.0], [0.5, 0.0]]]}"#;
        assert!(DensityMatrix::from_json(s).is_err());
        // not a state object at all
        assert!(state_from_json(r#"{"foo": 1}"#).is_err());
        assert!(state_from_json("[1, 2]").is_err());
    }
}
