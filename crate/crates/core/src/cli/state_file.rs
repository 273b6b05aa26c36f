//! JSON state files: a density matrix as nested `[re, im]` pairs plus the
//! charges of its subsystems.
//!
//! ```json
//! {"dims":[2,2],"matrix":[[[0.25,0.0], ...], ...],
//!  "charges_s":[0,1],"charges_r":[0,1]}
//! ```
//!
//! `modulus` selects a cyclic group; `product: true` declares the state to
//! be `rho_S ⊗ rho_R`, which `measure --which mutual` requires.

use serde::{Deserialize, Serialize};

use crate::error::{QrfError, Result};
use crate::qmat::{c, CMatrix, DensityOperator};
use crate::symmetry::{total_charges, ChargeSpectrum};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub dims: Vec<usize>,
    pub matrix: Vec<Vec<[f64; 2]>>,
    pub charges_s: Vec<i64>,
    #[serde(default)]
    pub charges_r: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<u32>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub product: bool,
}

/// Parsed contents of a [`StateFile`].
#[derive(Debug, Clone)]
pub struct LoadedState {
    pub rho: DensityOperator,
    pub s: ChargeSpectrum,
    /// Present for bipartite files.
    pub r: Option<ChargeSpectrum>,
    pub product: bool,
}

impl LoadedState {
    /// Charges acting on the whole state: `s` alone, or the total charge.
    pub fn joint_charges(&self) -> Result<ChargeSpectrum> {
        match &self.r {
            Some(r) => total_charges(&self.s, r),
            None => Ok(self.s.clone()),
        }
    }
}

impl StateFile {
    pub fn from_matrix(
        m: &CMatrix,
        dims: Vec<usize>,
        s: &ChargeSpectrum,
        r: Option<&ChargeSpectrum>,
    ) -> Self {
        let matrix = (0..m.nrows())
            .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
            .collect();
        Self {
            dims,
            matrix,
            charges_s: s.charges().to_vec(),
            charges_r: r.map(|r| r.charges().to_vec()).unwrap_or_default(),
            modulus: s.modulus(),
            product: false,
        }
    }

    pub fn from_state(rho: &DensityOperator, s: &ChargeSpectrum, r: Option<&ChargeSpectrum>) -> Self {
        Self::from_matrix(rho.matrix(), rho.dims().to_vec(), s, r)
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        let n = self.matrix.len();
        if let Some(row) = self.matrix.iter().find(|row| row.len() != n) {
            return Err(QrfError::NotSquare { rows: n, cols: row.len() });
        }
        Ok(CMatrix::from_fn(n, n, |i, j| {
            let [re, im] = self.matrix[i][j];
            c(re, im)
        }))
    }

    /// Validates every invariant and returns the state with its charges.
    pub fn load(&self) -> Result<LoadedState> {
        let rho = DensityOperator::new(self.to_matrix()?, self.dims.clone())?;
        let s = ChargeSpectrum::new(self.charges_s.clone(), self.modulus)?;
        let r = match self.dims.len() {
            1 => {
                if !self.charges_r.is_empty() {
                    return Err(QrfError::InvalidArgument(
                        "charges_r given for a single-subsystem state".into(),
                    ));
                }
                None
            }
            2 => Some(ChargeSpectrum::new(self.charges_r.clone(), self.modulus)?),
            n => {
                return Err(QrfError::InvalidArgument(format!(
                    "state files hold one or two subsystems, found {n}"
                )))
            }
        };
        if s.len() != self.dims[0] {
            return Err(QrfError::DimensionMismatch { expected: self.dims[0], found: s.len() });
        }
        if let Some(r) = &r {
            if r.len() != self.dims[1] {
                return Err(QrfError::DimensionMismatch { expected: self.dims[1], found: r.len() });
            }
        }
        Ok(LoadedState { rho, s, r, product: self.product })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("state files always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| QrfError::InvalidArgument(format!("malformed state file: {e}")))
    }
}
