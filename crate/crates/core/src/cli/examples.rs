//! The three worked bipartite examples: two qubits, a qubit against a
//! well-localized qudit clock, and a qudit with high coherence order
//! against the same clock.

use std::fmt;
use std::str::FromStr;

use crate::error::{QrfError, Result};
use crate::qmat::{c, CMatrix, CVector, DensityOperator};
use crate::symmetry::ChargeSpectrum;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExampleKind {
    Qubit,
    Localization,
    CoherenceOrder,
}

impl FromStr for ExampleKind {
    type Err = QrfError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "qubit" => Ok(Self::Qubit),
            "localization" => Ok(Self::Localization),
            "coherence-order" => Ok(Self::CoherenceOrder),
            other => Err(QrfError::InvalidArgument(format!(
                "unknown example '{other}' (expected qubit, localization or coherence-order)"
            ))),
        }
    }
}

impl fmt::Display for ExampleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Qubit => "qubit",
            Self::Localization => "localization",
            Self::CoherenceOrder => "coherence-order",
        })
    }
}

/// Product input `|psi_S> ⊗ |psi_R>` with its charges.
#[derive(Debug, Clone)]
pub struct ExampleSetup {
    pub kind: ExampleKind,
    pub d: usize,
    pub psi_s: CVector,
    pub psi_r: CVector,
    pub rho_s: DensityOperator,
    pub rho_r: DensityOperator,
    pub s: ChargeSpectrum,
    pub r: ChargeSpectrum,
}

fn superposition(dim: usize, support: &[usize]) -> CVector {
    let amp = 1.0 / (support.len() as f64).sqrt();
    let mut v = CVector::zeros(dim);
    for &i in support {
        v[i] = c(amp, 0.0);
    }
    v
}

impl ExampleKind {
    /// Clock dimension actually used (the qubit example is fixed at 2).
    pub fn effective_d(self, d: usize) -> usize {
        match self {
            Self::Qubit => 2,
            _ => d,
        }
    }

    pub fn setup(self, d: usize) -> Result<ExampleSetup> {
        let d = self.effective_d(d);
        if d < 2 {
            return Err(QrfError::InvalidArgument(format!("d = {d} must be at least 2")));
        }
        let all: Vec<usize> = (0..d).collect();
        let (psi_s, psi_r, ds) = match self {
            Self::Qubit => (superposition(2, &[0, 1]), superposition(2, &[0, 1]), 2),
            Self::Localization => (superposition(2, &[0, 1]), superposition(d, &all), 2),
            Self::CoherenceOrder => (superposition(d, &[0, d - 1]), superposition(d, &all), d),
        };
        let rho_s = DensityOperator::pure(&psi_s, vec![ds])?;
        let rho_r = DensityOperator::pure(&psi_r, vec![d])?;
        Ok(ExampleSetup {
            kind: self,
            d,
            psi_s,
            psi_r,
            rho_s,
            rho_r,
            s: ChargeSpectrum::ladder(ds),
            r: ChargeSpectrum::ladder(d),
        })
    }

    /// Closed forms `(A(rho_S), A(rho_R), A(rho_SR), A(S:R))` in bits.
    pub fn closed_forms(self, d: usize) -> [f64; 4] {
        let d = self.effective_d(d) as f64;
        let log = d.log2();
        match self {
            Self::Qubit => [1.0, 1.0, 1.5, 0.5],
            Self::Localization => [1.0, log, log + 1.0 / d, 1.0 - 1.0 / d],
            Self::CoherenceOrder => [1.0, log, 1.0 + log - 1.0 / d, 1.0 / d],
        }
    }

    /// Globally twirled joint state written out term by term, in the
    /// library's `S ⊗ R` index order. The closed forms label kets as
    /// `|n_R, s>`; the entry for that label sits at `s * d + n`.
    pub fn closed_form_symmetric(self, d: usize) -> CMatrix {
        let d = self.effective_d(d);
        let (ds, s_hi) = match self {
            Self::CoherenceOrder => (d, d - 1),
            _ => (2, 1),
        };
        let dim = ds * d;
        let at = |n: usize, s: usize| s * d + n;
        let w = c(1.0 / (2 * d) as f64, 0.0);
        let mut m = CMatrix::zeros(dim, dim);
        for n in 0..d {
            m[(at(n, 0), at(n, 0))] += w;
            m[(at(n, s_hi), at(n, s_hi))] += w;
        }
        match self {
            Self::Qubit => {
                // |0,1><1,0| + |1,0><0,1|
                m[(at(0, 1), at(1, 0))] += w;
                m[(at(1, 0), at(0, 1))] += w;
            }
            Self::Localization => {
                // |n+1,0><n,1| + h.c., for labels inside the space
                for n in 0..d - 1 {
                    m[(at(n + 1, 0), at(n, 1))] += w;
                    m[(at(n, 1), at(n + 1, 0))] += w;
                }
            }
            Self::CoherenceOrder => {
                // |0,d-1><d-1,0| + |d-1,0><0,d-1|
                m[(at(0, d - 1), at(d - 1, 0))] += w;
                m[(at(d - 1, 0), at(0, d - 1))] += w;
            }
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_names() {
        assert_eq!("qubit".parse::<ExampleKind>().unwrap(), ExampleKind::Qubit);
        assert_eq!("coherence-order".parse::<ExampleKind>().unwrap(), ExampleKind::CoherenceOrder);
        assert!("bogus".parse::<ExampleKind>().is_err());
        assert_eq!(ExampleKind::Localization.to_string(), "localization");
    }

    #[test]
    fn closed_forms_have_unit_trace() {
        for kind in [ExampleKind::Qubit, ExampleKind::Localization, ExampleKind::CoherenceOrder] {
            for d in [2usize, 3, 8] {
                let m = kind.closed_form_symmetric(d);
                assert!((m.trace().re - 1.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn tracing_out_the_clock_leaves_half_identity() {
        for (kind, d) in [(ExampleKind::Qubit, 2), (ExampleKind::Localization, 5)] {
            let m = kind.closed_form_symmetric(d);
            let rho = DensityOperator::new(m, vec![2, d]).unwrap();
            let s = rho.partial_trace(0).unwrap();
            assert!((s.matrix()[(0, 0)].re - 0.5).abs() < 1e-14);
            assert!((s.matrix()[(1, 1)].re - 0.5).abs() < 1e-14);
            assert!(s.matrix()[(0, 1)].norm() < 1e-14);
        }
    }
}
