//! Charge-graded U(1) and Z_d actions.
//!
//! A subsystem carries a [`ChargeSpectrum`]: one integer charge per basis
//! index, so the group acts as `U(theta) = diag(exp(-i c_j theta))`. The
//! uniform twirl over the group is realized three ways that must agree:
//! projection onto charge sectors ([`dephase`]), an equally spaced angle
//! average ([`twirl_quadrature`]) and a weighted finite design
//! ([`FiniteDesign::average`]).

use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::error::{QrfError, Result};
use crate::qmat::{c, CMatrix, CVector, DensityOperator, HermitianOperator};

/// Integer charges per basis index. With a modulus the group is `Z_modulus`
/// and charges live in `[0, modulus)`; without one it is U(1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChargeSpectrum {
    charges: Vec<i64>,
    modulus: Option<u32>,
}

impl ChargeSpectrum {
    pub fn new(charges: Vec<i64>, modulus: Option<u32>) -> Result<Self> {
        match modulus {
            Some(0) => Err(QrfError::InvalidArgument("modulus must be positive".into())),
            Some(m) => Ok(Self {
                charges: charges.into_iter().map(|q| q.rem_euclid(m as i64)).collect(),
                modulus,
            }),
            None => Ok(Self { charges, modulus }),
        }
    }

    pub fn u1(charges: Vec<i64>) -> Self {
        Self { charges, modulus: None }
    }

    pub fn cyclic(charges: Vec<i64>, modulus: u32) -> Result<Self> {
        Self::new(charges, Some(modulus))
    }

    /// `0, 1, ..., d-1`.
    pub fn ladder(d: usize) -> Self {
        Self::u1((0..d as i64).collect())
    }

    /// Reads charges off a diagonal Hamiltonian as `round(h_jj / unit)`.
    /// Rejects off-diagonal entries and eigenvalues further than 1e-9 (in
    /// units of `unit`) from an integer multiple.
    pub fn from_diagonal_hamiltonian(
        h: &HermitianOperator,
        unit: f64,
        modulus: Option<u32>,
    ) -> Result<Self> {
        if !(unit.is_finite() && unit > 0.0) {
            return Err(QrfError::InvalidArgument(format!("unit {unit} must be positive")));
        }
        let m = h.matrix();
        let n = m.nrows();
        for i in 0..n {
            for j in 0..n {
                if i != j && m[(i, j)].norm() > 1e-12 {
                    return Err(QrfError::InvalidArgument(
                        "Hamiltonian is not diagonal in the computational basis".into(),
                    ));
                }
            }
        }
        let mut charges = Vec::with_capacity(n);
        for i in 0..n {
            let value = m[(i, i)].re;
            let ratio = value / unit;
            let q = ratio.round();
            if (ratio - q).abs() > 1e-9 {
                return Err(QrfError::Incommensurate { value, unit });
            }
            charges.push(q as i64);
        }
        Self::new(charges, modulus)
    }

    pub fn charges(&self) -> &[i64] {
        &self.charges
    }

    pub fn modulus(&self) -> Option<u32> {
        self.modulus
    }

    pub fn len(&self) -> usize {
        self.charges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.charges.is_empty()
    }

    /// `max - min` over the charges; 0 for an empty spectrum.
    pub fn span(&self) -> i64 {
        match (self.charges.iter().min(), self.charges.iter().max()) {
            (Some(lo), Some(hi)) => hi - lo,
            _ => 0,
        }
    }

    /// Generator `sum_j c_j |j><j|` in units of the group angle.
    pub fn generator(&self) -> HermitianOperator {
        let values: Vec<f64> = self.charges.iter().map(|&q| q as f64).collect();
        HermitianOperator::from_diagonal(&values)
    }
}

/// Charge of joint index `(i, j)` is `s_i + r_j`, reduced mod the shared
/// modulus if there is one. Index order matches [`crate::qmat::kron`].
pub fn total_charges(s: &ChargeSpectrum, r: &ChargeSpectrum) -> Result<ChargeSpectrum> {
    if s.modulus != r.modulus {
        return Err(QrfError::ModulusMismatch { left: s.modulus, right: r.modulus });
    }
    let mut out = Vec::with_capacity(s.len() * r.len());
    for &a in &s.charges {
        for &b in &r.charges {
            out.push(a + b);
        }
    }
    ChargeSpectrum::new(out, s.modulus)
}

/// Partition of basis indices into sectors of equal label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectorDecomposition {
    labels: Vec<i64>,
    sectors: BTreeMap<i64, Vec<usize>>,
}

impl SectorDecomposition {
    pub fn from_labels(labels: Vec<i64>) -> Self {
        let mut sectors: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
        for (i, &l) in labels.iter().enumerate() {
            sectors.entry(l).or_default().push(i);
        }
        Self { labels, sectors }
    }

    /// Joint decomposition labeled by local sector pairs `(m, n)`; the
    /// sectors are `H_m^S ⊗ H_n^R`.
    pub fn product(s: &SectorDecomposition, r: &SectorDecomposition) -> Self {
        let rank = |dec: &SectorDecomposition| -> BTreeMap<i64, i64> {
            dec.sectors.keys().enumerate().map(|(k, &l)| (l, k as i64)).collect()
        };
        let (rs, rr) = (rank(s), rank(r));
        let width = r.sectors.len().max(1) as i64;
        let mut labels = Vec::with_capacity(s.dim() * r.dim());
        for a in &s.labels {
            for b in &r.labels {
                labels.push(rs[a] * width + rr[b]);
            }
        }
        Self::from_labels(labels)
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[i64] {
        &self.labels
    }

    pub fn sector_count(&self) -> usize {
        self.sectors.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &[usize])> {
        self.sectors.iter().map(|(&l, v)| (l, v.as_slice()))
    }

    pub fn sector_sizes(&self) -> Vec<usize> {
        self.sectors.values().map(Vec::len).collect()
    }

    pub fn projector(&self, label: i64) -> CMatrix {
        let n = self.dim();
        let mut p = CMatrix::zeros(n, n);
        if let Some(idx) = self.sectors.get(&label) {
            for &i in idx {
                p[(i, i)] = c(1.0, 0.0);
            }
        }
        p
    }

    pub fn projectors(&self) -> Vec<(i64, CMatrix)> {
        self.sectors.keys().map(|&l| (l, self.projector(l))).collect()
    }

    /// Block of `m` restricted to sector `label`.
    pub fn block(&self, m: &CMatrix, label: i64) -> CMatrix {
        let idx = self.sectors.get(&label).map(Vec::as_slice).unwrap_or(&[]);
        CMatrix::from_fn(idx.len(), idx.len(), |a, b| m[(idx[a], idx[b])])
    }
}

pub fn sectors(charges: &ChargeSpectrum) -> SectorDecomposition {
    SectorDecomposition::from_labels(charges.charges.clone())
}

fn check_dim(rho: &DensityOperator, expected: usize) -> Result<()> {
    if rho.dim() != expected {
        return Err(QrfError::DimensionMismatch { expected, found: rho.dim() });
    }
    Ok(())
}

/// `sum_k P_k rho P_k`: drops every entry that couples different sectors.
pub fn dephase(rho: &DensityOperator, dec: &SectorDecomposition) -> Result<DensityOperator> {
    check_dim(rho, dec.dim())?;
    let m = rho.matrix();
    let l = &dec.labels;
    let out = CMatrix::from_fn(m.nrows(), m.ncols(), |i, j| {
        if l[i] == l[j] { m[(i, j)] } else { c(0.0, 0.0) }
    });
    Ok(DensityOperator::from_map_output(out, rho.dims().to_vec()))
}

/// `sum_{m,n} (P_m ⊗ P_n) rho (P_m ⊗ P_n)`, the independent local twirls.
pub fn dephase_local(
    rho: &DensityOperator,
    s: &SectorDecomposition,
    r: &SectorDecomposition,
) -> Result<DensityOperator> {
    check_dim(rho, s.dim() * r.dim())?;
    dephase(rho, &SectorDecomposition::product(s, r))
}

/// `diag(exp(-i c_j theta))`.
pub fn phase_unitary(charges: &ChargeSpectrum, theta: f64) -> CMatrix {
    let n = charges.len();
    let mut u = CMatrix::zeros(n, n);
    for (j, &q) in charges.charges.iter().enumerate() {
        u[(j, j)] = c(0.0, -(q as f64) * theta).exp();
    }
    u
}

pub fn act_on_vector(v: &CVector, charges: &ChargeSpectrum, theta: f64) -> Result<CVector> {
    if v.len() != charges.len() {
        return Err(QrfError::DimensionMismatch { expected: charges.len(), found: v.len() });
    }
    Ok(CVector::from_fn(v.len(), |j, _| {
        v[j] * c(0.0, -(charges.charges[j] as f64) * theta).exp()
    }))
}

/// `U(theta) rho U(theta)^dag` with `U` the diagonal phase unitary.
pub fn group_action(
    rho: &DensityOperator,
    charges: &ChargeSpectrum,
    theta: f64,
) -> Result<DensityOperator> {
    check_dim(rho, charges.len())?;
    let q = &charges.charges;
    let m = rho.matrix();
    let out = CMatrix::from_fn(m.nrows(), m.ncols(), |a, b| {
        m[(a, b)] * c(0.0, -((q[a] - q[b]) as f64) * theta).exp()
    });
    Ok(DensityOperator::from_map_output(out, rho.dims().to_vec()))
}

fn weighted_average(
    rho: &DensityOperator,
    charges: &ChargeSpectrum,
    points: &[f64],
    weights: &[f64],
) -> Result<DensityOperator> {
    check_dim(rho, charges.len())?;
    let n = rho.dim();
    let mut acc = CMatrix::zeros(n, n);
    // fixed summation order: results do not depend on scheduling
    for (&theta, &w) in points.iter().zip(weights) {
        let rotated = group_action(rho, charges, theta)?;
        acc += rotated.matrix() * c(w, 0.0);
    }
    Ok(DensityOperator::from_map_output(acc, rho.dims().to_vec()))
}

/// `(1/N) sum_j U(2 pi j / N) rho U^dag`. Exact for U(1) when `N > span`;
/// for `Z_m` the angles must be group elements, so `N` must be a multiple
/// of `m`.
pub fn twirl_quadrature(
    rho: &DensityOperator,
    charges: &ChargeSpectrum,
    n_points: usize,
) -> Result<DensityOperator> {
    let span = charges.span();
    match charges.modulus {
        Some(m) if n_points == 0 || !n_points.is_multiple_of(m as usize) => {
            return Err(QrfError::InvalidArgument(format!(
                "{n_points} quadrature points are not a multiple of the group order {m}"
            )));
        }
        None if (n_points as i64) <= span => {
            return Err(QrfError::TooFewPoints { points: n_points, span });
        }
        _ => {}
    }
    let points: Vec<f64> = (0..n_points).map(|j| 2.0 * PI * j as f64 / n_points as f64).collect();
    let weights = vec![1.0 / n_points as f64; n_points];
    weighted_average(rho, charges, &points, &weights)
}

/// Finite set of group elements whose weighted average reproduces the
/// uniform twirl on every state.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteDesign {
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
}

impl FiniteDesign {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn average(&self, rho: &DensityOperator, charges: &ChargeSpectrum) -> Result<DensityOperator> {
        weighted_average(rho, charges, &self.points, &self.weights)
    }
}

/// Minimal equally weighted design: `span + 1` equally spaced angles for
/// U(1), or all `m` elements of `Z_m`.
pub fn finite_design(charges: &ChargeSpectrum) -> FiniteDesign {
    let n = match charges.modulus {
        Some(m) => m as usize,
        None => charges.span() as usize + 1,
    };
    FiniteDesign {
        points: (0..n).map(|j| 2.0 * PI * j as f64 / n as f64).collect(),
        weights: vec![1.0 / n as f64; n],
    }
}
