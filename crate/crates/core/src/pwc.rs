//! Page-Wootters clock mechanism on a finite cyclic clock.
//!
//! The clock is the Peres-Salecker-Wigner qudit: `H_R = sum_m (2 pi m / d)
//! |m><m|`, pointer states `|k> = d^{-1/2} sum_m exp(-2 pi i m k / d) |m>`,
//! so `U_R(1) = exp(-i H_R)` advances the pointer by one tick and
//! `U_R(d) = 1`. History states live in the zero total-charge sector taken
//! modulo `d`, which makes relational dynamics exact at every tick.
//!
//! State comparisons that report fidelities are insensitive to global
//! phase; the Schrödinger residual compares vectors directly because the
//! projection construction fixes the phase.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{QrfError, Result};
use crate::qmat::{c, kron, kron_vec, outer, CMatrix, CVector, HermitianOperator};
use crate::symmetry::{act_on_vector, group_action, sectors, total_charges, ChargeSpectrum};
use crate::qmat::DensityOperator;

/// Below this `|sin(phi/2)|` the Dirichlet kernel is evaluated by its limit.
pub const DIRICHLET_SWITCH: f64 = 1e-8;

/// Finite cyclic clock with Hamiltonian, pointer basis and clock operator.
#[derive(Debug, Clone)]
pub struct ClockModel {
    d: usize,
    h_r: HermitianOperator,
    time_basis: CMatrix,
    t_r: HermitianOperator,
    charges: ChargeSpectrum,
}

pub fn psw_clock(d: usize) -> Result<ClockModel> {
    if d < 2 {
        return Err(QrfError::InvalidArgument(format!("clock dimension {d} must be at least 2")));
    }
    let energies: Vec<f64> = (0..d).map(|m| 2.0 * PI * m as f64 / d as f64).collect();
    let h_r = HermitianOperator::from_diagonal(&energies);
    let norm = 1.0 / (d as f64).sqrt();
    let time_basis = CMatrix::from_fn(d, d, |m, k| {
        let phase = -2.0 * PI * ((m * k) % d) as f64 / d as f64;
        c(0.0, phase).exp() * norm
    });
    let ticks: Vec<f64> = (0..d).map(|k| k as f64).collect();
    let t_r = HermitianOperator::new(
        &time_basis * crate::qmat::diag_real(&ticks) * time_basis.adjoint(),
        vec![d],
    )?;
    let charges = ChargeSpectrum::cyclic((0..d as i64).collect(), d as u32)?;
    Ok(ClockModel { d, h_r, time_basis, t_r, charges })
}

impl ClockModel {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn h_r(&self) -> &HermitianOperator {
        &self.h_r
    }

    /// Columns are the pointer states `|k>` in the energy basis.
    pub fn time_basis(&self) -> &CMatrix {
        &self.time_basis
    }

    pub fn t_r(&self) -> &HermitianOperator {
        &self.t_r
    }

    /// Energy quantum numbers `0..d` modulo `d`.
    pub fn charges(&self) -> &ChargeSpectrum {
        &self.charges
    }

    /// Energy of one charge unit, `2 pi / d`.
    pub fn tick_energy(&self) -> f64 {
        2.0 * PI / self.d as f64
    }

    pub fn time_state(&self, k: usize) -> CVector {
        self.time_basis.column(k % self.d).into_owned()
    }

    /// `U_R(t) = exp(-i H_R t)`.
    pub fn evolution(&self, t: f64) -> CMatrix {
        let d = self.d;
        CMatrix::from_fn(d, d, |i, j| {
            if i == j { c(0.0, -2.0 * PI * i as f64 * t / d as f64).exp() } else { c(0.0, 0.0) }
        })
    }

    /// Orbit of the zero-hour state: `U_R(g) |k=0>`.
    pub fn orbit_state(&self, g: f64) -> CVector {
        self.evolution(g) * self.time_state(0)
    }

    /// `[T_R, H_R]`.
    pub fn commutator(&self) -> CMatrix {
        let (t, h) = (self.t_r.matrix(), self.h_r.matrix());
        t * h - h * t
    }
}

/// Two-level clock with the hour labels 12h (`|+>`) and 6h (`|->`).
#[derive(Debug, Clone)]
pub struct QubitClock {
    pub clock: ClockModel,
}

pub fn qubit_clock() -> QubitClock {
    QubitClock { clock: psw_clock(2).expect("d = 2 is valid") }
}

impl QubitClock {
    pub const HOURS: [&'static str; 2] = ["12h", "6h"];

    /// Label of the pointer state closest to `v`.
    pub fn hour(&self, v: &CVector) -> &'static str {
        let o0 = (self.clock.time_state(0).adjoint() * v)[(0, 0)].norm();
        let o1 = (self.clock.time_state(1).adjoint() * v)[(0, 0)].norm();
        if o0 >= o1 { Self::HOURS[0] } else { Self::HOURS[1] }
    }

    /// `[sigma_z, sigma_x] = 2 i sigma_y`. Conventions that write spin
    /// operators as `sigma / 2` quote this as `i sigma_y`; either way it is
    /// not proportional to the identity.
    pub fn pauli_commutator(&self) -> CMatrix {
        let z = crate::qmat::diag_real(&[1.0, -1.0]);
        let x = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        &z * &x - &x * &z
    }

    /// `[H_R, T_R]` of the underlying clock.
    pub fn hr_tr_commutator(&self) -> CMatrix {
        -self.clock.commutator()
    }
}

/// Pointer-basis Gaussian
/// `sum_k exp(-delta_k^2 / (4 width^2)) exp(i pi delta_k) |k>`, with
/// `delta_k = k - center` wrapped into `[-d/2, d/2)`, returned normalized
/// in the energy basis. The phase centres the mean energy at `d/2`, away
/// from the ends of the spectrum where `[T_R, H_R]` is far from `i`.
pub fn gaussian_clock_state(clock: &ClockModel, center: f64, width: f64) -> Result<CVector> {
    let d = clock.d as f64;
    if !(width > 0.0 && width < d / 4.0) {
        return Err(QrfError::InvalidArgument(format!("width {width} outside (0, d/4)")));
    }
    if !(0.0..d).contains(&center) {
        return Err(QrfError::InvalidArgument(format!("center {center} outside [0, d)")));
    }
    let amps: Vec<Complex64> = (0..clock.d)
        .map(|k| {
            let delta = (k as f64 - center + d / 2.0).rem_euclid(d) - d / 2.0;
            c(0.0, PI * delta).exp() * (-delta * delta / (4.0 * width * width)).exp()
        })
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    let coeffs = CVector::from_iterator(clock.d, amps.iter().map(|a| a / norm));
    Ok(clock.time_basis() * coeffs)
}

/// `<psi| [T_R, H_R] |psi>`.
pub fn clock_commutator_expectation(clock: &ClockModel, psi: &CVector) -> Complex64 {
    (psi.adjoint() * clock.commutator() * psi)[(0, 0)]
}

/// Angle representation `psi(theta) = (2 pi)^{-1/2} sum_m v_m exp(i m theta)`
/// of a vector given in the energy basis.
pub fn angle_amplitude(state: &CVector, theta: f64) -> Complex64 {
    let norm = 1.0 / (2.0 * PI).sqrt();
    state
        .iter()
        .enumerate()
        .map(|(m, v)| v * c(0.0, m as f64 * theta).exp())
        .sum::<Complex64>()
        * norm
}

/// `(2 pi d)^{-1/2} sin(d phi / 2) / sin(phi / 2)` with
/// `phi = theta - 2 pi k / d`, the real kernel of `<theta|k>`. At the
/// removable singularities the limit `d (-1)^{(d-1) j}` of the ratio is
/// used.
pub fn dirichlet_closed_form(d: usize, k: usize, theta: f64) -> f64 {
    let phi = theta - 2.0 * PI * k as f64 / d as f64;
    let norm = 1.0 / (2.0 * PI * d as f64).sqrt();
    let den = (phi / 2.0).sin();
    if den.abs() < DIRICHLET_SWITCH {
        let j = (phi / (2.0 * PI)).round() as i64;
        let sign = if ((d as i64 - 1) * j).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        return norm * d as f64 * sign;
    }
    norm * (d as f64 * phi / 2.0).sin() / den
}

/// Phase relating `<theta|k>` to [`dirichlet_closed_form`]:
/// `<theta|k> = exp(i (d-1) phi / 2) * dirichlet_closed_form(d, k, theta)`.
pub fn pointer_phase(d: usize, k: usize, theta: f64) -> Complex64 {
    let phi = theta - 2.0 * PI * k as f64 / d as f64;
    c(0.0, (d as f64 - 1.0) * phi / 2.0).exp()
}

/// `|<phi_R(0)| U(theta) |phi_R(0)>|` for the uniform superposition under
/// the integer-charge action `diag(exp(-i m theta))`.
pub fn overlap_decay(clock: &ClockModel, theta: f64) -> f64 {
    let zero = clock.time_state(0);
    let ladder = ChargeSpectrum::ladder(clock.d);
    let moved = act_on_vector(&zero, &ladder, theta).expect("matching dimension");
    (zero.adjoint() * moved)[(0, 0)].norm()
}

/// Pure state on `S ⊗ R` inside the zero total-charge sector (mod `d`).
#[derive(Debug, Clone)]
pub struct HistoryState {
    vector: CVector,
    clock: ClockModel,
    h_s: HermitianOperator,
    s_charges: ChargeSpectrum,
    amplitudes: Vec<f64>,
}

/// `v ∝ Pi_0 (psi_S0 ⊗ |k=0>)` with `H_S = diag(2 pi s_j / d)`.
pub fn history_from_projection(
    psi_s0: &CVector,
    s_charges: &ChargeSpectrum,
    clock: &ClockModel,
) -> Result<HistoryState> {
    if s_charges.modulus() != Some(clock.d as u32) {
        return Err(QrfError::ModulusMismatch { left: s_charges.modulus(), right: Some(clock.d as u32) });
    }
    if psi_s0.len() != s_charges.len() {
        return Err(QrfError::DimensionMismatch { expected: s_charges.len(), found: psi_s0.len() });
    }
    let product = kron_vec(psi_s0, &clock.time_state(0));
    let total = total_charges(s_charges, &clock.charges)?;
    let projected = CVector::from_fn(product.len(), |i, _| {
        if total.charges()[i] == 0 { product[i] } else { c(0.0, 0.0) }
    });
    let norm = projected.norm();
    if norm < 1e-12 {
        return Err(QrfError::ZeroProjection);
    }
    let energies: Vec<f64> =
        s_charges.charges().iter().map(|&q| q as f64 * clock.tick_energy()).collect();
    HistoryState::new(projected / c(norm, 0.0), clock.clone(), HermitianOperator::from_diagonal(&energies), s_charges.clone())
}

impl HistoryState {
    fn new(vector: CVector, clock: ClockModel, h_s: HermitianOperator, s_charges: ChargeSpectrum) -> Result<Self> {
        let mut h = Self { vector, clock, h_s, s_charges, amplitudes: Vec::new() };
        h.amplitudes = (0..h.clock.d)
            .map(|k| h.relational_state(k).map(|(_, w)| w.sqrt()))
            .collect::<Result<_>>()?;
        Ok(h)
    }

    pub fn vector(&self) -> &CVector {
        &self.vector
    }

    pub fn clock(&self) -> &ClockModel {
        &self.clock
    }

    pub fn h_s(&self) -> &HermitianOperator {
        &self.h_s
    }

    pub fn s_charges(&self) -> &ChargeSpectrum {
        &self.s_charges
    }

    /// `c_t`: norm of the relational state at each tick.
    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub fn system_dim(&self) -> usize {
        self.s_charges.len()
    }

    fn total(&self) -> ChargeSpectrum {
        total_charges(&self.s_charges, &self.clock.charges).expect("moduli agree by construction")
    }

    /// `<k|_R v`, unnormalized, with its squared norm.
    pub fn relational_state(&self, k: usize) -> Result<(CVector, f64)> {
        let d = self.clock.d;
        if k >= d {
            return Err(QrfError::InvalidArgument(format!("tick {k} outside 0..{d}")));
        }
        let pointer = self.clock.time_basis.column(k);
        let psi = CVector::from_fn(self.system_dim(), |j, _| {
            (0..d).map(|m| pointer[m].conj() * self.vector[j * d + m]).sum()
        });
        let w = psi.norm_squared();
        Ok((psi, w))
    }

    /// `||Pi_0 v - v||`.
    pub fn constraint_residual(&self) -> f64 {
        let total = self.total();
        self.vector
            .iter()
            .zip(total.charges())
            .filter(|(_, &q)| q != 0)
            .map(|(x, _)| x.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Max-entry norm of `[H_tot, |v><v|]` for the `Z_d` generator.
    pub fn constraint_commutator(&self) -> f64 {
        let generator = self.total().generator();
        crate::qmat::commutator_norm(&generator, &outer(&self.vector)).expect("matching dimension")
    }

    pub fn density(&self) -> DensityOperator {
        DensityOperator::pure(&self.vector, vec![self.system_dim(), self.clock.d])
            .expect("unit vector")
    }

    /// `exp(-i H_S t) psi`.
    pub fn evolve_system(&self, psi: &CVector, t: f64) -> CVector {
        let h = self.h_s.matrix();
        CVector::from_fn(psi.len(), |j, _| psi[j] * c(0.0, -h[(j, j)].re * t).exp())
    }

    /// Largest distance between the normalized relational state at tick
    /// `k` and the normalized `exp(-i H_S k) psi_S(0)`.
    pub fn schrodinger_residual(&self) -> f64 {
        let unit = |v: CVector| {
            let n = v.norm();
            if n > 0.0 { v / c(n, 0.0) } else { v }
        };
        let psi0 = unit(self.relational_state(0).expect("tick 0").0);
        (0..self.clock.d)
            .map(|k| {
                let actual = unit(self.relational_state(k).expect("tick in range").0);
                let expected = self.evolve_system(&psi0, k as f64);
                (actual - expected).norm()
            })
            .fold(0.0, f64::max)
    }

    /// `|<psi_S(k)|exp(-i H_S k) psi_S(0)>|^2` for every tick.
    pub fn relational_fidelities(&self) -> Vec<f64> {
        let (psi0, w0) = self.relational_state(0).expect("tick 0");
        (0..self.clock.d)
            .map(|k| {
                let (psi, w) = self.relational_state(k).expect("tick in range");
                let expected = self.evolve_system(&psi0, k as f64);
                let denom = w * w0;
                if denom == 0.0 { 0.0 } else { (psi.adjoint() * expected)[(0, 0)].norm_sqr() / denom }
            })
            .collect()
    }

    /// Negative control: the relational state at tick `k` is replaced by
    /// that of tick `k + 1`. The result violates the charge constraint.
    pub fn corrupt_tick(&self, k: usize) -> Result<HistoryState> {
        let d = self.clock.d;
        if k >= d {
            return Err(QrfError::InvalidArgument(format!("tick {k} outside 0..{d}")));
        }
        // v = sum_t psi_S(t) ⊗ |t>
        let mut v = CVector::zeros(self.vector.len());
        for t in 0..d {
            let source = if t == k { (k + 1) % d } else { t };
            let (psi, _) = self.relational_state(source)?;
            v += kron_vec(&psi, &self.clock.time_state(t));
        }
        let n = v.norm();
        HistoryState::new(v / c(n, 0.0), self.clock.clone(), self.h_s.clone(), self.s_charges.clone())
    }
}

/// Eigenspace projectors of `observable`, eigenvalues ascending and merged
/// when closer than 1e-9.
pub fn outcome_projectors(observable: &HermitianOperator) -> Vec<(f64, CMatrix)> {
    let spec = observable.eigh();
    let n = observable.dim();
    let mut out: Vec<(f64, CMatrix)> = Vec::new();
    for (i, &lambda) in spec.eigenvalues.iter().enumerate() {
        let col = spec.eigenvectors.column(i).into_owned();
        let p = outer(&col);
        match out.last_mut() {
            Some((value, proj)) if (lambda - *value).abs() < 1e-9 => *proj += p,
            _ => out.push((lambda, p)),
        }
    }
    debug_assert!(out.iter().all(|(_, p)| p.nrows() == n));
    out
}

fn outcome_projector(observable: &HermitianOperator, outcome: usize) -> Result<CMatrix> {
    let projectors = outcome_projectors(observable);
    let count = projectors.len();
    projectors
        .into_iter()
        .nth(outcome)
        .map(|(_, p)| p)
        .ok_or_else(|| QrfError::InvalidArgument(format!("outcome {outcome} outside 0..{count}")))
}

/// Conditional probability of outcome `outcome` of `observable` given the
/// clock reads `k`:
/// `sum_T tr[P_o(T) P_k(T) rho P_k(T)] / sum_T tr[P_k(T) rho]`, with `T`
/// running over the `d` elements of the cyclic time group.
pub fn conditional_probability(
    h: &HistoryState,
    observable: &HermitianOperator,
    outcome: usize,
    k: usize,
) -> Result<f64> {
    let d = h.clock.d;
    let ds = h.system_dim();
    if observable.dim() != ds {
        return Err(QrfError::DimensionMismatch { expected: ds, found: observable.dim() });
    }
    if k >= d {
        return Err(QrfError::InvalidArgument(format!("tick {k} outside 0..{d}")));
    }
    let p_o = kron(&outcome_projector(observable, outcome)?, &CMatrix::identity(d, d));
    let p_k = kron(&CMatrix::identity(ds, ds), &outer(&h.clock.time_state(k)));
    let rho = h.density();
    let total = h.total();
    let (mut num, mut den) = (0.0, 0.0);
    for t in 0..d {
        // Heisenberg projectors at time T, moved onto the state
        let rho_t = group_action(&rho, &total, 2.0 * PI * t as f64 / d as f64)?;
        num += (&p_o * &p_k * rho_t.matrix() * &p_k).trace().re;
        den += (&p_k * rho_t.matrix()).trace().re;
    }
    if den < 1e-14 {
        return Err(QrfError::UndefinedConditional { tick: k });
    }
    Ok(num / den)
}

/// `<psi_S(k)| P_o |psi_S(k)> / <psi_S(k)|psi_S(k)>`.
pub fn born_probability(h: &HistoryState, observable: &HermitianOperator, outcome: usize, k: usize) -> Result<f64> {
    let p = outcome_projector(observable, outcome)?;
    let (psi, w) = h.relational_state(k)?;
    if w < 1e-14 {
        return Err(QrfError::UndefinedConditional { tick: k });
    }
    Ok((psi.adjoint() * p * &psi)[(0, 0)].re / w)
}

/// True when `dephase` over the total charge leaves `|v><v|` unchanged.
pub fn is_symmetric(h: &HistoryState, tol: f64) -> bool {
    let rho = h.density();
    let out = crate::symmetry::dephase(&rho, &sectors(&h.total())).expect("matching dimension");
    crate::qmat::max_abs_diff(out.matrix(), rho.matrix()) <= tol
}
