//! Asymmetry quantifiers built on the charge-sector twirls.
//!
//! * [`asymmetry`]: relative entropy of asymmetry `S(G(rho)) - S(rho)`.
//! * [`mutual_asymmetry`]: `A(rho_S) + A(rho_R) - A(rho_S ⊗ rho_R)` for
//!   product states, with the joint term taken under the global action.
//! * [`mutual_asymmetry_relent`]: the same quantity as
//!   `S(Delta) - S(Pi)` and `S(Pi || Delta)`, where `Pi` dephases the total
//!   charge and `Delta` dephases both local charges.
//! * [`interaction_information`]: `I(S:R) - I(S:R|C)` on an explicit
//!   classical-quantum state whose register records the design angle.
//!
//! The definitions of mutual asymmetry and of a mutual reference frame are
//! stated for product states `rho_S ⊗ rho_R`. The relative-entropy form and
//! the interaction information accept correlated inputs, where they need
//! not coincide.

use crate::error::{QrfError, Result};
use crate::qmat::{
    block_entropy, c, relative_entropy, shannon_entropy, von_neumann_entropy, CMatrix,
    DensityOperator,
};
use crate::symmetry::{
    dephase, dephase_local, finite_design, group_action, sectors, total_charges, ChargeSpectrum,
    SectorDecomposition,
};

/// Decision threshold for "mutual asymmetry is nonzero".
pub const QRF_THRESHOLD: f64 = 1e-9;
/// Slack allowed on the bounds `0 <= A(S:R) <= min(A(S), A(R))`.
pub const BOUND_SLACK: f64 = 1e-9;

/// Entropy of `dephase(rho, dec)`, evaluated sector by sector.
pub fn dephased_entropy(rho: &DensityOperator, dec: &SectorDecomposition) -> Result<f64> {
    if rho.dim() != dec.dim() {
        return Err(QrfError::DimensionMismatch { expected: dec.dim(), found: rho.dim() });
    }
    let mut s = 0.0;
    for (label, _) in dec.iter() {
        s += block_entropy(&dec.block(rho.matrix(), label))?;
    }
    Ok(s)
}

/// Relative entropy of asymmetry, in bits.
pub fn asymmetry(rho: &DensityOperator, dec: &SectorDecomposition) -> Result<f64> {
    let twirled = dephased_entropy(rho, dec)?;
    Ok((twirled - von_neumann_entropy(rho)?).max(0.0))
}

fn check_pair(
    rho_s: &DensityOperator,
    rho_r: &DensityOperator,
    s: &ChargeSpectrum,
    r: &ChargeSpectrum,
) -> Result<()> {
    if rho_s.dim() != s.len() {
        return Err(QrfError::DimensionMismatch { expected: s.len(), found: rho_s.dim() });
    }
    if rho_r.dim() != r.len() {
        return Err(QrfError::DimensionMismatch { expected: r.len(), found: rho_r.dim() });
    }
    Ok(())
}

/// Asymmetry of `rho_S ⊗ rho_R` under the global action, without forming
/// the product matrix: each total-charge block is assembled from the
/// factors and `S(rho_S ⊗ rho_R) = S(rho_S) + S(rho_R)`.
pub fn product_asymmetry(
    rho_s: &DensityOperator,
    rho_r: &DensityOperator,
    s: &ChargeSpectrum,
    r: &ChargeSpectrum,
) -> Result<f64> {
    check_pair(rho_s, rho_r, s, r)?;
    let total = sectors(&total_charges(s, r)?);
    let dr = r.len();
    let (ms, mr) = (rho_s.matrix(), rho_r.matrix());
    let mut twirled = 0.0;
    for (_, idx) in total.iter() {
        let block = CMatrix::from_fn(idx.len(), idx.len(), |a, b| {
            let (i, j) = (idx[a], idx[b]);
            ms[(i / dr, j / dr)] * mr[(i % dr, j % dr)]
        });
        twirled += block_entropy(&block)?;
    }
    let local = von_neumann_entropy(rho_s)? + von_neumann_entropy(rho_r)?;
    Ok((twirled - local).max(0.0))
}

/// The three asymmetries entering mutual asymmetry, plus the result.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MutualAsymmetryParts {
    pub system: f64,
    pub reference: f64,
    pub joint: f64,
    pub mutual: f64,
}

pub fn mutual_asymmetry_parts(
    rho_s: &DensityOperator,
    rho_r: &DensityOperator,
    s: &ChargeSpectrum,
    r: &ChargeSpectrum,
) -> Result<MutualAsymmetryParts> {
    check_pair(rho_s, rho_r, s, r)?;
    let system = asymmetry(rho_s, &sectors(s))?;
    let reference = asymmetry(rho_r, &sectors(r))?;
    let joint = product_asymmetry(rho_s, rho_r, s, r)?;
    Ok(MutualAsymmetryParts { system, reference, joint, mutual: system + reference - joint })
}

/// `A(rho_S) + A(rho_R) - A(rho_S ⊗ rho_R)`; product-state regime.
pub fn mutual_asymmetry(
    rho_s: &DensityOperator,
    rho_r: &DensityOperator,
    s: &ChargeSpectrum,
    r: &ChargeSpectrum,
) -> Result<f64> {
    Ok(mutual_asymmetry_parts(rho_s, rho_r, s, r)?.mutual)
}

/// Mutual asymmetry evaluated on a joint state in two ways.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MutualAsymmetryForms {
    /// `S(Delta(rho)) - S(Pi(rho))`.
    pub entropy_difference: f64,
    /// `S(Pi(rho) || Delta(rho))`.
    pub relative_entropy: f64,
}

impl MutualAsymmetryForms {
    pub fn discrepancy(&self) -> f64 {
        (self.entropy_difference - self.relative_entropy).abs()
    }
}

fn joint_dims(rho_sr: &DensityOperator, s: &ChargeSpectrum, r: &ChargeSpectrum) -> Result<()> {
    if rho_sr.dim() != s.len() * r.len() {
        return Err(QrfError::DimensionMismatch { expected: s.len() * r.len(), found: rho_sr.dim() });
    }
    Ok(())
}

pub fn mutual_asymmetry_relent(
    rho_sr: &DensityOperator,
    s: &ChargeSpectrum,
    r: &ChargeSpectrum,
) -> Result<MutualAsymmetryForms> {
    joint_dims(rho_sr, s, r)?;
    let global = sectors(&total_charges(s, r)?);
    let (ls, lr) = (sectors(s), sectors(r));
    let local = SectorDecomposition::product(&ls, &lr);
    let pi = dephase(rho_sr, &global)?;
    let delta = dephase_local(rho_sr, &ls, &lr)?;
    let entropy_difference = dephased_entropy(rho_sr, &local)? - dephased_entropy(rho_sr, &global)?;
    let relative_entropy = relative_entropy(&pi, &delta)?;
    Ok(MutualAsymmetryForms { entropy_difference, relative_entropy })
}

/// Mutual asymmetry under time translations, i.e. with energy charges:
/// `S(Pi(rho) || Delta(rho))`.
pub fn mutual_coherence(rho_sr: &DensityOperator, s: &ChargeSpectrum, r: &ChargeSpectrum) -> Result<f64> {
    Ok(mutual_asymmetry_relent(rho_sr, s, r)?.relative_entropy)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CqEntry {
    pub probability: f64,
    pub angle: f64,
    /// `U(angle) rho_SR U(angle)^dag` under the global action.
    pub state: DensityOperator,
}

/// Which quantum parts accompany the register `C` in a block entropy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parts {
    None,
    S,
    R,
    SR,
}

/// Classical register of design angles, each paired with the rotated joint
/// state: `sum_i p_i |g_i><g_i| ⊗ U_{g_i}(rho_SR)`.
#[derive(Debug, Clone)]
pub struct CqState {
    pub entries: Vec<CqEntry>,
    pub base: DensityOperator,
    pub s: ChargeSpectrum,
    pub r: ChargeSpectrum,
}

pub fn build_cq_state(rho_sr: &DensityOperator, s: &ChargeSpectrum, r: &ChargeSpectrum) -> Result<CqState> {
    joint_dims(rho_sr, s, r)?;
    let total = total_charges(s, r)?;
    let design = finite_design(&total);
    let base = rho_sr.with_dims(vec![s.len(), r.len()])?;
    let entries = design
        .points
        .iter()
        .zip(&design.weights)
        .map(|(&angle, &probability)| {
            Ok(CqEntry { probability, angle, state: group_action(&base, &total, angle)? })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CqState { entries, base, s: s.clone(), r: r.clone() })
}

impl CqState {
    pub fn probabilities(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.probability).collect()
    }

    /// `tr_C` of the cq-state: the globally twirled joint state.
    pub fn averaged_state(&self) -> DensityOperator {
        let n = self.base.dim();
        let mut acc = CMatrix::zeros(n, n);
        for e in &self.entries {
            acc += e.state.matrix() * c(e.probability, 0.0);
        }
        DensityOperator::from_map_output(acc, self.base.dims().to_vec())
    }

    fn marginal(state: &DensityOperator, parts: Parts) -> Result<Option<DensityOperator>> {
        Ok(match parts {
            Parts::None => None,
            Parts::S => Some(state.partial_trace(0)?),
            Parts::R => Some(state.partial_trace(1)?),
            Parts::SR => Some(state.clone()),
        })
    }

    /// `S(Omega_XC)` by the joint entropy theorem:
    /// `H(p) + sum_i p_i S(entry_i restricted to X)`.
    pub fn block_entropy(&self, parts: Parts) -> Result<f64> {
        let mut s = shannon_entropy(&self.probabilities())?;
        for e in &self.entries {
            if let Some(m) = Self::marginal(&e.state, parts)? {
                s += e.probability * von_neumann_entropy(&m)?;
            }
        }
        Ok(s)
    }

    /// `S(Omega_XC)` from the explicit block-diagonal matrix on `C ⊗ X`.
    pub fn block_entropy_direct(&self, parts: Parts) -> Result<f64> {
        let n = self.entries.len();
        let blocks: Vec<CMatrix> = self
            .entries
            .iter()
            .map(|e| {
                let m = Self::marginal(&e.state, parts)?
                    .map(DensityOperator::into_matrix)
                    .unwrap_or_else(|| CMatrix::identity(1, 1));
                Ok(m * c(e.probability, 0.0))
            })
            .collect::<Result<_>>()?;
        let dx = blocks.first().map_or(1, |b| b.nrows());
        let mut full = CMatrix::zeros(n * dx, n * dx);
        for (i, b) in blocks.iter().enumerate() {
            full.view_mut((i * dx, i * dx), (dx, dx)).copy_from(b);
        }
        let omega = DensityOperator::new(full, vec![n * dx])?;
        von_neumann_entropy(&omega)
    }

    /// `I(S:R|C) = S(SC) + S(RC) - S(SRC) - S(C)`.
    pub fn conditional_mutual_information(&self) -> Result<f64> {
        Ok(self.block_entropy(Parts::S)? + self.block_entropy(Parts::R)?
            - self.block_entropy(Parts::SR)?
            - self.block_entropy(Parts::None)?)
    }

    /// `I(S:R)` on the averaged state.
    pub fn averaged_mutual_information(&self) -> Result<f64> {
        let omega = self.averaged_state();
        Ok(von_neumann_entropy(&omega.partial_trace(0)?)?
            + von_neumann_entropy(&omega.partial_trace(1)?)?
            - von_neumann_entropy(&omega)?)
    }

    /// Same register contents with the labels reordered.
    pub fn permuted(&self, order: &[usize]) -> CqState {
        CqState {
            entries: order.iter().map(|&i| self.entries[i].clone()).collect(),
            base: self.base.clone(),
            s: self.s.clone(),
            r: self.r.clone(),
        }
    }
}

/// `I(S:R) - I(S:R|C)`. Equals the mutual asymmetry for product base states
/// and can be negative for correlated ones.
pub fn interaction_information(cq: &CqState) -> Result<f64> {
    Ok(cq.averaged_mutual_information()? - cq.conditional_mutual_information()?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundsReport {
    pub lower_ok: bool,
    pub upper_ok: bool,
    pub value: f64,
    pub min_local: f64,
}

/// Checks `0 <= A(S:R) <= min(A(rho_S), A(rho_R))` with [`BOUND_SLACK`].
/// Violations are reported through the flags.
pub fn bounds_report(
    rho_s: &DensityOperator,
    rho_r: &DensityOperator,
    s: &ChargeSpectrum,
    r: &ChargeSpectrum,
) -> Result<BoundsReport> {
    let parts = mutual_asymmetry_parts(rho_s, rho_r, s, r)?;
    let min_local = parts.system.min(parts.reference);
    Ok(BoundsReport {
        lower_ok: parts.mutual >= -BOUND_SLACK,
        upper_ok: parts.mutual <= min_local + BOUND_SLACK,
        value: parts.mutual,
        min_local,
    })
}

/// Whether `(rho_S, rho_R)` act as reference frames for each other:
/// mutual asymmetry above [`QRF_THRESHOLD`].
pub fn is_mutual_qrf(
    rho_s: &DensityOperator,
    rho_r: &DensityOperator,
    s: &ChargeSpectrum,
    r: &ChargeSpectrum,
) -> Result<bool> {
    Ok(mutual_asymmetry(rho_s, rho_r, s, r)? > QRF_THRESHOLD)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::{diag_real, max_abs_diff, random, CVector};
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn plus() -> DensityOperator {
        DensityOperator::pure(&CVector::from_element(2, c(1.0, 0.0)), vec![2]).unwrap()
    }

    fn uniform(d: usize) -> DensityOperator {
        DensityOperator::pure(&CVector::from_element(d, c(1.0, 0.0)), vec![d]).unwrap()
    }

    fn qubit() -> ChargeSpectrum {
        ChargeSpectrum::ladder(2)
    }

    #[test]
    fn asymmetry_values() {
        assert_abs_diff_eq!(asymmetry(&plus(), &sectors(&qubit())).unwrap(), 1.0, epsilon = 1e-12);
        for d in [2usize, 3, 8, 17] {
            let a = asymmetry(&uniform(d), &sectors(&ChargeSpectrum::ladder(d))).unwrap();
            assert_abs_diff_eq!(a, (d as f64).log2(), epsilon = 1e-10);
        }
        let diag = DensityOperator::new(diag_real(&[0.2, 0.3, 0.5]), vec![3]).unwrap();
        assert_abs_diff_eq!(asymmetry(&diag, &sectors(&ChargeSpectrum::ladder(3))).unwrap(), 0.0);
    }

    #[test]
    fn qubit_pair_values() {
        let p = mutual_asymmetry_parts(&plus(), &plus(), &qubit(), &qubit()).unwrap();
        assert_abs_diff_eq!(p.system, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(p.reference, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(p.joint, 1.5, epsilon = 1e-12);
        assert_abs_diff_eq!(p.mutual, 0.5, epsilon = 1e-12);

        let joint = plus().tensor(&plus());
        let forms = mutual_asymmetry_relent(&joint, &qubit(), &qubit()).unwrap();
        assert_abs_diff_eq!(forms.entropy_difference, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(forms.relative_entropy, 0.5, epsilon = 1e-10);
        assert_abs_diff_eq!(mutual_coherence(&joint, &qubit(), &qubit()).unwrap(), 0.5, epsilon = 1e-10);
    }

    #[test]
    fn product_asymmetry_matches_dense_route() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let s = ChargeSpectrum::u1(vec![0, 2, 3]);
        let r = ChargeSpectrum::u1(vec![1, 0, 4, 2]);
        let rho_s = random::mixed_state(3, 2, &mut rng);
        let rho_r = random::pure_state(4, &mut rng);
        let fast = product_asymmetry(&rho_s, &rho_r, &s, &r).unwrap();
        let joint = rho_s.tensor(&rho_r);
        let dense = asymmetry(&joint, &sectors(&total_charges(&s, &r).unwrap())).unwrap();
        assert_abs_diff_eq!(fast, dense, epsilon = 1e-10);
    }

    #[test]
    fn symmetric_inputs_give_zero() {
        let diag = DensityOperator::new(diag_real(&[0.6, 0.4]), vec![2]).unwrap();
        let joint = diag.tensor(&plus());
        let forms = mutual_asymmetry_relent(&joint, &qubit(), &qubit()).unwrap();
        assert_abs_diff_eq!(forms.entropy_difference, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(forms.relative_entropy, 0.0, epsilon = 1e-10);
        assert!(!is_mutual_qrf(&diag, &plus(), &qubit(), &qubit()).unwrap());
        let cq = build_cq_state(&diag.tensor(&diag), &qubit(), &qubit()).unwrap();
        assert_abs_diff_eq!(interaction_information(&cq).unwrap(), 0.0, epsilon = 1e-10);
    }

    #[test]
    fn trivial_charges_are_not_a_frame() {
        let flat = ChargeSpectrum::u1(vec![0, 0]);
        assert!(!is_mutual_qrf(&plus(), &plus(), &flat, &flat).unwrap());
        assert!(is_mutual_qrf(&plus(), &plus(), &qubit(), &qubit()).unwrap());
    }

    #[test]
    fn cq_state_for_qubits() {
        let joint = plus().tensor(&plus());
        let cq = build_cq_state(&joint, &qubit(), &qubit()).unwrap();
        assert_eq!(cq.entries.len(), 3);
        let total = sectors(&total_charges(&qubit(), &qubit()).unwrap());
        let pi = dephase(&joint, &total).unwrap();
        assert!(max_abs_diff(cq.averaged_state().matrix(), pi.matrix()) < 1e-12);
        assert_abs_diff_eq!(interaction_information(&cq).unwrap(), 0.5, epsilon = 1e-10);
        for parts in [Parts::None, Parts::S, Parts::R, Parts::SR] {
            assert_abs_diff_eq!(
                cq.block_entropy(parts).unwrap(),
                cq.block_entropy_direct(parts).unwrap(),
                epsilon = 1e-10
            );
        }
    }

    #[test]
    fn cq_state_design_size_for_localization() {
        let d = 4;
        let joint = plus().tensor(&uniform(d));
        let cq = build_cq_state(&joint, &qubit(), &ChargeSpectrum::ladder(d)).unwrap();
        assert_eq!(cq.entries.len(), d + 1);
    }

    #[test]
    fn cq_state_of_symmetric_base_is_constant() {
        let joint = plus().tensor(&plus());
        let total = sectors(&total_charges(&qubit(), &qubit()).unwrap());
        let sym = dephase(&joint, &total).unwrap();
        let cq = build_cq_state(&sym, &qubit(), &qubit()).unwrap();
        for e in &cq.entries {
            assert!(max_abs_diff(e.state.matrix(), sym.matrix()) < 1e-14);
        }
    }

    #[test]
    fn bell_state_has_negative_interaction_information() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let v = CVector::from_vec(vec![c(h, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(h, 0.0)]);
        let bell = DensityOperator::pure(&v, vec![2, 2]).unwrap();
        let cq = build_cq_state(&bell, &qubit(), &qubit()).unwrap();
        assert_abs_diff_eq!(interaction_information(&cq).unwrap(), -1.0, epsilon = 1e-10);
    }

    #[test]
    fn bounds_examples() {
        let d = 8;
        let b = bounds_report(&plus(), &uniform(d), &qubit(), &ChargeSpectrum::ladder(d)).unwrap();
        assert_abs_diff_eq!(b.value, 7.0 / 8.0, epsilon = 1e-10);
        assert_abs_diff_eq!(b.min_local, 1.0, epsilon = 1e-10);
        assert!(b.lower_ok && b.upper_ok);

        let diag = DensityOperator::new(diag_real(&[0.3, 0.7]), vec![2]).unwrap();
        let b = bounds_report(&diag, &uniform(d), &qubit(), &ChargeSpectrum::ladder(d)).unwrap();
        assert_abs_diff_eq!(b.value, 0.0, epsilon = 1e-10);
        assert_abs_diff_eq!(b.min_local, 0.0, epsilon = 1e-10);
        assert!(b.lower_ok && b.upper_ok);

        // reference maximally mixed inside one degenerate sector
        let r = ChargeSpectrum::u1(vec![0, 2, 2, 2, 5]);
        let rho_r = DensityOperator::new(diag_real(&[0.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 0.0]), vec![5]).unwrap();
        let b = bounds_report(&plus(), &rho_r, &qubit(), &r).unwrap();
        assert_abs_diff_eq!(b.value, 0.0, epsilon = 1e-10);
        assert_abs_diff_eq!(asymmetry(&rho_r, &sectors(&r)).unwrap(), 0.0, epsilon = 1e-12);
        assert!(b.lower_ok && b.upper_ok);
    }

    #[test]
    fn dimension_errors() {
        let r = ChargeSpectrum::ladder(3);
        assert!(mutual_asymmetry(&plus(), &plus(), &qubit(), &r).is_err());
        assert!(mutual_asymmetry_relent(&plus(), &qubit(), &qubit()).is_err());
        let z = ChargeSpectrum::cyclic(vec![0, 1], 2).unwrap();
        assert!(matches!(
            mutual_asymmetry(&plus(), &plus(), &qubit(), &z),
            Err(QrfError::ModulusMismatch { .. })
        ));
    }
}
