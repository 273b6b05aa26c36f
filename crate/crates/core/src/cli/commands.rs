//! Command implementations. Each returns data; printing and exit codes are
//! handled by [`super::run`].

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use super::examples::ExampleKind;
use super::report::ReportRecord;
use super::state_file::StateFile;
use crate::error::{QrfError, Result};
use crate::measures::{
    asymmetry, build_cq_state, interaction_information, mutual_asymmetry, mutual_asymmetry_parts,
    mutual_asymmetry_relent,
};
use crate::pwc::{
    angle_amplitude, born_probability, conditional_probability, history_from_projection, psw_clock,
    HistoryState,
};
use crate::qmat::{c, kron, max_abs_diff, CMatrix, CVector, HermitianOperator};
use crate::symmetry::{
    dephase, dephase_local, finite_design, sectors, total_charges, twirl_quadrature, ChargeSpectrum,
};

/// Tolerance for analytic scalars.
pub const SCALAR_TOL: f64 = 1e-9;
/// Tolerance for entry-wise matrix comparisons against closed forms.
pub const MATRIX_TOL: f64 = 1e-12;
/// Largest total dimension accepted by commands that build dense joint
/// matrices.
pub const MAX_DENSE_DIM: usize = 2048;
/// Tolerance for declaring a file state a product of its marginals.
pub const PRODUCT_TOL: f64 = 1e-10;

fn parse_choice<T: Copy>(s: &str, options: &[(&str, T)], what: &str) -> Result<T> {
    options.iter().find(|(name, _)| *name == s).map(|(_, v)| *v).ok_or_else(|| {
        let names: Vec<&str> = options.iter().map(|(n, _)| *n).collect();
        QrfError::InvalidArgument(format!("unknown {what} '{s}' (expected one of {})", names.join(", ")))
    })
}

/// Golden run of a worked example: the three asymmetries and the mutual
/// asymmetry against their closed forms.
pub fn cmd_example(kind: ExampleKind, d: usize, tolerance: f64) -> Result<Vec<ReportRecord>> {
    let setup = kind.setup(d)?;
    let parts = mutual_asymmetry_parts(&setup.rho_s, &setup.rho_r, &setup.s, &setup.r)?;
    let expected = kind.closed_forms(setup.d);
    let inputs = format!("example={kind}, d={}", setup.d);
    let names = ["A_G(rho_S)", "A_G(rho_R)", "A_G(rho_SR)", "A_G(S:R)"];
    let values = [parts.system, parts.reference, parts.joint, parts.mutual];
    Ok(names
        .iter()
        .zip(values.iter().zip(expected))
        .map(|(name, (&v, e))| ReportRecord::checked(*name, v, e, inputs.clone(), tolerance))
        .collect())
}

#[derive(Debug, Clone, Serialize)]
pub struct SymmetricStateOutput {
    pub report: ReportRecord,
    pub state: StateFile,
}

/// Globally twirled joint state of an example, compared entry-wise with
/// its closed form.
pub fn cmd_symmetric_state(kind: ExampleKind, d: usize, tolerance: f64) -> Result<SymmetricStateOutput> {
    let setup = kind.setup(d)?;
    let dim = setup.s.len() * setup.r.len();
    if dim > MAX_DENSE_DIM {
        return Err(QrfError::InvalidArgument(format!(
            "joint dimension {dim} exceeds the dense limit {MAX_DENSE_DIM}"
        )));
    }
    let joint = setup.rho_s.tensor(&setup.rho_r);
    let total = total_charges(&setup.s, &setup.r)?;
    let twirled = dephase(&joint, &sectors(&total))?;
    let deviation = max_abs_diff(twirled.matrix(), &kind.closed_form_symmetric(setup.d));
    let report = ReportRecord::checked(
        "max_entry_deviation",
        deviation,
        0.0,
        format!("example={kind}, d={}", setup.d),
        tolerance,
    );
    let state = StateFile::from_state(&twirled, &setup.s, Some(&setup.r));
    Ok(SymmetricStateOutput { report, state })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureKind {
    Asymmetry,
    Mutual,
    Relent,
    Interaction,
}

impl FromStr for MeasureKind {
    type Err = QrfError;

    fn from_str(s: &str) -> Result<Self> {
        parse_choice(
            s,
            &[
                ("asymmetry", Self::Asymmetry),
                ("mutual", Self::Mutual),
                ("relent", Self::Relent),
                ("interaction", Self::Interaction),
            ],
            "measure",
        )
    }
}

pub fn cmd_measure(file: &StateFile, which: MeasureKind, tolerance: f64) -> Result<ReportRecord> {
    let loaded = file.load()?;
    let inputs = format!("dims={:?}", file.dims);
    let bipartite = || {
        loaded.r.clone().ok_or_else(|| {
            QrfError::InvalidArgument("this measure needs a two-subsystem state file".into())
        })
    };
    match which {
        MeasureKind::Asymmetry => {
            let value = asymmetry(&loaded.rho, &sectors(&loaded.joint_charges()?))?;
            Ok(ReportRecord::measured("A_G(rho)", value, inputs, tolerance))
        }
        MeasureKind::Mutual => {
            let r = bipartite()?;
            if !loaded.product {
                return Err(QrfError::InvalidArgument(
                    "mutual asymmetry is defined for product states rho_S ⊗ rho_R; \
                     declare \"product\": true in the state file or use --which relent"
                        .into(),
                ));
            }
            let rho_s = loaded.rho.partial_trace(0)?;
            let rho_r = loaded.rho.partial_trace(1)?;
            let residual = max_abs_diff(&kron(rho_s.matrix(), rho_r.matrix()), loaded.rho.matrix());
            if residual > PRODUCT_TOL {
                return Err(QrfError::InvalidArgument(format!(
                    "state declared product differs from the product of its marginals by {residual:e}; \
                     mutual asymmetry assumes rho_S ⊗ rho_R"
                )));
            }
            let value = mutual_asymmetry(&rho_s, &rho_r, &loaded.s, &r)?;
            Ok(ReportRecord::measured("A_G(S:R)", value, inputs, tolerance))
        }
        MeasureKind::Relent => {
            let r = bipartite()?;
            let forms = mutual_asymmetry_relent(&loaded.rho, &loaded.s, &r)?;
            Ok(ReportRecord::measured(
                "S(Pi||Delta)",
                forms.relative_entropy,
                format!("{inputs}, entropy_difference={}", forms.entropy_difference),
                tolerance,
            ))
        }
        MeasureKind::Interaction => {
            let r = bipartite()?;
            let cq = build_cq_state(&loaded.rho, &loaded.s, &r)?;
            let value = interaction_information(&cq)?;
            Ok(ReportRecord::measured(
                "I(S:R:C)",
                value,
                format!("{inputs}, design_points={}", cq.entries.len()),
                tolerance,
            ))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TwirlMethod {
    Dephase,
    Quadrature,
    Design,
    Local,
}

impl FromStr for TwirlMethod {
    type Err = QrfError;

    fn from_str(s: &str) -> Result<Self> {
        parse_choice(
            s,
            &[
                ("dephase", Self::Dephase),
                ("quadrature", Self::Quadrature),
                ("design", Self::Design),
                ("local", Self::Local),
            ],
            "twirl method",
        )
    }
}

/// Raw twirl of a file state under its (total) charges.
pub fn cmd_twirl(file: &StateFile, method: TwirlMethod, points: Option<usize>) -> Result<StateFile> {
    let loaded = file.load()?;
    let charges = loaded.joint_charges()?;
    let out = match method {
        TwirlMethod::Dephase => dephase(&loaded.rho, &sectors(&charges))?,
        TwirlMethod::Quadrature => {
            let n = points.unwrap_or_else(|| finite_design(&charges).len());
            twirl_quadrature(&loaded.rho, &charges, n)?
        }
        TwirlMethod::Design => finite_design(&charges).average(&loaded.rho, &charges)?,
        TwirlMethod::Local => {
            let r = loaded.r.as_ref().ok_or_else(|| {
                QrfError::InvalidArgument("local twirl needs a two-subsystem state file".into())
            })?;
            dephase_local(&loaded.rho, &sectors(&loaded.s), &sectors(r))?
        }
    };
    let mut f = StateFile::from_state(&out, &loaded.s, loaded.r.as_ref());
    f.modulus = file.modulus;
    Ok(f)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureKind {
    Localization,
    CoherenceOrder,
}

impl FromStr for FigureKind {
    type Err = QrfError;

    fn from_str(s: &str) -> Result<Self> {
        parse_choice(
            s,
            &[("localization", Self::Localization), ("coherence-order", Self::CoherenceOrder)],
            "figure",
        )
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FigureRow {
    pub theta: f64,
    pub re_s: f64,
    pub im_s: f64,
    pub prob_s: f64,
    pub re_r: f64,
    pub im_r: f64,
    pub prob_r: f64,
}

/// Landmarks of `|psi_R(theta)|^2` on the sample grid.
#[derive(Debug, Clone, Serialize)]
pub struct FigureSummary {
    pub peak_theta: f64,
    pub peak_value: f64,
    /// First local minimum after the peak.
    pub first_zero_right: f64,
    /// First local minimum before the peak, as a signed offset in `(-pi, 0]`.
    pub first_zero_left: f64,
    /// Distance from the peak to the first sample below half maximum.
    pub half_width: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct FigureData {
    pub d: usize,
    pub which: String,
    pub samples: usize,
    pub summary: FigureSummary,
    pub rows: Vec<FigureRow>,
}

impl FigureData {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("theta,re_psi_s,im_psi_s,abs2_psi_s,re_psi_r,im_psi_r,abs2_psi_r\n");
        for r in &self.rows {
            writeln!(out, "{},{},{},{},{},{},{}", r.theta, r.re_s, r.im_s, r.prob_s, r.re_r, r.im_r, r.prob_r)
                .expect("writing to a String");
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("figure data serializes")
    }
}

fn summarize(prob: &[f64], grid_step: f64) -> FigureSummary {
    let n = prob.len();
    let peak = (0..n).max_by(|&a, &b| prob[a].total_cmp(&prob[b])).unwrap_or(0);
    let at = |i: isize| prob[i.rem_euclid(n as isize) as usize];
    let local_min = |i: isize| at(i) <= at(i - 1) && at(i) <= at(i + 1);
    let p = peak as isize;
    let right = (1..n as isize).find(|&k| local_min(p + k)).unwrap_or(0);
    let left = (1..n as isize).find(|&k| local_min(p - k)).unwrap_or(0);
    let half = (1..n as isize).find(|&k| at(p + k) < prob[peak] / 2.0).unwrap_or(0);
    let wrap = |theta: f64| if theta > PI { theta - 2.0 * PI } else { theta };
    FigureSummary {
        peak_theta: peak as f64 * grid_step,
        peak_value: prob[peak],
        first_zero_right: wrap((p + right).rem_euclid(n as isize) as f64 * grid_step),
        first_zero_left: wrap((p - left).rem_euclid(n as isize) as f64 * grid_step),
        half_width: half as f64 * grid_step,
    }
}

/// Angle-representation samples of the system and clock states of an
/// example, `theta_j = 2 pi j / samples`.
pub fn cmd_figure_data(d: usize, which: FigureKind, samples: usize) -> Result<FigureData> {
    if d < 2 {
        return Err(QrfError::InvalidArgument(format!("d = {d} must be at least 2")));
    }
    if samples < 16 {
        return Err(QrfError::InvalidArgument(format!("{samples} samples; need at least 16")));
    }
    let kind = match which {
        FigureKind::Localization => ExampleKind::Localization,
        FigureKind::CoherenceOrder => ExampleKind::CoherenceOrder,
    };
    let setup = kind.setup(d)?;
    let step = 2.0 * PI / samples as f64;
    let rows: Vec<FigureRow> = (0..samples)
        .map(|j| {
            let theta = j as f64 * step;
            let s = angle_amplitude(&setup.psi_s, theta);
            let r = angle_amplitude(&setup.psi_r, theta);
            FigureRow {
                theta,
                re_s: s.re,
                im_s: s.im,
                prob_s: s.norm_sqr(),
                re_r: r.re,
                im_r: r.im,
                prob_r: r.norm_sqr(),
            }
        })
        .collect();
    let prob_r: Vec<f64> = rows.iter().map(|r| r.prob_r).collect();
    Ok(FigureData {
        d,
        which: kind.to_string(),
        samples,
        summary: summarize(&prob_r, step),
        rows,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObservableBasis {
    Energy,
    Fourier,
}

impl FromStr for ObservableBasis {
    type Err = QrfError;

    fn from_str(s: &str) -> Result<Self> {
        parse_choice(s, &[("energy", Self::Energy), ("fourier", Self::Fourier)], "observable basis")
    }
}

#[derive(Debug, Clone)]
pub struct PwcDemoOptions {
    pub d: usize,
    /// Charges of `H_S` in units of `2 pi / d`.
    pub charges: Vec<i64>,
    /// Real amplitudes of `psi_S(0)`; uniform when absent.
    pub psi: Option<Vec<f64>>,
    /// Eigenvalues of the measured observable; `0..n` when absent.
    pub observable: Option<Vec<f64>>,
    pub basis: ObservableBasis,
    pub corrupt_tick: Option<usize>,
    pub tolerance: f64,
}

impl Default for PwcDemoOptions {
    fn default() -> Self {
        Self {
            d: 8,
            charges: vec![0, 1],
            psi: None,
            observable: None,
            basis: ObservableBasis::Energy,
            corrupt_tick: None,
            tolerance: SCALAR_TOL,
        }
    }
}

fn dft(n: usize) -> CMatrix {
    let norm = 1.0 / (n as f64).sqrt();
    CMatrix::from_fn(n, n, |a, b| c(0.0, -2.0 * PI * ((a * b) % n) as f64 / n as f64).exp() * norm)
}

/// History state by projection, then per-tick relational fidelities,
/// residuals and conditional probabilities.
pub fn cmd_pwc_demo(opts: &PwcDemoOptions) -> Result<Vec<ReportRecord>> {
    let clock = psw_clock(opts.d)?;
    let n = opts.charges.len();
    if n == 0 {
        return Err(QrfError::InvalidArgument("at least one system charge is required".into()));
    }
    let s = ChargeSpectrum::cyclic(opts.charges.clone(), opts.d as u32)?;
    let amplitudes = opts.psi.clone().unwrap_or_else(|| vec![1.0; n]);
    if amplitudes.len() != n {
        return Err(QrfError::DimensionMismatch { expected: n, found: amplitudes.len() });
    }
    let psi = CVector::from_iterator(n, amplitudes.iter().map(|&a| c(a, 0.0)));
    let norm = psi.norm();
    if norm == 0.0 {
        return Err(QrfError::InvalidArgument("initial system state is zero".into()));
    }
    let psi = psi / c(norm, 0.0);
    let mut history: HistoryState = history_from_projection(&psi, &s, &clock)?;
    if let Some(k) = opts.corrupt_tick {
        history = history.corrupt_tick(k)?;
    }

    let eigenvalues = opts.observable.clone().unwrap_or_else(|| (0..n).map(|x| x as f64).collect());
    if eigenvalues.len() != n {
        return Err(QrfError::DimensionMismatch { expected: n, found: eigenvalues.len() });
    }
    let diag = crate::qmat::diag_real(&eigenvalues);
    let observable = match opts.basis {
        ObservableBasis::Energy => HermitianOperator::new(diag, vec![n])?,
        ObservableBasis::Fourier => {
            let f = dft(n);
            HermitianOperator::new(&f * diag * f.adjoint(), vec![n])?
        }
    };

    let tol = opts.tolerance;
    let inputs = format!("d={}, charges={:?}", opts.d, opts.charges);
    let mut records = vec![
        ReportRecord::checked("constraint_residual", history.constraint_residual(), 0.0, inputs.clone(), 1e-10),
        ReportRecord::checked("schrodinger_residual", history.schrodinger_residual(), 0.0, inputs.clone(), tol),
    ];
    for (k, f) in history.relational_fidelities().into_iter().enumerate() {
        records.push(ReportRecord::checked(format!("fidelity[{k}]"), f, 1.0, inputs.clone(), tol));
    }
    let outcomes = crate::pwc::outcome_projectors(&observable).len();
    let mut born_gap: f64 = 0.0;
    for k in 0..opts.d {
        for o in 0..outcomes {
            let p = conditional_probability(&history, &observable, o, k)?;
            born_gap = born_gap.max((p - born_probability(&history, &observable, o, k)?).abs());
            records.push(ReportRecord::measured(format!("p(o={o}|k={k})"), p, inputs.clone(), tol));
        }
    }
    records.push(ReportRecord::checked("born_rule_deviation", born_gap, 0.0, inputs, 1e-10));
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::DensityOperator;

    #[test]
    fn qubit_golden_passes() {
        let recs = cmd_example(ExampleKind::Qubit, 0, SCALAR_TOL).unwrap();
        assert_eq!(recs.len(), 4);
        assert!(recs.iter().all(|r| r.pass == Some(true)), "{recs:?}");
        assert!((recs[3].value - 0.5).abs() < 1e-12);
    }

    #[test]
    fn large_d_examples_use_structured_route() {
        for kind in [ExampleKind::Localization, ExampleKind::CoherenceOrder] {
            let recs = cmd_example(kind, 150, SCALAR_TOL).unwrap();
            assert!(recs.iter().all(|r| r.pass == Some(true)), "{recs:?}");
        }
    }

    #[test]
    fn symmetric_state_matches_closed_forms() {
        for kind in [ExampleKind::Qubit, ExampleKind::Localization, ExampleKind::CoherenceOrder] {
            let out = cmd_symmetric_state(kind, 4, MATRIX_TOL).unwrap();
            assert_eq!(out.report.pass, Some(true), "{kind}: {:?}", out.report);
            let back = out.state.load().unwrap();
            let again = cmd_measure(&out.state, MeasureKind::Asymmetry, SCALAR_TOL).unwrap();
            assert!(again.value.abs() < 1e-9, "{kind}: {}", again.value);
            assert_eq!(back.rho.dims().len(), 2);
        }
        assert!(cmd_symmetric_state(ExampleKind::CoherenceOrder, 150, MATRIX_TOL).is_err());
    }

    #[test]
    fn mutual_requires_product_flag() {
        let setup = ExampleKind::Qubit.setup(2).unwrap();
        let joint = setup.rho_s.tensor(&setup.rho_r);
        let mut f = StateFile::from_state(&joint, &setup.s, Some(&setup.r));
        let err = cmd_measure(&f, MeasureKind::Mutual, SCALAR_TOL).unwrap_err();
        assert!(err.to_string().contains("product"));
        f.product = true;
        let rec = cmd_measure(&f, MeasureKind::Mutual, SCALAR_TOL).unwrap();
        assert!((rec.value - 0.5).abs() < 1e-12);

        // a declared-product file that is actually entangled is refused
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bell = CVector::from_vec(vec![c(h, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(h, 0.0)]);
        let rho = DensityOperator::pure(&bell, vec![2, 2]).unwrap();
        let mut f = StateFile::from_state(&rho, &setup.s, Some(&setup.r));
        f.product = true;
        assert!(cmd_measure(&f, MeasureKind::Mutual, SCALAR_TOL).is_err());
    }

    #[test]
    fn twirl_methods_agree_on_file_state() {
        let setup = ExampleKind::Localization.setup(3).unwrap();
        let joint = setup.rho_s.tensor(&setup.rho_r);
        let f = StateFile::from_state(&joint, &setup.s, Some(&setup.r));
        let a = cmd_twirl(&f, TwirlMethod::Dephase, None).unwrap().to_matrix().unwrap();
        let b = cmd_twirl(&f, TwirlMethod::Quadrature, Some(9)).unwrap().to_matrix().unwrap();
        let d = cmd_twirl(&f, TwirlMethod::Design, None).unwrap().to_matrix().unwrap();
        assert!(max_abs_diff(&a, &b) < 1e-12);
        assert!(max_abs_diff(&a, &d) < 1e-12);
        assert!(cmd_twirl(&f, TwirlMethod::Quadrature, Some(2)).is_err());
        let local = cmd_twirl(&f, TwirlMethod::Local, None).unwrap();
        assert!(local.load().is_ok());
    }

    #[test]
    fn figure_qubit_clock_closed_form() {
        let fig = cmd_figure_data(2, FigureKind::Localization, 64).unwrap();
        for r in &fig.rows {
            assert!((r.prob_r - (1.0 + r.theta.cos()) / (2.0 * PI)).abs() < 1e-12);
        }
        assert!(cmd_figure_data(2, FigureKind::Localization, 8).is_err());
        assert!(fig.to_csv().lines().count() == 65);
    }

    #[test]
    fn pwc_demo_runs() {
        let recs = cmd_pwc_demo(&PwcDemoOptions { d: 2, ..Default::default() }).unwrap();
        assert!(recs.iter().all(|r| !r.failed()), "{recs:?}");
        let bad = cmd_pwc_demo(&PwcDemoOptions {
            d: 8,
            charges: vec![0, 1, 3],
            psi: Some(vec![1.0, 0.5, 0.25]),
            corrupt_tick: Some(2),
            ..Default::default()
        })
        .unwrap();
        assert!(bad.iter().any(ReportRecord::failed));
    }

    #[test]
    fn parse_errors() {
        assert!("nope".parse::<MeasureKind>().is_err());
        assert!("nope".parse::<TwirlMethod>().is_err());
        assert!("qubit".parse::<FigureKind>().is_err());
        assert_eq!("fourier".parse::<ObservableBasis>().unwrap(), ObservableBasis::Fourier);
    }

    #[test]
    fn angle_samples_are_finite() {
        let fig = cmd_figure_data(150, FigureKind::CoherenceOrder, 2048).unwrap();
        assert!(fig.rows.iter().all(|r| r.prob_s.is_finite() && r.prob_r.is_finite()));
    }
}
