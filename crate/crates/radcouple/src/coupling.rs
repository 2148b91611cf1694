//! Coupling controls and full correlation matrices.
//!
//! A coadapted coupling is parameterized by matrices `(J, K)` with
//! `J Jᵀ + K Kᵀ = I`. In the parallel-transported principal frame —
//! index 0 radial, indices `1..n−1` along principal directions — the
//! couplings used here reduce to a radial correlation `j_r`, a radial
//! extra-noise weight `k_r`, and tangential eigenvalues `α_i ∈ [−1, 1]`.
//! This module assembles the full matrices, completes `K` against the
//! covariance constraint, checks the alignment / no-radial-noise conditions
//! that make the distance a finite-variation process, and evaluates the
//! drift `A(r) − Σ mult·κ_i·α_i` a coupling induces on the distance.

use crate::geometry::CurvatureSpectrum;
use crate::rng;
use nalgebra::DMatrix;
use thiserror::Error;

/// Frobenius tolerance on the covariance constraint `J Jᵀ + K Kᵀ = I`.
pub const COVARIANCE_TOL: f64 = 1e-10;

/// Tolerance on invariants expressed through operator norms and frame rows.
pub const FRAME_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum CouplingError {
    #[error("alpha value {0} outside [-1, 1]")]
    AlphaOutOfRange(f64),
    #[error("radial weights violate j_r^2 + k_r^2 <= 1 (j_r = {j_r}, k_r = {k_r})")]
    RadialWeightsTooLarge { j_r: f64, k_r: f64 },
    #[error("k_r must be nonnegative, got {0}")]
    NegativeExtraNoise(f64),
    #[error("control carries {control} tangential directions but the target dimension wants {expected}")]
    DimensionMismatch { control: usize, expected: usize },
    #[error("I - J J^T has eigenvalue {0} < -1e-10; J is not a contraction")]
    NotAContraction(f64),
    #[error("operator norm of J is {0} > 1")]
    NormViolation(f64),
    #[error("K has not been completed for this coupling")]
    MissingK,
}

/// Reduced coupling control in the principal frame.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingControl {
    alphas: Vec<(f64, u32)>,
    j_r: f64,
    k_r: f64,
}

impl CouplingControl {
    /// Validated constructor: each `|α| ≤ 1`, `k_r ≥ 0`, `j_r² + k_r² ≤ 1`
    /// (all with a `1e-12` float slack).
    pub fn new(alphas: Vec<(f64, u32)>, j_r: f64, k_r: f64) -> Result<Self, CouplingError> {
        for &(value, _) in &alphas {
            if value.abs() > 1.0 + 1e-12 {
                return Err(CouplingError::AlphaOutOfRange(value));
            }
        }
        if k_r < 0.0 {
            return Err(CouplingError::NegativeExtraNoise(k_r));
        }
        if j_r * j_r + k_r * k_r > 1.0 + 1e-12 {
            return Err(CouplingError::RadialWeightsTooLarge { j_r, k_r });
        }
        Ok(CouplingControl { alphas, j_r, k_r })
    }

    /// Synchronous coupling `J = I`: lower window endpoint, zero distance
    /// noise.
    pub fn synchronous(dim: usize) -> Self {
        CouplingControl {
            alphas: vec![(1.0, (dim - 1) as u32)],
            j_r: 1.0,
            k_r: 0.0,
        }
    }

    /// Deterministic reflection `J = diag(1, −1, …, −1)`: upper window
    /// endpoint with the radial rows aligned, so the distance still has
    /// finite variation.
    pub fn reflection(dim: usize) -> Self {
        CouplingControl {
            alphas: vec![(-1.0, (dim - 1) as u32)],
            j_r: 1.0,
            k_r: 0.0,
        }
    }

    /// Radial-hyperplane reflection `J = diag(0, −1, …, −1)` with the
    /// completion `K = diag(1, 0, …, 0)`: same maximal drift, but the
    /// radial noise survives.
    pub fn reflection_hyperplane(dim: usize) -> Self {
        CouplingControl {
            alphas: vec![(-1.0, (dim - 1) as u32)],
            j_r: 0.0,
            k_r: 1.0,
        }
    }

    /// Point reflection `J = −I`: the noise of the second particle is the
    /// transported noise of the first, negated. On flat space the distance
    /// becomes a Bessel-type process run at speed 2.
    pub fn mirror(dim: usize) -> Self {
        CouplingControl {
            alphas: vec![(-1.0, (dim - 1) as u32)],
            j_r: -1.0,
            k_r: 0.0,
        }
    }

    /// Deterministic coupling (aligned, no radial noise) realizing a
    /// synthesized tangential solution.
    pub fn from_solution(solution: &crate::window::ControlSolution) -> Self {
        CouplingControl {
            alphas: solution.alphas.clone(),
            j_r: 1.0,
            k_r: 0.0,
        }
    }

    pub fn alphas(&self) -> &[(f64, u32)] {
        &self.alphas
    }

    pub fn j_r(&self) -> f64 {
        self.j_r
    }

    pub fn k_r(&self) -> f64 {
        self.k_r
    }

    /// Number of tangential directions covered by the alpha blocks.
    pub fn tangential_dim(&self) -> usize {
        self.alphas.iter().map(|&(_, m)| m as usize).sum()
    }

    /// Alphas expanded to one value per tangential direction.
    pub fn expanded_alphas(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.tangential_dim());
        for &(value, mult) in &self.alphas {
            for _ in 0..mult {
                out.push(value);
            }
        }
        out
    }
}

/// Full coupling matrices in the frame convention (row/column 0 radial).
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingMatrices {
    j: DMatrix<f64>,
    k: Option<DMatrix<f64>>,
}

impl CouplingMatrices {
    pub fn from_j(j: DMatrix<f64>) -> Self {
        assert_eq!(j.nrows(), j.ncols(), "J must be square");
        CouplingMatrices { j, k: None }
    }

    pub fn j(&self) -> &DMatrix<f64> {
        &self.j
    }

    pub fn k(&self) -> Option<&DMatrix<f64>> {
        self.k.as_ref()
    }

    pub fn dim(&self) -> usize {
        self.j.nrows()
    }

    /// Frobenius defect `‖J Jᵀ + K Kᵀ − I‖_F`; `K` is treated as zero when
    /// not completed.
    pub fn covariance_defect(&self) -> f64 {
        let n = self.dim();
        let mut m = &self.j * self.j.transpose();
        if let Some(k) = &self.k {
            m += k * k.transpose();
        }
        (m - DMatrix::<f64>::identity(n, n)).norm()
    }

    /// Largest singular value of `J`.
    pub fn operator_norm(&self) -> f64 {
        operator_norm(&self.j)
    }

    /// Reduced quadratic-variation rate of the distance for this coupling,
    /// assuming parallel-transport-aligned frames: only the radial rows
    /// contribute, giving `Σ_i (δ_{0i} − J_{0i})² + Σ_i K_{0i}²`.
    pub fn reduced_sigma_squared(&self) -> f64 {
        let n = self.dim();
        let mut total = 0.0;
        for i in 0..n {
            let delta = if i == 0 { 1.0 } else { 0.0 };
            let d = delta - self.j[(0, i)];
            total += d * d;
        }
        if let Some(k) = &self.k {
            for i in 0..n {
                total += k[(0, i)] * k[(0, i)];
            }
        }
        total
    }
}

/// Largest singular value.
pub fn operator_norm(m: &DMatrix<f64>) -> f64 {
    m.clone().svd(false, false).singular_values[0]
}

/// Assemble the diagonal `J` of a reduced control in the frame convention:
/// `J = diag(j_r, α_1, …)` with each alpha repeated per multiplicity.
/// `K` is left uncompleted.
pub fn assemble_j(control: &CouplingControl, n: usize) -> Result<CouplingMatrices, CouplingError> {
    let tangential = control.tangential_dim();
    if tangential != n - 1 {
        return Err(CouplingError::DimensionMismatch {
            control: tangential,
            expected: n - 1,
        });
    }
    let mut diag = Vec::with_capacity(n);
    diag.push(control.j_r);
    diag.extend(control.expanded_alphas());
    let j = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag));
    Ok(CouplingMatrices { j, k: None })
}

/// Complete `K` as the symmetric principal square root of `I − J Jᵀ`.
///
/// The square root is the unique PSD choice and reduces to
/// `diag(√(1−j_r²), √(1−α_i²), …)` for diagonal `J`. Fails if `I − J Jᵀ`
/// has an eigenvalue below `−1e-10`.
pub fn complete_k(m: CouplingMatrices) -> Result<CouplingMatrices, CouplingError> {
    let n = m.dim();
    let residual = DMatrix::<f64>::identity(n, n) - &m.j * m.j.transpose();
    // symmetrize against rounding before the eigendecomposition
    let residual = 0.5 * (&residual + residual.transpose());
    let eigen = residual.symmetric_eigen();
    let mut values = eigen.eigenvalues;
    for v in values.iter_mut() {
        if *v < -COVARIANCE_TOL {
            return Err(CouplingError::NotAContraction(*v));
        }
        *v = v.max(0.0).sqrt();
    }
    let k = &eigen.eigenvectors * DMatrix::from_diagonal(&values) * eigen.eigenvectors.transpose();
    Ok(CouplingMatrices { j: m.j, k: Some(k) })
}

/// Alignment and no-radial-noise status of a coupling.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DeterministicConditions {
    /// Radial row of `J` equals `(1, 0, …, 0)`: the radial noises cancel.
    pub aligned: bool,
    /// Radial row of `K` vanishes: the independent noise is tangential.
    pub no_radial_noise: bool,
}

impl DeterministicConditions {
    /// Both conditions hold, so the distance has finite variation.
    pub fn deterministic(&self) -> bool {
        self.aligned && self.no_radial_noise
    }
}

/// Check the two conditions under which the martingale part of the distance
/// vanishes. An uncompleted `K` counts as zero.
pub fn check_deterministic_conditions(m: &CouplingMatrices) -> DeterministicConditions {
    let n = m.dim();
    let mut aligned = true;
    for i in 0..n {
        let expected = if i == 0 { 1.0 } else { 0.0 };
        if (m.j[(0, i)] - expected).abs() > FRAME_TOL {
            aligned = false;
            break;
        }
    }
    let no_radial_noise = match &m.k {
        None => true,
        Some(k) => (0..n).all(|i| k[(0, i)].abs() <= FRAME_TOL),
    };
    DeterministicConditions {
        aligned,
        no_radial_noise,
    }
}

/// Distance drift induced by a reduced control against a curvature spectrum:
/// `A(r) − Σ mult·κ_i·α_i`.
pub fn drift_of_control(
    control: &CouplingControl,
    spectrum: &CurvatureSpectrum,
) -> Result<f64, CouplingError> {
    if control.tangential_dim() != spectrum.tangential_dim() {
        return Err(CouplingError::DimensionMismatch {
            control: control.tangential_dim(),
            expected: spectrum.tangential_dim(),
        });
    }
    let mut trace = 0.0;
    for (alpha, kappa) in control
        .expanded_alphas()
        .into_iter()
        .zip(spectrum.expanded())
    {
        trace += kappa * alpha;
    }
    Ok(spectrum.mean() - trace)
}

/// Distance drift of full matrices: `A(r) − trace(Jᵀ S_r)`, where the shape
/// operator `S_r` annihilates the radial direction, so the trace runs over
/// the tangential diagonal of `J`.
pub fn drift_of_matrices(
    m: &CouplingMatrices,
    spectrum: &CurvatureSpectrum,
) -> Result<f64, CouplingError> {
    if m.dim() != spectrum.tangential_dim() + 1 {
        return Err(CouplingError::DimensionMismatch {
            control: m.dim() - 1,
            expected: spectrum.tangential_dim(),
        });
    }
    let mut trace = 0.0;
    for (offset, kappa) in spectrum.expanded().enumerate() {
        trace += kappa * m.j[(offset + 1, offset + 1)];
    }
    Ok(spectrum.mean() - trace)
}

/// Verify the spectral bound `|Σ κ_i·⟨e_i, J e_i⟩| ≤ Σ|κ_i|` for a
/// contraction `J`. Errors if `J` is not a contraction; otherwise returns
/// whether the bound holds (it must, for any contraction).
pub fn spectral_trace_bound_check(
    j: &DMatrix<f64>,
    spectrum: &CurvatureSpectrum,
) -> Result<bool, CouplingError> {
    let norm = operator_norm(j);
    if norm > 1.0 + FRAME_TOL {
        return Err(CouplingError::NormViolation(norm));
    }
    let mut trace = 0.0;
    for (offset, kappa) in spectrum.expanded().enumerate() {
        trace += kappa * j[(offset + 1, offset + 1)];
    }
    Ok(trace.abs() <= spectrum.abs_sum() + FRAME_TOL)
}

/// Deterministic Gaussian matrix with operator norm projected to at most 1,
/// keyed by `(seed, index)`. Used for randomized admissibility sweeps.
pub fn random_contraction(seed: u64, index: u64, n: usize) -> DMatrix<f64> {
    let mut m = DMatrix::<f64>::zeros(n, n);
    for row in 0..n {
        for col in 0..n {
            m[(row, col)] = rng::normal(seed, index, row as u64, col as u64);
        }
    }
    let norm = operator_norm(&m);
    if norm > 1.0 {
        m /= norm;
    }
    m
}

/// Deterministic admissible control keyed by `(seed, index)`: random alpha
/// blocks and radial weights inside the constraint disc.
pub fn random_admissible_control(seed: u64, index: u64, blocks: &[u32]) -> CouplingControl {
    let alphas = blocks
        .iter()
        .enumerate()
        .map(|(i, &mult)| {
            let u = rng::uniform(seed, index, 100 + i as u64, 0);
            (2.0 * u - 1.0, mult)
        })
        .collect();
    let angle = rng::uniform(seed, index, 0, 0) * std::f64::consts::TAU;
    let radius = rng::uniform(seed, index, 0, 1).sqrt();
    let j_r = radius * angle.cos();
    let k_r = (radius * angle.sin()).abs();
    CouplingControl::new(alphas, j_r, k_r).expect("sampled control is admissible by construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ModelManifold;
    use crate::window;

    fn spectrum(curvature: f64, dim: usize, r: f64) -> CurvatureSpectrum {
        ModelManifold::space_form(curvature, dim)
            .unwrap()
            .principal_curvatures(r)
            .unwrap()
    }

    #[test]
    fn assemble_canonical_matrices() {
        let sync = assemble_j(&CouplingControl::synchronous(3), 3).unwrap();
        assert_eq!(sync.j(), &DMatrix::<f64>::identity(3, 3));

        let hyperplane = assemble_j(&CouplingControl::reflection_hyperplane(3), 3).unwrap();
        let expected =
            DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![0.0, -1.0, -1.0]));
        assert_eq!(hyperplane.j(), &expected);

        let refl = assemble_j(&CouplingControl::reflection(4), 4).unwrap();
        let expected =
            DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, -1.0, -1.0, -1.0]));
        assert_eq!(refl.j(), &expected);

        assert!(matches!(
            assemble_j(&CouplingControl::synchronous(3), 4),
            Err(CouplingError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn completion_cases() {
        let sync = complete_k(assemble_j(&CouplingControl::synchronous(3), 3).unwrap()).unwrap();
        assert!(sync.k().unwrap().norm() < 1e-12);

        let refl = complete_k(assemble_j(&CouplingControl::reflection(3), 3).unwrap()).unwrap();
        assert!(refl.k().unwrap().norm() < 1e-12);

        let hyperplane =
            complete_k(assemble_j(&CouplingControl::reflection_hyperplane(3), 3).unwrap())
                .unwrap();
        let expected =
            DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, 0.0, 0.0]));
        assert!((hyperplane.k().unwrap() - expected).norm() < 1e-12);

        let too_big = CouplingMatrices::from_j(DMatrix::<f64>::identity(2, 2) * 1.5);
        assert!(matches!(
            complete_k(too_big),
            Err(CouplingError::NotAContraction(_))
        ));
    }

    #[test]
    fn deterministic_condition_cases() {
        let sync = complete_k(assemble_j(&CouplingControl::synchronous(3), 3).unwrap()).unwrap();
        let c = check_deterministic_conditions(&sync);
        assert!(c.aligned && c.no_radial_noise);

        let hyperplane =
            complete_k(assemble_j(&CouplingControl::reflection_hyperplane(3), 3).unwrap())
                .unwrap();
        let c = check_deterministic_conditions(&hyperplane);
        assert!(!c.aligned && !c.no_radial_noise);

        // pure tangential extra noise is allowed: K = diag(0, 1, 1)
        let j = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, 0.0, 0.0]));
        let m = complete_k(CouplingMatrices::from_j(j)).unwrap();
        assert!(check_deterministic_conditions(&m).deterministic());
    }

    #[test]
    fn completion_satisfies_covariance_for_random_controls() {
        for i in 0..500 {
            let control = random_admissible_control(11, i, &[2, 1]);
            let m = complete_k(assemble_j(&control, 4).unwrap()).unwrap();
            assert!(m.covariance_defect() < COVARIANCE_TOL, "case {i}");
            assert!(m.operator_norm() <= 1.0 + FRAME_TOL);
        }
    }

    #[test]
    fn deterministic_iff_jr_is_one() {
        for i in 0..200 {
            let control = random_admissible_control(17, i, &[3]);
            let m = complete_k(assemble_j(&control, 4).unwrap()).unwrap();
            let c = check_deterministic_conditions(&m);
            let jr_one = (control.j_r() - 1.0).abs() <= FRAME_TOL;
            assert_eq!(c.deterministic(), jr_one, "case {i}");
        }
        let exact = CouplingControl::new(vec![(0.3, 3)], 1.0, 0.0).unwrap();
        let m = complete_k(assemble_j(&exact, 4).unwrap()).unwrap();
        assert!(check_deterministic_conditions(&m).deterministic());
    }

    #[test]
    fn drift_of_canonical_couplings() {
        let s = spectrum(-1.0, 2, 1.0);
        let coth1 = s.mean();
        let zero = drift_of_control(&CouplingControl::synchronous(2), &s).unwrap();
        assert!(zero.abs() < 1e-12);
        let refl = drift_of_control(&CouplingControl::reflection(2), &s).unwrap();
        assert!((refl - 2.0 * coth1).abs() < 1e-12);
        assert!((refl - 2.6260705709986622).abs() < 1e-9);
        let neutral =
            drift_of_control(&CouplingControl::new(vec![(0.0, 1)], 1.0, 0.0).unwrap(), &s)
                .unwrap();
        assert!((neutral - coth1).abs() < 1e-12);
    }

    #[test]
    fn drift_endpoints_match_window() {
        // all-positive and mixed-sign spectra
        let models = [
            ModelManifold::space_form(-1.0, 3).unwrap(),
            ModelManifold::space_form(1.0, 2).unwrap(),
        ];
        for model in &models {
            for r in [0.7, 1.9, 2.8] {
                if r >= model.r_max() {
                    continue;
                }
                let s = model.principal_curvatures(r).unwrap();
                let w = window::window(model, r).unwrap();
                let signs: Vec<(f64, u32)> = s
                    .entries()
                    .iter()
                    .map(|e| (e.kappa.signum(), e.multiplicity))
                    .collect();
                let lo_control = CouplingControl::new(signs.clone(), 1.0, 0.0).unwrap();
                let hi_control = CouplingControl::new(
                    signs.iter().map(|&(v, m)| (-v, m)).collect(),
                    1.0,
                    0.0,
                )
                .unwrap();
                let lo = drift_of_control(&lo_control, &s).unwrap();
                let hi = drift_of_control(&hi_control, &s).unwrap();
                assert!((lo - w.lo).abs() < 1e-12, "lo at r={r}");
                assert!((hi - w.hi).abs() < 1e-12, "hi at r={r}");
            }
        }
    }

    #[test]
    fn drift_of_matrices_agrees_with_control() {
        let s = spectrum(1.0, 4, 0.9);
        let control = CouplingControl::new(vec![(0.4, 2), (-0.7, 1)], 0.5, 0.5).unwrap();
        let m = assemble_j(&control, 4).unwrap();
        let a = drift_of_control(&control, &s).unwrap();
        let b = drift_of_matrices(&m, &s).unwrap();
        assert!((a - b).abs() < 1e-14);
    }

    #[test]
    fn trace_bound_for_random_contractions() {
        let s = spectrum(1.0, 4, 1.0);
        for i in 0..2000 {
            let j = random_contraction(23, i, 4);
            assert!(spectral_trace_bound_check(&j, &s).unwrap(), "case {i}");
        }
        // equality cases: +/- identity on the tangential block
        let mut plus = DMatrix::<f64>::identity(4, 4);
        plus[(0, 0)] = 0.0;
        assert!(spectral_trace_bound_check(&plus, &s).unwrap());
        assert!(spectral_trace_bound_check(&(-plus), &s).unwrap());
        // norm violation is rejected
        let big = DMatrix::<f64>::identity(4, 4) * 1.01;
        assert!(matches!(
            spectral_trace_bound_check(&big, &s),
            Err(CouplingError::NormViolation(_))
        ));
    }

    #[test]
    fn control_validation() {
        assert!(matches!(
            CouplingControl::new(vec![(1.2, 1)], 0.0, 0.0),
            Err(CouplingError::AlphaOutOfRange(_))
        ));
        assert!(matches!(
            CouplingControl::new(vec![(0.0, 1)], 0.9, 0.9),
            Err(CouplingError::RadialWeightsTooLarge { .. })
        ));
        assert!(matches!(
            CouplingControl::new(vec![(0.0, 1)], 0.0, -0.1),
            Err(CouplingError::NegativeExtraNoise(_))
        ));
    }
}
