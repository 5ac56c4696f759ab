//! Executable correctability checks and the constructive decomposition.
//!
//! A code subspace is correctable for replacer channels on a site subset E
//! exactly when it carries a decomposition |ĩ⟩ = (U ⊗ I_E)(|i⟩ ⊗ |ψ⟩): an
//! isometry U from a logical ⊗ ancilla register into the complement of E,
//! applied against a fixed ancilla-erased state |ψ⟩. This module provides
//! five independent deciders for that property (state separability against a
//! reference register, vanishing mutual information, Knill–Laflamme blocks,
//! the constructive decomposition itself, and an explicit recovery round
//! trip), plus recovery-channel synthesis and expectation-constancy checks.
//! The deciders are provably equivalent, so [`full_report`] treats any
//! disagreement among them as an internal-consistency failure and says so
//! instead of resolving it.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::channels::{erasure_kraus_set, Channel, KrausSet, ReplacerChannel};
use crate::codes::{validate_code, CodeSubspace};
use crate::error::{Error, Result};
use crate::sampling;
use crate::tensor::{
    embed_on_subset, hermitian_eig, max_abs, max_abs_diff, BipartiteIndex, DensityMatrix,
    SiteSubset, StateVector, SystemLayout, C64,
};
use crate::RANK_TOL;

/// The isometry / ancilla-state decomposition certifying correctability.
///
/// The isometry maps a (dim R · dim A)-dimensional logical ⊗ ancilla register
/// into the complement of the replaced sites, with column index i·dimA + a.
/// `gamma` is the descending spectrum of the ancilla state purified by `psi`,
/// which lives on the layout [dim A, erased-site dims…].
#[derive(Debug, Clone)]
pub struct StructureDecomposition {
    dim_r: usize,
    dim_a: usize,
    u: DMatrix<C64>,
    gamma: Vec<f64>,
    psi: StateVector,
    sigma_e: DensityMatrix,
}

impl StructureDecomposition {
    pub fn new(
        dim_r: usize,
        dim_a: usize,
        u: DMatrix<C64>,
        gamma: Vec<f64>,
        psi: StateVector,
        sigma_e: DensityMatrix,
    ) -> Result<Self> {
        if u.ncols() != dim_r * dim_a {
            return Err(Error::Validation(format!(
                "isometry has {} columns, expected dimR·dimA = {}",
                u.ncols(),
                dim_r * dim_a
            )));
        }
        if dim_r * dim_a > u.nrows() {
            return Err(Error::DimensionBound(format!(
                "(dim A)(dim S) = {} exceeds the complementary dimension {}",
                dim_r * dim_a,
                u.nrows()
            )));
        }
        let iso_residual = max_abs(&(u.adjoint() * &u - DMatrix::identity(u.ncols(), u.ncols())));
        if iso_residual > 1e-8 {
            return Err(Error::Validation(format!(
                "U is not an isometry (|U†U − I| = {iso_residual:.3e})"
            )));
        }
        if gamma.len() != dim_a {
            return Err(Error::Validation(format!(
                "gamma has {} entries, expected dim A = {dim_a}",
                gamma.len()
            )));
        }
        if gamma.iter().any(|&g| g <= RANK_TOL) {
            return Err(Error::Validation("gamma entries must exceed the rank threshold".into()));
        }
        if gamma.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Validation("gamma must be sorted descending".into()));
        }
        let gamma_sum: f64 = gamma.iter().sum();
        if (gamma_sum - 1.0).abs() > 1e-8 {
            return Err(Error::Validation(format!(
                "gamma sums to {gamma_sum}, expected 1"
            )));
        }
        if psi.layout().num_sites() == 0 || psi.layout().dims()[0] != dim_a {
            return Err(Error::Validation(
                "psi must live on the layout [dim A, erased dims…]".into(),
            ));
        }
        // psi purifies gamma: its Schmidt spectrum across ancilla : erased
        // matches gamma.
        let e_sites = SiteSubset::new((2..=psi.layout().num_sites()).collect())?;
        let sd = psi.schmidt(&e_sites, RANK_TOL)?;
        if sd.rank() != dim_a {
            return Err(Error::Validation(format!(
                "psi has Schmidt rank {} across ancilla:erased, expected dim A = {dim_a}",
                sd.rank()
            )));
        }
        for (k, s) in sd.coefficients.iter().enumerate() {
            if (s * s - gamma[k]).abs() > 1e-8 {
                return Err(Error::Validation(format!(
                    "psi does not purify gamma: coefficient {k} squared is {} vs gamma {}",
                    s * s,
                    gamma[k]
                )));
            }
        }
        Ok(Self {
            dim_r,
            dim_a,
            u,
            gamma,
            psi,
            sigma_e,
        })
    }

    pub fn dim_r(&self) -> usize {
        self.dim_r
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn isometry(&self) -> &DMatrix<C64> {
        &self.u
    }

    pub fn gamma(&self) -> &[f64] {
        &self.gamma
    }

    pub fn psi(&self) -> &StateVector {
        &self.psi
    }

    pub fn sigma_e(&self) -> &DensityMatrix {
        &self.sigma_e
    }

    /// The ancilla-erased state as a (dim A × dim E) matrix.
    pub fn psi_matrix(&self) -> DMatrix<C64> {
        let de = self.psi.amplitudes().len() / self.dim_a;
        DMatrix::from_fn(self.dim_a, de, |a, e| self.psi.amplitudes()[a * de + e])
    }
}

/// Code basis reconstruction |ĩ⟩ = (U ⊗ I_E)(|i⟩ ⊗ |ψ⟩) in the original site
/// order of `layout`.
pub fn reconstruct_basis(
    layout: &SystemLayout,
    subset: &SiteSubset,
    u: &DMatrix<C64>,
    psi: &StateVector,
    dim_r: usize,
) -> Result<Vec<StateVector>> {
    let split = BipartiteIndex::new(layout, subset)?;
    let (dc, de) = (split.comp_dim(), split.sub_dim());
    if u.nrows() != dc {
        return Err(Error::LayoutMismatch {
            expected: dc,
            found: u.nrows(),
        });
    }
    if dim_r == 0 || u.ncols() % dim_r != 0 {
        return Err(Error::Validation(format!(
            "isometry with {} columns cannot split into {dim_r} logical blocks",
            u.ncols()
        )));
    }
    let dim_a = u.ncols() / dim_r;
    if psi.amplitudes().len() != dim_a * de {
        return Err(Error::LayoutMismatch {
            expected: dim_a * de,
            found: psi.amplitudes().len(),
        });
    }
    let psi_m = DMatrix::from_fn(dim_a, de, |a, e| psi.amplitudes()[a * de + e]);
    let mut basis = Vec::with_capacity(dim_r);
    for i in 0..dim_r {
        let block = u.columns(i * dim_a, dim_a);
        let b = block * &psi_m; // dc × de
        let mut amps = DVector::zeros(layout.total_dim());
        for c in 0..dc {
            for e in 0..de {
                amps[split.fuse(c, e)] = b[(c, e)];
            }
        }
        basis.push(StateVector::new(layout.clone(), amps)?);
    }
    Ok(basis)
}

/// The reference-extended state (dim S)^{-1/2} Σ_i |i⟩_ref ⊗ |ĩ⟩ used by the
/// separability and mutual-information deciders. The reference register is
/// prepended as site 1.
fn reference_state(code: &CodeSubspace) -> Result<StateVector> {
    let dim_s = code.dim();
    let d = code.layout().total_dim();
    let mut dims = vec![dim_s];
    dims.extend_from_slice(code.layout().dims());
    let layout = SystemLayout::allowing_unit_sites(dims)?;
    let w = C64::new((dim_s as f64).sqrt().recip(), 0.0);
    let mut amps = DVector::zeros(dim_s * d);
    for (i, v) in code.basis().iter().enumerate() {
        for x in 0..d {
            amps[i * d + x] = w * v.amplitudes()[x];
        }
    }
    StateVector::new(layout, amps)
}

/// Reduced states of the reference-extended state: (ρ on reference ⊗ erased,
/// ρ on reference, ρ on erased).
fn reference_reductions(
    code: &CodeSubspace,
    subset: &SiteSubset,
) -> Result<(DensityMatrix, DensityMatrix, DensityMatrix)> {
    subset.validate(code.layout())?;
    let phi = reference_state(code)?;
    let rho = DensityMatrix::from_pure(&phi);
    // site s of the original layout is site s+1 alongside the reference
    let comp = subset.complement(code.layout())?;
    let comp_shifted = SiteSubset::new(comp.indices().iter().map(|&s| s + 1).collect())?;
    let joint = rho.partial_trace(&comp_shifted)?;
    let on_ref = joint.reduced_state(&SiteSubset::new(vec![1])?)?;
    let on_erased = joint.partial_trace(&SiteSubset::new(vec![1])?)?;
    Ok((joint, on_ref, on_erased))
}

/// Decider (state form): the reference ⊗ erased reduction of the extended
/// state must factorize. Returns the pass verdict at `tol` and the residual
/// max |ρ_joint − ρ_ref ⊗ ρ_erased|.
pub fn check_separability(code: &CodeSubspace, subset: &SiteSubset, tol: f64) -> Result<(bool, f64)> {
    let (joint, on_ref, on_erased) = reference_reductions(code, subset)?;
    let product = crate::tensor::kron(on_ref.matrix(), on_erased.matrix());
    let residual = max_abs_diff(joint.matrix(), &product);
    Ok((residual <= tol, residual))
}

/// Entropies (natural log) of the reference-extended reductions, and the
/// mutual information between the reference register and the erased sites.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct MutualInformation {
    pub h_reference: f64,
    pub h_erased: f64,
    pub h_joint: f64,
    pub information: f64,
}

pub fn mutual_information_parts(code: &CodeSubspace, subset: &SiteSubset) -> Result<MutualInformation> {
    let (joint, on_ref, on_erased) = reference_reductions(code, subset)?;
    let h_reference = on_ref.von_neumann_entropy()?;
    let h_erased = on_erased.von_neumann_entropy()?;
    let h_joint = joint.von_neumann_entropy()?;
    Ok(MutualInformation {
        h_reference,
        h_erased,
        h_joint,
        information: h_reference + h_erased - h_joint,
    })
}

/// Decider (information form): ≥ 0 up to roundoff, and 0 exactly on
/// correctable codes.
pub fn mutual_information(code: &CodeSubspace, subset: &SiteSubset) -> Result<f64> {
    Ok(mutual_information_parts(code, subset)?.information)
}

/// Outcome of [`knill_laflamme_check`].
#[derive(Debug, Clone)]
pub struct KnillLaflammeReport {
    pub passed: bool,
    /// Max deviation of any code-basis block ⟨ĩ|M_a†M_b|j̃⟩ from c_ab δ_ij.
    pub max_residual: f64,
    /// Structure constants c_ab (Hermitian, PSD, unit trace for a
    /// trace-preserving Kraus set).
    pub constants: DMatrix<C64>,
}

/// Decider (operator form): every pair of Kraus operators must look like a
/// scalar on the code.
pub fn knill_laflamme_check(
    code: &CodeSubspace,
    kraus: &KrausSet,
    tol: f64,
) -> Result<KnillLaflammeReport> {
    if kraus.dim() != code.layout().total_dim() {
        return Err(Error::LayoutMismatch {
            expected: code.layout().total_dim(),
            found: kraus.dim(),
        });
    }
    let dim_s = code.dim();
    let images: Vec<Vec<DVector<C64>>> = kraus
        .operators()
        .iter()
        .map(|m| code.basis().iter().map(|v| m * v.amplitudes()).collect())
        .collect();
    let nk = kraus.len();
    let mut constants = DMatrix::zeros(nk, nk);
    for a in 0..nk {
        for b in 0..nk {
            let mut diag = C64::new(0.0, 0.0);
            for i in 0..dim_s {
                diag += images[a][i].dotc(&images[b][i]);
            }
            constants[(a, b)] = diag / C64::new(dim_s as f64, 0.0);
        }
    }
    let mut max_residual = 0.0f64;
    for a in 0..nk {
        for b in 0..nk {
            for i in 0..dim_s {
                for j in 0..dim_s {
                    let block = images[a][i].dotc(&images[b][j]);
                    let target = if i == j {
                        constants[(a, b)]
                    } else {
                        C64::new(0.0, 0.0)
                    };
                    max_residual = max_residual.max((block - target).norm());
                }
            }
        }
    }
    Ok(KnillLaflammeReport {
        passed: max_residual <= tol,
        max_residual,
        constants,
    })
}

/// Constructive decider: extracts the isometry and ancilla state from the
/// code itself.
///
/// The ancilla basis is anchored in the Schmidt decomposition of the first
/// codeword across (complement : erased): the coefficients fix dim A and the
/// ancilla spectrum, the erased-side Schmidt vectors define the columns
/// U(|i⟩|k⟩) = s_k^{-1} (I ⊗ ⟨v_k|) |ĩ⟩. Verification that U is an isometry
/// and that the basis reconstructs is what certifies the output; failure
/// means the code is not correctable for this subset.
pub fn decompose(code: &CodeSubspace, subset: &SiteSubset, tol: f64) -> Result<StructureDecomposition> {
    if subset.is_empty() {
        return Err(Error::InvalidSubset("replaced subset must be non-empty".into()));
    }
    let layout = code.layout();
    let split = BipartiteIndex::new(layout, subset)?;
    let (dc, de) = (split.comp_dim(), split.sub_dim());
    let dim_s = code.dim();

    let sd = code.basis()[0].schmidt(subset, RANK_TOL)?;
    let dim_a = sd.rank();
    if dim_s * dim_a > dc {
        return Err(Error::NotCorrectable(format!(
            "(dim A)(dim S) = {} exceeds the complementary dimension {dc} \
             (first codeword has Schmidt rank {dim_a})",
            dim_s * dim_a
        )));
    }

    // psi = Σ_k s_k |k⟩_ancilla ⊗ |v_k⟩_erased with the erased-side Schmidt
    // vectors of the first codeword.
    let mut psi_amps = DVector::zeros(dim_a * de);
    for (k, v) in sd.right.iter().enumerate() {
        for e in 0..de {
            psi_amps[k * de + e] = C64::new(sd.coefficients[k], 0.0) * v.amplitudes()[e];
        }
    }
    let mut psi_dims = vec![dim_a];
    psi_dims.extend_from_slice(split.sub_layout().dims());
    let psi = StateVector::new(SystemLayout::allowing_unit_sites(psi_dims)?, psi_amps)?;

    let mut u = DMatrix::zeros(dc, dim_s * dim_a);
    for (i, codeword) in code.basis().iter().enumerate() {
        let (m, _) = codeword.as_bipartite_matrix(subset)?;
        for k in 0..dim_a {
            let v = sd.right[k].amplitudes();
            let inv = C64::new(sd.coefficients[k].recip(), 0.0);
            for c in 0..dc {
                let mut acc = C64::new(0.0, 0.0);
                for e in 0..de {
                    acc += m[(c, e)] * v[e].conj();
                }
                u[(c, i * dim_a + k)] = acc * inv;
            }
        }
    }

    // Verification certifies the construction regardless of gauge choices.
    let iso_residual = max_abs(&(u.adjoint() * &u - DMatrix::identity(u.ncols(), u.ncols())));
    let rec = reconstruct_basis(layout, subset, &u, &psi, dim_s)?;
    let rec_residual = code
        .basis()
        .iter()
        .zip(&rec)
        .map(|(orig, r)| (orig.amplitudes() - r.amplitudes()).norm())
        .fold(0.0f64, f64::max);
    if iso_residual > tol || rec_residual > tol {
        for (i, codeword) in code.basis().iter().enumerate().skip(1) {
            let rank = codeword.schmidt(subset, RANK_TOL)?.rank();
            if rank != dim_a {
                return Err(Error::DegenerateCodeword(format!(
                    "codeword 0 has Schmidt rank {dim_a} but codeword {i} has rank {rank} \
                     across the erased cut"
                )));
            }
        }
        return Err(Error::NotCorrectable(format!(
            "verification failed: |U†U − I| = {iso_residual:.3e}, \
             max reconstruction residual = {rec_residual:.3e}"
        )));
    }

    StructureDecomposition::new(
        dim_s,
        dim_a,
        u,
        sd.coefficients.iter().map(|s| s * s).collect(),
        psi,
        DensityMatrix::maximally_mixed(split.sub_layout().clone()),
    )
}

/// Gauge-independent quality of a decomposition against a code: max of the
/// isometry residual and the per-codeword reconstruction error (2-norm).
pub fn reconstruction_residual(
    code: &CodeSubspace,
    subset: &SiteSubset,
    decomposition: &StructureDecomposition,
) -> Result<f64> {
    let u = decomposition.isometry();
    let iso = max_abs(&(u.adjoint() * u - DMatrix::identity(u.ncols(), u.ncols())));
    let rec = reconstruct_basis(
        code.layout(),
        subset,
        u,
        decomposition.psi(),
        decomposition.dim_r(),
    )?;
    let rec_res = code
        .basis()
        .iter()
        .zip(&rec)
        .map(|(orig, r)| (orig.amplitudes() - r.amplitudes()).norm())
        .fold(0.0f64, f64::max);
    Ok(iso.max(rec_res))
}

/// Trace-preserving recovery map synthesized from a decomposition: undo the
/// isometry on the kept sites, discard the ancilla register, and re-encode
/// the logical state; whatever mass falls outside the isometry's range is
/// routed to a fixed completion state (the first codeword) so the map is a
/// channel on all inputs, not only encoded ones.
#[derive(Debug, Clone)]
pub struct RecoveryChannel {
    decomposition: StructureDecomposition,
    layout: SystemLayout,
    subset: SiteSubset,
    codeword_matrix: DMatrix<C64>,
    completion: DensityMatrix,
}

impl RecoveryChannel {
    pub fn decomposition(&self) -> &StructureDecomposition {
        &self.decomposition
    }

    pub fn completion(&self) -> &DensityMatrix {
        &self.completion
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.layout() != &self.layout {
            return Err(Error::LayoutMismatch {
                expected: self.layout.total_dim(),
                found: rho.layout().total_dim(),
            });
        }
        let kept = rho.partial_trace(&self.subset)?;
        let u = self.decomposition.isometry();
        let mu = u.adjoint() * kept.matrix() * u;
        let (dim_r, dim_a) = (self.decomposition.dim_r(), self.decomposition.dim_a());
        let mut logical = DMatrix::zeros(dim_r, dim_r);
        for i in 0..dim_r {
            for j in 0..dim_r {
                let mut acc = C64::new(0.0, 0.0);
                for a in 0..dim_a {
                    acc += mu[(i * dim_a + a, j * dim_a + a)];
                }
                logical[(i, j)] = acc;
            }
        }
        let leaked = kept.trace().re - mu.trace().re;
        let out = &self.codeword_matrix * logical * self.codeword_matrix.adjoint()
            + self.completion.matrix() * C64::new(leaked, 0.0);
        DensityMatrix::new(self.layout.clone(), out)
    }
}

pub fn build_recovery(
    decomposition: &StructureDecomposition,
    layout: &SystemLayout,
    subset: &SiteSubset,
) -> Result<RecoveryChannel> {
    let basis = reconstruct_basis(
        layout,
        subset,
        decomposition.isometry(),
        decomposition.psi(),
        decomposition.dim_r(),
    )?;
    let d = layout.total_dim();
    let codeword_matrix = DMatrix::from_fn(d, basis.len(), |r, c| basis[c].amplitudes()[r]);
    let completion = DensityMatrix::from_pure(&basis[0]);
    Ok(RecoveryChannel {
        decomposition: decomposition.clone(),
        layout: layout.clone(),
        subset: subset.clone(),
        codeword_matrix,
        completion,
    })
}

/// Outcome of [`verify_recovery`].
#[derive(Debug, Clone, Copy, Serialize)]
pub struct RecoveryVerification {
    /// Max |R(E(ρ̃)) − ρ̃| over sampled code-supported densities.
    pub max_residual: f64,
    /// Max |tr R(ρ) − 1| over sampled full-space densities.
    pub max_trace_deviation: f64,
}

/// Samples random mixed states supported on the code, sends them through the
/// channel and the recovery, and reports the worst round-trip error. Also
/// probes trace preservation of the recovery on full-space densities.
pub fn verify_recovery(
    code: &CodeSubspace,
    channel: &Channel,
    recovery: &RecoveryChannel,
    trials: usize,
    seed: u64,
) -> Result<RecoveryVerification> {
    let mut rng = sampling::rng_from_seed(seed);
    let mut max_residual = 0.0f64;
    let mut max_trace_deviation = 0.0f64;
    for _ in 0..trials.max(1) {
        let w = sampling::random_density_coefficients(&mut rng, code.dim());
        let encoded = code.density_from_coefficients(&w)?;
        let recovered = recovery.apply(&channel.apply(&encoded)?)?;
        max_residual = max_residual.max(max_abs_diff(recovered.matrix(), encoded.matrix()));

        let probe = sampling::random_density(&mut rng, code.layout())?;
        let out = recovery.apply(&probe)?;
        max_trace_deviation = max_trace_deviation.max((out.trace() - C64::new(1.0, 0.0)).norm());
    }
    Ok(RecoveryVerification {
        max_residual,
        max_trace_deviation,
    })
}

/// Outcome of [`expectation_constancy`].
#[derive(Debug, Clone)]
pub struct ExpectationReport {
    pub constant: bool,
    /// Mean expectation value over the spanning set of code states.
    pub value: C64,
    pub max_deviation: f64,
    /// ⟨ψ|(I ⊗ X)|ψ⟩ from the decomposition, when one exists.
    pub decomposition_value: Option<C64>,
}

/// Checks that an operator supported on the erased sites has a constant
/// expectation value across the code, evaluating it on every basis state and
/// on all pairwise real and imaginary superpositions. On correctable codes
/// the constant is cross-checked against the ancilla-erased state.
pub fn expectation_constancy(
    code: &CodeSubspace,
    subset: &SiteSubset,
    x_on_subset: &DMatrix<C64>,
    tol: f64,
) -> Result<ExpectationReport> {
    let x_full = embed_on_subset(code.layout(), subset, x_on_subset)?;
    let mut states: Vec<DVector<C64>> = code
        .basis()
        .iter()
        .map(|v| v.amplitudes().clone())
        .collect();
    let w = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    for i in 0..code.dim() {
        for j in (i + 1)..code.dim() {
            let (a, b) = (code.basis()[i].amplitudes(), code.basis()[j].amplitudes());
            for factor in [
                C64::new(1.0, 0.0),
                C64::new(-1.0, 0.0),
                C64::new(0.0, 1.0),
                C64::new(0.0, -1.0),
            ] {
                states.push((a + b * factor) * w);
            }
        }
    }
    let values: Vec<C64> = states
        .iter()
        .map(|s| {
            let image = &x_full * s;
            s.dotc(&image)
        })
        .collect();
    let mean = values.iter().sum::<C64>() / C64::new(values.len() as f64, 0.0);
    let max_deviation = values
        .iter()
        .map(|v| (v - mean).norm())
        .fold(0.0f64, f64::max);

    let decomposition_value = match decompose(code, subset, tol) {
        Ok(d) => {
            let psi_m = d.psi_matrix();
            // ⟨ψ|(I ⊗ X)|ψ⟩ = Σ_a ψ_a† X ψ_a over ancilla rows
            let mut acc = C64::new(0.0, 0.0);
            for a in 0..d.dim_a() {
                let row = psi_m.row(a).transpose();
                let image = x_on_subset * &row;
                acc += row.dotc(&image);
            }
            Some(acc)
        }
        Err(_) => None,
    };

    Ok(ExpectationReport {
        constant: max_deviation <= tol,
        value: mean,
        max_deviation,
        decomposition_value,
    })
}

/// Three-valued verdict of a single decider. Residuals in (tol, 10·tol]
/// count as indeterminate rather than pass/fail, guarding against
/// tolerance-edge flakiness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Indeterminate,
}

impl Verdict {
    fn classify(residual: f64, tol: f64) -> Verdict {
        if residual <= tol {
            Verdict::Pass
        } else if residual <= 10.0 * tol {
            Verdict::Indeterminate
        } else {
            Verdict::Fail
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConditionReport {
    pub verdict: Verdict,
    /// The decider's numeric residual; absent when the quantity could not be
    /// computed (e.g. no decomposition exists).
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl ConditionReport {
    fn from_residual(residual: f64, tol: f64) -> Self {
        ConditionReport {
            verdict: Verdict::classify(residual, tol),
            residual: Some(residual),
            detail: None,
        }
    }
}

/// Aggregate verdict across the five deciders.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OverallVerdict {
    Correctable,
    NotCorrectable,
    Indeterminate,
    /// The deciders did not agree. They are equivalent in exact arithmetic,
    /// so this flags a numerical-tolerance problem, never a property of the
    /// code; it is surfaced rather than majority-voted away.
    Disagreement,
}

#[derive(Debug, Clone, Serialize)]
pub struct CorrectabilityReport {
    pub separability: ConditionReport,
    pub mutual_information: ConditionReport,
    pub knill_laflamme: ConditionReport,
    pub decomposition: ConditionReport,
    pub recovery_roundtrip: ConditionReport,
    pub overall: OverallVerdict,
}

impl CorrectabilityReport {
    pub fn conditions(&self) -> [&ConditionReport; 5] {
        [
            &self.separability,
            &self.mutual_information,
            &self.knill_laflamme,
            &self.decomposition,
            &self.recovery_roundtrip,
        ]
    }

    pub fn is_correctable(&self) -> bool {
        self.overall == OverallVerdict::Correctable
    }
}

/// Number of random round-trip trials run by [`full_report`]'s recovery
/// decider.
pub const REPORT_RECOVERY_TRIALS: usize = 20;

/// Runs all five deciders and aggregates. `sigma_e` picks the replacement
/// state for the recovery round trip (the verdict never depends on it);
/// `None` means maximally mixed.
pub fn full_report(
    code: &CodeSubspace,
    subset: &SiteSubset,
    sigma_e: Option<&DensityMatrix>,
    tol: f64,
    seed: u64,
) -> Result<CorrectabilityReport> {
    let report = validate_code(code);
    if !report.passed {
        return Err(Error::Validation(format!(
            "code basis is not orthonormal (max Gram deviation {:.3e})",
            report.max_gram_deviation
        )));
    }
    if subset.is_empty() {
        return Err(Error::InvalidSubset("replaced subset must be non-empty".into()));
    }
    subset.validate(code.layout())?;

    let (_, sep_residual) = check_separability(code, subset, tol)?;
    let separability = ConditionReport::from_residual(sep_residual, tol);

    let mi = mutual_information_parts(code, subset)?;
    let mutual_information = ConditionReport::from_residual(mi.information.max(0.0), tol);

    let kraus = erasure_kraus_set(code.layout(), subset)?;
    let kl = knill_laflamme_check(code, &kraus, tol)?;
    let knill_laflamme = ConditionReport::from_residual(kl.max_residual, tol);

    // Run the constructive decider at the indeterminate boundary so
    // borderline reconstructions are classified by their measured residual
    // instead of hard-failing.
    let decomposition_result = decompose(code, subset, 10.0 * tol);
    let (decomposition, recovery_roundtrip) = match &decomposition_result {
        Ok(d) => {
            let residual = reconstruction_residual(code, subset, d)?;
            let decomposition = ConditionReport::from_residual(residual, tol);

            let e_layout = code.layout().subset_layout(subset)?;
            let sigma = match sigma_e {
                Some(s) => s.clone(),
                None => DensityMatrix::maximally_mixed(e_layout),
            };
            let channel = Channel::Replacer(ReplacerChannel::new(
                code.layout(),
                subset.clone(),
                sigma,
            )?);
            let recovery = build_recovery(d, code.layout(), subset)?;
            let verification =
                verify_recovery(code, &channel, &recovery, REPORT_RECOVERY_TRIALS, seed)?;
            let recovery_roundtrip =
                ConditionReport::from_residual(verification.max_residual, tol);
            (decomposition, recovery_roundtrip)
        }
        Err(err) => {
            let failed = |detail: String| ConditionReport {
                verdict: Verdict::Fail,
                residual: None,
                detail: Some(detail),
            };
            (
                failed(err.to_string()),
                failed("no decomposition, recovery not constructed".into()),
            )
        }
    };

    let report = CorrectabilityReport {
        separability,
        mutual_information,
        knill_laflamme,
        decomposition,
        recovery_roundtrip,
        overall: OverallVerdict::Correctable,
    };
    let has = |v: Verdict| report.conditions().iter().any(|c| c.verdict == v);
    let overall = if has(Verdict::Pass) && has(Verdict::Fail) {
        OverallVerdict::Disagreement
    } else if has(Verdict::Indeterminate) {
        OverallVerdict::Indeterminate
    } else if has(Verdict::Pass) {
        OverallVerdict::Correctable
    } else {
        OverallVerdict::NotCorrectable
    };
    Ok(CorrectabilityReport { overall, ..report })
}

/// Serialized decomposition (External Interfaces schema): complex numbers as
/// [re, im] pairs, the isometry row-major, psi in [ancilla, erased…] order.
#[derive(Debug, Clone, Serialize, serde::Deserialize)]
pub struct DecompositionFile {
    pub schema: String,
    #[serde(rename = "dimR")]
    pub dim_r: usize,
    #[serde(rename = "dimA")]
    pub dim_a: usize,
    #[serde(rename = "U")]
    pub u: Vec<Vec<[f64; 2]>>,
    #[serde(rename = "Gamma")]
    pub gamma: Vec<f64>,
    pub psi: Vec<[f64; 2]>,
    #[serde(rename = "E")]
    pub e: Vec<usize>,
    pub dims: Vec<usize>,
}

impl DecompositionFile {
    pub fn new(
        decomposition: &StructureDecomposition,
        layout: &SystemLayout,
        subset: &SiteSubset,
    ) -> Self {
        let u = decomposition.isometry();
        DecompositionFile {
            schema: "decomposition/1".into(),
            dim_r: decomposition.dim_r(),
            dim_a: decomposition.dim_a(),
            u: (0..u.nrows())
                .map(|r| (0..u.ncols()).map(|c| [u[(r, c)].re, u[(r, c)].im]).collect())
                .collect(),
            gamma: decomposition.gamma().to_vec(),
            psi: decomposition
                .psi()
                .amplitudes()
                .iter()
                .map(|z| [z.re, z.im])
                .collect(),
            e: subset.indices().to_vec(),
            dims: layout.dims().to_vec(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("decomposition serialization");
        s.push('\n');
        s
    }
}

/// Eigenvalues of a Hermitian matrix, descending — convenience re-export for
/// report rendering.
pub fn spectrum(m: &DMatrix<C64>, tol: f64) -> Result<Vec<f64>> {
    Ok(hermitian_eig(m, tol)?.eigenvalues)
}
