//! Code subspaces: representation, validation, random generation through the
//! isometry/ancilla-state construction, and file I/O.

use std::collections::BTreeMap;
use std::path::Path;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sampling;
use crate::structure::{reconstruct_basis, StructureDecomposition};
use crate::tensor::{
    max_abs, DensityMatrix, SiteSubset, StateVector, SystemLayout, C64,
};
use crate::DEFAULT_TOL;

/// An orthonormal list of state vectors spanning a subspace of the layout's
/// Hilbert space.
#[derive(Debug, Clone)]
pub struct CodeSubspace {
    layout: SystemLayout,
    basis: Vec<StateVector>,
    label: String,
}

impl CodeSubspace {
    /// Structural construction: every basis vector must live on `layout` and
    /// the basis must be non-empty and no larger than the space. Orthonormality
    /// is *not* enforced here — [`validate_code`] reports on it, and the file
    /// loader rejects violations.
    pub fn new(layout: SystemLayout, basis: Vec<StateVector>, label: impl Into<String>) -> Result<Self> {
        if basis.is_empty() || basis.len() > layout.total_dim() {
            return Err(Error::Validation(format!(
                "basis size {} outside 1..={}",
                basis.len(),
                layout.total_dim()
            )));
        }
        for v in &basis {
            if v.layout() != &layout {
                return Err(Error::LayoutMismatch {
                    expected: layout.total_dim(),
                    found: v.layout().total_dim(),
                });
            }
        }
        Ok(Self {
            layout,
            basis,
            label: label.into(),
        })
    }

    pub fn layout(&self) -> &SystemLayout {
        &self.layout
    }

    pub fn basis(&self) -> &[StateVector] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Basis vectors as the columns of a (total_dim × dim) matrix.
    pub fn basis_matrix(&self) -> DMatrix<C64> {
        DMatrix::from_fn(self.layout.total_dim(), self.basis.len(), |r, c| {
            self.basis[c].amplitudes()[r]
        })
    }

    /// Density operator Σ w_ij |ĩ⟩⟨j̃| from a coefficient matrix on the code.
    pub fn density_from_coefficients(&self, w: &DMatrix<C64>) -> Result<DensityMatrix> {
        if w.nrows() != self.dim() || w.ncols() != self.dim() {
            return Err(Error::LayoutMismatch {
                expected: self.dim(),
                found: w.nrows(),
            });
        }
        let b = self.basis_matrix();
        DensityMatrix::new(self.layout.clone(), &b * w * b.adjoint())
    }
}

/// Outcome of [`validate_code`].
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub passed: bool,
    /// Max |G − I| over the Gram matrix G of the basis.
    pub max_gram_deviation: f64,
}

/// Checks pairwise orthonormality of the code basis.
pub fn validate_code(code: &CodeSubspace) -> ValidationReport {
    let b = code.basis_matrix();
    let gram = b.adjoint() * &b;
    let eye = DMatrix::identity(code.dim(), code.dim());
    let max_gram_deviation = max_abs(&(gram - eye));
    ValidationReport {
        passed: max_gram_deviation <= DEFAULT_TOL,
        max_gram_deviation,
    }
}

/// Gram–Schmidt replacement basis for a code whose input basis is not
/// orthonormal. Never applied silently by any loader; callers opt in.
pub fn orthonormalize(code: &CodeSubspace) -> Result<CodeSubspace> {
    let mut vectors: Vec<DVector<C64>> = Vec::with_capacity(code.dim());
    for v in code.basis() {
        let mut w = v.amplitudes().clone();
        for prev in &vectors {
            let overlap = prev.dotc(&w);
            w -= prev * overlap;
        }
        let norm = w.norm();
        if norm < 1e-10 {
            return Err(Error::Validation(
                "basis vectors are linearly dependent; cannot orthonormalize".into(),
            ));
        }
        w /= C64::new(norm, 0.0);
        vectors.push(w);
    }
    let basis = vectors
        .into_iter()
        .map(|w| StateVector::new(code.layout().clone(), w))
        .collect::<Result<Vec<_>>>()?;
    CodeSubspace::new(code.layout().clone(), basis, code.label().to_string())
}

/// Draws a code that is correctable for every replacer on `subset` by
/// construction: a Haar-random isometry applied to (logical ⊗ fixed
/// entangled ancilla state). Returns the code together with the exact
/// decomposition used to build it.
pub fn generate_code(
    layout: &SystemLayout,
    subset: &SiteSubset,
    dim_s: usize,
    dim_a: usize,
    seed: u64,
) -> Result<(CodeSubspace, StructureDecomposition)> {
    subset.validate(layout)?;
    if subset.is_empty() {
        return Err(Error::InvalidSubset("replaced subset must be non-empty".into()));
    }
    let e_layout = layout.subset_layout(subset)?;
    let comp = subset.complement(layout)?;
    let dim_comp = layout.subset_layout(&comp)?.total_dim();
    let dim_e = e_layout.total_dim();
    if dim_s == 0 || dim_a == 0 {
        return Err(Error::DimensionBound("dim S and dim A must be positive".into()));
    }
    if dim_s * dim_a > dim_comp {
        return Err(Error::DimensionBound(format!(
            "(dim A)(dim S) = {} exceeds the complementary dimension {dim_comp}",
            dim_s * dim_a
        )));
    }
    if dim_a > dim_e {
        return Err(Error::DimensionBound(format!(
            "dim A = {dim_a} exceeds dim E = {dim_e}; no rank-{dim_a} ancilla state exists"
        )));
    }

    let mut rng = sampling::rng_from_seed(seed);
    let u = sampling::haar_isometry(&mut rng, dim_comp, dim_s * dim_a);

    // Full-Schmidt-rank ancilla-erased state in canonical form: descending
    // coefficients bounded away from the rank threshold.
    let mut raw: Vec<f64> = (0..dim_a).map(|_| rng.gen_range(0.5..1.5)).collect();
    let norm = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
    raw.iter_mut().for_each(|x| *x /= norm);
    raw.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let gamma: Vec<f64> = raw.iter().map(|s| s * s).collect();

    let e_side = sampling::haar_isometry(&mut rng, dim_e, dim_a);
    let mut psi_amps = DVector::zeros(dim_a * dim_e);
    for a in 0..dim_a {
        for x in 0..dim_e {
            psi_amps[a * dim_e + x] = C64::new(raw[a], 0.0) * e_side[(x, a)];
        }
    }
    let mut psi_dims = vec![dim_a];
    psi_dims.extend_from_slice(e_layout.dims());
    let psi = StateVector::new(SystemLayout::allowing_unit_sites(psi_dims)?, psi_amps)?;

    let basis = reconstruct_basis(layout, subset, &u, &psi, dim_s)?;
    let code = CodeSubspace::new(layout.clone(), basis, format!("generated(seed={seed})"))?;
    let decomposition = StructureDecomposition::new(
        dim_s,
        dim_a,
        u,
        gamma,
        psi,
        DensityMatrix::maximally_mixed(e_layout),
    )?;
    Ok((code, decomposition))
}

/// True iff the decomposition's ancilla-erased state is a product across the
/// ancilla : erased-sites cut (largest Schmidt coefficient ≥ 1 − tol). Such
/// codes are exactly the trivial ones: a fixed factor on the erased sites
/// times a plain subspace of the rest, and that factor appears in every code
/// state.
pub fn triviality_check(decomposition: &StructureDecomposition, tol: f64) -> Result<bool> {
    let psi = decomposition.psi();
    if decomposition.dim_a() == 1 {
        return Ok(true);
    }
    let e_sites = SiteSubset::new((2..=psi.layout().num_sites()).collect())?;
    let sd = psi.schmidt(&e_sites, crate::RANK_TOL)?;
    Ok(sd.coefficients.first().is_some_and(|&s| s >= 1.0 - tol))
}

/// Serialized form of a code subspace. Complex numbers are always encoded as
/// two-element `[re, im]` arrays; amplitudes are listed in big-endian basis
/// order (site 1 most significant).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CodeFile {
    pub dims: Vec<usize>,
    pub label: String,
    pub basis: Vec<Vec<[f64; 2]>>,
    #[serde(default)]
    pub meta: BTreeMap<String, serde_json::Value>,
}

impl CodeFile {
    pub fn from_code(code: &CodeSubspace) -> Self {
        CodeFile {
            dims: code.layout().dims().to_vec(),
            label: code.label().to_string(),
            basis: code
                .basis()
                .iter()
                .map(|v| v.amplitudes().iter().map(|z| [z.re, z.im]).collect())
                .collect(),
            meta: BTreeMap::new(),
        }
    }

    /// Builds the code: each vector is normalized (published bases often omit
    /// normalization constants), then the result must pass orthonormality
    /// validation. Non-orthonormal input is rejected, never silently fixed.
    pub fn into_code(self) -> Result<CodeSubspace> {
        let layout = SystemLayout::new(self.dims)?;
        let expected_len = layout.total_dim();
        let mut basis = Vec::with_capacity(self.basis.len());
        for (i, raw) in self.basis.iter().enumerate() {
            if raw.len() != expected_len {
                return Err(Error::Parse(format!(
                    "basis vector {i} has {} amplitudes, layout needs {expected_len}",
                    raw.len()
                )));
            }
            let amps = DVector::from_iterator(raw.len(), raw.iter().map(|p| C64::new(p[0], p[1])));
            let v = StateVector::new(layout.clone(), amps)?;
            // restore normalization constants that published bases omit, but
            // leave already-normalized data untouched so round trips are exact
            let v = if (v.norm() - 1.0).abs() > 1e-12 {
                v.normalized()?
            } else {
                v
            };
            basis.push(v);
        }
        let code = CodeSubspace::new(layout, basis, self.label)?;
        let report = validate_code(&code);
        if !report.passed {
            return Err(Error::Validation(format!(
                "basis is not orthonormal (max Gram deviation {:.3e}); \
                 fix the input or run the `orthonormalize` utility explicitly",
                report.max_gram_deviation
            )));
        }
        Ok(code)
    }
}

pub fn code_to_json(code: &CodeSubspace) -> String {
    let mut s = serde_json::to_string_pretty(&CodeFile::from_code(code))
        .expect("code file serialization cannot fail");
    s.push('\n');
    s
}

pub fn code_from_json(text: &str) -> Result<CodeSubspace> {
    let file: CodeFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    file.into_code()
}

pub fn save_code(code: &CodeSubspace, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, code_to_json(code))?;
    Ok(())
}

pub fn load_code(path: impl AsRef<Path>) -> Result<CodeSubspace> {
    let text = std::fs::read_to_string(path)?;
    code_from_json(&text)
}
