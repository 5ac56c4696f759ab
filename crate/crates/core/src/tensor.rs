//! Dense complex linear algebra on multi-site tensor-product spaces.
//!
//! Basis-ordering convention used throughout the crate: site 1 is the most
//! significant digit of the computational-basis index. A basis ket
//! |i_1 i_2 … i_n⟩ on local dimensions (d_1, …, d_n) lives at index
//! i_1·(d_2⋯d_n) + i_2·(d_3⋯d_n) + … + i_n.
//!
//! All operations here are pure functions on immutable values; nothing holds
//! shared mutable state.

use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{Error, Result};
use crate::RANK_TOL;

pub type C64 = Complex<f64>;

/// Relative threshold for locating the first "nonzero" component when fixing
/// eigenvector / Schmidt-vector phases.
const PHASE_SCAN_REL: f64 = 1e-8;

/// Ordered list of per-site local dimensions defining a tensor-product space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemLayout {
    dims: Vec<usize>,
}

impl SystemLayout {
    /// A layout whose local dimensions are all at least 2. An empty list is
    /// allowed and describes the trivial one-dimensional space (it shows up
    /// as the complement of a full erasure).
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if let Some(&d) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidLayout(format!(
                "local dimension {d} < 2 (dims {dims:?})"
            )));
        }
        Ok(Self { dims })
    }

    /// Like [`SystemLayout::new`] but tolerating unit-dimensional sites.
    /// Used for internal registers such as a trivial ancilla (dim A = 1);
    /// user-facing inputs go through `new`.
    pub fn allowing_unit_sites(dims: Vec<usize>) -> Result<Self> {
        if let Some(&d) = dims.iter().find(|&&d| d < 1) {
            return Err(Error::InvalidLayout(format!(
                "local dimension {d} < 1 (dims {dims:?})"
            )));
        }
        Ok(Self { dims })
    }

    pub fn qubits(n: usize) -> Self {
        Self { dims: vec![2; n] }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn num_sites(&self) -> usize {
        self.dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    /// Stride of each site: index contribution of one unit of its digit.
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1usize; self.dims.len()];
        for k in (0..self.dims.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * self.dims[k + 1];
        }
        strides
    }

    /// Digits (i_1, …, i_n) of a basis index, site 1 first.
    pub fn index_to_digits(&self, mut index: usize) -> Vec<usize> {
        let mut digits = vec![0usize; self.dims.len()];
        for k in (0..self.dims.len()).rev() {
            digits[k] = index % self.dims[k];
            index /= self.dims[k];
        }
        digits
    }

    pub fn digits_to_index(&self, digits: &[usize]) -> usize {
        debug_assert_eq!(digits.len(), self.dims.len());
        let mut index = 0usize;
        for (k, &d) in digits.iter().enumerate() {
            debug_assert!(d < self.dims[k]);
            index = index * self.dims[k] + d;
        }
        index
    }

    /// Layout of the given subset of sites, in site order.
    pub fn subset_layout(&self, subset: &SiteSubset) -> Result<SystemLayout> {
        subset.validate(self)?;
        let dims = subset.indices().iter().map(|&s| self.dims[s - 1]).collect();
        SystemLayout::allowing_unit_sites(dims)
    }
}

/// Strictly increasing list of 1-based site positions.
///
/// May be empty (useful for trivial scan rows); operations that need a
/// non-empty subset check for themselves.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SiteSubset {
    indices: Vec<usize>,
}

impl SiteSubset {
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        for w in indices.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::InvalidSubset(format!(
                    "site indices must be strictly increasing, got {indices:?}"
                )));
            }
        }
        if indices.first().is_some_and(|&s| s == 0) {
            return Err(Error::InvalidSubset("site indices are 1-based".into()));
        }
        Ok(Self { indices })
    }

    pub fn empty() -> Self {
        Self { indices: vec![] }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, site: usize) -> bool {
        self.indices.binary_search(&site).is_ok()
    }

    /// Checks that every index lies within the layout.
    pub fn validate(&self, layout: &SystemLayout) -> Result<()> {
        let n = layout.num_sites();
        match self.indices.last() {
            Some(&last) if last > n => Err(Error::InvalidSubset(format!(
                "site {last} out of range for {n}-site layout"
            ))),
            _ => Ok(()),
        }
    }

    pub fn complement(&self, layout: &SystemLayout) -> Result<SiteSubset> {
        self.validate(layout)?;
        let indices = (1..=layout.num_sites())
            .filter(|s| !self.contains(*s))
            .collect();
        Ok(SiteSubset { indices })
    }
}

/// Precomputed index arithmetic for a bipartition of a layout into a subset
/// and its complement. `fuse(c, e)` recombines a complement basis index `c`
/// and a subset basis index `e` into the full-space index, respecting the
/// original site order.
#[derive(Debug, Clone)]
pub struct BipartiteIndex {
    comp_base: Vec<usize>,
    sub_base: Vec<usize>,
    comp_layout: SystemLayout,
    sub_layout: SystemLayout,
}

impl BipartiteIndex {
    pub fn new(layout: &SystemLayout, subset: &SiteSubset) -> Result<Self> {
        subset.validate(layout)?;
        let comp = subset.complement(layout)?;
        let strides = layout.strides();
        let sub_layout = layout.subset_layout(subset)?;
        let comp_layout = layout.subset_layout(&comp)?;

        let base_table = |sites: &[usize], part: &SystemLayout| -> Vec<usize> {
            (0..part.total_dim())
                .map(|idx| {
                    part.index_to_digits(idx)
                        .iter()
                        .zip(sites)
                        .map(|(&digit, &site)| digit * strides[site - 1])
                        .sum()
                })
                .collect()
        };
        let sub_base = base_table(subset.indices(), &sub_layout);
        let comp_base = base_table(comp.indices(), &comp_layout);
        Ok(Self {
            comp_base,
            sub_base,
            comp_layout,
            sub_layout,
        })
    }

    pub fn comp_dim(&self) -> usize {
        self.comp_base.len()
    }

    pub fn sub_dim(&self) -> usize {
        self.sub_base.len()
    }

    pub fn comp_layout(&self) -> &SystemLayout {
        &self.comp_layout
    }

    pub fn sub_layout(&self) -> &SystemLayout {
        &self.sub_layout
    }

    #[inline]
    pub fn fuse(&self, comp_index: usize, sub_index: usize) -> usize {
        self.comp_base[comp_index] + self.sub_base[sub_index]
    }
}

/// Pure state on a [`SystemLayout`].
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    layout: SystemLayout,
    amplitudes: DVector<C64>,
}

impl StateVector {
    pub fn new(layout: SystemLayout, amplitudes: DVector<C64>) -> Result<Self> {
        if amplitudes.len() != layout.total_dim() {
            return Err(Error::LayoutMismatch {
                expected: layout.total_dim(),
                found: amplitudes.len(),
            });
        }
        Ok(Self { layout, amplitudes })
    }

    /// Computational basis ket |digits⟩.
    pub fn basis_state(layout: SystemLayout, digits: &[usize]) -> Result<Self> {
        if digits.len() != layout.num_sites()
            || digits.iter().zip(layout.dims()).any(|(&d, &dim)| d >= dim)
        {
            return Err(Error::InvalidLayout(format!(
                "digits {digits:?} do not fit layout {:?}",
                layout.dims()
            )));
        }
        let mut amplitudes = DVector::zeros(layout.total_dim());
        amplitudes[layout.digits_to_index(digits)] = C64::new(1.0, 0.0);
        Ok(Self { layout, amplitudes })
    }

    pub fn layout(&self) -> &SystemLayout {
        &self.layout
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    pub fn inner(&self, other: &StateVector) -> C64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    pub fn normalized(mut self) -> Result<Self> {
        let norm = self.norm();
        if norm <= f64::EPSILON {
            return Err(Error::NotNormalized { norm });
        }
        self.amplitudes /= C64::new(norm, 0.0);
        Ok(self)
    }

    fn check_normalized(&self) -> Result<()> {
        let norm = self.norm();
        if (norm - 1.0).abs() > 1e-8 {
            return Err(Error::NotNormalized { norm });
        }
        Ok(())
    }

    /// Reorders tensor factors. `perm[k-1]` is the new position of old site
    /// `k` (1-based): old site k's digit lands at position perm[k-1]. The
    /// operation is a bijection on coordinates, so it is exact.
    pub fn permute_sites(&self, perm: &[usize]) -> Result<StateVector> {
        let map = PermutationMap::new(&self.layout, perm)?;
        let mut amplitudes = DVector::zeros(self.amplitudes.len());
        for (old, &new) in map.index_map.iter().enumerate() {
            amplitudes[new] = self.amplitudes[old];
        }
        Ok(StateVector {
            layout: map.new_layout,
            amplitudes,
        })
    }

    /// Reshapes the amplitudes into a (complement × subset) matrix under the
    /// site bipartition defined by `cut`.
    pub fn as_bipartite_matrix(&self, cut: &SiteSubset) -> Result<(DMatrix<C64>, BipartiteIndex)> {
        let split = BipartiteIndex::new(&self.layout, cut)?;
        let m = DMatrix::from_fn(split.comp_dim(), split.sub_dim(), |c, e| {
            self.amplitudes[split.fuse(c, e)]
        });
        Ok((m, split))
    }

    /// Schmidt decomposition across the bipartition (complement of `cut` :
    /// `cut`). Coefficients are strictly decreasingly sorted and truncated at
    /// `rank_tol`; left vectors live on the complement, right vectors on the
    /// cut. Phases follow the same gauge as [`hermitian_eig`]: the first
    /// significant component of each left vector is real positive, with the
    /// compensating phase pushed into the right vector.
    pub fn schmidt(&self, cut: &SiteSubset, rank_tol: f64) -> Result<SchmidtDecomposition> {
        self.check_normalized()?;
        let (m, split) = self.as_bipartite_matrix(cut)?;
        let svd = m.svd(true, true);
        let u = svd.u.expect("svd requested u");
        let vt = svd.v_t.expect("svd requested v_t");

        let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
        order.sort_by(|&a, &b| {
            svd.singular_values[b]
                .partial_cmp(&svd.singular_values[a])
                .unwrap()
                .then(a.cmp(&b))
        });

        let mut coefficients = Vec::new();
        let mut left = Vec::new();
        let mut right = Vec::new();
        for &k in &order {
            let s = svd.singular_values[k];
            if s <= rank_tol {
                break;
            }
            let mut lvec = DVector::from_iterator(u.nrows(), u.column(k).iter().copied());
            let mut rvec = DVector::from_iterator(vt.ncols(), vt.row(k).iter().copied());
            let phase = leading_phase(lvec.as_slice());
            lvec *= phase.conj();
            rvec *= phase;
            coefficients.push(s);
            left.push(StateVector::new(split.comp_layout().clone(), lvec)?);
            right.push(StateVector::new(split.sub_layout().clone(), rvec)?);
        }
        Ok(SchmidtDecomposition {
            coefficients,
            left,
            right,
        })
    }
}

/// Result of [`StateVector::schmidt`]: v = Σ_k s_k |left_k⟩ ⊗ |right_k⟩
/// after moving the cut sites to the trailing position.
#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    pub coefficients: Vec<f64>,
    pub left: Vec<StateVector>,
    pub right: Vec<StateVector>,
}

impl SchmidtDecomposition {
    pub fn rank(&self) -> usize {
        self.coefficients.len()
    }
}

/// Mixed state on a [`SystemLayout`].
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    layout: SystemLayout,
    matrix: DMatrix<C64>,
}

impl DensityMatrix {
    /// Wraps a square matrix of the right size. Only the shape is checked
    /// here; use [`DensityMatrix::check_density`] to enforce the Hermitian /
    /// positive / unit-trace invariants on untrusted input.
    pub fn new(layout: SystemLayout, matrix: DMatrix<C64>) -> Result<Self> {
        if matrix.nrows() != layout.total_dim() || matrix.ncols() != layout.total_dim() {
            return Err(Error::LayoutMismatch {
                expected: layout.total_dim(),
                found: matrix.nrows().max(matrix.ncols()),
            });
        }
        Ok(Self { layout, matrix })
    }

    pub fn from_pure(state: &StateVector) -> Self {
        let amps = state.amplitudes();
        let matrix = amps * amps.adjoint();
        Self {
            layout: state.layout().clone(),
            matrix,
        }
    }

    pub fn maximally_mixed(layout: SystemLayout) -> Self {
        let d = layout.total_dim();
        let matrix = DMatrix::from_diagonal_element(d, d, C64::new(1.0 / d as f64, 0.0));
        Self { layout, matrix }
    }

    pub fn layout(&self) -> &SystemLayout {
        &self.layout
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    /// Hermitian within tol, eigenvalues ≥ −tol, trace 1 within tol.
    pub fn check_density(&self, tol: f64) -> Result<()> {
        let herm_dev = max_abs(&(&self.matrix - self.matrix.adjoint()));
        if herm_dev > tol {
            return Err(Error::NotDensity(format!(
                "not Hermitian (deviation {herm_dev:.3e})"
            )));
        }
        let trace_dev = (self.trace() - C64::new(1.0, 0.0)).norm();
        if trace_dev > tol {
            return Err(Error::NotDensity(format!(
                "trace differs from 1 by {trace_dev:.3e}"
            )));
        }
        let eig = hermitian_eig(&self.matrix, tol.max(1e-12))?;
        if let Some(&lambda) = eig.eigenvalues.last() {
            if lambda < -tol {
                return Err(Error::NotDensity(format!(
                    "negative eigenvalue {lambda:.3e}"
                )));
            }
        }
        Ok(())
    }

    /// Traces out the sites in `subset`, returning the state of the
    /// complementary sites (in their original relative order).
    pub fn partial_trace(&self, subset: &SiteSubset) -> Result<DensityMatrix> {
        let split = BipartiteIndex::new(&self.layout, subset)?;
        let (dc, de) = (split.comp_dim(), split.sub_dim());
        let mut out = DMatrix::zeros(dc, dc);
        for c1 in 0..dc {
            for c2 in 0..dc {
                let mut acc = C64::new(0.0, 0.0);
                for e in 0..de {
                    acc += self.matrix[(split.fuse(c1, e), split.fuse(c2, e))];
                }
                out[(c1, c2)] = acc;
            }
        }
        DensityMatrix::new(split.comp_layout().clone(), out)
    }

    /// Reduced state on `keep` (traces out everything else).
    pub fn reduced_state(&self, keep: &SiteSubset) -> Result<DensityMatrix> {
        self.partial_trace(&keep.complement(&self.layout)?)
    }

    /// Site reordering by conjugation with the permutation of coordinates;
    /// see [`StateVector::permute_sites`] for the `perm` convention.
    pub fn permute_sites(&self, perm: &[usize]) -> Result<DensityMatrix> {
        let map = PermutationMap::new(&self.layout, perm)?;
        let d = self.matrix.nrows();
        let mut out = DMatrix::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                out[(map.index_map[i], map.index_map[j])] = self.matrix[(i, j)];
            }
        }
        DensityMatrix::new(map.new_layout, out)
    }

    /// −Σ λ ln λ over eigenvalues above the rank threshold, in natural-log
    /// units; clamped at 0.
    pub fn von_neumann_entropy(&self) -> Result<f64> {
        let eig = hermitian_eig(&self.matrix, 1e-8)?;
        let h: f64 = eig
            .eigenvalues
            .iter()
            .filter(|&&l| l > RANK_TOL)
            .map(|&l| -l * l.ln())
            .sum();
        Ok(h.max(0.0))
    }
}

struct PermutationMap {
    new_layout: SystemLayout,
    index_map: Vec<usize>,
}

impl PermutationMap {
    fn new(layout: &SystemLayout, perm: &[usize]) -> Result<Self> {
        let n = layout.num_sites();
        if perm.len() != n {
            return Err(Error::InvalidPermutation(format!(
                "permutation length {} != site count {n}",
                perm.len()
            )));
        }
        let mut seen = vec![false; n];
        for &p in perm {
            if p == 0 || p > n || seen[p - 1] {
                return Err(Error::InvalidPermutation(format!(
                    "{perm:?} is not a permutation of 1..={n}"
                )));
            }
            seen[p - 1] = true;
        }
        let mut new_dims = vec![0usize; n];
        for (k, &p) in perm.iter().enumerate() {
            new_dims[p - 1] = layout.dims()[k];
        }
        let new_layout = SystemLayout::allowing_unit_sites(new_dims)?;
        let index_map = (0..layout.total_dim())
            .map(|idx| {
                let digits = layout.index_to_digits(idx);
                let mut new_digits = vec![0usize; n];
                for (k, &p) in perm.iter().enumerate() {
                    new_digits[p - 1] = digits[k];
                }
                new_layout.digits_to_index(&new_digits)
            })
            .collect();
        Ok(Self {
            new_layout,
            index_map,
        })
    }
}

/// Kronecker product under the big-endian convention (left factor is most
/// significant).
pub fn kron(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
    a.kronecker(b)
}

/// Eigendecomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEig {
    /// Sorted descending.
    pub eigenvalues: Vec<f64>,
    /// Corresponding eigenvectors as columns; each gauged so that its first
    /// significant component (lexicographic basis order) is real positive.
    pub eigenvectors: DMatrix<C64>,
}

/// Spectral decomposition m = V diag(λ) V† with deterministic ordering and
/// phase gauge. Fails if `m` is further than `tol` from Hermitian.
pub fn hermitian_eig(m: &DMatrix<C64>, tol: f64) -> Result<HermitianEig> {
    let deviation = max_abs(&(m - m.adjoint()));
    if deviation > tol {
        return Err(Error::NonHermitian { deviation });
    }
    // Symmetrize so the solver sees an exactly Hermitian input.
    let h = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let se = h.symmetric_eigen();

    let mut order: Vec<usize> = (0..se.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| {
        se.eigenvalues[b]
            .partial_cmp(&se.eigenvalues[a])
            .unwrap()
            .then(a.cmp(&b))
    });
    let eigenvalues: Vec<f64> = order.iter().map(|&k| se.eigenvalues[k]).collect();
    let n = m.nrows();
    let mut eigenvectors = DMatrix::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        let phase = leading_phase(se.eigenvectors.column(k).as_slice());
        for row in 0..n {
            eigenvectors[(row, col)] = se.eigenvectors[(row, k)] * phase.conj();
        }
    }
    Ok(HermitianEig {
        eigenvalues,
        eigenvectors,
    })
}

/// Principal square root of a positive semidefinite Hermitian matrix.
/// Eigenvalues in [−tol, 0] are clamped to zero; anything below −tol is
/// rejected.
pub fn psd_sqrt(m: &DMatrix<C64>, tol: f64) -> Result<DMatrix<C64>> {
    let eig = hermitian_eig(m, tol)?;
    if let Some(&lambda) = eig.eigenvalues.last() {
        if lambda < -tol {
            return Err(Error::NotDensity(format!(
                "matrix has negative eigenvalue {lambda:.3e}, no PSD square root"
            )));
        }
    }
    let sqrt_diag = DVector::from_iterator(
        eig.eigenvalues.len(),
        eig.eigenvalues
            .iter()
            .map(|&l| C64::new(l.max(0.0).sqrt(), 0.0)),
    );
    let v = &eig.eigenvectors;
    Ok(v * DMatrix::from_diagonal(&sqrt_diag) * v.adjoint())
}

/// Unit phase of the first component whose modulus exceeds a relative
/// threshold; multiplying by its conjugate makes that component real
/// positive.
fn leading_phase(values: &[C64]) -> C64 {
    let max = values.iter().map(|z| z.norm()).fold(0.0f64, f64::max);
    let thresh = max * PHASE_SCAN_REL;
    for z in values {
        if z.norm() > thresh {
            return z / z.norm();
        }
    }
    C64::new(1.0, 0.0)
}

/// Builds I_complement ⊗ M_subset in the *original* site order of `layout`,
/// where `m_sub` acts on the subset's own layout.
pub fn embed_on_subset(
    layout: &SystemLayout,
    subset: &SiteSubset,
    m_sub: &DMatrix<C64>,
) -> Result<DMatrix<C64>> {
    let split = BipartiteIndex::new(layout, subset)?;
    let de = split.sub_dim();
    if m_sub.nrows() != de || m_sub.ncols() != de {
        return Err(Error::LayoutMismatch {
            expected: de,
            found: m_sub.nrows(),
        });
    }
    let d = layout.total_dim();
    let mut out = DMatrix::zeros(d, d);
    for c in 0..split.comp_dim() {
        for e1 in 0..de {
            for e2 in 0..de {
                out[(split.fuse(c, e1), split.fuse(c, e2))] = m_sub[(e1, e2)];
            }
        }
    }
    Ok(out)
}

/// Builds A_complement ⊗ B_subset in the *original* site order of `layout`.
pub fn product_on_bipartition(
    split: &BipartiteIndex,
    comp_part: &DMatrix<C64>,
    sub_part: &DMatrix<C64>,
) -> DMatrix<C64> {
    let (dc, de) = (split.comp_dim(), split.sub_dim());
    debug_assert_eq!(comp_part.nrows(), dc);
    debug_assert_eq!(sub_part.nrows(), de);
    let d = dc * de;
    let mut out = DMatrix::zeros(d, d);
    for c1 in 0..dc {
        for c2 in 0..dc {
            let a = comp_part[(c1, c2)];
            for e1 in 0..de {
                for e2 in 0..de {
                    out[(split.fuse(c1, e1), split.fuse(c2, e2))] = a * sub_part[(e1, e2)];
                }
            }
        }
    }
    out
}

/// Max absolute entry, the ∞-norm used for residuals throughout.
pub fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_diff(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    max_abs(&(a - b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn pauli_x() -> DMatrix<C64> {
        DMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)])
    }

    fn pauli_z() -> DMatrix<C64> {
        DMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)])
    }

    fn ident(n: usize) -> DMatrix<C64> {
        DMatrix::identity(n, n)
    }

    #[test]
    fn kron_identities() {
        assert_eq!(kron(&ident(2), &ident(2)), ident(4));
    }

    #[test]
    fn kron_projectors() {
        let p = DMatrix::from_row_slice(2, 2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(0., 0.)]);
        let mut expected = DMatrix::zeros(4, 4);
        expected[(0, 0)] = c(1., 0.);
        assert_eq!(kron(&p, &p), expected);
    }

    #[test]
    fn kron_x_z_hand_expansion() {
        // 1-based entries {(1,3):1, (2,4):−1, (3,1):1, (4,2):−1}
        let m = kron(&pauli_x(), &pauli_z());
        let mut expected = DMatrix::zeros(4, 4);
        expected[(0, 2)] = c(1., 0.);
        expected[(1, 3)] = c(-1., 0.);
        expected[(2, 0)] = c(1., 0.);
        expected[(3, 1)] = c(-1., 0.);
        assert_eq!(m, expected);
    }

    #[test]
    fn layout_index_digit_bijection() {
        let layout = SystemLayout::new(vec![2, 3, 4]).unwrap();
        assert_eq!(layout.total_dim(), 24);
        for idx in 0..24 {
            let digits = layout.index_to_digits(idx);
            assert_eq!(layout.digits_to_index(&digits), idx);
        }
        // site 1 most significant: |1,0,0⟩ = index 12
        assert_eq!(layout.digits_to_index(&[1, 0, 0]), 12);
    }

    #[test]
    fn layout_rejects_small_dims() {
        assert!(SystemLayout::new(vec![2, 1]).is_err());
        assert!(SystemLayout::allowing_unit_sites(vec![1, 2]).is_ok());
    }

    #[test]
    fn permute_swap_two_qubits() {
        let layout = SystemLayout::qubits(2);
        let v = StateVector::basis_state(layout, &[0, 1]).unwrap();
        let swapped = v.permute_sites(&[2, 1]).unwrap();
        let expected = StateVector::basis_state(SystemLayout::qubits(2), &[1, 0]).unwrap();
        assert_eq!(swapped.amplitudes(), expected.amplitudes());
    }

    #[test]
    fn permute_cycle_three_qutrits() {
        // |012⟩ under the cycle 1→2→3→1 becomes |201⟩.
        let layout = SystemLayout::new(vec![3, 3, 3]).unwrap();
        let v = StateVector::basis_state(layout.clone(), &[0, 1, 2]).unwrap();
        let moved = v.permute_sites(&[2, 3, 1]).unwrap();
        let expected = StateVector::basis_state(layout, &[2, 0, 1]).unwrap();
        assert_eq!(moved.amplitudes(), expected.amplitudes());
    }

    #[test]
    fn permute_round_trip_exact() {
        let layout = SystemLayout::new(vec![3, 3, 3]).unwrap();
        let amps = DVector::from_fn(27, |i, _| c((i as f64).sin(), (i as f64).cos()));
        let v = StateVector::new(layout, amps).unwrap();
        let perm = [3, 1, 2];
        // inverse of perm: position p holds the site that maps to p
        let mut inv = [0usize; 3];
        for (k, &p) in perm.iter().enumerate() {
            inv[p - 1] = k + 1;
        }
        let round = v.permute_sites(&perm).unwrap().permute_sites(&inv).unwrap();
        assert_eq!(round.amplitudes(), v.amplitudes());
    }

    #[test]
    fn permute_preserves_inner_products_exactly() {
        let layout = SystemLayout::new(vec![2, 3, 2]).unwrap();
        let a = StateVector::new(
            layout.clone(),
            DVector::from_fn(12, |i, _| c((i as f64 + 1.0).recip(), 0.3 * i as f64)),
        )
        .unwrap();
        let b = StateVector::new(
            layout,
            DVector::from_fn(12, |i, _| c((i as f64).cos(), -(i as f64))),
        )
        .unwrap();
        let perm = [2, 3, 1];
        let pa = a.permute_sites(&perm).unwrap();
        let pb = b.permute_sites(&perm).unwrap();
        assert_eq!(a.inner(&b), pa.inner(&pb));
    }

    #[test]
    fn partial_trace_product_state() {
        let layout = SystemLayout::qubits(2);
        let v = StateVector::basis_state(layout, &[0, 0]).unwrap();
        let rho = DensityMatrix::from_pure(&v);
        let reduced = rho
            .partial_trace(&SiteSubset::new(vec![2]).unwrap())
            .unwrap();
        let expected = DensityMatrix::from_pure(
            &StateVector::basis_state(SystemLayout::qubits(1), &[0]).unwrap(),
        );
        assert!(max_abs_diff(reduced.matrix(), expected.matrix()) < 1e-15);
    }

    #[test]
    fn partial_trace_ghz_like_four_qubits() {
        // Tr_4 of (|0000⟩+|1111⟩)/√2 is ½(|000⟩⟨000| + |111⟩⟨111|).
        let layout = SystemLayout::qubits(4);
        let mut amps = DVector::zeros(16);
        amps[0] = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        amps[15] = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let rho = DensityMatrix::from_pure(&StateVector::new(layout, amps).unwrap());
        let reduced = rho
            .partial_trace(&SiteSubset::new(vec![4]).unwrap())
            .unwrap();
        let mut expected = DMatrix::zeros(8, 8);
        expected[(0, 0)] = c(0.5, 0.0);
        expected[(7, 7)] = c(0.5, 0.0);
        assert!(max_abs_diff(reduced.matrix(), &expected) < 1e-14);
    }

    #[test]
    fn partial_trace_qutrit_code_state() {
        // Tr_1 of (|000⟩+|111⟩+|222⟩)/√3 is ⅓(|00⟩⟨00|+|11⟩⟨11|+|22⟩⟨22|).
        let layout = SystemLayout::new(vec![3, 3, 3]).unwrap();
        let mut amps = DVector::zeros(27);
        let w = c((3.0f64).sqrt().recip(), 0.0);
        for d in 0..3 {
            amps[layout.digits_to_index(&[d, d, d])] = w;
        }
        let rho = DensityMatrix::from_pure(&StateVector::new(layout.clone(), amps).unwrap());
        let reduced = rho
            .partial_trace(&SiteSubset::new(vec![1]).unwrap())
            .unwrap();
        let sub = SystemLayout::new(vec![3, 3]).unwrap();
        let mut expected = DMatrix::zeros(9, 9);
        for d in 0..3 {
            let i = sub.digits_to_index(&[d, d]);
            expected[(i, i)] = c(1.0 / 3.0, 0.0);
        }
        assert!(max_abs_diff(reduced.matrix(), &expected) < 1e-14);
    }

    #[test]
    fn hermitian_eig_diagonal_sorted() {
        let m = DMatrix::from_diagonal(&DVector::from_vec(vec![c(1., 0.), c(2., 0.), c(3., 0.)]));
        let eig = hermitian_eig(&m, 1e-12).unwrap();
        assert_eq!(eig.eigenvalues, vec![3.0, 2.0, 1.0]);
    }

    #[test]
    fn hermitian_eig_maximally_mixed_qubit() {
        let m = ident(2) * c(0.5, 0.0);
        let eig = hermitian_eig(&m, 1e-12).unwrap();
        assert!((eig.eigenvalues[0] - 0.5).abs() < 1e-14);
        assert!((eig.eigenvalues[1] - 0.5).abs() < 1e-14);
    }

    #[test]
    fn hermitian_eig_pauli_x_with_phase_gauge() {
        let eig = hermitian_eig(&pauli_x(), 1e-12).unwrap();
        assert!((eig.eigenvalues[0] - 1.0).abs() < 1e-12);
        assert!((eig.eigenvalues[1] + 1.0).abs() < 1e-12);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        // gauge: first component real positive in both columns
        assert!((eig.eigenvectors[(0, 0)] - c(s, 0.)).norm() < 1e-12);
        assert!((eig.eigenvectors[(1, 0)] - c(s, 0.)).norm() < 1e-12);
        assert!((eig.eigenvectors[(0, 1)] - c(s, 0.)).norm() < 1e-12);
        assert!((eig.eigenvectors[(1, 1)] - c(-s, 0.)).norm() < 1e-12);
        // reconstruction
        let lambda = DMatrix::from_diagonal(&DVector::from_vec(
            eig.eigenvalues.iter().map(|&l| c(l, 0.)).collect(),
        ));
        let rec = &eig.eigenvectors * lambda * eig.eigenvectors.adjoint();
        assert!(max_abs_diff(&rec, &pauli_x()) < 1e-12);
    }

    #[test]
    fn hermitian_eig_rejects_non_hermitian() {
        let m = DMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(0., 0.), c(0., 0.)]);
        assert!(matches!(
            hermitian_eig(&m, 1e-12),
            Err(Error::NonHermitian { .. })
        ));
    }

    #[test]
    fn schmidt_product_state() {
        let v = StateVector::basis_state(SystemLayout::qubits(2), &[0, 0]).unwrap();
        let sd = v
            .schmidt(&SiteSubset::new(vec![2]).unwrap(), RANK_TOL)
            .unwrap();
        assert_eq!(sd.rank(), 1);
        assert!((sd.coefficients[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn schmidt_ghz_four_qubits_cut_last() {
        let layout = SystemLayout::qubits(4);
        let mut amps = DVector::zeros(16);
        amps[0] = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        amps[15] = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let v = StateVector::new(layout, amps).unwrap();
        let sd = v
            .schmidt(&SiteSubset::new(vec![4]).unwrap(), RANK_TOL)
            .unwrap();
        assert_eq!(sd.rank(), 2);
        for s in &sd.coefficients {
            assert!((s - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        }
        // reconstruction through the bipartite index
        let (m, split) = v
            .as_bipartite_matrix(&SiteSubset::new(vec![4]).unwrap())
            .unwrap();
        let mut rec = DMatrix::zeros(split.comp_dim(), split.sub_dim());
        for k in 0..sd.rank() {
            let l = sd.left[k].amplitudes();
            let r = sd.right[k].amplitudes();
            for ci in 0..split.comp_dim() {
                for e in 0..split.sub_dim() {
                    rec[(ci, e)] += c(sd.coefficients[k], 0.0) * l[ci] * r[e];
                }
            }
        }
        assert!(max_abs_diff(&rec, &m) < 1e-12);
    }

    #[test]
    fn entropy_pure_and_mixed() {
        let pure = DensityMatrix::from_pure(
            &StateVector::basis_state(SystemLayout::qubits(2), &[0, 1]).unwrap(),
        );
        assert!(pure.von_neumann_entropy().unwrap() < 1e-12);

        let mixed = DensityMatrix::maximally_mixed(SystemLayout::qubits(1));
        assert!((mixed.von_neumann_entropy().unwrap() - (2.0f64).ln()).abs() < 1e-12);

        let mixed4 = DensityMatrix::maximally_mixed(SystemLayout::qubits(2));
        assert!((mixed4.von_neumann_entropy().unwrap() - (4.0f64).ln()).abs() < 1e-12);
    }

    #[test]
    fn psd_sqrt_squares_back() {
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[c(2., 0.), c(0., -1.), c(0., 1.), c(3., 0.)],
        );
        let r = psd_sqrt(&m, 1e-10).unwrap();
        assert!(max_abs_diff(&(&r * &r), &m) < 1e-10);
    }
}
