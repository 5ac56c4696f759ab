//! Replacer, erasure, and partial-replacer channels, their Kraus sets, and
//! generalized Pauli operators.
//!
//! A replacer on subset E discards the state there and installs a fixed
//! density σ_E; the erasure channel is the special case σ_E = I/dim E. The
//! partial replacer mixes the identity map with a replacer:
//! λρ + (1−λ)·σ ⊗ Tr_E(ρ).

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::tensor::{
    embed_on_subset, max_abs, product_on_bipartition, psd_sqrt, BipartiteIndex, DensityMatrix,
    SiteSubset, StateVector, SystemLayout, C64,
};
use crate::DEFAULT_TOL;

/// Channel that replaces the state on `subset` with a fixed density.
#[derive(Debug, Clone)]
pub struct ReplacerChannel {
    layout: SystemLayout,
    subset: SiteSubset,
    sigma: DensityMatrix,
}

impl ReplacerChannel {
    pub fn new(layout: &SystemLayout, subset: SiteSubset, sigma: DensityMatrix) -> Result<Self> {
        if subset.is_empty() {
            return Err(Error::InvalidChannel("replaced subset must be non-empty".into()));
        }
        let e_layout = layout.subset_layout(&subset)?;
        if sigma.layout() != &e_layout {
            return Err(Error::InvalidChannel(format!(
                "replacement state has dimension {}, subset needs {}",
                sigma.layout().total_dim(),
                e_layout.total_dim()
            )));
        }
        sigma
            .check_density(DEFAULT_TOL)
            .map_err(|e| Error::InvalidChannel(format!("replacement state: {e}")))?;
        Ok(Self {
            layout: layout.clone(),
            subset,
            sigma,
        })
    }

    /// Replacer whose fixed output is the maximally mixed state (the erasure
    /// channel on the subset).
    pub fn erasure(layout: &SystemLayout, subset: SiteSubset) -> Result<Self> {
        let e_layout = layout.subset_layout(&subset)?;
        Self::new(layout, subset, DensityMatrix::maximally_mixed(e_layout))
    }

    pub fn subset(&self) -> &SiteSubset {
        &self.subset
    }

    pub fn sigma(&self) -> &DensityMatrix {
        &self.sigma
    }

    /// Tr_E(ρ) ⊗ σ_E, re-assembled in the original site order.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.layout() != &self.layout {
            return Err(Error::LayoutMismatch {
                expected: self.layout.total_dim(),
                found: rho.layout().total_dim(),
            });
        }
        let kept = rho.partial_trace(&self.subset)?;
        let split = BipartiteIndex::new(&self.layout, &self.subset)?;
        let out = product_on_bipartition(&split, kept.matrix(), self.sigma.matrix());
        DensityMatrix::new(self.layout.clone(), out)
    }
}

/// λ·id + (1−λ)·replacer on the subset.
#[derive(Debug, Clone)]
pub struct PartialReplacerChannel {
    replacer: ReplacerChannel,
    lambda: f64,
}

impl PartialReplacerChannel {
    pub fn new(
        layout: &SystemLayout,
        subset: SiteSubset,
        lambda: f64,
        sigma: DensityMatrix,
    ) -> Result<Self> {
        if !(0.0..1.0).contains(&lambda) {
            return Err(Error::InvalidChannel(format!(
                "identity weight lambda = {lambda} outside [0, 1)"
            )));
        }
        Ok(Self {
            replacer: ReplacerChannel::new(layout, subset, sigma)?,
            lambda,
        })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn subset(&self) -> &SiteSubset {
        &self.replacer.subset
    }

    pub fn sigma(&self) -> &DensityMatrix {
        &self.replacer.sigma
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let replaced = self.replacer.apply(rho)?;
        let out = rho.matrix() * C64::new(self.lambda, 0.0)
            + replaced.matrix() * C64::new(1.0 - self.lambda, 0.0);
        DensityMatrix::new(rho.layout().clone(), out)
    }
}

/// Either channel kind, as selected by a CLI/config channel spec.
#[derive(Debug, Clone)]
pub enum Channel {
    Replacer(ReplacerChannel),
    Partial(PartialReplacerChannel),
}

impl Channel {
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        match self {
            Channel::Replacer(ch) => ch.apply(rho),
            Channel::Partial(ch) => ch.apply(rho),
        }
    }

    pub fn subset(&self) -> &SiteSubset {
        match self {
            Channel::Replacer(ch) => ch.subset(),
            Channel::Partial(ch) => ch.subset(),
        }
    }
}

/// Operator-sum form of a trace-preserving map.
#[derive(Debug, Clone)]
pub struct KrausSet {
    ops: Vec<DMatrix<C64>>,
}

impl KrausSet {
    /// Validates shape and the completeness relation Σ M†M = I.
    pub fn new(ops: Vec<DMatrix<C64>>) -> Result<Self> {
        let Some(first) = ops.first() else {
            return Err(Error::InvalidChannel("empty Kraus set".into()));
        };
        let d = first.nrows();
        if ops.iter().any(|m| m.nrows() != d || m.ncols() != d) {
            return Err(Error::InvalidChannel(
                "Kraus operators must be square and equally sized".into(),
            ));
        }
        let set = Self { ops };
        let residual = set.completeness_residual();
        if residual > DEFAULT_TOL {
            return Err(Error::InvalidChannel(format!(
                "Kraus set is not trace preserving (|ΣM†M − I| = {residual:.3e})"
            )));
        }
        Ok(set)
    }

    pub fn operators(&self) -> &[DMatrix<C64>] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.ops[0].nrows()
    }

    /// Max |Σ M†M − I|.
    pub fn completeness_residual(&self) -> f64 {
        let d = self.dim();
        let mut acc = DMatrix::<C64>::zeros(d, d);
        for m in &self.ops {
            acc += m.adjoint() * m;
        }
        max_abs(&(acc - DMatrix::identity(d, d)))
    }

    /// Σ M ρ M†.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.layout().total_dim() != self.dim() {
            return Err(Error::LayoutMismatch {
                expected: self.dim(),
                found: rho.layout().total_dim(),
            });
        }
        let d = self.dim();
        let mut acc = DMatrix::<C64>::zeros(d, d);
        for m in &self.ops {
            acc += m * rho.matrix() * m.adjoint();
        }
        DensityMatrix::new(rho.layout().clone(), acc)
    }
}

/// Product X(l)·Z(k) of the generalized Pauli operators on a d-dimensional
/// system: X(l) is the cyclic shift by l and Z(k) = Σ_j ω^{jk}|j⟩⟨j| with
/// ω = e^{2πi/d}.
pub fn generalized_pauli(d: usize, l: usize, k: usize) -> Result<DMatrix<C64>> {
    if d == 0 || l >= d || k >= d {
        return Err(Error::InvalidChannel(format!(
            "generalized Pauli indices (l={l}, k={k}) out of range for dimension {d}"
        )));
    }
    let mut m = DMatrix::zeros(d, d);
    let omega = 2.0 * std::f64::consts::PI / d as f64;
    for j in 0..d {
        let phase = omega * (j * k) as f64;
        m[((j + l) % d, j)] = C64::new(phase.cos(), phase.sin());
    }
    Ok(m)
}

/// The minimal Kraus set of the erasure channel on the subset:
/// (dim E)^{-1/2} (I ⊗ |i⟩⟨j|) for every pair of subset basis states, in the
/// original site order, (i, j) lexicographic.
pub fn erasure_kraus_set(layout: &SystemLayout, subset: &SiteSubset) -> Result<KrausSet> {
    let split = BipartiteIndex::new(layout, subset)?;
    let (dc, de) = (split.comp_dim(), split.sub_dim());
    let d = layout.total_dim();
    let w = C64::new((de as f64).sqrt().recip(), 0.0);
    let mut ops = Vec::with_capacity(de * de);
    for i in 0..de {
        for j in 0..de {
            let mut m = DMatrix::zeros(d, d);
            for c in 0..dc {
                m[(split.fuse(c, i), split.fuse(c, j))] = w;
            }
            ops.push(m);
        }
    }
    KrausSet::new(ops)
}

/// Kraus set of the partial replacer: √λ·I together with
/// I ⊗ √((1−λ)/dim E)·√σ·X(l)Z(k) over all l, k. The identity operator comes
/// first, then (l, k) lexicographic.
pub fn partial_replacer_kraus_set(channel: &PartialReplacerChannel) -> Result<KrausSet> {
    let layout = &channel.replacer.layout;
    let subset = channel.subset();
    let de = layout.subset_layout(subset)?.total_dim();
    let lambda = channel.lambda();
    let sqrt_sigma = psd_sqrt(channel.sigma().matrix(), DEFAULT_TOL)?;
    let scale = C64::new(((1.0 - lambda) / de as f64).sqrt(), 0.0);

    let d = layout.total_dim();
    let mut ops = Vec::with_capacity(1 + de * de);
    ops.push(DMatrix::identity(d, d) * C64::new(lambda.sqrt(), 0.0));
    for l in 0..de {
        for k in 0..de {
            let sub_op = &sqrt_sigma * generalized_pauli(de, l, k)? * scale;
            ops.push(embed_on_subset(layout, subset, &sub_op)?);
        }
    }
    KrausSet::new(ops)
}

/// Channel spec as accepted on the command line / in config files:
/// `{"E": [sites], "sigma": <spec>, "lambda": <optional>}` where the sigma
/// spec is `"maximally_mixed"`, `"pure:[...amplitudes...]"`, or an explicit
/// matrix of `[re, im]` pairs.
pub fn channel_from_spec(layout: &SystemLayout, spec: &serde_json::Value) -> Result<Channel> {
    let obj = spec
        .as_object()
        .ok_or_else(|| Error::Parse("channel spec must be a JSON object".into()))?;
    let sites = obj
        .get("E")
        .and_then(|v| v.as_array())
        .ok_or_else(|| Error::Parse("channel spec needs an \"E\" site array".into()))?
        .iter()
        .map(|v| {
            v.as_u64()
                .map(|x| x as usize)
                .ok_or_else(|| Error::Parse("sites must be positive integers".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let subset = SiteSubset::new(sites)?;
    let e_layout = layout.subset_layout(&subset)?;
    let sigma = match obj.get("sigma") {
        None => DensityMatrix::maximally_mixed(e_layout),
        Some(v) => sigma_from_spec(&e_layout, v)?,
    };
    match obj.get("lambda") {
        None => Ok(Channel::Replacer(ReplacerChannel::new(layout, subset, sigma)?)),
        Some(v) => {
            let lambda = v
                .as_f64()
                .ok_or_else(|| Error::Parse("lambda must be a number".into()))?;
            Ok(Channel::Partial(PartialReplacerChannel::new(
                layout, subset, lambda, sigma,
            )?))
        }
    }
}

/// Parses the sigma part of a channel spec on the given subset layout.
pub fn sigma_from_spec(e_layout: &SystemLayout, spec: &serde_json::Value) -> Result<DensityMatrix> {
    let de = e_layout.total_dim();
    match spec {
        serde_json::Value::String(s) if s == "maximally_mixed" => {
            Ok(DensityMatrix::maximally_mixed(e_layout.clone()))
        }
        serde_json::Value::String(s) if s.starts_with("pure:") => {
            let body: serde_json::Value = serde_json::from_str(&s["pure:".len()..])
                .map_err(|e| Error::Parse(format!("pure-state amplitudes: {e}")))?;
            let arr = body
                .as_array()
                .ok_or_else(|| Error::Parse("pure-state spec needs an amplitude array".into()))?;
            if arr.len() != de {
                return Err(Error::Parse(format!(
                    "pure state has {} amplitudes, subset needs {de}",
                    arr.len()
                )));
            }
            let amps = arr
                .iter()
                .map(|v| match v {
                    serde_json::Value::Number(n) => Ok(C64::new(n.as_f64().unwrap(), 0.0)),
                    serde_json::Value::Array(pair) if pair.len() == 2 => {
                        let re = pair[0].as_f64().ok_or_else(bad_complex)?;
                        let im = pair[1].as_f64().ok_or_else(bad_complex)?;
                        Ok(C64::new(re, im))
                    }
                    _ => Err(bad_complex()),
                })
                .collect::<Result<Vec<_>>>()?;
            let state = StateVector::new(
                e_layout.clone(),
                nalgebra::DVector::from_vec(amps),
            )?
            .normalized()?;
            Ok(DensityMatrix::from_pure(&state))
        }
        serde_json::Value::Array(rows) => {
            if rows.len() != de {
                return Err(Error::Parse(format!(
                    "sigma matrix has {} rows, subset needs {de}",
                    rows.len()
                )));
            }
            let mut m = DMatrix::zeros(de, de);
            for (i, row) in rows.iter().enumerate() {
                let row = row
                    .as_array()
                    .filter(|r| r.len() == de)
                    .ok_or_else(|| Error::Parse(format!("sigma row {i} must have {de} entries")))?;
                for (j, v) in row.iter().enumerate() {
                    let pair = v.as_array().filter(|p| p.len() == 2).ok_or_else(bad_complex)?;
                    let re = pair[0].as_f64().ok_or_else(bad_complex)?;
                    let im = pair[1].as_f64().ok_or_else(bad_complex)?;
                    m[(i, j)] = C64::new(re, im);
                }
            }
            Ok(DensityMatrix::new(e_layout.clone(), m)?)
        }
        _ => Err(Error::Parse(
            "sigma must be \"maximally_mixed\", \"pure:[...]\", or a matrix of [re,im] pairs"
                .into(),
        )),
    }
}

fn bad_complex() -> Error {
    Error::Parse("complex numbers must be [re, im] pairs".into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sampling;
    use crate::tensor::max_abs_diff;
    use nalgebra::DVector;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn erasure_on_product_state() {
        let layout = SystemLayout::qubits(2);
        let rho = DensityMatrix::from_pure(
            &StateVector::basis_state(layout.clone(), &[0, 0]).unwrap(),
        );
        let ch = ReplacerChannel::erasure(&layout, SiteSubset::new(vec![2]).unwrap()).unwrap();
        let out = ch.apply(&rho).unwrap();
        let mut expected = DMatrix::zeros(4, 4);
        expected[(0, 0)] = c(0.5, 0.0);
        expected[(1, 1)] = c(0.5, 0.0);
        assert!(max_abs_diff(out.matrix(), &expected) < 1e-14);
    }

    #[test]
    fn replacer_commutes_with_partial_trace() {
        // Tr_E ∘ E_E = Tr_E for random states and random replacement states.
        let layout = SystemLayout::new(vec![2, 3, 2]).unwrap();
        let subset = SiteSubset::new(vec![2]).unwrap();
        let mut rng = sampling::rng_from_seed(5);
        for _ in 0..20 {
            let rho = sampling::random_density(&mut rng, &layout).unwrap();
            let sigma = sampling::random_density(
                &mut rng,
                &layout.subset_layout(&subset).unwrap(),
            )
            .unwrap();
            let ch = ReplacerChannel::new(&layout, subset.clone(), sigma).unwrap();
            let out = ch.apply(&rho).unwrap();
            let left = out.partial_trace(&subset).unwrap();
            let right = rho.partial_trace(&subset).unwrap();
            assert!(max_abs_diff(left.matrix(), right.matrix()) < 1e-12);
        }
    }

    #[test]
    fn replacer_is_idempotent_and_product_form() {
        let layout = SystemLayout::new(vec![3, 3]).unwrap();
        let subset = SiteSubset::new(vec![1]).unwrap();
        let mut rng = sampling::rng_from_seed(9);
        let rho = sampling::random_density(&mut rng, &layout).unwrap();
        let sigma = sampling::random_density(&mut rng, &SystemLayout::new(vec![3]).unwrap()).unwrap();
        let ch = ReplacerChannel::new(&layout, subset.clone(), sigma.clone()).unwrap();
        let once = ch.apply(&rho).unwrap();
        let twice = ch.apply(&once).unwrap();
        assert!(max_abs_diff(once.matrix(), twice.matrix()) < 1e-12);
        assert!((once.trace() - c(1.0, 0.0)).norm() < 1e-12);
        // range form: out = Tr_E(out) ⊗ σ
        let kept = once.partial_trace(&subset).unwrap();
        let split = BipartiteIndex::new(&layout, &subset).unwrap();
        let product = product_on_bipartition(&split, kept.matrix(), sigma.matrix());
        assert!(max_abs_diff(once.matrix(), &product) < 1e-12);
    }

    #[test]
    fn partial_replacer_boundary_and_formula() {
        let layout = SystemLayout::qubits(2);
        let subset = SiteSubset::new(vec![2]).unwrap();
        let rho = DensityMatrix::from_pure(
            &StateVector::basis_state(layout.clone(), &[0, 0]).unwrap(),
        );
        let sigma = DensityMatrix::maximally_mixed(SystemLayout::qubits(1));

        let full = ReplacerChannel::new(&layout, subset.clone(), sigma.clone()).unwrap();
        let half =
            PartialReplacerChannel::new(&layout, subset.clone(), 0.5, sigma.clone()).unwrap();
        let zero = PartialReplacerChannel::new(&layout, subset, 0.0, sigma).unwrap();

        let out_zero = zero.apply(&rho).unwrap();
        let out_full = full.apply(&rho).unwrap();
        assert!(max_abs_diff(out_zero.matrix(), out_full.matrix()) < 1e-14);

        let out_half = half.apply(&rho).unwrap();
        let expected = rho.matrix() * c(0.5, 0.0) + out_full.matrix() * c(0.5, 0.0);
        assert!(max_abs_diff(out_half.matrix(), &expected) < 1e-14);
        assert!((out_half.trace() - c(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn partial_replacer_rejects_bad_lambda() {
        let layout = SystemLayout::qubits(2);
        let sigma = DensityMatrix::maximally_mixed(SystemLayout::qubits(1));
        for lambda in [1.0, 1.5, -0.1] {
            assert!(PartialReplacerChannel::new(
                &layout,
                SiteSubset::new(vec![2]).unwrap(),
                lambda,
                sigma.clone()
            )
            .is_err());
        }
    }

    #[test]
    fn generalized_pauli_qubit_matches_sigma_x_z() {
        let x = generalized_pauli(2, 1, 0).unwrap();
        assert!((x[(0, 1)] - c(1., 0.)).norm() < 1e-15);
        assert!((x[(1, 0)] - c(1., 0.)).norm() < 1e-15);
        let z = generalized_pauli(2, 0, 1).unwrap();
        assert!((z[(0, 0)] - c(1., 0.)).norm() < 1e-15);
        assert!((z[(1, 1)] + c(1., 0.)).norm() < 1e-12);
    }

    #[test]
    fn generalized_pauli_qutrit_shift() {
        let x = generalized_pauli(3, 1, 0).unwrap();
        let e0 = DVector::from_vec(vec![c(1., 0.), c(0., 0.), c(0., 0.)]);
        let e2 = DVector::from_vec(vec![c(0., 0.), c(0., 0.), c(1., 0.)]);
        assert!(((&x * &e0) - DVector::from_vec(vec![c(0., 0.), c(1., 0.), c(0., 0.)])).norm() < 1e-15);
        assert!(((&x * &e2) - e0).norm() < 1e-15);
    }

    #[test]
    fn generalized_pauli_trace_orthogonality() {
        for d in 2..=5 {
            for l in 0..d {
                for k in 0..d {
                    let m = generalized_pauli(d, l, k).unwrap();
                    let tr = m.trace();
                    let expected = if l == 0 && k == 0 { d as f64 } else { 0.0 };
                    assert!(
                        (tr - c(expected, 0.0)).norm() < 1e-12,
                        "d={d} l={l} k={k} trace {tr}"
                    );
                    // unitarity
                    let eye = DMatrix::identity(d, d);
                    assert!(max_abs_diff(&(m.adjoint() * &m), &eye) < 1e-12);
                }
            }
        }
    }

    #[test]
    fn generalized_pauli_hilbert_schmidt_norm() {
        let d = 4;
        for l in 0..d {
            for k in 0..d {
                let m = generalized_pauli(d, l, k).unwrap();
                let hs = (m.adjoint() * &m).trace().re;
                assert!((hs - d as f64).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn erasure_kraus_matches_replacer_action() {
        let layout = SystemLayout::new(vec![2, 3]).unwrap();
        let subset = SiteSubset::new(vec![2]).unwrap();
        let kraus = erasure_kraus_set(&layout, &subset).unwrap();
        assert_eq!(kraus.len(), 9);
        assert!(kraus.completeness_residual() < 1e-12);
        let ch = ReplacerChannel::erasure(&layout, subset).unwrap();
        let mut rng = sampling::rng_from_seed(17);
        for _ in 0..50 {
            let rho = sampling::random_density(&mut rng, &layout).unwrap();
            let a = kraus.apply(&rho).unwrap();
            let b = ch.apply(&rho).unwrap();
            assert!(max_abs_diff(a.matrix(), b.matrix()) < 1e-10);
        }
    }

    #[test]
    fn partial_replacer_kraus_matches_closed_form() {
        let layout = SystemLayout::new(vec![2, 2, 2]).unwrap();
        let subset = SiteSubset::new(vec![1, 3]).unwrap();
        let mut rng = sampling::rng_from_seed(23);
        let sigma =
            sampling::random_density(&mut rng, &layout.subset_layout(&subset).unwrap()).unwrap();
        for lambda in [0.0, 0.3, 0.9] {
            let ch =
                PartialReplacerChannel::new(&layout, subset.clone(), lambda, sigma.clone()).unwrap();
            let kraus = partial_replacer_kraus_set(&ch).unwrap();
            assert_eq!(kraus.len(), 1 + 16);
            for _ in 0..10 {
                let rho = sampling::random_density(&mut rng, &layout).unwrap();
                let a = kraus.apply(&rho).unwrap();
                let b = ch.apply(&rho).unwrap();
                assert!(max_abs_diff(a.matrix(), b.matrix()) < 1e-10);
            }
        }
    }

    #[test]
    fn partial_replacer_kraus_count_single_site() {
        let layout = SystemLayout::new(vec![3, 3]).unwrap();
        let subset = SiteSubset::new(vec![2]).unwrap();
        let sigma = DensityMatrix::maximally_mixed(SystemLayout::new(vec![3]).unwrap());
        let ch = PartialReplacerChannel::new(&layout, subset, 0.25, sigma).unwrap();
        let kraus = partial_replacer_kraus_set(&ch).unwrap();
        assert_eq!(kraus.len(), 1 + 9);
    }

    #[test]
    fn channel_spec_parsing() {
        let layout = SystemLayout::qubits(2);
        let spec: serde_json::Value =
            serde_json::from_str(r#"{"E": [2], "sigma": "maximally_mixed"}"#).unwrap();
        assert!(matches!(
            channel_from_spec(&layout, &spec).unwrap(),
            Channel::Replacer(_)
        ));

        let spec: serde_json::Value =
            serde_json::from_str(r#"{"E": [2], "sigma": "pure:[1, 0]", "lambda": 0.5}"#).unwrap();
        match channel_from_spec(&layout, &spec).unwrap() {
            Channel::Partial(ch) => {
                assert!((ch.lambda() - 0.5).abs() < 1e-15);
                assert!((ch.sigma().matrix()[(0, 0)] - c(1., 0.)).norm() < 1e-15);
            }
            _ => panic!("expected partial replacer"),
        }

        let spec: serde_json::Value = serde_json::from_str(
            r#"{"E": [1], "sigma": [[[0.5, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.5, 0.0]]]}"#,
        )
        .unwrap();
        assert!(channel_from_spec(&layout, &spec).is_ok());

        let bad: serde_json::Value = serde_json::from_str(r#"{"sigma": "maximally_mixed"}"#).unwrap();
        assert!(channel_from_spec(&layout, &bad).is_err());
    }
}
