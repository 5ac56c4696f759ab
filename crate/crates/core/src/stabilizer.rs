//! Qubit stabilizer formalism: symplectic Pauli algebra over GF(2), codeword
//! extraction, the normalizer criterion for erasure correctability, and
//! cleaning verification.
//!
//! A Pauli is stored as i^phase · X^x Z^z with per-qubit bit vectors x, z and
//! the phase exponent tracked mod 4. Everything group-theoretic happens on
//! the (x|z) symplectic vectors; matrices are only materialized to talk to
//! the dense-linear-algebra side of the crate.

use std::fmt;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::codes::CodeSubspace;
use crate::error::{Error, Result};
use crate::tensor::{hermitian_eig, kron, SiteSubset, StateVector, SystemLayout, C64};

/// Generators with more qubits in the erased subset than this make the
/// 4^|E| enumeration unreasonable on a desk.
pub const SUBSET_ENUMERATION_LIMIT: usize = 8;

/// Full group expansion is capped at 2^10 elements.
pub const GROUP_EXPANSION_LIMIT: usize = 10;

/// n-qubit Pauli operator i^phase · X^x Z^z.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PauliOperator {
    x: Vec<bool>,
    z: Vec<bool>,
    phase: u8,
}

impl PauliOperator {
    pub fn identity(n: usize) -> Self {
        Self {
            x: vec![false; n],
            z: vec![false; n],
            phase: 0,
        }
    }

    pub fn from_bits(x: Vec<bool>, z: Vec<bool>, phase: u8) -> Result<Self> {
        if x.len() != z.len() {
            return Err(Error::PauliParse("x and z bit vectors differ in length".into()));
        }
        Ok(Self {
            x,
            z,
            phase: phase % 4,
        })
    }

    /// Parses strings like `XZZXI`, optionally prefixed by `+`, `-`, `i`,
    /// `+i`, or `-i`.
    pub fn parse(text: &str) -> Result<Self> {
        let trimmed = text.trim();
        let (phase, body) = if let Some(rest) = trimmed.strip_prefix("-i") {
            (3u8, rest)
        } else if let Some(rest) = trimmed.strip_prefix("+i") {
            (1u8, rest)
        } else if let Some(rest) = trimmed.strip_prefix('i') {
            (1u8, rest)
        } else if let Some(rest) = trimmed.strip_prefix('-') {
            (2u8, rest)
        } else if let Some(rest) = trimmed.strip_prefix('+') {
            (0u8, rest)
        } else {
            (0u8, trimmed)
        };
        if body.is_empty() {
            return Err(Error::PauliParse(format!("no Pauli characters in {text:?}")));
        }
        let mut op = PauliOperator::identity(body.chars().count());
        op.phase = phase;
        for (j, ch) in body.chars().enumerate() {
            match ch {
                'I' => {}
                'X' => op.x[j] = true,
                'Z' => op.z[j] = true,
                'Y' => {
                    // Y = i·XZ
                    op.x[j] = true;
                    op.z[j] = true;
                    op.phase = (op.phase + 1) % 4;
                }
                other => {
                    return Err(Error::PauliParse(format!(
                        "character {other:?} is not one of I, X, Y, Z"
                    )))
                }
            }
        }
        Ok(op)
    }

    pub fn num_qubits(&self) -> usize {
        self.x.len()
    }

    pub fn x_bits(&self) -> &[bool] {
        &self.x
    }

    pub fn z_bits(&self) -> &[bool] {
        &self.z
    }

    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn is_identity_up_to_phase(&self) -> bool {
        self.x.iter().all(|&b| !b) && self.z.iter().all(|&b| !b)
    }

    fn check_same_size(&self, other: &PauliOperator) -> Result<()> {
        if self.num_qubits() != other.num_qubits() {
            return Err(Error::PauliParse(format!(
                "operator sizes differ: {} vs {}",
                self.num_qubits(),
                other.num_qubits()
            )));
        }
        Ok(())
    }

    /// Product with phase tracking: moving X^x2 past Z^z1 costs (−1)^{z1·x2}.
    pub fn mul(&self, other: &PauliOperator) -> Result<PauliOperator> {
        self.check_same_size(other)?;
        let mut swaps = 0usize;
        let n = self.num_qubits();
        let mut x = vec![false; n];
        let mut z = vec![false; n];
        for j in 0..n {
            if self.z[j] && other.x[j] {
                swaps += 1;
            }
            x[j] = self.x[j] ^ other.x[j];
            z[j] = self.z[j] ^ other.z[j];
        }
        Ok(PauliOperator {
            x,
            z,
            phase: ((self.phase as usize + other.phase as usize + 2 * swaps) % 4) as u8,
        })
    }

    /// Commutation via the symplectic form ⟨x1,z2⟩ + ⟨x2,z1⟩ mod 2.
    pub fn commutes(&self, other: &PauliOperator) -> Result<bool> {
        self.check_same_size(other)?;
        let mut form = 0usize;
        for j in 0..self.num_qubits() {
            if self.x[j] && other.z[j] {
                form += 1;
            }
            if other.x[j] && self.z[j] {
                form += 1;
            }
        }
        Ok(form % 2 == 0)
    }

    /// True iff the operator squares to +I (phase + x·z even).
    pub fn is_involutive(&self) -> bool {
        let overlap = self
            .x
            .iter()
            .zip(&self.z)
            .filter(|(&a, &b)| a && b)
            .count();
        (self.phase as usize + overlap) % 2 == 0
    }

    /// Acts as the identity on every qubit outside `subset`.
    pub fn supported_within(&self, subset: &SiteSubset) -> bool {
        (1..=self.num_qubits())
            .all(|site| subset.contains(site) || (!self.x[site - 1] && !self.z[site - 1]))
    }

    /// Dense matrix realization on 2^n dimensions.
    pub fn matrix(&self) -> DMatrix<C64> {
        let one = C64::new(1.0, 0.0);
        let eye = DMatrix::from_row_slice(2, 2, &[one, C64::default(), C64::default(), one]);
        let x = DMatrix::from_row_slice(2, 2, &[C64::default(), one, one, C64::default()]);
        let z = DMatrix::from_row_slice(2, 2, &[one, C64::default(), C64::default(), -one]);
        let xz = &x * &z;
        let mut m = DMatrix::from_element(1, 1, one);
        for j in 0..self.num_qubits() {
            let factor = match (self.x[j], self.z[j]) {
                (false, false) => &eye,
                (true, false) => &x,
                (false, true) => &z,
                (true, true) => &xz,
            };
            m = kron(&m, factor);
        }
        let phase = match self.phase {
            0 => one,
            1 => C64::new(0.0, 1.0),
            2 => -one,
            _ => C64::new(0.0, -1.0),
        };
        m * phase
    }

    /// Packs (x|z) into a symplectic bit row; usable for qubit counts ≤ 32.
    fn symplectic_row(&self) -> u64 {
        let n = self.num_qubits();
        assert!(n <= 32, "symplectic rows support at most 32 qubits");
        let mut row = 0u64;
        for j in 0..n {
            if self.x[j] {
                row |= 1 << j;
            }
            if self.z[j] {
                row |= 1 << (n + j);
            }
        }
        row
    }
}

impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut y_count = 0i32;
        let body: String = self
            .x
            .iter()
            .zip(&self.z)
            .map(|(&x, &z)| match (x, z) {
                (false, false) => 'I',
                (true, false) => 'X',
                (false, true) => 'Z',
                (true, true) => {
                    y_count += 1;
                    'Y'
                }
            })
            .collect();
        let display_phase = (self.phase as i32 - y_count).rem_euclid(4);
        let prefix = match display_phase {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        };
        write!(f, "{prefix}{body}")
    }
}

/// Abelian Pauli subgroup given by independent, involutive, pairwise
/// commuting generators. These three conditions together keep −I out of the
/// generated group; phase tracking during expansion re-asserts it.
#[derive(Debug, Clone)]
pub struct StabilizerGroup {
    generators: Vec<PauliOperator>,
    num_qubits: usize,
}

impl StabilizerGroup {
    pub fn new(generators: Vec<PauliOperator>) -> Result<Self> {
        let Some(first) = generators.first() else {
            return Err(Error::InvalidStabilizer("no generators given".into()));
        };
        let num_qubits = first.num_qubits();
        if generators.iter().any(|g| g.num_qubits() != num_qubits) {
            return Err(Error::InvalidStabilizer(
                "generators act on different qubit counts".into(),
            ));
        }
        for (i, g) in generators.iter().enumerate() {
            if !g.is_involutive() {
                return Err(Error::InvalidStabilizer(format!(
                    "generator {i} ({g}) squares to −I"
                )));
            }
            for (j, h) in generators.iter().enumerate().skip(i + 1) {
                if !g.commutes(h)? {
                    return Err(Error::InvalidStabilizer(format!(
                        "generators {i} ({g}) and {j} ({h}) anticommute"
                    )));
                }
            }
        }
        let rows: Vec<u64> = generators.iter().map(|g| g.symplectic_row()).collect();
        if gf2_rank(&rows) != generators.len() {
            return Err(Error::InvalidStabilizer(
                "generators are dependent over GF(2)".into(),
            ));
        }
        Ok(Self {
            generators,
            num_qubits,
        })
    }

    pub fn parse_generators(strings: &[&str]) -> Result<Self> {
        Self::new(
            strings
                .iter()
                .map(|s| PauliOperator::parse(s))
                .collect::<Result<Vec<_>>>()?,
        )
    }

    pub fn generators(&self) -> &[PauliOperator] {
        &self.generators
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn code_dimension(&self) -> usize {
        1 << (self.num_qubits - self.generators.len())
    }

    /// All 2^r group elements by subset products, with the −I assertion.
    pub fn elements(&self) -> Result<Vec<PauliOperator>> {
        let r = self.generators.len();
        if r > GROUP_EXPANSION_LIMIT {
            return Err(Error::EnumerationGuard {
                size: r,
                max: GROUP_EXPANSION_LIMIT,
            });
        }
        let mut elements = Vec::with_capacity(1 << r);
        for mask in 0u64..(1 << r) {
            let mut p = PauliOperator::identity(self.num_qubits);
            for (k, g) in self.generators.iter().enumerate() {
                if mask & (1 << k) != 0 {
                    p = p.mul(g)?;
                }
            }
            if p.is_identity_up_to_phase() && p.phase != 0 {
                return Err(Error::InvalidStabilizer(format!(
                    "group expansion produced i^{}·I; −I must not be in the group",
                    p.phase
                )));
            }
            elements.push(p);
        }
        Ok(elements)
    }

    /// Projector onto the joint +1 eigenspace: 2^{−r} Σ over group elements.
    pub fn projector(&self) -> Result<DMatrix<C64>> {
        if self.num_qubits > 10 {
            return Err(Error::EnumerationGuard {
                size: self.num_qubits,
                max: 10,
            });
        }
        let elements = self.elements()?;
        let d = 1usize << self.num_qubits;
        let mut acc = DMatrix::<C64>::zeros(d, d);
        for p in &elements {
            acc += p.matrix();
        }
        Ok(acc / C64::new(elements.len() as f64, 0.0))
    }

    /// Orthonormal basis of the stabilized subspace, extracted from the
    /// projector's eigenvalue-1 eigenvectors with the crate-wide phase gauge.
    pub fn codewords(&self) -> Result<CodeSubspace> {
        let projector = self.projector()?;
        let eig = hermitian_eig(&projector, 1e-9)?;
        let expected = self.code_dimension();
        let layout = SystemLayout::qubits(self.num_qubits);
        let mut basis = Vec::with_capacity(expected);
        for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
            if lambda > 0.5 {
                if (lambda - 1.0).abs() > 1e-9 {
                    return Err(Error::InvalidStabilizer(format!(
                        "projector eigenvalue {lambda} is neither 0 nor 1"
                    )));
                }
                let col = eig.eigenvectors.column(k).into_owned();
                basis.push(StateVector::new(layout.clone(), col)?);
            }
        }
        if basis.len() != expected {
            return Err(Error::InvalidStabilizer(format!(
                "projector rank {} but {} generators on {} qubits promise dimension {expected}",
                basis.len(),
                self.generators.len(),
                self.num_qubits
            )));
        }
        let label = format!(
            "stabilizer[{}]",
            self.generators
                .iter()
                .map(|g| g.to_string())
                .collect::<Vec<_>>()
                .join(",")
        );
        CodeSubspace::new(layout, basis, label)
    }

    /// True iff `p` commutes with every generator (the normalizer coincides
    /// with the centralizer for Pauli groups without −I).
    pub fn normalizer_contains(&self, p: &PauliOperator) -> Result<bool> {
        for g in &self.generators {
            if !g.commutes(p)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Membership in the group extended by the phase i·I: a pure GF(2) span
    /// test on the (x|z) rows, phases ignored.
    pub fn span_contains(&self, p: &PauliOperator) -> Result<bool> {
        if p.num_qubits() != self.num_qubits {
            return Err(Error::PauliParse(format!(
                "operator on {} qubits, group on {}",
                p.num_qubits(),
                self.num_qubits
            )));
        }
        let mut rows: Vec<u64> = self.generators.iter().map(|g| g.symplectic_row()).collect();
        let rank_before = gf2_rank(&rows);
        rows.push(p.symplectic_row());
        Ok(gf2_rank(&rows) == rank_before)
    }

    /// Lexicographic enumeration of the non-identity Paulis supported on
    /// `subset` (digit order I, X, Y, Z per site), looking for a normalizer
    /// element outside the phase-extended group. Returns the first such
    /// witness.
    fn find_logical_on_subset(&self, subset: &SiteSubset) -> Result<Option<PauliOperator>> {
        subset.validate(&SystemLayout::qubits(self.num_qubits))?;
        if subset.len() > SUBSET_ENUMERATION_LIMIT {
            return Err(Error::EnumerationGuard {
                size: subset.len(),
                max: SUBSET_ENUMERATION_LIMIT,
            });
        }
        let sites = subset.indices();
        let total = 4usize.pow(sites.len() as u32);
        for code in 1..total {
            let mut digits = Vec::with_capacity(sites.len());
            let mut rest = code;
            for _ in 0..sites.len() {
                digits.push(rest % 4);
                rest /= 4;
            }
            digits.reverse();
            let mut x = vec![false; self.num_qubits];
            let mut z = vec![false; self.num_qubits];
            let mut y_count = 0u8;
            for (&site, &digit) in sites.iter().zip(&digits) {
                match digit {
                    0 => {}
                    1 => x[site - 1] = true,
                    2 => {
                        x[site - 1] = true;
                        z[site - 1] = true;
                        y_count += 1;
                    }
                    _ => z[site - 1] = true,
                }
            }
            // Hermitian representative: i^{#Y}·X^xZ^z
            let p = PauliOperator::from_bits(x, z, y_count % 4)?;
            if self.normalizer_contains(&p)? && !self.span_contains(&p)? {
                return Ok(Some(p));
            }
        }
        Ok(None)
    }

    /// Erasure criterion: the subset is correctable iff no non-identity
    /// Pauli supported on it is a logical operator (in the normalizer but
    /// outside the phase-extended group).
    pub fn erasure_correctable(&self, subset: &SiteSubset) -> Result<bool> {
        Ok(self.find_logical_on_subset(subset)?.is_none())
    }

    /// Set-equality form of the cleaning property on `subset`: every
    /// normalizer element supported there must already lie in the
    /// phase-extended group. On failure the violating logical operator is
    /// returned as the witness.
    pub fn cleaning_check(&self, subset: &SiteSubset) -> Result<CleaningReport> {
        let witness = self.find_logical_on_subset(subset)?;
        Ok(CleaningReport {
            passed: witness.is_none(),
            witness,
        })
    }

    /// Correctability table over all size-k subsets, in lexicographic order.
    pub fn scan_subsets(&self, k: usize) -> Result<Vec<ScanRow>> {
        if k > self.num_qubits {
            return Err(Error::InvalidSubset(format!(
                "subset size {k} exceeds qubit count {}",
                self.num_qubits
            )));
        }
        if k == 0 {
            return Ok(vec![ScanRow {
                subset: vec![],
                correctable: true,
            }]);
        }
        let mut rows = Vec::new();
        for combo in combinations(self.num_qubits, k) {
            let subset = SiteSubset::new(combo.clone())?;
            rows.push(ScanRow {
                subset: combo,
                correctable: self.erasure_correctable(&subset)?,
            });
        }
        Ok(rows)
    }
}

#[derive(Debug, Clone)]
pub struct CleaningReport {
    pub passed: bool,
    pub witness: Option<PauliOperator>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanRow {
    pub subset: Vec<usize>,
    pub correctable: bool,
}

/// Rank of a set of GF(2) rows (packed bits).
fn gf2_rank(rows: &[u64]) -> usize {
    let mut basis: Vec<u64> = Vec::new();
    for &row in rows {
        let mut v = row;
        for &b in &basis {
            let pivot = 1u64 << (63 - b.leading_zeros());
            if v & pivot != 0 {
                v ^= b;
            }
        }
        if v != 0 {
            basis.push(v);
        }
    }
    basis.len()
}

/// All k-element subsets of {1..n} in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (1..=k).collect();
    loop {
        out.push(current.clone());
        // advance the rightmost index that can still move
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if current[i] < n - (k - 1 - i) {
                current[i] += 1;
                for j in i + 1..k {
                    current[j] = current[j - 1] + 1;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::validate_code;
    use crate::tensor::max_abs_diff;

    const FIVE_QUBIT_GENS: [&str; 4] = ["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"];

    fn five_qubit_group() -> StabilizerGroup {
        StabilizerGroup::parse_generators(&FIVE_QUBIT_GENS).unwrap()
    }

    #[test]
    fn parse_xzzxi_bits() {
        let p = PauliOperator::parse("XZZXI").unwrap();
        assert_eq!(p.x_bits(), &[true, false, false, true, false]);
        assert_eq!(p.z_bits(), &[false, true, true, false, false]);
        assert_eq!(p.phase(), 0);
    }

    #[test]
    fn parse_rejects_bad_characters() {
        assert!(matches!(
            PauliOperator::parse("XQ"),
            Err(Error::PauliParse(_))
        ));
    }

    #[test]
    fn x_times_z_is_minus_i_y() {
        let x = PauliOperator::parse("X").unwrap();
        let z = PauliOperator::parse("Z").unwrap();
        let product = x.mul(&z).unwrap();
        assert_eq!(product, PauliOperator::parse("-iY").unwrap());
        assert_eq!(product.to_string(), "-iY");
        // and the matrices agree
        assert!(max_abs_diff(&product.matrix(), &(x.matrix() * z.matrix())) < 1e-15);
    }

    #[test]
    fn five_qubit_generators_commute() {
        let a = PauliOperator::parse("XZZXI").unwrap();
        let b = PauliOperator::parse("IXZZX").unwrap();
        assert!(a.commutes(&b).unwrap());
        five_qubit_group(); // constructor revalidates everything
    }

    #[test]
    fn mul_matches_matrix_product() {
        let pairs = [("XYZIX", "ZZXYI"), ("YIXZY", "XYZYX"), ("-iZZ" , "iXY")];
        for (s, t) in pairs {
            let p = PauliOperator::parse(s).unwrap();
            let q = PauliOperator::parse(t).unwrap();
            let product = p.mul(&q).unwrap();
            assert!(
                max_abs_diff(&product.matrix(), &(p.matrix() * q.matrix())) < 1e-12,
                "{s} · {t}"
            );
        }
    }

    #[test]
    fn codewords_single_z() {
        let g = StabilizerGroup::parse_generators(&["Z"]).unwrap();
        let code = g.codewords().unwrap();
        assert_eq!(code.dim(), 1);
        assert!((code.basis()[0].amplitudes()[0] - C64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn codewords_repetition_pair() {
        let g = StabilizerGroup::parse_generators(&["ZZI", "IZZ"]).unwrap();
        let code = g.codewords().unwrap();
        assert_eq!(code.dim(), 2);
        assert!(validate_code(&code).passed);
        // span must be {|000⟩, |111⟩}: every basis vector is supported there
        for v in code.basis() {
            for (idx, amp) in v.amplitudes().iter().enumerate() {
                if idx != 0 && idx != 7 {
                    assert!(amp.norm() < 1e-12, "amplitude at {idx} is {amp}");
                }
            }
        }
    }

    #[test]
    fn codewords_fixed_by_generators() {
        let g = five_qubit_group();
        let code = g.codewords().unwrap();
        assert_eq!(code.dim(), 2);
        for generator in g.generators() {
            let m = generator.matrix();
            for v in code.basis() {
                let image = &m * v.amplitudes();
                assert!((image - v.amplitudes()).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn normalizer_and_span_membership() {
        let g = five_qubit_group();
        let logical_x = PauliOperator::parse("XXXXX").unwrap();
        assert!(g.normalizer_contains(&logical_x).unwrap());
        assert!(!g.span_contains(&logical_x).unwrap());

        for generator in g.generators() {
            assert!(g.normalizer_contains(generator).unwrap());
            assert!(g.span_contains(generator).unwrap());
        }

        let x1 = PauliOperator::parse("XIIII").unwrap();
        assert!(!g.normalizer_contains(&x1).unwrap());

        let prod13 = g.generators()[0].mul(&g.generators()[2]).unwrap();
        assert!(g.span_contains(&prod13).unwrap());

        let minus_gen = PauliOperator::parse("-XZZXI").unwrap();
        assert!(g.span_contains(&minus_gen).unwrap());
    }

    #[test]
    fn erasure_correctability_thresholds() {
        let g = five_qubit_group();
        assert!(g
            .erasure_correctable(&SiteSubset::new(vec![4, 5]).unwrap())
            .unwrap());
        assert!(!g
            .erasure_correctable(&SiteSubset::new(vec![3, 4, 5]).unwrap())
            .unwrap());
    }

    #[test]
    fn trivial_group_leaks_on_unprotected_qubit() {
        let g = StabilizerGroup::parse_generators(&["ZI"]).unwrap();
        // Z on qubit 2 commutes with Z1 but is not in its span
        assert!(!g
            .erasure_correctable(&SiteSubset::new(vec![2]).unwrap())
            .unwrap());
    }

    #[test]
    fn cleaning_witness_on_first_three_qubits() {
        let g = five_qubit_group();
        let clean = g
            .cleaning_check(&SiteSubset::new(vec![4, 5]).unwrap())
            .unwrap();
        assert!(clean.passed);
        assert!(clean.witness.is_none());

        let report = g
            .cleaning_check(&SiteSubset::new(vec![1, 2, 3]).unwrap())
            .unwrap();
        assert!(!report.passed);
        let witness = report.witness.unwrap();
        assert!(witness.supported_within(&SiteSubset::new(vec![1, 2, 3]).unwrap()));
        assert!(g.normalizer_contains(&witness).unwrap());
        assert!(!g.span_contains(&witness).unwrap());

        // the cleaned logical X̃′ = Z⊗X⊗Z⊗I⊗I is such a witness too
        let cleaned = PauliOperator::parse("ZXZII").unwrap();
        assert!(g.normalizer_contains(&cleaned).unwrap());
        assert!(!g.span_contains(&cleaned).unwrap());
    }

    #[test]
    fn scan_tables() {
        let g = five_qubit_group();
        let two = g.scan_subsets(2).unwrap();
        assert_eq!(two.len(), 10);
        assert!(two.iter().all(|row| row.correctable));

        let three = g.scan_subsets(3).unwrap();
        assert_eq!(three.len(), 10);
        assert!(three.iter().all(|row| !row.correctable));

        let zero = g.scan_subsets(0).unwrap();
        assert_eq!(zero.len(), 1);
        assert!(zero[0].correctable);
        assert!(zero[0].subset.is_empty());
    }

    #[test]
    fn group_rejects_invalid_generators() {
        // anticommuting pair
        assert!(StabilizerGroup::parse_generators(&["XI", "ZI"]).is_err());
        // dependent set
        assert!(StabilizerGroup::parse_generators(&["ZZ", "ZZ"]).is_err());
        // squares to −I
        assert!(StabilizerGroup::parse_generators(&["iX"]).is_err());
    }

    #[test]
    fn enumeration_guard_raises() {
        let g = StabilizerGroup::parse_generators(&["ZZZZZZZZZI"]).unwrap();
        let too_big = SiteSubset::new((1..=9).collect()).unwrap();
        assert!(matches!(
            g.erasure_correctable(&too_big),
            Err(Error::EnumerationGuard { .. })
        ));
    }
}
