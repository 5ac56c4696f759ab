//! Built-in example codes with their published ground-truth decompositions,
//! usable as executable fixtures. Basis vectors are stored normalized; the
//! tables are transcribed sign-for-sign, and a build-time self-test checks
//! that each stored isometry/ancilla-state pair reconstructs the stored
//! basis exactly.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};

use crate::codes::CodeSubspace;
use crate::error::{Error, Result};
use crate::structure::{reconstruct_basis, StructureDecomposition};
use crate::tensor::{DensityMatrix, SiteSubset, StateVector, SystemLayout, C64};

pub const FIXTURE_NAMES: [&str; 7] = [
    "grassl4",
    "cgl_qutrit",
    "ququart",
    "ququart_as_3qubit",
    "five_qubit",
    "trivial_demo",
    "qutrit_variant",
];

/// An example code together with everything its source documents about it.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub code: CodeSubspace,
    /// The erased subset the documented decomposition refers to.
    pub documented_subset: SiteSubset,
    pub expected_dim_a: usize,
    pub expected_gamma: Vec<f64>,
    /// Documented ancilla-erased state on [dim A, erased dims…].
    pub expected_psi: StateVector,
    /// Documented isometry (complement dim × dimS·dimA), columns i·dimA + a.
    pub expected_isometry: DMatrix<C64>,
    pub expected_correctable: Vec<SiteSubset>,
    pub expected_uncorrectable: Vec<SiteSubset>,
    pub metadata: BTreeMap<String, String>,
}

impl Fixture {
    /// The documented decomposition as a validated object (sigma defaults to
    /// maximally mixed on the erased sites).
    pub fn expected_decomposition(&self) -> Result<StructureDecomposition> {
        let e_layout = self
            .code
            .layout()
            .subset_layout(&self.documented_subset)?;
        StructureDecomposition::new(
            self.code.dim(),
            self.expected_dim_a,
            self.expected_isometry.clone(),
            self.expected_gamma.clone(),
            self.expected_psi.clone(),
            DensityMatrix::maximally_mixed(e_layout),
        )
    }

    /// Max 2-norm error of reconstructing the stored basis from the stored
    /// isometry and ancilla state. The documented tables are exact, so this
    /// should vanish to machine precision.
    pub fn self_test_residual(&self) -> Result<f64> {
        let rec = reconstruct_basis(
            self.code.layout(),
            &self.documented_subset,
            &self.expected_isometry,
            &self.expected_psi,
            self.code.dim(),
        )?;
        Ok(self
            .code
            .basis()
            .iter()
            .zip(&rec)
            .map(|(orig, r)| (orig.amplitudes() - r.amplitudes()).norm())
            .fold(0.0f64, f64::max))
    }
}

pub fn fixture_names() -> &'static [&'static str] {
    &FIXTURE_NAMES
}

pub fn fixture(name: &str) -> Result<Fixture> {
    match name {
        "grassl4" => grassl4(),
        "cgl_qutrit" => cgl_qutrit(),
        "ququart" => ququart(),
        "ququart_as_3qubit" => ququart_as_3qubit(),
        "five_qubit" => five_qubit(),
        "trivial_demo" => trivial_demo(),
        "qutrit_variant" => qutrit_variant(),
        other => Err(Error::UnknownFixture(other.to_string())),
    }
}

// --- construction helpers ---------------------------------------------------

fn digits_of(text: &str) -> Vec<usize> {
    text.chars()
        .map(|c| c.to_digit(10).expect("fixture ket digits") as usize)
        .collect()
}

/// Normalized superposition of computational kets given as digit strings.
fn superpose(layout: &SystemLayout, terms: &[(f64, &str)]) -> StateVector {
    let mut amps = DVector::zeros(layout.total_dim());
    for &(coeff, ket) in terms {
        amps[layout.digits_to_index(&digits_of(ket))] += C64::new(coeff, 0.0);
    }
    StateVector::new(layout.clone(), amps)
        .and_then(StateVector::normalized)
        .expect("fixture state")
}

fn code(layout: &SystemLayout, label: &str, vectors: &[&[(f64, &str)]]) -> CodeSubspace {
    let basis = vectors.iter().map(|t| superpose(layout, t)).collect();
    CodeSubspace::new(layout.clone(), basis, label).expect("fixture code")
}

/// Isometry from per-column ket superpositions on the complement layout;
/// each column is normalized.
fn isometry(comp_layout: &SystemLayout, columns: &[&[(f64, &str)]]) -> DMatrix<C64> {
    let mut u = DMatrix::zeros(comp_layout.total_dim(), columns.len());
    for (j, terms) in columns.iter().enumerate() {
        let col = superpose(comp_layout, terms);
        for (i, amp) in col.amplitudes().iter().enumerate() {
            u[(i, j)] = *amp;
        }
    }
    u
}

fn psi_state(dim_a: usize, e_dims: &[usize], terms: &[(f64, &str)]) -> StateVector {
    let mut dims = vec![dim_a];
    dims.extend_from_slice(e_dims);
    let layout = SystemLayout::allowing_unit_sites(dims).expect("psi layout");
    superpose(&layout, terms)
}

fn subsets(lists: &[&[usize]]) -> Vec<SiteSubset> {
    lists
        .iter()
        .map(|s| SiteSubset::new(s.to_vec()).expect("fixture subset"))
        .collect()
}

fn meta(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
    pairs
        .iter()
        .map(|&(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

// --- the fixtures ------------------------------------------------------------

/// Two-logical-qubit code on four qubits, correctable for every single-qubit
/// erasure.
fn grassl4() -> Result<Fixture> {
    let layout = SystemLayout::qubits(4);
    let code = code(
        &layout,
        "grassl4",
        &[
            &[(1.0, "0000"), (1.0, "1111")],
            &[(1.0, "1001"), (1.0, "0110")],
            &[(1.0, "1100"), (1.0, "0011")],
            &[(1.0, "1010"), (1.0, "0101")],
        ],
    );
    let comp = SystemLayout::qubits(3);
    let expected_isometry = isometry(
        &comp,
        &[
            &[(1.0, "000")],
            &[(1.0, "111")],
            &[(1.0, "011")],
            &[(1.0, "100")],
            &[(1.0, "110")],
            &[(1.0, "001")],
            &[(1.0, "101")],
            &[(1.0, "010")],
        ],
    );
    Ok(Fixture {
        name: "grassl4",
        code,
        documented_subset: SiteSubset::new(vec![4])?,
        expected_dim_a: 2,
        expected_gamma: vec![0.5, 0.5],
        expected_psi: psi_state(2, &[2], &[(1.0, "00"), (1.0, "11")]),
        expected_isometry,
        expected_correctable: subsets(&[&[1], &[2], &[3], &[4]]),
        expected_uncorrectable: subsets(&[&[1, 2], &[1, 3], &[1, 4], &[2, 3], &[2, 4], &[3, 4]]),
        metadata: meta(&[
            ("system", "four qubits"),
            ("documented", "correctable for each of the four single-qubit erasures; decomposition tabulated for erasure of qubit 4"),
            ("derived", "all two-qubit subsets fail the dimension bound: the erased-cut Schmidt rank is 2, and 4·2 > 4"),
        ]),
    })
}

/// Threshold secret-sharing code: one qutrit into three, any single site
/// recoverable, any two sites not.
fn cgl_qutrit() -> Result<Fixture> {
    let layout = SystemLayout::new(vec![3, 3, 3])?;
    let code = code(
        &layout,
        "cgl_qutrit",
        &[
            &[(1.0, "000"), (1.0, "111"), (1.0, "222")],
            &[(1.0, "012"), (1.0, "120"), (1.0, "201")],
            &[(1.0, "021"), (1.0, "102"), (1.0, "210")],
        ],
    );
    let comp = SystemLayout::new(vec![3, 3])?;
    let expected_isometry = isometry(
        &comp,
        &[
            &[(1.0, "00")],
            &[(1.0, "11")],
            &[(1.0, "22")],
            &[(1.0, "12")],
            &[(1.0, "20")],
            &[(1.0, "01")],
            &[(1.0, "21")],
            &[(1.0, "02")],
            &[(1.0, "10")],
        ],
    );
    Ok(Fixture {
        name: "cgl_qutrit",
        code,
        documented_subset: SiteSubset::new(vec![1])?,
        expected_dim_a: 3,
        expected_gamma: vec![1.0 / 3.0; 3],
        expected_psi: psi_state(3, &[3], &[(1.0, "00"), (1.0, "11"), (1.0, "22")]),
        expected_isometry,
        expected_correctable: subsets(&[&[1], &[2], &[3]]),
        expected_uncorrectable: subsets(&[&[1, 2], &[1, 3], &[2, 3]]),
        metadata: meta(&[
            ("system", "three qutrits"),
            ("documented", "correctable for each single-qutrit erasure but no pair (threshold scheme); decomposition tabulated for erasure of site 1"),
        ]),
    })
}

/// Single-qubit code on two ququarts where the logical system is not any
/// qudit register.
fn ququart() -> Result<Fixture> {
    let layout = SystemLayout::new(vec![4, 4])?;
    let code = code(
        &layout,
        "ququart",
        &[
            &[(1.0, "00"), (1.0, "11")],
            &[(1.0, "20"), (1.0, "31")],
        ],
    );
    let comp = SystemLayout::new(vec![4])?;
    let expected_isometry = isometry(
        &comp,
        &[&[(1.0, "0")], &[(1.0, "1")], &[(1.0, "2")], &[(1.0, "3")]],
    );
    Ok(Fixture {
        name: "ququart",
        code,
        documented_subset: SiteSubset::new(vec![2])?,
        expected_dim_a: 2,
        expected_gamma: vec![0.5, 0.5],
        expected_psi: psi_state(2, &[4], &[(1.0, "00"), (1.0, "11")]),
        expected_isometry,
        expected_correctable: subsets(&[&[2]]),
        expected_uncorrectable: subsets(&[&[1], &[1, 2]]),
        metadata: meta(&[
            ("system", "two ququarts"),
            ("documented", "correctable for erasure of the second system; reduced codeword states occupy disjoint rank-2 blocks"),
            ("derived", "erasing system 1 leaks the logical index into the environment, so site 1 is not correctable"),
        ]),
    })
}

/// The same code re-encoded on three qubits, where the logical system is the
/// first qubit register.
fn ququart_as_3qubit() -> Result<Fixture> {
    let layout = SystemLayout::qubits(3);
    let code = code(
        &layout,
        "ququart_as_3qubit",
        &[
            &[(1.0, "000"), (1.0, "011")],
            &[(1.0, "100"), (1.0, "111")],
        ],
    );
    let comp = SystemLayout::qubits(2);
    let expected_isometry = isometry(
        &comp,
        &[&[(1.0, "00")], &[(1.0, "01")], &[(1.0, "10")], &[(1.0, "11")]],
    );
    Ok(Fixture {
        name: "ququart_as_3qubit",
        code,
        documented_subset: SiteSubset::new(vec![3])?,
        expected_dim_a: 2,
        expected_gamma: vec![0.5, 0.5],
        expected_psi: psi_state(2, &[2], &[(1.0, "00"), (1.0, "11")]),
        expected_isometry,
        expected_correctable: subsets(&[&[2], &[3], &[2, 3]]),
        expected_uncorrectable: subsets(&[&[1], &[1, 2], &[1, 3], &[1, 2, 3]]),
        metadata: meta(&[
            ("system", "three qubits (logical register ⊗ maximally entangled pair)"),
            ("documented", "correctable for erasure of the third qubit; equivalent to the two-ququart example"),
            ("derived", "the entangled pair on qubits 2,3 is symmetric, so {2} and {2,3} are also correctable; anything touching qubit 1 is not"),
        ]),
    })
}

/// The perfect single-logical-qubit code on five qubits: any two erasures
/// correctable, no three.
fn five_qubit() -> Result<Fixture> {
    let layout = SystemLayout::qubits(5);
    let code = code(
        &layout,
        "five_qubit",
        &[
            &[
                (1.0, "00000"),
                (1.0, "10010"),
                (1.0, "01001"),
                (1.0, "10100"),
                (1.0, "01010"),
                (-1.0, "11011"),
                (-1.0, "00110"),
                (-1.0, "11000"),
                (-1.0, "11101"),
                (-1.0, "00011"),
                (-1.0, "11110"),
                (-1.0, "01111"),
                (-1.0, "10001"),
                (-1.0, "01100"),
                (-1.0, "10111"),
                (1.0, "00101"),
            ],
            &[
                (1.0, "11111"),
                (1.0, "01101"),
                (1.0, "10110"),
                (1.0, "01011"),
                (1.0, "10101"),
                (-1.0, "00100"),
                (-1.0, "11001"),
                (-1.0, "00111"),
                (-1.0, "00010"),
                (-1.0, "11100"),
                (-1.0, "00001"),
                (-1.0, "10000"),
                (-1.0, "01110"),
                (-1.0, "10011"),
                (-1.0, "01000"),
                (1.0, "11010"),
            ],
        ],
    );
    let comp = SystemLayout::qubits(3);
    let expected_isometry = isometry(
        &comp,
        &[
            &[(1.0, "000"), (-1.0, "011"), (1.0, "101"), (-1.0, "110")],
            &[(1.0, "001"), (1.0, "010"), (-1.0, "100"), (-1.0, "111")],
            &[(-1.0, "001"), (1.0, "010"), (1.0, "100"), (-1.0, "111")],
            &[(-1.0, "000"), (-1.0, "011"), (-1.0, "101"), (-1.0, "110")],
            &[(-1.0, "001"), (-1.0, "010"), (-1.0, "100"), (-1.0, "111")],
            &[(-1.0, "000"), (1.0, "011"), (1.0, "101"), (-1.0, "110")],
            &[(-1.0, "000"), (-1.0, "011"), (1.0, "101"), (1.0, "110")],
            &[(-1.0, "001"), (1.0, "010"), (-1.0, "100"), (1.0, "111")],
        ],
    );
    let two_subsets: Vec<SiteSubset> = combinations_of_five(2);
    let singles: Vec<SiteSubset> = combinations_of_five(1);
    let three_subsets: Vec<SiteSubset> = combinations_of_five(3);
    let four_subsets: Vec<SiteSubset> = combinations_of_five(4);
    let mut expected_correctable = singles;
    expected_correctable.extend(two_subsets);
    let mut expected_uncorrectable = three_subsets;
    expected_uncorrectable.extend(four_subsets);
    expected_uncorrectable.push(SiteSubset::new(vec![1, 2, 3, 4, 5])?);
    Ok(Fixture {
        name: "five_qubit",
        code,
        documented_subset: SiteSubset::new(vec![4, 5])?,
        expected_dim_a: 4,
        expected_gamma: vec![0.25; 4],
        expected_psi: psi_state(
            4,
            &[2, 2],
            &[(1.0, "000"), (1.0, "101"), (1.0, "210"), (1.0, "311")],
        ),
        expected_isometry,
        expected_correctable,
        expected_uncorrectable,
        metadata: meta(&[
            ("system", "five qubits, one logical qubit, distance three"),
            ("stabilizer_generators", "XZZXI,IXZZX,XIXZZ,ZXIXZ"),
            ("logical_operators", "XXXXX,ZZZZZ"),
            ("cleaned_logicals_on_123", "ZXZII,YZYII"),
            ("documented", "correctable for any two erasures; decomposition tabulated for erasure of qubits 4,5"),
            ("derived", "no three-qubit subset is correctable (perfect/MDS code at the quantum Singleton bound)"),
        ]),
    })
}

fn combinations_of_five(k: usize) -> Vec<SiteSubset> {
    fn extend(start: usize, k: usize, prefix: &mut Vec<usize>, out: &mut Vec<SiteSubset>) {
        if prefix.len() == k {
            out.push(SiteSubset::new(prefix.clone()).unwrap());
            return;
        }
        for s in start..=5 {
            prefix.push(s);
            extend(s + 1, k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    extend(1, k, &mut Vec::new(), &mut out);
    out
}

/// A product-form code: a fixed state on the erased site times a plain
/// subspace of the untouched sites.
fn trivial_demo() -> Result<Fixture> {
    let layout = SystemLayout::qubits(3);
    let code = code(
        &layout,
        "trivial_demo",
        &[
            &[(1.0, "000"), (1.0, "001")],
            &[(1.0, "100"), (1.0, "101")],
        ],
    );
    let comp = SystemLayout::qubits(2);
    let expected_isometry = isometry(&comp, &[&[(1.0, "00")], &[(1.0, "10")]]);
    Ok(Fixture {
        name: "trivial_demo",
        code,
        documented_subset: SiteSubset::new(vec![3])?,
        expected_dim_a: 1,
        expected_gamma: vec![1.0],
        expected_psi: psi_state(1, &[2], &[(1.0, "00"), (1.0, "01")]),
        expected_isometry,
        expected_correctable: subsets(&[&[2], &[3], &[2, 3]]),
        expected_uncorrectable: subsets(&[&[1], &[1, 2], &[1, 3], &[1, 2, 3]]),
        metadata: meta(&[
            ("system", "three qubits; logical qubit on site 1, fixed |0⟩ on site 2, fixed |+⟩ on site 3"),
            ("documented", "trivial codes have a separable ancilla-erased state and a fixed factor on the erased sites"),
        ]),
    })
}

/// Variant two-codeword code built from the same ancilla state as grassl4
/// but a different isometry.
fn qutrit_variant() -> Result<Fixture> {
    let layout = SystemLayout::qubits(4);
    let code = code(
        &layout,
        "qutrit_variant",
        &[
            &[(1.0, "0000"), (1.0, "1110"), (1.0, "0001"), (-1.0, "1111")],
            &[(1.0, "0110"), (1.0, "1000"), (1.0, "0111"), (-1.0, "1001")],
        ],
    );
    let comp = SystemLayout::qubits(3);
    let expected_isometry = isometry(
        &comp,
        &[
            &[(1.0, "000"), (1.0, "111")],
            &[(1.0, "000"), (-1.0, "111")],
            &[(1.0, "011"), (1.0, "100")],
            &[(1.0, "011"), (-1.0, "100")],
        ],
    );
    Ok(Fixture {
        name: "qutrit_variant",
        code,
        documented_subset: SiteSubset::new(vec![4])?,
        expected_dim_a: 2,
        expected_gamma: vec![0.5, 0.5],
        expected_psi: psi_state(2, &[2], &[(1.0, "00"), (1.0, "11")]),
        expected_isometry,
        expected_correctable: subsets(&[&[1], &[2], &[3], &[4]]),
        expected_uncorrectable: subsets(&[&[1, 2], &[1, 3], &[1, 4], &[2, 3], &[2, 4], &[3, 4]]),
        metadata: meta(&[
            ("system", "four qubits, two codewords"),
            ("documented", "correctable for erasure of qubit 4 via a rotated isometry on the same maximally entangled ancilla state"),
            ("derived", "all single-qubit erasures are correctable; no two-qubit subset is"),
            ("qutrit_extension", "a three-dimensional code follows by adding a logical index |2⟩ and extending the isometry to |2⟩⊗ancilla; only this recipe is recorded, no codewords are fixed here"),
        ]),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::validate_code;

    #[test]
    fn all_fixtures_validate_and_self_test() {
        for name in fixture_names() {
            let f = fixture(name).unwrap();
            assert!(validate_code(&f.code).passed, "{name} basis not orthonormal");
            let residual = f.self_test_residual().unwrap();
            assert!(
                residual <= 1e-12,
                "{name} table does not reconstruct its basis (residual {residual:.3e})"
            );
            // the documented decomposition is internally consistent
            f.expected_decomposition().unwrap();
        }
    }

    #[test]
    fn unknown_fixture_errors() {
        assert!(matches!(fixture("nope"), Err(Error::UnknownFixture(_))));
    }

    #[test]
    fn grassl4_expected_values() {
        let f = fixture("grassl4").unwrap();
        assert_eq!(f.expected_dim_a, 2);
        assert_eq!(f.expected_gamma, vec![0.5, 0.5]);
        assert_eq!(f.code.dim(), 4);
    }

    #[test]
    fn cgl_qutrit_threshold_lists() {
        let f = fixture("cgl_qutrit").unwrap();
        let singles: Vec<Vec<usize>> = f
            .expected_correctable
            .iter()
            .map(|s| s.indices().to_vec())
            .collect();
        assert_eq!(singles, vec![vec![1], vec![2], vec![3]]);
        let pairs: Vec<Vec<usize>> = f
            .expected_uncorrectable
            .iter()
            .map(|s| s.indices().to_vec())
            .collect();
        assert_eq!(pairs, vec![vec![1, 2], vec![1, 3], vec![2, 3]]);
    }

    #[test]
    fn five_qubit_psi_is_two_bell_pairs() {
        let f = fixture("five_qubit").unwrap();
        let amps = f.expected_psi.amplitudes();
        assert_eq!(amps.len(), 16);
        for k in 0..4 {
            let idx = k * 4 + k;
            assert!((amps[idx] - C64::new(0.25f64.sqrt(), 0.0)).norm() < 1e-15);
        }
        assert_eq!(f.expected_correctable.len(), 15);
        assert_eq!(f.expected_uncorrectable.len(), 16);
    }
}
