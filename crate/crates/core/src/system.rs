//! Builders and exact/perturbative eigensystems for the 2-level and 3-level
//! coupled-qubit models.
//!
//! The undriven system is H₀ = −(Δ₁σ_z⁽¹⁾ + Δ₂σ_z⁽²⁾)/2 + J σ_x⁽¹⁾σ_x⁽²⁾
//! with σ_z|0⟩ = +|0⟩, so |00⟩ is the ground product state. All energies are
//! linear frequencies (E/h) in GHz. The product basis is ordered with
//! index = levels·q₁ + q₂ (qubit 1 is the most significant digit).

use crate::error::{Error, Result};
use crate::numerics::{self, CMatrix, C64};

/// Two coupled qubits (or qutrits) with transverse σ_x⊗σ_x coupling.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemSpec {
    /// Qubit-1 splitting Δ₁/h in GHz.
    pub delta1: f64,
    /// Qubit-2 splitting Δ₂/h in GHz.
    pub delta2: f64,
    /// Coupling J/h in GHz.
    pub j: f64,
    /// Levels per qubit, 2 or 3.
    pub levels: usize,
    /// Anharmonicity δ₁/h in GHz (levels = 3 only; may be negative).
    pub anharm1: Option<f64>,
    /// Anharmonicity δ₂/h in GHz (levels = 3 only; may be negative).
    pub anharm2: Option<f64>,
}

impl SystemSpec {
    /// Two-level spec.
    pub fn two_level(delta1: f64, delta2: f64, j: f64) -> Result<Self> {
        let spec = SystemSpec {
            delta1,
            delta2,
            j,
            levels: 2,
            anharm1: None,
            anharm2: None,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Three-level spec with anharmonicities δ₁, δ₂.
    pub fn three_level(delta1: f64, delta2: f64, j: f64, anharm1: f64, anharm2: f64) -> Result<Self> {
        let spec = SystemSpec {
            delta1,
            delta2,
            j,
            levels: 3,
            anharm1: Some(anharm1),
            anharm2: Some(anharm2),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta1 > 0.0 && self.delta2 > 0.0) {
            return Err(Error::InvalidSpec(format!(
                "qubit splittings must be positive, got Δ₁ = {}, Δ₂ = {}",
                self.delta1, self.delta2
            )));
        }
        match self.levels {
            2 => {
                if self.anharm1.is_some() || self.anharm2.is_some() {
                    return Err(Error::InvalidSpec(
                        "anharmonicities are only meaningful for levels = 3".into(),
                    ));
                }
            }
            3 => {
                let (d1, d2) = (
                    self.anharm1.ok_or_else(|| {
                        Error::InvalidSpec("levels = 3 requires anharm1".into())
                    })?,
                    self.anharm2.ok_or_else(|| {
                        Error::InvalidSpec("levels = 3 requires anharm2".into())
                    })?,
                );
                if self.delta1 + d1 <= 0.0 || self.delta2 + d2 <= 0.0 {
                    return Err(Error::InvalidSpec(
                        "1↔2 transition frequency Δᵢ + δᵢ must be positive".into(),
                    ));
                }
            }
            n => {
                return Err(Error::InvalidSpec(format!(
                    "levels must be 2 or 3, got {n}"
                )));
            }
        }
        Ok(())
    }

    /// Hilbert-space dimension (levels²).
    pub fn dim(&self) -> usize {
        self.levels * self.levels
    }

    /// Δ₁ − Δ₂ in GHz.
    pub fn detuning(&self) -> f64 {
        self.delta1 - self.delta2
    }

    /// Product-basis index of |q₁q₂⟩.
    pub fn product_index(&self, q1: usize, q2: usize) -> usize {
        self.levels * q1 + q2
    }
}

/// Exact mixing angles of the two-level eigensystem:
/// tan θ₁ = 2J/(Δ₁+Δ₂), tan θ₂ = 2J/(Δ₁−Δ₂), θ± = (θ₂ ± θ₁)/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixingAngles {
    pub theta1: f64,
    pub theta2: f64,
    pub theta_plus: f64,
    pub theta_minus: f64,
}

impl MixingAngles {
    /// Closed-form angles; the atan2 branch keeps θ ∈ (0, π) for J > 0 so
    /// the eigenstate expressions stay valid when Δ₁ < Δ₂ or Δ₁ = Δ₂.
    pub fn from_spec(spec: &SystemSpec) -> Self {
        let theta1 = (2.0 * spec.j).atan2(spec.delta1 + spec.delta2);
        let theta2 = (2.0 * spec.j).atan2(spec.delta1 - spec.delta2);
        MixingAngles {
            theta1,
            theta2,
            theta_plus: 0.5 * (theta1 + theta2),
            theta_minus: 0.5 * (theta2 - theta1),
        }
    }
}

/// Eigensystem with product-basis labels and (for 2-level) mixing angles.
#[derive(Debug, Clone)]
pub struct Eigensystem {
    /// Energies in label order, GHz·h.
    pub energies: Vec<f64>,
    /// Eigenvectors as columns, in label order, expressed in the product basis.
    pub states: CMatrix,
    /// Mixing angles (2-level only).
    pub angles: Option<MixingAngles>,
    /// labels[k] = product-basis index whose character state k carries.
    pub labels: Vec<usize>,
}

impl Eigensystem {
    /// Transition frequency E_k − E_l in GHz.
    pub fn gap(&self, k: usize, l: usize) -> f64 {
        self.energies[k] - self.energies[l]
    }
}

const SQRT2: f64 = std::f64::consts::SQRT_2;

fn sigma_x(levels: usize) -> CMatrix {
    match levels {
        2 => CMatrix::from_row_slice(
            2,
            2,
            &[
                C64::new(0.0, 0.0),
                C64::new(1.0, 0.0),
                C64::new(1.0, 0.0),
                C64::new(0.0, 0.0),
            ],
        ),
        3 => CMatrix::from_row_slice(
            3,
            3,
            &[
                C64::new(0.0, 0.0),
                C64::new(1.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(1.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(SQRT2, 0.0),
                C64::new(0.0, 0.0),
                C64::new(SQRT2, 0.0),
                C64::new(0.0, 0.0),
            ],
        ),
        _ => unreachable!("validated levels"),
    }
}

fn single_qubit_diag(levels: usize, delta: f64, anharm: f64) -> CMatrix {
    match levels {
        2 => CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            C64::new(-delta / 2.0, 0.0),
            C64::new(delta / 2.0, 0.0),
        ])),
        3 => CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            C64::new(-delta / 2.0, 0.0),
            C64::new(delta / 2.0, 0.0),
            C64::new(1.5 * delta + anharm, 0.0),
        ])),
        _ => unreachable!("validated levels"),
    }
}

/// σ_x acting on one qubit of the pair, in the product basis.
pub fn sigma_x_on(spec: &SystemSpec, qubit: usize) -> CMatrix {
    let sx = sigma_x(spec.levels);
    let eye = CMatrix::identity(spec.levels, spec.levels);
    match qubit {
        1 => numerics::kron(&sx, &eye),
        2 => numerics::kron(&eye, &sx),
        _ => panic!("qubit index must be 1 or 2"),
    }
}

/// Undriven Hamiltonian H₀ in the product basis, GHz·h units.
pub fn build_hamiltonian(spec: &SystemSpec) -> Result<CMatrix> {
    spec.validate()?;
    let eye = CMatrix::identity(spec.levels, spec.levels);
    let h1 = single_qubit_diag(spec.levels, spec.delta1, spec.anharm1.unwrap_or(0.0));
    let h2 = single_qubit_diag(spec.levels, spec.delta2, spec.anharm2.unwrap_or(0.0));
    let sx1 = sigma_x_on(spec, 1);
    let sx2 = sigma_x_on(spec, 2);
    Ok(numerics::kron(&h1, &eye)
        + numerics::kron(&eye, &h2)
        + sx1 * sx2 * C64::new(spec.j, 0.0))
}

/// Canonical label order: position k in this list is the product-basis index
/// that label k refers to. For 2-level this is the identity (|00⟩..|11⟩); for
/// 3-level it follows the convention where labels 0–3 match the two-level
/// case (so |11⟩ is label 3 and |02⟩ label 4, interchanged relative to the
/// energy order when Δ₂ + δ₂ < Δ₁).
pub fn canonical_label_products(levels: usize) -> Vec<usize> {
    match levels {
        2 => vec![0, 1, 2, 3],
        // |00⟩,|01⟩,|10⟩,|11⟩,|02⟩,|20⟩,|12⟩,|21⟩,|22⟩ with index = 3q₁+q₂.
        3 => vec![0, 1, 3, 4, 2, 6, 5, 7, 8],
        _ => unreachable!("validated levels"),
    }
}

/// Exact eigensystem with maximum-overlap labeling.
///
/// Labels are assigned by the dominant product-basis component of each
/// eigenvector; an overlap² of 1/2 or less is rejected as ambiguous.
pub fn exact_eigensystem(spec: &SystemSpec) -> Result<Eigensystem> {
    let h = build_hamiltonian(spec)?;
    let (values, vectors) = numerics::eig_hermitian(&h)?;
    let dim = spec.dim();
    let canon = canonical_label_products(spec.levels);

    // product index -> eigencolumn claiming it
    let mut claimed: Vec<Option<usize>> = vec![None; dim];
    for col in 0..dim {
        let mut best_p = 0usize;
        let mut best_ov = 0.0f64;
        for p in 0..dim {
            let ov = vectors[(p, col)].norm_sqr();
            if ov > best_ov {
                best_ov = ov;
                best_p = p;
            }
        }
        if best_ov <= 0.5 + 1e-9 {
            return Err(Error::LabelingAmbiguous {
                state: format!("eigenstate {col}"),
                overlap_sq: best_ov,
            });
        }
        claimed[best_p] = Some(col);
    }

    let mut energies = vec![0.0; dim];
    let mut states = CMatrix::zeros(dim, dim);
    let mut labels = vec![0usize; dim];
    for (label, &product) in canon.iter().enumerate() {
        let col = claimed[product].ok_or(Error::LabelingAmbiguous {
            state: format!("product state {product}"),
            overlap_sq: 0.0,
        })?;
        energies[label] = values[col];
        states.set_column(label, &vectors.column(col));
        labels[label] = product;
    }

    let angles = (spec.levels == 2).then(|| MixingAngles::from_spec(spec));
    Ok(Eigensystem {
        energies,
        states,
        angles,
        labels,
    })
}

/// One first-order eigenstate: the dominant product state plus its
/// perturbative admixtures, and the perturbative energy.
#[derive(Debug, Clone)]
pub struct WeakState {
    /// Label of the state (same convention as [`exact_eigensystem`]).
    pub label: usize,
    /// Product-basis index of the dominant component.
    pub product: usize,
    /// (product index, real amplitude) of each first-order admixture.
    pub admixtures: Vec<(usize, f64)>,
    /// Perturbative energy in GHz·h (includes J² shifts for levels = 3).
    pub energy: f64,
}

/// First-order state table from weak-coupling perturbation theory.
#[derive(Debug, Clone)]
pub struct WeakCoupling {
    pub states: Vec<WeakState>,
    /// Set when J/|Δ₁−Δ₂| > 0.2 and the expansion should not be trusted.
    pub strong_coupling_warning: bool,
}

impl WeakCoupling {
    /// Dense matrix of the (unnormalized) first-order states, columns in
    /// label order.
    pub fn state_matrix(&self, dim: usize) -> CMatrix {
        let mut m = CMatrix::zeros(dim, dim);
        for state in &self.states {
            m[(state.product, state.label)] = C64::new(1.0, 0.0);
            for &(p, a) in &state.admixtures {
                m[(p, state.label)] = C64::new(a, 0.0);
            }
        }
        m
    }
}

/// Weak-coupling (J ≪ |Δ₁−Δ₂|) first-order states and energies.
pub fn weak_coupling_states(spec: &SystemSpec) -> Result<WeakCoupling> {
    spec.validate()?;
    let dd = spec.detuning();
    if dd == 0.0 {
        return Err(Error::DegeneratePerturbation { delta: spec.delta1 });
    }
    let warning = (spec.j / dd).abs() > 0.2;
    let (d1, d2) = (spec.delta1, spec.delta2);
    let j = spec.j;

    let states = match spec.levels {
        2 => {
            let amp = j / dd;
            vec![
                WeakState { label: 0, product: 0, admixtures: vec![], energy: -(d1 + d2) / 2.0 },
                WeakState { label: 1, product: 1, admixtures: vec![(2, -amp)], energy: (-d1 + d2) / 2.0 },
                WeakState { label: 2, product: 2, admixtures: vec![(1, amp)], energy: (d1 - d2) / 2.0 },
                WeakState { label: 3, product: 3, admixtures: vec![], energy: (d1 + d2) / 2.0 },
            ]
        }
        3 => {
            let a1 = spec.anharm1.unwrap();
            let a2 = spec.anharm2.unwrap();
            for (name, den) in [
                ("Δ₁−Δ₂−δ₂", dd - a2),
                ("Δ₁−Δ₂+δ₁", dd + a1),
                ("Δ₁−Δ₂+δ₁−δ₂", dd + a1 - a2),
            ] {
                if den.abs() < 1e-9 {
                    return Err(Error::ResonantDenominator {
                        name: name.to_string(),
                        value: den,
                    });
                }
            }
            let p = |q1: usize, q2: usize| spec.product_index(q1, q2);
            let j2 = j * j;
            vec![
                WeakState { label: 0, product: p(0, 0), admixtures: vec![], energy: -d1 / 2.0 - d2 / 2.0 },
                WeakState {
                    label: 1,
                    product: p(0, 1),
                    admixtures: vec![(p(1, 0), -j / dd)],
                    energy: -d1 / 2.0 + d2 / 2.0 - j2 / dd,
                },
                WeakState {
                    label: 2,
                    product: p(1, 0),
                    admixtures: vec![(p(0, 1), j / dd)],
                    energy: d1 / 2.0 - d2 / 2.0 + j2 / dd,
                },
                WeakState {
                    label: 3,
                    product: p(1, 1),
                    admixtures: vec![
                        (p(0, 2), SQRT2 * j / (dd - a2)),
                        (p(2, 0), -SQRT2 * j / (dd + a1)),
                    ],
                    energy: d1 / 2.0 + d2 / 2.0 + 2.0 * j2 / (dd - a2) - 2.0 * j2 / (dd + a1),
                },
                WeakState {
                    label: 4,
                    product: p(0, 2),
                    admixtures: vec![(p(1, 1), -SQRT2 * j / (dd - a2))],
                    energy: -d1 / 2.0 + 1.5 * d2 + a2 - 2.0 * j2 / (dd - a2),
                },
                WeakState {
                    label: 5,
                    product: p(2, 0),
                    admixtures: vec![(p(1, 1), SQRT2 * j / (dd + a1))],
                    energy: 1.5 * d1 - d2 / 2.0 + a1 + 2.0 * j2 / (dd + a1),
                },
                // The |12⟩-dominant state; the admixture sign follows from
                // orthogonality with label 7 (first-order perturbation
                // theory on the ⟨21|H|12⟩ = 2J element).
                WeakState {
                    label: 6,
                    product: p(1, 2),
                    admixtures: vec![(p(2, 1), -2.0 * j / (dd + a1 - a2))],
                    energy: d1 / 2.0 + 1.5 * d2 + a2 - 4.0 * j2 / (dd + a1 - a2),
                },
                WeakState {
                    label: 7,
                    product: p(2, 1),
                    admixtures: vec![(p(1, 2), 2.0 * j / (dd + a1 - a2))],
                    energy: 1.5 * d1 + d2 / 2.0 + a1 + 4.0 * j2 / (dd + a1 - a2),
                },
                // |22⟩ sits at 3Δ₁/2 + δ₁ + 3Δ₂/2 + δ₂ (sum of the two
                // single-qutrit second-level energies); no J² shift at this
                // order because its only coupling partners are Δ-scale away.
                WeakState {
                    label: 8,
                    product: p(2, 2),
                    admixtures: vec![],
                    energy: 1.5 * d1 + a1 + 1.5 * d2 + a2,
                },
            ]
        }
        _ => unreachable!("validated levels"),
    };

    Ok(WeakCoupling {
        states,
        strong_coupling_warning: warning,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn uncoupled_hamiltonian_is_diagonal_with_splitting_gaps() {
        let spec = SystemSpec::two_level(6.0, 5.0, 0.0).unwrap();
        let h = build_hamiltonian(&spec).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    assert!(h[(i, j)].norm() < 1e-15);
                }
            }
        }
        // gaps Δ₂ within the q₂ pair, Δ₁ within the q₁ pair
        assert!((h[(1, 1)].re - h[(0, 0)].re - 5.0).abs() < 1e-14);
        assert!((h[(2, 2)].re - h[(0, 0)].re - 6.0).abs() < 1e-14);
    }

    #[test]
    fn rejects_anharmonicity_for_two_level() {
        let spec = SystemSpec {
            delta1: 6.0,
            delta2: 5.0,
            j: 0.1,
            levels: 2,
            anharm1: Some(-0.2),
            anharm2: None,
        };
        assert!(matches!(spec.validate(), Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn three_level_zeroth_order_energy_of_02() {
        let spec = SystemSpec::three_level(6.0, 5.0, 0.0, -0.2, -0.18).unwrap();
        let h = build_hamiltonian(&spec).unwrap();
        // |02⟩ has product index 2; −Δ₁/2 + 3Δ₂/2 + δ₂ = 4.32 GHz·h
        assert!((h[(2, 2)].re - 4.32).abs() < 1e-12);
    }

    #[test]
    fn exact_gaps_match_closed_form() {
        let spec = SystemSpec::two_level(6.0, 5.0, 0.1).unwrap();
        let eig = exact_eigensystem(&spec).unwrap();
        let s = (4.0 * 0.01f64 + 121.0).sqrt();
        let d = (4.0 * 0.01f64 + 1.0).sqrt();
        assert!((eig.gap(1, 0) - 0.5 * (s - d)).abs() < 1e-12);
        assert!((eig.gap(2, 0) - 0.5 * (s + d)).abs() < 1e-12);
        assert!((eig.gap(1, 0) - 4.99101).abs() < 1e-5);
        assert!((eig.gap(2, 0) - 6.01081).abs() < 1e-5);
    }

    #[test]
    fn mixing_angles_reference_values() {
        let spec = SystemSpec::two_level(6.0, 5.0, 0.1).unwrap();
        let eig = exact_eigensystem(&spec).unwrap();
        let angles = eig.angles.unwrap();
        assert!((angles.theta1 / PI - 0.0058).abs() < 1e-4);
        assert!((angles.theta2 / PI - 0.063).abs() < 5e-4);
        // |⟨01|state 1⟩|² = cos²(θ₂/2); independent closed form.
        let expected = (0.5 * (0.2f64).atan()).cos().powi(2);
        let got = eig.states[(1, 1)].norm_sqr();
        assert!((got - expected).abs() < 1e-12);
        assert!((got - 0.99029).abs() < 1e-5);
    }

    #[test]
    fn zero_coupling_gives_product_states() {
        let spec = SystemSpec::two_level(6.0, 5.0, 1e-12).unwrap();
        let eig = exact_eigensystem(&spec).unwrap();
        for k in 0..4 {
            assert!((eig.states[(k, k)].re - 1.0).abs() < 1e-9);
        }
        let angles = eig.angles.unwrap();
        assert!(angles.theta1.abs() < 1e-11);
        assert!(angles.theta2.abs() < 1e-11);
    }

    #[test]
    fn eigenstates_match_eq9_construction() {
        // The labeled eigenvectors should match the closed-form mixing-angle
        // construction entry by entry (both use the same sign convention).
        let spec = SystemSpec::two_level(5.3, 4.1, 0.37).unwrap();
        let eig = exact_eigensystem(&spec).unwrap();
        let a = eig.angles.unwrap();
        let (c1, s1) = ((a.theta1 / 2.0).cos(), (a.theta1 / 2.0).sin());
        let (c2, s2) = ((a.theta2 / 2.0).cos(), (a.theta2 / 2.0).sin());
        let expected = [
            vec![(0usize, c1), (3usize, -s1)],
            vec![(1, c2), (2, -s2)],
            vec![(2, c2), (1, s2)],
            vec![(3, c1), (0, s1)],
        ];
        for (k, comps) in expected.iter().enumerate() {
            for &(p, val) in comps {
                assert!(
                    (eig.states[(p, k)].re - val).abs() < 1e-10,
                    "state {k} component {p}: got {}, want {val}",
                    eig.states[(p, k)].re
                );
            }
        }
    }

    #[test]
    fn labeling_rejects_degenerate_splittings() {
        let spec = SystemSpec::two_level(5.0, 5.0, 0.1).unwrap();
        assert!(matches!(
            exact_eigensystem(&spec),
            Err(Error::LabelingAmbiguous { .. })
        ));
    }

    #[test]
    fn degeneracy_structure_holds_exactly() {
        let spec = SystemSpec::two_level(7.3, 4.9, 0.63).unwrap();
        let eig = exact_eigensystem(&spec).unwrap();
        let scale = eig.energies.iter().fold(0.0f64, |a, e| a.max(e.abs()));
        assert!((eig.gap(2, 0) - eig.gap(3, 1)).abs() < 1e-12 * scale);
        assert!((eig.gap(1, 0) - eig.gap(3, 2)).abs() < 1e-12 * scale);
    }

    #[test]
    fn weak_coupling_two_level_amplitude() {
        let spec = SystemSpec::two_level(6.0, 5.0, 0.1).unwrap();
        let wc = weak_coupling_states(&spec).unwrap();
        assert!(!wc.strong_coupling_warning);
        let s1 = &wc.states[1];
        assert_eq!(s1.admixtures[0].0, 2);
        assert!((s1.admixtures[0].1 + 0.1).abs() < 1e-15);
    }

    #[test]
    fn weak_coupling_three_level_admixture() {
        let spec = SystemSpec::three_level(6.0, 5.0, 0.025, -0.2, -0.18).unwrap();
        let wc = weak_coupling_states(&spec).unwrap();
        let s3 = &wc.states[3];
        // |3⟩ admixture of |02⟩ (product index 2): √2 J/(Δ₁−Δ₂−δ₂)
        let amp = s3
            .admixtures
            .iter()
            .find(|(p, _)| *p == 2)
            .map(|(_, a)| *a)
            .unwrap();
        assert!((amp - 0.02996).abs() < 1e-5);
    }

    #[test]
    fn weak_coupling_rejects_equal_splittings() {
        let spec = SystemSpec::two_level(5.0, 5.0, 0.01).unwrap();
        assert!(matches!(
            weak_coupling_states(&spec),
            Err(Error::DegeneratePerturbation { .. })
        ));
    }

    #[test]
    fn perturbative_energies_close_to_exact() {
        // J/ΔΔ = 0.025, both models.
        let two = SystemSpec::two_level(6.0, 5.0, 0.025).unwrap();
        let wc = weak_coupling_states(&two).unwrap();
        let eig = exact_eigensystem(&two).unwrap();
        let bound = 0.025f64.powi(2) * 1.0 * 10.0;
        for s in &wc.states {
            assert!((s.energy - eig.energies[s.label]).abs() < bound);
        }
        let three = SystemSpec::three_level(6.0, 5.0, 0.025, -0.2, -0.18).unwrap();
        let wc3 = weak_coupling_states(&three).unwrap();
        let eig3 = exact_eigensystem(&three).unwrap();
        for s in &wc3.states {
            assert!((s.energy - eig3.energies[s.label]).abs() < bound);
        }
    }

    #[test]
    fn perturbative_energy_error_scales_as_j_squared() {
        // log-log slope of the worst energy deviation vs J should be ~2.
        let js = [0.005, 0.01, 0.02, 0.05];
        let devs: Vec<f64> = js
            .iter()
            .map(|&j| {
                let spec = SystemSpec::three_level(6.0, 5.0, j, -0.2, -0.18).unwrap();
                let wc = weak_coupling_states(&spec).unwrap();
                let eig = exact_eigensystem(&spec).unwrap();
                wc.states
                    .iter()
                    .map(|s| (s.energy - eig.energies[s.label]).abs().max(1e-300))
                    .fold(0.0f64, f64::max)
            })
            .collect();
        let slope = (devs.last().unwrap() / devs.first().unwrap()).ln()
            / (js.last().unwrap() / js.first().unwrap()).ln();
        assert!((1.8..=2.2).contains(&slope), "slope {slope} outside 2 ± 0.2");
    }
}
