//! Driving Hamiltonian, pulse envelopes, darkening conditions, transition
//! strengths and speed-limit estimates.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::CMatrix;
use crate::system::{self, MixingAngles, SystemSpec};

type C64 = Complex64;

/// Pulse envelope applied to both drive amplitudes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Envelope {
    /// Constant amplitude over the whole pulse.
    Rect,
    /// sin(πt/t_gate) ramp; lengthens the gate by a factor π/2 relative to
    /// a rectangular pulse of equal area.
    HalfSine,
}

impl Envelope {
    /// Envelope value at time `t` for a pulse of duration `t_gate`.
    pub fn value(&self, t: f64, t_gate: f64) -> f64 {
        match self {
            Envelope::Rect => 1.0,
            Envelope::HalfSine => (std::f64::consts::PI * t / t_gate).sin(),
        }
    }

    /// Gate-time stretch factor relative to a rectangular pulse.
    pub fn duration_factor(&self) -> f64 {
        match self {
            Envelope::Rect => 1.0,
            Envelope::HalfSine => std::f64::consts::FRAC_PI_2,
        }
    }

    /// ∫ env(t)² dt over the pulse, the effective exposure time entering
    /// quadratic (ac-Stark type) phase integrals.
    pub fn squared_integral(&self, t_gate: f64) -> f64 {
        match self {
            Envelope::Rect => t_gate,
            Envelope::HalfSine => 0.5 * t_gate,
        }
    }
}

/// A two-tone drive: common frequency, per-qubit amplitudes and phases.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveSpec {
    /// Drive frequency ω/2π in GHz.
    pub omega: f64,
    /// Amplitude a₁/h felt by qubit 1, GHz, ≥ 0.
    pub a1: f64,
    /// Amplitude a₂/h felt by qubit 2, GHz, ≥ 0.
    pub a2: f64,
    /// Phase φ₁ in radians.
    pub phi1: f64,
    /// Phase φ₂ in radians.
    pub phi2: f64,
    pub envelope: Envelope,
    /// Pulse duration in ns.
    pub t_gate: f64,
}

impl DriveSpec {
    pub fn validate(&self) -> Result<()> {
        if self.a1 < 0.0 || self.a2 < 0.0 {
            return Err(Error::InvalidSpec("drive amplitudes must be ≥ 0".into()));
        }
        if !(self.t_gate > 0.0) {
            return Err(Error::InvalidSpec("t_gate must be positive".into()));
        }
        Ok(())
    }

    /// Same drive with a different duration.
    pub fn with_t_gate(&self, t_gate: f64) -> DriveSpec {
        DriveSpec { t_gate, ..*self }
    }
}

/// Which qubit keeps its transitions dark.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TargetQubit {
    Q1,
    Q2,
}

/// Which control-qubit state triggers the flip.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarity {
    /// Flip when the control qubit is in |1⟩.
    Cnot1,
    /// Flip when the control qubit is in |0⟩.
    Cnot0,
}

/// Closed-form (weak) or exact darkening condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConditionMode {
    Weak,
    Exact,
}

/// Amplitude ratio and phase difference that darken one transition of a
/// degenerate pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DarkeningCondition {
    /// a₂/a₁.
    pub amplitude_ratio: f64,
    /// φ₂ − φ₁, either 0 or π.
    pub phase_difference: f64,
    pub target_qubit: TargetQubit,
    pub polarity: Polarity,
}

/// The eigenstate pair whose transition the condition darkens, as
/// (upper, lower) labels: the other member of the degenerate pair stays
/// bright and carries the conditional flip.
fn darkened_pair(target: TargetQubit, polarity: Polarity) -> (usize, usize) {
    match (target, polarity) {
        (TargetQubit::Q2, Polarity::Cnot1) => (1, 0),
        (TargetQubit::Q2, Polarity::Cnot0) => (3, 2),
        (TargetQubit::Q1, Polarity::Cnot1) => (2, 0),
        (TargetQubit::Q1, Polarity::Cnot0) => (3, 1),
    }
}

/// The bright (driven) transition complementary to [`darkened_pair`].
fn bright_pair(target: TargetQubit, polarity: Polarity) -> (usize, usize) {
    match (target, polarity) {
        (TargetQubit::Q2, Polarity::Cnot1) => (3, 2),
        (TargetQubit::Q2, Polarity::Cnot0) => (1, 0),
        (TargetQubit::Q1, Polarity::Cnot1) => (3, 1),
        (TargetQubit::Q1, Polarity::Cnot0) => (2, 0),
    }
}

/// Build a complete drive at the darkening condition: amplitudes from the
/// condition's ratio, φ₁ = 0, φ₂ the condition's phase difference, the
/// frequency resonant with the bright transition of the exact spectrum, and
/// t_gate set to the estimated π time (stretched by the envelope factor).
///
/// For a 2-level system the bright-transition frequency equals (E₁−E₀)/h;
/// for 3-level systems the degeneracy is broken by the anharmonic level
/// shifts and the drive must follow the conditional-flip transition.
pub fn darkening_drive(
    spec: &SystemSpec,
    target_qubit: TargetQubit,
    polarity: Polarity,
    mode: ConditionMode,
    a1: f64,
    envelope: Envelope,
) -> Result<DriveSpec> {
    let cond = darkening_condition(spec, target_qubit, polarity, mode)?;
    let eig = system::exact_eigensystem(spec)?;
    let (bk, bl) = bright_pair(target_qubit, polarity);
    let omega = eig.energies[bk] - eig.energies[bl];
    let a2 = a1 * cond.amplitude_ratio;

    let e1 = C64::new(0.5 * a1, 0.0);
    let e2 = (-C64::i() * cond.phase_difference).exp() * (0.5 * a2);
    let bright = (eig.states.column(bk).adjoint()
        * (system::sigma_x_on(spec, 1) * e1 + system::sigma_x_on(spec, 2) * e2)
        * eig.states.column(bl))[(0, 0)];
    if bright.norm() < 1e-15 {
        return Err(Error::SingularCondition);
    }
    let t_gate = envelope.duration_factor() / (4.0 * bright.norm());

    Ok(DriveSpec {
        omega,
        a1,
        a2,
        phi1: 0.0,
        phi2: cond.phase_difference,
        envelope,
        t_gate,
    })
}

/// Driving Hamiltonian env(t)·[a₁cos(ωt+φ₁)σ_x⁽¹⁾ + a₂cos(ωt+φ₂)σ_x⁽²⁾]
/// at time `t`, in the product basis (GHz·h units).
pub fn drive_hamiltonian(spec: &SystemSpec, drive: &DriveSpec, t: f64) -> Result<CMatrix> {
    spec.validate()?;
    drive.validate()?;
    if t < 0.0 || t > drive.t_gate {
        return Err(Error::TimeOutsidePulse {
            t,
            t_gate: drive.t_gate,
        });
    }
    let env = drive.envelope.value(t, drive.t_gate);
    let w = crate::TWO_PI * drive.omega;
    let c1 = env * drive.a1 * (w * t + drive.phi1).cos();
    let c2 = env * drive.a2 * (w * t + drive.phi2).cos();
    Ok(system::sigma_x_on(spec, 1) * C64::new(c1, 0.0)
        + system::sigma_x_on(spec, 2) * C64::new(c2, 0.0))
}

/// Darkening condition for the requested target qubit and CNOT polarity.
///
/// In exact mode (2-level only) the ratio is sinθ₊/cosθ₋ for target 2 and
/// cosθ₊/sinθ₋ for target 1; weak mode uses the first-order ratio
/// J/(Δ₁−Δ₂), which is also the appropriate form for 3-level systems.
pub fn darkening_condition(
    spec: &SystemSpec,
    target_qubit: TargetQubit,
    polarity: Polarity,
    mode: ConditionMode,
) -> Result<DarkeningCondition> {
    spec.validate()?;
    // φ₂ − φ₁ rule of the closed forms: 0 for (target 2, 1-CNOT) and
    // (target 1, 0-CNOT), π otherwise.
    let rule_phase = match (target_qubit, polarity) {
        (TargetQubit::Q2, Polarity::Cnot1) | (TargetQubit::Q1, Polarity::Cnot0) => 0.0,
        (TargetQubit::Q2, Polarity::Cnot0) | (TargetQubit::Q1, Polarity::Cnot1) => {
            std::f64::consts::PI
        }
    };
    let (ratio, phase_difference) = match mode {
        ConditionMode::Weak => {
            let dd = spec.detuning();
            if dd == 0.0 {
                return Err(Error::DegeneratePerturbation { delta: spec.delta1 });
            }
            let r = match target_qubit {
                TargetQubit::Q2 => spec.j / dd,
                TargetQubit::Q1 => {
                    if spec.j == 0.0 {
                        return Err(Error::SingularCondition);
                    }
                    dd / spec.j
                }
            };
            (r, rule_phase)
        }
        ConditionMode::Exact => match spec.levels {
            2 => {
                let angles = MixingAngles::from_spec(spec);
                let r = match target_qubit {
                    TargetQubit::Q2 => angles.theta_plus.sin() / angles.theta_minus.cos(),
                    TargetQubit::Q1 => {
                        if angles.theta_minus.abs() < 1e-15 {
                            return Err(Error::SingularCondition);
                        }
                        angles.theta_plus.cos() / angles.theta_minus.sin()
                    }
                };
                (r, rule_phase)
            }
            // For 3-level systems the closed form does not apply: zero the
            // exact matrix element of the transition to darken. The
            // anharmonic level mixing can flip the element's sign, so the
            // phase difference is derived from the signs rather than the
            // two-level rule.
            _ => {
                let eig = system::exact_eigensystem(spec)?;
                let (k, l) = darkened_pair(target_qubit, polarity);
                let x1 = (eig.states.column(k).adjoint()
                    * system::sigma_x_on(spec, 1)
                    * eig.states.column(l))[(0, 0)]
                    .re;
                let x2 = (eig.states.column(k).adjoint()
                    * system::sigma_x_on(spec, 2)
                    * eig.states.column(l))[(0, 0)]
                    .re;
                if x2.abs() < 1e-15 {
                    return Err(Error::SingularCondition);
                }
                let phase = if x1 / x2 < 0.0 { 0.0 } else { std::f64::consts::PI };
                ((x1 / x2).abs(), phase)
            }
        },
    };
    Ok(DarkeningCondition {
        amplitude_ratio: ratio,
        phase_difference,
        target_qubit,
        polarity,
    })
}

/// The four rotating-frame (co-rotating) drive matrix elements between the
/// exact 2-level eigenstates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionStrengths {
    /// ⟨1|H̃|0⟩
    pub t10: C64,
    /// ⟨2|H̃|0⟩
    pub t20: C64,
    /// ⟨3|H̃|2⟩
    pub t32: C64,
    /// ⟨3|H̃|1⟩
    pub t31: C64,
}

impl TransitionStrengths {
    /// Magnitudes normalized by a₁ + a₂ (the Fig. 1(d) convention), in the
    /// order (|T₁₀|, |T₂₀|, |T₃₂|, |T₃₁|).
    pub fn normalized(&self, a1: f64, a2: f64) -> [f64; 4] {
        let s = a1 + a2;
        [
            self.t10.norm() / s,
            self.t20.norm() / s,
            self.t32.norm() / s,
            self.t31.norm() / s,
        ]
    }
}

/// Exact transition strengths for arbitrary amplitudes and phases (2-level).
pub fn transition_strengths(
    spec: &SystemSpec,
    a1: f64,
    a2: f64,
    phi1: f64,
    phi2: f64,
) -> Result<TransitionStrengths> {
    spec.validate()?;
    if spec.levels != 2 {
        return Err(Error::InvalidSpec(
            "transition strengths are closed-form for levels = 2 only".into(),
        ));
    }
    let ang = MixingAngles::from_spec(spec);
    let (sp, cp) = (ang.theta_plus.sin(), ang.theta_plus.cos());
    let (sm, cm) = (ang.theta_minus.sin(), ang.theta_minus.cos());
    let e1 = (-C64::i() * phi1).exp() * (0.5 * a1);
    let e2 = (-C64::i() * phi2).exp() * (0.5 * a2);
    Ok(TransitionStrengths {
        t10: -e1 * sp + e2 * cm,
        t20: e1 * cp + e2 * sm,
        t32: e1 * sp + e2 * cm,
        t31: e1 * cp - e2 * sm,
    })
}

/// Simple estimate of the maximum CNOT Rabi frequency, ω_R,max/2π ~ 4J/h,
/// from requiring all off-resonant strengths to stay below their detunings.
pub fn max_rabi_estimate(spec: &SystemSpec) -> Result<f64> {
    spec.validate()?;
    if spec.levels != 2 {
        return Err(Error::InvalidSpec(
            "the 4J/h speed estimate applies to levels = 2".into(),
        ));
    }
    Ok(4.0 * spec.j)
}

/// LHS − RHS of the double-resonance condition
/// ±√((ħω₁−Δ₁)² + a₁²) ± √((ħω₂−Δ₂)² + a₂²) = ħω₁ − ħω₂
/// for one choice of the two signs. All arguments in GHz.
#[allow(clippy::too_many_arguments)]
pub fn double_resonance_residual(
    omega1: f64,
    omega2: f64,
    delta1: f64,
    delta2: f64,
    a1: f64,
    a2: f64,
    sign1: f64,
    sign2: f64,
) -> f64 {
    let r1 = ((omega1 - delta1).powi(2) + a1 * a1).sqrt();
    let r2 = ((omega2 - delta2).powi(2) + a2 * a2).sqrt();
    sign1 * r1 + sign2 * r2 - (omega1 - omega2)
}

/// Residuals for all four sign pairs, plus the best (smallest-magnitude) one.
pub struct DoubleResonanceReport {
    /// ((sign₁, sign₂), residual) for the four sign choices.
    pub residuals: [((f64, f64), f64); 4],
    /// Index into `residuals` of the smallest |residual|.
    pub best: usize,
}

/// Scan all four sign pairs of the double-resonance condition.
pub fn double_resonance_report(
    omega1: f64,
    omega2: f64,
    delta1: f64,
    delta2: f64,
    a1: f64,
    a2: f64,
) -> DoubleResonanceReport {
    let signs = [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)];
    let mut residuals = [((0.0, 0.0), 0.0); 4];
    let mut best = 0usize;
    for (k, &(s1, s2)) in signs.iter().enumerate() {
        let r = double_resonance_residual(omega1, omega2, delta1, delta2, a1, a2, s1, s2);
        residuals[k] = ((s1, s2), r);
        if r.abs() < residuals[best].1.abs() || k == 0 {
            best = k;
        }
    }
    DoubleResonanceReport { residuals, best }
}
