//! Rotating-frame machinery: the frame generator, the split of the drive
//! into co-rotating (Ṽ) and counter-rotating (W̃) parts, and the ideal RWA
//! gate decomposition.
//!
//! Everything here works in the coupled eigenbasis of the 2-level system,
//! with the eigenvector phase convention fixed by [`crate::numerics`]. The
//! transformation itself is exact; the RWA only enters when W̃ is dropped.

use num_complex::Complex64;

use crate::drive::DriveSpec;
use crate::error::{Error, Result};
use crate::numerics::{CMatrix, CVector};
use crate::system::{self, Eigensystem, MixingAngles, SystemSpec};
use crate::TWO_PI;

type C64 = Complex64;

/// The frame generator u = diag(−ħω, 0, 0, +ħω) in GHz·h units, acting in
/// the eigenbasis.
#[derive(Debug, Clone)]
pub struct RotatingFrame {
    /// Drive frequency ω/2π in GHz.
    pub omega: f64,
    /// Diagonal of u in GHz·h.
    pub u_diag: [f64; 4],
}

impl RotatingFrame {
    pub fn new(omega: f64) -> Self {
        RotatingFrame {
            omega,
            u_diag: [-omega, 0.0, 0.0, omega],
        }
    }

    /// Û(t) = e^{iut/ħ} as a diagonal matrix (angles 2π·u·t).
    pub fn u_of_t(&self, t: f64) -> CMatrix {
        CMatrix::from_diagonal(&CVector::from_iterator(
            4,
            self.u_diag
                .iter()
                .map(|&u| (C64::i() * (TWO_PI * u * t)).exp()),
        ))
    }
}

/// The time-independent co-rotating matrix Ṽ together with the amplitude
/// matrix of the counter-rotating part W̃; the full counter-rotating term is
/// W̃(t) = W·e^{i2ωt} + W†·e^{−i2ωt} restricted to the upper/lower triangle
/// split recorded here.
#[derive(Debug, Clone)]
pub struct DriveSplit {
    /// Co-rotating (time-independent) part in the eigenbasis, Hermitian.
    pub v: CMatrix,
    /// Amplitude of the e^{+i2ωt} part of W̃; the Hermitian conjugate
    /// carries e^{−i2ωt}.
    pub w_amplitude: CMatrix,
    /// Carrier frequency of the counter-rotating phase, 2ω in GHz.
    pub carrier: f64,
}

impl DriveSplit {
    /// W̃(t) evaluated at time t (before the pulse envelope).
    pub fn w_of_t(&self, t: f64) -> CMatrix {
        let phase = (C64::i() * (TWO_PI * self.carrier * t)).exp();
        &self.w_amplitude * phase + self.w_amplitude.adjoint() * phase.conj()
    }
}

/// Result of transforming (H₀, H_drive) into the rotating frame.
#[derive(Debug, Clone)]
pub struct RotatingFrameSystem {
    /// H̃₀ = H₀ − u, diagonal, GHz·h, eigenbasis, in label order.
    pub h0_rot: CMatrix,
    /// The drive split into co- and counter-rotating parts.
    pub split: DriveSplit,
    /// The frame used.
    pub frame: RotatingFrame,
    /// Eigensystem backing the matrix elements.
    pub eigensystem: Eigensystem,
}

/// Transform the driven 2-level system to the rotating frame.
///
/// Returns H̃₀ (diagonal), the Ṽ/W̃ split of the drive (per unit envelope),
/// and the frame itself. No approximation is made; dropping W̃ afterwards is
/// the RWA.
pub fn to_rotating_frame(spec: &SystemSpec, drive: &DriveSpec) -> Result<RotatingFrameSystem> {
    spec.validate()?;
    drive.validate()?;
    if spec.levels != 2 {
        return Err(Error::InvalidSpec(
            "the rotating-frame construction applies to levels = 2".into(),
        ));
    }
    let eigensystem = system::exact_eigensystem(spec)?;
    let frame = RotatingFrame::new(drive.omega);

    let h0_rot = CMatrix::from_diagonal(&CVector::from_iterator(
        4,
        eigensystem
            .energies
            .iter()
            .zip(frame.u_diag.iter())
            .map(|(&e, &u)| C64::new(e - u, 0.0)),
    ));

    // Matrix elements of σ_x⁽¹⁾ and σ_x⁽²⁾ in the eigenbasis; only the
    // (1,0), (2,0), (3,2), (3,1) elements (and conjugates) are nonzero.
    let s = &eigensystem.states;
    let sx1 = s.adjoint() * system::sigma_x_on(spec, 1) * s;
    let sx2 = s.adjoint() * system::sigma_x_on(spec, 2) * s;

    let e1m = (-C64::i() * drive.phi1).exp() * (0.5 * drive.a1);
    let e2m = (-C64::i() * drive.phi2).exp() * (0.5 * drive.a2);
    let e1p = (C64::i() * drive.phi1).exp() * (0.5 * drive.a1);
    let e2p = (C64::i() * drive.phi2).exp() * (0.5 * drive.a2);

    let mut v = CMatrix::zeros(4, 4);
    let mut w = CMatrix::zeros(4, 4);
    // Lower-triangle elements (k > l) pick up e^{−iφ} in Ṽ and e^{+iφ}·e^{i2ωt} in W̃.
    for (k, l) in [(1usize, 0usize), (2, 0), (3, 2), (3, 1)] {
        let x1 = sx1[(k, l)];
        let x2 = sx2[(k, l)];
        v[(k, l)] = e1m * x1 + e2m * x2;
        v[(l, k)] = v[(k, l)].conj();
        w[(k, l)] = e1p * x1 + e2p * x2;
    }

    Ok(RotatingFrameSystem {
        h0_rot,
        split: DriveSplit {
            v,
            w_amplitude: w,
            carrier: 2.0 * drive.omega,
        },
        frame,
        eigensystem,
    })
}

/// The two commuting rotating-frame factors of the ideal RWA gate, plus the
/// lab-frame pair (Larmor phase matrix and the conditional-rotation matrix).
#[derive(Debug, Clone)]
pub struct RwaGateDecomposition {
    /// exp(−i H̃₀ t/ħ): diagonal phase factor.
    pub rotating_phase: CMatrix,
    /// exp(−i Ṽ₃₂-block t/ħ): the conditional rotation.
    pub rotating_flip: CMatrix,
    /// diag(e^{−i E_k t/ħ}): lab-frame Larmor prefactor.
    pub lab_larmor: CMatrix,
    /// The same conditional rotation, which the lab factorization shares.
    pub lab_flip: CMatrix,
}

/// Ideal gate decomposition under the RWA, ignoring Ṽ₂₀ and Ṽ₃₁.
///
/// At t = h/(4 a₁ sinθ₊) (the π time of the |2⟩↔|3⟩ transition under the
/// exact darkening condition), `rotating_flip` is the CNOT block with
/// off-diagonal entries −i·e^{∓iφ₁}.
pub fn rwa_gate_decomposition(
    spec: &SystemSpec,
    drive: &DriveSpec,
    t: f64,
) -> Result<RwaGateDecomposition> {
    if t < 0.0 {
        return Err(Error::InvalidSpec("decomposition time must be ≥ 0".into()));
    }
    let rot = to_rotating_frame(spec, drive)?;
    let v32 = rot.split.v[(3, 2)];

    let rotating_phase = CMatrix::from_diagonal(&CVector::from_iterator(
        4,
        (0..4).map(|k| (-C64::i() * (TWO_PI * rot.h0_rot[(k, k)].re * t)).exp()),
    ));

    let angle = TWO_PI * v32.norm() * t;
    let mut rotating_flip = CMatrix::identity(4, 4);
    if v32.norm() > 0.0 {
        let phase = v32 / C64::new(v32.norm(), 0.0);
        rotating_flip[(2, 2)] = C64::new(angle.cos(), 0.0);
        rotating_flip[(3, 3)] = C64::new(angle.cos(), 0.0);
        rotating_flip[(3, 2)] = -C64::i() * angle.sin() * phase;
        rotating_flip[(2, 3)] = -C64::i() * angle.sin() * phase.conj();
    }

    let lab_larmor = CMatrix::from_diagonal(&CVector::from_iterator(
        4,
        rot.eigensystem
            .energies
            .iter()
            .map(|&e| (-C64::i() * (TWO_PI * e * t)).exp()),
    ));

    Ok(RwaGateDecomposition {
        rotating_phase,
        lab_flip: rotating_flip.clone(),
        rotating_flip,
        lab_larmor,
    })
}

/// π time of the CNOT transition under the exact darkening condition,
/// t = h/(4 a₁ sinθ₊), in ns (rectangular envelope; multiply by π/2 for a
/// half-sine pulse).
pub fn pi_time(spec: &SystemSpec, a1: f64) -> Result<f64> {
    if spec.levels != 2 {
        return Err(Error::InvalidSpec("π time formula applies to levels = 2".into()));
    }
    let angles = MixingAngles::from_spec(spec);
    let v32 = a1 * angles.theta_plus.sin();
    if v32 <= 0.0 {
        return Err(Error::InvalidSpec(
            "π time undefined for a vanishing CNOT matrix element".into(),
        ));
    }
    Ok(1.0 / (4.0 * v32))
}
