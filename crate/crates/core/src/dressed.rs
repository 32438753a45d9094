//! Quantized-field (dressed-state) description of the driven pair: the
//! photon-block Hamiltonian, first-order corrections, the strong-drive
//! darkening search, and the error decomposition.
//!
//! The block spans {|0,N+1⟩, |1,N⟩, |2,N⟩, |3,N−1⟩} with C_i = √N·g_i in
//! linear-frequency units. Only a single photon block is modeled; coupling
//! between blocks becomes relevant for C ≳ 0.3·detuning, which is treated
//! as the validity boundary of this module. Cross-validation against the
//! semiclassical drive identifies C_i with a_i/2, fixed by matching the
//! weak-limit Rabi splitting.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{self, CMatrix};
use crate::optim::{self, NelderMeadOptions};
use crate::system::{self, MixingAngles, SystemSpec};

type C64 = Complex64;

/// One photon block of the qubits-plus-field Hamiltonian.
#[derive(Debug, Clone)]
pub struct DressedBlock {
    /// C₁ = √N g₁ in GHz.
    pub c1: f64,
    /// C₂ = √N g₂ in GHz.
    pub c2: f64,
    /// Field frequency ω/2π in GHz.
    pub omega: f64,
    pub base: SystemSpec,
    /// 4×4 block Hamiltonian over {|0,N+1⟩, |1,N⟩, |2,N⟩, |3,N−1⟩}, GHz·h.
    pub matrix: CMatrix,
    /// Block detuning (E₂−E₀)−ħω entering every perturbative denominator.
    pub detuning: f64,
    angles: MixingAngles,
}

/// Build the photon-block Hamiltonian for a 2-level system.
pub fn dressed_block(spec: &SystemSpec, c1: f64, c2: f64, omega: f64) -> Result<DressedBlock> {
    spec.validate()?;
    if spec.levels != 2 {
        return Err(Error::InvalidSpec(
            "the dressed-state block is built on the 2-level model".into(),
        ));
    }
    if c1 < 0.0 || c2 < 0.0 {
        return Err(Error::InvalidSpec("field couplings must be ≥ 0".into()));
    }
    let eig = system::exact_eigensystem(spec)?;
    let angles = eig.angles.expect("2-level angles");
    let (sp, cp) = (angles.theta_plus.sin(), angles.theta_plus.cos());
    let (sm, cm) = (angles.theta_minus.sin(), angles.theta_minus.cos());

    let g10 = eig.gap(1, 0);
    let g20 = eig.gap(2, 0);
    let diag = [0.0, g10 - omega, g20 - omega, g10 + g20 - 2.0 * omega];
    let h01 = -c1 * sp + c2 * cm;
    let h02 = c1 * cp + c2 * sm;
    let h13 = c1 * cp - c2 * sm;
    let h23 = c1 * sp + c2 * cm;

    let mut m = CMatrix::zeros(4, 4);
    for (k, &d) in diag.iter().enumerate() {
        m[(k, k)] = C64::new(d, 0.0);
    }
    for (i, j, v) in [(0, 1, h01), (0, 2, h02), (1, 3, h13), (2, 3, h23)] {
        m[(i, j)] = C64::new(v, 0.0);
        m[(j, i)] = C64::new(v, 0.0);
    }

    Ok(DressedBlock {
        c1,
        c2,
        omega,
        base: *spec,
        matrix: m,
        detuning: g20 - omega,
        angles,
    })
}

/// First-order corrected energies, gaps and matrix elements of a block.
#[derive(Debug, Clone, Copy)]
pub struct FirstOrderCorrections {
    /// δE₀..δE₃ (δE₀ = −δE₂ and δE₁ = −δE₃ hold identically).
    pub delta_e: [f64; 4],
    /// E′₁ − E′₀.
    pub gap10: f64,
    /// E′₃ − E′₂.
    pub gap32: f64,
    /// E′₂ − E′₀.
    pub gap20: f64,
    /// E′₃ − E′₁.
    pub gap31: f64,
    /// Corrected ⟨1,N|′Ĥ|0,N+1⟩′.
    pub element_10: f64,
    /// Corrected ⟨3,N−1|′Ĥ|2,N⟩′.
    pub element_32: f64,
    /// Set when the couplings are not small against the detuning and the
    /// first-order expressions should not be trusted.
    pub strong_coupling_warning: bool,
}

/// First-order perturbative corrections from the H₀₂/H₁₃ elements.
pub fn first_order_corrections(block: &DressedBlock) -> Result<FirstOrderCorrections> {
    let d = block.detuning;
    if d.abs() < 1e-9 {
        return Err(Error::ResonantDenominator {
            name: "E₂−E₀−ħω".into(),
            value: d,
        });
    }
    let (sp, cp) = (block.angles.theta_plus.sin(), block.angles.theta_plus.cos());
    let (sm, cm) = (block.angles.theta_minus.sin(), block.angles.theta_minus.cos());
    let plus = block.c1 * cp + block.c2 * sm; // couples 0 ↔ 2
    let minus = block.c1 * cp - block.c2 * sm; // couples 1 ↔ 3
    let warn = block.c1.max(block.c2) > 0.3 * d.abs();

    let de0 = -plus * plus / d;
    let de1 = -minus * minus / d;
    let delta_e = [de0, de1, -de0, -de1];

    let m = &block.matrix;
    let bare = |i: usize| m[(i, i)].re;
    let cross = (block.c1 * cp).powi(2) - (block.c2 * sm).powi(2);
    let bright = block.c1 * sp + block.c2 * cm;
    let dark = -block.c1 * sp + block.c2 * cm;

    Ok(FirstOrderCorrections {
        delta_e,
        gap10: (bare(1) - bare(0)) + 4.0 * block.c1 * block.c2 * cp * sm / d,
        gap32: (bare(3) - bare(2)) - 4.0 * block.c1 * block.c2 * cp * sm / d,
        gap20: (bare(2) - bare(0)) + 2.0 * plus * plus / d,
        gap31: (bare(3) - bare(1)) + 2.0 * minus * minus / d,
        element_10: dark + bright * cross / (d * d),
        element_32: bright + dark * cross / (d * d),
        strong_coupling_warning: warn,
    })
}

/// Result of the 2-D darkening search at fixed C₁.
#[derive(Debug, Clone, Copy)]
pub struct DarkeningSearch {
    pub c2: f64,
    pub omega: f64,
    /// Minimized splitting of the two dressed levels connected to
    /// {|0,N+1⟩, |1,N⟩}; strictly positive for C₁ > 0.
    pub residual_gap: f64,
}

/// Splitting of the two exact block levels adiabatically connected to the
/// basis states 0 and 1, identified by maximum overlap.
fn tracked_gap(spec: &SystemSpec, c1: f64, c2: f64, omega: f64) -> Result<f64> {
    let block = dressed_block(spec, c1, c2, omega)?;
    let (values, vectors) = numerics::eig_hermitian(&block.matrix)?;
    let col_for = |basis: usize, exclude: Option<usize>| -> usize {
        let mut best = usize::MAX;
        let mut best_ov = -1.0;
        for col in 0..4 {
            if Some(col) == exclude {
                continue;
            }
            let ov = vectors[(basis, col)].norm_sqr();
            if ov > best_ov {
                best_ov = ov;
                best = col;
            }
        }
        best
    };
    let col0 = col_for(0, None);
    let mut col1 = col_for(1, None);
    if col1 == col0 {
        col1 = col_for(1, Some(col0));
    }
    Ok((values[col1] - values[col0]).abs())
}

/// Minimize the splitting of the {|0,N+1⟩, |1,N⟩}-connected levels over
/// (C₂, ω). The weak-limit optimum is C₂ = C₁·sinθ₊/cosθ₋, ħω = E₁−E₀; for
/// C₁ > 0 the exact minimum stays strictly positive — no complete darkening.
pub fn strong_drive_darkening_search(spec: &SystemSpec, c1: f64) -> Result<DarkeningSearch> {
    spec.validate()?;
    if c1 < 0.0 {
        return Err(Error::InvalidSpec("C₁ must be ≥ 0".into()));
    }
    let eig = system::exact_eigensystem(spec)?;
    let angles = eig.angles.expect("2-level angles");
    let ratio = angles.theta_plus.sin() / angles.theta_minus.cos();
    let omega0 = eig.gap(1, 0);
    if c1 == 0.0 {
        return Ok(DarkeningSearch {
            c2: 0.0,
            omega: omega0,
            residual_gap: 0.0,
        });
    }

    let scale = c1.max(1e-6);
    let objective = |p: &[f64]| -> f64 {
        let c2 = p[0].abs();
        let omega = p[1];
        tracked_gap(spec, c1, c2, omega).unwrap_or(f64::INFINITY)
    };
    let options = NelderMeadOptions {
        tolerance: 1e-12,
        max_evals: 4000,
        restarts: 6,
        initial_step: 0.05 * scale,
        perturbation: 0.1 * scale,
    };
    let min = optim::minimize(objective, &[c1 * ratio, omega0], 17, &options);
    if !min.value.is_finite() {
        return Err(Error::OptimizerFailed(format!(
            "darkening search diverged at C₁ = {c1}"
        )));
    }
    Ok(DarkeningSearch {
        c2: min.x[0].abs(),
        omega: min.x[1],
        residual_gap: min.value,
    })
}

/// The three strong-drive error channels of the gate.
#[derive(Debug, Clone, Copy)]
pub struct ErrorDecomposition {
    /// Common shift of the control-qubit transitions,
    /// 2[(C₁cosθ₊)² + (C₂sinθ₋)²]/(E₂−E₀−ħω): the ac-Stark shift.
    pub common_shift: f64,
    /// Opposite shift ±4C₁C₂cosθ₊sinθ₋/(E₂−E₀−ħω) of the two transitions in
    /// each degenerate pair: an effective σ_z⊗σ_z (CPHASE) term.
    pub differential_shift: f64,
    /// Residual corrected ⟨1,N|′Ĥ|0,N+1⟩′ element: the darkened transition
    /// cannot be switched off completely at strong drive.
    pub residual_brightness: f64,
}

/// Decompose the strong-drive errors at the given block parameters.
pub fn error_decomposition(
    spec: &SystemSpec,
    c1: f64,
    c2: f64,
    omega: f64,
) -> Result<ErrorDecomposition> {
    let block = dressed_block(spec, c1, c2, omega)?;
    let corr = first_order_corrections(&block)?;
    let cp = block.angles.theta_plus.cos();
    let sm = block.angles.theta_minus.sin();
    let d = block.detuning;
    Ok(ErrorDecomposition {
        common_shift: 2.0 * ((c1 * cp).powi(2) + (c2 * sm).powi(2)) / d,
        differential_shift: 4.0 * c1 * c2 * cp * sm / d,
        residual_brightness: corr.element_10,
    })
}
