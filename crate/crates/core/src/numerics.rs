//! Dense complex linear-algebra kernel used by all other modules.
//!
//! Matrices are small (dimension ≤ 1024 by construction, ≤ 9 in the hot
//! paths), dense and well conditioned, so everything here favors simplicity
//! and reproducibility over asymptotics. The eigensolver is backed by
//! `nalgebra`'s Hermitian eigendecomposition with a deterministic ordering
//! and phase convention on top.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Complex scalar used throughout the crate.
pub type C64 = Complex64;
/// Dense complex matrix (column-major).
pub type CMatrix = DMatrix<C64>;
/// Dense complex vector.
pub type CVector = DVector<C64>;

/// Hermiticity / anti-Hermiticity tolerance, relative to the largest entry.
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Eigen-residual tolerance, relative to ‖A‖.
pub const EIGEN_RESIDUAL_TOL: f64 = 1e-10;

/// Largest entry magnitude of a matrix (max norm).
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Largest entry magnitude of the difference of two matrices.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    debug_assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .fold(0.0, |acc, (x, y)| acc.max((x - y).norm()))
}

/// Max-norm departure of `a` from Hermiticity, max |A − A†|.
pub fn hermiticity_defect(a: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Max-norm departure of `u` from unitarity, ‖U†U − I‖_max.
pub fn unitarity_defect(u: &CMatrix) -> f64 {
    let n = u.ncols();
    let gram = u.adjoint() * u;
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let expected = if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
            worst = worst.max((gram[(i, j)] - expected).norm());
        }
    }
    worst
}

fn ensure_hermitian(a: &CMatrix) -> Result<()> {
    let tol = HERMITICITY_TOL * max_abs(a).max(1.0);
    let defect = hermiticity_defect(a);
    if defect > tol {
        return Err(Error::NotHermitian {
            max_asymmetry: defect,
            tolerance: tol,
        });
    }
    Ok(())
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Returns eigenvalues in ascending order together with the matching
/// orthonormal eigenvectors as matrix columns. Each eigenvector's phase is
/// fixed so that its largest-magnitude entry is real and positive, which
/// keeps downstream sign conventions (mixing angles, perturbative
/// amplitudes) stable. For degenerate eigenvalues any orthonormal basis of
/// the degenerate subspace may be returned; callers label states by overlap,
/// never by eigenvector identity.
///
/// The bulk solve is `nalgebra`'s Hermitian eigendecomposition; a few
/// cyclic Jacobi sweeps on the rotated matrix then polish the residuals to
/// near machine precision, which the bulk solver alone does not guarantee
/// at larger dimensions.
pub fn eig_hermitian(a: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    ensure_hermitian(a)?;
    let n = a.nrows();
    // Symmetrize exactly so the backend sees a bitwise-Hermitian input.
    let sym = CMatrix::from_fn(n, n, |i, j| (a[(i, j)] + a[(j, i)].conj()) * 0.5);
    let decomp = sym.clone().symmetric_eigen();

    let (values_raw, vectors_raw) = jacobi_polish(&sym, decomp.eigenvectors);

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        values_raw[i]
            .partial_cmp(&values_raw[j])
            .expect("eigenvalues are finite")
    });

    let mut values = Vec::with_capacity(n);
    let mut vectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        values.push(values_raw[src]);
        let mut col = vectors_raw.column(src).clone_owned();
        fix_phase(&mut col);
        vectors.set_column(dst, &col);
    }
    Ok((values, vectors))
}

/// Cyclic Jacobi sweeps applied to V†AV, accumulating the rotations into V.
/// Starting from a near-diagonal V†AV this converges in a few sweeps and
/// drives the eigen-residuals to machine precision.
fn jacobi_polish(a: &CMatrix, mut v: CMatrix) -> (Vec<f64>, CMatrix) {
    let n = a.nrows();
    let mut d = v.adjoint() * a * &v;
    let scale = max_abs(a).max(f64::MIN_POSITIVE);
    let tol = 1e-15 * scale;

    for _sweep in 0..30 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(d[(p, q)].norm());
            }
        }
        if off <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let gamma = d[(p, q)];
                let g = gamma.norm();
                if g <= tol * 1e-2 {
                    continue;
                }
                let alpha = d[(p, p)].re;
                let beta = d[(q, q)].re;
                let phase = gamma / C64::new(g, 0.0);
                // Zero d[(p,q)]: t solves t² − 2τt − 1 = 0 with
                // τ = (β − α)/(2g); take the root of smaller magnitude.
                let tau = (beta - alpha) / (2.0 * g);
                let t = -tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                let app = alpha * c * c + 2.0 * c * s * g + beta * s * s;
                let aqq = alpha * s * s - 2.0 * c * s * g + beta * c * c;
                // Row/column updates for k ∉ {p, q}.
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = d[(k, p)];
                    let akq = d[(k, q)];
                    let new_kp = akp * c + akq * (phase.conj() * s);
                    let new_kq = akp * (-(phase * s)) + akq * c;
                    d[(k, p)] = new_kp;
                    d[(p, k)] = new_kp.conj();
                    d[(k, q)] = new_kq;
                    d[(q, k)] = new_kq.conj();
                }
                d[(p, p)] = C64::new(app, 0.0);
                d[(q, q)] = C64::new(aqq, 0.0);
                d[(p, q)] = C64::new(0.0, 0.0);
                d[(q, p)] = C64::new(0.0, 0.0);
                // Accumulate into the eigenvector columns.
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * c + vkq * (phase.conj() * s);
                    v[(k, q)] = vkp * (-(phase * s)) + vkq * c;
                }
            }
        }
    }

    let values: Vec<f64> = (0..n).map(|k| d[(k, k)].re).collect();
    (values, v)
}

/// Rotate a vector's global phase so its largest-magnitude entry is real
/// positive, then renormalize.
fn fix_phase(v: &mut CVector) {
    let mut best = 0usize;
    let mut best_mag = 0.0f64;
    for (k, z) in v.iter().enumerate() {
        let m = z.norm();
        if m > best_mag {
            best_mag = m;
            best = k;
        }
    }
    if best_mag > 0.0 {
        let phase = v[best] / C64::new(best_mag, 0.0);
        let rot = phase.conj();
        for z in v.iter_mut() {
            *z *= rot;
        }
    }
    let norm = v.norm();
    if norm > 0.0 {
        *v /= C64::new(norm, 0.0);
    }
}

/// Exponential of an anti-Hermitian matrix; the result is unitary.
///
/// Computed through the eigendecomposition of iA (which is Hermitian), so
/// exp(A) = V·diag(e^{−iλ})·V†.
pub fn matrix_exp_antihermitian(a: &CMatrix) -> Result<CMatrix> {
    let tol = HERMITICITY_TOL * max_abs(a).max(1.0);
    let n = a.nrows();
    let mut defect = 0.0f64;
    for i in 0..n {
        for j in i..n {
            defect = defect.max((a[(i, j)] + a[(j, i)].conj()).norm());
        }
    }
    if defect > tol {
        return Err(Error::NotAntiHermitian {
            max_asymmetry: defect,
        });
    }

    let herm = CMatrix::from_fn(n, n, |i, j| {
        (a[(i, j)] * C64::i() + (a[(j, i)] * C64::i()).conj()) * 0.5
    });
    let (values, vectors) = eig_hermitian(&herm)?;
    let phases = CVector::from_iterator(
        n,
        values.iter().map(|&lambda| (-C64::i() * lambda).exp()),
    );
    let mut scaled = vectors.clone();
    for (k, mut col) in scaled.column_iter_mut().enumerate() {
        col *= phases[k];
    }
    Ok(scaled * vectors.adjoint())
}

/// Kronecker product, row-index convention (A ⊗ B)[i·m + k, j·m + l] = A[i,j]·B[k,l].
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Spectral width (largest minus smallest eigenvalue) of a Hermitian matrix.
pub fn spectral_width(a: &CMatrix) -> Result<f64> {
    let (values, _) = eig_hermitian(a)?;
    Ok(values.last().unwrap() - values.first().unwrap())
}
