//! Eigenvector reconstruction in the |J,M> basis of the rotated
//! Hamiltonian, from the Heine-Stieltjes coefficients.
//!
//! The expansion coefficient at boson occupation (n_a, n_b) with
//! n_a = 2k - 2 rho + nu_a, n_b = 2 rho + nu_b and M = (n_a - n_b)/2 is
//! B_rho c1^rho sqrt(n_a! n_b!). Factorial weights are accumulated in log
//! space so the final unit-norm vector is scale-free.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::model::Sector;
use crate::operator::OperatorMatrix;
use crate::solver::{HsPolynomial, Level};

/// One reconstructed eigenvector over the descending-M basis.
#[derive(Debug, Clone)]
pub struct StateVector {
    pub j: HalfInt,
    pub sector: Sector,
    pub zeta: usize,
    /// Length 2J+1, unit norm, indexed by M = J, J-1, ..., -J.
    pub amplitudes: Vec<f64>,
}

fn ln_factorial(n: u64) -> f64 {
    (2..=n).map(|i| (i as f64).ln()).sum()
}

fn binomial(n: usize, r: usize) -> f64 {
    if r > n {
        return 0.0;
    }
    let mut acc = 1.0f64;
    for i in 0..r.min(n - r) {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// The B_rho expansion coefficients, rho = 0..k:
/// B_rho = sum_q (-1)^q S_q sum_mu C(k-q, mu) C(q, rho-mu) c1^(-2 mu),
/// with S_q = (-1)^q b_{k-q}, i.e. (-1)^q S_q = b_{k-q}.
pub fn b_rho_coeffs(p: &HsPolynomial) -> Vec<f64> {
    let k = p.degree();
    let c1_inv_sq = 1.0 / (p.config.c1 * p.config.c1);
    (0..=k)
        .map(|rho| {
            let mut total = 0.0f64;
            for q in 0..=k {
                let b = p.coeffs[k - q];
                let mut inner = 0.0f64;
                let mut pow = 1.0f64;
                for mu in 0..=rho.min(k - q) {
                    inner += binomial(k - q, mu) * binomial(q, rho - mu) * pow;
                    pow *= c1_inv_sq;
                }
                total += b * inner;
            }
            total
        })
        .collect()
}

/// Builds the normalized eigenvector of the rotated Hamiltonian for one
/// level. The global phase is fixed by making the largest-magnitude
/// amplitude positive.
///
/// ```
/// use tacs::{build_hamiltonian, solve_spectrum, state_amplitudes, verify_state, Form, HalfInt};
///
/// let j = HalfInt::from_twice(7);
/// let spectrum = solve_spectrum(j).unwrap();
/// let h = build_hamiltonian(j, Form::RotatedTa, 1.0).unwrap();
/// let v = state_amplitudes(&spectrum.levels[0]).unwrap();
/// let norm: f64 = v.amplitudes.iter().map(|a| a * a).sum();
/// assert!((norm - 1.0).abs() < 1e-12);
/// assert!(verify_state(&v, &h, spectrum.levels[0].energy_over_chi).unwrap() < 1e-10);
/// ```
pub fn state_amplitudes(level: &Level) -> Result<StateVector> {
    let p = &level.polynomial;
    let sector = p.config.sector;
    let j = p.config.j;
    let k = sector.k;
    let dim = j.multiplet_dim();
    let c1 = p.config.c1;
    let b = b_rho_coeffs(p);

    // Log magnitude and sign per rho; renormalize against the peak before
    // exponentiating so k! scales never overflow.
    let mut ln_mag = vec![f64::NEG_INFINITY; k + 1];
    let mut sign = vec![0.0f64; k + 1];
    for rho in 0..=k {
        if b[rho] == 0.0 {
            continue;
        }
        let n_a = (2 * (k - rho) + sector.nu_a as usize) as u64;
        let n_b = (2 * rho + sector.nu_b as usize) as u64;
        ln_mag[rho] = b[rho].abs().ln()
            + rho as f64 * c1.abs().ln()
            + 0.5 * (ln_factorial(n_a) + ln_factorial(n_b));
        sign[rho] = b[rho].signum() * if c1 < 0.0 && rho % 2 == 1 { -1.0 } else { 1.0 };
    }
    let peak = ln_mag.iter().fold(f64::NEG_INFINITY, |a, &x| a.max(x));
    if !peak.is_finite() {
        return Err(Error::ZeroNorm);
    }

    let mut amplitudes = vec![0.0f64; dim];
    for rho in 0..=k {
        if sign[rho] == 0.0 {
            continue;
        }
        let n_a = 2 * (k - rho) as i64 + sector.nu_a as i64;
        let n_b = 2 * rho as i64 + sector.nu_b as i64;
        let twice_m = n_a - n_b;
        let idx = ((j.twice() - twice_m) / 2) as usize;
        amplitudes[idx] += sign[rho] * (ln_mag[rho] - peak).exp();
    }
    let norm = amplitudes.iter().map(|a| a * a).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::ZeroNorm);
    }
    let dominant = amplitudes
        .iter()
        .cloned()
        .fold(0.0f64, |a, x| if x.abs() > a.abs() { x } else { a });
    let flip = if dominant < 0.0 { -1.0 } else { 1.0 };
    for a in amplitudes.iter_mut() {
        *a *= flip / norm;
    }
    Ok(StateVector { j, sector, zeta: level.zeta, amplitudes })
}

/// Residual ||H v - E v|| / max(1, |E|) against the rotated-form matrix.
pub fn verify_state(v: &StateVector, h: &OperatorMatrix, energy: f64) -> Result<f64> {
    if v.amplitudes.len() != h.dim() {
        return Err(Error::DimensionMismatch(v.amplitudes.len(), h.dim()));
    }
    let m = h.real_entries();
    let vec = DVector::from_column_slice(&v.amplitudes);
    let r = &m * &vec - &vec * energy;
    Ok(r.norm() / energy.abs().max(1.0))
}

/// Gram matrix of a set of states over the same J.
pub fn overlap_matrix(states: &[StateVector]) -> Result<DMatrix<f64>> {
    let n = states.len();
    if n == 0 {
        return Ok(DMatrix::zeros(0, 0));
    }
    let dim = states[0].amplitudes.len();
    for s in states {
        if s.amplitudes.len() != dim {
            return Err(Error::DimensionMismatch(s.amplitudes.len(), dim));
        }
    }
    Ok(DMatrix::from_fn(n, n, |r, c| {
        states[r]
            .amplitudes
            .iter()
            .zip(&states[c].amplitudes)
            .map(|(a, b)| a * b)
            .sum()
    }))
}
