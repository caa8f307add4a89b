//! Zeros of the Heine-Stieltjes polynomials, Bethe-equation verification,
//! and the Fuchsian ODE residual.
//!
//! The zeros are the Bethe roots w_l. They are complex in general, closed
//! under conjugation (real coefficients), avoid the poles {0, 1, 1/c1^2},
//! and their |Re(w)| fall in (0,1) U (1, 1/c1^2).
//!
//! Coefficient magnitudes span many decades (up to ~1e14 at k = 10), so
//! companion-matrix eigenvalues alone are not accurate enough; they seed an
//! Aberth-Ehrlich simultaneous Newton polish against y_k instead.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{ModelConfig, C1_INV_SQ};
use crate::solver::HsPolynomial;

const MAX_POLISH_ITERS: usize = 200;

/// The Bethe roots of one level.
#[derive(Debug, Clone)]
pub struct ZeroSet {
    pub zeros: Vec<Complex64>,
}

/// p(w) and p'(w) by Horner's rule; coefficients ascending.
fn eval_with_derivative(coeffs: &[f64], w: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * w + p;
        p = p * w + c;
    }
    (p, dp)
}

/// p, p' and p'' at w; coefficients ascending.
fn eval_with_two_derivatives(coeffs: &[f64], w: Complex64) -> (Complex64, Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    let mut d2p = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        d2p = d2p * w + dp * 2.0;
        dp = dp * w + p;
        p = p * w + c;
    }
    (p, dp, d2p)
}

fn companion_eigenvalues(coeffs: &[f64]) -> Vec<Complex64> {
    let k = coeffs.len() - 1;
    // Monic by construction (b_k = 1); normalize defensively anyway.
    let lead = coeffs[k];
    let mut c = DMatrix::<f64>::zeros(k, k);
    for i in 0..k {
        c[(i, k - 1)] = -coeffs[i] / lead;
        if i >= 1 {
            c[(i, i - 1)] = 1.0;
        }
    }
    c.complex_eigenvalues().iter().copied().collect()
}

/// Aberth-Ehrlich simultaneous iteration; returns the iteration count.
fn aberth_polish(coeffs: &[f64], zeros: &mut [Complex64]) -> Result<usize> {
    let k = zeros.len();
    for iter in 0..MAX_POLISH_ITERS {
        let mut max_step = 0.0f64;
        for l in 0..k {
            let w = zeros[l];
            let (p, dp) = eval_with_derivative(coeffs, w);
            if dp.norm() == 0.0 {
                continue;
            }
            let newton = p / dp;
            let repulsion: Complex64 = (0..k)
                .filter(|&j| j != l)
                .map(|j| 1.0 / (w - zeros[j]))
                .sum();
            let denom = Complex64::new(1.0, 0.0) - newton * repulsion;
            let step = if denom.norm() > 1e-300 { newton / denom } else { newton };
            zeros[l] = w - step;
            max_step = max_step.max(step.norm() / (1.0 + w.norm()));
        }
        if max_step < 1e-14 {
            return Ok(iter + 1);
        }
    }
    // Accept if the roots still satisfy the polynomial to a loose bound;
    // stagnation at machine precision is not a failure.
    let ok = zeros.iter().all(|&w| {
        let (p, dp) = eval_with_derivative(coeffs, w);
        p.norm() <= 1e-10 * (dp.norm() * (1.0 + w.norm())).max(1.0)
    });
    if ok {
        Ok(MAX_POLISH_ITERS)
    } else {
        Err(Error::RootsNotConverged(MAX_POLISH_ITERS))
    }
}

/// All k zeros of the polynomial, companion-matrix seeded and polished.
///
/// ```
/// use tacs::{bethe_residual, polynomial_zeros, solve_spectrum, HalfInt};
///
/// let spectrum = solve_spectrum(HalfInt::from_twice(9)).unwrap();
/// let ground = &spectrum.levels[0];
/// let zeros = polynomial_zeros(&ground.polynomial).unwrap();
/// assert_eq!(zeros.zeros.len(), 4);
/// // The zeros satisfy the coupled Bethe equations.
/// assert!(bethe_residual(&zeros, &ground.polynomial.config).unwrap() < 1e-8);
/// ```
pub fn polynomial_zeros(p: &HsPolynomial) -> Result<ZeroSet> {
    let k = p.degree();
    if k == 0 {
        return Ok(ZeroSet { zeros: Vec::new() });
    }
    let mut zeros = companion_eigenvalues(&p.coeffs);
    aberth_polish(&p.coeffs, &mut zeros)?;
    zeros.sort_by(|a, b| a.re.abs().total_cmp(&b.re.abs()).then(a.im.total_cmp(&b.im)));
    Ok(ZeroSet { zeros })
}

impl ZeroSet {
    pub fn len(&self) -> usize {
        self.zeros.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }

    /// Max distance from each zero to the nearest conjugate of a zero.
    pub fn conjugation_defect(&self) -> f64 {
        self.zeros
            .iter()
            .map(|w| {
                self.zeros
                    .iter()
                    .map(|v| (w - v.conj()).norm())
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    }

    /// Min distance to the poles {0, 1/c2^2 = 1, 1/c1^2}.
    pub fn pole_distance(&self) -> f64 {
        let poles = [
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(C1_INV_SQ, 0.0),
        ];
        self.zeros
            .iter()
            .flat_map(|w| poles.iter().map(move |p| (w - p).norm()))
            .fold(f64::INFINITY, f64::min)
    }

    /// Elementary symmetric functions S_0..S_k of the zeros; per the
    /// coefficient identity, S_q = (-1)^q b_{k-q}.
    pub fn symmetric_functions(&self) -> Vec<f64> {
        let k = self.zeros.len();
        let mut e = vec![Complex64::new(0.0, 0.0); k + 1];
        e[0] = Complex64::new(1.0, 0.0);
        for (i, &w) in self.zeros.iter().enumerate() {
            for q in (1..=i + 1).rev() {
                e[q] = e[q] + w * e[q - 1];
            }
        }
        e.iter().map(|z| z.re).collect()
    }
}

/// Max absolute defect of the Bethe ansatz equations over all roots.
pub fn bethe_residual(z: &ZeroSet, cfg: &ModelConfig) -> Result<f64> {
    let s = cfg.sector;
    let (c1sq, c2sq) = (cfg.c1 * cfg.c1, cfg.c2 * cfg.c2);
    let gamma = cfg.gamma_j();
    for i in 0..z.zeros.len() {
        for j in i + 1..z.zeros.len() {
            let gap = (z.zeros[i] - z.zeros[j]).norm();
            if gap < 1e-12 {
                return Err(Error::DegenerateRoots { i, j, gap });
            }
        }
    }
    let mut worst = 0.0f64;
    for (l, &w) in z.zeros.iter().enumerate() {
        let mut lhs = (s.nu_a as f64 + 0.5) * c1sq / (Complex64::new(1.0, 0.0) - c1sq * w)
            + (s.nu_b as f64 + 0.5) * c2sq / (Complex64::new(1.0, 0.0) - c2sq * w)
            - gamma / w;
        for (j, &v) in z.zeros.iter().enumerate() {
            if j != l {
                lhs -= 2.0 / (w - v);
            }
        }
        worst = worst.max(lhs.norm());
    }
    Ok(worst)
}

/// Residual of the Fuchsian equation, multiplied through by
/// w (1 - c1^2 w)(1 - c2^2 w), sampled on a circle of radius 2 and
/// normalized by the largest sampled term magnitude. The identity is
/// polynomial, so any pole-free grid suffices.
pub fn fuchsian_residual(p: &HsPolynomial) -> f64 {
    let cfg = &p.config;
    let s = cfg.sector;
    let (c1sq, c2sq) = (cfg.c1 * cfg.c1, cfg.c2 * cfg.c2);
    let gamma = cfg.gamma_j();
    let slope = p.van_vleck_slope();
    let poles = [0.0, 1.0 / c2sq, 1.0 / c1sq];

    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    for i in 0..64 {
        let theta = 2.0 * std::f64::consts::PI * i as f64 / 64.0;
        let w = Complex64::new(2.0 * theta.cos(), 2.0 * theta.sin());
        if poles.iter().any(|&q| (w - Complex64::new(q, 0.0)).norm() < 0.1) {
            continue;
        }
        let (y, dy, d2y) = eval_with_two_derivatives(&p.coeffs, w);
        let one = Complex64::new(1.0, 0.0);
        let f1 = one - c1sq * w;
        let f2 = one - c2sq * w;
        let q_term = w * f1 * f2 * d2y;
        let l_term = (-(s.nu_a as f64 + 0.5) * c1sq * w * f2
            - (s.nu_b as f64 + 0.5) * c2sq * w * f1
            + gamma * f1 * f2)
            * dy;
        let v_term = (slope * w + p.g0) * y;
        let r = (q_term + l_term + v_term).norm();
        scale = scale.max(q_term.norm()).max(l_term.norm()).max(v_term.norm());
        worst = worst.max(r);
    }
    worst / scale.max(1e-300)
}

/// Counts zeros with |Re(w)| in (0,1) and in (1, 1/c1^2). Anything beyond
/// the closed union by more than 1e-8 is an invariant violation.
pub fn classify_zeros(z: &ZeroSet) -> Result<(usize, usize)> {
    let mut inner = 0;
    let mut outer = 0;
    for w in &z.zeros {
        let re = w.re.abs();
        if re > C1_INV_SQ + 1e-8 {
            return Err(Error::ZeroOutsideIntervals(re, C1_INV_SQ));
        }
        if re < 1.0 {
            inner += 1;
        } else {
            outer += 1;
        }
    }
    Ok((inner, outer))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::halfint::HalfInt;
    use crate::model::{enumerate_sectors, Sector};
    use crate::solver::{solve_sector, solve_spectrum, energy_from_zeros};
    use approx::assert_abs_diff_eq;

    fn poly(k: usize, nu_a: u8, nu_b: u8, coeffs: Vec<f64>, g0: f64) -> HsPolynomial {
        HsPolynomial { config: ModelConfig::new(Sector::new(k, nu_a, nu_b)), zeta: 0, coeffs, g0 }
    }

    #[test]
    fn linear_zero() {
        let p = poly(1, 1, 0, vec![18.3378, 1.0], 0.0545323);
        let z = polynomial_zeros(&p).unwrap();
        assert_eq!(z.len(), 1);
        assert_abs_diff_eq!(z.zeros[0].re, -18.3378, epsilon = 1e-8);
        assert_abs_diff_eq!(z.zeros[0].im, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn quadratic_zeros() {
        // Table row {2, 2; 1,0}: -5.82843 + 2.41421 w + w^2, real roots from
        // the quadratic formula.
        let p = poly(2, 1, 0, vec![-5.82843, 2.41421, 1.0], 2.41421);
        let z = polynomial_zeros(&p).unwrap();
        let mut res: Vec<f64> = z.zeros.iter().map(|w| w.re).collect();
        res.sort_by(f64::total_cmp);
        assert_abs_diff_eq!(res[0], -3.90628, epsilon = 1e-5);
        assert_abs_diff_eq!(res[1], 1.49207, epsilon = 1e-5);
    }

    #[test]
    fn k0_empty() {
        let p = poly(0, 1, 0, vec![1.0], 0.0);
        assert!(polynomial_zeros(&p).unwrap().is_empty());
    }

    #[test]
    fn bethe_residual_j_three_halves() {
        let level = &solve_sector(&ModelConfig::new(Sector::new(1, 1, 0))).unwrap()[0];
        let z = polynomial_zeros(&level.polynomial).unwrap();
        let r = bethe_residual(&z, &level.polynomial.config).unwrap();
        assert!(r < 1e-6, "residual {r}");
    }

    #[test]
    fn bethe_residual_detects_perturbation() {
        let level = &solve_sector(&ModelConfig::new(Sector::new(1, 1, 0))).unwrap()[0];
        let clean = {
            let z = polynomial_zeros(&level.polynomial).unwrap();
            bethe_residual(&z, &level.polynomial.config).unwrap()
        };
        let mut z = polynomial_zeros(&level.polynomial).unwrap();
        z.zeros[0] += Complex64::new(0.01, 0.0);
        let r = bethe_residual(&z, &level.polynomial.config).unwrap();
        assert!(r > 1e-6 && r > 1e4 * clean.max(1e-15), "perturbed {r} vs clean {clean}");
    }

    #[test]
    fn bethe_residual_j_21_2_ground() {
        let level = &solve_sector(&ModelConfig::new(Sector::new(10, 0, 1))).unwrap()[0];
        let z = polynomial_zeros(&level.polynomial).unwrap();
        let r = bethe_residual(&z, &level.polynomial.config).unwrap();
        assert!(r < 1e-6, "residual {r}");
    }

    #[test]
    fn bethe_residual_rejects_coincident_roots() {
        let z = ZeroSet { zeros: vec![Complex64::new(2.0, 0.0), Complex64::new(2.0, 1e-13)] };
        let cfg = ModelConfig::new(Sector::new(2, 1, 0));
        assert!(matches!(bethe_residual(&z, &cfg), Err(Error::DegenerateRoots { .. })));
    }

    #[test]
    fn fuchsian_linear_case() {
        let level = &solve_sector(&ModelConfig::new(Sector::new(1, 1, 0))).unwrap()[0];
        assert!(fuchsian_residual(&level.polynomial) < 1e-10);
    }

    #[test]
    fn fuchsian_j_nine_halves() {
        for level in solve_sector(&ModelConfig::new(Sector::new(4, 0, 1))).unwrap() {
            assert!(fuchsian_residual(&level.polynomial) < 1e-6);
        }
    }

    #[test]
    fn fuchsian_detects_swapped_g0() {
        let levels = solve_sector(&ModelConfig::new(Sector::new(1, 1, 0))).unwrap();
        let mut bad = levels[0].polynomial.clone();
        bad.g0 = levels[1].polynomial.g0;
        assert!(fuchsian_residual(&bad) > 1e-3);
    }

    #[test]
    fn classify_j_three_halves() {
        let level = &solve_sector(&ModelConfig::new(Sector::new(1, 1, 0))).unwrap()[0];
        let z = polynomial_zeros(&level.polynomial).unwrap();
        // |-18.34| lies in (1, 33.97).
        assert_eq!(classify_zeros(&z).unwrap(), (0, 1));
    }

    #[test]
    fn classify_k0() {
        let z = ZeroSet { zeros: vec![] };
        assert_eq!(classify_zeros(&z).unwrap(), (0, 0));
    }

    #[test]
    fn classify_rejects_far_zero() {
        let z = ZeroSet { zeros: vec![Complex64::new(50.0, 0.0)] };
        assert!(matches!(classify_zeros(&z), Err(Error::ZeroOutsideIntervals(..))));
    }

    #[test]
    fn symmetric_functions_match_coefficients() {
        for sector in [Sector::new(4, 1, 0), Sector::new(10, 0, 1)] {
            for level in solve_sector(&ModelConfig::new(sector)).unwrap() {
                let p = &level.polynomial;
                let z = polynomial_zeros(p).unwrap();
                let s = z.symmetric_functions();
                let k = p.degree();
                for (q, &sq) in s.iter().enumerate() {
                    let expect = if q % 2 == 0 { p.coeffs[k - q] } else { -p.coeffs[k - q] };
                    let tol = 1e-6 * expect.abs().max(1e-6);
                    assert!(
                        (sq - expect).abs() <= tol,
                        "S_{q} = {sq} vs {expect} for sector {}",
                        sector.label()
                    );
                }
            }
        }
    }

    #[test]
    fn energies_from_zeros_match_coefficient_route() {
        for twice_j in [3, 9, 14, 21] {
            let spec = solve_spectrum(HalfInt::from_twice(twice_j)).unwrap();
            let scale = spec.energy_scale();
            for level in &spec.levels {
                if level.sector().k == 0 {
                    continue;
                }
                let z = polynomial_zeros(&level.polynomial).unwrap();
                let e = energy_from_zeros(&level.polynomial.config, &z.zeros);
                assert_abs_diff_eq!(e, level.energy_over_chi, epsilon = 1e-8 * scale);
                // The imaginary parts of sum 2/w must cancel.
                let im: f64 = z.zeros.iter().map(|w| (2.0 / w).im).sum();
                assert!(im.abs() < 1e-8);
            }
        }
    }

    #[test]
    fn zero_invariants_sweep() {
        for twice_j in 1..=21 {
            let j = HalfInt::from_twice(twice_j);
            for sector in enumerate_sectors(j).unwrap() {
                for level in solve_sector(&ModelConfig::new(sector)).unwrap() {
                    if sector.k == 0 {
                        continue;
                    }
                    let z = polynomial_zeros(&level.polynomial).unwrap();
                    assert!(z.conjugation_defect() < 1e-8, "2J={twice_j} {}", sector.label());
                    assert!(z.pole_distance() > 1e-10, "2J={twice_j} {}", sector.label());
                    let (inner, outer) = classify_zeros(&z).unwrap();
                    assert_eq!(inner + outer, sector.k);
                }
            }
        }
    }
}
