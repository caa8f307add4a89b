//! The core solver: three-term-recurrence tridiagonal matrix per sector,
//! Van Vleck eigenproblem for (g0, b) pairs, and level energies.
//!
//! The degree-k Heine-Stieltjes polynomial y(w) = sum_j b_j w^j together
//! with the constant term g0 of the accessory Van Vleck polynomial solve
//! the eigenproblem F b = g0 b, where F is (k+1)x(k+1) tridiagonal with
//!
//!   F[j][j+1] = (J - j - 1/2)(j + 1)
//!   F[j][j-1] = c1^2 (k + 1 - j)(nu_a + nu_b + k + j - J - 1/2)
//!   F[j][j]   = j ((c1^2 + 1)(j - 1) + alpha)
//!
//! The off-diagonal products are strictly positive in every sector, so F is
//! similar to a real symmetric tridiagonal matrix and all g0 are real and
//! simple.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::model::{enumerate_sectors, ModelConfig, Sector};
use crate::roots;

/// One Heine-Stieltjes polynomial with its Van Vleck constant.
#[derive(Debug, Clone)]
pub struct HsPolynomial {
    pub config: ModelConfig,
    /// 1-based index after sorting the sector by energy.
    pub zeta: usize,
    /// Coefficients b_0 ... b_k with b_k = 1.
    pub coeffs: Vec<f64>,
    pub g0: f64,
}

impl HsPolynomial {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Slope of the Van Vleck polynomial V(w) = slope * w + g0.
    pub fn van_vleck_slope(&self) -> f64 {
        let s = self.config.sector;
        let j = self.config.j.value();
        let c1sq = self.config.c1 * self.config.c1;
        c1sq * s.k as f64 * (j - s.k as f64 - 0.5 - s.nu_a as f64 - s.nu_b as f64)
    }

    /// Max row-wise relative residual of the three-term recurrence. Each row
    /// is normalized by the magnitudes of its own terms because the
    /// coefficients span many decades.
    pub fn recurrence_residual(&self) -> f64 {
        let f = build_tridiagonal(&self.config);
        let k = self.degree();
        let mut worst = 0.0f64;
        for j in 0..=k {
            let mut lhs = f[(j, j)] * self.coeffs[j];
            let mut scale = lhs.abs() + (self.g0 * self.coeffs[j]).abs();
            if j > 0 {
                let t = f[(j, j - 1)] * self.coeffs[j - 1];
                lhs += t;
                scale += t.abs();
            }
            if j < k {
                let t = f[(j, j + 1)] * self.coeffs[j + 1];
                lhs += t;
                scale += t.abs();
            }
            worst = worst.max((lhs - self.g0 * self.coeffs[j]).abs() / scale.max(1e-300));
        }
        worst
    }
}

/// One eigenlevel of the Hamiltonian.
#[derive(Debug, Clone)]
pub struct Level {
    pub zeta: usize,
    pub energy_over_chi: f64,
    pub polynomial: HsPolynomial,
}

impl Level {
    pub fn sector(&self) -> Sector {
        self.polynomial.config.sector
    }
}

/// The complete, energy-sorted set of 2J+1 levels for one J.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub j: HalfInt,
    pub levels: Vec<Level>,
}

impl Spectrum {
    pub fn energies(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.energy_over_chi).collect()
    }

    pub fn energy_scale(&self) -> f64 {
        self.levels.iter().fold(1.0f64, |a, l| a.max(l.energy_over_chi.abs()))
    }
}

/// The (k+1)x(k+1) tridiagonal matrix of the three-term recurrence.
pub fn build_tridiagonal(cfg: &ModelConfig) -> DMatrix<f64> {
    let s = cfg.sector;
    let k = s.k;
    let j = cfg.j.value();
    let c1sq = cfg.c1 * cfg.c1;
    let alpha = cfg.alpha();
    let n = k + 1;
    let mut f = DMatrix::<f64>::zeros(n, n);
    for row in 0..n {
        let jf = row as f64;
        f[(row, row)] = jf * ((c1sq + 1.0) * (jf - 1.0) + alpha);
        if row + 1 < n {
            f[(row, row + 1)] = (j - jf - 0.5) * (jf + 1.0);
        }
        if row >= 1 {
            f[(row, row - 1)] =
                c1sq * (k as f64 + 1.0 - jf) * (s.nu_a as f64 + s.nu_b as f64 + k as f64 + jf - j - 0.5);
        }
    }
    f
}

/// One eigenpair of the Van Vleck problem, with b_k rescaled to 1.
#[derive(Debug, Clone)]
pub struct VanVleckPair {
    pub g0: f64,
    pub coeffs: Vec<f64>,
}

/// Solves F b = g0 b by diagonal similarity to a symmetric tridiagonal
/// matrix, which is possible because the off-diagonal products are
/// positive and guarantees real g0 by construction.
pub fn solve_vanvleck(f: &DMatrix<f64>) -> Result<Vec<VanVleckPair>> {
    let n = f.nrows();
    if n == 1 {
        return Ok(vec![VanVleckPair { g0: f[(0, 0)], coeffs: vec![1.0] }]);
    }

    // d[i] scales row i; the transformed matrix D F D^-1 has off-diagonal
    // sqrt(F[j][j+1] F[j+1][j]).
    let mut d = vec![1.0f64; n];
    for i in 0..n - 1 {
        let prod = f[(i, i + 1)] * f[(i + 1, i)];
        if prod <= 0.0 {
            return Err(Error::EigenFailure(n - 1));
        }
        d[i + 1] = d[i] * (f[(i, i + 1)] / f[(i + 1, i)]).sqrt();
    }
    let mut sym = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        sym[(i, i)] = f[(i, i)];
        if i + 1 < n {
            let off = (f[(i, i + 1)] * f[(i + 1, i)]).sqrt();
            sym[(i, i + 1)] = off;
            sym[(i + 1, i)] = off;
        }
    }

    let eig = sym.symmetric_eigen();
    let mut pairs: Vec<VanVleckPair> = Vec::with_capacity(n);
    for col in 0..n {
        let g0 = eig.eigenvalues[col];
        // The coefficients decay roughly like c1^2 per index, so for large k
        // the trailing eigenvector component sinks below the noise floor of
        // the dense eigensolver. Above that floor the rescaled eigenvector is
        // accurate; below it, run the recurrence backward from b_k = 1
        // instead, which follows the solution that grows toward b_0 and is
        // therefore stable.
        let b = if eig.eigenvectors[(n - 1, col)].abs() >= 1e-12 {
            let mut b: Vec<f64> = (0..n).map(|i| eig.eigenvectors[(i, col)] / d[i]).collect();
            let last = b[n - 1];
            for x in b.iter_mut() {
                *x /= last;
            }
            b
        } else {
            backward_coeffs(f, g0)?
        };
        pairs.push(VanVleckPair { g0, coeffs: b });
    }
    pairs.sort_by(|a, b| a.g0.total_cmp(&b.g0));
    Ok(pairs)
}

/// Solves (F - g0) b = 0 downward from b_k = 1 using rows k..1, then checks
/// the leftover row 0 as a consistency residual.
fn backward_coeffs(f: &DMatrix<f64>, g0: f64) -> Result<Vec<f64>> {
    let n = f.nrows();
    let mut b = vec![0.0f64; n];
    b[n - 1] = 1.0;
    for row in (1..n).rev() {
        let mut rhs = (g0 - f[(row, row)]) * b[row];
        if row + 1 < n {
            rhs -= f[(row, row + 1)] * b[row + 1];
        }
        b[row - 1] = rhs / f[(row, row - 1)];
        if !b[row - 1].is_finite() {
            return Err(Error::DegenerateLeadingCoeff(b[row - 1].abs()));
        }
    }
    let residual = (f[(0, 0)] * b[0] + f[(0, 1)] * b[1] - g0 * b[0]).abs();
    let scale = (f[(0, 1)] * b[1]).abs().max((g0 * b[0]).abs()).max(1e-300);
    if residual > 1e-6 * scale {
        return Err(Error::DegenerateLeadingCoeff(residual / scale));
    }
    Ok(b)
}

/// Level energy E/chi from the coefficient ratio -2 b1/b0 (plus the
/// seniority terms). Falls back with an error if |b0| is too small; the
/// caller can then use the zeros route.
pub fn energy_from_coeffs(cfg: &ModelConfig, b: &[f64]) -> Result<f64> {
    let s = cfg.sector;
    let seniority_term =
        cfg.c1 * cfg.c1 * s.nu_a as f64 + cfg.c2 * cfg.c2 * s.nu_b as f64;
    let pair_term = if s.k == 0 {
        0.0
    } else {
        let norm = b.iter().map(|x| x * x).sum::<f64>().sqrt();
        if b[0].abs() < 1e-12 * norm {
            return Err(Error::TinyConstantCoeff(b[0].abs()));
        }
        -2.0 * b[1] / b[0]
    };
    let j = cfg.j.value();
    Ok(0.25 * (cfg.energy_prefactor() * (pair_term + seniority_term) - 2.0 * j * (2.0 * j - 1.0)))
}

/// Level energy E/chi from the Bethe roots, sum_l 2/w_l.
pub fn energy_from_zeros(cfg: &ModelConfig, zeros: &[num_complex::Complex64]) -> f64 {
    let s = cfg.sector;
    let seniority_term =
        cfg.c1 * cfg.c1 * s.nu_a as f64 + cfg.c2 * cfg.c2 * s.nu_b as f64;
    let root_sum: f64 = zeros.iter().map(|w| (2.0 / w).re).sum();
    let j = cfg.j.value();
    0.25 * (cfg.energy_prefactor() * (root_sum + seniority_term) - 2.0 * j * (2.0 * j - 1.0))
}

/// Solves one sector: k+1 levels sorted ascending by energy, zeta = 1...
pub fn solve_sector(cfg: &ModelConfig) -> Result<Vec<Level>> {
    let f = build_tridiagonal(cfg);
    let pairs = solve_vanvleck(&f)?;
    let mut levels: Vec<Level> = Vec::with_capacity(pairs.len());
    for pair in pairs {
        let poly = HsPolynomial { config: *cfg, zeta: 0, coeffs: pair.coeffs, g0: pair.g0 };
        let energy = match energy_from_coeffs(cfg, &poly.coeffs) {
            Ok(e) => e,
            Err(Error::TinyConstantCoeff(_)) => {
                let zeros = roots::polynomial_zeros(&poly)?;
                energy_from_zeros(cfg, &zeros.zeros)
            }
            Err(e) => return Err(e),
        };
        levels.push(Level { zeta: 0, energy_over_chi: energy, polynomial: poly });
    }
    levels.sort_by(|a, b| a.energy_over_chi.total_cmp(&b.energy_over_chi));
    for (i, level) in levels.iter_mut().enumerate() {
        level.zeta = i + 1;
        level.polynomial.zeta = i + 1;
    }
    Ok(levels)
}

/// Full spectrum for one J: all sectors solved, merged and sorted.
///
/// ```
/// use tacs::{solve_spectrum, HalfInt};
///
/// let spectrum = solve_spectrum(HalfInt::from_twice(3)).unwrap();
/// let e = spectrum.energies();
/// // J = 3/2: two doublets at -sqrt(3) and +sqrt(3).
/// assert!((e[0] + 3f64.sqrt()).abs() < 1e-10);
/// assert!((e[1] + 3f64.sqrt()).abs() < 1e-10);
/// assert!((e[3] - 3f64.sqrt()).abs() < 1e-10);
/// ```
pub fn solve_spectrum(j: HalfInt) -> Result<Spectrum> {
    let mut levels: Vec<Level> = Vec::with_capacity(j.multiplet_dim());
    for sector in enumerate_sectors(j)? {
        levels.extend(solve_sector(&ModelConfig::new(sector))?);
    }
    levels.sort_by(|a, b| a.energy_over_chi.total_cmp(&b.energy_over_chi));
    Ok(Spectrum { j, levels })
}
