//! Degeneracy pairing, mirror symmetry, yrast/yrare band extraction and
//! quadratic asymptotics in J.
//!
//! Band zeta collects, at each J, the zeta-th lowest distinct energy on the
//! nonpositive branch; the positive branch follows by mirror symmetry. For
//! the (0,1) sector the exact identity
//!
//!   E/chi = -(J^2 - (Omega + 1/2 - 1/(2 c1)) J + (Omega - 1/(2 c1))/2)
//!
//! holds with Omega = b_1 / (b_0 c1), and the bands approach quadratic
//! functions of J because Omega is nearly constant along a band.

use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::model::C1;
use crate::solver::{solve_spectrum, Spectrum};

/// Which J parity class a band sweep runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    HalfInteger,
    Integer,
}

/// One yrast/yrare band across J.
#[derive(Debug, Clone)]
pub struct Band {
    pub zeta: usize,
    /// (J, E/chi) sorted by J ascending.
    pub points: Vec<(HalfInt, f64)>,
    /// Omega(zeta, J) = b1/(b0 c1) where a matching (0,1)-sector level exists.
    pub omega: Vec<(HalfInt, f64)>,
}

/// Least-squares quadratic E/chi ~ a J^2 + b J + c over a band.
#[derive(Debug, Clone)]
pub struct QuadraticFit {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub rms_residual: f64,
    /// Max pointwise defect of the exact Omega identity, when Omega is known.
    pub identity_max_dev: Option<f64>,
}

/// Pairs the sorted levels of a half-integer-J spectrum into exact doublets.
pub fn pair_degeneracies(s: &Spectrum, tol: f64) -> Result<Vec<(usize, usize)>> {
    let energies = s.energies();
    let scale = s.energy_scale();
    let mut pairs = Vec::with_capacity(energies.len() / 2);
    let mut i = 0;
    while i + 1 < energies.len() {
        let gap = (energies[i + 1] - energies[i]).abs();
        if gap >= tol * scale {
            return Err(Error::UnpairedLevel { index: i, gap });
        }
        pairs.push((i, i + 1));
        i += 2;
    }
    if i != energies.len() {
        return Err(Error::UnpairedLevel { index: i, gap: f64::INFINITY });
    }
    Ok(pairs)
}

/// Max defect of the E -> -E mirror symmetry of a sorted spectrum.
pub fn check_mirror_symmetry(s: &Spectrum) -> f64 {
    let e = s.energies();
    let n = e.len();
    (0..n).map(|i| (e[i] + e[n - 1 - i]).abs()).fold(0.0, f64::max)
}

/// Distinct nonpositive energies of a spectrum, ascending, doublets collapsed.
fn negative_branch(s: &Spectrum, tol: f64) -> Vec<f64> {
    let scale = s.energy_scale();
    let mut branch: Vec<f64> = Vec::new();
    for &e in &s.energies() {
        if e > tol * scale {
            continue;
        }
        if branch.last().is_none_or(|&last| (e - last).abs() > tol * scale) {
            branch.push(e);
        }
    }
    branch
}

/// Extracts bands zeta = 1..=max_zeta over J of the given parity up to
/// `j_max`. A band starts at the smallest J where its level exists.
///
/// ```
/// use tacs::{extract_bands, quadratic_fit, HalfInt, Parity};
///
/// let bands = extract_bands(HalfInt::from_twice(21), Parity::HalfInteger, 1).unwrap();
/// let fit = quadratic_fit(&bands[0]).unwrap();
/// // The yrast band approaches -J^2 + 0.41 J - 0.04.
/// assert!((fit.a + 1.0).abs() < 0.02);
/// assert!((fit.b - 0.41).abs() < 0.06);
/// ```
pub fn extract_bands(j_max: HalfInt, parity: Parity, max_zeta: usize) -> Result<Vec<Band>> {
    let start = match parity {
        Parity::HalfInteger => HalfInt::from_twice(1),
        Parity::Integer => HalfInt::from_int(1),
    };
    let mut bands: Vec<Band> =
        (1..=max_zeta).map(|zeta| Band { zeta, points: Vec::new(), omega: Vec::new() }).collect();
    for j in start.stride_to(j_max) {
        let spec = solve_spectrum(j)?;
        let scale = spec.energy_scale();
        let branch = negative_branch(&spec, 1e-8);
        for band in bands.iter_mut() {
            let Some(&energy) = branch.get(band.zeta - 1) else { continue };
            band.points.push((j, energy));
            // Omega comes from the matching (0,1)-sector polynomial.
            let omega = spec.levels.iter().find_map(|l| {
                let s = l.sector();
                if s.nu_a == 0 && s.nu_b == 1 && s.k >= 1
                    && (l.energy_over_chi - energy).abs() <= 1e-8 * scale
                {
                    let b = &l.polynomial.coeffs;
                    Some(b[1] / (b[0] * l.polynomial.config.c1))
                } else {
                    None
                }
            });
            if let Some(om) = omega {
                band.omega.push((j, om));
            }
        }
    }
    Ok(bands)
}

/// Ordinary least-squares quadratic fit plus the pointwise Omega identity.
pub fn quadratic_fit(band: &Band) -> Result<QuadraticFit> {
    let n = band.points.len();
    if n < 3 {
        return Err(Error::InsufficientPoints { zeta: band.zeta, got: n, need: 3 });
    }
    // Normal equations for the 3-parameter fit.
    let mut m = [[0.0f64; 3]; 3];
    let mut rhs = [0.0f64; 3];
    for &(j, e) in &band.points {
        let x = j.value();
        let basis = [x * x, x, 1.0];
        for r in 0..3 {
            for c in 0..3 {
                m[r][c] += basis[r] * basis[c];
            }
            rhs[r] += basis[r] * e;
        }
    }
    let mat = nalgebra::Matrix3::from_fn(|r, c| m[r][c]);
    let v = nalgebra::Vector3::from_row_slice(&rhs);
    let sol = mat
        .lu()
        .solve(&v)
        .ok_or(Error::InsufficientPoints { zeta: band.zeta, got: n, need: 3 })?;
    let (a, b, c) = (sol[0], sol[1], sol[2]);
    let rms = (band
        .points
        .iter()
        .map(|&(j, e)| {
            let x = j.value();
            let d = a * x * x + b * x + c - e;
            d * d
        })
        .sum::<f64>()
        / n as f64)
        .sqrt();

    let identity_max_dev = if band.omega.is_empty() {
        None
    } else {
        let mut dev = 0.0f64;
        for &(j, omega) in &band.omega {
            let x = j.value();
            let predicted = -(x * x - (omega + 0.5 - 1.0 / (2.0 * C1)) * x + 0.5 * (omega - 1.0 / (2.0 * C1)));
            let actual = band
                .points
                .iter()
                .find(|&&(pj, _)| pj == j)
                .map(|&(_, e)| e)
                .expect("omega entry without a band point");
            dev = dev.max((predicted - actual).abs());
        }
        Some(dev)
    };

    Ok(QuadraticFit { a, b, c, rms_residual: rms, identity_max_dev })
}
