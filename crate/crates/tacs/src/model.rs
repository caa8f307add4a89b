//! Model constants, solution sectors and per-sector configuration.
//!
//! The boson realization introduces two parameters (c1, c2) constrained so
//! that the quartic pieces of the Hamiltonian cancel. With c2 = 1 the two
//! admissible roots are c1 = -3 + 2*sqrt(2) (default) and c1 = -3 - 2*sqrt(2).

use std::f64::consts::SQRT_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::halfint::HalfInt;

/// Default coupling parameter c1 = -3 + 2*sqrt(2).
pub const C1: f64 = 2.0 * SQRT_2 - 3.0;
/// Coupling parameter c2 (fixed).
pub const C2: f64 = 1.0;
/// Lambda in the quartic-cancellation constraint.
pub const LAMBDA: f64 = 1.5;
/// Upper endpoint 1/c1^2 of the outer zero interval, about 33.9706.
pub const C1_INV_SQ: f64 = 1.0 / (C1 * C1);

/// One solution sector: k boson pairs plus seniorities (nu_a, nu_b),
/// with J = k + (nu_a + nu_b)/2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Sector {
    pub k: usize,
    pub nu_a: u8,
    pub nu_b: u8,
}

impl Sector {
    pub fn new(k: usize, nu_a: u8, nu_b: u8) -> Self {
        Sector { k, nu_a, nu_b }
    }

    /// The J this sector belongs to: k + (nu_a + nu_b)/2.
    pub fn j(&self) -> HalfInt {
        HalfInt::from_twice(2 * self.k as i64 + self.nu_a as i64 + self.nu_b as i64)
    }

    /// Number of levels the sector contributes (k + 1).
    pub fn size(&self) -> usize {
        self.k + 1
    }

    pub fn label(&self) -> String {
        format!("({},{},{})", self.k, self.nu_a, self.nu_b)
    }
}

/// All sectors of a given J. Half-integer J splits into (k,1,0) and (k,0,1)
/// with k = J - 1/2; integer J into (J,0,0) and, for J >= 1, (J-1,1,1).
/// The sector sizes always sum to 2J+1.
pub fn enumerate_sectors(j: HalfInt) -> Result<Vec<Sector>> {
    if j.twice() < 0 {
        return Err(Error::NegativeJ(j.twice()));
    }
    let sectors = if j.is_half_odd() {
        let k = (j.twice() as usize - 1) / 2;
        vec![Sector::new(k, 1, 0), Sector::new(k, 0, 1)]
    } else {
        let k = j.twice() as usize / 2;
        let mut v = vec![Sector::new(k, 0, 0)];
        if k >= 1 {
            v.push(Sector::new(k - 1, 1, 1));
        }
        v
    };
    Ok(sectors)
}

/// A sector together with the coupling constants; everything downstream of
/// the recurrence is parameterized by one of these.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    pub j: HalfInt,
    pub sector: Sector,
    pub c1: f64,
    pub c2: f64,
    pub lambda: f64,
}

impl ModelConfig {
    pub fn new(sector: Sector) -> Self {
        ModelConfig { j: sector.j(), sector, c1: C1, c2: C2, lambda: LAMBDA }
    }

    /// Same sector but with the alternate constraint root c1 = -3 - 2*sqrt(2).
    /// Only used to probe the sector-swap symmetry.
    pub fn with_alternate_root(sector: Sector) -> Self {
        ModelConfig { c1: -3.0 - 2.0 * SQRT_2, ..ModelConfig::new(sector) }
    }

    /// gamma_J = 1/2 + 6 c1 c2 J / (c1^2 + c2^2), which the constraint
    /// collapses to 1/2 - J.
    pub fn gamma_j(&self) -> f64 {
        0.5 + 6.0 * self.c1 * self.c2 * self.j.value() / (self.c1 * self.c1 + self.c2 * self.c2)
    }

    /// alpha = c1^2 (nu_a - J + 1) + nu_b - J + 1 in the recurrence diagonal.
    pub fn alpha(&self) -> f64 {
        let j = self.j.value();
        self.c1 * self.c1 * (self.sector.nu_a as f64 - j + 1.0) + self.sector.nu_b as f64 - j + 1.0
    }

    /// Prefactor 1/(c1 c2) + 12 J / (c1^2 + c2^2) of the energy formula.
    /// For the default constants it simplifies to (3 + 2*sqrt(2)) (2J - 1).
    pub fn energy_prefactor(&self) -> f64 {
        1.0 / (self.c1 * self.c2) + 12.0 * self.j.value() / (self.c1 * self.c1 + self.c2 * self.c2)
    }

    /// Residuals of the two quartic-cancellation constraint equations.
    pub fn constraint_residuals(&self) -> (f64, f64) {
        let (c1, c2, lambda) = (self.c1, self.c2, self.lambda);
        let s = c1 * c1 + c2 * c2;
        let r1 = c1 / c2 + 1.5 + (3.0 + 2.0 * lambda) * c1 * c1 / s - lambda;
        let r2 = c2 / c1 + 1.5 + (3.0 + 2.0 * lambda) * c2 * c2 / s - lambda;
        (r1, r2)
    }
}
