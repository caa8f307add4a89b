//! Exact solver for the two-axis countertwisting spin Hamiltonian
//! H = chi (Jx Jy + Jy Jx).
//!
//! For any integer or half-integer total angular momentum J, the full
//! spectrum and eigenstates come from the zeros of extended Heine-Stieltjes
//! polynomials: each solution sector (k, nu_a, nu_b) reduces to a
//! (k+1)-dimensional tridiagonal eigenproblem whose eigenvalues are the Van
//! Vleck constants g0 and whose eigenvectors are the polynomial
//! coefficients. Every result is cross-checked against direct dense
//! diagonalization of the (2J+1)-dimensional matrix.
//!
//! ```
//! use tacs::{solve_spectrum, HalfInt};
//!
//! let j: HalfInt = "5/2".parse().unwrap();
//! let spectrum = solve_spectrum(j).unwrap();
//! let energies = spectrum.energies();
//! assert_eq!(energies.len(), 6);
//! // Doubly degenerate levels at -sqrt(28), 0, +sqrt(28) (in units of chi).
//! assert!((energies[0] + 5.2915).abs() < 1e-4);
//! assert!(energies[2].abs() < 1e-10);
//! ```
//!
//! The library splits into small modules:
//!
//! - [`halfint`]: exact half-integer J and M bookkeeping
//! - [`model`]: coupling constants, sectors and per-sector configuration
//! - [`operator`]: Hamiltonian matrices and the diagonalization oracle
//! - [`solver`]: the tridiagonal Van Vleck eigenproblem and level energies
//! - [`roots`]: Bethe roots, Bethe-equation and Fuchsian-ODE residuals
//! - [`states`]: eigenvector reconstruction in the |J,M> basis
//! - [`bands`]: degeneracy pairing, mirror symmetry, yrast/yrare bands

pub mod bands;
pub mod error;
pub mod halfint;
pub mod model;
pub mod operator;
pub mod roots;
pub mod solver;
pub mod states;

pub use bands::{check_mirror_symmetry, extract_bands, pair_degeneracies, quadratic_fit, Band, Parity, QuadraticFit};
pub use error::{Error, Result};
pub use halfint::HalfInt;
pub use model::{enumerate_sectors, ModelConfig, Sector, C1, C1_INV_SQ, C2, LAMBDA};
pub use operator::{build_hamiltonian, diagonalize, spectra_equivalent, Form, OperatorMatrix, OracleSpectrum};
pub use roots::{bethe_residual, classify_zeros, fuchsian_residual, polynomial_zeros, ZeroSet};
pub use solver::{
    build_tridiagonal, energy_from_coeffs, energy_from_zeros, solve_sector, solve_spectrum,
    solve_vanvleck, HsPolynomial, Level, Spectrum,
};
pub use states::{b_rho_coeffs, overlap_matrix, state_amplitudes, verify_state, StateVector};
