//! Angular-momentum matrices, the two-axis countertwisting Hamiltonian in
//! its original and rotated forms, and a dense Hermitian diagonalization
//! oracle used as ground truth for the polynomial solver.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::halfint::HalfInt;

/// Which frame the Hamiltonian matrix is written in.
///
/// `Original` is chi (Jx Jy + Jy Jx) = (chi / 2i)(J+^2 - J-^2).
/// `RotatedTa` is the Euler-rotated, real symmetric form
/// chi ( (J+^2 + J-^2)/4 + C2/2 - (3/2) J0^2 ).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Form {
    Original,
    RotatedTa,
}

/// Hamiltonian matrix over the descending-M basis |J,J>, |J,J-1>, ..., |J,-J>.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    pub j: HalfInt,
    pub form: Form,
    pub chi: f64,
    entries: DMatrix<Complex64>,
}

/// <M+1|J+|M> = sqrt(J(J+1) - M(M+1)) in units of hbar.
fn raising_elem(j: f64, m: f64) -> f64 {
    (j * (j + 1.0) - m * (m + 1.0)).max(0.0).sqrt()
}

/// Builds the (2J+1)-dimensional Hamiltonian matrix in the requested form.
pub fn build_hamiltonian(j: HalfInt, form: Form, chi: f64) -> Result<OperatorMatrix> {
    if j.twice() < 0 {
        return Err(Error::NegativeJ(j.twice()));
    }
    let dim = j.multiplet_dim();
    let jv = j.value();
    let ms: Vec<f64> = j.multiplet().map(|m| m.value()).collect();
    let mut h = DMatrix::<Complex64>::zeros(dim, dim);

    for (col, &m) in ms.iter().enumerate() {
        // J+^2 couples M -> M+2, i.e. column col to row col-2.
        let up = raising_elem(jv, m) * raising_elem(jv, m + 1.0);
        match form {
            Form::Original => {
                // (chi / 2i)(J+^2 - J-^2); J-^2 entries follow by Hermiticity.
                if col >= 2 && up > 0.0 {
                    let v = Complex64::new(0.0, -chi * up / 2.0);
                    h[(col - 2, col)] = v;
                    h[(col, col - 2)] = v.conj();
                }
            }
            Form::RotatedTa => {
                h[(col, col)] = Complex64::new(chi * (0.5 * jv * (jv + 1.0) - 1.5 * m * m), 0.0);
                if col >= 2 && up > 0.0 {
                    let v = Complex64::new(chi * up / 4.0, 0.0);
                    h[(col - 2, col)] = v;
                    h[(col, col - 2)] = v;
                }
            }
        }
    }
    Ok(OperatorMatrix { j, form, chi, entries: h })
}

impl OperatorMatrix {
    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    /// The real part of the matrix; exact for the RotatedTa form, whose
    /// entries are real by construction.
    pub fn real_entries(&self) -> DMatrix<f64> {
        self.entries.map(|z| z.re)
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.trace()
    }

    fn hermiticity_defect(&self) -> f64 {
        let h = &self.entries;
        let mut defect = 0.0f64;
        for i in 0..h.nrows() {
            for k in 0..h.ncols() {
                defect = defect.max((h[(i, k)] - h[(k, i)].conj()).norm());
            }
        }
        defect
    }
}

/// Eigenvalues and eigenvectors from direct dense diagonalization.
#[derive(Debug, Clone)]
pub struct OracleSpectrum {
    /// Ascending eigenvalues in units of chi.
    pub energies: Vec<f64>,
    /// Columns aligned with `energies`, orthonormal.
    pub eigenvectors: DMatrix<Complex64>,
}

/// Dense Hermitian diagonalization. Input must be Hermitian to 1e-12 on the
/// scale of its largest entry; the matrices here are built analytically, so
/// a violation is a construction bug.
pub fn diagonalize(h: &OperatorMatrix) -> Result<OracleSpectrum> {
    let scale = h.entries.iter().map(|z| z.norm()).fold(1.0f64, f64::max);
    let tol = 1e-12 * scale;
    let defect = h.hermiticity_defect();
    if defect > tol {
        return Err(Error::NotHermitian { defect, tol });
    }

    let eig = h.entries.clone().symmetric_eigen();
    let dim = h.dim();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let energies: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = DMatrix::<Complex64>::zeros(dim, dim);
    for (col, &i) in order.iter().enumerate() {
        vectors.set_column(col, &eig.eigenvectors.column(i));
    }
    Ok(OracleSpectrum { energies, eigenvectors: vectors })
}

impl OracleSpectrum {
    /// Max residual ||H v - E v|| over columns, for diagnostics.
    pub fn max_residual(&self, h: &OperatorMatrix) -> f64 {
        let mut worst = 0.0f64;
        for (col, &e) in self.energies.iter().enumerate() {
            let v: DVector<Complex64> = self.eigenvectors.column(col).into();
            let r = h.entries() * &v - v * Complex64::new(e, 0.0);
            worst = worst.max(r.norm());
        }
        worst
    }
}

/// True when the two sorted energy multisets agree within tol * scale,
/// scale = max(1, max |E|).
pub fn spectra_equivalent(a: &OracleSpectrum, b: &OracleSpectrum, tol: f64) -> Result<bool> {
    if a.energies.len() != b.energies.len() {
        return Err(Error::DimensionMismatch(a.energies.len(), b.energies.len()));
    }
    let scale = a
        .energies
        .iter()
        .chain(&b.energies)
        .fold(1.0f64, |acc, &e| acc.max(e.abs()));
    Ok(a.energies
        .iter()
        .zip(&b.energies)
        .all(|(&x, &y)| (x - y).abs() <= tol * scale))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn j_half_is_zero_matrix() {
        for form in [Form::Original, Form::RotatedTa] {
            let h = build_hamiltonian(HalfInt::from_twice(1), form, 1.0).unwrap();
            // J=1/2: J+^2 vanishes and J(J+1)/2 = 3 M^2 on both M values.
            assert!(h.entries().iter().all(|z| z.norm() < 1e-14));
        }
    }

    #[test]
    fn j_three_halves_rotated_even_block() {
        // Even-M-parity block couples M = 3/2 and M = -1/2:
        // [[-3/2, sqrt(3)/2], [sqrt(3)/2, 3/2]], eigenvalues +-sqrt(3).
        let h = build_hamiltonian(HalfInt::from_twice(3), Form::RotatedTa, 1.0).unwrap();
        let m = h.real_entries();
        assert_abs_diff_eq!(m[(0, 0)], -1.5, epsilon = 1e-14);
        assert_abs_diff_eq!(m[(2, 2)], 1.5, epsilon = 1e-14);
        assert_abs_diff_eq!(m[(0, 2)], 3f64.sqrt() / 2.0, epsilon = 1e-14);
        let spec = diagonalize(&h).unwrap();
        let s3 = 3f64.sqrt();
        for (got, want) in spec.energies.iter().zip([-s3, -s3, s3, s3]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-12);
        }
    }

    #[test]
    fn j_three_halves_original_spectrum() {
        let h = build_hamiltonian(HalfInt::from_twice(3), Form::Original, 1.0).unwrap();
        let spec = diagonalize(&h).unwrap();
        let s3 = 3f64.sqrt();
        for (got, want) in spec.energies.iter().zip([-s3, -s3, s3, s3]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-12);
        }
    }

    #[test]
    fn j_five_halves_original_spectrum() {
        let h = build_hamiltonian(HalfInt::from_twice(5), Form::Original, 1.0).unwrap();
        let spec = diagonalize(&h).unwrap();
        let want = [-5.2915, -5.2915, 0.0, 0.0, 5.2915, 5.2915];
        for (got, w) in spec.energies.iter().zip(want) {
            assert_abs_diff_eq!(*got, w, epsilon = 1e-4);
        }
    }

    #[test]
    fn j_one_original_spectrum() {
        // 3x3 with a single off-diagonal pair of magnitude 1.
        let h = build_hamiltonian(HalfInt::from_int(1), Form::Original, 1.0).unwrap();
        let spec = diagonalize(&h).unwrap();
        for (got, want) in spec.energies.iter().zip([-1.0, 0.0, 1.0]) {
            assert_abs_diff_eq!(*got, want, epsilon = 1e-12);
        }
    }

    #[test]
    fn j_21_2_ground_energy() {
        let h = build_hamiltonian(HalfInt::from_twice(21), Form::Original, 1.0).unwrap();
        let spec = diagonalize(&h).unwrap();
        assert_abs_diff_eq!(spec.energies[0], -105.948, epsilon = 105.948 * 1e-4);
    }

    #[test]
    fn forms_equivalent_and_antisymmetric() {
        for twice_j in 1..=41 {
            let j = HalfInt::from_twice(twice_j);
            let a = diagonalize(&build_hamiltonian(j, Form::Original, 1.0).unwrap()).unwrap();
            let b = diagonalize(&build_hamiltonian(j, Form::RotatedTa, 1.0).unwrap()).unwrap();
            assert!(spectra_equivalent(&a, &b, 1e-10).unwrap(), "forms differ at 2J={twice_j}");

            // Rotation by pi/2 about z maps H -> -H, so the spectrum is
            // symmetric under negation.
            let mut negated: Vec<f64> = a.energies.iter().map(|e| -e).collect();
            negated.sort_by(f64::total_cmp);
            let neg = OracleSpectrum { energies: negated, eigenvectors: a.eigenvectors.clone() };
            assert!(spectra_equivalent(&a, &neg, 1e-10).unwrap(), "not antisymmetric at 2J={twice_j}");
        }
    }

    #[test]
    fn half_integer_double_degeneracy() {
        for twice_j in (1..=41).step_by(2) {
            let j = HalfInt::from_twice(twice_j);
            let spec = diagonalize(&build_hamiltonian(j, Form::Original, 1.0).unwrap()).unwrap();
            let scale = spec.energies.iter().fold(1.0f64, |a, &e| a.max(e.abs()));
            for pair in spec.energies.chunks(2) {
                assert!((pair[0] - pair[1]).abs() < 1e-8 * scale, "2J={twice_j}");
            }
        }
    }

    #[test]
    fn traceless_and_residuals() {
        for twice_j in [1, 2, 7, 20, 41] {
            let j = HalfInt::from_twice(twice_j);
            for form in [Form::Original, Form::RotatedTa] {
                let h = build_hamiltonian(j, form, 1.0).unwrap();
                let scale = h.entries().iter().map(|z| z.norm()).fold(1.0f64, f64::max);
                assert!(h.trace().norm() < 1e-12 * scale);
                let spec = diagonalize(&h).unwrap();
                let emax = spec.energies.iter().fold(1.0f64, |a, &e| a.max(e.abs()));
                assert!(spec.max_residual(&h) < 1e-10 * emax);
            }
        }
    }

    #[test]
    fn rotated_blocks_share_spectrum_for_half_integer() {
        // RotatedTa couples M to M+-2 only, so the two M-parity chains are
        // independent; for half-integer J they must have identical spectra.
        let j = HalfInt::from_twice(9);
        let h = build_hamiltonian(j, Form::RotatedTa, 1.0).unwrap();
        let m = h.real_entries();
        let dim = h.dim();
        let even: Vec<usize> = (0..dim).step_by(2).collect();
        let odd: Vec<usize> = (1..dim).step_by(2).collect();
        let sub = |idx: &[usize]| {
            let n = idx.len();
            DMatrix::<f64>::from_fn(n, n, |r, c| m[(idx[r], idx[c])])
        };
        for (r, c) in (0..dim).flat_map(|r| (0..dim).map(move |c| (r, c))) {
            if (r % 2) != (c % 2) {
                assert_eq!(m[(r, c)], 0.0);
            }
        }
        let mut ev_even = sub(&even).symmetric_eigen().eigenvalues.as_slice().to_vec();
        let mut ev_odd = sub(&odd).symmetric_eigen().eigenvalues.as_slice().to_vec();
        ev_even.sort_by(f64::total_cmp);
        ev_odd.sort_by(f64::total_cmp);
        for (a, b) in ev_even.iter().zip(&ev_odd) {
            assert_abs_diff_eq!(*a, *b, epsilon = 1e-10);
        }
    }

    #[test]
    fn rejects_negative_j() {
        assert!(build_hamiltonian(HalfInt::from_twice(-3), Form::Original, 1.0).is_err());
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut h = build_hamiltonian(HalfInt::from_int(2), Form::Original, 1.0).unwrap();
        h.entries[(0, 2)] += Complex64::new(1e-6, 0.0);
        assert!(matches!(diagonalize(&h), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn spectra_equivalent_dimension_mismatch() {
        let a = diagonalize(&build_hamiltonian(HalfInt::from_int(1), Form::Original, 1.0).unwrap()).unwrap();
        let b = diagonalize(&build_hamiltonian(HalfInt::from_int(2), Form::Original, 1.0).unwrap()).unwrap();
        assert!(spectra_equivalent(&a, &b, 1e-10).is_err());
    }
}
