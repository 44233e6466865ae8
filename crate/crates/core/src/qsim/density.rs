// Copyright 2026 The blindlattice Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::state::StateVector;
use super::{QsimError, MATRIX_TOL};

/// Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    m: DMatrix<Complex64>,
}

/// Eigenvalues below this are treated as a PSD violation.
const PSD_TOL: f64 = -1e-10;

impl DensityMatrix {
    pub fn from_pure(state: &StateVector) -> DensityMatrix {
        let a = state.amplitudes();
        let d = a.len();
        DensityMatrix {
            m: DMatrix::from_fn(d, d, |i, j| a[i] * a[j].conj()),
        }
    }

    /// `I/dim`.
    pub fn maximally_mixed(dim: usize) -> DensityMatrix {
        let w = Complex64::new(1.0 / dim as f64, 0.0);
        DensityMatrix {
            m: DMatrix::from_diagonal_element(dim, dim, w),
        }
    }

    /// Validates and wraps row-major `entries`.
    pub fn from_entries(dim: usize, entries: Vec<Complex64>) -> Result<DensityMatrix, QsimError> {
        if entries.len() != dim * dim || dim == 0 {
            return Err(QsimError::DimMismatch {
                left: entries.len(),
                right: dim * dim,
            });
        }
        let rho = DensityMatrix {
            m: DMatrix::from_row_slice(dim, dim, &entries),
        };
        rho.validate()?;
        Ok(rho)
    }

    /// Convex combination `Σ w_i |ψ_i⟩⟨ψ_i|`, validated.
    pub fn mixture<'a, I>(terms: I) -> Result<DensityMatrix, QsimError>
    where
        I: IntoIterator<Item = (f64, &'a StateVector)>,
    {
        let mut acc: Option<DMatrix<Complex64>> = None;
        for (w, psi) in terms {
            let term = DensityMatrix::from_pure(psi).m * Complex64::new(w, 0.0);
            acc = Some(match acc {
                None => term,
                Some(sum) => {
                    if sum.nrows() != term.nrows() {
                        return Err(QsimError::DimMismatch {
                            left: sum.nrows(),
                            right: term.nrows(),
                        });
                    }
                    sum + term
                }
            });
        }
        let m = acc.ok_or(QsimError::InvalidDensity("empty mixture"))?;
        let rho = DensityMatrix { m };
        rho.validate()?;
        Ok(rho)
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.m[(row, col)]
    }

    pub fn trace(&self) -> Complex64 {
        self.m.trace()
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.m)
    }

    /// Largest `|ρ_ij − σ_ij|`.
    pub fn max_abs_deviation(&self, other: &DensityMatrix) -> Result<f64, QsimError> {
        self.check_dim(other)?;
        Ok((&self.m - &other.m).iter().map(|z| z.norm()).fold(0.0, f64::max))
    }

    fn validate(&self) -> Result<(), QsimError> {
        if self.m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(QsimError::InvalidDensity("non-finite entry"));
        }
        let herm_defect = (&self.m - self.m.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if herm_defect > MATRIX_TOL {
            return Err(QsimError::InvalidDensity("not Hermitian"));
        }
        if (self.trace() - Complex64::new(1.0, 0.0)).norm() > MATRIX_TOL {
            return Err(QsimError::InvalidDensity("trace is not 1"));
        }
        if self.eigenvalues().first().is_some_and(|&l| l < PSD_TOL) {
            return Err(QsimError::InvalidDensity("not positive semidefinite"));
        }
        Ok(())
    }

    fn check_dim(&self, other: &DensityMatrix) -> Result<(), QsimError> {
        if self.dim() != other.dim() {
            return Err(QsimError::DimMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(())
    }
}

fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    // symmetrize away rounding noise before the Hermitian solver
    let h = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// `½‖a − b‖₁`, computed from the eigenvalues of the Hermitian difference.
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64, QsimError> {
    a.check_dim(b)?;
    let diff = &a.m - &b.m;
    Ok(0.5 * hermitian_eigenvalues(&diff).iter().map(|l| l.abs()).sum::<f64>())
}
