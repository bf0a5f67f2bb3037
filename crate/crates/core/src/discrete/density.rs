use std::io::Write;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{invalid, Error, Result};

use super::ModularState;

const HERMITIAN_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-10;
const EIGEN_TOL: f64 = 1e-9;

/// Density operator of a single `Z_n` variable.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: DMatrix<Complex64>,
}

impl DensityOperator {
    /// Validates hermiticity, unit trace and positivity.
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() || matrix.nrows() == 0 {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                found: matrix.ncols(),
            });
        }
        let herm = (&matrix - matrix.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if herm > HERMITIAN_TOL {
            return Err(invalid("rho", format!("not Hermitian (deviation {herm:e})")));
        }
        let tr = matrix.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > TRACE_TOL {
            return Err(invalid("rho", format!("trace is {tr}, expected 1")));
        }
        let sym = (&matrix + matrix.adjoint()) * Complex64::new(0.5, 0.0);
        let min_eig = sym.symmetric_eigenvalues().iter().cloned().fold(f64::INFINITY, f64::min);
        if min_eig < -EIGEN_TOL {
            return Err(invalid("rho", format!("negative eigenvalue {min_eig}")));
        }
        Ok(Self { matrix })
    }

    pub fn pure(psi: &ModularState) -> Result<Self> {
        if psi.k() != 1 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: psi.k(),
            });
        }
        let v = nalgebra::DVector::from_column_slice(psi.amps());
        Self::new(&v * v.adjoint())
    }

    pub fn maximally_mixed(n: usize) -> Self {
        Self {
            matrix: DMatrix::identity(n, n) * Complex64::new(1.0 / n as f64, 0.0),
        }
    }

    /// Reduced state of one variable of a pure multi-variable state.
    pub fn reduced(psi: &ModularState, variable: usize) -> Result<Self> {
        if variable >= psi.k() {
            return Err(Error::OutOfRange {
                index: variable,
                limit: psi.k(),
            });
        }
        let mut order: Vec<usize> = vec![variable];
        order.extend((0..psi.k()).filter(|&v| v != variable));
        let moved = psi.reorder_variables(&order)?;
        let n = psi.n();
        let rest = psi.amps().len() / n;
        // row i holds the amplitudes with the kept variable equal to i
        let m = DMatrix::from_row_slice(n, rest, moved.amps());
        Self::new(&m * m.adjoint())
    }

    pub fn n(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    /// `⟨ψ|ρ|ψ⟩`.
    pub fn fidelity(&self, psi: &ModularState) -> Result<f64> {
        if psi.k() != 1 || psi.n() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                found: psi.amps().len(),
            });
        }
        let v = nalgebra::DVector::from_column_slice(psi.amps());
        let z = (v.adjoint() * &self.matrix * &v)[(0, 0)];
        Ok(z.re)
    }

    pub fn max_abs_diff(&self, other: &DensityOperator) -> Result<f64> {
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                found: other.n(),
            });
        }
        Ok((&self.matrix - &other.matrix).iter().map(|z| z.norm()).fold(0.0, f64::max))
    }

    /// CSV `row,col,re,im` listing entries with modulus above 1e-14.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "row,col,re,im")?;
        for r in 0..self.n() {
            for c in 0..self.n() {
                let z = self.matrix[(r, c)];
                if z.norm() > 1e-14 {
                    writeln!(out, "{r},{c},{:e},{:e}", z.re, z.im)?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discrete::bell_state;

    #[test]
    fn bell_marginals_are_maximally_mixed() {
        for n in [2, 4, 5] {
            for (a, b) in [(0, 0), (1, n - 1), (n - 1, 1)] {
                let s = bell_state(n, a, b).unwrap();
                for v in 0..2 {
                    let rho = DensityOperator::reduced(&s, v).unwrap();
                    let d = rho.max_abs_diff(&DensityOperator::maximally_mixed(n)).unwrap();
                    assert!(d < 1e-14);
                }
            }
        }
    }

    #[test]
    fn fidelity_examples() {
        let mut rng = rand::rng();
        let psi = ModularState::random(&mut rng, 6, 1).unwrap();
        let rho = DensityOperator::pure(&psi).unwrap();
        assert!((rho.fidelity(&psi).unwrap() - 1.0).abs() < 1e-12);
        let mixed = DensityOperator::maximally_mixed(6);
        assert!((mixed.fidelity(&psi).unwrap() - 1.0 / 6.0).abs() < 1e-12);
        assert!(mixed.fidelity(&ModularState::basis(5, &[0]).unwrap()).is_err());
    }

    #[test]
    fn validation() {
        let bad = DMatrix::from_row_slice(2, 2, &[
            Complex64::new(0.5, 0.0), Complex64::new(0.1, 0.0),
            Complex64::new(0.2, 0.0), Complex64::new(0.5, 0.0),
        ]);
        assert!(DensityOperator::new(bad).is_err());
        let neg = DMatrix::from_row_slice(2, 2, &[
            Complex64::new(1.5, 0.0), Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0), Complex64::new(-0.5, 0.0),
        ]);
        assert!(DensityOperator::new(neg).is_err());
    }

    #[test]
    fn csv_lists_nonzero_entries() {
        let rho = DensityOperator::pure(&ModularState::basis(3, &[1]).unwrap()).unwrap();
        let mut buf = Vec::new();
        rho.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "row,col,re,im\n1,1,1e0,0e0\n");
    }
}
