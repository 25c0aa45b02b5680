use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::rational::Rational;

use super::complex::GaussianRational;

/// A square matrix over the Gaussian rationals, in row-major storage.
/// Equality is entrywise and exact.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    dim: usize,
    entries: Vec<GaussianRational>,
}

impl Matrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "matrix dimension must be positive");
        Matrix {
            dim,
            entries: vec![GaussianRational::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Matrix::zeros(dim);
        for i in 0..dim {
            m.set(i, i, GaussianRational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<GaussianRational>>) -> Result<Self, String> {
        let dim = rows.len();
        if dim == 0 {
            return Err("matrix must have at least one row".to_string());
        }
        if rows.iter().any(|r| r.len() != dim) {
            return Err(format!("matrix is not square ({dim} rows)"));
        }
        Ok(Matrix {
            dim,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Convenience constructor from integer entries.
    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&n| GaussianRational::from_int(n)).collect())
                .collect(),
        )
        .expect("square integer matrix")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> &GaussianRational {
        &self.entries[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: GaussianRational) {
        self.entries[row * self.dim + col] = value;
    }

    pub fn rows(&self) -> impl Iterator<Item = &[GaussianRational]> {
        self.entries.chunks(self.dim)
    }

    pub fn scale(&self, factor: &Rational) -> Matrix {
        Matrix {
            dim: self.dim,
            entries: self.entries.iter().map(|e| e.scale(factor)).collect(),
        }
    }

    pub fn adjoint(&self) -> Matrix {
        let mut out = Matrix::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn trace(&self) -> GaussianRational {
        let mut t = GaussianRational::zero();
        for i in 0..self.dim {
            t += self.get(i, i);
        }
        t
    }

    pub fn kron(&self, other: &Matrix) -> Matrix {
        let dim = self.dim * other.dim;
        let mut out = Matrix::zeros(dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.dim {
                    for l in 0..other.dim {
                        let b = other.get(k, l);
                        if b.is_zero() {
                            continue;
                        }
                        out.set(i * other.dim + k, j * other.dim + l, a * b);
                    }
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn is_hermitian(&self) -> bool {
        *self == self.adjoint()
    }

    /// Exact projection test: hermitian and idempotent.
    pub fn is_projection(&self) -> bool {
        self.is_hermitian() && *self == self * self
    }

    pub fn commutes_with(&self, other: &Matrix) -> bool {
        self.dim == other.dim && self * other == other * self
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in matrix product");
        let mut out = Matrix::zeros(self.dim);
        for i in 0..self.dim {
            for k in 0..self.dim {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..self.dim {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let mut cur = out.get(i, j).clone();
                    cur += &(a * b);
                    out.set(i, j, cur);
                }
            }
        }
        out
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in matrix sum");
        Matrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in matrix difference");
        Matrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        Matrix {
            dim: self.dim,
            entries: self.entries.iter().map(|e| -e).collect(),
        }
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.dim, self.dim)?;
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(|e| e.to_string()).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

/// The four Pauli matrices (and the 2x2 identity).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

pub fn pauli(which: Pauli) -> Matrix {
    match which {
        Pauli::I => Matrix::identity(2),
        Pauli::X => Matrix::from_int_rows(&[&[0, 1], &[1, 0]]),
        Pauli::Z => Matrix::from_int_rows(&[&[1, 0], &[0, -1]]),
        Pauli::Y => {
            let mut m = Matrix::zeros(2);
            m.set(0, 1, &GaussianRational::zero() - &GaussianRational::i());
            m.set(1, 0, GaussianRational::i());
            m
        }
    }
}

/// Tensor product of two Pauli matrices, the building block of the built-in
/// two-qubit scenarios.
pub fn pauli_pair(first: Pauli, second: Pauli) -> Matrix {
    pauli(first).kron(&pauli(second))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_algebra() {
        let x = pauli(Pauli::X);
        let y = pauli(Pauli::Y);
        let z = pauli(Pauli::Z);
        assert_eq!(&x * &x, Matrix::identity(2));
        assert_eq!(&y * &y, Matrix::identity(2));
        assert_eq!(&z * &z, Matrix::identity(2));
        // ZX = -XZ
        assert_eq!(&z * &x, -&(&x * &z));
        // XY = iZ
        let i_z = {
            let mut m = Matrix::zeros(2);
            m.set(0, 0, GaussianRational::i());
            m.set(
                1,
                1,
                &GaussianRational::zero() - &GaussianRational::i(),
            );
            m
        };
        assert_eq!(&x * &y, i_z);
    }

    #[test]
    fn kron_and_trace() {
        let zz = pauli_pair(Pauli::Z, Pauli::Z);
        assert_eq!(zz.dim(), 4);
        assert_eq!(zz.trace(), GaussianRational::zero());
        assert_eq!(Matrix::identity(4).trace(), GaussianRational::from_int(4));
    }

    #[test]
    fn projection_test() {
        let z = pauli(Pauli::Z);
        let p_plus = (&Matrix::identity(2) + &z).scale(&Rational::new(1, 2));
        assert!(p_plus.is_projection());
        assert!(!z.commutes_with(&pauli(Pauli::X)));
        assert!(z.commutes_with(&Matrix::identity(2)));
        assert!(!pauli(Pauli::Y).is_projection());
    }
}
