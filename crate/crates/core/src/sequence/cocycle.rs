use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{spectral_norm, Matrix};

/// Norm applied to cocycle products.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormKind {
    /// Sum of all entries, i.e. `1ᵀ A 1`.
    #[default]
    EntrySum,
    /// Largest singular value.
    OperatorTwo,
}

impl NormKind {
    pub(crate) fn apply(self, data: &[f64], dim: usize) -> f64 {
        match self {
            NormKind::EntrySum => data.iter().sum(),
            NormKind::OperatorTwo => spectral_norm(data, dim),
        }
    }
}

/// One strictly positive `d x d` matrix per symbol.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixCocycle {
    dim: usize,
    matrices: Vec<Matrix>,
    norm: NormKind,
}

impl MatrixCocycle {
    pub fn new(matrices: Vec<Matrix>, norm: NormKind) -> Result<Self> {
        let first = matrices
            .first()
            .ok_or_else(|| Error::InvalidCocycle("no matrices given".into()))?;
        let dim = first.dim();
        if dim == 0 {
            return Err(Error::InvalidCocycle("dimension must be at least 1".into()));
        }
        for (a, m) in matrices.iter().enumerate() {
            if m.dim() != dim {
                return Err(Error::InvalidCocycle(format!(
                    "matrix for symbol {a} is {}x{}, expected {dim}x{dim}",
                    m.dim(),
                    m.dim()
                )));
            }
            for i in 0..dim {
                for j in 0..dim {
                    let v = m.get(i, j);
                    if !v.is_finite() {
                        return Err(Error::InvalidCocycle(format!(
                            "matrix for symbol {a} is not square or has a non-finite entry at ({i},{j})"
                        )));
                    }
                    if v <= 0.0 {
                        return Err(Error::InvalidCocycle(format!(
                            "strict positivity required: entry ({i},{j}) of the matrix for symbol {a} is {v}"
                        )));
                    }
                }
            }
        }
        Ok(Self {
            dim,
            matrices,
            norm,
        })
    }

    /// Builds from nested rows, one `d x d` block per symbol.
    pub fn from_rows(blocks: &[Vec<Vec<f64>>], norm: NormKind) -> Result<Self> {
        let mut matrices = Vec::with_capacity(blocks.len());
        for (a, rows) in blocks.iter().enumerate() {
            matrices.push(Matrix::from_rows(rows).ok_or_else(|| {
                Error::InvalidCocycle(format!("matrix for symbol {a} is not square"))
            })?);
        }
        Self::new(matrices, norm)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.matrices
    }

    pub fn norm(&self) -> NormKind {
        self.norm
    }

    pub fn symbol_count(&self) -> usize {
        self.matrices.len()
    }

    /// `M_{w_1} ⋯ M_{w_n}`.
    pub fn product(&self, word: &[u8]) -> Matrix {
        word.iter().fold(Matrix::identity(self.dim), |acc, &a| {
            acc.mul(&self.matrices[a as usize])
        })
    }

    /// `log ‖M_{w_1} ⋯ M_{w_n}‖`.
    pub fn log_norm(&self, word: &[u8]) -> f64 {
        self.norm.apply(self.product(word).entries(), self.dim).ln()
    }

    /// `Σ_a M_a`.
    pub fn symbol_sum(&self) -> Matrix {
        self.matrices
            .iter()
            .skip(1)
            .fold(self.matrices[0].clone(), |acc, m| acc.add(m))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair() -> MatrixCocycle {
        MatrixCocycle::from_rows(
            &[
                vec![vec![2.0, 1.0], vec![1.0, 1.0]],
                vec![vec![1.0, 1.0], vec![1.0, 2.0]],
            ],
            NormKind::EntrySum,
        )
        .unwrap()
    }

    #[test]
    fn log_norms() {
        let c = MatrixCocycle::from_rows(&[vec![vec![2.0]], vec![vec![3.0]]], NormKind::EntrySum).unwrap();
        assert!((c.log_norm(&[0, 1]) - 6f64.ln()).abs() < 1e-15);
        // [[3,4],[2,3]] sums to 12.
        assert!((pair().log_norm(&[0, 1]) - 12f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn rejects_zero_and_ragged_entries() {
        let err = MatrixCocycle::from_rows(
            &[vec![vec![1.0, 0.0], vec![1.0, 1.0]], vec![vec![1.0, 1.0], vec![1.0, 1.0]]],
            NormKind::EntrySum,
        )
        .unwrap_err();
        assert!(err.to_string().contains("strict positivity"), "{err}");
        assert!(MatrixCocycle::from_rows(&[vec![vec![1.0, 1.0]]], NormKind::EntrySum).is_err());
        assert!(MatrixCocycle::from_rows(
            &[vec![vec![1.0]], vec![vec![1.0, 1.0], vec![1.0, 1.0]]],
            NormKind::EntrySum
        )
        .is_err());
    }
}
