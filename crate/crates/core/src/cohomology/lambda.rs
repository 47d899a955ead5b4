use std::collections::HashMap;

use serde::Serialize;

use crate::error::Result;
use crate::exactlin::{QMatrix, Rational};
use crate::multiindex::{enumerate, MultiIndex};
use crate::params::ParamSpace;

/// `Λ_i^j = (j+1)(j+2λᵢ)`.
pub fn lambda_entry(j: u32, lambda_i: &Rational) -> Rational {
    let j = Rational::from_integer(j.into());
    (&j + Rational::from_integer(1.into())) * (j + lambda_i * Rational::from_integer(2.into()))
}

/// The constraint matrix linking level `k−1` (rows) to level `k` (columns).
///
/// Entry `(β, βⁱ)` is `(βᵢ+1)(βᵢ+2λᵢ)`; all other entries vanish. Rows and
/// columns are in descending lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LambdaMatrix {
    pub k: u32,
    pub rows: Vec<MultiIndex>,
    pub cols: Vec<MultiIndex>,
    pub matrix: QMatrix,
}

impl LambdaMatrix {
    pub fn column_of(&self, alpha: &MultiIndex) -> Option<usize> {
        self.cols.iter().position(|c| c == alpha)
    }

    pub fn row_of(&self, beta: &MultiIndex) -> Option<usize> {
        self.rows.iter().position(|r| r == beta)
    }
}

pub fn build_lambda_matrix(params: &ParamSpace, k: u32) -> Result<LambdaMatrix> {
    let n = params.n();
    let cols = enumerate(n, k)?;
    if k == 0 {
        return Ok(LambdaMatrix {
            k,
            rows: Vec::new(),
            matrix: QMatrix::zeros(0, cols.len()),
            cols,
        });
    }
    let rows = enumerate(n, k - 1)?;
    let col_index: HashMap<&MultiIndex, usize> = cols.iter().enumerate().map(|(j, c)| (c, j)).collect();
    let mut matrix = QMatrix::zeros(rows.len(), cols.len());
    for (r, beta) in rows.iter().enumerate() {
        for i in 1..=n {
            let target = beta.raise(i)?;
            let c = col_index[&target];
            matrix.set(r, c, lambda_entry(beta.get(i).unwrap(), params.lambda_at(i)));
        }
    }
    Ok(LambdaMatrix { k, rows, cols, matrix })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::rank;

    fn mi(v: &[u32]) -> MultiIndex {
        MultiIndex::new(v.to_vec())
    }

    #[test]
    fn two_slot_half_weights() {
        let p = ParamSpace::parse("1/2,1/2", "3").unwrap();
        let l = build_lambda_matrix(&p, 2).unwrap();
        assert_eq!(l.rows, vec![mi(&[1, 0]), mi(&[0, 1])]);
        assert_eq!(l.cols, vec![mi(&[2, 0]), mi(&[1, 1]), mi(&[0, 2])]);
        assert_eq!(l.matrix, QMatrix::from_i64(&[&[4, 1, 0], &[0, 1, 4]]).unwrap());
    }

    #[test]
    fn scalar_cases() {
        let p = ParamSpace::parse("0", "1").unwrap();
        assert_eq!(build_lambda_matrix(&p, 1).unwrap().matrix, QMatrix::from_i64(&[&[0]]).unwrap());
        // n = 1, k = 2, λ = −1/2: entry 2·(1 − 1) = 0
        let p = ParamSpace::parse("-1/2", "3/2").unwrap();
        let l = build_lambda_matrix(&p, 2).unwrap();
        assert_eq!(l.matrix, QMatrix::from_i64(&[&[0]]).unwrap());
        assert_eq!(rank(&l.matrix), 0);
        // n = 1, k = 3, λ = −1: entry 3·(2 − 2) = 0
        let p = ParamSpace::parse("-1", "2").unwrap();
        assert_eq!(build_lambda_matrix(&p, 3).unwrap().matrix, QMatrix::from_i64(&[&[0]]).unwrap());
    }

    #[test]
    fn level_zero_is_empty() {
        let p = ParamSpace::parse("1,2,3", "6").unwrap();
        let l = build_lambda_matrix(&p, 0).unwrap();
        assert_eq!((l.matrix.rows(), l.matrix.cols()), (0, 1));
        assert_eq!(l.cols, vec![mi(&[0, 0, 0])]);
    }

    #[test]
    fn sparsity_bounds() {
        let p = ParamSpace::parse("1/3,-1/2,2", "9").unwrap();
        let l = build_lambda_matrix(&p, 4).unwrap();
        let mut per_row = vec![0; l.rows.len()];
        let mut per_col = vec![0; l.cols.len()];
        for (r, c) in l.matrix.nonzero_positions() {
            per_row[r] += 1;
            per_col[c] += 1;
        }
        assert!(per_row.iter().all(|&x| x <= 3));
        assert!(per_col.iter().all(|&x| x <= 3));
    }
}
