use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::QMatrix;
use super::rational::Rational;
use crate::error::{Error, Result};

/// Sparse primitive integer row: sorted `(column, value)` pairs, no zeros, content 1.
type IntRow = Vec<(usize, BigInt)>;

fn entry(row: &IntRow, col: usize) -> Option<&BigInt> {
    row.binary_search_by_key(&col, |(c, _)| *c)
        .ok()
        .map(|i| &row[i].1)
}

fn make_primitive(row: &mut IntRow) {
    let mut g = BigInt::zero();
    for (_, v) in row.iter() {
        g = g.gcd(v);
        if g.is_one() {
            return;
        }
    }
    if !g.is_zero() && !g.is_one() {
        for (_, v) in row.iter_mut() {
            *v /= &g;
        }
    }
}

/// Clears denominators of a rational row and removes the content.
fn integer_row(row: impl IntoIterator<Item = (usize, Rational)>) -> IntRow {
    let row: Vec<(usize, Rational)> = row.into_iter().filter(|(_, v)| !v.is_zero()).collect();
    let lcm = row
        .iter()
        .fold(BigInt::one(), |acc, (_, v)| acc.lcm(v.denom()));
    let mut out: IntRow = row
        .into_iter()
        .map(|(c, v)| (c, v.numer() * (&lcm / v.denom())))
        .collect();
    out.sort_by_key(|(c, _)| *c);
    make_primitive(&mut out);
    out
}

/// `pivot_coef · row − row_coef · pivot`, made primitive.
fn combine(row: &IntRow, pivot: &IntRow, col: usize) -> IntRow {
    let a = entry(row, col).expect("eliminated column present").clone();
    let b = entry(pivot, col).expect("pivot column present").clone();
    let g = a.gcd(&b);
    let (a, b) = (a / &g, b / &g);
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot.len() {
        let ci = row.get(i).map_or(usize::MAX, |e| e.0);
        let cj = pivot.get(j).map_or(usize::MAX, |e| e.0);
        let (c, v) = if ci < cj {
            i += 1;
            (ci, &b * &row[i - 1].1)
        } else if cj < ci {
            j += 1;
            (cj, -(&a * &pivot[j - 1].1))
        } else {
            i += 1;
            j += 1;
            (ci, &b * &row[i - 1].1 - &a * &pivot[j - 1].1)
        };
        if !v.is_zero() {
            out.push((c, v));
        }
    }
    make_primitive(&mut out);
    out
}

/// Reduced row echelon form kept in primitive integer rows.
///
/// Each pivot row has a positive pivot and zeros in every other pivot column.
#[derive(Clone, Debug)]
pub struct Echelon {
    cols: usize,
    rows: Vec<IntRow>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn of(m: &QMatrix) -> Echelon {
        let rows = (0..m.rows()).map(|r| m.row(r).iter().cloned().enumerate());
        Self::from_sparse(m.cols(), rows)
    }

    /// Gauss–Jordan over sparse rows given as `(column, value)` pairs.
    pub fn from_sparse<R, I>(cols: usize, rows: R) -> Echelon
    where
        R: IntoIterator<Item = I>,
        I: IntoIterator<Item = (usize, Rational)>,
    {
        let mut pending: Vec<IntRow> = rows
            .into_iter()
            .map(integer_row)
            .filter(|r| !r.is_empty())
            .collect();
        let mut done: Vec<IntRow> = Vec::new();
        let mut pivots = Vec::new();
        for col in 0..cols {
            if pending.is_empty() {
                break;
            }
            let Some(p) = pending.iter().position(|r| entry(r, col).is_some()) else {
                continue;
            };
            let mut pivot = pending.remove(p);
            if entry(&pivot, col).unwrap().is_negative() {
                for (_, v) in pivot.iter_mut() {
                    *v = -&*v;
                }
            }
            let mut next = Vec::with_capacity(pending.len());
            for row in pending.drain(..) {
                if entry(&row, col).is_some() {
                    let reduced = combine(&row, &pivot, col);
                    if !reduced.is_empty() {
                        next.push(reduced);
                    }
                } else {
                    next.push(row);
                }
            }
            pending = next;
            for row in done.iter_mut() {
                if entry(row, col).is_some() {
                    *row = combine(row, &pivot, col);
                }
            }
            // a Jordan step may flip the sign of an earlier pivot
            for (row, &pc) in done.iter_mut().zip(&pivots) {
                if entry(row, pc).unwrap().is_negative() {
                    for (_, v) in row.iter_mut() {
                        *v = -&*v;
                    }
                }
            }
            done.push(pivot);
            pivots.push(col);
        }
        Echelon {
            cols,
            rows: done,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Pivot row `j` scaled so the pivot entry is 1, as a dense rational row.
    pub fn reduced_row(&self, j: usize) -> Vec<Rational> {
        let row = &self.rows[j];
        let lead = entry(row, self.pivots[j]).unwrap().clone();
        let mut dense = vec![Rational::zero(); self.cols];
        for (c, v) in row {
            dense[*c] = Rational::new(v.clone(), lead.clone());
        }
        dense
    }

    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.cols).filter(|&c| !is_pivot[c]).collect()
    }

    /// Canonical nullspace basis: one vector per free column, in column order.
    pub fn kernel_basis(&self) -> Vec<Vec<Rational>> {
        let reduced: Vec<Vec<Rational>> = (0..self.rank()).map(|j| self.reduced_row(j)).collect();
        self.free_columns()
            .into_iter()
            .map(|f| {
                let mut v = vec![Rational::zero(); self.cols];
                v[f] = Rational::one();
                for (row, &p) in reduced.iter().zip(&self.pivots) {
                    v[p] = -row[f].clone();
                }
                primitive_vector(v)
            })
            .collect()
    }
}

/// Scales to integer entries with content 1 and a positive first nonzero entry.
fn primitive_vector(v: Vec<Rational>) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); v.len()];
    let ints = integer_row(v.into_iter().enumerate());
    let flip = ints.first().is_some_and(|(_, x)| x.is_negative());
    for (c, x) in ints {
        out[c] = Rational::from_integer(if flip { -x } else { x });
    }
    out
}

pub fn rank(m: &QMatrix) -> usize {
    Echelon::of(m).rank()
}

/// Basis of `{v : M v = 0}`; vectors are primitive integer vectors with a
/// positive leading entry, one per free column in column order.
pub fn kernel_basis(m: &QMatrix) -> Vec<Vec<Rational>> {
    Echelon::of(m).kernel_basis()
}

/// Basis of `{y : yᵀ M = 0}`.
pub fn left_kernel_basis(m: &QMatrix) -> Vec<Vec<Rational>> {
    kernel_basis(&m.transpose())
}

/// Outcome of [`solve_or_witness`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    /// `M x = b`, free variables set to zero.
    Solved(Vec<Rational>),
    /// `yᵀ M = 0` and `yᵀ b ≠ 0`.
    Inconsistent(Vec<Rational>),
}

pub fn solve_or_witness(m: &QMatrix, b: &[Rational]) -> Result<Solution> {
    if b.len() != m.rows() {
        return Err(Error::DimensionMismatch {
            expected: m.rows(),
            found: b.len(),
        });
    }
    let cols = m.cols();
    let augmented = (0..m.rows()).map(|r| {
        m.row(r)
            .iter()
            .cloned()
            .enumerate()
            .chain(std::iter::once((cols, b[r].clone())))
    });
    let ech = Echelon::from_sparse(cols + 1, augmented);
    if ech.pivots().last() == Some(&cols) {
        let y = left_kernel_basis(m)
            .into_iter()
            .find(|y| {
                y.iter()
                    .zip(b)
                    .fold(Rational::zero(), |acc, (a, c)| acc + a * c)
                    != Rational::zero()
            })
            .expect("inconsistent system has a separating left-kernel vector");
        return Ok(Solution::Inconsistent(y));
    }
    let mut x = vec![Rational::zero(); cols];
    for (j, &p) in ech.pivots().iter().enumerate() {
        x[p] = ech.reduced_row(j)[cols].clone();
    }
    Ok(Solution::Solved(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64) -> Rational {
        Rational::from_integer(p.into())
    }

    fn qv(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&QMatrix::from_i64(&[&[0]]).unwrap()), 0);
        assert_eq!(rank(&QMatrix::from_i64(&[&[1, 2], &[2, 4]]).unwrap()), 1);
        assert_eq!(rank(&QMatrix::zeros(0, 3)), 0);
        assert_eq!(rank(&QMatrix::from_i64(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]]).unwrap()), 3);
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_basis(&QMatrix::from_i64(&[&[1, 0], &[0, 1]]).unwrap()).is_empty());
        assert_eq!(kernel_basis(&QMatrix::from_i64(&[&[1, 1]]).unwrap()), vec![qv(&[1, -1])]);
        assert_eq!(
            kernel_basis(&QMatrix::from_i64(&[&[4, 1, 0], &[0, 1, 4]]).unwrap()),
            vec![qv(&[1, -4, 1])]
        );
        // empty row set: every coordinate is free
        assert_eq!(kernel_basis(&QMatrix::zeros(0, 2)), vec![qv(&[1, 0]), qv(&[0, 1])]);
    }

    #[test]
    fn kernel_vectors_are_primitive_with_positive_lead() {
        let m = QMatrix::from_i64(&[&[2, 0, -3, 1], &[0, 6, 3, 0]]).unwrap();
        for v in kernel_basis(&m) {
            assert!(m.mul_vec(&v).unwrap().iter().all(Zero::is_zero));
            let lead = v.iter().find(|x| !x.is_zero()).unwrap();
            assert!(lead.is_positive());
            assert!(v.iter().all(|x| x.is_integer()));
        }
    }

    #[test]
    fn solve_examples() {
        let two = QMatrix::from_i64(&[&[2]]).unwrap();
        assert_eq!(
            solve_or_witness(&two, &qv(&[1])).unwrap(),
            Solution::Solved(vec![Rational::new(1.into(), 2.into())])
        );
        let zero = QMatrix::from_i64(&[&[0]]).unwrap();
        assert_eq!(solve_or_witness(&zero, &qv(&[1])).unwrap(), Solution::Inconsistent(qv(&[1])));
        let ones = QMatrix::from_i64(&[&[1, 1]]).unwrap();
        assert_eq!(solve_or_witness(&ones, &qv(&[3])).unwrap(), Solution::Solved(qv(&[3, 0])));
        assert!(matches!(
            solve_or_witness(&ones, &qv(&[3, 1])),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn rational_entries_are_handled() {
        let h = Rational::new(1.into(), 2.into());
        let t = Rational::new(1.into(), 3.into());
        let m = QMatrix::from_rows(vec![vec![h.clone(), t.clone()], vec![q(3), q(2)]]).unwrap();
        assert_eq!(rank(&m), 1);
        assert_eq!(kernel_basis(&m), vec![qv(&[2, -3])]);
    }
}
