//! Dense matrices over Q, just enough for the cohomology complexes.

use std::fmt;

use num_traits::Zero;
use serde_json::Value;

use crate::arith::{rational_to_json, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Matrix {
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = Rational::zero();
                for k in 0..self.cols {
                    acc += self.get(r, k) * other.get(k, c);
                }
                out.data[r * other.cols + c] = acc;
            }
        }
        out
    }

    /// Exact rank by Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut m: Vec<Vec<Rational>> = (0..self.rows)
            .map(|r| self.data[r * self.cols..(r + 1) * self.cols].to_vec())
            .collect();
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(pivot) = (rank..self.rows).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(rank, pivot);
            let (done, rest) = m.split_at_mut(rank + 1);
            let pivot_row = &done[rank];
            for row in rest {
                if row[col].is_zero() {
                    continue;
                }
                let factor = &row[col] / &pivot_row[col];
                for (x, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    *x -= &factor * p;
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn to_json(&self) -> Value {
        (0..self.rows)
            .map(|r| {
                (0..self.cols)
                    .map(|c| rational_to_json(self.get(r, c)))
                    .collect::<Value>()
            })
            .collect()
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect())
                .collect(),
        )
    }

    #[test]
    fn ranks() {
        assert_eq!(m(&[&[0, 0], &[0, 0]]).rank(), 0);
        assert_eq!(m(&[&[1, 2], &[2, 4]]).rank(), 1);
        assert_eq!(m(&[&[0, 1], &[1, 0]]).rank(), 2);
        assert_eq!(m(&[&[3], &[0]]).rank(), 1);
        assert_eq!(Matrix::zeros(0, 2).rank(), 0);
    }

    #[test]
    fn product() {
        let a = m(&[&[1, 2], &[3, 4]]);
        let b = m(&[&[-2], &[1]]);
        assert_eq!(a.mul(&b), m(&[&[0], &[-2]]));
    }

    proptest! {
        #[test]
        fn rank_bounded_and_transpose_invariant(entries in prop::collection::vec(-3i64..=3, 6)) {
            let a = m(&[&entries[0..3], &entries[3..6]]);
            let t = m(&[&[entries[0], entries[3]], &[entries[1], entries[4]], &[entries[2], entries[5]]]);
            prop_assert!(a.rank() <= 2);
            prop_assert_eq!(a.rank(), t.rank());
        }
    }
}
