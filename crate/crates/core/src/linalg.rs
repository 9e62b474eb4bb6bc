//! Exact linear algebra over ℚ.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::jetring::Rational;

/// Dense row-major rational matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

/// Reduced row-echelon form with its pivot columns.
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    /// Matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(rows: usize, cols: &[Vec<Rational>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length");
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows, "row count");
        let mut m = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                m.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Integer row echelon form by fraction-free (Bareiss) elimination.
    /// Rows are first cleared of denominators, which leaves the row space
    /// unchanged. Returns the integer rows and pivot columns.
    fn bareiss(&self) -> (Vec<Vec<BigInt>>, Vec<usize>) {
        let mut a: Vec<Vec<BigInt>> = (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let den = row.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
                row.iter().map(|c| c.numer() * (&den / c.denom())).collect()
            })
            .collect();
        let mut pivots = Vec::new();
        let mut prev = BigInt::one();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !a[i][c].is_zero()) else {
                continue;
            };
            a.swap(r, p);
            for i in r + 1..self.rows {
                for j in c + 1..self.cols {
                    let v = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                    a[i][j] = v / &prev;
                }
                a[i][c] = BigInt::zero();
            }
            prev = a[r][c].clone();
            pivots.push(c);
            r += 1;
        }
        a.truncate(r);
        (a, pivots)
    }

    pub fn rank(&self) -> usize {
        self.bareiss().1.len()
    }

    pub fn rref(&self) -> Rref {
        let (rows, pivots) = self.bareiss();
        let mut m = Matrix::zeros(rows.len(), self.cols);
        for (i, row) in rows.iter().enumerate() {
            let lead = Rational::from_integer(row[pivots[i]].clone());
            for (j, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    m.set(i, j, Rational::from_integer(v.clone()) / &lead);
                }
            }
        }
        for k in (0..pivots.len()).rev() {
            let pc = pivots[k];
            for i in 0..k {
                let f = m.get(i, pc).clone();
                if f.is_zero() {
                    continue;
                }
                for j in pc..self.cols {
                    let v = m.get(i, j) - &f * m.get(k, j);
                    m.set(i, j, v);
                }
            }
        }
        Rref { matrix: m, pivots }
    }

    /// Basis of the right null space, one vector per free column, with that
    /// free coordinate equal to one.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let Rref { matrix, pivots } = self.rref();
        (0..self.cols)
            .filter(|j| !pivots.contains(j))
            .map(|free| {
                let mut v = vec![Rational::zero(); self.cols];
                v[free] = Rational::one();
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = -matrix.get(i, free).clone();
                }
                v
            })
            .collect()
    }

    /// A solution of `self · z = rhs` with every free coordinate zero, or
    /// `None` when the system is inconsistent.
    pub fn solve(&self, rhs: &[Rational]) -> Option<Vec<Rational>> {
        let aug = self.hstack(&Matrix::from_columns(self.rows, &[rhs.to_vec()]));
        let Rref { matrix, pivots } = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut z = vec![Rational::zero(); self.cols];
        for (i, &pc) in pivots.iter().enumerate() {
            z[pc] = matrix.get(i, self.cols).clone();
        }
        Some(z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jetring::rat;
    use proptest::prelude::*;

    /// Textbook elimination over ℚ, used as an independent reference.
    fn naive_rref(m: &Matrix) -> (Matrix, Vec<usize>) {
        let mut a = m.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..a.cols() {
            let Some(p) = (r..a.rows()).find(|&i| !a.get(i, c).is_zero()) else {
                continue;
            };
            for j in 0..a.cols() {
                let t = a.get(r, j).clone();
                let u = a.get(p, j).clone();
                a.set(r, j, u);
                a.set(p, j, t);
            }
            let lead = a.get(r, c).clone();
            for j in 0..a.cols() {
                let v = a.get(r, j) / &lead;
                a.set(r, j, v);
            }
            for i in 0..a.rows() {
                if i == r {
                    continue;
                }
                let f = a.get(i, c).clone();
                for j in 0..a.cols() {
                    let v = a.get(i, j) - &f * a.get(r, j);
                    a.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
            if r == a.rows() {
                break;
            }
        }
        let rows = (0..r).map(|i| a.row(i).to_vec()).collect::<Vec<_>>();
        let out = if rows.is_empty() { Matrix::zeros(0, a.cols()) } else { Matrix::from_rows(rows) };
        (out, pivots)
    }

    #[test]
    fn small_example() {
        let m = Matrix::from_rows(vec![
            vec![rat(1, 1), rat(2, 1), rat(3, 1)],
            vec![rat(2, 1), rat(4, 1), rat(6, 1)],
            vec![rat(1, 2), rat(0, 1), rat(1, 3)],
        ]);
        assert_eq!(m.rank(), 2);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(m.mul_vec(&ns[0]).iter().all(Zero::is_zero));
        assert!(m.solve(&[rat(1, 1), rat(3, 1), rat(0, 1)]).is_none());
        let z = m.solve(&[rat(1, 1), rat(2, 1), rat(0, 1)]).unwrap();
        assert_eq!(m.mul_vec(&z), vec![rat(1, 1), rat(2, 1), rat(0, 1)]);
    }

    fn arb_matrix() -> impl Strategy<Value = Matrix> {
        (1usize..6, 1usize..7).prop_flat_map(|(r, c)| {
            prop::collection::vec((-3i64..4, 1i64..4), r * c).prop_map(move |v| {
                Matrix::from_rows(
                    v.chunks(c)
                        .map(|row| row.iter().map(|&(n, d)| rat(n, d)).collect())
                        .collect(),
                )
            })
        })
    }

    proptest! {
        #[test]
        fn rref_matches_reference(m in arb_matrix()) {
            let ours = m.rref();
            let (reference, pivots) = naive_rref(&m);
            prop_assert_eq!(&ours.pivots, &pivots);
            prop_assert_eq!(ours.matrix, reference);
        }

        #[test]
        fn rank_nullity(m in arb_matrix()) {
            let ns = m.nullspace();
            prop_assert_eq!(m.rank() + ns.len(), m.cols());
            for v in ns {
                prop_assert!(m.mul_vec(&v).iter().all(Zero::is_zero));
            }
        }
    }
}
