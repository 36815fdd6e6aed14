use std::fmt;

use crate::scalar::{Field, Scalar};

/// Dense matrix over an exact field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    field: Field,
    data: Vec<Scalar>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solve {
    /// A particular solution with free variables set to zero.
    Solution(Vec<Scalar>),
    /// Row functional `y` with `y A = 0` and `y b != 0`.
    Infeasible(Vec<Scalar>),
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, field, data: vec![field.zero(); rows * cols] }
    }

    pub fn from_rows(field: Field, rows: Vec<Vec<Scalar>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        let n = rows.len();
        Matrix { rows: n, cols, field, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn rank(&self) -> usize {
        let mut rows: Vec<Vec<Scalar>> = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        eliminate(&mut rows, self.cols).len()
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[Scalar]) -> Solve {
        assert_eq!(b.len(), self.rows);
        let width = self.cols + 1 + self.rows;
        let mut rows: Vec<Vec<Scalar>> = (0..self.rows)
            .map(|i| {
                let mut r = Vec::with_capacity(width);
                r.extend_from_slice(self.row(i));
                r.push(b[i].clone());
                r.extend((0..self.rows).map(|k| if k == i { self.field.one() } else { self.field.zero() }));
                r
            })
            .collect();
        let pivots = eliminate(&mut rows, self.cols);
        for r in &rows[pivots.len()..] {
            if !r[self.cols].is_zero() {
                return Solve::Infeasible(r[self.cols + 1..].to_vec());
            }
        }
        let mut x = vec![self.field.zero(); self.cols];
        for (i, &c) in pivots.iter().enumerate() {
            x[c] = rows[i][self.cols].clone();
        }
        Solve::Solution(x)
    }
}

/// Gauss-Jordan elimination on the first `cols` columns, taking the first
/// nonzero entry as pivot. Returns the pivot columns; pivot rows come first.
fn eliminate(rows: &mut [Vec<Scalar>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv().expect("nonzero pivot");
        for v in rows[r].iter_mut() {
            *v = &*v * &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v = &*v - &(&factor * pv);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    pivots
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|s| s.to_string()).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Matrix {
        let q = Field::Rational;
        Matrix::from_rows(q, rows.iter().map(|r| r.iter().map(|&v| q.from_i64(v)).collect()).collect())
    }

    #[test]
    fn ranks() {
        assert_eq!(m(&[&[1, 2], &[2, 4]]).rank(), 1);
        assert_eq!(m(&[&[0, 1], &[1, 0]]).rank(), 2);
        assert_eq!(m(&[&[0, 0], &[0, 0]]).rank(), 0);
        let f = Field::Prime(2);
        let a = Matrix::from_rows(f, vec![vec![f.from_i64(1), f.from_i64(1)], vec![f.from_i64(1), f.from_i64(-1)]]);
        assert_eq!(a.rank(), 1);
    }

    #[test]
    fn solve_and_certificate() {
        let a = m(&[&[1, 1], &[1, 1]]);
        let q = Field::Rational;
        match a.solve(&[q.from_i64(2), q.from_i64(2)]) {
            Solve::Solution(x) => assert_eq!(x, vec![q.from_i64(2), q.from_i64(0)]),
            other => panic!("{other:?}"),
        }
        match a.solve(&[q.from_i64(1), q.from_i64(2)]) {
            Solve::Infeasible(y) => {
                let ya: Vec<Scalar> = (0..2).map(|j| &(&y[0] * a.get(0, j)) + &(&y[1] * a.get(1, j))).collect();
                assert!(ya.iter().all(Scalar::is_zero));
                assert!(!(&(&y[0] * &q.from_i64(1)) + &(&y[1] * &q.from_i64(2))).is_zero());
            }
            other => panic!("{other:?}"),
        }
    }
}
