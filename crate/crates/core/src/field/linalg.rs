//! Dense matrices over a [`Field`] with exact elimination.

use super::{Fe, Field};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<Fe>,
}

/// Reduced row-echelon form together with its pivot columns (ascending).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Echelon {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
}

/// Right kernel of a matrix. `basis` rows are in reduced row-echelon form,
/// so two equal kernels always produce identical bases.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nullspace {
    pub rank: usize,
    pub basis: Matrix,
}

impl Nullspace {
    pub fn nullity(&self) -> usize {
        self.basis.rows
    }
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Fe>) -> Result<Matrix> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, got: entries.len() });
        }
        Ok(Matrix { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix { rows, cols, entries: vec![Fe::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Matrix {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Fe::ONE);
        }
        m
    }

    /// Stacks `rows`, each of length `cols`.
    pub fn from_rows<R: AsRef<[Fe]>>(cols: usize, rows: &[R]) -> Result<Matrix> {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, got: r.len() });
            }
            entries.extend_from_slice(r);
        }
        Ok(Matrix { rows: rows.len(), cols, entries })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Fe] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> Fe {
        self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Fe) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Fe] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> impl Iterator<Item = &[Fe]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn column(&self, j: usize) -> Vec<Fe> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn mul(&self, field: &Field, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, got: other.rows });
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let cur = out.get(i, j);
                    out.set(i, j, field.add(cur, field.mul(a, other.get(l, j))));
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, field: &Field, v: &[Fe]) -> Result<Vec<Fe>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, got: v.len() });
        }
        Ok(self.row_vecs().map(|r| field.dot(r, v)).collect())
    }

    fn require_square(&self) -> Result<()> {
        if self.rows != self.cols {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        Ok(())
    }

    /// Determinant by Gaussian elimination.
    pub fn det(&self, field: &Field) -> Result<Fe> {
        self.require_square()?;
        let n = self.rows;
        let mut m = self.clone();
        let mut acc = Fe::ONE;
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !m.get(r, col).is_zero()) else {
                return Ok(Fe::ZERO);
            };
            if piv != col {
                m.swap_rows(piv, col);
                acc = field.neg(acc);
            }
            let pv = m.get(col, col);
            acc = field.mul(acc, pv);
            let inv = field.inv(pv)?;
            for r in col + 1..n {
                let factor = field.mul(m.get(r, col), inv);
                if factor.is_zero() {
                    continue;
                }
                for c in col..n {
                    let v = field.sub(m.get(r, c), field.mul(factor, m.get(col, c)));
                    m.set(r, c, v);
                }
            }
        }
        Ok(acc)
    }

    /// Determinant by cofactor expansion along the first row. Exponential;
    /// meant for small matrices and for cross-checking [`Matrix::det`].
    pub fn det_cofactor(&self, field: &Field) -> Result<Fe> {
        self.require_square()?;
        fn expand(field: &Field, m: &Matrix, rows: &[usize], cols: &[usize]) -> Fe {
            if rows.is_empty() {
                return Fe::ONE;
            }
            let (r, rest) = (rows[0], &rows[1..]);
            let mut acc = Fe::ZERO;
            for (pos, &c) in cols.iter().enumerate() {
                let a = m.get(r, c);
                if a.is_zero() {
                    continue;
                }
                let minor_cols: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
                let term = field.mul(a, expand(field, m, rest, &minor_cols));
                acc = if pos % 2 == 0 { field.add(acc, term) } else { field.sub(acc, term) };
            }
            acc
        }
        let idx: Vec<usize> = (0..self.rows).collect();
        Ok(expand(field, self, &idx, &idx))
    }

    pub fn rref(&self, field: &Field) -> Echelon {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(piv) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(piv, row);
            let inv = field.inv(m.get(row, col)).expect("pivot is nonzero");
            for c in col..m.cols {
                let v = field.mul(inv, m.get(row, c));
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let factor = m.get(r, col);
                if factor.is_zero() {
                    continue;
                }
                for c in col..m.cols {
                    let v = field.sub(m.get(r, c), field.mul(factor, m.get(row, c)));
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        Echelon { matrix: m, pivots }
    }

    pub fn rank(&self, field: &Field) -> usize {
        self.rref(field).pivots.len()
    }

    pub fn nullspace(&self, field: &Field) -> Nullspace {
        let Echelon { matrix: r, pivots } = self.rref(field);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut vectors = Vec::with_capacity(free.len());
        for &f in &free {
            let mut v = vec![Fe::ZERO; self.cols];
            v[f] = Fe::ONE;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = field.neg(r.get(i, f));
            }
            vectors.push(v);
        }
        let stacked = Matrix::from_rows(self.cols, &vectors).expect("uniform width");
        Nullspace { rank: pivots.len(), basis: stacked.rref(field).matrix }
    }

    pub fn inverse(&self, field: &Field) -> Result<Matrix> {
        self.require_square()?;
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, Fe::ONE);
        }
        let Echelon { matrix, pivots } = aug.rref(field);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        let mut inv = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, matrix.get(i, n + j));
            }
        }
        Ok(inv)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn mat(f: &Field, rows: &[&[i64]]) -> Matrix {
        let cols = rows.first().map_or(0, |r| r.len());
        let vecs: Vec<Vec<Fe>> = rows.iter().map(|r| r.iter().map(|&x| f.from_int(x)).collect()).collect();
        Matrix::from_rows(cols, &vecs).unwrap()
    }

    #[test]
    fn determinant_examples() {
        let f5 = Field::new(5, 1, None).unwrap();
        assert_eq!(Matrix::identity(3).det(&f5).unwrap(), Fe::ONE);
        assert_eq!(mat(&f5, &[&[1, 2, 3], &[4, 0, 1], &[1, 2, 3]]).det(&f5).unwrap(), Fe::ZERO);
        assert_eq!(mat(&f5, &[&[1, 2], &[3, 4]]).det(&f5).unwrap(), f5.from_int(3));
        assert!(matches!(Matrix::zeros(2, 3).det(&f5), Err(Error::NotSquare { .. })));
        assert_eq!(Matrix::zeros(0, 0).det(&f5).unwrap(), Fe::ONE);
    }

    #[test]
    fn nullspace_examples() {
        let f7 = Field::new(7, 1, None).unwrap();
        let ns = Matrix::identity(3).nullspace(&f7);
        assert_eq!((ns.rank, ns.nullity()), (3, 0));
        let ns = Matrix::zeros(2, 3).nullspace(&f7);
        assert_eq!((ns.rank, ns.nullity()), (0, 3));
        assert_eq!(ns.basis, Matrix::identity(3));
        let m = mat(&f7, &[&[1, 2, 3], &[2, 4, 6]]);
        let ns = m.nullspace(&f7);
        assert_eq!((ns.rank, ns.nullity()), (1, 2));
        for v in ns.basis.row_vecs() {
            assert!(m.mul_vec(&f7, v).unwrap().iter().all(|x| x.is_zero()));
        }
        // canonical: reduced echelon with leading ones
        assert_eq!(ns.basis, mat(&f7, &[&[1, 0, 2], &[0, 1, 4]]));
    }

    #[test]
    fn inverse_roundtrip() {
        let f = Field::with_order(9).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut found = 0;
        while found < 20 {
            let entries = (0..16).map(|_| f.element(rng.gen_range(0..9)).unwrap()).collect();
            let m = Matrix::new(4, 4, entries).unwrap();
            match m.inverse(&f) {
                Ok(inv) => {
                    assert_eq!(m.mul(&f, &inv).unwrap(), Matrix::identity(4));
                    found += 1;
                }
                Err(Error::Singular) => assert_eq!(m.det(&f).unwrap(), Fe::ZERO),
                Err(e) => panic!("{e}"),
            }
        }
    }

    #[test]
    fn elimination_matches_cofactor_on_random_4x4() {
        for q in [2u64, 4, 5, 7, 9, 16] {
            let f = Field::with_order(q).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(q);
            for _ in 0..200 {
                let entries = (0..16).map(|_| f.element(rng.gen_range(0..q as u32)).unwrap()).collect();
                let m = Matrix::new(4, 4, entries).unwrap();
                let d = m.det(&f).unwrap();
                assert_eq!(d, m.det_cofactor(&f).unwrap());
                assert_eq!(d.is_zero(), m.rank(&f) < 4);
            }
        }
    }

    #[test]
    fn det_is_alternating() {
        let f = Field::new(7, 1, None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let entries: Vec<Fe> = (0..9).map(|_| f.element(rng.gen_range(0..7)).unwrap()).collect();
            let m = Matrix::new(3, 3, entries).unwrap();
            let mut swapped = m.clone();
            swapped.swap_rows(0, 2);
            assert_eq!(swapped.det(&f).unwrap(), f.neg(m.det(&f).unwrap()));
            let mut rep = m.clone();
            for j in 0..3 {
                rep.set(1, j, m.get(0, j));
            }
            assert_eq!(rep.det(&f).unwrap(), Fe::ZERO);
        }
    }
}
