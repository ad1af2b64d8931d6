//! Dense exact linear algebra over Q(√d).
//!
//! Dimensions in this workspace are tiny (3×3 dominant, 12 for flattened
//! Lie algebra coordinates), so the implementations favor clarity over
//! asymptotics: Gauss–Jordan elimination with exact field division for
//! solving, Laplace expansion for determinants, cofactors for adjugates.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Index, IndexMut};

use crate::error::Error;
use crate::scalar::Scalar;

/// Column vector (or covector, by context) of exact scalars.
#[derive(Clone, PartialEq, Eq)]
pub struct Vector {
    data: Vec<Scalar>,
}

/// Dense row-major matrix of exact scalars.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

/// Exact description of the solution set of M·x = b.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinearSolution {
    /// Affine solution set: `particular` plus the span of `kernel`.
    Solution {
        particular: Vector,
        kernel: Vec<Vector>,
    },
    /// The system has no solution.
    Inconsistent,
}

impl Vector {
    pub fn new(data: Vec<Scalar>) -> Vector {
        Vector { data }
    }

    pub fn zeros(n: usize) -> Vector {
        Vector {
            data: vec![Scalar::zero(); n],
        }
    }

    /// Standard basis vector e_i (0-indexed) of dimension n.
    pub fn basis(i: usize, n: usize) -> Vector {
        let mut v = Vector::zeros(n);
        v[i] = Scalar::one();
        v
    }

    pub fn from_ints(entries: &[i64]) -> Vector {
        Vector::new(entries.iter().map(|&n| Scalar::from_int(n)).collect())
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn iter(&self) -> core::slice::Iter<'_, Scalar> {
        self.data.iter()
    }

    pub fn as_slice(&self) -> &[Scalar] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn add(&self, other: &Vector) -> Vector {
        assert_eq!(self.dim(), other.dim());
        Vector::new(
            self.iter()
                .zip(other.iter())
                .map(|(a, b)| a.add(b))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        assert_eq!(self.dim(), other.dim());
        Vector::new(
            self.iter()
                .zip(other.iter())
                .map(|(a, b)| a.sub(b))
                .collect(),
        )
    }

    pub fn neg(&self) -> Vector {
        Vector::new(self.iter().map(Scalar::neg).collect())
    }

    pub fn scale(&self, c: &Scalar) -> Vector {
        Vector::new(self.iter().map(|a| a.mul(c)).collect())
    }

    /// Plain bilinear dot product Σ aᵢbᵢ.
    pub fn dot(&self, other: &Vector) -> Scalar {
        assert_eq!(self.dim(), other.dim());
        let mut acc = Scalar::zero();
        for (a, b) in self.iter().zip(other.iter()) {
            acc = acc.add(&a.mul(b));
        }
        acc
    }

    /// True when every entry is a rational integer.
    pub fn is_integral(&self) -> bool {
        self.data.iter().all(Scalar::is_integer)
    }

    /// True when every entry lies in Q.
    pub fn is_rational(&self) -> bool {
        self.data.iter().all(Scalar::is_rational)
    }
}

impl Index<usize> for Vector {
    type Output = Scalar;
    fn index(&self, i: usize) -> &Scalar {
        &self.data[i]
    }
}

impl IndexMut<usize> for Vector {
    fn index_mut(&mut self, i: usize) -> &mut Scalar {
        &mut self.data[i]
    }
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.data.iter()).finish()
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Matrix {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_ints(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&n| Scalar::from_int(n)).collect())
                .collect(),
        )
    }

    pub fn from_columns(cols: &[Vector]) -> Matrix {
        let c = cols.len();
        let r = cols.first().map_or(0, Vector::dim);
        assert!(cols.iter().all(|v| v.dim() == r), "ragged columns");
        let mut m = Matrix::zeros(r, c);
        for (j, v) in cols.iter().enumerate() {
            for i in 0..r {
                m[(i, j)] = v[i].clone();
            }
        }
        m
    }

    pub fn diagonal(entries: &[Scalar]) -> Matrix {
        let n = entries.len();
        let mut m = Matrix::zeros(n, n);
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> Vector {
        Vector::new((0..self.cols).map(|j| self[(i, j)].clone()).collect())
    }

    pub fn column(&self, j: usize) -> Vector {
        Vector::new((0..self.rows).map(|i| self[(i, j)].clone()).collect())
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut m = self.clone();
        for (a, b) in m.data.iter_mut().zip(other.data.iter()) {
            *a = a.add(b);
        }
        m
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut m = self.clone();
        for (a, b) in m.data.iter_mut().zip(other.data.iter()) {
            *a = a.sub(b);
        }
        m
    }

    pub fn neg(&self) -> Matrix {
        let mut m = self.clone();
        for a in m.data.iter_mut() {
            *a = a.neg();
        }
        m
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        let mut m = self.clone();
        for a in m.data.iter_mut() {
            *a = a.mul(c);
        }
        m
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "inner dimension mismatch");
        let mut m = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Scalar::zero();
                for k in 0..self.cols {
                    acc = acc.add(&self[(i, k)].mul(&other[(k, j)]));
                }
                m[(i, j)] = acc;
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &Vector) -> Vector {
        assert_eq!(self.cols, v.dim(), "dimension mismatch");
        Vector::new(
            (0..self.rows)
                .map(|i| {
                    let mut acc = Scalar::zero();
                    for k in 0..self.cols {
                        acc = acc.add(&self[(i, k)].mul(&v[k]));
                    }
                    acc
                })
                .collect(),
        )
    }

    pub fn trace(&self) -> Scalar {
        assert!(self.is_square());
        let mut acc = Scalar::zero();
        for i in 0..self.rows {
            acc = acc.add(&self[(i, i)]);
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                if self[(i, j)] != self[(j, i)] {
                    return false;
                }
            }
        }
        true
    }

    /// True when every entry is a rational integer.
    pub fn is_integral(&self) -> bool {
        self.data.iter().all(Scalar::is_integer)
    }

    /// True when every entry lies in Q.
    pub fn is_rational(&self) -> bool {
        self.data.iter().all(Scalar::is_rational)
    }

    fn minor(&self, skip_row: usize, skip_col: usize) -> Matrix {
        let mut m = Matrix::zeros(self.rows - 1, self.cols - 1);
        let mut di = 0;
        for i in 0..self.rows {
            if i == skip_row {
                continue;
            }
            let mut dj = 0;
            for j in 0..self.cols {
                if j == skip_col {
                    continue;
                }
                m[(di, dj)] = self[(i, j)].clone();
                dj += 1;
            }
            di += 1;
        }
        m
    }

    /// Exact determinant by Laplace expansion (matrices here are ≤ 4×4).
    pub fn det(&self) -> Scalar {
        assert!(self.is_square(), "determinant of non-square matrix");
        match self.rows {
            0 => Scalar::one(),
            1 => self[(0, 0)].clone(),
            2 => self[(0, 0)]
                .mul(&self[(1, 1)])
                .sub(&self[(0, 1)].mul(&self[(1, 0)])),
            n => {
                let mut acc = Scalar::zero();
                for j in 0..n {
                    if self[(0, j)].is_zero() {
                        continue;
                    }
                    let term = self[(0, j)].mul(&self.minor(0, j).det());
                    acc = if j % 2 == 0 {
                        acc.add(&term)
                    } else {
                        acc.sub(&term)
                    };
                }
                acc
            }
        }
    }

    /// Adjugate matrix: adj(A)·A = det(A)·I, division-free.
    pub fn adjugate(&self) -> Matrix {
        assert!(self.is_square());
        let n = self.rows;
        if n == 0 {
            return self.clone();
        }
        let mut adj = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let c = self.minor(i, j).det();
                adj[(j, i)] = if (i + j) % 2 == 0 { c } else { c.neg() };
            }
        }
        adj
    }

    /// Exact inverse; fails when singular.
    pub fn inverse(&self) -> Result<Matrix, Error> {
        let det = self.det();
        if det.is_zero() {
            return Err(Error::Singular);
        }
        Ok(self.adjugate().scale(&det.inv()))
    }

    /// Reduced row echelon form together with pivot column indices.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0usize;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m[(r, col)].is_zero()) else {
                continue;
            };
            if p != row {
                for j in 0..m.cols {
                    let tmp = m[(row, j)].clone();
                    m[(row, j)] = m[(p, j)].clone();
                    m[(p, j)] = tmp;
                }
            }
            let inv = m[(row, col)].inv();
            for j in col..m.cols {
                m[(row, j)] = m[(row, j)].mul(&inv);
            }
            for r in 0..m.rows {
                if r != row && !m[(r, col)].is_zero() {
                    let f = m[(r, col)].clone();
                    for j in col..m.cols {
                        let delta = f.mul(&m[(row, j)]);
                        m[(r, j)] = m[(r, j)].sub(&delta);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Exact solution set of self·x = b.
    pub fn solve(&self, b: &Vector) -> LinearSolution {
        assert_eq!(self.rows, b.dim(), "dimension mismatch");
        let mut aug = Matrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        let (red, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return LinearSolution::Inconsistent;
        }
        let mut particular = Vector::zeros(self.cols);
        for (r, &pc) in pivots.iter().enumerate() {
            particular[pc] = red[(r, self.cols)].clone();
        }
        let mut kernel = Vec::new();
        for free in 0..self.cols {
            if pivots.contains(&free) {
                continue;
            }
            let mut k = Vector::zeros(self.cols);
            k[free] = Scalar::one();
            for (r, &pc) in pivots.iter().enumerate() {
                k[pc] = red[(r, free)].neg();
            }
            kernel.push(k);
        }
        LinearSolution::Solution { particular, kernel }
    }

    /// Basis of the kernel {x : self·x = 0}.
    pub fn kernel(&self) -> Vec<Vector> {
        match self.solve(&Vector::zeros(self.rows)) {
            LinearSolution::Solution { kernel, .. } => kernel,
            LinearSolution::Inconsistent => unreachable!("homogeneous system"),
        }
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            write!(f, "  [")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            writeln!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Reduces a list of vectors to a basis of their span (rows of the RREF).
pub fn span_basis(vectors: &[Vector]) -> Vec<Vector> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let rows: Vec<Vec<Scalar>> = vectors.iter().map(|v| v.as_slice().to_vec()).collect();
    let (red, pivots) = Matrix::from_rows(rows).rref();
    (0..pivots.len()).map(|r| red.row(r)).collect()
}

/// Exact membership of v in the span of basis.
pub fn in_span(basis: &[Vector], v: &Vector) -> bool {
    if v.is_zero() {
        return true;
    }
    if basis.is_empty() {
        return false;
    }
    let m = Matrix::from_columns(basis);
    !matches!(m.solve(v), LinearSolution::Inconsistent)
}

/// Exact equality of spans.
pub fn spans_equal(a: &[Vector], b: &[Vector]) -> bool {
    a.iter().all(|v| in_span(b, v)) && b.iter().all(|v| in_span(a, v))
}
