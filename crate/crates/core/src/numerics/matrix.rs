use num_complex::Complex64;

use super::NumericsError;

/// Dense complex matrix in column-major storage.
///
/// Real-valued data is stored with zero imaginary parts; every algorithm in
/// this crate works in complex arithmetic throughout, since DMD eigenvalues
/// of real data are generically complex.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    /// Builds a matrix from column-major data, rejecting NaN/Inf entries.
    pub fn from_column_major(
        rows: usize,
        cols: usize,
        data: Vec<Complex64>,
    ) -> Result<Self, NumericsError> {
        if rows == 0 || cols == 0 {
            return Err(NumericsError::ShapeError(format!(
                "matrix dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(NumericsError::ShapeError(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(NumericsError::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from real column-major data.
    pub fn from_real_column_major(
        rows: usize,
        cols: usize,
        data: &[f64],
    ) -> Result<Self, NumericsError> {
        let complex: Vec<Complex64> = data.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::from_column_major(rows, cols, complex)
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vec<Complex64>]) -> Result<Self, NumericsError> {
        if columns.is_empty() {
            return Err(NumericsError::ShapeError("no columns given".into()));
        }
        let rows = columns[0].len();
        if columns.iter().any(|c| c.len() != rows) {
            return Err(NumericsError::ShapeError(
                "columns have inconsistent lengths".into(),
            ));
        }
        let mut data = Vec::with_capacity(rows * columns.len());
        for col in columns {
            data.extend_from_slice(col);
        }
        Self::from_column_major(rows, columns.len(), data)
    }

    /// Row-major convenience constructor, mainly for tests and small fixtures.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self, NumericsError> {
        if rows.is_empty() {
            return Err(NumericsError::ShapeError("no rows given".into()));
        }
        let cols = rows[0].len();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(NumericsError::ShapeError(
                "rows have inconsistent lengths".into(),
            ));
        }
        let mut data = vec![Complex64::ZERO; rows.len() * cols];
        for (i, row) in rows.iter().enumerate() {
            for (j, &z) in row.iter().enumerate() {
                data[j * rows.len() + i] = z;
            }
        }
        Self::from_column_major(rows.len(), cols, data)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::ONE);
        }
        m
    }

    /// Internal constructor for results of arithmetic that cannot introduce
    /// shape errors. Finiteness is the caller's concern.
    pub(crate) fn from_parts(rows: usize, cols: usize, data: Vec<Complex64>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[j * self.rows + i]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: Complex64) {
        self.data[j * self.rows + i] = value;
    }

    #[inline]
    pub fn col(&self, j: usize) -> &[Complex64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    #[inline]
    pub(crate) fn col_mut(&mut self, j: usize) -> &mut [Complex64] {
        &mut self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(|z| z.im == 0.0)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.cols, self.rows);
        for j in 0..self.cols {
            for i in 0..self.rows {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.cols, self.rows);
        for j in 0..self.cols {
            for i in 0..self.rows {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!(
            self.cols, rhs.rows,
            "dimension mismatch in mul: {}x{} * {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        let mut out = DenseMatrix::zeros(self.rows, rhs.cols);
        for j in 0..rhs.cols {
            let out_col = out.col_mut(j);
            for k in 0..self.cols {
                let scale = rhs.get(k, j);
                if scale == Complex64::ZERO {
                    continue;
                }
                let lhs_col = self.col(k);
                for i in 0..self.rows {
                    out_col[i] += scale * lhs_col[i];
                }
            }
        }
        out
    }

    /// Matrix-vector product.
    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, x.len(), "dimension mismatch in matvec");
        let mut out = vec![Complex64::ZERO; self.rows];
        for (k, &scale) in x.iter().enumerate() {
            if scale == Complex64::ZERO {
                continue;
            }
            for (o, &a) in out.iter_mut().zip(self.col(k)) {
                *o += scale * a;
            }
        }
        out
    }

    /// Adjoint-vector product `selfᴴ x` without forming the adjoint.
    pub fn adjoint_matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.rows, x.len(), "dimension mismatch in adjoint_matvec");
        (0..self.cols)
            .map(|j| {
                self.col(j)
                    .iter()
                    .zip(x)
                    .map(|(&a, &b)| a.conj() * b)
                    .sum()
            })
            .collect()
    }

    /// Returns `self * diag(d)`, i.e. column `j` scaled by `d[j]`.
    pub fn scale_cols(&self, d: &[Complex64]) -> DenseMatrix {
        assert_eq!(self.cols, d.len(), "dimension mismatch in scale_cols");
        let mut out = self.clone();
        for (j, &s) in d.iter().enumerate() {
            for v in out.col_mut(j) {
                *v *= s;
            }
        }
        out
    }

    pub fn sub(&self, rhs: &DenseMatrix) -> DenseMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(&a, &b)| a - b)
            .collect();
        DenseMatrix::from_parts(self.rows, self.cols, data)
    }

    /// Frobenius norm.
    pub fn fro_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Euclidean norm of a column vector; errors on non-column shapes.
    pub fn two_norm_col(&self) -> Result<f64, NumericsError> {
        if self.cols != 1 {
            return Err(NumericsError::ShapeError(format!(
                "two-norm requested on a {}x{} matrix; expected a column vector",
                self.rows, self.cols
            )));
        }
        Ok(vec_norm(&self.data))
    }
}

/// Euclidean norm of a complex slice.
pub fn vec_norm(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Euclidean norm of the difference of two slices.
pub fn vec_diff_norm(a: &[Complex64], b: &[Complex64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(&x, &y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}
