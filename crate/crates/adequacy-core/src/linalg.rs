//! Dense exact linear algebra over finite fields.
//!
//! Matrices store packed scalar values row-major. Everything reduces to
//! fraction-free Gaussian elimination in the field; minimal polynomials are
//! computed from Krylov subspaces (per starting vector, then lcm), and
//! semisimplicity of a matrix is decided by squarefreeness of its minimal
//! polynomial. The `SpanAccumulator` maintains a reduced row-echelon basis
//! of a growing subspace and is the workhorse behind all spanning-rank
//! computations; because reduced echelon form is canonical, the accumulated
//! basis is independent of insertion order.

use crate::error::{Error, Result};
use crate::field::{Field, Poly, Scalar};
use std::fmt;

/// Dense matrix over a finite field.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    entries: Vec<u32>, // packed values, row-major
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|c| self.field.render(self.at(r, c)))
                .collect();
            writeln!(f, "  [{}]", row.join(" "))?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    pub fn identity(field: &Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.entries[i * n + i] = 1;
        }
        m
    }

    /// Build from signed integers, embedding via the prime subfield. Handy
    /// for writing test matrices.
    pub fn from_i64(field: &Field, rows: &[&[i64]]) -> Result<Matrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        let mut m = Matrix::zeros(field, r, c);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m.entries[i * c + j] = field.scalar_from_i64(v).value();
            }
        }
        Ok(m)
    }

    /// Construct from packed values without per-entry scalar wrapping. The
    /// caller is responsible for having validated the values against the
    /// field (decoders do; internal algebra always produces valid values).
    pub(crate) fn from_raw_values(
        field: &Field,
        rows: usize,
        cols: usize,
        entries: Vec<u32>,
    ) -> Matrix {
        assert_eq!(entries.len(), rows * cols, "entry count mismatch");
        Matrix {
            field: field.clone(),
            rows,
            cols,
            entries,
        }
    }

    pub fn from_scalars(field: &Field, rows: &[Vec<Scalar>]) -> Result<Matrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        let mut m = Matrix::zeros(field, r, c);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if !field.contains(v) {
                    return Err(Error::FieldMismatch);
                }
                m.entries[i * c + j] = v.value();
            }
        }
        Ok(m)
    }

    pub fn field(&self) -> &Field {
        &self.field
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

    pub fn at(&self, r: usize, c: usize) -> Scalar {
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        self.field.scalar_unchecked(self.entries[r * self.cols + c])
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) -> Result<()> {
        if !self.field.contains(v) {
            return Err(Error::FieldMismatch);
        }
        assert!(r < self.rows && c < self.cols, "index out of bounds");
        self.entries[r * self.cols + c] = v.value();
        Ok(())
    }

    #[inline]
    pub(crate) fn value_at(&self, r: usize, c: usize) -> u32 {
        self.entries[r * self.cols + c]
    }

    #[inline]
    pub(crate) fn set_value(&mut self, r: usize, c: usize, v: u32) {
        self.entries[r * self.cols + c] = v;
    }

    /// Row-major packed values (the flattening convention used everywhere a
    /// matrix is treated as a vector).
    pub(crate) fn values(&self) -> &[u32] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&v| v == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && self
                .entries
                .iter()
                .enumerate()
                .all(|(k, &v)| v == u32::from(k % (self.cols + 1) == 0))
    }

    fn check_same_field(&self, other: &Matrix) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_field(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "add {}x{} with {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let spec = self.field.spec();
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| spec.val_add(a, b))
            .collect();
        Ok(Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_field(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "sub {}x{} with {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let spec = self.field.spec();
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| spec.val_sub(a, b))
            .collect();
        Ok(Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn neg(&self) -> Matrix {
        let spec = self.field.spec();
        Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|&v| spec.val_neg(v)).collect(),
        }
    }

    pub fn scalar_mul(&self, s: Scalar) -> Result<Matrix> {
        if !self.field.contains(s) {
            return Err(Error::FieldMismatch);
        }
        let spec = self.field.spec();
        Ok(Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .map(|&v| spec.val_mul(v, s.value()))
                .collect(),
        })
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_field(other)?;
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "mul {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let spec = self.field.spec();
        let mut out = Matrix::zeros(&self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.entries[i * self.cols + k];
                if a == 0 {
                    continue;
                }
                let orow = k * other.cols;
                let trow = i * other.cols;
                for j in 0..other.cols {
                    let b = other.entries[orow + j];
                    if b != 0 {
                        let prod = spec.val_mul(a, b);
                        out.entries[trow + j] = spec.val_add(out.entries[trow + j], prod);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product on packed values (column vector).
    pub(crate) fn mul_vec_values(&self, v: &[u32]) -> Vec<u32> {
        debug_assert_eq!(v.len(), self.cols);
        let spec = self.field.spec();
        let mut out = vec![0u32; self.rows];
        for i in 0..self.rows {
            let base = i * self.cols;
            let mut acc = 0u32;
            for (j, &x) in v.iter().enumerate() {
                if x != 0 {
                    let a = self.entries[base + j];
                    if a != 0 {
                        acc = spec.val_add(acc, spec.val_mul(a, x));
                    }
                }
            }
            out[i] = acc;
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.entries[c * self.rows + r] = self.entries[r * self.cols + c];
            }
        }
        out
    }

    pub fn trace(&self) -> Result<Scalar> {
        if !self.is_square() {
            return Err(Error::NotSquare);
        }
        let spec = self.field.spec();
        let mut acc = 0u32;
        for i in 0..self.rows {
            acc = spec.val_add(acc, self.entries[i * self.cols + i]);
        }
        Ok(self.field.scalar_unchecked(acc))
    }

    pub fn pow(&self, mut e: u64) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::NotSquare);
        }
        let mut base = self.clone();
        let mut acc = Matrix::identity(&self.field, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Reduced row echelon form; returns (rref, pivot column indices).
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let spec = self.field.spec();
        let mut pivots = Vec::new();
        let mut row = 0usize;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            // find pivot
            let mut pr = None;
            for r in row..m.rows {
                if m.entries[r * m.cols + col] != 0 {
                    pr = Some(r);
                    break;
                }
            }
            let Some(pr) = pr else { continue };
            m.swap_rows(row, pr);
            // normalize
            let inv = spec.val_inv(m.entries[row * m.cols + col]).unwrap();
            if inv != 1 {
                for c in col..m.cols {
                    m.entries[row * m.cols + c] = spec.val_mul(m.entries[row * m.cols + c], inv);
                }
            }
            // eliminate all other rows
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let f = m.entries[r * m.cols + col];
                if f != 0 {
                    for c in col..m.cols {
                        let sub = spec.val_mul(f, m.entries[row * m.cols + c]);
                        m.entries[r * m.cols + c] = spec.val_sub(m.entries[r * m.cols + c], sub);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel {x : Mx = 0}, returned as the rows of a
    /// matrix with one basis vector per row (possibly zero rows).
    pub fn nullspace(&self) -> Matrix {
        let (r, pivots) = self.rref();
        let spec = self.field.spec();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Matrix::zeros(&self.field, free.len(), self.cols);
        for (k, &fc) in free.iter().enumerate() {
            out.entries[k * self.cols + fc] = 1;
            for (prow, &pc) in pivots.iter().enumerate() {
                let v = r.entries[prow * self.cols + fc];
                if v != 0 {
                    out.entries[k * self.cols + pc] = spec.val_neg(v);
                }
            }
        }
        out
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::NotSquare);
        }
        let n = self.rows;
        // augmented [self | I]
        let mut aug = Matrix::zeros(&self.field, n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.entries[r * 2 * n + c] = self.entries[r * n + c];
            }
            aug.entries[r * 2 * n + n + r] = 1;
        }
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
            return Err(Error::Singular);
        }
        let mut out = Matrix::zeros(&self.field, n, n);
        for r in 0..n {
            for c in 0..n {
                out.entries[r * n + c] = red.entries[r * 2 * n + n + c];
            }
        }
        Ok(out)
    }

    /// Kronecker (tensor) product: block (i,j) of the result is a_ij * B.
    pub fn kronecker(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_field(other)?;
        let spec = self.field.spec();
        let (ar, ac, br, bc) = (self.rows, self.cols, other.rows, other.cols);
        let mut out = Matrix::zeros(&self.field, ar * br, ac * bc);
        for i in 0..ar {
            for j in 0..ac {
                let a = self.entries[i * ac + j];
                if a == 0 {
                    continue;
                }
                for k in 0..br {
                    let orow = (i * br + k) * ac * bc + j * bc;
                    let brow = k * bc;
                    for l in 0..bc {
                        let b = other.entries[brow + l];
                        if b != 0 {
                            out.entries[orow + l] = spec.val_mul(a, b);
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Minimal polynomial: the least-degree monic polynomial annihilating
    /// the matrix. Computed as the lcm of local minimal polynomials of the
    /// standard basis vectors, each found from the first Krylov dependency.
    pub fn minimal_polynomial(&self) -> Result<Poly> {
        if !self.is_square() {
            return Err(Error::NotSquare);
        }
        let n = self.rows;
        let spec = self.field.spec();
        if n == 0 {
            return Ok(Poly::from_values(&self.field, vec![1]));
        }
        let mut acc = Poly::from_values(&self.field, vec![1]); // constant 1
        for start in 0..n {
            // echelon rows over the Krylov vectors, each carrying the tail of
            // coordinates in terms of v_0..v_k
            let mut rows: Vec<(usize, Vec<u32>)> = Vec::new(); // (pivot, row of len n + n + 1)
            let width = n + n + 1;
            let mut v = vec![0u32; n];
            v[start] = 1;
            let mut k = 0usize;
            let local = loop {
                // candidate row: [v | e_k]
                let mut row = vec![0u32; width];
                row[..n].copy_from_slice(&v);
                row[n + k] = 1;
                // reduce by existing rows (left part only decides pivots)
                for (p, r) in &rows {
                    let f = row[*p];
                    if f != 0 {
                        for c in 0..width {
                            if r[c] != 0 {
                                row[c] = spec.val_sub(row[c], spec.val_mul(f, r[c]));
                            }
                        }
                    }
                }
                match row[..n].iter().position(|&x| x != 0) {
                    Some(pivot) => {
                        let inv = spec.val_inv(row[pivot]).unwrap();
                        if inv != 1 {
                            for c in 0..width {
                                row[c] = spec.val_mul(row[c], inv);
                            }
                        }
                        rows.push((pivot, row));
                        v = self.mul_vec_values(&v);
                        k += 1;
                    }
                    None => {
                        // dependency: sum_j row[n+j] * v_j = 0, coefficient of
                        // v_k is 1 after the scaling-free reduction above
                        let coeffs: Vec<u32> = row[n..n + k + 1].to_vec();
                        debug_assert_eq!(coeffs[k], 1);
                        break Poly::from_values(&self.field, coeffs);
                    }
                }
            };
            acc = acc.lcm(&local)?;
            if acc.degree() == Some(n) {
                break;
            }
        }
        Ok(acc)
    }

    /// A matrix is semisimple (diagonalizable over the algebraic closure)
    /// exactly when its minimal polynomial is squarefree. Only defined for
    /// invertible matrices here, since group elements are the only users.
    pub fn is_semisimple(&self) -> Result<bool> {
        if !self.is_square() {
            return Err(Error::NotSquare);
        }
        if self.rank() != self.rows {
            return Err(Error::Singular);
        }
        let mu = self.minimal_polynomial()?;
        mu.is_squarefree()
    }
}

/// Evaluate a polynomial at a square matrix.
pub fn poly_eval_matrix(poly: &Poly, m: &Matrix) -> Result<Matrix> {
    if !m.is_square() {
        return Err(Error::NotSquare);
    }
    if poly.field() != m.field() {
        return Err(Error::FieldMismatch);
    }
    let n = m.rows();
    let mut acc = Matrix::zeros(m.field(), n, n);
    let coeffs = poly.coefficients();
    for &c in coeffs.iter().rev() {
        acc = acc.mul(m)?;
        for i in 0..n {
            let cur = acc.at(i, i);
            acc.set(i, i, m.field().add(cur, c)?)?;
        }
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// span accumulator
// ---------------------------------------------------------------------------

/// Incrementally accumulated subspace of k^ambient in reduced row-echelon
/// form. Inserting a vector reduces it against the current basis; if a new
/// pivot survives, the basis is back-eliminated so it stays canonical. The
/// final basis (and hence the rank) does not depend on insertion order, which
/// lets partitioned/parallel accumulation merge safely.
#[derive(Clone)]
pub struct SpanAccumulator {
    field: Field,
    ambient: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl SpanAccumulator {
    pub fn new(field: &Field, ambient: usize) -> SpanAccumulator {
        SpanAccumulator {
            field: field.clone(),
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }
    pub fn rank(&self) -> usize {
        self.rows.len()
    }
    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ambient
    }

    /// Insert a vector of packed values; true if the rank grew.
    pub(crate) fn insert_values(&mut self, v: &[u32]) -> bool {
        assert_eq!(v.len(), self.ambient, "ambient dimension mismatch");
        if self.is_full() {
            return false;
        }
        let field = self.field.clone();
        let spec = field.spec();
        let mut w = v.to_vec();
        for (i, &p) in self.pivots.iter().enumerate() {
            let f = w[p];
            if f != 0 {
                let row = &self.rows[i];
                for c in p..self.ambient {
                    if row[c] != 0 {
                        w[c] = spec.val_sub(w[c], spec.val_mul(f, row[c]));
                    }
                }
            }
        }
        let Some(pivot) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = spec.val_inv(w[pivot]).unwrap();
        if inv != 1 {
            for c in pivot..self.ambient {
                if w[c] != 0 {
                    w[c] = spec.val_mul(w[c], inv);
                }
            }
        }
        // back-eliminate existing rows at the new pivot
        for row in &mut self.rows {
            let f = row[pivot];
            if f != 0 {
                for c in pivot..self.ambient {
                    if w[c] != 0 {
                        row[c] = spec.val_sub(row[c], spec.val_mul(f, w[c]));
                    }
                }
            }
        }
        // keep rows sorted by pivot
        let at = self
            .pivots
            .binary_search(&pivot)
            .expect_err("pivot cannot already exist");
        self.pivots.insert(at, pivot);
        self.rows.insert(at, w);
        true
    }

    pub fn insert(&mut self, v: &[Scalar]) -> Result<bool> {
        if v.len() != self.ambient {
            return Err(Error::Dimension(format!(
                "vector of length {} into ambient {}",
                v.len(),
                self.ambient
            )));
        }
        let mut vals = Vec::with_capacity(v.len());
        for &x in v {
            if !self.field.contains(x) {
                return Err(Error::FieldMismatch);
            }
            vals.push(x.value());
        }
        Ok(self.insert_values(&vals))
    }

    /// Insert a matrix, flattened row-major into k^(rows*cols).
    pub fn insert_matrix(&mut self, m: &Matrix) -> Result<bool> {
        if m.field() != &self.field {
            return Err(Error::FieldMismatch);
        }
        if m.rows() * m.cols() != self.ambient {
            return Err(Error::Dimension(format!(
                "matrix {}x{} into ambient {}",
                m.rows(),
                m.cols(),
                self.ambient
            )));
        }
        Ok(self.insert_values(m.values()))
    }

    /// Merge another accumulator over the same space into this one.
    pub fn merge(&mut self, other: &SpanAccumulator) -> Result<()> {
        if other.field != self.field || other.ambient != self.ambient {
            return Err(Error::Dimension("merging incompatible spans".into()));
        }
        for row in &other.rows {
            if self.is_full() {
                break;
            }
            self.insert_values(row);
        }
        Ok(())
    }

    /// The canonical (reduced row echelon) basis rows.
    pub fn basis(&self) -> Vec<Vec<Scalar>> {
        self.rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|&v| self.field.scalar_unchecked(v))
                    .collect()
            })
            .collect()
    }

    /// True if the vector lies in the accumulated span.
    pub fn contains(&self, v: &[Scalar]) -> Result<bool> {
        if v.len() != self.ambient {
            return Err(Error::Dimension("vector length".into()));
        }
        let spec = self.field.spec();
        let mut w: Vec<u32> = Vec::with_capacity(v.len());
        for &x in v {
            if !self.field.contains(x) {
                return Err(Error::FieldMismatch);
            }
            w.push(x.value());
        }
        for (i, &p) in self.pivots.iter().enumerate() {
            let f = w[p];
            if f != 0 {
                let row = &self.rows[i];
                for c in p..self.ambient {
                    if row[c] != 0 {
                        w[c] = spec.val_sub(w[c], spec.val_mul(f, row[c]));
                    }
                }
            }
        }
        Ok(w.iter().all(|&x| x == 0))
    }
}
