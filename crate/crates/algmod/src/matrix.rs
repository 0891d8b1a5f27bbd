//! Dense exact matrices over `Q` or `F_p`, with the kernel/cokernel/image
//! operations that realize an abelian category of finite-dimensional spaces.
//!
//! Zero-row, zero-column and zero-by-zero matrices are first-class: they are
//! the maps in and out of the zero space and show up constantly (kernels of
//! monomorphisms, values on the empty word, nullary operations).
//!
//! Every basis-producing operation goes through one canonical reduced row
//! echelon form with left-to-right pivoting, so results are deterministic
//! and reproducible across runs.

use std::fmt;

use crate::scalar::{FieldSpec, Scalar};

/// A dense `rows x cols` matrix, row-major, all entries from `field`.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    field: FieldSpec,
    entries: Vec<Scalar>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.at(r, c).render()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize, field: FieldSpec) -> Self {
        Matrix {
            rows,
            cols,
            field,
            entries: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(n: usize, field: FieldSpec) -> Self {
        let mut m = Matrix::zero(n, n, field);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        field: FieldSpec,
        mut f: impl FnMut(usize, usize) -> Scalar,
    ) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                let s = f(r, c);
                debug_assert_eq!(s.field(), field);
                entries.push(s);
            }
        }
        Matrix {
            rows,
            cols,
            field,
            entries,
        }
    }

    /// Build from integer rows; convenient in tests and fixtures.
    pub fn from_int_rows(field: FieldSpec, rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
        }
        Matrix::from_fn(r, c, field, |i, j| field.from_int(rows[i][j]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn at(&self, r: usize, c: usize) -> &Scalar {
        assert!(r < self.rows && c < self.cols, "index out of range");
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        assert!(r < self.rows && c < self.cols, "index out of range");
        assert_eq!(v.field(), self.field, "field mismatch");
        self.entries[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|r| {
                (0..self.cols).all(|c| {
                    if r == c {
                        self.at(r, c).is_one()
                    } else {
                        self.at(r, c).is_zero()
                    }
                })
            })
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, self.field, |r, c| {
            self.at(c, r).clone()
        })
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        assert_eq!(self.field, other.field);
        Matrix::from_fn(self.rows, self.cols, self.field, |r, c| {
            self.at(r, c).add(other.at(r, c))
        })
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        assert_eq!(self.field, other.field);
        Matrix::from_fn(self.rows, self.cols, self.field, |r, c| {
            self.at(r, c).sub(other.at(r, c))
        })
    }

    pub fn neg(&self) -> Matrix {
        Matrix::from_fn(self.rows, self.cols, self.field, |r, c| self.at(r, c).neg())
    }

    pub fn scale(&self, k: &Scalar) -> Matrix {
        assert_eq!(k.field(), self.field);
        Matrix::from_fn(self.rows, self.cols, self.field, |r, c| {
            self.at(r, c).mul(k)
        })
    }

    /// Applicative-order product: `self * other` applies `other` first.
    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(
            self.cols, other.rows,
            "shape mismatch in mul: {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        assert_eq!(self.field, other.field);
        let mut out = Matrix::zero(self.rows, other.cols, self.field);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.at(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.at(r, c).add(&a.mul(b));
                    out.set(r, c, cur);
                }
            }
        }
        out
    }

    /// Stack vertically: `self` on top of `other`.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols);
        assert_eq!(self.field, other.field);
        Matrix::from_fn(self.rows + other.rows, self.cols, self.field, |r, c| {
            if r < self.rows {
                self.at(r, c).clone()
            } else {
                other.at(r - self.rows, c).clone()
            }
        })
    }

    /// Stack horizontally: `self` to the left of `other`.
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows);
        assert_eq!(self.field, other.field);
        Matrix::from_fn(self.rows, self.cols + other.cols, self.field, |r, c| {
            if c < self.cols {
                self.at(r, c).clone()
            } else {
                other.at(r, c - self.cols).clone()
            }
        })
    }

    pub fn vstack_all(field: FieldSpec, cols: usize, parts: &[Matrix]) -> Matrix {
        let mut acc = Matrix::zero(0, cols, field);
        for p in parts {
            acc = acc.vstack(p);
        }
        acc
    }

    pub fn hstack_all(field: FieldSpec, rows: usize, parts: &[Matrix]) -> Matrix {
        let mut acc = Matrix::zero(rows, 0, field);
        for p in parts {
            acc = acc.hstack(p);
        }
        acc
    }

    /// Block-diagonal assembly.
    pub fn block_diag(field: FieldSpec, blocks: &[Matrix]) -> Matrix {
        let rows: usize = blocks.iter().map(|b| b.rows).sum();
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zero(rows, cols, field);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            assert_eq!(b.field, field);
            for r in 0..b.rows {
                for c in 0..b.cols {
                    out.set(r0 + r, c0 + c, b.at(r, c).clone());
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// Extract the block with the given row/column ranges.
    pub fn slice(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Matrix {
        assert!(r0 <= r1 && r1 <= self.rows && c0 <= c1 && c1 <= self.cols);
        Matrix::from_fn(r1 - r0, c1 - c0, self.field, |r, c| {
            self.at(r0 + r, c0 + c).clone()
        })
    }

    pub fn column(&self, c: usize) -> Matrix {
        self.slice(0, self.rows, c, c + 1)
    }

    /// Flatten row-major into a single column vector.
    pub fn vec_flatten(&self) -> Matrix {
        Matrix::from_fn(self.rows * self.cols, 1, self.field, |i, _| {
            self.entries[i].clone()
        })
    }

    /// Inverse of `vec_flatten`.
    pub fn vec_unflatten(v: &Matrix, rows: usize, cols: usize) -> Matrix {
        assert_eq!(v.cols, 1);
        assert_eq!(v.rows, rows * cols);
        Matrix::from_fn(rows, cols, v.field, |r, c| v.at(r * cols + c, 0).clone())
    }

    /// Canonical reduced row echelon form, pivoting left to right. Returns
    /// `(rref, pivot_columns)`. The RREF of a matrix is unique, which is what
    /// makes every downstream basis deterministic.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            // find a nonzero pivot in this column at or below `row`
            let Some(pr) = (row..m.rows).find(|&r| !m.at(r, col).is_zero()) else {
                continue;
            };
            if pr != row {
                for c in 0..m.cols {
                    let a = m.at(row, c).clone();
                    let b = m.at(pr, c).clone();
                    m.set(row, c, b);
                    m.set(pr, c, a);
                }
            }
            let inv = m.at(row, col).inv();
            for c in 0..m.cols {
                let v = m.at(row, c).mul(&inv);
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r != row && !m.at(r, col).is_zero() {
                    let factor = m.at(r, col).clone();
                    for c in 0..m.cols {
                        let v = m.at(r, c).sub(&factor.mul(m.at(row, c)));
                        m.set(r, c, v);
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

    /// Render all entries row-major, the fixture-file literal format.
    pub fn render_entries(&self) -> Vec<String> {
        self.entries.iter().map(|e| e.render()).collect()
    }

    /// Rebuild a matrix from the fixture-file literal format.
    pub fn from_entries(
        rows: usize,
        cols: usize,
        field: FieldSpec,
        entries: &[String],
    ) -> Result<Matrix, crate::scalar::ScalarParseError> {
        if entries.len() != rows * cols {
            return Err(crate::scalar::ScalarParseError(format!(
                "expected {} entries for a {}x{} matrix, got {}",
                rows * cols,
                rows,
                cols,
                entries.len()
            )));
        }
        let mut parsed = Vec::with_capacity(entries.len());
        for e in entries {
            parsed.push(field.parse_scalar(e)?);
        }
        Ok(Matrix {
            rows,
            cols,
            field,
            entries: parsed,
        })
    }
}

/// A subspace of `k^ambient_dim`, stored as a matrix whose columns form a
/// basis. Canonical: the transpose of the basis is in RREF, so equal
/// subspaces compare equal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Matrix,
}

impl Subspace {
    /// Canonicalize an arbitrary spanning set of columns into a subspace.
    pub fn from_spanning_columns(span: &Matrix) -> Subspace {
        let (r, pivots) = span.transpose().rref();
        let dim = pivots.len();
        let basis = r.slice(0, dim, 0, span.rows()).transpose();
        Subspace {
            ambient_dim: span.rows(),
            basis,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    /// Does `v` (a column vector) lie in this subspace?
    pub fn contains(&self, v: &Matrix) -> bool {
        assert_eq!(v.rows(), self.ambient_dim);
        assert_eq!(v.cols(), 1);
        solve_right(&self.basis, v).is_some()
    }

    /// Is `other` contained in `self`?
    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        assert_eq!(self.ambient_dim, other.ambient_dim);
        (0..other.dim()).all(|c| self.contains(&other.basis.column(c)))
    }
}

/// Canonical basis of the null space of `m`: for each free column of the
/// RREF, the vector with 1 there and the negated pivot-row entries above.
/// Composing `m` with the result is zero; the dimension is
/// `cols - rank(m)`.
pub fn kernel_basis(m: &Matrix) -> Subspace {
    let (r, pivots) = m.rref();
    let field = m.field();
    let free: Vec<usize> = (0..m.cols()).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Matrix::zero(m.cols(), free.len(), field);
    for (k, &fc) in free.iter().enumerate() {
        basis.set(fc, k, field.one());
        for (prow, &pc) in pivots.iter().enumerate() {
            let v = r.at(prow, fc).neg();
            basis.set(pc, k, v);
        }
    }
    Subspace {
        ambient_dim: m.cols(),
        basis,
    }
}

/// A surjection `q` with `q * m = 0` and `rows(q) = rows(m) - rank(m)`,
/// universal among maps killing the image of `m`. Computed as the transposed
/// kernel of the transpose, hence canonical.
pub fn cokernel_projection(m: &Matrix) -> Matrix {
    kernel_basis(&m.transpose()).basis().transpose()
}

/// Decompose `m = mono * epi` with `epi` of full row rank and `mono` of full
/// column rank; the shared middle dimension is `rank(m)`.
pub fn epi_mono_factorization(m: &Matrix) -> (Matrix, Matrix) {
    // canonical column-space basis: nonzero rows of RREF(m^T), transposed
    let mono = Subspace::from_spanning_columns(m).basis().clone();
    let epi = solve_right(&mono, m).expect("column space basis must span the columns");
    debug_assert_eq!(mono.mul(&epi), *m);
    (epi, mono)
}

/// Solve `a * x = b` for `x`; `None` when some column of `b` is outside the
/// column space of `a`. The solution is canonical: free variables are zero.
pub fn solve_right(a: &Matrix, b: &Matrix) -> Option<Matrix> {
    assert_eq!(a.rows(), b.rows(), "solve_right: row mismatch");
    assert_eq!(a.field(), b.field());
    let aug = a.hstack(b);
    let (r, pivots) = aug.rref();
    // any pivot in the b-part means inconsistency
    if pivots.iter().any(|&p| p >= a.cols()) {
        return None;
    }
    let field = a.field();
    let mut x = Matrix::zero(a.cols(), b.cols(), field);
    for (prow, &pc) in pivots.iter().enumerate() {
        for c in 0..b.cols() {
            x.set(pc, c, r.at(prow, a.cols() + c).clone());
        }
    }
    Some(x)
}

/// Solve `x * a = b` for `x` (the dual factorization, used for maps out of
/// quotients). `None` when unsolvable.
pub fn solve_left(a: &Matrix, b: &Matrix) -> Option<Matrix> {
    solve_right(&a.transpose(), &b.transpose()).map(|x| x.transpose())
}

/// Block injections and projections of the direct sum of the given
/// dimensions. Returned as `(injections, projections)`; they satisfy
/// `proj_i * inj_i = id`, `proj_j * inj_i = 0` for `i != j`, and
/// `sum_i inj_i * proj_i = id` on the total space.
pub fn biproduct(dims: &[usize], field: FieldSpec) -> (Vec<Matrix>, Vec<Matrix>) {
    let total: usize = dims.iter().sum();
    let mut injections = Vec::with_capacity(dims.len());
    let mut projections = Vec::with_capacity(dims.len());
    let mut offset = 0;
    for &d in dims {
        let mut inj = Matrix::zero(total, d, field);
        for i in 0..d {
            inj.set(offset + i, i, field.one());
        }
        projections.push(inj.transpose());
        injections.push(inj);
        offset += d;
    }
    (injections, projections)
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: FieldSpec = FieldSpec::Q;

    #[test]
    fn kernel_of_zero_map_is_everything() {
        let m = Matrix::zero(1, 1, Q);
        let k = kernel_basis(&m);
        assert_eq!(k.dim(), 1);
    }

    #[test]
    fn kernel_of_identity_is_zero() {
        for n in [1, 3] {
            let k = kernel_basis(&Matrix::identity(n, Q));
            assert_eq!(k.dim(), 0);
        }
    }

    #[test]
    fn kernel_rank_one_matrix() {
        // [[1,2],[2,4]]: kernel spanned by (-2, 1)^T up to scale
        let m = Matrix::from_int_rows(Q, &[&[1, 2], &[2, 4]]);
        let k = kernel_basis(&m);
        assert_eq!(k.dim(), 1);
        assert!(m.mul(k.basis()).is_zero());
        let expect = Matrix::from_int_rows(Q, &[&[-2], &[1]]);
        assert!(k.contains(&expect));
    }

    #[test]
    fn cokernel_of_identity_is_empty() {
        let q = cokernel_projection(&Matrix::identity(3, Q));
        assert_eq!((q.rows(), q.cols()), (0, 3));
    }

    #[test]
    fn cokernel_of_map_from_zero_space() {
        // n x 0 matrix: cokernel is the identity on the target
        let m = Matrix::zero(3, 0, Q);
        let q = cokernel_projection(&m);
        assert!(q.is_identity());
    }

    #[test]
    fn cokernel_of_diagonal_embedding() {
        let m = Matrix::from_int_rows(Q, &[&[1], &[1]]);
        let q = cokernel_projection(&m);
        assert_eq!((q.rows(), q.cols()), (1, 2));
        assert!(q.mul(&m).is_zero());
        assert_eq!(q.rank(), 1);
        // proportional to [1, -1]
        assert_eq!(q.at(0, 0).mul(&q.at(0, 1).inv()).render(), "-1");
    }

    #[test]
    fn epi_mono_of_identity() {
        let m = Matrix::identity(4, Q);
        let (epi, mono) = epi_mono_factorization(&m);
        assert!(epi.is_identity());
        assert!(mono.is_identity());
    }

    #[test]
    fn epi_mono_of_zero() {
        let m = Matrix::zero(2, 3, Q);
        let (epi, mono) = epi_mono_factorization(&m);
        assert_eq!(epi.rows(), 0);
        assert_eq!(mono.cols(), 0);
        assert_eq!(mono.mul(&epi), m);
    }

    #[test]
    fn epi_mono_rank_one() {
        let m = Matrix::from_int_rows(Q, &[&[1, 1], &[1, 1]]);
        let (epi, mono) = epi_mono_factorization(&m);
        assert_eq!(epi.rows(), 1);
        assert_eq!(mono.cols(), 1);
        assert_eq!(mono.mul(&epi), m);
    }

    #[test]
    fn solve_identity_and_inconsistent() {
        let b = Matrix::from_int_rows(Q, &[&[5], &[7]]);
        let x = solve_right(&Matrix::identity(2, Q), &b).unwrap();
        assert_eq!(x, b);
        let zero = Matrix::zero(2, 2, Q);
        assert!(solve_right(&zero, &b).is_none());
    }

    #[test]
    fn solve_underdetermined_canonical() {
        // [[1,2]] x = [3] has canonical solution (3, 0)^T
        let a = Matrix::from_int_rows(Q, &[&[1, 2]]);
        let b = Matrix::from_int_rows(Q, &[&[3]]);
        let x = solve_right(&a, &b).unwrap();
        assert_eq!(x, Matrix::from_int_rows(Q, &[&[3], &[0]]));
        assert_eq!(a.mul(&x), b);
    }

    #[test]
    fn biproduct_identities() {
        for dims in [vec![3], vec![1, 1], vec![2, 3, 0]] {
            let total: usize = dims.iter().sum();
            let (inj, proj) = biproduct(&dims, Q);
            let mut sum = Matrix::zero(total, total, Q);
            for i in 0..dims.len() {
                assert!(proj[i].mul(&inj[i]).is_identity());
                for j in 0..dims.len() {
                    if i != j {
                        assert!(proj[j].mul(&inj[i]).is_zero());
                    }
                }
                sum = sum.add(&inj[i].mul(&proj[i]));
            }
            assert!(sum.is_identity());
        }
    }

    #[test]
    fn exactness_pairing() {
        // image of m equals kernel of its cokernel projection, as subspaces
        let m = Matrix::from_int_rows(Q, &[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        let q = cokernel_projection(&m);
        let ker_q = kernel_basis(&q);
        let im_m = Subspace::from_spanning_columns(&m);
        assert!(ker_q.contains_subspace(&im_m));
        assert!(im_m.contains_subspace(&ker_q));
        assert_eq!(kernel_basis(&m).dim() + m.rank(), m.cols());
    }

    #[test]
    fn rref_fp() {
        let f = FieldSpec::Fp(5);
        let m = Matrix::from_int_rows(f, &[&[2, 1], &[4, 2]]);
        assert_eq!(m.rank(), 1);
        let k = kernel_basis(&m);
        assert_eq!(k.dim(), 1);
        assert!(m.mul(k.basis()).is_zero());
    }

    #[test]
    fn zero_dimensional_edge_cases() {
        let m = Matrix::zero(0, 0, Q);
        assert_eq!(kernel_basis(&m).dim(), 0);
        assert_eq!(cokernel_projection(&m).rows(), 0);
        let (e, mo) = epi_mono_factorization(&m);
        assert_eq!((e.rows(), mo.cols()), (0, 0));
        let m2 = Matrix::zero(0, 4, Q);
        assert_eq!(kernel_basis(&m2).dim(), 4);
    }
}
