//! Dense linear algebra over GF(p^e): matrices, row reduction, kernels,
//! canonical subspaces.
//!
//! Vectors are plain `Vec<u32>` of raw field encodings. Matrices are row-major;
//! an operator matrix `A` acts on column vectors, `y = A x`.

use std::fmt;

use crate::field::Field;

#[derive(Clone, PartialEq, Eq, Hash, serde::Serialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows.min(16) {
            writeln!(f, "  {:?}", &self.row(r)[..self.cols.min(24)])?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Matrix {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<u32>) -> Matrix {
        assert_eq!(data.len(), rows * cols);
        Matrix { rows, cols, data }
    }

    pub fn from_rows(cols: usize, rows: &[Vec<u32>]) -> Matrix {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols);
            data.extend_from_slice(r);
        }
        Matrix { rows: rows.len(), cols, data }
    }

    /// The matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<u32>]) -> Matrix {
        let mut m = Matrix::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for i in 0..rows {
                m.data[i * m.cols + j] = c[i];
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
    pub fn data(&self) -> &[u32] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }
    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v;
    }
    #[inline]
    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }
    #[inline]
    pub fn row_mut(&mut self, r: usize) -> &mut [u32] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }
    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }
    pub fn row_vecs(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }
    pub fn column_vecs(&self) -> Vec<Vec<u32>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn push_row(&mut self, row: &[u32]) {
        assert_eq!(row.len(), self.cols);
        self.data.extend_from_slice(row);
        self.rows += 1;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        t
    }

    pub fn mul(&self, f: &Field, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let (orow_start, orow_end) = (i * other.cols, (i + 1) * other.cols);
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a != 0 {
                    f.axpy(&mut out.data[orow_start..orow_end], a, other.row(k));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, f: &Field, v: &[u32]) -> Vec<u32> {
        assert_eq!(self.cols, v.len());
        (0..self.rows).map(|r| f.dot(self.row(r), v)).collect()
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, f: &Field, v: &[u32]) -> Vec<u32> {
        assert_eq!(self.rows, v.len());
        let mut out = vec![0; self.cols];
        for (k, &a) in v.iter().enumerate() {
            if a != 0 {
                f.axpy(&mut out, a, self.row(k));
            }
        }
        out
    }

    pub fn add(&self, f: &Field, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add_raw(a, b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, f: &Field, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub_raw(a, b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scaled(&self, f: &Field, a: u32) -> Matrix {
        let mut m = self.clone();
        f.scale(&mut m.data, a);
        m
    }

    pub fn pow(&self, f: &Field, mut k: u64) -> Matrix {
        assert!(self.is_square());
        let mut r = Matrix::identity(self.rows);
        let mut b = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                r = r.mul(f, &b);
            }
            b = b.mul(f, &b);
            k >>= 1;
        }
        r
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &Matrix) -> Matrix {
        let mut m = Matrix::zeros(self.rows + other.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(r, c, self.get(r, c));
            }
        }
        for r in 0..other.rows {
            for c in 0..other.cols {
                m.set(self.rows + r, self.cols + c, other.get(r, c));
            }
        }
        m
    }

    /// Sub-matrix of the given columns.
    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                m.set(r, j, self.get(r, c));
            }
        }
        m
    }

    pub fn rank(&self, f: &Field) -> usize {
        let mut m = self.clone();
        rref(f, &mut m).len()
    }

    /// Right null space `{x : A x = 0}`, basis returned as rows.
    pub fn kernel(&self, f: &Field) -> Matrix {
        let mut m = self.clone();
        let pivots = rref(f, &mut m);
        kernel_from_rref(f, &m, &pivots)
    }

    /// Left null space `{y : y A = 0}`, basis returned as rows.
    pub fn left_kernel(&self, f: &Field) -> Matrix {
        self.transpose().kernel(f)
    }

    pub fn inverse(&self, f: &Field) -> Option<Matrix> {
        assert!(self.is_square());
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for r in 0..n {
            aug.row_mut(r)[..n].copy_from_slice(self.row(r));
            aug.set(r, n + r, 1);
        }
        let pivots = rref(f, &mut aug);
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        let mut inv = Matrix::zeros(n, n);
        for r in 0..n {
            inv.row_mut(r).copy_from_slice(&aug.row(r)[n..]);
        }
        Some(inv)
    }

    /// Some solution of `A x = b`, if one exists.
    pub fn solve(&self, f: &Field, b: &[u32]) -> Option<Vec<u32>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Matrix::zeros(self.rows, self.cols + 1);
        for r in 0..self.rows {
            aug.row_mut(r)[..self.cols].copy_from_slice(self.row(r));
            aug.set(r, self.cols, b[r]);
        }
        let pivots = rref(f, &mut aug);
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![0; self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug.get(r, self.cols);
        }
        Some(x)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && (0..self.rows).all(|r| (0..self.cols).all(|c| self.get(r, c) == (r == c) as u32))
    }
}

/// Reduces `m` in place to reduced row echelon form; returns the pivot columns.
/// Zero rows end up at the bottom.
pub fn rref(f: &Field, m: &mut Matrix) -> Vec<usize> {
    let (rows, cols) = (m.rows, m.cols);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| m.data[i * cols + c] != 0) else {
            continue;
        };
        if pr != r {
            for k in 0..cols {
                m.data.swap(pr * cols + k, r * cols + k);
            }
        }
        let inv = f.inv_raw(m.data[r * cols + c]);
        f.scale(&mut m.data[r * cols..(r + 1) * cols], inv);
        let pivot_row: Vec<u32> = m.data[r * cols + c..(r + 1) * cols].to_vec();
        for i in 0..rows {
            if i != r {
                let a = m.data[i * cols + c];
                if a != 0 {
                    let na = f.neg_raw(a);
                    f.axpy(&mut m.data[i * cols + c..(i + 1) * cols], na, &pivot_row);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

fn kernel_from_rref(f: &Field, m: &Matrix, pivots: &[usize]) -> Matrix {
    let cols = m.cols;
    let mut is_pivot = vec![false; cols];
    for &p in pivots {
        is_pivot[p] = true;
    }
    let free: Vec<usize> = (0..cols).filter(|&c| !is_pivot[c]).collect();
    let mut k = Matrix::zeros(free.len(), cols);
    for (j, &fc) in free.iter().enumerate() {
        k.set(j, fc, 1);
        for (r, &pc) in pivots.iter().enumerate() {
            let a = m.get(r, fc);
            if a != 0 {
                k.set(j, pc, f.neg_raw(a));
            }
        }
    }
    k
}

/// Incremental echelon basis: supports fast membership tests and insertion.
#[derive(Clone, Debug)]
pub struct SpanBuilder {
    ambient: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl SpanBuilder {
    pub fn new(ambient: usize) -> SpanBuilder {
        SpanBuilder { ambient, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    /// Reduces `v` against the current rows in place.
    pub fn reduce(&self, f: &Field, v: &mut [u32]) {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = v[p];
            if c != 0 {
                f.axpy(v, f.neg_raw(c), row);
            }
        }
    }

    pub fn contains(&self, f: &Field, v: &[u32]) -> bool {
        let mut w = v.to_vec();
        self.reduce(f, &mut w);
        w.iter().all(|&x| x == 0)
    }

    /// Inserts `v`; returns whether the span grew.
    pub fn insert(&mut self, f: &Field, v: &[u32]) -> bool {
        assert_eq!(v.len(), self.ambient);
        let mut w = v.to_vec();
        self.reduce(f, &mut w);
        match w.iter().position(|&x| x != 0) {
            None => false,
            Some(p) => {
                let inv = f.inv_raw(w[p]);
                f.scale(&mut w, inv);
                self.rows.push(w);
                self.pivots.push(p);
                true
            }
        }
    }

    pub fn into_subspace(self, f: &Field) -> Subspace {
        Subspace::from_rows(f, self.ambient, &self.rows)
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }
}

/// A subspace of `F^ambient` with a canonical RREF basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Subspace {
        Subspace { ambient, basis: Matrix::zeros(0, ambient), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> Subspace {
        Subspace { ambient, basis: Matrix::identity(ambient), pivots: (0..ambient).collect() }
    }

    pub fn from_rows(f: &Field, ambient: usize, rows: &[Vec<u32>]) -> Subspace {
        let mut m = Matrix::from_rows(ambient, rows);
        Subspace::from_matrix(f, &mut m)
    }

    /// Row space of `m` (consumed as scratch).
    pub fn from_matrix(f: &Field, m: &mut Matrix) -> Subspace {
        let ambient = m.cols();
        let pivots = rref(f, m);
        let r = pivots.len();
        let basis = Matrix::from_vec(r, ambient, m.data[..r * ambient].to_vec());
        Subspace { ambient, basis, pivots }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }
    pub fn dim(&self) -> usize {
        self.basis.rows()
    }
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }
    pub fn basis_vecs(&self) -> Vec<Vec<u32>> {
        self.basis.row_vecs()
    }
    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    /// Residual of `v` after clearing pivot coordinates.
    pub fn reduce(&self, f: &Field, v: &[u32]) -> Vec<u32> {
        let mut w = v.to_vec();
        for (r, &p) in self.pivots.iter().enumerate() {
            let c = w[p];
            if c != 0 {
                f.axpy(&mut w, f.neg_raw(c), self.basis.row(r));
            }
        }
        w
    }

    pub fn contains(&self, f: &Field, v: &[u32]) -> bool {
        self.reduce(f, v).iter().all(|&x| x == 0)
    }

    pub fn contains_subspace(&self, f: &Field, other: &Subspace) -> bool {
        (0..other.dim()).all(|r| self.contains(f, other.basis.row(r)))
    }

    /// Coordinates of `v` in the RREF basis, if `v` lies in the subspace.
    pub fn coordinates(&self, f: &Field, v: &[u32]) -> Option<Vec<u32>> {
        let coords: Vec<u32> = self.pivots.iter().map(|&p| v[p]).collect();
        let recon = self.basis.vec_mul(f, &coords);
        (recon == v).then_some(coords)
    }

    pub fn sum(&self, f: &Field, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        let mut rows = self.basis_vecs();
        rows.extend(other.basis_vecs());
        Subspace::from_rows(f, self.ambient, &rows)
    }

    pub fn intersect(&self, f: &Field, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        let n = self.ambient;
        if self.dim() == 0 || other.dim() == 0 {
            return Subspace::zero(n);
        }
        // Zassenhaus: rows [u | u] and [w | 0]
        let mut m = Matrix::zeros(self.dim() + other.dim(), 2 * n);
        for r in 0..self.dim() {
            let row = self.basis.row(r);
            m.row_mut(r)[..n].copy_from_slice(row);
            m.row_mut(r)[n..].copy_from_slice(row);
        }
        for r in 0..other.dim() {
            m.row_mut(self.dim() + r)[..n].copy_from_slice(other.basis.row(r));
        }
        let pivots = rref(f, &mut m);
        let rows: Vec<Vec<u32>> =
            pivots.iter().enumerate().filter(|(_, &c)| c >= n).map(|(r, _)| m.row(r)[n..].to_vec()).collect();
        Subspace::from_rows(f, n, &rows)
    }

    /// Vectors of `self` completing a basis of `sub` (assumed contained) to one of `self`.
    /// The choice is canonical: basis rows of `self` whose pivots are not
    /// pivots of `sub`, reduced against `sub`.
    pub fn complement_of(&self, f: &Field, sub: &Subspace) -> Vec<Vec<u32>> {
        let mut builder = SpanBuilder::new(self.ambient);
        for r in 0..sub.dim() {
            builder.insert(f, sub.basis.row(r));
        }
        let mut out = Vec::new();
        for r in 0..self.dim() {
            let row = self.basis.row(r);
            if builder.insert(f, row) {
                out.push(sub.reduce(f, row));
            }
        }
        out
    }

    /// Image under an operator matrix (acting on columns).
    pub fn image(&self, f: &Field, op: &Matrix) -> Subspace {
        let rows: Vec<Vec<u32>> = (0..self.dim()).map(|r| op.mul_vec(f, self.basis.row(r))).collect();
        Subspace::from_rows(f, op.rows(), &rows)
    }

    pub fn is_stable_under(&self, f: &Field, op: &Matrix) -> bool {
        (0..self.dim()).all(|r| self.contains(f, &op.mul_vec(f, self.basis.row(r))))
    }
}

/// Expresses vectors in a fixed (not necessarily echelon) basis.
#[derive(Clone, Debug)]
pub struct CoordinateSolver {
    ambient: usize,
    echelon: Matrix,
    pivots: Vec<usize>,
    /// `transform * basis = echelon`
    transform: Matrix,
}

impl CoordinateSolver {
    /// Returns `None` when the given vectors are dependent.
    pub fn new(f: &Field, ambient: usize, basis: &[Vec<u32>]) -> Option<CoordinateSolver> {
        let k = basis.len();
        let mut aug = Matrix::zeros(k, ambient + k);
        for (r, v) in basis.iter().enumerate() {
            aug.row_mut(r)[..ambient].copy_from_slice(v);
            aug.set(r, ambient + r, 1);
        }
        let pivots = rref(f, &mut aug);
        if pivots.len() < k || pivots.iter().any(|&c| c >= ambient) {
            return None;
        }
        let mut echelon = Matrix::zeros(k, ambient);
        let mut transform = Matrix::zeros(k, k);
        for r in 0..k {
            echelon.row_mut(r).copy_from_slice(&aug.row(r)[..ambient]);
            transform.row_mut(r).copy_from_slice(&aug.row(r)[ambient..]);
        }
        Some(CoordinateSolver { ambient, echelon, pivots, transform })
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    /// Coordinates `c` with `v = sum c_i basis_i`, if `v` is in the span.
    pub fn coords(&self, f: &Field, v: &[u32]) -> Option<Vec<u32>> {
        assert_eq!(v.len(), self.ambient);
        let e: Vec<u32> = self.pivots.iter().map(|&p| v[p]).collect();
        if self.echelon.vec_mul(f, &e) != v {
            return None;
        }
        Some(self.transform.vec_mul(f, &e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field;

    #[test]
    fn rref_and_kernel() {
        let f = make_field(3, 1).unwrap();
        let a = Matrix::from_rows(3, &[vec![1, 2, 0], vec![2, 1, 0], vec![0, 0, 1]]);
        // rows 1 and 2 are proportional mod 3 (2*(1,2,0) = (2,1,0))
        assert_eq!(a.rank(&f), 2);
        let k = a.kernel(&f);
        assert_eq!(k.rows(), 1);
        assert!(a.mul_vec(&f, k.row(0)).iter().all(|&x| x == 0));
    }

    #[test]
    fn inverse_round_trip() {
        let f = make_field(2, 2).unwrap();
        let a = Matrix::from_rows(2, &[vec![2, 1], vec![1, 1]]);
        let inv = a.inverse(&f).unwrap();
        assert!(a.mul(&f, &inv).is_identity());
    }

    #[test]
    fn subspace_intersection_and_sum() {
        let f = make_field(2, 1).unwrap();
        let u = Subspace::from_rows(&f, 4, &[vec![1, 1, 0, 0], vec![0, 0, 1, 1]]);
        let w = Subspace::from_rows(&f, 4, &[vec![1, 1, 1, 1], vec![1, 0, 0, 0]]);
        let i = u.intersect(&f, &w);
        assert_eq!(i.dim(), 1);
        assert!(i.contains(&f, &[1, 1, 1, 1]));
        assert_eq!(u.sum(&f, &w).dim(), 3);
        let comp = u.sum(&f, &w).complement_of(&f, &u);
        assert_eq!(comp.len(), 1);
    }

    #[test]
    fn coordinate_solver() {
        let f = make_field(5, 1).unwrap();
        let basis = vec![vec![1, 2, 3], vec![0, 1, 4]];
        let s = CoordinateSolver::new(&f, 3, &basis).unwrap();
        let v: Vec<u32> = (0..3).map(|i| (2 * basis[0][i] + 3 * basis[1][i]) % 5).collect();
        assert_eq!(s.coords(&f, &v).unwrap(), vec![2, 3]);
        assert!(s.coords(&f, &[0, 0, 1]).is_none());
    }

    #[test]
    fn span_builder_matches_rref() {
        let f = make_field(3, 2).unwrap();
        let vs = vec![vec![1, 2, 0, 5], vec![3, 0, 1, 1], vec![4, 2, 1, 6], vec![0, 0, 0, 1]];
        let mut b = SpanBuilder::new(4);
        for v in &vs {
            b.insert(&f, v);
        }
        assert_eq!(b.into_subspace(&f), Subspace::from_rows(&f, 4, &vs));
    }
}
