//! Dense linear algebra over a prime field.
//!
//! Every matrix and subspace carries its own modulus; mixing moduli is an
//! error. Row reduction always picks the leftmost pivot column and the first
//! nonzero row below the current one, so echelon forms are reproducible.

use crate::error::{Error, Result};

/// Arithmetic in F_p with residues stored as `u32`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fp {
    p: u32,
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Fp {
    pub fn new(p: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Fp { p })
    }

    #[inline]
    pub fn p(self) -> u32 {
        self.p
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub fn pow(self, mut a: u32, mut e: u64) -> u32 {
        let mut r = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    /// Multiplicative inverse; `a` must be nonzero.
    pub fn inv(self, a: u32) -> u32 {
        debug_assert!(!a.is_multiple_of(self.p));
        self.pow(a, (self.p - 2) as u64)
    }

    /// Reduces a signed integer into `[0, p)`.
    pub fn from_i64(self, a: i64) -> u32 {
        a.rem_euclid(self.p as i64) as u32
    }

    /// Symmetric representative in `(-p/2, p/2]`, handy for display.
    pub fn signed(self, a: u32) -> i64 {
        if a > self.p / 2 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }

    /// `y += c * x`, elementwise.
    pub fn axpy(self, y: &mut [u32], c: u32, x: &[u32]) {
        if c == 0 {
            return;
        }
        let p = self.p as u64;
        let c = c as u64;
        for (yi, &xi) in y.iter_mut().zip(x) {
            if xi != 0 {
                *yi = ((*yi as u64 + c * xi as u64) % p) as u32;
            }
        }
    }

    pub fn scale(self, x: &mut [u32], c: u32) {
        for v in x.iter_mut() {
            *v = self.mul(*v, c);
        }
    }

    pub fn add_vec(self, a: &[u32], b: &[u32]) -> Vec<u32> {
        a.iter().zip(b).map(|(&x, &y)| self.add(x, y)).collect()
    }

    pub fn sub_vec(self, a: &[u32], b: &[u32]) -> Vec<u32> {
        a.iter().zip(b).map(|(&x, &y)| self.sub(x, y)).collect()
    }

    pub fn scaled(self, x: &[u32], c: u32) -> Vec<u32> {
        x.iter().map(|&v| self.mul(v, c)).collect()
    }
}

pub fn is_zero(v: &[u32]) -> bool {
    v.iter().all(|&x| x == 0)
}

/// A dense `rows x cols` matrix over F_p, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpMatrix {
    field: Fp,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl FpMatrix {
    pub fn zeros(p: u32, rows: usize, cols: usize) -> Result<Self> {
        Ok(FpMatrix {
            field: Fp::new(p)?,
            rows,
            cols,
            data: vec![0; rows * cols],
        })
    }

    pub fn identity(p: u32, n: usize) -> Result<Self> {
        let mut m = Self::zeros(p, n, n)?;
        for i in 0..n {
            m.data[i * n + i] = 1 % p;
        }
        Ok(m)
    }

    /// Builds a matrix from rows of arbitrary integers, reducing each entry.
    pub fn from_rows(p: u32, cols: usize, rows: &[Vec<i64>]) -> Result<Self> {
        let field = Fp::new(p)?;
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch(r.len(), cols));
            }
            data.extend(r.iter().map(|&x| field.from_i64(x)));
        }
        Ok(FpMatrix {
            field,
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Builds a matrix from already-reduced residue rows.
    pub fn from_residue_rows(field: Fp, cols: usize, rows: &[Vec<u32>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch(r.len(), cols));
            }
            data.extend(r.iter().map(|&x| x % field.p()));
        }
        Ok(FpMatrix {
            field,
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn field(&self) -> Fp {
        self.field
    }

    pub fn p(&self) -> u32 {
        self.field.p()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v % self.field.p();
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> FpMatrix {
        let mut out = FpMatrix {
            field: self.field,
            rows: self.cols,
            cols: self.rows,
            data: vec![0; self.data.len()],
        };
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.data[c * self.rows + r] = self.get(r, c);
            }
        }
        out
    }

    pub fn mul(&self, other: &FpMatrix) -> Result<FpMatrix> {
        if self.p() != other.p() {
            return Err(Error::ModulusMismatch(self.p(), other.p()));
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(self.cols, other.rows));
        }
        let f = self.field;
        let mut out = FpMatrix {
            field: f,
            rows: self.rows,
            cols: other.cols,
            data: vec![0; self.rows * other.cols],
        };
        for i in 0..self.rows {
            let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a != 0 {
                    f.axpy(dst, a, other.row(k));
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product `M v`.
    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        debug_assert_eq!(v.len(), self.cols);
        let p = self.p() as u64;
        (0..self.rows)
            .map(|r| {
                let s: u64 = self.row(r).iter().zip(v).map(|(&a, &b)| a as u64 * b as u64 % p).sum();
                (s % p) as u32
            })
            .collect()
    }

    pub fn add(&self, other: &FpMatrix) -> Result<FpMatrix> {
        self.check_same_shape(other)?;
        let f = self.field;
        Ok(FpMatrix {
            field: f,
            rows: self.rows,
            cols: self.cols,
            data: f.add_vec(&self.data, &other.data),
        })
    }

    pub fn sub(&self, other: &FpMatrix) -> Result<FpMatrix> {
        self.check_same_shape(other)?;
        let f = self.field;
        Ok(FpMatrix {
            field: f,
            rows: self.rows,
            cols: self.cols,
            data: f.sub_vec(&self.data, &other.data),
        })
    }

    pub fn scale(&self, c: u32) -> FpMatrix {
        FpMatrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.field.scaled(&self.data, c % self.p()),
        }
    }

    pub fn pow(&self, mut e: u64) -> Result<FpMatrix> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch(self.rows, self.cols));
        }
        let mut base = self.clone();
        let mut acc = FpMatrix::identity(self.p(), self.rows)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            base = base.mul(&base)?;
            e >>= 1;
        }
        Ok(acc)
    }

    pub fn is_zero(&self) -> bool {
        is_zero(&self.data)
    }

    fn check_same_shape(&self, other: &FpMatrix) -> Result<()> {
        if self.p() != other.p() {
            return Err(Error::ModulusMismatch(self.p(), other.p()));
        }
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(self.rows * self.cols, other.rows * other.cols));
        }
        Ok(())
    }

    /// Inverse of a square matrix, `None` if singular.
    pub fn inverse(&self) -> Result<Option<FpMatrix>> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch(self.rows, self.cols));
        }
        let n = self.rows;
        let mut aug = FpMatrix::zeros(self.p(), n, 2 * n)?;
        for r in 0..n {
            for c in 0..n {
                aug.data[r * 2 * n + c] = self.get(r, c);
            }
            aug.data[r * 2 * n + n + r] = 1;
        }
        let (red, _, pivots) = rref_with_pivots(&aug);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Ok(None);
        }
        let mut out = FpMatrix::zeros(self.p(), n, n)?;
        for r in 0..n {
            for c in 0..n {
                out.data[r * n + c] = red.get(r, n + c);
            }
        }
        Ok(Some(out))
    }
}

/// Reduced row-echelon form and rank.
pub fn rref(m: &FpMatrix) -> (FpMatrix, usize) {
    let (r, rank, _) = rref_with_pivots(m);
    (r, rank)
}

/// Reduced row-echelon form, rank and pivot columns.
pub fn rref_with_pivots(m: &FpMatrix) -> (FpMatrix, usize, Vec<usize>) {
    let mut a = m.clone();
    let f = a.field;
    let (rows, cols) = (a.rows, a.cols);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| a.data[i * cols + c] != 0) else {
            continue;
        };
        if pr != r {
            for k in 0..cols {
                a.data.swap(pr * cols + k, r * cols + k);
            }
        }
        let inv = f.inv(a.data[r * cols + c]);
        for k in c..cols {
            a.data[r * cols + k] = f.mul(a.data[r * cols + k], inv);
        }
        let pivot_row: Vec<u32> = a.data[r * cols..(r + 1) * cols].to_vec();
        for i in 0..rows {
            if i != r {
                let factor = a.data[i * cols + c];
                if factor != 0 {
                    f.axpy(&mut a.data[i * cols..(i + 1) * cols], f.neg(factor), &pivot_row);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, r, pivots)
}

pub fn rank(m: &FpMatrix) -> usize {
    rref(m).1
}

/// Basis of the right null space `{v : M v = 0}`.
pub fn kernel(m: &FpMatrix) -> Subspace {
    let (red, rank, pivots) = rref_with_pivots(m);
    let f = m.field;
    let cols = m.cols;
    let mut is_pivot = vec![false; cols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let mut vectors = Vec::new();
    for free in (0..cols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![0u32; cols];
        v[free] = 1;
        for (r, &pc) in pivots.iter().enumerate().take(rank) {
            v[pc] = f.neg(red.get(r, free));
        }
        vectors.push(v);
    }
    Subspace::from_vectors(f, cols, vectors)
}

/// A subspace of F_p^n held as a reduced row-echelon basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    field: Fp,
    ambient: usize,
    /// Sorted by pivot column; each row has a 1 at its pivot and zeros at
    /// every other row's pivot.
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: Fp, ambient: usize) -> Self {
        Subspace {
            field,
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: Fp, ambient: usize) -> Self {
        let rows = (0..ambient)
            .map(|i| {
                let mut v = vec![0; ambient];
                v[i] = 1;
                v
            })
            .collect();
        Subspace {
            field,
            ambient,
            rows,
            pivots: (0..ambient).collect(),
        }
    }

    pub fn from_vectors<I>(field: Fp, ambient: usize, vectors: I) -> Self
    where
        I: IntoIterator<Item = Vec<u32>>,
    {
        let mut s = Subspace::zero(field, ambient);
        for v in vectors {
            s.insert(v);
        }
        s
    }

    pub fn field(&self) -> Fp {
        self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ambient
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduces `v` against the basis in place; returns true if the residue is zero.
    fn reduce(&self, v: &mut [u32]) -> bool {
        let f = self.field;
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let c = v[pc];
            if c != 0 {
                f.axpy(v, f.neg(c), row);
            }
        }
        is_zero(v)
    }

    /// Adds `v` to the span; returns true if the dimension grew.
    pub fn insert(&mut self, mut v: Vec<u32>) -> bool {
        debug_assert_eq!(v.len(), self.ambient);
        let f = self.field;
        for x in v.iter_mut() {
            *x %= f.p();
        }
        if self.reduce(&mut v) {
            return false;
        }
        let pc = v.iter().position(|&x| x != 0).unwrap();
        let inv = f.inv(v[pc]);
        f.scale(&mut v, inv);
        for row in self.rows.iter_mut() {
            let c = row[pc];
            if c != 0 {
                f.axpy(row, f.neg(c), &v);
            }
        }
        let at = self.pivots.partition_point(|&q| q < pc);
        self.pivots.insert(at, pc);
        self.rows.insert(at, v);
        true
    }

    pub fn contains(&self, v: &[u32]) -> Result<bool> {
        if v.len() != self.ambient {
            return Err(Error::DimensionMismatch(v.len(), self.ambient));
        }
        let mut w: Vec<u32> = v.iter().map(|&x| x % self.field.p()).collect();
        Ok(self.reduce(&mut w))
    }

    /// Coordinates of `v` with respect to the echelon basis, if `v` lies in the span.
    pub fn coordinates(&self, v: &[u32]) -> Option<Vec<u32>> {
        if v.len() != self.ambient {
            return None;
        }
        let coords: Vec<u32> = self.pivots.iter().map(|&pc| v[pc] % self.field.p()).collect();
        let mut w = v.to_vec();
        for (row, &c) in self.rows.iter().zip(&coords) {
            self.field.axpy(&mut w, self.field.neg(c), row);
        }
        is_zero(&w).then_some(coords)
    }

    /// Linear combination of the basis rows.
    pub fn combine(&self, coords: &[u32]) -> Vec<u32> {
        let mut v = vec![0; self.ambient];
        for (row, &c) in self.rows.iter().zip(coords) {
            self.field.axpy(&mut v, c, row);
        }
        v
    }

    fn check_compatible(&self, other: &Subspace) -> Result<()> {
        if self.field != other.field {
            return Err(Error::ModulusMismatch(self.field.p(), other.field.p()));
        }
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch(self.ambient, other.ambient));
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        let mut s = self.clone();
        for v in &other.rows {
            s.insert(v.clone());
        }
        Ok(s)
    }

    /// Intersection via the kernel of the stacked system `[S^T | -T^T]`.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        let f = self.field;
        let (k, l) = (self.dim(), other.dim());
        if k == 0 || l == 0 {
            return Ok(Subspace::zero(f, self.ambient));
        }
        let mut m = FpMatrix::zeros(f.p(), self.ambient, k + l)?;
        for (j, v) in self.rows.iter().enumerate() {
            for (i, &x) in v.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        for (j, v) in other.rows.iter().enumerate() {
            for (i, &x) in v.iter().enumerate() {
                m.set(i, k + j, f.neg(x));
            }
        }
        let ker = kernel(&m);
        let vectors = ker.rows.iter().map(|sol| self.combine(&sol[..k]));
        Ok(Subspace::from_vectors(f, self.ambient, vectors))
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> Result<bool> {
        self.check_compatible(other)?;
        for v in &self.rows {
            if !other.contains(v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn as_matrix(&self) -> FpMatrix {
        FpMatrix::from_residue_rows(self.field, self.ambient, &self.rows).expect("rows have ambient length")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> Fp {
        Fp::new(5).unwrap()
    }

    #[test]
    fn field_arithmetic() {
        let f = f5();
        assert_eq!(f.inv(2), 3);
        assert_eq!(f.pow(2, 4), 1);
        assert_eq!(f.from_i64(-6), 4);
        assert_eq!(f.signed(4), -1);
        assert!(Fp::new(6).is_err());
        assert!(Fp::new(2).is_ok());
    }

    #[test]
    fn rref_identity_and_zero() {
        let id = FpMatrix::identity(5, 3).unwrap();
        assert_eq!(rref(&id), (id.clone(), 3));
        let z = FpMatrix::zeros(5, 2, 4).unwrap();
        assert_eq!(rref(&z), (z.clone(), 0));
    }

    #[test]
    fn rank_of_dependent_rows() {
        let m = FpMatrix::from_rows(5, 2, &[vec![1, 2], vec![2, 4]]).unwrap();
        assert_eq!(rank(&m), 1);
    }

    #[test]
    fn kernel_cases() {
        assert!(kernel(&FpMatrix::identity(5, 4).unwrap()).is_zero());
        assert!(kernel(&FpMatrix::zeros(5, 3, 3).unwrap()).is_full());
        let m = FpMatrix::from_rows(5, 2, &[vec![1, 2]]).unwrap();
        let k = kernel(&m);
        // Brute force over all 25 vectors of F_5^2.
        let mut annihilated = Vec::new();
        for a in 0..5 {
            for b in 0..5 {
                if (a + 2 * b) % 5 == 0 {
                    annihilated.push(vec![a, b]);
                }
            }
        }
        assert_eq!(annihilated.len(), 5);
        assert_eq!(k.dim(), 1);
        for v in &annihilated {
            assert!(k.contains(v).unwrap());
        }
        assert!(k.contains(&[3, 1]).unwrap());
    }

    #[test]
    fn subspace_operations() {
        let f = f5();
        let e1 = Subspace::from_vectors(f, 2, [vec![1, 0]]);
        let e2 = Subspace::from_vectors(f, 2, [vec![0, 1]]);
        let e12 = Subspace::from_vectors(f, 2, [vec![1, 1]]);
        assert!(e1.contains(&[1, 0]).unwrap());
        assert!(e1.intersect(&e2).unwrap().is_zero());
        assert!(e1.sum(&e12).unwrap().is_full());
        let other = Subspace::zero(Fp::new(7).unwrap(), 2);
        assert!(matches!(e1.sum(&other), Err(Error::ModulusMismatch(5, 7))));
        let wide = Subspace::zero(f, 3);
        assert!(matches!(e1.intersect(&wide), Err(Error::DimensionMismatch(2, 3))));
    }

    #[test]
    fn intersection_of_planes() {
        let f = f5();
        let s = Subspace::from_vectors(f, 3, [vec![1, 0, 0], vec![0, 1, 0]]);
        let t = Subspace::from_vectors(f, 3, [vec![0, 1, 0], vec![0, 0, 1]]);
        let i = s.intersect(&t).unwrap();
        assert_eq!(i.dim(), 1);
        assert!(i.contains(&[0, 3, 0]).unwrap());
    }

    #[test]
    fn inverse_roundtrip() {
        let m = FpMatrix::from_rows(7, 2, &[vec![1, 2], vec![3, 4]]).unwrap();
        let inv = m.inverse().unwrap().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), FpMatrix::identity(7, 2).unwrap());
        let sing = FpMatrix::from_rows(7, 2, &[vec![1, 2], vec![2, 4]]).unwrap();
        assert!(sing.inverse().unwrap().is_none());
    }
}
