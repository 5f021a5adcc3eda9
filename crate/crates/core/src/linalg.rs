//! Dense linear algebra over `F_q`.

use crate::field::Fq;

/// Row-major matrix over `F_q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FqMat {
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl FqMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        FqMat { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<u32>], cols: usize) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged rows");
            m.data[i * cols..(i + 1) * cols].copy_from_slice(r);
        }
        m
    }

    pub fn from_cols(cols: &[Vec<u32>], rows: usize) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows, "ragged columns");
            for (i, &x) in c.iter().enumerate() {
                m.set(i, j, x);
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

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<u32> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn mul(&self, fq: &Fq, other: &FqMat) -> FqMat {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = FqMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                let orow = other.row(k);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(orow) {
                    if b != 0 {
                        *d = fq.fadd(*d, fq.fmul(a, b));
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, fq: &Fq, v: &[u32]) -> Vec<u32> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i).iter().zip(v).fold(0, |acc, (&a, &b)| if a == 0 || b == 0 { acc } else { fq.fadd(acc, fq.fmul(a, b)) })
            })
            .collect()
    }

    pub fn add(&self, fq: &Fq, other: &FqMat) -> FqMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        FqMat { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&other.data).map(|(&a, &b)| fq.fadd(a, b)).collect() }
    }

    pub fn sub(&self, fq: &Fq, other: &FqMat) -> FqMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        FqMat { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&other.data).map(|(&a, &b)| fq.fsub(a, b)).collect() }
    }

    pub fn scale(&self, fq: &Fq, c: u32) -> FqMat {
        FqMat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| fq.fmul(c, a)).collect() }
    }

    pub fn pow(&self, fq: &Fq, mut e: u64) -> FqMat {
        assert_eq!(self.rows, self.cols);
        let mut acc = FqMat::identity(self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(fq, &base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(fq, &base);
            }
        }
        acc
    }

    /// Reduced row echelon form in place; returns pivot columns.
    pub fn rref_in_place(&mut self, fq: &Fq) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| self.get(i, c) != 0) else { continue };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
            }
            let inv = fq.finv(self.get(r, c)).unwrap();
            for j in c..self.cols {
                let v = self.get(r, j);
                self.set(r, j, fq.fmul(v, inv));
            }
            let pivot_row: Vec<u32> = self.row(r).to_vec();
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self.get(i, c);
                if f == 0 {
                    continue;
                }
                let nf = fq.fneg(f);
                for j in c..self.cols {
                    if pivot_row[j] != 0 {
                        let v = self.get(i, j);
                        self.set(i, j, fq.fma(nf, pivot_row[j], v));
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rref(&self, fq: &Fq) -> (FqMat, Vec<usize>) {
        let mut m = self.clone();
        let p = m.rref_in_place(fq);
        (m, p)
    }

    pub fn rank(&self, fq: &Fq) -> usize {
        self.rref(fq).1.len()
    }

    /// Basis of the right kernel `{x : M x = 0}`.
    pub fn kernel(&self, fq: &Fq) -> Vec<Vec<u32>> {
        let (r, pivots) = self.rref(fq);
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0u32; self.cols];
            v[free] = 1;
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = fq.fneg(r.get(i, free));
            }
            basis.push(v);
        }
        basis
    }

    /// Some solution of `M x = b`.
    pub fn solve(&self, fq: &Fq, b: &[u32]) -> Option<Vec<u32>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = FqMat::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, self.cols, b[i]);
        }
        let pivots = aug.rref_in_place(fq);
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![0u32; self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = aug.get(i, self.cols);
        }
        Some(x)
    }

    pub fn inverse(&self, fq: &Fq) -> Option<FqMat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = FqMat::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, 1);
        }
        let pivots = aug.rref_in_place(fq);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = FqMat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, aug.get(i, n + j));
            }
        }
        Some(inv)
    }
}

/// Incrementally maintained row-echelon basis of a subspace of `F_q^n`.
///
/// Each stored row remembers its expression in terms of the inserted
/// vectors, so membership tests can also return coordinates.
#[derive(Clone, Debug)]
pub struct Echelon {
    fq: Fq,
    n: usize,
    /// (pivot column, normalized row, combination of inserted vectors)
    rows: Vec<(usize, Vec<u32>, Vec<u32>)>,
    inserted: usize,
}

impl Echelon {
    pub fn new(fq: &Fq, n: usize) -> Self {
        Echelon { fq: fq.clone(), n, rows: Vec::new(), inserted: 0 }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    /// Reduce `v` against the basis; returns the residue and the combination
    /// `c` of inserted vectors with `v = residue + sum c_k w_k`.
    fn reduce_tracked(&self, v: &[u32]) -> (Vec<u32>, Vec<u32>) {
        let fq = &self.fq;
        let mut v = v.to_vec();
        let mut comb = vec![0u32; self.inserted];
        for (p, row, rc) in &self.rows {
            let f = v[*p];
            if f == 0 {
                continue;
            }
            let nf = fq.fneg(f);
            for (x, &r) in v.iter_mut().zip(row) {
                if r != 0 {
                    *x = fq.fma(nf, r, *x);
                }
            }
            for (x, &r) in comb.iter_mut().zip(rc) {
                if r != 0 {
                    *x = fq.fma(f, r, *x);
                }
            }
        }
        (v, comb)
    }

    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        self.reduce_tracked(v).0
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Coordinates of `v` in the inserted vectors (only independent ones are
    /// kept, in insertion order), or `None` if `v` is outside the span.
    pub fn express(&self, v: &[u32]) -> Option<Vec<u32>> {
        let (r, c) = self.reduce_tracked(v);
        r.iter().all(|&x| x == 0).then_some(c)
    }

    /// Insert `v`; returns `false` (and leaves the basis unchanged) if it is
    /// already in the span.
    pub fn insert(&mut self, v: &[u32]) -> bool {
        assert_eq!(v.len(), self.n);
        let (mut r, comb) = self.reduce_tracked(v);
        let Some(p) = r.iter().position(|&x| x != 0) else { return false };
        let fq = self.fq.clone();
        let inv = fq.finv(r[p]).unwrap();
        for x in r.iter_mut() {
            *x = fq.fmul(*x, inv);
        }
        // new row = (v - sum comb_k w_k) * inv, w_new = v
        let mut rc: Vec<u32> = comb.iter().map(|&c| fq.fneg(fq.fmul(c, inv))).collect();
        rc.push(inv);
        for (_, _, old) in self.rows.iter_mut() {
            old.push(0);
        }
        self.inserted += 1;
        self.rows.push((p, r, rc));
        true
    }

    /// The stored echelon rows.
    pub fn basis(&self) -> Vec<Vec<u32>> {
        self.rows.iter().map(|(_, r, _)| r.clone()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FqConfig;
    use proptest::prelude::*;

    fn f5() -> Fq {
        Fq::prime_field(5).unwrap()
    }

    #[test]
    fn inverse_roundtrip() {
        let fq = f5();
        let m = FqMat::from_rows(&[vec![1, 2], vec![3, 4]], 2);
        let inv = m.inverse(&fq).unwrap();
        assert_eq!(m.mul(&fq, &inv), FqMat::identity(2));
        let sing = FqMat::from_rows(&[vec![1, 2], vec![2, 4]], 2);
        assert!(sing.inverse(&fq).is_none());
        assert_eq!(sing.kernel(&fq), vec![vec![3, 1]]);
    }

    proptest! {
        #[test]
        fn rank_nullity(rows in prop::collection::vec(prop::collection::vec(0u32..4, 5), 1..6)) {
            let fq = Fq::new(&FqConfig { p: 2, deg: 2, modulus: None }).unwrap();
            let m = FqMat::from_rows(&rows, 5);
            let k = m.kernel(&fq);
            prop_assert_eq!(m.rank(&fq) + k.len(), 5);
            for v in &k {
                prop_assert!(m.mul_vec(&fq, v).iter().all(|&x| x == 0));
            }
        }

        #[test]
        fn echelon_express(vs in prop::collection::vec(prop::collection::vec(0u32..5, 4), 1..6), w in prop::collection::vec(0u32..5, 4)) {
            let fq = f5();
            let mut e = Echelon::new(&fq, 4);
            let mut kept = Vec::new();
            for v in &vs {
                if e.insert(v) {
                    kept.push(v.clone());
                }
            }
            if let Some(c) = e.express(&w) {
                let mut acc = vec![0u32; 4];
                for (ci, v) in c.iter().zip(&kept) {
                    for (a, &x) in acc.iter_mut().zip(v) {
                        *a = fq.fma(*ci, x, *a);
                    }
                }
                prop_assert_eq!(acc, w);
            } else {
                let m = FqMat::from_rows(&kept, 4);
                prop_assert!(m.rank(&fq) < 4);
            }
        }
    }
}
