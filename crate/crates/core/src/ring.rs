//! Ring objects.
//!
//! Rings are runtime values (a prime field needs its modulus, a group algebra
//! needs its group), so elements are plain data and every operation goes
//! through the ring object that created them.

use std::fmt::Debug;

use crate::field::Fq;

/// A commutative ring with identity.
pub trait Ring: Clone + Debug + Send + Sync {
    type Elem: Clone + PartialEq + Eq + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    /// Multiplicative inverse, if `a` is a unit.
    fn try_inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    /// Image of the integer `n` under `Z -> R`.
    fn from_int(&self, n: i64) -> Self::Elem {
        let mut acc = self.zero();
        let one = self.one();
        for _ in 0..n.unsigned_abs() {
            acc = self.add(&acc, &one);
        }
        if n < 0 {
            self.neg(&acc)
        } else {
            acc
        }
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    fn sum<'a, I>(&self, items: I) -> Self::Elem
    where
        I: IntoIterator<Item = &'a Self::Elem>,
        Self::Elem: 'a,
    {
        items.into_iter().fold(self.zero(), |acc, x| self.add(&acc, x))
    }
}

/// Marker for rings in which every nonzero element is a unit.
pub trait Field: Ring {
    fn inv(&self, a: &Self::Elem) -> Self::Elem {
        self.try_inv(a).expect("inverse of zero")
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.mul(a, &self.inv(b))
    }
}

/// A commutative F_q-algebra with its q-power Frobenius `x -> x^q`.
///
/// The Frobenius is exposed as a primitive: skew multiplication calls it in
/// its inner loop.
pub trait FqAlgebra: Ring {
    fn base_field(&self) -> &Fq;
    fn from_base(&self, c: u32) -> Self::Elem;
    fn frobenius(&self, a: &Self::Elem) -> Self::Elem;

    fn frobenius_pow(&self, a: &Self::Elem, k: usize) -> Self::Elem {
        let mut x = a.clone();
        for _ in 0..k {
            x = self.frobenius(&x);
        }
        x
    }

    fn scale(&self, c: u32, a: &Self::Elem) -> Self::Elem {
        self.mul(&self.from_base(c), a)
    }
}

/// An F_q-algebra that is finite dimensional over F_q, with fixed coordinates.
pub trait FiniteFqAlgebra: FqAlgebra {
    fn dim(&self) -> usize;
    fn coords(&self, a: &Self::Elem) -> Vec<u32>;
    fn from_coords(&self, c: &[u32]) -> Self::Elem;

    fn basis(&self) -> Vec<Self::Elem> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut c = vec![0u32; n];
                c[i] = 1;
                self.from_coords(&c)
            })
            .collect()
    }
}

/// Inverse in a finite F_q-algebra by solving `a * x = 1` in coordinates.
pub(crate) fn finite_algebra_inverse<R: FiniteFqAlgebra>(ring: &R, a: &R::Elem) -> Option<R::Elem> {
    use crate::linalg::FqMat;
    let fq = ring.base_field().clone();
    let n = ring.dim();
    let mut m = FqMat::zeros(n, n);
    for (j, b) in ring.basis().iter().enumerate() {
        let col = ring.coords(&ring.mul(a, b));
        for (i, c) in col.into_iter().enumerate() {
            m.set(i, j, c);
        }
    }
    let one = ring.coords(&ring.one());
    m.solve(&fq, &one).map(|x| ring.from_coords(&x))
}
