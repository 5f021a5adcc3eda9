//! Division-free characteristic polynomials over commutative rings.

use crate::error::{Error, Result};
use crate::ring::Ring;

/// `det(X I - A)` by Berkowitz's recurrence, constant term first.
///
/// Uses only ring operations, so it is valid over any commutative ring
/// (polynomial rings, group algebras, truncated residue rings).
pub fn berkowitz_charpoly<R: Ring>(ring: &R, a: &[Vec<R::Elem>]) -> Result<Vec<R::Elem>> {
    let n = a.len();
    if let Some(row) = a.iter().find(|row| row.len() != n) {
        return Err(Error::NonSquare { rows: n, cols: row.len() });
    }
    // p holds the charpoly of the leading r x r block, highest degree first.
    let mut p = vec![ring.one()];
    for r in 0..n {
        // Toeplitz first column: 1, -a_rr, -R C, -R A C, ..., -R A^{r-1} C.
        let mut col = Vec::with_capacity(r + 2);
        col.push(ring.one());
        col.push(ring.neg(&a[r][r]));
        let mut v: Vec<R::Elem> = (0..r).map(|i| a[i][r].clone()).collect();
        for k in 0..r {
            let rc = ring.sum(&(0..r).map(|j| ring.mul(&a[r][j], &v[j])).collect::<Vec<_>>());
            col.push(ring.neg(&rc));
            if k + 1 < r {
                v = (0..r)
                    .map(|i| ring.sum(&(0..r).map(|j| ring.mul(&a[i][j], &v[j])).collect::<Vec<_>>()))
                    .collect();
            }
        }
        let mut next = Vec::with_capacity(r + 2);
        for i in 0..r + 2 {
            let mut acc = ring.zero();
            for (j, pj) in p.iter().enumerate() {
                if i >= j && !ring.is_zero(pj) {
                    acc = ring.add(&acc, &ring.mul(&col[i - j], pj));
                }
            }
            next.push(acc);
        }
        p = next;
    }
    p.reverse();
    Ok(p)
}

/// `det(A)` via the characteristic polynomial: `(-1)^n * charpoly(0)`.
pub fn determinant<R: Ring>(ring: &R, a: &[Vec<R::Elem>]) -> Result<R::Elem> {
    let cp = berkowitz_charpoly(ring, a)?;
    let c0 = cp[0].clone();
    Ok(if a.len() % 2 == 1 { ring.neg(&c0) } else { c0 })
}

/// Product of two square matrices over a ring.
pub fn mat_mul<R: Ring>(ring: &R, a: &[Vec<R::Elem>], b: &[Vec<R::Elem>]) -> Vec<Vec<R::Elem>> {
    let n = a.len();
    let m = b.first().map_or(0, |r| r.len());
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| ring.sum(&(0..b.len()).map(|k| ring.mul(&a[i][k], &b[k][j])).collect::<Vec<_>>()))
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fq;
    use crate::linalg::FqMat;
    use crate::ring::Ring;
    use proptest::prelude::*;

    /// Cayley-Hamilton: `p(A) = 0`.
    fn eval_at_matrix(fq: &Fq, p: &[u32], a: &FqMat) -> FqMat {
        let n = a.rows();
        let mut acc = FqMat::zeros(n, n);
        for c in p.iter().rev() {
            acc = acc.mul(fq, a).add(fq, &FqMat::identity(n).scale(fq, *c));
        }
        acc
    }

    #[test]
    fn two_by_two() {
        let fq = Fq::prime_field(7).unwrap();
        let cp = berkowitz_charpoly(&fq, &[vec![1, 2], vec![3, 4]]).unwrap();
        // X^2 - 5X - 2
        assert_eq!(cp, vec![fq.from_int(-2), fq.from_int(-5), 1]);
        assert!(matches!(berkowitz_charpoly(&fq, &[vec![1, 2]]), Err(Error::NonSquare { .. })));
    }

    proptest! {
        #[test]
        fn cayley_hamilton(n in 1usize..6, seed in prop::collection::vec(0u32..5, 36)) {
            let fq = Fq::prime_field(5).unwrap();
            let rows: Vec<Vec<u32>> = (0..n).map(|i| seed[i * n..(i + 1) * n].to_vec()).collect();
            let cp = berkowitz_charpoly(&fq, &rows).unwrap();
            prop_assert_eq!(cp.len(), n + 1);
            prop_assert_eq!(cp[n], 1);
            let m = FqMat::from_rows(&rows, n);
            prop_assert!(eval_at_matrix(&fq, &cp, &m).is_zero());
            let det = determinant(&fq, &rows).unwrap();
            prop_assert_eq!(det == 0, m.rank(&fq) < n);
        }
    }
}
