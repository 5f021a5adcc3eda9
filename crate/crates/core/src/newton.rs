//! Newton polygons of polynomials over `A`, and the unit-root factor of a
//! Frobenius characteristic polynomial by Hensel lifting.

use num_rational::Ratio;

use crate::charpoly::CharPolyResult;
use crate::error::{Error, Result};
use crate::field::{Fq, ResidueRing};
use crate::poly::PolyRing;
use crate::ring::Ring;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Place {
    /// the prime generated by a monic irreducible
    Finite(Vec<u32>),
    Infinity,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub slope: Ratio<i64>,
    pub length: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    pub vertices: Vec<(usize, i64)>,
    pub segments: Vec<Segment>,
}

/// Lower convex hull of `(i, val(a_i))` over the nonzero coefficients.
pub fn newton_polygon(fq: &Fq, f: &[Vec<u32>], place: &Place) -> Result<NewtonPolygon> {
    let a = PolyRing::new(fq.clone());
    let pts: Vec<(usize, i64)> = f
        .iter()
        .enumerate()
        .filter(|(_, c)| !a.normalize(c.to_vec()).is_empty())
        .map(|(i, c)| {
            let c = a.normalize(c.clone());
            let v = match place {
                Place::Infinity => -(a.degree(&c).unwrap() as i64),
                Place::Finite(w) => a.valuation(&c, w).expect("nonzero") as i64,
            };
            (i, v)
        })
        .collect();
    if pts.is_empty() {
        return Err(Error::InvalidArgument("Newton polygon of the zero polynomial".into()));
    }
    let mut hull: Vec<(usize, i64)> = Vec::new();
    for p in pts {
        while hull.len() >= 2 {
            let (x1, y1) = hull[hull.len() - 2];
            let (x2, y2) = hull[hull.len() - 1];
            // drop the middle point unless it lies strictly below the chord
            let cross = (x2 as i64 - x1 as i64) * (p.1 - y1) - (y2 - y1) * (p.0 as i64 - x1 as i64);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let segments = hull
        .windows(2)
        .map(|w| {
            let len = w[1].0 - w[0].0;
            Segment { slope: Ratio::new(w[1].1 - w[0].1, len as i64), length: len }
        })
        .collect();
    Ok(NewtonPolygon { vertices: hull, segments })
}

/// `g mod w0^N`: the monic factor of `P_v` whose roots are `w0`-adic units.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitRootFactor {
    /// `A/w0^N`
    pub ring: ResidueRing,
    pub precision: usize,
    /// monic, coefficients in `ring`
    pub g: Vec<Vec<u32>>,
    /// `P_v = X^k u mod w0` with `u(0) != 0`
    pub k: usize,
}

/// Split `f mod w0 = X^k u` and lift to `f = h g mod w0^N` with `h = X^k mod
/// w0`, `g = u mod w0`, by quadratic Hensel steps.
pub fn unit_root_factor(fq: &Fq, cp: &CharPolyResult, n: usize) -> Result<UnitRootFactor> {
    if n == 0 {
        return Err(Error::InvalidArgument("Hensel precision must be at least 1".into()));
    }
    let a = PolyRing::new(fq.clone());
    let w0 = &cp.w0;
    let modulus = a.pow(w0, n as u64);
    let ring = ResidueRing::new(fq, &modulus)?;
    let rx = PolyRing::new(ring.clone());
    let f: Vec<Vec<u32>> = rx.normalize(cp.coeffs.iter().map(|c| ring.reduce(c)).collect());

    let kf = ResidueRing::new(fq, w0)?;
    let kx = PolyRing::new(kf.clone());
    let fbar: Vec<Vec<u32>> = kx.normalize(cp.coeffs.iter().map(|c| kf.reduce(c)).collect());
    let k = fbar.iter().position(|c| !kf.is_zero(c)).expect("f is monic");
    let r = cp.r;

    let g = if k == r {
        rx.one()
    } else if k == 0 {
        f.clone()
    } else {
        let lift = |p: &[Vec<u32>]| -> Vec<Vec<u32>> { rx.normalize(p.iter().map(|c| ring.reduce(&kf.to_poly(c))).collect()) };
        let ubar: Vec<Vec<u32>> = fbar[k..].to_vec();
        let xk = kx.monomial(kf.one(), k);
        // s xk + t ubar = 1 over A/w0 with deg s < deg ubar
        let (gcd, s0, _) = kx.ext_gcd(&xk, &ubar);
        if gcd != kx.one() {
            return Err(Error::Internal("X^k and the unit part are not coprime".into()));
        }
        let s0 = kx.rem_monic(&s0, &ubar)?;
        let t0 = kx.div_exact_monic(&kx.sub(&kx.one(), &kx.mul(&s0, &xk)), &ubar)?;
        let (mut gg, mut hh, mut s, mut t) = (lift(&xk), lift(&ubar), lift(&s0), lift(&t0));
        let mut prec = 1;
        while prec < n {
            let e = rx.sub(&f, &rx.mul(&gg, &hh));
            let (q, rr) = rx.divmod_monic(&rx.mul(&s, &e), &hh)?;
            let g2 = rx.add(&rx.add(&gg, &rx.mul(&t, &e)), &rx.mul(&q, &gg));
            let h2 = rx.add(&hh, &rr);
            let b = rx.sub(&rx.add(&rx.mul(&s, &g2), &rx.mul(&t, &h2)), &rx.one());
            let (c, d) = rx.divmod_monic(&rx.mul(&s, &b), &h2)?;
            s = rx.sub(&s, &d);
            t = rx.sub(&rx.sub(&t, &rx.mul(&t, &b)), &rx.mul(&c, &g2));
            gg = g2;
            hh = h2;
            prec *= 2;
        }
        if rx.sub(&f, &rx.mul(&gg, &hh)) != rx.zero() {
            return Err(Error::Internal("Hensel lift does not factor P_v".into()));
        }
        hh
    };
    if g.len() - 1 != r - cp.height {
        return Err(Error::Internal(format!("unit-root factor has degree {}, expected r - h = {}", g.len() - 1, r - cp.height)));
    }
    Ok(UnitRootFactor { ring, precision: n, g, k })
}

impl UnitRootFactor {
    /// `g` divides `P_v` in `(A/w0^N)[X]`.
    pub fn divides(&self, cp: &CharPolyResult) -> bool {
        let rx = PolyRing::new(self.ring.clone());
        let f: Vec<Vec<u32>> = rx.normalize(cp.coeffs.iter().map(|c| self.ring.reduce(c)).collect());
        rx.rem_monic(&f, &self.g).is_ok_and(|r| r.is_empty())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charpoly::charpoly_motive;
    use crate::drinfeld::DrinfeldModule;

    #[test]
    fn rank2_polygons_and_unit_root() {
        let fq = Fq::prime_field(2).unwrap();
        let f = vec![vec![0, 1], vec![1], vec![1]];
        let np = newton_polygon(&fq, &f, &Place::Finite(vec![0, 1])).unwrap();
        assert_eq!(np.segments, vec![Segment { slope: Ratio::from_integer(-1), length: 1 }, Segment { slope: Ratio::from_integer(0), length: 1 }]);
        let inf = newton_polygon(&fq, &f, &Place::Infinity).unwrap();
        assert_eq!(inf.segments, vec![Segment { slope: Ratio::new(1, 2), length: 2 }]);

        let red = DrinfeldModule::new(&fq, f.clone()).unwrap().reduce_mod(&[0, 1], 1).unwrap();
        let cp = charpoly_motive(&red).unwrap();
        let u = unit_root_factor(&fq, &cp, 2).unwrap();
        assert_eq!(u.g, vec![vec![1, 1], vec![1, 0]]);
        assert!(u.divides(&cp));
        for n in 1..=6 {
            assert!(unit_root_factor(&fq, &cp, n).unwrap().divides(&cp));
        }
    }

    #[test]
    fn carlitz_unit_root_is_trivial() {
        let fq = Fq::prime_field(3).unwrap();
        let red = DrinfeldModule::carlitz(&fq).reduce_mod(&[1, 0, 1], 2).unwrap();
        let cp = charpoly_motive(&red).unwrap();
        let u = unit_root_factor(&fq, &cp, 3).unwrap();
        assert_eq!(u.g.len(), 1);
        let inf = newton_polygon(&fq, &cp.coeffs, &Place::Infinity).unwrap();
        assert_eq!(inf.segments, vec![Segment { slope: Ratio::from_integer(2), length: 1 }]);
    }
}
