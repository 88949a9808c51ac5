//! Heights of rational and integral points, and the congruence-support
//! lemmas: the primes where two points collide mod p are exactly the
//! primes dividing a gcd of minors (projective) or of coordinate
//! differences (integral), and the log-sum over them is bounded by the
//! points' heights.

use crate::arith::{cmul, csub, gcd_i128, prime_factors_u128};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Point of projective space with integer coordinates, stored reduced:
/// coordinate gcd 1, first nonzero coordinate positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ProjPoint {
    c: Vec<i128>,
}

/// Point of Z^n; nothing is normalized.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntPoint {
    c: Vec<i128>,
}

impl ProjPoint {
    /// Reduce homogeneous coordinates: divide out the gcd and normalize
    /// the sign of the first nonzero coordinate.
    pub fn new(coords: &[i128]) -> Result<ProjPoint> {
        if coords.is_empty() || coords.iter().all(|&c| c == 0) {
            return Err(Error::Domain(
                "projective point needs a nonzero coordinate".into(),
            ));
        }
        let mut g = 0i128;
        for &c in coords {
            g = gcd_i128(g, c);
        }
        let mut c: Vec<i128> = coords.iter().map(|&v| v / g).collect();
        if c.iter().find(|&&v| v != 0).copied().unwrap_or(1) < 0 {
            for v in &mut c {
                *v = -*v;
            }
        }
        Ok(ProjPoint { c })
    }

    pub fn coords(&self) -> &[i128] {
        &self.c
    }

    pub fn dim(&self) -> usize {
        self.c.len()
    }

    /// H(P): max absolute coordinate of the reduced representative.
    pub fn height(&self) -> i128 {
        self.c.iter().map(|&v| v.abs()).max().unwrap_or(0)
    }
}

impl IntPoint {
    pub fn new(coords: &[i128]) -> IntPoint {
        IntPoint {
            c: coords.to_vec(),
        }
    }

    pub fn coords(&self) -> &[i128] {
        &self.c
    }

    pub fn dim(&self) -> usize {
        self.c.len()
    }

    /// Sup norm of the point itself.
    pub fn norm(&self) -> i128 {
        self.c.iter().map(|&v| v.abs()).max().unwrap_or(0)
    }

    /// Sup norm of the difference.
    pub fn dist_sup(&self, other: &IntPoint) -> Result<i128> {
        if self.dim() != other.dim() {
            return Err(Error::Domain("dimension mismatch".into()));
        }
        let mut m = 0i128;
        for (a, b) in self.c.iter().zip(&other.c) {
            m = m.max(csub(*a, *b, "point difference")?.abs());
        }
        Ok(m)
    }
}

/// Σ log p over the primes p where P and Q reduce to the same point of
/// P^n(F_p), together with those primes. They are exactly the primes
/// dividing every 2x2 minor x_i y_j − x_j y_i, and the sum is at most
/// log(2 H(P) H(Q)).
pub fn congruent_prime_sum_proj(p: &ProjPoint, q: &ProjPoint) -> Result<(f64, Vec<u128>)> {
    if p.dim() != q.dim() {
        return Err(Error::Domain("dimension mismatch".into()));
    }
    if p == q {
        return Err(Error::Domain(
            "congruent-prime sum diverges for equal points".into(),
        ));
    }
    let mut g = 0i128;
    for i in 0..p.dim() {
        for j in i + 1..p.dim() {
            let minor = csub(
                cmul(p.c[i], q.c[j], "minor")?,
                cmul(p.c[j], q.c[i], "minor")?,
                "minor",
            )?;
            g = gcd_i128(g, minor);
        }
    }
    // distinct reduced points are never proportional, so some minor is
    // nonzero
    debug_assert!(g != 0);
    Ok(log_sum_of_prime_divisors(g.unsigned_abs()))
}

/// Σ log p over the primes dividing every coordinate of P − Q, with the
/// primes as witnesses; the sum is at most log ‖P−Q‖.
pub fn congruent_prime_sum_int(p: &IntPoint, q: &IntPoint) -> Result<(f64, Vec<u128>)> {
    if p.dim() != q.dim() {
        return Err(Error::Domain("dimension mismatch".into()));
    }
    let mut g = 0i128;
    for (a, b) in p.c.iter().zip(&q.c) {
        g = gcd_i128(g, csub(*a, *b, "point difference")?);
    }
    if g == 0 {
        return Err(Error::Domain(
            "congruent-prime sum diverges for equal points".into(),
        ));
    }
    Ok(log_sum_of_prime_divisors(g.unsigned_abs()))
}

fn log_sum_of_prime_divisors(g: u128) -> (f64, Vec<u128>) {
    let primes = prime_factors_u128(g);
    let sum = primes.iter().map(|&p| (p as f64).ln()).sum();
    (sum, primes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heights() {
        assert_eq!(ProjPoint::new(&[3, 4, 1]).unwrap().height(), 4);
        assert_eq!(ProjPoint::new(&[1, 0, 0, 0]).unwrap().height(), 1);
        assert_eq!(ProjPoint::new(&[6, 10, 15]).unwrap().height(), 15);
        assert_eq!(ProjPoint::new(&[6, 10, 14]).unwrap().coords(), &[3, 5, 7]);
    }

    #[test]
    fn reduction_normalizes_sign_and_gcd() {
        let p = ProjPoint::new(&[-2, 4]).unwrap();
        assert_eq!(p.coords(), &[1, -2]);
        let q = ProjPoint::new(&[0, -3, 6]).unwrap();
        assert_eq!(q.coords(), &[0, 1, -2]);
        assert!(ProjPoint::new(&[0, 0]).is_err());
        assert!(ProjPoint::new(&[]).is_err());
    }

    #[test]
    fn proj_congruence_worked_examples() {
        let p = ProjPoint::new(&[1, 2]).unwrap();
        let q = ProjPoint::new(&[3, 4]).unwrap();
        let (sum, primes) = congruent_prime_sum_proj(&p, &q).unwrap();
        assert_eq!(primes, vec![2]);
        assert!((sum - 2f64.ln()).abs() < 1e-12);
        assert!(sum <= (2.0 * 2.0 * 4.0f64).ln());

        let p = ProjPoint::new(&[1, 0]).unwrap();
        let q = ProjPoint::new(&[0, 1]).unwrap();
        let (sum, primes) = congruent_prime_sum_proj(&p, &q).unwrap();
        assert_eq!(sum, 0.0);
        assert!(primes.is_empty());

        let p = ProjPoint::new(&[1, 1]).unwrap();
        let q = ProjPoint::new(&[1, 7]).unwrap();
        let (sum, primes) = congruent_prime_sum_proj(&p, &q).unwrap();
        assert_eq!(primes, vec![2, 3]);
        assert!((sum - 6f64.ln()).abs() < 1e-12);
        assert!(sum <= (2.0 * 1.0 * 7.0f64).ln());
    }

    #[test]
    fn proj_congruence_rejects_equal_points() {
        let p = ProjPoint::new(&[2, 4]).unwrap();
        let q = ProjPoint::new(&[1, 2]).unwrap();
        assert!(matches!(
            congruent_prime_sum_proj(&p, &q),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn int_congruence_worked_examples() {
        let (sum, primes) =
            congruent_prime_sum_int(&IntPoint::new(&[0, 0]), &IntPoint::new(&[6, 12])).unwrap();
        assert_eq!(primes, vec![2, 3]);
        assert!((sum - 6f64.ln()).abs() < 1e-12);
        assert!(sum <= 12f64.ln());

        let (sum, _) =
            congruent_prime_sum_int(&IntPoint::new(&[0]), &IntPoint::new(&[1])).unwrap();
        assert_eq!(sum, 0.0);

        // equality case of the bound
        let p = IntPoint::new(&[2, 3]);
        let q = IntPoint::new(&[5, 3]);
        let (sum, primes) = congruent_prime_sum_int(&p, &q).unwrap();
        assert_eq!(primes, vec![3]);
        let norm = p.dist_sup(&q).unwrap();
        assert_eq!(norm, 3);
        assert!((sum - (norm as f64).ln()).abs() < 1e-12);
    }

    #[test]
    fn int_congruence_rejects_equal_points() {
        let p = IntPoint::new(&[1, 2]);
        assert!(matches!(
            congruent_prime_sum_int(&p, &p.clone()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn proj_bound_exhaustive_small() {
        // spot-lattice of the full acceptance sweep: dimension 2, small box
        let mut pts = Vec::new();
        for a in -6i128..=6 {
            for b in -6i128..=6 {
                if (a, b) != (0, 0) {
                    pts.push(ProjPoint::new(&[a, b]).unwrap());
                }
            }
        }
        pts.sort_by(|x, y| x.coords().cmp(y.coords()));
        pts.dedup();
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                let (sum, _) = congruent_prime_sum_proj(&pts[i], &pts[j]).unwrap();
                let bound =
                    (2.0 * pts[i].height() as f64 * pts[j].height() as f64).ln();
                assert!(
                    sum <= bound + 1e-9,
                    "{:?} {:?}: {sum} > {bound}",
                    pts[i],
                    pts[j]
                );
            }
        }
    }
}
