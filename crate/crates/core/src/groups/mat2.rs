//! 2x2 matrices over Z/mZ with unit determinant, and the congruence
//! subgroups needed at finite level: SL2, GL2, and kernels of reduction.

use crate::error::{Error, Result};
use crate::groups::{ExplicitGroup, GroupElem};

/// Candidate cap for the brute-force enumeration in [`reduction_kernel`].
const KERNEL_ENUM_CAP: u128 = 1_000_000;

/// An element of GL2(Z/mZ): entries are residues mod m and the determinant
/// is a unit. Row-major entries (a b / c d).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mat2 {
    m: u64,
    a: u64,
    b: u64,
    c: u64,
    d: u64,
}

impl Mat2 {
    /// Builds a matrix mod m, reducing the entries and checking that the
    /// determinant is a unit.
    pub fn new(m: u64, a: u64, b: u64, c: u64, d: u64) -> Result<Mat2> {
        if m < 2 {
            return Err(Error::Domain("matrix modulus must be at least 2".into()));
        }
        let mat = Mat2 {
            m,
            a: a % m,
            b: b % m,
            c: c % m,
            d: d % m,
        };
        if gcd(mat.det(), m) != 1 {
            return Err(Error::Domain(format!(
                "determinant {} is not a unit mod {m}",
                mat.det()
            )));
        }
        Ok(mat)
    }

    pub fn identity(m: u64) -> Result<Mat2> {
        Mat2::new(m, 1, 0, 0, 1)
    }

    pub fn modulus(&self) -> u64 {
        self.m
    }

    pub fn entries(&self) -> [u64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn det(&self) -> u64 {
        let m = self.m as u128;
        let ad = (self.a as u128 * self.d as u128) % m;
        let bc = (self.b as u128 * self.c as u128) % m;
        ((ad + m - bc) % m) as u64
    }

    pub fn trace(&self) -> u64 {
        (self.a + self.d) % self.m
    }

    /// Reduction mod r for r dividing m.
    pub fn reduce(&self, r: u64) -> Result<Mat2> {
        if r < 2 || self.m % r != 0 {
            return Err(Error::Domain(format!(
                "{r} is not a modulus dividing {}",
                self.m
            )));
        }
        Mat2::new(r, self.a % r, self.b % r, self.c % r, self.d % r)
    }
}

impl GroupElem for Mat2 {
    fn identity_like(&self) -> Self {
        Mat2 {
            m: self.m,
            a: 1,
            b: 0,
            c: 0,
            d: 1,
        }
    }

    fn op(&self, other: &Self) -> Self {
        debug_assert_eq!(self.m, other.m);
        let m = self.m as u128;
        let mul = |x: u64, y: u64, z: u64, w: u64| {
            (((x as u128 * y as u128) + (z as u128 * w as u128)) % m) as u64
        };
        Mat2 {
            m: self.m,
            a: mul(self.a, other.a, self.b, other.c),
            b: mul(self.a, other.b, self.b, other.d),
            c: mul(self.c, other.a, self.d, other.c),
            d: mul(self.c, other.b, self.d, other.d),
        }
    }

    fn inv(&self) -> Self {
        // det is a unit by the constructor invariant, so the adjugate
        // scaled by det^-1 inverts the matrix.
        let di = modinv(self.det(), self.m).expect("group member has unit determinant");
        let m = self.m as u128;
        let scale = |x: u64| ((x as u128 * di as u128) % m) as u64;
        let neg = |x: u64| (self.m - x % self.m) % self.m;
        Mat2 {
            m: self.m,
            a: scale(self.d),
            b: scale(neg(self.b)),
            c: scale(neg(self.c)),
            d: scale(self.a),
        }
    }

    fn same_ambient(&self, other: &Self) -> bool {
        self.m == other.m
    }

    fn ambient_order(&self) -> u128 {
        gl2_order(self.m).expect("modulus validated on construction")
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Inverse of a mod m, when it exists.
fn modinv(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        let tr = old_r - q * r;
        old_r = r;
        r = tr;
        let ts = old_s - q * s;
        old_s = s;
        s = ts;
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

fn units(m: u64) -> Vec<u64> {
    (1..m).filter(|&u| gcd(u, m) == 1).collect()
}

fn factor_small(m: u64) -> Vec<(u64, u32)> {
    let mut m = m;
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            let mut k = 0u32;
            while m % p == 0 {
                m /= p;
                k += 1;
            }
            out.push((p, k));
        }
        p += 1;
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

/// |GL2(Z/mZ)|, multiplicative over prime powers:
/// |GL2(Z/p^k)| = p^(4(k-1)) (p^2-1)(p^2-p).
pub fn gl2_order(m: u64) -> Result<u128> {
    if m < 2 {
        return Err(Error::Domain("matrix modulus must be at least 2".into()));
    }
    let mut order: u128 = 1;
    for (p, k) in factor_small(m) {
        let p = p as u128;
        let local = (p * p - 1) * (p * p - p) * p.pow(4 * (k - 1));
        order = order
            .checked_mul(local)
            .ok_or(Error::Overflow("gl2_order"))?;
    }
    Ok(order)
}

/// |SL2(Z/mZ)|: |SL2(Z/p^k)| = p^(3(k-1)) p (p^2-1).
pub fn sl2_order(m: u64) -> Result<u128> {
    if m < 2 {
        return Err(Error::Domain("matrix modulus must be at least 2".into()));
    }
    let mut order: u128 = 1;
    for (p, k) in factor_small(m) {
        let p = p as u128;
        let local = p * (p * p - 1) * p.pow(3 * (k - 1));
        order = order
            .checked_mul(local)
            .ok_or(Error::Overflow("sl2_order"))?;
    }
    Ok(order)
}

/// SL2(Z/mZ), generated by the two elementary matrices.
pub fn sl2_group(m: u64) -> Result<ExplicitGroup<Mat2>> {
    let e12 = Mat2::new(m, 1, 1, 0, 1)?;
    let e21 = Mat2::new(m, 1, 0, 1, 1)?;
    ExplicitGroup::closure(&[e12, e21])
}

/// GL2(Z/mZ): the SL2 generators together with diag(u, 1) for each unit u.
pub fn gl2_group(m: u64) -> Result<ExplicitGroup<Mat2>> {
    let mut gens = vec![Mat2::new(m, 1, 1, 0, 1)?, Mat2::new(m, 1, 0, 1, 1)?];
    for u in units(m) {
        if u != 1 {
            gens.push(Mat2::new(m, u, 0, 0, 1)?);
        }
    }
    ExplicitGroup::closure(&gens)
}

/// The kernel of reduction {A in GL2(Z/m) : A = I mod r}, for r dividing m,
/// enumerated directly. r = m gives the trivial group, r = 1 all of GL2.
pub fn reduction_kernel(m: u64, r: u64) -> Result<ExplicitGroup<Mat2>> {
    if m < 2 {
        return Err(Error::Domain("matrix modulus must be at least 2".into()));
    }
    if r == 0 || m % r != 0 {
        return Err(Error::Domain(format!("{r} does not divide the modulus {m}")));
    }
    let q = m / r;
    if (q as u128).pow(4) > KERNEL_ENUM_CAP {
        return Err(Error::Resource(format!(
            "reduction kernel enumeration needs (m/r)^4 <= {KERNEL_ENUM_CAP}"
        )));
    }
    let mut elems = Vec::new();
    for x in 0..q {
        for y in 0..q {
            for z in 0..q {
                for w in 0..q {
                    let cand = (
                        (1 + r * x) % m,
                        (r * y) % m,
                        (r * z) % m,
                        (1 + r * w) % m,
                    );
                    if let Ok(mat) = Mat2::new(m, cand.0, cand.1, cand.2, cand.3) {
                        elems.push(mat);
                    }
                }
            }
        }
    }
    ExplicitGroup::from_elements(elems)
}

/// The determinant-one part of a matrix group.
pub fn intersect_sl2(g: &ExplicitGroup<Mat2>) -> Result<ExplicitGroup<Mat2>> {
    let elems: Vec<Mat2> = g.elements().iter().filter(|m| m.det() == 1).copied().collect();
    ExplicitGroup::from_elements(elems)
}
