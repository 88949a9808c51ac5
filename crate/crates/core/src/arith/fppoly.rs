//! Dense univariate polynomials over a prime field F_p, with squarefree
//! decomposition, distinct-degree splitting, and seeded equal-degree
//! factorization. p = 2 is excluded throughout; the censuses only consult
//! odd primes and this keeps a single code path.

use crate::arith::{is_prime_u64, modpow_u64, mulmod_u64};
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Polynomial over F_p, coefficients ascending by degree, always reduced
/// and trimmed (the zero polynomial has an empty coefficient vector).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct FpPoly {
    p: u64,
    c: Vec<u64>,
}

/// Multiset of (degree, multiplicity) pairs, one entry per irreducible
/// factor, sorted. Two distinct linear factors appear as two (1, 1)
/// entries.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorShape {
    pub parts: Vec<(usize, usize)>,
}

impl FactorShape {
    fn new(mut parts: Vec<(usize, usize)>) -> Self {
        parts.sort_unstable();
        FactorShape { parts }
    }

    /// Σ degree · multiplicity.
    pub fn total_degree(&self) -> usize {
        self.parts.iter().map(|&(d, m)| d * m).sum()
    }

    /// All multiplicities are 1.
    pub fn is_squarefree(&self) -> bool {
        self.parts.iter().all(|&(_, m)| m == 1)
    }

    /// Factor degrees with multiplicity expanded, ascending; for a
    /// squarefree shape this is the cycle type of Frobenius.
    pub fn degree_multiset(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for &(d, m) in &self.parts {
            out.extend(std::iter::repeat(d).take(m));
        }
        out.sort_unstable();
        out
    }
}

impl FpPoly {
    /// Build from signed coefficients (ascending degree), reducing mod p.
    pub fn new(p: u64, coeffs: &[i128]) -> Result<FpPoly> {
        if p < 3 || !is_prime_u64(p) {
            return Err(Error::Domain(format!(
                "FpPoly needs an odd prime modulus, got {p}"
            )));
        }
        let c = coeffs
            .iter()
            .map(|&a| a.rem_euclid(p as i128) as u64)
            .collect();
        Ok(FpPoly { p, c }.trimmed())
    }

    fn from_residues(p: u64, c: Vec<u64>) -> FpPoly {
        FpPoly { p, c }.trimmed()
    }

    fn trimmed(mut self) -> FpPoly {
        while self.c.last() == Some(&0) {
            self.c.pop();
        }
        self
    }

    pub fn zero(p: u64) -> FpPoly {
        FpPoly { p, c: Vec::new() }
    }

    pub fn one(p: u64) -> FpPoly {
        FpPoly { p, c: vec![1] }
    }

    pub fn x(p: u64) -> FpPoly {
        FpPoly { p, c: vec![0, 1] }
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// Residue coefficients, ascending degree.
    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    fn deg(&self) -> usize {
        self.degree().expect("nonzero polynomial")
    }

    fn lead(&self) -> u64 {
        *self.c.last().expect("nonzero polynomial")
    }

    pub fn eval(&self, x: u64) -> u64 {
        let mut acc = 0u64;
        for &a in self.c.iter().rev() {
            acc = (mulmod_u64(acc, x % self.p, self.p) + a) % self.p;
        }
        acc
    }

    pub fn add(&self, other: &FpPoly) -> FpPoly {
        assert_eq!(self.p, other.p);
        let n = self.c.len().max(other.c.len());
        let mut c = vec![0u64; n];
        for (i, v) in c.iter_mut().enumerate() {
            let a = self.c.get(i).copied().unwrap_or(0);
            let b = other.c.get(i).copied().unwrap_or(0);
            *v = (a + b) % self.p;
        }
        FpPoly { p: self.p, c }.trimmed()
    }

    pub fn sub(&self, other: &FpPoly) -> FpPoly {
        assert_eq!(self.p, other.p);
        let n = self.c.len().max(other.c.len());
        let mut c = vec![0u64; n];
        for (i, v) in c.iter_mut().enumerate() {
            let a = self.c.get(i).copied().unwrap_or(0);
            let b = other.c.get(i).copied().unwrap_or(0);
            *v = (a + self.p - b) % self.p;
        }
        FpPoly { p: self.p, c }.trimmed()
    }

    pub fn mul(&self, other: &FpPoly) -> FpPoly {
        assert_eq!(self.p, other.p);
        if self.is_zero() || other.is_zero() {
            return FpPoly::zero(self.p);
        }
        let mut c = vec![0u64; self.c.len() + other.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.c.iter().enumerate() {
                c[i + j] = (c[i + j] + mulmod_u64(a, b, self.p)) % self.p;
            }
        }
        FpPoly { p: self.p, c }.trimmed()
    }

    pub fn scale(&self, k: u64) -> FpPoly {
        let c = self.c.iter().map(|&a| mulmod_u64(a, k, self.p)).collect();
        FpPoly { p: self.p, c }.trimmed()
    }

    /// Quotient and remainder by a nonzero divisor.
    pub fn divrem(&self, d: &FpPoly) -> (FpPoly, FpPoly) {
        assert_eq!(self.p, d.p);
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() || self.deg() < d.deg() {
            return (FpPoly::zero(self.p), self.clone());
        }
        let p = self.p;
        let dl_inv = modpow_u64(d.lead(), p - 2, p);
        let mut rem = self.c.clone();
        let mut quo = vec![0u64; self.deg() - d.deg() + 1];
        for i in (d.deg()..rem.len()).rev() {
            let coef = mulmod_u64(rem[i], dl_inv, p);
            if coef == 0 {
                continue;
            }
            quo[i - d.deg()] = coef;
            for (j, &dc) in d.c.iter().enumerate() {
                let k = i - d.deg() + j;
                rem[k] = (rem[k] + p - mulmod_u64(coef, dc, p)) % p;
            }
        }
        (
            FpPoly { p, c: quo }.trimmed(),
            FpPoly { p, c: rem }.trimmed(),
        )
    }

    pub fn rem(&self, d: &FpPoly) -> FpPoly {
        self.divrem(d).1
    }

    /// Monic gcd (or zero when both inputs are zero).
    pub fn gcd(&self, other: &FpPoly) -> FpPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Scale to leading coefficient 1 (zero stays zero).
    pub fn monic(&self) -> FpPoly {
        if self.is_zero() || self.lead() == 1 {
            return self.clone();
        }
        self.scale(modpow_u64(self.lead(), self.p - 2, self.p))
    }

    pub fn derivative(&self) -> FpPoly {
        if self.c.len() <= 1 {
            return FpPoly::zero(self.p);
        }
        let c = self.c[1..]
            .iter()
            .enumerate()
            .map(|(i, &a)| mulmod_u64(a, (i as u64 + 1) % self.p, self.p))
            .collect();
        FpPoly { p: self.p, c }.trimmed()
    }

    /// `self^e mod m` by square and multiply.
    pub fn powmod(&self, mut e: u64, m: &FpPoly) -> FpPoly {
        let mut base = self.rem(m);
        let mut acc = FpPoly::one(self.p);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }

    /// Squarefree decomposition: pairwise-coprime monic squarefree parts
    /// with their multiplicities, product (times the leading unit) equal
    /// to self. Char-p aware: perfect p-th powers are unwrapped.
    pub fn squarefree_decomposition(&self) -> Vec<(FpPoly, usize)> {
        let mut out = Vec::new();
        self.sqfree_into(1, &mut out);
        out.sort_by(|a, b| (a.0.deg(), &a.0, a.1).cmp(&(b.0.deg(), &b.0, b.1)));
        out
    }

    fn sqfree_into(&self, outer: usize, out: &mut Vec<(FpPoly, usize)>) {
        let f = self.monic();
        if f.is_zero() || f.deg() == 0 {
            return;
        }
        let d = f.derivative();
        if d.is_zero() {
            // f = g(x^p), and over F_p that is (pth-root of g's coeffs)(x)^p
            return f.pth_root().sqfree_into(outer * self.p as usize, out);
        }
        let mut c = f.gcd(&d);
        let mut w = f.divrem(&c).0;
        let mut i = 1usize;
        while w.deg() > 0 {
            let y = w.gcd(&c);
            let z = w.divrem(&y).0;
            if z.deg() > 0 {
                out.push((z, i * outer));
            }
            w = y;
            c = c.divrem(&w).0;
            i += 1;
        }
        if c.deg() > 0 {
            c.pth_root().sqfree_into(outer * self.p as usize, out);
        }
    }

    /// For f with zero derivative, f(x) = g(x^p); returns the h with
    /// h^p = f (coefficientwise p-th roots are identities over F_p).
    fn pth_root(&self) -> FpPoly {
        let p = self.p as usize;
        let c = self.c.iter().step_by(p).copied().collect();
        FpPoly { p: self.p, c }.trimmed()
    }

    /// Distinct-degree splitting of a monic squarefree polynomial:
    /// (product of all irreducible factors of degree d, d) pairs.
    fn ddf(&self) -> Vec<(FpPoly, usize)> {
        let mut g = self.monic();
        let mut out = Vec::new();
        let mut h = FpPoly::x(self.p).rem(&g);
        let mut d = 0usize;
        while g.deg() > 0 && 2 * (d + 1) <= g.deg() {
            d += 1;
            h = h.powmod(self.p, &g);
            let q = h.sub(&FpPoly::x(self.p)).gcd(&g);
            if !q.is_zero() && q.deg() > 0 {
                out.push((q.clone(), d));
                g = g.divrem(&q).0;
                h = h.rem(&g);
            }
        }
        if g.deg() > 0 {
            let d = g.deg();
            out.push((g, d));
        }
        out
    }

    /// Equal-degree splitting (Cantor–Zassenhaus) of a monic squarefree
    /// product of irreducibles all of degree d. The norm map reduces the
    /// exponent to (p−1)/2 regardless of d.
    fn edf(&self, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<FpPoly>) {
        let h = self.monic();
        if h.deg() == d {
            out.push(h);
            return;
        }
        let p = self.p;
        loop {
            let c: Vec<u64> = (0..h.deg()).map(|_| rng.gen_range(0..p)).collect();
            let r = FpPoly::from_residues(p, c);
            if r.is_zero() || r.deg() == 0 {
                continue;
            }
            let shared = r.gcd(&h);
            if shared.deg() > 0 && shared.deg() < h.deg() {
                shared.edf(d, rng, out);
                h.divrem(&shared).0.edf(d, rng, out);
                return;
            }
            // norm of r down the degree-d tower, then the half power
            let mut frob = r.clone();
            let mut norm = r.clone();
            for _ in 1..d {
                frob = frob.powmod(p, &h);
                norm = norm.mul(&frob).rem(&h);
            }
            let u = norm.powmod((p - 1) / 2, &h);
            let split = u.sub(&FpPoly::one(p)).gcd(&h);
            if split.deg() > 0 && split.deg() < h.deg() {
                split.edf(d, rng, out);
                h.divrem(&split).0.edf(d, rng, out);
                return;
            }
        }
    }

    /// Multiset of irreducible-factor degrees with multiplicities.
    /// Deterministic: only squarefree decomposition and distinct-degree
    /// splitting are consulted, never randomized splitting.
    pub fn factor_shape(&self) -> Result<FactorShape> {
        if self.is_zero() {
            return Err(Error::Domain("factor_shape of zero polynomial".into()));
        }
        let mut parts = Vec::new();
        for (g, m) in self.squarefree_decomposition() {
            for (prod, d) in g.ddf() {
                let count = prod.deg() / d;
                parts.extend(std::iter::repeat((d, m)).take(count));
            }
        }
        Ok(FactorShape::new(parts))
    }

    /// Complete factorization into monic irreducibles with multiplicities,
    /// sorted; the product times the leading unit reproduces self.
    /// Deterministic for a fixed seed.
    pub fn factor_full(&self, seed: u64) -> Result<Vec<(FpPoly, usize)>> {
        if self.is_zero() {
            return Err(Error::Domain("factor_full of zero polynomial".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::new();
        for (g, m) in self.squarefree_decomposition() {
            for (prod, d) in g.ddf() {
                let mut irr = Vec::new();
                prod.edf(d, &mut rng, &mut irr);
                out.extend(irr.into_iter().map(|f| (f, m)));
            }
        }
        out.sort_by(|a, b| (a.0.deg(), &a.0, a.1).cmp(&(b.0.deg(), &b.0, b.1)));
        Ok(out)
    }
}

/// Shape of f's factorization over F_p; see [`FpPoly::factor_shape`].
pub fn fp_factor_shape(f: &FpPoly) -> Result<FactorShape> {
    f.factor_shape()
}

/// Full factorization of f over F_p; see [`FpPoly::factor_full`].
pub fn fp_factor_full(f: &FpPoly, seed: u64) -> Result<Vec<(FpPoly, usize)>> {
    f.factor_full(seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn poly(p: u64, c: &[i128]) -> FpPoly {
        FpPoly::new(p, c).unwrap()
    }

    #[test]
    fn construction_reduces_and_trims() {
        let f = poly(5, &[7, -1, 10]);
        assert_eq!(f.coeffs(), &[2, 4]);
        assert_eq!(f.degree(), Some(1));
        assert!(poly(5, &[0]).is_zero());
        assert!(matches!(FpPoly::new(4, &[1]), Err(Error::Domain(_))));
        assert!(matches!(FpPoly::new(2, &[1]), Err(Error::Domain(_))));
    }

    #[test]
    fn division_invariant() {
        let f = poly(7, &[3, 0, 1, 5, 2]);
        let d = poly(7, &[1, 2, 6]);
        let (q, r) = f.divrem(&d);
        assert_eq!(d.mul(&q).add(&r), f);
        assert!(r.degree().map_or(true, |dr| dr < d.deg()));
    }

    #[test]
    fn shape_worked_examples() {
        // x^2 + 1 splits mod 5 (roots 2 and 3), inert mod 7
        let f = poly(5, &[1, 0, 1]);
        assert_eq!(f.factor_shape().unwrap().parts, vec![(1, 1), (1, 1)]);
        let f = poly(7, &[1, 0, 1]);
        assert_eq!(f.factor_shape().unwrap().parts, vec![(2, 1)]);
        let f = poly(5, &[0, 0, 1]);
        assert_eq!(f.factor_shape().unwrap().parts, vec![(1, 2)]);
    }

    #[test]
    fn shape_of_zero_rejected() {
        assert!(matches!(
            FpPoly::zero(5).factor_shape(),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn full_factorization_difference_of_squares() {
        let f = poly(7, &[6, 0, 1]); // x^2 - 1
        let fs = f.factor_full(0).unwrap();
        assert_eq!(fs.len(), 2);
        assert_eq!(fs[0].0, poly(7, &[1, 1])); // x + 1
        assert_eq!(fs[1].0, poly(7, &[6, 1])); // x - 1
        assert_eq!(fs[0].1, 1);
    }

    #[test]
    fn full_factorization_agrees_with_shape_small() {
        let f = poly(5, &[1, 1, 0, 1]); // x^3 + x + 1 mod 5
        let shape = f.factor_shape().unwrap();
        let full = f.factor_full(1).unwrap();
        let mut degrees: Vec<(usize, usize)> =
            full.iter().map(|(g, m)| (g.deg(), *m)).collect();
        degrees.sort_unstable();
        assert_eq!(FactorShape::new(degrees), shape);
    }

    #[test]
    fn frobenius_fixed_field_counts_roots() {
        // x^p - x ≡ product of all linear polynomials
        let p = 11u64;
        let mut c = vec![0i128; p as usize + 1];
        c[1] = -1;
        c[p as usize] = 1;
        let f = poly(p, &c);
        let shape = f.factor_shape().unwrap();
        assert_eq!(shape.parts.len(), p as usize);
        assert!(shape.parts.iter().all(|&(d, m)| d == 1 && m == 1));
    }

    fn arb_poly() -> impl Strategy<Value = (u64, Vec<i128>)> {
        (
            prop::sample::select(vec![3u64, 5, 7, 11, 13]),
            prop::collection::vec(-20i128..20, 1..9),
        )
    }

    proptest! {
        #[test]
        fn factorization_reassembles((p, coeffs) in arb_poly(), seed in 0u64..1000) {
            let f = FpPoly::new(p, &coeffs).unwrap();
            prop_assume!(!f.is_zero());
            let factors = f.factor_full(seed).unwrap();
            let mut prod = FpPoly::one(p).scale(f.lead());
            for (g, m) in &factors {
                prop_assert!(*g.c.last().unwrap() == 1);
                for _ in 0..*m {
                    prod = prod.mul(g);
                }
            }
            prop_assert_eq!(prod, f);
        }

        #[test]
        fn shape_matches_full((p, coeffs) in arb_poly(), seed in 0u64..1000) {
            let f = FpPoly::new(p, &coeffs).unwrap();
            prop_assume!(!f.is_zero());
            let shape = f.factor_shape().unwrap();
            let full = f.factor_full(seed).unwrap();
            let mut parts: Vec<(usize, usize)> =
                full.iter().map(|(g, m)| (g.deg(), *m)).collect();
            parts.sort_unstable();
            prop_assert_eq!(shape.total_degree(), f.deg());
            prop_assert_eq!(FactorShape::new(parts), shape);
        }

        #[test]
        fn squarefree_parts_have_nonzero_gcd_with_derivative_only_when_repeated(
            (p, coeffs) in arb_poly()
        ) {
            let f = FpPoly::new(p, &coeffs).unwrap();
            prop_assume!(!f.is_zero() && f.deg() > 0);
            let shape = f.factor_shape().unwrap();
            let g = f.gcd(&f.derivative());
            let repeated = !shape.is_squarefree() ;
            // gcd(f, f') is nonconstant iff some factor repeats (char p:
            // zero derivative also signals a perfect p-th power)
            prop_assert_eq!(g.deg() > 0 || f.derivative().is_zero(), repeated);
        }
    }
}
