//! Dense univariate polynomials over Z with checked 128-bit coefficients:
//! exact resultants (fraction-free elimination), the discriminant, and
//! big-prime factorization into monic irreducibles.

use crate::arith::{cadd, cmul, csub, isqrt_u128, next_prime_u64, FpPoly};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};

/// Polynomial over Z, coefficients ascending by degree, trimmed (the zero
/// polynomial has an empty coefficient vector).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IntPoly {
    c: Vec<i128>,
}

/// Degree cap accepted by the public factorization entry point.
const FACTOR_DEG_CAP: usize = 8;
/// Degree cap for internal census plumbing.
pub(crate) const CENSUS_DEG_CAP: usize = 16;
/// Coefficient magnitude cap for factorization.
const FACTOR_COEFF_CAP: i128 = 1 << 40;
/// Give up hunting for a usable reduction prime after this many candidates.
const PRIME_ATTEMPTS: u32 = 200;

impl IntPoly {
    /// Build from coefficients ascending by degree; trailing zeros trimmed.
    pub fn new(coeffs: &[i128]) -> IntPoly {
        let mut c = coeffs.to_vec();
        while c.last() == Some(&0) {
            c.pop();
        }
        IntPoly { c }
    }

    pub fn zero() -> IntPoly {
        IntPoly { c: Vec::new() }
    }

    pub fn one() -> IntPoly {
        IntPoly { c: vec![1] }
    }

    pub fn x() -> IntPoly {
        IntPoly { c: vec![0, 1] }
    }

    /// Monic x^n + (ascending lower coefficients).
    pub fn monic_with_lower(lower: &[i128]) -> IntPoly {
        let mut c = lower.to_vec();
        c.push(1);
        IntPoly::new(&c)
    }

    pub fn coeffs(&self) -> &[i128] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> i128 {
        self.c.get(i).copied().unwrap_or(0)
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

    pub fn lead(&self) -> i128 {
        self.c.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == 1
    }

    pub fn eval(&self, x: i128) -> Result<i128> {
        let mut acc = 0i128;
        for &a in self.c.iter().rev() {
            acc = cadd(cmul(acc, x, "poly eval")?, a, "poly eval")?;
        }
        Ok(acc)
    }

    pub fn add(&self, other: &IntPoly) -> Result<IntPoly> {
        let n = self.c.len().max(other.c.len());
        let mut c = vec![0i128; n];
        for (i, v) in c.iter_mut().enumerate() {
            *v = cadd(self.coeff(i), other.coeff(i), "poly add")?;
        }
        Ok(IntPoly::new(&c))
    }

    pub fn sub(&self, other: &IntPoly) -> Result<IntPoly> {
        let n = self.c.len().max(other.c.len());
        let mut c = vec![0i128; n];
        for (i, v) in c.iter_mut().enumerate() {
            *v = csub(self.coeff(i), other.coeff(i), "poly sub")?;
        }
        Ok(IntPoly::new(&c))
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly::new(&self.c.iter().map(|&a| -a).collect::<Vec<_>>())
    }

    pub fn mul(&self, other: &IntPoly) -> Result<IntPoly> {
        if self.is_zero() || other.is_zero() {
            return Ok(IntPoly::zero());
        }
        let mut c = vec![0i128; self.c.len() + other.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.c.iter().enumerate() {
                c[i + j] = cadd(c[i + j], cmul(a, b, "poly mul")?, "poly mul")?;
            }
        }
        Ok(IntPoly::new(&c))
    }

    pub fn derivative(&self) -> Result<IntPoly> {
        if self.c.len() <= 1 {
            return Ok(IntPoly::zero());
        }
        let mut c = Vec::with_capacity(self.c.len() - 1);
        for (i, &a) in self.c[1..].iter().enumerate() {
            c.push(cmul(a, (i + 1) as i128, "poly derivative")?);
        }
        Ok(IntPoly::new(&c))
    }

    /// Exact quotient by a monic divisor; None when the division leaves a
    /// remainder.
    pub fn div_exact_monic(&self, d: &IntPoly) -> Result<Option<IntPoly>> {
        assert!(d.is_monic(), "divisor must be monic");
        if self.is_zero() {
            return Ok(Some(IntPoly::zero()));
        }
        if self.deg() < d.deg() {
            return Ok(None);
        }
        let mut rem = self.c.clone();
        let mut quo = vec![0i128; self.deg() - d.deg() + 1];
        for i in (d.deg()..rem.len()).rev() {
            let coef = rem[i];
            if coef == 0 {
                continue;
            }
            quo[i - d.deg()] = coef;
            for (j, &dc) in d.c.iter().enumerate() {
                let k = i - d.deg() + j;
                rem[k] = csub(rem[k], cmul(coef, dc, "poly division")?, "poly division")?;
            }
        }
        if rem.iter().any(|&r| r != 0) {
            return Ok(None);
        }
        Ok(Some(IntPoly::new(&quo)))
    }

    /// Exact quotient by a monic divisor, giving up as soon as a would-be
    /// quotient coefficient exceeds `cap` in magnitude. True quotients at
    /// the call sites are Mignotte-bounded below `cap`, so the abort can
    /// only reject non-divisors; arithmetic overflow is treated the same
    /// way for the same reason.
    fn div_exact_monic_bounded(&self, d: &IntPoly, cap: i128) -> Option<IntPoly> {
        debug_assert!(d.is_monic());
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        if self.deg() < d.deg() {
            return None;
        }
        let mut rem = self.c.clone();
        let mut quo = vec![0i128; self.deg() - d.deg() + 1];
        for i in (d.deg()..rem.len()).rev() {
            let coef = rem[i];
            if coef == 0 {
                continue;
            }
            if coef.abs() > cap {
                return None;
            }
            quo[i - d.deg()] = coef;
            for (j, &dc) in d.c.iter().enumerate() {
                let k = i - d.deg() + j;
                rem[k] = rem[k].checked_sub(coef.checked_mul(dc)?)?;
            }
        }
        if rem.iter().any(|&r| r != 0) {
            return None;
        }
        Some(IntPoly::new(&quo))
    }

    /// Reduction mod an odd prime.
    pub fn reduce_mod(&self, p: u64) -> Result<FpPoly> {
        FpPoly::new(p, &self.c)
    }

    /// Euclidean norm rounded up, for Mignotte-style bounds.
    fn norm2_ceil(&self) -> Result<i128> {
        let mut s: i128 = 0;
        for &a in &self.c {
            s = cadd(s, cmul(a, a, "coeff norm")?, "coeff norm")?;
        }
        let r = isqrt_u128(s as u128);
        Ok(if r * r == s as u128 {
            r as i128
        } else {
            r as i128 + 1
        })
    }
}

/// Resultant of f and g by fraction-free (Bareiss) elimination of the
/// Sylvester matrix; exact over Z with overflow detection.
pub fn resultant(f: &IntPoly, g: &IntPoly) -> Result<i128> {
    let (n, m) = match (f.degree(), g.degree()) {
        (Some(n), Some(m)) => (n, m),
        _ => return Err(Error::Domain("resultant of zero polynomial".into())),
    };
    if n == 0 && m == 0 {
        return Ok(1);
    }
    let size = n + m;
    // rows 0..m hold shifts of f, rows m..m+n hold shifts of g
    let mut a = vec![vec![0i128; size]; size];
    for (r, row) in a.iter_mut().enumerate().take(m) {
        for (k, &c) in f.c.iter().rev().enumerate() {
            row[r + k] = c;
        }
    }
    for (i, row) in a.iter_mut().enumerate().skip(m) {
        let r = i - m;
        for (k, &c) in g.c.iter().rev().enumerate() {
            row[r + k] = c;
        }
    }
    // Bareiss: determinant of an integer matrix with exact divisions
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..size {
        if a[k][k] == 0 {
            let swap = (k + 1..size).find(|&r| a[r][k] != 0);
            match swap {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return Ok(0),
            }
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let t = csub(
                    cmul(a[k][k], a[i][j], "resultant")?,
                    cmul(a[i][k], a[k][j], "resultant")?,
                    "resultant",
                )?;
                a[i][j] = t / prev; // exact by Bareiss
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    Ok(sign * a[size - 1][size - 1])
}

/// Discriminant of a monic polynomial of degree ≥ 2, with the sign
/// convention disc(f) = (−1)^{n(n−1)/2} · Res(f, f′).
pub fn int_poly_disc(f: &IntPoly) -> Result<i128> {
    let n = f.degree().unwrap_or(0);
    if n < 2 {
        return Err(Error::Domain(format!(
            "discriminant needs degree >= 2, got degree {n}"
        )));
    }
    if !f.is_monic() {
        return Err(Error::Domain("discriminant requires a monic input".into()));
    }
    let r = resultant(f, &f.derivative()?)?;
    let sign = if (n * (n - 1) / 2) % 2 == 0 { 1 } else { -1 };
    Ok(sign * r)
}

/// Complete factorization of a monic f into monic irreducibles over Z,
/// repeated according to multiplicity and sorted; the product reproduces
/// f exactly. Single big-prime method: factor mod one prime past twice
/// the Mignotte bound, then search lifted subset products for divisors.
pub fn int_poly_factor(f: &IntPoly, seed: u64) -> Result<Vec<IntPoly>> {
    factor_with_cap(f, seed, FACTOR_DEG_CAP)
}

/// Census-internal variant with the degree cap relaxed to 16.
pub(crate) fn int_poly_factor_deg16(f: &IntPoly, seed: u64) -> Result<Vec<IntPoly>> {
    factor_with_cap(f, seed, CENSUS_DEG_CAP)
}

fn factor_with_cap(f: &IntPoly, seed: u64, cap: usize) -> Result<Vec<IntPoly>> {
    let n = match f.degree() {
        None => return Err(Error::Domain("factorization of zero polynomial".into())),
        Some(n) => n,
    };
    if !f.is_monic() {
        return Err(Error::Domain("factorization requires a monic input".into()));
    }
    if n > cap {
        return Err(Error::Range(format!(
            "factorization degree cap is {cap}, got degree {n}"
        )));
    }
    if f.c.iter().any(|&a| a.abs() > FACTOR_COEFF_CAP) {
        return Err(Error::Range(
            "factorization coefficient magnitudes must be <= 2^40".into(),
        ));
    }
    let mut out = Vec::new();
    if n == 0 {
        return Ok(out);
    }

    // powers of x split off directly
    let shift = f.c.iter().take_while(|&&a| a == 0).count();
    out.extend(std::iter::repeat(IntPoly::x()).take(shift));
    let g = IntPoly::new(&f.c[shift..]);
    if g.deg() > 0 {
        let cap = cmul(1i128 << g.deg().min(63), g.norm2_ceil()?, "Mignotte bound")?;
        let radical = squarefree_radical(&g, cap)?;
        let irreducibles = factor_squarefree(&radical, seed)?;
        for h in irreducibles {
            let mut rest = g.clone();
            while let Some(q) = rest.div_exact_monic_bounded(&h, cap) {
                out.push(h.clone());
                rest = q;
            }
        }
    }
    out.sort_by(|a, b| (a.deg(), &a.c).cmp(&(b.deg(), &b.c)));

    // cheap end-to-end guard: the factorization must reassemble
    let mut prod = IntPoly::one();
    for h in &out {
        prod = prod.mul(h)?;
    }
    if &prod != f {
        return Err(Error::Invariant(
            "factor product does not reproduce the input".into(),
        ));
    }
    Ok(out)
}

/// Product of the distinct irreducible factors of a monic g (each once):
/// g / gcd(g, g'), with the monic gcd recovered from a single big prime
/// and certified by exact division. `cap` is the Mignotte bound for
/// monic divisors of g.
fn squarefree_radical(g: &IntPoly, cap: i128) -> Result<IntPoly> {
    let d = g.derivative()?;
    let mut p = next_prime_start(cap)?;
    for _ in 0..PRIME_ATTEMPTS {
        let gp = g.reduce_mod(p)?;
        let dp = d.reduce_mod(p)?;
        if !dp.is_zero() && dp.degree() == d.degree() {
            let hp = gp.gcd(&dp);
            let h = lift_symmetric(&hp, p);
            if h.is_monic() {
                if let Some(rad) = certified_radical(g, &d, &h, cap) {
                    return Ok(rad);
                }
            }
        }
        p = next_prime_u64(p + 1);
    }
    Err(Error::Resource(
        "no usable prime found for squarefree reduction".into(),
    ))
}

fn certified_radical(g: &IntPoly, d: &IntPoly, h: &IntPoly, cap: i128) -> Option<IntPoly> {
    // h is the true gcd iff it divides both g and g' (degree is already
    // maximal: a modular gcd can only be too big, never too small)
    if h.deg() == 0 {
        return Some(g.clone());
    }
    let divides_g = g.div_exact_monic_bounded(h, cap);
    d.div_exact_monic_bounded(h, cap.saturating_mul(16))?;
    divides_g
}

/// Zassenhaus on a monic squarefree w.
fn factor_squarefree(w: &IntPoly, seed: u64) -> Result<Vec<IntPoly>> {
    if w.deg() == 0 {
        return Ok(Vec::new());
    }
    if w.deg() == 1 {
        return Ok(vec![w.clone()]);
    }
    // any monic factor of w has coefficients within 2^{deg w} * |w|_2
    let mignotte = cmul(1i128 << w.deg().min(63), w.norm2_ceil()?, "Mignotte bound")?;
    let mut p = next_prime_start(mignotte)?;
    let mut chosen = None;
    for _ in 0..PRIME_ATTEMPTS {
        let wp = w.reduce_mod(p)?;
        if wp.degree() == w.degree() && wp.gcd(&wp.derivative()).degree() == Some(0) {
            chosen = Some(p);
            break;
        }
        p = next_prime_u64(p + 1);
    }
    let p = chosen.ok_or_else(|| {
        Error::Resource("no squarefree reduction prime found below the ceiling".into())
    })?;

    let mut modular: Vec<FpPoly> = w
        .reduce_mod(p)?
        .factor_full(seed)?
        .into_iter()
        .map(|(h, _)| h)
        .collect();
    let mut out = Vec::new();
    let mut rest = w.clone();
    let mut s = 1usize;
    while 2 * s <= modular.len() {
        let mut found = None;
        'subsets: for combo in combinations(modular.len(), s) {
            let mut prod = FpPoly::one(p);
            for &i in &combo {
                prod = prod.mul(&modular[i]);
            }
            let cand = lift_symmetric(&prod, p);
            if let Some(q) = rest.div_exact_monic_bounded(&cand, mignotte) {
                found = Some((combo, cand, q));
                break 'subsets;
            }
        }
        match found {
            Some((combo, cand, q)) => {
                out.push(cand);
                rest = q;
                for &i in combo.iter().rev() {
                    modular.remove(i);
                }
            }
            None => s += 1,
        }
    }
    if rest.deg() > 0 {
        out.push(rest);
    }
    Ok(out)
}

/// First prime comfortably past twice the coefficient bound.
fn next_prime_start(bound: i128) -> Result<u64> {
    let start = cadd(cmul(bound, 2, "prime floor")?, 3, "prime floor")?;
    if start >= (1i128 << 62) {
        return Err(Error::Resource(format!(
            "reduction prime floor {start} exceeds the 2^62 ceiling"
        )));
    }
    Ok(next_prime_u64(start as u64))
}

/// Residues in [0, p) mapped to the symmetric range (−p/2, p/2].
fn lift_symmetric(f: &FpPoly, p: u64) -> IntPoly {
    let half = (p / 2) as i128;
    let c: Vec<i128> = f
        .coeffs()
        .iter()
        .map(|&a| {
            let a = a as i128;
            if a > half {
                a - p as i128
            } else {
                a
            }
        })
        .collect();
    IntPoly::new(&c)
}

/// Index combinations of size k from 0..n, lexicographic.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i128]) -> IntPoly {
        IntPoly::new(c)
    }

    #[test]
    fn disc_worked_examples() {
        // x^3 + px + q has disc -4p^3 - 27q^2
        assert_eq!(int_poly_disc(&p(&[1, -3, 0, 1])).unwrap(), 81);
        assert_eq!(int_poly_disc(&p(&[-1, 0, 1])).unwrap(), 4);
        assert_eq!(int_poly_disc(&p(&[-2, 0, 0, 1])).unwrap(), -108);
        for b in -5i128..=5 {
            for c in -5i128..=5 {
                assert_eq!(int_poly_disc(&p(&[c, b, 1])).unwrap(), b * b - 4 * c);
            }
        }
    }

    #[test]
    fn disc_rejects_bad_inputs() {
        assert!(matches!(int_poly_disc(&p(&[1, 1])), Err(Error::Domain(_))));
        assert!(matches!(
            int_poly_disc(&p(&[1, 1, 2])),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn resultant_of_coprime_linears() {
        // res(x - a, x - b) = b - a up to the fixed row convention
        let r = resultant(&p(&[-2, 1]), &p(&[-5, 1])).unwrap();
        assert_eq!(r.abs(), 3);
        assert_eq!(resultant(&p(&[-2, 1]), &p(&[-2, 1])).unwrap(), 0);
    }

    #[test]
    fn factor_worked_examples() {
        assert_eq!(
            int_poly_factor(&p(&[-1, 0, 1]), 0).unwrap(),
            vec![p(&[-1, 1]), p(&[1, 1])]
        );
        assert_eq!(
            int_poly_factor(&p(&[0, -1, 0, 1]), 0).unwrap(),
            vec![p(&[-1, 1]), p(&[0, 1]), p(&[1, 1])]
        );
        // x^4 + 1 is irreducible over Z
        assert_eq!(
            int_poly_factor(&p(&[1, 0, 0, 0, 1]), 0).unwrap(),
            vec![p(&[1, 0, 0, 0, 1])]
        );
        // x^4 - x = x (x-1) (x^2+x+1)
        assert_eq!(
            int_poly_factor(&p(&[0, -1, 0, 0, 1]), 0).unwrap(),
            vec![p(&[-1, 1]), p(&[0, 1]), p(&[1, 1, 1])]
        );
        // x^5 - x = x (x-1) (x+1) (x^2+1)
        assert_eq!(
            int_poly_factor(&p(&[0, -1, 0, 0, 0, 1]), 0).unwrap(),
            vec![p(&[-1, 1]), p(&[0, 1]), p(&[1, 1]), p(&[1, 0, 1])]
        );
    }

    #[test]
    fn factor_repeated_roots() {
        // (x-1)^2 (x+2)
        let f = p(&[-1, 1]).mul(&p(&[-1, 1])).unwrap().mul(&p(&[2, 1])).unwrap();
        assert_eq!(
            int_poly_factor(&f, 7).unwrap(),
            vec![p(&[-1, 1]), p(&[-1, 1]), p(&[2, 1])]
        );
        // x^6: pure power of x
        let f = p(&[0, 0, 0, 0, 0, 0, 1]);
        assert_eq!(int_poly_factor(&f, 0).unwrap(), vec![p(&[0, 1]); 6]);
    }

    #[test]
    fn factor_rejects_bad_inputs() {
        assert!(matches!(
            int_poly_factor(&p(&[1, 2, 2]), 0),
            Err(Error::Domain(_))
        ));
        let mut c = vec![0i128; 10];
        c[9] = 1;
        assert!(matches!(
            int_poly_factor(&p(&c), 0),
            Err(Error::Range(_))
        ));
        assert!(matches!(
            int_poly_factor(&p(&[(1i128 << 41), 0, 1]), 0),
            Err(Error::Range(_))
        ));
    }

    #[test]
    fn internal_cap_allows_census_degrees() {
        let mut c = vec![0i128; 13];
        c[12] = 1;
        c[0] = -1; // x^12 - 1
        let fs = int_poly_factor_deg16(&p(&c), 0).unwrap();
        let degs: Vec<usize> = fs.iter().map(|f| f.degree().unwrap()).collect();
        // cyclotomic degrees: phi(d) for d | 12
        let mut expect = vec![1, 1, 2, 2, 2, 4];
        expect.sort_unstable();
        assert_eq!(degs, expect);
    }

    // bit-polynomial helpers so the squarefree test can also cover p = 2,
    // which the FpPoly carrier deliberately excludes
    fn deg2(a: u64) -> u32 {
        63 - a.leading_zeros()
    }

    fn rem2(mut a: u64, b: u64) -> u64 {
        while a != 0 && deg2(a) >= deg2(b) {
            a ^= b << (deg2(a) - deg2(b));
        }
        a
    }

    fn squarefree_mod2(c: &[i128]) -> bool {
        let f = c
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &v)| acc | (((v & 1) as u64) << i));
        let fd = c
            .iter()
            .enumerate()
            .skip(1)
            .fold(0u64, |acc, (i, &v)| {
                acc | ((((i as i128 * v) & 1) as u64) << (i - 1))
            });
        if fd == 0 {
            return f <= 1; // nonconstant with zero derivative is a square
        }
        let (mut a, mut b) = (f, fd);
        while b != 0 {
            let r = rem2(a, b);
            a = b;
            b = r;
        }
        a == 1
    }

    #[test]
    fn disc_vanishes_mod_p_iff_not_squarefree() {
        // deg <= 5, coefficients in [-4, 4] (sampled grid), p <= 50
        let odd_primes = [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47];
        for a in -4i128..=4 {
            for b in -4i128..=4 {
                for c in -4i128..=4 {
                    let coeffs = [c, b, a, 0, 0, 1];
                    let f = p(&coeffs);
                    let disc = int_poly_disc(&f).unwrap();
                    assert_eq!(disc % 2 == 0, !squarefree_mod2(&coeffs), "f={f:?} q=2");
                    for &q in &odd_primes {
                        let fq = f.reduce_mod(q).unwrap();
                        let sqfree = fq.gcd(&fq.derivative()).degree() == Some(0)
                            && !fq.derivative().is_zero();
                        assert_eq!(
                            disc.rem_euclid(q as i128) == 0,
                            !sqfree,
                            "f={f:?} q={q}"
                        );
                    }
                }
            }
        }
    }

    fn arb_monic() -> impl Strategy<Value = Vec<i128>> {
        prop::collection::vec(-5i128..=5, 1..7)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(96))]

        #[test]
        fn factorization_roundtrip(lower in arb_monic(), seed in 0u64..100) {
            let f = IntPoly::monic_with_lower(&lower);
            let factors = int_poly_factor(&f, seed).unwrap();
            let mut prod = IntPoly::one();
            for h in &factors {
                prop_assert!(h.is_monic());
                prod = prod.mul(h).unwrap();
            }
            prop_assert_eq!(prod, f);
        }

        #[test]
        fn factors_are_irreducible_by_shape(lower in arb_monic(), seed in 0u64..100) {
            let f = IntPoly::monic_with_lower(&lower);
            for h in int_poly_factor(&f, seed).unwrap() {
                // re-factoring an irreducible returns it unchanged
                let again = int_poly_factor(&h, seed.wrapping_add(1)).unwrap();
                prop_assert_eq!(again, vec![h]);
            }
        }
    }
}
