//! Integer and prime utilities: sieves, modular arithmetic, Legendre
//! symbols, perfect-square tests, integer factorization helpers, and the
//! Mertens-type prime sum.

mod fppoly;
mod intpoly;

pub use fppoly::{fp_factor_full, fp_factor_shape, FactorShape, FpPoly};
pub(crate) use intpoly::{int_poly_factor_deg16, CENSUS_DEG_CAP};
pub use intpoly::{int_poly_disc, int_poly_factor, resultant, IntPoly};

use crate::{Error, Result};

/// Hard ceiling for [`primes_up_to`] and segmented prime iteration.
pub const SIEVE_CEILING: u64 = 1_000_000_000;

/// Hard ceiling for [`mertens_sum`].
pub const MERTENS_CEILING: u64 = 100_000_000;

/// All primes `<= x`, ascending.
///
/// Odd-only sieve of Eratosthenes; fine up to the 1e9 ceiling at desk
/// scale, though callers that only need to visit primes should prefer
/// [`for_primes_in`] which works in fixed-size segments.
pub fn primes_up_to(x: u64) -> Result<Vec<u64>> {
    if !(2..=SIEVE_CEILING).contains(&x) {
        return Err(Error::Range(format!(
            "primes_up_to expects 2 <= x <= {SIEVE_CEILING}, got {x}"
        )));
    }
    let n = x as usize;
    let mut primes = vec![2u64];
    if n >= 3 {
        // bit i stands for the odd number 2i+3
        let m = (n - 3) / 2 + 1;
        let mut composite = vec![false; m];
        let mut i = 0usize;
        while (2 * i + 3) * (2 * i + 3) <= n {
            if !composite[i] {
                let p = 2 * i + 3;
                let mut j = (p * p - 3) / 2;
                while j < m {
                    composite[j] = true;
                    j += p;
                }
            }
            i += 1;
        }
        primes.extend(
            (0..m)
                .filter(|&i| !composite[i])
                .map(|i| (2 * i + 3) as u64),
        );
    }
    Ok(primes)
}

/// Visit every prime in `[lo, hi]` ascending, without materializing the
/// whole list. Segmented sieve with 2^20-wide segments.
pub fn for_primes_in(lo: u64, hi: u64, mut visit: impl FnMut(u64)) -> Result<()> {
    if hi > SIEVE_CEILING {
        return Err(Error::Range(format!(
            "for_primes_in expects hi <= {SIEVE_CEILING}, got {hi}"
        )));
    }
    if hi < 2 || hi < lo {
        return Ok(());
    }
    let lo = lo.max(2);
    let root = isqrt_u64(hi);
    let base = primes_up_to(root.max(2))?;
    const SEG: u64 = 1 << 20;
    let mut start = lo;
    while start <= hi {
        let end = (start.saturating_add(SEG - 1)).min(hi);
        let len = (end - start + 1) as usize;
        let mut comp = vec![false; len];
        for &p in &base {
            if p.saturating_mul(p) > end {
                break;
            }
            let first = ((start + p - 1) / p * p).max(p * p);
            let mut j = first;
            while j <= end {
                comp[(j - start) as usize] = true;
                j += p;
            }
        }
        for (i, &c) in comp.iter().enumerate() {
            if !c {
                visit(start + i as u64);
            }
        }
        start = end + 1;
    }
    Ok(())
}

/// `(a * b) mod m` without overflow for any `u64` operands.
#[inline]
pub fn mulmod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// `base^exp mod m` by square and multiply.
pub fn modpow_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    base %= m;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod_u64(acc, base, m);
        }
        base = mulmod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers (the 12 smallest prime
/// bases are a proven witness set for this range).
pub fn is_prime_u64(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for p in BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in BASES {
        let mut x = modpow_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Smallest prime `>= n`.
pub fn next_prime_u64(mut n: u64) -> u64 {
    if n <= 2 {
        return 2;
    }
    if n % 2 == 0 {
        n += 1;
    }
    while !is_prime_u64(n) {
        n += 2;
    }
    n
}

/// Legendre symbol `(a/p)` for an odd prime `p`, via Euler's criterion.
pub fn legendre(a: i128, p: u64) -> Result<i8> {
    if p < 3 || p % 2 == 0 || !is_prime_u64(p) {
        return Err(Error::Domain(format!(
            "legendre needs an odd prime modulus, got {p}"
        )));
    }
    let r = a.rem_euclid(p as i128) as u64;
    if r == 0 {
        return Ok(0);
    }
    let e = modpow_u64(r, (p - 1) / 2, p);
    Ok(if e == 1 { 1 } else { -1 })
}

/// Floor of the square root.
pub fn isqrt_u128(n: u128) -> u128 {
    if n < 2 {
        return n;
    }
    let shift = (128 - n.leading_zeros() + 1) / 2;
    let mut x = 1u128 << shift;
    loop {
        let y = (x + n / x) / 2;
        if y >= x {
            return x;
        }
        x = y;
    }
}

/// Floor of the square root.
pub fn isqrt_u64(n: u64) -> u64 {
    isqrt_u128(n as u128) as u64
}

const SQUARE_MOD_256: [bool; 256] = {
    let mut t = [false; 256];
    let mut i = 0usize;
    while i < 256 {
        t[(i * i) % 256] = true;
        i += 1;
    }
    t
};

/// True iff `n >= 0` and `floor(sqrt(n))^2 = n`.
pub fn is_perfect_square(n: i128) -> bool {
    if n < 0 {
        return false;
    }
    let u = n as u128;
    if !SQUARE_MOD_256[(u & 255) as usize] {
        return false;
    }
    let r = isqrt_u128(u);
    r * r == u
}

/// gcd on magnitudes (gcd(0,0) = 0).
///
/// Drops to u64 arithmetic as soon as both operands fit: the exhaustive
/// pair scans call this in their inner loop, and a u128 division costs
/// several times what a u64 division does.
pub fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    const W: u128 = u64::MAX as u128;
    while b != 0 {
        if a <= W && b <= W {
            let (mut x, mut y) = (a as u64, b as u64);
            while y != 0 {
                let t = x % y;
                x = y;
                y = t;
            }
            return x as u128;
        }
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// gcd of absolute values as a nonnegative i128.
pub fn gcd_i128(a: i128, b: i128) -> i128 {
    gcd_u128(a.unsigned_abs(), b.unsigned_abs()) as i128
}

/// Strong-probable-prime test; deterministic below 2^64, twelve rounds of
/// fixed prime bases above (ample for desk-scale witnesses).
pub fn is_prime_u128(n: u128) -> bool {
    if n <= u64::MAX as u128 {
        return is_prime_u64(n as u64);
    }
    const BASES: [u128; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in BASES {
        if n % p == 0 {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in BASES {
        let mut x = modpow_u128(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod_u128(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn mulmod_u128(a: u128, b: u128, m: u128) -> u128 {
    if m <= u64::MAX as u128 {
        return mulmod_u64((a % m) as u64, (b % m) as u64, m as u64) as u128;
    }
    // double-and-add; slow but only reachable for >64-bit moduli
    let mut a = a % m;
    let mut b = b % m;
    let mut acc = 0u128;
    while b > 0 {
        if b & 1 == 1 {
            acc = acc.checked_add(a).map(|v| v % m).unwrap_or_else(|| {
                // acc + a overflowed 128 bits: subtract first
                (acc - (m - a)) % m
            });
        }
        b >>= 1;
        if b > 0 {
            a = a.checked_add(a).map(|v| v % m).unwrap_or_else(|| (a - (m - a)) % m);
        }
    }
    acc
}

fn modpow_u128(mut base: u128, mut exp: u128, m: u128) -> u128 {
    if m == 1 {
        return 0;
    }
    base %= m;
    let mut acc = 1u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod_u128(acc, base, m);
        }
        base = mulmod_u128(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Distinct prime factors of `n >= 1`, ascending. Trial division by small
/// primes, then Brent-Pollard rho on what remains. Word-size inputs run
/// the trial division in u64; the congruence scans factor hundreds of
/// millions of small gcds and the wide division would dominate them.
pub fn prime_factors_u128(n: u128) -> Vec<u128> {
    if n <= 1 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let n = if n <= u64::MAX as u128 {
        let mut m = n as u64;
        for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
            if m % p == 0 {
                out.push(p as u128);
                while m % p == 0 {
                    m /= p;
                }
            }
        }
        let mut d = 53u64;
        while d * d <= m && d < 10_000 {
            if m % d == 0 {
                out.push(d as u128);
                while m % d == 0 {
                    m /= d;
                }
            }
            d += 2;
        }
        m as u128
    } else {
        let mut m = n;
        for p in [2u128, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
            if m % p == 0 {
                out.push(p);
                while m % p == 0 {
                    m /= p;
                }
            }
        }
        let mut d = 53u128;
        while d * d <= m && d < 10_000 {
            if m % d == 0 {
                out.push(d);
                while m % d == 0 {
                    m /= d;
                }
            }
            d += 2;
        }
        m
    };
    if n > 1 {
        let mut stack = vec![n];
        while let Some(m) = stack.pop() {
            if m == 1 {
                continue;
            }
            if is_prime_u128(m) {
                if !out.contains(&m) {
                    out.push(m);
                }
                continue;
            }
            let f = pollard_rho(m);
            stack.push(f);
            stack.push(m / f);
        }
    }
    out.sort_unstable();
    out
}

/// Brent's variant of Pollard rho; returns a nontrivial factor of a
/// composite `n > 1`.
fn pollard_rho(n: u128) -> u128 {
    if n % 2 == 0 {
        return 2;
    }
    let mut c = 1u128;
    loop {
        let f = |x: u128| (mulmod_u128(x, x, n) + c) % n;
        let mut x = 2u128;
        let mut y = 2u128;
        let mut d = 1u128;
        let mut count = 0u32;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd_u128(x.abs_diff(y), n);
            count += 1;
            if count > 1 << 24 {
                break;
            }
        }
        if d != n && d != 1 {
            return d;
        }
        c += 1;
    }
}

/// `sum over primes p <= x of (log p)/p`.
///
/// This is the classical Mertens-type sum; it equals `log x + O(1)` with
/// the error empirically within 2 of zero across the supported range.
pub fn mertens_sum(x: f64) -> Result<f64> {
    if !(2.0..=MERTENS_CEILING as f64).contains(&x) {
        return Err(Error::Range(format!(
            "mertens_sum expects 2 <= x <= {MERTENS_CEILING}, got {x}"
        )));
    }
    let hi = x.floor() as u64;
    let mut s = 0.0f64;
    for_primes_in(2, hi, |p| {
        let pf = p as f64;
        s += pf.ln() / pf;
    })?;
    Ok(s)
}

pub(crate) fn cadd(a: i128, b: i128, ctx: &'static str) -> Result<i128> {
    a.checked_add(b).ok_or(Error::Overflow(ctx))
}

pub(crate) fn csub(a: i128, b: i128, ctx: &'static str) -> Result<i128> {
    a.checked_sub(b).ok_or(Error::Overflow(ctx))
}

pub(crate) fn cmul(a: i128, b: i128, ctx: &'static str) -> Result<i128> {
    a.checked_mul(b).ok_or(Error::Overflow(ctx))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division_primes(x: u64) -> Vec<u64> {
        (2..=x)
            .filter(|&n| (2..n).all(|d| n % d != 0))
            .collect()
    }

    #[test]
    fn primes_small_cases() {
        assert_eq!(primes_up_to(10).unwrap(), vec![2, 3, 5, 7]);
        assert_eq!(primes_up_to(2).unwrap(), vec![2]);
        assert_eq!(primes_up_to(100).unwrap().len(), 25);
        assert_eq!(primes_up_to(1000).unwrap(), trial_division_primes(1000));
    }

    #[test]
    fn primes_range_errors() {
        assert!(matches!(primes_up_to(1), Err(Error::Range(_))));
        assert!(matches!(
            primes_up_to(SIEVE_CEILING + 1),
            Err(Error::Range(_))
        ));
    }

    #[test]
    fn segmented_iteration_matches_sieve() {
        let all = primes_up_to(100_000).unwrap();
        let mut seg = Vec::new();
        for_primes_in(2, 100_000, |p| seg.push(p)).unwrap();
        assert_eq!(all, seg);

        let mut window = Vec::new();
        for_primes_in(50_000, 60_000, |p| window.push(p)).unwrap();
        let expect: Vec<u64> = all
            .iter()
            .copied()
            .filter(|&p| (50_000..=60_000).contains(&p))
            .collect();
        assert_eq!(window, expect);
    }

    #[test]
    fn legendre_worked_examples() {
        assert_eq!(legendre(1, 7).unwrap(), 1);
        assert_eq!(legendre(3, 7).unwrap(), -1);
        assert_eq!(legendre(-4, 5).unwrap(), 1);
        assert_eq!(legendre(14, 7).unwrap(), 0);
        assert!(matches!(legendre(3, 4), Err(Error::Domain(_))));
        assert!(matches!(legendre(3, 2), Err(Error::Domain(_))));
        assert!(matches!(legendre(3, 9), Err(Error::Domain(_))));
    }

    #[test]
    fn legendre_multiplicative() {
        for &p in primes_up_to(101).unwrap().iter().skip(1) {
            // skip(1) drops p=2
            for a in 1..p {
                for b in 1..p {
                    let lhs =
                        legendre(a as i128, p).unwrap() as i32 * legendre(b as i128, p).unwrap() as i32;
                    let rhs = legendre((a as i128) * (b as i128), p).unwrap() as i32;
                    assert_eq!(lhs, rhs, "p={p} a={a} b={b}");
                }
            }
        }
    }

    #[test]
    fn legendre_counts_residues() {
        // exactly (p-1)/2 nonzero squares
        for p in [3u64, 5, 7, 11, 13, 101] {
            let squares = (1..p).filter(|&a| legendre(a as i128, p).unwrap() == 1).count();
            assert_eq!(squares as u64, (p - 1) / 2);
        }
    }

    #[test]
    fn perfect_squares() {
        assert!(is_perfect_square(81));
        assert!(is_perfect_square(0));
        assert!(!is_perfect_square(-4));
        assert!(!is_perfect_square((1i128 << 62) + 1));
        assert!(is_perfect_square(1i128 << 62));
        for n in 0..10_000i128 {
            let r = isqrt_u128(n as u128) as i128;
            assert_eq!(is_perfect_square(n), r * r == n);
        }
    }

    #[test]
    fn prime_tests() {
        assert!(is_prime_u64(2));
        assert!(is_prime_u64(1_000_000_007));
        assert!(!is_prime_u64(1));
        assert!(!is_prime_u64(3215031751)); // strong pseudoprime to bases 2,3,5,7
        assert_eq!(next_prime_u64(14), 17);
        assert_eq!(next_prime_u64(17), 17);
    }

    #[test]
    fn factor_distinct_primes() {
        assert_eq!(prime_factors_u128(1), Vec::<u128>::new());
        assert_eq!(prime_factors_u128(6), vec![2, 3]);
        assert_eq!(prime_factors_u128(720), vec![2, 3, 5]);
        assert_eq!(
            prime_factors_u128(1_000_003u128 * 1_000_033),
            vec![1_000_003, 1_000_033]
        );
        assert_eq!(prime_factors_u128(1 << 40), vec![2]);
    }

    #[test]
    fn mertens_examples() {
        let one_term = mertens_sum(2.0).unwrap();
        assert!((one_term - 2f64.ln() / 2.0).abs() < 1e-12);
        let x = 100.0f64;
        assert!((mertens_sum(x).unwrap() - x.ln()).abs() <= 2.0);
        let x = 1e6f64;
        assert!((mertens_sum(x).unwrap() - x.ln()).abs() <= 1.6);
        assert!(matches!(mertens_sum(1.5), Err(Error::Range(_))));
        assert!(matches!(mertens_sum(1e9), Err(Error::Range(_))));
    }

    #[test]
    fn mertens_nondecreasing() {
        let mut prev = 0.0;
        for x in [100.0, 316.0, 1000.0, 3162.0, 10_000.0] {
            let v = mertens_sum(x).unwrap();
            assert!(v >= prev);
            prev = v;
        }
    }
}
