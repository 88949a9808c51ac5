//! Forward orbits of polynomial self-maps of Z.
//!
//! For a map phi of degree d >= 2 and a base point P, reduction mod p
//! gives a finite orbit of some length m_p. The heuristic under test says
//! m_p >= eps * log p away from a thin set of primes whenever
//! eps < 1/log d, so the profile driver reports the fraction of primes
//! up to x that clear the threshold, at x and at two earlier checkpoints.
//! Everything here is a finite-x density; no claim about the limit is
//! made or tested. Height growth along the integral orbit is checked
//! exactly with big integers, the only place the crate needs them.

use std::collections::HashMap;
use std::f64::consts::LN_2;
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{for_primes_in, is_prime_u64, mulmod_u64, IntPoly};
use crate::{Error, Result};

/// Largest prime accepted by `orbit_mod_p`. The cycle search is O(m_p)
/// time and O(1) space, so the cap is on the modulus, not the orbit.
pub const ORBIT_PRIME_CEILING: u64 = 1_000_000_000;

/// Cap for the set-accumulation route, which stores the whole orbit.
pub const NAIVE_ORBIT_CEILING: u64 = 1_000_000;

/// Largest x accepted by `density_profile`.
pub const DENSITY_X_CEILING: u64 = 10_000_000;

/// Iteration cap for `height_growth_check`.
pub const HEIGHT_ITER_CAP: u32 = 20;

/// Orbit values above this many bits abort the height check. Degree-two
/// maps double the bit size each step, so 20 iterations from a small
/// seed stay far below it; anything that hits it would dwarf the budget.
pub const HEIGHT_BIT_BUDGET: u64 = 1_000_000;

/// A polynomial self-map of Z of degree at least 2.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PolyMap {
    phi: IntPoly,
}

impl PolyMap {
    /// Degree 0 and 1 maps have pre-periodic behaviour of a different
    /// nature (affine orbits are arithmetic progressions), so they are
    /// rejected here rather than special-cased downstream.
    pub fn new(phi: IntPoly) -> Result<PolyMap> {
        match phi.degree() {
            Some(d) if d >= 2 => Ok(PolyMap { phi }),
            _ => Err(Error::Domain(
                "a polynomial self-map needs degree >= 2".into(),
            )),
        }
    }

    pub fn poly(&self) -> &IntPoly {
        &self.phi
    }

    pub fn degree(&self) -> usize {
        self.phi.degree().expect("degree checked at construction")
    }

    /// Coefficients reduced into [0, p), ascending.
    fn reduced_coeffs(&self, p: u64) -> Vec<u64> {
        let pi = p as i128;
        self.phi
            .coeffs()
            .iter()
            .map(|&c| c.rem_euclid(pi) as u64)
            .collect()
    }

    /// Exact evaluation, used by the height check.
    fn eval_big(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::from(0);
        for &c in self.phi.coeffs().iter().rev() {
            acc = acc * x + BigInt::from(c);
        }
        acc
    }
}

/// Horner step mod p over pre-reduced coefficients. p <= 10^9 keeps the
/// add below u64::MAX without widening.
fn horner_mod_p(cs: &[u64], x: u64, p: u64) -> u64 {
    let mut acc = 0u64;
    for &c in cs.iter().rev() {
        acc = (mulmod_u64(acc, x, p) + c) % p;
    }
    acc
}

/// The reduced orbit of a base point mod p: m_p distinct values, the
/// last `cycle` of them periodic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct OrbitRecord {
    pub p: u64,
    /// Length of the pre-periodic tail.
    pub tail: u64,
    /// Length of the cycle, at least 1.
    pub cycle: u64,
    /// tail + cycle, the number of distinct orbit values.
    pub m_p: u64,
}

fn check_orbit_prime(p: u64, ceiling: u64, who: &str) -> Result<()> {
    if p > ceiling {
        return Err(Error::Range(format!(
            "{who} expects p <= {ceiling}, got {p}"
        )));
    }
    if !is_prime_u64(p) {
        return Err(Error::Domain(format!("{who} expects a prime, got {p}")));
    }
    Ok(())
}

fn check_orbit_record(rec: &OrbitRecord) -> Result<()> {
    if rec.cycle == 0 || rec.m_p != rec.tail + rec.cycle || rec.m_p > rec.p {
        return Err(Error::Invariant(format!(
            "orbit record out of range: p={} tail={} cycle={} m_p={}",
            rec.p, rec.tail, rec.cycle, rec.m_p
        )));
    }
    Ok(())
}

/// Orbit length of `base` under `phi` mod p, by Brent's cycle search.
///
/// Runs in O(m_p) evaluations and constant space. The record is checked
/// against m_p = tail + cycle <= p before it is returned.
pub fn orbit_mod_p(phi: &PolyMap, base: i64, p: u64) -> Result<OrbitRecord> {
    check_orbit_prime(p, ORBIT_PRIME_CEILING, "orbit_mod_p")?;
    let cs = phi.reduced_coeffs(p);
    let step = |x: u64| horner_mod_p(&cs, x, p);
    let x0 = (base as i128).rem_euclid(p as i128) as u64;

    let mut power = 1u64;
    let mut cycle = 1u64;
    let mut tortoise = x0;
    let mut hare = step(x0);
    while tortoise != hare {
        if power == cycle {
            tortoise = hare;
            power *= 2;
            cycle = 0;
        }
        hare = step(hare);
        cycle += 1;
    }

    let mut hare = x0;
    for _ in 0..cycle {
        hare = step(hare);
    }
    let mut tortoise = x0;
    let mut tail = 0u64;
    while tortoise != hare {
        tortoise = step(tortoise);
        hare = step(hare);
        tail += 1;
    }

    let rec = OrbitRecord {
        p,
        tail,
        cycle,
        m_p: tail + cycle,
    };
    check_orbit_record(&rec)?;
    Ok(rec)
}

/// Same record by set accumulation: walk until the first repeated value,
/// remembering where everything was first seen. O(m_p) memory, so the
/// modulus cap is much lower. This is the oracle route for the cycle
/// search and is kept deliberately independent of it.
pub fn orbit_mod_p_naive(phi: &PolyMap, base: i64, p: u64) -> Result<OrbitRecord> {
    check_orbit_prime(p, NAIVE_ORBIT_CEILING, "orbit_mod_p_naive")?;
    let cs = phi.reduced_coeffs(p);
    let mut seen: HashMap<u64, u64> = HashMap::new();
    let mut x = (base as i128).rem_euclid(p as i128) as u64;
    let mut idx = 0u64;
    loop {
        if let Some(&first) = seen.get(&x) {
            let rec = OrbitRecord {
                p,
                tail: first,
                cycle: idx - first,
                m_p: idx,
            };
            check_orbit_record(&rec)?;
            return Ok(rec);
        }
        seen.insert(x, idx);
        x = horner_mod_p(&cs, x, p);
        idx += 1;
    }
}

/// One prime's line in a density profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrbitRow {
    pub p: u64,
    pub tail: u64,
    pub cycle: u64,
    pub m_p: u64,
    /// eps * log p, the bound m_p is measured against.
    pub threshold: f64,
    pub pass: bool,
    /// Exploratory only: whether m_p >= sqrt(p). One expects log p to be
    /// replaceable by a power of p eventually; the column records how the
    /// data leans and nothing downstream asserts anything about it.
    pub sqrt_pass: bool,
}

/// Fraction of primes p <= x whose reduced orbit clears eps * log p,
/// with the same fraction at x/100 and x/10 for a crude trend read.
#[derive(Debug, Clone, Serialize)]
pub struct DensityProfile {
    pub x: u64,
    pub eps: f64,
    pub degree: usize,
    pub primes_scanned: u64,
    pub passing: u64,
    /// passing / primes_scanned, a finite-x density.
    pub fraction: f64,
    /// (cutoff, finite-cutoff fraction), ascending cutoffs.
    pub checkpoints: Vec<(u64, f64)>,
    pub rows: Vec<OrbitRow>,
    pub wall_ms: u128,
}

impl DensityProfile {
    pub fn csv_header() -> &'static str {
        "p,tail,cycle,m_p,threshold,pass,sqrt_pass"
    }

    pub fn csv_rows(&self) -> Vec<String> {
        self.rows
            .iter()
            .map(|r| {
                format!(
                    "{},{},{},{},{:.6},{},{}",
                    r.p, r.tail, r.cycle, r.m_p, r.threshold, r.pass, r.sqrt_pass
                )
            })
            .collect()
    }
}

/// Scan all primes p <= x and report the finite-x density of
/// m_p >= eps * log p.
///
/// eps must sit strictly inside (0, 1/log d): at eps = 1/log d the
/// expected orbit length and the threshold cross and the statement being
/// probed is no longer the right one, so the guard is a Domain error,
/// not a quiet clamp. Work is O(sum of m_p), spread over threads;
/// per-prime rows come back in ascending order either way.
pub fn density_profile(phi: &PolyMap, base: i64, x: u64, eps: f64) -> Result<DensityProfile> {
    if !(2..=DENSITY_X_CEILING).contains(&x) {
        return Err(Error::Range(format!(
            "density_profile expects 2 <= x <= {DENSITY_X_CEILING}, got {x}"
        )));
    }
    let barrier = 1.0 / (phi.degree() as f64).ln();
    if !eps.is_finite() || eps <= 0.0 || eps >= barrier {
        return Err(Error::Domain(format!(
            "eps must lie in (0, {barrier:.6}) for degree {}, got {eps}",
            phi.degree()
        )));
    }
    let start = Instant::now();

    let mut primes = Vec::new();
    for_primes_in(2, x, |p| primes.push(p))?;
    let rows: Vec<OrbitRow> = primes
        .par_iter()
        .map(|&p| -> Result<OrbitRow> {
            let rec = orbit_mod_p(phi, base, p)?;
            let threshold = eps * (p as f64).ln();
            Ok(OrbitRow {
                p,
                tail: rec.tail,
                cycle: rec.cycle,
                m_p: rec.m_p,
                threshold,
                pass: rec.m_p as f64 >= threshold,
                sqrt_pass: rec.m_p as f64 >= (p as f64).sqrt(),
            })
        })
        .collect::<Result<_>>()?;

    let primes_scanned = rows.len() as u64;
    let passing = rows.iter().filter(|r| r.pass).count() as u64;
    let fraction = passing as f64 / primes_scanned as f64;

    let mut cuts = vec![x / 100, x / 10, x];
    cuts.retain(|&c| c >= 2);
    cuts.dedup();
    let checkpoints = cuts
        .into_iter()
        .map(|c| {
            let upto: Vec<&OrbitRow> = rows.iter().take_while(|r| r.p <= c).collect();
            let pass = upto.iter().filter(|r| r.pass).count();
            (c, pass as f64 / upto.len() as f64)
        })
        .collect();

    Ok(DensityProfile {
        x,
        eps,
        degree: phi.degree(),
        primes_scanned,
        passing,
        fraction,
        checkpoints,
        rows,
        wall_ms: start.elapsed().as_millis(),
    })
}

/// Exact height data along an integral orbit.
#[derive(Debug, Clone, Serialize)]
pub struct HeightGrowth {
    pub degree: usize,
    pub iters: u32,
    /// h(P) = log max(|P|, 1).
    pub h0: f64,
    /// h(phi^i(P)) for i = 0..=iters.
    pub heights: Vec<f64>,
    /// Minimal c >= 0 with h(phi^i(P)) <= d^i (h(P) + c) along the
    /// computed stretch of orbit.
    pub c_min: f64,
}

/// log of |v|, clamped at 0, from the top 53 bits of the magnitude.
///
/// Written so that exact powers of two come out as exact multiples of
/// LN_2: the fractional part is then exactly 1.0 and ln(1.0) is exactly
/// zero, which is what lets pure power towers report c = 0 with no
/// tolerance.
fn ln_big(v: &BigInt) -> f64 {
    let mag: &BigUint = v.magnitude();
    let bits = mag.bits();
    if bits <= 1 {
        return 0.0;
    }
    let take = bits.min(53);
    let top = mag >> ((bits - take) as usize);
    let top = u64::try_from(&top).expect("53-bit window fits u64");
    let frac = top as f64 / (1u64 << (take - 1)) as f64;
    (bits - 1) as f64 * LN_2 + frac.ln()
}

/// Iterate phi exactly from `base` and report the minimal c >= 0 with
/// h(phi^i(P)) <= d^i (h(P) + c) for every computed i.
///
/// The canonical-height comparison says such a c exists with a bound
/// independent of the point; here it is simply measured. Orbit values
/// are exact big integers and the work guard trips once a value passes
/// `HEIGHT_BIT_BUDGET` bits.
pub fn height_growth_check(phi: &PolyMap, base: i64, iters: u32) -> Result<HeightGrowth> {
    if iters > HEIGHT_ITER_CAP {
        return Err(Error::Range(format!(
            "height_growth_check expects iters <= {HEIGHT_ITER_CAP}, got {iters}"
        )));
    }
    let d = phi.degree() as f64;
    let mut v = BigInt::from(base);
    let h0 = ln_big(&v);
    let mut heights = vec![h0];
    for _ in 0..iters {
        v = phi.eval_big(&v);
        if v.magnitude().bits() > HEIGHT_BIT_BUDGET {
            return Err(Error::Resource(format!(
                "orbit value exceeds {HEIGHT_BIT_BUDGET} bits"
            )));
        }
        heights.push(ln_big(&v));
    }

    let mut c_min = 0.0f64;
    for (i, &h) in heights.iter().enumerate() {
        let need = h / d.powi(i as i32) - h0;
        if need > c_min {
            c_min = need;
        }
    }
    debug_assert!(heights
        .iter()
        .enumerate()
        .all(|(i, &h)| h <= d.powi(i as i32) * (h0 + c_min) + 1e-9));

    Ok(HeightGrowth {
        degree: phi.degree(),
        iters,
        h0,
        heights,
        c_min,
    })
}
