//! Explicit bound calculators: the adaptive analytic cutoff, the
//! specialized sieve bound shape, and the conjugacy-class-weighted cover
//! bound with its delta and c constants.

use crate::arith::for_primes_in;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// Ceiling for the cutoff search.
const CUTOFF_CEILING: u64 = 1_000_000_000;

fn validate_common(delta: f64, big_d: f64, b: f64, d: u32) -> Result<()> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::Domain(format!("delta must lie in (0,1], got {delta}")));
    }
    if !(big_d >= 1.0) {
        return Err(Error::Domain(format!("D must be >= 1, got {big_d}")));
    }
    if !(b >= 1.0) {
        return Err(Error::Domain(format!("B must be >= 1, got {b}")));
    }
    if d == 0 {
        return Err(Error::Domain("degree d must be positive".into()));
    }
    Ok(())
}

/// Smallest x in a doubling search with
/// Σ_{p∉S, D² ≤ p ≤ x} log p / (δ(p + D√p)) − d·log B ≥ 1,
/// i.e. the point past which the induced sieve denominator is at least 1.
/// The doubling replaces the unexplicit constant of the underlying lemma;
/// only the positivity condition matters for soundness.
pub fn auto_cutoff(delta: f64, big_d: f64, s: &BTreeSet<u64>, b: f64, d: u32) -> Result<f64> {
    validate_common(delta, big_d, b, d)?;
    let lo = (big_d * big_d).ceil().max(2.0) as u64;
    let need = 1.0 + (d as f64) * b.ln();
    let mut x = lo;
    let mut sum = 0.0;
    let mut segment_lo = lo;
    loop {
        for_primes_in(segment_lo, x, |p| {
            if !s.contains(&p) {
                let pf = p as f64;
                sum += pf.ln() / (delta * (pf + big_d * pf.sqrt()));
            }
        })?;
        if sum >= need {
            return Ok(x as f64);
        }
        segment_lo = x + 1;
        x = x.checked_mul(2).unwrap_or(u64::MAX);
        if x > CUTOFF_CEILING {
            return Err(Error::Resource(format!(
                "cutoff search passed the ceiling {CUTOFF_CEILING}"
            )));
        }
    }
}

/// The specialized bound expression D² · exp(Σ_{p∈S, p ≥ D²} log p / p)
/// · B^{dδ}, with the implicit constant set to 1. Shape-only: censuses
/// fit the constant empirically, nothing asserts it.
pub fn specialized_bound(
    delta: f64,
    big_d: f64,
    s: &BTreeSet<u64>,
    b: f64,
    d: u32,
) -> Result<f64> {
    validate_common(delta, big_d, b, d)?;
    let floor = big_d * big_d;
    let correction: f64 = s
        .iter()
        .filter(|&&p| p as f64 >= floor)
        .map(|&p| (p as f64).ln() / p as f64)
        .sum();
    Ok(floor * correction.exp() * b.powf(d as f64 * delta))
}

/// Inputs for the cover bound: the geometric group order, the conjugacy
/// classes of the outer Galois action as (|κ|, |C_κ|) pairs, the excluded
/// primes, the parameter-space dimension n, the field degree d, and the
/// height budget B.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoverBoundInput {
    pub gg_order: u64,
    pub kappa_data: Vec<(u64, u64)>,
    pub s: BTreeSet<u64>,
    pub n: u32,
    pub d: u32,
    pub b: f64,
}

/// The computed constants and the bound c·B^{d(n−1+δ)}·log B.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HitBound {
    pub delta: f64,
    pub c: f64,
    pub bound: f64,
}

/// Evaluate the explicit cover bound:
/// δ = max_κ |C_κ| / (|κ|·|G^g|), c = |G^g|²·exp(Σ_{p∈S, p ≥ |G^g|²}
/// log p/p), bound = c·B^{d(n−1+δ)}·log B. Degree-1 restriction on the
/// c-sum is automatic over Q.
pub fn hit_bound(input: &CoverBoundInput) -> Result<HitBound> {
    if input.gg_order == 0 {
        return Err(Error::Domain("group order must be positive".into()));
    }
    if input.kappa_data.is_empty() {
        return Err(Error::Domain("at least one conjugacy class is required".into()));
    }
    if input.n == 0 || input.d == 0 {
        return Err(Error::Domain("n and d must be positive".into()));
    }
    if input.b < 2.0 {
        return Err(Error::Range(format!(
            "budget B must be >= 2 so log B stays positive, got {}",
            input.b
        )));
    }
    let gg = input.gg_order as f64;
    let mut delta = 0.0f64;
    for &(kappa, hits) in &input.kappa_data {
        if kappa == 0 {
            return Err(Error::Domain("conjugacy class size must be positive".into()));
        }
        if hits > kappa * input.gg_order {
            return Err(Error::Domain(format!(
                "|C_κ| = {hits} exceeds |κ|·|G^g| = {}",
                kappa * input.gg_order
            )));
        }
        delta = delta.max(hits as f64 / (kappa as f64 * gg));
    }
    if delta == 0.0 {
        return Err(Error::Domain(
            "every class is empty; delta must be positive".into(),
        ));
    }
    let floor = gg * gg;
    let correction: f64 = input
        .s
        .iter()
        .filter(|&&p| p as f64 >= floor)
        .map(|&p| (p as f64).ln() / p as f64)
        .sum();
    let c = floor * correction.exp();
    let exponent = input.d as f64 * (input.n as f64 - 1.0 + delta);
    let bound = c * input.b.powf(exponent) * input.b.ln();
    Ok(HitBound { delta, c, bound })
}
