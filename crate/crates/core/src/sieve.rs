//! The larger sieve: bound the size of a point set from its occupancy
//! (how few residues it hits) modulo many primes. Both the projective and
//! the integral normalizations are provided, along with exact occupancy
//! measurement and a doubling scan that picks the best cutoff.

use crate::arith::{for_primes_in, is_prime_u64, modpow_u64};
use crate::heights::{IntPoint, ProjPoint};
use crate::{Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashSet};

/// A finite set of points, all projective or all integral.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum PointSet {
    Proj(Vec<ProjPoint>),
    Int(Vec<IntPoint>),
}

impl PointSet {
    pub fn len(&self) -> usize {
        match self {
            PointSet::Proj(v) => v.len(),
            PointSet::Int(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Common dimension, None when empty.
    pub fn dim(&self) -> Option<usize> {
        match self {
            PointSet::Proj(v) => v.first().map(|p| p.dim()),
            PointSet::Int(v) => v.first().map(|p| p.dim()),
        }
    }

    fn dims_consistent(&self) -> bool {
        match self {
            PointSet::Proj(v) => v.windows(2).all(|w| w[0].dim() == w[1].dim()),
            PointSet::Int(v) => v.windows(2).all(|w| w[0].dim() == w[1].dim()),
        }
    }
}

/// Exact cardinality of the reduction of the point set mod p: canonical
/// projective representatives (first nonzero coordinate scaled to 1) or
/// coordinatewise residue tuples.
pub fn measure_occupancy(points: &PointSet, p: u64) -> Result<u64> {
    if !is_prime_u64(p) {
        return Err(Error::Domain(format!("occupancy modulus {p} is not prime")));
    }
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    match points {
        PointSet::Proj(v) => {
            for pt in v {
                let mut r: Vec<u64> = pt
                    .coords()
                    .iter()
                    .map(|&c| c.rem_euclid(p as i128) as u64)
                    .collect();
                // gcd of the integer coordinates is 1, so some residue is
                // nonzero; scale it to 1 for a canonical representative
                let lead = r.iter().copied().find(|&c| c != 0).expect("reduced point");
                let inv = modpow_u64(lead, p - 2, p);
                for c in &mut r {
                    *c = (*c as u128 * inv as u128 % p as u128) as u64;
                }
                seen.insert(r);
            }
        }
        PointSet::Int(v) => {
            for pt in v {
                seen.insert(
                    pt.coords()
                        .iter()
                        .map(|&c| c.rem_euclid(p as i128) as u64)
                        .collect(),
                );
            }
        }
    }
    Ok(seen.len() as u64)
}

/// A sieve problem: points under a height budget, occupancy bounds g_p
/// over a prime support J, the field degree d (symbolic; 1 for every
/// concrete census here), and the excluded prime set S.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SieveInstance {
    points: PointSet,
    b: f64,
    occupancy: BTreeMap<u64, f64>,
    d: u32,
    excluded: BTreeSet<u64>,
}

/// Outcome of a larger-sieve evaluation. Inconclusive (nonpositive
/// denominator) is a value, not an error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SieveBound {
    Finite(f64),
    Inconclusive,
}

impl SieveBound {
    pub fn value(self) -> Option<f64> {
        match self {
            SieveBound::Finite(v) => Some(v),
            SieveBound::Inconclusive => None,
        }
    }

    pub fn is_inconclusive(self) -> bool {
        matches!(self, SieveBound::Inconclusive)
    }
}

impl SieveInstance {
    pub fn new(
        points: PointSet,
        b: f64,
        occupancy: BTreeMap<u64, f64>,
        d: u32,
        excluded: BTreeSet<u64>,
    ) -> Result<SieveInstance> {
        if !(b >= 1.0) {
            return Err(Error::Range(format!("height budget must be >= 1, got {b}")));
        }
        if d == 0 {
            return Err(Error::Domain("degree d must be positive".into()));
        }
        if !points.dims_consistent() {
            return Err(Error::Domain("points have mixed dimensions".into()));
        }
        for (&p, &g) in &occupancy {
            if !is_prime_u64(p) {
                return Err(Error::Domain(format!("occupancy key {p} is not prime")));
            }
            if excluded.contains(&p) {
                return Err(Error::Domain(format!(
                    "occupancy key {p} lies in the excluded set"
                )));
            }
            if !(g >= 1.0) {
                return Err(Error::Domain(format!("occupancy g_{p} = {g} is below 1")));
            }
        }
        match &points {
            PointSet::Proj(v) => {
                for pt in v {
                    if (pt.height() as f64) > b {
                        return Err(Error::Domain(format!(
                            "point height {} exceeds the budget {b}",
                            pt.height()
                        )));
                    }
                }
            }
            PointSet::Int(v) => {
                // pairwise sup-distance max equals the largest coordinate
                // spread, so the budget check is linear, not quadratic
                if let Some(dim) = points.dim() {
                    for i in 0..dim {
                        let lo = v.iter().map(|p| p.coords()[i]).min().unwrap();
                        let hi = v.iter().map(|p| p.coords()[i]).max().unwrap();
                        let spread = hi
                            .checked_sub(lo)
                            .ok_or(Error::Overflow("coordinate spread"))?;
                        if spread as f64 > b {
                            return Err(Error::Domain(format!(
                                "coordinate spread {spread} exceeds the budget {b}"
                            )));
                        }
                    }
                }
            }
        }
        Ok(SieveInstance {
            points,
            b,
            occupancy,
            d,
            excluded,
        })
    }

    /// Build an instance whose occupancy is measured exactly from its own
    /// points, over every prime in [lo, hi] outside the excluded set.
    pub fn with_measured_occupancy(
        points: PointSet,
        b: f64,
        d: u32,
        lo: u64,
        hi: u64,
        excluded: BTreeSet<u64>,
    ) -> Result<SieveInstance> {
        if points.is_empty() {
            return Err(Error::Domain(
                "cannot measure occupancy of an empty point set".into(),
            ));
        }
        let mut primes = Vec::new();
        for_primes_in(lo, hi, |p| {
            if !excluded.contains(&p) {
                primes.push(p);
            }
        })?;
        let occupancy: BTreeMap<u64, f64> = primes
            .par_iter()
            .map(|&p| measure_occupancy(&points, p).map(|g| (p, g as f64)))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .collect();
        SieveInstance::new(points, b, occupancy, d, excluded)
    }

    pub fn points(&self) -> &PointSet {
        &self.points
    }

    pub fn budget(&self) -> f64 {
        self.b
    }

    pub fn occupancy(&self) -> &BTreeMap<u64, f64> {
        &self.occupancy
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn excluded(&self) -> &BTreeSet<u64> {
        &self.excluded
    }
}

fn bound_from_sums(log_sum: f64, weighted_sum: f64, subtrahend: f64) -> SieveBound {
    let den = weighted_sum - subtrahend;
    if den > 0.0 {
        SieveBound::Finite((log_sum - subtrahend) / den)
    } else {
        SieveBound::Inconclusive
    }
}

/// Projective larger sieve:
/// (Σ log p − d·log(2B²)) / (Σ log p/g_p − d·log(2B²)) when the
/// denominator is positive, Inconclusive otherwise.
pub fn sieve_bound_proj(inst: &SieveInstance) -> Result<SieveBound> {
    if !matches!(inst.points, PointSet::Proj(_)) {
        return Err(Error::Domain(
            "projective sieve bound needs projective points".into(),
        ));
    }
    sieve_bound_common(inst, (inst.d as f64) * (2.0 * inst.b * inst.b).ln())
}

/// Integral larger sieve: d·log B replaces d·log(2B²).
pub fn sieve_bound_int(inst: &SieveInstance) -> Result<SieveBound> {
    if !matches!(inst.points, PointSet::Int(_)) {
        return Err(Error::Domain(
            "integral sieve bound needs integral points".into(),
        ));
    }
    sieve_bound_common(inst, (inst.d as f64) * inst.b.ln())
}

fn sieve_bound_common(inst: &SieveInstance, subtrahend: f64) -> Result<SieveBound> {
    if inst.occupancy.is_empty() {
        return Err(Error::Domain("sieve bound needs a nonempty occupancy".into()));
    }
    let mut log_sum = 0.0;
    let mut weighted = 0.0;
    for (&p, &g) in &inst.occupancy {
        let lp = (p as f64).ln();
        log_sum += lp;
        weighted += lp / g;
    }
    Ok(bound_from_sums(log_sum, weighted, subtrahend))
}

/// Doubling scan with measured occupancy: evaluate the sieve at cutoffs
/// x = 2, 4, …, ≤ x_max with J = primes in [2, x] \ S, and return the
/// smallest finite bound with its cutoff. Every scanned bound is a sound
/// upper bound on its own, so the minimum is too. None when every cutoff
/// is inconclusive.
pub fn best_bound_by_doubling(
    points: &PointSet,
    b: f64,
    d: u32,
    x_max: u64,
    excluded: &BTreeSet<u64>,
) -> Result<Option<(f64, u64)>> {
    if points.is_empty() {
        return Err(Error::Domain("cannot sieve an empty point set".into()));
    }
    let subtrahend = match points {
        PointSet::Proj(_) => (d as f64) * (2.0 * b * b).ln(),
        PointSet::Int(_) => (d as f64) * b.ln(),
    };
    let mut primes = Vec::new();
    for_primes_in(2, x_max, |p| {
        if !excluded.contains(&p) {
            primes.push(p);
        }
    })?;
    let occ: Vec<(u64, u64)> = primes
        .par_iter()
        .map(|&p| measure_occupancy(points, p).map(|g| (p, g)))
        .collect::<Result<Vec<_>>>()?;

    let mut best: Option<(f64, u64)> = None;
    let mut cutoff = 2u64;
    let mut log_sum = 0.0;
    let mut weighted = 0.0;
    let mut idx = 0usize;
    while cutoff <= x_max {
        while idx < occ.len() && occ[idx].0 <= cutoff {
            let lp = (occ[idx].0 as f64).ln();
            log_sum += lp;
            weighted += lp / occ[idx].1 as f64;
            idx += 1;
        }
        if let SieveBound::Finite(v) = bound_from_sums(log_sum, weighted, subtrahend) {
            if best.map_or(true, |(bv, _)| v < bv) {
                best = Some((v, cutoff));
            }
        }
        match cutoff.checked_mul(2) {
            Some(next) => cutoff = next,
            None => break,
        }
    }
    Ok(best)
}
