//! Character-sum equidistribution for quadratic covers y^2 = f(x).
//!
//! For squarefree monic f of odd degree and a good odd prime p, the
//! Legendre symbol of f splits the u-line into square and non-square
//! classes. Equidistribution with square-root error is unconditional
//! here (it is Weil's bound in one variable), so the deviation check is
//! a validity gate for the whole error-term pipeline: a single failing
//! instance means a bug, not a discovery.
//!
//! The boundary count M is geometric: the roots of f, plus the place at
//! infinity, which ramifies exactly because deg f is odd. Even degree is
//! rejected at construction; there infinity sits in the covered locus,
//! an affine count would misstate the boundary, and the bound below is
//! genuinely wrong for it (deg 2 already fails: the affine sum is -1
//! against a vanishing bound). Every report records M next to p.

use std::f64::consts::SQRT_2;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{for_primes_in, int_poly_disc, is_prime_u64, legendre, IntPoly};
use crate::{Error, Result};

/// Largest modulus a single instance accepts; class counts scan all of
/// F_p, so this is a work guard.
pub const CHARSUM_P_CEILING: u64 = 10_000_000;

/// Caps for the exhaustive scan: coefficient boxes up to this many
/// polynomials, primes up to this ceiling.
pub const SCAN_BOX_GUARD: u128 = 1_000_000;
pub const SCAN_P_CEILING: u64 = 2_000;

/// Every this many (f, p) pairs, the table-driven scan re-runs one pair
/// through the per-instance route and insists on the same answer.
const SCAN_CROSSCHECK_STRIDE: usize = 997;

/// A quadratic cover y^2 = f(x) reduced at a good prime.
///
/// Validity: f monic of odd degree, p an odd prime not dividing disc(f),
/// so f stays squarefree mod p. Linear f is allowed and has disc read as
/// 1; the deviation bound is then 0 and the check is sharp.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuadCoverInstance {
    f: IntPoly,
    p: u64,
    m: usize,
}

impl QuadCoverInstance {
    pub fn new(f: IntPoly, p: u64) -> Result<QuadCoverInstance> {
        if p > CHARSUM_P_CEILING {
            return Err(Error::Range(format!(
                "instance expects p <= {CHARSUM_P_CEILING}, got {p}"
            )));
        }
        if p == 2 || !is_prime_u64(p) {
            return Err(Error::Domain(format!("p must be an odd prime, got {p}")));
        }
        let deg = match f.degree() {
            Some(d) if d >= 1 => d,
            _ => return Err(Error::Domain("f must be nonconstant".into())),
        };
        if !f.is_monic() {
            return Err(Error::Domain("f must be monic".into()));
        }
        if deg % 2 == 0 {
            return Err(Error::Domain(format!(
                "f must have odd degree, got {deg}; the boundary at infinity is only \
                 unambiguous in the ramified case"
            )));
        }
        if deg >= 3 {
            let disc = int_poly_disc(&f)?;
            if disc == 0 {
                return Err(Error::Domain("f is not squarefree".into()));
            }
            if disc.rem_euclid(p as i128) == 0 {
                return Err(Error::Domain(format!(
                    "p = {p} divides disc(f) = {disc}; reduction is not squarefree"
                )));
            }
        }
        Ok(QuadCoverInstance { f, p, m: deg + 1 })
    }

    pub fn f(&self) -> &IntPoly {
        &self.f
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// M: the number of geometric boundary points, deg f roots plus the
    /// ramified place at infinity.
    pub fn boundary_count(&self) -> usize {
        self.m
    }

    fn reduced_coeffs(&self) -> Vec<u64> {
        let pi = self.p as i128;
        self.f
            .coeffs()
            .iter()
            .map(|&c| c.rem_euclid(pi) as u64)
            .collect()
    }

    /// Number of u in F_p with f(u) = 0.
    pub fn root_count(&self) -> u64 {
        let cs = self.reduced_coeffs();
        (0..self.p).filter(|&u| horner_mod_p(&cs, u, self.p) == 0).count() as u64
    }
}

fn horner_mod_p(cs: &[u64], x: u64, p: u64) -> u64 {
    let mut acc = 0u64;
    for &c in cs.iter().rev() {
        acc = (mulmod(acc, x, p) + c) % p;
    }
    acc
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

/// Number of u in F_p with f(u) != 0 and Legendre(f(u), p) = class.
///
/// This is the definitional route, one Legendre symbol per point; the
/// scan below uses a residue table instead and cross-checks against it.
pub fn class_count(inst: &QuadCoverInstance, class: i8) -> Result<u64> {
    if class != 1 && class != -1 {
        return Err(Error::Domain(format!(
            "class must be +1 or -1, got {class}"
        )));
    }
    let cs = inst.reduced_coeffs();
    let mut n = 0u64;
    for u in 0..inst.p {
        let v = horner_mod_p(&cs, u, inst.p);
        if v != 0 && legendre(v as i128, inst.p)? == class {
            n += 1;
        }
    }
    Ok(n)
}

/// Outcome of one deviation check, self-contained enough to print.
#[derive(Debug, Clone, Serialize)]
pub struct DeviationReport {
    /// Coefficients of f, ascending.
    pub f_coeffs: Vec<i128>,
    pub p: u64,
    pub boundary_count: usize,
    pub plus_count: u64,
    pub minus_count: u64,
    pub root_count: u64,
    /// max over both classes of |count - |U|/2| with |U| = p - #roots.
    pub deviation: f64,
    /// (M - 2) sqrt(p) / sqrt(2).
    pub bound: f64,
    pub pass: bool,
}

impl DeviationReport {
    pub fn csv_header() -> &'static str {
        "f,p,deviation,bound,pass"
    }

    /// Coefficients joined with ';' so f stays a single CSV field.
    pub fn csv_row(&self) -> String {
        let f = self
            .f_coeffs
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(";");
        format!(
            "{},{},{:.6},{:.6},{}",
            f, self.p, self.deviation, self.bound, self.pass
        )
    }
}

/// Count both classes, compare against |U|/2, and test the square-root
/// bound. The three scans (two classes and the roots) are independent
/// passes, and their failure to partition F_p is an invariant error.
pub fn deviation_check(inst: &QuadCoverInstance) -> Result<DeviationReport> {
    let plus = class_count(inst, 1)?;
    let minus = class_count(inst, -1)?;
    let roots = inst.root_count();
    if plus + minus + roots != inst.p {
        return Err(Error::Invariant(format!(
            "class counts {plus} + {minus} + {roots} roots do not partition F_{}",
            inst.p
        )));
    }
    let half = (inst.p - roots) as f64 / 2.0;
    let deviation = (plus as f64 - half).abs().max((minus as f64 - half).abs());
    let bound = (inst.m as f64 - 2.0) * (inst.p as f64).sqrt() / SQRT_2;
    Ok(DeviationReport {
        f_coeffs: inst.f.coeffs().to_vec(),
        p: inst.p,
        boundary_count: inst.m,
        plus_count: plus,
        minus_count: minus,
        root_count: roots,
        deviation,
        bound,
        pass: deviation <= bound,
    })
}

/// Tally of an exhaustive box scan. `failures` being zero is the entire
/// point: one violation of the bound means the pipeline is broken.
#[derive(Debug, Clone, Serialize)]
pub struct ScanReport {
    pub degree: usize,
    pub coeff_bound: i64,
    pub p_max: u64,
    /// Valid (f, p) pairs checked.
    pub instances: u64,
    pub passes: u64,
    pub failures: u64,
    /// Largest deviation / bound seen across valid instances.
    pub worst_ratio: f64,
    /// Pairs skipped because p divides disc(f), or disc(f) = 0.
    pub skipped_bad_reduction: u64,
    /// Pairs re-verified through the per-instance route.
    pub crosschecks: u64,
    /// At most eight failing (f coefficients, p) pairs, for the record.
    pub failure_sample: Vec<(Vec<i128>, u64)>,
    pub wall_ms: u128,
}

/// Per-polynomial partial tally, merged in order at the end.
struct ScanShard {
    instances: u64,
    passes: u64,
    failures: u64,
    worst_ratio: f64,
    skipped: u64,
    crosschecks: u64,
    failure_sample: Vec<(Vec<i128>, u64)>,
}

/// Check every monic f of the given odd degree with lower coefficients
/// in [-coeff_bound, coeff_bound], at every odd prime p <= p_max with
/// good reduction. Quadratic residues are table lookups here; a strided
/// subset of pairs is re-run through `deviation_check` verbatim and any
/// disagreement is an invariant error.
pub fn exhaustive_scan(degree: usize, coeff_bound: i64, p_max: u64) -> Result<ScanReport> {
    if degree % 2 == 0 || degree < 3 {
        return Err(Error::Domain(format!(
            "scan degree must be odd and at least 3, got {degree}"
        )));
    }
    if coeff_bound < 1 {
        return Err(Error::Range("coeff_bound must be at least 1".into()));
    }
    let side = 2 * coeff_bound as u128 + 1;
    let box_size = side.checked_pow(degree as u32).ok_or(Error::Overflow("scan box"))?;
    if box_size > SCAN_BOX_GUARD {
        return Err(Error::Range(format!(
            "coefficient box holds {box_size} polynomials, guard is {SCAN_BOX_GUARD}"
        )));
    }
    if !(3..=SCAN_P_CEILING).contains(&p_max) {
        return Err(Error::Range(format!(
            "scan expects 3 <= p_max <= {SCAN_P_CEILING}, got {p_max}"
        )));
    }
    let start = Instant::now();

    let mut primes = Vec::new();
    for_primes_in(3, p_max, |p| primes.push(p))?;
    // chi[p][v]: 0 at v = 0, else the Legendre symbol of v, marked off
    // the squares directly.
    let tables: Vec<(u64, Vec<i8>)> = primes
        .iter()
        .map(|&p| {
            let mut chi = vec![-1i8; p as usize];
            chi[0] = 0;
            for w in 1..p {
                chi[mulmod(w, w, p) as usize] = 1;
            }
            (p, chi)
        })
        .collect();

    // All lower-coefficient vectors, odometer order, last slot fastest.
    let b = coeff_bound as i128;
    let mut lowers: Vec<Vec<i128>> = Vec::with_capacity(box_size as usize);
    let mut cur = vec![-b; degree];
    'enumerate: loop {
        lowers.push(cur.clone());
        let mut k = degree;
        loop {
            if k == 0 {
                break 'enumerate;
            }
            k -= 1;
            if cur[k] < b {
                cur[k] += 1;
                cur[k + 1..].fill(-b);
                break;
            }
        }
    }
    debug_assert_eq!(lowers.len() as u128, box_size);

    let shards: Vec<ScanShard> = lowers
        .par_iter()
        .enumerate()
        .map(|(fi, lower)| -> Result<ScanShard> {
            let f = IntPoly::monic_with_lower(lower);
            let disc = int_poly_disc(&f)?;
            let mut shard = ScanShard {
                instances: 0,
                passes: 0,
                failures: 0,
                worst_ratio: 0.0,
                skipped: 0,
                crosschecks: 0,
                failure_sample: Vec::new(),
            };
            for (pi, (p, chi)) in tables.iter().enumerate() {
                let p = *p;
                if disc == 0 || disc.rem_euclid(p as i128) == 0 {
                    shard.skipped += 1;
                    continue;
                }
                let pm = p as i128;
                let cs: Vec<u64> = f.coeffs().iter().map(|&c| c.rem_euclid(pm) as u64).collect();
                let mut plus = 0u64;
                let mut minus = 0u64;
                let mut roots = 0u64;
                for u in 0..p {
                    match chi[horner_mod_p(&cs, u, p) as usize] {
                        1 => plus += 1,
                        -1 => minus += 1,
                        _ => roots += 1,
                    }
                }
                if plus + minus + roots != p {
                    return Err(Error::Invariant(format!(
                        "scan counts do not partition F_{p} at f = {lower:?}"
                    )));
                }
                let half = (p - roots) as f64 / 2.0;
                let deviation = (plus as f64 - half).abs().max((minus as f64 - half).abs());
                let bound = ((degree + 1) as f64 - 2.0) * (p as f64).sqrt() / SQRT_2;
                shard.instances += 1;
                if deviation <= bound {
                    shard.passes += 1;
                } else {
                    shard.failures += 1;
                    if shard.failure_sample.len() < 8 {
                        shard.failure_sample.push((f.coeffs().to_vec(), p));
                    }
                }
                shard.worst_ratio = shard.worst_ratio.max(deviation / bound);

                if (fi * tables.len() + pi) % SCAN_CROSSCHECK_STRIDE == 0 {
                    let inst = QuadCoverInstance::new(f.clone(), p)?;
                    let report = deviation_check(&inst)?;
                    if report.plus_count != plus
                        || report.minus_count != minus
                        || report.deviation != deviation
                        || report.pass != (deviation <= bound)
                    {
                        return Err(Error::Invariant(format!(
                            "table route disagrees with the instance route at f = {lower:?}, p = {p}"
                        )));
                    }
                    shard.crosschecks += 1;
                }
            }
            Ok(shard)
        })
        .collect::<Result<_>>()?;

    let mut report = ScanReport {
        degree,
        coeff_bound,
        p_max,
        instances: 0,
        passes: 0,
        failures: 0,
        worst_ratio: 0.0,
        skipped_bad_reduction: 0,
        crosschecks: 0,
        failure_sample: Vec::new(),
        wall_ms: 0,
    };
    for shard in shards {
        report.instances += shard.instances;
        report.passes += shard.passes;
        report.failures += shard.failures;
        report.worst_ratio = report.worst_ratio.max(shard.worst_ratio);
        report.skipped_bad_reduction += shard.skipped;
        report.crosschecks += shard.crosschecks;
        for item in shard.failure_sample {
            if report.failure_sample.len() < 8 {
                report.failure_sample.push(item);
            }
        }
    }
    let pairs = box_size as u64 * primes.len() as u64;
    if report.instances + report.skipped_bad_reduction != pairs {
        return Err(Error::Invariant(format!(
            "scan visited {} pairs of an expected {pairs}",
            report.instances + report.skipped_bad_reduction
        )));
    }
    report.wall_ms = start.elapsed().as_millis();
    Ok(report)
}
