//! Galois census over the monic family f(x) = x^n + t1 x^{n-1} + ... + tn.
//!
//! Degrees 2 through 4 are classified exactly: quadratics and cubics by
//! discriminant and factorization, quartics through the resolvent cubic
//! with the quadratic refinement that separates C4 from D4. From degree 5
//! on the classifier is a one-sided certificate: factor shapes mod p are
//! cycle types of Frobenius elements, and witnessing an n-cycle, a long
//! prime cycle and a transposition forces the full symmetric group once
//! the discriminant is a non-square. The counting drivers enumerate whole
//! coefficient boxes and report per-label tallies next to the shapes of
//! the bounds they probe.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{
    cadd, cmul, csub, int_poly_disc, int_poly_factor, int_poly_factor_deg16, is_perfect_square,
    is_prime_u64, next_prime_u64, FpPoly, IntPoly, CENSUS_DEG_CAP,
};
use crate::{Error, Result};

/// Work guard for box enumerations: (2B+1)^n must stay at or below this.
pub const CENSUS_BOX_GUARD: u128 = 1_000_000_000;

/// Factorization outcomes are canonical, so the classifiers can run the
/// randomized splitting steps off a fixed internal seed.
const CLASSIFY_SEED: u64 = 0x5eed_cafe;

const QUARTIC_CTX: &str = "quartic resolvent";

/// Classification of the Galois group of f(x, t) over Q.
///
/// `Alternating` means "contained in A_n" read off the discriminant being
/// a nonzero square. For degrees 3 and 4 that pins the group exactly (C3
/// respectively A4, since the quartic table separates V4 first); in
/// certificate mode for degree 5 and up it is the honest one-sided
/// statement and the group may be any transitive subgroup of A_n.
/// `Undetermined` is produced only by the certificate path.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum GaloisLabel {
    FullSymmetric,
    Alternating,
    OtherTransitive,
    /// Sorted multiset of irreducible-factor degrees, as factored over Z.
    Reducible(Vec<usize>),
    NotSeparable,
    Undetermined,
}

impl fmt::Display for GaloisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GaloisLabel::FullSymmetric => write!(f, "full_symmetric"),
            GaloisLabel::Alternating => write!(f, "alternating"),
            GaloisLabel::OtherTransitive => write!(f, "other_transitive"),
            GaloisLabel::Reducible(d) => {
                // degrees joined with '+' so the label stays one CSV field
                write!(f, "reducible(")?;
                for (i, di) in d.iter().enumerate() {
                    if i > 0 {
                        write!(f, "+")?;
                    }
                    write!(f, "{di}")?;
                }
                write!(f, ")")
            }
            GaloisLabel::NotSeparable => write!(f, "not_separable"),
            GaloisLabel::Undetermined => write!(f, "undetermined"),
        }
    }
}

/// Exact transitive type of an irreducible separable quartic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum QuarticClass {
    S4,
    A4,
    D4,
    C4,
    V4,
}

impl fmt::Display for QuarticClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            QuarticClass::S4 => "S4",
            QuarticClass::A4 => "A4",
            QuarticClass::D4 => "D4",
            QuarticClass::C4 => "C4",
            QuarticClass::V4 => "V4",
        };
        write!(f, "{s}")
    }
}

/// Which classifier a census run used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CensusMode {
    /// Degrees 2 through 4: every label is exact.
    Exact,
    /// Degree 5 and up: FullSymmetric and the non-S_n labels are certified,
    /// the remainder is Undetermined and E_n is bracketed.
    Certificate,
}

/// Outcome of one full box enumeration.
#[derive(Debug, Clone, Serialize)]
pub struct CensusReport {
    pub n: usize,
    pub b: i64,
    pub mode: CensusMode,
    /// Per-label tallies, summing to (2B+1)^n; Reducible labels are keyed
    /// by their degree multiset so the split by partition can be read off.
    pub counts: Vec<(GaloisLabel, u64)>,
    pub box_size: u64,
    /// Count of t certified to have G_t != S_n (NotSeparable included by
    /// convention; it is also broken out separately below).
    pub e_lower: u64,
    /// e_lower plus the Undetermined tally; equals e_lower in exact mode.
    pub e_upper: u64,
    pub not_separable: u64,
    pub undetermined: u64,
    /// Exact transitive types for n = 4, empty otherwise.
    pub quartic_subtypes: Vec<(QuarticClass, u64)>,
    /// 2B log B for n = 2, B^{n - 1/2} for n >= 3.
    pub bound_shape: f64,
    /// e_upper / bound_shape (NaN when the shape degenerates).
    pub fitted_constant: f64,
    pub prime_budget: u32,
    pub seed: u64,
    pub wall_ms: u64,
}

impl CensusReport {
    pub fn csv_header() -> &'static str {
        "n,B,label,count,bound_shape,ratio,seed,budget"
    }

    /// One row per label; ratio is count / bound_shape for that label.
    pub fn csv_rows(&self) -> Vec<String> {
        self.counts
            .iter()
            .map(|(label, count)| {
                let ratio = if self.bound_shape > 0.0 {
                    *count as f64 / self.bound_shape
                } else {
                    f64::NAN
                };
                format!(
                    "{},{},{},{},{:.6},{:.6},{},{}",
                    self.n,
                    self.b,
                    label,
                    count,
                    self.bound_shape,
                    ratio,
                    self.seed,
                    self.prime_budget
                )
            })
            .collect()
    }
}

/// f(x) = x^n + t[0] x^{n-1} + ... + t[n-1], the census convention.
pub fn census_poly(t: &[i64]) -> IntPoly {
    let lower: Vec<i128> = t.iter().rev().map(|&v| v as i128).collect();
    IntPoly::monic_with_lower(&lower)
}

fn degree_multiset(factors: &[IntPoly]) -> Vec<usize> {
    let mut d: Vec<usize> = factors.iter().map(|g| g.degree().unwrap_or(0)).collect();
    d.sort_unstable();
    d
}

/// Exact label for x^2 + t1 x + t2. Pure discriminant arithmetic: a monic
/// integer quadratic is reducible exactly when t1^2 - 4 t2 is a square
/// (rational roots of monic integer polynomials are integers).
pub fn galois_quadratic(t: (i64, i64)) -> GaloisLabel {
    let disc = (t.0 as i128) * (t.0 as i128) - 4 * (t.1 as i128);
    if disc == 0 {
        GaloisLabel::NotSeparable
    } else if is_perfect_square(disc) {
        GaloisLabel::Reducible(vec![1, 1])
    } else {
        GaloisLabel::FullSymmetric
    }
}

/// Exact label for x^3 + t1 x^2 + t2 x + t3: NotSeparable on vanishing
/// discriminant, Reducible with the factor degrees when the polynomial
/// splits, otherwise Alternating (C3) on square discriminant and
/// FullSymmetric on non-square.
pub fn galois_cubic(t: (i64, i64, i64)) -> Result<GaloisLabel> {
    let f = census_poly(&[t.0, t.1, t.2]);
    let disc = int_poly_disc(&f)?;
    if disc == 0 {
        return Ok(GaloisLabel::NotSeparable);
    }
    let factors = int_poly_factor(&f, CLASSIFY_SEED)?;
    if factors.len() > 1 {
        return Ok(GaloisLabel::Reducible(degree_multiset(&factors)));
    }
    Ok(if is_perfect_square(disc) {
        GaloisLabel::Alternating
    } else {
        GaloisLabel::FullSymmetric
    })
}

/// Exact label for x^4 + t1 x^3 + t2 x^2 + t3 x + t4; V4, D4 and C4 all
/// map to OtherTransitive, with the subtype available from
/// [`quartic_class`].
pub fn galois_quartic(t: (i64, i64, i64, i64)) -> Result<GaloisLabel> {
    classify_quartic(&[t.0, t.1, t.2, t.3]).map(|(label, _)| label)
}

/// Exact transitive type of the quartic, `None` when it is reducible or
/// not separable.
pub fn quartic_class(t: (i64, i64, i64, i64)) -> Result<Option<QuarticClass>> {
    classify_quartic(&[t.0, t.1, t.2, t.3]).map(|(_, class)| class)
}

/// Resolvent-cubic classification of an irreducible separable quartic
/// x^4 + a x^3 + b x^2 + c x + d. With R(y) = y^3 - b y^2 + (ac - 4d) y -
/// (a^2 d + c^2 - 4bd) and D the discriminant: R irreducible gives S4 or
/// A4 by whether D is a square; R split gives V4; exactly one rational
/// root beta gives C4 when both x^2 - beta x + d and x^2 + a x + (b -
/// beta) split over Q(sqrt D), else D4 (Kappe and Warren's refinement).
fn classify_quartic(t: &[i64]) -> Result<(GaloisLabel, Option<QuarticClass>)> {
    let f = census_poly(t);
    let disc = int_poly_disc(&f)?;
    if disc == 0 {
        return Ok((GaloisLabel::NotSeparable, None));
    }
    let factors = int_poly_factor(&f, CLASSIFY_SEED)?;
    if factors.len() > 1 {
        return Ok((GaloisLabel::Reducible(degree_multiset(&factors)), None));
    }

    let (a, b, c, d) = (t[0] as i128, t[1] as i128, t[2] as i128, t[3] as i128);
    let c1 = csub(cmul(a, c, QUARTIC_CTX)?, cmul(4, d, QUARTIC_CTX)?, QUARTIC_CTX)?;
    let a2d = cmul(cmul(a, a, QUARTIC_CTX)?, d, QUARTIC_CTX)?;
    let c2 = cmul(c, c, QUARTIC_CTX)?;
    let bd4 = cmul(4, cmul(b, d, QUARTIC_CTX)?, QUARTIC_CTX)?;
    let c0 = csub(bd4, cadd(a2d, c2, QUARTIC_CTX)?, QUARTIC_CTX)?;
    let resolvent = IntPoly::new(&[c0, c1, -b, 1]);

    // disc(R) = disc(f), so the resolvent is separable here and has 0, 1
    // or 3 rational roots, never 2.
    let rfactors = int_poly_factor(&resolvent, CLASSIFY_SEED)?;
    let roots: Vec<i128> = rfactors
        .iter()
        .filter(|g| g.degree() == Some(1))
        .map(|g| -g.coeff(0))
        .collect();

    let class = match roots.len() {
        0 => {
            if is_perfect_square(disc) {
                QuarticClass::A4
            } else {
                QuarticClass::S4
            }
        }
        3 => QuarticClass::V4,
        1 => {
            let beta = roots[0];
            debug_assert!(
                !is_perfect_square(disc),
                "one rational resolvent root forces a non-square discriminant"
            );
            let d1 = csub(cmul(beta, beta, QUARTIC_CTX)?, cmul(4, d, QUARTIC_CTX)?, QUARTIC_CTX)?;
            let d2 = csub(
                cmul(a, a, QUARTIC_CTX)?,
                cmul(4, csub(b, beta, QUARTIC_CTX)?, QUARTIC_CTX)?,
            QUARTIC_CTX)?;
            let splits_over_disc_field = |delta: i128| -> Result<bool> {
                Ok(delta == 0
                    || is_perfect_square(delta)
                    || is_perfect_square(cmul(delta, disc, QUARTIC_CTX)?))
            };
            if splits_over_disc_field(d1)? && splits_over_disc_field(d2)? {
                QuarticClass::C4
            } else {
                QuarticClass::D4
            }
        }
        k => {
            return Err(Error::Invariant(format!(
                "separable resolvent cubic reported {k} rational roots"
            )))
        }
    };
    let label = match class {
        QuarticClass::S4 => GaloisLabel::FullSymmetric,
        QuarticClass::A4 => GaloisLabel::Alternating,
        _ => GaloisLabel::OtherTransitive,
    };
    Ok((label, Some(class)))
}

/// One-sided S_n certificate for monic f of degree 5 and up.
///
/// NotSeparable and Reducible are decided exactly from the discriminant
/// and the integer factorization; a nonzero square discriminant of an
/// irreducible input certifies G_t inside A_n and is labeled Alternating.
/// Otherwise ascending primes not dividing the discriminant are scanned,
/// at most `prime_budget` of them, and the factor shapes mod p (cycle
/// types of Frobenius elements) are checked off against the three
/// witnesses: an n-cycle, a shape {q, 1, ..., 1} with q prime and n/2 < q
/// < n - 1, and a transposition shape {2, 1, ..., 1}. All three together
/// generate S_n, so the scan returns FullSymmetric on success and the
/// honest Undetermined when the budget runs out.
///
/// For n in {4, 6} no prime q fits the window, the positive certificate
/// cannot fire, and irreducible inputs with non-square discriminant
/// always come back Undetermined.
pub fn sn_certificate(f: &IntPoly, prime_budget: u32, seed: u64) -> Result<GaloisLabel> {
    let n = f
        .degree()
        .ok_or_else(|| Error::Domain("certificate classifier on the zero polynomial".into()))?;
    if n < 5 {
        return Err(Error::Domain(format!(
            "certificate classifier expects degree >= 5, got {n}"
        )));
    }
    certificate_label(f, prime_budget, seed)
}

/// Certificate body, shared with the degree-4 consistency checks.
pub(crate) fn certificate_label(f: &IntPoly, prime_budget: u32, seed: u64) -> Result<GaloisLabel> {
    let n = f
        .degree()
        .ok_or_else(|| Error::Domain("certificate classifier on the zero polynomial".into()))?;
    if !(2..=CENSUS_DEG_CAP).contains(&n) {
        return Err(Error::Range(format!(
            "certificate classifier handles degrees 2..={CENSUS_DEG_CAP}, got {n}"
        )));
    }
    let disc = int_poly_disc(f)?;
    if disc == 0 {
        return Ok(GaloisLabel::NotSeparable);
    }
    let factors = int_poly_factor_deg16(f, seed)?;
    if factors.len() > 1 {
        return Ok(GaloisLabel::Reducible(degree_multiset(&factors)));
    }
    if is_perfect_square(disc) {
        return Ok(GaloisLabel::Alternating);
    }
    if !jordan_window_nonempty(n) {
        return Ok(GaloisLabel::Undetermined);
    }

    let mut seen_ncycle = false;
    let mut seen_transposition = false;
    let mut seen_long_prime = false;
    let mut p = 2u64;
    let mut used = 0u32;
    while used < prime_budget {
        // the mod-p factorizer works over odd primes; skipping p = 2 only
        // discards one Frobenius sample
        p = next_prime_u64(p + 1);
        if disc % (p as i128) == 0 {
            continue;
        }
        used += 1;
        let shape = FpPoly::new(p, f.coeffs())?.factor_shape()?;
        debug_assert!(shape.is_squarefree(), "p does not divide disc");
        let parts = shape.parts.as_slice();
        seen_ncycle |= shape_is_ncycle(parts, n);
        seen_transposition |= shape_is_transposition(parts, n);
        seen_long_prime |= shape_has_long_prime(parts, n);
        if seen_ncycle && seen_transposition && seen_long_prime {
            return Ok(GaloisLabel::FullSymmetric);
        }
    }
    Ok(GaloisLabel::Undetermined)
}

/// Some prime q with n/2 < q < n - 1 exists.
fn jordan_window_nonempty(n: usize) -> bool {
    (n / 2 + 1..n.saturating_sub(1)).any(|q| is_prime_u64(q as u64))
}

fn shape_is_ncycle(parts: &[(usize, usize)], n: usize) -> bool {
    parts == [(n, 1)]
}

fn shape_is_transposition(parts: &[(usize, usize)], n: usize) -> bool {
    parts.len() == n - 1
        && parts[n - 2] == (2, 1)
        && parts[..n - 2].iter().all(|&part| part == (1, 1))
}

fn shape_has_long_prime(parts: &[(usize, usize)], n: usize) -> bool {
    match parts.split_last() {
        Some((&(q, 1), rest)) => {
            2 * q > n
                && q + 1 < n
                && is_prime_u64(q as u64)
                && rest.iter().all(|&part| part == (1, 1))
        }
        _ => false,
    }
}

/// Validates the box parameters and returns (2B+1)^n.
fn census_box_size(n: usize, b: i64) -> Result<u64> {
    if !(2..=CENSUS_DEG_CAP).contains(&n) {
        return Err(Error::Domain(format!(
            "census degree must lie in 2..={CENSUS_DEG_CAP}, got {n}"
        )));
    }
    if b < 1 {
        return Err(Error::Domain(format!("box radius must be >= 1, got {b}")));
    }
    let side = 2u128 * b as u128 + 1;
    let mut size = 1u128;
    for _ in 0..n {
        size *= side;
        if size > CENSUS_BOX_GUARD {
            return Err(Error::Resource(format!(
                "census box (2*{b}+1)^{n} exceeds the {CENSUS_BOX_GUARD} guard"
            )));
        }
    }
    Ok(size as u64)
}

/// Visit every t in [-b, b]^n with t[0] fixed, last coordinate fastest.
fn visit_suffix<F>(t0: i64, n: usize, b: i64, mut visit: F) -> Result<()>
where
    F: FnMut(&[i64]) -> Result<()>,
{
    debug_assert!(n >= 2);
    let mut t = vec![-b; n];
    t[0] = t0;
    loop {
        visit(&t)?;
        let mut i = n;
        loop {
            if i == 1 {
                return Ok(());
            }
            i -= 1;
            if t[i] < b {
                t[i] += 1;
                break;
            }
            t[i] = -b;
        }
    }
}

#[derive(Default)]
struct CensusAccum {
    counts: BTreeMap<GaloisLabel, u64>,
    subtypes: BTreeMap<QuarticClass, u64>,
}

impl CensusAccum {
    fn add(&mut self, label: GaloisLabel) {
        *self.counts.entry(label).or_insert(0) += 1;
    }

    fn merge(mut self, other: CensusAccum) -> CensusAccum {
        for (label, count) in other.counts {
            *self.counts.entry(label).or_insert(0) += count;
        }
        for (class, count) in other.subtypes {
            *self.subtypes.entry(class).or_insert(0) += count;
        }
        self
    }
}

/// Enumerates t in [-B, B]^n and tallies Galois labels.
///
/// Exact mode covers n in {2, 3, 4}; certificate mode covers n >= 5 and
/// brackets E_n(B) between `e_lower` (certified non-S_n, NotSeparable
/// included) and `e_upper` (adding Undetermined). Shards over the leading
/// coordinate merge by pure addition, so the result is independent of the
/// thread schedule; `prime_budget` and `seed` only matter in certificate
/// mode, where every t is classified with the same budget and seed.
pub fn count_census(
    n: usize,
    b: i64,
    mode: CensusMode,
    prime_budget: u32,
    seed: u64,
) -> Result<CensusReport> {
    let start = Instant::now();
    let box_size = census_box_size(n, b)?;
    match mode {
        CensusMode::Exact if n > 4 => {
            return Err(Error::Domain(format!(
                "exact census covers degrees 2..=4, got {n}"
            )))
        }
        CensusMode::Certificate if n < 5 => {
            return Err(Error::Domain(format!(
                "certificate census covers degrees >= 5, got {n}"
            )))
        }
        _ => {}
    }

    let shards: Vec<i64> = (-b..=b).collect();
    let acc = shards
        .into_par_iter()
        .map(|t0| -> Result<CensusAccum> {
            let mut acc = CensusAccum::default();
            visit_suffix(t0, n, b, |t| {
                match n {
                    2 => acc.add(galois_quadratic((t[0], t[1]))),
                    3 => acc.add(galois_cubic((t[0], t[1], t[2]))?),
                    4 => {
                        let (label, class) = classify_quartic(t)?;
                        acc.add(label);
                        if let Some(class) = class {
                            *acc.subtypes.entry(class).or_insert(0) += 1;
                        }
                    }
                    _ => acc.add(sn_certificate(&census_poly(t), prime_budget, seed)?),
                }
                Ok(())
            })?;
            Ok(acc)
        })
        .try_reduce(CensusAccum::default, |a, b| Ok(a.merge(b)));
    let acc = acc?;

    let total: u64 = acc.counts.values().sum();
    if total != box_size {
        return Err(Error::Invariant(format!(
            "census counts sum to {total}, box holds {box_size}"
        )));
    }
    let tally = |label: &GaloisLabel| acc.counts.get(label).copied().unwrap_or(0);
    let not_separable = tally(&GaloisLabel::NotSeparable);
    let undetermined = tally(&GaloisLabel::Undetermined);
    let e_lower = total - tally(&GaloisLabel::FullSymmetric) - undetermined;
    let e_upper = e_lower + undetermined;
    let bound_shape = if n == 2 {
        2.0 * b as f64 * (b as f64).ln()
    } else {
        (b as f64).powf(n as f64 - 0.5)
    };
    let fitted_constant = if bound_shape > 0.0 {
        e_upper as f64 / bound_shape
    } else {
        f64::NAN
    };

    Ok(CensusReport {
        n,
        b,
        mode,
        counts: acc.counts.into_iter().collect(),
        box_size,
        e_lower,
        e_upper,
        not_separable,
        undetermined,
        quartic_subtypes: acc.subtypes.into_iter().collect(),
        bound_shape,
        fitted_constant,
        prime_budget,
        seed,
        wall_ms: start.elapsed().as_millis() as u64,
    })
}

/// Count of t in [-B, B]^n whose f(x, t) has an irreducible factor of
/// degree exactly i, 1 <= i <= n/2, by full factorization.
pub fn count_reducible_by_degree(n: usize, b: i64, i: usize) -> Result<u64> {
    census_box_size(n, b)?;
    if i < 1 || 2 * i > n {
        return Err(Error::Domain(format!(
            "factor degree must satisfy 1 <= i <= n/2, got i={i} for n={n}"
        )));
    }
    let shards: Vec<i64> = (-b..=b).collect();
    let counts = shards
        .into_par_iter()
        .map(|t0| -> Result<u64> {
            let mut count = 0u64;
            visit_suffix(t0, n, b, |t| {
                let factors = int_poly_factor_deg16(&census_poly(t), CLASSIFY_SEED)?;
                if factors.iter().any(|g| g.degree() == Some(i)) {
                    count += 1;
                }
                Ok(())
            })?;
            Ok(count)
        })
        .collect::<Result<Vec<u64>>>()?;
    Ok(counts.iter().sum())
}

/// Count of t in [-B, B]^n with square discriminant, zero included; the
/// E'_n quantity whose expected shape is B^{n - 1/2}.
pub fn count_disc_square(n: usize, b: i64) -> Result<u64> {
    census_box_size(n, b)?;
    let shards: Vec<i64> = (-b..=b).collect();
    let counts = shards
        .into_par_iter()
        .map(|t0| -> Result<u64> {
            let mut count = 0u64;
            visit_suffix(t0, n, b, |t| {
                if is_perfect_square(int_poly_disc(&census_poly(t))?) {
                    count += 1;
                }
                Ok(())
            })?;
            Ok(count)
        })
        .collect::<Result<Vec<u64>>>()?;
    Ok(counts.iter().sum())
}
