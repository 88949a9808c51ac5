//! Serre's surjectivity criterion over F_ell: the three matrix classes
//! whose joint presence forces a subgroup of GL2(F_ell) to contain SL2,
//! with exact trace/determinant counts behind the proportion estimates.
//!
//! Everything assumes ell >= 5 prime. Brute-force matrix enumeration is
//! used through ell = 31; past that, counts come from the exact fiber
//! formula ell^2 + eps*ell, which the enumeration range verifies.

use crate::arith::{is_prime_u64, legendre, modpow_u64};
use crate::error::{Error, Result};
use crate::groups::{sl2_group, ExplicitGroup, Mat2, Ratio};

use serde::Serialize;

/// Largest prime for which full GL2(F_ell) enumeration is performed.
pub const ENUMERATION_CAP: u64 = 31;

/// Membership flags for the three Serre classes.
///
/// C1: tr != 0 and tr^2 - 4 det is a nonzero square.
/// C2: tr != 0 and tr^2 - 4 det is a non-square.
/// C3: u = tr^2/det avoids {0, 1, 2, 4} and u^2 - 3u + 1 != 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SerreClass {
    pub in_c1: bool,
    pub in_c2: bool,
    pub in_c3: bool,
}

fn check_ell(ell: u64) -> Result<()> {
    if ell < 5 || !is_prime_u64(ell) {
        return Err(Error::Domain(format!("{ell} is not a prime >= 5")));
    }
    Ok(())
}

/// Classifies by trace and determinant alone; the classes are conjugation
/// invariant because trace and determinant are.
fn classify_trace_det(ell: u64, tr: u64, det: u64) -> Result<SerreClass> {
    if det % ell == 0 {
        return Err(Error::Domain("singular matrix has no Serre class".into()));
    }
    let tr = tr % ell;
    let det = det % ell;
    let disc = ((tr * tr) as i128 - 4 * det as i128).rem_euclid(ell as i128);
    let chi = legendre(disc, ell)?;
    let in_c1 = tr != 0 && chi == 1;
    let in_c2 = tr != 0 && chi == -1;
    let u = (tr * tr) % ell * modpow_u64(det, ell - 2, ell) % ell;
    let in_c3 = u != 0 && u != 1 && u != 2 && u != 4 && (u * u + 3 * ell - 3 * u + 1) % ell != 0;
    debug_assert!(!(in_c1 && in_c2));
    Ok(SerreClass { in_c1, in_c2, in_c3 })
}

/// Serre-class membership of a matrix over F_ell, ell >= 5 prime.
pub fn classify(a: &Mat2) -> Result<SerreClass> {
    let ell = a.modulus();
    check_ell(ell)?;
    classify_trace_det(ell, a.trace(), a.det())
}

/// Serre-class membership of an abstract (trace, det) pair mod ell,
/// for callers holding Frobenius data rather than a matrix. Inputs are
/// reduced mod ell; the determinant must reduce to a unit.
pub fn classify_pair(ell: u64, trace: u64, det: u64) -> Result<SerreClass> {
    check_ell(ell)?;
    classify_trace_det(ell, trace % ell, det % ell)
}

/// Number of A in GL2(F_ell) with det(A) = d and tr(A) = t.
///
/// For ell <= 31 this is counted by enumeration and checked against the
/// exact fiber formula ell^2 + legendre(t^2-4d) * ell; past the enumeration
/// cap the formula value is returned directly.
pub fn count_fixed_trace_det(ell: u64, d: u64, t: u64) -> Result<u64> {
    check_ell(ell)?;
    if d % ell == 0 {
        return Err(Error::Domain("determinant fiber must be nonzero".into()));
    }
    let d = d % ell;
    let t = t % ell;
    let formula = formula_count(ell, d, t)?;
    if ell > ENUMERATION_CAP {
        return Ok(formula);
    }
    let mut count = 0u64;
    for a in 0..ell {
        let de = (t + ell - a) % ell;
        let ad = (a * de) % ell;
        for b in 0..ell {
            for c in 0..ell {
                if (ad + ell * ell - b * c) % ell == d {
                    count += 1;
                }
            }
        }
    }
    if count != formula {
        return Err(Error::Invariant(format!(
            "trace/det fiber count {count} disagrees with ell^2 + eps*ell = {formula} \
             at ell={ell}, d={d}, t={t}"
        )));
    }
    Ok(count)
}

fn formula_count(ell: u64, d: u64, t: u64) -> Result<u64> {
    let disc = ((t * t) as i128 - 4 * d as i128).rem_euclid(ell as i128);
    let eps = legendre(disc, ell)?;
    let base = ell * ell;
    Ok(match eps {
        1 => base + ell,
        0 => base,
        _ => base - ell,
    })
}

/// Exact proportion |{A in C_i : det A = d}| / |SL2(F_ell)| as a rational.
///
/// The denominator ell(ell^2-1) is the size of every determinant fiber.
/// Enumerates matrices for ell <= 31, otherwise sums the fiber formula over
/// the traces belonging to the class.
pub fn class_proportion(ell: u64, d: u64, i: u8) -> Result<Ratio> {
    check_ell(ell)?;
    if d % ell == 0 {
        return Err(Error::Domain("determinant fiber must be nonzero".into()));
    }
    if !(1..=3).contains(&i) {
        return Err(Error::Domain(format!("no Serre class numbered {i}")));
    }
    let d = d % ell;
    let count = if ell <= ENUMERATION_CAP {
        proportion_count_brute(ell, d, i)?
    } else {
        proportion_count_formula(ell, d, i)?
    };
    Ratio::new(count, ell * (ell * ell - 1))
}

fn in_class(flags: SerreClass, i: u8) -> bool {
    match i {
        1 => flags.in_c1,
        2 => flags.in_c2,
        _ => flags.in_c3,
    }
}

fn proportion_count_brute(ell: u64, d: u64, i: u8) -> Result<u64> {
    let mut count = 0u64;
    for a in 0..ell {
        for de in 0..ell {
            let flags = classify_trace_det(ell, a + de, d)?;
            if !in_class(flags, i) {
                continue;
            }
            let ad = (a * de) % ell;
            for b in 0..ell {
                for c in 0..ell {
                    if (ad + ell * ell - b * c) % ell == d {
                        count += 1;
                    }
                }
            }
        }
    }
    Ok(count)
}

fn proportion_count_formula(ell: u64, d: u64, i: u8) -> Result<u64> {
    let mut count = 0u64;
    for t in 0..ell {
        if in_class(classify_trace_det(ell, t, d)?, i) {
            count += formula_count(ell, d, t)?;
        }
    }
    Ok(count)
}

/// Whether the subgroup generated by `generators` contains all of
/// SL2(F_ell), decided by explicit closure. Guarded at ell <= 31.
pub fn contains_sl2(generators: &[Mat2], ell: u64) -> Result<bool> {
    check_ell(ell)?;
    if ell > ENUMERATION_CAP {
        return Err(Error::Resource(format!(
            "explicit closure in GL2(F_ell) is capped at ell = {ENUMERATION_CAP}"
        )));
    }
    if generators.is_empty() {
        return Err(Error::Domain("contains_sl2 needs at least one generator".into()));
    }
    if generators.iter().any(|g| g.modulus() != ell) {
        return Err(Error::Domain("generator modulus does not match ell".into()));
    }
    let g = ExplicitGroup::closure(generators)?;
    let sl2 = sl2_group(ell)?;
    Ok(sl2.is_subgroup_of(&g))
}

/// Whether a matrix group meets all three Serre classes.
pub fn meets_all_classes(g: &ExplicitGroup<Mat2>) -> Result<bool> {
    let (mut c1, mut c2, mut c3) = (false, false, false);
    for a in g.elements() {
        let flags = classify(a)?;
        c1 |= flags.in_c1;
        c2 |= flags.in_c2;
        c3 |= flags.in_c3;
        if c1 && c2 && c3 {
            return Ok(true);
        }
    }
    Ok(false)
}
