//! Acceptance gate: thirteen end-to-end checks, one test each, covering
//! every experiment the library ships. Each test prints a single PASS
//! line once all of its assertions hold; a panic is the FAIL line.
//! Tolerances and budgets are frozen here on purpose; loosening them is
//! a library change, not a test tweak.

use std::collections::{BTreeSet, HashSet};
use std::f64::consts::LN_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use sievelab_core::arith::{
    for_primes_in, int_poly_factor, is_perfect_square, legendre, mertens_sum, primes_up_to,
    IntPoly,
};
use sievelab_core::bounds::auto_cutoff;
use sievelab_core::charsum::exhaustive_scan;
use sievelab_core::dynamics::{
    density_profile, height_growth_check, orbit_mod_p, orbit_mod_p_naive, PolyMap,
};
use sievelab_core::elliptic::{
    certify_surjective, family_census, point_count_direct, point_count_mod_p, CurveQ, FamilySpec,
};
use sievelab_core::galois::{
    count_census, count_disc_square, count_reducible_by_degree, CensusMode, GaloisLabel,
};
use sievelab_core::groups::{
    all_subgroups, commutator_subgroup, conjugacy_union_ratio, derangement_delta, gl2_group,
    index, intersect_sl2, point_stabilizer, reduction_kernel, sl2_group, symmetric_group,
    ExplicitGroup, Mat2, transitive_union_ratio, transitive_union_ratio_by_pairs,
};
use sievelab_core::heights::{congruent_prime_sum_int, congruent_prime_sum_proj};
use sievelab_core::serre::{
    class_proportion, contains_sl2, count_fixed_trace_det, meets_all_classes,
};
use sievelab_core::sieve::{best_bound_by_doubling, sieve_bound_int, PointSet, SieveBound};
use sievelab_core::{IntPoint, ProjPoint, SieveInstance};

fn int_set(vals: &[i128]) -> PointSet {
    PointSet::Int(vals.iter().map(|&v| IntPoint::new(&[v])).collect())
}

/// Larger-sieve soundness: on structured sets and 500 seeded random
/// subsets per box size, every finite bound dominates the true count,
/// and the squares demo lands under 5 sqrt(B).
#[test]
fn c01_larger_sieve_soundness() {
    let empty = BTreeSet::new();
    for &bb in &[1_000i128, 10_000, 100_000] {
        let b = bb as f64;

        let squares: Vec<i128> = (0i128..).map(|m| m * m).take_while(|&s| s <= bb).collect();
        let (v, _) = best_bound_by_doubling(&int_set(&squares), b, 1, 4_096, &empty)
            .unwrap()
            .expect("squares sieve must conclude");
        assert!(v >= squares.len() as f64 - 1e-9, "squares bound {v} too low");
        assert!(v <= 5.0 * b.sqrt(), "squares bound {v} above 5 sqrt B at B={bb}");

        let c = (1i128..).find(|m| m * m * m > bb).unwrap() - 1;
        let cubes: Vec<i128> = (-c..=c).map(|m| m * m * m).collect();
        if let Some((v, _)) =
            best_bound_by_doubling(&int_set(&cubes), 2.0 * b, 1, 4_096, &empty).unwrap()
        {
            assert!(v >= cubes.len() as f64 - 1e-9, "cubes bound {v} too low");
        }

        let parab: Vec<i128> = {
            let lim = (1i128..).find(|m| m * m + m > bb).unwrap();
            let set: BTreeSet<i128> = (-lim..=lim)
                .map(|m| m * m + m)
                .filter(|&w| w.unsigned_abs() <= bb as u128)
                .collect();
            set.into_iter().collect()
        };
        if let Some((v, _)) =
            best_bound_by_doubling(&int_set(&parab), b, 1, 4_096, &empty).unwrap()
        {
            assert!(v >= parab.len() as f64 - 1e-9, "x^2+x bound {v} too low");
        }

        let mut rng = ChaCha8Rng::seed_from_u64(101 + bb as u64);
        for _ in 0..500 {
            let size = rng.gen_range(5..=400);
            let vals: BTreeSet<i128> = (0..size).map(|_| rng.gen_range(-bb..=bb)).collect();
            let vals: Vec<i128> = vals.into_iter().collect();
            let inst = SieveInstance::with_measured_occupancy(
                int_set(&vals),
                2.0 * b,
                1,
                2,
                200,
                BTreeSet::new(),
            )
            .unwrap();
            if let SieveBound::Finite(v) = sieve_bound_int(&inst).unwrap() {
                assert!(
                    v >= vals.len() as f64 - 1e-9,
                    "random subset of size {} got bound {v}",
                    vals.len()
                );
            }
        }
    }
    println!("PASS  1  larger-sieve soundness on structured and random sets");
}

/// Congruence-support bounds, verbatim and exhaustive: projective pairs
/// with coordinates in [-20,20] (two and three coordinates), integral
/// pairs in [-50,50]^2, plus the equality case (2,3) vs (5,3).
#[test]
fn c02_height_support_bounds() {
    for dim in [2usize, 3] {
        let mut seen: HashSet<Vec<i128>> = HashSet::new();
        let mut pts: Vec<ProjPoint> = Vec::new();
        let side = 41i128;
        let total = side.pow(dim as u32);
        for idx in 0..total {
            let mut coords = Vec::with_capacity(dim);
            let mut k = idx;
            for _ in 0..dim {
                coords.push(k % side - 20);
                k /= side;
            }
            if coords.iter().all(|&c| c == 0) {
                continue;
            }
            let p = ProjPoint::new(&coords).unwrap();
            if seen.insert(p.coords().to_vec()) {
                pts.push(p);
            }
        }
        let log_h: Vec<f64> = pts.iter().map(|p| (p.height() as f64).ln()).collect();
        let violations: u64 = pts
            .par_iter()
            .enumerate()
            .map(|(i, p)| {
                let mut bad = 0u64;
                for (j, q) in pts.iter().enumerate().skip(i + 1) {
                    let (sum, _) = congruent_prime_sum_proj(p, q).unwrap();
                    if sum > LN_2 + log_h[i] + log_h[j] + 1e-9 {
                        bad += 1;
                    }
                }
                bad
            })
            .sum();
        assert_eq!(violations, 0, "projective support bound failed at dim {dim}");
    }

    let pts: Vec<IntPoint> = (-50i128..=50)
        .flat_map(|x| (-50i128..=50).map(move |y| IntPoint::new(&[x, y])))
        .collect();
    let violations: u64 = pts
        .par_iter()
        .enumerate()
        .map(|(i, p)| {
            let mut bad = 0u64;
            for q in &pts[i + 1..] {
                let (sum, _) = congruent_prime_sum_int(p, q).unwrap();
                let dist = p.dist_sup(q).unwrap();
                if sum > (dist as f64).ln() + 1e-9 {
                    bad += 1;
                }
            }
            bad
        })
        .sum();
    assert_eq!(violations, 0, "integral support bound failed");

    let p = IntPoint::new(&[2, 3]);
    let q = IntPoint::new(&[5, 3]);
    let (sum, primes) = congruent_prime_sum_int(&p, &q).unwrap();
    assert_eq!(primes, vec![3]);
    assert!((sum - 3f64.ln()).abs() < 1e-12, "equality case is off: {sum}");
    println!("PASS  2  congruence-support bounds, exhaustive boxes plus equality case");
}

/// Trace/determinant fibers in GL2(F_ell) match ell^2 + eps*ell exactly
/// for every unit determinant and every trace, ell <= 31.
#[test]
fn c03_gl2_fiber_counts_exact() {
    for ell in [5u64, 7, 11, 13, 17, 19, 23, 29, 31] {
        for d in 1..ell {
            for t in 0..ell {
                let count = count_fixed_trace_det(ell, d, t).unwrap();
                let disc = ((t * t) as i128 - 4 * d as i128).rem_euclid(ell as i128);
                let expected = match legendre(disc, ell).unwrap() {
                    1 => ell * ell + ell,
                    0 => ell * ell,
                    _ => ell * ell - ell,
                };
                assert_eq!(count, expected, "fiber count off at ell={ell} d={d} t={t}");
            }
        }
    }
    println!("PASS  3  GL2 fiber counts equal ell^2 + eps*ell for all ell <= 31");
}

/// Class proportions within a determinant fiber sit near their limits:
/// within 8/ell of 1/2 for the two square classes, within 20/ell of 1
/// for the third, out to ell = 101 through the formula path.
#[test]
fn c04_serre_class_proportions() {
    let primes: Vec<u64> = primes_up_to(101)
        .unwrap()
        .into_iter()
        .filter(|&p| p >= 17)
        .collect();
    for &ell in &primes {
        let nonresidue = (2..ell)
            .find(|&d| legendre(d as i128, ell).unwrap() == -1)
            .unwrap();
        for d in [1, nonresidue] {
            for i in [1u8, 2] {
                let prop = class_proportion(ell, d, i).unwrap().value();
                assert!(
                    (prop - 0.5).abs() <= 8.0 / ell as f64,
                    "class {i} proportion {prop} strays at ell={ell} d={d}"
                );
            }
            let prop = class_proportion(ell, d, 3).unwrap().value();
            assert!(
                (prop - 1.0).abs() <= 20.0 / ell as f64,
                "class 3 proportion {prop} strays at ell={ell} d={d}"
            );
        }
    }
    println!("PASS  4  Serre class proportions within 8/ell and 20/ell up to ell=101");
}

/// Surjectivity criterion: 500 seeded random generator sets per ell in
/// {5,7,11,13}; whenever the closure meets all three classes, it must
/// contain SL2. Zero counterexamples tolerated.
#[test]
fn c05_serre_criterion_randomized() {
    for ell in [5u64, 7, 11, 13] {
        let mut rng = ChaCha8Rng::seed_from_u64(500 + ell);
        let mut triggered = 0u32;
        for _ in 0..500 {
            let k = rng.gen_range(1..=3);
            let mut gens = Vec::with_capacity(k);
            while gens.len() < k {
                let m = Mat2::new(
                    ell,
                    rng.gen_range(0..ell),
                    rng.gen_range(0..ell),
                    rng.gen_range(0..ell),
                    rng.gen_range(0..ell),
                );
                if let Ok(mat) = m {
                    gens.push(mat);
                }
            }
            let g = ExplicitGroup::closure(&gens).unwrap();
            if meets_all_classes(&g).unwrap() {
                triggered += 1;
                assert!(
                    contains_sl2(&gens, ell).unwrap(),
                    "criterion counterexample at ell={ell}: generators {gens:?}"
                );
            }
        }
        assert!(triggered > 0, "no generator set met all classes at ell={ell}");
    }
    println!("PASS  5  criterion holds on 500 seeded generator sets per ell in {{5,7,11,13}}");
}

/// Commutator indices: [GL2(Z/m), GL2(Z/m)] sits inside SL2(Z/m) with
/// index exactly 2 for m in {2,4,8,12}. The level-2 congruence kernel
/// H = {A in GL2(Z/8) : A = I mod 2} has commutator exactly
/// {A in SL2(Z/8) : A = I mod 4}, of index 8 in H's SL2 part; combining
/// with [GL2 : H] = 6 derives the full index 48.
#[test]
fn c06_commutator_indices() {
    for m in [2u64, 4, 8, 12] {
        let gl2 = gl2_group(m).unwrap();
        let comm = commutator_subgroup(&gl2).unwrap();
        let sl2 = sl2_group(m).unwrap();
        assert_eq!(
            index(&sl2, &comm).unwrap(),
            2,
            "GL2 commutator index inside SL2 at m={m}"
        );
    }
    let h8 = reduction_kernel(8, 2).unwrap();
    let ch8 = commutator_subgroup(&h8).unwrap();
    let k4 = intersect_sl2(&reduction_kernel(8, 4).unwrap()).unwrap();
    assert_eq!(ch8.order(), k4.order());
    assert!(
        k4.elements().iter().all(|e| ch8.contains(e)),
        "commutator of the level-2 kernel is not the mod-4 principal congruence group"
    );
    let h8_sl2 = intersect_sl2(&h8).unwrap();
    assert_eq!(index(&h8_sl2, &ch8).unwrap(), 8);
    let full = index(&gl2_group(8).unwrap(), &h8).unwrap() * index(&h8_sl2, &ch8).unwrap();
    assert_eq!(full, 48, "derived full index");
    println!("PASS  6  GL2 commutator index 2, kernel identity at level 8, full index 48");
}

/// Derangements against conjugacy unions: the fixed-point proportion
/// from inclusion-exclusion equals the stabilizer cover ratio exactly up
/// to n = 7, and every proper subgroup of S_n covers strictly less than
/// the whole group for n <= 5.
#[test]
fn c07_derangements_and_jordan() {
    for n in 1..=7u32 {
        let sn = symmetric_group(n as usize).unwrap();
        let stab = point_stabilizer(&sn, 0).unwrap();
        let cover = conjugacy_union_ratio(&sn, &stab).unwrap();
        assert_eq!(
            derangement_delta(n).unwrap(),
            cover,
            "derangement delta mismatch at n={n}"
        );
    }
    for n in 2..=5usize {
        let sn = symmetric_group(n).unwrap();
        let full = sn.order();
        for h in all_subgroups(n).unwrap() {
            if h.order() == full {
                continue;
            }
            let r = conjugacy_union_ratio(&sn, &h).unwrap();
            assert!(
                !r.is_one(),
                "proper subgroup of order {} covered S_{n}",
                h.order()
            );
        }
    }
    println!("PASS  7  derangement ratio identity to n=7, proper covers stay below 1 to n=5");
}

/// Transitive-union statistic: the subgroup-enumeration route and the
/// generator-pair closure sweep agree exactly for n = 3..6, and the n=3
/// value is zero. Values are reported, nothing beyond exactness is
/// asserted.
#[test]
fn c08_transitive_union_two_routes() {
    for n in 3..=6usize {
        let by_subgroups = transitive_union_ratio(n).unwrap();
        let by_pairs = transitive_union_ratio_by_pairs(n).unwrap();
        assert_eq!(by_subgroups, by_pairs, "route disagreement at n={n}");
        if n == 3 {
            assert!(by_subgroups.is_zero(), "n=3 union should be empty");
        }
        println!(
            "      transitive-union ratio n={n}: {}/{} = {:.6}",
            by_subgroups.num(),
            by_subgroups.den(),
            by_subgroups.value()
        );
    }
    println!("PASS  8  transitive-union ratios equal across both enumeration routes, n=3..6");
}

/// Polynomial censuses: the quadratic exceptional count against a
/// direct double loop, partition identities, the reducible-by-degree
/// count against a root scan, and the reported trend ratios.
#[test]
fn c09_polynomial_censuses() {
    let rep = count_census(2, 100, CensusMode::Exact, 50, 1).unwrap();
    let mut oracle = 0u64;
    for t1 in -100i128..=100 {
        for t2 in -100i128..=100 {
            if is_perfect_square(t1 * t1 - 4 * t2) {
                oracle += 1;
            }
        }
    }
    assert_eq!(rep.e_upper, oracle, "quadratic census disagrees with the double loop");
    assert_eq!(rep.e_lower, rep.e_upper);

    let rep3 = count_census(3, 50, CensusMode::Exact, 50, 1).unwrap();
    let total3: u64 = rep3.counts.iter().map(|(_, c)| c).sum();
    assert_eq!(total3, 101u64.pow(3));
    let rep4 = count_census(4, 12, CensusMode::Exact, 50, 1).unwrap();
    let total4: u64 = rep4.counts.iter().map(|(_, c)| c).sum();
    assert_eq!(total4, 25u64.pow(4));

    let counted = count_reducible_by_degree(3, 10, 1).unwrap();
    let mut root_scan = 0u64;
    for t1 in -10i128..=10 {
        for t2 in -10i128..=10 {
            for t3 in -10i128..=10 {
                let f = IntPoly::new(&[t3, t2, t1, 1]);
                if (-11i128..=11).any(|r| f.eval(r).unwrap() == 0) {
                    root_scan += 1;
                }
            }
        }
    }
    assert_eq!(counted, root_scan, "linear-factor count disagrees with the root scan");

    for b in [100i64, 1_000, 10_000] {
        let r = count_census(2, b, CensusMode::Exact, 50, 1).unwrap();
        let shape = 2.0 * b as f64 * (b as f64).ln();
        println!(
            "      E_2({b}) = {}, ratio to 2B log B = {:.4}, E/B^1.5 = {:.4}",
            r.e_upper,
            r.e_upper as f64 / shape,
            r.e_upper as f64 / (b as f64).powf(1.5)
        );
    }
    for b in [10i64, 20, 40] {
        let r = count_census(3, b, CensusMode::Exact, 50, 1).unwrap();
        let disc_sq = count_disc_square(3, b).unwrap();
        let red = count_reducible_by_degree(3, b, 1).unwrap();
        println!(
            "      n=3 B={b}: E={} E/B^2.5={:.4} disc-square={} reducible={} red/B^2={:.4}",
            r.e_upper,
            r.e_upper as f64 / (b as f64).powf(2.5),
            disc_sq,
            red,
            red as f64 / (b as f64).powi(2)
        );
    }
    println!("PASS  9  polynomial censuses match their oracles; trend ratios reported");
}

/// Elliptic censuses: both point-count routes agree on 20 seeded curves,
/// the certification worked example certifies, and the family census is
/// identical under different thread pools (canonically sorted CSV).
#[test]
fn c10_elliptic_census() {
    let mut rng = ChaCha8Rng::seed_from_u64(1031);
    let mut curves = Vec::new();
    while curves.len() < 20 {
        let a = rng.gen_range(-20i64..=20);
        let b = rng.gen_range(-20i64..=20);
        if let Ok(e) = CurveQ::new(a, b) {
            curves.push(e);
        }
    }
    let primes = primes_up_to(200).unwrap();
    for e in &curves {
        for &p in &primes {
            if p < 5 || e.disc() % p as i128 == 0 {
                continue;
            }
            let by_charsum = point_count_mod_p(e, p).unwrap();
            let by_squares = point_count_direct(e, p).unwrap();
            assert_eq!(
                by_charsum, by_squares,
                "trace routes disagree at a={} b={} p={p}",
                e.a(),
                e.b()
            );
        }
    }

    let e = CurveQ::new(1, 1).unwrap();
    assert!(
        certify_surjective(&e, 5, 1_000).unwrap().is_certified(),
        "y^2 = x^3 + x + 1 must certify at ell = 5"
    );

    let fam = FamilySpec::legendre();
    let default_pool = family_census(&fam, 50, &[5, 7], 2_000).unwrap();
    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| family_census(&fam, 50, &[5, 7], 2_000))
        .unwrap();
    let mut a = default_pool.csv_rows();
    let mut b = single.csv_rows();
    a.sort();
    b.sort();
    assert_eq!(a, b, "family census depends on the thread pool");
    println!("PASS 10  elliptic trace routes agree; certification and census determinism hold");
}

/// Dynamics: cycle search against set accumulation on 200 seeded
/// triples, the finite-x density floor at x = 10^5, and the exact c = 0
/// power-tower height. The 0.9 floor was frozen after a calibration run
/// of this exact profile measured 0.999896 (9591 of 9592 primes; the
/// lone miss is p = 45833, where 0 is periodic with period 6).
#[test]
fn c11_dynamics() {
    let primes = primes_up_to(10_000).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(911);
    for _ in 0..200 {
        let deg = rng.gen_range(2..=4usize);
        let mut coeffs: Vec<i128> = (0..=deg).map(|_| rng.gen_range(-5..=5)).collect();
        while coeffs[deg] == 0 {
            coeffs[deg] = rng.gen_range(-5..=5);
        }
        let phi = PolyMap::new(IntPoly::new(&coeffs)).unwrap();
        let base = rng.gen_range(-20..=20i64);
        let p = primes[rng.gen_range(0..primes.len())];
        assert_eq!(
            orbit_mod_p(&phi, base, p).unwrap(),
            orbit_mod_p_naive(&phi, base, p).unwrap(),
            "orbit routes disagree at phi={coeffs:?} base={base} p={p}"
        );
    }

    let phi = PolyMap::new(IntPoly::monic_with_lower(&[1, 0])).unwrap();
    let prof = density_profile(&phi, 0, 100_000, 0.5 / LN_2).unwrap();
    assert!(
        prof.fraction >= 0.9,
        "finite-x density {} fell below the frozen floor 0.9",
        prof.fraction
    );
    println!(
        "      finite-x density at 10^5: {:.6} ({} of {} primes)",
        prof.fraction, prof.passing, prof.primes_scanned
    );

    let sq = PolyMap::new(IntPoly::monic_with_lower(&[0, 0])).unwrap();
    let growth = height_growth_check(&sq, 2, 15).unwrap();
    assert_eq!(growth.c_min, 0.0, "power tower must report c = 0 exactly");
    println!("PASS 11  orbit routes agree; density floor and exact height constant hold");
}

/// Character sums: the square-root deviation bound holds for every
/// squarefree monic cubic and quintic with coefficients in [-3,3] at
/// every good odd prime up to 500. Zero failures.
#[test]
fn c12_character_sum_bound() {
    for degree in [3usize, 5] {
        let report = exhaustive_scan(degree, 3, 500).unwrap();
        assert_eq!(
            report.failures, 0,
            "deviation bound failed {} times at degree {degree}: {:?}",
            report.failures, report.failure_sample
        );
        assert_eq!(report.passes, report.instances);
        assert!(report.crosschecks > 0);
        println!(
            "      degree {degree}: {} instances, worst deviation/bound = {:.4}",
            report.instances, report.worst_ratio
        );
    }
    println!("PASS 12  character-sum deviation bound holds on both exhaustive boxes");
}

/// Analytic sums: the prime log sum stays within 2 of log x across four
/// decades, and the adaptive cutoff always hands back a certificate of
/// positivity, re-verified here by direct summation.
#[test]
fn c13_analytic_sums() {
    for x in [1e2, 1e4, 1e6, 1e7] {
        let s = mertens_sum(x).unwrap();
        assert!(
            (s - x.ln()).abs() <= 2.0,
            "prime log sum {s} strays from log {x}"
        );
    }

    let small: Vec<u64> = vec![2, 3, 5, 7, 11, 13];
    let mut rng = ChaCha8Rng::seed_from_u64(413);
    for _ in 0..100 {
        let delta = rng.gen_range(0.05..=1.0);
        let big_d = rng.gen_range(1.0..=4.0);
        let s: BTreeSet<u64> = small
            .iter()
            .copied()
            .filter(|_| rng.gen_bool(0.3))
            .collect();
        let b = rng.gen_range(1.0..=5_000.0);
        let x = auto_cutoff(delta, big_d, &s, b, 1).unwrap();
        let mut sum = 0.0;
        for_primes_in(2, x as u64, |p| {
            let pf = p as f64;
            if !s.contains(&p) && pf >= big_d * big_d {
                sum += pf.ln() / (delta * (pf + big_d * pf.sqrt()));
            }
        })
        .unwrap();
        assert!(
            sum - b.ln() >= 1.0 - 1e-6,
            "cutoff x={x} leaves the denominator at {}",
            sum - b.ln()
        );
    }
    println!("PASS 13  prime log sums track log x; adaptive cutoff certifies positivity");
}

/// Not a criterion of its own: the labels the censuses print are pinned
/// so the CSV contract downstream cannot drift silently.
#[test]
fn label_display_contract() {
    assert_eq!(GaloisLabel::FullSymmetric.to_string(), "full_symmetric");
    assert_eq!(
        GaloisLabel::Reducible(vec![1, 1, 2]).to_string(),
        "reducible(1+1+2)"
    );
    let f = IntPoly::new(&[-2, 0, 1]);
    let factors = int_poly_factor(&f, 7).unwrap();
    assert_eq!(factors.len(), 1, "x^2 - 2 should stay irreducible");
}
