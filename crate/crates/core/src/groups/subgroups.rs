//! Exhaustive subgroup enumeration for small symmetric groups, and the
//! transitive-union statistic built on top of it.
//!
//! S_n for n <= 6 is small enough (720 elements) to precompute the full
//! multiplication table with u16 ranks, so subgroups are sorted rank lists
//! and closures are table lookups.

use std::collections::{HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::groups::{alternating_group, is_transitive, ExplicitGroup, GroupElem, Perm, Ratio};

/// Enumeration cap: the table for S_7 would hold 25M entries and the
/// subgroup count jumps past 11 thousand.
pub const MAX_SUBGROUP_DEGREE: usize = 6;

struct SymTable {
    n: usize,
    fact: usize,
    perms: Vec<Perm>,
    mul: Vec<u16>,
}

impl SymTable {
    fn build(n: usize) -> SymTable {
        debug_assert!(n >= 1 && n <= MAX_SUBGROUP_DEGREE);
        let fact: usize = (1..=n).product();
        let mut perms = Vec::with_capacity(fact);
        let mut cur: Vec<u8> = (0..n as u8).collect();
        loop {
            perms.push(Perm::new(cur.clone()).expect("generated table is a bijection"));
            if !next_permutation(&mut cur) {
                break;
            }
        }
        debug_assert_eq!(perms.len(), fact);

        let mut factorials = vec![1usize; n + 1];
        for k in 1..=n {
            factorials[k] = factorials[k - 1] * k;
        }
        let rank = |p: &Perm| -> u16 {
            // Lehmer code: count smaller unseen entries to the right.
            let im = p.images();
            let mut r = 0usize;
            for i in 0..n {
                let smaller = im[i + 1..].iter().filter(|&&x| x < im[i]).count();
                r += smaller * factorials[n - 1 - i];
            }
            r as u16
        };

        let mut mul = vec![0u16; fact * fact];
        for i in 0..fact {
            for j in 0..fact {
                mul[i * fact + j] = rank(&perms[i].op(&perms[j]));
            }
        }
        SymTable { n, fact, perms, mul }
    }

    #[inline]
    fn mul(&self, i: u16, j: u16) -> u16 {
        self.mul[i as usize * self.fact + j as usize]
    }
}

fn next_permutation(a: &mut [u8]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let mut i = a.len() - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = a.len() - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

/// Reusable closure scratch: stamps avoid clearing a bitmap per call.
struct Closer {
    stamps: Vec<u32>,
    stamp: u32,
}

impl Closer {
    fn new(fact: usize) -> Closer {
        Closer {
            stamps: vec![0; fact],
            stamp: 0,
        }
    }

    /// Closure of `seed` under right multiplication by `gens`. The seed must
    /// contain the identity (rank 0); the result is sorted.
    fn close(&mut self, table: &SymTable, seed: &[u16], gens: &[u16]) -> Vec<u16> {
        self.stamp += 1;
        let s = self.stamp;
        let mut out: Vec<u16> = Vec::new();
        let mut queue: VecDeque<u16> = VecDeque::new();
        for &x in seed {
            if self.stamps[x as usize] != s {
                self.stamps[x as usize] = s;
                out.push(x);
                queue.push_back(x);
            }
        }
        debug_assert!(self.stamps[0] == s, "seed must contain the identity");
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = table.mul(x, g);
                if self.stamps[y as usize] != s {
                    self.stamps[y as usize] = s;
                    out.push(y);
                    queue.push_back(y);
                }
            }
        }
        out.sort_unstable();
        out
    }
}

fn element_order(table: &SymTable, g: u16) -> usize {
    let mut x = g;
    let mut ord = 1usize;
    while x != 0 {
        x = table.mul(x, g);
        ord += 1;
    }
    ord
}

fn is_prime_power(k: usize) -> bool {
    if k < 2 {
        return false;
    }
    let mut k = k;
    let mut p = 2usize;
    while p * p <= k {
        if k % p == 0 {
            while k % p == 0 {
                k /= p;
            }
            return k == 1;
        }
        p += 1;
    }
    true
}

/// Every subgroup of S_n, each exactly once, for n <= 6.
///
/// Layered search: seed with the trivial group and every cyclic subgroup,
/// then repeatedly join known subgroups with single elements until no new
/// subgroup appears. Joins only need one representative generator per
/// cyclic subgroup of prime-power order, because every subgroup is
/// generated by the prime-power parts of its elements.
pub fn all_subgroups(n: usize) -> Result<Vec<ExplicitGroup<Perm>>> {
    if n == 0 || n > MAX_SUBGROUP_DEGREE {
        return Err(Error::Range(format!(
            "subgroup enumeration is capped at degree {MAX_SUBGROUP_DEGREE}"
        )));
    }
    let table = SymTable::build(n);
    let mut closer = Closer::new(table.fact);

    let mut seen: HashSet<Vec<u16>> = HashSet::new();
    let mut store: Vec<(Vec<u16>, Vec<u16>)> = Vec::new();
    let mut queue: VecDeque<usize> = VecDeque::new();

    let push = |elems: Vec<u16>,
                    gens: Vec<u16>,
                    seen: &mut HashSet<Vec<u16>>,
                    store: &mut Vec<(Vec<u16>, Vec<u16>)>,
                    queue: &mut VecDeque<usize>| {
        if seen.insert(elems.clone()) {
            store.push((elems, gens));
            queue.push_back(store.len() - 1);
        }
    };

    push(
        vec![0],
        vec![0],
        &mut seen,
        &mut store,
        &mut queue,
    );
    let mut candidates: Vec<u16> = Vec::new();
    let mut candidate_keys: HashSet<Vec<u16>> = HashSet::new();
    for g in 1..table.fact as u16 {
        let cyc = closer.close(&table, &[0], &[g]);
        if is_prime_power(element_order(&table, g)) && candidate_keys.insert(cyc.clone()) {
            candidates.push(g);
        }
        push(cyc, vec![g], &mut seen, &mut store, &mut queue);
    }

    while let Some(idx) = queue.pop_front() {
        let (elems, gens) = store[idx].clone();
        for &c in &candidates {
            if elems.binary_search(&c).is_ok() {
                continue;
            }
            let mut seed = elems.clone();
            seed.push(c);
            let mut jgens = gens.clone();
            jgens.push(c);
            let joined = closer.close(&table, &seed, &jgens);
            push(joined, jgens, &mut seen, &mut store, &mut queue);
        }
    }

    let mut groups: Vec<ExplicitGroup<Perm>> = store
        .into_iter()
        .map(|(elems, gens)| {
            let members: Vec<Perm> = elems.iter().map(|&i| table.perms[i as usize].clone()).collect();
            let gen_perms: Vec<Perm> = gens.iter().map(|&i| table.perms[i as usize].clone()).collect();
            ExplicitGroup::from_parts_closed(members, gen_perms)
        })
        .collect();
    groups.sort_by(|a, b| {
        (a.order(), a.elements()).cmp(&(b.order(), b.elements()))
    });
    Ok(groups)
}

/// |union of the transitive subgroups of S_n other than A_n and S_n| / n!,
/// exactly, via the full subgroup enumeration.
pub fn transitive_union_ratio(n: usize) -> Result<Ratio> {
    if n == 0 || n > MAX_SUBGROUP_DEGREE {
        return Err(Error::Range(format!(
            "transitive union ratio is capped at degree {MAX_SUBGROUP_DEGREE}"
        )));
    }
    let fact: usize = (1..=n).product();
    let a_n = alternating_group(n)?;
    let mut union: HashSet<&Perm> = HashSet::new();
    let subs = all_subgroups(n)?;
    for h in &subs {
        if h.order() == fact || *h == a_n || !is_transitive(h) {
            continue;
        }
        union.extend(h.elements().iter());
    }
    Ratio::new(union.len() as u64, fact as u64)
}

/// Second, independent route to the same statistic: sweep all generator
/// pairs (a, b), close each, and keep the qualifying closures. Agreement
/// with [`transitive_union_ratio`] is an end-to-end check that the subgroup
/// enumeration missed nothing (every transitive group of degree <= 6 is
/// 2-generated).
pub fn transitive_union_ratio_by_pairs(n: usize) -> Result<Ratio> {
    if n == 0 || n > MAX_SUBGROUP_DEGREE {
        return Err(Error::Range(format!(
            "transitive union ratio is capped at degree {MAX_SUBGROUP_DEGREE}"
        )));
    }
    let table = SymTable::build(n);
    let fact = table.fact;
    let mut closer = Closer::new(fact);
    let evens: Vec<bool> = table.perms.iter().map(|p| p.is_even()).collect();

    let mut union = vec![false; fact];
    for a in 0..fact as u16 {
        for b in a..fact as u16 {
            if !point_orbit_is_full(&table, a, b) {
                continue;
            }
            let j = closer.close(&table, &[0, a, b], &[a, b]);
            if j.len() == fact {
                continue;
            }
            if 2 * j.len() == fact && j.iter().all(|&x| evens[x as usize]) {
                continue; // exactly the alternating group
            }
            for &x in &j {
                union[x as usize] = true;
            }
        }
    }
    let count = union.iter().filter(|&&b| b).count();
    Ratio::new(count as u64, fact as u64)
}

fn point_orbit_is_full(table: &SymTable, a: u16, b: u16) -> bool {
    let n = table.n;
    let pa = &table.perms[a as usize];
    let pb = &table.perms[b as usize];
    let mut seen = [false; MAX_SUBGROUP_DEGREE];
    let mut stack = [0usize; MAX_SUBGROUP_DEGREE];
    let mut top = 1usize;
    seen[0] = true;
    let mut count = 1usize;
    while top > 0 {
        top -= 1;
        let i = stack[top];
        for j in [pa.apply(i), pb.apply(i)] {
            if !seen[j] {
                seen[j] = true;
                count += 1;
                stack[top] = j;
                top += 1;
            }
        }
    }
    count == n
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subgroup_counts_match_the_classical_table() {
        // Numbers of subgroups of S_n: 1, 2, 6, 30, 156.
        assert_eq!(all_subgroups(1).unwrap().len(), 1);
        assert_eq!(all_subgroups(2).unwrap().len(), 2);
        assert_eq!(all_subgroups(3).unwrap().len(), 6);
        assert_eq!(all_subgroups(4).unwrap().len(), 30);
        assert_eq!(all_subgroups(5).unwrap().len(), 156);
        assert!(all_subgroups(7).is_err());
        assert!(all_subgroups(0).is_err());
    }

    #[test]
    fn s3_subgroup_orders_are_as_expected() {
        let subs = all_subgroups(3).unwrap();
        let orders: Vec<usize> = subs.iter().map(|h| h.order()).collect();
        assert_eq!(orders, vec![1, 2, 2, 2, 3, 6]);
    }

    #[test]
    fn subgroup_orders_divide_group_order_and_lists_are_unique() {
        for n in 1..=5usize {
            let fact: usize = (1..=n).product();
            let subs = all_subgroups(n).unwrap();
            let mut keys: Vec<Vec<&Perm>> = Vec::new();
            for h in &subs {
                assert_eq!(fact % h.order(), 0);
                keys.push(h.elements().iter().collect());
            }
            keys.sort();
            keys.dedup();
            assert_eq!(keys.len(), subs.len(), "duplicate subgroup at n={n}");
        }
    }

    #[test]
    fn every_enumerated_subgroup_is_closed() {
        for h in all_subgroups(4).unwrap() {
            let again = ExplicitGroup::closure(h.elements()).unwrap();
            assert_eq!(h, again);
        }
    }

    #[test]
    fn transitive_union_ratio_small_values() {
        // n=3: the only transitive subgroups are A_3 and S_3, so the union
        // is empty. n=4: three D_4 conjugates cover C_4s and V_4, and
        // inclusion-exclusion gives 16/24. n=5: the six F_20 normalizers
        // cover everything transitive below A_5, 70/120.
        assert_eq!(transitive_union_ratio(3).unwrap(), Ratio::ZERO);
        assert_eq!(transitive_union_ratio(4).unwrap(), Ratio::new(2, 3).unwrap());
        assert_eq!(transitive_union_ratio(5).unwrap(), Ratio::new(7, 12).unwrap());
        assert!(transitive_union_ratio(7).is_err());
    }

    #[test]
    fn pair_sweep_agrees_with_subgroup_enumeration_up_to_n5() {
        for n in 1..=5usize {
            assert_eq!(
                transitive_union_ratio_by_pairs(n).unwrap(),
                transitive_union_ratio(n).unwrap(),
                "n={n}"
            );
        }
    }
}
