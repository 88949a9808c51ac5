//! Explicit finite groups: permutations and 2x2 matrices mod m.
//!
//! Groups are stored as fully enumerated, canonically sorted element lists,
//! so group equality is set equality on sorted sequences. Ratios of element
//! counts are returned as exact reduced rationals, never floats. The ambient
//! structure (degree n, or modulus m) lives on the elements themselves.

mod mat2;
mod perm;
mod subgroups;

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

pub use mat2::{
    gl2_group, gl2_order, intersect_sl2, reduction_kernel, sl2_group, sl2_order, Mat2,
};
pub use perm::{alternating_group, is_transitive, point_stabilizer, symmetric_group, Perm};
pub use subgroups::{all_subgroups, transitive_union_ratio, transitive_union_ratio_by_pairs};

/// Hard ceiling on the size of any breadth-first closure.
pub const CLOSURE_GUARD: usize = 10_000_000;

/// Largest group accepted by [`commutator_subgroup`].
pub const COMMUTATOR_GUARD: usize = 1_000_000;

/// Largest element list accepted by [`ExplicitGroup::from_elements`], which
/// validates closure by checking all pairs. Bigger groups should be built
/// with [`ExplicitGroup::closure`], which is closed by construction.
pub const FROM_ELEMENTS_CAP: usize = 5_000;

/// An element of a concrete finite group.
///
/// `op` is the group law (for permutations, `a.op(b)` is the composite
/// "apply `b` first, then `a`"). Implementations carry their own ambient
/// structure and must only be combined with elements of the same ambient;
/// constructors on [`ExplicitGroup`] enforce this.
pub trait GroupElem: Clone + Eq + Ord + std::hash::Hash + std::fmt::Debug + Send + Sync {
    /// The identity of the ambient group this element lives in.
    fn identity_like(&self) -> Self;
    /// The group law.
    fn op(&self, other: &Self) -> Self;
    /// The group inverse.
    fn inv(&self) -> Self;
    /// Whether two elements live in the same ambient group.
    fn same_ambient(&self, other: &Self) -> bool;
    /// Order of the ambient group (n! for S_n, |GL2(Z/m)| for matrices).
    fn ambient_order(&self) -> u128;
}

/// A finite group given by its full, deduplicated, sorted element list.
///
/// Closure under the group law and inverses is guaranteed on construction:
/// `closure` is closed by construction, `from_elements` validates all pairs.
/// The generator list is the one supplied to `closure`, or the full element
/// list for groups built from elements.
#[derive(Debug, Clone)]
pub struct ExplicitGroup<T: GroupElem> {
    elements: Vec<T>,
    generators: Vec<T>,
}

impl<T: GroupElem> PartialEq for ExplicitGroup<T> {
    fn eq(&self, other: &Self) -> bool {
        self.elements == other.elements
    }
}

impl<T: GroupElem> Eq for ExplicitGroup<T> {}

impl<T: GroupElem> ExplicitGroup<T> {
    /// Subgroup generated by `generators`: breadth-first product closure.
    ///
    /// Needs at least one generator (pass the identity for the trivial
    /// group). Fails with a resource error if the closure would exceed
    /// [`CLOSURE_GUARD`] elements.
    pub fn closure(generators: &[T]) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::Domain(
                "closure requires at least one generator".into(),
            ));
        }
        check_same_ambient(generators)?;
        let mut gens: Vec<T> = Vec::new();
        for g in generators {
            if !gens.contains(g) {
                gens.push(g.clone());
            }
        }
        let id = gens[0].identity_like();
        let mut seen: BTreeSet<T> = BTreeSet::new();
        seen.insert(id.clone());
        let mut queue: VecDeque<T> = VecDeque::new();
        queue.push_back(id);
        while let Some(x) = queue.pop_front() {
            for g in &gens {
                let y = x.op(g);
                if seen.insert(y.clone()) {
                    if seen.len() > CLOSURE_GUARD {
                        return Err(Error::Resource(format!(
                            "closure exceeded {CLOSURE_GUARD} elements"
                        )));
                    }
                    queue.push_back(y);
                }
            }
        }
        let group = ExplicitGroup {
            elements: seen.into_iter().collect(),
            generators: gens,
        };
        group.check_lagrange()?;
        Ok(group)
    }

    /// Builds a group from an explicit element list, validating that it
    /// contains the identity and is closed under the law and inverses.
    pub fn from_elements(elements: Vec<T>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::Domain("a group needs at least one element".into()));
        }
        check_same_ambient(&elements)?;
        let mut elements = elements;
        elements.sort();
        elements.dedup();
        if elements.len() > FROM_ELEMENTS_CAP {
            return Err(Error::Resource(format!(
                "from_elements validates all pairs and is capped at {FROM_ELEMENTS_CAP} \
                 elements; build large groups with closure"
            )));
        }
        let id = elements[0].identity_like();
        if elements.binary_search(&id).is_err() {
            return Err(Error::Domain("element list does not contain the identity".into()));
        }
        for a in &elements {
            if elements.binary_search(&a.inv()).is_err() {
                return Err(Error::Domain("element list is not closed under inverse".into()));
            }
            for b in &elements {
                if elements.binary_search(&a.op(b)).is_err() {
                    return Err(Error::Domain(
                        "element list is not closed under composition".into(),
                    ));
                }
            }
        }
        let generators = elements.clone();
        let group = ExplicitGroup { elements, generators };
        group.check_lagrange()?;
        Ok(group)
    }

    /// Trusted constructor for element lists that are closed by construction
    /// (table-driven subgroup search). Inputs must be sorted and deduplicated.
    pub(crate) fn from_parts_closed(elements: Vec<T>, generators: Vec<T>) -> Self {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(!elements.is_empty());
        debug_assert!(elements
            .binary_search(&elements[0].identity_like())
            .is_ok());
        ExplicitGroup { elements, generators }
    }

    fn check_lagrange(&self) -> Result<()> {
        let ambient = self.elements[0].ambient_order();
        if ambient % self.elements.len() as u128 != 0 {
            return Err(Error::Invariant(format!(
                "group order {} does not divide the ambient order {ambient}",
                self.elements.len()
            )));
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[T] {
        &self.elements
    }

    pub fn generators(&self) -> &[T] {
        &self.generators
    }

    pub fn identity(&self) -> T {
        self.elements[0].identity_like()
    }

    pub fn contains(&self, t: &T) -> bool {
        self.elements.binary_search(t).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &Self) -> bool {
        self.elements[0].same_ambient(&other.elements[0])
            && self.elements.iter().all(|t| other.contains(t))
    }
}

fn check_same_ambient<T: GroupElem>(elements: &[T]) -> Result<()> {
    for t in &elements[1..] {
        if !t.same_ambient(&elements[0]) {
            return Err(Error::Domain(
                "elements come from different ambient groups".into(),
            ));
        }
    }
    Ok(())
}

/// Commutator subgroup [G,G]: the subgroup generated by all commutators,
/// computed as the normal closure of the generator-pair commutators.
///
/// The fixpoint loop stops only when the generating set is stable under
/// conjugation by every generator of `g`, which makes the result normal;
/// the quotient is then abelian because the images of the generators of
/// `g` commute.
pub fn commutator_subgroup<T: GroupElem>(g: &ExplicitGroup<T>) -> Result<ExplicitGroup<T>> {
    if g.order() > COMMUTATOR_GUARD {
        return Err(Error::Resource(format!(
            "commutator_subgroup is capped at groups of order {COMMUTATOR_GUARD}"
        )));
    }
    let gens = g.generators();
    if gens.len() * gens.len() > 20_000_000 {
        return Err(Error::Resource(
            "too many generator pairs for commutator enumeration".into(),
        ));
    }
    let id = g.identity();
    let mut base: BTreeSet<T> = BTreeSet::new();
    for a in gens {
        let ai = a.inv();
        for b in gens {
            let c = a.op(b).op(&ai).op(&b.inv());
            if c != id {
                base.insert(c);
            }
        }
    }
    if base.is_empty() {
        return ExplicitGroup::closure(&[id]);
    }
    let mut kgens: Vec<T> = base.into_iter().collect();
    loop {
        let k = ExplicitGroup::closure(&kgens)?;
        let mut fresh: Vec<T> = Vec::new();
        for q in gens {
            let qi = q.inv();
            for x in &kgens {
                let c = q.op(x).op(&qi);
                if !k.contains(&c) && !fresh.contains(&c) {
                    fresh.push(c);
                }
            }
        }
        if fresh.is_empty() {
            debug_assert!(gens
                .iter()
                .all(|a| gens.iter().all(|b| k.contains(&a.op(b).op(&a.inv()).op(&b.inv())))));
            return Ok(k);
        }
        kgens.extend(fresh);
    }
}

/// delta(G, M) = |union over g of g M g^-1| / |G|, exact.
///
/// Requires M to be a subgroup of G. For proper M the value is strictly
/// below 1 (Jordan: the conjugates share the identity, so their union
/// cannot cover G); this is asserted, not assumed.
pub fn conjugacy_union_ratio<T: GroupElem>(
    g: &ExplicitGroup<T>,
    m: &ExplicitGroup<T>,
) -> Result<Ratio> {
    if !m.is_subgroup_of(g) {
        return Err(Error::Domain("M is not a subgroup of G".into()));
    }
    let mut union: HashSet<T> = HashSet::with_capacity(m.order());
    for x in g.elements() {
        let xi = x.inv();
        for y in m.elements() {
            let c = x.op(y).op(&xi);
            if !g.contains(&c) {
                return Err(Error::Invariant(
                    "conjugate escaped the ambient group".into(),
                ));
            }
            union.insert(c);
        }
    }
    if m.order() < g.order() && union.len() == g.order() {
        return Err(Error::Invariant(
            "conjugates of a proper subgroup covered the whole group".into(),
        ));
    }
    Ratio::new(union.len() as u64, g.order() as u64)
}

/// Index [G : H]. Requires H to be a subgroup of G.
pub fn index<T: GroupElem>(g: &ExplicitGroup<T>, h: &ExplicitGroup<T>) -> Result<u64> {
    if !h.is_subgroup_of(g) {
        return Err(Error::Domain("H is not a subgroup of G".into()));
    }
    if g.order() % h.order() != 0 {
        return Err(Error::Invariant(
            "subgroup order does not divide group order".into(),
        ));
    }
    Ok((g.order() / h.order()) as u64)
}

/// Exact value of 1 - sum_{i=0}^{n} (-1)^i / i!, the proportion of
/// permutations in S_n that fix at least one letter. Valid for 1 <= n <= 20.
pub fn derangement_delta(n: u32) -> Result<Ratio> {
    if n == 0 || n > 20 {
        return Err(Error::Range("derangement_delta needs 1 <= n <= 20".into()));
    }
    // D_k = (k-1)(D_{k-1} + D_{k-2}); 20! fits comfortably in u128.
    let mut d_prev: u128 = 1; // D_0
    let mut d_cur: u128 = 0; // D_1
    let mut fact: u128 = 1;
    for k in 1..=n as u128 {
        fact *= k;
        if k >= 2 {
            let d_next = (k - 1) * (d_cur + d_prev);
            d_prev = d_cur;
            d_cur = d_next;
        }
    }
    let num = fact - d_cur;
    let g = crate::arith::gcd_u128(num, fact);
    Ok(Ratio {
        num: (num / g) as u64,
        den: (fact / g) as u64,
    })
}

/// A nonnegative rational in lowest terms with a positive denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Ratio {
    num: u64,
    den: u64,
}

impl Ratio {
    pub const ZERO: Ratio = Ratio { num: 0, den: 1 };
    pub const ONE: Ratio = Ratio { num: 1, den: 1 };

    pub fn new(num: u64, den: u64) -> Result<Ratio> {
        if den == 0 {
            return Err(Error::Domain("ratio with zero denominator".into()));
        }
        if num == 0 {
            return Ok(Ratio::ZERO);
        }
        let g = crate::arith::gcd_u128(num as u128, den as u128) as u64;
        Ok(Ratio {
            num: num / g,
            den: den / g,
        })
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }
}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let lhs = self.num as u128 * other.den as u128;
        let rhs = other.num as u128 * self.den as u128;
        lhs.cmp(&rhs)
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3() -> ExplicitGroup<Perm> {
        symmetric_group(3).unwrap()
    }

    #[test]
    fn closure_of_standard_s3_generators_has_six_elements() {
        let t = Perm::from_cycles(3, &[&[0, 1]]).unwrap();
        let c = Perm::from_cycles(3, &[&[0, 1, 2]]).unwrap();
        let g = ExplicitGroup::closure(&[t, c]).unwrap();
        assert_eq!(g.order(), 6);
    }

    #[test]
    fn closure_of_identity_is_trivial() {
        let g = ExplicitGroup::closure(&[Perm::identity(4).unwrap()]).unwrap();
        assert_eq!(g.order(), 1);
        assert!(g.contains(&Perm::identity(4).unwrap()));
    }

    #[test]
    fn closure_rejects_empty_and_mixed_generators() {
        assert!(matches!(
            ExplicitGroup::<Perm>::closure(&[]),
            Err(Error::Domain(_))
        ));
        let a = Perm::identity(3).unwrap();
        let b = Perm::identity(4).unwrap();
        assert!(matches!(
            ExplicitGroup::closure(&[a, b]),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn closure_is_idempotent() {
        let t = Perm::from_cycles(4, &[&[0, 1]]).unwrap();
        let c = Perm::from_cycles(4, &[&[1, 2, 3]]).unwrap();
        let g = ExplicitGroup::closure(&[t, c]).unwrap();
        let again = ExplicitGroup::closure(g.elements()).unwrap();
        assert_eq!(g, again);
    }

    #[test]
    fn from_elements_validates_closure() {
        let id = Perm::identity(3).unwrap();
        let t = Perm::from_cycles(3, &[&[0, 1]]).unwrap();
        let g = ExplicitGroup::from_elements(vec![id.clone(), t.clone()]).unwrap();
        assert_eq!(g.order(), 2);

        let c = Perm::from_cycles(3, &[&[0, 1, 2]]).unwrap();
        assert!(matches!(
            ExplicitGroup::from_elements(vec![id.clone(), c]),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            ExplicitGroup::from_elements(vec![t]),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            ExplicitGroup::<Perm>::from_elements(vec![]),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn commutator_of_s3_is_a3() {
        let k = commutator_subgroup(&s3()).unwrap();
        assert_eq!(k.order(), 3);
        assert!(k.elements().iter().all(|p| p.is_even()));
        assert_eq!(k, alternating_group(3).unwrap());
    }

    #[test]
    fn commutator_of_abelian_group_is_trivial() {
        let c6 = ExplicitGroup::closure(&[Perm::from_cycles(6, &[&[0, 1, 2, 3, 4, 5]]).unwrap()])
            .unwrap();
        assert_eq!(c6.order(), 6);
        let k = commutator_subgroup(&c6).unwrap();
        assert_eq!(k.order(), 1);
    }

    #[test]
    fn commutator_is_normal_with_abelian_quotient() {
        for g in [s3(), symmetric_group(4).unwrap(), alternating_group(4).unwrap()] {
            let k = commutator_subgroup(&g).unwrap();
            for x in g.elements() {
                let xi = x.inv();
                for h in k.elements() {
                    assert!(k.contains(&x.op(h).op(&xi)));
                }
                for y in g.elements() {
                    let c = x.op(y).op(&xi).op(&y.inv());
                    assert!(k.contains(&c));
                }
            }
        }
    }

    #[test]
    fn conjugacy_union_ratio_for_s3_transposition_is_two_thirds() {
        let m = ExplicitGroup::closure(&[Perm::from_cycles(3, &[&[0, 1]]).unwrap()]).unwrap();
        let r = conjugacy_union_ratio(&s3(), &m).unwrap();
        assert_eq!(r, Ratio::new(2, 3).unwrap());
    }

    #[test]
    fn conjugacy_union_ratio_of_whole_group_is_one() {
        let g = s3();
        let r = conjugacy_union_ratio(&g, &g).unwrap();
        assert!(r.is_one());
    }

    #[test]
    fn conjugacy_union_ratio_for_s4_point_stabilizer_is_five_eighths() {
        let g = symmetric_group(4).unwrap();
        let m = point_stabilizer(&g, 0).unwrap();
        assert_eq!(m.order(), 6);
        let r = conjugacy_union_ratio(&g, &m).unwrap();
        assert_eq!(r, Ratio::new(5, 8).unwrap());
    }

    #[test]
    fn conjugacy_union_ratio_rejects_non_subgroups() {
        let g = s3();
        let m = ExplicitGroup::closure(&[Perm::from_cycles(4, &[&[0, 1]]).unwrap()]).unwrap();
        assert!(matches!(
            conjugacy_union_ratio(&g, &m),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn derangement_delta_small_values() {
        assert_eq!(derangement_delta(1).unwrap(), Ratio::ONE);
        assert_eq!(derangement_delta(3).unwrap(), Ratio::new(2, 3).unwrap());
        assert_eq!(derangement_delta(4).unwrap(), Ratio::new(5, 8).unwrap());
        assert!(matches!(derangement_delta(0), Err(Error::Range(_))));
        assert!(matches!(derangement_delta(21), Err(Error::Range(_))));
    }

    #[test]
    fn derangement_recurrence_matches_alternating_sum() {
        // Independent route: n! * sum_{i=0}^n (-1)^i / i! summed exactly.
        for n in 1..=20u32 {
            let mut fact: u128 = 1;
            for k in 2..=n as u128 {
                fact *= k;
            }
            let mut term: i128 = fact as i128; // n!/0!
            let mut deranged: i128 = 0;
            for i in 0..=n as i128 {
                deranged += if i % 2 == 0 { term } else { -term };
                if i < n as i128 {
                    term /= i + 1;
                }
            }
            let fixed = fact as i128 - deranged;
            let expect = Ratio::new(fixed as u64, fact as u64).unwrap();
            assert_eq!(derangement_delta(n).unwrap(), expect, "n={n}");
        }
    }

    #[test]
    fn derangement_delta_matches_conjugacy_union_through_n5() {
        for n in 2..=5usize {
            let g = symmetric_group(n).unwrap();
            let m = point_stabilizer(&g, 0).unwrap();
            let r = conjugacy_union_ratio(&g, &m).unwrap();
            assert_eq!(r, derangement_delta(n as u32).unwrap(), "n={n}");
        }
    }

    #[test]
    fn jordan_ratio_below_one_for_all_proper_subgroups_of_s4() {
        let g = symmetric_group(4).unwrap();
        for m in all_subgroups(4).unwrap() {
            let r = conjugacy_union_ratio(&g, &m).unwrap();
            if m.order() < g.order() {
                assert!(r < Ratio::ONE, "order {} gave {}", m.order(), r);
            } else {
                assert!(r.is_one());
            }
        }
    }

    #[test]
    fn index_examples() {
        let g = symmetric_group(4).unwrap();
        let a4 = alternating_group(4).unwrap();
        assert_eq!(index(&g, &a4).unwrap(), 2);
        assert_eq!(index(&g, &g).unwrap(), 1);
        let h = ExplicitGroup::closure(&[Perm::from_cycles(3, &[&[0, 1]]).unwrap()]).unwrap();
        assert!(matches!(index(&g, &h), Err(Error::Domain(_))));
    }

    #[test]
    fn ratio_reduces_orders_and_prints() {
        let r = Ratio::new(16, 24).unwrap();
        assert_eq!((r.num(), r.den()), (2, 3));
        assert_eq!(r.to_string(), "2/3");
        assert!(Ratio::new(1, 2).unwrap() < Ratio::new(2, 3).unwrap());
        assert!(Ratio::new(7, 12).unwrap() < Ratio::new(2, 3).unwrap());
        assert!(matches!(Ratio::new(1, 0), Err(Error::Domain(_))));
        assert_eq!(Ratio::new(0, 7).unwrap(), Ratio::ZERO);
    }
}
