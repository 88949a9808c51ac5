//! Permutations of {0, .., n-1} and the standard S_n / A_n constructions.

use crate::error::{Error, Result};
use crate::groups::{ExplicitGroup, GroupElem};

/// Largest supported degree. Keeps n! inside u128 with room to spare and
/// matches the cap on exact derangement arithmetic.
pub const MAX_DEGREE: usize = 20;

/// Explicit symmetric groups are enumerated in full, so their degree is
/// capped well below [`MAX_DEGREE`].
pub const MAX_ENUMERATED_DEGREE: usize = 8;

/// A permutation of {0, .., n-1}, stored as its image table.
///
/// Ordering and equality are lexicographic on the image table, which gives
/// the canonical element order used by [`ExplicitGroup`].
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm {
    images: Vec<u8>,
}

impl Perm {
    /// The identity permutation on n letters, 1 <= n <= [`MAX_DEGREE`].
    pub fn identity(n: usize) -> Result<Perm> {
        if n == 0 || n > MAX_DEGREE {
            return Err(Error::Range(format!(
                "permutation degree must be in 1..={MAX_DEGREE}"
            )));
        }
        Ok(Perm {
            images: (0..n as u8).collect(),
        })
    }

    /// Builds a permutation from its image table, validating bijectivity.
    pub fn new(images: Vec<u8>) -> Result<Perm> {
        let n = images.len();
        if n == 0 || n > MAX_DEGREE {
            return Err(Error::Range(format!(
                "permutation degree must be in 1..={MAX_DEGREE}"
            )));
        }
        let mut seen = [false; MAX_DEGREE];
        for &i in &images {
            if (i as usize) >= n || seen[i as usize] {
                return Err(Error::Domain("image table is not a bijection".into()));
            }
            seen[i as usize] = true;
        }
        Ok(Perm { images })
    }

    /// The product of the given cycles on n letters (disjoint or not;
    /// rightmost cycle applies first). `&[&[0, 1, 2]]` maps 0 to 1.
    pub fn from_cycles(n: usize, cycles: &[&[u8]]) -> Result<Perm> {
        let mut acc = Perm::identity(n)?;
        for cycle in cycles.iter().rev() {
            let mut images: Vec<u8> = (0..n as u8).collect();
            for (k, &a) in cycle.iter().enumerate() {
                let b = cycle[(k + 1) % cycle.len()];
                if a as usize >= n || b as usize >= n {
                    return Err(Error::Domain("cycle entry out of range".into()));
                }
                if images[a as usize] != a && cycle.len() > 1 {
                    return Err(Error::Domain("repeated entry within a cycle".into()));
                }
                images[a as usize] = b;
            }
            let c = Perm::new(images)?;
            acc = c.op(&acc);
        }
        Ok(acc)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    pub fn images(&self) -> &[u8] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i == v as usize)
    }

    /// Parity: even iff the permutation is a product of an even number of
    /// transpositions, computed from the cycle decomposition.
    pub fn is_even(&self) -> bool {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut transpositions = 0usize;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0usize;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.apply(i);
                len += 1;
            }
            transpositions += len - 1;
        }
        transpositions % 2 == 0
    }
}

impl GroupElem for Perm {
    fn identity_like(&self) -> Self {
        Perm {
            images: (0..self.degree() as u8).collect(),
        }
    }

    /// Function composition: `a.op(b)` sends i to a(b(i)).
    fn op(&self, other: &Self) -> Self {
        debug_assert_eq!(self.degree(), other.degree());
        Perm {
            images: other.images.iter().map(|&i| self.images[i as usize]).collect(),
        }
    }

    fn inv(&self) -> Self {
        let mut images = vec![0u8; self.degree()];
        for (i, &v) in self.images.iter().enumerate() {
            images[v as usize] = i as u8;
        }
        Perm { images }
    }

    fn same_ambient(&self, other: &Self) -> bool {
        self.degree() == other.degree()
    }

    fn ambient_order(&self) -> u128 {
        (1..=self.degree() as u128).product()
    }
}

/// The full symmetric group S_n as an explicit group, n <= 8.
pub fn symmetric_group(n: usize) -> Result<ExplicitGroup<Perm>> {
    if n == 0 || n > MAX_ENUMERATED_DEGREE {
        return Err(Error::Range(format!(
            "explicit symmetric groups are capped at degree {MAX_ENUMERATED_DEGREE}"
        )));
    }
    if n == 1 {
        return ExplicitGroup::closure(&[Perm::identity(1)?]);
    }
    let t = Perm::from_cycles(n, &[&[0, 1]])?;
    let cycle: Vec<u8> = (0..n as u8).collect();
    let c = Perm::from_cycles(n, &[&cycle])?;
    ExplicitGroup::closure(&[t, c])
}

/// The alternating group A_n as an explicit group, n <= 8.
pub fn alternating_group(n: usize) -> Result<ExplicitGroup<Perm>> {
    if n == 0 || n > MAX_ENUMERATED_DEGREE {
        return Err(Error::Range(format!(
            "explicit alternating groups are capped at degree {MAX_ENUMERATED_DEGREE}"
        )));
    }
    if n <= 2 {
        return ExplicitGroup::closure(&[Perm::identity(n)?]);
    }
    let three = Perm::from_cycles(n, &[&[0, 1, 2]])?;
    if n == 3 {
        return ExplicitGroup::closure(&[three]);
    }
    // A 3-cycle plus a long even cycle generate A_n: the full n-cycle when
    // n is odd, the (n-1)-cycle fixing 0 when n is even.
    let cycle: Vec<u8> = if n % 2 == 1 {
        (0..n as u8).collect()
    } else {
        (1..n as u8).collect()
    };
    let c = Perm::from_cycles(n, &[&cycle])?;
    ExplicitGroup::closure(&[three, c])
}

/// The stabilizer of `point` inside `g`.
pub fn point_stabilizer(g: &ExplicitGroup<Perm>, point: usize) -> Result<ExplicitGroup<Perm>> {
    let n = g.identity().degree();
    if point >= n {
        return Err(Error::Domain(format!("point {point} is not moved by S_{n}")));
    }
    let fixed: Vec<Perm> = g
        .elements()
        .iter()
        .filter(|p| p.apply(point) == point)
        .cloned()
        .collect();
    ExplicitGroup::from_elements(fixed)
}

/// Whether `g` acts transitively on its letters: the orbit of 0 under the
/// generators covers everything. Generator images suffice because every
/// element of a finite group is a positive power word in the generators.
pub fn is_transitive(g: &ExplicitGroup<Perm>) -> bool {
    let n = g.identity().degree();
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut count = 1usize;
    while let Some(i) = stack.pop() {
        for p in g.generators() {
            let j = p.apply(i);
            if !seen[j] {
                seen[j] = true;
                count += 1;
                stack.push(j);
            }
        }
    }
    count == n
}
