//! Desk-scale computational number theory.
//!
//! The centerpiece is the larger sieve for rational and integral points,
//! alongside explicit irreducibility bounds and a family of brute-force
//! census experiments: Galois groups of random polynomials, Serre-style
//! surjectivity counts in GL2 over prime fields, elliptic-curve
//! certification sweeps, orbit periods of polynomial maps mod p, and
//! character-sum equidistribution. Everything is exact or explicitly
//! seeded so every number in a report can be reproduced.

pub mod arith;
pub mod bounds;
pub mod charsum;
pub mod dynamics;
pub mod elliptic;
pub mod error;
pub mod galois;
pub mod groups;
pub mod heights;
pub mod serre;
pub mod sieve;

pub use arith::{FactorShape, FpPoly, IntPoly};
pub use bounds::{CoverBoundInput, HitBound};
pub use charsum::{DeviationReport, QuadCoverInstance, ScanReport};
pub use dynamics::{DensityProfile, HeightGrowth, OrbitRecord, PolyMap};
pub use error::{Error, Result};
pub use elliptic::{Certification, CurveQ, FamilySpec, FrobData};
pub use galois::{CensusMode, CensusReport, GaloisLabel, QuarticClass};
pub use groups::{ExplicitGroup, GroupElem, Mat2, Perm, Ratio};
pub use heights::{IntPoint, ProjPoint};
pub use serre::SerreClass;
pub use sieve::{PointSet, SieveBound, SieveInstance};
