//! Elliptic Dedekind (Sczech) sums over Q(√−D), D ∈ {2, 7, 11}, computed
//! exactly through Hurwitz continued fractions, together with the numerical
//! machinery used to study their distribution: Farey-set enumeration,
//! distributional statistics, and an Ulam discretization of the transfer
//! operator of the Hurwitz map.

pub mod dynamics;
pub mod farey;
pub mod hurwitz_cf;
pub mod quad_ring;
pub mod sczech;
pub mod stats;

pub use quad_ring::{BasisKind, Coord, DomainPoint, KElem, QuadInt, Region, RingError, RingSpec};
