//! Exact combinatorial models for degenerating abelian differentials.
//!
//! The crate works entirely over arbitrary-precision integers. It models the
//! boundary data of a stratum of differentials as a weighted dual graph
//! (contact orders on nodes, a degeneracy partition of the components),
//! builds the minimal characteristic monoid of such a graph inside an exact
//! integer lattice, and answers the discrete questions that the monoid
//! controls: which twisted structures a graph admits, the zero/pole orders
//! induced on each component, the parity of the spin structure for even
//! signatures, and the quotient bookkeeping of a hyperelliptic involution.
//!
//! Modules:
//!
//! * [`intlat`] — Smith normal form, torsion-free quotients, cone
//!   saturation and Hilbert bases over `BigInt`.
//! * [`stablegraph`] — dual graphs of marked nodal curves with genus
//!   bookkeeping and involutions.
//! * [`twist`] — twisted structures: orientations, contact orders,
//!   degeneracy partitions, and their enumeration.
//! * [`minmonoid`] — the minimal monoid of a weighted graph and its
//!   hyperelliptic quotients, in two independent presentations.
//! * [`diffdata`] — induced zero/pole orders and chart rescaling.
//! * [`spin`] — spin degrees and exact parity on rational-component models.
//! * [`hyper`] — hyperelliptic signatures, admissible-cover checks, and the
//!   quadratic pushforward.
//! * [`json`] — the wire format shared with the command-line front end.

pub mod diffdata;
pub mod hyper;
pub mod intlat;
pub mod json;
pub mod minmonoid;
pub mod spin;
pub mod stablegraph;
pub mod twist;

#[cfg(test)]
pub(crate) mod testutil;

pub use intlat::{AffineMonoid, IntMatrix, Lattice};
pub use minmonoid::{MSymbol, MinimalMonoid};
pub use stablegraph::{GraphInvolution, Signature, StableGraph};
pub use twist::{EdgeOrientation, TwistedStructure, WeightedGraph};
