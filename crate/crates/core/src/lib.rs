//! Exact-arithmetic toolkit for dimension-at-scale of finite metric
//! spaces.
//!
//! The crate is organized around a pipeline:
//!
//! * [`metric`] — finite metric spaces with exact rational distances,
//!   canonical generators, nets, capacities, quotient pseudometrics;
//! * [`cover`] — colored covers at a scale, dimension-at-scale estimates
//!   with a brute-force oracle, cover ladders and their verifier, the
//!   Nagata and Higson checkers;
//! * [`tree`] — filtered trees glued from a cover ladder, the scalar maps
//!   driving the gluing, product embeddings, skeleton membership, short
//!   arcwise paths and separator candidates;
//! * [`zerodim`] — the ternary set, its block decompositions and the
//!   universal embedding for zero-dimensional-at-scale spaces;
//! * [`distortion`] — affine Lipschitz fits, distance-bin envelopes and
//!   bornotopy checks certifying the maps above;
//! * [`io`] — exact JSON/CSV wire formats for every artifact.
//!
//! No floating point anywhere: distances, scales and map values are
//! rationals, and all checks are tolerance-zero.

pub mod graph;
pub mod metric;
pub mod rational;
