//! Hyperbolic geometry, free-group words, fiber representations of
//! punctured-torus bundles, coarse geometry of finite graphs, and ladders in
//! synthetic split-geometry models.

pub mod hyp;
pub mod words;
pub mod kleinian;
pub mod lamination;
pub mod coarse;
pub mod ladder;
