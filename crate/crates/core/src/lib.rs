//! Finite, checkable models of ample étale groupoids.
//!
//! The modules build explicit finite truncations of groupoid constructions
//! (partial transformation groupoids, HLS and AFS groupoids, Deaconu–Renault
//! groupoids of graphs and k-graphs, coarse groupoids), run the constructive
//! correspondences between them and emit certificates that can be replayed.

pub mod coarse;
pub mod dr;
pub mod gpd;
pub mod grp;
pub mod hls;
pub mod kzero;
pub mod pact;
