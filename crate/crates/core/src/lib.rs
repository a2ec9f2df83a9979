//! Computable horocyclic products.
//!
//! The crate models the homogeneous tree `T_p` hanging from a reference end,
//! the Diestel-Leader graphs `DL(p,q)`, the lamplighter groups `Z_p wr Z`,
//! treebolic space `HT(p,q)` and the solvable Lie group `Sol(p,q)`, together
//! with independent oracles (breadth-first search, brute-force grids,
//! discretized path lengths) that check every closed formula.
//!
//! All values are immutable after construction and every operation is a pure
//! function, so everything here is safe to share across threads.

pub mod bfs;
pub mod dl;
pub mod error;
pub mod hyperbolic;
pub mod lattices;
pub mod sol;
pub mod tree;
pub mod treebolic;
pub mod verify;
pub mod walks;
pub mod wreath;

pub use bfs::Ball;
pub use dl::{AEl, DlBoundaryPoint, DlGraph, DlVertex, Limit};
pub use error::{Error, Result};
pub use hyperbolic::{AffHEl, HPoint, LogPlane, LogPoint, SlicedPlane};
pub use lattices::{BsEl, EigenData, IntMat2, SdEl};
pub use sol::{Sol, SolEl, SolPath, UpperEstimate};
pub use tree::{SubtreeSwap, Tree, TreeEnd, TreePoint, TreeTarget, TreeVertex};
pub use treebolic::{BEl, BoundReport, HtPoint, Treebolic};
pub use walks::{WalkConfig, WalkSpace, WalkStats};
pub use wreath::{Config, LampEl, Lamplighter};
