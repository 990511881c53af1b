//! Self-assembly workbench for the abstract Tile Assembly Model (aTAM) and
//! its dupled extension (DaTAM).
//!
//! The crate simulates seeded tile systems with square tiles and duples,
//! recognizes compact zig-zag systems, compiles them into temperature-1
//! duple systems that simulate the original at macrotile scale, checks
//! bounded simulation equivalence, and mechanizes window-movie splicing and
//! pumping arguments. A gallery of generators builds the concrete systems
//! the analyses are exercised on.

pub mod assembly;
pub mod compiler;
pub mod engine;
pub mod error;
pub mod format;
pub mod frontier;
pub mod gallery;
pub mod geom;
pub mod hash;
pub mod palindrome;
pub mod render;
pub mod repr;
pub mod rng;
pub mod simcheck;
pub mod stability;
pub mod tile;
pub mod window;
pub mod zigzag;

pub use assembly::{Assembly, Cell, Placement};
pub use engine::{
    enumerate_producibles, is_directed_bounded, is_terminal, run, step, strictly_self_assembles,
    AssemblySequence, Bounds, ProducibleSet, SchedulerPolicy, Verdict,
};
pub use error::{Error, Result};
pub use frontier::{frontier, validate_placement, FrontierSet};
pub use geom::{Axis, Direction, Pos, Shape};
pub use stability::is_tau_stable;
pub use tile::{DupleId, DupleType, Glue, TileId, TileSystem, TileType};
