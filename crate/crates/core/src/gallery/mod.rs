//! Generators for the concrete systems used throughout the analyses.

pub mod compose;
pub mod counters;
pub mod flagpole;
pub mod planter;
pub mod shape_w;
pub mod square;

pub use counters::{make_counter_exact_height, make_gn_staircase, make_zigzag_counter, Orientation};
pub use flagpole::make_finger_flagpole;
pub use planter::make_planter_system;
pub use shape_w::{make_s8_system, make_shape_w_system};
pub use square::{make_square_system, make_square_zigzag};
