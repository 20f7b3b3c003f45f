//! Spectral peeling: grid boxes over a target spectrum, a removal plan that
//! keeps the remainder connected, and synthesis of a normal/nilpotent pair.

pub mod fit;
pub mod grid;
pub mod plan;
pub mod synth;

pub use fit::{fit_path_poly, PathFit, DEFAULT_MAX_DEGREE};
pub use grid::{articulation_points, boxify, good_boxes, is_connected, BoxSet, GridBox};
pub use plan::{plan, validate_plan, Plan, PlanStep};
pub use synth::{synth_pair, PairBlock, PairWitness};
