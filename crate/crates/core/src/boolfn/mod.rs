//! Representations of Boolean functions on `{±1}^n`: hypercube points, truth
//! tables, halfspaces, AND/OR composites, and unateness analysis.

mod composite;
mod ltf;
mod orientation;
mod point;
mod table;

pub use composite::{Combiner, CompositeSpec, Term};
pub use ltf::LinearThresholdFunction;
pub use orientation::{normalize_increasing, orientation, CoordOrientation, Orientation};
pub use point::{HypercubePoint, SignVector, MAX_POINT_DIM};
pub use table::{TruthTable, MAX_TABLE_DIM};

pub(crate) use table::{xor_permute_word, HALF_MASK};
