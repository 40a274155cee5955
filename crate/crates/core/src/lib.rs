//! Exact maximum dynamic flows and minimum dynamic cuts in networks whose
//! capacities and transit times are piecewise-constant functions of time.

pub mod dynamic;
pub mod error;
pub mod gadgets;
pub mod io;
pub mod network;
pub mod numeric;
pub mod oracle;
pub mod piecewise;
pub mod static_maxflow;
pub mod temporally_repeated;

pub use error::{Error, Result};
pub use network::{DynamicNetwork, Edge, Horizon, NetworkBuilder, PartitionInstance};
pub use numeric::Rational;
pub use piecewise::PiecewiseConstantFn;
