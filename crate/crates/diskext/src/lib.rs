//! Disk systems on graphs: covers, enlargement operations, minors and
//! local planarity.

pub mod catalog;
pub mod connectivity;
pub mod disk_system;
pub mod enlarge;
pub mod enumerate;
pub mod error;
pub mod graph_core;
pub mod iso;
pub mod local_planarity;
pub mod minor;
pub mod replay;
mod planarity;
mod util;

pub use error::{Error, Result};
pub use graph_core::{Cycle, Edge, Graph, Label};
