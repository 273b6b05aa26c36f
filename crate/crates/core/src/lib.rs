//! Asymmetry-based quantifiers of quantum reference frames in bipartite
//! systems, and a Page-Wootters clock simulator.
//!
//! Entropies are measured in bits throughout.

pub mod cli;
pub mod error;
pub mod measures;
pub mod pwc;
pub mod qmat;
pub mod symmetry;

pub use error::{QrfError, Result};
