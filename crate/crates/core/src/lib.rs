//! Entanglement and coherence rate regions for incoherent quantum state
//! merging, with exact small-block simulations of the merging protocols.

pub mod channels;
pub mod coding;
pub mod error;
pub mod info;
pub mod linalg;
pub mod protocols;
pub mod qstate;
pub mod rates;
pub mod statezoo;

pub use error::{Error, Result};

/// Default cap on enumerated entries (amplitudes, source pairs).
pub const DEFAULT_BUDGET: usize = 1 << 21;
