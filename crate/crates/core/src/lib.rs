//! Exact-integer tools for pruned bit-reversal and related interleavers.
//!
//! * [`perm`]: permutations, descriptors and composite interleavers
//! * [`sums`]: saw-tooth and floor sums with logarithmic recursions
//! * [`inliers`]: `(α, β)`-inlier counts, fast and by enumeration
//! * [`stats`]: closed-form permutation statistics
//! * [`pruning`]: serial and parallel pruned interleaving, gap solving
//! * [`banking`]: contention-free memory bank schedules
//! * [`bench`] and [`cli`]: the benchmark harness and command-line front end

pub mod arith;
pub mod banking;
pub mod bench;
pub mod cli;
pub mod error;
pub mod inliers;
pub mod perm;
pub mod pruning;
pub mod stats;
pub mod sums;

pub use error::{Error, Result};
pub use inliers::{FastCounter, InlierCounter, ScanCounter};
pub use perm::{parse_descriptor, PermSize, Permutation};
