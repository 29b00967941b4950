//! Concrete protocols with native decoders.

pub mod and_or;
pub mod block_code;
pub mod catalog;
pub mod iterated;
pub mod syndrome;
pub mod zeros;

pub use and_or::{and_or_protocol, ceil_sqrt, BlockPartition};
pub use block_code::{BlockCodeParams, BlockCodeProtocol};
pub use catalog::{catalog, ProtocolConfig};
pub use iterated::{default_schedule, IteratedParams, IteratedProtocol, LevelInfo};
pub use syndrome::{ceil_log2, syndrome_protocol, SyndromeParams};
pub use zeros::zeros_protocol;
