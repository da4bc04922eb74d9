//! Chimera hardware graphs, minor embedding and readout through chains.

mod embed;
mod graph;
mod instance;

pub use embed::{find_embedding, logical_adjacency, EmbedOptions, EmbeddingStats, MinorEmbedding};
pub use graph::ChimeraGraph;
pub use instance::{default_chain_strength, embed_instance, unembed, CouplerPlacement, EmbeddedInstance};
