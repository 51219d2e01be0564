//! Shape inference over sample documents and the type-provider translation.

pub mod access;
pub mod data;
pub mod foo;
pub mod harness;
pub mod inference;
pub mod ingest;
pub mod pipeline;
pub mod provider;
pub mod shapes;
