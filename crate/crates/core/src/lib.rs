//! Signed graphs, bidirected nowhere-zero flows, and constructive 6-flow builders.

pub mod admissibility;
pub mod cayley;
pub mod certificate;
pub mod flow;
pub mod generators;
pub mod graph;
pub mod io;
pub mod ladders;
pub mod oracle;
pub mod reduction;
pub mod search;
pub mod sixflow;
pub mod templates;
pub mod trace;
