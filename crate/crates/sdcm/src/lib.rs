//! File formats, the golden corpus and the command line for `sdcm-core`.

pub mod cli;
pub mod corpus;
pub mod format;
