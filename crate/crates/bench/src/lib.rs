//! Validation and reporting on top of `rvcrypt-core`: known-answer vectors,
//! randomized differential runs, the cycle table and derived efficiency and
//! speedup reports.

pub mod published;
pub mod report;
pub mod suite;
pub mod vectors;
