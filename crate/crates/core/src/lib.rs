//! Exact computer algebra for twisted toroidal Lie algebras, their induced modules,
//! and the vertex operators those modules carry.

pub mod formal;
pub mod liealg;
pub mod report;
pub mod repn;
pub mod scalars;
pub mod toroidal;
pub mod verify;
pub mod vertexops;
