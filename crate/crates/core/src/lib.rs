//! Simulation and analysis of entanglement and EPR steering between imaged
//! regions of a spin-squeezed atomic cloud.

pub mod spin;
pub mod imaging;
pub mod regions;
pub mod criteria;
pub mod harness;
