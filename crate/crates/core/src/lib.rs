//! Simulation engine for the driven nondegenerate multiphoton Jaynes–Cummings
//! model: operator construction, unitary and Lindblad dynamics, steady states,
//! correlation functions and quantum-jump trajectories.

pub mod linalg;
pub mod model;
pub mod dynamics;
pub mod observables;
pub mod trajectories;
