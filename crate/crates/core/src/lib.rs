pub mod fan;
pub mod graph;
pub mod lattice;
pub mod paper;
pub mod inertia;
pub mod surgery;
pub mod recession;
pub mod io;
pub mod certify;
