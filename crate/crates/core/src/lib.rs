//! Synthetic LP benchmark ladders, a restarted PDHG solver, and power-law
//! runtime regression.

pub mod fit;
pub mod gen;
pub mod harness;
pub mod lp;
pub mod lpfile;
pub mod par;
pub mod pdhg;
pub mod presolve;
pub mod report;
pub mod simplex;
