//! Exact computations around the cohomology of the Lie algebra of formal
//! vector fields on the line vanishing to second order.

pub mod cochain;
pub mod envelope;
pub mod exactnum;
pub mod liealg;
pub mod massey;
pub mod resolution;
pub mod suites;
pub mod threadmod;
pub mod verma;
