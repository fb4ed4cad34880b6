//! Linear and convex quadratic programming.

mod lp;
mod qp;

pub use lp::{solve_lp, LpError, LpProblem, LpStatus, FEASIBILITY_TOL};
pub use qp::{solve_qp, QpError, QpProblem, QpSolution};
