//! Quadrature, scalar minimization, root finding and the supremum over scales.

pub mod minimize;
pub mod quad;
pub mod roots;
pub mod tsup;

pub use minimize::{maximize_scan_golden, minimize_scan_golden, minimize_unimodal, try_minimize, Minimum};
pub use quad::{integrate, try_integrate, QuadConfig, QuadResult};
pub use roots::{solve_pd_root, CubePolynomial};
pub use tsup::{sup_over_t, TGrid, TSup};
