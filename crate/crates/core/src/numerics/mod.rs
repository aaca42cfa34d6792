//! Numerical kernels shared by the higher-level modules: stable special
//! functions, adaptive 1-D quadrature, bracketed root finding, scalar
//! minimization, and Gauss-Hermite rules.

pub mod golden;
pub mod hermite;
pub mod quad;
pub mod root;
pub mod special;
pub mod sum;
