mod accum;
pub mod convergence;
pub mod integrator;
pub mod methods;
pub mod poly;
pub mod problems;
pub mod quadrature;
pub mod tableau;
