//! Exact Rényi entropies of D-dimensional hydrogenic stationary states.

pub mod cli;
pub mod entropy;
pub mod exactnum;
pub mod hyperfun;
pub mod oracle;
pub mod polynomials;
pub mod quadrature;
pub mod states;
