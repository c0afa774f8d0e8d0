//! Exact linear algebra: Smith normal form, fiber ranks, determinantal
//! divisors and linear solving.

pub mod divisors;
pub mod field;
pub mod snf;
pub mod solve;

pub use divisors::{determinant, determinantal_divisors};
pub use field::rank_over_fiber;
pub use snf::{snf, SnfDecomposition};
pub use solve::{image_generators, kernel_generators, ring_rank, solve_integral};
