//! Point-line incidence configurations: exact projective geometry, the
//! algebraic degree obstruction, forbidden-pattern search and the random
//! deletion construction for subdivided cliques.

pub mod algebra;
pub mod configurations;
pub mod lowerbound;
pub mod patterns;
pub mod projective;
