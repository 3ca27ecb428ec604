//! Exact polynomial arithmetic over the rationals.

mod gcd;
mod multi;
mod parse;
mod simple;
mod uni;

pub use gcd::{coprime, gcd};
pub use multi::{grlex, Exponent, MultiPoly};
pub use parse::{parse_factored, parse_factored_uni, parse_poly, parse_unipoly};
pub use simple::{detect_simple, find_nonzero_in_box, primitive_direction, primitive_int, Simple};
pub use uni::{Roots, UniPoly};
