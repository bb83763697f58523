//! Exact integer, rational, polynomial, matrix and number-field arithmetic.

mod charpoly;
mod factor;
mod field;
mod lattice;
mod matrix;
mod poly;
mod roots;

pub use charpoly::{
    charpoly, charpoly_rat_matrix, companion_matrix, minpoly_matrix, minpoly_rat_matrix,
    row_sum_bound,
};
pub use factor::{
    divisors, factor_squarefree_then_irreducible, factor_with_cap, prime_support,
    DEFAULT_DEGREE_CAP,
};
pub use field::{fmt_decimal, rat_to_f64, AlgebraicNumber, NumberField};
pub use lattice::{
    column_basis, determinant, eventual_image, hnf, integer_combination, primitive_integer,
    reduced_resultant, resultant, row_hnf, sylvester_matrix, BezoutWitness,
};
pub use matrix::{inverse, nullspace, rank, rref, solve, FieldElem, IntMatrix, Matrix, RatMatrix};
pub use poly::{squarefree_decomposition, squarefree_part, IntPoly, RatPoly};
pub use roots::{
    all_roots_in_closed_unit_disk, cauchy_bound, count_modulus_above, count_roots,
    isolate_real_roots, refine_once, refine_to, roots_inside_unit_disk, second_modulus_interval,
    sturm_sequence, Interval,
};

/// Rational vector.
pub type RatVector = Vec<num_rational::BigRational>;
