//! Exact scalars, sparse monomials, term orders, and multivariate polynomials.
//!
//! Key operations
//! --------------
//! * [`Field`] / [`Scalar`] — the coefficient field ℚ or 𝔽ₚ and its exact
//!   elements; all arithmetic is checked and exact.
//! * [`Monomial`] — sparse exponent vectors with divisibility, lcm, quotient.
//! * [`MonomialOrder`] — lex, graded reverse lex, and block (elimination)
//!   orders; [`MonomialOrder::cmp_mono`] is the single comparison entry point.
//! * [`Ring`] — a named polynomial ring over a field; cheap to clone, compared
//!   by content (pointer fast path).
//! * [`Polynomial`] — immutable sparse polynomials with ring-checked
//!   arithmetic, substitution, and deterministic printing.
//! * [`Polynomial::parse`] — the expression grammar
//!   `expr := term (('+'|'-') term)* ; term := factor ('*' factor)* ;
//!   factor := INT | VAR | factor '^' INT | '(' expr ')'`.
//!
//! Printing sorts terms descending under lex, so `x^2 - y^3` prints with the
//! `x` term first; output always re-parses to the same polynomial.

mod scalar;
mod monomial;
mod poly;
mod parse;

pub use scalar::{Field, Scalar};
pub use monomial::{Monomial, MonomialOrder};
pub use parse::valid_user_variable;
pub use poly::{Polynomial, Ring};

use crate::Result;

/// Parse a polynomial from the expression grammar; errors carry byte offsets.
pub fn poly_parse(ring: &Ring, input: &str) -> Result<Polynomial> {
    Polynomial::parse(ring, input)
}

/// Checked addition (errors on ring mismatch).
pub fn poly_add(a: &Polynomial, b: &Polynomial) -> Result<Polynomial> {
    a.checked_add(b)
}

/// Checked subtraction (errors on ring mismatch).
pub fn poly_sub(a: &Polynomial, b: &Polynomial) -> Result<Polynomial> {
    a.checked_sub(b)
}

/// Checked multiplication (errors on ring mismatch).
pub fn poly_mul(a: &Polynomial, b: &Polynomial) -> Result<Polynomial> {
    a.checked_mul(b)
}

/// Substitute `images[i]` for variable `i`; images live in `target`.
pub fn poly_substitute(f: &Polynomial, target: &Ring, images: &[Polynomial]) -> Result<Polynomial> {
    f.substitute(target, images)
}

/// Compare two monomials under an order. Total on monomials of a fixed ring.
pub fn mono_cmp(order: &MonomialOrder, a: &Monomial, b: &Monomial) -> std::cmp::Ordering {
    order.cmp_mono(a, b)
}
