//! Exact computer algebra for the Cuntz-Pimsner algebras O_(m,n)(T) built from
//! the correspondence of the circle given by z -> z^n, z -> z^m.
//!
//! The algebra is generated by a unitary `z` and isometries `S_1, ..., S_n`
//! subject to `z S_i = S_{i+1}`, `z S_n = S_1 z^m` and `sum_i S_i S_i^* = 1`.
//! Elements are finite linear combinations of monomials `S_mu z^k S_nu^*`
//! with exact complex-rational coefficients. Equality is decided
//! semantically through a faithful shift representation on `l^2(Z[1/m])`.
//!
//! Module map:
//!
//! - [`algebra`]: monomials, products, adjoint, gauge grading, the canonical
//!   endomorphism, conditional expectation, KMS state and the zero test.
//! - [`function_ring`]: exact piecewise-polynomial functions on the circle.
//! - [`rieffel`]: the 2x2 projection over O_(1,2)(T), its trace and K0 class.
//! - [`ktheory`]: Smith normal form and every K-group computation.
//! - [`group_actions`]: the cyclic action beta, the symmetry sigma, the
//!   fixed-point rewriting and subalgebra witnesses.
//! - [`representations`]: partial affine maps on `Z[1/m]` and finite
//!   dimensional solenoid representations.
//! - [`entropy`]: word norms, the sets omega(s), span dimensions, entropy
//!   growth and the matrix map rho_r.
//! - [`reproduce`]: the end-to-end acceptance checks, shared by the CLI and
//!   the test suite.

pub mod algebra;
pub mod entropy;
pub mod error;
pub mod function_ring;
pub mod group_actions;
pub mod ktheory;
pub mod numbers;
pub mod random;
pub mod representations;
pub mod reproduce;
pub mod rieffel;

pub use algebra::{Algebra, AlgebraParams, Element, Monomial, Word};
pub use error::{Error, Result};
