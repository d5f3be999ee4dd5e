//! Exact computation with polynomial identities of Grassmann algebras over
//! GF(p), p odd: free associative algebras, normal forms modulo `T(G0)`,
//! degree-truncated T-space spans and Grassmann evaluation, plus a catalog
//! of machine-checked claims about central polynomials.

pub mod builders;
pub mod error;
pub mod expr;
pub mod field;
pub mod grassmann;
pub mod linalg;
pub mod normal_form;
pub mod polynomial;
pub mod spans;
pub mod verifier;
pub mod word;

pub use error::{Error, Result};
pub use field::Field;
pub use grassmann::{GrassmannAlgebra, GrassmannElement};
pub use normal_form::{reduce_poly, BssWord, NormalForm};
pub use polynomial::Polynomial;
pub use word::{Mode, Multidegree, Word};
pub use expr::parse_poly;
pub use spans::{Budget, ComponentSpan, Membership, SpanEngine, SpanSpec};
pub use verifier::{Certificate, Params, Verdict, Verifier};
