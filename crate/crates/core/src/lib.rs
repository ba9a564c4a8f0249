//! Construction and desk-scale verification of large sets of q-Steiner
//! systems LS(t, t+1)_q.
//!
//! Every nonzero field element `a` indexes a system B_a whose blocks are
//! the (t+1)-dimensional kernels of the linearized polynomials
//! `a^q x + b_1 x^q + ... + b_t x^{q^t} + (-1)^{t+1} a x^{q^{t+1}}`, and the
//! systems partition all (t+1)-dimensional subspaces. The crate realizes
//! this over finite truncations F_{q^M} of the algebraic closure of F_q and
//! checks the defining properties exhaustively for small parameters.
//!
//! Module map:
//! - [`tower`]: exact arithmetic in F_p ⊂ F_q ⊂ F_{q^M}
//! - [`linalg`]: F_q-linear algebra, canonical RREF subspaces
//! - [`qpoly`]: linearized (q-)polynomials, kernels, gcd oracle
//! - [`moore`]: Moore determinants and annihilator polynomials
//! - [`steiner`]: blocks, classes, cover and classify
//! - [`designcheck`]: Grassmannian enumeration and the verification suites

pub mod designcheck;
pub mod error;
pub mod linalg;
pub mod moore;
mod polyarith;
pub mod qpoly;
pub mod steiner;
pub mod tower;

pub use error::{Error, Result};
pub use linalg::{linsolve, FqMatrix, LinSolveOutcome, Subspace};
pub use qpoly::QPolynomial;
pub use steiner::{default_ambient, Block, ClassLabel, Construction};
pub use tower::{AmbientElement, ArithKind, BaseElement, Tower, DEFAULT_SIZE_BOUND};

pub use designcheck::{
    enumerate_subspaces, gaussian_binomial, Checker, Failure, Status, VerificationReport,
};
