//! Exact computations around the centre of the affine vertex algebra of
//! `gl_n` at the critical level: Laurent series, differential operators and
//! opers, the PBW basis of `U(ĝl_n)` extended by `τ = -d/dt`, the
//! Segal–Sugawara vectors built from a column determinant, and their action
//! on smooth root modules.

pub mod affine;
pub mod diffop;
pub mod error;
pub mod laurent;
pub mod pbw;
pub mod perm;
pub mod scalar;
pub mod smoothmod;
pub mod sugawara;

pub use affine::{AffineGl, Gen, Generator, InvariantForm, LieElement};
pub use diffop::{miura, miura_with_side, CoefficientSide, Connection, CyclicVector, DiffOp, Oper};
pub use error::{Error, ParseError, Result};
pub use laurent::{Laurent, Valuation};
pub use pbw::{CommPoly, Letter, Monomial, NCPoly, Pbw, SwapStrategy};
pub use scalar::Scalar;
pub use sugawara::{cdet, ss_vectors, SSFamily};
pub use smoothmod::{
    conductor_irregularity_report, ss_operator_act, vanishing_report, Case, ConductorReport, Module, ModuleVector,
    RootFunction, State, VanishingReport,
};
