//! Exact computations around deformations of the Weyl algebra, the quantum
//! plane and the q-Weyl algebra: normal forms, star products, polydifferential
//! Hochschild cochains and Euler–Poincaré characteristics of deformed complexes.

pub mod cpoly;
pub mod error;
pub mod eulerpoincare;
pub mod expr;
pub mod hochschild;
pub mod linalg;
pub mod ncpoly;
pub mod scalars;
pub mod starprod;

pub use error::{Error, Result};
pub use cpoly::{CPoly, Mono};
pub use expr::{Expr, ParseContext};
pub use scalars::{FieldDesc, HSeries, Scalar, Target, Var};
pub use ncpoly::{AlgebraSpec, Derivation, NCPoly};
pub use hochschild::{PolyDiffCochain, Slot};
pub use starprod::{StarProduct, StarValue, TensorOp};
