//! Exact computations with natural coalgebra decompositions of tensor
//! algebras over finite fields.

pub mod decomp;
pub mod error;
pub mod field;
pub mod functors;
pub mod hilton;
pub mod liealg;
pub mod linalg;
pub mod natural;
pub mod sgmod;
pub mod tensoralg;

pub use decomp::{block_decomposition, splitness_check, theorem_1_1_report, BlockReport, MSet, SplitnessReport};
pub use error::{Error, Result};
pub use field::{make_field, minimal_extension_degree, primitive_root, Field, FieldParams, FieldRef, Scalar};
pub use functors::{evaluate, FunctorSpec, Graded};
pub use hilton::{verify_theorem61, BasicProduct, Theorem61Report};
pub use liealg::{lyndon_basis, witt_dim};
pub use linalg::{CoordinateSolver, Matrix, SpanBuilder, Subspace};
pub use natural::{eventual_idempotent, GroupAlgebraElement, NaturalTransform, Permutation};
pub use sgmod::{Side, SigmaModule};
pub use tensoralg::{Tensor, TensorPairSum, Word};
