//! Stiefel-Whitney heights of simplicial deleted products, the mod-2
//! characteristic-class calculus behind van Kampen-Flores type
//! non-embeddability results, and an exact oracle for piecewise-linear
//! maps that checks those results on concrete triangulations.

pub mod char_class;
pub mod cohomology;
pub mod complex;
pub mod deleted_product;
pub mod delta;
pub mod error;
pub mod gf2;
pub mod obstruction;
pub mod pl_oracle;
pub mod retraction;

pub use char_class::{AlgebraElement, GradedAlgebra, ManifoldModel, PolyZ2};
pub use cohomology::{sw_height, HeightOptions, HeightReport};
pub use complex::{Label, Simplex, SimplicialComplex, StandardComplex};
pub use deleted_product::{
    swap_quotient, triangulated_deleted_product, EquivariantDeltaComplex, QuotientComplex,
};
pub use delta::{DeltaComplex, DeltaComplexLike};
pub use error::{Error, Result};
pub use gf2::{BitMatrix, BitVector, MemoryBudget};
pub use obstruction::{certify_height_bound, enumerate_claims, Verdict};
pub use pl_oracle::{PLMap, Rational};
pub use retraction::BaryPoint;
