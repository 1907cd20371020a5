//! Intensional first-order logic with abstraction over finite domains.
//!
//! Formulas are interpreted compositionally as concepts ([`Interpretation`]),
//! and concepts are mapped to relations by extensionalization functions
//! ([`Extensionalization`]), one per possible world.

pub mod concept;
pub mod eval;
pub mod kripke;
pub mod relation;
pub mod syntax;

pub use concept::{ConceptExpr, Denotation, Interpretation, Slot};
pub use eval::{concept_extension, extensionalize, necess_extension, possibility_extension, Extensionalization};
pub use kripke::{EquivalenceMode, KripkeModel};
pub use relation::{
    complement, natural_join, nonempty, project_out, ConceptRef, DomainElement, Particular, Relation, Tuple,
};
pub use syntax::{AbstractTerm, Assignment, BuiltinPred, IFormula, Term};
