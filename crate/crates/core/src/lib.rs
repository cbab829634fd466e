//! Combings of finitely generated groups.
//!
//! Groups are computable models with canonical elements. Languages of
//! representative words are checked for fellow-traveller properties on
//! bounded balls of the Cayley graph, built by closure constructions from
//! smaller combings, and used to solve the word problem.

pub mod atlas;
pub mod combing;
pub mod constructions;
pub mod error;
pub mod group;
pub mod machines;
pub mod models;
pub mod par;
pub mod travel;
pub mod wordproblem;

pub use error::{Error, Result};
pub use group::{Element, GeneratorSet, GroupModel, Letter, Model, Word};
