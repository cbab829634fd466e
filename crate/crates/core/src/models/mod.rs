//! Concrete group models.

mod abelian;
mod derived;
mod finite;
mod free;
mod nilpotent;
mod products;
mod semidirect;

pub use abelian::FreeAbelian;
pub use derived::{CentralExtension, Cocycle, NamedElement, Quotient, Regenerated};
pub use finite::FiniteGroup;
pub use free::FreeGroup;
pub use nilpotent::{FreeNilpotent2, Heisenberg, UniUpperTriangular};
pub use products::{DirectProduct, FreeProduct};
pub use semidirect::{ActionData, MatrixSemidirect, Semidirect};
