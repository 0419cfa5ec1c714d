//! Normal forms: ⊎-disjunctive normal form with a streaming selection
//! enumerator, and quasi-flat normal form.

mod dnf;
mod quasiflat;

pub use dnf::{enumerate_selections, to_dnf, Disjunct, DnfForm, ResidencyProbe, Selections};
pub use quasiflat::{to_quasiflat, QuasiFlatDisjunct, QuasiFlatForm};
