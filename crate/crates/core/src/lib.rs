//! Myhill-Nerode complexity and topological entropy of formal languages.
//!
//! The central quantity is `γ_L(F)`, the number of distinct rows
//! `χ_{F,L}(u) = ([u·w ∈ L])_{w ∈ F}` over all prefixes `u`. Its growth along
//! `F = Σ^(n)` gives the entropy `h(L) = limsup log₂ γ_L(Σ^(n)) / n`.

pub mod alphabet;
pub mod error;
pub mod growth;
pub mod lang;
pub mod metric;
pub mod nerode;
pub mod topo;

pub use alphabet::{Alphabet, EnumMode, Symbol, Word};
pub use error::{DfaError, GammaError, GroupError, InputError};
pub use lang::{Dfa, Language, LanguageSpec};
