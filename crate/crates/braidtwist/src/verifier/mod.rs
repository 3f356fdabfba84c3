//! Checking relations: derivation scripts, bounded search, the permutation
//! quotient and the Artin action on the disk.

pub mod artin;
pub mod cases;
pub mod perm;
pub mod relation_search;
pub mod script;
pub mod search;
pub mod transport;

pub use artin::{artin_action, check_relators_via_artin, FreeAutomorphism};
pub use cases::{local_config, CaseLibrary, LocalConfig};
pub use perm::{check_permutation_quotient, Perm};
pub use relation_search::{prove_relation, prove_relation_from_forms};
pub use script::{check_derivation, DerivationScript, Library, Step};
pub use search::{word_equal_bounded, SearchConfig, Verdict};
pub use transport::{Resolution, TransportOutcome, Transporter};
