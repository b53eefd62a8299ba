//! Iterated centralizers and envelope chains `E_k(H)` in finite permutation
//! groups, plus an exact symbolic model of an infinite descending chain in
//! the symmetric group on ℕ.

pub mod chains;
pub mod gf2;
pub mod grp;
pub mod perm;
pub mod symnat;

pub use chains::{
    ek_chain, envelope_terms, iterated_centralizers, CheckRecord, EkChainReport,
    IteratedCentralizerChain, Status,
};
pub use grp::{FiniteGroup, GroupError, GroupFile, Subgroup, DEFAULT_CAP};
pub use perm::{PermError, Permutation};
