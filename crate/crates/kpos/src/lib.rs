//! Exact tools for k-nonnegative matrices: positivity tests, the K and T
//! generator families, word rewriting, Bruhat cells and closure posets.
pub mod cells;
pub mod exact;
pub mod generators;
pub mod perm;
pub mod poset;
pub mod positivity;
pub mod random;
pub mod words;
