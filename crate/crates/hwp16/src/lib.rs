//! Explicit 2-factorizations of the wreath product `C_m wr K_16`.
//!
//! For every odd `m >= 9` and every `r` in `7..=23`, this crate constructs a
//! partition of the edge set of `C_m wr K_16` into `r` spanning 16-cycle
//! factors, `23 - r` spanning `m`-cycle factors and one perfect matching,
//! and independently verifies the result. The pieces:
//!
//! - [`graph`]: exact edge-set models of the hosts (Cayley layers over
//!   `Z_m x Z_16`, blown cycles `C_m[n]`, the wreath product, row matchings).
//! - [`factor`]: the certificate data model and the verifier that accepts or
//!   rejects any claimed decomposition.
//! - [`tables`]: fixed data — two 1-factorizations of `K_16`, Walecki
//!   decompositions, a frozen Hamiltonian decomposition of `C_4[4]`.
//! - [`blocks`]: the explicit base-block constructions, expanded by orbits.
//! - [`pattern`]: the row-monotone difference-pattern solver producing
//!   `C_m`-factorizations of column-difference layers, plus the translate
//!   search for `C_4`-factors of `C_m[4]`.
//! - [`cover`]: a generic backtracking cycle-cover search used as fallback
//!   and as an independent cross-check.
//! - [`cache`]: a persistent, self-revalidating store for solver output.
//! - [`assembly`]: the case dispatcher that composes the pieces into full
//!   wreath decompositions.
//! - [`certificate`]: the text format produced and consumed by the CLI.
//!
//! The `hwp16` binary exposes `generate`, `verify`, `sweep`,
//! `selftest-tables` and `cache` subcommands; the `examples/` directory
//! walks through each capability in library form.

pub mod graph;
pub mod factor;
pub mod tables;
pub mod cover;
pub mod pattern;
pub mod blocks;
pub mod cache;
pub mod assembly;
pub mod certificate;

pub use factor::{verify_decomposition, Decomposition};
pub use graph::Host;
