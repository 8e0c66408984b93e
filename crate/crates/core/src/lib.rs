//! Exact χ-algebras of matroids.
//!
//! A χ-algebra is the quotient of the graded algebra generated by
//! `e_1, …, e_n` (with `e_i² = 0` and `e_j e_i = β_{i,j} e_i e_j`) by the ideal
//! spanned by χ-boundaries of circuits and by loops. The Orlik-Solomon,
//! Orlik-Terao and oriented-matroid sign algebras are the three standard
//! examples. This crate builds them over the rationals, computes their
//! no-broken-circuit bases, evaluates iterated residues and expands elements
//! in diagonal bases.

pub mod algebra;
pub mod arrangement;
pub mod chi;
pub mod error;
pub mod linalg;
pub mod matroid;
pub mod residue;
pub mod set;

pub use algebra::{
    beta_product, boundary, dimension, dimensions, ideal_generators, multiply, normalize_tuple,
    reduce_to_nbc, reduce_to_nbc_with, AlgebraElement, Monomial,
};
pub use arrangement::{parse_arrangement, Arrangement, FlatBasisPolicy};
pub use chi::{verify_uc, AlgebraConfig, Beta, ChiKind, ChiMap, UcReport};
pub use error::{Error, Result};
pub use linalg::Scalar;
pub use matroid::{parse_matroid, Matroid};
pub use residue::{
    check_diagonal_basis, expand, flag_of, inclusion, is_diagonal_basis, iterated_residue,
    match_flag, parse_basis, residue_image, residue_step, sum_residues, verify_exact_sequence,
    DiagonalBasisCandidate, DualBasis, FlagChain, ResidueChain,
};
pub use set::{ElementSet, OrderedTuple};
