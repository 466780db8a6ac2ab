//! Multi-level robust Chinese remainder theorem for polynomials over `F_p`.
//!
//! Two non-coprime moduli `m1`, `m2` carry redundancy through their common
//! factor `m`. That redundancy lets a polynomial be recovered from residues
//! corrupted by low-degree errors, with only the lowest coefficients of the
//! estimate possibly wrong. The Euclidean remainder chain of the cofactors
//! yields a family of levels that trade the admissible degree of the
//! polynomial against the tolerated error degree.
//!
//! - [`field`]: prime field arithmetic.
//! - [`poly`]: dense polynomials, Euclidean division, gcd/xgcd/lcm, text format.
//! - [`levels`]: moduli pair analysis and the level table.
//! - [`crt`]: residue encoding and exact reconstruction.
//! - [`decoder`]: robust reconstruction from erroneous residues.
//! - [`simulation`]: randomized campaigns and brute-force oracles.
//! - [`cli`]: the `robust-crt` command line.


pub mod cli;
pub mod crt;
pub mod decoder;
pub mod error;
pub mod field;
pub mod levels;
pub mod poly;
pub mod simulation;


pub use crt::{check_consistency, crt_pair, encode, FoldingWitness, ResiduePair};
pub use decoder::{
    classify, prop1_reconstruct, reconstruct, remainder_cascade, Branch, ErroneousResiduePair,
    ReconstructionResult,
};
pub use error::{Error, Result};
pub use field::{Field, FieldElement};
pub use levels::{analyze_pair, level_table, proposition1_bound, LevelSpec, ModuliPairAnalysis};
pub use poly::{Degree, Polynomial};
