//! A symbolic model of permutations of ℕ built from block involutions,
//! finitely supported block permutations and the shift-like permutation `F`.
//!
//! Points `2x` and `2x+1` form block `x`. On block indices
//!
//! ```text
//! f(x) = x + 2   x even
//! f(x) = x - 2   x odd, x ≥ 3
//! f(1) = 0
//! ```
//!
//! which threads ℕ into a single two-sided orbit `… 5 3 1 0 2 4 …`. `F` moves
//! each block rigidly along `f`, and `f_map`/`f_inv` are the same rule on
//! single points.

mod bitfn;
mod blockperm;
mod elem;
pub mod model;

use thiserror::Error;

pub use bitfn::BitFn;
pub use blockperm::BlockPerm;
pub use elem::SymElem;
pub use model::{
    ascent_witness, brute_force_level, descent_witness, gxl_generators, AscentWitness,
    DescentWitness, IterChainModel,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymNatError {
    #[error("malformed bit function {0:?}; expected `prefix|block`")]
    BadBitFn(String),
    #[error("periodic block must be non-empty")]
    EmptyBlock,
    #[error("malformed block permutation: {0}")]
    BadBlockPerm(String),
    #[error("level {level} exceeds the cell budget of {budget}; computed through level {reached}")]
    LevelBudget {
        level: usize,
        reached: usize,
        budget: usize,
    },
    #[error("enumeration oracle supports levels up to {max}, got {level}")]
    OracleTooLarge { level: usize, max: usize },
    #[error("model has depth {depth}, level {needed} is required")]
    ModelTooShallow { needed: usize, depth: usize },
    #[error("no descent witness for k = {k} with k' in {}..={scan_max}", k + 1)]
    NoWitness { k: usize, scan_max: usize },
    #[error("residue {x} is out of range for modulus 2^{l}")]
    OutOfRange { x: u64, l: u32 },
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

// Position of x on the orbit line: evens at 0, 1, 2, …, odds at -1, -2, ….
#[inline]
fn line_pos(x: u64) -> i128 {
    if x.is_multiple_of(2) {
        (x / 2) as i128
    } else {
        -((x as i128 + 1) / 2)
    }
}

#[inline]
fn line_point(n: i128) -> u64 {
    if n >= 0 {
        (2 * n) as u64
    } else {
        (-2 * n - 1) as u64
    }
}

/// `f^m(x)` for any integer `m`.
#[inline]
pub fn f_pow(x: u64, m: i64) -> u64 {
    line_point(line_pos(x) + m as i128)
}

pub fn f_map(x: u64) -> u64 {
    f_pow(x, 1)
}

pub fn f_inv(x: u64) -> u64 {
    f_pow(x, -1)
}
