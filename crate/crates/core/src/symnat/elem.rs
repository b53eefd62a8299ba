use std::fmt;

use super::{f_pow, BitFn, BlockPerm};
use crate::perm::Permutation;

/// The permutation `B(b) · P(σ) · F^m` of ℕ, where `B(b)` swaps `2x, 2x+1`
/// exactly when `b(x) = 1`, `P(σ)` moves block `x` onto block `σ(x)`, and
/// `F` moves block `x` onto block `f(x)`.
///
/// The factorization is unique, so derived equality is equality of
/// permutations.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SymElem {
    pub bits: BitFn,
    pub sigma: BlockPerm,
    pub m: i64,
}

impl SymElem {
    pub fn new(bits: BitFn, sigma: BlockPerm, m: i64) -> Self {
        Self { bits, sigma, m }
    }

    pub fn identity() -> Self {
        Self::new(BitFn::zero(), BlockPerm::identity(), 0)
    }

    pub fn from_bits(bits: BitFn) -> Self {
        Self::new(bits, BlockPerm::identity(), 0)
    }

    pub fn from_block_perm(sigma: BlockPerm) -> Self {
        Self::new(BitFn::zero(), sigma, 0)
    }

    pub fn f_power(m: i64) -> Self {
        Self::new(BitFn::zero(), BlockPerm::identity(), m)
    }

    pub fn is_identity(&self) -> bool {
        self.m == 0 && self.sigma.is_identity() && self.bits.is_zero()
    }

    /// Image of the point `x`.
    pub fn apply(&self, x: u64) -> u64 {
        let block = self.sigma.apply(f_pow(x / 2, self.m));
        2 * block + ((x & 1) ^ self.bits.at(block) as u64)
    }

    /// `self · other` (apply `other` first), returned in normal form.
    pub fn mul(&self, other: &Self) -> Self {
        // F^m B(c) = B(c ∘ f^{-m}) F^m,  F^m P(τ) = P(f^m τ f^{-m}) F^m,
        // P(σ) B(c) = B(c ∘ σ^{-1}) P(σ).
        let moved = other
            .bits
            .pull_by_f_power(-self.m)
            .pull_by(&self.sigma.inverse());
        let tau = other.sigma.conjugate_by_f_power(self.m);
        Self {
            bits: self.bits.xor(&moved),
            sigma: self.sigma.compose(&tau),
            m: self.m + other.m,
        }
    }

    pub fn inverse(&self) -> Self {
        Self::f_power(-self.m)
            .mul(&Self::from_block_perm(self.sigma.inverse()))
            .mul(&Self::from_bits(self.bits.clone()))
    }

    /// `[a, b] = a⁻¹ b⁻¹ a b`.
    pub fn commutator(a: &Self, b: &Self) -> Self {
        a.inverse().mul(&b.inverse()).mul(a).mul(b)
    }

    /// Points moved, when finitely many.
    pub fn has_finite_support(&self) -> bool {
        self.m == 0 && self.bits.has_finite_support()
    }

    /// The same permutation on `0..2n` for the least sufficient `n`, when
    /// the support is finite.
    pub fn to_finite_permutation(&self) -> Option<Permutation> {
        let ones = self.bits.finite_support().filter(|_| self.m == 0)?;
        let top = ones
            .iter()
            .copied()
            .chain(self.sigma.max_moved())
            .max()
            .map_or(0, |b| b + 1);
        let images = (0..2 * top).map(|x| self.apply(x) as u32).collect();
        Some(Permutation::from_images(images).expect("finite-support element is a bijection"))
    }
}

impl fmt::Display for SymElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B({}) P({}) F^{}", self.bits, self.sigma, self.m)
    }
}

impl fmt::Debug for SymElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SymElem[{self}]")
    }
}
