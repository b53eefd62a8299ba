//! Iterated centralizers of `H = K ⋊ ⟨F⟩` as sets of exponent functions.
//!
//! Level `i` holds the exponent functions `j` of the elements `B(j)` in the
//! `i`-th iterated centralizer. Level 0 is `{0}`; level `i+1` consists of
//! the purely periodic `g` of period dividing `2^{i+1}` whose `delta(g)`
//! lies in level `i`. Each level is obtained by solving, over one period of
//! unknowns, the linear system
//!
//! ```text
//! g(x) + g(x+2)  = h(x)   x even (indices mod P)
//! g(x) + g(x-2)  = h(x)   x odd  (indices mod P, so x = 1 pairs with P-1)
//! g(1) + g(0)    = h(1)
//! ```
//!
//! for every `h` of the previous level.

use std::collections::{BTreeMap, HashSet};

use super::{BitFn, BlockPerm, SymElem, SymNatError};
use crate::gf2::{self, BitRow};
use crate::perm::Permutation;

/// Largest level the enumeration oracle accepts (`2^16` candidates).
pub const MAX_ORACLE_LEVEL: usize = 4;

/// Default bound on `|level| · period` cells for one level.
pub const DEFAULT_CELL_BUDGET: usize = 1 << 26;

#[derive(Debug, Clone)]
pub struct IterChainModel {
    /// `levels[i]`, sorted by the values on one period `0..2^i`.
    pub levels: Vec<Vec<BitFn>>,
    cell_budget: usize,
}

fn sort_level(level: &mut [BitFn], i: usize) {
    let n = 1usize << i;
    level.sort_by_cached_key(|b| b.window(n));
}

fn period_system(p: usize) -> Vec<BitRow> {
    let mut rows = Vec::with_capacity(p + 1);
    for x in 0..p {
        let mut row = BitRow::zeros(p);
        let partner = if x % 2 == 0 { (x + 2) % p } else { (x + p - 2) % p };
        row.flip(x);
        row.flip(partner);
        rows.push(row);
    }
    let mut link = BitRow::zeros(p);
    link.flip(1 % p);
    link.flip(0);
    rows.push(link);
    rows
}

impl IterChainModel {
    /// Computes levels `0..=imax`.
    pub fn compute(imax: usize) -> Result<Self, SymNatError> {
        Self::with_budget(imax, DEFAULT_CELL_BUDGET)
    }

    pub fn with_budget(imax: usize, cell_budget: usize) -> Result<Self, SymNatError> {
        let mut model = Self {
            levels: vec![vec![BitFn::zero()]],
            cell_budget,
        };
        model.extend_to(imax)?;
        Ok(model)
    }

    /// Deepest level computed.
    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, i: usize) -> Option<&[BitFn]> {
        self.levels.get(i).map(Vec::as_slice)
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.levels.iter().map(Vec::len).collect()
    }

    pub fn extend_to(&mut self, imax: usize) -> Result<(), SymNatError> {
        while self.depth() < imax {
            let i = self.depth();
            let next = self.solve_next()?;
            check_xor_closed(&next, i + 1)?;
            check_periodicity(&next, i + 1)?;
            self.levels.push(next);
        }
        Ok(())
    }

    fn solve_next(&self) -> Result<Vec<BitFn>, SymNatError> {
        let i = self.depth();
        let prev = &self.levels[i];
        let p = 1usize << (i + 1);
        let cells = prev.len().saturating_mul(2).saturating_mul(p);
        if i + 1 >= 63 || cells > self.cell_budget {
            return Err(SymNatError::LevelBudget {
                level: i + 1,
                reached: i,
                budget: self.cell_budget,
            });
        }
        let rows = period_system(p);
        let rhs: Vec<BitRow> = prev
            .iter()
            .map(|h| {
                let mut r = BitRow::from_bits((0..p as u64).map(|x| h.at(x)));
                let mut full = BitRow::zeros(p + 1);
                for x in 0..p {
                    full.set(x, r.get(x));
                }
                full.set(p, h.at(1));
                r = full;
                r
            })
            .collect();
        let sol = gf2::solve(&rows, p, &rhs);

        let dim = sol.nullspace.len();
        let mut out: BTreeMap<Vec<bool>, BitFn> = BTreeMap::new();
        for (h, part) in prev.iter().zip(&sol.particular) {
            let part = part.as_ref().ok_or_else(|| {
                SymNatError::Internal(format!("no periodic preimage of {h} at level {}", i + 1))
            })?;
            for mask in 0u64..1 << dim {
                let mut g = part.clone();
                for (b, n) in sol.nullspace.iter().enumerate() {
                    if mask >> b & 1 == 1 {
                        g.xor_assign(n);
                    }
                }
                let bits: Vec<bool> = g.bits().collect();
                out.entry(bits.clone()).or_insert_with(|| BitFn::periodic(bits));
            }
        }
        Ok(out.into_values().collect())
    }

    /// Minimal `l` such that every member of `levels[i]` has period dividing `2^l`.
    pub fn period_exponent(&self, i: usize) -> Option<u32> {
        self.levels
            .get(i)?
            .iter()
            .map(|b| b.period().trailing_zeros())
            .max()
    }
}

pub fn check_xor_closed(level: &[BitFn], i: usize) -> Result<(), SymNatError> {
    let n = 1usize << i;
    let rows: Vec<BitRow> = level.iter().map(|b| BitRow::from_bits(b.window(n))).collect();
    let rank = gf2::rank(&rows);
    let has_zero = level.iter().any(BitFn::is_zero);
    if !has_zero || rank >= usize::BITS as usize || level.len() != 1usize << rank {
        return Err(SymNatError::Internal(format!(
            "level {i} is not closed under XOR ({} members, rank {rank})",
            level.len()
        )));
    }
    Ok(())
}

/// Purely periodic with period dividing `2^i`, and every nonzero member has
/// a 1 in each period window of `0..4·2^i` (so it has infinite support).
pub fn check_periodicity(level: &[BitFn], i: usize) -> Result<(), SymNatError> {
    let p = 1usize << i;
    for b in level {
        if !b.is_purely_periodic() || !p.is_multiple_of(b.period()) {
            return Err(SymNatError::Internal(format!(
                "level {i} member {b} is not periodic with period dividing {p}"
            )));
        }
        if !b.is_zero() {
            for w in 0..4 {
                if !(w * p..(w + 1) * p).any(|x| b.at(x as u64)) {
                    return Err(SymNatError::Internal(format!(
                        "level {i} member {b} vanishes on window {w}"
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Level `i` by exhaustive enumeration of all period-`2^i` patterns, kept
/// when their `delta` lies in the enumerated level `i-1`.
pub fn brute_force_level(i: usize) -> Result<Vec<BitFn>, SymNatError> {
    if i > MAX_ORACLE_LEVEL {
        return Err(SymNatError::OracleTooLarge {
            level: i,
            max: MAX_ORACLE_LEVEL,
        });
    }
    if i == 0 {
        return Ok(vec![BitFn::zero()]);
    }
    let prev: HashSet<BitFn> = brute_force_level(i - 1)?.into_iter().collect();
    let p = 1usize << i;
    let mut keep: Vec<BitFn> = (0u64..1 << p)
        .map(|mask| BitFn::periodic((0..p).map(|x| mask >> x & 1 == 1).collect()))
        .filter(|g| prev.contains(&g.delta()))
        .collect::<HashSet<_>>()
        .into_iter()
        .collect();
    sort_level(&mut keep, i);
    Ok(keep)
}

/// A new member of level `i+1` built from an `h` in level `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AscentWitness {
    pub h: BitFn,
    pub x0: u64,
    pub g: BitFn,
}

/// Picks the nonzero `h ∈ levels[i]` whose first 1 sits furthest right (the
/// first in sorted order on ties), solves `delta(g) = h` by the two-strand
/// recursion seeded with `g(0) = 0` (even `x0`) or `g(1) = 0` (odd `x0`),
/// and checks that `g` is new at level `i+1`.
pub fn ascent_witness(i: usize, model: &IterChainModel) -> Result<AscentWitness, SymNatError> {
    if i == 0 || i + 1 > model.depth() {
        return Err(SymNatError::ModelTooShallow {
            needed: i + 1,
            depth: model.depth(),
        });
    }
    let (h, x0) = model.levels[i]
        .iter()
        .filter_map(|h| h.first_one().map(|x| (h, x)))
        .fold(None::<(&BitFn, u64)>, |best, (h, x)| match best {
            Some((_, bx)) if bx >= x => best,
            _ => Some((h, x)),
        })
        .expect("level i >= 1 has a nonzero member");

    let p = 1u64 << (i + 1);
    let mut g = vec![false; p as usize + 2];
    if x0 % 2 == 0 {
        g[0] = false;
        g[1] = h.at(1);
    } else {
        g[1] = false;
        g[0] = h.at(1);
    }
    for x in (0..p).step_by(2) {
        g[x as usize + 2] = g[x as usize] ^ h.at(x);
    }
    for x in (1..p).step_by(2) {
        g[x as usize + 2] = g[x as usize] ^ h.at(x + 2);
    }
    if g[p as usize] != g[0] || g[p as usize + 1] != g[1] {
        return Err(SymNatError::Internal(format!(
            "recursion for h = {h} does not close up over period {p}"
        )));
    }
    g.truncate(p as usize);
    let g = BitFn::periodic(g);
    if g.delta() != *h {
        return Err(SymNatError::Internal(format!("delta({g}) ≠ {h}")));
    }
    if !model.levels[i + 1].contains(&g) || model.levels[i].contains(&g) {
        return Err(SymNatError::Internal(format!(
            "{g} is not in level {} \\ level {i}",
            i + 1
        )));
    }
    Ok(AscentWitness {
        h: h.clone(),
        x0,
        g,
    })
}

/// An element of `E_{k+1}` outside `E_{k'+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DescentWitness {
    pub k: usize,
    pub k_prime: usize,
    pub l: u32,
    pub x0: u64,
    pub g: SymElem,
    pub h: BitFn,
    pub commutator: Permutation,
}

/// Scans `k' = k+1 ..= scan_max`, then `h ∈ levels[k'+1]` in sorted order,
/// then `x0 < 2^l`, for `h(x0) ≠ h(x0 + 2^l)`, where `2^l` is the least
/// common period of `levels[k+1]`. The block swap `g` of `x0` and `x0 + 2^l`
/// commutes with every `B(h')`, `h' ∈ levels[k+1]`, while `[g, B(h)]` is a
/// nonidentity permutation of finite support and so lies in no level.
pub fn descent_witness(
    k: usize,
    scan_max: usize,
    model: &IterChainModel,
) -> Result<DescentWitness, SymNatError> {
    let base = model.level(k + 1).ok_or(SymNatError::ModelTooShallow {
        needed: k + 1,
        depth: model.depth(),
    })?;
    let l = model.period_exponent(k + 1).expect("level exists");
    let shift = 1u64 << l;
    for k_prime in k + 1..=scan_max {
        let level = model.level(k_prime + 1).ok_or(SymNatError::ModelTooShallow {
            needed: k_prime + 1,
            depth: model.depth(),
        })?;
        for h in level {
            let Some(x0) = (0..shift).find(|&x| h.at(x) != h.at(x + shift)) else {
                continue;
            };
            let g = SymElem::from_block_perm(BlockPerm::swap(x0, x0 + shift));
            for hp in base {
                let c = SymElem::commutator(&g, &SymElem::from_bits(hp.clone()));
                if !c.is_identity() {
                    return Err(SymNatError::Internal(format!(
                        "block swap {g} fails to commute with {hp} of level {}",
                        k + 1
                    )));
                }
            }
            let c = SymElem::commutator(&g, &SymElem::from_bits(h.clone()));
            let expected = SymElem::from_bits(BitFn::indicator(&[x0, x0 + shift]));
            if c != expected || !c.has_finite_support() {
                return Err(SymNatError::Internal(format!(
                    "[g, h] = {c}, expected {expected}"
                )));
            }
            let commutator = c.to_finite_permutation().expect("finite support");
            return Ok(DescentWitness {
                k,
                k_prime,
                l,
                x0,
                g,
                h: h.clone(),
                commutator,
            });
        }
    }
    Err(SymNatError::NoWitness { k, scan_max })
}

/// The first `count` generators of the block-swap group on the residue
/// class `x mod 2^l`, swapping blocks `x + 2^l·i` and `x + 2^l·i'` for
/// pairs `i < i'` ordered by `i'` and then `i`.
pub fn gxl_generators(x: u64, l: u32, count: usize) -> Result<Vec<SymElem>, SymNatError> {
    let step = 1u64.checked_shl(l).filter(|_| l < 32).ok_or(SymNatError::OutOfRange { x, l })?;
    if x >= step {
        return Err(SymNatError::OutOfRange { x, l });
    }
    Ok((1u64..)
        .flat_map(|j| (0..j).map(move |i| (i, j)))
        .take(count)
        .map(|(i, j)| SymElem::from_block_perm(BlockPerm::swap(x + step * i, x + step * j)))
        .collect())
}
