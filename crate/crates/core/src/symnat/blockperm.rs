use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{f_pow, SymNatError};

/// A finitely supported permutation of block indices; block `x` is the
/// pair of points `{2x, 2x+1}`, moved rigidly.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlockPerm {
    // moved blocks only
    map: BTreeMap<u64, u64>,
}

impl BlockPerm {
    pub fn identity() -> Self {
        Self::default()
    }

    fn from_map(map: impl IntoIterator<Item = (u64, u64)>) -> Self {
        Self {
            map: map.into_iter().filter(|(x, y)| x != y).collect(),
        }
    }

    pub fn swap(a: u64, b: u64) -> Self {
        Self::from_map([(a, b), (b, a)])
    }

    /// Product of disjoint cycles of block indices.
    pub fn from_cycles(cycles: &[Vec<u64>]) -> Result<Self, SymNatError> {
        let mut map = BTreeMap::new();
        for c in cycles {
            for (i, &x) in c.iter().enumerate() {
                if map.insert(x, c[(i + 1) % c.len()]).is_some() {
                    return Err(SymNatError::BadBlockPerm(format!("block {x} repeated")));
                }
            }
        }
        Ok(Self::from_map(map))
    }

    #[inline]
    pub fn apply(&self, x: u64) -> u64 {
        self.map.get(&x).copied().unwrap_or(x)
    }

    pub fn is_identity(&self) -> bool {
        self.map.is_empty()
    }

    pub fn support(&self) -> impl Iterator<Item = u64> + '_ {
        self.map.keys().copied()
    }

    pub fn max_moved(&self) -> Option<u64> {
        self.map.keys().next_back().copied()
    }

    pub fn inverse(&self) -> Self {
        Self::from_map(self.map.iter().map(|(&x, &y)| (y, x)))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        let points: BTreeSet<u64> = self.support().chain(other.support()).collect();
        Self::from_map(points.into_iter().map(|x| (x, self.apply(other.apply(x)))))
    }

    /// `f^m ∘ self ∘ f^{-m}`, which maps `f^m(x)` to `f^m(self(x))`.
    pub fn conjugate_by_f_power(&self, m: i64) -> Self {
        Self::from_map(self.map.iter().map(|(&x, &y)| (f_pow(x, m), f_pow(y, m))))
    }

    pub fn cycles(&self) -> Vec<Vec<u64>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for &start in self.map.keys() {
            if seen.contains(&start) {
                continue;
            }
            let mut cyc = vec![start];
            seen.insert(start);
            let mut x = self.apply(start);
            while x != start {
                seen.insert(x);
                cyc.push(x);
                x = self.apply(x);
            }
            out.push(cyc);
        }
        out
    }
}

impl fmt::Display for BlockPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            let parts: Vec<String> = c.iter().map(u64::to_string).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for BlockPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BlockPerm{self}")
    }
}
