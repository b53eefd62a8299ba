//! Dense linear algebra over GF(2) with packed `u64` rows.

/// A packed bit vector of fixed length.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitRow {
    len: usize,
    words: Vec<u64>,
}

impl BitRow {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_bits(bits: impl IntoIterator<Item = bool>) -> Self {
        let bits: Vec<bool> = bits.into_iter().collect();
        let mut r = Self::zeros(bits.len());
        for (i, b) in bits.into_iter().enumerate() {
            r.set(i, b);
        }
        r
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, v: bool) {
        let bit = 1u64 << (i % 64);
        if v {
            self.words[i / 64] |= bit;
        } else {
            self.words[i / 64] &= !bit;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &Self) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn bits(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(|i| self.get(i))
    }

    fn first_one_from(&self, start: usize) -> Option<usize> {
        (start..self.len).find(|&i| self.get(i))
    }
}

/// Solutions of `A x = b` for several right-hand sides sharing one matrix.
#[derive(Debug, Clone)]
pub struct SolveResult {
    /// One particular solution per right-hand side, `None` if inconsistent.
    pub particular: Vec<Option<BitRow>>,
    /// Basis of the null space of `A`.
    pub nullspace: Vec<BitRow>,
}

/// Gauss–Jordan elimination of `[A | B]` where `A` has `nvars` columns and
/// each right-hand side in `rhs` has one bit per row of `A`.
pub fn solve(rows: &[BitRow], nvars: usize, rhs: &[BitRow]) -> SolveResult {
    let nrhs = rhs.len();
    let width = nvars + nrhs;
    let mut aug: Vec<BitRow> = rows
        .iter()
        .enumerate()
        .map(|(r, row)| {
            assert_eq!(row.len(), nvars, "row width");
            let mut a = BitRow::zeros(width);
            for c in (0..nvars).filter(|&c| row.get(c)) {
                a.set(c, true);
            }
            for (j, b) in rhs.iter().enumerate() {
                assert_eq!(b.len(), rows.len(), "rhs length");
                a.set(nvars + j, b.get(r));
            }
            a
        })
        .collect();

    let mut pivots: Vec<usize> = Vec::new();
    let mut rank = 0;
    for col in 0..nvars {
        let Some(p) = (rank..aug.len()).find(|&r| aug[r].get(col)) else {
            continue;
        };
        aug.swap(rank, p);
        let pivot = aug[rank].clone();
        for (r, row) in aug.iter_mut().enumerate() {
            if r != rank && row.get(col) {
                row.xor_assign(&pivot);
            }
        }
        pivots.push(col);
        rank += 1;
    }

    let particular = (0..nrhs)
        .map(|j| {
            if aug[rank..].iter().any(|row| row.get(nvars + j)) {
                return None;
            }
            let mut x = BitRow::zeros(nvars);
            for (r, &col) in pivots.iter().enumerate() {
                x.set(col, aug[r].get(nvars + j));
            }
            Some(x)
        })
        .collect();

    let mut is_pivot = vec![false; nvars];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let nullspace = (0..nvars)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut x = BitRow::zeros(nvars);
            x.set(free, true);
            for (r, &col) in pivots.iter().enumerate() {
                if aug[r].get(free) {
                    x.set(col, true);
                }
            }
            x
        })
        .collect();

    SolveResult {
        particular,
        nullspace,
    }
}

/// Rank of a set of vectors, by incremental reduction against a basis.
pub fn rank<'a>(vectors: impl IntoIterator<Item = &'a BitRow>) -> usize {
    let mut basis: Vec<(usize, BitRow)> = Vec::new();
    for v in vectors {
        let mut v = v.clone();
        for (lead, b) in &basis {
            if v.get(*lead) {
                v.xor_assign(b);
            }
        }
        if let Some(lead) = v.first_one_from(0) {
            for (_, b) in basis.iter_mut() {
                if b.get(lead) {
                    b.xor_assign(&v);
                }
            }
            basis.push((lead, v));
        }
    }
    basis.len()
}
