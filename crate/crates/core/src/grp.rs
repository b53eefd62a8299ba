//! Explicitly enumerated finite permutation groups.
//!
//! A [`FiniteGroup`] materializes every element, sorted by image table, and
//! numbers them `0..order`. Subgroups (and arbitrary element subsets) are
//! [`Subgroup`] bitsets over those numbers, so equality of subgroups is exact
//! set equality. All structural queries can be asked relative to an ambient
//! subgroup, which is how centralizers "inside E_k" are computed.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::perm::{PermError, Permutation};

/// Default closure cap.
pub const DEFAULT_CAP: usize = 20_000;

/// Groups up to this order get a full multiplication table.
const TABLE_LIMIT: usize = 2048;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error("closure exceeded cap {cap} ({partial} elements enumerated)")]
    CapExceeded { cap: usize, partial: usize },
    #[error("cap must be positive")]
    ZeroCap,
    #[error("element {0} is not in the group")]
    NotContained(String),
    #[error("subgroups are not nested")]
    NotNested,
    #[error("element set is not a subgroup of the ambient group")]
    NotASubgroup,
    #[error("group file line {line}: {msg}")]
    GroupFile { line: usize, msg: String },
}

/// Index of an element inside its [`FiniteGroup`].
pub type ElemId = u32;

/// A set of element ids of one ambient [`FiniteGroup`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subgroup {
    words: Vec<u64>,
    len: usize,
}

impl Subgroup {
    pub fn empty(universe: usize) -> Self {
        Self {
            words: vec![0; universe.div_ceil(64)],
            len: 0,
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = Self::empty(universe);
        for i in 0..universe {
            s.insert(i as ElemId);
        }
        s
    }

    pub fn from_ids(universe: usize, ids: impl IntoIterator<Item = ElemId>) -> Self {
        let mut s = Self::empty(universe);
        for id in ids {
            s.insert(id);
        }
        s
    }

    #[inline]
    pub fn contains(&self, id: ElemId) -> bool {
        let i = id as usize;
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn insert(&mut self, id: ElemId) -> bool {
        let i = id as usize;
        let bit = 1u64 << (i % 64);
        if self.words[i / 64] & bit != 0 {
            return false;
        }
        self.words[i / 64] |= bit;
        self.len += 1;
        true
    }

    pub fn order(&self) -> usize {
        self.len
    }

    pub fn ids(&self) -> impl Iterator<Item = ElemId> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &bits)| {
            let mut bits = bits;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let t = bits.trailing_zeros();
                bits &= bits - 1;
                Some((w * 64) as ElemId + t)
            })
        })
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let words: Vec<u64> = self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect();
        let len = words.iter().map(|w| w.count_ones() as usize).sum();
        Self { words, len }
    }

    /// First element of `self` missing from `other`.
    pub fn first_outside(&self, other: &Self) -> Option<ElemId> {
        self.ids().find(|&id| !other.contains(id))
    }
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.ids()).finish()
    }
}

/// A finite permutation group given by generators, with every element enumerated.
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    degree: usize,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
    index: HashMap<Permutation, ElemId>,
    inverses: Vec<ElemId>,
    identity: ElemId,
    table: Option<Vec<ElemId>>,
}

impl FiniteGroup {
    /// Breadth-first closure of `generators`; fails once more than `cap`
    /// elements have been found.
    pub fn closure(
        degree: usize,
        generators: Vec<Permutation>,
        cap: usize,
    ) -> Result<Self, GroupError> {
        if cap == 0 {
            return Err(GroupError::ZeroCap);
        }
        for g in &generators {
            if g.degree() != degree {
                return Err(PermError::DegreeMismatch {
                    left: degree,
                    right: g.degree(),
                }
                .into());
            }
        }
        let id = Permutation::identity(degree);
        let mut seen: std::collections::HashSet<Permutation> = std::collections::HashSet::new();
        seen.insert(id.clone());
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in &generators {
                let y = g.compose_unchecked(&x);
                if !seen.contains(&y) {
                    if seen.len() >= cap {
                        return Err(GroupError::CapExceeded {
                            cap,
                            partial: seen.len(),
                        });
                    }
                    seen.insert(y.clone());
                    queue.push_back(y);
                }
            }
        }
        let mut elements: Vec<Permutation> = seen.into_iter().collect();
        elements.sort();
        Ok(Self::from_sorted(degree, generators, elements))
    }

    fn from_sorted(degree: usize, generators: Vec<Permutation>, elements: Vec<Permutation>) -> Self {
        let index: HashMap<Permutation, ElemId> = elements
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i as ElemId))
            .collect();
        let identity = index[&Permutation::identity(degree)];
        let inverses = elements.iter().map(|p| index[&p.inverse()]).collect();
        let n = elements.len();
        let table = (n <= TABLE_LIMIT).then(|| {
            let mut t = Vec::with_capacity(n * n);
            for a in &elements {
                for b in &elements {
                    t.push(index[&a.compose_unchecked(b)]);
                }
            }
            t
        });
        Self {
            degree,
            generators,
            elements,
            index,
            inverses,
            identity,
            table,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn identity(&self) -> ElemId {
        self.identity
    }

    pub fn element(&self, id: ElemId) -> &Permutation {
        &self.elements[id as usize]
    }

    pub fn id_of(&self, p: &Permutation) -> Option<ElemId> {
        self.index.get(p).copied()
    }

    fn require_id(&self, p: &Permutation) -> Result<ElemId, GroupError> {
        self.id_of(p)
            .ok_or_else(|| GroupError::NotContained(p.to_string()))
    }

    /// `a ∘ b`.
    #[inline]
    pub fn mul(&self, a: ElemId, b: ElemId) -> ElemId {
        match &self.table {
            Some(t) => t[a as usize * self.order() + b as usize],
            None => self.index[&self.element(a).compose_unchecked(self.element(b))],
        }
    }

    #[inline]
    pub fn inv(&self, a: ElemId) -> ElemId {
        self.inverses[a as usize]
    }

    /// `[a, b] = a⁻¹ b⁻¹ a b`.
    #[inline]
    pub fn comm(&self, a: ElemId, b: ElemId) -> ElemId {
        let x = self.mul(self.inv(a), self.inv(b));
        self.mul(x, self.mul(a, b))
    }

    /// `b⁻¹ a b`.
    #[inline]
    pub fn conj(&self, a: ElemId, b: ElemId) -> ElemId {
        self.mul(self.inv(b), self.mul(a, b))
    }

    pub fn full(&self) -> Subgroup {
        Subgroup::full(self.order())
    }

    pub fn trivial(&self) -> Subgroup {
        Subgroup::from_ids(self.order(), [self.identity])
    }

    pub fn set_of(&self, ids: impl IntoIterator<Item = ElemId>) -> Subgroup {
        Subgroup::from_ids(self.order(), ids)
    }

    /// The subgroup generated by element ids.
    pub fn generate(&self, gens: &[ElemId]) -> Subgroup {
        let mut s = self.trivial();
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(g, x);
                if s.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        s
    }

    /// The subgroup generated by permutations, which must be elements.
    pub fn subgroup(&self, gens: &[Permutation]) -> Result<Subgroup, GroupError> {
        let ids = gens
            .iter()
            .map(|g| self.require_id(g))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self.generate(&ids))
    }

    pub fn permutations(&self, s: &Subgroup) -> Vec<Permutation> {
        s.ids().map(|i| self.element(i).clone()).collect()
    }

    pub fn is_closed(&self, s: &Subgroup) -> bool {
        s.contains(self.identity)
            && s.ids().all(|a| {
                s.contains(self.inv(a)) && s.ids().all(|b| s.contains(self.mul(a, b)))
            })
    }

    pub fn check_subgroup(&self, s: &Subgroup) -> Result<(), GroupError> {
        if s.words.len() != self.order().div_ceil(64) || !self.is_closed(s) {
            return Err(GroupError::NotASubgroup);
        }
        Ok(())
    }

    pub fn is_abelian(&self, s: &Subgroup) -> bool {
        s.ids()
            .all(|a| s.ids().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// `C_G(S)` for a set of permutations; only the given elements are tested
    /// against, which equals the centralizer of `⟨S⟩`.
    pub fn centralizer(&self, s: &[Permutation]) -> Result<Subgroup, GroupError> {
        let ids = s
            .iter()
            .map(|g| self.require_id(g))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self.centralizer_in(&self.full(), &self.set_of(ids)))
    }

    /// `{g ∈ ambient : g s = s g for all s ∈ set}`.
    pub fn centralizer_in(&self, ambient: &Subgroup, set: &Subgroup) -> Subgroup {
        let ids: Vec<ElemId> = set.ids().collect();
        self.set_of(
            ambient
                .ids()
                .filter(|&g| ids.iter().all(|&s| self.mul(g, s) == self.mul(s, g))),
        )
    }

    pub fn normalizer(&self, s: &Subgroup) -> Subgroup {
        self.normalizer_in(&self.full(), s)
    }

    /// `{g ∈ ambient : g⁻¹ S g = S}`.
    pub fn normalizer_in(&self, ambient: &Subgroup, set: &Subgroup) -> Subgroup {
        self.set_of(
            ambient
                .ids()
                .filter(|&g| set.ids().all(|s| set.contains(self.conj(s, g)))),
        )
    }

    pub fn center_of(&self, s: &Subgroup) -> Subgroup {
        self.centralizer_in(s, s)
    }

    pub fn upper_central_series(&self) -> Vec<Subgroup> {
        self.upper_central_series_of(&self.full())
    }

    /// `Z_0 = 1`, `Z_{k+1} = {g ∈ S : [g, S] ⊆ Z_k}`, until `Z_k = S` or the
    /// series stalls; a stalled series ends with its repeated term.
    pub fn upper_central_series_of(&self, s: &Subgroup) -> Vec<Subgroup> {
        let mut series = vec![self.trivial()];
        loop {
            let last = series.last().unwrap();
            if last == s {
                return series;
            }
            let next = self.set_of(
                s.ids()
                    .filter(|&g| s.ids().all(|x| last.contains(self.comm(g, x)))),
            );
            let stalled = &next == last;
            series.push(next);
            if stalled {
                return series;
            }
        }
    }

    /// `Z_k(S)` for any `k`, continuing past the end of the computed series.
    pub fn center_term(series: &[Subgroup], k: usize) -> &Subgroup {
        &series[k.min(series.len() - 1)]
    }

    pub fn nilpotency_class(&self) -> Option<usize> {
        self.nilpotency_class_of(&self.full())
    }

    /// Least `k` with `Z_k(S) = S`, or `None` when `S` is not nilpotent.
    pub fn nilpotency_class_of(&self, s: &Subgroup) -> Option<usize> {
        let series = self.upper_central_series_of(s);
        (series.last() == Some(s)).then(|| series.len() - 1)
    }

    /// Renders a subset as sorted cycle-notation elements.
    pub fn describe(&self, s: &Subgroup) -> String {
        let parts: Vec<String> = s.ids().map(|i| self.element(i).to_string()).collect();
        format!("{{{}}}", parts.join(", "))
    }
}

/// A parsed group file: `degree: n` followed by one generator per line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupFile {
    pub degree: usize,
    pub generators: Vec<Permutation>,
}

impl GroupFile {
    pub fn parse(text: &str) -> Result<Self, GroupError> {
        let mut degree = None;
        let mut generators = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            match degree {
                None => {
                    let rest = line.strip_prefix("degree:").ok_or(GroupError::GroupFile {
                        line: line_no,
                        msg: "expected `degree: n`".into(),
                    })?;
                    let n: usize = rest.trim().parse().map_err(|_| GroupError::GroupFile {
                        line: line_no,
                        msg: format!("bad degree `{}`", rest.trim()),
                    })?;
                    degree = Some(n);
                }
                Some(n) => {
                    let g = Permutation::parse_cycles(line, n).map_err(|e| GroupError::GroupFile {
                        line: line_no,
                        msg: e.to_string(),
                    })?;
                    generators.push(g);
                }
            }
        }
        let degree = degree.ok_or(GroupError::GroupFile {
            line: 0,
            msg: "missing `degree:` line".into(),
        })?;
        Ok(Self { degree, generators })
    }

    pub fn render(&self) -> String {
        let mut out = format!("degree: {}\n", self.degree);
        for g in &self.generators {
            out.push_str(&g.to_string());
            out.push('\n');
        }
        out
    }

    pub fn close(&self, cap: usize) -> Result<FiniteGroup, GroupError> {
        FiniteGroup::closure(self.degree, self.generators.clone(), cap)
    }
}
