use std::fmt;
use std::str::FromStr;

use super::{f_pow, BlockPerm, SymNatError};

/// An eventually periodic function `ℕ → {0,1}`: `prefix` followed by
/// `block` repeated forever. Values are kept canonical (shortest prefix,
/// shortest period), so structural equality is equality of functions.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitFn {
    prefix: Vec<bool>,
    block: Vec<bool>,
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

impl BitFn {
    pub fn new(prefix: Vec<bool>, block: Vec<bool>) -> Result<Self, SymNatError> {
        if block.is_empty() {
            return Err(SymNatError::EmptyBlock);
        }
        Ok(Self::canonical(prefix, block))
    }

    pub fn periodic(block: Vec<bool>) -> Self {
        Self::new(Vec::new(), block).expect("periodic block must be non-empty")
    }

    pub fn zero() -> Self {
        Self::periodic(vec![false])
    }

    pub fn ones() -> Self {
        Self::periodic(vec![true])
    }

    /// Indicator of a finite set of places.
    pub fn indicator(places: &[u64]) -> Self {
        let len = places.iter().map(|&x| x as usize + 1).max().unwrap_or(0);
        let mut prefix = vec![false; len];
        for &x in places {
            prefix[x as usize] = true;
        }
        Self::canonical(prefix, vec![false])
    }

    fn canonical(mut prefix: Vec<bool>, mut block: Vec<bool>) -> Self {
        let p = block.len();
        let d = (1..=p)
            .filter(|d| p.is_multiple_of(*d))
            .find(|&d| (d..p).all(|i| block[i] == block[i - d]))
            .unwrap();
        block.truncate(d);
        while let Some(&last) = prefix.last() {
            if last != *block.last().unwrap() {
                break;
            }
            prefix.pop();
            block.rotate_right(1);
        }
        Self { prefix, block }
    }

    /// Builds the function `x ↦ f(x)` given that it is periodic with period
    /// `period` from `stable_from` on. The assumption is spot-checked over a
    /// further period and a violation panics: it can only come from a wrong
    /// bound in this module.
    pub(crate) fn sample(stable_from: u64, period: usize, f: impl Fn(u64) -> bool) -> Self {
        let l = stable_from as usize;
        let prefix: Vec<bool> = (0..l as u64).map(&f).collect();
        let block: Vec<bool> = (l as u64..(l + period) as u64).map(&f).collect();
        for (i, &b) in block.iter().enumerate() {
            assert_eq!(
                f((l + period + i) as u64),
                b,
                "sampled function is not periodic from {l} with period {period}"
            );
        }
        Self::canonical(prefix, block)
    }

    #[inline]
    pub fn at(&self, x: u64) -> bool {
        let x = x as usize;
        if x < self.prefix.len() {
            self.prefix[x]
        } else {
            self.block[(x - self.prefix.len()) % self.block.len()]
        }
    }

    pub fn prefix(&self) -> &[bool] {
        &self.prefix
    }

    pub fn block(&self) -> &[bool] {
        &self.block
    }

    pub fn prefix_len(&self) -> usize {
        self.prefix.len()
    }

    pub fn period(&self) -> usize {
        self.block.len()
    }

    pub fn is_purely_periodic(&self) -> bool {
        self.prefix.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.prefix.is_empty() && self.block == [false]
    }

    /// Zero from some point on.
    pub fn has_finite_support(&self) -> bool {
        self.block == [false]
    }

    /// Places with value 1; `None` when there are infinitely many.
    pub fn finite_support(&self) -> Option<Vec<u64>> {
        self.has_finite_support().then(|| {
            self.prefix
                .iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .map(|(i, _)| i as u64)
                .collect()
        })
    }

    /// Values at `0..n`.
    pub fn window(&self, n: usize) -> Vec<bool> {
        (0..n as u64).map(|x| self.at(x)).collect()
    }

    /// Least place with value 1.
    pub fn first_one(&self) -> Option<u64> {
        let n = self.prefix.len() + self.block.len();
        (0..n as u64).find(|&x| self.at(x))
    }

    pub fn xor(&self, other: &Self) -> Self {
        let l = self.prefix.len().max(other.prefix.len()) as u64;
        let q = lcm(self.period(), other.period());
        Self::sample(l, q, |x| self.at(x) ^ other.at(x))
    }

    /// `x ↦ self(f^m(x))`.
    pub fn pull_by_f_power(&self, m: i64) -> Self {
        if m == 0 {
            return self.clone();
        }
        // Past 2|m| + 2 the power f^m shifts evens by 2m and odds by -2m, so
        // an even period carries over.
        let l = self.prefix.len() as u64 + 2 * m.unsigned_abs() + 3;
        let q = lcm(self.period(), 2);
        Self::sample(l, q, |x| self.at(f_pow(x, m)))
    }

    /// `x ↦ self(σ(x))` for a finitely supported block permutation `σ`.
    pub fn pull_by(&self, sigma: &BlockPerm) -> Self {
        if sigma.is_identity() {
            return self.clone();
        }
        let l = (self.prefix.len() as u64).max(sigma.max_moved().map_or(0, |m| m + 1));
        Self::sample(l, self.period(), |x| self.at(sigma.apply(x)))
    }

    /// `x ↦ self(x) ⊕ self(f(x))`, the exponent of the commutator with `f`.
    pub fn delta(&self) -> Self {
        self.xor(&self.pull_by_f_power(1))
    }
}

impl fmt::Display for BitFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.prefix {
            f.write_str(if b { "1" } else { "0" })?;
        }
        f.write_str("|")?;
        for &b in &self.block {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitFn({self})")
    }
}

impl FromStr for BitFn {
    type Err = SymNatError;

    /// Parses `prefix|block`, e.g. `|0110` or `01|1`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SymNatError::BadBitFn(s.to_string());
        let (p, b) = s.split_once('|').ok_or_else(bad)?;
        let bits = |t: &str| -> Result<Vec<bool>, SymNatError> {
            t.chars()
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    _ => Err(bad()),
                })
                .collect()
        };
        Self::new(bits(p)?, bits(b)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bf(s: &str) -> BitFn {
        s.parse().unwrap()
    }

    #[test]
    fn canonical_form() {
        assert_eq!(bf("0|0"), BitFn::zero());
        assert_eq!(bf("|0101"), bf("|01"));
        assert_eq!(bf("1|01"), bf("|10"));
        assert_eq!(bf("0110|110"), bf("0|110"));
        assert_eq!(bf("|0110").to_string(), "|0110");
        assert!(matches!("|".parse::<BitFn>(), Err(SymNatError::EmptyBlock)));
        assert!(matches!("012|1".parse::<BitFn>(), Err(SymNatError::BadBitFn(_))));
        assert!(matches!("0101".parse::<BitFn>(), Err(SymNatError::BadBitFn(_))));
    }

    #[test]
    fn delta_examples() {
        assert_eq!(BitFn::ones().delta(), BitFn::zero());
        assert_eq!(BitFn::zero().delta(), BitFn::zero());
        // j = 0,1,1,0 repeated: j(x) ⊕ j(f(x)) at x = 0..7 is all ones.
        let j = bf("|0110");
        let oracle: Vec<bool> = (0..8u64)
            .map(|x| {
                let fx = if x % 2 == 0 { x + 2 } else if x == 1 { 0 } else { x - 2 };
                j.at(x) ^ j.at(fx)
            })
            .collect();
        assert_eq!(oracle, vec![true; 8]);
        assert_eq!(j.delta(), BitFn::ones());
    }

    #[test]
    fn delta_of_periodic_breaks_only_at_one() {
        let j = bf("|0010");
        let d = j.delta();
        for x in 0..64u64 {
            if x != 1 {
                assert_eq!(d.at(x), d.at(x + 4), "x={x}");
            }
        }
    }

    #[test]
    fn indicator_and_support() {
        let s = BitFn::indicator(&[0, 3]);
        assert_eq!(s.to_string(), "1001|0");
        assert_eq!(s.finite_support(), Some(vec![0, 3]));
        assert_eq!(BitFn::ones().finite_support(), None);
        assert_eq!(bf("|0110").first_one(), Some(1));
        assert_eq!(BitFn::zero().first_one(), None);
    }

    fn arb_raw() -> impl Strategy<Value = (Vec<bool>, Vec<bool>)> {
        (
            prop::collection::vec(any::<bool>(), 0..6),
            prop::collection::vec(any::<bool>(), 1..7),
        )
    }

    fn agree_up_to(a: &(Vec<bool>, Vec<bool>), b: &(Vec<bool>, Vec<bool>)) -> bool {
        let eval = |(p, q): &(Vec<bool>, Vec<bool>), x: usize| {
            if x < p.len() {
                p[x]
            } else {
                q[(x - p.len()) % q.len()]
            }
        };
        let bound = a.0.len().max(b.0.len()) + 2 * lcm(a.1.len(), b.1.len());
        (0..=bound).all(|x| eval(a, x) == eval(b, x))
    }

    proptest! {
        #[test]
        fn normalization_decides_equality(a in arb_raw(), b in arb_raw()) {
            let fa = BitFn::new(a.0.clone(), a.1.clone()).unwrap();
            let fb = BitFn::new(b.0.clone(), b.1.clone()).unwrap();
            prop_assert_eq!(fa == fb, agree_up_to(&a, &b));
        }

        #[test]
        fn canonical_form_is_pointwise_faithful(a in arb_raw()) {
            let f = BitFn::new(a.0.clone(), a.1.clone()).unwrap();
            for x in 0..40usize {
                let want = if x < a.0.len() { a.0[x] } else { a.1[(x - a.0.len()) % a.1.len()] };
                prop_assert_eq!(f.at(x as u64), want);
            }
            prop_assert_eq!(f.to_string().parse::<BitFn>().unwrap(), f);
        }

        #[test]
        fn pullbacks_are_pointwise(a in arb_raw(), m in -5i64..=5) {
            let f = BitFn::new(a.0, a.1).unwrap();
            let g = f.pull_by_f_power(m);
            for x in 0..200u64 {
                prop_assert_eq!(g.at(x), f.at(f_pow(x, m)));
            }
            let d = f.delta();
            for x in 0..200u64 {
                prop_assert_eq!(d.at(x), f.at(x) ^ f.at(f_pow(x, 1)));
            }
        }
    }
}
