//! Finite permutations of `{0, .., n-1}`.
//!
//! Products use the left-action convention: `a.compose(&b)` applies `b`
//! first, then `a`. The commutator is `[g, h] = g⁻¹h⁻¹gh` under that
//! convention.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("not a bijection of 0..{degree}")]
    NotBijective { degree: usize },
    #[error("cycle parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// A bijection of `{0, .., degree-1}`, stored as its image table.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Self {
            images: (0..degree as u32).collect(),
        }
    }

    /// Builds a permutation from `images[x] = image of x`, checking bijectivity.
    pub fn from_images(images: Vec<u32>) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &y in &images {
            let y = y as usize;
            if y >= n || seen[y] {
                return Err(PermError::NotBijective { degree: n });
            }
            seen[y] = true;
        }
        Ok(Self { images })
    }

    /// Builds a permutation from disjoint cycles on points `< degree`.
    pub fn from_cycles(degree: usize, cycles: &[Vec<u32>]) -> Result<Self, PermError> {
        let mut p = Self::identity(degree);
        for c in cycles {
            let cyc = Self::cycle(degree, c)?;
            p = p.compose(&cyc)?;
        }
        Ok(p)
    }

    fn cycle(degree: usize, points: &[u32]) -> Result<Self, PermError> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut seen = BTreeSet::new();
        for (i, &p) in points.iter().enumerate() {
            if p as usize >= degree || !seen.insert(p) {
                return Err(PermError::NotBijective { degree });
            }
            images[p as usize] = points[(i + 1) % points.len()];
        }
        Ok(Self { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, x: u32) -> u32 {
        self.images[x as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &y)| i as u32 == y)
    }

    fn check_degree(&self, other: &Self) -> Result<(), PermError> {
        if self.degree() != other.degree() {
            return Err(PermError::DegreeMismatch {
                left: self.degree(),
                right: other.degree(),
            });
        }
        Ok(())
    }

    /// `self ∘ other`: applies `other` first.
    pub fn compose(&self, other: &Self) -> Result<Self, PermError> {
        self.check_degree(other)?;
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, other: &Self) -> Self {
        Self {
            images: other.images.iter().map(|&y| self.images[y as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0u32; self.degree()];
        for (x, &y) in self.images.iter().enumerate() {
            inv[y as usize] = x as u32;
        }
        Self { images: inv }
    }

    /// `[g, h] = g⁻¹ h⁻¹ g h`.
    pub fn commutator(g: &Self, h: &Self) -> Result<Self, PermError> {
        g.check_degree(h)?;
        let gi = g.inverse();
        let hi = h.inverse();
        Ok(gi
            .compose_unchecked(&hi)
            .compose_unchecked(g)
            .compose_unchecked(h))
    }

    /// `g⁻¹ h g`.
    pub fn conjugate(h: &Self, g: &Self) -> Result<Self, PermError> {
        g.check_degree(h)?;
        Ok(g.inverse().compose_unchecked(h).compose_unchecked(g))
    }

    pub fn support(&self) -> BTreeSet<u32> {
        self.images
            .iter()
            .enumerate()
            .filter(|(x, &y)| *x as u32 != y)
            .map(|(x, _)| x as u32)
            .collect()
    }

    /// Pads with fixed points up to `degree`.
    pub fn embed(&self, degree: usize) -> Self {
        assert!(degree >= self.degree(), "cannot embed into smaller degree");
        let mut images = self.images.clone();
        images.extend(self.degree() as u32..degree as u32);
        Self { images }
    }

    /// Canonical cycles: each rotated to start at its least point, sorted by
    /// that point, fixed points omitted.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] || self.images[start] as usize == start {
                continue;
            }
            let mut cyc = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cyc.push(x as u32);
                x = self.images[x] as usize;
            }
            out.push(cyc);
        }
        out
    }

    pub fn format_cycles(&self) -> String {
        self.to_string()
    }

    /// Parses cycle notation such as `(0 1)(2 3)` or `()`.
    ///
    /// Cycles are multiplied right to left, so overlapping cycles are allowed;
    /// a point repeated inside one cycle is an error.
    pub fn parse_cycles(text: &str, degree: usize) -> Result<Self, PermError> {
        let mut result = Self::identity(degree);
        let bytes = text.as_bytes();
        let mut pos = 0;
        let mut cycles: Vec<(usize, Vec<u32>)> = Vec::new();
        let err = |pos: usize, msg: &str| PermError::Parse {
            pos,
            msg: msg.to_string(),
        };
        while pos < bytes.len() {
            let c = bytes[pos];
            if c.is_ascii_whitespace() {
                pos += 1;
                continue;
            }
            if c != b'(' {
                return Err(err(pos, "expected '('"));
            }
            let open = pos;
            pos += 1;
            let mut points = Vec::new();
            let mut seen = BTreeSet::new();
            loop {
                while pos < bytes.len() && (bytes[pos].is_ascii_whitespace() || bytes[pos] == b',') {
                    pos += 1;
                }
                if pos >= bytes.len() {
                    return Err(err(open, "unclosed cycle"));
                }
                if bytes[pos] == b')' {
                    pos += 1;
                    break;
                }
                let start = pos;
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                if start == pos {
                    return Err(err(pos, "expected a point"));
                }
                let point: u32 = text[start..pos]
                    .parse()
                    .map_err(|_| err(start, "point out of range"))?;
                if point as usize >= degree {
                    return Err(err(start, &format!("point {point} >= degree {degree}")));
                }
                if !seen.insert(point) {
                    return Err(err(start, &format!("point {point} repeated in cycle")));
                }
                points.push(point);
            }
            cycles.push((open, points));
        }
        for (_, points) in cycles.iter().rev() {
            if points.len() > 1 {
                let cyc = Self::cycle(degree, points).expect("validated above");
                result = cyc.compose_unchecked(&result);
            }
        }
        Ok(result)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return f.write_str("()");
        }
        for c in cycles {
            f.write_str("(")?;
            for (i, p) in c.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{p}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(text: &str, n: usize) -> Permutation {
        Permutation::parse_cycles(text, n).unwrap()
    }

    #[test]
    fn involution_squares_to_identity() {
        let t = p("(0 1)", 3);
        assert!(t.compose(&t).unwrap().is_identity());
    }

    #[test]
    fn identity_is_neutral() {
        let g = p("(0 2 1)", 3);
        assert_eq!(Permutation::identity(3).compose(&g).unwrap(), g);
    }

    #[test]
    fn composition_applies_right_factor_first() {
        // 0 -> 1 -> 2, 1 -> 0 -> 1, 2 -> 2 -> 0
        let r = p("(0 1 2)", 3).compose(&p("(0 1)", 3)).unwrap();
        assert_eq!(r, p("(0 2)", 3));
    }

    #[test]
    fn commutator_examples() {
        let g = p("(0 1)", 3);
        assert!(Permutation::commutator(&g, &g).unwrap().is_identity());
        let c = Permutation::commutator(&g, &p("(0 2)", 3)).unwrap();
        assert_eq!(c, p("(0 1 2)", 3));
    }

    #[test]
    fn parse_reads_images() {
        assert_eq!(p("(0 1)(2 3)", 4).images(), &[1, 0, 3, 2]);
        assert!(p("()", 4).is_identity());
        assert!(Permutation::identity(5).support().is_empty());
    }

    #[test]
    fn parse_errors_carry_position() {
        let e = Permutation::parse_cycles("(0 1)(2 2)", 4).unwrap_err();
        assert_eq!(
            e,
            PermError::Parse {
                pos: 8,
                msg: "point 2 repeated in cycle".into()
            }
        );
        assert!(matches!(
            Permutation::parse_cycles("(0 4)", 4),
            Err(PermError::Parse { pos: 3, .. })
        ));
        assert!(matches!(
            Permutation::parse_cycles("(0 1", 4),
            Err(PermError::Parse { pos: 0, .. })
        ));
        assert!(matches!(
            Permutation::parse_cycles("0 1", 4),
            Err(PermError::Parse { pos: 0, .. })
        ));
        assert!(matches!(
            Permutation::parse_cycles("(a)", 4),
            Err(PermError::Parse { pos: 1, .. })
        ));
    }

    #[test]
    fn degree_mismatch_is_an_error() {
        let e = p("(0 1)", 2).compose(&p("(0 1)", 3)).unwrap_err();
        assert_eq!(e, PermError::DegreeMismatch { left: 2, right: 3 });
    }

    #[test]
    fn canonical_format() {
        assert_eq!(p("(3 1 2)(5 4)", 6).to_string(), "(1 2 3)(4 5)");
        assert_eq!(Permutation::identity(3).to_string(), "()");
    }

    #[test]
    fn embedding_pads_fixed_points() {
        let g = p("(0 1)", 2).embed(4);
        assert_eq!(g.images(), &[1, 0, 2, 3]);
    }

    fn arb_perm(n: usize) -> impl Strategy<Value = Permutation> {
        Just((0..n as u32).collect::<Vec<_>>())
            .prop_shuffle()
            .prop_map(|v| Permutation::from_images(v).unwrap())
    }

    proptest! {
        #[test]
        fn group_laws(a in arb_perm(7), b in arb_perm(7), c in arb_perm(7)) {
            let ab = a.compose(&b).unwrap();
            prop_assert_eq!(a.compose(&b.compose(&c).unwrap()).unwrap(), ab.compose(&c).unwrap());
            prop_assert_eq!(ab.inverse(), b.inverse().compose(&a.inverse()).unwrap());
            let commute = ab == b.compose(&a).unwrap();
            prop_assert_eq!(Permutation::commutator(&a, &b).unwrap().is_identity(), commute);
            let sab = ab.support();
            let sa = a.support();
            let sb = b.support();
            prop_assert!(sab.iter().all(|x| sa.contains(x) || sb.contains(x)));
        }

        #[test]
        fn cycle_text_round_trips(a in arb_perm(9)) {
            let text = a.format_cycles();
            prop_assert_eq!(Permutation::parse_cycles(&text, 9).unwrap(), a);
        }
    }
}
