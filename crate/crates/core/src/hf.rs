//! Hereditarily finite sets in Ackermann coding.
//!
//! A set is the natural number `Σ 2^code(x)` over its members, so `x ∈ y`
//! is bit `x` of `y`. Codes are stored in a `u64`, which covers every set
//! of `V_5` (codes below 2^16) and every set whose members all have codes
//! below 64.

use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hf(u64);

impl Hf {
    pub const EMPTY: Hf = Hf(0);

    pub const fn from_code(code: u64) -> Hf {
        Hf(code)
    }

    pub const fn code(self) -> u64 {
        self.0
    }

    pub fn contains(self, x: Hf) -> bool {
        x.0 < 64 && self.0 >> x.0 & 1 == 1
    }

    pub fn members(self) -> impl Iterator<Item = Hf> {
        let bits = self.0;
        (0..64u64).filter(move |i| bits >> i & 1 == 1).map(Hf)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// `self ∪ {x}`, or `None` if the code would not fit.
    pub fn with(self, x: Hf) -> Option<Hf> {
        (x.0 < 64).then(|| Hf(self.0 | 1 << x.0))
    }

    pub fn from_members(members: impl IntoIterator<Item = Hf>) -> Option<Hf> {
        members.into_iter().try_fold(Hf::EMPTY, |s, x| s.with(x))
    }

    /// The von Neumann numeral `n` (`n ≤ 4`).
    pub fn numeral(n: usize) -> Option<Hf> {
        let mut s = Hf::EMPTY;
        for _ in 0..n {
            s = s.with(s)?;
        }
        Some(s)
    }

    /// `max(rank(x) + 1)` over members; the empty set has rank 0.
    pub fn rank(self) -> u32 {
        self.members().map(|x| x.rank() + 1).max().unwrap_or(0)
    }

    /// Number of sets in the transitive closure of `{self}`.
    pub fn hereditary_size(self) -> usize {
        let mut seen = vec![self];
        let mut i = 0;
        while i < seen.len() {
            for x in seen[i].members() {
                if !seen.contains(&x) {
                    seen.push(x);
                }
            }
            i += 1;
        }
        seen.len()
    }

    pub fn is_subset(self, other: Hf) -> bool {
        self.0 & !other.0 == 0
    }
}

/// `V_n` in code order: all sets of rank below `n` (`n ≤ 5`).
pub fn stage(n: u32) -> Vec<Hf> {
    assert!(n <= 5, "V_{n} does not fit in 64-bit codes");
    let mut size: u64 = 0;
    for _ in 0..n {
        size = 1u64 << size;
    }
    (0..size).map(Hf).collect()
}

impl fmt::Debug for Hf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Hf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, x) in self.members().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}

impl FromStr for Hf {
    type Err = Error;

    fn from_str(s: &str) -> Result<Hf> {
        let mut p = HfParser { src: s.as_bytes(), pos: 0 };
        let v = p.set()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.err("trailing input after set literal"));
        }
        Ok(v)
    }
}

/// Parses an HF literal starting at `src[pos..]`; returns the set and the
/// offset just past it. Used by the formula parser for `check(..)`.
pub(crate) fn parse_prefix(src: &str, pos: usize) -> Result<(Hf, usize)> {
    let mut p = HfParser { src: src.as_bytes(), pos };
    let v = p.set()?;
    Ok((v, p.pos))
}

struct HfParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl HfParser<'_> {
    fn err(&self, message: &str) -> Error {
        Error::Syntax { offset: self.pos, message: message.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn set(&mut self) -> Result<Hf> {
        self.skip_ws();
        match self.src.get(self.pos) {
            Some(b'{') => {
                self.pos += 1;
                let mut s = Hf::EMPTY;
                self.skip_ws();
                if self.src.get(self.pos) == Some(&b'}') {
                    self.pos += 1;
                    return Ok(s);
                }
                loop {
                    let start = self.pos;
                    let x = self.set()?;
                    s = s.with(x).ok_or_else(|| Error::Syntax {
                        offset: start,
                        message: "member code too large".into(),
                    })?;
                    self.skip_ws();
                    match self.src.get(self.pos) {
                        Some(b',') => self.pos += 1,
                        Some(b'}') => {
                            self.pos += 1;
                            return Ok(s);
                        }
                        _ => return Err(self.err("expected ',' or '}'")),
                    }
                }
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let n: usize = std::str::from_utf8(&self.src[start..self.pos])
                    .unwrap()
                    .parse()
                    .map_err(|_| Error::Syntax { offset: start, message: "bad numeral".into() })?;
                Hf::numeral(n).ok_or(Error::Syntax {
                    offset: start,
                    message: format!("numeral {n} too large"),
                })
            }
            _ => Err(self.err("expected set literal")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stages_have_expected_sizes() {
        assert_eq!(stage(0).len(), 0);
        assert_eq!(stage(1).len(), 1);
        assert_eq!(stage(3).len(), 4);
        assert_eq!(stage(4).len(), 16);
        assert!(stage(4).iter().all(|s| s.rank() < 4));
    }

    #[test]
    fn numerals_and_parsing() {
        let two: Hf = "{{}, {{}}}".parse().unwrap();
        assert_eq!(Hf::numeral(2), Some(two));
        assert_eq!("2".parse::<Hf>().unwrap(), two);
        assert_eq!(two.to_string(), "{{}, {{}}}");
        assert!(Hf::numeral(1).unwrap().is_subset(two));
        assert!(!two.is_subset(Hf::numeral(1).unwrap()));
        let one = Hf::numeral(1).unwrap();
        assert!(!one.contains(one));
        assert_eq!(Hf::numeral(3).unwrap().hereditary_size(), 4);
        assert!("{".parse::<Hf>().is_err());
    }
}
