//! Exact permutation arithmetic on `{1..n}`.
//!
//! Symbols are 1-based at every public boundary (parsing, formatting,
//! [`Permutation::apply`], [`Permutation::images`], cycles). Storage is a
//! 0-based image table. Composition applies the right operand first:
//! `p.compose(&q)` maps `x` to `p(q(x))`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("not a permutation")]
    NotAPermutation,
    #[error("parity undefined for odd degree {0}")]
    ParityUndefined(usize),
    #[error("degree must be positive")]
    EmptyDegree,
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// A bijection of `{1..n}`, `n >= 1`.
///
/// The derived ordering compares image arrays lexicographically, which is the
/// order used for canonical representatives.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        assert!(n >= 1, "degree must be positive");
        Permutation { images: (0..n as u32).collect() }
    }

    /// Builds from a 1-based image list: `images[j-1]` is the image of `j`.
    pub fn from_images(images: &[u32]) -> Result<Self, PermError> {
        if images.is_empty() {
            return Err(PermError::EmptyDegree);
        }
        let zero: Vec<u32> =
            images.iter().map(|&v| v.checked_sub(1).ok_or(PermError::NotAPermutation)).collect::<Result<_, _>>()?;
        Self::from_zero_based(zero)
    }

    /// Builds from a 0-based image table, checking bijectivity.
    pub fn from_zero_based(images: Vec<u32>) -> Result<Self, PermError> {
        let n = images.len();
        if n == 0 {
            return Err(PermError::EmptyDegree);
        }
        let mut seen = vec![false; n];
        for &v in &images {
            let v = v as usize;
            if v >= n || seen[v] {
                return Err(PermError::NotAPermutation);
            }
            seen[v] = true;
        }
        Ok(Permutation { images })
    }

    /// Trusted constructor for hot paths that already guarantee bijectivity.
    pub(crate) fn from_zero_based_unchecked(images: Vec<u32>) -> Self {
        debug_assert!(Self::from_zero_based(images.clone()).is_ok());
        Permutation { images }
    }

    /// Builds a permutation of degree `n` from disjoint 1-based cycles.
    /// Cycles with fewer than two entries are identity factors.
    pub fn from_cycles<C: AsRef<[u32]>>(n: usize, cycles: &[C]) -> Result<Self, PermError> {
        if n == 0 {
            return Err(PermError::EmptyDegree);
        }
        let mut images: Vec<u32> = (0..n as u32).collect();
        let mut touched = vec![false; n];
        for cycle in cycles {
            let cycle = cycle.as_ref();
            if cycle.len() < 2 {
                if let Some(&x) = cycle.first() {
                    if x == 0 || x as usize > n {
                        return Err(PermError::NotAPermutation);
                    }
                }
                continue;
            }
            for (i, &x) in cycle.iter().enumerate() {
                if x == 0 || x as usize > n || touched[x as usize - 1] {
                    return Err(PermError::NotAPermutation);
                }
                touched[x as usize - 1] = true;
                let next = cycle[(i + 1) % cycle.len()];
                images[x as usize - 1] = next - 1;
            }
        }
        Ok(Permutation { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of the 1-based symbol `x`.
    #[inline]
    pub fn apply(&self, x: u32) -> u32 {
        self.images[x as usize - 1] + 1
    }

    /// 1-based image list.
    pub fn images(&self) -> Vec<u32> {
        self.images.iter().map(|&v| v + 1).collect()
    }

    #[inline]
    pub fn as_zero_based(&self) -> &[u32] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i as u32 == v)
    }

    fn check_degree(&self, other: &Permutation) -> Result<(), PermError> {
        if self.degree() != other.degree() {
            return Err(PermError::DegreeMismatch { left: self.degree(), right: other.degree() });
        }
        Ok(())
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation, PermError> {
        self.check_degree(other)?;
        Ok(Permutation { images: other.images.iter().map(|&x| self.images[x as usize]).collect() })
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.degree()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v as usize] = i as u32;
        }
        Permutation { images: inv }
    }

    /// `k`-fold composition; negative powers use the inverse.
    pub fn power(&self, k: i64) -> Permutation {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        // Each cycle of length L advances by k mod L.
        let mut images = vec![0u32; self.degree()];
        for cycle in base.cycles_zero_based() {
            let len = cycle.len();
            let shift = (k.unsigned_abs() % len as u64) as usize;
            for (i, &x) in cycle.iter().enumerate() {
                images[x as usize] = cycle[(i + shift) % len];
            }
        }
        Permutation { images }
    }

    fn cycles_zero_based(&self) -> Vec<Vec<u32>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x as u32);
                x = self.images[x] as usize;
            }
            out.push(cycle);
        }
        out
    }

    /// Disjoint cycles in 1-based symbols, each starting at its least element,
    /// sorted by least element, fixed points included as 1-cycles.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        self.cycles_zero_based().into_iter().map(|c| c.into_iter().map(|x| x + 1).collect()).collect()
    }

    /// Cycle lengths in decreasing order.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles_zero_based().iter().map(Vec::len).collect();
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }

    /// Least common multiple of the cycle lengths.
    pub fn order(&self) -> u128 {
        fn gcd(a: u128, b: u128) -> u128 {
            if b == 0 {
                a
            } else {
                gcd(b, a % b)
            }
        }
        self.cycles_zero_based().iter().map(|c| c.len() as u128).fold(1, |acc, l| acc / gcd(acc, l) * l)
    }

    /// True iff the permutation is a single cycle through all `n` symbols.
    pub fn is_n_cycle(&self) -> bool {
        let n = self.degree();
        let mut x = self.images[0] as usize;
        let mut len = 1;
        while x != 0 {
            x = self.images[x] as usize;
            len += 1;
            if len > n {
                return false;
            }
        }
        len == n
    }

    /// True iff the parity of `p(j)` depends only on the parity of `j`.
    pub fn is_parity_respecting(&self) -> Result<bool, PermError> {
        let n = self.degree();
        if n % 2 == 1 {
            return Err(PermError::ParityUndefined(n));
        }
        // 0-based index i has the opposite parity of symbol i+1, and the same
        // shift applies to images, so the test is unchanged.
        let odd_target = self.images[0] % 2;
        let even_target = self.images[1] % 2;
        Ok(self.images.iter().enumerate().all(|(i, &v)| {
            let want = if i % 2 == 0 { odd_target } else { even_target };
            v % 2 == want
        }))
    }

    /// `h ∘ self ∘ h⁻¹`.
    pub fn conjugate(&self, h: &Permutation) -> Result<Permutation, PermError> {
        self.check_degree(h)?;
        let mut images = vec![0u32; self.degree()];
        for (x, &y) in self.images.iter().enumerate() {
            images[h.images[x] as usize] = h.images[y as usize];
        }
        Ok(Permutation { images })
    }

    /// Cycle notation with fixed points omitted, e.g. `(1 3)(2 4)`. When some
    /// symbol is fixed the degree is appended as ` n=K`.
    pub fn cycle_notation(&self) -> String {
        let mut out = String::new();
        let mut has_fixed = false;
        for cycle in self.cycles() {
            if cycle.len() == 1 {
                has_fixed = true;
                continue;
            }
            out.push('(');
            for (i, x) in cycle.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                out.push_str(&x.to_string());
            }
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("()");
        }
        if has_fixed {
            out.push_str(&format!(" n={}", self.degree()));
        }
        out
    }

    /// Parses image-list form `[2,3,4,1]` or cycle form `(1 3)(2 4)`.
    ///
    /// In cycle form the degree comes from an `n=K` token if present, else
    /// from `degree`, else from the largest symbol mentioned.
    pub fn parse_with_degree(text: &str, degree: Option<usize>) -> Result<Self, PermError> {
        Parser::new(text).parse(degree)
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({})", self)
    }
}

/// Image-list form, e.g. `[2,3,4,1]`.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, v) in self.images.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", v + 1)?;
        }
        f.write_str("]")
    }
}

impl FromStr for Permutation {
    type Err = PermError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Permutation::parse_with_degree(s, None)
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.images().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Permutation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let images = Vec::<u32>::deserialize(deserializer)?;
        Permutation::from_images(&images).map_err(serde::de::Error::custom)
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser { bytes: text.as_bytes(), pos: 0 }
    }

    fn err(&self, msg: impl Into<String>) -> PermError {
        PermError::Parse { pos: self.pos, msg: msg.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn number(&mut self) -> Result<u32, PermError> {
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a number"));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse::<u32>()
            .map_err(|_| PermError::Parse { pos: start, msg: "number out of range".into() })
    }

    fn parse(mut self, degree: Option<usize>) -> Result<Permutation, PermError> {
        self.skip_ws();
        match self.peek() {
            Some(b'[') => self.parse_images(),
            Some(b'(') | Some(b'n') => self.parse_cycles(degree),
            Some(_) => Err(self.err("expected '[' or '('")),
            None => Err(self.err("empty input")),
        }
    }

    fn parse_images(&mut self) -> Result<Permutation, PermError> {
        self.pos += 1;
        let mut images = Vec::new();
        loop {
            self.skip_ws();
            if self.peek() == Some(b']') && images.is_empty() {
                return Err(self.err("empty image list"));
            }
            images.push(self.number()?);
            self.skip_ws();
            match self.peek() {
                Some(b',') => self.pos += 1,
                Some(b']') => {
                    self.pos += 1;
                    break;
                }
                _ => return Err(self.err("expected ',' or ']'")),
            }
        }
        self.skip_ws();
        if self.pos != self.bytes.len() {
            return Err(self.err("trailing input"));
        }
        Permutation::from_images(&images)
    }

    fn parse_degree_token(&mut self) -> Result<usize, PermError> {
        self.pos += 1;
        if self.peek() != Some(b'=') {
            return Err(self.err("expected '=' after 'n'"));
        }
        self.pos += 1;
        Ok(self.number()? as usize)
    }

    fn parse_cycles(&mut self, degree: Option<usize>) -> Result<Permutation, PermError> {
        let mut cycles: Vec<Vec<u32>> = Vec::new();
        let mut explicit = None;
        loop {
            self.skip_ws();
            match self.peek() {
                None => break,
                Some(b'n') => {
                    if explicit.is_some() {
                        return Err(self.err("duplicate degree"));
                    }
                    explicit = Some(self.parse_degree_token()?);
                }
                Some(b'(') => {
                    self.pos += 1;
                    let mut cycle = Vec::new();
                    loop {
                        self.skip_ws();
                        match self.peek() {
                            Some(b')') => {
                                self.pos += 1;
                                break;
                            }
                            Some(b',') if !cycle.is_empty() => self.pos += 1,
                            Some(c) if c.is_ascii_digit() => {
                                let x = self.number()?;
                                if x == 0 {
                                    return Err(self.err("symbols are 1-based"));
                                }
                                cycle.push(x);
                            }
                            _ => return Err(self.err("expected a symbol or ')'")),
                        }
                    }
                    cycles.push(cycle);
                }
                Some(_) => return Err(self.err("expected '(' or 'n='")),
            }
        }
        let max_symbol = cycles.iter().flatten().copied().max().unwrap_or(0) as usize;
        let n = explicit.or(degree).unwrap_or(max_symbol);
        if n == 0 {
            return Err(PermError::EmptyDegree);
        }
        if max_symbol > n {
            return Err(PermError::NotAPermutation);
        }
        Permutation::from_cycles(n, &cycles)
    }
}
