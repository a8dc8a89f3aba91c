use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    L,
    R,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("empty symbolic word")]
    Empty,
    #[error("invalid symbol {0:?} in word (expected L or R)")]
    BadSymbol(char),
}

/// Symbolic itinerary of a periodic solution, e.g. `LRR`.
///
/// Parsing accepts plain letters and exponents, so `L2R3` equals `LLRRR`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word(Vec<Side>);

impl Word {
    pub fn new(symbols: Vec<Side>) -> Result<Self, WordError> {
        if symbols.is_empty() {
            return Err(WordError::Empty);
        }
        Ok(Self(symbols))
    }

    fn repeat(head: &[(Side, usize)]) -> Self {
        let v: Vec<Side> = head
            .iter()
            .flat_map(|&(s, k)| std::iter::repeat(s).take(k))
            .collect();
        Word::new(v).expect("non-empty by construction")
    }

    /// `L R^{p-1}`.
    pub fn lr_pow(p: usize) -> Self {
        Self::repeat(&[(Side::L, 1), (Side::R, p - 1)])
    }

    /// `L^2 R^{p-2}`.
    pub fn l2r_pow(p: usize) -> Self {
        Self::repeat(&[(Side::L, 2), (Side::R, p - 2)])
    }

    /// `L^{p-1} R`.
    pub fn lpr(p: usize) -> Self {
        Self::repeat(&[(Side::L, p - 1), (Side::R, 1)])
    }

    pub fn symbols(&self) -> &[Side] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Cyclic rotation starting at symbol `k`.
    pub fn rotate(&self, k: usize) -> Word {
        let mut v = self.0.clone();
        v.rotate_left(k % self.0.len());
        Word(v)
    }
}

impl FromStr for Word {
    type Err = WordError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut out = Vec::new();
        let mut chars = s.trim().chars().peekable();
        while let Some(c) = chars.next() {
            let side = match c {
                'L' | 'l' => Side::L,
                'R' | 'r' => Side::R,
                '^' => continue,
                other => return Err(WordError::BadSymbol(other)),
            };
            let mut digits = String::new();
            while let Some(d) = chars.peek().copied() {
                if d.is_ascii_digit() || (d == '^' && digits.is_empty()) {
                    if d != '^' {
                        digits.push(d);
                    }
                    chars.next();
                } else {
                    break;
                }
            }
            let k = if digits.is_empty() {
                1
            } else {
                digits.parse().map_err(|_| WordError::BadSymbol(c))?
            };
            out.extend(std::iter::repeat(side).take(k));
        }
        Word::new(out)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            f.write_str(match s {
                Side::L => "L",
                Side::R => "R",
            })?;
        }
        Ok(())
    }
}
