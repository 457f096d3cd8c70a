//! Exact arithmetic in BS(1,N) = <a, b | b a b^-1 = a^N>.
//!
//! Every element has a unique reduced spelling `b^-j a^k b^i` with `j, i >= 0`
//! and never `i > 0 && j > 0 && N | k`. Elements are stored as that triple; the
//! a-exponent is an unbounded integer because products along b-chains scale it
//! by powers of N.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::GroupError;

/// Largest a-exponent (in bits) that arithmetic will produce before reporting
/// [`GroupError::Overflow`].
pub const MAX_EXPONENT_BITS: u64 = 1 << 24;

/// The Baumslag-Solitar parameter N of BS(1,N).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupParams {
    n: u32,
}

impl GroupParams {
    pub fn new(n: u32) -> Result<Self, GroupError> {
        if n < 2 {
            return Err(GroupError::InvalidParameter(n));
        }
        Ok(GroupParams { n })
    }

    #[inline]
    pub fn n(&self) -> u32 {
        self.n
    }

    /// `N^e` as an unbounded integer, subject to the exponent budget.
    pub fn power(&self, e: u64) -> Result<BigInt, GroupError> {
        psi_pow(&BigInt::one(), e, self)
    }
}

/// A reduced element `b^-j a^k b^i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Element {
    j: u64,
    k: BigInt,
    i: u64,
}

impl Element {
    pub fn identity() -> Self {
        Element {
            j: 0,
            k: BigInt::zero(),
            i: 0,
        }
    }

    /// `a^k`.
    pub fn a_pow(k: impl Into<BigInt>) -> Self {
        Element {
            j: 0,
            k: k.into(),
            i: 0,
        }
    }

    /// `b^e` for any integer `e`.
    pub fn b_pow(e: i64) -> Self {
        if e >= 0 {
            Element {
                j: 0,
                k: BigInt::zero(),
                i: e as u64,
            }
        } else {
            Element {
                j: e.unsigned_abs(),
                k: BigInt::zero(),
                i: 0,
            }
        }
    }

    /// `a^k b^i`, the vertices of rectangles and upper sheets. Always reduced.
    pub fn ak_bi(k: impl Into<BigInt>, i: u64) -> Self {
        Element {
            j: 0,
            k: k.into(),
            i,
        }
    }

    /// Builds an element from a triple that the caller asserts is reduced.
    ///
    /// Returns `None` if the triple violates reducedness.
    pub fn from_reduced(j: u64, k: BigInt, i: u64, p: &GroupParams) -> Option<Self> {
        let e = Element { j, k, i };
        e.is_reduced(p).then_some(e)
    }

    #[inline]
    pub fn j(&self) -> u64 {
        self.j
    }

    #[inline]
    pub fn k(&self) -> &BigInt {
        &self.k
    }

    #[inline]
    pub fn i(&self) -> u64 {
        self.i
    }

    pub fn is_identity(&self) -> bool {
        self.j == 0 && self.i == 0 && self.k.is_zero()
    }

    pub fn is_reduced(&self, p: &GroupParams) -> bool {
        !(self.i > 0 && self.j > 0 && self.k.is_multiple_of(&BigInt::from(p.n)))
    }

    /// The level `i - j`, i.e. the image under the homomorphism onto Z that
    /// kills `a`.
    pub fn level(&self) -> i64 {
        self.i as i64 - self.j as i64
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", emit_word(self))
    }
}

/// Reduces `b^-j a^k b^i` to normal form by repeatedly applying
/// `b^-1 a^(Nk) b = a^k`.
pub fn normalize(j: u64, k: BigInt, i: u64, p: &GroupParams) -> Element {
    let (mut j, mut k, mut i) = (j, k, i);
    if k.is_zero() {
        let r = j.min(i);
        return Element {
            j: j - r,
            k,
            i: i - r,
        };
    }
    let n = BigInt::from(p.n);
    while i > 0 && j > 0 {
        let (q, rem) = k.div_rem(&n);
        if !rem.is_zero() {
            break;
        }
        k = q;
        i -= 1;
        j -= 1;
    }
    Element { j, k, i }
}

/// `k * N^e` with an exponent budget.
pub fn psi_pow(k: &BigInt, e: u64, p: &GroupParams) -> Result<BigInt, GroupError> {
    if e == 0 || k.is_zero() {
        return Ok(k.clone());
    }
    let log2n = 64 - u64::from(p.n).leading_zeros() as u64;
    let bits = e.saturating_mul(log2n).saturating_add(k.bits());
    if bits > MAX_EXPONENT_BITS || e > u64::from(u32::MAX) {
        return Err(GroupError::Overflow { bits });
    }
    Ok(k * num_traits::pow::pow(BigInt::from(p.n), e as usize))
}

/// Product in BS(1,N), using `b^t a^k = a^(k N^t) b^t`.
pub fn multiply(g: &Element, h: &Element, p: &GroupParams) -> Result<Element, GroupError> {
    let (j1, k1, i1) = (g.j, &g.k, g.i);
    let (j2, k2, i2) = (h.j, &h.k, h.i);
    let (j, k, i) = if i1 >= j2 {
        let k = k1 + psi_pow(k2, i1 - j2, p)?;
        let i = (i1 - j2).checked_add(i2).ok_or(GroupError::LevelOverflow)?;
        (j1, k, i)
    } else {
        let j = j1.checked_add(j2 - i1).ok_or(GroupError::LevelOverflow)?;
        let k = psi_pow(k1, j2 - i1, p)? + k2;
        (j, k, i2)
    };
    Ok(normalize(j, k, i, p))
}

pub fn invert(g: &Element) -> Element {
    Element {
        j: g.i,
        k: -&g.k,
        i: g.j,
    }
}

/// The four Cayley neighbors `(g a, g a^-1, g b, g b^-1)`.
pub fn neighbors(g: &Element, p: &GroupParams) -> Result<[Element; 4], GroupError> {
    let step = psi_pow(&BigInt::one(), g.i, p)?;
    let ga = Element {
        j: g.j,
        k: &g.k + &step,
        i: g.i,
    };
    let ga_inv = Element {
        j: g.j,
        k: &g.k - &step,
        i: g.i,
    };
    let gb = normalize(g.j, g.k.clone(), g.i + 1, p);
    let gb_inv = if g.i > 0 {
        Element {
            j: g.j,
            k: g.k.clone(),
            i: g.i - 1,
        }
    } else {
        Element {
            j: g.j + 1,
            k: psi_pow(&g.k, 1, p)?,
            i: 0,
        }
    };
    Ok([ga, ga_inv, gb, gb_inv])
}

// ---------------------------------------------------------------------------
// Words

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Generator {
    A,
    B,
}

impl Generator {
    pub fn as_char(self) -> char {
        match self {
            Generator::A => 'a',
            Generator::B => 'b',
        }
    }
}

/// A power of a single generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Syllable {
    pub gen: Generator,
    pub exp: BigInt,
}

/// A word over `{a, a^-1, b, b^-1}`, stored as generator powers.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Word {
    pub syllables: Vec<Syllable>,
}

impl Word {
    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Letter count, with `a^k` contributing `|k|`.
    pub fn letter_count(&self) -> BigInt {
        self.syllables.iter().map(|s| s.exp.abs()).sum()
    }

    pub fn parse(text: &str) -> Result<Word, GroupError> {
        parse_syntax(text)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return write!(f, "e");
        }
        for (idx, s) in self.syllables.iter().enumerate() {
            if idx > 0 {
                write!(f, " ")?;
            }
            let up = match s.gen {
                Generator::A => 'A',
                Generator::B => 'B',
            };
            // negative b-powers are spelled with the inverse letter
            if s.gen == Generator::B && s.exp.is_negative() {
                let e = -&s.exp;
                if e.is_one() {
                    write!(f, "{up}")?;
                } else {
                    write!(f, "{up}^{e}")?;
                }
            } else if s.exp.is_one() {
                write!(f, "{}", s.gen.as_char())?;
            } else {
                write!(f, "{}^{}", s.gen.as_char(), s.exp)?;
            }
        }
        Ok(())
    }
}

/// Canonical spelling `B^j a^k b^i`.
pub fn emit_word(g: &Element) -> Word {
    let mut syllables = Vec::with_capacity(3);
    if g.j > 0 {
        syllables.push(Syllable {
            gen: Generator::B,
            exp: -BigInt::from(g.j),
        });
    }
    if !g.k.is_zero() {
        syllables.push(Syllable {
            gen: Generator::A,
            exp: g.k.clone(),
        });
    }
    if g.i > 0 {
        syllables.push(Syllable {
            gen: Generator::B,
            exp: BigInt::from(g.i),
        });
    }
    Word { syllables }
}

/// Folds a word through [`multiply`].
pub fn parse_word(w: &Word, p: &GroupParams) -> Result<Element, GroupError> {
    let mut acc = Element::identity();
    for s in &w.syllables {
        let factor = match s.gen {
            Generator::A => Element::a_pow(s.exp.clone()),
            Generator::B => {
                let e = s.exp.to_i64().ok_or(GroupError::LevelOverflow)?;
                Element::b_pow(e)
            }
        };
        acc = multiply(&acc, &factor, p)?;
    }
    Ok(acc)
}

/// Parses text and evaluates it in one step.
pub fn eval_str(text: &str, p: &GroupParams) -> Result<Element, GroupError> {
    parse_word(&Word::parse(text)?, p)
}

fn superscript_digit(c: char) -> Option<u32> {
    match c {
        '⁰' => Some(0),
        '¹' => Some(1),
        '²' => Some(2),
        '³' => Some(3),
        '⁴' => Some(4),
        '⁵' => Some(5),
        '⁶' => Some(6),
        '⁷' => Some(7),
        '⁸' => Some(8),
        '⁹' => Some(9),
        _ => None,
    }
}

fn parse_syntax(text: &str) -> Result<Word, GroupError> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut pos = 0;
    let mut syllables: Vec<Syllable> = Vec::new();
    while pos < chars.len() {
        let (at, c) = chars[pos];
        if c.is_whitespace() || c == '*' || c == '.' || c == '·' {
            pos += 1;
            continue;
        }
        let (gen, sign) = match c {
            'a' => (Generator::A, 1),
            'A' => (Generator::A, -1),
            'b' => (Generator::B, 1),
            'B' => (Generator::B, -1),
            'e' => {
                pos += 1;
                continue;
            }
            other => {
                return Err(GroupError::Parse {
                    position: at,
                    found: other,
                })
            }
        };
        pos += 1;
        let mut exp = BigInt::from(sign);
        if pos < chars.len() && chars[pos].1 == '^' {
            pos += 1;
            let start = pos;
            let mut neg = false;
            if pos < chars.len() && (chars[pos].1 == '-' || chars[pos].1 == '+') {
                neg = chars[pos].1 == '-';
                pos += 1;
            }
            let digits_start = pos;
            while pos < chars.len() && chars[pos].1.is_ascii_digit() {
                pos += 1;
            }
            if digits_start == pos {
                let (at, found) = chars.get(start).copied().unwrap_or((text.len(), '\0'));
                return Err(GroupError::Parse {
                    position: at,
                    found,
                });
            }
            let s: String = chars[digits_start..pos].iter().map(|&(_, c)| c).collect();
            let mut v: BigInt = s.parse().expect("ascii digits");
            if neg {
                v = -v;
            }
            exp *= v;
        } else if pos < chars.len() && chars[pos].1 == '⁻' {
            pos += 1;
            let digits_start = pos;
            let mut v = BigInt::zero();
            while let Some(d) = chars.get(pos).and_then(|&(_, c)| superscript_digit(c)) {
                v = v * 10 + d;
                pos += 1;
            }
            if digits_start == pos {
                let (at, found) = chars.get(pos).copied().unwrap_or((text.len(), '\0'));
                return Err(GroupError::Parse {
                    position: at,
                    found,
                });
            }
            exp *= -v;
        }
        if exp.is_zero() {
            continue;
        }
        match syllables.last_mut() {
            Some(last) if last.gen == gen => {
                last.exp += exp;
                if last.exp.is_zero() {
                    syllables.pop();
                }
            }
            _ => syllables.push(Syllable { gen, exp }),
        }
    }
    Ok(Word { syllables })
}
