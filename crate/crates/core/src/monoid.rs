//! The free monoid `SL2(N)` on `L = [[1,0],[1,1]]` and `R = [[1,1],[0,1]]`.
//!
//! All arithmetic here is over exact natural numbers. Every matrix with
//! non-negative entries and determinant one is a unique word in `L`, `R`,
//! recovered by a subtractive Euclidean algorithm.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, FactorReject, Reject, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    L,
    R,
}

impl Letter {
    /// Generator bit convention: `0 -> L`, `1 -> R`.
    pub fn from_bit(bit: bool) -> Letter {
        if bit {
            Letter::R
        } else {
            Letter::L
        }
    }

    pub fn bit(self) -> bool {
        self == Letter::R
    }

    pub fn matrix(self) -> NatMatrix {
        match self {
            Letter::L => NatMatrix::from_u64(1, 0, 1, 1),
            Letter::R => NatMatrix::from_u64(1, 1, 0, 1),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn repeat(letter: Letter, k: usize) -> Self {
        Word(vec![letter; k])
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        Word(bits.iter().map(|&b| Letter::from_bit(b)).collect())
    }

    pub fn to_bits(&self) -> Vec<bool> {
        self.0.iter().map(|l| l.bit()).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn matrix(&self) -> NatMatrix {
        word_to_matrix(self)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            f.write_str(match l {
                Letter::L => "L",
                Letter::R => "R",
            })?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                'L' | 'l' => Ok(Letter::L),
                'R' | 'r' => Ok(Letter::R),
                other => Err(Error::usage(format!("invalid letter `{other}` in word"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}

/// A 2x2 matrix `[[a, b], [c, d]]` of natural numbers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NatMatrix {
    pub a: BigUint,
    pub b: BigUint,
    pub c: BigUint,
    pub d: BigUint,
}

impl NatMatrix {
    pub fn new(a: BigUint, b: BigUint, c: BigUint, d: BigUint) -> Self {
        NatMatrix { a, b, c, d }
    }

    pub fn from_u64(a: u64, b: u64, c: u64, d: u64) -> Self {
        NatMatrix::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn identity() -> Self {
        NatMatrix::from_u64(1, 0, 0, 1)
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_one() && self.b.is_zero() && self.c.is_zero() && self.d.is_one()
    }

    pub fn trace(&self) -> BigUint {
        &self.a + &self.d
    }

    pub fn sup_norm(&self) -> &BigUint {
        [&self.a, &self.b, &self.c, &self.d]
            .into_iter()
            .max()
            .expect("four entries")
    }

    /// True iff `ad - bc = 1` exactly.
    pub fn has_unit_determinant(&self) -> bool {
        &self.a * &self.d == &self.b * &self.c + 1u32
    }

    /// Right-multiplies in place by a generator.
    pub fn push(&mut self, x: Letter) {
        match x {
            // M L = [[a + b, b], [c + d, d]]
            Letter::L => {
                self.a += &self.b;
                self.c += &self.d;
            }
            // M R = [[a, a + b], [c, c + d]]
            Letter::R => {
                self.b += &self.a;
                self.d += &self.c;
            }
        }
    }

    pub fn mul(&self, o: &NatMatrix) -> NatMatrix {
        NatMatrix {
            a: &self.a * &o.a + &self.b * &o.c,
            b: &self.a * &o.b + &self.b * &o.d,
            c: &self.c * &o.a + &self.d * &o.c,
            d: &self.c * &o.b + &self.d * &o.d,
        }
    }
}

/// Exact product of the word's letters; the empty word gives the identity.
pub fn word_to_matrix(w: &Word) -> NatMatrix {
    let mut m = NatMatrix::identity();
    for &x in &w.0 {
        m.push(x);
    }
    m
}

/// Recovers the unique word of length exactly `expected_len` whose product is `m`.
///
/// Each step emits `L` when `a <= c` (with `c > 0`) and `R` otherwise, then
/// strips that letter from the left. Running off the non-negative
/// quadrant, reaching the identity early, or not ending on the identity
/// rejects the input.
pub fn factor(m: &NatMatrix, expected_len: usize) -> std::result::Result<Word, FactorReject> {
    let NatMatrix {
        mut a,
        mut b,
        mut c,
        mut d,
    } = m.clone();
    let mut letters = Vec::with_capacity(expected_len);
    for step in 0..expected_len {
        if a.is_one() && b.is_zero() && c.is_zero() && d.is_one() {
            return Err(FactorReject::EarlyIdentity { step });
        }
        if !c.is_zero() && a <= c {
            // L^-1 M = [[a, b], [c - a, d - b]]
            if d < b {
                return Err(FactorReject::Negative { step });
            }
            c -= &a;
            d -= &b;
            letters.push(Letter::L);
        } else {
            // R^-1 M = [[a - c, b - d], [c, d]]
            if a < c || b < d {
                return Err(FactorReject::Negative { step });
            }
            a -= &c;
            b -= &d;
            letters.push(Letter::R);
        }
    }
    if a.is_one() && b.is_zero() && c.is_zero() && d.is_one() {
        Ok(Word(letters))
    } else {
        Err(FactorReject::NotIdentity)
    }
}

/// Largest entry over all words of length `k`: the Fibonacci number
/// `F(k + 1)` with `F(1) = F(2) = 1`, attained by alternating words.
pub fn entry_bound_exact(k: usize) -> BigUint {
    let (mut prev, mut cur) = (BigUint::zero(), BigUint::one());
    for _ in 0..k {
        let next = &prev + &cur;
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

/// `trace(M x)` from `trace(M)` plus one entry: `+b` for `L`, `+c` for `R`.
pub fn trace_step(m: &NatMatrix, x: Letter) -> BigUint {
    match x {
        Letter::L => m.trace() + &m.b,
        Letter::R => m.trace() + &m.c,
    }
}

fn check_generators(g0: &Word, g1: &Word) -> Result<usize> {
    if g0.is_empty() || g0.len() != g1.len() {
        return Err(Error::usage(
            "generator words must be non-empty and of equal length",
        ));
    }
    if g0 == g1 {
        return Err(Error::usage("generator words must differ"));
    }
    Ok(g0.len())
}

/// Concatenates `g0` / `g1` according to the bits, first bit first.
pub fn bits_to_word(bits: &[bool], g0: &Word, g1: &Word) -> Result<Word> {
    let l = check_generators(g0, g1)?;
    let mut out = Vec::with_capacity(l * bits.len());
    for &bit in bits {
        out.extend_from_slice(if bit { &g1.0 } else { &g0.0 });
    }
    Ok(Word(out))
}

/// Splits `w` into generator-sized chunks and maps each back to its bit.
pub fn word_to_bits(w: &Word, g0: &Word, g1: &Word) -> Result<Vec<bool>> {
    let l = check_generators(g0, g1)?;
    if !w.len().is_multiple_of(l) {
        return Err(Reject::BadLength.into());
    }
    w.0.chunks(l)
        .enumerate()
        .map(|(index, chunk)| {
            if chunk == g0.letters() {
                Ok(false)
            } else if chunk == g1.letters() {
                Ok(true)
            } else {
                Err(Reject::BadChunk { index }.into())
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use Letter::{L, R};

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn word_to_matrix_examples() {
        assert_eq!(word_to_matrix(&Word::default()), NatMatrix::identity());
        assert_eq!(word_to_matrix(&w("LR")), NatMatrix::from_u64(1, 1, 1, 2));
        assert_eq!(
            word_to_matrix(&Word::repeat(L, 9)),
            NatMatrix::from_u64(1, 0, 9, 1)
        );
    }

    #[test]
    fn factor_examples() {
        assert_eq!(factor(&NatMatrix::identity(), 0).unwrap(), Word::default());
        assert_eq!(
            factor(&NatMatrix::from_u64(1, 1, 1, 2), 2).unwrap(),
            w("LR")
        );
        assert_eq!(
            factor(&NatMatrix::from_u64(2, 1, 1, 1), 2).unwrap(),
            w("RL")
        );
        assert_eq!(
            factor(&NatMatrix::from_u64(1, 1, 1, 2), 3),
            Err(FactorReject::EarlyIdentity { step: 2 })
        );
        assert_eq!(
            factor(&NatMatrix::from_u64(1, 1, 1, 2), 1),
            Err(FactorReject::NotIdentity)
        );
    }

    #[test]
    fn factor_rejects_non_sl2() {
        // det 2: [[2,0],[0,1]] strips R forever without reaching I.
        assert!(factor(&NatMatrix::from_u64(2, 0, 0, 1), 4).is_err());
        // [[1,2],[1,1]]: a <= c picks L, then d - b < 0.
        assert_eq!(
            factor(&NatMatrix::from_u64(1, 2, 1, 1), 3),
            Err(FactorReject::Negative { step: 0 })
        );
    }

    #[test]
    fn entry_bound_small() {
        let got: Vec<u64> = (0..8)
            .map(|k| entry_bound_exact(k).try_into().unwrap())
            .collect();
        assert_eq!(got, [1, 1, 2, 3, 5, 8, 13, 21]);
    }

    #[test]
    fn trace_step_examples() {
        assert_eq!(trace_step(&NatMatrix::identity(), L), BigUint::from(2u32));
        assert_eq!(trace_step(&R.matrix(), L), BigUint::from(3u32));
        assert_eq!(trace_step(&L.matrix(), R), BigUint::from(3u32));
    }

    #[test]
    fn bits_word_codec_examples() {
        let (l1, r1) = (w("L"), w("R"));
        assert_eq!(bits_to_word(&[], &l1, &r1).unwrap(), Word::default());
        assert_eq!(bits_to_word(&[false, true], &l1, &r1).unwrap(), w("LR"));
        assert_eq!(
            bits_to_word(&[true, true], &w("LL"), &w("RL")).unwrap(),
            w("RLRL")
        );

        assert_eq!(word_to_bits(&w("LR"), &l1, &r1).unwrap(), [false, true]);
        assert_eq!(
            word_to_bits(&w("RLRL"), &w("LL"), &w("RL")).unwrap(),
            [true, true]
        );
        assert!(matches!(
            word_to_bits(&w("LL"), &w("LR"), &w("RL")),
            Err(Error::Reject(Reject::BadChunk { index: 0 }))
        ));
        assert!(matches!(
            word_to_bits(&w("LLL"), &w("LR"), &w("RL")),
            Err(Error::Reject(Reject::BadLength))
        ));
    }

    #[test]
    fn generator_constraints() {
        assert!(matches!(
            bits_to_word(&[true], &w("L"), &w("L")),
            Err(Error::Usage(_))
        ));
        assert!(matches!(
            bits_to_word(&[true], &w("L"), &w("LR")),
            Err(Error::Usage(_))
        ));
        assert!(matches!(
            word_to_bits(&w(""), &w(""), &w("")),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn parse_word() {
        assert_eq!(w("lRr"), Word(vec![L, R, R]));
        assert!("LX".parse::<Word>().is_err());
        assert_eq!(w("RLLR").to_string(), "RLLR");
    }
}
