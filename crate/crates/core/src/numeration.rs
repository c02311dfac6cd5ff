//! Zeckendorf (Fibonacci) numeration.
//!
//! Words are most-significant-digit first. The last digit carries weight
//! `F_2 = 1`, the one before it `F_3 = 2`, and so on. A word is *valid* when
//! it contains no factor `11` and *canonical* when it is valid and has no
//! leading zero. Zero is the empty word.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

use crate::error::{Error, Result};

/// Largest `k` with `F_k` representable in a `u64`.
const MAX_FIB_INDEX: usize = 93;

/// `F_0 ..= F_93`.
fn fib_table() -> &'static [u64; MAX_FIB_INDEX + 1] {
    static TABLE: std::sync::OnceLock<[u64; MAX_FIB_INDEX + 1]> = std::sync::OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = [0u64; MAX_FIB_INDEX + 1];
        t[1] = 1;
        for i in 2..=MAX_FIB_INDEX {
            t[i] = t[i - 1] + t[i - 2];
        }
        t
    })
}

/// The Fibonacci number `F_k` with `F_0 = 0`, `F_1 = 1`.
///
/// Panics if `k > 93`.
pub fn fibonacci(k: usize) -> u64 {
    fib_table()[k]
}

/// A binary digit word, most significant digit first.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ZeckWord(Vec<u8>);

impl ZeckWord {
    /// Builds a word from raw digits. Panics if a digit is not 0 or 1.
    pub fn from_digits(digits: Vec<u8>) -> Self {
        assert!(digits.iter().all(|&d| d <= 1), "digits must be 0 or 1");
        ZeckWord(digits)
    }

    pub fn empty() -> Self {
        ZeckWord(Vec::new())
    }

    pub fn digits(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn last(&self) -> Option<u8> {
        self.0.last().copied()
    }

    /// No factor `11`.
    pub fn is_valid(&self) -> bool {
        self.0.windows(2).all(|w| w[0] & w[1] == 0)
    }

    /// Valid with no leading zero.
    pub fn is_canonical(&self) -> bool {
        self.is_valid() && self.0.first() != Some(&0)
    }

    /// Weighted digit sum. Defined for every word, valid or not.
    ///
    /// Panics if the word is longer than 92 digits.
    pub fn value(&self) -> u64 {
        value(&self.0)
    }

    /// Appends digits on the right.
    pub fn extended(&self, suffix: &[u8]) -> ZeckWord {
        let mut d = self.0.clone();
        d.extend_from_slice(suffix);
        ZeckWord::from_digits(d)
    }

    /// Left-pads with zeros up to `len` digits (no-op if already longer).
    pub fn padded(&self, len: usize) -> ZeckWord {
        if self.0.len() >= len {
            return self.clone();
        }
        let mut d = vec![0u8; len - self.0.len()];
        d.extend_from_slice(&self.0);
        ZeckWord(d)
    }

    /// The word with its last digit removed.
    pub fn truncated(&self) -> ZeckWord {
        let mut d = self.0.clone();
        d.pop();
        ZeckWord(d)
    }
}

impl fmt::Debug for ZeckWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ZeckWord(\"{self}\")")
    }
}

impl fmt::Display for ZeckWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.0 {
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl FromStr for ZeckWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::Parse(format!("not a binary digit: {other:?}"))),
            })
            .collect::<Result<Vec<u8>>>()
            .map(ZeckWord)
    }
}

/// Weighted digit sum of an msd-first digit slice.
pub fn value(digits: &[u8]) -> u64 {
    let n = digits.len();
    assert!(n < MAX_FIB_INDEX, "word too long for u64 value");
    digits
        .iter()
        .enumerate()
        .filter(|(_, &d)| d == 1)
        .map(|(i, _)| fibonacci(n - i + 1))
        .sum()
}

/// Canonical (greedy) representation of `i`.
pub fn encode(i: u64) -> ZeckWord {
    if i == 0 {
        return ZeckWord::empty();
    }
    // largest k >= 2 with F_k <= i
    let mut k = 2;
    while k < MAX_FIB_INDEX && fibonacci(k + 1) <= i {
        k += 1;
    }
    let mut rest = i;
    let mut digits = Vec::with_capacity(k - 1);
    for j in (2..=k).rev() {
        let f = fibonacci(j);
        if f <= rest {
            digits.push(1);
            rest -= f;
        } else {
            digits.push(0);
        }
    }
    debug_assert_eq!(rest, 0);
    ZeckWord(digits)
}

/// Number of digits of the canonical representation of `i`.
pub fn encoded_len(i: u64) -> usize {
    encode(i).len()
}

/// A tuple of words of equal length, one per track.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TrackWord {
    rows: Vec<ZeckWord>,
}

impl TrackWord {
    /// Rows must be non-empty in number and of equal length.
    pub fn new(rows: Vec<ZeckWord>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::Arity {
                expected: 1,
                found: 0,
            });
        }
        let len = rows[0].len();
        if rows.iter().any(|r| r.len() != len) {
            return Err(Error::Parse("track rows differ in length".into()));
        }
        Ok(TrackWord { rows })
    }

    pub fn arity(&self) -> usize {
        self.rows.len()
    }

    pub fn len(&self) -> usize {
        self.rows[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn rows(&self) -> &[ZeckWord] {
        &self.rows
    }

    /// Column `j` as a digit tuple.
    pub fn column(&self, j: usize) -> Vec<u8> {
        self.rows.iter().map(|r| r.digits()[j]).collect()
    }

    /// All columns as packed symbol indices (track 0 is the most significant bit).
    pub fn symbols(&self) -> Vec<usize> {
        (0..self.len())
            .map(|j| {
                self.rows
                    .iter()
                    .fold(0usize, |acc, r| (acc << 1) | r.digits()[j] as usize)
            })
            .collect()
    }

    /// Adds `extra` all-zero columns on the left.
    pub fn padded_by(&self, extra: usize) -> TrackWord {
        let len = self.len() + extra;
        TrackWord {
            rows: self.rows.iter().map(|r| r.padded(len)).collect(),
        }
    }
}

/// Canonical encodings of `values`, left-padded to a common length.
pub fn pair_encode(values: &[u64]) -> TrackWord {
    let enc: Vec<ZeckWord> = values.iter().map(|&v| encode(v)).collect();
    let len = enc.iter().map(ZeckWord::len).max().unwrap_or(0);
    TrackWord {
        rows: enc.into_iter().map(|w| w.padded(len)).collect(),
    }
}

/// `[x00] = [x] + [x0]`. Always true; exposed for the property suite.
pub fn lemma1a_check(x: &ZeckWord) -> bool {
    x.extended(&[0, 0]).value() == x.value() + x.extended(&[0]).value()
}

/// `-β² < [x0] - α[x] < -β`, decided exactly.
///
/// With `A = 2[x0] - [x]` and `v = [x]` the two bounds become
/// `A + 3 > √5 (v + 1)` and `A + 1 < √5 (v + 1)`.
pub fn lemma1b_check(x: &ZeckWord) -> bool {
    let v = BigInt::from(x.value());
    let a = BigInt::from(2u8) * BigInt::from(x.extended(&[0]).value()) - &v;
    let s = &v + 1;
    let five_s2 = BigInt::from(5u8) * &s * &s;
    let lower = {
        let l = &a + 3;
        l > BigInt::from(0) && &l * &l > five_s2
    };
    let upper = {
        let u = &a + 1;
        u < BigInt::from(0) || &u * &u < five_s2
    };
    lower && upper
}

/// `m·α ≤ t` decided exactly: `m(1+√5)/2 ≤ t  ⇔  m√5 ≤ 2t − m`.
fn alpha_multiple_le(m: &BigInt, t: &BigInt) -> bool {
    let rhs = BigInt::from(2u8) * t - m;
    if rhs < BigInt::from(0) {
        return false;
    }
    BigInt::from(5u8) * m * m <= &rhs * &rhs
}

/// `⌊t / α⌋` in exact integer arithmetic.
pub fn floor_div_alpha(t: u64) -> u64 {
    let tb = BigInt::from(t);
    // ⌊t/α⌋ = ⌊t(√5 − 1)/2⌋; start from an integer square root estimate and correct.
    let root = (BigInt::from(5u8) * &tb * &tb).sqrt();
    let mut m: BigInt = (root - &tb) / 2;
    if m < BigInt::from(0) {
        m = BigInt::from(0);
    }
    while !alpha_multiple_le(&m, &tb) {
        m -= 1;
    }
    loop {
        let next = &m + 1;
        if alpha_multiple_le(&next, &tb) {
            m = next;
        } else {
            break;
        }
    }
    u64::try_from(m).expect("quotient fits")
}

/// Value of `x` given `t = [xa]`, via `⌊(t + 2)/α⌋ − 1`.
///
/// `context` is the word `xa`; it must be non-empty, valid, and have value `t`.
pub fn drop_last(t: u64, context: &ZeckWord) -> Result<u64> {
    if context.is_empty() {
        return Err(Error::InvalidWord("empty word has no last digit".into()));
    }
    if !context.is_valid() {
        return Err(Error::InvalidWord(format!("{context} contains 11")));
    }
    if context.value() != t {
        return Err(Error::InvalidWord(format!(
            "{context} has value {}, not {t}",
            context.value()
        )));
    }
    Ok(floor_div_alpha(t + 2) - 1)
}

/// One step of the difference recurrence
/// `D(xa'a, yb'b) = D(x,y) + D(xa',yb') + (b − n·a) + (b' − n·a')`.
#[allow(clippy::too_many_arguments)]
pub fn difference_update(
    d_prev: i64,
    d_prevprev: i64,
    n: i64,
    a_prev: u8,
    b_prev: u8,
    a: u8,
    b: u8,
) -> Result<i64> {
    if n < 1 {
        return Err(Error::Parameter(format!(
            "multiplier must be positive, got {n}"
        )));
    }
    if a_prev & a == 1 || b_prev & b == 1 {
        return Err(Error::InvalidWord("consecutive ones in extension".into()));
    }
    Ok(d_prevprev + d_prev + (b as i64 - n * a as i64) + (b_prev as i64 - n * a_prev as i64))
}

/// All valid words of exactly `len` digits, in lexicographic order.
pub fn valid_words(len: usize) -> Vec<ZeckWord> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(len);
    fn rec(len: usize, cur: &mut Vec<u8>, out: &mut Vec<ZeckWord>) {
        if cur.len() == len {
            out.push(ZeckWord(cur.clone()));
            return;
        }
        cur.push(0);
        rec(len, cur, out);
        cur.pop();
        if cur.last() != Some(&1) {
            cur.push(1);
            rec(len, cur, out);
            cur.pop();
        }
    }
    rec(len, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> ZeckWord {
        s.parse().unwrap()
    }

    #[test]
    fn value_examples() {
        assert_eq!(w("01001").value(), 6);
        assert_eq!(w("").value(), 0);
        assert_eq!(w("1000010100").value(), 100);
        // invalid words still have a weighted sum
        assert_eq!(w("11").value(), 3);
    }

    #[test]
    fn encode_examples() {
        assert_eq!(encode(6).to_string(), "1001");
        assert!(encode(0).is_empty());
        assert_eq!(encode(100).to_string(), "1000010100");
    }

    #[test]
    fn pair_encode_examples() {
        let t = pair_encode(&[4, 11]);
        assert_eq!(t.rows()[0].to_string(), "00101");
        assert_eq!(t.rows()[1].to_string(), "10100");
        let cols: Vec<Vec<u8>> = (0..t.len()).map(|j| t.column(j)).collect();
        assert_eq!(
            cols,
            vec![vec![0, 1], vec![0, 0], vec![1, 1], vec![0, 0], vec![1, 0]]
        );
        let z = pair_encode(&[0, 0]);
        assert_eq!(z.arity(), 2);
        assert!(z.is_empty());
        let t = pair_encode(&[3, 6]);
        assert_eq!(t.rows()[0].to_string(), "0100");
        assert_eq!(t.rows()[1].to_string(), "1001");
    }

    #[test]
    fn lemma1a_examples() {
        assert!(lemma1a_check(&w("")));
        assert!(lemma1a_check(&w("1001")));
        assert!(lemma1a_check(&w("101")));
    }

    #[test]
    fn drop_last_examples() {
        assert_eq!(drop_last(6, &w("1001")).unwrap(), 3);
        assert_eq!(drop_last(1, &w("1")).unwrap(), 0);
        // truncation oracle: value("100001010") = 55 + 5 + 2
        assert_eq!(w("100001010").value(), 62);
        assert_eq!(drop_last(100, &w("1000010100")).unwrap(), 62);
    }

    #[test]
    fn drop_last_rejects_bad_context() {
        assert!(drop_last(0, &w("")).is_err());
        assert!(drop_last(3, &w("11")).is_err());
        assert!(drop_last(7, &w("1001")).is_err());
    }

    #[test]
    fn difference_update_examples() {
        assert_eq!(difference_update(0, 0, 1, 0, 0, 0, 0).unwrap(), 0);
        assert_eq!(difference_update(1, 0, 2, 0, 1, 1, 0).unwrap(), 0);
        assert_eq!(difference_update(-1, -1, 1, 0, 0, 0, 1).unwrap(), -1);
        assert!(difference_update(0, 0, 1, 1, 0, 1, 0).is_err());
        assert!(difference_update(0, 0, 1, 0, 1, 0, 1).is_err());
    }

    #[test]
    fn floor_div_alpha_small() {
        // brute force with a wide float margin: only check values far from the boundary
        for t in 0u64..5000 {
            let m = floor_div_alpha(t);
            let f = t as f64 / ((1.0 + 5f64.sqrt()) / 2.0);
            assert_eq!(m, f.floor() as u64, "t = {t}");
        }
    }

    #[test]
    fn floor_div_alpha_large_fibonacci() {
        // F_{k+1}/α lies just above or below F_k; the sign alternates with k.
        for k in 10..=90 {
            let t = fibonacci(k + 1);
            let m = floor_div_alpha(t);
            assert!(m == fibonacci(k) || m + 1 == fibonacci(k), "k = {k}");
        }
    }

    #[test]
    fn valid_word_counts_are_fibonacci() {
        for len in 0..15 {
            assert_eq!(valid_words(len).len() as u64, fibonacci(len + 2));
        }
    }

    #[test]
    fn parse_rejects_non_binary() {
        assert!("102".parse::<ZeckWord>().is_err());
    }
}
