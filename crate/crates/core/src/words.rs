//! Words over a finite alphabet `1..=N` under the graded lexicographic
//! order: shorter words first, ties broken letter by letter. This is the
//! unique standard order in which every word has finitely many predecessors,
//! so ranks, successors, and predecessors are all well defined.

use crate::error::{Error, Result};
use std::cmp::Ordering;
use std::fmt;

/// A word over generators `1..=N`. The alphabet size is carried by the
/// [`Alphabet`] context, not the word itself; ordering only needs letters.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Builds a word from letters without an alphabet bound check; use
    /// [`Alphabet::word`] when the letters come from outside.
    pub fn from_unchecked(letters: Vec<u8>) -> Self {
        Word(letters)
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Concatenation `self·other`.
    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    /// Splits off the first letter: `kσ ↦ (k, σ)`.
    pub fn split_first(&self) -> Option<(u8, Word)> {
        self.0
            .split_first()
            .map(|(&k, rest)| (k, Word(rest.to_vec())))
    }

    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.0.starts_with(&self.0)
    }

    /// The `δ` with `other = self·δ`, when `self` is a prefix of `other`.
    pub fn strip_prefix(&self, other: &Word) -> Option<Word> {
        other
            .0
            .strip_prefix(self.0.as_slice())
            .map(|rest| Word(rest.to_vec()))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    /// Digit string; the empty word prints as `e`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("e");
        }
        for &a in &self.0 {
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

/// Alphabet context: the generator count `N`, with ranking and counter
/// arithmetic for the graded order. Letters are single digits, so
/// `1 ≤ N ≤ 9`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Alphabet {
    n: usize,
}

impl Alphabet {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyAlphabet);
        }
        if n > 9 {
            return Err(Error::InvalidArgument {
                field: "alphabet size",
                reason: format!("at most 9 single-digit generators, got {n}"),
            });
        }
        Ok(Alphabet { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Validates letters against the alphabet.
    pub fn word(&self, letters: &[u8]) -> Result<Word> {
        for &a in letters {
            if a == 0 || a as usize > self.n {
                return Err(Error::BadLetter {
                    letter: a,
                    n: self.n,
                });
            }
        }
        Ok(Word(letters.to_vec()))
    }

    /// Parses the digit text form; `"e"` is the empty word.
    pub fn parse(&self, text: &str) -> Result<Word> {
        if text == "e" {
            return Ok(Word::empty());
        }
        let mut letters = Vec::with_capacity(text.len());
        for c in text.chars() {
            let a = c.to_digit(10).ok_or(Error::InvalidArgument {
                field: "word",
                reason: format!("non-digit character {c:?}"),
            })? as u8;
            letters.push(a);
        }
        self.word(&letters)
    }

    /// Number of words `τ ≺ σ`: all shorter words plus the lexicographic
    /// offset within the length class.
    pub fn rank(&self, w: &Word) -> usize {
        let mut r = 0;
        let mut power = 1;
        for m in 0..w.len() {
            // Words of length m, plus the base-N digit at position from the
            // right.
            r += power;
            let digit = (w.letters()[w.len() - 1 - m] - 1) as usize;
            r += digit * power;
            power *= self.n;
        }
        r
    }

    /// `l(σ) = rank(σ) + 1`: how many words are `⪯ σ`.
    pub fn l_value(&self, w: &Word) -> usize {
        self.rank(w) + 1
    }

    /// Inverse of [`Alphabet::rank`].
    pub fn unrank(&self, rank: usize) -> Word {
        let mut remaining = rank;
        let mut len = 0;
        let mut count = 1; // N^len
        while remaining >= count {
            remaining -= count;
            count *= self.n;
            len += 1;
        }
        let mut letters = vec![0u8; len];
        for i in (0..len).rev() {
            letters[i] = (remaining % self.n) as u8 + 1;
            remaining /= self.n;
        }
        Word(letters)
    }

    /// Next word in graded order: a base-`N` counter that grows one letter
    /// when it overflows.
    pub fn succ(&self, w: &Word) -> Word {
        let mut letters = w.letters().to_vec();
        for i in (0..letters.len()).rev() {
            if (letters[i] as usize) < self.n {
                letters[i] += 1;
                return Word(letters);
            }
            letters[i] = 1;
        }
        letters.insert(0, 1);
        Word(letters)
    }

    /// Previous word in graded order; the empty word has none.
    pub fn pred(&self, w: &Word) -> Result<Word> {
        if w.is_empty() {
            return Err(Error::EmptyWordPred);
        }
        let mut letters = w.letters().to_vec();
        for i in (0..letters.len()).rev() {
            if letters[i] > 1 {
                letters[i] -= 1;
                return Ok(Word(letters));
            }
            letters[i] = self.n as u8;
        }
        letters.pop();
        Ok(Word(letters))
    }

    /// Section size: number of words of length ≤ `depth`.
    pub fn section_size(&self, depth: usize) -> usize {
        let mut total = 0;
        let mut count = 1;
        for _ in 0..=depth {
            total += count;
            count *= self.n;
        }
        total
    }

    /// All words of length ≤ `depth` in graded order.
    pub fn words_up_to(&self, depth: usize) -> Vec<Word> {
        let size = self.section_size(depth);
        let mut out = Vec::with_capacity(size);
        let mut w = Word::empty();
        for _ in 0..size {
            let next = self.succ(&w);
            out.push(w);
            w = next;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two() -> Alphabet {
        Alphabet::new(2).unwrap()
    }

    #[test]
    fn graded_order_enumeration_for_two_generators() {
        let a = two();
        let words = a.words_up_to(3);
        let text: Vec<String> = words.iter().map(|w| w.to_string()).collect();
        assert_eq!(
            &text[..7],
            &["e", "1", "2", "11", "12", "21", "22"],
            "front of the graded order"
        );
        assert_eq!(words.len(), 15);
        assert_eq!(text[7], "111");
        assert_eq!(text[14], "222");
        let mut sorted = words.clone();
        sorted.sort();
        assert_eq!(sorted, words, "Ord implementation matches enumeration");
    }

    #[test]
    fn rank_is_the_enumeration_index() {
        for n in 1..=3usize {
            let a = Alphabet::new(n).unwrap();
            for (i, w) in a.words_up_to(4).into_iter().enumerate() {
                assert_eq!(a.rank(&w), i, "rank of {w} over N={n}");
                assert_eq!(a.unrank(i), w, "unrank of {i} over N={n}");
            }
        }
    }

    #[test]
    fn hand_ranks() {
        let a = two();
        assert_eq!(a.l_value(&a.parse("21").unwrap()), 6);
        let b = Alphabet::new(3).unwrap();
        assert_eq!(b.rank(&b.parse("13").unwrap()), 6);
        assert_eq!(b.l_value(&b.parse("13").unwrap()), 7);
        assert_eq!(a.rank(&Word::empty()), 0);
    }

    #[test]
    fn succ_and_pred_are_inverse() {
        let a = two();
        assert_eq!(a.succ(&a.parse("2").unwrap()), a.parse("11").unwrap());
        assert_eq!(a.pred(&a.parse("11").unwrap()).unwrap(), a.parse("2").unwrap());
        assert!(matches!(a.pred(&Word::empty()), Err(Error::EmptyWordPred)));
        for w in a.words_up_to(4) {
            let s = a.succ(&w);
            assert_eq!(a.pred(&s).unwrap(), w, "pred(succ({w}))");
        }
    }

    #[test]
    fn parse_display_round_trip_and_validation() {
        let a = two();
        for text in ["e", "1", "2", "121", "2212"] {
            assert_eq!(a.parse(text).unwrap().to_string(), text);
        }
        assert!(matches!(a.parse("13"), Err(Error::BadLetter { letter: 3, n: 2 })));
        assert!(matches!(a.parse("x"), Err(Error::InvalidArgument { .. })));
        assert!(matches!(a.word(&[0]), Err(Error::BadLetter { letter: 0, n: 2 })));
    }

    #[test]
    fn prefix_arithmetic() {
        let a = two();
        let w = a.parse("12").unwrap();
        let v = a.parse("1221").unwrap();
        assert!(w.is_prefix_of(&v));
        assert!(!v.is_prefix_of(&w));
        assert_eq!(w.strip_prefix(&v).unwrap(), a.parse("21").unwrap());
        assert_eq!(w.concat(&a.parse("21").unwrap()), v);
        assert_eq!(
            v.split_first().unwrap(),
            (1, a.parse("221").unwrap()),
            "first-letter split"
        );
        assert!(Word::empty().is_prefix_of(&w));
    }

    #[test]
    fn section_sizes() {
        assert_eq!(two().section_size(3), 15);
        assert_eq!(Alphabet::new(3).unwrap().section_size(2), 13);
        assert_eq!(Alphabet::new(1).unwrap().section_size(4), 5);
        assert!(matches!(Alphabet::new(0), Err(Error::EmptyAlphabet)));
    }
}
