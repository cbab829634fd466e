//! Two-tape automata over padded pairs of words.
//!
//! A pair `(v, w)` is read letterwise, the shorter word padded on the right
//! with `$`. The pair `($, $)` is not a symbol.

use crate::error::Result;
use crate::group::{Letter, Word};
use crate::machines::fsa::{Fsa, HomMode, Sym};

pub const PAD: &str = "$";

/// Symbol layout for pairs over an alphabet of `n` letters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairAlphabet {
    n: usize,
}

impl PairAlphabet {
    pub fn new(n: usize) -> Self {
        PairAlphabet { n }
    }

    pub fn letters(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        (self.n + 1) * (self.n + 1) - 1
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn encode(&self, a: Option<Letter>, b: Option<Letter>) -> Sym {
        let i = a.unwrap_or(self.n);
        let j = b.unwrap_or(self.n);
        debug_assert!(i < self.n || j < self.n, "($, $) is not a pair symbol");
        i * (self.n + 1) + j
    }

    pub fn decode(&self, s: Sym) -> (Option<Letter>, Option<Letter>) {
        let (i, j) = (s / (self.n + 1), s % (self.n + 1));
        ((i < self.n).then_some(i), (j < self.n).then_some(j))
    }

    /// Tokens `(x,y)` with `$` for padding.
    pub fn tokens(&self, names: &[String]) -> Vec<String> {
        let name = |x: Option<Letter>| x.map_or(PAD, |x| names[x].as_str());
        (0..self.len())
            .map(|s| {
                let (a, b) = self.decode(s);
                format!("({},{})", name(a), name(b))
            })
            .collect()
    }

    pub fn encode_words(&self, v: &Word, w: &Word) -> Vec<Sym> {
        pad_pair(v, w).into_iter().map(|(a, b)| self.encode(a, b)).collect()
    }
}

pub fn pad_pair(v: &Word, w: &Word) -> Vec<(Option<Letter>, Option<Letter>)> {
    (0..v.len().max(w.len()))
        .map(|i| (v.0.get(i).copied(), w.0.get(i).copied()))
        .collect()
}

/// Padded pairs whose chosen tape, with padding removed, lies in `l`.
/// Padding on that tape is a suffix.
pub fn lift(l: &Fsa, pa: PairAlphabet, names: &[String], second: bool) -> Fsa {
    let l = l.remove_epsilon();
    let n = pa.letters();
    let q = l.num_states();
    // state s is (s, unpadded); state s + q is (s, padded)
    let mut edges = Vec::new();
    for (p, a, t) in l.transitions() {
        let a = a.expect("ε-free");
        for b in (0..n).map(Some).chain([None]) {
            let sym = if second { pa.encode(b, Some(a)) } else { pa.encode(Some(a), b) };
            edges.push((p, Some(sym), t));
        }
    }
    for p in 0..q {
        for b in 0..n {
            let sym = if second { pa.encode(Some(b), None) } else { pa.encode(None, Some(b)) };
            edges.push((p, Some(sym), p + q));
            edges.push((p + q, Some(sym), p + q));
        }
    }
    let accepting: Vec<usize> = l.accepting_states().into_iter().flat_map(|s| [s, s + q]).collect();
    Fsa::new(pa.tokens(names), 2 * q, l.initial().to_vec(), accepting, edges)
        .expect("lift indices are in range")
        .trim()
}

/// Well-formed padded pairs `(v, w)` with `v ≺ w` strictly in shortlex order.
pub fn shortlex_less(pa: PairAlphabet, names: &[String]) -> Fsa {
    const EQ: usize = 0;
    const LESS: usize = 1;
    const GREATER: usize = 2;
    const FIRST_SHORT: usize = 3;
    const SECOND_SHORT: usize = 4;
    let n = pa.letters();
    let mut edges = Vec::new();
    for a in 0..n {
        for b in 0..n {
            let s = Some(pa.encode(Some(a), Some(b)));
            let from_eq = match a.cmp(&b) {
                std::cmp::Ordering::Less => LESS,
                std::cmp::Ordering::Greater => GREATER,
                std::cmp::Ordering::Equal => EQ,
            };
            edges.push((EQ, s, from_eq));
            edges.push((LESS, s, LESS));
            edges.push((GREATER, s, GREATER));
        }
        let first_pad = Some(pa.encode(None, Some(a)));
        for st in [EQ, LESS, GREATER, FIRST_SHORT] {
            edges.push((st, first_pad, FIRST_SHORT));
        }
        let second_pad = Some(pa.encode(Some(a), None));
        for st in [EQ, LESS, GREATER, SECOND_SHORT] {
            edges.push((st, second_pad, SECOND_SHORT));
        }
    }
    Fsa::new(pa.tokens(names), 5, vec![EQ], vec![LESS, FIRST_SHORT], edges)
        .expect("fixed automaton")
        .trim()
}

/// Projection of a pair language onto one tape.
pub fn project(pairs: &Fsa, pa: PairAlphabet, names: &[String], second: bool) -> Result<Fsa> {
    let images: Vec<Vec<Sym>> = (0..pa.len())
        .map(|s| {
            let (a, b) = pa.decode(s);
            let x = if second { b } else { a };
            x.into_iter().collect()
        })
        .collect();
    pairs.homomorphism(names.to_vec(), &images, HomMode::General)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names() -> Vec<String> {
        vec!["a".into(), "b".into()]
    }

    #[test]
    fn encoding_round_trips() {
        let pa = PairAlphabet::new(2);
        assert_eq!(pa.len(), 8);
        for s in 0..pa.len() {
            let (a, b) = pa.decode(s);
            assert_eq!(pa.encode(a, b), s);
        }
        assert_eq!(pa.tokens(&names())[pa.encode(None, Some(1))], "($,b)");
    }

    #[test]
    fn shortlex_automaton_matches_word_order() {
        let pa = PairAlphabet::new(2);
        let m = shortlex_less(pa, &names());
        let words: Vec<Word> = Fsa::universal(names()).enumerate(3).into_iter().map(Word).collect();
        for v in &words {
            for w in &words {
                assert_eq!(m.accepts(&pa.encode_words(v, w)), v < w, "{v:?} {w:?}");
            }
        }
    }

    #[test]
    fn lifts_and_projection() {
        let pa = PairAlphabet::new(2);
        let l = Fsa::from_words(names(), &[vec![0], vec![1, 1]]).unwrap();
        let both = lift(&l, pa, &names(), false)
            .intersect(&lift(&Fsa::universal(names()), pa, &names(), true))
            .unwrap();
        let p = project(&both, pa, &names(), false).unwrap();
        assert!(p.equivalent(&l).unwrap());
        assert!(both.accepts(&pa.encode_words(&Word(vec![0]), &Word(vec![1, 0, 1]))));
    }
}
