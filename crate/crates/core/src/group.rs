//! Generators, words, group models and Cayley-graph geometry.
//!
//! A [`GroupModel`] is a computable group: it hands out canonical
//! [`Element`] values, so two elements are equal in the group exactly when
//! their encodings are equal. Everything else in the crate (balls, distances,
//! fellow-traveller checks, automata over word differences) is built on top of
//! right multiplication by generators.

use std::cmp::Ordering;
use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Index of a letter in a [`GeneratorSet`].
pub type Letter = usize;

/// Default cap on the number of elements a [`Ball`] may hold.
pub const DEFAULT_BALL_LIMIT: usize = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub is_identity: bool,
}

/// An inverse-closed, ordered generating set.
///
/// The letter order is the order used by every shortlex comparison.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GeneratorSet {
    gens: Vec<Generator>,
    inverse: Vec<Letter>,
}

impl GeneratorSet {
    pub fn new(gens: Vec<Generator>, inverse: Vec<Letter>) -> Result<Self> {
        if gens.len() != inverse.len() {
            return Err(Error::InvalidParams(
                "inverse table length differs from generator count".into(),
            ));
        }
        for (i, g) in gens.iter().enumerate() {
            if g.name.is_empty() || g.name.chars().any(char::is_whitespace) {
                return Err(Error::InvalidParams(format!(
                    "generator name `{}` must be a non-empty token",
                    g.name
                )));
            }
            let j = inverse[i];
            if j >= gens.len() || inverse[j] != i {
                return Err(Error::InvalidParams(format!(
                    "inverse of `{}` is not an involution",
                    g.name
                )));
            }
            if g.is_identity && j != i {
                return Err(Error::InvalidParams(format!(
                    "identity letter `{}` must be its own inverse",
                    g.name
                )));
            }
        }
        if gens.iter().filter(|g| g.is_identity).count() > 1 {
            return Err(Error::InvalidParams("more than one identity letter".into()));
        }
        let mut names: Vec<&str> = gens.iter().map(|g| g.name.as_str()).collect();
        names.sort_unstable();
        if names.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidParams("duplicate generator names".into()));
        }
        Ok(GeneratorSet { gens, inverse })
    }

    /// `["a", "b"]` becomes the letters `a, a^-1, b, b^-1` in that order.
    pub fn from_names<S: AsRef<str>>(names: &[S]) -> Self {
        let mut gens = Vec::with_capacity(2 * names.len());
        let mut inverse = Vec::with_capacity(2 * names.len());
        for (i, n) in names.iter().enumerate() {
            gens.push(Generator { name: n.as_ref().to_string(), is_identity: false });
            gens.push(Generator { name: format!("{}^-1", n.as_ref()), is_identity: false });
            inverse.push(2 * i + 1);
            inverse.push(2 * i);
        }
        GeneratorSet::new(gens, inverse).expect("paired names form a valid generating set")
    }

    /// Appends a letter flagged as the identity.
    pub fn with_identity(mut self, name: &str) -> Result<Self> {
        let idx = self.gens.len();
        self.gens.push(Generator { name: name.to_string(), is_identity: true });
        self.inverse.push(idx);
        GeneratorSet::new(self.gens, self.inverse)
    }

    /// Concatenates two sets; letters of `other` are shifted by `self.len()`.
    pub fn disjoint_union(&self, other: &GeneratorSet) -> Result<Self> {
        let off = self.len();
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        let mut inverse = self.inverse.clone();
        inverse.extend(other.inverse.iter().map(|j| j + off));
        GeneratorSet::new(gens, inverse)
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn name(&self, x: Letter) -> &str {
        &self.gens[x].name
    }

    pub fn names(&self) -> Vec<String> {
        self.gens.iter().map(|g| g.name.clone()).collect()
    }

    pub fn inverse(&self, x: Letter) -> Letter {
        self.inverse[x]
    }

    pub fn inverse_table(&self) -> &[Letter] {
        &self.inverse
    }

    pub fn is_identity(&self, x: Letter) -> bool {
        self.gens[x].is_identity
    }

    pub fn identity_letter(&self) -> Option<Letter> {
        self.gens.iter().position(|g| g.is_identity)
    }

    pub fn letter(&self, name: &str) -> Option<Letter> {
        self.gens.iter().position(|g| g.name == name)
    }

    pub fn check(&self, w: &Word) -> Result<()> {
        match w.0.iter().find(|&&x| x >= self.len()) {
            Some(&x) => Err(Error::UnknownLetter(x)),
            None => Ok(()),
        }
    }

    /// Parses space-separated tokens. `x^-1` denotes the inverse of `x`,
    /// `x^k` a power, and the literal `1` the empty word.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let mut out = Vec::new();
        for tok in text.split_whitespace() {
            if tok == "1" {
                continue;
            }
            if let Some(x) = self.letter(tok) {
                out.push(x);
                continue;
            }
            let (base, exp) = match tok.rsplit_once('^') {
                Some((b, e)) => {
                    let e: i64 = e
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad exponent in `{tok}`")))?;
                    (b, e)
                }
                None => return Err(Error::UnknownGenerator(tok.to_string())),
            };
            let x = self
                .letter(base)
                .ok_or_else(|| Error::UnknownGenerator(base.to_string()))?;
            let y = if exp < 0 { self.inverse(x) } else { x };
            out.extend(std::iter::repeat_n(y, exp.unsigned_abs() as usize));
        }
        Ok(Word(out))
    }

    pub fn format_word(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".to_string();
        }
        w.0.iter().map(|&x| self.name(x)).collect::<Vec<_>>().join(" ")
    }
}

/// A word over a generating set, stored as letter indices.
///
/// Ordering is shortlex: shorter words first, equal lengths compared
/// lexicographically by letter index.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
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

    /// Prefix of length `min(t, len)`: the discrete path position `w(t)`.
    pub fn prefix(&self, t: usize) -> &[Letter] {
        &self.0[..t.min(self.0.len())]
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn prepend(&self, x: Letter) -> Word {
        let mut v = Vec::with_capacity(self.len() + 1);
        v.push(x);
        v.extend_from_slice(&self.0);
        Word(v)
    }

    pub fn push(&mut self, x: Letter) {
        self.0.push(x);
    }

    pub fn inverse(&self, gens: &GeneratorSet) -> Word {
        Word(self.0.iter().rev().map(|&x| gens.inverse(x)).collect())
    }
}

impl From<Vec<Letter>> for Word {
    fn from(v: Vec<Letter>) -> Self {
        Word(v)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A group element in the canonical encoding of its model.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element(pub Vec<i64>);

impl Element {
    pub fn new(v: Vec<i64>) -> Self {
        Element(v)
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A computable group with a finite inverse-closed generating set.
///
/// Implementations normalise eagerly: every [`Element`] they return is in
/// canonical form, so `key(g) == key(h)` iff `g == h` in the group.
pub trait GroupModel: Send + Sync {
    fn name(&self) -> String;

    fn generators(&self) -> &GeneratorSet;

    fn identity(&self) -> Element;

    fn generator_element(&self, x: Letter) -> Element;

    fn multiply(&self, g: &Element, h: &Element) -> Element;

    fn inverse(&self, g: &Element) -> Element;

    /// Right multiplication by a generator.
    fn act(&self, g: &Element, x: Letter) -> Element {
        self.multiply(g, &self.generator_element(x))
    }

    /// Left multiplication by a generator.
    fn act_left(&self, x: Letter, g: &Element) -> Element {
        self.multiply(&self.generator_element(x), g)
    }

    /// Some word over the generators representing `g`, when the model knows
    /// one without searching.
    fn word_of(&self, _g: &Element) -> Option<Word> {
        None
    }

    /// Canonical byte string of an element.
    fn key(&self, g: &Element) -> Vec<u8> {
        g.0.iter().flat_map(|c| c.to_le_bytes()).collect()
    }
}

pub type Model = Arc<dyn GroupModel>;

/// `start · w`, folding [`GroupModel::act`] over the letters of `w`.
pub fn apply_word(model: &dyn GroupModel, start: &Element, w: &Word) -> Result<Element> {
    model.generators().check(w)?;
    Ok(fold_letters(model, start, w.letters()))
}

/// Unchecked fold; callers guarantee letters are in range.
pub(crate) fn fold_letters(model: &dyn GroupModel, start: &Element, letters: &[Letter]) -> Element {
    letters.iter().fold(start.clone(), |g, &x| model.act(&g, x))
}

/// Evaluates `w` from the identity.
pub fn evaluate(model: &dyn GroupModel, w: &Word) -> Result<Element> {
    apply_word(model, &model.identity(), w)
}

/// Prefix elements `w(0), w(1), …, w(l(w))`.
pub fn prefix_elements(model: &dyn GroupModel, w: &Word) -> Vec<Element> {
    let mut out = Vec::with_capacity(w.len() + 1);
    let mut g = model.identity();
    out.push(g.clone());
    for &x in w.letters() {
        g = model.act(&g, x);
        out.push(g.clone());
    }
    out
}

/// Cayley-graph distance `d(g, h)` by bidirectional breadth-first search,
/// or `None` when it exceeds `cutoff`.
pub fn distance(model: &dyn GroupModel, g: &Element, h: &Element, cutoff: usize) -> Option<usize> {
    if g == h {
        return Some(0);
    }
    let n = model.generators().len();
    let mut seen_a: HashMap<Element, usize> = HashMap::from([(g.clone(), 0)]);
    let mut seen_b: HashMap<Element, usize> = HashMap::from([(h.clone(), 0)]);
    let mut front_a = vec![g.clone()];
    let mut front_b = vec![h.clone()];
    let (mut da, mut db) = (0usize, 0usize);
    while da + db < cutoff && !front_a.is_empty() && !front_b.is_empty() {
        let expand_a = front_a.len() <= front_b.len();
        let (front, seen, other, depth) = if expand_a {
            (&mut front_a, &mut seen_a, &seen_b, &mut da)
        } else {
            (&mut front_b, &mut seen_b, &seen_a, &mut db)
        };
        *depth += 1;
        let mut next = Vec::new();
        let mut best: Option<usize> = None;
        for u in front.iter() {
            for x in 0..n {
                let v = model.act(u, x);
                if seen.contains_key(&v) {
                    continue;
                }
                if let Some(&d_other) = other.get(&v) {
                    let total = *depth + d_other;
                    best = Some(best.map_or(total, |b| b.min(total)));
                }
                seen.insert(v.clone(), *depth);
                next.push(v);
            }
        }
        if let Some(b) = best {
            return (b <= cutoff).then_some(b);
        }
        *front = next;
    }
    None
}

/// `l_G(w)`: the distance from the identity to the element of `w`.
pub fn geodesic_length(model: &dyn GroupModel, w: &Word, cutoff: usize) -> Result<Option<usize>> {
    let g = evaluate(model, w)?;
    Ok(distance(model, &model.identity(), &g, cutoff))
}

/// The ball of a given radius around the identity, with a breadth-first
/// spanning tree. Tree paths are the shortlex-least geodesics.
#[derive(Clone, Debug)]
pub struct Ball {
    radius: usize,
    elements: Vec<Element>,
    dist: Vec<u32>,
    parent: Vec<(u32, Letter)>,
    index: HashMap<Element, usize>,
}

impl Ball {
    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Element, usize)> {
        self.elements.iter().zip(self.dist.iter().map(|&d| d as usize))
    }

    pub fn contains(&self, g: &Element) -> bool {
        self.index.contains_key(g)
    }

    pub fn index_of(&self, g: &Element) -> Option<usize> {
        self.index.get(g).copied()
    }

    pub fn distance_of(&self, g: &Element) -> Option<usize> {
        self.index.get(g).map(|&i| self.dist[i] as usize)
    }

    pub fn distance_at(&self, idx: usize) -> usize {
        self.dist[idx] as usize
    }

    /// Shortlex-least geodesic word to the element at `idx`.
    pub fn word_at(&self, idx: usize) -> Word {
        let mut letters = Vec::with_capacity(self.dist[idx] as usize);
        let mut i = idx;
        while i != 0 {
            let (p, x) = self.parent[i];
            letters.push(x);
            i = p as usize;
        }
        letters.reverse();
        Word(letters)
    }

    pub fn word_for(&self, g: &Element) -> Option<Word> {
        self.index_of(g).map(|i| self.word_at(i))
    }

    /// Number of elements at each distance `0..=radius`.
    pub fn sphere_sizes(&self) -> Vec<usize> {
        let mut out = vec![0; self.radius + 1];
        for &d in &self.dist {
            out[d as usize] += 1;
        }
        out
    }
}

pub fn ball(model: &dyn GroupModel, radius: usize) -> Result<Ball> {
    ball_with_limit(model, radius, DEFAULT_BALL_LIMIT)
}

pub fn ball_with_limit(model: &dyn GroupModel, radius: usize, limit: usize) -> Result<Ball> {
    let e = model.identity();
    let n = model.generators().len();
    let mut elements = vec![e.clone()];
    let mut dist = vec![0u32];
    let mut parent = vec![(0u32, 0usize)];
    let mut index = HashMap::from([(e, 0usize)]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        if dist[i] as usize >= radius {
            continue;
        }
        for x in 0..n {
            let h = model.act(&elements[i], x);
            if index.contains_key(&h) {
                continue;
            }
            let j = elements.len();
            if j >= limit {
                return Err(Error::BallTooLarge { limit });
            }
            index.insert(h.clone(), j);
            elements.push(h);
            dist.push(dist[i] + 1);
            parent.push((i as u32, x));
            queue.push_back(j);
        }
    }
    Ok(Ball { radius, elements, dist, parent, index })
}

/// Exact distances up to a fixed radius via a precomputed ball:
/// `d(g, h) = |g⁻¹h|` whenever that is at most the radius.
#[derive(Clone)]
pub struct Metric {
    model: Model,
    ball: Arc<Ball>,
}

impl Metric {
    pub fn new(model: Model, radius: usize) -> Result<Self> {
        let b = ball(model.as_ref(), radius)?;
        Ok(Metric { model, ball: Arc::new(b) })
    }

    pub fn from_ball(model: Model, ball: Arc<Ball>) -> Self {
        Metric { model, ball }
    }

    pub fn radius(&self) -> usize {
        self.ball.radius()
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn ball(&self) -> &Ball {
        &self.ball
    }

    pub fn difference(&self, g: &Element, h: &Element) -> Element {
        self.model.multiply(&self.model.inverse(g), h)
    }

    /// `Some(d(g, h))` if it is at most the radius.
    pub fn dist(&self, g: &Element, h: &Element) -> Option<usize> {
        if g == h {
            return Some(0);
        }
        self.ball.distance_of(&self.difference(g, h))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{FreeAbelian, FreeGroup};

    #[test]
    fn parse_and_format_round_trip() {
        let gens = GeneratorSet::from_names(&["a", "b"]);
        let w = gens.parse_word("a b^-1 a^3 1").unwrap();
        assert_eq!(w.0, vec![0, 3, 0, 0, 0]);
        assert_eq!(gens.format_word(&w), "a b^-1 a a a");
        assert_eq!(gens.parse_word("1").unwrap(), Word::empty());
        assert_eq!(gens.format_word(&Word::empty()), "1");
        assert!(matches!(gens.parse_word("q"), Err(Error::UnknownGenerator(_))));
    }

    #[test]
    fn generator_set_validation() {
        let bad = GeneratorSet::new(
            vec![
                Generator { name: "a".into(), is_identity: false },
                Generator { name: "b".into(), is_identity: false },
            ],
            vec![1, 1],
        );
        assert!(bad.is_err());
        let two_ids = GeneratorSet::from_names(&["a"])
            .with_identity("e")
            .unwrap()
            .with_identity("f");
        assert!(two_ids.is_err());
        assert!(GeneratorSet::new(
            vec![Generator { name: "a b".into(), is_identity: false }],
            vec![0]
        )
        .is_err());
    }

    #[test]
    fn shortlex_word_order() {
        assert!(Word(vec![5]) < Word(vec![0, 0]));
        assert!(Word(vec![0, 1]) < Word(vec![0, 2]));
        assert!(Word::empty() < Word(vec![0]));
    }

    #[test]
    fn apply_word_examples() {
        let z2 = FreeAbelian::new(2);
        let w = z2.generators().parse_word("a b").unwrap();
        assert_eq!(evaluate(&z2, &w).unwrap(), Element(vec![1, 1]));
        let g = Element(vec![4, -2]);
        assert_eq!(apply_word(&z2, &g, &Word::empty()).unwrap(), g);
        assert_eq!(
            apply_word(&z2, &g, &Word(vec![9])),
            Err(Error::UnknownLetter(9))
        );
    }

    #[test]
    fn distance_examples() {
        let z2 = FreeAbelian::new(2);
        let e = z2.identity();
        assert_eq!(distance(&z2, &e, &Element(vec![2, 1]), 5), Some(3));
        assert_eq!(distance(&z2, &e, &Element(vec![3, 3]), 2), None);
        assert_eq!(distance(&z2, &e, &Element(vec![3, 3]), 6), Some(6));
        let f2 = FreeGroup::new(2);
        let g = evaluate(&f2, &f2.generators().parse_word("a b a^-1").unwrap()).unwrap();
        assert_eq!(distance(&f2, &f2.identity(), &g, 5), Some(3));
    }

    #[test]
    fn ball_examples() {
        let z2 = FreeAbelian::new(2);
        assert_eq!(ball(&z2, 1).unwrap().len(), 5);
        assert_eq!(ball(&z2, 0).unwrap().len(), 1);
        let f2 = FreeGroup::new(2);
        assert_eq!(ball(&f2, 2).unwrap().len(), 17);
        assert!(matches!(
            ball_with_limit(&f2, 5, 100),
            Err(Error::BallTooLarge { limit: 100 })
        ));
    }

    #[test]
    fn geodesic_length_examples() {
        let z2 = FreeAbelian::new(2);
        let w = z2.generators().parse_word("a b a^-1").unwrap();
        assert_eq!(geodesic_length(&z2, &w, 5).unwrap(), Some(1));
        let f2 = FreeGroup::new(2);
        let w = f2.generators().parse_word("a a").unwrap();
        assert_eq!(geodesic_length(&f2, &w, 5).unwrap(), Some(2));
    }

    #[test]
    fn ball_words_are_geodesic() {
        let f2 = FreeGroup::new(2);
        let b = ball(&f2, 3).unwrap();
        for (i, g) in b.elements().iter().enumerate() {
            let w = b.word_at(i);
            assert_eq!(w.len(), b.distance_at(i));
            assert_eq!(&evaluate(&f2, &w).unwrap(), g);
        }
    }

    #[test]
    fn metric_matches_bidirectional_search() {
        let z2: Model = Arc::new(FreeAbelian::new(2));
        let m = Metric::new(z2.clone(), 4).unwrap();
        let b = ball(z2.as_ref(), 2).unwrap();
        for g in b.elements() {
            for h in b.elements() {
                assert_eq!(m.dist(g, h), distance(z2.as_ref(), g, h, 4));
            }
        }
    }
}
