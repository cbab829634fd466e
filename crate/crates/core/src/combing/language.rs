//! Languages of representative words.
//!
//! A language knows its alphabet, decides membership, enumerates bounded
//! slices in shortlex order, and optionally exposes a regular carrier and a
//! representative lookup `element → word`.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::group::{Element, GeneratorSet, Letter, Model, Word};
use crate::machines::Fsa;

pub type Lookup = Arc<dyn Fn(&Element) -> Option<Word> + Send + Sync>;
pub type WordMap = Arc<dyn Fn(&Word) -> Option<Word> + Send + Sync>;
pub type ElementMap = Arc<dyn Fn(&Element) -> Option<Element> + Send + Sync>;
pub type Splitter = Arc<dyn Fn(&Element) -> Option<(Element, Element)> + Send + Sync>;
pub type BlockSplitter = Arc<dyn Fn(&Element) -> Option<Vec<(usize, Element)>> + Send + Sync>;

pub trait Language: Send + Sync {
    fn alphabet(&self) -> &GeneratorSet;

    fn contains(&self, w: &Word) -> bool;

    /// Members of length at most `max_len`, shortlex-sorted.
    fn enumerate(&self, max_len: usize) -> Vec<Word>;

    fn carrier(&self) -> Option<&Fsa> {
        None
    }

    fn lookup(&self, _g: &Element) -> Option<Word> {
        None
    }

    fn has_lookup(&self) -> bool {
        false
    }

    fn describe(&self) -> String;
}

pub type Lang = Arc<dyn Language>;

impl fmt::Debug for dyn Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

/// Lookup through [`crate::group::GroupModel::word_of`].
pub fn model_lookup(model: Model) -> Lookup {
    Arc::new(move |g| model.word_of(g))
}

fn sorted(mut words: Vec<Word>) -> Vec<Word> {
    words.sort();
    words.dedup();
    words
}

fn invert_map(map: &[Letter], size: usize) -> Vec<Option<Letter>> {
    let mut back = vec![None; size];
    for (a, &b) in map.iter().enumerate() {
        back[b] = Some(a);
    }
    back
}

fn check_map(map: &[Letter], from: usize, to: usize) -> Result<()> {
    if map.len() != from || map.iter().any(|&b| b >= to) {
        return Err(Error::AlphabetMismatch("letter map does not fit the alphabets".into()));
    }
    Ok(())
}

/// A language given by an automaton.
#[derive(Clone)]
pub struct RegularLanguage {
    gens: GeneratorSet,
    fsa: Fsa,
    lookup: Option<Lookup>,
    name: String,
}

impl RegularLanguage {
    pub fn new(gens: GeneratorSet, fsa: Fsa) -> Result<Self> {
        if fsa.alphabet() != gens.names().as_slice() {
            return Err(Error::AlphabetMismatch("automaton alphabet differs from generators".into()));
        }
        Ok(RegularLanguage { gens, fsa, lookup: None, name: "regular".into() })
    }

    pub fn from_words(gens: GeneratorSet, words: &[Word]) -> Result<Self> {
        let raw: Vec<Vec<usize>> = words.iter().map(|w| w.0.clone()).collect();
        let fsa = Fsa::from_words(gens.names(), &raw)?;
        Ok(RegularLanguage { name: "finite".into(), ..RegularLanguage::new(gens, fsa)? })
    }

    pub fn with_lookup(mut self, lookup: Lookup) -> Self {
        self.lookup = Some(lookup);
        self
    }

    pub fn named(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn fsa(&self) -> &Fsa {
        &self.fsa
    }
}

impl Language for RegularLanguage {
    fn alphabet(&self) -> &GeneratorSet {
        &self.gens
    }

    fn contains(&self, w: &Word) -> bool {
        self.fsa.accepts(&w.0)
    }

    fn enumerate(&self, max_len: usize) -> Vec<Word> {
        self.fsa.enumerate(max_len).into_iter().map(Word).collect()
    }

    fn carrier(&self) -> Option<&Fsa> {
        Some(&self.fsa)
    }

    fn lookup(&self, g: &Element) -> Option<Word> {
        self.lookup.as_ref().and_then(|f| f(g)).filter(|w| self.contains(w))
    }

    fn has_lookup(&self) -> bool {
        self.lookup.is_some()
    }

    fn describe(&self) -> String {
        format!("{} ({} states)", self.name, self.fsa.num_states())
    }
}

/// A language given by closures, for non-regular combings.
#[derive(Clone)]
pub struct ProceduralLanguage {
    gens: GeneratorSet,
    member: Arc<dyn Fn(&Word) -> bool + Send + Sync>,
    slice: Arc<dyn Fn(usize) -> Vec<Word> + Send + Sync>,
    lookup: Option<Lookup>,
    name: String,
}

impl ProceduralLanguage {
    pub fn new(
        name: &str,
        gens: GeneratorSet,
        member: Arc<dyn Fn(&Word) -> bool + Send + Sync>,
        slice: Arc<dyn Fn(usize) -> Vec<Word> + Send + Sync>,
    ) -> Self {
        ProceduralLanguage { gens, member, slice, lookup: None, name: name.to_string() }
    }

    /// The bijective language `{lookup(g)}` with membership by re-evaluation.
    pub fn from_lookup(name: &str, model: Model, lookup: Lookup) -> Self {
        let gens = model.generators().clone();
        let (m1, l1) = (model.clone(), lookup.clone());
        let member = Arc::new(move |w: &Word| {
            crate::group::evaluate(m1.as_ref(), w)
                .ok()
                .and_then(|g| l1(&g))
                .is_some_and(|v| &v == w)
        });
        let (m2, l2) = (model, lookup.clone());
        let slice = Arc::new(move |n: usize| {
            let ball = crate::group::ball(m2.as_ref(), n).expect("slice ball");
            sorted(ball.elements().iter().filter_map(|g| l2(g)).filter(|w| w.len() <= n).collect())
        });
        ProceduralLanguage::new(name, gens, member, slice).with_lookup(lookup)
    }

    pub fn with_lookup(mut self, lookup: Lookup) -> Self {
        self.lookup = Some(lookup);
        self
    }
}

impl Language for ProceduralLanguage {
    fn alphabet(&self) -> &GeneratorSet {
        &self.gens
    }

    fn contains(&self, w: &Word) -> bool {
        (self.member)(w)
    }

    fn enumerate(&self, max_len: usize) -> Vec<Word> {
        sorted((self.slice)(max_len))
    }

    fn lookup(&self, g: &Element) -> Option<Word> {
        self.lookup.as_ref().and_then(|f| f(g))
    }

    fn has_lookup(&self) -> bool {
        self.lookup.is_some()
    }

    fn describe(&self) -> String {
        self.name.clone()
    }
}

/// `L1 · L2` over a combined alphabet in which the two letter images are
/// disjoint, so every member splits uniquely.
#[derive(Clone)]
pub struct Concat {
    parts: [Lang; 2],
    gens: GeneratorSet,
    maps: [Vec<Letter>; 2],
    back: Vec<Option<(usize, Letter)>>,
    split: Option<Splitter>,
    carrier: Option<Fsa>,
}

impl Concat {
    pub fn new(left: Lang, right: Lang, gens: GeneratorSet, left_map: Vec<Letter>, right_map: Vec<Letter>) -> Result<Self> {
        check_map(&left_map, left.alphabet().len(), gens.len())?;
        check_map(&right_map, right.alphabet().len(), gens.len())?;
        let mut back = vec![None; gens.len()];
        for (side, map) in [&left_map, &right_map].into_iter().enumerate() {
            for (a, &b) in map.iter().enumerate() {
                if back[b].is_some() {
                    return Err(Error::AlphabetMismatch("concatenated alphabets overlap".into()));
                }
                back[b] = Some((side, a));
            }
        }
        let carrier = match (left.carrier(), right.carrier()) {
            (Some(l), Some(r)) => Some(l.map_symbols(gens.names(), &left_map)?.concat(&r.map_symbols(gens.names(), &right_map)?)?),
            _ => None,
        };
        Ok(Concat { parts: [left, right], gens, maps: [left_map, right_map], back, split: None, carrier })
    }

    /// Over `X1 ⊔ X2` in that order.
    pub fn disjoint(left: Lang, right: Lang) -> Result<Self> {
        let gens = left.alphabet().disjoint_union(right.alphabet())?;
        let n = left.alphabet().len();
        let lm = (0..n).collect();
        let rm = (n..gens.len()).collect();
        Concat::new(left, right, gens, lm, rm)
    }

    /// Enables lookup by factoring an element as `g1 · g2`.
    pub fn with_splitter(mut self, split: Splitter) -> Self {
        self.split = Some(split);
        self
    }

    pub fn parts(&self) -> (&Lang, &Lang) {
        (&self.parts[0], &self.parts[1])
    }

    fn factor(&self, w: &Word) -> Option<(Word, Word)> {
        let mut l = Vec::new();
        let mut r = Vec::new();
        for &x in &w.0 {
            let (side, a) = (*self.back.get(x)?)?;
            match side {
                0 if r.is_empty() => l.push(a),
                1 => r.push(a),
                _ => return None,
            }
        }
        Some((Word(l), Word(r)))
    }

    fn join(&self, l: &Word, r: &Word) -> Word {
        Word(l.0.iter().map(|&a| self.maps[0][a]).chain(r.0.iter().map(|&a| self.maps[1][a])).collect())
    }
}

impl Language for Concat {
    fn alphabet(&self) -> &GeneratorSet {
        &self.gens
    }

    fn contains(&self, w: &Word) -> bool {
        match self.factor(w) {
            Some((l, r)) => self.parts[0].contains(&l) && self.parts[1].contains(&r),
            None => false,
        }
    }

    fn enumerate(&self, max_len: usize) -> Vec<Word> {
        let lefts = self.parts[0].enumerate(max_len);
        let rights = self.parts[1].enumerate(max_len);
        let mut out = Vec::new();
        for l in &lefts {
            for r in rights.iter().take_while(|r| r.len() + l.len() <= max_len) {
                out.push(self.join(l, r));
            }
        }
        sorted(out)
    }

    fn carrier(&self) -> Option<&Fsa> {
        self.carrier.as_ref()
    }

    fn lookup(&self, g: &Element) -> Option<Word> {
        let (g1, g2) = self.split.as_ref()?(g)?;
        Some(self.join(&self.parts[0].lookup(&g1)?, &self.parts[1].lookup(&g2)?))
    }

    fn has_lookup(&self) -> bool {
        self.split.is_some() && self.parts.iter().all(|p| p.has_lookup())
    }

    fn describe(&self) -> String {
        format!("({})·({})", self.parts[0].describe(), self.parts[1].describe())
    }
}

/// The same words under an injective letter renaming.
#[derive(Clone)]
pub struct Relabeled {
    inner: Lang,
    gens: GeneratorSet,
    map: Vec<Letter>,
    back: Vec<Option<Letter>>,
    element: Option<ElementMap>,
    carrier: Option<Fsa>,
}

impl Relabeled {
    pub fn new(inner: Lang, gens: GeneratorSet, map: Vec<Letter>) -> Result<Self> {
        check_map(&map, inner.alphabet().len(), gens.len())?;
        let back = invert_map(&map, gens.len());
        if back.iter().flatten().count() != map.len() {
            return Err(Error::AlphabetMismatch("relabeling is not injective".into()));
        }
        let carrier = match inner.carrier() {
            Some(f) => Some(f.map_symbols(gens.names(), &map)?),
            None => None,
        };
        Ok(Relabeled { inner, gens, map, back, element: None, carrier })
    }

    /// Letter `i` of `inner` becomes letter `i` of `gens`.
    pub fn identity(inner: Lang, gens: GeneratorSet) -> Result<Self> {
        let map = (0..inner.alphabet().len()).collect();
        Relabeled::new(inner, gens, map)
    }

    /// Translates elements before the inner lookup.
    pub fn with_element_map(mut self, f: ElementMap) -> Self {
        self.element = Some(f);
        self
    }

    pub fn inner(&self) -> &Lang {
        &self.inner
    }

    fn forward(&self, w: &Word) -> Word {
        Word(w.0.iter().map(|&a| self.map[a]).collect())
    }
}

impl Language for Relabeled {
    fn alphabet(&self) -> &GeneratorSet {
        &self.gens
    }

    fn contains(&self, w: &Word) -> bool {
        let inner: Option<Vec<Letter>> = w.0.iter().map(|&x| self.back.get(x).copied().flatten()).collect();
        inner.is_some_and(|v| self.inner.contains(&Word(v)))
    }

    fn enumerate(&self, max_len: usize) -> Vec<Word> {
        sorted(self.inner.enumerate(max_len).iter().map(|w| self.forward(w)).collect())
    }

    fn carrier(&self) -> Option<&Fsa> {
        self.carrier.as_ref()
    }

    fn lookup(&self, g: &Element) -> Option<Word> {
        let h = match &self.element {
            Some(f) => f(g)?,
            None => g.clone(),
        };
        self.inner.lookup(&h).map(|w| self.forward(&w))
    }

    fn has_lookup(&self) -> bool {
        self.inner.has_lookup()
    }

    fn describe(&self) -> String {
        format!("relabeled {}", self.inner.describe())
    }
}

/// The image of a language under a word map, enumerated from a bounded
/// source slice.
pub struct Mapped {
    source: Lang,
    gens: GeneratorSet,
    map: WordMap,
    source_len: Arc<dyn Fn(usize) -> usize + Send + Sync>,
    carrier: Option<Fsa>,
    lookup: Option<Lookup>,
    name: String,
    cache: Mutex<Option<(usize, Arc<BTreeSet<Word>>)>>,
}

impl Mapped {
    /// Images of words of length `n` are found among images of source words
    /// of length at most `source_len(n)`.
    pub fn new(
        name: &str,
        source: Lang,
        gens: GeneratorSet,
        map: WordMap,
        source_len: Arc<dyn Fn(usize) -> usize + Send + Sync>,
    ) -> Self {
        Mapped { source, gens, map, source_len, carrier: None, lookup: None, name: name.into(), cache: Mutex::new(None) }
    }

    pub fn with_carrier(mut self, fsa: Fsa) -> Result<Self> {
        if fsa.alphabet() != self.gens.names().as_slice() {
            return Err(Error::AlphabetMismatch("carrier alphabet differs from generators".into()));
        }
        self.carrier = Some(fsa);
        Ok(self)
    }

    pub fn with_lookup(mut self, lookup: Lookup) -> Self {
        self.lookup = Some(lookup);
        self
    }

    pub fn source(&self) -> &Lang {
        &self.source
    }

    pub fn apply(&self, w: &Word) -> Option<Word> {
        (self.map)(w)
    }

    fn slice(&self, n: usize) -> Arc<BTreeSet<Word>> {
        let mut cache = self.cache.lock().expect("cache lock");
        if let Some((m, set)) = cache.as_ref() {
            if *m >= n {
                return set.clone();
            }
        }
        let set: BTreeSet<Word> = self
            .source
            .enumerate((self.source_len)(n))
            .iter()
            .filter_map(|w| (self.map)(w))
            .filter(|w| w.len() <= n)
            .collect();
        let set = Arc::new(set);
        *cache = Some((n, set.clone()));
        set
    }
}

impl Language for Mapped {
    fn alphabet(&self) -> &GeneratorSet {
        &self.gens
    }

    fn contains(&self, w: &Word) -> bool {
        match &self.carrier {
            Some(f) => f.accepts(&w.0),
            None => self.slice(w.len()).contains(w),
        }
    }

    fn enumerate(&self, max_len: usize) -> Vec<Word> {
        self.slice(max_len).iter().filter(|w| w.len() <= max_len).cloned().collect()
    }

    fn carrier(&self) -> Option<&Fsa> {
        self.carrier.as_ref()
    }

    fn lookup(&self, g: &Element) -> Option<Word> {
        self.lookup.as_ref().and_then(|f| f(g))
    }

    fn has_lookup(&self) -> bool {
        self.lookup.is_some()
    }

    fn describe(&self) -> String {
        format!("{} of {}", self.name, self.source.describe())
    }
}

/// A language with finitely many words removed.
pub struct Excluding {
    inner: Lang,
    removed: BTreeSet<Word>,
    carrier: Option<Fsa>,
}

impl Excluding {
    pub fn new(inner: Lang, removed: impl IntoIterator<Item = Word>) -> Result<Self> {
        let removed: BTreeSet<Word> = removed.into_iter().collect();
        let carrier = match inner.carrier() {
            Some(f) => {
                let raw: Vec<Vec<usize>> = removed.iter().map(|w| w.0.clone()).collect();
                Some(f.difference(&Fsa::from_words(f.alphabet().to_vec(), &raw)?)?)
            }
            None => None,
        };
        Ok(Excluding { inner, removed, carrier })
    }

    pub fn removed(&self) -> &BTreeSet<Word> {
        &self.removed
    }
}

impl Language for Excluding {
    fn alphabet(&self) -> &GeneratorSet {
        self.inner.alphabet()
    }

    fn contains(&self, w: &Word) -> bool {
        !self.removed.contains(w) && self.inner.contains(w)
    }

    fn enumerate(&self, max_len: usize) -> Vec<Word> {
        let mut v = self.inner.enumerate(max_len);
        v.retain(|w| !self.removed.contains(w));
        v
    }

    fn carrier(&self) -> Option<&Fsa> {
        self.carrier.as_ref()
    }

    fn lookup(&self, g: &Element) -> Option<Word> {
        self.inner.lookup(g).filter(|w| !self.removed.contains(w))
    }

    fn has_lookup(&self) -> bool {
        self.inner.has_lookup()
    }

    fn describe(&self) -> String {
        format!("{} minus {} words", self.inner.describe(), self.removed.len())
    }
}

/// Words made of non-empty blocks alternately drawn from two languages over
/// disjoint alphabets, plus the empty word.
pub struct FreeProductLanguage {
    parts: [Lang; 2],
    gens: GeneratorSet,
    maps: [Vec<Letter>; 2],
    back: Vec<Option<(usize, Letter)>>,
    blocks: Option<BlockSplitter>,
    carrier: Option<Fsa>,
}

impl FreeProductLanguage {
    pub fn new(first: Lang, second: Lang) -> Result<Self> {
        let gens = first.alphabet().disjoint_union(second.alphabet())?;
        let n = first.alphabet().len();
        let maps = [(0..n).collect::<Vec<_>>(), (n..gens.len()).collect::<Vec<_>>()];
        let mut back = vec![None; gens.len()];
        for (side, map) in maps.iter().enumerate() {
            for (a, &b) in map.iter().enumerate() {
                back[b] = Some((side, a));
            }
        }
        let carrier = match (first.carrier(), second.carrier()) {
            (Some(c1), Some(c2)) => {
                let names = gens.names();
                let eps = Fsa::epsilon(names.clone());
                let b1 = c1.map_symbols(names.clone(), &maps[0])?.difference(&eps)?;
                let b2 = c2.map_symbols(names.clone(), &maps[1])?.difference(&eps)?;
                let from = |x: &Fsa, y: &Fsa| -> Result<Fsa> {
                    x.concat(&y.concat(x)?.star())?.concat(&y.union(&eps)?)
                };
                Some(eps.union(&from(&b1, &b2)?)?.union(&from(&b2, &b1)?)?)
            }
            _ => None,
        };
        Ok(FreeProductLanguage { parts: [first, second], gens, maps, back, blocks: None, carrier })
    }

    /// Enables lookup through the alternating factorisation of an element.
    pub fn with_blocks(mut self, blocks: BlockSplitter) -> Self {
        self.blocks = Some(blocks);
        self
    }

    fn block_words(&self, w: &Word) -> Option<Vec<(usize, Word)>> {
        let mut out: Vec<(usize, Word)> = Vec::new();
        for &x in &w.0 {
            let (side, a) = (*self.back.get(x)?)?;
            match out.last_mut() {
                Some((s, b)) if *s == side => b.push(a),
                _ => out.push((side, Word(vec![a]))),
            }
        }
        Some(out)
    }

    fn emit(&self, side: usize, w: &Word, out: &mut Vec<Letter>) {
        out.extend(w.0.iter().map(|&a| self.maps[side][a]));
    }
}

impl Language for FreeProductLanguage {
    fn alphabet(&self) -> &GeneratorSet {
        &self.gens
    }

    fn contains(&self, w: &Word) -> bool {
        self.block_words(w)
            .is_some_and(|blocks| blocks.iter().all(|(s, b)| self.parts[*s].contains(b)))
    }

    fn enumerate(&self, max_len: usize) -> Vec<Word> {
        let slices: Vec<Vec<Word>> = self
            .parts
            .iter()
            .map(|p| p.enumerate(max_len).into_iter().filter(|w| !w.is_empty()).collect())
            .collect();
        let mut out = vec![Word::empty()];
        let mut stack: Vec<(Vec<Letter>, usize)> = Vec::new();
        for side in 0..2 {
            for b in &slices[side] {
                let mut v = Vec::new();
                self.emit(side, b, &mut v);
                stack.push((v, side));
            }
        }
        while let Some((v, side)) = stack.pop() {
            let other = 1 - side;
            for b in slices[other].iter().take_while(|b| b.len() + v.len() <= max_len) {
                let mut v2 = v.clone();
                self.emit(other, b, &mut v2);
                stack.push((v2, other));
            }
            out.push(Word(v));
        }
        sorted(out)
    }

    fn carrier(&self) -> Option<&Fsa> {
        self.carrier.as_ref()
    }

    fn lookup(&self, g: &Element) -> Option<Word> {
        let blocks = self.blocks.as_ref()?(g)?;
        let mut out = Vec::new();
        for (side, h) in blocks {
            let w = self.parts[side].lookup(&h)?;
            self.emit(side, &w, &mut out);
        }
        Some(Word(out))
    }

    fn has_lookup(&self) -> bool {
        self.blocks.is_some() && self.parts.iter().all(|p| p.has_lookup())
    }

    fn describe(&self) -> String {
        format!("({}) * ({})", self.parts[0].describe(), self.parts[1].describe())
    }
}
