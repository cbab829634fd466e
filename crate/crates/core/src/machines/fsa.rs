//! Finite state acceptors over a named alphabet, with ε-transitions.
//!
//! Every construction returns a trimmed automaton: each state is reachable
//! from an initial state and can reach an accepting one.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Sym = usize;
pub type State = usize;

/// How a homomorphism may erase letters.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HomMode {
    General,
    EpsilonFree,
    /// At most `k` consecutive letters of an accepted word map to ε.
    LimitedDeletion(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fsa {
    alphabet: Vec<String>,
    initial: Vec<State>,
    accepting: Vec<bool>,
    delta: Vec<Vec<(Option<Sym>, State)>>,
}

/// On-disk form shared by acceptors and transducers. `null` tokens are
/// ε-transitions; `output` is present only for transducers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MachineFile {
    pub alphabet: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_alphabet: Option<Vec<String>>,
    pub states: usize,
    pub initial: Vec<State>,
    pub accepting: Vec<State>,
    pub transitions: Vec<(State, Option<String>, State)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<Vec<Vec<String>>>,
}

pub(crate) fn check_alphabet(alphabet: &[String]) -> Result<()> {
    let mut seen = HashSet::new();
    for t in alphabet {
        if t.is_empty() || t.chars().any(char::is_whitespace) {
            return Err(Error::InvalidParams(format!("bad alphabet token `{t}`")));
        }
        if !seen.insert(t) {
            return Err(Error::InvalidParams(format!("duplicate alphabet token `{t}`")));
        }
    }
    Ok(())
}

impl Fsa {
    pub fn new(
        alphabet: Vec<String>,
        states: usize,
        initial: Vec<State>,
        accepting: Vec<State>,
        transitions: Vec<(State, Option<Sym>, State)>,
    ) -> Result<Self> {
        check_alphabet(&alphabet)?;
        let bad_state = |s: &State| *s >= states;
        if initial.iter().any(bad_state) || accepting.iter().any(bad_state) {
            return Err(Error::InvalidParams("state index out of range".into()));
        }
        for &(p, a, q) in &transitions {
            if p >= states || q >= states {
                return Err(Error::InvalidParams(format!("transition {p} → {q} out of range")));
            }
            if matches!(a, Some(a) if a >= alphabet.len()) {
                return Err(Error::InvalidParams(format!("symbol index {a:?} out of range")));
            }
        }
        let mut acc = vec![false; states];
        for s in accepting {
            acc[s] = true;
        }
        Ok(Fsa::build(alphabet, initial, acc, transitions))
    }

    fn build(
        alphabet: Vec<String>,
        mut initial: Vec<State>,
        accepting: Vec<bool>,
        transitions: impl IntoIterator<Item = (State, Option<Sym>, State)>,
    ) -> Self {
        let mut delta = vec![Vec::new(); accepting.len()];
        for (p, a, q) in transitions {
            delta[p].push((a, q));
        }
        for row in &mut delta {
            row.sort_unstable();
            row.dedup();
        }
        initial.sort_unstable();
        initial.dedup();
        Fsa { alphabet, initial, accepting, delta }
    }

    /// The empty language.
    pub fn empty(alphabet: Vec<String>) -> Self {
        Fsa::build(alphabet, vec![], vec![], [])
    }

    /// `{ε}`.
    pub fn epsilon(alphabet: Vec<String>) -> Self {
        Fsa::build(alphabet, vec![0], vec![true], [])
    }

    /// `X*`.
    pub fn universal(alphabet: Vec<String>) -> Self {
        let n = alphabet.len();
        Fsa::build(alphabet, vec![0], vec![true], (0..n).map(|a| (0, Some(a), 0)))
    }

    /// A finite language, built as a trie.
    pub fn from_words(alphabet: Vec<String>, words: &[Vec<Sym>]) -> Result<Self> {
        let mut trie: Vec<HashMap<Sym, State>> = vec![HashMap::new()];
        let mut acc = vec![false];
        for w in words {
            let mut s = 0;
            for &a in w {
                if a >= alphabet.len() {
                    return Err(Error::InvalidParams(format!("symbol index {a} out of range")));
                }
                s = match trie[s].get(&a) {
                    Some(&t) => t,
                    None => {
                        let t = trie.len();
                        trie.push(HashMap::new());
                        acc.push(false);
                        trie[s].insert(a, t);
                        t
                    }
                };
            }
            acc[s] = true;
        }
        let edges: Vec<_> = trie
            .iter()
            .enumerate()
            .flat_map(|(p, m)| m.iter().map(move |(&a, &q)| (p, Some(a), q)))
            .collect();
        Ok(Fsa::build(alphabet, vec![0], acc, edges).trim())
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.accepting.len()
    }

    pub fn initial(&self) -> &[State] {
        &self.initial
    }

    pub fn is_accepting(&self, s: State) -> bool {
        self.accepting[s]
    }

    pub fn accepting_states(&self) -> Vec<State> {
        (0..self.num_states()).filter(|&s| self.accepting[s]).collect()
    }

    pub fn edges(&self, s: State) -> &[(Option<Sym>, State)] {
        &self.delta[s]
    }

    pub fn transitions(&self) -> impl Iterator<Item = (State, Option<Sym>, State)> + '_ {
        self.delta
            .iter()
            .enumerate()
            .flat_map(|(p, row)| row.iter().map(move |&(a, q)| (p, a, q)))
    }

    pub fn num_transitions(&self) -> usize {
        self.delta.iter().map(Vec::len).sum()
    }

    pub fn has_epsilon(&self) -> bool {
        self.delta.iter().any(|row| row.iter().any(|(a, _)| a.is_none()))
    }

    pub fn is_deterministic(&self) -> bool {
        self.initial.len() <= 1
            && self.delta.iter().all(|row| {
                row.iter().all(|(a, _)| a.is_some()) && row.windows(2).all(|w| w[0].0 != w[1].0)
            })
    }

    pub fn symbol(&self, token: &str) -> Option<Sym> {
        self.alphabet.iter().position(|t| t == token)
    }

    /// Symbol indices of whitespace-separated tokens.
    pub fn parse_symbols(&self, text: &str) -> Result<Vec<Sym>> {
        text.split_whitespace()
            .filter(|t| *t != "1")
            .map(|t| self.symbol(t).ok_or_else(|| Error::UnknownGenerator(t.to_string())))
            .collect()
    }

    pub fn format_symbols(&self, w: &[Sym]) -> String {
        if w.is_empty() {
            return "1".into();
        }
        w.iter().map(|&a| self.alphabet[a].as_str()).collect::<Vec<_>>().join(" ")
    }

    fn same_alphabet(&self, other: &Fsa) -> Result<()> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch(format!(
                "[{}] vs [{}]",
                self.alphabet.join(" "),
                other.alphabet.join(" ")
            )));
        }
        Ok(())
    }

    /// ε-closure, sorted.
    pub fn closure(&self, states: impl IntoIterator<Item = State>) -> Vec<State> {
        let mut seen = vec![false; self.num_states()];
        let mut stack: Vec<State> = Vec::new();
        for s in states {
            if !seen[s] {
                seen[s] = true;
                stack.push(s);
            }
        }
        let mut out = stack.clone();
        while let Some(s) = stack.pop() {
            for &(a, t) in &self.delta[s] {
                if a.is_some() {
                    break;
                }
                if !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                    out.push(t);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Closed successor sets of a closed state set, by symbol.
    fn successors(&self, set: &[State]) -> BTreeMap<Sym, Vec<State>> {
        let mut raw: BTreeMap<Sym, Vec<State>> = BTreeMap::new();
        for &s in set {
            for &(a, t) in &self.delta[s] {
                if let Some(a) = a {
                    raw.entry(a).or_default().push(t);
                }
            }
        }
        raw.into_iter().map(|(a, ts)| (a, self.closure(ts))).collect()
    }

    pub fn step(&self, set: &[State], a: Sym) -> Vec<State> {
        let targets: Vec<State> = set
            .iter()
            .flat_map(|&s| self.delta[s].iter().filter(|(b, _)| *b == Some(a)).map(|&(_, t)| t))
            .collect();
        self.closure(targets)
    }

    pub fn accepts(&self, w: &[Sym]) -> bool {
        let mut cur = self.closure(self.initial.iter().copied());
        for &a in w {
            if cur.is_empty() {
                return false;
            }
            cur = self.step(&cur, a);
        }
        cur.iter().any(|&s| self.accepting[s])
    }

    /// Keeps only states that are reachable and co-reachable.
    pub fn trim(&self) -> Fsa {
        let n = self.num_states();
        let mut fwd = vec![false; n];
        let mut stack: Vec<State> = self.initial.clone();
        for &s in &stack {
            fwd[s] = true;
        }
        while let Some(s) = stack.pop() {
            for &(_, t) in &self.delta[s] {
                if !fwd[t] {
                    fwd[t] = true;
                    stack.push(t);
                }
            }
        }
        let mut rev = vec![Vec::new(); n];
        for (p, _, q) in self.transitions() {
            rev[q].push(p);
        }
        let mut bwd = vec![false; n];
        let mut stack: Vec<State> = (0..n).filter(|&s| self.accepting[s]).collect();
        for &s in &stack {
            bwd[s] = true;
        }
        while let Some(s) = stack.pop() {
            for &p in &rev[s] {
                if !bwd[p] {
                    bwd[p] = true;
                    stack.push(p);
                }
            }
        }
        let mut map = vec![usize::MAX; n];
        let mut count = 0;
        for s in 0..n {
            if fwd[s] && bwd[s] {
                map[s] = count;
                count += 1;
            }
        }
        let keep = |s: State| map[s] != usize::MAX;
        let accepting = (0..n).filter(|&s| keep(s)).map(|s| self.accepting[s]).collect();
        let initial = self.initial.iter().filter(|&&s| keep(s)).map(|&s| map[s]).collect();
        let edges: Vec<_> = self
            .transitions()
            .filter(|&(p, _, q)| keep(p) && keep(q))
            .map(|(p, a, q)| (map[p], a, map[q]))
            .collect();
        Fsa::build(self.alphabet.clone(), initial, accepting, edges)
    }

    pub fn remove_epsilon(&self) -> Fsa {
        if !self.has_epsilon() {
            return self.clone();
        }
        let n = self.num_states();
        let mut accepting = vec![false; n];
        let mut edges = Vec::new();
        for p in 0..n {
            let cl = self.closure([p]);
            accepting[p] = cl.iter().any(|&q| self.accepting[q]);
            for &q in &cl {
                for &(a, r) in &self.delta[q] {
                    if a.is_some() {
                        edges.push((p, a, r));
                    }
                }
            }
        }
        Fsa::build(self.alphabet.clone(), self.initial.clone(), accepting, edges).trim()
    }

    /// Subset construction; the result is deterministic, partial and trim.
    pub fn determinize(&self) -> Fsa {
        if self.is_deterministic() {
            return self.trim();
        }
        let start = self.closure(self.initial.iter().copied());
        if start.is_empty() {
            return Fsa::empty(self.alphabet.clone());
        }
        let mut index: HashMap<Vec<State>, State> = HashMap::from([(start.clone(), 0)]);
        let mut sets = vec![start];
        let mut edges = Vec::new();
        let mut i = 0;
        while i < sets.len() {
            let succ = self.successors(&sets[i]);
            for (a, t) in succ {
                let j = match index.get(&t) {
                    Some(&j) => j,
                    None => {
                        let j = sets.len();
                        index.insert(t.clone(), j);
                        sets.push(t);
                        j
                    }
                };
                edges.push((i, Some(a), j));
            }
            i += 1;
        }
        let accepting = sets.iter().map(|s| s.iter().any(|&q| self.accepting[q])).collect();
        Fsa::build(self.alphabet.clone(), vec![0], accepting, edges).trim()
    }

    /// Deterministic and total: a sink state absorbs missing transitions.
    pub fn complete(&self) -> Fsa {
        let d = self.determinize();
        let k = self.alphabet.len();
        let n = d.num_states();
        let sink = n;
        let mut accepting = d.accepting.clone();
        accepting.push(false);
        let mut edges: Vec<_> = d.transitions().collect();
        for s in 0..n {
            let present: HashSet<Sym> = d.delta[s].iter().filter_map(|(a, _)| *a).collect();
            for a in 0..k {
                if !present.contains(&a) {
                    edges.push((s, Some(a), sink));
                }
            }
        }
        for a in 0..k {
            edges.push((sink, Some(a), sink));
        }
        let initial = if n == 0 { vec![sink] } else { d.initial.clone() };
        Fsa::build(self.alphabet.clone(), initial, accepting, edges)
    }

    pub fn complement(&self) -> Fsa {
        let mut c = self.complete();
        for a in &mut c.accepting {
            *a = !*a;
        }
        c.trim()
    }

    pub fn intersect(&self, other: &Fsa) -> Result<Fsa> {
        self.same_alphabet(other)?;
        let a = self.remove_epsilon();
        let b = other.remove_epsilon();
        let mut index: HashMap<(State, State), State> = HashMap::new();
        let mut pairs = Vec::new();
        for &p in &a.initial {
            for &q in &b.initial {
                index.insert((p, q), pairs.len());
                pairs.push((p, q));
            }
        }
        let initial: Vec<State> = (0..pairs.len()).collect();
        let mut edges = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let (p, q) = pairs[i];
            for &(x, p2) in &a.delta[p] {
                for &(y, q2) in &b.delta[q] {
                    if x != y {
                        continue;
                    }
                    let j = *index.entry((p2, q2)).or_insert_with(|| {
                        pairs.push((p2, q2));
                        pairs.len() - 1
                    });
                    edges.push((i, x, j));
                }
            }
            i += 1;
        }
        let accepting = pairs.iter().map(|&(p, q)| a.accepting[p] && b.accepting[q]).collect();
        Ok(Fsa::build(self.alphabet.clone(), initial, accepting, edges).trim())
    }

    /// Disjoint union of state sets, shifting `other` by `self.num_states()`.
    fn juxtapose(&self, other: &Fsa) -> (Vec<bool>, Vec<(State, Option<Sym>, State)>, usize) {
        let off = self.num_states();
        let mut accepting = self.accepting.clone();
        accepting.extend_from_slice(&other.accepting);
        let mut edges: Vec<_> = self.transitions().collect();
        edges.extend(other.transitions().map(|(p, a, q)| (p + off, a, q + off)));
        (accepting, edges, off)
    }

    pub fn union(&self, other: &Fsa) -> Result<Fsa> {
        self.same_alphabet(other)?;
        let (accepting, edges, off) = self.juxtapose(other);
        let mut initial = self.initial.clone();
        initial.extend(other.initial.iter().map(|s| s + off));
        Ok(Fsa::build(self.alphabet.clone(), initial, accepting, edges).trim())
    }

    pub fn concat(&self, other: &Fsa) -> Result<Fsa> {
        self.same_alphabet(other)?;
        let (mut accepting, mut edges, off) = self.juxtapose(other);
        for s in 0..off {
            if self.accepting[s] {
                accepting[s] = false;
                edges.extend(other.initial.iter().map(|&t| (s, None, t + off)));
            }
        }
        Ok(Fsa::build(self.alphabet.clone(), self.initial.clone(), accepting, edges).trim())
    }

    fn iterate(&self, allow_empty: bool) -> Fsa {
        let hub = self.num_states();
        let mut accepting = self.accepting.clone();
        accepting.push(allow_empty);
        let mut edges: Vec<_> = self.transitions().collect();
        edges.extend(self.initial.iter().map(|&t| (hub, None, t)));
        for s in 0..hub {
            if self.accepting[s] {
                edges.push((s, None, hub));
                if !allow_empty {
                    edges.extend(self.initial.iter().map(|&t| (s, None, t)));
                }
            }
        }
        Fsa::build(self.alphabet.clone(), vec![hub], accepting, edges).trim()
    }

    pub fn star(&self) -> Fsa {
        self.iterate(true)
    }

    pub fn plus(&self) -> Fsa {
        self.iterate(false)
    }

    pub fn difference(&self, other: &Fsa) -> Result<Fsa> {
        self.intersect(&other.complement())
    }

    pub fn is_empty(&self) -> bool {
        self.trim().initial.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        let t = self.remove_epsilon().trim();
        // colour 1 = on the DFS stack, 2 = finished
        let n = t.num_states();
        let mut colour = vec![0u8; n];
        for root in 0..n {
            if colour[root] != 0 {
                continue;
            }
            let mut stack = vec![(root, 0usize)];
            colour[root] = 1;
            while let Some(top) = stack.last_mut() {
                let (s, i) = *top;
                if i < t.delta[s].len() {
                    top.1 += 1;
                    let next = t.delta[s][i].1;
                    match colour[next] {
                        0 => {
                            colour[next] = 1;
                            stack.push((next, 0));
                        }
                        1 => return false,
                        _ => {}
                    }
                } else {
                    colour[s] = 2;
                    stack.pop();
                }
            }
        }
        true
    }

    pub fn equivalent(&self, other: &Fsa) -> Result<bool> {
        Ok(self.difference(other)?.is_empty() && other.difference(self)?.is_empty())
    }

    /// All accepted words of length at most `max_len`, in shortlex order.
    pub fn enumerate(&self, max_len: usize) -> Vec<Vec<Sym>> {
        let d = self.determinize();
        let mut out = Vec::new();
        let Some(&start) = d.initial.first() else { return out };
        let mut level: Vec<(Vec<Sym>, State)> = vec![(Vec::new(), start)];
        for len in 0..=max_len {
            for (w, s) in &level {
                if d.accepting[*s] {
                    out.push(w.clone());
                }
            }
            if len == max_len {
                break;
            }
            let mut next = Vec::new();
            for (w, s) in &level {
                for &(a, t) in &d.delta[*s] {
                    let mut w2 = w.clone();
                    w2.push(a.expect("deterministic"));
                    next.push((w2, t));
                }
            }
            level = next;
        }
        out
    }

    /// The shortlex-least accepted word, by breadth-first search over
    /// reachable state sets.
    pub fn shortest_word(&self) -> Option<Vec<Sym>> {
        let start = self.closure(self.initial.iter().copied());
        if start.is_empty() {
            return None;
        }
        let mut seen: HashMap<Vec<State>, usize> = HashMap::from([(start.clone(), 0)]);
        let mut nodes: Vec<(Vec<State>, usize, Sym)> = vec![(start, usize::MAX, 0)];
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            if nodes[i].0.iter().any(|&s| self.accepting[s]) {
                let mut w = Vec::new();
                let mut j = i;
                while nodes[j].1 != usize::MAX {
                    w.push(nodes[j].2);
                    j = nodes[j].1;
                }
                w.reverse();
                return Some(w);
            }
            let succ = self.successors(&nodes[i].0);
            for (a, t) in succ {
                if !seen.contains_key(&t) {
                    seen.insert(t.clone(), nodes.len());
                    queue.push_back(nodes.len());
                    nodes.push((t, i, a));
                }
            }
        }
        None
    }

    /// Image under a letter-to-word homomorphism into `target`.
    pub fn homomorphism(&self, target: Vec<String>, images: &[Vec<Sym>], mode: HomMode) -> Result<Fsa> {
        check_alphabet(&target)?;
        if images.len() != self.alphabet.len() {
            return Err(Error::AlphabetMismatch(format!(
                "{} images for {} symbols",
                images.len(),
                self.alphabet.len()
            )));
        }
        if images.iter().flatten().any(|&b| b >= target.len()) {
            return Err(Error::InvalidParams("image symbol out of range".into()));
        }
        let erased: Vec<Sym> = (0..images.len()).filter(|&a| images[a].is_empty()).collect();
        match mode {
            HomMode::General => {}
            HomMode::EpsilonFree => {
                if let Some(&a) = erased.first() {
                    return Err(Error::ModeViolation(format!(
                        "`{}` maps to the empty word",
                        self.alphabet[a]
                    )));
                }
            }
            HomMode::LimitedDeletion(k) => {
                if !erased.is_empty() {
                    let bad = Fsa::factor_run(self.alphabet.clone(), &erased, k + 1);
                    if let Some(w) = self.intersect(&bad)?.shortest_word() {
                        return Err(Error::ModeViolation(format!(
                            "accepted word `{}` has more than {k} consecutive deletions",
                            self.format_symbols(&w)
                        )));
                    }
                }
            }
        }
        let mut accepting = self.accepting.clone();
        let mut edges = Vec::new();
        for (p, a, q) in self.transitions() {
            let img: &[Sym] = match a {
                Some(a) => &images[a],
                None => &[],
            };
            if img.is_empty() {
                edges.push((p, None, q));
                continue;
            }
            let mut cur = p;
            for (i, &b) in img.iter().enumerate() {
                let next = if i + 1 == img.len() {
                    q
                } else {
                    accepting.push(false);
                    accepting.len() - 1
                };
                edges.push((cur, Some(b), next));
                cur = next;
            }
        }
        Ok(Fsa::build(target, self.initial.clone(), accepting, edges).trim())
    }

    /// `X* D^r X*` for a set `D` of symbols.
    fn factor_run(alphabet: Vec<String>, d: &[Sym], r: usize) -> Fsa {
        let k = alphabet.len();
        let mut edges = Vec::new();
        for a in 0..k {
            edges.push((0, Some(a), 0));
            edges.push((r, Some(a), r));
        }
        for i in 0..r {
            for &a in d {
                edges.push((i, Some(a), i + 1));
            }
        }
        let mut accepting = vec![false; r + 1];
        accepting[r] = true;
        Fsa::build(alphabet, vec![0], accepting, edges)
    }

    /// `{w ∈ source* : image(w) ∈ L}`.
    pub fn inverse_homomorphism(&self, source: Vec<String>, images: &[Vec<Sym>]) -> Result<Fsa> {
        check_alphabet(&source)?;
        if images.len() != source.len() {
            return Err(Error::AlphabetMismatch(format!(
                "{} images for {} symbols",
                images.len(),
                source.len()
            )));
        }
        if images.iter().flatten().any(|&b| b >= self.alphabet.len()) {
            return Err(Error::InvalidParams("image symbol out of range".into()));
        }
        let a = self.remove_epsilon();
        let mut edges = Vec::new();
        for p in 0..a.num_states() {
            for (x, img) in images.iter().enumerate() {
                let mut set = vec![p];
                for &b in img {
                    set = a.step(&set, b);
                    if set.is_empty() {
                        break;
                    }
                }
                edges.extend(set.into_iter().map(|q| (p, Some(x), q)));
            }
        }
        Ok(Fsa::build(source, a.initial.clone(), a.accepting.clone(), edges).trim())
    }

    /// Same automaton over renamed tokens.
    pub fn with_alphabet(&self, alphabet: Vec<String>) -> Result<Fsa> {
        check_alphabet(&alphabet)?;
        if alphabet.len() != self.alphabet.len() {
            return Err(Error::AlphabetMismatch("renaming changes the alphabet size".into()));
        }
        Ok(Fsa { alphabet, ..self.clone() })
    }

    /// Letter-to-letter image: symbol `a` becomes `map[a]` in `target`.
    pub fn map_symbols(&self, target: Vec<String>, map: &[Sym]) -> Result<Fsa> {
        let images: Vec<Vec<Sym>> = map.iter().map(|&b| vec![b]).collect();
        self.homomorphism(target, &images, HomMode::EpsilonFree)
    }

    pub fn to_file(&self) -> MachineFile {
        MachineFile {
            alphabet: self.alphabet.clone(),
            output_alphabet: None,
            states: self.num_states(),
            initial: self.initial.clone(),
            accepting: self.accepting_states(),
            transitions: self
                .transitions()
                .map(|(p, a, q)| (p, a.map(|a| self.alphabet[a].clone()), q))
                .collect(),
            output: None,
        }
    }

    pub fn from_file(f: &MachineFile) -> Result<Fsa> {
        let lookup = |t: &str| {
            f.alphabet
                .iter()
                .position(|s| s == t)
                .ok_or_else(|| Error::Parse(format!("token `{t}` is not in the alphabet")))
        };
        let transitions = f
            .transitions
            .iter()
            .map(|(p, a, q)| Ok((*p, a.as_deref().map(lookup).transpose()?, *q)))
            .collect::<Result<Vec<_>>>()?;
        Fsa::new(f.alphabet.clone(), f.states, f.initial.clone(), f.accepting.clone(), transitions)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("machine files serialise")
    }

    pub fn from_json(text: &str) -> Result<Fsa> {
        let f: MachineFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Fsa::from_file(&f)
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph fsa {\n  rankdir=LR;\n  node [shape=circle];\n");
        for q in 0..self.num_states() {
            if self.accepting[q] {
                let _ = writeln!(s, "  {q} [shape=doublecircle];");
            }
        }
        for (i, &q) in self.initial.iter().enumerate() {
            let _ = writeln!(s, "  start{i} [shape=point];\n  start{i} -> {q};");
        }
        for (p, a, q) in self.transitions() {
            let label = a.map_or("ε", |a| self.alphabet[a].as_str()).replace('"', "\\\"");
            let _ = writeln!(s, "  {p} -> {q} [label=\"{label}\"];");
        }
        s.push_str("}\n");
        s
    }
}
