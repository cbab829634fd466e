//! Generalised sequential machines: acceptors whose transitions also emit a
//! word over an output alphabet.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::machines::fsa::{check_alphabet, Fsa, MachineFile, State, Sym};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GsmEdge {
    pub from: State,
    pub input: Sym,
    pub to: State,
    pub output: Vec<Sym>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gsm {
    input: Vec<String>,
    output: Vec<String>,
    initial: Vec<State>,
    accepting: Vec<bool>,
    delta: Vec<Vec<(Sym, State, Vec<Sym>)>>,
}

impl Gsm {
    pub fn new(
        input: Vec<String>,
        output: Vec<String>,
        states: usize,
        initial: Vec<State>,
        accepting: Vec<State>,
        edges: Vec<GsmEdge>,
    ) -> Result<Self> {
        check_alphabet(&input)?;
        check_alphabet(&output)?;
        if initial.iter().chain(&accepting).any(|&s| s >= states) {
            return Err(Error::InvalidParams("state index out of range".into()));
        }
        let mut acc = vec![false; states];
        for s in accepting {
            acc[s] = true;
        }
        let mut delta = vec![Vec::new(); states];
        for e in edges {
            if e.from >= states || e.to >= states || e.input >= input.len() {
                return Err(Error::InvalidParams("transducer edge out of range".into()));
            }
            if e.output.iter().any(|&b| b >= output.len()) {
                return Err(Error::InvalidParams("output symbol out of range".into()));
            }
            delta[e.from].push((e.input, e.to, e.output));
        }
        for row in &mut delta {
            row.sort();
            row.dedup();
        }
        let mut initial = initial;
        initial.sort_unstable();
        initial.dedup();
        Ok(Gsm { input, output, initial, accepting: acc, delta })
    }

    /// Copies its input.
    pub fn identity(alphabet: Vec<String>) -> Result<Self> {
        let edges = (0..alphabet.len())
            .map(|a| GsmEdge { from: 0, input: a, to: 0, output: vec![a] })
            .collect();
        Gsm::new(alphabet.clone(), alphabet, 1, vec![0], vec![0], edges)
    }

    pub fn input_alphabet(&self) -> &[String] {
        &self.input
    }

    pub fn output_alphabet(&self) -> &[String] {
        &self.output
    }

    pub fn num_states(&self) -> usize {
        self.accepting.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = GsmEdge> + '_ {
        self.delta.iter().enumerate().flat_map(|(p, row)| {
            row.iter()
                .map(move |(a, q, out)| GsmEdge { from: p, input: *a, to: *q, output: out.clone() })
        })
    }

    pub fn is_epsilon_free(&self) -> bool {
        self.delta.iter().flatten().all(|(_, _, out)| !out.is_empty())
    }

    /// Outputs of all accepting runs on `w`.
    pub fn run(&self, w: &[Sym]) -> BTreeSet<Vec<Sym>> {
        let mut configs: BTreeSet<(State, Vec<Sym>)> =
            self.initial.iter().map(|&s| (s, Vec::new())).collect();
        for &a in w {
            let mut next = BTreeSet::new();
            for (s, out) in &configs {
                for (b, t, o) in &self.delta[*s] {
                    if *b == a {
                        let mut out2 = out.clone();
                        out2.extend_from_slice(o);
                        next.insert((*t, out2));
                    }
                }
            }
            configs = next;
            if configs.is_empty() {
                break;
            }
        }
        configs.into_iter().filter(|(s, _)| self.accepting[*s]).map(|(_, o)| o).collect()
    }

    /// The acceptor for `{outputs of accepting runs on w : w ∈ L(a)}`.
    pub fn image(&self, a: &Fsa) -> Result<Fsa> {
        if a.alphabet() != self.input.as_slice() {
            return Err(Error::AlphabetMismatch("acceptor alphabet differs from transducer input".into()));
        }
        let a = a.remove_epsilon();
        let mut index: HashMap<(State, State), State> = HashMap::new();
        let mut pairs = Vec::new();
        for &p in a.initial() {
            for &q in &self.initial {
                index.insert((p, q), pairs.len());
                pairs.push((p, q));
            }
        }
        let initial: Vec<State> = (0..pairs.len()).collect();
        let mut raw_edges: Vec<(State, Vec<Sym>, State)> = Vec::new();
        let mut i = 0;
        while i < pairs.len() {
            let (p, q) = pairs[i];
            for &(x, p2) in a.edges(p) {
                let x = x.expect("ε-free");
                for (y, q2, out) in &self.delta[q] {
                    if *y != x {
                        continue;
                    }
                    let j = *index.entry((p2, *q2)).or_insert_with(|| {
                        pairs.push((p2, *q2));
                        pairs.len() - 1
                    });
                    raw_edges.push((i, out.clone(), j));
                }
            }
            i += 1;
        }
        let mut accepting: Vec<State> = Vec::new();
        for (k, &(p, q)) in pairs.iter().enumerate() {
            if a.is_accepting(p) && self.accepting[q] {
                accepting.push(k);
            }
        }
        let mut states = pairs.len();
        let mut edges = Vec::new();
        for (p, out, q) in raw_edges {
            if out.is_empty() {
                edges.push((p, None, q));
                continue;
            }
            let mut cur = p;
            for (k, &b) in out.iter().enumerate() {
                let next = if k + 1 == out.len() {
                    q
                } else {
                    states += 1;
                    states - 1
                };
                edges.push((cur, Some(b), next));
                cur = next;
            }
        }
        Ok(Fsa::new(self.output.clone(), states, initial, accepting, edges)?.trim())
    }

    pub fn to_file(&self) -> MachineFile {
        let edges: Vec<GsmEdge> = self.edges().collect();
        MachineFile {
            alphabet: self.input.clone(),
            output_alphabet: Some(self.output.clone()),
            states: self.num_states(),
            initial: self.initial.clone(),
            accepting: (0..self.num_states()).filter(|&s| self.accepting[s]).collect(),
            transitions: edges
                .iter()
                .map(|e| (e.from, Some(self.input[e.input].clone()), e.to))
                .collect(),
            output: Some(
                edges
                    .iter()
                    .map(|e| e.output.iter().map(|&b| self.output[b].clone()).collect())
                    .collect(),
            ),
        }
    }

    pub fn from_file(f: &MachineFile) -> Result<Gsm> {
        let outputs = f
            .output
            .as_ref()
            .ok_or_else(|| Error::Parse("transducer file lacks `output`".into()))?;
        if outputs.len() != f.transitions.len() {
            return Err(Error::Parse("`output` must align with `transitions`".into()));
        }
        let out_alpha = f.output_alphabet.clone().unwrap_or_else(|| f.alphabet.clone());
        let find = |alpha: &[String], t: &str| {
            alpha
                .iter()
                .position(|s| s == t)
                .ok_or_else(|| Error::Parse(format!("token `{t}` is not in the alphabet")))
        };
        let mut edges = Vec::new();
        for ((p, a, q), out) in f.transitions.iter().zip(outputs) {
            let a = a
                .as_deref()
                .ok_or_else(|| Error::Parse("transducer transitions must read a symbol".into()))?;
            edges.push(GsmEdge {
                from: *p,
                input: find(&f.alphabet, a)?,
                to: *q,
                output: out.iter().map(|t| find(&out_alpha, t)).collect::<Result<_>>()?,
            });
        }
        Gsm::new(f.alphabet.clone(), out_alpha, f.states, f.initial.clone(), f.accepting.clone(), edges)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_transducer() {
        let ab = vec!["a".to_string(), "b".into()];
        let m = Gsm::identity(ab.clone()).unwrap();
        assert_eq!(m.run(&[0, 1]), BTreeSet::from([vec![0, 1]]));
        let l = Fsa::from_words(ab, &[vec![0, 1], vec![1]]).unwrap().star();
        assert!(m.image(&l).unwrap().equivalent(&l).unwrap());
        assert!(m.is_epsilon_free());
    }

    #[test]
    fn file_round_trip() {
        let m = Gsm::new(
            vec!["a".into()],
            vec!["x".into(), "y".into()],
            2,
            vec![0],
            vec![0],
            vec![
                GsmEdge { from: 0, input: 0, to: 1, output: vec![0] },
                GsmEdge { from: 1, input: 0, to: 0, output: vec![1, 1] },
            ],
        )
        .unwrap();
        assert_eq!(Gsm::from_file(&m.to_file()).unwrap(), m);
        assert_eq!(m.run(&[0, 0]), BTreeSet::from([vec![0, 1, 1]]));
        assert!(m.run(&[0]).is_empty());
    }
}
