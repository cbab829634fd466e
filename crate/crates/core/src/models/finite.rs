use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::group::{Element, Generator, GeneratorSet, GroupModel, Letter, Word};

/// A finite group given by its multiplication table; element 0 is the identity.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    label: String,
    table: Vec<Vec<usize>>,
    inv: Vec<usize>,
    gen_elems: Vec<usize>,
    gens: GeneratorSet,
    words: Vec<Word>,
}

impl FiniteGroup {
    /// Builds the group from a Cayley table and named generating elements.
    /// Missing inverse letters are appended as `name^-1`; involutions are
    /// their own inverse letter.
    pub fn from_table(label: &str, table: Vec<Vec<usize>>, generators: &[(&str, usize)]) -> Result<Self> {
        let n = table.len();
        if n == 0 || table.iter().any(|row| row.len() != n || row.iter().any(|&v| v >= n)) {
            return Err(Error::InvalidParams("table must be square with entries < order".into()));
        }
        if (0..n).any(|i| table[0][i] != i || table[i][0] != i) {
            return Err(Error::InvalidParams("element 0 must be the identity".into()));
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::InvalidParams("table is not associative".into()));
                    }
                }
            }
        }
        let mut inv = vec![usize::MAX; n];
        for a in 0..n {
            inv[a] = (0..n)
                .find(|&b| table[a][b] == 0)
                .ok_or_else(|| Error::InvalidParams(format!("element {a} has no inverse")))?;
        }
        let mut names: Vec<String> = Vec::new();
        let mut elems: Vec<usize> = Vec::new();
        let mut inverse: Vec<Letter> = Vec::new();
        for &(name, g) in generators {
            if g >= n {
                return Err(Error::InvalidParams(format!("generator {name} out of range")));
            }
            let i = names.len();
            names.push(name.to_string());
            elems.push(g);
            if inv[g] == g {
                inverse.push(i);
            } else {
                names.push(format!("{name}^-1"));
                elems.push(inv[g]);
                inverse.push(i + 1);
                inverse.push(i);
            }
        }
        let gens = GeneratorSet::new(
            names
                .into_iter()
                .map(|name| Generator { name, is_identity: false })
                .collect(),
            inverse,
        )?;
        // breadth-first words give every element a geodesic representative
        let mut words: Vec<Option<Word>> = vec![None; n];
        words[0] = Some(Word::empty());
        let mut queue = VecDeque::from([0usize]);
        while let Some(a) = queue.pop_front() {
            for (x, &g) in elems.iter().enumerate() {
                let b = table[a][g];
                if words[b].is_none() {
                    let mut w = words[a].clone().unwrap();
                    w.push(x);
                    words[b] = Some(w);
                    queue.push_back(b);
                }
            }
        }
        if words.iter().any(Option::is_none) {
            return Err(Error::InvalidParams("generators do not generate the group".into()));
        }
        Ok(FiniteGroup {
            label: label.to_string(),
            table,
            inv,
            gen_elems: elems,
            gens,
            words: words.into_iter().map(Option::unwrap).collect(),
        })
    }

    /// `Z/n` generated by `name` (element 1).
    pub fn cyclic(n: usize, name: &str) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParams("cyclic order must be positive".into()));
        }
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let gens: Vec<(&str, usize)> = if n == 1 { vec![] } else { vec![(name, 1)] };
        FiniteGroup::from_table(&format!("cyclic:{n}"), table, &gens)
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn element(&self, i: usize) -> Element {
        Element(vec![i as i64])
    }

    fn idx(g: &Element) -> usize {
        g.0[0] as usize
    }
}

impl GroupModel for FiniteGroup {
    fn name(&self) -> String {
        self.label.clone()
    }

    fn generators(&self) -> &GeneratorSet {
        &self.gens
    }

    fn identity(&self) -> Element {
        Element(vec![0])
    }

    fn generator_element(&self, x: Letter) -> Element {
        Element(vec![self.gen_elems[x] as i64])
    }

    fn multiply(&self, g: &Element, h: &Element) -> Element {
        Element(vec![self.table[Self::idx(g)][Self::idx(h)] as i64])
    }

    fn inverse(&self, g: &Element) -> Element {
        Element(vec![self.inv[Self::idx(g)] as i64])
    }

    fn word_of(&self, g: &Element) -> Option<Word> {
        self.words.get(Self::idx(g)).cloned()
    }
}
