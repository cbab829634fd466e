use crate::group::{Element, GeneratorSet, GroupModel, Letter, Word};

/// Free group of rank `n`; elements are freely reduced words encoded as
/// signed 1-based generator indices.
#[derive(Clone, Debug)]
pub struct FreeGroup {
    rank: usize,
    gens: GeneratorSet,
}

impl FreeGroup {
    pub fn new(rank: usize) -> Self {
        let names: Vec<String> = if rank <= 4 {
            ["a", "b", "c", "d"][..rank].iter().map(|s| s.to_string()).collect()
        } else {
            (1..=rank).map(|i| format!("x{i}")).collect()
        };
        FreeGroup::with_names(&names)
    }

    pub fn with_names<S: AsRef<str>>(names: &[S]) -> Self {
        FreeGroup { rank: names.len(), gens: GeneratorSet::from_names(names) }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    fn signed(x: Letter) -> i64 {
        let i = (x / 2) as i64 + 1;
        if x.is_multiple_of(2) {
            i
        } else {
            -i
        }
    }

    fn letter_of(s: i64) -> Letter {
        let i = (s.unsigned_abs() - 1) as usize;
        if s > 0 {
            2 * i
        } else {
            2 * i + 1
        }
    }
}

fn reduce_into(out: &mut Vec<i64>, s: i64) {
    if out.last() == Some(&-s) {
        out.pop();
    } else {
        out.push(s);
    }
}

impl GroupModel for FreeGroup {
    fn name(&self) -> String {
        format!("free:{}", self.rank)
    }

    fn generators(&self) -> &GeneratorSet {
        &self.gens
    }

    fn identity(&self) -> Element {
        Element(Vec::new())
    }

    fn generator_element(&self, x: Letter) -> Element {
        Element(vec![Self::signed(x)])
    }

    fn multiply(&self, g: &Element, h: &Element) -> Element {
        let mut out = g.0.clone();
        for &s in &h.0 {
            reduce_into(&mut out, s);
        }
        Element(out)
    }

    fn inverse(&self, g: &Element) -> Element {
        Element(g.0.iter().rev().map(|s| -s).collect())
    }

    fn act(&self, g: &Element, x: Letter) -> Element {
        let mut out = g.0.clone();
        reduce_into(&mut out, Self::signed(x));
        Element(out)
    }

    fn word_of(&self, g: &Element) -> Option<Word> {
        Some(Word(g.0.iter().map(|&s| Self::letter_of(s)).collect()))
    }
}
