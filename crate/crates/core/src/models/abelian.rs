use crate::group::{Element, GeneratorSet, GroupModel, Letter, Word};

/// `Z^n` with standard generators; letter `2i` is `+e_i`, `2i+1` is `-e_i`.
#[derive(Clone, Debug)]
pub struct FreeAbelian {
    rank: usize,
    gens: GeneratorSet,
}

impl FreeAbelian {
    /// Rank-`n` lattice with generators `a, b, c, …` (or `e1 … en` past 3).
    pub fn new(rank: usize) -> Self {
        let names: Vec<String> = if rank <= 3 {
            ["a", "b", "c"][..rank].iter().map(|s| s.to_string()).collect()
        } else {
            (1..=rank).map(|i| format!("e{i}")).collect()
        };
        FreeAbelian::with_names(&names)
    }

    pub fn with_names<S: AsRef<str>>(names: &[S]) -> Self {
        FreeAbelian { rank: names.len(), gens: GeneratorSet::from_names(names) }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn element(&self, coords: &[i64]) -> Element {
        assert_eq!(coords.len(), self.rank);
        Element(coords.to_vec())
    }

    /// Word `e1^{g1} e2^{g2} …` for the given coordinates.
    pub fn power_word(&self, g: &Element) -> Word {
        let mut w = Vec::new();
        for (i, &c) in g.0.iter().enumerate() {
            let x = if c >= 0 { 2 * i } else { 2 * i + 1 };
            w.extend(std::iter::repeat_n(x, c.unsigned_abs() as usize));
        }
        Word(w)
    }
}

impl GroupModel for FreeAbelian {
    fn name(&self) -> String {
        format!("free_abelian:{}", self.rank)
    }

    fn generators(&self) -> &GeneratorSet {
        &self.gens
    }

    fn identity(&self) -> Element {
        Element(vec![0; self.rank])
    }

    fn generator_element(&self, x: Letter) -> Element {
        let mut v = vec![0; self.rank];
        v[x / 2] = if x.is_multiple_of(2) { 1 } else { -1 };
        Element(v)
    }

    fn multiply(&self, g: &Element, h: &Element) -> Element {
        Element(g.0.iter().zip(&h.0).map(|(a, b)| a + b).collect())
    }

    fn inverse(&self, g: &Element) -> Element {
        Element(g.0.iter().map(|a| -a).collect())
    }

    fn act(&self, g: &Element, x: Letter) -> Element {
        let mut v = g.0.clone();
        v[x / 2] += if x.is_multiple_of(2) { 1 } else { -1 };
        Element(v)
    }

    fn act_left(&self, x: Letter, g: &Element) -> Element {
        self.act(g, x)
    }

    fn word_of(&self, g: &Element) -> Option<Word> {
        Some(self.power_word(g))
    }
}
