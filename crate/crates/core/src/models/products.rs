use crate::error::Result;
use crate::group::{Element, GeneratorSet, GroupModel, Letter, Model, Word};

fn pack(a: &Element, b: &Element) -> Element {
    let mut v = Vec::with_capacity(1 + a.0.len() + b.0.len());
    v.push(a.0.len() as i64);
    v.extend_from_slice(&a.0);
    v.extend_from_slice(&b.0);
    Element(v)
}

fn unpack(g: &Element) -> (Element, Element) {
    let la = g.0[0] as usize;
    (Element(g.0[1..1 + la].to_vec()), Element(g.0[1 + la..].to_vec()))
}

/// `G₁ × G₂` over the disjoint union of the generating sets.
#[derive(Clone)]
pub struct DirectProduct {
    left: Model,
    right: Model,
    gens: GeneratorSet,
}

impl DirectProduct {
    pub fn new(left: Model, right: Model) -> Result<Self> {
        let gens = left.generators().disjoint_union(right.generators())?;
        Ok(DirectProduct { left, right, gens })
    }

    pub fn pair(&self, a: &Element, b: &Element) -> Element {
        pack(a, b)
    }

    pub fn split(&self, g: &Element) -> (Element, Element) {
        unpack(g)
    }

    fn offset(&self) -> usize {
        self.left.generators().len()
    }
}

impl GroupModel for DirectProduct {
    fn name(&self) -> String {
        format!("direct({}, {})", self.left.name(), self.right.name())
    }

    fn generators(&self) -> &GeneratorSet {
        &self.gens
    }

    fn identity(&self) -> Element {
        pack(&self.left.identity(), &self.right.identity())
    }

    fn generator_element(&self, x: Letter) -> Element {
        if x < self.offset() {
            pack(&self.left.generator_element(x), &self.right.identity())
        } else {
            pack(&self.left.identity(), &self.right.generator_element(x - self.offset()))
        }
    }

    fn multiply(&self, g: &Element, h: &Element) -> Element {
        let (g1, g2) = unpack(g);
        let (h1, h2) = unpack(h);
        pack(&self.left.multiply(&g1, &h1), &self.right.multiply(&g2, &h2))
    }

    fn inverse(&self, g: &Element) -> Element {
        let (g1, g2) = unpack(g);
        pack(&self.left.inverse(&g1), &self.right.inverse(&g2))
    }

    fn act(&self, g: &Element, x: Letter) -> Element {
        let (g1, g2) = unpack(g);
        if x < self.offset() {
            pack(&self.left.act(&g1, x), &g2)
        } else {
            pack(&g1, &self.right.act(&g2, x - self.offset()))
        }
    }

    fn word_of(&self, g: &Element) -> Option<Word> {
        let (g1, g2) = unpack(g);
        let w1 = self.left.word_of(&g1)?;
        let w2 = self.right.word_of(&g2)?;
        let off = self.offset();
        Some(w1.concat(&Word(w2.0.iter().map(|x| x + off).collect())))
    }
}

/// `G₁ * G₂`. Elements are alternating sequences of non-trivial factor
/// elements, stored as blocks `[factor, len, coords…]`.
#[derive(Clone)]
pub struct FreeProduct {
    factors: [Model; 2],
    gens: GeneratorSet,
}

impl FreeProduct {
    pub fn new(left: Model, right: Model) -> Result<Self> {
        let gens = left.generators().disjoint_union(right.generators())?;
        Ok(FreeProduct { factors: [left, right], gens })
    }

    /// Alternating factor blocks of an element.
    pub fn blocks(g: &Element) -> Vec<(usize, Element)> {
        let mut out = Vec::new();
        let mut i = 0;
        while i < g.0.len() {
            let f = g.0[i] as usize;
            let l = g.0[i + 1] as usize;
            out.push((f, Element(g.0[i + 2..i + 2 + l].to_vec())));
            i += 2 + l;
        }
        out
    }

    fn encode(blocks: &[(usize, Element)]) -> Element {
        let mut v = Vec::new();
        for (f, e) in blocks {
            v.push(*f as i64);
            v.push(e.0.len() as i64);
            v.extend_from_slice(&e.0);
        }
        Element(v)
    }

    fn push_block(&self, blocks: &mut Vec<(usize, Element)>, f: usize, e: Element) {
        let id = self.factors[f].identity();
        if e == id {
            return;
        }
        match blocks.last_mut() {
            Some((lf, le)) if *lf == f => {
                let prod = self.factors[f].multiply(le, &e);
                if prod == id {
                    blocks.pop();
                } else {
                    *le = prod;
                }
            }
            _ => blocks.push((f, e)),
        }
    }

    fn locate(&self, x: Letter) -> (usize, Letter) {
        let n0 = self.factors[0].generators().len();
        if x < n0 {
            (0, x)
        } else {
            (1, x - n0)
        }
    }
}

impl GroupModel for FreeProduct {
    fn name(&self) -> String {
        format!("free_product({}, {})", self.factors[0].name(), self.factors[1].name())
    }

    fn generators(&self) -> &GeneratorSet {
        &self.gens
    }

    fn identity(&self) -> Element {
        Element(Vec::new())
    }

    fn generator_element(&self, x: Letter) -> Element {
        let (f, y) = self.locate(x);
        let mut blocks = Vec::new();
        self.push_block(&mut blocks, f, self.factors[f].generator_element(y));
        Self::encode(&blocks)
    }

    fn multiply(&self, g: &Element, h: &Element) -> Element {
        let mut blocks = Self::blocks(g);
        for (f, e) in Self::blocks(h) {
            self.push_block(&mut blocks, f, e);
        }
        Self::encode(&blocks)
    }

    fn inverse(&self, g: &Element) -> Element {
        let blocks: Vec<(usize, Element)> = Self::blocks(g)
            .into_iter()
            .rev()
            .map(|(f, e)| (f, self.factors[f].inverse(&e)))
            .collect();
        Self::encode(&blocks)
    }

    fn word_of(&self, g: &Element) -> Option<Word> {
        let n0 = self.factors[0].generators().len();
        let mut out = Vec::new();
        for (f, e) in Self::blocks(g) {
            let w = self.factors[f].word_of(&e)?;
            out.extend(w.0.iter().map(|x| if f == 0 { *x } else { x + n0 }));
        }
        Some(Word(out))
    }
}
