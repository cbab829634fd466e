//! Models derived from other models: quotients by finite normal subgroups,
//! changes of generating set and central extensions.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{
    ball, fold_letters, Element, Generator, GeneratorSet, GroupModel, Letter, Model, Word,
};

/// `G/N` for a finite normal subgroup `N`. An element is stored as the least
/// member of its coset `gN`.
#[derive(Clone)]
pub struct Quotient {
    base: Model,
    normal: Vec<Element>,
    gens: GeneratorSet,
}

/// Name of a letter after relabelling with a prime: `a ↦ a'`, `a^-1 ↦ a'^-1`.
pub(crate) fn primed(name: &str) -> String {
    match name.strip_suffix("^-1") {
        Some(b) => format!("{b}'^-1"),
        None => format!("{name}'"),
    }
}

impl Quotient {
    /// `normal` must list every element of `N` (the identity may be omitted).
    pub fn new(base: Model, normal: &[Element]) -> Result<Self> {
        let mut normal: Vec<Element> = normal.to_vec();
        let e = base.identity();
        if !normal.contains(&e) {
            normal.push(e);
        }
        normal.sort();
        normal.dedup();
        let bg = base.generators();
        let gens = GeneratorSet::new(
            bg.generators()
                .iter()
                .map(|g| Generator { name: primed(&g.name), is_identity: g.is_identity })
                .collect(),
            bg.inverse_table().to_vec(),
        )?;
        Ok(Quotient { base, normal, gens })
    }

    pub fn base(&self) -> &Model {
        &self.base
    }

    pub fn normal(&self) -> &[Element] {
        &self.normal
    }

    pub fn canonical(&self, g: &Element) -> Element {
        self.normal
            .iter()
            .map(|n| self.base.multiply(g, n))
            .min()
            .expect("normal subgroup contains the identity")
    }
}

impl GroupModel for Quotient {
    fn name(&self) -> String {
        format!("quotient({})", self.base.name())
    }

    fn generators(&self) -> &GeneratorSet {
        &self.gens
    }

    fn identity(&self) -> Element {
        self.canonical(&self.base.identity())
    }

    fn generator_element(&self, x: Letter) -> Element {
        self.canonical(&self.base.generator_element(x))
    }

    fn multiply(&self, g: &Element, h: &Element) -> Element {
        self.canonical(&self.base.multiply(g, h))
    }

    fn inverse(&self, g: &Element) -> Element {
        self.canonical(&self.base.inverse(g))
    }

    fn act(&self, g: &Element, x: Letter) -> Element {
        self.canonical(&self.base.act(g, x))
    }

    fn word_of(&self, g: &Element) -> Option<Word> {
        self.base.word_of(g)
    }
}

/// A letter of a [`Regenerated`] model.
#[derive(Clone, Debug)]
pub struct NamedElement {
    pub name: String,
    pub element: Element,
    pub is_identity: bool,
}

impl NamedElement {
    pub fn new(name: impl Into<String>, element: Element) -> Self {
        NamedElement { name: name.into(), element, is_identity: false }
    }

    pub fn identity(name: impl Into<String>, element: Element) -> Self {
        NamedElement { name: name.into(), element, is_identity: true }
    }
}

/// The same group as `base` over a different finite generating set.
///
/// Letters are paired with inverses automatically: a later letter whose
/// element is the inverse is used when one exists, an involution or the
/// identity pairs with itself, and otherwise a `name^-1` letter is appended.
#[derive(Clone)]
pub struct Regenerated {
    base: Model,
    elems: Vec<Element>,
    gens: GeneratorSet,
}

impl Regenerated {
    pub fn new(base: Model, letters: Vec<NamedElement>) -> Result<Self> {
        Self::build(base, letters, None)
    }

    /// As [`Regenerated::new`] with an explicit inverse pairing.
    pub fn with_inverses(base: Model, letters: Vec<NamedElement>, inverse: Vec<Letter>) -> Result<Self> {
        Self::build(base, letters, Some(inverse))
    }

    fn build(base: Model, mut letters: Vec<NamedElement>, inverse: Option<Vec<Letter>>) -> Result<Self> {
        let e = base.identity();
        for l in &letters {
            if l.is_identity && l.element != e {
                return Err(Error::InvalidParams(format!(
                    "letter `{}` is flagged as the identity but is not trivial",
                    l.name
                )));
            }
        }
        let inverse = match inverse {
            Some(inv) => {
                for (i, &j) in inv.iter().enumerate() {
                    if j >= letters.len()
                        || base.inverse(&letters[i].element) != letters[j].element
                    {
                        return Err(Error::InvalidParams(format!(
                            "declared inverse of `{}` does not invert it",
                            letters[i].name
                        )));
                    }
                }
                inv
            }
            None => {
                let mut inv: Vec<Option<Letter>> = vec![None; letters.len()];
                let n0 = letters.len();
                for i in 0..n0 {
                    if inv[i].is_some() {
                        continue;
                    }
                    let target = base.inverse(&letters[i].element);
                    let partner = (i + 1..n0)
                        .find(|&j| inv[j].is_none() && letters[j].element == target && !letters[j].is_identity && !letters[i].is_identity);
                    match partner {
                        Some(j) => {
                            inv[i] = Some(j);
                            inv[j] = Some(i);
                        }
                        None if target == letters[i].element => inv[i] = Some(i),
                        None => {
                            let j = letters.len();
                            letters.push(NamedElement::new(
                                format!("{}^-1", letters[i].name),
                                target,
                            ));
                            inv.push(Some(i));
                            inv[i] = Some(j);
                        }
                    }
                }
                inv.into_iter().map(Option::unwrap).collect()
            }
        };
        let gens = GeneratorSet::new(
            letters
                .iter()
                .map(|l| Generator { name: l.name.clone(), is_identity: l.is_identity })
                .collect(),
            inverse,
        )?;
        Ok(Regenerated { base, elems: letters.into_iter().map(|l| l.element).collect(), gens })
    }

    pub fn base(&self) -> &Model {
        &self.base
    }

    pub fn letter_elements(&self) -> &[Element] {
        &self.elems
    }
}

impl GroupModel for Regenerated {
    fn name(&self) -> String {
        format!("{}[{}]", self.base.name(), self.gens.names().join(","))
    }

    fn generators(&self) -> &GeneratorSet {
        &self.gens
    }

    fn identity(&self) -> Element {
        self.base.identity()
    }

    fn generator_element(&self, x: Letter) -> Element {
        self.elems[x].clone()
    }

    fn multiply(&self, g: &Element, h: &Element) -> Element {
        self.base.multiply(g, h)
    }

    fn inverse(&self, g: &Element) -> Element {
        self.base.inverse(g)
    }
}

pub type Cocycle = Arc<dyn Fn(&Element, &Element) -> Element + Send + Sync>;

/// Central extension of an abelian group `A` by `H`: elements `s(h)a` with
/// `s(h)s(h') = s(hh')σ(h, h')`. Letters are `H`'s (as `s(x)`) then `A`'s.
/// Elements are stored as `[l(h), h…, a…]`.
#[derive(Clone)]
pub struct CentralExtension {
    h: Model,
    a: Model,
    sigma: Cocycle,
    gens: GeneratorSet,
}

impl CentralExtension {
    pub fn new(h: Model, a: Model, sigma: Cocycle) -> Result<Self> {
        let gens = h.generators().disjoint_union(a.generators())?;
        Ok(CentralExtension { h, a, sigma, gens })
    }

    pub fn pair(&self, h: &Element, a: &Element) -> Element {
        let mut v = vec![h.0.len() as i64];
        v.extend_from_slice(&h.0);
        v.extend_from_slice(&a.0);
        Element(v)
    }

    pub fn split(&self, g: &Element) -> (Element, Element) {
        let lh = g.0[0] as usize;
        (Element(g.0[1..1 + lh].to_vec()), Element(g.0[1 + lh..].to_vec()))
    }

    pub fn sigma(&self, g: &Element, h: &Element) -> Element {
        (self.sigma)(g, h)
    }

    pub fn h_model(&self) -> &Model {
        &self.h
    }

    pub fn a_model(&self) -> &Model {
        &self.a
    }

    /// Normalisation `σ(e, h) = σ(h, e) = e` and the cocycle identity
    /// `σ(g, h)σ(gh, k) = σ(h, k)σ(g, hk)` on the radius-`r` ball of `H`.
    pub fn validate(&self, radius: usize) -> Result<()> {
        let hb = ball(self.h.as_ref(), radius)?;
        let (eh, ea) = (self.h.identity(), self.a.identity());
        for g in hb.elements() {
            if self.sigma(&eh, g) != ea || self.sigma(g, &eh) != ea {
                return Err(Error::InvalidParams(format!("cocycle not normalised at {g}")));
            }
        }
        for g in hb.elements() {
            for h in hb.elements() {
                for k in hb.elements() {
                    let lhs = self.a.multiply(&self.sigma(g, h), &self.sigma(&self.h.multiply(g, h), k));
                    let rhs = self.a.multiply(&self.sigma(h, k), &self.sigma(g, &self.h.multiply(h, k)));
                    if lhs != rhs {
                        return Err(Error::InvalidParams(format!(
                            "cocycle identity fails at ({g}, {h}, {k})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

impl GroupModel for CentralExtension {
    fn name(&self) -> String {
        format!("central_extension({}, {})", self.h.name(), self.a.name())
    }

    fn generators(&self) -> &GeneratorSet {
        &self.gens
    }

    fn identity(&self) -> Element {
        self.pair(&self.h.identity(), &self.a.identity())
    }

    fn generator_element(&self, x: Letter) -> Element {
        let nh = self.h.generators().len();
        if x < nh {
            self.pair(&self.h.generator_element(x), &self.a.identity())
        } else {
            self.pair(&self.h.identity(), &self.a.generator_element(x - nh))
        }
    }

    fn multiply(&self, g: &Element, k: &Element) -> Element {
        let (h1, a1) = self.split(g);
        let (h2, a2) = self.split(k);
        let a = self.a.multiply(&self.a.multiply(&a1, &a2), &self.sigma(&h1, &h2));
        self.pair(&self.h.multiply(&h1, &h2), &a)
    }

    fn inverse(&self, g: &Element) -> Element {
        let (h, a) = self.split(g);
        let hi = self.h.inverse(&h);
        let s = self.sigma(&h, &hi);
        let b = self.a.inverse(&self.a.multiply(&a, &s));
        self.pair(&hi, &b)
    }

    fn word_of(&self, g: &Element) -> Option<Word> {
        let (h, a) = self.split(g);
        let wh = self.h.word_of(&h)?;
        let reached = fold_letters(self, &self.identity(), wh.letters());
        let (_, a0) = self.split(&reached);
        let rest = self.a.multiply(&self.a.inverse(&a0), &a);
        let wa = self.a.word_of(&rest)?;
        let nh = self.h.generators().len();
        Some(wh.concat(&Word(wa.0.iter().map(|x| x + nh).collect())))
    }
}
