//! Solving the word problem with a combing: represent `e` by peeling a seed
//! word, push the letters of `v` one at a time, then compare with `e`'s
//! representative.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::combing::CombingSpec;
use crate::error::{Error, Result};
use crate::group::{evaluate, Element, Letter, Word};
use crate::machines::{DifferenceMachine, Fsa};

pub struct WpContext {
    spec: CombingSpec,
    d: DifferenceMachine,
    seed: Word,
    bound: usize,
    identity_rep: Word,
    slice: OnceLock<HashMap<Element, Word>>,
    steps: Mutex<HashMap<(Word, Option<Letter>), Word>>,
    identity_companions: OnceLock<Fsa>,
}

impl WpContext {
    /// Uses the shortest word of the language (up to `bound`) as seed.
    pub fn new(spec: CombingSpec, k: usize, bound: usize) -> Result<Self> {
        let seed = (0..=bound)
            .find_map(|n| spec.language.enumerate(n).into_iter().next())
            .ok_or(Error::NotFoundWithinBound(bound))?;
        Self::with_seed(spec, k, bound, seed)
    }

    /// `bound` limits the enumeration used when the language has neither a
    /// carrier nor a lookup.
    pub fn with_seed(spec: CombingSpec, k: usize, bound: usize, seed: Word) -> Result<Self> {
        spec.model.generators().check(&seed)?;
        if !spec.language.contains(&seed) {
            return Err(Error::InvalidParams("seed word is not in the language".into()));
        }
        let d = DifferenceMachine::new(spec.model.clone(), k)?;
        let mut ctx = WpContext {
            spec,
            d,
            seed,
            bound,
            identity_rep: Word::empty(),
            slice: OnceLock::new(),
            steps: Mutex::new(HashMap::new()),
            identity_companions: OnceLock::new(),
        };
        let gens = ctx.spec.model.generators().clone();
        let mut w = ctx.seed.clone();
        for &x in ctx.seed.0.iter().rev() {
            w = ctx.step_multiplier(&w, Some(gens.inverse(x)))?;
        }
        ctx.identity_rep = w;
        Ok(ctx)
    }

    pub fn spec(&self) -> &CombingSpec {
        &self.spec
    }

    pub fn seed(&self) -> &Word {
        &self.seed
    }

    /// The language's representative of the identity.
    pub fn identity_rep(&self) -> &Word {
        &self.identity_rep
    }

    /// Some `u' ∈ L` with `u' = u·x` (`x = None` for the identity).
    ///
    /// With a regular carrier this is the shortest, then shortlex-least,
    /// word of `L` asynchronously `K`-fellow travelling with `u` and ending
    /// at `u·x`. Otherwise the language's lookup supplies `u'`, and failing
    /// that a bounded enumeration.
    pub fn step_multiplier(&self, u: &Word, x: Option<Letter>) -> Result<Word> {
        let key = (u.clone(), x);
        if let Some(w) = self.steps.lock().expect("step cache").get(&key) {
            return Ok(w.clone());
        }
        let w = self.compute_step(u, x)?;
        self.steps.lock().expect("step cache").insert(key, w.clone());
        Ok(w)
    }

    fn compute_step(&self, u: &Word, x: Option<Letter>) -> Result<Word> {
        let model = self.spec.model.as_ref();
        let lang = &self.spec.language;
        let target = x.map_or_else(|| model.identity(), |x| model.generator_element(x));
        if let Some(carrier) = lang.carrier() {
            let found = self
                .d
                .async_companions(u, &target)?
                .intersect(carrier)?
                .shortest_word()
                .ok_or(Error::NotFoundWithinBound(self.d.k()))?;
            return Ok(Word(found));
        }
        let g = model.multiply(&evaluate(model, u)?, &target);
        if lang.has_lookup() {
            return lang.lookup(&g).filter(|w| lang.contains(w)).ok_or(Error::MissingLookup);
        }
        let slice = self.slice.get_or_init(|| {
            let mut map = HashMap::new();
            for w in lang.enumerate(self.bound) {
                if let Ok(h) = evaluate(model, &w) {
                    map.entry(h).or_insert(w);
                }
            }
            map
        });
        slice.get(&g).cloned().ok_or(Error::NotFoundWithinBound(self.bound))
    }

    /// The word `w_v ∈ L` reached from the identity representative by
    /// pushing the letters of `v`.
    pub fn reduce_to_normal(&self, v: &Word) -> Result<Word> {
        self.spec.model.generators().check(v)?;
        let mut w = self.identity_rep.clone();
        for &y in &v.0 {
            w = self.step_multiplier(&w, Some(y))?;
        }
        Ok(w)
    }

    pub fn is_trivial(&self, v: &Word) -> Result<bool> {
        let w = self.reduce_to_normal(v)?;
        if w == self.identity_rep {
            return Ok(true);
        }
        let e = self.spec.model.identity();
        if let Some(diff) = self.d.run(&self.identity_rep, &w) {
            return Ok(diff == e);
        }
        if self.identity_companions.get().is_none() {
            let fsa = self.d.async_companions(&self.identity_rep, &e)?;
            let _ = self.identity_companions.set(fsa);
        }
        Ok(self.identity_companions.get().expect("set above").accepts(&w.0))
    }
}
