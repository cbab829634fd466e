//! Combings built from other combings: bijectivization, finite variations,
//! products and extensions.
//!
//! Operations that change the group return the new model alongside the
//! language, with the language's alphabet equal to the model's generators.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::sync::Arc;

use crate::combing::{
    classify_flags, Concat, Excluding, FreeProductLanguage, Lang, Language, Mapped, RegularLanguage, Relabeled,
};
use crate::error::{Error, Result};
use crate::group::{
    ball, evaluate, fold_letters, Element, Generator, GeneratorSet, GroupModel, Letter, Model, Word,
};
use crate::machines::pairs::{lift, project, shortlex_less};
use crate::machines::{DifferenceMachine, Fsa, Gsm, GsmEdge, HomMode, PairAlphabet};
use crate::models::{
    ActionData, Cocycle, CentralExtension, DirectProduct, FreeProduct, NamedElement, Quotient, Regenerated, Semidirect,
};
use crate::travel::{async_kmin_prefixes, Search};

/// Letters used only by name inside a component language.
fn token_set(names: &[String]) -> Result<GeneratorSet> {
    let gens = names.iter().map(|n| Generator { name: n.clone(), is_identity: false }).collect();
    GeneratorSet::new(gens, (0..names.len()).collect())
}

fn forward_lookup(source: &Lang, map: impl Fn(&Word) -> Option<Word> + Send + Sync + 'static) -> crate::combing::Lookup {
    let s = source.clone();
    Arc::new(move |g| s.lookup(g).and_then(|w| map(&w)))
}

/// Keeps the shortlex-least word of each element among those equal within
/// the `K`-difference machine: `L` minus the second projection of
/// `{(w, v) : w, v ∈ L, w ≺ v, w =_G v}` read through `D_K`.
pub fn bijectivize_shortlex(l: &Lang, model: Model, k: usize) -> Result<RegularLanguage> {
    let carrier = l.carrier().ok_or(Error::NotRegular)?;
    let gens = model.generators().clone();
    if l.alphabet().names() != gens.names() {
        return Err(Error::AlphabetMismatch("language and model generators differ".into()));
    }
    let names = gens.names();
    let pa = PairAlphabet::new(names.len());
    let d = DifferenceMachine::new(model.clone(), k)?;
    let pairs = lift(carrier, pa, &names, false)
        .intersect(&lift(carrier, pa, &names, true))?
        .intersect(&shortlex_less(pa, &names))?
        .intersect(&d.pair_fsa(&[model.identity()]))?;
    let beaten = project(&pairs, pa, &names, true)?;
    let fsa = carrier.difference(&beaten)?;
    let src = l.clone();
    Ok(RegularLanguage::new(gens, fsa)?
        .named("shortlex bijectivization")
        .with_lookup(Arc::new(move |g| src.lookup(g))))
}

/// `N` must be a finite normal subgroup of `G`; the language is read over
/// the primed generators of `G/N`.
pub fn quotient_by_finite_normal(l: &Lang, model: Model, normal: &[Element]) -> Result<(Lang, Model)> {
    let mut set: BTreeSet<Element> = normal.iter().cloned().collect();
    set.insert(model.identity());
    for a in &set {
        if !set.contains(&model.inverse(a)) {
            return Err(Error::NotNormal(format!("{a} has no inverse in N")));
        }
        for b in &set {
            if !set.contains(&model.multiply(a, b)) {
                return Err(Error::NotNormal(format!("N is not closed: {a} · {b}")));
            }
        }
        for x in 0..model.generators().len() {
            let g = model.generator_element(x);
            let conj = model.multiply(&model.multiply(&model.inverse(&g), a), &g);
            if !set.contains(&conj) {
                return Err(Error::NotNormal(format!(
                    "conjugate of {a} by {} leaves N",
                    model.generators().name(x)
                )));
            }
        }
    }
    let elems: Vec<Element> = set.into_iter().collect();
    let q: Model = Arc::new(Quotient::new(model, &elems)?);
    let lang = Relabeled::identity(l.clone(), q.generators().clone())?;
    Ok((Arc::new(lang), q))
}

/// `L'' · N` where `L''` is `lq` with letter `i` renamed to `lift[i]`, and
/// `N` is written with one letter per non-trivial element.
pub fn lift_from_quotient(
    lq: &Lang,
    g: Model,
    lift: &[NamedElement],
    normal: &[NamedElement],
) -> Result<(Lang, Model)> {
    if lift.len() != lq.alphabet().len() {
        return Err(Error::AlphabetMismatch("one lift per quotient letter".into()));
    }
    let e = g.identity();
    let normal: Vec<NamedElement> = normal.iter().filter(|n| n.element != e).cloned().collect();
    let mut letters: Vec<NamedElement> = lift.to_vec();
    letters.extend(normal.iter().cloned());
    let model = Regenerated::new(g, letters)?;
    let gens = model.generators().clone();
    let nz = lift.len();
    let n_names: Vec<String> = normal.iter().map(|n| n.name.clone()).collect();
    let n_gens = token_set(&n_names)?;
    let mut n_words = vec![Word::empty()];
    n_words.extend((0..normal.len()).map(|i| Word(vec![i])));
    let n_lang: Lang = Arc::new(RegularLanguage::from_words(n_gens, &n_words)?);
    let lang = Concat::new(lq.clone(), n_lang, gens, (0..nz).collect(), (nz..nz + normal.len()).collect())?;
    Ok((Arc::new(lang), Arc::new(model)))
}

/// Right coset representatives `t_0 = e, t_1, …` of a subgroup `H` inside
/// an ambient model. `coset(g) = i` iff `g t_i⁻¹ ∈ H`.
#[derive(Clone)]
pub struct Transversal {
    pub reps: Vec<Element>,
    pub names: Vec<String>,
    pub coset: Arc<dyn Fn(&Element) -> Option<usize> + Send + Sync>,
}

impl Transversal {
    pub fn new(
        reps: Vec<Element>,
        names: Vec<String>,
        coset: Arc<dyn Fn(&Element) -> Option<usize> + Send + Sync>,
    ) -> Result<Self> {
        if reps.is_empty() || names.len() != reps.len() {
            return Err(Error::InvalidParams("one name per representative, e first".into()));
        }
        Ok(Transversal { reps, names, coset })
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    /// Representatives lie in distinct cosets and every element of the
    /// radius-`r` ball factors as `h t_i`.
    pub fn validate(&self, model: &dyn GroupModel, radius: usize) -> Result<()> {
        if self.reps[0] != model.identity() {
            return Err(Error::InvalidParams("first representative must be e".into()));
        }
        for (i, t) in self.reps.iter().enumerate() {
            if (self.coset)(t) != Some(i) {
                return Err(Error::InvalidParams(format!("representative {} is misfiled", self.names[i])));
            }
        }
        for g in ball(model, radius)?.elements() {
            let i = (self.coset)(g).ok_or_else(|| Error::IndexNotFinite(format!("{g} lies in no listed coset")))?;
            let h = model.multiply(g, &model.inverse(&self.reps[i]));
            if (self.coset)(&h) != Some(0) {
                return Err(Error::IndexNotFinite(format!("{g} · t_{i}⁻¹ is not in the subgroup")));
            }
        }
        Ok(())
    }
}

/// `L · T` for `G ≤ J` of finite index, where `embed[x]` is the element of
/// `J` named by letter `x` of `L`.
pub fn extend_to_overgroup(
    l: &Lang,
    j: Model,
    embed: &[Element],
    t: &Transversal,
    radius: usize,
) -> Result<(Lang, Model)> {
    if embed.len() != l.alphabet().len() {
        return Err(Error::AlphabetMismatch("one embedded element per letter".into()));
    }
    t.validate(j.as_ref(), radius)?;
    let mut letters: Vec<NamedElement> = l
        .alphabet()
        .names()
        .into_iter()
        .zip(embed)
        .map(|(n, g)| NamedElement::new(n, g.clone()))
        .collect();
    let nx = letters.len();
    letters.extend(t.reps.iter().zip(&t.names).skip(1).map(|(g, n)| NamedElement::new(n.clone(), g.clone())));
    let model = Regenerated::new(j, letters)?;
    let k = t.len() - 1;
    let t_gens = token_set(&t.names[1..])?;
    let mut t_words = vec![Word::empty()];
    t_words.extend((0..k).map(|i| Word(vec![i])));
    let t_lang: Lang = Arc::new(RegularLanguage::from_words(t_gens, &t_words)?);
    let lang = Concat::new(l.clone(), t_lang, model.generators().clone(), (0..nx).collect(), (nx..nx + k).collect())?;
    Ok((Arc::new(lang), Arc::new(model)))
}

/// Generators of `gens` other than the identity letter, in order, and the
/// index map from old letters.
fn strip_identity(gens: &GeneratorSet) -> Result<(GeneratorSet, Vec<Option<Letter>>)> {
    let id = gens.identity_letter().ok_or_else(|| Error::InvalidParams("alphabet has no identity letter".into()))?;
    let map: Vec<Option<Letter>> = (0..gens.len()).map(|x| (x != id).then(|| x - usize::from(x > id))).collect();
    let kept: Vec<Generator> = gens.generators().iter().filter(|g| !g.is_identity).cloned().collect();
    let inverse = (0..gens.len())
        .filter(|&x| x != id)
        .map(|x| map[gens.inverse(x)].expect("identity is self-inverse"))
        .collect();
    Ok((GeneratorSet::new(kept, inverse)?, map))
}

/// Deletes identity letters except every `m`-th, which becomes `w_e`.
///
/// Realised as a mod-`m` counting GSM followed by a homomorphism deleting at
/// most `m - 1` consecutive letters. `w_e` is written over `L`'s alphabet and
/// must have length `m`.
pub fn remove_identity_letters(l: &Lang, m: usize, w_e: &Word) -> Result<Lang> {
    let gens = l.alphabet().clone();
    let id = gens.identity_letter().ok_or_else(|| Error::InvalidParams("alphabet has no identity letter".into()))?;
    if m == 0 || w_e.len() != m || w_e.0.contains(&id) {
        return Err(Error::InvalidParams(format!("w_e must be a length-{m} word avoiding the identity letter")));
    }
    gens.check(w_e)?;
    let (out, map) = strip_identity(&gens)?;
    let w_out: Vec<Letter> = w_e.0.iter().map(|&x| map[x].expect("checked")).collect();

    let apply = {
        let (map, w_out) = (map.clone(), w_out.clone());
        move |w: &Word| -> Option<Word> {
            let mut count = 0;
            let mut v = Vec::with_capacity(w.len());
            for &x in &w.0 {
                match map.get(x)? {
                    Some(y) => v.push(*y),
                    None => {
                        count += 1;
                        if count % m == 0 {
                            v.extend_from_slice(&w_out);
                        }
                    }
                }
            }
            Some(Word(v))
        }
    };
    let apply = Arc::new(apply);
    let mut lang = Mapped::new("identity removal", l.clone(), out.clone(), apply.clone(), Arc::new(move |n| n + m - 1));
    if let Some(c) = l.carrier() {
        // intermediate alphabet: X, a deletion marker, a replacement marker
        let mut mid = out.names();
        let (del, rep) = (mid.len(), mid.len() + 1);
        mid.push("#del".into());
        mid.push("#rep".into());
        let mut edges = Vec::new();
        for s in 0..m {
            for x in 0..gens.len() {
                match map[x] {
                    Some(y) => edges.push(GsmEdge { from: s, input: x, to: s, output: vec![y] }),
                    None => {
                        let t = (s + 1) % m;
                        let mark = if t == 0 { rep } else { del };
                        edges.push(GsmEdge { from: s, input: x, to: t, output: vec![mark] });
                    }
                }
            }
        }
        let gsm = Gsm::new(gens.names(), mid, m, vec![0], (0..m).collect(), edges)?;
        let marked = gsm.image(c)?;
        let mut images: Vec<Vec<usize>> = (0..out.len()).map(|y| vec![y]).collect();
        images.push(Vec::new());
        images.push(w_out);
        let fsa = marked.homomorphism(out.names(), &images, HomMode::LimitedDeletion(m - 1))?;
        lang = lang.with_carrier(fsa)?;
    }
    let f = apply.clone();
    lang = lang.with_lookup(forward_lookup(l, move |w| f(w)));
    Ok(Arc::new(lang))
}

/// Rewrites `L` over new generators: letter `x` becomes `w_x` padded with
/// the target's identity letter to a common length `m`.
///
/// `images[x]` may be `None` when the image of `x⁻¹` is given; it then
/// defaults to the formal inverse of that image. Each `w_x` must evaluate to
/// `x`.
pub fn change_generators(
    l: &Lang,
    source: &dyn GroupModel,
    target: &dyn GroupModel,
    images: &[Option<Word>],
    m: Option<usize>,
) -> Result<Lang> {
    let sg = source.generators();
    let tg = target.generators().clone();
    if images.len() != sg.len() || l.alphabet().names() != sg.names() {
        return Err(Error::AlphabetMismatch("one image per source letter".into()));
    }
    let pad = tg.identity_letter().ok_or_else(|| Error::InvalidParams("target needs an identity letter".into()))?;
    let mut full: Vec<Word> = Vec::with_capacity(images.len());
    for x in 0..sg.len() {
        let w = match (&images[x], &images[sg.inverse(x)]) {
            (Some(w), _) => w.clone(),
            (None, Some(w)) => w.inverse(&tg),
            (None, None) => {
                return Err(Error::InvalidParams(format!("no image for `{}` or its inverse", sg.name(x))));
            }
        };
        tg.check(&w)?;
        if evaluate(target, &w)? != source.generator_element(x) {
            return Err(Error::InvalidParams(format!("image of `{}` evaluates elsewhere", sg.name(x))));
        }
        full.push(w);
    }
    let longest = full.iter().map(Word::len).max().unwrap_or(0).max(1);
    let m = m.unwrap_or(longest);
    for (x, w) in full.iter_mut().enumerate() {
        if w.len() > m {
            return Err(Error::LengthNotEqualizable(sg.name(x).to_string(), m));
        }
        w.0.resize(m, pad);
    }
    let table: Vec<Vec<usize>> = full.iter().map(|w| w.0.clone()).collect();
    let apply = {
        let table = table.clone();
        Arc::new(move |w: &Word| -> Option<Word> {
            let mut v = Vec::with_capacity(w.len() * m);
            for &x in &w.0 {
                v.extend_from_slice(table.get(x)?);
            }
            Some(Word(v))
        })
    };
    let mut lang = Mapped::new("generator change", l.clone(), tg.clone(), apply.clone(), Arc::new(move |n| n / m));
    if let Some(c) = l.carrier() {
        lang = lang.with_carrier(c.homomorphism(tg.names(), &table, HomMode::EpsilonFree)?)?;
    }
    let f = apply.clone();
    lang = lang.with_lookup(forward_lookup(l, move |w| f(w)));
    Ok(Arc::new(lang))
}

/// Schreier generator name for representative index `t` and letter `x`.
fn schreier_name(t: usize, x: &str) -> String {
    format!("y{t}_{}", x.replace("^-1", "~"))
}

/// A combing of `H` from a combing of `G` and a right transversal: the
/// rewriting `t x → y_{tx} t_x` as a GSM accepting when the trailing
/// representative is `e`.
pub fn schreier_subgroup_combing(l: &Lang, g: Model, t: &Transversal) -> Result<(Lang, Model)> {
    let gens = g.generators().clone();
    if l.alphabet().names() != gens.names() {
        return Err(Error::AlphabetMismatch("language and model generators differ".into()));
    }
    let (k, nx) = (t.len(), gens.len());
    let mut next = vec![vec![0usize; nx]; k];
    let mut letters = Vec::with_capacity(k * nx);
    for (i, ti) in t.reps.iter().enumerate() {
        for x in 0..nx {
            let tx = g.act(ti, x);
            let j = (t.coset)(&tx).ok_or_else(|| Error::IndexNotFinite(format!("t_{i} x lies in no coset")))?;
            next[i][x] = j;
            let y = g.multiply(&tx, &g.inverse(&t.reps[j]));
            letters.push(NamedElement::new(schreier_name(i, gens.name(x)), y));
        }
    }
    let id = move |i: usize, x: Letter| i * nx + x;
    let inverse: Vec<Letter> = (0..k)
        .flat_map(|i| (0..nx).map(move |x| (i, x)))
        .map(|(i, x)| id(next[i][x], gens.inverse(x)))
        .collect();
    let h = Regenerated::with_inverses(g.clone(), letters, inverse)?;
    let hg = h.generators().clone();

    let table = Arc::new(next);
    let apply = {
        let table = table.clone();
        Arc::new(move |w: &Word| -> Option<Word> {
            let mut s = 0;
            let mut v = Vec::with_capacity(w.len());
            for &x in &w.0 {
                v.push(id(s, x));
                s = *table.get(s)?.get(x)?;
            }
            (s == 0).then_some(Word(v))
        })
    };
    let mut lang = Mapped::new("Schreier rewriting", l.clone(), hg.clone(), apply.clone(), Arc::new(|n| n));
    if let Some(c) = l.carrier() {
        let edges = (0..k)
            .flat_map(|s| (0..nx).map(move |x| (s, x)))
            .map(|(s, x)| GsmEdge { from: s, input: x, to: table[s][x], output: vec![id(s, x)] })
            .collect();
        let gsm = Gsm::new(gens.names(), hg.names(), k, vec![0], vec![0], edges)?;
        lang = lang.with_carrier(gsm.image(c)?)?;
    }
    let f = apply.clone();
    lang = lang.with_lookup(forward_lookup(l, move |w| f(w)));
    Ok((Arc::new(lang), Arc::new(h)))
}

/// Words of `L` of length at most `bound`, other than ε, that evaluate to `e`.
pub fn identity_representatives(l: &dyn Language, model: &dyn GroupModel, bound: usize) -> Vec<Word> {
    let e = model.identity();
    l.enumerate(bound)
        .into_iter()
        .filter(|w| !w.is_empty() && fold_letters(model, &e, w.letters()) == e)
        .collect()
}

/// Alternating blocks from `L1` and `L2` with non-trivial identity
/// representatives (found up to `identity_bound`) removed. With
/// `synchronous` set both inputs must be bijective on that slice.
pub fn free_product(
    l1: &Lang,
    g1: Model,
    l2: &Lang,
    g2: Model,
    identity_bound: usize,
    synchronous: bool,
) -> Result<(Lang, Model)> {
    if synchronous {
        for (l, g) in [(l1, &g1), (l2, &g2)] {
            if !classify_flags(l.as_ref(), g.as_ref(), identity_bound)?.bijective {
                return Err(Error::SynchronousRequiresBijective);
            }
        }
    }
    let p1: Lang = Arc::new(Excluding::new(l1.clone(), identity_representatives(l1.as_ref(), g1.as_ref(), identity_bound))?);
    let p2: Lang = Arc::new(Excluding::new(l2.clone(), identity_representatives(l2.as_ref(), g2.as_ref(), identity_bound))?);
    let model = FreeProduct::new(g1, g2)?;
    let lang = FreeProductLanguage::new(p1, p2)?.with_blocks(Arc::new(|g| Some(FreeProduct::blocks(g))));
    if lang.alphabet().names() != model.generators().names() {
        return Err(Error::AlphabetMismatch("free product alphabets".into()));
    }
    Ok((Arc::new(lang), Arc::new(model)))
}

pub fn direct_product(l1: &Lang, g1: Model, l2: &Lang, g2: Model) -> Result<(Lang, Model)> {
    let model = Arc::new(DirectProduct::new(g1, g2)?);
    let m = model.clone();
    let lang = Concat::disjoint(l1.clone(), l2.clone())?.with_splitter(Arc::new(move |g| Some(m.split(g))));
    Ok((Arc::new(lang), model))
}

/// Data for a central extension of an abelian group `A` by `H`.
///
/// `values` lists `σ(H, X)`; `witnesses[x][i]` accepts the words `v` with
/// `σ(v, x) = values[i]`, over `H`'s alphabet.
#[derive(Clone)]
pub struct CocycleData {
    pub h: Model,
    pub a: Model,
    pub sigma: Cocycle,
    pub values: Vec<Element>,
    pub witnesses: Vec<Vec<Fsa>>,
}

impl CocycleData {
    /// `σ ≡ e` with universal witnesses.
    pub fn trivial(h: Model, a: Model) -> Self {
        let ea = a.identity();
        let e2 = ea.clone();
        let sigma: Cocycle = Arc::new(move |_, _| e2.clone());
        let names = h.generators().names();
        let witnesses = (0..names.len()).map(|_| vec![Fsa::universal(names.clone())]).collect();
        CocycleData { h, a, sigma, values: vec![ea], witnesses }
    }
}

/// Name of `y_{x,a}` for letter `x` and the `i`-th cocycle value.
fn extension_name(x: &str, i: usize) -> String {
    format!("{x}_{i}")
}

/// `L'' = L' · L_A`, where `L'` rewrites each `x_1 … x_n ∈ L` to
/// `y_{x_1,a_1} … y_{x_n,a_n}` with `a_i = σ(x_1 … x_{i-1}, x_i)` and
/// `y_{x,a} = s(x)a⁻¹`.
pub fn central_extension(l: &Lang, data: &CocycleData, la: &Lang, slice: usize) -> Result<(Lang, Model)> {
    let hg = data.h.generators().clone();
    if l.alphabet().names() != hg.names() || la.alphabet().names() != data.a.generators().names() {
        return Err(Error::AlphabetMismatch("languages must be over H and A".into()));
    }
    let nv = data.values.len();
    if data.witnesses.len() != hg.len() || data.witnesses.iter().any(|r| r.len() != nv) {
        return Err(Error::InvalidParams("one witness per (letter, value)".into()));
    }
    let witnesses: Vec<Vec<Fsa>> = data
        .witnesses
        .iter()
        .map(|row| row.iter().map(|f| f.determinize().complete()).collect())
        .collect();
    let value_of = |prefix: &[Letter], x: Letter| -> Result<usize> {
        let hits: Vec<usize> = (0..nv).filter(|&i| witnesses[x][i].accepts(prefix)).collect();
        match hits.as_slice() {
            [i] => Ok(*i),
            _ => Err(Error::WitnessPartitionViolation(format!(
                "{} witnesses accept `{}` before `{}`",
                hits.len(),
                hg.format_word(&Word(prefix.to_vec())),
                hg.name(x)
            ))),
        }
    };
    let eh = data.h.identity();
    let mut checked = BTreeSet::new();
    for w in l.enumerate(slice) {
        for t in 0..w.len() {
            if !checked.insert((w.prefix(t).to_vec(), w.0[t])) {
                continue;
            }
            let i = value_of(w.prefix(t), w.0[t])?;
            let h = fold_letters(data.h.as_ref(), &eh, w.prefix(t));
            if (data.sigma)(&h, &data.h.generator_element(w.0[t])) != data.values[i] {
                return Err(Error::WitnessPartitionViolation(format!(
                    "witness for `{}` after `{}` disagrees with the cocycle",
                    hg.name(w.0[t]),
                    hg.format_word(&Word(w.prefix(t).to_vec()))
                )));
            }
        }
    }

    let ext = Arc::new(CentralExtension::new(data.h.clone(), data.a.clone(), data.sigma.clone())?);
    let mut letters = Vec::new();
    for x in 0..hg.len() {
        for (i, a) in data.values.iter().enumerate() {
            let y = ext.pair(&data.h.generator_element(x), &data.a.inverse(a));
            letters.push(NamedElement::new(extension_name(hg.name(x), i), y));
        }
    }
    let ny = letters.len();
    let ag = data.a.generators();
    for z in 0..ag.len() {
        let el = ext.pair(&eh, &data.a.generator_element(z));
        letters.push(if ag.is_identity(z) {
            NamedElement::identity(ag.name(z), el)
        } else {
            NamedElement::new(ag.name(z), el)
        });
    }
    let model = Regenerated::new(ext.clone(), letters)?;
    let gens = model.generators().clone();
    let y_names: Vec<String> = gens.names()[..ny].to_vec();
    let y_gens = token_set(&y_names)?;

    let wit = Arc::new(witnesses);
    let apply = {
        let wit = wit.clone();
        Arc::new(move |w: &Word| -> Option<Word> {
            let mut v = Vec::with_capacity(w.len());
            for t in 0..w.len() {
                let x = w.0[t];
                let row = wit.get(x)?;
                let hits: Vec<usize> = (0..nv).filter(|&i| row[i].accepts(w.prefix(t))).collect();
                match hits.as_slice() {
                    [i] => v.push(x * nv + i),
                    _ => return None,
                }
            }
            Some(Word(v))
        })
    };
    let mut lprime = Mapped::new("cocycle rewriting", l.clone(), y_gens, apply, Arc::new(|n| n));
    if let Some(c) = l.carrier() {
        lprime = lprime.with_carrier(cocycle_gsm(&wit, &hg, &y_names, nv)?.image(c)?)?;
    }
    let lprime: Lang = Arc::new(lprime);
    let na = ag.len();
    let lang = Concat::new(lprime, la.clone(), gens, (0..ny).collect(), (ny..ny + na).collect())?;
    Ok((Arc::new(lang), Arc::new(model)))
}

/// Product of the complete witness automata; on `x` the unique accepting
/// witness `W_{x,a}` selects the output `y_{x,a}`.
fn cocycle_gsm(wit: &[Vec<Fsa>], hg: &GeneratorSet, y_names: &[String], nv: usize) -> Result<Gsm> {
    let flat: Vec<&Fsa> = wit.iter().flatten().collect();
    let start: Vec<usize> = flat.iter().map(|f| f.initial()[0]).collect();
    let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(start.clone(), 0)]);
    let mut states = vec![start];
    let mut queue = VecDeque::from([0usize]);
    let mut edges = Vec::new();
    let step = |f: &Fsa, s: usize, x: usize| f.step(&[s], x)[0];
    while let Some(i) = queue.pop_front() {
        let cur = states[i].clone();
        for x in 0..hg.len() {
            let hits: Vec<usize> = (0..nv).filter(|&a| flat[x * nv + a].is_accepting(cur[x * nv + a])).collect();
            let [a] = hits.as_slice() else { continue };
            let nxt: Vec<usize> = flat.iter().zip(&cur).map(|(f, &s)| step(f, s, x)).collect();
            let j = *index.entry(nxt.clone()).or_insert_with(|| {
                states.push(nxt);
                queue.push_back(states.len() - 1);
                states.len() - 1
            });
            edges.push(GsmEdge { from: i, input: x, to: j, output: vec![x * nv + a] });
        }
    }
    let n = states.len();
    Gsm::new(hg.names(), y_names.to_vec(), n, vec![0], (0..n).collect(), edges)
}

/// `L_H · L_N` for `H ⋉ N`.
pub fn split_extension(lh: &Lang, ln: &Lang, action: Arc<ActionData>) -> Result<(Lang, Model)> {
    if !ln.has_lookup() {
        return Err(Error::MissingLookup);
    }
    let model = Arc::new(Semidirect::new(action)?);
    let m = model.clone();
    let lang = Concat::disjoint(lh.clone(), ln.clone())?.with_splitter(Arc::new(move |g| Some(m.split(g))));
    if lang.alphabet().names() != model.generators().names() {
        return Err(Error::AlphabetMismatch("factor languages must be over H and N".into()));
    }
    Ok((Arc::new(lang), model))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarReport {
    pub radius: usize,
    pub checks: usize,
    pub max_k: usize,
    /// `(n, y, K)` attaining the maximum.
    pub worst: Option<(Element, Letter, usize)>,
}

/// Measures how far `v_{n^y}` travels from the letterwise image of `v_n`:
/// each letter `x` of `v_n` is replaced by `v_{x^y}`. Identical words count
/// as constant 0.
pub fn check_condition_star(ln: &Lang, action: &ActionData, radius: usize, cutoff: usize) -> Result<StarReport> {
    if !ln.has_lookup() {
        return Err(Error::MissingLookup);
    }
    let n = action.n_model();
    let ng = n.generators();
    let hg = action.h_model().generators();
    let look = |g: &Element| ln.lookup(g).ok_or(Error::MissingLookup);
    let search = Search { model: n.as_ref(), cutoff };
    let mut report = StarReport { radius, checks: 0, max_k: 0, worst: None };
    for y in 0..hg.len() {
        let letter_images: Vec<Word> = (0..ng.len())
            .map(|x| look(&action.act_generator(&n.generator_element(x), y)))
            .collect::<Result<_>>()?;
        for g in ball(n.as_ref(), radius)?.elements() {
            let vn = look(g)?;
            let image = Word(vn.0.iter().flat_map(|&x| letter_images[x].0.iter().copied()).collect());
            let target = look(&action.act_generator(g, y))?;
            let k = if image == target {
                0
            } else {
                let pi = crate::group::prefix_elements(n.as_ref(), &image);
                let pt = crate::group::prefix_elements(n.as_ref(), &target);
                async_kmin_prefixes(&search, &pi, &pt).ok_or(Error::DistanceCutoffExceeded(cutoff))?.0
            };
            report.checks += 1;
            if report.worst.is_none() || k > report.max_k {
                report.max_k = k;
                report.worst = Some((g.clone(), y, k));
            }
        }
    }
    Ok(report)
}
