//! Acceptance suite: one line per criterion, nonzero exit on any failure.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use combing::atlas::{
    builtin_combing, builtin_group, shortlex_language, straightline_deviation, zn_straightline_language,
    zn_straightline_word, BuiltinGroupId, CombingId, FIBONACCI,
};
use combing::combing::{
    verify, CombingSpec, CombingType, Lang, RegularLanguage, Relabeled, Synchronicity,
    VerificationReport, VerifyOptions,
};
use combing::constructions::{
    bijectivize_shortlex, central_extension, change_generators, check_condition_star, direct_product,
    extend_to_overgroup, free_product, lift_from_quotient, quotient_by_finite_normal, remove_identity_letters,
    schreier_subgroup_combing, CocycleData, Transversal,
};
use combing::group::{ball, evaluate, Metric};
use combing::machines::{regular_combine, CombineOp, DifferenceMachine, Fsa, Gsm, GsmEdge, HomMode, Sym};
use combing::models::{
    ActionData, Cocycle, DirectProduct, FiniteGroup, FreeAbelian, FreeGroup, Heisenberg, NamedElement, Regenerated,
};
use combing::travel::async_kmin_prefixes;
use combing::wordproblem::WpContext;
use combing::{Element, GroupModel, Model, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Frozen after the first run: maximum condition-(*) constant for the
/// Fibonacci action on the straight-line Z² combing at radius 4.
const CONDITION_STAR_K: usize = 2;
/// Frozen after the first run: shortlex Z² synchronous constant.
const SHORTLEX_Z2_K: usize = 2;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: combing::Error) -> String {
    e.to_string()
}

/// Every word over `k` letters of length at most `n`, shortest first.
fn all_words(k: usize, n: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    let mut layer = vec![Word::empty()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(layer.len() * k);
        for w in &layer {
            for x in 0..k {
                let mut v = w.clone();
                v.push(x);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

fn z2() -> Model {
    Arc::new(FreeAbelian::new(2))
}

fn f2() -> Model {
    Arc::new(FreeGroup::new(2))
}

// ---------------------------------------------------------------- 1

fn criterion_1() -> Outcome {
    let mut mismatches = 0usize;
    let mut checked = 0usize;
    for model in [z2(), f2()] {
        let words = all_words(model.generators().len(), 6);
        // prefix elements indexed through a shared table
        let mut index: HashMap<Element, usize> = HashMap::new();
        let mut elems: Vec<Element> = Vec::new();
        let prefixes: Vec<Vec<usize>> = words
            .iter()
            .map(|w| {
                combing::group::prefix_elements(model.as_ref(), w)
                    .into_iter()
                    .map(|g| {
                        *index.entry(g.clone()).or_insert_with(|| {
                            elems.push(g);
                            elems.len() - 1
                        })
                    })
                    .collect()
            })
            .collect();
        let inverses: Vec<Element> = elems.iter().map(|g| model.inverse(g)).collect();
        for k in 1..=2 {
            let d = DifferenceMachine::new(model.clone(), k).map_err(err)?;
            let oracle_ball = ball(model.as_ref(), k).map_err(err)?;
            // 0 unknown, 1 within K, 2 beyond
            let mut near = vec![0u8; elems.len() * elems.len()];
            let mut within = |i: usize, j: usize| -> bool {
                let c = &mut near[i * elems.len() + j];
                if *c == 0 {
                    let diff = model.multiply(&inverses[i], &elems[j]);
                    *c = if oracle_ball.contains(&diff) { 1 } else { 2 };
                }
                *c == 1
            };
            for (a, v) in words.iter().enumerate() {
                let pv = &prefixes[a];
                for (b, w) in words.iter().enumerate() {
                    let pw = &prefixes[b];
                    let t_max = v.len().max(w.len());
                    let direct =
                        (0..=t_max).all(|t| within(pv[t.min(v.len())], pw[t.min(w.len())]));
                    let machine = d.run(v, w);
                    let agree = match &machine {
                        None => !direct,
                        Some(g) => direct && *g == model.multiply(&inverses[pv[v.len()]], &elems[pw[w.len()]]),
                    };
                    checked += 1;
                    if !agree {
                        mismatches += 1;
                    }
                }
            }
        }
    }
    ensure(mismatches == 0, || format!("{mismatches} mismatches"))?;
    Ok(format!("{checked} pairs, 0 mismatches"))
}

// ---------------------------------------------------------------- 2

/// Free reduction of a word over letters laid out as `x, x^-1` pairs.
fn free_reduce(w: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::new();
    for &x in w {
        if out.last() == Some(&(x ^ 1)) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

fn brute_minimax(c: &[Vec<usize>]) -> usize {
    fn rec(c: &[Vec<usize>], i: usize, j: usize, acc: usize, best: &mut usize) {
        let acc = acc.max(c[i][j]);
        let (n, m) = (c.len() - 1, c[0].len() - 1);
        if i == n && j == m {
            *best = (*best).min(acc);
            return;
        }
        if i < n {
            rec(c, i + 1, j, acc, best);
        }
        if j < m {
            rec(c, i, j + 1, acc, best);
        }
    }
    let mut best = usize::MAX;
    rec(c, 0, 0, 0, &mut best);
    best
}

fn criterion_2() -> Outcome {
    let mut mismatches = 0usize;
    let mut checked = 0usize;
    for (is_free, model) in [(false, z2()), (true, f2())] {
        let words = all_words(4, 5);
        let metric = Metric::new(model.clone(), 10).map_err(err)?;
        let prefixes: Vec<Vec<Element>> =
            words.iter().map(|w| combing::group::prefix_elements(model.as_ref(), w)).collect();
        // independent distances: L1 in Z², reduced length in F₂
        let coords: Vec<Vec<[i64; 2]>> = words
            .iter()
            .map(|w| {
                let mut p = [0i64; 2];
                let mut out = vec![p];
                for &x in &w.0 {
                    p[x / 2] += if x % 2 == 0 { 1 } else { -1 };
                    out.push(p);
                }
                out
            })
            .collect();
        let reduced: Vec<Vec<Vec<usize>>> =
            words.iter().map(|w| (0..=w.len()).map(|t| free_reduce(&w.0[..t])).collect()).collect();
        let dist = |a: usize, s: usize, b: usize, t: usize| -> usize {
            if is_free {
                let (u, v) = (&reduced[a][s], &reduced[b][t]);
                let common = u.iter().zip(v).take_while(|(p, q)| p == q).count();
                u.len() + v.len() - 2 * common
            } else {
                let (p, q) = (coords[a][s], coords[b][t]);
                ((p[0] - q[0]).abs() + (p[1] - q[1]).abs()) as usize
            }
        };
        let mut cache: HashMap<Vec<Vec<usize>>, usize> = HashMap::new();
        for a in 0..words.len() {
            for b in 0..words.len() {
                let grid: Vec<Vec<usize>> = (0..=words[a].len())
                    .map(|s| (0..=words[b].len()).map(|t| dist(a, s, b, t)).collect())
                    .collect();
                let oracle = *cache.entry(grid.clone()).or_insert_with(|| brute_minimax(&grid));
                let ours = async_kmin_prefixes(&metric, &prefixes[a], &prefixes[b]);
                checked += 1;
                let ok = match ours {
                    Some((k, path)) => {
                        k == oracle
                            && path.first() == Some(&(0, 0))
                            && path.last() == Some(&(words[a].len(), words[b].len()))
                            && path.windows(2).all(|p| {
                                (p[1].0 == p[0].0 + 1 && p[1].1 == p[0].1) || (p[1].0 == p[0].0 && p[1].1 == p[0].1 + 1)
                            })
                            && path.iter().map(|&(i, j)| grid[i][j]).max() == Some(k)
                    }
                    None => false,
                };
                if !ok {
                    mismatches += 1;
                }
            }
        }
    }
    ensure(mismatches == 0, || format!("{mismatches} mismatches"))?;
    Ok(format!("{checked} pairs, 0 mismatches"))
}

// ---------------------------------------------------------------- 3

const LEN: usize = 8;

/// Subset simulation written against the raw transition list.
fn simulate(f: &Fsa, w: &[Sym]) -> bool {
    let close = |set: BTreeSet<usize>| {
        let mut set = set;
        let mut stack: Vec<usize> = set.iter().copied().collect();
        while let Some(s) = stack.pop() {
            for (p, a, q) in f.transitions() {
                if p == s && a.is_none() && set.insert(q) {
                    stack.push(q);
                }
            }
        }
        set
    };
    let mut cur = close(f.initial().iter().copied().collect());
    for &x in w {
        let next = f.transitions().filter(|&(p, a, _)| cur.contains(&p) && a == Some(x)).map(|(_, _, q)| q).collect();
        cur = close(next);
    }
    cur.iter().any(|&s| f.is_accepting(s))
}

fn set_of(f: &Fsa, universe: &[Vec<Sym>]) -> BTreeSet<Vec<Sym>> {
    universe.iter().filter(|w| simulate(f, w)).cloned().collect()
}

fn random_fsa(rng: &mut ChaCha8Rng, alphabet: &[String]) -> Fsa {
    let n = rng.gen_range(1..=6);
    let mut edges = Vec::new();
    for p in 0..n {
        for a in 0..alphabet.len() {
            for q in 0..n {
                if rng.gen_bool(0.3) {
                    edges.push((p, Some(a), q));
                }
            }
        }
        if rng.gen_bool(0.15) {
            edges.push((p, None, rng.gen_range(0..n)));
        }
    }
    let accepting: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.4)).collect();
    Fsa::new(alphabet.to_vec(), n, vec![0], accepting, edges).expect("random acceptor")
}

/// `h(L) ∩ Σ^{≤LEN}` by a worklist over output words, tracking the states
/// reachable by source words with that image.
fn hom_oracle(f: &Fsa, images: &[Vec<Sym>]) -> BTreeSet<Vec<Sym>> {
    let closure = |set: &BTreeSet<usize>| {
        let mut set = set.clone();
        let mut stack: Vec<usize> = set.iter().copied().collect();
        while let Some(s) = stack.pop() {
            for (p, a, q) in f.transitions() {
                let silent = match a {
                    None => true,
                    Some(a) => images[a].is_empty(),
                };
                if p == s && silent && set.insert(q) {
                    stack.push(q);
                }
            }
        }
        set
    };
    let mut out = BTreeSet::new();
    let mut reach: HashMap<Vec<Sym>, BTreeSet<usize>> = HashMap::new();
    let start = closure(&f.initial().iter().copied().collect());
    reach.insert(Vec::new(), start);
    let mut queue = VecDeque::from([Vec::<Sym>::new()]);
    while let Some(u) = queue.pop_front() {
        let states = reach[&u].clone();
        if states.iter().any(|&s| f.is_accepting(s)) {
            out.insert(u.clone());
        }
        for (p, a, q) in f.transitions() {
            let Some(a) = a else { continue };
            if images[a].is_empty() || !states.contains(&p) {
                continue;
            }
            let mut v = u.clone();
            v.extend_from_slice(&images[a]);
            if v.len() > LEN {
                continue;
            }
            let add = closure(&BTreeSet::from([q]));
            let entry = reach.entry(v.clone()).or_default();
            let before = entry.len();
            entry.extend(add);
            if entry.len() > before {
                queue.push_back(v);
            }
        }
    }
    out
}

/// Whether some accepted word contains `k + 1` consecutive erased letters.
fn has_long_deletion(f: &Fsa, erased: &HashSet<Sym>, k: usize) -> bool {
    // product with a run counter; reach and co-reach over the raw graph
    let n = f.num_states();
    let id = |s: usize, c: usize| s * (k + 2) + c;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for (p, a, q) in f.transitions() {
        for c in 0..=k + 1 {
            let to = match a {
                None => c,
                Some(a) if erased.contains(&a) => (c + 1).min(k + 1),
                Some(_) if c == k + 1 => k + 1,
                Some(_) => 0,
            };
            edges.push((id(p, c), id(q, to)));
        }
    }
    let total = n * (k + 2);
    let mut seen = vec![false; total];
    let mut stack: Vec<usize> = f.initial().iter().map(|&s| id(s, 0)).collect();
    for &s in &stack {
        seen[s] = true;
    }
    while let Some(s) = stack.pop() {
        for &(p, q) in &edges {
            if p == s && !seen[q] {
                seen[q] = true;
                stack.push(q);
            }
        }
    }
    (0..n).any(|s| f.is_accepting(s) && seen[id(s, k + 1)])
}

fn criterion_3() -> Outcome {
    let sigma: Vec<String> = vec!["x".into(), "y".into()];
    let universe: Vec<Vec<Sym>> = all_words(2, LEN).into_iter().map(|w| w.0).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let corpus: Vec<Fsa> = (0..24).map(|_| random_fsa(&mut rng, &sigma)).collect();
    let mut mismatches: Vec<String> = Vec::new();
    let mut checks = 0usize;
    macro_rules! check {
        ($name:expr, $i:expr, $got:expr, $want:expr) => {{
            checks += 1;
            if $got != $want {
                mismatches.push(format!("{} on automaton {}", $name, $i));
            }
        }};
    }
    for (i, a) in corpus.iter().enumerate() {
        let b = &corpus[(i + 1) % corpus.len()];
        let sa = set_of(a, &universe);
        let sb = set_of(b, &universe);
        let concat_set = |p: &BTreeSet<Vec<Sym>>, q: &BTreeSet<Vec<Sym>>| -> BTreeSet<Vec<Sym>> {
            let mut out = BTreeSet::new();
            for u in p {
                for v in q {
                    if u.len() + v.len() <= LEN {
                        out.insert([u.as_slice(), v.as_slice()].concat());
                    }
                }
            }
            out
        };
        let star_set: BTreeSet<Vec<Sym>> = {
            let mut out = BTreeSet::from([Vec::new()]);
            // by length: w ∈ A* iff some non-empty prefix is in A and the rest in A*
            for w in &universe {
                if (1..=w.len()).any(|t| sa.contains(&w[..t]) && out.contains(&w[t..])) {
                    out.insert(w.clone());
                }
            }
            out
        };
        let run = |op: CombineOp, second: Option<&Fsa>| regular_combine(op, a, second).map(|f| set_of(&f, &universe));
        let union: BTreeSet<_> = sa.union(&sb).cloned().collect();
        let inter: BTreeSet<_> = sa.intersection(&sb).cloned().collect();
        let compl: BTreeSet<_> = universe.iter().filter(|w| !sa.contains(*w)).cloned().collect();
        check!("union", i, run(CombineOp::Union, Some(b)).map_err(err)?, union);
        check!("intersection", i, run(CombineOp::Intersection, Some(b)).map_err(err)?, inter);
        check!("concatenation", i, run(CombineOp::Concatenation, Some(b)).map_err(err)?, concat_set(&sa, &sb));
        check!("star", i, run(CombineOp::Star, None).map_err(err)?, star_set.clone());
        check!("plus", i, run(CombineOp::Plus, None).map_err(err)?, concat_set(&sa, &star_set));
        check!("complement", i, run(CombineOp::Complement, None).map_err(err)?, compl);

        let erasing = vec![vec![1, 0], vec![]];
        let nonerasing = vec![vec![1], vec![0, 0]];
        let general = a.homomorphism(sigma.clone(), &erasing, HomMode::General).map_err(err)?;
        check!("homomorphism (general)", i, set_of(&general, &universe), hom_oracle(a, &erasing));
        let free = a.homomorphism(sigma.clone(), &nonerasing, HomMode::EpsilonFree).map_err(err)?;
        check!("homomorphism (ε-free)", i, set_of(&free, &universe), hom_oracle(a, &nonerasing));
        checks += 1;
        if a.homomorphism(sigma.clone(), &erasing, HomMode::EpsilonFree).is_ok() {
            mismatches.push(format!("ε-free mode accepted an erasing image on automaton {i}"));
        }
        let violation = has_long_deletion(a, &HashSet::from([1]), 1);
        match a.homomorphism(sigma.clone(), &erasing, HomMode::LimitedDeletion(1)) {
            Ok(h) => {
                if violation {
                    mismatches.push(format!("limited deletion missed a violation on automaton {i}"));
                }
                check!("homomorphism (limited deletion)", i, set_of(&h, &universe), hom_oracle(a, &erasing));
            }
            Err(combing::Error::ModeViolation(_)) => {
                checks += 1;
                if !violation {
                    mismatches.push(format!("limited deletion rejected automaton {i} without cause"));
                }
            }
            Err(e) => return Err(err(e)),
        }

        let source: Vec<String> = vec!["p".into(), "q".into()];
        let inv_images = vec![vec![0, 1], vec![]];
        let inv = a.inverse_homomorphism(source, &inv_images).map_err(err)?;
        let want: BTreeSet<Vec<Sym>> = universe
            .iter()
            .filter(|w| {
                let img: Vec<Sym> = w.iter().flat_map(|&s| inv_images[s].iter().copied()).collect();
                simulate(a, &img)
            })
            .cloned()
            .collect();
        check!("inverse homomorphism", i, set_of(&inv, &universe), want);

        // random ε-free transducer
        let states = rng.gen_range(1..=3);
        let mut edges = Vec::new();
        for s in 0..states {
            for x in 0..2 {
                for _ in 0..rng.gen_range(1..=2) {
                    let len = rng.gen_range(1..=2);
                    let output = (0..len).map(|_| rng.gen_range(0..2)).collect();
                    edges.push(GsmEdge { from: s, input: x, to: rng.gen_range(0..states), output });
                }
            }
        }
        let accepting: Vec<usize> = (0..states).filter(|&s| s == 0 || rng.gen_bool(0.5)).collect();
        let gsm = Gsm::new(sigma.clone(), sigma.clone(), states, vec![0], accepting.clone(), edges.clone())
            .map_err(err)?;
        let image = gsm.image(a).map_err(err)?;
        let mut want = BTreeSet::new();
        for w in &sa {
            // all runs, by breadth over (state, output)
            let mut runs: Vec<(usize, Vec<Sym>)> = vec![(0, Vec::new())];
            for &x in w {
                let mut next = Vec::new();
                for (s, out) in &runs {
                    for e in edges.iter().filter(|e| e.from == *s && e.input == x) {
                        next.push((e.to, [out.as_slice(), e.output.as_slice()].concat()));
                    }
                }
                runs = next;
            }
            for (s, out) in runs {
                if accepting.contains(&s) && out.len() <= LEN {
                    want.insert(out);
                }
            }
        }
        check!("GSM image", i, set_of(&image, &universe), want);
    }
    ensure(mismatches.is_empty(), || mismatches.join("; "))?;
    Ok(format!("{} automata, {checks} operation checks, 0 mismatches", corpus.len()))
}

// ---------------------------------------------------------------- 4

fn sweep(
    label: &str,
    spec: &CombingSpec,
    radius: usize,
    len_bound: usize,
    reports: &mut Vec<(String, VerificationReport)>,
) -> Result<VerificationReport, String> {
    let r = verify(spec, &VerifyOptions::new(radius, len_bound)).map_err(|e| format!("{label}: {e}"))?;
    reports.push((label.to_string(), r.clone()));
    ensure(r.passed() && r.coverage_ok, || {
        format!("{label}: {}", r.to_text(spec.model.generators()).replace('\n', " | "))
    })?;
    Ok(r)
}

fn criterion_4(reports: &mut Vec<(String, VerificationReport)>) -> Outcome {
    let mut detail = Vec::new();
    for (label, id) in [("shortlex Z²", BuiltinGroupId::FreeAbelian(2)), ("shortlex F₂", BuiltinGroupId::Free(2))] {
        let spec = builtin_combing(&CombingId::Shortlex(id)).map_err(err)?;
        let r = sweep(label, &spec, 3, 6, reports)?;
        let f = r.flags;
        ensure(f.bijective && f.prefix_closed && f.geodesic, || format!("{label}: flags {f:?}"))?;
        if label == "shortlex Z²" {
            ensure(r.empirical_sync_k == Some(SHORTLEX_Z2_K), || {
                format!("shortlex Z² K = {:?}, expected {SHORTLEX_Z2_K}", r.empirical_sync_k)
            })?;
        }
        detail.push(format!("{label} K={}", r.empirical_sync_k.unwrap_or(0)));
    }
    Ok(detail.join(", "))
}

// ---------------------------------------------------------------- 5

fn ty(s: &str) -> CombingType {
    s.parse().expect("combing type")
}

fn relabeled(inner: Lang, model: &Model) -> Lang {
    Arc::new(Relabeled::identity(inner, model.generators().clone()).expect("same shape"))
}

fn power_language(name: &str) -> (Lang, Model) {
    let model: Model = Arc::new(FreeAbelian::with_names(&[name]));
    let lang = relabeled(shortlex_language(&BuiltinGroupId::FreeAbelian(1)).expect("shortlex Z"), &model);
    (lang, model)
}

fn finite_lang(model: &Model, words: &[&str]) -> Lang {
    let g = model.generators();
    let ws: Vec<Word> = words.iter().map(|s| g.parse_word(s).expect("word")).collect();
    Arc::new(RegularLanguage::from_words(g.clone(), &ws).expect("finite language"))
}

fn criterion_5(reports: &mut Vec<(String, VerificationReport)>) -> Outcome {
    let mut done = Vec::new();
    let mut run = |label: &str, spec: CombingSpec, radius: usize, len: usize| -> Result<(), String> {
        let r = sweep(label, &spec, radius, len, reports)?;
        done.push(format!("{label} K={}", r.empirical_k().unwrap_or(0)));
        Ok(())
    };

    // bijectivization of shortlex Z² padded with a redundant b b⁻¹ tail
    {
        let model = z2();
        let shortlex = shortlex_language(&BuiltinGroupId::FreeAbelian(2)).map_err(err)?;
        let carrier = shortlex.carrier().expect("regular").clone();
        let tail = Fsa::from_words(model.generators().names(), &[vec![2, 3]]).map_err(err)?;
        let padded = carrier.union(&carrier.concat(&tail).map_err(err)?).map_err(err)?;
        let l: Lang = Arc::new(RegularLanguage::new(model.generators().clone(), padded).map_err(err)?);
        let b = bijectivize_shortlex(&l, model.clone(), 2).map_err(err)?;
        run("bijectivize_shortlex", CombingSpec::new(Arc::new(b), model, ty("sync")).map_err(err)?, 3, 6)?;
    }

    // Z × Z/2 → Z and back
    {
        let (la, za) = power_language("a");
        let z2c: Model = Arc::new(FiniteGroup::cyclic(2, "s").map_err(err)?);
        let g = Arc::new(DirectProduct::new(za.clone(), z2c.clone()).map_err(err)?);
        let gm: Model = g.clone();
        let (l, _) = direct_product(&la, za.clone(), &finite_lang(&z2c, &["1", "s"]), z2c.clone()).map_err(err)?;
        let s = g.pair(&za.identity(), &z2c.generator_element(0));
        let (lq, q) = quotient_by_finite_normal(&l, gm.clone(), std::slice::from_ref(&s)).map_err(err)?;
        run("quotient_by_finite_normal", CombingSpec::new(lq, q, ty("sync")).map_err(err)?, 3, 6)?;

        let (lx, _) = power_language("x");
        let a = g.pair(&za.generator_element(0), &z2c.identity());
        let lift = [NamedElement::new("a", a.clone()), NamedElement::new("a^-1", gm.inverse(&a))];
        let (ll, lm) = lift_from_quotient(&lx, gm.clone(), &lift, &[NamedElement::new("n", s)]).map_err(err)?;
        run("lift_from_quotient", CombingSpec::new(ll, lm, ty("sync")).map_err(err)?, 3, 6)?;
    }

    // 2Z ≤ Z
    {
        let (la, _) = power_language("a");
        let j: Model = Arc::new(FreeAbelian::with_names(&["g"]));
        let t = Transversal::new(
            vec![j.identity(), j.generator_element(0)],
            vec!["e".into(), "t".into()],
            Arc::new(|g: &Element| Some(g.0[0].rem_euclid(2) as usize)),
        )
        .map_err(err)?;
        let (l, m) = extend_to_overgroup(&la, j, &[Element(vec![2]), Element(vec![-2])], &t, 6).map_err(err)?;
        run("extend_to_overgroup", CombingSpec::new(l, m, ty("sync")).map_err(err)?, 3, 6)?;
    }

    // Z with an identity letter, every second e replaced by a a⁻¹
    {
        let base: Model = Arc::new(FreeAbelian::with_names(&["a"]));
        let m = Regenerated::new(
            base.clone(),
            vec![
                NamedElement::new("a", base.generator_element(0)),
                NamedElement::new("a^-1", base.generator_element(1)),
                NamedElement::identity("e", base.identity()),
            ],
        )
        .map_err(err)?;
        let names = m.generators().names();
        let ae = Fsa::from_words(names.clone(), &[vec![0, 2]]).map_err(err)?.star();
        let be = Fsa::from_words(names, &[vec![1, 2]]).map_err(err)?.star();
        let l: Lang = Arc::new(RegularLanguage::new(m.generators().clone(), ae.union(&be).map_err(err)?).map_err(err)?);
        let w_e = m.generators().parse_word("a a^-1").map_err(err)?;
        let out = remove_identity_letters(&l, 2, &w_e).map_err(err)?;
        run("remove_identity_letters", CombingSpec::new(out, base, ty("sync")).map_err(err)?, 3, 8)?;
    }

    // Z² over {x = a, y = ab, e}
    {
        let model = z2();
        let target = Regenerated::new(
            model.clone(),
            vec![
                NamedElement::new("x", Element(vec![1, 0])),
                NamedElement::new("y", Element(vec![1, 1])),
                NamedElement::identity("e", model.identity()),
            ],
        )
        .map_err(err)?;
        let tg = target.generators().clone();
        let images = vec![
            Some(tg.parse_word("x e").map_err(err)?),
            None,
            Some(tg.parse_word("x^-1 y").map_err(err)?),
            None,
        ];
        let l = shortlex_language(&BuiltinGroupId::FreeAbelian(2)).map_err(err)?;
        let out = change_generators(&l, model.as_ref(), &target, &images, None).map_err(err)?;
        run("change_generators", CombingSpec::new(out, Arc::new(target), ty("sync")).map_err(err)?, 3, 12)?;
    }

    // index-2 subgroup of F₂: even exponent sum in a
    {
        let g = f2();
        let gc = g.clone();
        let t = Transversal::new(
            vec![g.identity(), g.generator_element(0)],
            vec!["e".into(), "a".into()],
            Arc::new(move |h: &Element| {
                let w = gc.word_of(h)?;
                let sum: i64 = w.0.iter().map(|&x| match x {
                    0 => 1,
                    1 => -1,
                    _ => 0,
                }).sum();
                Some(sum.rem_euclid(2) as usize)
            }),
        )
        .map_err(err)?;
        t.validate(g.as_ref(), 4).map_err(err)?;
        let l = shortlex_language(&BuiltinGroupId::Free(2)).map_err(err)?;
        let (lh, h) = schreier_subgroup_combing(&l, g, &t).map_err(err)?;
        run("schreier_subgroup_combing", CombingSpec::new(lh, h, ty("sync")).map_err(err)?, 2, 6)?;
    }

    // Z * Z and Z × Z
    {
        let (la, za) = power_language("a");
        let (lb, zb) = power_language("b");
        let (lf, mf) = free_product(&la, za.clone(), &lb, zb.clone(), 5, true).map_err(err)?;
        run("free_product", CombingSpec::new(lf, mf, ty("sync-bi")).map_err(err)?, 3, 6)?;
        let (ld, md) = direct_product(&la, za, &lb, zb).map_err(err)?;
        run("direct_product", CombingSpec::new(ld, md, ty("async-bi")).map_err(err)?, 3, 6)?;
    }

    // central extensions: trivial cocycle on Z × Z, and Z/4 over Z/2
    {
        let (la, za) = power_language("a");
        let (lb, zb) = power_language("b");
        let (lc, mc) = central_extension(&la, &CocycleData::trivial(za, zb), &lb, 6).map_err(err)?;
        run("central_extension (trivial)", CombingSpec::new(lc, mc, ty("async")).map_err(err)?, 3, 6)?;

        let (lz4, mz4) = z4_extension().map_err(err)?;
        run("central_extension (Z/4)", CombingSpec::new(lz4, mz4, ty("async")).map_err(err)?, 3, 4)?;
    }

    // split extensions
    {
        let sol = builtin_combing(&CombingId::SolExample).map_err(err)?;
        run("split_extension (sol)", sol, 3, 5)?;
        let heis = builtin_combing(&CombingId::Heisenberg(1)).map_err(err)?;
        run("split_extension (Heisenberg 1)", heis, 3, 5)?;
    }
    Ok(done.join(", "))
}

fn z4_extension() -> combing::Result<(Lang, Model)> {
    let h: Model = Arc::new(FiniteGroup::cyclic(2, "x")?);
    let a: Model = Arc::new(FiniteGroup::cyclic(2, "z")?);
    let (x, z, ea) = (h.generator_element(0), a.generator_element(0), a.identity());
    let sigma: Cocycle = {
        let (x, z, ea) = (x.clone(), z.clone(), ea.clone());
        Arc::new(move |g, k| if *g == x && *k == x { z.clone() } else { ea.clone() })
    };
    let names = h.generators().names();
    let data = CocycleData {
        h: h.clone(),
        a: a.clone(),
        sigma,
        values: vec![ea, z],
        witnesses: vec![vec![Fsa::from_words(names.clone(), &[vec![]])?, Fsa::from_words(names, &[vec![0]])?]],
    };
    central_extension(&finite_lang(&h, &["1", "x"]), &data, &finite_lang(&a, &["1", "z"]), 4)
}

// ---------------------------------------------------------------- 6

fn fibonacci_action() -> combing::Result<ActionData> {
    let h: Model = Arc::new(FreeAbelian::with_names(&["x"]));
    let n: Model = Arc::new(FreeAbelian::with_names(&["y", "z"]));
    let ambient = combing::models::MatrixSemidirect::new(FIBONACCI.iter().map(|r| r.to_vec()).collect())?;
    ActionData::derive(&ambient, h, &[0, 1], n, &[2, 3, 4, 5], 3)
}

fn criterion_6() -> Outcome {
    let action = fibonacci_action().map_err(err)?;
    action.validate(3).map_err(err)?;
    let ln = zn_straightline_language(&["y".to_string(), "z".to_string()]);
    let r = check_condition_star(&ln, &action, 4, 16).map_err(err)?;
    ensure(r.max_k == CONDITION_STAR_K, || {
        format!("max K = {} (worst {:?}), frozen value {CONDITION_STAR_K}", r.max_k, r.worst)
    })?;
    Ok(format!("{} checks, max K = {}", r.checks, r.max_k))
}

// ---------------------------------------------------------------- 7

fn criterion_7() -> Outcome {
    fn geodesics(steps: &mut Vec<usize>, g: &[i64], cur: &mut Vec<usize>, out: &mut Vec<Word>) {
        if steps.iter().all(|&c| c == 0) {
            out.push(Word(cur.clone()));
            return;
        }
        for i in 0..steps.len() {
            if steps[i] > 0 {
                steps[i] -= 1;
                cur.push(if g[i] > 0 { 2 * i } else { 2 * i + 1 });
                geodesics(steps, g, cur, out);
                cur.pop();
                steps[i] += 1;
            }
        }
    }
    let (mut points, mut ties, mut mismatches) = (0usize, 0usize, 0usize);
    for n in 1..=3usize {
        let range: Vec<i64> = (-8..=8).collect();
        let mut vectors: Vec<Vec<i64>> = vec![Vec::new()];
        for _ in 0..n {
            vectors = vectors
                .into_iter()
                .flat_map(|v| range.iter().map(move |&c| [v.clone(), vec![c]].concat()))
                .collect();
        }
        for g in vectors.into_iter().filter(|g| g.iter().map(|c| c.abs()).sum::<i64>() <= 8) {
            points += 1;
            let ours = zn_straightline_word(n, &g);
            let mut all = Vec::new();
            geodesics(&mut g.iter().map(|c| c.unsigned_abs() as usize).collect(), &g, &mut Vec::new(), &mut all);
            let best = all.iter().map(|w| straightline_deviation(&g, w)).min().expect("at least one geodesic");
            let optimal: Vec<&Word> = all.iter().filter(|w| straightline_deviation(&g, w) == best).collect();
            if optimal.len() > 1 {
                ties += 1;
            }
            let expected = optimal.iter().min_by(|a, b| a.0.cmp(&b.0)).expect("non-empty");
            let geodesic = ours.len() as i64 == g.iter().map(|c| c.abs()).sum::<i64>();
            let model = FreeAbelian::new(n);
            let lands = evaluate(&model, &ours).map(|e| e.0 == g).unwrap_or(false);
            if !geodesic || !lands || &ours != *expected {
                mismatches += 1;
            }
        }
    }
    ensure(mismatches == 0, || format!("{mismatches} mismatches"))?;
    Ok(format!("{points} vectors, {ties} tie cases, 0 mismatches"))
}

// ---------------------------------------------------------------- 8

fn criterion_8() -> Outcome {
    let mut cases: Vec<(&str, WpContext, Model)> = Vec::new();
    for (label, id) in [("Z²", BuiltinGroupId::FreeAbelian(2)), ("F₂", BuiltinGroupId::Free(2))] {
        let spec = builtin_combing(&CombingId::Shortlex(id.clone())).map_err(err)?;
        cases.push((label, WpContext::new(spec, 2, 4).map_err(err)?, builtin_group(&id).map_err(err)?));
    }
    let z4: Model = Arc::new(FiniteGroup::cyclic(4, "g").map_err(err)?);
    let lz4 = finite_lang(&z4, &["1", "g", "g g", "g^-1"]);
    let spec = CombingSpec::new(lz4, z4.clone(), ty("sync")).map_err(err)?;
    cases.push(("Z/4", WpContext::new(spec, 2, 4).map_err(err)?, z4));
    let heis = builtin_combing(&CombingId::Heisenberg(1)).map_err(err)?;
    cases.push(("Heisenberg 1", WpContext::new(heis, 3, 4).map_err(err)?, Arc::new(Heisenberg::new(1).map_err(err)?)));

    let mut detail = Vec::new();
    for (label, ctx, oracle) in &cases {
        let k = oracle.generators().len();
        let e = oracle.identity();
        let (mut count, mut trivial, mut mismatches) = (0usize, 0usize, 0usize);
        // depth-first over words, carrying the oracle element of each prefix
        let mut stack: Vec<(Word, Element)> = vec![(Word::empty(), e.clone())];
        while let Some((w, g)) = stack.pop() {
            let expect = g == e;
            let got = ctx.is_trivial(&w).map_err(|x| format!("{label}: {x}"))?;
            count += 1;
            trivial += usize::from(expect);
            if got != expect {
                mismatches += 1;
            }
            if w.len() < 8 {
                for x in 0..k {
                    let mut v = w.clone();
                    v.push(x);
                    stack.push((v, oracle.act(&g, x)));
                }
            }
        }
        ensure(mismatches == 0, || format!("{label}: {mismatches} mismatches"))?;
        detail.push(format!("{label} {count} words ({trivial} trivial)"));
    }
    let comm = |ctx: &WpContext, s: &str| -> Result<bool, String> {
        let w = ctx.spec().model.generators().parse_word(s).map_err(err)?;
        ctx.is_trivial(&w).map_err(err)
    };
    ensure(comm(&cases[0].1, "a b a^-1 b^-1")?, || "commutator not trivial in Z²".into())?;
    ensure(!comm(&cases[1].1, "a b a^-1 b^-1")?, || "commutator trivial in F₂".into())?;
    ensure(comm(&cases[3].1, "a^-1 b^-1 a b c^-1")?, || "Heisenberg relator not trivial".into())?;
    Ok(detail.join(", "))
}

// ---------------------------------------------------------------- 9

fn criterion_9() -> Outcome {
    let (la, za) = power_language("a");
    let (lb, zb) = power_language("b");
    let (lc, mc) = central_extension(&la, &CocycleData::trivial(za.clone(), zb.clone()), &lb, 8).map_err(err)?;
    let (ld, md) = direct_product(&la, za, &lb, zb).map_err(err)?;
    let relabel = |w: &Word| mc.generators().format_word(w).replace("_0", "");
    let ext: BTreeSet<String> = lc.enumerate(8).iter().map(relabel).collect();
    let prod: BTreeSet<String> = ld.enumerate(8).iter().map(|w| md.generators().format_word(w)).collect();
    let diff = ext.symmetric_difference(&prod).count();
    ensure(diff == 0, || format!("{diff} words differ"))?;
    Ok(format!("{} words on the length-8 slice, 0 mismatches", ext.len()))
}

// ---------------------------------------------------------------- 10

fn criterion_10(reports: &[(String, VerificationReport)]) -> Outcome {
    let mut sync_passes = 0;
    for (label, r) in reports {
        if let (true, Some(k)) = (r.coverage_ok, r.empirical_sync_k) {
            sync_passes += 1;
            let weaker = CombingType::new(Synchronicity::Asynchronous, r.claimed.two_sided);
            ensure(r.certifies(weaker, k + 1), || format!("{label}: sync K={k} but async {:?}", r.empirical_async_k))?;
            ensure(r.empirical_async_k.is_some_and(|a| a <= k + 1), || format!("{label}: async constant too large"))?;
        }
    }
    ensure(sync_passes > 0, || "no synchronous sweeps recorded".into())?;
    Ok(format!("{} sweeps, {sync_passes} with a synchronous constant", reports.len()))
}

fn main() -> ExitCode {
    let mut reports: Vec<(String, VerificationReport)> = Vec::new();
    let mut failed = 0;
    let mut report = |n: usize, name: &str, started: Instant, outcome: Outcome| {
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {n:>2} PASS  {name}: {detail} [{secs:.1}s]"),
            Err(why) => {
                failed += 1;
                println!("criterion {n:>2} FAIL  {name}: {why} [{secs:.1}s]");
            }
        }
    };
    let t = Instant::now();
    report(1, "difference machine vs prefix distances", t, criterion_1());
    let t = Instant::now();
    report(2, "asynchronous DP vs path enumeration", t, criterion_2());
    let t = Instant::now();
    report(3, "regular operations vs set semantics", t, criterion_3());
    let t = Instant::now();
    let c4 = criterion_4(&mut reports);
    report(4, "shortlex Z² and F₂ synchronous bicombings", t, c4);
    let t = Instant::now();
    let c5 = criterion_5(&mut reports);
    report(5, "construction sweeps", t, c5);
    let t = Instant::now();
    report(6, "condition (*) regression", t, criterion_6());
    let t = Instant::now();
    report(7, "straight-line words", t, criterion_7());
    let t = Instant::now();
    report(8, "word problem soundness", t, criterion_8());
    let t = Instant::now();
    report(9, "trivial cocycle equals direct product", t, criterion_9());
    let t = Instant::now();
    report(10, "type lattice soundness", t, criterion_10(&reports));
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
