//! Combing types, specifications and bounded-ball verification.

mod language;

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::sync::Arc;

pub use language::{
    model_lookup, BlockSplitter, Concat, ElementMap, Excluding, FreeProductLanguage, Lang, Language, Lookup,
    Mapped, ProceduralLanguage, RegularLanguage, Relabeled, Splitter, WordMap,
};

use crate::error::{Error, Result};
use crate::group::{
    ball_with_limit, distance, Ball, Element, GroupModel, Letter, Metric, Model, Word, DEFAULT_BALL_LIMIT,
};
use crate::par::Parallelism;
use crate::travel::{distance_grid, grid_async, grid_min_bound, grid_sync, Distances, FellowTravelParams, Search};

/// Strongest first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Synchronicity {
    Synchronous,
    BoundedAsynchronous,
    Asynchronous,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CombingType {
    pub sync: Synchronicity,
    pub two_sided: bool,
}

impl CombingType {
    pub const fn new(sync: Synchronicity, two_sided: bool) -> Self {
        CombingType { sync, two_sided }
    }

    /// Every combing of type `self` is also of type `other`.
    pub fn implies(&self, other: &CombingType) -> bool {
        self.sync <= other.sync && (self.two_sided || !other.two_sided)
    }

    pub fn all() -> [CombingType; 6] {
        use Synchronicity::*;
        [Synchronous, BoundedAsynchronous, Asynchronous]
            .into_iter()
            .flat_map(|s| [CombingType::new(s, false), CombingType::new(s, true)])
            .collect::<Vec<_>>()
            .try_into()
            .expect("six types")
    }
}

impl fmt::Display for CombingType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.sync {
            Synchronicity::Synchronous => "synchronous",
            Synchronicity::BoundedAsynchronous => "boundedly asynchronous",
            Synchronicity::Asynchronous => "asynchronous",
        };
        write!(f, "{s} {}", if self.two_sided { "bicombing" } else { "combing" })
    }
}

impl FromStr for CombingType {
    type Err = Error;

    /// `sync`, `bounded` or `async`, with an optional `-bi` suffix.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        let (base, two_sided) = match t.strip_suffix("-bi") {
            Some(b) => (b, true),
            None => (t.as_str(), false),
        };
        let sync = match base {
            "sync" | "synchronous" => Synchronicity::Synchronous,
            "bounded" | "bounded-async" => Synchronicity::BoundedAsynchronous,
            "async" | "asynchronous" => Synchronicity::Asynchronous,
            _ => return Err(Error::Parse(format!("unknown combing type `{s}`"))),
        };
        Ok(CombingType { sync, two_sided })
    }
}

/// A language claimed to comb a group.
#[derive(Clone)]
pub struct CombingSpec {
    pub language: Lang,
    pub model: Model,
    pub claimed: CombingType,
    pub params: Option<FellowTravelParams>,
}

impl CombingSpec {
    pub fn new(language: Lang, model: Model, claimed: CombingType) -> Result<Self> {
        if language.alphabet().names() != model.generators().names() {
            return Err(Error::AlphabetMismatch(format!(
                "language over [{}] for generators [{}]",
                language.alphabet().names().join(" "),
                model.generators().names().join(" ")
            )));
        }
        Ok(CombingSpec { language, model, claimed, params: None })
    }

    pub fn with_params(mut self, params: FellowTravelParams) -> Result<Self> {
        params.validate()?;
        self.params = Some(params);
        Ok(self)
    }

    pub fn with_type(mut self, claimed: CombingType) -> Self {
        self.claimed = claimed;
        self
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Flags {
    pub bijective: bool,
    pub prefix_closed: bool,
    pub geodesic: bool,
    /// `max l(w) − l_G(w)` over the slice.
    pub slack: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Uncovered(Element),
    Pair { v: Word, w: Word, x: Option<Letter>, left: bool, reason: String },
}

#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub claimed: CombingType,
    pub radius: usize,
    pub len_bound: usize,
    pub cutoff: usize,
    pub words: usize,
    pub pairs: usize,
    pub empirical_sync_k: Option<usize>,
    pub empirical_async_k: Option<usize>,
    pub empirical_m: Option<usize>,
    pub flags: Flags,
    pub coverage_ok: bool,
    pub violations: Vec<Violation>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// The constant matching the claimed synchronicity.
    pub fn empirical_k(&self) -> Option<usize> {
        match self.claimed.sync {
            Synchronicity::Synchronous => self.empirical_sync_k,
            _ => self.empirical_async_k,
        }
    }

    /// Whether the sweep supports `ty` with constant `k`.
    pub fn certifies(&self, ty: CombingType, k: usize) -> bool {
        if !self.coverage_ok || (ty.two_sided && !self.claimed.two_sided) {
            return false;
        }
        match ty.sync {
            Synchronicity::Synchronous => self.empirical_sync_k.is_some_and(|s| s <= k),
            Synchronicity::BoundedAsynchronous | Synchronicity::Asynchronous => {
                self.empirical_async_k.is_some_and(|a| a <= k)
            }
        }
    }

    pub fn to_text(&self, gens: &crate::group::GeneratorSet) -> String {
        let opt = |v: Option<usize>| v.map_or("-".to_string(), |k| k.to_string());
        let mut s = String::new();
        let _ = writeln!(s, "claimed = {}", self.claimed);
        let _ = writeln!(s, "radius = {}", self.radius);
        let _ = writeln!(s, "len_bound = {}", self.len_bound);
        let _ = writeln!(s, "cutoff = {}", self.cutoff);
        let _ = writeln!(s, "words = {}", self.words);
        let _ = writeln!(s, "pairs = {}", self.pairs);
        let _ = writeln!(s, "empirical_k = {}", opt(self.empirical_k()));
        let _ = writeln!(s, "empirical_sync_k = {}", opt(self.empirical_sync_k));
        let _ = writeln!(s, "empirical_async_k = {}", opt(self.empirical_async_k));
        let _ = writeln!(s, "empirical_m = {}", opt(self.empirical_m));
        let _ = writeln!(s, "bijective = {}", self.flags.bijective);
        let _ = writeln!(s, "prefix_closed = {}", self.flags.prefix_closed);
        let _ = writeln!(s, "geodesic = {}", self.flags.geodesic);
        let _ = writeln!(s, "near_geodesic_slack = {}", self.flags.slack);
        let _ = writeln!(s, "coverage_ok = {}", self.coverage_ok);
        let _ = writeln!(s, "violations = {}", self.violations.len());
        let _ = writeln!(s, "verdict = {}", if self.passed() { "pass" } else { "fail" });
        if !self.violations.is_empty() {
            let _ = writeln!(s, "\n[violations]");
            for v in &self.violations {
                match v {
                    Violation::Uncovered(g) => {
                        let _ = writeln!(s, "uncovered\t{g}");
                    }
                    Violation::Pair { v, w, x, left, reason } => {
                        let x = x.map_or("1", |x| gens.name(x));
                        let side = if *left { "left" } else { "right" };
                        let _ = writeln!(
                            s,
                            "{side}\t{x}\t{}\t{}\t{reason}",
                            gens.format_word(v),
                            gens.format_word(w)
                        );
                    }
                }
            }
        }
        s
    }
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub radius: usize,
    pub len_bound: usize,
    /// Largest distance computed exactly; larger ones count as failures.
    pub cutoff: Option<usize>,
    pub parallelism: Parallelism,
    pub ball_limit: usize,
}

impl VerifyOptions {
    pub fn new(radius: usize, len_bound: usize) -> Self {
        VerifyOptions { radius, len_bound, cutoff: None, parallelism: Parallelism::default(), ball_limit: DEFAULT_BALL_LIMIT }
    }

    pub fn cutoff(mut self, c: usize) -> Self {
        self.cutoff = Some(c);
        self
    }

    pub fn parallelism(mut self, p: Parallelism) -> Self {
        self.parallelism = p;
        self
    }
}

enum Dist {
    Ball(Metric),
    Search(Model, usize),
}

impl Distances for Dist {
    fn dist(&self, g: &Element, h: &Element) -> Option<usize> {
        match self {
            Dist::Ball(m) => m.dist(g, h),
            Dist::Search(model, c) => Search { model: model.as_ref(), cutoff: *c }.dist(g, h),
        }
    }

    fn cutoff(&self) -> usize {
        match self {
            Dist::Ball(m) => m.radius(),
            Dist::Search(_, c) => *c,
        }
    }
}

/// Words, endpoints and prefix paths of an enumerated slice.
struct Slice {
    words: Vec<Word>,
    ends: Vec<Element>,
    prefixes: Vec<Vec<Element>>,
    buckets: HashMap<Element, Vec<usize>>,
}

impl Slice {
    fn new(lang: &dyn Language, model: &dyn GroupModel, len_bound: usize, par: Parallelism) -> Result<Slice> {
        let words = lang.enumerate(len_bound);
        for w in &words {
            model.generators().check(w)?;
        }
        let prefixes: Vec<Vec<Element>> = par.map(&words, |w| crate::group::prefix_elements(model, w));
        let ends: Vec<Element> = prefixes.iter().map(|p| p.last().expect("non-empty").clone()).collect();
        let mut buckets: HashMap<Element, Vec<usize>> = HashMap::new();
        for (i, g) in ends.iter().enumerate() {
            buckets.entry(g.clone()).or_default().push(i);
        }
        Ok(Slice { words, ends, prefixes, buckets })
    }
}

fn flags_of(slice: &Slice, model: &dyn GroupModel, geo: Option<&Ball>, len_bound: usize) -> Flags {
    let bijective = slice.buckets.values().all(|b| b.len() == 1);
    let set: HashSet<&Word> = slice.words.iter().collect();
    let prefix_closed = slice
        .words
        .iter()
        .all(|w| (0..w.len()).all(|t| set.contains(&Word(w.prefix(t).to_vec()))));
    let e = model.identity();
    let slack = slice
        .words
        .iter()
        .zip(&slice.ends)
        .map(|(w, g)| {
            let lg = geo
                .and_then(|b| b.distance_of(g))
                .or_else(|| distance(model, &e, g, len_bound))
                .unwrap_or(w.len());
            w.len() - lg.min(w.len())
        })
        .max()
        .unwrap_or(0);
    Flags { bijective, prefix_closed, geodesic: slack == 0, slack }
}

/// Property flags decided on the slice of words of length at most
/// `len_bound`.
pub fn classify_flags(lang: &dyn Language, model: &dyn GroupModel, len_bound: usize) -> Result<Flags> {
    let slice = Slice::new(lang, model, len_bound, Parallelism::default())?;
    let geo = ball_with_limit(model, len_bound, 1_000_000).ok();
    Ok(flags_of(&slice, model, geo.as_ref(), len_bound))
}

struct PairJob {
    v: usize,
    w: usize,
    x: Option<Letter>,
    left: bool,
}

struct PairOutcome {
    sync: Option<usize>,
    async_k: Option<usize>,
    m: Option<usize>,
}

/// Audits a combing on a bounded ball.
///
/// Every pair `v, w` in the slice with `w = v·x` (and, for bicombings,
/// `w = x·v`, compared against the word `x v`) is measured. Identical words
/// are not paired with themselves.
pub fn verify(spec: &CombingSpec, opts: &VerifyOptions) -> Result<VerificationReport> {
    if opts.radius == 0 || opts.len_bound < opts.radius {
        return Err(Error::InvalidParams("need radius ≥ 1 and len_bound ≥ radius".into()));
    }
    let model = spec.model.as_ref();
    let gens = model.generators();
    let par = opts.parallelism;
    let cutoff = opts
        .cutoff
        .unwrap_or_else(|| opts.len_bound.max(spec.params.map_or(0, |p| p.k + 1)));

    let slice = Slice::new(spec.language.as_ref(), model, opts.len_bound, par)?;

    let big = ball_with_limit(model, opts.radius.max(cutoff).max(opts.len_bound), opts.ball_limit).ok().map(Arc::new);
    let cover_ball = match &big {
        Some(b) => b.clone(),
        None => Arc::new(ball_with_limit(model, opts.radius, opts.ball_limit)?),
    };
    let dist = match &big {
        Some(b) if b.radius() >= cutoff => {
            let small = if b.radius() == cutoff {
                b.clone()
            } else {
                Arc::new(ball_with_limit(model, cutoff, opts.ball_limit)?)
            };
            Dist::Ball(Metric::from_ball(spec.model.clone(), small))
        }
        _ => Dist::Search(spec.model.clone(), cutoff),
    };

    let mut violations = Vec::new();
    for (g, d) in cover_ball.iter() {
        if d <= opts.radius && !slice.buckets.contains_key(g) {
            violations.push(Violation::Uncovered(g.clone()));
        }
    }
    let coverage_ok = violations.is_empty();

    let letters: Vec<Letter> = (0..gens.len()).filter(|&x| !gens.is_identity(x)).collect();
    let jobs: Vec<PairJob> = par
        .map_range(slice.words.len(), |i| {
            let g = &slice.ends[i];
            let mut out = Vec::new();
            let mut seen = BTreeSet::new();
            for x in std::iter::once(None).chain(letters.iter().map(|&x| Some(x))) {
                let target = match x {
                    Some(x) => model.act(g, x),
                    None => g.clone(),
                };
                for &j in slice.buckets.get(&target).into_iter().flatten() {
                    if j > i && seen.insert(j) {
                        out.push(PairJob { v: i, w: j, x, left: false });
                    }
                }
            }
            if spec.claimed.two_sided {
                for &x in &letters {
                    let target = model.act_left(x, g);
                    for &j in slice.buckets.get(&target).into_iter().flatten() {
                        out.push(PairJob { v: i, w: j, x: Some(x), left: true });
                    }
                }
            }
            out
        })
        .into_iter()
        .flatten()
        .collect();

    let left_prefixes = |job: &PairJob| -> Vec<Element> {
        let x = job.x.expect("left pairs carry a letter");
        let mut p = vec![model.identity()];
        p.extend(slice.prefixes[job.v].iter().map(|h| model.act_left(x, h)));
        p
    };
    let grid_of = |job: &PairJob| {
        let pw = &slice.prefixes[job.w];
        if job.left {
            distance_grid(&dist, &left_prefixes(job), pw)
        } else {
            distance_grid(&dist, &slice.prefixes[job.v], pw)
        }
    };
    let bounded = spec.claimed.sync == Synchronicity::BoundedAsynchronous;
    let mut outcomes: Vec<PairOutcome> = par.map(&jobs, |job| {
        let c = grid_of(job);
        let m = match (bounded, spec.params) {
            (true, Some(p)) => grid_min_bound(&c, p.k),
            _ => None,
        };
        PairOutcome { sync: grid_sync(&c), async_k: grid_async(&c).map(|(k, _)| k), m }
    });

    let empirical_sync_k = max_opt(outcomes.iter().map(|o| o.sync));
    let empirical_async_k = max_opt(outcomes.iter().map(|o| o.async_k));
    let k_ref = spec.params.map(|p| p.k).or(empirical_async_k);
    if bounded && spec.params.is_none() {
        if let Some(k) = k_ref {
            let ms: Vec<Option<usize>> = par.map(&jobs, |job| grid_min_bound(&grid_of(job), k));
            for (o, m) in outcomes.iter_mut().zip(ms) {
                o.m = m;
            }
        }
    }
    let empirical_m = if bounded && k_ref.is_some() {
        max_opt(outcomes.iter().map(|o| o.m))
    } else {
        None
    };

    for (job, o) in jobs.iter().zip(&outcomes) {
        let reason = match spec.claimed.sync {
            Synchronicity::Synchronous => match (o.sync, spec.params) {
                (None, _) => Some(format!("synchronous distance exceeds cutoff {cutoff}")),
                (Some(s), Some(p)) if s > p.k => Some(format!("synchronous constant {s} exceeds K = {}", p.k)),
                _ => None,
            },
            _ => match (o.async_k, spec.params) {
                (None, _) => Some(format!("asynchronous distance exceeds cutoff {cutoff}")),
                (Some(a), Some(p)) if a > p.k => Some(format!("asynchronous constant {a} exceeds K = {}", p.k)),
                (Some(_), Some(p)) if bounded => match (o.m, p.m) {
                    (None, _) => Some(format!("no bounded path at K = {}", p.k)),
                    (Some(m), Some(bound)) if m > bound => Some(format!("needs M = {m} > {bound}")),
                    _ => None,
                },
                _ => None,
            },
        };
        if let Some(reason) = reason {
            let v = if job.left {
                slice.words[job.v].prepend(job.x.expect("left pairs carry a letter"))
            } else {
                slice.words[job.v].clone()
            };
            violations.push(Violation::Pair { v, w: slice.words[job.w].clone(), x: job.x, left: job.left, reason });
        }
    }

    let geo = big.as_deref().filter(|b| b.radius() >= opts.len_bound);
    let flags = flags_of(&slice, model, geo, opts.len_bound);
    Ok(VerificationReport {
        claimed: spec.claimed,
        radius: opts.radius,
        len_bound: opts.len_bound,
        cutoff,
        words: slice.words.len(),
        pairs: jobs.len(),
        empirical_sync_k,
        empirical_async_k,
        empirical_m,
        flags,
        coverage_ok,
        violations,
    })
}

fn max_opt(it: impl Iterator<Item = Option<usize>>) -> Option<usize> {
    it.fold(Some(0), |acc, v| Some(acc?.max(v?)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machines::Fsa;
    use crate::models::{FreeAbelian, FreeGroup};

    fn shortlex_z2() -> (Lang, Model) {
        let model: Model = Arc::new(FreeAbelian::new(2));
        let names = model.generators().names();
        // (a* | A*)(b* | B*)
        let edges = vec![
            (0, Some(0), 1),
            (1, Some(0), 1),
            (0, Some(1), 2),
            (2, Some(1), 2),
            (0, Some(2), 3),
            (1, Some(2), 3),
            (2, Some(2), 3),
            (3, Some(2), 3),
            (0, Some(3), 4),
            (1, Some(3), 4),
            (2, Some(3), 4),
            (4, Some(3), 4),
        ];
        let fsa = Fsa::new(names, 5, vec![0], vec![0, 1, 2, 3, 4], edges).unwrap();
        let lang = RegularLanguage::new(model.generators().clone(), fsa)
            .unwrap()
            .with_lookup(model_lookup(model.clone()));
        (Arc::new(lang), model)
    }

    #[test]
    fn type_lattice() {
        let all = CombingType::all();
        let sync_bi: CombingType = "sync-bi".parse().unwrap();
        assert!(all.iter().all(|t| sync_bi.implies(t)));
        let async_one: CombingType = "async".parse().unwrap();
        assert!(all.iter().all(|t| t.implies(&async_one)));
        assert_eq!(all.iter().filter(|t| t.implies(t)).count(), 6);
        assert!(!async_one.implies(&sync_bi));
        assert!("nonsense".parse::<CombingType>().is_err());
        assert_eq!(sync_bi.to_string(), "synchronous bicombing");
    }

    #[test]
    fn shortlex_z2_verifies() {
        let (lang, model) = shortlex_z2();
        let spec = CombingSpec::new(lang, model, "sync-bi".parse().unwrap()).unwrap();
        let r = verify(&spec, &VerifyOptions::new(3, 6)).unwrap();
        assert!(r.passed(), "{}", r.to_text(spec.model.generators()));
        assert_eq!(r.empirical_sync_k, Some(2));
        assert!(r.flags.bijective && r.flags.prefix_closed && r.flags.geodesic);
        assert_eq!(r.flags.slack, 0);
        assert!(r.certifies("async-bi".parse().unwrap(), 3));
    }

    #[test]
    fn broken_language_is_caught() {
        let model: Model = Arc::new(FreeAbelian::new(2));
        let gens = model.generators().clone();
        let words: Vec<Word> = ["1", "a", "a a", "b", "a b a^-1", "a a b a^-1 a^-1"]
            .iter()
            .map(|s| gens.parse_word(s).unwrap())
            .collect();
        let lang = Arc::new(RegularLanguage::from_words(gens, &words).unwrap());
        let spec = CombingSpec::new(lang, model, "sync".parse().unwrap())
            .unwrap()
            .with_params(FellowTravelParams::new(1))
            .unwrap();
        let r = verify(&spec, &VerifyOptions::new(1, 6)).unwrap();
        assert!(!r.passed());
        assert!(!r.coverage_ok);
        assert!(r.violations.iter().any(|v| matches!(v, Violation::Pair { .. })));
    }

    #[test]
    fn flags_examples() {
        let model = FreeAbelian::new(2);
        let gens = model.generators().clone();
        let w = |s: &str| gens.parse_word(s).unwrap();
        let l = RegularLanguage::from_words(gens.clone(), &[w("1"), w("a a^-1")]).unwrap();
        assert!(!classify_flags(&l, &model, 2).unwrap().bijective);
        let l = RegularLanguage::from_words(gens.clone(), &[w("a"), w("a b b^-1")]).unwrap();
        let f = classify_flags(&l, &model, 3).unwrap();
        assert_eq!(f.slack, 2);
        assert!(!f.geodesic && !f.prefix_closed);
    }

    #[test]
    fn free_group_reduced_words() {
        let model: Model = Arc::new(FreeGroup::new(2));
        let slice = ProceduralLanguage::from_lookup("reduced", model.clone(), model_lookup(model.clone()));
        let spec = CombingSpec::new(Arc::new(slice), model, "sync-bi".parse().unwrap()).unwrap();
        let r = verify(&spec, &VerifyOptions::new(3, 4)).unwrap();
        assert!(r.passed());
        // left pairs a·(a^-1 b) against b reach distance 2
        assert_eq!(r.empirical_sync_k, Some(2));
        assert!(r.flags.bijective && r.flags.geodesic);
    }

    #[test]
    fn alphabet_mismatch() {
        let (lang, _) = shortlex_z2();
        let f2: Model = Arc::new(FreeGroup::new(3));
        assert!(matches!(
            CombingSpec::new(lang, f2, "sync".parse().unwrap()),
            Err(Error::AlphabetMismatch(_))
        ));
    }
}
