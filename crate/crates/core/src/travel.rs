//! Discrete fellow-traveller checks.
//!
//! Words are compared through their prefix elements `v(0), …, v(l(v))`.
//! An asynchronous comparison follows a monotone lattice path from `(0, 0)`
//! to `(l(v), l(w))` with unit steps `(1, 0)` and `(0, 1)`; the bounded
//! variant allows at most `M` consecutive steps in the same direction.

use crate::error::{Error, Result};
use crate::group::{distance, prefix_elements, Element, GroupModel, Metric, Word};

/// A source of Cayley-graph distances that gives up past some cutoff.
pub trait Distances: Sync {
    fn dist(&self, g: &Element, h: &Element) -> Option<usize>;

    fn cutoff(&self) -> usize;
}

impl Distances for Metric {
    fn dist(&self, g: &Element, h: &Element) -> Option<usize> {
        Metric::dist(self, g, h)
    }

    fn cutoff(&self) -> usize {
        self.radius()
    }
}

/// Bidirectional breadth-first search for every query.
pub struct Search<'a> {
    pub model: &'a dyn GroupModel,
    pub cutoff: usize,
}

impl Distances for Search<'_> {
    fn dist(&self, g: &Element, h: &Element) -> Option<usize> {
        distance(self.model, g, h, self.cutoff)
    }

    fn cutoff(&self) -> usize {
        self.cutoff
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TravelKind {
    Synchronous,
    Asynchronous,
    Bounded,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TravelWitness {
    pub kind: TravelKind,
    pub k: usize,
    pub m: Option<usize>,
    pub path: Vec<(usize, usize)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct FellowTravelParams {
    pub k: usize,
    pub m: Option<usize>,
    pub epsilon: Option<usize>,
}

impl FellowTravelParams {
    pub fn new(k: usize) -> Self {
        FellowTravelParams { k, m: None, epsilon: None }
    }

    pub fn with_m(k: usize, m: usize) -> Self {
        FellowTravelParams { k, m: Some(m), epsilon: None }
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == Some(0) {
            return Err(Error::InvalidParams("asynchrony bound M must be at least 1".into()));
        }
        Ok(())
    }
}

const INF: usize = usize::MAX;

/// `max_t d(v(t), w(t))`, or `None` past the cutoff.
pub fn sync_kmin_prefixes(dist: &dyn Distances, pv: &[Element], pw: &[Element]) -> Option<usize> {
    let n = pv.len().max(pw.len());
    let mut k = 0;
    for t in 0..n {
        let a = &pv[t.min(pv.len() - 1)];
        let b = &pw[t.min(pw.len() - 1)];
        k = k.max(dist.dist(a, b)?);
    }
    Some(k)
}

/// Distances `d(v(i), w(j))`, with `usize::MAX` past the cutoff.
pub fn distance_grid(dist: &dyn Distances, pv: &[Element], pw: &[Element]) -> Vec<Vec<usize>> {
    pv.iter()
        .map(|a| pw.iter().map(|b| dist.dist(a, b).unwrap_or(INF)).collect())
        .collect()
}

/// Bottleneck path through the distance grid: the least `K` over monotone
/// paths, with one optimal path.
pub fn async_kmin_prefixes(
    dist: &dyn Distances,
    pv: &[Element],
    pw: &[Element],
) -> Option<(usize, Vec<(usize, usize)>)> {
    grid_async(&distance_grid(dist, pv, pw))
}

/// Synchronous constant read off the diagonal of a distance grid.
pub fn grid_sync(c: &[Vec<usize>]) -> Option<usize> {
    let (n, m) = (c.len(), c[0].len());
    let k = (0..n.max(m)).map(|t| c[t.min(n - 1)][t.min(m - 1)]).max().unwrap_or(0);
    (k != INF).then_some(k)
}

pub fn grid_async(c: &[Vec<usize>]) -> Option<(usize, Vec<(usize, usize)>)> {
    let (n, m) = (c.len(), c[0].len());
    let mut best = vec![vec![INF; m]; n];
    for i in 0..n {
        for j in 0..m {
            let prev = match (i, j) {
                (0, 0) => 0,
                (0, _) => best[0][j - 1],
                (_, 0) => best[i - 1][0],
                _ => best[i - 1][j].min(best[i][j - 1]),
            };
            best[i][j] = c[i][j].max(prev);
        }
    }
    let k = best[n - 1][m - 1];
    if k == INF {
        return None;
    }
    let (mut i, mut j) = (n - 1, m - 1);
    let mut path = vec![(i, j)];
    while (i, j) != (0, 0) {
        if j == 0 || (i > 0 && best[i - 1][j] <= best[i][j - 1]) {
            i -= 1;
        } else {
            j -= 1;
        }
        path.push((i, j));
    }
    path.reverse();
    Some((k, path))
}

/// A path with every visited distance at most `k` and at most `m`
/// consecutive steps in one direction, if one exists.
pub fn bounded_async_prefixes(
    dist: &dyn Distances,
    pv: &[Element],
    pw: &[Element],
    k: usize,
    m: usize,
) -> Option<Vec<(usize, usize)>> {
    grid_bounded(&distance_grid(dist, pv, pw), k, m)
}

pub fn grid_bounded(c: &[Vec<usize>], k: usize, m: usize) -> Option<Vec<(usize, usize)>> {
    let (n, w) = (c.len(), c[0].len());
    if c[0][0] > k || m == 0 && n * w > 1 {
        return None;
    }
    // state (i, j, dir, run) with dir 0 = step in v, 1 = step in w
    let idx = |i: usize, j: usize, d: usize, r: usize| ((i * w + j) * 2 + d) * (m + 1) + r;
    let size = n * w * 2 * (m + 1);
    let mut parent: Vec<Option<usize>> = vec![None; size];
    let mut reached = vec![false; size];
    let root = usize::MAX;
    let mut frontier: Vec<(usize, usize, usize, usize)> = Vec::new();
    let push = |st: (usize, usize, usize, usize),
                    from: usize,
                    reached: &mut Vec<bool>,
                    parent: &mut Vec<Option<usize>>,
                    next: &mut Vec<(usize, usize, usize, usize)>| {
        let id = idx(st.0, st.1, st.2, st.3);
        if !reached[id] {
            reached[id] = true;
            parent[id] = Some(from);
            next.push(st);
        }
    };
    if n * w == 1 {
        return Some(vec![(0, 0)]);
    }
    let mut first = Vec::new();
    if n > 1 && c[1][0] <= k {
        push((1, 0, 0, 1), root, &mut reached, &mut parent, &mut first);
    }
    if w > 1 && c[0][1] <= k {
        push((0, 1, 1, 1), root, &mut reached, &mut parent, &mut first);
    }
    frontier.extend(first);
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for &(i, j, d, r) in &frontier {
            let from = idx(i, j, d, r);
            if i + 1 < n && c[i + 1][j] <= k {
                let r2 = if d == 0 { r + 1 } else { 1 };
                if r2 <= m {
                    push((i + 1, j, 0, r2), from, &mut reached, &mut parent, &mut next);
                }
            }
            if j + 1 < w && c[i][j + 1] <= k {
                let r2 = if d == 1 { r + 1 } else { 1 };
                if r2 <= m {
                    push((i, j + 1, 1, r2), from, &mut reached, &mut parent, &mut next);
                }
            }
        }
        frontier = next;
    }
    let end = (0..2)
        .flat_map(|d| (1..=m).map(move |r| (d, r)))
        .map(|(d, r)| idx(n - 1, w - 1, d, r))
        .find(|&id| reached[id])?;
    let mut path = Vec::new();
    let mut cur = end;
    loop {
        let cell = cur / (2 * (m + 1));
        path.push((cell / w, cell % w));
        match parent[cur] {
            Some(p) if p == root => break,
            Some(p) => cur = p,
            None => unreachable!("reached states have parents"),
        }
    }
    path.push((0, 0));
    path.reverse();
    Some(path)
}

/// The least `M` for which a bounded path at constant `k` exists.
pub fn min_bound_prefixes(dist: &dyn Distances, pv: &[Element], pw: &[Element], k: usize) -> Option<usize> {
    grid_min_bound(&distance_grid(dist, pv, pw), k)
}

/// Least `M` admitting a bounded path at constant `k`.
pub fn grid_min_bound(c: &[Vec<usize>], k: usize) -> Option<usize> {
    let top = (c.len().max(c[0].len()) - 1).max(1);
    let mut lo = 1;
    let mut hi = top;
    grid_bounded(c, k, hi)?;
    while lo < hi {
        let mid = (lo + hi) / 2;
        if grid_bounded(c, k, mid).is_some() {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Some(lo)
}

fn prefixes(model: &dyn GroupModel, v: &Word, w: &Word) -> Result<(Vec<Element>, Vec<Element>)> {
    model.generators().check(v)?;
    model.generators().check(w)?;
    Ok((prefix_elements(model, v), prefix_elements(model, w)))
}

/// The least synchronous fellow-traveller constant of `v` and `w`.
pub fn sync_kmin(model: &dyn GroupModel, v: &Word, w: &Word, cutoff: usize) -> Result<usize> {
    let (pv, pw) = prefixes(model, v, w)?;
    sync_kmin_prefixes(&Search { model, cutoff }, &pv, &pw).ok_or(Error::DistanceCutoffExceeded(cutoff))
}

/// The least asynchronous constant and a path realising it.
pub fn async_kmin(model: &dyn GroupModel, v: &Word, w: &Word, cutoff: usize) -> Result<(usize, TravelWitness)> {
    let (pv, pw) = prefixes(model, v, w)?;
    let (k, path) = async_kmin_prefixes(&Search { model, cutoff }, &pv, &pw)
        .ok_or(Error::DistanceCutoffExceeded(cutoff))?;
    Ok((k, TravelWitness { kind: TravelKind::Asynchronous, k, m: None, path }))
}

pub fn bounded_async_check(model: &dyn GroupModel, v: &Word, w: &Word, k: usize, m: usize) -> Result<bool> {
    Ok(bounded_async_witness(model, v, w, k, m)?.is_some())
}

pub fn bounded_async_witness(
    model: &dyn GroupModel,
    v: &Word,
    w: &Word,
    k: usize,
    m: usize,
) -> Result<Option<TravelWitness>> {
    FellowTravelParams::with_m(k, m).validate()?;
    let (pv, pw) = prefixes(model, v, w)?;
    let search = Search { model, cutoff: k };
    Ok(bounded_async_prefixes(&search, &pv, &pw, k, m)
        .map(|path| TravelWitness { kind: TravelKind::Bounded, k, m: Some(m), path }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{FreeAbelian, FreeGroup};

    fn w(m: &dyn GroupModel, s: &str) -> Word {
        m.generators().parse_word(s).unwrap()
    }

    #[test]
    fn sync_examples() {
        let z2 = FreeAbelian::new(2);
        assert_eq!(sync_kmin(&z2, &w(&z2, "a b"), &w(&z2, "a a b"), 10).unwrap(), 2);
        let v = w(&z2, "a b a^-1");
        assert_eq!(sync_kmin(&z2, &v, &v, 10).unwrap(), 0);
        let f2 = FreeGroup::new(2);
        assert_eq!(sync_kmin(&f2, &w(&f2, "a"), &w(&f2, "b"), 10).unwrap(), 2);
        assert_eq!(
            sync_kmin(&f2, &w(&f2, "a a a"), &w(&f2, "b b b"), 3),
            Err(Error::DistanceCutoffExceeded(3))
        );
    }

    #[test]
    fn async_examples() {
        let z2 = FreeAbelian::new(2);
        let (k, wit) = async_kmin(&z2, &w(&z2, "a b"), &w(&z2, "b a"), 10).unwrap();
        assert_eq!(k, 2);
        assert_eq!(wit.path.first(), Some(&(0, 0)));
        assert_eq!(wit.path.last(), Some(&(2, 2)));
        let v = w(&z2, "a a a");
        let (k, wit) = async_kmin(&z2, &v, &v, 10).unwrap();
        assert_eq!(k, 1);
        assert_eq!(wit.path.len(), 7);
        assert!(wit.path.windows(2).all(|p| p[1].0 + p[1].1 == p[0].0 + p[0].1 + 1));
    }

    /// Every monotone lattice path, by recursion.
    fn all_paths(n: usize, m: usize) -> Vec<Vec<(usize, usize)>> {
        fn go(i: usize, j: usize, n: usize, m: usize, cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
            cur.push((i, j));
            if (i, j) == (n, m) {
                out.push(cur.clone());
            }
            if i < n {
                go(i + 1, j, n, m, cur, out);
            }
            if j < m {
                go(i, j + 1, n, m, cur, out);
            }
            cur.pop();
        }
        let mut out = Vec::new();
        go(0, 0, n, m, &mut Vec::new(), &mut out);
        out
    }

    fn max_run(path: &[(usize, usize)]) -> usize {
        let dirs: Vec<bool> = path.windows(2).map(|p| p[1].0 > p[0].0).collect();
        let mut best = 0;
        let mut run = 0;
        for (k, d) in dirs.iter().enumerate() {
            run = if k > 0 && dirs[k - 1] == *d { run + 1 } else { 1 };
            best = best.max(run);
        }
        best
    }

    fn brute_bounded(m: &dyn GroupModel, v: &Word, w: &Word, k: usize, bound: usize) -> bool {
        let (pv, pw) = (prefix_elements(m, v), prefix_elements(m, w));
        all_paths(v.len(), w.len()).iter().any(|p| {
            max_run(p) <= bound && p.iter().all(|&(i, j)| distance(m, &pv[i], &pw[j], 20).unwrap() <= k)
        })
    }

    #[test]
    fn bounded_examples() {
        let z2 = FreeAbelian::new(2);
        let v = w(&z2, "a b a");
        assert!(!bounded_async_check(&z2, &v, &v, 0, 1).unwrap());
        assert!(bounded_async_check(&z2, &v, &v, 1, 1).unwrap());
        assert!(bounded_async_check(&z2, &Word::empty(), &Word::empty(), 0, 1).unwrap());
        let (a, ab4) = (w(&z2, "a"), w(&z2, "a b^4"));
        assert_eq!(ab4.len(), 5);
        for (k, m) in [(4, 2), (4, 8), (3, 8), (5, 3)] {
            assert_eq!(bounded_async_check(&z2, &a, &ab4, k, m).unwrap(), brute_bounded(&z2, &a, &ab4, k, m));
        }
        assert!(!bounded_async_check(&z2, &a, &ab4, 4, 2).unwrap());
        let (ka, _) = async_kmin(&z2, &a, &ab4, 10).unwrap();
        assert!(ka <= 4);
        assert!(bounded_async_check(&z2, &a, &ab4, 4, 8).unwrap());
        let wit = bounded_async_witness(&z2, &a, &ab4, 4, 8).unwrap().unwrap();
        assert!(max_run(&wit.path) <= 8);
        assert!(matches!(bounded_async_check(&z2, &a, &a, 0, 0), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn async_matches_path_enumeration() {
        let z2 = FreeAbelian::new(2);
        let (v, u) = (w(&z2, "a a b b"), w(&z2, "b b a a"));
        let (pv, pu) = (prefix_elements(&z2, &v), prefix_elements(&z2, &u));
        let brute = all_paths(4, 4)
            .iter()
            .map(|p| p.iter().map(|&(i, j)| distance(&z2, &pv[i], &pu[j], 20).unwrap()).max().unwrap())
            .min()
            .unwrap();
        assert_eq!(async_kmin(&z2, &v, &u, 20).unwrap().0, brute);
    }
}
