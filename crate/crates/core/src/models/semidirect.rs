//! Split extensions `H ⋉ N` with multiplication `h₁n₁ · h₂n₂ = h₁h₂ · n₁^{h₂} n₂`
//! where `n^h = h⁻¹nh`.

use std::collections::HashSet;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{ball, fold_letters, Element, GeneratorSet, GroupModel, Letter, Model, Word};
use crate::models::nilpotent::mat_mul;

/// How `H` acts on `N`: for every letter `y` of `H` (inverses included) and
/// every letter `x` of `N`, a word over `N`'s letters representing `x^y`.
#[derive(Clone)]
pub struct ActionData {
    h: Model,
    n: Model,
    images: Vec<Vec<Word>>,
}

impl ActionData {
    pub fn new(h: Model, n: Model, images: Vec<Vec<Word>>) -> Result<Self> {
        let hy = h.generators().len();
        let nx = n.generators().len();
        if images.len() != hy || images.iter().any(|row| row.len() != nx) {
            return Err(Error::InvalidParams(format!(
                "action table must be {hy} × {nx} (H letters × N letters)"
            )));
        }
        for row in &images {
            for w in row {
                n.generators().check(w)?;
            }
        }
        Ok(ActionData { h, n, images })
    }

    /// The trivial action.
    pub fn trivial(h: Model, n: Model) -> Self {
        let nx = n.generators().len();
        let images = vec![(0..nx).map(|x| Word(vec![x])).collect(); h.generators().len()];
        ActionData { h, n, images }
    }

    /// Reads the action off an ambient group in which `H` and `N` sit as the
    /// subgroups generated by the given letters: `x^y = y⁻¹xy` is computed in
    /// the ambient model and re-expressed as the shortlex-least word over
    /// `N`'s letters of length at most `max_len`.
    pub fn derive(
        ambient: &dyn GroupModel,
        h: Model,
        h_letters: &[Letter],
        n: Model,
        n_letters: &[Letter],
        max_len: usize,
    ) -> Result<Self> {
        if h_letters.len() != h.generators().len() || n_letters.len() != n.generators().len() {
            return Err(Error::InvalidParams("letter maps must cover H and N".into()));
        }
        let e = ambient.identity();
        // breadth-first enumeration of N-words evaluated in the ambient group
        let mut found: Vec<(Element, Word)> = vec![(e.clone(), Word::empty())];
        let mut seen: HashSet<Element> = HashSet::from([e]);
        let mut frontier = found.clone();
        for _ in 0..max_len {
            let mut next = Vec::new();
            for (g, w) in &frontier {
                for (k, &x) in n_letters.iter().enumerate() {
                    let g2 = ambient.act(g, x);
                    if seen.insert(g2.clone()) {
                        let mut w2 = w.clone();
                        w2.push(k);
                        next.push((g2, w2));
                    }
                }
            }
            found.extend(next.iter().cloned());
            frontier = next;
        }
        let mut images = Vec::with_capacity(h_letters.len());
        for &y in h_letters {
            let gy = ambient.generator_element(y);
            let gy_inv = ambient.inverse(&gy);
            let mut row = Vec::with_capacity(n_letters.len());
            for &x in n_letters {
                let target =
                    ambient.multiply(&ambient.multiply(&gy_inv, &ambient.generator_element(x)), &gy);
                let w = found
                    .iter()
                    .find(|(g, _)| *g == target)
                    .map(|(_, w)| w.clone())
                    .ok_or_else(|| {
                        Error::InvalidParams(format!(
                            "conjugate of `{}` by `{}` is not an N-word of length ≤ {max_len}",
                            ambient.generators().name(x),
                            ambient.generators().name(y)
                        ))
                    })?;
                row.push(w);
            }
            images.push(row);
        }
        ActionData::new(h, n, images)
    }

    pub fn h_model(&self) -> &Model {
        &self.h
    }

    pub fn n_model(&self) -> &Model {
        &self.n
    }

    /// Word over `N` representing `x^y`.
    pub fn image_word(&self, y: Letter, x: Letter) -> &Word {
        &self.images[y][x]
    }

    /// `n^y` for an `H`-letter `y`.
    pub fn act_generator(&self, n: &Element, y: Letter) -> Element {
        let w = self.n.word_of(n).expect("normal factor model must provide words");
        let mut g = self.n.identity();
        for &x in w.letters() {
            g = fold_letters(self.n.as_ref(), &g, self.images[y][x].letters());
        }
        g
    }

    /// `n^h` for an arbitrary `h ∈ H`.
    pub fn act_element(&self, n: &Element, h: &Element) -> Element {
        let w = self.h.word_of(h).expect("acting factor model must provide words");
        w.letters().iter().fold(n.clone(), |m, &y| self.act_generator(&m, y))
    }

    /// Checks that each letter acts as a homomorphism on the radius-`r` ball
    /// of `N` and that `y` followed by `y⁻¹` fixes the generators of `N`.
    pub fn validate(&self, radius: usize) -> Result<()> {
        let nb = ball(self.n.as_ref(), radius)?;
        let hg = self.h.generators();
        for y in 0..hg.len() {
            let yi = hg.inverse(y);
            for x in 0..self.n.generators().len() {
                let gx = self.n.generator_element(x);
                let back = self.act_generator(&self.act_generator(&gx, y), yi);
                if back != gx {
                    return Err(Error::InvalidParams(format!(
                        "letter {} followed by its inverse moves {}",
                        hg.name(y),
                        self.n.generators().name(x)
                    )));
                }
            }
            for a in nb.elements() {
                for b in nb.elements() {
                    let lhs = self.act_generator(&self.n.multiply(a, b), y);
                    let rhs = self
                        .n
                        .multiply(&self.act_generator(a, y), &self.act_generator(b, y));
                    if lhs != rhs {
                        return Err(Error::InvalidParams(format!(
                            "action of {} is not a homomorphism at {a} · {b}",
                            hg.name(y)
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// `H ⋉ N` from two models and an action; letters are `H`'s then `N`'s.
/// Elements are stored as `[l(h), h…, n…]`.
#[derive(Clone)]
pub struct Semidirect {
    action: Arc<ActionData>,
    gens: GeneratorSet,
    hy: usize,
}

impl Semidirect {
    pub fn new(action: Arc<ActionData>) -> Result<Self> {
        let gens = action.h.generators().disjoint_union(action.n.generators())?;
        let hy = action.h.generators().len();
        Ok(Semidirect { action, gens, hy })
    }

    pub fn action(&self) -> &ActionData {
        &self.action
    }

    pub fn pair(&self, h: &Element, n: &Element) -> Element {
        let mut v = Vec::with_capacity(1 + h.0.len() + n.0.len());
        v.push(h.0.len() as i64);
        v.extend_from_slice(&h.0);
        v.extend_from_slice(&n.0);
        Element(v)
    }

    pub fn split(&self, g: &Element) -> (Element, Element) {
        let lh = g.0[0] as usize;
        (Element(g.0[1..1 + lh].to_vec()), Element(g.0[1 + lh..].to_vec()))
    }
}

impl GroupModel for Semidirect {
    fn name(&self) -> String {
        format!("semidirect({}, {})", self.action.h.name(), self.action.n.name())
    }

    fn generators(&self) -> &GeneratorSet {
        &self.gens
    }

    fn identity(&self) -> Element {
        self.pair(&self.action.h.identity(), &self.action.n.identity())
    }

    fn generator_element(&self, x: Letter) -> Element {
        if x < self.hy {
            self.pair(&self.action.h.generator_element(x), &self.action.n.identity())
        } else {
            self.pair(&self.action.h.identity(), &self.action.n.generator_element(x - self.hy))
        }
    }

    fn multiply(&self, g: &Element, k: &Element) -> Element {
        let (h1, n1) = self.split(g);
        let (h2, n2) = self.split(k);
        let h = self.action.h.multiply(&h1, &h2);
        let n = self.action.n.multiply(&self.action.act_element(&n1, &h2), &n2);
        self.pair(&h, &n)
    }

    fn inverse(&self, g: &Element) -> Element {
        let (h, n) = self.split(g);
        let hi = self.action.h.inverse(&h);
        let ni = self.action.n.inverse(&n);
        self.pair(&hi, &self.action.act_element(&ni, &hi))
    }

    fn act(&self, g: &Element, x: Letter) -> Element {
        let (h, n) = self.split(g);
        if x < self.hy {
            let h2 = self.action.h.act(&h, x);
            self.pair(&h2, &self.action.act_generator(&n, x))
        } else {
            self.pair(&h, &self.action.n.act(&n, x - self.hy))
        }
    }

    fn word_of(&self, g: &Element) -> Option<Word> {
        let (h, n) = self.split(g);
        let wh = self.action.h.word_of(&h)?;
        let wn = self.action.n.word_of(&n)?;
        Some(wh.concat(&Word(wn.0.iter().map(|x| x + self.hy).collect())))
    }
}

/// `Z ⋉_A Z^r` for an integer matrix `A ∈ GL(r, Z)`: conjugation by the
/// generator `x` sends the column vector `n` to `A n`, so column `i` of `A`
/// is the image of the `i`-th basis generator.
#[derive(Clone, Debug)]
pub struct MatrixSemidirect {
    matrix: Vec<Vec<i64>>,
    inverse: Vec<Vec<i64>>,
    gens: GeneratorSet,
}

impl MatrixSemidirect {
    pub fn new(matrix: Vec<Vec<i64>>) -> Result<Self> {
        let r = matrix.len();
        if r == 0 || matrix.iter().any(|row| row.len() != r) {
            return Err(Error::InvalidParams("matrix must be square and non-empty".into()));
        }
        let inverse = integer_inverse(&matrix)
            .ok_or_else(|| Error::InvalidParams("matrix is not invertible over Z".into()))?;
        let mut names = vec!["x".to_string()];
        if r <= 2 {
            names.extend(["y", "z"][..r].iter().map(|s| s.to_string()));
        } else {
            names.extend((1..=r).map(|i| format!("n{i}")));
        }
        Ok(MatrixSemidirect { matrix, inverse, gens: GeneratorSet::from_names(&names) })
    }

    pub fn rank(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    fn apply_power(&self, v: &[i64], t: i64) -> Vec<i64> {
        let m = if t >= 0 { &self.matrix } else { &self.inverse };
        let mut out: Vec<Vec<i64>> = v.iter().map(|&c| vec![c]).collect();
        for _ in 0..t.unsigned_abs() {
            out = mat_mul(m, &out);
        }
        out.into_iter().map(|row| row[0]).collect()
    }
}

fn integer_inverse(m: &[Vec<i64>]) -> Option<Vec<Vec<i64>>> {
    // fraction-free Gauss–Jordan over i128; the inverse is integral iff det = ±1
    let r = m.len();
    let mut a: Vec<Vec<i128>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut v: Vec<i128> = row.iter().map(|&c| c as i128).collect();
            v.extend((0..r).map(|j| i128::from(i == j)));
            v
        })
        .collect();
    for col in 0..r {
        let piv = (col..r).find(|&i| a[i][col] != 0)?;
        a.swap(col, piv);
        for i in 0..r {
            if i != col && a[i][col] != 0 {
                let (p, q) = (a[col][col], a[i][col]);
                for j in 0..2 * r {
                    a[i][j] = a[i][j] * p - a[col][j] * q;
                }
            }
        }
    }
    let mut out = vec![vec![0i64; r]; r];
    for i in 0..r {
        let d = a[i][i];
        for j in 0..r {
            let v = a[i][r + j];
            if v % d != 0 {
                return None;
            }
            out[i][j] = (v / d) as i64;
        }
    }
    let check = mat_mul(m, &out);
    let ok = (0..r).all(|i| (0..r).all(|j| check[i][j] == i64::from(i == j)));
    ok.then_some(out)
}

impl GroupModel for MatrixSemidirect {
    fn name(&self) -> String {
        let rows: Vec<String> = self
            .matrix
            .iter()
            .map(|r| r.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(","))
            .collect();
        format!("semidirect:{}", rows.join(";"))
    }

    fn generators(&self) -> &GeneratorSet {
        &self.gens
    }

    fn identity(&self) -> Element {
        Element(vec![0; 1 + self.rank()])
    }

    fn generator_element(&self, x: Letter) -> Element {
        let mut v = vec![0; 1 + self.rank()];
        v[x / 2] = if x.is_multiple_of(2) { 1 } else { -1 };
        Element(v)
    }

    fn multiply(&self, g: &Element, h: &Element) -> Element {
        let moved = self.apply_power(&g.0[1..], h.0[0]);
        let mut v = vec![g.0[0] + h.0[0]];
        v.extend(moved.iter().zip(&h.0[1..]).map(|(a, b)| a + b));
        Element(v)
    }

    fn inverse(&self, g: &Element) -> Element {
        let neg: Vec<i64> = g.0[1..].iter().map(|c| -c).collect();
        let moved = self.apply_power(&neg, -g.0[0]);
        let mut v = vec![-g.0[0]];
        v.extend(moved);
        Element(v)
    }

    fn word_of(&self, g: &Element) -> Option<Word> {
        let mut w = Vec::new();
        for (i, &c) in g.0.iter().enumerate() {
            let x = if c >= 0 { 2 * i } else { 2 * i + 1 };
            w.extend(std::iter::repeat_n(x, c.unsigned_abs() as usize));
        }
        Some(Word(w))
    }
}
