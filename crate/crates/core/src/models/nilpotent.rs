//! Nilpotent groups in integer normal form.
//!
//! Commutators are `[x, y] = x⁻¹y⁻¹xy` throughout.

use crate::error::{Error, Result};
use crate::group::{Element, Generator, GeneratorSet, GroupModel, Letter, Word};

/// The Heisenberg group `G_n`: generators `a_i, b_i` (`i = 1..n`) and `c`,
/// with `c = [a_i, b_i]` central and all other generator pairs commuting.
///
/// Elements are `a^α b^β c^γ` stored as `[α_1..α_n, β_1..β_n, γ]`.
/// Moving `b^β` right past `a^α` costs `c^{-αβ}`, since `ba = abc⁻¹`.
#[derive(Clone, Debug)]
pub struct Heisenberg {
    n: usize,
    gens: GeneratorSet,
}

impl Heisenberg {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParams("heisenberg rank must be at least 1".into()));
        }
        let mut names: Vec<String> = Vec::new();
        if n == 1 {
            names.extend(["a", "b", "c"].map(String::from));
        } else {
            names.extend((1..=n).map(|i| format!("a{i}")));
            names.extend((1..=n).map(|i| format!("b{i}")));
            names.push("c".into());
        }
        Ok(Heisenberg { n, gens: GeneratorSet::from_names(&names) })
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn element(&self, alpha: &[i64], beta: &[i64], gamma: i64) -> Element {
        let mut v = alpha.to_vec();
        v.extend_from_slice(beta);
        v.push(gamma);
        Element(v)
    }
}

impl GroupModel for Heisenberg {
    fn name(&self) -> String {
        format!("heisenberg:{}", self.n)
    }

    fn generators(&self) -> &GeneratorSet {
        &self.gens
    }

    fn identity(&self) -> Element {
        Element(vec![0; 2 * self.n + 1])
    }

    fn generator_element(&self, x: Letter) -> Element {
        let mut v = vec![0; 2 * self.n + 1];
        v[x / 2] = if x.is_multiple_of(2) { 1 } else { -1 };
        Element(v)
    }

    fn multiply(&self, g: &Element, h: &Element) -> Element {
        let n = self.n;
        let mut v: Vec<i64> = g.0.iter().zip(&h.0).map(|(a, b)| a + b).collect();
        let cross: i64 = (0..n).map(|i| g.0[n + i] * h.0[i]).sum();
        v[2 * n] -= cross;
        Element(v)
    }

    fn inverse(&self, g: &Element) -> Element {
        let n = self.n;
        let mut v: Vec<i64> = g.0.iter().map(|a| -a).collect();
        // (a^α b^β c^γ)⁻¹ = c^{-γ} b^{-β} a^{-α} = a^{-α} b^{-β} c^{-γ - αβ}
        let cross: i64 = (0..n).map(|i| g.0[i] * g.0[n + i]).sum();
        v[2 * n] -= cross;
        Element(v)
    }

    fn word_of(&self, g: &Element) -> Option<Word> {
        Some(signed_powers(&g.0))
    }
}

/// Word `x_0^{v_0} x_1^{v_1} …` over letters laid out as `x, x^-1` pairs.
fn signed_powers(v: &[i64]) -> Word {
    let mut w = Vec::new();
    for (i, &c) in v.iter().enumerate() {
        let x = if c >= 0 { 2 * i } else { 2 * i + 1 };
        w.extend(std::iter::repeat_n(x, c.unsigned_abs() as usize));
    }
    Word(w)
}

/// `U_n`: `n × n` upper uni-triangular integer matrices.
///
/// Generators are the elementary matrices `u_ij = I + E_ij` for `i < j`,
/// ordered by column then row, so `U_{n-1}`'s letters are a prefix of `U_n`'s
/// and the last `n - 1` generator pairs span the right-hand column.
#[derive(Clone, Debug)]
pub struct UniUpperTriangular {
    n: usize,
    positions: Vec<(usize, usize)>,
    gens: GeneratorSet,
}

impl UniUpperTriangular {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParams("uut needs n ≥ 2".into()));
        }
        let positions: Vec<(usize, usize)> =
            (1..n).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
        let names: Vec<String> =
            positions.iter().map(|(i, j)| format!("u{}{}", i + 1, j + 1)).collect();
        Ok(UniUpperTriangular { n, positions, gens: GeneratorSet::from_names(&names) })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// Strictly-upper entries in generator order.
    pub fn from_matrix(&self, m: &[Vec<i64>]) -> Element {
        Element(self.positions.iter().map(|&(i, j)| m[i][j]).collect())
    }

    pub fn to_matrix(&self, g: &Element) -> Vec<Vec<i64>> {
        let mut m = vec![vec![0; self.n]; self.n];
        for (k, row) in m.iter_mut().enumerate() {
            row[k] = 1;
        }
        for (&(i, j), &v) in self.positions.iter().zip(&g.0) {
            m[i][j] = v;
        }
        m
    }
}

pub(crate) fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    let m = b[0].len();
    let k = b.len();
    (0..n)
        .map(|i| (0..m).map(|j| (0..k).map(|t| a[i][t] * b[t][j]).sum()).collect())
        .collect()
}

impl GroupModel for UniUpperTriangular {
    fn name(&self) -> String {
        format!("uut:{}", self.n)
    }

    fn generators(&self) -> &GeneratorSet {
        &self.gens
    }

    fn identity(&self) -> Element {
        Element(vec![0; self.positions.len()])
    }

    fn generator_element(&self, x: Letter) -> Element {
        let mut v = vec![0; self.positions.len()];
        v[x / 2] = if x.is_multiple_of(2) { 1 } else { -1 };
        Element(v)
    }

    fn multiply(&self, g: &Element, h: &Element) -> Element {
        self.from_matrix(&mat_mul(&self.to_matrix(g), &self.to_matrix(h)))
    }

    fn inverse(&self, g: &Element) -> Element {
        // back substitution on the unit upper-triangular system
        let m = self.to_matrix(g);
        let n = self.n;
        let mut inv = vec![vec![0i64; n]; n];
        for j in 0..n {
            inv[j][j] = 1;
            for i in (0..j).rev() {
                let s: i64 = (i + 1..=j).map(|t| m[i][t] * inv[t][j]).sum();
                inv[i][j] = -s;
            }
        }
        self.from_matrix(&inv)
    }

    fn act(&self, g: &Element, x: Letter) -> Element {
        // right multiplication by I ± E_ij adds ± column i to column j
        let (i, j) = self.positions[x / 2];
        let s = if x.is_multiple_of(2) { 1 } else { -1 };
        let mut m = self.to_matrix(g);
        for row in m.iter_mut() {
            row[j] += s * row[i];
        }
        self.from_matrix(&m)
    }

    fn word_of(&self, g: &Element) -> Option<Word> {
        // peel columns right to left: g = h · c with c in the last column group
        let mut w_rev: Vec<Word> = Vec::new();
        let mut m = self.to_matrix(g);
        let n = self.n;
        for j in (1..n).rev() {
            // the column-j factor is I + Σ_i v_i E_ij with v = (top-left block)⁻¹ · column
            let mut v = vec![0i64; j];
            for i in (0..j).rev() {
                let s: i64 = (i + 1..j).map(|t| m[i][t] * v[t]).sum();
                v[i] = m[i][j] - s;
            }
            let mut letters = Vec::new();
            for (i, &c) in v.iter().enumerate() {
                let k = self.positions.iter().position(|&p| p == (i, j)).unwrap();
                let x = if c >= 0 { 2 * k } else { 2 * k + 1 };
                letters.extend(std::iter::repeat_n(x, c.unsigned_abs() as usize));
            }
            w_rev.push(Word(letters));
            for row in m.iter_mut().take(j) {
                row[j] = 0;
            }
        }
        let mut out = Word::empty();
        for w in w_rev.into_iter().rev() {
            out = out.concat(&w);
        }
        Some(out)
    }
}

/// The free nilpotent group of class 2 on `k` generators.
///
/// Elements are `x_1^{e_1} … x_k^{e_k} · Π_{i<j} [x_i, x_j]^{c_ij}` stored as
/// `[e_1..e_k, c_12, c_13, c_23, c_14, …]` (pairs ordered by `j` then `i`).
/// Generators are `x_j` followed by `t_ji = [x_j, x_i]` for `i < j`, for each
/// `j` in turn, so `N_{k-1,2}`'s letters are a prefix of `N_{k,2}`'s.
#[derive(Clone, Debug)]
pub struct FreeNilpotent2 {
    k: usize,
    pairs: Vec<(usize, usize)>,
    gen_elems: Vec<Element>,
    gens: GeneratorSet,
}

impl FreeNilpotent2 {
    pub fn new(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParams("free_nilpotent2 needs k ≥ 1".into()));
        }
        let pairs: Vec<(usize, usize)> =
            (1..k).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
        let mut model = FreeNilpotent2 {
            k,
            pairs,
            gen_elems: Vec::new(),
            gens: GeneratorSet::from_names::<&str>(&[]),
        };
        let mut names = Vec::new();
        let mut elems = Vec::new();
        for j in 0..k {
            let xj = model.basis(j);
            names.push(format!("x{}", j + 1));
            elems.push(xj.clone());
            for i in 0..j {
                let xi = model.basis(i);
                let t = model.commutator(&xj, &xi);
                names.push(format!("t{}{}", j + 1, i + 1));
                elems.push(t);
            }
        }
        let mut gens = Vec::new();
        let mut inverse = Vec::new();
        let mut all_elems = Vec::new();
        for (idx, (name, g)) in names.into_iter().zip(elems).enumerate() {
            let inv_name = format!("{name}^-1");
            gens.push(Generator { name, is_identity: false });
            gens.push(Generator { name: inv_name, is_identity: false });
            inverse.push(2 * idx + 1);
            inverse.push(2 * idx);
            all_elems.push(g.clone());
            all_elems.push(model.inverse(&g));
        }
        model.gens = GeneratorSet::new(gens, inverse)?;
        model.gen_elems = all_elems;
        Ok(model)
    }

    pub fn rank(&self) -> usize {
        self.k
    }

    fn basis(&self, i: usize) -> Element {
        let mut v = vec![0; self.k + self.pairs.len()];
        v[i] = 1;
        Element(v)
    }

    fn commutator(&self, g: &Element, h: &Element) -> Element {
        let gi = self.inverse(g);
        let hi = self.inverse(h);
        self.multiply(&self.multiply(&gi, &hi), &self.multiply(g, h))
    }

    fn pair_index(&self, i: usize, j: usize) -> usize {
        self.k + self.pairs.iter().position(|&p| p == (i, j)).unwrap()
    }
}

impl GroupModel for FreeNilpotent2 {
    fn name(&self) -> String {
        format!("free_nilpotent2:{}", self.k)
    }

    fn generators(&self) -> &GeneratorSet {
        &self.gens
    }

    fn identity(&self) -> Element {
        Element(vec![0; self.k + self.pairs.len()])
    }

    fn generator_element(&self, x: Letter) -> Element {
        self.gen_elems[x].clone()
    }

    fn multiply(&self, g: &Element, h: &Element) -> Element {
        // x_j^a x_i^b = x_i^b x_j^a [x_i, x_j]^{-ab} for i < j
        let mut v: Vec<i64> = g.0.iter().zip(&h.0).map(|(a, b)| a + b).collect();
        for &(i, j) in &self.pairs {
            let p = self.pair_index(i, j);
            v[p] -= g.0[j] * h.0[i];
        }
        Element(v)
    }

    fn inverse(&self, g: &Element) -> Element {
        // (e, c)(-e, d) = identity forces d_ij = -c_ij - e_i e_j
        let mut v: Vec<i64> = g.0.iter().map(|a| -a).collect();
        for &(i, j) in &self.pairs {
            let p = self.pair_index(i, j);
            v[p] -= g.0[i] * g.0[j];
        }
        Element(v)
    }

    fn word_of(&self, g: &Element) -> Option<Word> {
        // x-block then the commutator letters t_ji = [x_j, x_i] = c_ij^{-1}
        let mut letters = signed_powers(&g.0[..self.k]).0;
        let x_letter = |i: usize| self.gens.letter(&format!("x{}", i + 1)).unwrap();
        letters = letters
            .into_iter()
            .map(|l| if l % 2 == 0 { x_letter(l / 2) } else { x_letter(l / 2) + 1 })
            .collect();
        for &(i, j) in &self.pairs {
            let c = g.0[self.pair_index(i, j)];
            let t = self.gens.letter(&format!("t{}{}", j + 1, i + 1)).unwrap();
            let sign_of_t = self.gen_elems[t].0[self.pair_index(i, j)];
            let x = if c * sign_of_t >= 0 { t } else { t + 1 };
            letters.extend(std::iter::repeat_n(x, c.unsigned_abs() as usize));
        }
        Some(Word(letters))
    }
}
