//! The word-difference machine `D_K`.
//!
//! States are the elements of the radius-`K` ball. Reading the pair
//! `(x, x')` (a letter of `v`, a letter of `w`, either possibly `$`) moves
//! the difference `d` to `x⁻¹ d x'`, so after reading prefixes of length `t`
//! the state is `v(t)⁻¹ w(t)`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{ball_with_limit, Ball, Element, Letter, Model, Word, DEFAULT_BALL_LIMIT};
use crate::machines::fsa::Fsa;
use crate::machines::pairs::{pad_pair, PairAlphabet};

#[derive(Clone)]
pub struct DifferenceMachine {
    model: Model,
    k: usize,
    ball: Arc<Ball>,
    start: usize,
    /// `table[d * (n+1)² + i * (n+1) + j]`, `NONE` when the ball is left.
    table: Arc<Vec<u32>>,
}

const NONE: u32 = u32::MAX;

impl DifferenceMachine {
    pub fn new(model: Model, k: usize) -> Result<Self> {
        Self::with_limit(model, k, DEFAULT_BALL_LIMIT)
    }

    pub fn with_limit(model: Model, k: usize, limit: usize) -> Result<Self> {
        let ball = Arc::new(ball_with_limit(model.as_ref(), k, limit)?);
        let start = ball.index_of(&model.identity()).expect("identity is in every ball");
        let gens = model.generators();
        let n = gens.len();
        let side = |x: usize| (x < n).then_some(x);
        let mut table = Vec::with_capacity(ball.len() * (n + 1) * (n + 1));
        for g in ball.elements() {
            for i in 0..=n {
                let left = side(i).map_or_else(|| g.clone(), |x| model.act_left(gens.inverse(x), g));
                for j in 0..=n {
                    let h = side(j).map_or_else(|| left.clone(), |y| model.act(&left, y));
                    table.push(ball.index_of(&h).map_or(NONE, |t| t as u32));
                }
            }
        }
        Ok(DifferenceMachine { model, k, ball, start, table: Arc::new(table) })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn model(&self) -> &Model {
        &self.model
    }

    pub fn states(&self) -> &Ball {
        &self.ball
    }

    pub fn num_states(&self) -> usize {
        self.ball.len()
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn state_of(&self, g: &Element) -> Option<usize> {
        self.ball.index_of(g)
    }

    pub fn element(&self, d: usize) -> &Element {
        &self.ball.elements()[d]
    }

    pub fn transition(&self, d: usize, x: Option<Letter>, y: Option<Letter>) -> Option<usize> {
        let n = self.model.generators().len();
        let (i, j) = (x.unwrap_or(n), y.unwrap_or(n));
        let t = self.table[(d * (n + 1) + i) * (n + 1) + j];
        (t != NONE).then_some(t as usize)
    }

    /// Terminal difference `v⁻¹w`, or `None` if some prefix difference
    /// leaves the ball.
    pub fn run(&self, v: &Word, w: &Word) -> Option<Element> {
        let mut d = self.start;
        for (x, y) in pad_pair(v, w) {
            d = self.transition(d, x, y)?;
        }
        Some(self.element(d).clone())
    }

    /// `D_K` as an acceptor over padded pairs, accepting at the given
    /// differences.
    pub fn pair_fsa(&self, accept: &[Element]) -> Fsa {
        let names = self.model.generators().names();
        let pa = PairAlphabet::new(names.len());
        let mut edges = Vec::new();
        for d in 0..self.num_states() {
            for s in 0..pa.len() {
                let (x, y) = pa.decode(s);
                if let Some(t) = self.transition(d, x, y) {
                    edges.push((d, Some(s), t));
                }
            }
        }
        let accepting = accept.iter().filter_map(|g| self.state_of(g)).collect();
        Fsa::new(pa.tokens(&names), self.num_states(), vec![self.start], accepting, edges)
            .expect("difference machine indices are in range")
            .trim()
    }

    /// Words `v` that asynchronously fellow travel with `w` inside the ball
    /// and satisfy `w⁻¹v = target`.
    ///
    /// States are pairs `(i, d)` with `d = w(i)⁻¹ v(j)`: a letter `y` of `v`
    /// moves `d` to `d y`, an ε-move advances along `w` and moves `d` to
    /// `w_{i+1}⁻¹ d`.
    pub fn async_companions(&self, w: &Word, target: &Element) -> Result<Fsa> {
        let tgt = self.state_of(target).ok_or(Error::TargetOutsideBall(self.k))?;
        let gens = self.model.generators();
        let nb = self.num_states();
        let id = |i: usize, d: usize| i * nb + d;
        let mut edges = Vec::new();
        for i in 0..=w.len() {
            for d in 0..nb {
                for y in 0..gens.len() {
                    if let Some(t) = self.transition(d, None, Some(y)) {
                        edges.push((id(i, d), Some(y), id(i, t)));
                    }
                }
                if i < w.len() {
                    if let Some(t) = self.transition(d, Some(w.0[i]), None) {
                        edges.push((id(i, d), None, id(i + 1, t)));
                    }
                }
            }
        }
        Ok(Fsa::new(
            gens.names(),
            (w.len() + 1) * nb,
            vec![id(0, self.start)],
            vec![id(w.len(), tgt)],
            edges,
        )?
        .trim())
    }
}

pub fn build_difference_machine(model: Model, k: usize) -> Result<DifferenceMachine> {
    DifferenceMachine::new(model, k)
}

pub fn run_difference_machine(d: &DifferenceMachine, v: &Word, w: &Word) -> Option<Element> {
    d.run(v, w)
}

pub fn async_companions(d: &DifferenceMachine, w: &Word, target: &Element) -> Result<Fsa> {
    d.async_companions(w, target)
}
