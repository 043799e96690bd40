//! Embeddings as banks of composed scalar tanh networks.
//!
//! An item's row holds `dim / 2` layer weights followed by `dim / 2` layer
//! biases. Layers are grouped into `k` chains of `n` scalar layers, with
//! `k · n = dim / 2`. Chain `i` evaluates
//!
//! ```text
//! u⁽ⁱ⁾(x) = σ(w_{in} · + b_{in}) ∘ ⋯ ∘ σ(w_{(i-1)n+1} x + b_{(i-1)n+1})
//! ```
//!
//! (1-based), so within a chain the lowest-indexed layer is applied first.
//! The triple score is `Σ_i ∫_Ω h⁽ⁱ⁾(r⁽ⁱ⁾(x)) · t⁽ⁱ⁾(x) dx`, approximated by
//! the five-node Gauss–Legendre rule.

use crate::error::{Error, Result};
use crate::poly::TripleGrad;
use crate::quadrature::{Interval, MappedRule, QuadratureRule};
use crate::scoring::TripleScorer;

/// Upper bound on layers per chain; sizes the per-call activation buffers.
pub const MAX_LAYERS: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct NeuralScorer {
    layers: usize,
    components: usize,
    domain: Interval,
    rule: MappedRule,
}

impl NeuralScorer {
    pub fn new(dim: usize, layers: usize, rule: &QuadratureRule, domain: Interval) -> Result<Self> {
        if dim == 0 || !dim.is_multiple_of(2) {
            return Err(Error::config(format!("neural embedding dim must be even, got {dim}")));
        }
        if layers == 0 || layers > MAX_LAYERS {
            return Err(Error::config(format!(
                "layers per chain must be in 1..={MAX_LAYERS}, got {layers}"
            )));
        }
        let half = dim / 2;
        if !half.is_multiple_of(layers) {
            return Err(Error::config(format!(
                "layers={layers} does not divide dim/2={half}"
            )));
        }
        Ok(Self {
            layers,
            components: half / layers,
            domain,
            rule: rule.mapped(&domain),
        })
    }

    pub fn layers(&self) -> usize {
        self.layers
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn domain(&self) -> &Interval {
        &self.domain
    }

    fn half(&self) -> usize {
        self.layers * self.components
    }

    fn chain<'a>(&self, row: &'a [f64], component: usize) -> (&'a [f64], &'a [f64]) {
        let start = component * self.layers;
        let end = start + self.layers;
        let half = self.half();
        (&row[start..end], &row[half + start..half + end])
    }

    /// Output of chain `component` (0-based) of `row` at `x`.
    pub fn component_forward(&self, row: &[f64], component: usize, x: f64) -> f64 {
        let (w, b) = self.chain(row, component);
        run_chain(w, b, x)
    }

    /// Evaluates every chain of `row` at `x`.
    pub fn eval(&self, row: &[f64], x: f64) -> Vec<f64> {
        (0..self.components)
            .map(|c| self.component_forward(row, c, x))
            .collect()
    }

    fn check(&self, rows: &[&[f64]]) -> Result<()> {
        let want = self.row_len();
        for row in rows {
            if row.len() != want {
                return Err(Error::shape(format!(
                    "neural row has {} parameters, expected {want} ({} chains x {} layers, weights and biases)",
                    row.len(),
                    self.components,
                    self.layers
                )));
            }
        }
        Ok(())
    }

    pub fn try_score(&self, h: &[f64], r: &[f64], t: &[f64]) -> Result<f64> {
        self.check(&[h, r, t])?;
        Ok(self.score(h, r, t))
    }

    pub fn try_grad(&self, h: &[f64], r: &[f64], t: &[f64]) -> Result<TripleGrad> {
        self.check(&[h, r, t])?;
        let n = self.row_len();
        let mut g = TripleGrad {
            head: vec![0.0; n],
            relation: vec![0.0; n],
            tail: vec![0.0; n],
        };
        self.grad_into(h, r, t, &mut g.head, &mut g.relation, &mut g.tail);
        Ok(g)
    }
}

fn run_chain(w: &[f64], b: &[f64], x: f64) -> f64 {
    w.iter().zip(b).fold(x, |y, (w, b)| (w * y + b).tanh())
}

/// Forward pass that records every layer's output; `acts[0]` is the input.
fn forward_record(w: &[f64], b: &[f64], x: f64, acts: &mut [f64]) -> f64 {
    acts[0] = x;
    for l in 0..w.len() {
        acts[l + 1] = (w[l] * acts[l] + b[l]).tanh();
    }
    acts[w.len()]
}

/// Backpropagates `upstream = ∂L/∂output` through a recorded chain,
/// accumulating into `gw`/`gb`, and returns `∂L/∂input`.
fn backward(w: &[f64], acts: &[f64], upstream: f64, gw: &mut [f64], gb: &mut [f64]) -> f64 {
    let mut g = upstream;
    for l in (0..w.len()).rev() {
        let y = acts[l + 1];
        let gz = g * (1.0 - y * y);
        gw[l] += gz * acts[l];
        gb[l] += gz;
        g = gz * w[l];
    }
    g
}

impl TripleScorer for NeuralScorer {
    fn row_len(&self) -> usize {
        2 * self.half()
    }

    fn score(&self, h: &[f64], r: &[f64], t: &[f64]) -> f64 {
        let mut total = 0.0;
        for c in 0..self.components {
            let (hw, hb) = self.chain(h, c);
            let (rw, rb) = self.chain(r, c);
            let (tw, tb) = self.chain(t, c);
            for (&x, &wq) in self.rule.points.iter().zip(&self.rule.weights) {
                let inner = run_chain(rw, rb, x);
                total += wq * run_chain(hw, hb, inner) * run_chain(tw, tb, x);
            }
        }
        total
    }

    fn grad_into(&self, h: &[f64], r: &[f64], t: &[f64], gh: &mut [f64], gr: &mut [f64], gt: &mut [f64]) {
        self.score_grad_into(h, r, t, gh, gr, gt);
    }

    /// One forward pass serves both outputs; the score accumulates in the
    /// same order as [`TripleScorer::score`], so the two agree bitwise.
    fn score_grad_into(
        &self,
        h: &[f64],
        r: &[f64],
        t: &[f64],
        gh: &mut [f64],
        gr: &mut [f64],
        gt: &mut [f64],
    ) -> f64 {
        gh.fill(0.0);
        gr.fill(0.0);
        gt.fill(0.0);
        let n = self.layers;
        let half = self.half();
        let mut ra = [0.0f64; MAX_LAYERS + 1];
        let mut ha = [0.0f64; MAX_LAYERS + 1];
        let mut ta = [0.0f64; MAX_LAYERS + 1];
        let mut total = 0.0;
        for c in 0..self.components {
            let (hw, hb) = self.chain(h, c);
            let (rw, rb) = self.chain(r, c);
            let (tw, tb) = self.chain(t, c);
            let span = c * n..(c + 1) * n;
            let bspan = half + c * n..half + (c + 1) * n;
            for (&x, &wq) in self.rule.points.iter().zip(&self.rule.weights) {
                let r_out = forward_record(rw, rb, x, &mut ra[..=n]);
                let h_out = forward_record(hw, hb, r_out, &mut ha[..=n]);
                let t_out = forward_record(tw, tb, x, &mut ta[..=n]);
                total += wq * h_out * t_out;

                let (gtw, gtb) = split_pair(gt, span.clone(), bspan.clone());
                backward(tw, &ta[..=n], wq * h_out, gtw, gtb);

                let (ghw, ghb) = split_pair(gh, span.clone(), bspan.clone());
                let into_h = backward(hw, &ha[..=n], wq * t_out, ghw, ghb);

                let (grw, grb) = split_pair(gr, span.clone(), bspan.clone());
                backward(rw, &ra[..=n], into_h, grw, grb);
            }
        }
        total
    }
}

fn split_pair(
    row: &mut [f64],
    a: std::ops::Range<usize>,
    b: std::ops::Range<usize>,
) -> (&mut [f64], &mut [f64]) {
    let (lo, hi) = row.split_at_mut(b.start);
    (&mut lo[a], &mut hi[..b.end - b.start])
}

pub fn fmult_score(
    h: &[f64],
    r: &[f64],
    t: &[f64],
    layers: usize,
    rule: &QuadratureRule,
    domain: &Interval,
) -> Result<f64> {
    NeuralScorer::new(h.len(), layers, rule, *domain)?.try_score(h, r, t)
}

pub fn fmult_grad(
    h: &[f64],
    r: &[f64],
    t: &[f64],
    layers: usize,
    rule: &QuadratureRule,
    domain: &Interval,
) -> Result<TripleGrad> {
    NeuralScorer::new(h.len(), layers, rule, *domain)?.try_grad(h, r, t)
}
