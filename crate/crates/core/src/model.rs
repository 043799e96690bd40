//! Model families, their configuration, and parameter tables.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::baseline::{ComplEx, DistMult};
use crate::data::Triple;
use crate::error::{Error, Result};
use crate::neural::NeuralScorer;
use crate::poly::PolyScorer;
use crate::quadrature::{legendre5, Interval};
use crate::scoring::TripleScorer;
use crate::trig::{TrigScorer, TrigVariant};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelFamily {
    /// Polynomial embeddings, exact triple integral.
    Poly,
    /// Complex exponential series.
    Trig,
    /// Composed scalar tanh networks.
    Neural,
    DistMult,
    ComplEx,
}

impl ModelFamily {
    pub const ALL: [ModelFamily; 5] = [
        ModelFamily::Poly,
        ModelFamily::Trig,
        ModelFamily::Neural,
        ModelFamily::DistMult,
        ModelFamily::ComplEx,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ModelFamily::Poly => "poly",
            ModelFamily::Trig => "trig",
            ModelFamily::Neural => "nn",
            ModelFamily::DistMult => "distmult",
            ModelFamily::ComplEx => "complex",
        }
    }
}

impl fmt::Display for ModelFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ModelFamily::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| {
                Error::config(format!(
                    "unknown model family {s:?} (expected poly, trig, nn, distmult or complex)"
                ))
            })
    }
}

/// Architecture of a model: everything needed to interpret a parameter row.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    pub family: ModelFamily,
    pub dim: usize,
    /// Polynomial / series degree (poly and trig).
    pub degree: usize,
    /// Layers per chain (nn).
    pub layers: usize,
    pub omega: Interval,
    pub trig_variant: TrigVariant,
    /// Conjugate the tail in ComplEx scoring.
    pub conjugate_tail: bool,
}

impl Default for ModelSpec {
    fn default() -> Self {
        Self {
            family: ModelFamily::Neural,
            dim: 32,
            degree: 0,
            layers: 1,
            omega: Interval::unit(),
            trig_variant: TrigVariant::Paper,
            conjugate_tail: false,
        }
    }
}

impl ModelSpec {
    pub fn new(family: ModelFamily, dim: usize) -> Self {
        Self {
            family,
            dim,
            ..Default::default()
        }
    }

    pub fn with_degree(mut self, degree: usize) -> Self {
        self.degree = degree;
        self
    }

    pub fn with_layers(mut self, layers: usize) -> Self {
        self.layers = layers;
        self
    }

    pub fn with_variant(mut self, variant: TrigVariant) -> Self {
        self.trig_variant = variant;
        self
    }

    /// Degree for series families, layers for nn, 0 otherwise.
    pub fn degree_or_layers(&self) -> usize {
        match self.family {
            ModelFamily::Poly | ModelFamily::Trig => self.degree,
            ModelFamily::Neural => self.layers,
            ModelFamily::DistMult | ModelFamily::ComplEx => 0,
        }
    }

    pub fn build(&self) -> Result<Scorer> {
        Ok(match self.family {
            ModelFamily::Poly => Scorer::Poly(PolyScorer::new(self.dim, self.degree, self.omega)?),
            ModelFamily::Trig => Scorer::Trig(TrigScorer::new(
                self.dim,
                self.degree,
                self.omega,
                self.trig_variant,
            )?),
            ModelFamily::Neural => Scorer::Neural(NeuralScorer::new(
                self.dim,
                self.layers,
                &legendre5(),
                self.omega,
            )?),
            ModelFamily::DistMult => Scorer::DistMult(DistMult::new(self.dim)?),
            ModelFamily::ComplEx => Scorer::ComplEx(ComplEx::new(self.dim, self.conjugate_tail)?),
        })
    }

    /// Draws one parameter row with the family's initializer.
    fn init_row<R: Rng + ?Sized>(&self, rng: &mut R, row: &mut [f64]) {
        match self.family {
            ModelFamily::Neural => {
                let half = row.len() / 2;
                for w in &mut row[..half] {
                    *w = rng.gen_range(-1.0..=1.0);
                }
                for b in &mut row[half..] {
                    *b = rng.gen_range(-0.5..=0.5);
                }
            }
            _ => {
                let s = (6.0 / self.dim as f64).sqrt();
                for v in row {
                    *v = rng.gen_range(-s..=s);
                }
            }
        }
    }
}

/// Dispatch over the concrete scorers.
#[derive(Debug, Clone, PartialEq)]
pub enum Scorer {
    Poly(PolyScorer),
    Trig(TrigScorer),
    Neural(NeuralScorer),
    DistMult(DistMult),
    ComplEx(ComplEx),
}

macro_rules! dispatch {
    ($self:expr, $s:ident => $body:expr) => {
        match $self {
            Scorer::Poly($s) => $body,
            Scorer::Trig($s) => $body,
            Scorer::Neural($s) => $body,
            Scorer::DistMult($s) => $body,
            Scorer::ComplEx($s) => $body,
        }
    };
}

impl TripleScorer for Scorer {
    fn row_len(&self) -> usize {
        dispatch!(self, s => s.row_len())
    }

    fn score(&self, h: &[f64], r: &[f64], t: &[f64]) -> f64 {
        dispatch!(self, s => s.score(h, r, t))
    }

    fn grad_into(&self, h: &[f64], r: &[f64], t: &[f64], gh: &mut [f64], gr: &mut [f64], gt: &mut [f64]) {
        dispatch!(self, s => s.grad_into(h, r, t, gh, gr, gt))
    }

    fn score_grad_into(
        &self,
        h: &[f64],
        r: &[f64],
        t: &[f64],
        gh: &mut [f64],
        gr: &mut [f64],
        gt: &mut [f64],
    ) -> f64 {
        dispatch!(self, s => s.score_grad_into(h, r, t, gh, gr, gt))
    }

    fn score_tails(&self, h: &[f64], r: &[f64], entities: &[f64], out: &mut [f64]) {
        dispatch!(self, s => s.score_tails(h, r, entities, out))
    }

    fn score_heads(&self, r: &[f64], t: &[f64], entities: &[f64], out: &mut [f64]) {
        dispatch!(self, s => s.score_heads(r, t, entities, out))
    }
}

/// A scorer plus entity and relation parameter tables.
///
/// Parameters live in one flat buffer: all entity rows, then all relation
/// rows, each `spec.dim` long.
#[derive(Debug, Clone, PartialEq)]
pub struct KgModel {
    spec: ModelSpec,
    scorer: Scorer,
    num_entities: usize,
    num_relations: usize,
    params: Vec<f64>,
}

impl KgModel {
    pub fn init<R: Rng + ?Sized>(
        spec: ModelSpec,
        num_entities: usize,
        num_relations: usize,
        rng: &mut R,
    ) -> Result<Self> {
        let mut model = Self::zeros(spec, num_entities, num_relations)?;
        let dim = model.spec.dim;
        for row in model.params.chunks_exact_mut(dim) {
            model.spec.init_row(rng, row);
        }
        Ok(model)
    }

    pub fn zeros(spec: ModelSpec, num_entities: usize, num_relations: usize) -> Result<Self> {
        let scorer = spec.build()?;
        debug_assert_eq!(scorer.row_len(), spec.dim);
        let len = (num_entities + num_relations) * spec.dim;
        Ok(Self {
            spec,
            scorer,
            num_entities,
            num_relations,
            params: vec![0.0; len],
        })
    }

    /// Rebuilds a model from stored tables.
    pub fn from_tables(spec: ModelSpec, entities: Vec<f64>, relations: Vec<f64>) -> Result<Self> {
        let dim = spec.dim;
        if dim == 0 || !entities.len().is_multiple_of(dim) || !relations.len().is_multiple_of(dim) {
            return Err(Error::shape(format!(
                "parameter tables ({} and {} values) are not multiples of dim={dim}",
                entities.len(),
                relations.len()
            )));
        }
        if entities.iter().chain(&relations).any(|v| !v.is_finite()) {
            return Err(Error::Argument("parameter tables contain non-finite values".into()));
        }
        let mut model = Self::zeros(spec, entities.len() / dim, relations.len() / dim)?;
        let split = entities.len();
        model.params[..split].copy_from_slice(&entities);
        model.params[split..].copy_from_slice(&relations);
        Ok(model)
    }

    pub fn spec(&self) -> &ModelSpec {
        &self.spec
    }

    pub fn scorer(&self) -> &Scorer {
        &self.scorer
    }

    pub fn num_entities(&self) -> usize {
        self.num_entities
    }

    pub fn num_relations(&self) -> usize {
        self.num_relations
    }

    pub fn dim(&self) -> usize {
        self.spec.dim
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut [f64] {
        &mut self.params
    }

    pub fn entity_table(&self) -> &[f64] {
        &self.params[..self.num_entities * self.spec.dim]
    }

    pub fn relation_table(&self) -> &[f64] {
        &self.params[self.num_entities * self.spec.dim..]
    }

    pub fn entity(&self, e: usize) -> &[f64] {
        let d = self.spec.dim;
        &self.params[e * d..(e + 1) * d]
    }

    pub fn relation(&self, r: usize) -> &[f64] {
        let d = self.spec.dim;
        let base = self.num_entities * d;
        &self.params[base + r * d..base + (r + 1) * d]
    }

    /// Offset of an entity row in [`KgModel::params`].
    pub fn entity_offset(&self, e: usize) -> usize {
        e * self.spec.dim
    }

    pub fn relation_offset(&self, r: usize) -> usize {
        (self.num_entities + r) * self.spec.dim
    }

    pub fn score(&self, t: Triple) -> f64 {
        self.scorer
            .score(self.entity(t.head), self.relation(t.relation), self.entity(t.tail))
    }

    /// Scores `(head, relation, e)` for every entity `e`.
    pub fn score_all_tails(&self, head: usize, relation: usize, out: &mut [f64]) {
        self.scorer
            .score_tails(self.entity(head), self.relation(relation), self.entity_table(), out);
    }

    /// Scores `(e, relation, tail)` for every entity `e`.
    pub fn score_all_heads(&self, relation: usize, tail: usize, out: &mut [f64]) {
        self.scorer
            .score_heads(self.relation(relation), self.entity(tail), self.entity_table(), out);
    }

    /// Per-component function values of an entity at `x`. Trig components
    /// contribute their real part then their imaginary part.
    pub fn sample_entity(&self, e: usize, x: f64) -> Vec<f64> {
        sample_row(&self.scorer, self.entity(e), x)
    }
}

/// Per-component function values of a row. Vector baselines return their
/// coordinates, i.e. constant functions.
pub fn sample_row(scorer: &Scorer, row: &[f64], x: f64) -> Vec<f64> {
    match scorer {
        Scorer::Poly(p) => p.eval(row, x),
        Scorer::Neural(n) => n.eval(row, x),
        Scorer::Trig(t) => t.eval(row, x).iter().flat_map(|z| [z.re, z.im]).collect(),
        Scorer::DistMult(_) | Scorer::ComplEx(_) => row.to_vec(),
    }
}
