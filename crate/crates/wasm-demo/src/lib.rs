//! Browser playground: train a toy graph, plot entity functions, and compare
//! `score(h, r, t)` with `score(t, r, h)`.

use fmult::data::{dataset_from_labels, Dataset, Split};
use fmult::eval::evaluate;
use fmult::model::{sample_row, ModelFamily, ModelSpec};
use fmult::train::{TrainConfig, Trainer};
use fmult::TripleScorer;
use wasm_bindgen::prelude::*;

const REGIONS: [&str; 3] = ["north", "south", "east"];
const COUNTRIES: [&str; 12] = [
    "arden", "brill", "corva", "dunmar", "elsin", "farrow", "galt", "hessa", "iver", "jarn", "kell", "lorn",
];

/// Twelve countries in three regions. `neighbor_of` links each country to the
/// next one in its region (both directions), `located_in` maps countries to
/// regions. One `located_in` fact per region is held out for testing.
pub fn toy_graph() -> Dataset {
    let t = |h: &str, r: &str, t: &str| (h.to_string(), r.to_string(), t.to_string());
    let mut train = Vec::new();
    let mut test = Vec::new();
    for (g, region) in REGIONS.iter().enumerate() {
        let members = &COUNTRIES[4 * g..4 * g + 4];
        for (i, c) in members.iter().enumerate() {
            let next = members[(i + 1) % members.len()];
            train.push(t(c, "neighbor_of", next));
            train.push(t(next, "neighbor_of", c));
            if i == 3 {
                test.push(t(c, "located_in", region));
            } else {
                train.push(t(c, "located_in", region));
            }
        }
    }
    dataset_from_labels(&train, &[], &test).expect("toy graph is well formed")
}

fn spec_for(family: ModelFamily, dim: usize, size: usize) -> ModelSpec {
    match family {
        ModelFamily::Poly | ModelFamily::Trig => ModelSpec::new(family, dim).with_degree(size),
        ModelFamily::Neural => ModelSpec::new(family, dim).with_layers(size.max(1)),
        _ => ModelSpec::new(family, dim),
    }
}

#[wasm_bindgen]
pub struct Playground {
    dataset: Dataset,
    trainer: Trainer,
}

impl Playground {
    /// `size` is the degree for poly/trig and the layer count for nn.
    pub fn try_new(family: &str, dim: usize, size: usize, seed: u64) -> fmult::Result<Playground> {
        let dataset = toy_graph();
        let config = TrainConfig {
            model: spec_for(family.parse()?, dim, size),
            learning_rate: 0.05,
            batch_size: 16,
            negative_ratio: 2,
            seed,
            ..Default::default()
        };
        let trainer = Trainer::new(
            config,
            dataset.store.train(),
            dataset.vocab.num_entities(),
            dataset.vocab.num_relations(),
        )?;
        Ok(Playground { dataset, trainer })
    }

    pub fn try_train(&mut self, epochs: usize) -> fmult::Result<f64> {
        let mut loss = f64::NAN;
        for _ in 0..epochs {
            loss = self.trainer.run_epoch()?;
        }
        Ok(loss)
    }

    pub fn try_score_pair(&self, head: &str, relation: &str, tail: &str) -> fmult::Result<Vec<f64>> {
        let vocab = &self.dataset.vocab;
        let unknown = |kind: &str, l: &str| fmult::Error::Argument(format!("unknown {kind} {l:?}"));
        let h = vocab.entity_id(head).ok_or_else(|| unknown("entity", head))?;
        let r = vocab.relation_id(relation).ok_or_else(|| unknown("relation", relation))?;
        let t = vocab.entity_id(tail).ok_or_else(|| unknown("entity", tail))?;
        let m = self.trainer.model();
        let s = m.scorer();
        Ok(vec![
            s.score(m.entity(h), m.relation(r), m.entity(t)),
            s.score(m.entity(t), m.relation(r), m.entity(h)),
        ])
    }

    pub fn try_curves(&self, entity: &str, grid_points: usize) -> fmult::Result<Vec<f64>> {
        if grid_points < 2 {
            return Err(fmult::Error::Argument("grid_points must be at least 2".into()));
        }
        let id = self
            .dataset
            .vocab
            .entity_id(entity)
            .ok_or_else(|| fmult::Error::Argument(format!("unknown entity {entity:?}")))?;
        let m = self.trainer.model();
        let grid = m.spec().omega.grid(grid_points);
        let samples: Vec<Vec<f64>> = grid.iter().map(|&x| sample_row(m.scorer(), m.entity(id), x)).collect();
        let comps = samples[0].len();
        Ok((0..comps).flat_map(|c| samples.iter().map(move |s| s[c])).collect())
    }
}

fn js(e: fmult::Error) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen]
impl Playground {
    /// Family is one of poly, trig, nn, distmult, complex.
    #[wasm_bindgen(constructor)]
    pub fn new(family: &str, dim: usize, size: usize, seed: u32) -> Result<Playground, JsError> {
        Playground::try_new(family, dim, size, seed.into()).map_err(js)
    }

    /// Runs `epochs` training epochs and returns the last mean loss.
    pub fn train(&mut self, epochs: usize) -> Result<f64, JsError> {
        self.try_train(epochs).map_err(js)
    }

    pub fn epoch(&self) -> usize {
        self.trainer.epoch()
    }

    /// Filtered MRR on the held-out `located_in` facts.
    pub fn test_mrr(&self) -> Result<f64, JsError> {
        evaluate(self.trainer.model(), &self.dataset.store, Split::Test)
            .map(|r| r.mrr)
            .map_err(js)
    }

    /// `[score(h, r, t), score(t, r, h)]`.
    #[wasm_bindgen(js_name = scorePair)]
    pub fn score_pair(&self, head: &str, relation: &str, tail: &str) -> Result<Vec<f64>, JsError> {
        self.try_score_pair(head, relation, tail).map_err(js)
    }

    /// Component-major samples of an entity's functions on a uniform grid
    /// over Ω; trig components contribute real then imaginary parts.
    pub fn curves(&self, entity: &str, grid_points: usize) -> Result<Vec<f64>, JsError> {
        self.try_curves(entity, grid_points).map_err(js)
    }

    #[wasm_bindgen(js_name = omegaBounds)]
    pub fn omega_bounds(&self) -> Vec<f64> {
        let o = self.trainer.model().spec().omega;
        vec![o.lower(), o.upper()]
    }

    /// Entity labels, newline separated.
    pub fn entities(&self) -> String {
        self.dataset.vocab.entities().join("\n")
    }

    pub fn relations(&self) -> String {
        self.dataset.vocab.relations().join("\n")
    }
}
