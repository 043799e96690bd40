//! Mini-batch training with negative sampling, binary cross-entropy, L2
//! regularization and Adam.

use std::fmt::Write as _;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::data::{sample_negatives_with, Dataset, Labeled, Triple};
use crate::error::{Error, Result};
use crate::model::{KgModel, ModelFamily, ModelSpec};
use crate::quadrature::Interval;
use crate::scoring::TripleScorer;
use crate::trig::TrigVariant;

/// Hyperparameters of one training run.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub model: ModelSpec,
    pub learning_rate: f64,
    pub epochs: usize,
    pub batch_size: usize,
    /// Corruptions drawn per positive triple.
    pub negative_ratio: usize,
    pub l2_lambda: f64,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            model: ModelSpec::default(),
            learning_rate: 0.02,
            epochs: 500,
            batch_size: 1024,
            negative_ratio: 1,
            l2_lambda: 0.0,
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::config(format!(
                "learning_rate must be positive, got {}",
                self.learning_rate
            )));
        }
        if self.epochs == 0 {
            return Err(Error::config("epochs must be at least 1"));
        }
        if self.batch_size == 0 {
            return Err(Error::config("batch_size must be at least 1"));
        }
        if self.negative_ratio == 0 {
            return Err(Error::config("negative_ratio must be at least 1"));
        }
        if !(self.l2_lambda >= 0.0 && self.l2_lambda.is_finite()) {
            return Err(Error::config(format!(
                "l2_lambda must be non-negative, got {}",
                self.l2_lambda
            )));
        }
        self.model.build().map(|_| ())
    }

    /// Applies one `key=value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
            value
                .parse()
                .map_err(|_| Error::config(format!("invalid value {value:?} for {key}")))
        }
        match key {
            "model" => self.model.family = value.parse()?,
            "dim" => self.model.dim = parse(key, value)?,
            "degree" => self.model.degree = parse(key, value)?,
            "layers" => self.model.layers = parse(key, value)?,
            "omega" => {
                let (lo, hi) = value
                    .split_once(',')
                    .ok_or_else(|| Error::config(format!("omega must be LOWER,UPPER, got {value:?}")))?;
                self.model.omega = Interval::new(parse(key, lo.trim())?, parse(key, hi.trim())?)?;
            }
            "trig_variant" => self.model.trig_variant = value.parse::<TrigVariant>()?,
            "conjugate_tail" => self.model.conjugate_tail = parse(key, value)?,
            "learning_rate" | "lr" => self.learning_rate = parse(key, value)?,
            "epochs" => self.epochs = parse(key, value)?,
            "batch_size" => self.batch_size = parse(key, value)?,
            "negative_ratio" => self.negative_ratio = parse(key, value)?,
            "l2_lambda" => self.l2_lambda = parse(key, value)?,
            "seed" => self.seed = parse(key, value)?,
            other => return Err(Error::config(format!("unknown configuration key {other:?}"))),
        }
        Ok(())
    }

    /// Applies `key=value` lines; blank lines and `#` comments are skipped.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::config(format!("line {}: expected key=value", n + 1)))?;
            self.set(k.trim(), v.trim())?;
        }
        Ok(())
    }

    /// Serializes every field as `key=value` lines accepted by [`TrainConfig::apply_text`].
    pub fn to_text(&self) -> String {
        let m = &self.model;
        let mut s = String::new();
        // f64 Display round-trips exactly.
        let _ = writeln!(s, "model={}", m.family);
        let _ = writeln!(s, "dim={}", m.dim);
        let _ = writeln!(s, "degree={}", m.degree);
        let _ = writeln!(s, "layers={}", m.layers);
        let _ = writeln!(s, "omega={},{}", m.omega.lower(), m.omega.upper());
        let _ = writeln!(s, "trig_variant={}", m.trig_variant);
        let _ = writeln!(s, "conjugate_tail={}", m.conjugate_tail);
        let _ = writeln!(s, "learning_rate={}", self.learning_rate);
        let _ = writeln!(s, "epochs={}", self.epochs);
        let _ = writeln!(s, "batch_size={}", self.batch_size);
        let _ = writeln!(s, "negative_ratio={}", self.negative_ratio);
        let _ = writeln!(s, "l2_lambda={}", self.l2_lambda);
        let _ = writeln!(s, "seed={}", self.seed);
        s
    }
}

/// Numerically stable `log(1 + e^x)`.
fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// Mean binary cross-entropy of `sigmoid(scores)` against 0/1 labels.
pub fn bce_loss(scores: &[f64], labels: &[f64]) -> Result<f64> {
    if scores.is_empty() {
        return Err(Error::Argument("bce_loss of an empty batch".into()));
    }
    if scores.len() != labels.len() {
        return Err(Error::shape(format!(
            "{} scores but {} labels",
            scores.len(),
            labels.len()
        )));
    }
    let total: f64 = scores
        .iter()
        .zip(labels)
        .map(|(&s, &y)| y * softplus(-s) + (1.0 - y) * softplus(s))
        .sum();
    Ok(total / scores.len() as f64)
}

/// Adam with bias correction over one flat parameter buffer.
#[derive(Debug, Clone, PartialEq)]
pub struct AdamState {
    pub first_moment: Vec<f64>,
    pub second_moment: Vec<f64>,
    pub step_count: u64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl AdamState {
    pub fn new(len: usize) -> Self {
        Self {
            first_moment: vec![0.0; len],
            second_moment: vec![0.0; len],
            step_count: 0,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }

    pub fn step(&mut self, params: &mut [f64], grads: &[f64], lr: f64) {
        assert_eq!(params.len(), grads.len());
        assert_eq!(params.len(), self.first_moment.len());
        self.step_count += 1;
        let t = self.step_count as i32;
        let bc1 = 1.0 - self.beta1.powi(t);
        let bc2 = 1.0 - self.beta2.powi(t);
        for (((p, &g), m), v) in params
            .iter_mut()
            .zip(grads)
            .zip(&mut self.first_moment)
            .zip(&mut self.second_moment)
        {
            *m = self.beta1 * *m + (1.0 - self.beta1) * g;
            *v = self.beta2 * *v + (1.0 - self.beta2) * g * g;
            let m_hat = *m / bc1;
            let v_hat = *v / bc2;
            *p -= lr * m_hat / (v_hat.sqrt() + self.epsilon);
        }
    }
}

/// Per-epoch training statistics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpochStats {
    /// 1-based epoch number.
    pub epoch: usize,
    pub mean_loss: f64,
    pub elapsed_seconds: f64,
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub model: KgModel,
    /// Mean batch loss per epoch.
    pub loss_history: Vec<f64>,
}

/// Loss and gradient of one labeled batch, including the L2 term.
pub struct BatchObjective<'a> {
    model: &'a KgModel,
    l2_lambda: f64,
    scratch: [Vec<f64>; 3],
    touched: Vec<bool>,
    touched_rows: Vec<usize>,
}

impl<'a> BatchObjective<'a> {
    pub fn new(model: &'a KgModel, l2_lambda: f64) -> Self {
        let d = model.dim();
        Self {
            model,
            l2_lambda,
            scratch: [vec![0.0; d], vec![0.0; d], vec![0.0; d]],
            touched: vec![false; model.num_entities() + model.num_relations()],
            touched_rows: Vec::new(),
        }
    }

    fn touch(&mut self, row: usize) {
        if !self.touched[row] {
            self.touched[row] = true;
            self.touched_rows.push(row);
        }
    }

    /// Returns the batch loss and overwrites `grad` with its gradient.
    pub fn evaluate(&mut self, batch: &[Labeled], grad: &mut [f64]) -> f64 {
        let model = self.model;
        let scorer = model.scorer();
        let d = model.dim();
        let ne = model.num_entities();
        grad.fill(0.0);
        let n = batch.len() as f64;
        let mut loss = 0.0;
        for &(t, y) in batch {
            let (h, r, tl) = (model.entity(t.head), model.relation(t.relation), model.entity(t.tail));
            let [gh, gr, gt] = &mut self.scratch;
            let s = scorer.score_grad_into(h, r, tl, gh, gr, gt);
            loss += y * softplus(-s) + (1.0 - y) * softplus(s);
            let coef = (sigmoid(s) - y) / n;
            for (offset, g) in [
                (model.entity_offset(t.head), &*gh),
                (model.relation_offset(t.relation), &*gr),
                (model.entity_offset(t.tail), &*gt),
            ] {
                for (acc, v) in grad[offset..offset + d].iter_mut().zip(g) {
                    *acc += coef * v;
                }
            }
            self.touch(t.head);
            self.touch(ne + t.relation);
            self.touch(t.tail);
        }
        loss /= n;

        let params = model.params();
        for &row in &self.touched_rows {
            let span = row * d..(row + 1) * d;
            if self.l2_lambda > 0.0 {
                for (g, &p) in grad[span.clone()].iter_mut().zip(&params[span.clone()]) {
                    loss += self.l2_lambda * p * p;
                    *g += 2.0 * self.l2_lambda * p;
                }
            }
            self.touched[row] = false;
        }
        self.touched_rows.clear();
        loss
    }
}

/// Trains a model on the dataset's training split.
pub fn train(config: &TrainConfig, dataset: &Dataset) -> Result<TrainOutcome> {
    train_with(config, dataset, |_, _| {})
}

/// Epoch-at-a-time training state: model, optimizer moments, RNG and the
/// shuffled triple order.
#[derive(Debug, Clone)]
pub struct Trainer {
    config: TrainConfig,
    model: KgModel,
    adam: AdamState,
    rng: ChaCha8Rng,
    order: Vec<Triple>,
    grad: Vec<f64>,
    labeled: Vec<Labeled>,
    epoch: usize,
}

impl Trainer {
    /// Validates `config` and initializes parameters from its seed.
    pub fn new(config: TrainConfig, train: &[Triple], num_entities: usize, num_relations: usize) -> Result<Self> {
        config.validate()?;
        if train.is_empty() {
            return Err(Error::config("training split is empty"));
        }
        if let Some(t) = train
            .iter()
            .find(|t| t.head >= num_entities || t.tail >= num_entities || t.relation >= num_relations)
        {
            return Err(Error::shape(format!("training triple {t:?} is out of vocabulary range")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let model = KgModel::init(config.model.clone(), num_entities, num_relations, &mut rng)?;
        let n = model.params().len();
        Ok(Self {
            config,
            model,
            adam: AdamState::new(n),
            rng,
            order: train.to_vec(),
            grad: vec![0.0; n],
            labeled: Vec::new(),
            epoch: 0,
        })
    }

    pub fn config(&self) -> &TrainConfig {
        &self.config
    }

    pub fn model(&self) -> &KgModel {
        &self.model
    }

    pub fn into_model(self) -> KgModel {
        self.model
    }

    /// Epochs completed so far.
    pub fn epoch(&self) -> usize {
        self.epoch
    }

    /// Runs one shuffled pass over the training triples and returns the
    /// mean batch loss.
    pub fn run_epoch(&mut self) -> Result<f64> {
        let cfg = &self.config;
        let ne = self.model.num_entities();
        self.order.shuffle(&mut self.rng);
        let mut total = 0.0;
        let mut batches = 0usize;
        for batch in self.order.chunks(cfg.batch_size) {
            self.labeled.clear();
            sample_negatives_with(batch, cfg.negative_ratio, ne, &mut self.rng, &mut self.labeled)?;
            let loss = BatchObjective::new(&self.model, cfg.l2_lambda).evaluate(&self.labeled, &mut self.grad);
            if !loss.is_finite() {
                return Err(Error::Argument(format!(
                    "non-finite training loss at epoch {}",
                    self.epoch + 1
                )));
            }
            self.adam.step(self.model.params_mut(), &self.grad, cfg.learning_rate);
            total += loss;
            batches += 1;
        }
        self.epoch += 1;
        Ok(total / batches as f64)
    }
}

/// Like [`train`], calling `observer` after every epoch.
pub fn train_with<F>(config: &TrainConfig, dataset: &Dataset, mut observer: F) -> Result<TrainOutcome>
where
    F: FnMut(&EpochStats, &KgModel),
{
    let mut trainer = Trainer::new(
        config.clone(),
        dataset.store.train(),
        dataset.vocab.num_entities(),
        dataset.vocab.num_relations(),
    )?;
    let mut history = Vec::with_capacity(config.epochs);
    let start = Instant::now();
    for epoch in 1..=config.epochs {
        let mean_loss = trainer.run_epoch()?;
        let stats = EpochStats {
            epoch,
            mean_loss,
            elapsed_seconds: start.elapsed().as_secs_f64(),
        };
        history.push(mean_loss);
        observer(&stats, trainer.model());
    }
    Ok(TrainOutcome {
        model: trainer.into_model(),
        loss_history: history,
    })
}

/// Maximum relative error between analytic score gradients and central
/// finite differences (step `1e-5`) over 20 random triples.
///
/// Parameters with `|analytic| ≤ 1e-8` are skipped.
pub fn gradient_check(spec: &ModelSpec, seed: u64) -> Result<f64> {
    const TRIPLES: usize = 20;
    const STEP: f64 = 1e-5;
    let scorer = spec.build()?;
    let d = spec.dim;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    let mut grads = [vec![0.0; d], vec![0.0; d], vec![0.0; d]];
    for _ in 0..TRIPLES {
        let mut rows: [Vec<f64>; 3] = std::array::from_fn(|_| {
            (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect()
        });
        let [gh, gr, gt] = &mut grads;
        scorer.grad_into(&rows[0], &rows[1], &rows[2], gh, gr, gt);
        for slot in 0..3 {
            for i in 0..d {
                let analytic = grads[slot][i];
                if analytic.abs() <= 1e-8 {
                    continue;
                }
                let orig = rows[slot][i];
                rows[slot][i] = orig + STEP;
                let up = scorer.score(&rows[0], &rows[1], &rows[2]);
                rows[slot][i] = orig - STEP;
                let down = scorer.score(&rows[0], &rows[1], &rows[2]);
                rows[slot][i] = orig;
                let fd = (up - down) / (2.0 * STEP);
                worst = worst.max((fd - analytic).abs() / analytic.abs());
            }
        }
    }
    Ok(worst)
}

/// Default gradient-check architecture for a family.
pub fn gradient_check_spec(family: ModelFamily) -> ModelSpec {
    match family {
        ModelFamily::Poly => ModelSpec::new(family, 8).with_degree(3),
        ModelFamily::Trig => ModelSpec::new(family, 8).with_degree(1),
        ModelFamily::Neural => ModelSpec::new(family, 8).with_layers(2),
        ModelFamily::DistMult | ModelFamily::ComplEx => ModelSpec::new(family, 8),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::dataset_from_labels;

    fn tiny() -> Dataset {
        let rows = |v: &[(&str, &str, &str)]| -> Vec<(String, String, String)> {
            v.iter()
                .map(|(a, b, c)| (a.to_string(), b.to_string(), c.to_string()))
                .collect()
        };
        dataset_from_labels(
            &rows(&[("a", "p", "b")]),
            &rows(&[("b", "p", "c")]),
            &rows(&[("c", "q", "a")]),
        )
        .unwrap()
    }

    fn config_for(family: ModelFamily) -> TrainConfig {
        let model = match family {
            ModelFamily::Poly | ModelFamily::Trig => ModelSpec::new(family, 8).with_degree(1),
            _ => ModelSpec::new(family, 8),
        };
        TrainConfig {
            model,
            epochs: 1,
            learning_rate: 1e-3,
            ..Default::default()
        }
    }

    #[test]
    fn bce_examples() {
        let ln2 = std::f64::consts::LN_2;
        assert!((bce_loss(&[0.0], &[1.0]).unwrap() - ln2).abs() < 1e-15);
        assert!((bce_loss(&[0.0], &[0.0]).unwrap() - ln2).abs() < 1e-15);
        let tiny = bce_loss(&[100.0, -100.0], &[1.0, 0.0]).unwrap();
        // log(1 + e^-100) = 3.720075976020836e-44
        assert!(tiny.is_finite() && (tiny - 3.720_075_976_020_836e-44).abs() < 1e-57);
        let huge = bce_loss(&[-1000.0], &[1.0]).unwrap();
        assert_eq!(huge, 1000.0);
        assert!(bce_loss(&[], &[]).is_err());
        assert!(bce_loss(&[0.0], &[1.0, 0.0]).is_err());
    }

    #[test]
    fn adam_zero_gradient_is_a_no_op() {
        let mut adam = AdamState::new(3);
        let mut p = vec![1.0, -2.0, 0.5];
        adam.step(&mut p, &[0.0; 3], 0.1);
        assert_eq!(p, vec![1.0, -2.0, 0.5]);
        assert!(adam.first_moment.iter().chain(&adam.second_moment).all(|&m| m == 0.0));
        assert_eq!(adam.step_count, 1);
    }

    #[test]
    fn adam_first_step_moves_by_lr() {
        let mut adam = AdamState::new(2);
        let mut p = vec![0.0, 0.0];
        adam.step(&mut p, &[3.0, -0.5], 0.01);
        // Bias-corrected first step is lr * g / (|g| + eps).
        assert!((p[0] + 0.01).abs() < 1e-9);
        assert!((p[1] - 0.01).abs() < 1e-9);
    }

    #[test]
    fn pure_l2_decay_shrinks_parameters() {
        // With score gradients absent, the objective is λ‖θ‖² on touched rows.
        let spec = ModelSpec::new(ModelFamily::DistMult, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut model = KgModel::init(spec, 2, 1, &mut rng).unwrap();
        let mut adam = AdamState::new(model.params().len());
        let norm = |m: &KgModel| m.params().iter().map(|p| p * p).sum::<f64>();
        for _ in 0..5 {
            let before = norm(&model);
            let params = model.params().to_vec();
            let grad: Vec<f64> = params.iter().map(|p| 2.0 * p).collect();
            adam.step(model.params_mut(), &grad, 1e-3);
            assert!(norm(&model) < before);
        }
    }

    #[test]
    fn l2_term_covers_touched_rows_only() {
        let spec = ModelSpec::new(ModelFamily::DistMult, 2);
        let model = KgModel::from_tables(spec, vec![1.0, 1.0, 2.0, 2.0, 3.0, 3.0], vec![0.0, 0.0]).unwrap();
        let mut grad = vec![0.0; model.params().len()];
        let batch = [(Triple::new(0, 0, 1), 1.0)];
        let loss = BatchObjective::new(&model, 0.5).evaluate(&batch, &mut grad);
        // zero relation → score 0 → ln 2; L2 over entities 0, 1 and relation 0.
        let want = std::f64::consts::LN_2 + 0.5 * (1.0 + 1.0 + 4.0 + 4.0);
        assert!((loss - want).abs() < 1e-12);
        assert_eq!(&grad[4..6], &[0.0, 0.0], "entity 2 untouched");
        assert_eq!(grad[0], 1.0);
    }

    #[test]
    fn batch_gradient_matches_finite_differences() {
        let batch: Vec<Labeled> = vec![
            (Triple::new(0, 0, 1), 1.0),
            (Triple::new(2, 1, 2), 1.0),
            (Triple::new(1, 0, 0), 0.0),
            (Triple::new(0, 1, 2), 0.0),
        ];
        for family in ModelFamily::ALL {
            let spec = config_for(family).model;
            let mut rng = ChaCha8Rng::seed_from_u64(21);
            let mut model = KgModel::init(spec, 3, 2, &mut rng).unwrap();
            let mut grad = vec![0.0; model.params().len()];
            BatchObjective::new(&model, 0.01).evaluate(&batch, &mut grad);
            let mut scratch = grad.clone();
            for (i, &g) in grad.iter().enumerate() {
                let orig = model.params()[i];
                model.params_mut()[i] = orig + 1e-6;
                let up = BatchObjective::new(&model, 0.01).evaluate(&batch, &mut scratch);
                model.params_mut()[i] = orig - 1e-6;
                let down = BatchObjective::new(&model, 0.01).evaluate(&batch, &mut scratch);
                model.params_mut()[i] = orig;
                let fd = (up - down) / 2e-6;
                assert!((fd - g).abs() < 1e-7, "{family} param {i}: fd {fd} vs {g}");
            }
        }
    }

    #[test]
    fn one_step_decreases_loss_for_every_family() {
        let ds = tiny();
        for family in ModelFamily::ALL {
            let cfg = config_for(family);
            // Recreate the run's initial state to evaluate the loss before the step.
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let init = KgModel::init(cfg.model.clone(), 3, 2, &mut rng).unwrap();
            let mut order = ds.store.train().to_vec();
            order.shuffle(&mut rng);
            let mut batch = Vec::new();
            sample_negatives_with(&order, 1, 3, &mut rng, &mut batch).unwrap();
            let mut g = vec![0.0; init.params().len()];
            let before = BatchObjective::new(&init, 0.0).evaluate(&batch, &mut g);

            let out = train(&cfg, &ds).unwrap();
            assert_eq!(out.loss_history.len(), 1);
            assert_eq!(out.loss_history[0], before, "{family}");
            let after = BatchObjective::new(&out.model, 0.0).evaluate(&batch, &mut g);
            assert!(after < before, "{family}: {after} >= {before}");
        }
    }

    #[test]
    fn training_is_deterministic() {
        let ds = tiny();
        let mut cfg = config_for(ModelFamily::Neural);
        cfg.epochs = 5;
        cfg.seed = 9;
        let a = train(&cfg, &ds).unwrap();
        let b = train(&cfg, &ds).unwrap();
        assert_eq!(a.model.params(), b.model.params());
        assert_eq!(a.loss_history, b.loss_history);
    }

    #[test]
    fn invalid_config_rejected_before_training() {
        let ds = tiny();
        let mut cfg = config_for(ModelFamily::Poly);
        cfg.model.degree = 4;
        assert!(matches!(train(&cfg, &ds), Err(Error::Config(_))));
        let mut cfg = config_for(ModelFamily::Neural);
        cfg.learning_rate = 0.0;
        assert!(train(&cfg, &ds).is_err());
        cfg.learning_rate = 0.1;
        cfg.batch_size = 0;
        assert!(train(&cfg, &ds).is_err());
    }

    #[test]
    fn config_text_round_trip() {
        let mut cfg = TrainConfig::default();
        cfg.apply_text("model = trig\n# comment\ndim=12\ndegree=2\nomega=-0.5,1.25\ntrig_variant=full\nlr=0.1\nseed=77\n")
            .unwrap();
        assert_eq!(cfg.model.family, ModelFamily::Trig);
        assert_eq!(cfg.model.omega, Interval::new(-0.5, 1.25).unwrap());
        let mut back = TrainConfig::default();
        back.apply_text(&cfg.to_text()).unwrap();
        assert_eq!(back, cfg);
        assert!(cfg.set("nope", "1").is_err());
        assert!(cfg.set("dim", "x").is_err());
    }

    #[test]
    fn gradient_check_thresholds() {
        assert!(gradient_check(&gradient_check_spec(ModelFamily::Poly), 1).unwrap() < 1e-6);
        for v in [TrigVariant::Paper, TrigVariant::Full] {
            let spec = gradient_check_spec(ModelFamily::Trig).with_variant(v);
            assert!(gradient_check(&spec, 2).unwrap() < 1e-6);
        }
        let nn = gradient_check_spec(ModelFamily::Neural);
        assert_eq!(nn.build().unwrap().row_len(), 8);
        assert!(gradient_check(&nn, 3).unwrap() < 1e-4);
    }
}
