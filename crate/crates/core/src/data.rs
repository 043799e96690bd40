//! Triple files, vocabularies, filtered-candidate indexes and negative sampling.

use std::collections::{HashMap, HashSet};
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Dense label ↔ index maps for entities and relations.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Vocabulary {
    entity_to_id: HashMap<String, usize>,
    id_to_entity: Vec<String>,
    relation_to_id: HashMap<String, usize>,
    id_to_relation: Vec<String>,
}

impl Vocabulary {
    /// Builds a vocabulary from ordered label lists. Labels must be unique.
    pub fn from_labels(entities: Vec<String>, relations: Vec<String>) -> Result<Self> {
        let mut vocab = Vocabulary::default();
        for e in entities {
            if vocab.entity_to_id.contains_key(&e) {
                return Err(Error::Argument(format!("duplicate entity label {e:?}")));
            }
            vocab.intern_entity(&e);
        }
        for r in relations {
            if vocab.relation_to_id.contains_key(&r) {
                return Err(Error::Argument(format!("duplicate relation label {r:?}")));
            }
            vocab.intern_relation(&r);
        }
        Ok(vocab)
    }

    fn intern_entity(&mut self, label: &str) -> usize {
        if let Some(&id) = self.entity_to_id.get(label) {
            return id;
        }
        let id = self.id_to_entity.len();
        self.id_to_entity.push(label.to_owned());
        self.entity_to_id.insert(label.to_owned(), id);
        id
    }

    fn intern_relation(&mut self, label: &str) -> usize {
        if let Some(&id) = self.relation_to_id.get(label) {
            return id;
        }
        let id = self.id_to_relation.len();
        self.id_to_relation.push(label.to_owned());
        self.relation_to_id.insert(label.to_owned(), id);
        id
    }

    pub fn num_entities(&self) -> usize {
        self.id_to_entity.len()
    }

    pub fn num_relations(&self) -> usize {
        self.id_to_relation.len()
    }

    pub fn entity_id(&self, label: &str) -> Option<usize> {
        self.entity_to_id.get(label).copied()
    }

    pub fn relation_id(&self, label: &str) -> Option<usize> {
        self.relation_to_id.get(label).copied()
    }

    pub fn entity_label(&self, id: usize) -> Option<&str> {
        self.id_to_entity.get(id).map(String::as_str)
    }

    pub fn relation_label(&self, id: usize) -> Option<&str> {
        self.id_to_relation.get(id).map(String::as_str)
    }

    pub fn entities(&self) -> &[String] {
        &self.id_to_entity
    }

    pub fn relations(&self) -> &[String] {
        &self.id_to_relation
    }
}

/// A fact as (head entity, relation, tail entity) indexes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    pub head: usize,
    pub relation: usize,
    pub tail: usize,
}

impl Triple {
    pub const fn new(head: usize, relation: usize, tail: usize) -> Self {
        Self {
            head,
            relation,
            tail,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Split {
    Train,
    Valid,
    Test,
}

impl Split {
    pub const ALL: [Split; 3] = [Split::Train, Split::Valid, Split::Test];

    pub fn name(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Valid => "valid",
            Split::Test => "test",
        }
    }
}

/// Train/valid/test triples plus filter indexes built over all three splits.
#[derive(Debug, Clone, Default)]
pub struct TripleStore {
    train: Vec<Triple>,
    valid: Vec<Triple>,
    test: Vec<Triple>,
    hr_to_tails: HashMap<(usize, usize), HashSet<usize>>,
    rt_to_heads: HashMap<(usize, usize), HashSet<usize>>,
}

static EMPTY: std::sync::OnceLock<HashSet<usize>> = std::sync::OnceLock::new();

impl TripleStore {
    /// Builds a store from index triples. Duplicates within a split are dropped.
    pub fn new(train: Vec<Triple>, valid: Vec<Triple>, test: Vec<Triple>) -> Self {
        let mut store = TripleStore {
            train: dedup(train),
            valid: dedup(valid),
            test: dedup(test),
            ..Default::default()
        };
        let all: Vec<Triple> = store.all().copied().collect();
        for t in all {
            store
                .hr_to_tails
                .entry((t.head, t.relation))
                .or_default()
                .insert(t.tail);
            store
                .rt_to_heads
                .entry((t.relation, t.tail))
                .or_default()
                .insert(t.head);
        }
        store
    }

    pub fn split(&self, split: Split) -> &[Triple] {
        match split {
            Split::Train => &self.train,
            Split::Valid => &self.valid,
            Split::Test => &self.test,
        }
    }

    pub fn train(&self) -> &[Triple] {
        &self.train
    }

    pub fn valid(&self) -> &[Triple] {
        &self.valid
    }

    pub fn test(&self) -> &[Triple] {
        &self.test
    }

    pub fn all(&self) -> impl Iterator<Item = &Triple> {
        self.train.iter().chain(&self.valid).chain(&self.test)
    }

    /// Every tail `t` such that `(head, relation, t)` occurs in any split.
    pub fn filtered_tails(&self, head: usize, relation: usize) -> &HashSet<usize> {
        self.hr_to_tails
            .get(&(head, relation))
            .unwrap_or_else(|| EMPTY.get_or_init(HashSet::new))
    }

    /// Every head `h` such that `(h, relation, tail)` occurs in any split.
    pub fn filtered_heads(&self, relation: usize, tail: usize) -> &HashSet<usize> {
        self.rt_to_heads
            .get(&(relation, tail))
            .unwrap_or_else(|| EMPTY.get_or_init(HashSet::new))
    }
}

fn dedup(triples: Vec<Triple>) -> Vec<Triple> {
    let mut seen = HashSet::with_capacity(triples.len());
    triples.into_iter().filter(|t| seen.insert(*t)).collect()
}

/// A loaded benchmark: vocabulary plus index triples.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub vocab: Vocabulary,
    pub store: TripleStore,
}

type LabelTriple = (String, String, String);

fn parse_triples(text: &str, path: &Path) -> Result<Vec<LabelTriple>> {
    let mut out = Vec::new();
    for (lineno, raw) in text.split('\n').enumerate() {
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line: lineno + 1,
                message: format!(
                    "expected 3 tab-separated fields, found {}",
                    fields.len()
                ),
            });
        }
        out.push((
            fields[0].to_owned(),
            fields[1].to_owned(),
            fields[2].to_owned(),
        ));
    }
    Ok(out)
}

fn read_split(path: &Path) -> Result<Vec<LabelTriple>> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_triples(&text, path)
}

/// Builds a dataset from in-memory label triples.
pub fn dataset_from_labels(
    train: &[LabelTriple],
    valid: &[LabelTriple],
    test: &[LabelTriple],
) -> Result<Dataset> {
    if train.is_empty() {
        return Err(Error::config("training split is empty"));
    }
    let mut vocab = Vocabulary::default();
    let mut index = |rows: &[LabelTriple]| -> Vec<Triple> {
        rows.iter()
            .map(|(h, r, t)| {
                let h = vocab.intern_entity(h);
                let r = vocab.intern_relation(r);
                let t = vocab.intern_entity(t);
                Triple::new(h, r, t)
            })
            .collect()
    };
    let train = index(train);
    let valid = index(valid);
    let test = index(test);
    Ok(Dataset {
        vocab,
        store: TripleStore::new(train, valid, test),
    })
}

/// Loads three tab-separated triple files into a shared vocabulary.
pub fn load_dataset(train_path: &Path, valid_path: &Path, test_path: &Path) -> Result<Dataset> {
    let train = read_split(train_path)?;
    let valid = read_split(valid_path)?;
    let test = read_split(test_path)?;
    if train.is_empty() {
        return Err(Error::config(format!(
            "training split {} is empty",
            train_path.display()
        )));
    }
    dataset_from_labels(&train, &valid, &test)
}

/// Locates `train`, `valid` and `test` files (`.txt` or `.tsv`) in `dir`.
pub fn split_paths(dir: &Path) -> Result<[PathBuf; 3]> {
    let find = |stem: &str| -> Result<PathBuf> {
        ["txt", "tsv"]
            .iter()
            .map(|ext| dir.join(format!("{stem}.{ext}")))
            .find(|p| p.is_file())
            .ok_or_else(|| {
                Error::config(format!(
                    "no {stem}.txt or {stem}.tsv in {}",
                    dir.display()
                ))
            })
    };
    Ok([find("train")?, find("valid")?, find("test")?])
}

pub fn load_dataset_dir(dir: &Path) -> Result<Dataset> {
    let [train, valid, test] = split_paths(dir)?;
    load_dataset(&train, &valid, &test)
}

/// Labeled training example: 1.0 for observed triples, 0.0 for corruptions.
pub type Labeled = (Triple, f64);

/// Appends `ratio` corruptions per positive, drawing from `rng`.
///
/// Each corruption replaces the head or the tail (fair coin) with an entity
/// drawn uniformly from `0..num_entities`. Corruptions are not checked
/// against known facts.
pub fn sample_negatives_with<R: Rng + ?Sized>(
    batch: &[Triple],
    ratio: usize,
    num_entities: usize,
    rng: &mut R,
    out: &mut Vec<Labeled>,
) -> Result<()> {
    if num_entities < 2 {
        return Err(Error::Sampling(format!(
            "need at least 2 entities to corrupt triples, vocabulary has {num_entities}"
        )));
    }
    if ratio < 1 {
        return Err(Error::Argument("negative ratio must be at least 1".into()));
    }
    if batch.is_empty() {
        return Err(Error::Argument("cannot sample negatives for an empty batch".into()));
    }
    out.reserve(batch.len() * (ratio + 1));
    out.extend(batch.iter().map(|&t| (t, 1.0)));
    for &pos in batch {
        for _ in 0..ratio {
            let replacement = rng.gen_range(0..num_entities);
            let neg = if rng.gen_bool(0.5) {
                Triple::new(replacement, pos.relation, pos.tail)
            } else {
                Triple::new(pos.head, pos.relation, replacement)
            };
            out.push((neg, 0.0));
        }
    }
    Ok(())
}

/// Deterministic negative sampling from an explicit seed.
pub fn sample_negatives(
    batch: &[Triple],
    ratio: usize,
    num_entities: usize,
    rng_seed: u64,
) -> Result<Vec<Labeled>> {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut out = Vec::new();
    sample_negatives_with(batch, ratio, num_entities, &mut rng, &mut out)?;
    Ok(out)
}
