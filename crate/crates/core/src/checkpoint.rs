//! Self-describing binary checkpoints.
//!
//! Layout, all integers little-endian:
//!
//! ```text
//! magic           8 bytes  "FMULTCKP"
//! format_version  u32
//! final_epoch     u64
//! seed            u64
//! config          str      key=value lines
//! entities        u64 count, then count × str
//! relations       u64 count, then count × str
//! tables          u32 count, then per table:
//!                 str name, u64 rows, u64 cols, rows·cols × f64
//! ```
//!
//! where `str` is a `u32` byte length followed by UTF-8 bytes. Tables are
//! `entities` then `relations`.

use std::io::{Read, Write};

use crate::data::Vocabulary;
use crate::error::{Error, Result};
use crate::model::KgModel;
use crate::train::TrainConfig;

pub const MAGIC: &[u8; 8] = b"FMULTCKP";
pub const FORMAT_VERSION: u32 = 1;

/// Upper bound on any single length field, to fail fast on corrupt input.
const MAX_LEN: u64 = 1 << 32;

#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub config: TrainConfig,
    pub vocab: Vocabulary,
    pub final_epoch: usize,
    pub model: KgModel,
}

impl Checkpoint {
    pub fn new(config: TrainConfig, vocab: Vocabulary, final_epoch: usize, model: KgModel) -> Result<Self> {
        if &config.model != model.spec() {
            return Err(Error::Checkpoint("config and model architecture differ".into()));
        }
        if vocab.num_entities() != model.num_entities() || vocab.num_relations() != model.num_relations() {
            return Err(Error::Checkpoint(format!(
                "vocabulary has {} entities and {} relations but the model has {} and {}",
                vocab.num_entities(),
                vocab.num_relations(),
                model.num_entities(),
                model.num_relations()
            )));
        }
        Ok(Self {
            config,
            vocab,
            final_epoch,
            model,
        })
    }

    pub fn write_to<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        w.write_all(MAGIC)?;
        w.write_all(&FORMAT_VERSION.to_le_bytes())?;
        w.write_all(&(self.final_epoch as u64).to_le_bytes())?;
        w.write_all(&self.config.seed.to_le_bytes())?;
        write_str(&mut w, &self.config.to_text())?;
        for labels in [self.vocab.entities(), self.vocab.relations()] {
            w.write_all(&(labels.len() as u64).to_le_bytes())?;
            for l in labels {
                write_str(&mut w, l)?;
            }
        }
        let dim = self.model.dim() as u64;
        let tables = [
            ("entities", self.model.entity_table()),
            ("relations", self.model.relation_table()),
        ];
        w.write_all(&(tables.len() as u32).to_le_bytes())?;
        for (name, values) in tables {
            write_str(&mut w, name)?;
            w.write_all(&(values.len() as u64 / dim).to_le_bytes())?;
            w.write_all(&dim.to_le_bytes())?;
            let mut buf = Vec::with_capacity(values.len() * 8);
            for v in values {
                buf.extend_from_slice(&v.to_le_bytes());
            }
            w.write_all(&buf)?;
        }
        w.flush()
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        self.write_to(&mut out).expect("writing to a Vec cannot fail");
        out
    }

    pub fn read_from<R: Read>(mut r: R) -> Result<Self> {
        let mut magic = [0u8; 8];
        read_exact(&mut r, &mut magic, "magic")?;
        if &magic != MAGIC {
            return Err(Error::Checkpoint("not a checkpoint file (bad magic)".into()));
        }
        let version = read_u32(&mut r)?;
        if version != FORMAT_VERSION {
            return Err(Error::Checkpoint(format!(
                "unsupported format_version {version} (this build reads {FORMAT_VERSION})"
            )));
        }
        let final_epoch = read_u64(&mut r)? as usize;
        let seed = read_u64(&mut r)?;
        let mut config = TrainConfig::default();
        config
            .apply_text(&read_str(&mut r)?)
            .map_err(|e| Error::Checkpoint(format!("bad config block: {e}")))?;
        if config.seed != seed {
            return Err(Error::Checkpoint("seed field disagrees with the config block".into()));
        }
        let entities = read_labels(&mut r)?;
        let relations = read_labels(&mut r)?;
        let vocab = Vocabulary::from_labels(entities, relations)
            .map_err(|e| Error::Checkpoint(format!("bad vocabulary: {e}")))?;

        let count = read_u32(&mut r)?;
        if count != 2 {
            return Err(Error::Checkpoint(format!("expected 2 tables, found {count}")));
        }
        let dim = config.model.dim as u64;
        let mut tables = Vec::with_capacity(2);
        for (want, rows_expected) in [
            ("entities", vocab.num_entities() as u64),
            ("relations", vocab.num_relations() as u64),
        ] {
            let name = read_str(&mut r)?;
            if name != want {
                return Err(Error::Checkpoint(format!("expected table {want:?}, found {name:?}")));
            }
            let rows = read_u64(&mut r)?;
            let cols = read_u64(&mut r)?;
            if rows != rows_expected || cols != dim {
                return Err(Error::Checkpoint(format!(
                    "table {name} has shape {rows}x{cols}, expected {rows_expected}x{dim}"
                )));
            }
            let mut bytes = vec![0u8; (rows * cols * 8) as usize];
            read_exact(&mut r, &mut bytes, &name)?;
            tables.push(
                bytes
                    .chunks_exact(8)
                    .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
                    .collect::<Vec<f64>>(),
            );
        }
        let relations = tables.pop().unwrap();
        let entities = tables.pop().unwrap();
        let model = KgModel::from_tables(config.model.clone(), entities, relations)
            .map_err(|e| Error::Checkpoint(format!("bad parameters: {e}")))?;
        let mut trailing = [0u8; 1];
        if r.read(&mut trailing).map_err(io_err)? != 0 {
            return Err(Error::Checkpoint("trailing bytes after the last table".into()));
        }
        Checkpoint::new(config, vocab, final_epoch, model)
    }

    /// Fails unless `vocab` has the same entities and relations, in order.
    pub fn check_vocabulary(&self, vocab: &Vocabulary) -> Result<()> {
        if vocab.num_entities() != self.vocab.num_entities() || vocab.num_relations() != self.vocab.num_relations() {
            return Err(Error::Checkpoint(format!(
                "vocabulary mismatch: checkpoint has {} entities and {} relations, dataset has {} and {}",
                self.vocab.num_entities(),
                self.vocab.num_relations(),
                vocab.num_entities(),
                vocab.num_relations()
            )));
        }
        if vocab.entities() != self.vocab.entities() || vocab.relations() != self.vocab.relations() {
            return Err(Error::Checkpoint(
                "vocabulary mismatch: same sizes but different labels or order".into(),
            ));
        }
        Ok(())
    }
}

fn io_err(e: std::io::Error) -> Error {
    Error::Checkpoint(format!("read failed: {e}"))
}

fn write_str<W: Write>(w: &mut W, s: &str) -> std::io::Result<()> {
    w.write_all(&(s.len() as u32).to_le_bytes())?;
    w.write_all(s.as_bytes())
}

fn read_exact<R: Read>(r: &mut R, buf: &mut [u8], what: &str) -> Result<()> {
    r.read_exact(buf).map_err(|e| match e.kind() {
        std::io::ErrorKind::UnexpectedEof => Error::Checkpoint(format!("truncated while reading {what}")),
        _ => io_err(e),
    })
}

fn read_u32<R: Read>(r: &mut R) -> Result<u32> {
    let mut b = [0u8; 4];
    read_exact(r, &mut b, "a length field")?;
    Ok(u32::from_le_bytes(b))
}

fn read_u64<R: Read>(r: &mut R) -> Result<u64> {
    let mut b = [0u8; 8];
    read_exact(r, &mut b, "a length field")?;
    let v = u64::from_le_bytes(b);
    if v > MAX_LEN {
        return Err(Error::Checkpoint(format!("implausible length {v}")));
    }
    Ok(v)
}

fn read_str<R: Read>(r: &mut R) -> Result<String> {
    let len = read_u32(r)? as usize;
    let mut bytes = vec![0u8; len];
    read_exact(r, &mut bytes, "a string")?;
    String::from_utf8(bytes).map_err(|_| Error::Checkpoint("string is not UTF-8".into()))
}

fn read_labels<R: Read>(r: &mut R) -> Result<Vec<String>> {
    let n = read_u64(r)?;
    (0..n).map(|_| read_str(r)).collect()
}
