//! Filtered link-prediction metrics.

use std::collections::HashSet;
use std::fmt::Write as _;

use crate::data::{Split, Triple, TripleStore};
use crate::error::{Error, Result};
use crate::model::KgModel;

/// Rank of `scores[truth]` among the candidates, skipping every index in
/// `filtered` other than `truth`. Ties count half (mid-rank), so the rank is
/// `1 + #greater + #equal / 2`. A non-finite truth score ranks last; a NaN
/// candidate counts as greater.
pub fn filtered_rank(scores: &[f64], truth: usize, filtered: &HashSet<usize>) -> f64 {
    let target = scores[truth];
    let mut greater = 0usize;
    let mut equal = 0usize;
    let mut candidates = 0usize;
    for (i, &s) in scores.iter().enumerate() {
        if i == truth || filtered.contains(&i) {
            continue;
        }
        candidates += 1;
        if s.is_nan() || s > target {
            greater += 1;
        } else if s == target {
            equal += 1;
        }
    }
    if target.is_nan() {
        return 1.0 + candidates as f64;
    }
    1.0 + greater as f64 + equal as f64 / 2.0
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EvalReport {
    pub mrr: f64,
    pub hits1: f64,
    pub hits3: f64,
    pub hits10: f64,
    pub tail_mrr: f64,
    pub head_mrr: f64,
    /// Head plus tail queries, i.e. twice the number of evaluated triples.
    pub num_queries: usize,
}

pub const CSV_HEADER: &str = "dataset,model,dim,degree_or_layers,mrr,h1,h3,h10,tail_mrr,head_mrr,seed";

impl EvalReport {
    pub fn to_kv(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "mrr={:.6}", self.mrr);
        let _ = writeln!(s, "hits@1={:.6}", self.hits1);
        let _ = writeln!(s, "hits@3={:.6}", self.hits3);
        let _ = writeln!(s, "hits@10={:.6}", self.hits10);
        let _ = writeln!(s, "tail_mrr={:.6}", self.tail_mrr);
        let _ = writeln!(s, "head_mrr={:.6}", self.head_mrr);
        let _ = writeln!(s, "queries={}", self.num_queries);
        s
    }

    pub fn csv_row(&self, dataset: &str, model: &str, dim: usize, degree_or_layers: usize, seed: u64) -> String {
        format!(
            "{dataset},{model},{dim},{degree_or_layers},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6},{seed}",
            self.mrr, self.hits1, self.hits3, self.hits10, self.tail_mrr, self.head_mrr
        )
    }
}

/// Ranks of the true tail and true head for every triple of `split`.
pub fn ranks(model: &KgModel, store: &TripleStore, split: Split) -> Result<Vec<(f64, f64)>> {
    let triples = store.split(split);
    if triples.is_empty() {
        return Err(Error::Argument(format!("{} split is empty", split.name())));
    }
    check_bounds(model, triples)?;
    let mut buf = vec![0.0; model.num_entities()];
    Ok(triples
        .iter()
        .map(|t| {
            model.score_all_tails(t.head, t.relation, &mut buf);
            let tail = filtered_rank(&buf, t.tail, store.filtered_tails(t.head, t.relation));
            model.score_all_heads(t.relation, t.tail, &mut buf);
            let head = filtered_rank(&buf, t.head, store.filtered_heads(t.relation, t.tail));
            (tail, head)
        })
        .collect())
}

fn check_bounds(model: &KgModel, triples: &[Triple]) -> Result<()> {
    for t in triples {
        if t.head >= model.num_entities() || t.tail >= model.num_entities() || t.relation >= model.num_relations() {
            return Err(Error::shape(format!(
                "triple ({}, {}, {}) is outside the model's {} entities and {} relations",
                t.head,
                t.relation,
                t.tail,
                model.num_entities(),
                model.num_relations()
            )));
        }
    }
    Ok(())
}

/// Aggregates per-triple `(tail_rank, head_rank)` pairs.
pub fn report_from_ranks(ranks: &[(f64, f64)]) -> EvalReport {
    let n = ranks.len() as f64;
    let all = || ranks.iter().flat_map(|&(a, b)| [a, b]);
    let hits = |k: f64| all().filter(|&r| r <= k).count() as f64 / (2.0 * n);
    EvalReport {
        mrr: all().map(|r| 1.0 / r).sum::<f64>() / (2.0 * n),
        hits1: hits(1.0),
        hits3: hits(3.0),
        hits10: hits(10.0),
        tail_mrr: ranks.iter().map(|r| 1.0 / r.0).sum::<f64>() / n,
        head_mrr: ranks.iter().map(|r| 1.0 / r.1).sum::<f64>() / n,
        num_queries: 2 * ranks.len(),
    }
}

/// Filtered MRR and Hits@{1,3,10} over head and tail queries of `split`.
pub fn evaluate(model: &KgModel, store: &TripleStore, split: Split) -> Result<EvalReport> {
    Ok(report_from_ranks(&ranks(model, store, split)?))
}
