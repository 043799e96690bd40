//! The row-level scoring interface shared by every model family.

use std::cmp::Ordering;

/// Scores `(head, relation, tail)` from three parameter rows of equal length.
pub trait TripleScorer {
    /// Parameters per entity or relation row.
    fn row_len(&self) -> usize;

    fn score(&self, h: &[f64], r: &[f64], t: &[f64]) -> f64;

    /// Writes `∂score/∂h`, `∂score/∂r` and `∂score/∂t` into the output
    /// slices, overwriting their contents.
    fn grad_into(
        &self,
        h: &[f64],
        r: &[f64],
        t: &[f64],
        gh: &mut [f64],
        gr: &mut [f64],
        gt: &mut [f64],
    );

    /// Returns the score and writes its gradient, as [`TripleScorer::grad_into`].
    fn score_grad_into(
        &self,
        h: &[f64],
        r: &[f64],
        t: &[f64],
        gh: &mut [f64],
        gr: &mut [f64],
        gt: &mut [f64],
    ) -> f64 {
        self.grad_into(h, r, t, gh, gr, gt);
        self.score(h, r, t)
    }

    /// Scores `(h, r, e)` for every row `e` of the flattened `entities` table.
    fn score_tails(&self, h: &[f64], r: &[f64], entities: &[f64], out: &mut [f64]) {
        let n = self.row_len();
        for (o, e) in out.iter_mut().zip(entities.chunks_exact(n)) {
            *o = self.score(h, r, e);
        }
    }

    /// Scores `(e, r, t)` for every row `e` of the flattened `entities` table.
    fn score_heads(&self, r: &[f64], t: &[f64], entities: &[f64], out: &mut [f64]) {
        let n = self.row_len();
        for (o, e) in out.iter_mut().zip(entities.chunks_exact(n)) {
            *o = self.score(e, r, t);
        }
    }
}

fn lexicographic(a: &[f64], b: &[f64]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or_else(|| a.len().cmp(&b.len()))
}

/// Sorts three rows into a permutation-independent order.
pub(crate) fn canonical_order(mut rows: [&[f64]; 3]) -> [&[f64]; 3] {
    rows.sort_by(|a, b| lexicographic(a, b));
    rows
}
