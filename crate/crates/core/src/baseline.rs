//! DistMult and ComplEx trilinear scorers.

use crate::error::{Error, Result};
use crate::scoring::{canonical_order, TripleScorer};

/// `Σ_i h_i r_i t_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DistMult {
    dim: usize,
}

impl DistMult {
    pub fn new(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::config("DistMult dim must be positive"));
        }
        Ok(Self { dim })
    }
}

impl TripleScorer for DistMult {
    fn row_len(&self) -> usize {
        self.dim
    }

    fn score(&self, h: &[f64], r: &[f64], t: &[f64]) -> f64 {
        let [a, b, c] = canonical_order([h, r, t]);
        a.iter().zip(b).zip(c).map(|((x, y), z)| x * y * z).sum()
    }

    fn grad_into(&self, h: &[f64], r: &[f64], t: &[f64], gh: &mut [f64], gr: &mut [f64], gt: &mut [f64]) {
        for i in 0..self.dim {
            gh[i] = r[i] * t[i];
            gr[i] = h[i] * t[i];
            gt[i] = h[i] * r[i];
        }
    }

    fn score_tails(&self, h: &[f64], r: &[f64], entities: &[f64], out: &mut [f64]) {
        let v: Vec<f64> = h.iter().zip(r).map(|(a, b)| a * b).collect();
        for (o, e) in out.iter_mut().zip(entities.chunks_exact(self.dim)) {
            *o = v.iter().zip(e).map(|(a, b)| a * b).sum();
        }
    }

    fn score_heads(&self, r: &[f64], t: &[f64], entities: &[f64], out: &mut [f64]) {
        self.score_tails(t, r, entities, out);
    }
}

/// `Re Σ_i h_i r_i t_i` over `dim / 2` complex coordinates stored as
/// interleaved `(re, im)` pairs. With `conjugate_tail` the tail enters as
/// `t̄_i`, which makes the score asymmetric in head and tail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComplEx {
    dim: usize,
    conjugate_tail: bool,
}

impl ComplEx {
    pub fn new(dim: usize, conjugate_tail: bool) -> Result<Self> {
        if dim == 0 || !dim.is_multiple_of(2) {
            return Err(Error::config(format!("ComplEx dim must be even and positive, got {dim}")));
        }
        Ok(Self { dim, conjugate_tail })
    }

    pub fn conjugate_tail(&self) -> bool {
        self.conjugate_tail
    }

    /// Re((a + ib)(c + id)(e ± if)) accumulated pairwise.
    fn raw(&self, h: &[f64], r: &[f64], t: &[f64]) -> f64 {
        let sign = if self.conjugate_tail { -1.0 } else { 1.0 };
        h.chunks_exact(2)
            .zip(r.chunks_exact(2))
            .zip(t.chunks_exact(2))
            .map(|((h, r), t)| {
                let (pr, pi) = (h[0] * r[0] - h[1] * r[1], h[0] * r[1] + h[1] * r[0]);
                pr * t[0] - pi * (sign * t[1])
            })
            .sum()
    }
}

impl TripleScorer for ComplEx {
    fn row_len(&self) -> usize {
        self.dim
    }

    fn score(&self, h: &[f64], r: &[f64], t: &[f64]) -> f64 {
        if self.conjugate_tail {
            self.raw(h, r, t)
        } else {
            let [a, b, c] = canonical_order([h, r, t]);
            self.raw(a, b, c)
        }
    }

    fn grad_into(&self, h: &[f64], r: &[f64], t: &[f64], gh: &mut [f64], gr: &mut [f64], gt: &mut [f64]) {
        let sign = if self.conjugate_tail { -1.0 } else { 1.0 };
        for i in (0..self.dim).step_by(2) {
            let (hr, hi) = (h[i], h[i + 1]);
            let (rr, ri) = (r[i], r[i + 1]);
            let (tr, ti) = (t[i], sign * t[i + 1]);
            // score = Re(h r t'), t' = (tr, ti); ∂/∂Re z = Re(g), ∂/∂Im z = −Im(g)
            let (g_re, g_im) = (rr * tr - ri * ti, rr * ti + ri * tr);
            gh[i] = g_re;
            gh[i + 1] = -g_im;
            let (g_re, g_im) = (hr * tr - hi * ti, hr * ti + hi * tr);
            gr[i] = g_re;
            gr[i + 1] = -g_im;
            let (g_re, g_im) = (hr * rr - hi * ri, hr * ri + hi * rr);
            gt[i] = g_re;
            gt[i + 1] = -g_im * sign;
        }
    }
}

pub fn distmult_score(h: &[f64], r: &[f64], t: &[f64]) -> Result<f64> {
    if h.len() != r.len() || h.len() != t.len() {
        return Err(Error::shape(format!(
            "DistMult vectors differ in length: {}, {}, {}",
            h.len(),
            r.len(),
            t.len()
        )));
    }
    Ok(h.iter().zip(r).zip(t).map(|((x, y), z)| x * y * z).sum())
}

/// ComplEx without tail conjugation.
pub fn complex_score(h: &[f64], r: &[f64], t: &[f64]) -> Result<f64> {
    complex_score_with(h, r, t, false)
}

pub fn complex_score_with(h: &[f64], r: &[f64], t: &[f64], conjugate_tail: bool) -> Result<f64> {
    if h.len() != r.len() || h.len() != t.len() || !h.len().is_multiple_of(2) {
        return Err(Error::shape(format!(
            "ComplEx needs equal even lengths, got {}, {}, {}",
            h.len(),
            r.len(),
            t.len()
        )));
    }
    Ok(ComplEx::new(h.len().max(2), conjugate_tail)?.raw(h, r, t))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distmult_examples() {
        assert_eq!(distmult_score(&[1.0, 2.0], &[3.0, 4.0], &[5.0, 6.0]).unwrap(), 63.0);
        assert_eq!(distmult_score(&[1.5, -2.0], &[0.0, 0.0], &[5.0, 6.0]).unwrap(), 0.0);
        assert!(matches!(distmult_score(&[1.0], &[1.0, 2.0], &[1.0]), Err(Error::Shape(_))));
    }

    #[test]
    fn complex_examples() {
        // h = 1, r = i, t = i
        assert_eq!(complex_score(&[1.0, 0.0], &[0.0, 1.0], &[0.0, 1.0]).unwrap(), -1.0);
        // conjugated tail: Re(1 · i · (−i)) = 1
        assert_eq!(complex_score_with(&[1.0, 0.0], &[0.0, 1.0], &[0.0, 1.0], true).unwrap(), 1.0);
        assert!(complex_score(&[1.0, 0.0, 1.0], &[0.0; 3], &[0.0; 3]).is_err());
    }

    #[test]
    fn complex_real_specialization() {
        let h = [1.0, 0.0, -2.0, 0.0];
        let r = [0.5, 0.0, 3.0, 0.0];
        let t = [4.0, 0.0, 1.0, 0.0];
        let real = distmult_score(&[1.0, -2.0], &[0.5, 3.0], &[4.0, 1.0]).unwrap();
        assert_eq!(complex_score(&h, &r, &t).unwrap(), real);
    }

    #[test]
    fn symmetric_in_head_and_tail_without_conjugation() {
        let h = [0.3, -0.7, 0.2, 0.9];
        let r = [0.5, 0.1, -0.4, 0.6];
        let t = [-0.2, 0.8, 0.7, -0.3];
        let s = ComplEx::new(4, false).unwrap();
        assert_eq!(s.score(&h, &r, &t).to_bits(), s.score(&t, &r, &h).to_bits());
        let c = ComplEx::new(4, true).unwrap();
        assert!((c.score(&h, &r, &t) - c.score(&t, &r, &h)).abs() > 1e-6);
    }

    #[test]
    fn gradients_match_finite_differences() {
        let rows = [
            vec![0.3, -0.7, 0.2, 0.9],
            vec![0.5, 0.1, -0.4, 0.6],
            vec![-0.2, 0.8, 0.7, -0.3],
        ];
        let scorers: [Box<dyn TripleScorer>; 3] = [
            Box::new(DistMult::new(4).unwrap()),
            Box::new(ComplEx::new(4, false).unwrap()),
            Box::new(ComplEx::new(4, true).unwrap()),
        ];
        for s in &scorers {
            let mut g = [vec![0.0; 4], vec![0.0; 4], vec![0.0; 4]];
            let [gh, gr, gt] = &mut g;
            s.grad_into(&rows[0], &rows[1], &rows[2], gh, gr, gt);
            for slot in 0..3 {
                for i in 0..4 {
                    let mut p = rows.clone();
                    p[slot][i] += 1e-6;
                    let up = s.score(&p[0], &p[1], &p[2]);
                    p[slot][i] -= 2e-6;
                    let down = s.score(&p[0], &p[1], &p[2]);
                    let fd = (up - down) / 2e-6;
                    assert!((fd - g[slot][i]).abs() < 1e-8, "slot {slot} i {i}");
                }
            }
        }
    }
}
