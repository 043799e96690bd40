//! Polynomial embeddings with exact L² triple products.
//!
//! Each item is a bank of `components` real polynomials of a common degree,
//! stored component-major: row `[c * (degree + 1) + i]` holds the coefficient
//! of `x^i` in component `c`. The triple score is
//!
//! ```text
//! Σ_c Σ_{i,j,k} a_i b_j c_k (M^{1+i+j+k} − m^{1+i+j+k}) / (1+i+j+k)
//! ```
//!
//! i.e. the exact integral of `h(x) r(x) t(x)` over `Ω = [m, M]`.

use crate::error::{Error, Result};
use crate::quadrature::Interval;
use crate::scoring::{canonical_order, TripleScorer};

/// Largest supported degree; bounds the stack scratch used by convolutions.
pub const MAX_DEGREE: usize = 127;
const SCRATCH: usize = 2 * MAX_DEGREE + 1;

/// Scoring context for one `(dim, degree, Ω)` configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyScorer {
    degree: usize,
    components: usize,
    domain: Interval,
    /// `moments[s] = ∫_Ω x^s dx` for `s ≤ 3 · degree`.
    moments: Vec<f64>,
}

/// `∫_Ω x^s dx = (M^{s+1} − m^{s+1}) / (s + 1)` for `s = 0..=max_power`.
pub fn power_moments(domain: &Interval, max_power: usize) -> Vec<f64> {
    let (lo, hi) = (domain.lower(), domain.upper());
    (0..=max_power)
        .map(|s| {
            let p = (s + 1) as i32;
            (hi.powi(p) - lo.powi(p)) / p as f64
        })
        .collect()
}

impl PolyScorer {
    /// Rejects `dim` values not divisible by `degree + 1`.
    pub fn new(dim: usize, degree: usize, domain: Interval) -> Result<Self> {
        if degree > MAX_DEGREE {
            return Err(Error::config(format!(
                "polynomial degree {degree} exceeds the supported maximum {MAX_DEGREE}"
            )));
        }
        let width = degree + 1;
        if dim == 0 || !dim.is_multiple_of(width) {
            return Err(Error::config(format!(
                "(degree+1)={width} does not divide dim={dim}"
            )));
        }
        Ok(Self {
            degree,
            components: dim / width,
            domain,
            moments: power_moments(&domain, 3 * degree),
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn domain(&self) -> &Interval {
        &self.domain
    }

    fn width(&self) -> usize {
        self.degree + 1
    }

    fn check(&self, rows: &[&[f64]]) -> Result<()> {
        let want = self.row_len();
        for row in rows {
            if row.len() != want {
                return Err(Error::shape(format!(
                    "polynomial row has {} coefficients, expected {want} ({} components x {})",
                    row.len(),
                    self.components,
                    self.width()
                )));
            }
        }
        Ok(())
    }

    /// `⟨p, q⟩ = Σ_c Σ_{i,j} p_i q_j (M^{i+j+1} − m^{i+j+1})/(1+i+j)`.
    pub fn inner_product(&self, p: &[f64], q: &[f64]) -> Result<f64> {
        self.check(&[p, q])?;
        let w = self.width();
        let mut total = 0.0;
        for (pc, qc) in p.chunks_exact(w).zip(q.chunks_exact(w)) {
            for (i, &pi) in pc.iter().enumerate() {
                for (j, &qj) in qc.iter().enumerate() {
                    total += pi * qj * self.moments[i + j];
                }
            }
        }
        Ok(total)
    }

    pub fn norm_sq(&self, p: &[f64]) -> Result<f64> {
        self.inner_product(p, p)
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

    /// Evaluates every component of `row` at `x`.
    pub fn eval(&self, row: &[f64], x: f64) -> Vec<f64> {
        row.chunks_exact(self.width())
            .map(|c| c.iter().rev().fold(0.0, |acc, a| acc * x + a))
            .collect()
    }

    /// `Σ_s (p * q)_s moments[s + k]` for every `k < width`, written into `out`.
    fn contract(&self, p: &[f64], q: &[f64], out: &mut [f64]) {
        let w = p.len();
        let mut conv = [0.0f64; SCRATCH];
        let conv = &mut conv[..2 * w - 1];
        for (i, &pi) in p.iter().enumerate() {
            for (j, &qj) in q.iter().enumerate() {
                conv[i + j] += pi * qj;
            }
        }
        for (k, o) in out.iter_mut().enumerate() {
            let m = &self.moments[k..k + conv.len()];
            *o = conv.iter().zip(m).map(|(c, w)| c * w).sum();
        }
    }
}

/// Partial derivatives of a triple score with respect to each row.
#[derive(Debug, Clone, PartialEq)]
pub struct TripleGrad {
    pub head: Vec<f64>,
    pub relation: Vec<f64>,
    pub tail: Vec<f64>,
}

impl TripleScorer for PolyScorer {
    fn row_len(&self) -> usize {
        self.components * self.width()
    }

    fn score(&self, h: &[f64], r: &[f64], t: &[f64]) -> f64 {
        // Sorting the rows makes every permutation of (h, r, t) run the
        // same floating-point operations.
        let [a, b, c] = canonical_order([h, r, t]);
        let w = self.width();
        let mut coeff = [0.0f64; MAX_DEGREE + 1];
        let coeff = &mut coeff[..w];
        let mut total = 0.0;
        for ((ac, bc), cc) in a
            .chunks_exact(w)
            .zip(b.chunks_exact(w))
            .zip(c.chunks_exact(w))
        {
            self.contract(ac, bc, coeff);
            total += coeff.iter().zip(cc).map(|(x, y)| x * y).sum::<f64>();
        }
        total
    }

    fn grad_into(
        &self,
        h: &[f64],
        r: &[f64],
        t: &[f64],
        gh: &mut [f64],
        gr: &mut [f64],
        gt: &mut [f64],
    ) {
        let w = self.width();
        for c in 0..self.components {
            let span = c * w..(c + 1) * w;
            let (a, b, cc) = (&h[span.clone()], &r[span.clone()], &t[span.clone()]);
            self.contract(b, cc, &mut gh[span.clone()]);
            self.contract(a, cc, &mut gr[span.clone()]);
            self.contract(a, b, &mut gt[span]);
        }
    }

    fn score_tails(&self, h: &[f64], r: &[f64], entities: &[f64], out: &mut [f64]) {
        linear_scan(self, h, r, entities, out);
    }

    fn score_heads(&self, r: &[f64], t: &[f64], entities: &[f64], out: &mut [f64]) {
        // Fully symmetric score: heads are ranked exactly like tails.
        linear_scan(self, t, r, entities, out);
    }
}

/// Scores `(fixed, r, e)` for every entity `e` using linearity in the last slot.
fn linear_scan(s: &PolyScorer, fixed: &[f64], r: &[f64], entities: &[f64], out: &mut [f64]) {
    let n = s.row_len();
    let w = s.width();
    let mut v = vec![0.0; n];
    for c in 0..s.components {
        let span = c * w..(c + 1) * w;
        s.contract(&fixed[span.clone()], &r[span.clone()], &mut v[span]);
    }
    for (o, e) in out.iter_mut().zip(entities.chunks_exact(n)) {
        *o = v.iter().zip(e).map(|(a, b)| a * b).sum();
    }
}

/// Scalar product of two polynomial rows over `domain`.
pub fn poly_inner_product(p: &[f64], q: &[f64], degree: usize, domain: &Interval) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::shape(format!(
            "rows differ in length: {} vs {}",
            p.len(),
            q.len()
        )));
    }
    PolyScorer::new(p.len(), degree, *domain)?.inner_product(p, q)
}

pub fn poly_norm_sq(p: &[f64], degree: usize, domain: &Interval) -> Result<f64> {
    poly_inner_product(p, p, degree, domain)
}

pub fn fmult_n_score(
    h: &[f64],
    r: &[f64],
    t: &[f64],
    degree: usize,
    domain: &Interval,
) -> Result<f64> {
    PolyScorer::new(h.len(), degree, *domain)?.try_score(h, r, t)
}

pub fn fmult_n_grad(
    h: &[f64],
    r: &[f64],
    t: &[f64],
    degree: usize,
    domain: &Interval,
) -> Result<TripleGrad> {
    PolyScorer::new(h.len(), degree, *domain)?.try_grad(h, r, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const UNIT: Interval = Interval::unit();

    /// Direct triple sum with exact rational moments: the textbook formula.
    fn naive_score(h: &[f64], r: &[f64], t: &[f64], degree: usize, dom: &Interval) -> f64 {
        let w = degree + 1;
        let (lo, hi) = (dom.lower(), dom.upper());
        let mut total = 0.0;
        for c in 0..h.len() / w {
            for i in 0..w {
                for j in 0..w {
                    for k in 0..w {
                        let p = (1 + i + j + k) as i32;
                        total += h[c * w + i] * r[c * w + j] * t[c * w + k]
                            * (hi.powi(p) - lo.powi(p))
                            / p as f64;
                    }
                }
            }
        }
        total
    }

    #[test]
    fn inner_product_examples() {
        assert_eq!(poly_inner_product(&[1.0], &[1.0], 0, &UNIT).unwrap(), 1.0);
        let x = poly_inner_product(&[0.0, 1.0], &[0.0, 1.0], 1, &UNIT).unwrap();
        assert!((x - 1.0 / 3.0).abs() < 1e-15);
        let dom = Interval::new(0.0, 2.0).unwrap();
        let y = poly_inner_product(&[1.0, 1.0], &[1.0, 0.0], 1, &dom).unwrap();
        assert!((y - 4.0).abs() < 1e-15);
    }

    #[test]
    fn norm_examples() {
        assert_eq!(poly_norm_sq(&[0.0; 4], 3, &UNIT).unwrap(), 0.0);
        let n = poly_norm_sq(&[1.0, 1.0], 1, &UNIT).unwrap();
        assert!((n - 7.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn degree_zero_is_triple_product() {
        let s = fmult_n_score(&[1.0, 2.0], &[3.0, 4.0], &[5.0, 6.0], 0, &UNIT).unwrap();
        assert_eq!(s, 63.0);
    }

    #[test]
    fn degree_one_example_and_swap() {
        // h = 1 + x, r = 1, t = x  →  ∫₀¹ (1+x) x dx = 5/6
        let h = [1.0, 1.0];
        let r = [1.0, 0.0];
        let t = [0.0, 1.0];
        let s = fmult_n_score(&h, &r, &t, 1, &UNIT).unwrap();
        assert!((s - 5.0 / 6.0).abs() < 1e-15);
        assert_eq!(fmult_n_score(&t, &r, &h, 1, &UNIT).unwrap(), s);
    }

    #[test]
    fn degree_zero_gradient() {
        let g = fmult_n_grad(&[2.0], &[3.0], &[5.0], 0, &UNIT).unwrap();
        assert_eq!(g.head, vec![15.0]);
        assert_eq!(g.relation, vec![10.0]);
        assert_eq!(g.tail, vec![6.0]);
    }

    #[test]
    fn zero_relation_zeroes_entity_gradients() {
        let h = [0.3, -0.2, 0.5, 0.1];
        let t = [-0.7, 0.4, 0.2, 0.9];
        let g = fmult_n_grad(&h, &[0.0; 4], &t, 3, &UNIT).unwrap();
        assert!(g.head.iter().all(|&v| v == 0.0));
        assert!(g.tail.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn rejects_indivisible_dim() {
        assert!(PolyScorer::new(32, 3, UNIT).is_ok());
        let err = PolyScorer::new(32, 4, UNIT).unwrap_err();
        assert!(err.to_string().contains("(degree+1)=5 does not divide dim=32"));
    }

    #[test]
    fn shape_mismatch() {
        let s = PolyScorer::new(4, 1, UNIT).unwrap();
        assert!(matches!(
            s.try_score(&[0.0; 4], &[0.0; 4], &[0.0; 2]),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn matches_naive_triple_sum() {
        let dom = Interval::new(-0.5, 1.5).unwrap();
        let s = PolyScorer::new(8, 3, dom).unwrap();
        let h = [0.1, -0.3, 0.7, 0.2, -0.5, 0.9, -0.1, 0.4];
        let r = [0.6, 0.2, -0.8, 0.3, 0.1, -0.2, 0.5, -0.6];
        let t = [-0.4, 0.8, 0.05, -0.9, 0.3, 0.3, -0.7, 0.2];
        let got = s.score(&h, &r, &t);
        let want = naive_score(&h, &r, &t, 3, &dom);
        assert!((got - want).abs() < 1e-13, "{got} vs {want}");
    }

    #[test]
    fn tail_scan_matches_pointwise() {
        let s = PolyScorer::new(6, 2, UNIT).unwrap();
        let h = [0.1, 0.2, -0.3, 0.4, -0.5, 0.6];
        let r = [0.9, -0.1, 0.2, 0.3, 0.7, -0.8];
        let ents: Vec<f64> = (0..18).map(|i| ((i * 7) % 11) as f64 / 10.0 - 0.5).collect();
        let mut out = vec![0.0; 3];
        s.score_tails(&h, &r, &ents, &mut out);
        for (e, o) in ents.chunks(6).zip(&out) {
            assert!((s.score(&h, &r, e) - o).abs() < 1e-14);
        }
        s.score_heads(&r, &h, &ents, &mut out);
        for (e, o) in ents.chunks(6).zip(&out) {
            assert!((s.score(e, &r, &h) - o).abs() < 1e-14);
        }
    }

    fn rows(n: usize) -> impl Strategy<Value = Vec<f64>> {
        proptest::collection::vec(-1.0f64..1.0, n)
    }

    proptest! {
        #[test]
        fn score_is_permutation_invariant(degree in 0usize..8, comps in 1usize..3,
                                          seed in rows(3 * 8 * 3)) {
            let n = comps * (degree + 1);
            let s = PolyScorer::new(n, degree, UNIT).unwrap();
            let (h, r, t) = (&seed[..n], &seed[24..24 + n], &seed[48..48 + n]);
            let base = s.score(h, r, t);
            for (a, b, c) in [(t, r, h), (r, h, t), (h, t, r), (r, t, h), (t, h, r)] {
                prop_assert_eq!(s.score(a, b, c).to_bits(), base.to_bits());
            }
        }

        #[test]
        fn score_is_trilinear(alpha in -3.0f64..3.0, seed in rows(12)) {
            let s = PolyScorer::new(4, 3, UNIT).unwrap();
            let (h, r, t) = (&seed[..4], &seed[4..8], &seed[8..]);
            let scaled: Vec<f64> = h.iter().map(|v| alpha * v).collect();
            let lhs = s.score(&scaled, r, t);
            let rhs = alpha * s.score(h, r, t);
            prop_assert!((lhs - rhs).abs() < 1e-9);
        }

        #[test]
        fn norm_is_nonnegative(p in rows(8)) {
            let s = PolyScorer::new(8, 7, UNIT).unwrap();
            prop_assert!(s.norm_sq(&p).unwrap() >= 0.0);
        }

        #[test]
        fn gradient_matches_finite_differences(seed in rows(12)) {
            let s = PolyScorer::new(4, 3, UNIT).unwrap();
            let (h, r, t) = (seed[..4].to_vec(), seed[4..8].to_vec(), seed[8..].to_vec());
            let g = s.try_grad(&h, &r, &t).unwrap();
            let eps = 1e-5;
            for slot in 0..3 {
                for i in 0..4 {
                    let mut rows = [h.clone(), r.clone(), t.clone()];
                    rows[slot][i] += eps;
                    let up = s.score(&rows[0], &rows[1], &rows[2]);
                    rows[slot][i] -= 2.0 * eps;
                    let down = s.score(&rows[0], &rows[1], &rows[2]);
                    let fd = (up - down) / (2.0 * eps);
                    let an = [&g.head, &g.relation, &g.tail][slot][i];
                    prop_assert!((fd - an).abs() <= 1e-6 * an.abs().max(1e-3));
                }
            }
        }
    }
}
