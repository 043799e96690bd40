//! Complex trigonometric-series embeddings.
//!
//! A component is `u(x) = Σ_{k=0}^{deg} α_k e^{ikx}` with complex `α_k`. Rows
//! hold `m/2` components of `deg + 1` coefficients each, every coefficient
//! stored as an interleaved `(re, im)` pair, so a row has exactly `dim` reals:
//! index `2 * (c * (deg + 1) + k)` is `Re α_k` of component `c`.
//!
//! Two scores are provided:
//!
//! * [`TrigVariant::Paper`]: `Re(a₀b₀c₀‖Ω‖) + Re Σ_{u,v,w≥1} a_u b_v c_w (e^{is·inf Ω} − e^{is·sup Ω})/s`
//!   with `s = u+v+w`. Index triples mixing zero and non-zero indices are
//!   not part of this sum.
//! * [`TrigVariant::Full`]: `Re Σ_{u,v,w≥0} a_u b_v c_w ∫_Ω e^{isx} dx`, the
//!   exact integral of `Re(h r t)`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly::TripleGrad;
use crate::quadrature::Interval;
use crate::scoring::{canonical_order, TripleScorer};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TrigVariant {
    #[default]
    Paper,
    Full,
}

impl fmt::Display for TrigVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TrigVariant::Paper => "paper",
            TrigVariant::Full => "full",
        })
    }
}

impl FromStr for TrigVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(TrigVariant::Paper),
            "full" => Ok(TrigVariant::Full),
            other => Err(Error::config(format!(
                "unknown trig variant {other:?} (expected paper or full)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrigScorer {
    degree: usize,
    components: usize,
    domain: Interval,
    variant: TrigVariant,
    /// Variant-specific weight of `a_u b_v c_w` indexed by `u + v + w`.
    kernel: Vec<Complex64>,
}

/// `∫_Ω e^{isx} dx` for `s = 0..=max`.
fn exact_kernel(domain: &Interval, max: usize) -> Vec<Complex64> {
    let (lo, hi) = (domain.lower(), domain.upper());
    (0..=max)
        .map(|s| {
            if s == 0 {
                Complex64::new(domain.length(), 0.0)
            } else {
                let s = s as f64;
                let diff = Complex64::cis(s * hi) - Complex64::cis(s * lo);
                diff / Complex64::new(0.0, s)
            }
        })
        .collect()
}

/// `(e^{is·inf Ω} − e^{is·sup Ω}) / s`; entry 0 is unused.
fn paper_kernel(domain: &Interval, max: usize) -> Vec<Complex64> {
    let (lo, hi) = (domain.lower(), domain.upper());
    (0..=max)
        .map(|s| {
            if s == 0 {
                Complex64::new(0.0, 0.0)
            } else {
                let s = s as f64;
                (Complex64::cis(s * lo) - Complex64::cis(s * hi)) / s
            }
        })
        .collect()
}

fn to_complex(row: &[f64]) -> Vec<Complex64> {
    row.chunks_exact(2)
        .map(|p| Complex64::new(p[0], p[1]))
        .collect()
}

/// `out[k] = Σ_s (p * q)_s kernel[s + k + offset]`.
fn contract(p: &[Complex64], q: &[Complex64], kernel: &[Complex64], offset: usize, out: &mut [Complex64]) {
    let mut conv = vec![Complex64::new(0.0, 0.0); p.len() + q.len() - 1];
    for (i, &pi) in p.iter().enumerate() {
        for (j, &qj) in q.iter().enumerate() {
            conv[i + j] += pi * qj;
        }
    }
    for (k, o) in out.iter_mut().enumerate() {
        *o = conv
            .iter()
            .enumerate()
            .map(|(s, &c)| c * kernel[s + k + offset])
            .sum();
    }
}

/// Writes the real gradient of `Re(z · g)` with respect to `(Re z, Im z)`.
fn write_real_grad(g: &[Complex64], out: &mut [f64]) {
    for (pair, z) in out.chunks_exact_mut(2).zip(g) {
        pair[0] = z.re;
        pair[1] = -z.im;
    }
}

impl TrigScorer {
    pub fn new(dim: usize, degree: usize, domain: Interval, variant: TrigVariant) -> Result<Self> {
        let width = degree + 1;
        if dim == 0 || !dim.is_multiple_of(width) {
            return Err(Error::config(format!(
                "(degree+1)={width} does not divide dim={dim}"
            )));
        }
        let m = dim / width;
        if !m.is_multiple_of(2) {
            return Err(Error::config(format!(
                "dim/(degree+1)={m} must be even for complex coefficients"
            )));
        }
        let kernel = match variant {
            TrigVariant::Full => exact_kernel(&domain, 3 * degree),
            TrigVariant::Paper => paper_kernel(&domain, 3 * degree),
        };
        Ok(Self {
            degree,
            components: m / 2,
            domain,
            variant,
            kernel,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn components(&self) -> usize {
        self.components
    }

    pub fn variant(&self) -> TrigVariant {
        self.variant
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
                    "trigonometric row has {} reals, expected {want}",
                    row.len()
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

    /// Evaluates every complex component of `row` at `x`.
    pub fn eval(&self, row: &[f64], x: f64) -> Vec<Complex64> {
        let w = self.width();
        to_complex(row)
            .chunks_exact(w)
            .map(|c| {
                c.iter()
                    .enumerate()
                    .map(|(k, &a)| a * Complex64::cis(k as f64 * x))
                    .sum()
            })
            .collect()
    }

    /// `Re(a₀ b₀ c₀) · ‖Ω‖` for one component.
    fn constant_term(&self, a: Complex64, b: Complex64, c: Complex64) -> f64 {
        (a * b * c).re * self.domain.length()
    }

    fn component_score(&self, a: &[Complex64], b: &[Complex64], c: &[Complex64]) -> f64 {
        let w = a.len();
        if w == 1 {
            return self.constant_term(a[0], b[0], c[0]);
        }
        match self.variant {
            TrigVariant::Full => {
                let mut coeff = vec![Complex64::new(0.0, 0.0); w];
                contract(a, b, &self.kernel, 0, &mut coeff);
                coeff.iter().zip(c).map(|(x, y)| x * y).sum::<Complex64>().re
            }
            TrigVariant::Paper => {
                let mut coeff = vec![Complex64::new(0.0, 0.0); w - 1];
                contract(&a[1..], &b[1..], &self.kernel, 3, &mut coeff);
                let cross = coeff.iter().zip(&c[1..]).map(|(x, y)| x * y).sum::<Complex64>();
                self.constant_term(a[0], b[0], c[0]) + cross.re
            }
        }
    }

    /// Holomorphic derivative of the complex sum with respect to the third
    /// argument's coefficients, given the other two.
    fn partner_coeffs(&self, p: &[Complex64], q: &[Complex64], out: &mut [Complex64]) {
        let w = p.len();
        match self.variant {
            TrigVariant::Full => contract(p, q, &self.kernel, 0, out),
            TrigVariant::Paper => {
                out[0] = p[0] * q[0] * self.domain.length();
                if w > 1 {
                    contract(&p[1..], &q[1..], &self.kernel, 3, &mut out[1..]);
                }
            }
        }
    }

    fn linear_form(&self, p: &[f64], q: &[f64]) -> Vec<f64> {
        let w = self.width();
        let (p, q) = (to_complex(p), to_complex(q));
        let mut g = vec![Complex64::new(0.0, 0.0); p.len()];
        for c in 0..self.components {
            let span = c * w..(c + 1) * w;
            self.partner_coeffs(&p[span.clone()], &q[span.clone()], &mut g[span]);
        }
        let mut out = vec![0.0; self.row_len()];
        write_real_grad(&g, &mut out);
        out
    }
}

impl TripleScorer for TrigScorer {
    fn row_len(&self) -> usize {
        2 * self.components * self.width()
    }

    fn score(&self, h: &[f64], r: &[f64], t: &[f64]) -> f64 {
        let [a, b, c] = canonical_order([h, r, t]);
        let (a, b, c) = (to_complex(a), to_complex(b), to_complex(c));
        let w = self.width();
        a.chunks_exact(w)
            .zip(b.chunks_exact(w))
            .zip(c.chunks_exact(w))
            .map(|((a, b), c)| self.component_score(a, b, c))
            .sum()
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
        gh.copy_from_slice(&self.linear_form(r, t));
        gr.copy_from_slice(&self.linear_form(h, t));
        gt.copy_from_slice(&self.linear_form(h, r));
    }

    fn score_tails(&self, h: &[f64], r: &[f64], entities: &[f64], out: &mut [f64]) {
        let v = self.linear_form(h, r);
        for (o, e) in out.iter_mut().zip(entities.chunks_exact(self.row_len())) {
            *o = v.iter().zip(e).map(|(a, b)| a * b).sum();
        }
    }

    fn score_heads(&self, r: &[f64], t: &[f64], entities: &[f64], out: &mut [f64]) {
        self.score_tails(t, r, entities, out);
    }
}

pub fn fmult_i_score_paper(h: &[f64], r: &[f64], t: &[f64], degree: usize, domain: &Interval) -> Result<f64> {
    TrigScorer::new(h.len(), degree, *domain, TrigVariant::Paper)?.try_score(h, r, t)
}

pub fn fmult_i_score_full(h: &[f64], r: &[f64], t: &[f64], degree: usize, domain: &Interval) -> Result<f64> {
    TrigScorer::new(h.len(), degree, *domain, TrigVariant::Full)?.try_score(h, r, t)
}

pub fn fmult_i_grad(
    h: &[f64],
    r: &[f64],
    t: &[f64],
    degree: usize,
    domain: &Interval,
    variant: TrigVariant,
) -> Result<TripleGrad> {
    TrigScorer::new(h.len(), degree, *domain, variant)?.try_grad(h, r, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const UNIT: Interval = Interval::unit();

    #[test]
    fn degree_zero_is_real_part_of_product() {
        // a₀ = 1, b₀ = i, c₀ = i
        let s = fmult_i_score_paper(&[1.0, 0.0], &[0.0, 1.0], &[0.0, 1.0], 0, &UNIT).unwrap();
        assert_eq!(s, -1.0);
        let f = fmult_i_score_full(&[1.0, 0.0], &[0.0, 1.0], &[0.0, 1.0], 0, &UNIT).unwrap();
        assert_eq!(f, -1.0);
    }

    #[test]
    fn default_variant_degree_one_cross_term() {
        // a₀=b₀=c₀=0, a₁=b₁=c₁=1 → (1 − cos 3)/3
        let row = [0.0, 0.0, 1.0, 0.0];
        let s = fmult_i_score_paper(&row, &row, &row, 1, &UNIT).unwrap();
        let want = (1.0 - 3.0f64.cos()) / 3.0;
        assert!((s - want).abs() < 1e-15);
        assert!((s - 0.663_330_8).abs() < 1e-7);
    }

    #[test]
    fn full_degree_one_single_exponential() {
        // h = 1, r = e^{ix}, t = 1 → Re ∫₀¹ e^{ix} dx = sin 1
        let h = [1.0, 0.0, 0.0, 0.0];
        let r = [0.0, 0.0, 1.0, 0.0];
        let s = fmult_i_score_full(&h, &r, &h, 1, &UNIT).unwrap();
        assert!((s - 1.0f64.sin()).abs() < 1e-15);
        assert!((s - 0.841_471_0).abs() < 1e-7);
        // The paper variant drops this mixed-index term entirely.
        assert_eq!(fmult_i_score_paper(&h, &r, &h, 1, &UNIT).unwrap(), 0.0);
    }

    #[test]
    fn degree_zero_gradient() {
        let a = [0.3, -0.4];
        let b = [0.5, 0.2];
        let c = [-0.1, 0.7];
        let dom = Interval::new(0.0, 2.0).unwrap();
        for variant in [TrigVariant::Paper, TrigVariant::Full] {
            let g = fmult_i_grad(&a, &b, &c, 0, &dom, variant).unwrap();
            let bc = Complex64::new(b[0], b[1]) * Complex64::new(c[0], c[1]);
            assert!((g.head[0] - bc.re * 2.0).abs() < 1e-15);
            assert!((g.head[1] + bc.im * 2.0).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_relation_zeroes_entity_gradients() {
        let h = [0.3, -0.4, 0.1, 0.9];
        let t = [0.5, 0.2, -0.6, 0.3];
        for variant in [TrigVariant::Paper, TrigVariant::Full] {
            let g = fmult_i_grad(&h, &[0.0; 4], &t, 1, &UNIT, variant).unwrap();
            assert!(g.head.iter().chain(&g.tail).all(|&v| v == 0.0));
        }
    }

    #[test]
    fn rejects_odd_component_count() {
        assert!(TrigScorer::new(9, 2, UNIT, TrigVariant::Paper).is_err());
        assert!(TrigScorer::new(12, 2, UNIT, TrigVariant::Paper).is_ok());
        assert!(TrigScorer::new(8, 2, UNIT, TrigVariant::Full).is_err());
    }

    #[test]
    fn variant_parsing() {
        assert_eq!("full".parse::<TrigVariant>().unwrap(), TrigVariant::Full);
        assert_eq!(TrigVariant::Paper.to_string(), "paper");
        assert!("other".parse::<TrigVariant>().is_err());
    }

    #[test]
    fn tail_scan_matches_pointwise() {
        for variant in [TrigVariant::Paper, TrigVariant::Full] {
            let s = TrigScorer::new(8, 1, UNIT, variant).unwrap();
            let h = [0.1, 0.2, -0.3, 0.4, -0.5, 0.6, 0.2, 0.1];
            let r = [0.9, -0.1, 0.2, 0.3, 0.7, -0.8, -0.4, 0.5];
            let ents: Vec<f64> = (0..24).map(|i| ((i * 7) % 11) as f64 / 10.0 - 0.5).collect();
            let mut out = vec![0.0; 3];
            s.score_tails(&h, &r, &ents, &mut out);
            for (e, o) in ents.chunks(8).zip(&out) {
                assert!((s.score(&h, &r, e) - o).abs() < 1e-14);
            }
        }
    }

    fn rows(n: usize) -> impl Strategy<Value = Vec<f64>> {
        proptest::collection::vec(-1.0f64..1.0, n)
    }

    proptest! {
        #[test]
        fn variants_agree_bitwise_at_degree_zero(seed in rows(12)) {
            let (h, r, t) = (&seed[..4], &seed[4..8], &seed[8..]);
            let p = fmult_i_score_paper(h, r, t, 0, &UNIT).unwrap();
            let f = fmult_i_score_full(h, r, t, 0, &UNIT).unwrap();
            prop_assert_eq!(p.to_bits(), f.to_bits());
        }

        #[test]
        fn head_tail_swap_is_exact(degree in 0usize..4, seed in rows(3 * 16)) {
            let n = 2 * (degree + 1) * 2;
            let (h, r, t) = (&seed[..n], &seed[16..16 + n], &seed[32..32 + n]);
            for variant in [TrigVariant::Paper, TrigVariant::Full] {
                let s = TrigScorer::new(n, degree, UNIT, variant).unwrap();
                prop_assert_eq!(s.score(h, r, t).to_bits(), s.score(t, r, h).to_bits());
            }
        }

        #[test]
        fn full_variant_matches_integral(seed in rows(3 * 6)) {
            // degree 2, one complex component; Simpson on a fine grid.
            let s = TrigScorer::new(6, 2, UNIT, TrigVariant::Full).unwrap();
            let (h, r, t) = (&seed[..6], &seed[6..12], &seed[12..]);
            let f = |x: f64| (s.eval(h, x)[0] * s.eval(r, x)[0] * s.eval(t, x)[0]).re;
            let n = 2000;
            let dx = 1.0 / n as f64;
            let mut acc = f(0.0) + f(1.0);
            for i in 1..n {
                acc += if i % 2 == 1 { 4.0 } else { 2.0 } * f(i as f64 * dx);
            }
            let numeric = acc * dx / 3.0;
            prop_assert!((numeric - s.score(h, r, t)).abs() < 1e-10);
        }
    }
}
