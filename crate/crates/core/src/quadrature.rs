//! Five-node Gauss–Legendre quadrature over finite intervals.
//!
//! The rule is fixed: five nodes on `[-1, 1]`, mapped onto an arbitrary
//! interval `[a, b]` by `x ↦ (b - a)/2 · x + (b + a)/2`. It is exact for
//! polynomials of degree ≤ 9.

use crate::error::{Error, Result};

/// Closed integration domain `[lower, upper]` with `lower < upper`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lower: f64,
    upper: f64,
}

impl Interval {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if !(lower.is_finite() && upper.is_finite()) || lower >= upper {
            return Err(Error::config(format!(
                "interval bounds must be finite with lower < upper, got [{lower}, {upper}]"
            )));
        }
        Ok(Self { lower, upper })
    }

    /// The unit interval `[0, 1]`.
    pub const fn unit() -> Self {
        Self {
            lower: 0.0,
            upper: 1.0,
        }
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn length(&self) -> f64 {
        self.upper - self.lower
    }

    /// `n` evenly spaced points covering both endpoints.
    pub fn grid(&self, n: usize) -> Vec<f64> {
        match n {
            0 => Vec::new(),
            1 => vec![self.lower],
            _ => {
                let step = self.length() / (n - 1) as f64;
                (0..n)
                    .map(|i| {
                        if i == n - 1 {
                            self.upper
                        } else {
                            self.lower + step * i as f64
                        }
                    })
                    .collect()
            }
        }
    }
}

impl Default for Interval {
    fn default() -> Self {
        Self::unit()
    }
}

/// Nodes and weights of a quadrature rule on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: [f64; 5],
    weights: [f64; 5],
}

/// The five-point Gauss–Legendre rule, computed from its closed-form radicals.
///
/// Nodes are returned in ascending order.
pub fn legendre5() -> QuadratureRule {
    let r = (10.0f64 / 7.0).sqrt();
    let inner = (5.0 - 2.0 * r).sqrt() / 3.0;
    let outer = (5.0 + 2.0 * r).sqrt() / 3.0;
    let s70 = 70.0f64.sqrt();
    let w_inner = (322.0 + 13.0 * s70) / 900.0;
    let w_outer = (322.0 - 13.0 * s70) / 900.0;
    let w_center = 128.0 / 225.0;
    QuadratureRule {
        nodes: [-outer, -inner, 0.0, inner, outer],
        weights: [w_outer, w_inner, w_center, w_inner, w_outer],
    }
}

impl Default for QuadratureRule {
    fn default() -> Self {
        legendre5()
    }
}

impl QuadratureRule {
    pub fn nodes(&self) -> &[f64; 5] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64; 5] {
        &self.weights
    }

    /// Nodes and weights after the change of variable onto `domain`.
    ///
    /// The returned weights already include the `(b - a)/2` Jacobian, so
    /// `Σ w̃_k f(x̃_k)` approximates `∫_domain f`.
    pub fn mapped(&self, domain: &Interval) -> MappedRule {
        let half = domain.length() / 2.0;
        let mid = (domain.upper() + domain.lower()) / 2.0;
        let mut points = [0.0; 5];
        let mut weights = [0.0; 5];
        for k in 0..5 {
            points[k] = half * self.nodes[k] + mid;
            weights[k] = half * self.weights[k];
        }
        MappedRule { points, weights }
    }

    /// `((b-a)/2) Σ_k w_k f(((b-a)/2) x_k + (b+a)/2)`.
    pub fn integrate<F>(&self, f: F, domain: &Interval) -> f64
    where
        F: Fn(f64) -> f64,
    {
        let half = domain.length() / 2.0;
        let mid = (domain.upper() + domain.lower()) / 2.0;
        let sum: f64 = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(half * x + mid))
            .sum();
        half * sum
    }
}

/// A rule already mapped onto a specific interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MappedRule {
    pub points: [f64; 5],
    pub weights: [f64; 5],
}

/// Integrates `f` over `domain` with [`legendre5`].
pub fn integrate<F>(f: F, domain: &Interval) -> f64
where
    F: Fn(f64) -> f64,
{
    legendre5().integrate(f, domain)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Exact integral of Σ c_i x^i over [a, b] from the antiderivative.
    fn poly_integral(coeffs: &[f64], a: f64, b: f64) -> f64 {
        coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let p = (i + 1) as i32;
                c * (b.powi(p) - a.powi(p)) / p as f64
            })
            .sum()
    }

    fn eval_poly(coeffs: &[f64], x: f64) -> f64 {
        coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
    }

    #[test]
    fn center_node_and_weight() {
        let rule = legendre5();
        assert_eq!(rule.nodes()[2], 0.0);
        assert!((rule.weights()[2] - 128.0 / 225.0).abs() < 1e-15);
    }

    #[test]
    fn weights_sum_to_two() {
        let s: f64 = legendre5().weights().iter().sum();
        assert!((s - 2.0).abs() < 1e-12);
    }

    #[test]
    fn nodes_strictly_increasing_and_symmetric() {
        let rule = legendre5();
        let n = rule.nodes();
        assert!(n.windows(2).all(|w| w[0] < w[1]));
        let w = rule.weights();
        for k in 0..5 {
            assert_eq!(n[k], -n[4 - k]);
            assert_eq!(w[k], w[4 - k]);
            assert!(w[k] > 0.0);
            assert!(n[k].abs() <= 1.0);
        }
    }

    #[test]
    fn nodes_match_known_decimals() {
        // Standard tabulated values of the 5-point Gauss–Legendre rule.
        let rule = legendre5();
        assert!((rule.nodes()[4] - 0.906_179_845_938_664).abs() < 1e-14);
        assert!((rule.nodes()[3] - 0.538_469_310_105_683).abs() < 1e-14);
        assert!((rule.weights()[4] - 0.236_926_885_056_189).abs() < 1e-14);
        assert!((rule.weights()[3] - 0.478_628_670_499_366).abs() < 1e-14);
    }

    #[test]
    fn constant_on_unit_interval() {
        assert!((integrate(|_| 1.0, &Interval::unit()) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn degree_nine_polynomial() {
        let dom = Interval::new(-1.0, 1.0).unwrap();
        let got = integrate(|x| x.powi(9) + x * x, &dom);
        assert!((got - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn odd_integrand_vanishes() {
        let dom = Interval::new(-2.0, 2.0).unwrap();
        assert!(integrate(f64::tanh, &dom).abs() < 1e-12);
    }

    #[test]
    fn rejects_empty_interval() {
        assert!(Interval::new(1.0, 1.0).is_err());
        assert!(Interval::new(2.0, 1.0).is_err());
        assert!(Interval::new(0.0, f64::INFINITY).is_err());
    }

    #[test]
    fn mapped_rule_matches_integrate() {
        let dom = Interval::new(-0.5, 2.0).unwrap();
        let rule = legendre5();
        let m = rule.mapped(&dom);
        let f = |x: f64| (x * 1.3).sin() + x * x;
        let via_mapped: f64 = (0..5).map(|k| m.weights[k] * f(m.points[k])).sum();
        assert!((via_mapped - rule.integrate(f, &dom)).abs() < 1e-14);
    }

    #[test]
    fn grid_covers_endpoints() {
        let g = Interval::new(-1.0, 3.0).unwrap().grid(5);
        assert_eq!(g, vec![-1.0, 0.0, 1.0, 2.0, 3.0]);
    }

    proptest! {
        #[test]
        fn linearity(alpha in -10.0f64..10.0, beta in -10.0f64..10.0,
                     a in -3.0f64..0.0, width in 0.1f64..3.0) {
            let dom = Interval::new(a, a + width).unwrap();
            let f = |x: f64| (2.0 * x).cos();
            let g = |x: f64| x.exp() * 0.1;
            let lhs = integrate(|x| alpha * f(x) + beta * g(x), &dom);
            let rhs = alpha * integrate(f, &dom) + beta * integrate(g, &dom);
            prop_assert!((lhs - rhs).abs() < 1e-12);
        }

        #[test]
        fn exact_for_degree_nine(coeffs in proptest::collection::vec(-1.0f64..1.0, 1..=10),
                                 a in -3.0f64..2.9, width in 0.05f64..3.0) {
            let b = (a + width).min(3.0);
            let dom = Interval::new(a, b).unwrap();
            let got = integrate(|x| eval_poly(&coeffs, x), &dom);
            let want = poly_integral(&coeffs, a, b);
            let scale = want.abs().max(1e-3);
            prop_assert!((got - want).abs() / scale < 1e-10, "got {got} want {want}");
        }

        #[test]
        fn interval_additivity(a in -1.0f64..0.0, mid in 0.01f64..0.3, width in 0.01f64..0.3) {
            // Smooth, slowly varying integrand on short intervals.
            let f = |x: f64| (x * 0.7).sin() + 0.5 * (x * 0.3).exp();
            let b = a + mid;
            let c = b + width;
            let whole = integrate(f, &Interval::new(a, c).unwrap());
            let parts = integrate(f, &Interval::new(a, b).unwrap())
                + integrate(f, &Interval::new(b, c).unwrap());
            prop_assert!((whole - parts).abs() < 1e-8);
        }
    }
}
