//! Independent reference computations shared by integration tests.
//!
//! Nothing here calls into the library's scoring code: integrals are taken
//! by a dense composite trapezoid rule over pointwise evaluations.

#![allow(dead_code)]

pub const PANELS: usize = 10_000;

/// Composite trapezoid rule with `panels` equal panels.
pub fn trapezoid(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    let inner: f64 = (1..panels).map(|i| f(a + h * i as f64)).sum();
    h * (0.5 * f(a) + inner + 0.5 * f(b))
}

/// `Σ_i c_i x^i` with explicit powers.
pub fn poly_at(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().enumerate().map(|(i, c)| c * x.powi(i as i32)).sum()
}

/// Exact `∫_a^b Σ c_i x^i dx` from the antiderivative.
pub fn poly_integral(coeffs: &[f64], a: f64, b: f64) -> f64 {
    coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let p = i as i32 + 1;
            c * (b.powi(p) - a.powi(p)) / p as f64
        })
        .sum()
}

/// Trapezoid integral of `Σ_c h_c r_c t_c` for component-major polynomial rows.
pub fn poly_triple(h: &[f64], r: &[f64], t: &[f64], degree: usize, a: f64, b: f64) -> f64 {
    let w = degree + 1;
    trapezoid(
        |x| {
            (0..h.len() / w)
                .map(|c| {
                    let s = c * w..(c + 1) * w;
                    poly_at(&h[s.clone()], x) * poly_at(&r[s.clone()], x) * poly_at(&t[s], x)
                })
                .sum()
        },
        a,
        b,
        PANELS,
    )
}

/// `(re, im)` of `Σ_k α_k e^{ikx}` for one component of interleaved pairs.
fn trig_at(coeffs: &[f64], x: f64) -> (f64, f64) {
    coeffs.chunks_exact(2).enumerate().fold((0.0, 0.0), |(re, im), (k, a)| {
        let (c, s) = ((k as f64 * x).cos(), (k as f64 * x).sin());
        (re + a[0] * c - a[1] * s, im + a[0] * s + a[1] * c)
    })
}

/// Trapezoid integral of `Re Σ_c h_c r_c t_c` for trig rows.
pub fn trig_triple(h: &[f64], r: &[f64], t: &[f64], degree: usize, a: f64, b: f64) -> f64 {
    trig_triple_parts(h, r, t, degree, a, b).0
}

/// Trapezoid integrals of the real and imaginary parts of `Σ_c h_c r_c t_c`.
pub fn trig_triple_parts(h: &[f64], r: &[f64], t: &[f64], degree: usize, a: f64, b: f64) -> (f64, f64) {
    let re = trig_product(h, r, t, degree, a, b, false);
    let im = trig_product(h, r, t, degree, a, b, true);
    (re, im)
}

fn trig_product(h: &[f64], r: &[f64], t: &[f64], degree: usize, a: f64, b: f64, imag: bool) -> f64 {
    let w = 2 * (degree + 1);
    trapezoid(
        |x| {
            (0..h.len() / w)
                .map(|c| {
                    let s = c * w..(c + 1) * w;
                    let (hr, hi) = trig_at(&h[s.clone()], x);
                    let (rr, ri) = trig_at(&r[s.clone()], x);
                    let (tr, ti) = trig_at(&t[s], x);
                    let (pr, pi) = (hr * rr - hi * ri, hr * ri + hi * rr);
                    if imag {
                        pr * ti + pi * tr
                    } else {
                        pr * tr - pi * ti
                    }
                })
                .sum()
        },
        a,
        b,
        PANELS,
    )
}

/// One scalar tanh chain; lowest-indexed layer first.
fn chain_at(w: &[f64], b: &[f64], x: f64) -> f64 {
    let mut y = x;
    for l in 0..w.len() {
        y = (w[l] * y + b[l]).tanh();
    }
    y
}

/// Trapezoid integral of `Σ_c h_c(r_c(x)) t_c(x)` for neural rows.
pub fn neural_triple(h: &[f64], r: &[f64], t: &[f64], layers: usize, a: f64, b: f64) -> f64 {
    let half = h.len() / 2;
    let part = |row: &[f64], c: usize| -> (Vec<f64>, Vec<f64>) {
        let s = c * layers..(c + 1) * layers;
        (row[s.clone()].to_vec(), row[half + s.start..half + s.end].to_vec())
    };
    trapezoid(
        |x| {
            (0..half / layers)
                .map(|c| {
                    let (hw, hb) = part(h, c);
                    let (rw, rb) = part(r, c);
                    let (tw, tb) = part(t, c);
                    chain_at(&hw, &hb, chain_at(&rw, &rb, x)) * chain_at(&tw, &tb, x)
                })
                .sum()
        },
        a,
        b,
        PANELS,
    )
}

pub fn distmult(h: &[f64], r: &[f64], t: &[f64]) -> f64 {
    (0..h.len()).map(|i| h[i] * r[i] * t[i]).sum()
}

/// `Re Σ h_i r_i t_i` over interleaved complex pairs, no conjugation.
pub fn complex(h: &[f64], r: &[f64], t: &[f64]) -> f64 {
    (0..h.len() / 2)
        .map(|i| {
            let (a, b) = (h[2 * i], h[2 * i + 1]);
            let (c, d) = (r[2 * i], r[2 * i + 1]);
            let (e, f) = (t[2 * i], t[2 * i + 1]);
            // Re((a+ib)(c+id)(e+if))
            a * c * e - b * d * e - a * d * f - b * c * f
        })
        .sum()
}
