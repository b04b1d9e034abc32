use std::f64::consts::PI;

use super::Vec2;

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "Gauss-Legendre needs at least one node");
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        dp = if d != 0.0 { d } else { dp };
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, z);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

/// `(nodes, weights)` of the 5-point rule used on boundary edges.
pub fn gl5() -> &'static ([f64; 5], [f64; 5]) {
    static RULE: ([f64; 5], [f64; 5]) = (
        [
            -0.906_179_845_938_664,
            -0.538_469_310_105_683_1,
            0.0,
            0.538_469_310_105_683_1,
            0.906_179_845_938_664,
        ],
        [
            0.236_926_885_056_189_1,
            0.478_628_670_499_366_5,
            0.568_888_888_888_888_9,
            0.478_628_670_499_366_5,
            0.236_926_885_056_189_1,
        ],
    );
    &RULE
}

/// Integral of `f` over the segment `[a, b]` with the 5-point rule.
pub fn segment_integral(a: Vec2, b: Vec2, f: impl Fn(Vec2) -> f64) -> f64 {
    let (x, w) = gl5();
    let half = 0.5 * a.dist(b);
    let mid = (a + b) * 0.5;
    let d = (b - a) * 0.5;
    let mut s = 0.0;
    for k in 0..5 {
        s += w[k] * f(mid + d * x[k]);
    }
    s * half
}

/// Symmetric 6-point triangle rule, exact for polynomials of degree 4.
/// Barycentric coordinates and weights normalized to sum to 1.
pub const TRI6: [([f64; 3], f64); 6] = {
    const A: f64 = 0.445_948_490_915_965;
    const B: f64 = 0.108_103_018_168_070;
    const C: f64 = 0.091_576_213_509_771;
    const D: f64 = 0.816_847_572_980_459;
    const WA: f64 = 0.223_381_589_678_011;
    const WC: f64 = 0.109_951_743_655_322;
    [
        ([B, A, A], WA),
        ([A, B, A], WA),
        ([A, A, B], WA),
        ([D, C, C], WC),
        ([C, D, C], WC),
        ([C, C, D], WC),
    ]
};

/// Integral of `f` over the triangle `p` with [`TRI6`].
pub fn triangle_integral(p: [Vec2; 3], f: impl Fn(Vec2) -> f64) -> f64 {
    let area = 0.5 * (p[1] - p[0]).cross(p[2] - p[0]).abs();
    let mut s = 0.0;
    for (l, w) in TRI6 {
        s += w * f(p[0] * l[0] + p[1] * l[1] + p[2] * l[2]);
    }
    s * area
}

/// Integral of `f` over `[a, b]` on panels graded geometrically toward both
/// endpoints, for integrands with integrable endpoint singularities.
pub fn graded_integral(a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
    let (x, w) = gauss_legendre(12);
    let panel = |lo: f64, hi: f64| -> f64 {
        let (m, r) = (0.5 * (lo + hi), 0.5 * (hi - lo));
        x.iter().zip(&w).map(|(&xi, &wi)| wi * f(m + r * xi)).sum::<f64>() * r
    };
    let len = b - a;
    let mut breaks = vec![0.25, 0.5, 0.75];
    for k in 3..40 {
        let t = 0.5f64.powi(k);
        breaks.push(t);
        breaks.push(1.0 - t);
    }
    breaks.push(0.0);
    breaks.push(1.0);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    breaks.windows(2).map(|s| panel(a + len * s[0], a + len * s[1])).sum()
}
