//! Bessel functions of the first kind of orders 0 and 1 and the first zero of `J_0`.

/// `J_0(x)` by its power series, accurate to ~1e-15 for `|x| <= 12`.
pub fn bessel_j0(x: f64) -> f64 {
    series(x, 0)
}

/// `J_1(x)` by its power series, accurate to ~1e-15 for `|x| <= 12`.
pub fn bessel_j1(x: f64) -> f64 {
    series(x, 1)
}

fn series(x: f64, order: u32) -> f64 {
    let q = -0.25 * x * x;
    let mut term = if order == 0 { 1.0 } else { 0.5 * x };
    let mut sum = term;
    for k in 1..200 {
        let kf = k as f64;
        term *= q / (kf * (kf + order as f64));
        sum += term;
        if term.abs() < 1e-18 * sum.abs().max(1e-300) {
            break;
        }
    }
    sum
}

/// First positive zero of `J_0`, located by bisection on `[2, 3]`.
pub fn j0_first_zero() -> f64 {
    let (mut lo, mut hi) = (2.0_f64, 3.0_f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if bessel_j0(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-16 {
            break;
        }
    }
    0.5 * (lo + hi)
}
