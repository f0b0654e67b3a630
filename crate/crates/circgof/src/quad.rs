//! Small quadrature routines used for normalizing constants and for the
//! oracle checks in the test suite.

use crate::real::Real;

/// Adaptive Simpson integration of `f` over `[a, b]` to absolute tolerance
/// `tol`, with recursion depth capped at `max_depth`.
pub fn adaptive_simpson<T: Real>(f: impl Fn(T) -> T, a: T, b: T, tol: T, max_depth: u32) -> T {
    // start from a fixed 8-panel partition: a single panel lets symmetric
    // integrands (common on the circle) produce an exactly-zero error
    // estimate at the first refinement and stop at a bad coarse value
    const PANELS: u32 = 8;
    let h = (b - a) / T::of(PANELS as f64);
    let panel_tol = tol / T::of(PANELS as f64);
    let mut total = T::zero();
    for k in 0..PANELS {
        let pa = a + h * T::of(k as f64);
        let pb = if k == PANELS - 1 { b } else { pa + h };
        let fa = f(pa);
        let fb = f(pb);
        let m = (pa + pb) * T::of(0.5);
        let fm = f(m);
        let whole = simpson(pa, pb, fa, fm, fb);
        total = total + rec(&f, pa, pb, fa, fm, fb, whole, panel_tol, max_depth);
    }
    total
}

#[inline]
fn simpson<T: Real>(a: T, b: T, fa: T, fm: T, fb: T) -> T {
    (b - a) / T::of(6.0) * (fa + T::of(4.0) * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn rec<T: Real>(
    f: &impl Fn(T) -> T,
    a: T,
    b: T,
    fa: T,
    fm: T,
    fb: T,
    whole: T,
    tol: T,
    depth: u32,
) -> T {
    let m = (a + b) * T::of(0.5);
    let lm = (a + m) * T::of(0.5);
    let rm = (m + b) * T::of(0.5);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let delta = left + right - whole;
    // stop on convergence, exhausted depth, or an interval too narrow to
    // split further (the per-level tol halving otherwise demands
    // sub-rounding accuracy and the recursion degenerates)
    if depth == 0 || delta.abs() <= T::of(15.0) * tol || !(a < lm && rm < b) {
        left + right + delta / T::of(15.0)
    } else {
        // never demand accuracy below rounding noise
        let half = (tol * T::of(0.5)).max(T::epsilon());
        rec(f, a, m, fa, flm, fm, left, half, depth - 1)
            + rec(f, m, b, fm, frm, fb, right, half, depth - 1)
    }
}

/// Nodes and weights of the 16-point Gauss-Legendre rule on `[-1, 1]`.
const GL16_X: [f64; 8] = [
    0.0950125098376374,
    0.2816035507792589,
    0.4580167776572274,
    0.6178762444026438,
    0.7554044083550030,
    0.8656312023878318,
    0.9445750230732326,
    0.9894009349916499,
];
const GL16_W: [f64; 8] = [
    0.1894506104550685,
    0.1826034150449236,
    0.1691565193950025,
    0.1495959888165767,
    0.1246289712555339,
    0.0951585116824928,
    0.0622535239386479,
    0.0271524594117541,
];

/// 16-point Gauss-Legendre rule over `[a, b]`.
pub fn gauss16(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut acc = 0.0;
    for i in 0..8 {
        acc += GL16_W[i] * (f(c - h * GL16_X[i]) + f(c + h * GL16_X[i]));
    }
    acc * h
}

/// Composite 16-point Gauss-Legendre over `cells` equal subintervals.
pub fn gauss16_composite(f: impl Fn(f64) -> f64, a: f64, b: f64, cells: usize) -> f64 {
    let h = (b - a) / cells as f64;
    (0..cells)
        .map(|i| gauss16(&f, a + i as f64 * h, a + (i + 1) as f64 * h))
        .sum()
}
