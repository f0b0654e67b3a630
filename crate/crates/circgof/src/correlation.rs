//! Jammalamadaka-Sarma circular correlation and its asymptotic test of
//! zero correlation.

use crate::angle::{circular_mean, Angle};
use crate::error::{Error, Result};
use crate::real::Real;

/// Correlation coefficient for paired angles,
/// `ρ = Σ sin(aᵢ-ā) sin(bᵢ-b̄) / sqrt(Σ sin²(aᵢ-ā) Σ sin²(bᵢ-b̄))`
/// with `ā`, `b̄` the circular means, together with the two-sided p-value
/// of the asymptotic normal test of `ρ = 0`.
pub fn circular_correlation<T: Real>(a: &[Angle<T>], b: &[Angle<T>]) -> Result<(T, T)> {
    if a.len() != b.len() {
        return Err(Error::DegenerateSample(format!(
            "length mismatch: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    let n = a.len();
    if n < 3 {
        return Err(Error::DegenerateSample(format!("need n >= 3, got {n}")));
    }
    let abar = circular_mean(a)
        .ok_or_else(|| Error::DegenerateSample("first sample has no mean direction".into()))?;
    let bbar = circular_mean(b)
        .ok_or_else(|| Error::DegenerateSample("second sample has no mean direction".into()))?;

    let sa: Vec<T> = a.iter().map(|x| (x.radians() - abar.radians()).sin()).collect();
    let sb: Vec<T> = b.iter().map(|x| (x.radians() - bbar.radians()).sin()).collect();

    let s11 = dot(&sa, &sb);
    let s20 = dot(&sa, &sa);
    let s02 = dot(&sb, &sb);
    if s20 <= T::of(1e-24) || s02 <= T::of(1e-24) {
        return Err(Error::DegenerateSample(
            "all angles in one sample are equal".into(),
        ));
    }
    let rho = s11 / (s20 * s02).sqrt();

    // z = sqrt(n lam20 lam02 / lam22) rho ~ N(0,1) under independence
    let nf = T::of(n as f64);
    let lam20 = s20 / nf;
    let lam02 = s02 / nf;
    let lam22 = sa
        .iter()
        .zip(&sb)
        .map(|(&x, &y)| x * x * y * y)
        .fold(T::zero(), |acc, v| acc + v)
        / nf;
    let z = (nf * lam20 * lam02 / lam22).sqrt() * rho;
    let p = two_sided_normal_p(z.to_f64());
    Ok((rho, T::of(p)))
}

fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).fold(T::zero(), |acc, v| acc + v)
}

fn two_sided_normal_p(z: f64) -> f64 {
    let tail = 0.5 * statrs::function::erf::erfc(z.abs() / std::f64::consts::SQRT_2);
    (2.0 * tail).min(1.0)
}

/// Lag-`k` autocorrelations of a single angular series: coefficient and
/// p-value of `circular_correlation` on the pairs `(θ_i, θ_{i+k})`.
pub fn circular_autocorrelation<T: Real>(
    series: &[Angle<T>],
    max_lag: usize,
) -> Result<Vec<(usize, T, T)>> {
    let mut out = Vec::with_capacity(max_lag);
    for lag in 1..=max_lag {
        if series.len() < lag + 3 {
            return Err(Error::DegenerateSample(format!(
                "series too short for lag {lag}"
            )));
        }
        let a = &series[..series.len() - lag];
        let b = &series[lag..];
        let (rho, p) = circular_correlation(a, b)?;
        out.push((lag, rho, p));
    }
    Ok(out)
}
