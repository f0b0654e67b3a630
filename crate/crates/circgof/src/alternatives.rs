//! The six alternative error distributions of the power study: densities
//! and samplers.

use crate::angle::Angle;
use crate::error::{Error, Result};
use crate::quad::gauss16_composite;
use crate::sampler::AngleSampler;
use rand::Rng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    /// Wrapped normal WN(ρ), 0 < ρ < 1.
    WrappedNormal,
    /// Von Mises VM(κ), κ > 0.
    VonMises,
    /// Cardioid Ca(ρ), |ρ| < 1/2.
    Cardioid,
    /// Cartwright's power-of-cosine CW(ζ), ζ > 0.
    Cartwright,
    /// Jones-Pewsey JP(κ, ψ), κ ≥ 0, ψ ∈ ℝ.
    JonesPewsey,
    /// Batschelet Ba(κ, ν), κ ≥ 0, -1 ≤ ν ≤ 1.
    Batschelet,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlternativeSpec {
    pub family: Family,
    pub mu: Angle<f64>,
    pub shape1: f64,
    /// Second shape parameter; unused (and ignored) for the one-parameter
    /// families.
    pub shape2: f64,
}

impl AlternativeSpec {
    pub fn new(family: Family, mu: Angle<f64>, shape1: f64, shape2: f64) -> Result<Self> {
        let spec = AlternativeSpec {
            family,
            mu,
            shape1,
            shape2,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn one_param(family: Family, mu: Angle<f64>, shape1: f64) -> Result<Self> {
        AlternativeSpec::new(family, mu, shape1, 0.0)
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidShape(msg));
        if !self.shape1.is_finite() || !self.shape2.is_finite() {
            return bad(format!("non-finite shape parameters in {self:?}"));
        }
        match self.family {
            Family::WrappedNormal if !(self.shape1 > 0.0 && self.shape1 < 1.0) => {
                bad(format!("WN requires 0 < rho < 1, got {}", self.shape1))
            }
            Family::VonMises if !(self.shape1 > 0.0) => {
                bad(format!("VM requires kappa > 0, got {}", self.shape1))
            }
            Family::Cardioid if !(self.shape1.abs() < 0.5) => {
                bad(format!("Cardioid requires |rho| < 1/2, got {}", self.shape1))
            }
            Family::Cartwright if !(self.shape1 > 0.0) => {
                bad(format!("CW requires zeta > 0, got {}", self.shape1))
            }
            Family::JonesPewsey if !(self.shape1 >= 0.0) => {
                bad(format!("JP requires kappa >= 0, got {}", self.shape1))
            }
            Family::Batschelet
                if !(self.shape1 >= 0.0 && (-1.0..=1.0).contains(&self.shape2)) =>
            {
                bad(format!(
                    "Ba requires kappa >= 0 and -1 <= nu <= 1, got ({}, {})",
                    self.shape1, self.shape2
                ))
            }
            _ => Ok(()),
        }
    }
}

/// Density of the alternative at `theta`.
pub fn alt_density(spec: &AlternativeSpec, theta: Angle<f64>) -> Result<f64> {
    Ok(AltDist::new(*spec)?.density(theta))
}

/// A validated alternative with its normalizing constant (and, for the
/// inverse-CDF families, its sampling table) prepared once.
pub struct AltDist {
    spec: AlternativeSpec,
    norm: f64,
    table: Option<InverseCdfTable>,
}

impl AltDist {
    pub fn new(spec: AlternativeSpec) -> Result<Self> {
        spec.validate()?;
        // JP with |psi| below the switch point is evaluated as its VM limit
        let spec = match spec.family {
            Family::JonesPewsey if spec.shape2.abs() < 1e-6 && spec.shape1 > 0.0 => {
                AlternativeSpec {
                    family: Family::VonMises,
                    mu: spec.mu,
                    shape1: spec.shape1,
                    shape2: 0.0,
                }
            }
            _ => spec,
        };
        let norm = match spec.family {
            Family::WrappedNormal | Family::Cardioid => 1.0,
            Family::VonMises => TAU * bessel_i0(spec.shape1),
            Family::Cartwright => {
                let z = spec.shape1;
                let ln = (1.0 / z - 1.0) * std::f64::consts::LN_2
                    + 2.0 * statrs::function::gamma::ln_gamma(1.0 / z + 1.0)
                    - statrs::function::gamma::ln_gamma(2.0 / z + 1.0)
                    - PI.ln();
                // density = e^{ln} (1+cos)^{1/z}; fold the constant into norm
                (-ln).exp()
            }
            Family::JonesPewsey | Family::Batschelet => {
                let s = spec;
                gauss16_composite(|x| unnormalized(&s, x - s.mu.radians()), 0.0, TAU, 64)
            }
        };
        let table = match spec.family {
            Family::WrappedNormal | Family::VonMises => None,
            _ => Some(InverseCdfTable::build(&spec, norm)),
        };
        Ok(AltDist { spec, norm, table })
    }

    pub fn spec(&self) -> &AlternativeSpec {
        &self.spec
    }

    pub fn density(&self, theta: Angle<f64>) -> f64 {
        let x = (theta - self.spec.mu).radians();
        match self.spec.family {
            Family::WrappedNormal | Family::Cardioid => unnormalized(&self.spec, x),
            _ => unnormalized(&self.spec, x) / self.norm,
        }
    }
}

/// Density without the normalizing constant, as a function of `θ - μ`
/// (WN and cardioid are returned fully normalized).
fn unnormalized(spec: &AlternativeSpec, x: f64) -> f64 {
    match spec.family {
        Family::WrappedNormal => {
            let rho = spec.shape1;
            let mut acc = 1.0;
            let mut k = 1u32;
            loop {
                let coef = rho.powi((k * k) as i32);
                if coef < 1e-16 {
                    break;
                }
                acc += 2.0 * coef * (k as f64 * x).cos();
                k += 1;
            }
            acc / TAU
        }
        Family::VonMises => (spec.shape1 * x.cos()).exp(),
        Family::Cardioid => (1.0 + 2.0 * spec.shape1 * x.cos()) / TAU,
        Family::Cartwright => (1.0 + x.cos()).powf(1.0 / spec.shape1),
        Family::JonesPewsey => {
            let (kappa, psi) = (spec.shape1, spec.shape2);
            let bracket = (kappa * psi).cosh() + (kappa * psi).sinh() * x.cos();
            bracket.powf(1.0 / psi)
        }
        Family::Batschelet => {
            let (kappa, nu) = (spec.shape1, spec.shape2);
            (kappa * (x + nu * x.sin()).cos()).exp()
        }
    }
}

/// Modified Bessel function of the first kind, order zero, by its power
/// series. Converges quickly for the moderate arguments used here.
pub fn bessel_i0(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0;
    while term > 1e-18 * sum {
        term *= q / (k * k);
        sum += term;
        k += 1.0;
    }
    sum
}

impl AngleSampler for AltDist {
    fn sample_one(&self, rng: &mut ChaCha12Rng) -> Angle<f64> {
        match self.spec.family {
            Family::WrappedNormal => {
                // wrap N(mu, sigma^2) with sigma^2 = -2 ln rho
                let sigma = (-2.0 * self.spec.shape1.ln()).sqrt();
                let z: f64 = StandardNormal.sample(rng);
                self.spec.mu + sigma * z
            }
            Family::VonMises => self.spec.mu + sample_von_mises(self.spec.shape1, rng),
            _ => {
                let u: f64 = rng.gen();
                Angle::new(self.table.as_ref().unwrap().invert(u))
            }
        }
    }
}

/// Best-Fisher rejection sampler for a centered von Mises angle.
fn sample_von_mises(kappa: f64, rng: &mut ChaCha12Rng) -> f64 {
    let a = 1.0 + (1.0 + 4.0 * kappa * kappa).sqrt();
    let b = (a - (2.0 * a).sqrt()) / (2.0 * kappa);
    let r = (1.0 + b * b) / (2.0 * b);
    loop {
        let u1: f64 = rng.gen();
        let u2: f64 = rng.gen();
        let z = (PI * u1).cos();
        let f = (1.0 + r * z) / (r + z);
        let c = kappa * (r - f);
        if c * (2.0 - c) - u2 > 0.0 || (c / u2).ln() + 1.0 - c >= 0.0 {
            let u3: f64 = rng.gen();
            let sign = if u3 > 0.5 { 1.0 } else { -1.0 };
            return sign * f.clamp(-1.0, 1.0).acos();
        }
    }
}

/// Tabulated CDF over a uniform 2048-cell grid on `[0, 2π)`, inverted by
/// bisection on a monotone cubic Hermite interpolant.
struct InverseCdfTable {
    /// CDF at the `CELLS + 1` grid nodes, rescaled so the last entry is 1.
    cdf: Vec<f64>,
    /// Density at the grid nodes, rescaled by the same factor.
    pdf: Vec<f64>,
    h: f64,
}

const CELLS: usize = 2048;

impl InverseCdfTable {
    fn build(spec: &AlternativeSpec, norm: f64) -> Self {
        let h = TAU / CELLS as f64;
        let scale = match spec.family {
            Family::WrappedNormal | Family::Cardioid => 1.0,
            _ => norm,
        };
        let dens = |x: f64| unnormalized(spec, x - spec.mu.radians()) / scale;
        let mut cdf = Vec::with_capacity(CELLS + 1);
        cdf.push(0.0);
        let mut acc = 0.0;
        for i in 0..CELLS {
            acc += crate::quad::gauss16(dens, i as f64 * h, (i + 1) as f64 * h);
            cdf.push(acc);
        }
        let total = *cdf.last().unwrap();
        let pdf: Vec<f64> = (0..=CELLS).map(|i| dens(i as f64 * h) / total).collect();
        for v in cdf.iter_mut() {
            *v /= total;
        }
        InverseCdfTable { cdf, pdf, h }
    }

    fn invert(&self, u: f64) -> f64 {
        let i = self.cdf.partition_point(|&c| c <= u).saturating_sub(1).min(CELLS - 1);
        let (c0, c1) = (self.cdf[i], self.cdf[i + 1]);
        let (f0, f1) = (self.pdf[i] * self.h, self.pdf[i + 1] * self.h);
        // cubic Hermite of the CDF over the cell, solved by bisection
        let hermite = |s: f64| {
            let s2 = s * s;
            let s3 = s2 * s;
            c0 * (2.0 * s3 - 3.0 * s2 + 1.0)
                + f0 * (s3 - 2.0 * s2 + s)
                + c1 * (-2.0 * s3 + 3.0 * s2)
                + f1 * (s3 - s2)
        };
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        while (hi - lo) * self.h > 1e-9 {
            let mid = 0.5 * (lo + hi);
            if hermite(mid) < u {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (i as f64 + 0.5 * (lo + hi)) * self.h
    }
}
