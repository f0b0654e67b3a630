//! The wrapped Cauchy distribution: density, distribution function,
//! characteristic function and an exact sampler.

use crate::angle::Angle;
use crate::error::{Error, Result};
use crate::real::Real;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Parameters of a wrapped Cauchy law: mean direction `mu` and
/// concentration `delta` in `[0, 1)`. `delta = 0` is the circular uniform
/// distribution; the limit `delta = 1` is excluded.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Real + Deserialize<'de>"))]
pub struct WcParams<T> {
    mu: Angle<T>,
    delta: T,
}

impl<T: Real> WcParams<T> {
    pub fn new(mu: Angle<T>, delta: T) -> Result<Self> {
        if !(delta >= T::zero() && delta < T::one()) {
            return Err(Error::InvalidParam(format!(
                "wrapped Cauchy concentration must lie in [0, 1), got {:?}",
                delta
            )));
        }
        Ok(WcParams { mu, delta })
    }

    /// Centered law `WC(0, delta)`.
    pub fn centered(delta: T) -> Result<Self> {
        WcParams::new(Angle::zero(), delta)
    }

    pub fn mu(&self) -> Angle<T> {
        self.mu
    }

    pub fn delta(&self) -> T {
        self.delta
    }

    /// Density per radian at `theta`.
    pub fn density(&self, theta: Angle<T>) -> T {
        wc_density(theta, self)
    }

    /// i.i.d. draws, wrapping a Cauchy with location `mu` and scale
    /// `-ln delta`. Rejection-free and exact; `delta = 0` samples the
    /// circular uniform.
    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<Angle<T>> {
        (0..n).map(|_| self.sample_one(rng)).collect()
    }

    pub fn sample_one<R: Rng + ?Sized>(&self, rng: &mut R) -> Angle<T> {
        let u: f64 = rng.gen();
        if self.delta == T::zero() {
            return Angle::new(T::of(u) * T::TAU());
        }
        let gamma = -self.delta.to_f64().ln();
        let draw = gamma * (std::f64::consts::PI * (u - 0.5)).tan();
        self.mu + T::of(draw)
    }
}

/// Wrapped Cauchy density `(1/2π)(1-δ²)/(1-2δcos(θ-μ)+δ²)`.
pub fn wc_density<T: Real>(theta: Angle<T>, params: &WcParams<T>) -> T {
    let d = params.delta;
    let c = (theta - params.mu).radians().cos();
    let two = T::of(2.0);
    (T::one() - d * d) / (T::TAU() * (T::one() - two * d * c + d * d))
}

/// Distribution function of `WC(0, delta)` over `[0, 2π)` starting at 0.
///
/// Closed form via the Cauchy-Schloemilch substitution,
/// `F(θ) = (1/π) atan(((1+δ)/(1-δ)) tan(θ/2))` continued across the branch
/// at `θ = π`.
pub fn wc_cdf<T: Real>(theta: Angle<T>, delta: T) -> T {
    debug_assert!(delta >= T::zero() && delta < T::one());
    let th = theta.radians();
    if delta == T::zero() {
        return th / T::TAU();
    }
    let c = (T::one() + delta) / (T::one() - delta);
    let half = T::of(0.5);
    let base = (c * (th * half).tan()).atan() / T::PI();
    let v = if th < T::PI() {
        base
    } else if th == T::PI() {
        half
    } else {
        T::one() + base
    };
    v.max(T::zero()).min(T::one())
}

/// Characteristic function of `WC(0, delta)` at integer frequency `t`:
/// `E e^{itθ} = δ^t` (real), with value 1 at `t = 0` for every `delta`.
pub fn wc_charfn<T: Real>(t: u32, delta: T) -> T {
    debug_assert!(delta >= T::zero() && delta < T::one());
    if t == 0 {
        T::one()
    } else {
        delta.powi(t as i32)
    }
}
