//! Directions on the circle, canonical in `[0, 2π)`.

use crate::real::Real;
use serde::{Deserialize, Deserializer, Serialize};
use std::ops::{Add, Neg, Sub};

/// An angle in radians, normalized to `[0, 2π)` by every constructor and
/// arithmetic operation.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct Angle<T>(T);

impl<'de, T: Real + Deserialize<'de>> Deserialize<'de> for Angle<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        T::deserialize(deserializer).map(Angle::new)
    }
}

impl<T: Real> Angle<T> {
    pub fn new(radians: T) -> Self {
        Angle(normalize(radians))
    }

    pub fn from_degrees(deg: T) -> Self {
        Angle::new(deg * T::PI() / T::of(180.0))
    }

    pub fn zero() -> Self {
        Angle(T::zero())
    }

    #[inline]
    pub fn radians(self) -> T {
        self.0
    }

    pub fn degrees(self) -> T {
        self.0 * T::of(180.0) / T::PI()
    }

    /// The point `e^{iθ}` on the unit circle as `(cos θ, sin θ)`.
    #[inline]
    pub fn unit(self) -> (T, T) {
        (self.0.cos(), self.0.sin())
    }

    /// Angle of the complex number `(re, im)`.
    pub fn from_complex(re: T, im: T) -> Self {
        Angle::new(im.atan2(re))
    }

    /// Signed distance to `other` in `(-π, π]`.
    pub fn signed_distance(self, other: Self) -> T {
        let d = (other.0 - self.0 + T::PI()) % T::TAU();
        let d = if d < T::zero() { d + T::TAU() } else { d };
        d - T::PI()
    }
}

#[inline]
fn normalize<T: Real>(x: T) -> T {
    let tau = T::TAU();
    let mut v = x % tau;
    if v < T::zero() {
        v = v + tau;
    }
    // x % tau can round up to tau for tiny negative x
    if v >= tau {
        v = v - tau;
    }
    v
}

impl<T: Real> Add for Angle<T> {
    type Output = Angle<T>;
    fn add(self, rhs: Self) -> Angle<T> {
        Angle::new(self.0 + rhs.0)
    }
}

impl<T: Real> Sub for Angle<T> {
    type Output = Angle<T>;
    fn sub(self, rhs: Self) -> Angle<T> {
        Angle::new(self.0 - rhs.0)
    }
}

impl<T: Real> Neg for Angle<T> {
    type Output = Angle<T>;
    fn neg(self) -> Angle<T> {
        Angle::new(-self.0)
    }
}

impl<T: Real> Add<T> for Angle<T> {
    type Output = Angle<T>;
    fn add(self, rhs: T) -> Angle<T> {
        Angle::new(self.0 + rhs)
    }
}

/// Circular mean direction of a set of angles; `None` when the resultant
/// vector is (numerically) zero.
pub fn circular_mean<T: Real>(angles: &[Angle<T>]) -> Option<Angle<T>> {
    let mut c = T::zero();
    let mut s = T::zero();
    for a in angles {
        let (ca, sa) = a.unit();
        c = c + ca;
        s = s + sa;
    }
    let n = T::of(angles.len() as f64);
    let r = ((c / n).powi(2) + (s / n).powi(2)).sqrt();
    if r < T::of(1e-12) {
        None
    } else {
        Some(Angle::from_complex(c, s))
    }
}

/// Mean resultant length `R̄` of a set of angles.
pub fn resultant_length<T: Real>(angles: &[Angle<T>]) -> T {
    let mut c = T::zero();
    let mut s = T::zero();
    for a in angles {
        let (ca, sa) = a.unit();
        c = c + ca;
        s = s + sa;
    }
    let n = T::of(angles.len() as f64);
    ((c / n).powi(2) + (s / n).powi(2)).sqrt()
}
