//! Abstraction over error-angle samplers, so the model simulator can draw
//! innovations from the wrapped Cauchy null or from any of the alternative
//! families.

use crate::angle::Angle;
use crate::wrapped_cauchy::WcParams;
use rand_chacha::ChaCha12Rng;

pub trait AngleSampler: Send + Sync {
    fn sample_one(&self, rng: &mut ChaCha12Rng) -> Angle<f64>;

    fn sample(&self, n: usize, rng: &mut ChaCha12Rng) -> Vec<Angle<f64>> {
        (0..n).map(|_| self.sample_one(rng)).collect()
    }
}

impl AngleSampler for WcParams<f64> {
    fn sample_one(&self, rng: &mut ChaCha12Rng) -> Angle<f64> {
        WcParams::sample_one(self, rng)
    }
}
