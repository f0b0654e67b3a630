//! Residual-based test statistics: the characteristic-function distance
//! `T_n`, Kuiper's `K_n` and Watson's `W_n`.

use crate::angle::Angle;
use crate::real::Real;
use crate::wrapped_cauchy::wc_cdf;
use serde::{Deserialize, Serialize};

/// Poisson weight function `ω(t)` for the frequency sum of `T_n`.
///
/// The infinite sum is truncated at the smallest `T` whose Poisson tail
/// mass falls below `tail_mass_tol`, capped at 500. The weights decay
/// super-geometrically, so at the usual means the cap is never binding.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightSpec {
    pub lambda: f64,
    pub tail_mass_tol: f64,
}

impl WeightSpec {
    pub const T_CAP: u32 = 500;

    pub fn new(lambda: f64) -> Self {
        WeightSpec {
            lambda,
            tail_mass_tol: 1e-12,
        }
    }

    /// Poisson pmf values `ω(0..=t_max)`.
    pub fn weights(&self) -> Vec<f64> {
        let mut w = Vec::with_capacity(32);
        let mut mass = (-self.lambda).exp();
        let mut cum = mass;
        w.push(mass);
        let mut t = 0u32;
        while 1.0 - cum > self.tail_mass_tol && t < Self::T_CAP {
            t += 1;
            mass *= self.lambda / t as f64;
            cum += mass;
            w.push(mass);
        }
        w
    }
}

/// Values of all test statistics for one residual vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GofStatistics {
    /// `(λ, T_n)` pairs, in the order the weights were requested.
    pub tn: Vec<(f64, f64)>,
    pub kn: f64,
    pub wn: f64,
}

impl GofStatistics {
    /// Flat view `(label, value)` used for reports and bootstrap bookkeeping.
    pub fn values(&self) -> Vec<(String, f64)> {
        let mut out: Vec<(String, f64)> = self
            .tn
            .iter()
            .map(|&(lam, v)| (format!("Tn({lam})"), v))
            .collect();
        out.push(("Kn".into(), self.kn));
        out.push(("Wn".into(), self.wn));
        out
    }

    /// Value of the k-th statistic in `values()` order.
    pub fn nth_value(&self, k: usize) -> f64 {
        if k < self.tn.len() {
            self.tn[k].1
        } else if k == self.tn.len() {
            self.kn
        } else {
            self.wn
        }
    }
}

/// All statistics at once; the Poisson means of the `T_n` weights are
/// given by `lambdas`.
pub fn all_statistics<T: Real>(
    residuals: &[Angle<T>],
    delta_hat: T,
    lambdas: &[f64],
) -> GofStatistics {
    let u = pit_transform(residuals, delta_hat);
    GofStatistics {
        tn: lambdas
            .iter()
            .map(|&lam| (lam, tn_statistic(residuals, delta_hat, &WeightSpec::new(lam))))
            .collect(),
        kn: kuiper_from_pit(&u),
        wn: watson_from_pit(&u),
    }
}

/// Characteristic-function statistic
/// `T_n = n Σ_t |φ_n(t) - δ̂^t|² ω(t)` with `φ_n` the empirical
/// characteristic function of the residual angles.
pub fn tn_statistic<T: Real>(residuals: &[Angle<T>], delta_hat: T, weight: &WeightSpec) -> f64 {
    let n = residuals.len();
    let w = weight.weights();
    let dh = delta_hat.to_f64();
    let theta: Vec<f64> = residuals.iter().map(|a| a.radians().to_f64()).collect();

    // cos(tθ), sin(tθ) by angle-addition recurrence per observation
    let cos1: Vec<f64> = theta.iter().map(|x| x.cos()).collect();
    let sin1: Vec<f64> = theta.iter().map(|x| x.sin()).collect();
    let mut ct = vec![1.0f64; n];
    let mut st = vec![0.0f64; n];

    let mut acc = 0.0;
    let mut dpow = 1.0;
    for (t, &wt) in w.iter().enumerate() {
        if t > 0 {
            for j in 0..n {
                let c = ct[j] * cos1[j] - st[j] * sin1[j];
                let s = st[j] * cos1[j] + ct[j] * sin1[j];
                ct[j] = c;
                st[j] = s;
            }
            dpow *= dh;
            let re = ct.iter().sum::<f64>() / n as f64;
            let im = st.iter().sum::<f64>() / n as f64;
            acc += ((re - dpow).powi(2) + im.powi(2)) * wt;
        }
        // t = 0: phi_n(0) = 1 = delta^0, the term vanishes identically
    }
    n as f64 * acc
}

/// Probability integral transform of the residuals through the fitted
/// `WC(0, δ̂)` distribution function, sorted ascending.
pub fn pit_transform<T: Real>(residuals: &[Angle<T>], delta_hat: T) -> Vec<f64> {
    let mut u: Vec<f64> = residuals
        .iter()
        .map(|&a| wc_cdf(a, delta_hat).to_f64())
        .collect();
    u.sort_by(|a, b| a.partial_cmp(b).unwrap());
    u
}

pub fn kuiper_statistic<T: Real>(residuals: &[Angle<T>], delta_hat: T) -> f64 {
    kuiper_from_pit(&pit_transform(residuals, delta_hat))
}

pub fn watson_statistic<T: Real>(residuals: &[Angle<T>], delta_hat: T) -> f64 {
    watson_from_pit(&pit_transform(residuals, delta_hat))
}

/// `K_n = max_j {U_(j) - (j-1)/n} + max_j {j/n - U_(j)}` on sorted PIT values.
pub fn kuiper_from_pit(u: &[f64]) -> f64 {
    let n = u.len() as f64;
    let mut dp = f64::NEG_INFINITY;
    let mut dm = f64::NEG_INFINITY;
    for (j, &uj) in u.iter().enumerate() {
        let j1 = (j + 1) as f64;
        dp = dp.max(uj - (j1 - 1.0) / n);
        dm = dm.max(j1 / n - uj);
    }
    dp + dm
}

/// `W_n = 1/(12n) + Σ_j ((U_(j) - (2j-1)/(2n)) - (Ū - 1/2))²` on sorted
/// PIT values.
pub fn watson_from_pit(u: &[f64]) -> f64 {
    let n = u.len() as f64;
    let ubar = u.iter().sum::<f64>() / n;
    let mut acc = 0.0;
    for (j, &uj) in u.iter().enumerate() {
        let j1 = (j + 1) as f64;
        acc += ((uj - (2.0 * j1 - 1.0) / (2.0 * n)) - (ubar - 0.5)).powi(2);
    }
    1.0 / (12.0 * n) + acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn angles(xs: &[f64]) -> Vec<Angle<f64>> {
        xs.iter().map(|&x| Angle::new(x)).collect()
    }

    const FIVE: [f64; 5] = [0.1, 1.2, 2.3, 4.0, 5.5];

    #[test]
    fn tn_single_point_closed_form() {
        // n = 1, residual 0, delta = 0: T = sum_{t>=1} w(t) = 1 - e^{-lambda}
        for lam in [0.3, 0.5, 1.0] {
            let v = tn_statistic(&angles(&[0.0]), 0.0, &WeightSpec::new(lam));
            assert_abs_diff_eq!(v, 1.0 - (-lam).exp(), epsilon = 1e-12);
        }
    }

    #[test]
    fn tn_frozen_oracle() {
        // Brute-force summation to t = 200 at tail tolerance 0 (computed
        // independently of the truncation logic).
        let r = angles(&FIVE);
        assert_abs_diff_eq!(
            tn_statistic(&r, 0.5, &WeightSpec::new(0.5)),
            0.22091827097640926,
            epsilon = 1e-10
        );
        assert_abs_diff_eq!(
            tn_statistic(&r, 0.5, &WeightSpec::new(0.3)),
            0.1526899128780176,
            epsilon = 1e-10
        );
        assert_abs_diff_eq!(
            tn_statistic(&r, 0.5, &WeightSpec::new(1.0)),
            0.3233101106945003,
            epsilon = 1e-10
        );
    }

    #[test]
    fn pit_uniform_case() {
        let r = angles(&FIVE);
        let u = pit_transform(&r, 0.0);
        let mut expect: Vec<f64> = FIVE.iter().map(|x| x / std::f64::consts::TAU).collect();
        expect.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (a, b) in u.iter().zip(&expect) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-15);
        }
        assert_eq!(pit_transform(&angles(&[0.0]), 0.4)[0], 0.0);
    }

    #[test]
    fn pit_permutation_invariant() {
        let r = angles(&FIVE);
        let mut shuffled = FIVE;
        shuffled.reverse();
        assert_eq!(pit_transform(&r, 0.5), pit_transform(&angles(&shuffled), 0.5));
    }

    #[test]
    fn kuiper_cases() {
        assert_abs_diff_eq!(kuiper_from_pit(&[0.5]), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(kuiper_from_pit(&[0.0, 0.25, 0.5, 0.75]), 0.25, epsilon = 1e-15);
    }

    #[test]
    fn kuiper_rotation_sensitivity() {
        // Adding a constant to the residual angles changes K_n; no
        // invariance is claimed on the angle scale.
        let r = angles(&FIVE);
        let shifted: Vec<_> = r.iter().map(|&a| a + 1.0).collect();
        let k0 = kuiper_statistic(&r, 0.5);
        let k1 = kuiper_statistic(&shifted, 0.5);
        assert!((k0 - k1).abs() > 1e-6);
    }

    #[test]
    fn watson_cases() {
        assert_abs_diff_eq!(watson_from_pit(&[0.5]), 1.0 / 12.0, epsilon = 1e-15);
        let lattice: Vec<f64> = (0..8).map(|j| (2.0 * j as f64 + 1.0) / 16.0).collect();
        assert_abs_diff_eq!(watson_from_pit(&lattice), 1.0 / 96.0, epsilon = 1e-15);
    }

    #[test]
    fn watson_frozen_oracle() {
        let r = angles(&FIVE);
        assert_abs_diff_eq!(
            watson_statistic(&r, 0.5),
            0.0527619482085981,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            kuiper_statistic(&r, 0.5),
            0.43950289695885036,
            epsilon = 1e-12
        );
    }

    #[test]
    fn watson_kuiper_origin_invariance_mod_one() {
        let r = angles(&FIVE);
        let u = pit_transform(&r, 0.5);
        for c in [0.1, 0.37, 0.9] {
            let mut v: Vec<f64> = u.iter().map(|x| (x + c).fract()).collect();
            v.sort_by(|a, b| a.partial_cmp(b).unwrap());
            assert_abs_diff_eq!(watson_from_pit(&v), watson_from_pit(&u), epsilon = 1e-10);
            assert_abs_diff_eq!(kuiper_from_pit(&v), kuiper_from_pit(&u), epsilon = 1e-10);
        }
    }

    #[test]
    fn truncation_matches_brute_force() {
        // T_max truncation against summation to t = 500 with tail tol 0.
        let r = angles(&FIVE);
        for dh in [0.1, 0.5, 0.9] {
            for lam in [0.3, 0.5, 1.0] {
                let trunc = tn_statistic(&r, dh, &WeightSpec::new(lam));
                let full = tn_statistic(
                    &r,
                    dh,
                    &WeightSpec {
                        lambda: lam,
                        tail_mass_tol: 0.0,
                    },
                );
                assert!((trunc - full).abs() < 1e-9 * r.len() as f64);
            }
        }
    }

    #[test]
    fn weights_sum_to_one() {
        for lam in [0.3, 0.5, 1.0, 10.0] {
            let w = WeightSpec::new(lam).weights();
            let total: f64 = w.iter().sum();
            assert!(1.0 - total <= 1e-12, "lambda {lam}: tail {}", 1.0 - total);
        }
    }
}
