//! Derivative-free simplex minimizer (Nelder-Mead).

use crate::real::Real;

#[derive(Debug, Clone)]
pub struct NmOptions<T> {
    /// Edge length of the initial axis-aligned simplex.
    pub initial_step: T,
    /// Convergence when the simplex diameter (inf norm over vertex pairs)
    /// falls below this.
    pub diameter_tol: T,
    pub max_iters: usize,
}

impl<T: Real> Default for NmOptions<T> {
    fn default() -> Self {
        NmOptions {
            initial_step: T::of(0.25),
            diameter_tol: T::of(1e-8),
            max_iters: 2000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct NmResult<T> {
    pub x: Vec<T>,
    pub fx: T,
    pub iters: usize,
    pub converged: bool,
}

/// Minimize `f` from `x0` with the standard reflection/expansion/
/// contraction/shrink coefficients (1, 2, 1/2, 1/2).
pub fn minimize<T: Real>(
    f: impl Fn(&[T]) -> T,
    x0: &[T],
    opts: &NmOptions<T>,
) -> NmResult<T> {
    let dim = x0.len();
    let mut simplex: Vec<Vec<T>> = Vec::with_capacity(dim + 1);
    simplex.push(x0.to_vec());
    for i in 0..dim {
        let mut v = x0.to_vec();
        v[i] = v[i] + opts.initial_step;
        simplex.push(v);
    }
    let mut fv: Vec<T> = simplex.iter().map(|v| f(v)).collect();

    let half = T::of(0.5);
    let two = T::of(2.0);
    let mut iters = 0;
    let mut converged = false;

    while iters < opts.max_iters {
        // order vertices best..worst
        let mut idx: Vec<usize> = (0..=dim).collect();
        idx.sort_by(|&a, &b| fv[a].partial_cmp(&fv[b]).unwrap_or(std::cmp::Ordering::Equal));
        let reorder_s: Vec<Vec<T>> = idx.iter().map(|&i| simplex[i].clone()).collect();
        let reorder_f: Vec<T> = idx.iter().map(|&i| fv[i]).collect();
        simplex = reorder_s;
        fv = reorder_f;

        if diameter(&simplex) < opts.diameter_tol {
            converged = true;
            break;
        }
        iters += 1;

        // centroid of all but the worst vertex
        let mut centroid = vec![T::zero(); dim];
        for v in &simplex[..dim] {
            for (c, &x) in centroid.iter_mut().zip(v) {
                *c = *c + x;
            }
        }
        let nf = T::of(dim as f64);
        for c in centroid.iter_mut() {
            *c = *c / nf;
        }

        let worst = simplex[dim].clone();
        let reflect: Vec<T> = centroid
            .iter()
            .zip(&worst)
            .map(|(&c, &w)| c + (c - w))
            .collect();
        let fr = f(&reflect);

        if fr < fv[0] {
            let expand: Vec<T> = centroid
                .iter()
                .zip(&worst)
                .map(|(&c, &w)| c + two * (c - w))
                .collect();
            let fe = f(&expand);
            if fe < fr {
                simplex[dim] = expand;
                fv[dim] = fe;
            } else {
                simplex[dim] = reflect;
                fv[dim] = fr;
            }
        } else if fr < fv[dim - 1] {
            simplex[dim] = reflect;
            fv[dim] = fr;
        } else {
            // contract toward the better of worst/reflected
            let (anchor, fa) = if fr < fv[dim] {
                (&reflect, fr)
            } else {
                (&worst, fv[dim])
            };
            let contract: Vec<T> = centroid
                .iter()
                .zip(anchor)
                .map(|(&c, &a)| c + half * (a - c))
                .collect();
            let fc = f(&contract);
            if fc < fa {
                simplex[dim] = contract;
                fv[dim] = fc;
            } else {
                // shrink toward the best vertex
                let best = simplex[0].clone();
                for k in 1..=dim {
                    for (x, &b) in simplex[k].iter_mut().zip(&best) {
                        *x = b + half * (*x - b);
                    }
                    fv[k] = f(&simplex[k]);
                }
            }
        }
    }

    let mut best = 0;
    for k in 1..=dim {
        if fv[k] < fv[best] {
            best = k;
        }
    }
    NmResult {
        x: simplex[best].clone(),
        fx: fv[best],
        iters,
        converged,
    }
}

fn diameter<T: Real>(simplex: &[Vec<T>]) -> T {
    let mut d = T::zero();
    let first = &simplex[0];
    for v in &simplex[1..] {
        for (&a, &b) in v.iter().zip(first) {
            d = d.max((a - b).abs());
        }
    }
    d
}
