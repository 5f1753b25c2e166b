//! Small dense optimizers used by the state metrics and the tomography fit.
//!
//! Nothing here is problem-specific: Nelder-Mead for low-dimensional smooth
//! maximization, Levenberg-Marquardt with a forward-difference Jacobian for
//! weighted least squares, and golden-section search for 1-D fits.

use nalgebra::{DMatrix, DVector};

pub struct NelderMeadResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
}

/// Minimize `f` starting from `x0`. `steps` sets the initial simplex extent
/// per coordinate. Stops when the simplex value spread falls below `tol`.
pub fn nelder_mead(
    f: impl Fn(&[f64]) -> f64,
    x0: &[f64],
    steps: &[f64],
    tol: f64,
    max_iter: usize,
) -> NelderMeadResult {
    let n = x0.len();
    assert_eq!(steps.len(), n);
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut p = x0.to_vec();
        p[i] += steps[i];
        simplex.push(p);
    }
    let mut values: Vec<f64> = simplex.iter().map(|p| f(p)).collect();

    let mut iterations = 0;
    while iterations < max_iter {
        iterations += 1;
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let best = order[0];
        let worst = order[n];
        let second_worst = order[n - 1];
        if (values[worst] - values[best]).abs() < tol {
            break;
        }

        let mut centroid = vec![0.0; n];
        for (idx, p) in simplex.iter().enumerate() {
            if idx == worst {
                continue;
            }
            for (c, v) in centroid.iter_mut().zip(p) {
                *c += v / n as f64;
            }
        }

        let blend = |a: f64, b: f64, coeff: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[worst])
                .map(|(c, w)| a * c + b * w + coeff * (c - w))
                .collect()
        };
        // reflection
        let xr = blend(1.0, 0.0, 1.0);
        let fr = f(&xr);
        if fr < values[best] {
            // expansion
            let xe = blend(1.0, 0.0, 2.0);
            let fe = f(&xe);
            if fe < fr {
                simplex[worst] = xe;
                values[worst] = fe;
            } else {
                simplex[worst] = xr;
                values[worst] = fr;
            }
        } else if fr < values[second_worst] {
            simplex[worst] = xr;
            values[worst] = fr;
        } else {
            // contraction
            let xc = blend(0.5, 0.5, 0.0);
            let fc = f(&xc);
            if fc < values[worst] {
                simplex[worst] = xc;
                values[worst] = fc;
            } else {
                // shrink toward best
                let best_point = simplex[best].clone();
                for idx in 0..=n {
                    if idx == best {
                        continue;
                    }
                    for (p, b) in simplex[idx].iter_mut().zip(&best_point) {
                        *p = b + 0.5 * (*p - b);
                    }
                    values[idx] = f(&simplex[idx]);
                }
            }
        }
    }

    let mut best = 0;
    for i in 1..=n {
        if values[i] < values[best] {
            best = i;
        }
    }
    NelderMeadResult {
        x: simplex[best].clone(),
        value: values[best],
        iterations,
    }
}

pub struct LmResult {
    pub x: Vec<f64>,
    pub cost: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Levenberg-Marquardt on residuals `r(x)`, minimizing `sum r_i^2`.
/// The Jacobian is forward-difference; `tol` is the absolute threshold on the
/// cost decrease between accepted steps.
pub fn levenberg_marquardt(
    residuals: impl Fn(&[f64]) -> Vec<f64>,
    x0: &[f64],
    tol: f64,
    max_iter: usize,
) -> LmResult {
    let n = x0.len();
    let mut x = x0.to_vec();
    let mut r = residuals(&x);
    let m = r.len();
    let mut cost: f64 = r.iter().map(|v| v * v).sum();
    let mut lambda = 1e-3;
    let mut iterations = 0;
    let mut converged = false;

    while iterations < max_iter {
        iterations += 1;
        // forward-difference Jacobian
        let mut jac = DMatrix::<f64>::zeros(m, n);
        for j in 0..n {
            let h = 1e-7 * x[j].abs().max(1.0);
            let mut xp = x.clone();
            xp[j] += h;
            let rp = residuals(&xp);
            for i in 0..m {
                jac[(i, j)] = (rp[i] - r[i]) / h;
            }
        }
        let rv = DVector::from_column_slice(&r);
        let jtj = jac.transpose() * &jac;
        let jtr = jac.transpose() * rv;

        let mut improved = false;
        for _ in 0..20 {
            let mut a = jtj.clone();
            for d in 0..n {
                a[(d, d)] += lambda * jtj[(d, d)].max(1e-12);
            }
            let Some(delta) = a.lu().solve(&(-&jtr)) else {
                lambda *= 10.0;
                continue;
            };
            let xt: Vec<f64> = x.iter().zip(delta.iter()).map(|(a, b)| a + b).collect();
            let rt = residuals(&xt);
            let ct: f64 = rt.iter().map(|v| v * v).sum();
            if ct.is_finite() && ct < cost {
                let drop = cost - ct;
                x = xt;
                r = rt;
                cost = ct;
                lambda = (lambda / 3.0).max(1e-12);
                improved = true;
                if drop < tol {
                    converged = true;
                }
                break;
            }
            lambda *= 10.0;
            if lambda > 1e12 {
                break;
            }
        }
        if converged {
            break;
        }
        if !improved {
            // no downhill step found at any damping: treat as stationary
            converged = true;
            break;
        }
    }
    LmResult {
        x,
        cost,
        iterations,
        converged,
    }
}

/// Golden-section minimization of a unimodal 1-D function on [a, b].
pub fn golden_section(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (a.min(b), a.max(b));
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a) > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nelder_mead_finds_quadratic_minimum() {
        let f = |x: &[f64]| (x[0] - 1.5).powi(2) + 3.0 * (x[1] + 0.5).powi(2) + 2.0;
        let r = nelder_mead(f, &[0.0, 0.0], &[0.5, 0.5], 1e-12, 500);
        assert!((r.x[0] - 1.5).abs() < 1e-5);
        assert!((r.x[1] + 0.5).abs() < 1e-5);
        assert!((r.value - 2.0).abs() < 1e-9);
    }

    #[test]
    fn nelder_mead_rosenbrock() {
        let f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let r = nelder_mead(f, &[-1.2, 1.0], &[0.5, 0.5], 1e-14, 5000);
        assert!((r.x[0] - 1.0).abs() < 1e-4, "x = {:?}", r.x);
        assert!((r.x[1] - 1.0).abs() < 1e-4);
    }

    #[test]
    fn lm_fits_exponential_decay() {
        // y = 2.0 * exp(-0.3 t), fit (a, k) from exact samples.
        let ts: Vec<f64> = (0..30).map(|i| i as f64 * 0.4).collect();
        let ys: Vec<f64> = ts.iter().map(|t| 2.0 * (-0.3 * t).exp()).collect();
        let res = |p: &[f64]| -> Vec<f64> {
            ts.iter()
                .zip(&ys)
                .map(|(t, y)| p[0] * (-p[1] * t).exp() - y)
                .collect()
        };
        let r = levenberg_marquardt(res, &[1.0, 0.1], 1e-16, 200);
        assert!(r.converged);
        assert!((r.x[0] - 2.0).abs() < 1e-6, "x = {:?}", r.x);
        assert!((r.x[1] - 0.3).abs() < 1e-6);
    }

    #[test]
    fn golden_section_parabola() {
        let (x, v) = golden_section(|x| (x - 0.7).powi(2) + 1.0, -3.0, 5.0, 1e-10);
        assert!((x - 0.7).abs() < 1e-7);
        assert!((v - 1.0).abs() < 1e-12);
    }
}
