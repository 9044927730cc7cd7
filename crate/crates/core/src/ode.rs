//! Adaptive Dormand-Prince 5(4) integrator for complex linear systems.

use crate::error::{Error, Result};
use crate::linop::CVector;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeOptions {
    /// Absolute tolerance relative to the current `‖y‖∞`.
    pub atol: f64,
    pub rtol: f64,
    pub max_steps: usize,
    pub initial_step: Option<f64>,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions { atol: 1e-10, rtol: 1e-10, max_steps: 10_000_000, initial_step: None }
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// Fifth-order minus embedded fourth-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn combo(y: &CVector, h: f64, terms: &[(f64, &CVector)]) -> CVector {
    let mut out = y.clone();
    for &(c, k) in terms {
        if c != 0.0 {
            out.zip_apply(k, |o, ki| *o += ki * (h * c));
        }
    }
    out
}

fn inf_norm(y: &CVector) -> f64 {
    y.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Integrate `y' = f(t, y)` from `times[0]` and return `y` at every entry of
/// `times` (which must be nondecreasing).
pub fn integrate<F>(f: F, y0: CVector, times: &[f64], opts: &OdeOptions) -> Result<Vec<CVector>>
where
    F: Fn(f64, &CVector) -> CVector,
{
    if times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::param("times", "must be nondecreasing"));
    }
    let Some(&t_start) = times.first() else {
        return Ok(Vec::new());
    };
    let mut out = Vec::with_capacity(times.len());
    let mut t = t_start;
    let mut y = y0;
    let mut k1 = f(t, &y);
    let span = times.last().copied().unwrap_or(t) - t;
    let mut h = opts.initial_step.unwrap_or_else(|| {
        let (ny, nf) = (inf_norm(&y), inf_norm(&k1));
        if nf > 0.0 && ny > 0.0 {
            (0.01 * ny / nf).min(span.max(1e-3))
        } else {
            1e-3
        }
    });
    let mut steps = 0usize;
    for &target in times {
        while t < target {
            if steps >= opts.max_steps {
                return Err(Error::Numerical(format!("integrator exceeded {} steps at t = {t}", opts.max_steps)));
            }
            let last = h >= target - t;
            let hs = if last { target - t } else { h };
            let k2 = f(t + C2 * hs, &combo(&y, hs, &[(A21, &k1)]));
            let k3 = f(t + C3 * hs, &combo(&y, hs, &[(A31, &k1), (A32, &k2)]));
            let k4 = f(t + C4 * hs, &combo(&y, hs, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
            let k5 = f(t + C5 * hs, &combo(&y, hs, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
            let k6 = f(t + hs, &combo(&y, hs, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]));
            let y_new = combo(&y, hs, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
            let k7 = f(t + hs, &y_new);
            let zero = CVector::zeros(y.len());
            let err = combo(&zero, hs, &[(E1, &k1), (E3, &k3), (E4, &k4), (E5, &k5), (E6, &k6), (E7, &k7)]);
            let scale_abs = opts.atol * inf_norm(&y).max(inf_norm(&y_new));
            let ratio = err
                .iter()
                .zip(y.iter().zip(y_new.iter()))
                .map(|(e, (a, b))| {
                    let sc = scale_abs + opts.rtol * a.norm().max(b.norm());
                    if sc > 0.0 {
                        e.norm() / sc
                    } else if e.norm() > 0.0 {
                        f64::INFINITY
                    } else {
                        0.0
                    }
                })
                .fold(0.0, f64::max);
            steps += 1;
            if err.iter().any(|e| !e.norm().is_finite()) {
                return Err(Error::Numerical(format!("non-finite error estimate at t = {t}")));
            }
            if ratio <= 1.0 {
                t = if last { target } else { t + hs };
                y = y_new;
                k1 = k7;
            }
            let factor = if ratio == 0.0 { 5.0 } else { (0.9 * ratio.powf(-0.2)).clamp(0.2, 5.0) };
            if !last || ratio > 1.0 {
                h = hs * factor;
            }
            if h < 1e-14 * t.abs().max(1.0) {
                return Err(Error::Numerical(format!("step size underflow at t = {t}")));
            }
        }
        out.push(y.clone());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::majorana::C64;

    #[test]
    fn exponential_decay_and_rotation() {
        let rate = C64::new(-0.3, 2.0);
        let times: Vec<f64> = (0..=10).map(|i| 0.5 * i as f64).collect();
        let y0 = CVector::from_element(1, C64::new(1.0, 0.0));
        let ys = integrate(|_, y| y * rate, y0, &times, &OdeOptions::default()).unwrap();
        for (t, y) in times.iter().zip(&ys) {
            assert!((y[0] - (rate * t).exp()).norm() < 1e-9);
        }
    }

    #[test]
    fn harmonic_oscillator() {
        // y = (x, v), x'' = -x.
        let f = |_: f64, y: &CVector| CVector::from_vec(vec![y[1], -y[0]]);
        let y0 = CVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
        let ys = integrate(f, y0, &[0.0, 10.0], &OdeOptions::default()).unwrap();
        assert!((ys[1][0].re - 10f64.cos()).abs() < 1e-8);
    }

    #[test]
    fn repeated_times_and_bad_order() {
        let y0 = CVector::from_element(1, C64::new(1.0, 0.0));
        let ys = integrate(|_, y| y.clone(), y0.clone(), &[0.0, 0.0, 1.0], &OdeOptions::default()).unwrap();
        assert_eq!(ys[0], ys[1]);
        assert!(integrate(|_, y| y.clone(), y0, &[1.0, 0.0], &OdeOptions::default()).is_err());
    }
}
