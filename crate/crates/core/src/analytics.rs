//! Closed-form results used as oracles: large-`q` correlators and Lanczos
//! coefficients, the exactly solvable dissipative chain, the model
//! autocorrelation with its poles and spectral function, the OTOC, and
//! finite-`N` combinatorial coefficients.
//!
//! The solvable chain is indexed from 0 on the sites:
//!
//! ```text
//! site k:          i u γ (2k + η)
//! bond (k, k+1):   √((1 − u²) γ² (k + 1)(k + η))
//! ```
//!
//! which in the 1-based convention of [`TridiagonalData`] is
//! `a_n = i u γ (2(n−1) + η)` and `b_n² = (1 − u²) γ² n (n − 1 + η)`.

use serde::{Deserialize, Serialize};

use crate::bilanczos::TridiagonalData;
use crate::combinatorics::{binomial, factorial};
use crate::error::{Error, Result};
use crate::majorana::C64;

/// Rescaled coupling `𝒥 = √(2^{1−q} q) J`.
pub fn rescaled_coupling(q: usize, j: f64) -> f64 {
    (2f64.powi(1 - q as i32) * q as f64).sqrt() * j
}

/// Inverse of [`rescaled_coupling`].
pub fn bare_coupling(q: usize, script_j: f64) -> f64 {
    script_j / (2f64.powi(1 - q as i32) * q as f64).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LargeQParams {
    pub q: usize,
    /// `𝒥`.
    pub coupling: f64,
    /// `λ̃ = λ q`.
    pub lambda_tilde: f64,
}

impl LargeQParams {
    pub fn new(q: usize, coupling: f64, lambda_tilde: f64) -> Result<Self> {
        if q == 0 {
            return Err(Error::param("q", "must be positive"));
        }
        if !(coupling > 0.0) {
            return Err(Error::param("coupling", format!("must be positive, got {coupling}")));
        }
        if !(lambda_tilde >= 0.0) {
            return Err(Error::param("lambda_tilde", format!("must be nonnegative, got {lambda_tilde}")));
        }
        Ok(LargeQParams { q, coupling, lambda_tilde })
    }

    pub fn alpha(&self) -> f64 {
        (0.5 * self.lambda_tilde).hypot(self.coupling)
    }

    pub fn aleph(&self) -> f64 {
        (self.lambda_tilde / (2.0 * self.coupling)).asinh()
    }
}

/// `1 + g(t)/q` with `g(t) = ln[α² / (𝒥² cosh²(αt + ℵ))]`.
pub fn autocorrelation_large_q(p: &LargeQParams, t: f64) -> f64 {
    let alpha = p.alpha();
    let g = 2.0 * (alpha / (p.coupling * (alpha * t + p.aleph()).cosh())).ln();
    1.0 + g / p.q as f64
}

/// Leading large-`q` coefficients `(a_n, b_n)` for `n ≥ 1`.
pub fn lanczos_large_q(p: &LargeQParams, n: usize) -> Result<(C64, f64)> {
    if n == 0 {
        return Err(Error::param("n", "coefficients are indexed from 1"));
    }
    let a = C64::new(0.0, p.lambda_tilde * n as f64);
    let b = if n == 1 {
        p.coupling * (2.0 / p.q as f64).sqrt()
    } else {
        p.coupling * ((n * (n - 1)) as f64).sqrt()
    };
    Ok((a, b))
}

/// Parameters of the solvable dissipative chain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainParams {
    pub u: f64,
    pub gamma: f64,
    pub eta: f64,
}

impl ChainParams {
    pub fn new(u: f64, gamma: f64, eta: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&u) {
            return Err(Error::param("u", format!("must lie in [0, 1), got {u}")));
        }
        if !(gamma > 0.0) {
            return Err(Error::param("gamma", format!("must be positive, got {gamma}")));
        }
        if !(eta > 0.0) {
            return Err(Error::param("eta", format!("must be positive, got {eta}")));
        }
        Ok(ChainParams { u, gamma, eta })
    }

    /// Site `k` (0-based) diagonal entry `i u γ (2k + η)`.
    pub fn site(&self, k: usize) -> C64 {
        C64::new(0.0, self.u * self.gamma * (2.0 * k as f64 + self.eta))
    }

    /// Bond between sites `k` and `k+1`.
    pub fn bond(&self, k: usize) -> f64 {
        let kf = k as f64;
        ((1.0 - self.u * self.u) * self.gamma * self.gamma * (kf + 1.0) * (kf + self.eta)).sqrt()
    }

    pub fn tridiagonal(&self, len: usize) -> TridiagonalData {
        let len = len.max(1);
        let a = (0..len).map(|k| self.site(k)).collect();
        let b: Vec<C64> = (0..len - 1).map(|k| C64::new(self.bond(k), 0.0)).collect();
        TridiagonalData { a, c: b.clone(), b, termination: crate::bilanczos::Termination::MaxSteps }
    }

    /// Asymptotic slope `α` of `b_n ∼ α n`: `α² = γ²(1 − u²)`.
    pub fn alpha(&self) -> f64 {
        self.gamma * (1.0 - self.u * self.u).sqrt()
    }

    /// Asymptotic slope of `|a_n| ∼ χμ n`: `χμ = 2γu`.
    pub fn chi_mu(&self) -> f64 {
        2.0 * self.gamma * self.u
    }
}

/// `φ_0, …, φ_{n_max}` of the solvable chain at time `t`.
pub fn wavefunctions_closed_form(cp: &ChainParams, n_max: usize, t: f64) -> Result<Vec<f64>> {
    if !(t >= 0.0) {
        return Err(Error::param("t", format!("must be nonnegative, got {t}")));
    }
    let th = (cp.gamma * t).tanh();
    let denom = 1.0 + cp.u * th;
    let mut phi = Vec::with_capacity(n_max + 1);
    let mut cur = ((cp.gamma * t).cosh() * denom).powf(-cp.eta);
    let ratio = (1.0 - cp.u * cp.u).sqrt() * th / denom;
    phi.push(cur);
    for n in 1..=n_max {
        cur *= ratio * ((cp.eta + n as f64 - 1.0) / n as f64).sqrt();
        phi.push(cur);
    }
    Ok(phi)
}

/// Single amplitude `φ_n(t)`.
pub fn wavefunction_closed_form(cp: &ChainParams, n: usize, t: f64) -> Result<C64> {
    Ok(C64::new(wavefunctions_closed_form(cp, n, t)?[n], 0.0))
}

/// `K(t) = η(1−u²)T² / (1 + 2uT − (1 − 2u²)T²)` with `T = tanh(γt)`.
pub fn k_complexity_closed_form(cp: &ChainParams, t: f64) -> f64 {
    let th = (cp.gamma * t).tanh();
    let u = cp.u;
    cp.eta * (1.0 - u * u) * th * th / (1.0 + 2.0 * u * th - (1.0 - 2.0 * u * u) * th * th)
}

/// Dissipative time and complexity plateau; `None` means unbounded (`u = 0`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DissipationScales {
    /// `t_d = ln(1/u)/γ`.
    pub t_d: Option<f64>,
    /// `K_sat = η(1 − u)/(2u)`.
    pub k_sat: Option<f64>,
}

pub fn dissipation_scales(cp: &ChainParams) -> DissipationScales {
    if cp.u == 0.0 {
        return DissipationScales { t_d: None, k_sat: None };
    }
    DissipationScales {
        t_d: Some((1.0 / cp.u).ln() / cp.gamma),
        k_sat: Some(cp.eta * (1.0 - cp.u) / (2.0 * cp.u)),
    }
}

/// `C(μ, t) = (β/α) sech(βt + ℵ)` with `β = √(α² + μ²)`, `ℵ = asinh(μ/α)`.
pub fn model_autocorrelation(alpha: f64, mu: f64, t: f64) -> f64 {
    let beta = alpha.hypot(mu);
    beta / alpha / (beta * t + (mu / alpha).asinh()).cosh()
}

/// Nearest zeros `t_±` of `cosh(βt + ℵ)`.
pub fn pole_location(alpha: f64, mu: f64) -> (C64, C64) {
    let beta = alpha.hypot(mu);
    let re = -(mu / alpha).asinh() / beta;
    let im = std::f64::consts::FRAC_PI_2 / beta;
    (C64::new(re, im), C64::new(re, -im))
}

/// First-order expansion `±iπ/(2α) − μ/α²`.
pub fn pole_location_small_mu(alpha: f64, mu: f64) -> (C64, C64) {
    let re = -mu / (alpha * alpha);
    let im = std::f64::consts::FRAC_PI_2 / alpha;
    (C64::new(re, im), C64::new(re, -im))
}

/// `Φ(ω) = ∫ e^{−iωt} C(μ, t) dt = (π/α) sech(πω/2β) e^{iωℵ/β}`.
pub fn spectral_function(alpha: f64, mu: f64, omega: f64) -> C64 {
    let beta = alpha.hypot(mu);
    let aleph = (mu / alpha).asinh();
    let mag = std::f64::consts::PI / alpha / (std::f64::consts::PI * omega / (2.0 * beta)).cosh();
    C64::from_polar(mag, omega * aleph / beta)
}

/// Weak-dissipation form `(1 + iωμ/α²)(π/α) sech(πω/2α)`.
pub fn spectral_function_weak(alpha: f64, mu: f64, omega: f64) -> C64 {
    let base = std::f64::consts::PI / alpha / (std::f64::consts::PI * omega / (2.0 * alpha)).cosh();
    C64::new(1.0, omega * mu / (alpha * alpha)) * base
}

fn check_otoc_inputs(q: usize, n: usize) -> Result<()> {
    if q < 2 || q % 2 != 0 {
        return Err(Error::param("q", format!("must be even and >= 2, got {q}")));
    }
    if n == 0 {
        return Err(Error::param("N", "must be positive"));
    }
    Ok(())
}

/// OTOC for a single-Majorana initial operator on the solvable chain.
/// With `γ = 1` the argument of the hyperbolic tangent is `t` itself.
pub fn otoc_closed_form(cp: &ChainParams, q: usize, n: usize, t: f64) -> Result<f64> {
    check_otoc_inputs(q, n)?;
    let th = (cp.gamma * t).tanh();
    let (u, eta, qf, nf) = (cp.u, cp.eta, q as f64, n as f64);
    let num = th * th * (eta * (qf - 2.0) * (1.0 - u * u) + 2.0 * u * u - 1.0) + 2.0 * u * th + 1.0;
    let den = nf + nf * th * ((2.0 * u * u - 1.0) * th + 2.0 * u);
    Ok(num / den)
}

/// Late-time OTOC and the time `t_*` at which the dissipationless curve
/// reaches it; `None` entries are unbounded (`u = 0`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OtocScales {
    pub saturation: Option<f64>,
    pub t_star: Option<f64>,
    /// `½ ln(2q / ((q − 2) u)) / γ`, the small-`u` form of `t_star`.
    pub t_star_asymptotic: Option<f64>,
}

pub fn otoc_scales(cp: &ChainParams, q: usize, n: usize) -> Result<OtocScales> {
    check_otoc_inputs(q, n)?;
    if cp.u == 0.0 {
        return Ok(OtocScales { saturation: None, t_star: None, t_star_asymptotic: None });
    }
    let (u, qf) = (cp.u, q as f64);
    let saturation = (1.0 + cp.eta * (qf - 2.0) * (1.0 - u) / (2.0 * u)) / n as f64;
    let x = (qf * (1.0 - u) / (qf + (qf - 4.0) * u)).sqrt();
    let t_star = (x < 1.0).then(|| x.atanh() / cp.gamma);
    let t_star_asymptotic = (q > 2).then(|| 0.5 * (2.0 * qf / ((qf - 2.0) * u)).ln() / cp.gamma);
    Ok(OtocScales { saturation: Some(saturation), t_star, t_star_asymptotic })
}

/// Averaged `b_1²` for the normalized string `2^{p/2} ψ_1 ⋯ ψ_p` and its
/// large-`N` limit `b_1 = 𝒥 √(2p/q)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FirstCoefficient {
    pub b1_squared: f64,
    pub b1_large_n: f64,
}

/// `⟨b_1²⟩ = 2^{2−q} ⟨J²⟩ Σ_{l odd} C(p, l) C(N − p, q − l)` with
/// `⟨J²⟩ = (q−1)! J² / N^{q−1}` and `J` recovered from `𝒥`.
pub fn b1_pbody(n: usize, q: usize, p: usize, coupling: f64) -> Result<FirstCoefficient> {
    if q == 0 || q % 2 != 0 || q > n {
        return Err(Error::param("q", format!("must be even with 2 <= q <= N = {n}, got {q}")));
    }
    if p == 0 || p > n {
        return Err(Error::param("p", format!("must satisfy 1 <= p <= N = {n}, got {p}")));
    }
    let j = bare_coupling(q, coupling);
    let variance = factorial(q as u32 - 1) * j * j / (n as f64).powi(q as i32 - 1);
    let (ni, qi, pi) = (n as i64, q as i64, p as i64);
    let count: f64 = (1..=pi.min(qi)).step_by(2).map(|l| binomial(pi, l) * binomial(ni - pi, qi - l)).sum();
    Ok(FirstCoefficient {
        b1_squared: 2f64.powi(2 - q as i32) * variance * count,
        b1_large_n: coupling * (2.0 * p as f64 / q as f64).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn large_q_parameters() {
        let p = LargeQParams::new(4, 1.0, 0.0).unwrap();
        assert_eq!(p.alpha(), 1.0);
        assert_eq!(p.aleph(), 0.0);
        assert!((autocorrelation_large_q(&p, 0.0) - 1.0).abs() < 1e-15);
        let t: f64 = 0.7;
        let g = 2.0 * (1.0 / t.cosh()).ln();
        assert!((autocorrelation_large_q(&p, t) - (1.0 + g / 4.0)).abs() < 1e-15);
        let p = LargeQParams::new(8, 1.3, 2.0).unwrap();
        assert!((autocorrelation_large_q(&p, 0.0) - 1.0).abs() < 1e-14);
        assert!(p.alpha() >= p.coupling && p.aleph() >= 0.0);
        assert!(LargeQParams::new(4, 0.0, 1.0).is_err());
    }

    #[test]
    fn large_q_coefficients() {
        let p = LargeQParams::new(4, 1.0, 0.0).unwrap();
        assert!((lanczos_large_q(&p, 1).unwrap().1 - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((lanczos_large_q(&p, 10).unwrap().1 - 90f64.sqrt()).abs() < 1e-13);
        assert_eq!(lanczos_large_q(&p, 3).unwrap().0, C64::default());
        assert!(lanczos_large_q(&p, 0).is_err());
    }

    #[test]
    fn chain_limits() {
        let cp = ChainParams::new(0.0, 1.0, 1.0).unwrap();
        let t: f64 = 0.8;
        let phi = wavefunctions_closed_form(&cp, 5, t).unwrap();
        for (n, p) in phi.iter().enumerate() {
            assert!((p - t.tanh().powi(n as i32) / t.cosh()).abs() < 1e-15);
        }
        assert!((k_complexity_closed_form(&cp, t) - t.sinh().powi(2)).abs() < 1e-14);
        let cp = ChainParams::new(0.3, 1.2, 0.7).unwrap();
        let phi0 = wavefunctions_closed_form(&cp, 3, 0.0).unwrap();
        assert_eq!(phi0, vec![1.0, 0.0, 0.0, 0.0]);
        assert_eq!(k_complexity_closed_form(&cp, 0.0), 0.0);
        assert!(ChainParams::new(1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn saturation_scales() {
        let cp = ChainParams::new(0.5, 1.0, 1.0).unwrap();
        let s = dissipation_scales(&cp);
        assert_eq!(s.k_sat, Some(0.5));
        assert!((k_complexity_closed_form(&cp, 50.0) - 0.5).abs() < 1e-12);
        let s = dissipation_scales(&ChainParams::new(0.1, 1.0, 1.0).unwrap());
        assert!((s.t_d.unwrap() - 10f64.ln()).abs() < 1e-15);
        assert_eq!(dissipation_scales(&ChainParams::new(0.0, 1.0, 1.0).unwrap()).k_sat, None);
        let near_one = dissipation_scales(&ChainParams::new(0.999_999, 1.0, 1.0).unwrap());
        assert!(near_one.k_sat.unwrap() < 1e-6);
    }

    #[test]
    fn model_autocorrelation_identities() {
        assert!((model_autocorrelation(1.0, 0.0, 0.9) - 1.0 / 0.9f64.cosh()).abs() < 1e-15);
        assert!((model_autocorrelation(1.3, 0.4, 0.0) - 1.0).abs() < 1e-15);
        let (tp, tm) = pole_location(2.0, 0.0);
        assert!((tp - C64::new(0.0, std::f64::consts::PI / 4.0)).norm() < 1e-15);
        assert_eq!(tm, tp.conj());
    }

    #[test]
    fn spectral_limits() {
        let w = 1.7;
        let expected = std::f64::consts::PI / (std::f64::consts::PI * w / 2.0).cosh();
        assert!((spectral_function(1.0, 0.0, w) - C64::new(expected, 0.0)).norm() < 1e-15);
        assert!((spectral_function(1.5, 0.8, 0.0) - C64::new(std::f64::consts::PI / 1.5, 0.0)).norm() < 1e-15);
        let exact = spectral_function(1.0, 1e-4, 2.0);
        let weak = spectral_function_weak(1.0, 1e-4, 2.0);
        assert!((exact - weak).norm() < 1e-7);
    }

    #[test]
    fn otoc_values() {
        let cp = ChainParams::new(0.1, 1.0, 1.0).unwrap();
        assert!((otoc_closed_form(&cp, 300, 20, 0.0).unwrap() - 0.05).abs() < 1e-15);
        let s = otoc_scales(&cp, 300, 20).unwrap();
        assert!((s.saturation.unwrap() - (1.0 + 298.0 * 0.9 / 0.2) / 20.0).abs() < 1e-12);
        assert!((otoc_closed_form(&cp, 300, 20, 40.0).unwrap() - s.saturation.unwrap()).abs() < 1e-10);
        assert!(otoc_closed_form(&cp, 3, 20, 1.0).is_err());
        let cp = ChainParams::new(1e-3, 1.0, 1.0).unwrap();
        let s = otoc_scales(&cp, 300, 20).unwrap();
        let (exact, asym) = (s.t_star.unwrap(), s.t_star_asymptotic.unwrap());
        assert!((exact - asym).abs() / exact < 0.02);
    }

    #[test]
    fn b1_limits() {
        let f = b1_pbody(8, 4, 1, 1.0).unwrap();
        assert!((f.b1_large_n - 0.5f64.sqrt()).abs() < 1e-15);
        // J = 1 at q = 4 is 𝒥² = 1/2; (N−1)(N−2)(N−3)/(4N³) at N = 8.
        let f = b1_pbody(8, 4, 1, rescaled_coupling(4, 1.0)).unwrap();
        assert!((f.b1_squared - 210.0 / 2048.0).abs() < 1e-15);
        let big = b1_pbody(4000, 4, 2, 1.0).unwrap();
        assert!((big.b1_squared.sqrt() - big.b1_large_n).abs() < 2e-3);
        assert!(b1_pbody(8, 3, 1, 1.0).is_err());
        assert!(b1_pbody(8, 4, 9, 1.0).is_err());
    }

    #[test]
    fn coupling_conversion() {
        assert!((rescaled_coupling(4, 1.0) - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((bare_coupling(6, rescaled_coupling(6, 1.7)) - 1.7).abs() < 1e-14);
    }
}
