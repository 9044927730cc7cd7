//! Closed-form curves on parameter grids, written as CSV tables.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::analytics::{
    autocorrelation_large_q, dissipation_scales, k_complexity_closed_form, lanczos_large_q, model_autocorrelation,
    otoc_closed_form, otoc_scales, spectral_function, wavefunctions_closed_form, ChainParams, LargeQParams,
};
use crate::config::uniform_grid;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainGrid {
    pub u: Vec<f64>,
    pub gamma: Vec<f64>,
    pub eta: Vec<f64>,
    /// `q` and `N` for the OTOC column.
    pub q: usize,
    pub n: usize,
    pub t_max: f64,
    pub n_t: usize,
    pub n_phi: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectralGrid {
    pub alpha: Vec<f64>,
    pub mu: Vec<f64>,
    pub omega_max: f64,
    pub n_omega: usize,
    pub t_max: f64,
    pub n_t: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LargeQGrid {
    pub q: Vec<usize>,
    pub coupling: f64,
    pub lambda_tilde: Vec<f64>,
    pub t_max: f64,
    pub n_t: usize,
    pub n_max: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalyticConfig {
    pub chain: Option<ChainGrid>,
    pub spectral: Option<SpectralGrid>,
    pub large_q: Option<LargeQGrid>,
}

impl AnalyticConfig {
    /// The chain curves for `u ∈ {0, 0.1, 0.5}` and the spectral function for `μ ∈ {0, 0.2, 0.5}`.
    pub fn standard() -> Self {
        AnalyticConfig {
            chain: Some(ChainGrid {
                u: vec![0.0, 0.1, 0.5],
                gamma: vec![1.0],
                eta: vec![1.0],
                q: 4,
                n: 12,
                t_max: 5.0,
                n_t: 101,
                n_phi: 4,
            }),
            spectral: Some(SpectralGrid { alpha: vec![1.0], mu: vec![0.0, 0.2, 0.5], omega_max: 10.0, n_omega: 201, t_max: 5.0, n_t: 101 }),
            large_q: Some(LargeQGrid { q: vec![4, 8, 16], coupling: 1.0, lambda_tilde: vec![0.0, 1.0], t_max: 5.0, n_t: 101, n_max: 20 }),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: AnalyticConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let grid = |name: &'static str, t_max: f64, n: usize| -> Result<()> {
            if !(t_max >= 0.0) || !t_max.is_finite() || n == 0 {
                return Err(Error::param(name, "needs a finite nonnegative range and at least one point"));
            }
            Ok(())
        };
        if let Some(c) = &self.chain {
            grid("chain", c.t_max, c.n_t)?;
            for &u in &c.u {
                for &g in &c.gamma {
                    for &e in &c.eta {
                        ChainParams::new(u, g, e)?;
                    }
                }
            }
            otoc_scales(&ChainParams::new(0.5, 1.0, 1.0)?, c.q, c.n)?;
        }
        if let Some(s) = &self.spectral {
            grid("spectral", s.omega_max, s.n_omega)?;
            grid("spectral", s.t_max, s.n_t)?;
            if s.alpha.iter().any(|a| !(*a > 0.0)) || s.mu.iter().any(|m| !m.is_finite()) {
                return Err(Error::param("spectral", "alpha must be positive and mu finite"));
            }
        }
        if let Some(l) = &self.large_q {
            grid("large_q", l.t_max, l.n_t)?;
            for &q in &l.q {
                for &lt in &l.lambda_tilde {
                    LargeQParams::new(q, l.coupling, lt)?;
                }
            }
        }
        Ok(())
    }
}

/// `(file name, CSV contents)` for every configured family.
pub fn run_analytic(cfg: &AnalyticConfig) -> Result<Vec<(String, String)>> {
    cfg.validate()?;
    let mut out = Vec::new();
    if let Some(c) = &cfg.chain {
        let mut curves = String::from("u,gamma,eta,t,K,OTOC");
        for n in 0..c.n_phi {
            let _ = write!(curves, ",phi{n}");
        }
        curves.push('\n');
        let mut scales = String::from("u,gamma,eta,t_d,K_sat,otoc_saturation,t_star,t_star_asymptotic\n");
        let opt = |x: Option<f64>| x.map_or(String::new(), |v| v.to_string());
        for &u in &c.u {
            for &gamma in &c.gamma {
                for &eta in &c.eta {
                    let cp = ChainParams::new(u, gamma, eta)?;
                    for t in uniform_grid(0.0, c.t_max, c.n_t) {
                        let k = k_complexity_closed_form(&cp, t);
                        let o = otoc_closed_form(&cp, c.q, c.n, t)?;
                        let _ = write!(curves, "{u},{gamma},{eta},{t},{k},{o}");
                        if c.n_phi > 0 {
                            for p in wavefunctions_closed_form(&cp, c.n_phi - 1, t)? {
                                let _ = write!(curves, ",{p}");
                            }
                        }
                        curves.push('\n');
                    }
                    let d = dissipation_scales(&cp);
                    let s = otoc_scales(&cp, c.q, c.n)?;
                    let _ = writeln!(
                        scales,
                        "{u},{gamma},{eta},{},{},{},{},{}",
                        opt(d.t_d),
                        opt(d.k_sat),
                        opt(s.saturation),
                        opt(s.t_star),
                        opt(s.t_star_asymptotic)
                    );
                }
            }
        }
        out.push(("analytic_chain.csv".to_string(), curves));
        out.push(("analytic_chain_scales.csv".to_string(), scales));
    }
    if let Some(s) = &cfg.spectral {
        let mut spec = String::from("alpha,mu,omega,re_phi,im_phi\n");
        let mut corr = String::from("alpha,mu,t,C\n");
        for &alpha in &s.alpha {
            for &mu in &s.mu {
                for w in uniform_grid(-s.omega_max, s.omega_max, s.n_omega) {
                    let f = spectral_function(alpha, mu, w);
                    let _ = writeln!(spec, "{alpha},{mu},{w},{},{}", f.re, f.im);
                }
                for t in uniform_grid(0.0, s.t_max, s.n_t) {
                    let _ = writeln!(corr, "{alpha},{mu},{t},{}", model_autocorrelation(alpha, mu, t));
                }
            }
        }
        out.push(("analytic_spectral.csv".to_string(), spec));
        out.push(("analytic_autocorrelation.csv".to_string(), corr));
    }
    if let Some(l) = &cfg.large_q {
        let mut corr = String::from("q,lambda_tilde,t,C\n");
        let mut coef = String::from("q,lambda_tilde,n,im_a,b\n");
        for &q in &l.q {
            for &lt in &l.lambda_tilde {
                let p = LargeQParams::new(q, l.coupling, lt)?;
                for t in uniform_grid(0.0, l.t_max, l.n_t) {
                    let _ = writeln!(corr, "{q},{lt},{t},{}", autocorrelation_large_q(&p, t));
                }
                for n in 1..=l.n_max {
                    let (a, b) = lanczos_large_q(&p, n)?;
                    let _ = writeln!(coef, "{q},{lt},{n},{},{b}", a.im);
                }
            }
        }
        out.push(("analytic_large_q.csv".to_string(), corr));
        out.push(("analytic_large_q_lanczos.csv".to_string(), coef));
    }
    Ok(out)
}

pub fn write_analytic(dir: &Path, tables: &[(String, String)]) -> Result<Vec<PathBuf>> {
    tables.iter().map(|(name, csv)| crate::harness::write_named(dir, name, csv)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_tables() {
        let tables = run_analytic(&AnalyticConfig::standard()).unwrap();
        assert_eq!(tables.len(), 6);
        let chain = &tables[0].1;
        assert_eq!(chain.lines().count(), 1 + 3 * 101);
        assert!(chain.lines().nth(1).unwrap().starts_with("0,1,1,0,0,"));
        let scales = &tables[1].1;
        assert!(scales.lines().nth(1).unwrap().starts_with("0,1,1,,,"));
    }

    #[test]
    fn rejects_bad_u() {
        let mut cfg = AnalyticConfig::standard();
        cfg.chain.as_mut().unwrap().u.push(1.5);
        assert!(cfg.validate().is_err());
    }
}
