//! Run configuration shared by the sweep harness and the command line.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::bilanczos::{BiLanczosOptions, FoPolicy};
use crate::error::{Error, Result};
use crate::majorana::MajoranaSet;
use crate::model::JumpSpec;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub n: usize,
    pub q: usize,
    pub j: f64,
}

/// Dissipation without a seed; realizations derive their own.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case", deny_unknown_fields)]
pub enum DissipationConfig {
    None,
    Linear { lambda: f64 },
    PBody { p: usize, m: usize, v: f64 },
}

impl DissipationConfig {
    pub fn jump_spec(&self, seed: u64) -> Option<JumpSpec> {
        match *self {
            DissipationConfig::None => None,
            DissipationConfig::Linear { lambda } => Some(JumpSpec::Linear { lambda }),
            DissipationConfig::PBody { p, m, v } => Some(JumpSpec::PBody { p, m, v, seed }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialOperatorConfig {
    /// 1-based Majorana labels, strictly increasing.
    pub indices: Vec<usize>,
    /// Multiply the string by `2^{s/2}` so it has unit norm.
    #[serde(default = "yes")]
    pub normalize: bool,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AlgorithmConfig {
    pub max_steps: usize,
    pub bilanczos: BiLanczosOptions,
}

impl Default for AlgorithmConfig {
    fn default() -> Self {
        AlgorithmConfig { max_steps: 40, bilanczos: BiLanczosOptions::default() }
    }
}

/// Grid axes; an empty list keeps the base value from `model`/`dissipation`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepAxes {
    pub lambda: Vec<f64>,
    pub v: Vec<f64>,
    pub m: Vec<usize>,
    pub n: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FitConfig {
    /// Inclusive `[n_lo, n_hi]` for the `|a_n|` slope; chosen from the plateau onset when absent.
    pub window: Option<[usize; 2]>,
    /// Relative spread `(max − min)/|mean|` allowed on a plateau.
    pub plateau_rel_tol: f64,
}

impl Default for FitConfig {
    fn default() -> Self {
        FitConfig { window: None, plateau_rel_tol: 0.1 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvolveConfig {
    pub t_max: f64,
    pub n_t: usize,
    /// Chain sites to keep; all computed coefficients when absent.
    pub k_max: Option<usize>,
    pub n_phi: usize,
    pub tol: f64,
}

impl Default for EvolveConfig {
    fn default() -> Self {
        EvolveConfig { t_max: 5.0, n_t: 101, k_max: None, n_phi: 4, tol: 1e-10 }
    }
}

impl EvolveConfig {
    pub fn grid(&self) -> Vec<f64> {
        uniform_grid(0.0, self.t_max, self.n_t)
    }
}

/// `n` equally spaced points on `[lo, hi]`.
pub fn uniform_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n <= 1 {
        return vec![lo];
    }
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelConfig,
    pub dissipation: DissipationConfig,
    pub initial_operator: InitialOperatorConfig,
    #[serde(default)]
    pub algorithm: AlgorithmConfig,
    #[serde(default)]
    pub sweep: SweepAxes,
    #[serde(default)]
    pub fit: FitConfig,
    #[serde(default)]
    pub evolve: EvolveConfig,
    pub realizations: usize,
    pub seed: u64,
    pub out_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            model: ModelConfig { n: 12, q: 4, j: 1.0 },
            dissipation: DissipationConfig::Linear { lambda: 0.1 },
            initial_operator: InitialOperatorConfig { indices: vec![1], normalize: true },
            algorithm: AlgorithmConfig::default(),
            sweep: SweepAxes::default(),
            fit: FitConfig::default(),
            evolve: EvolveConfig::default(),
            realizations: 1,
            seed: 1,
            out_dir: PathBuf::from("out"),
        }
    }
}

/// One concrete grid point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub model: ModelConfig,
    pub dissipation: DissipationConfig,
}

fn finite_nonneg(name: &'static str, x: f64) -> Result<()> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::param(name, format!("must be finite and nonnegative, got {x}")));
    }
    Ok(())
}

fn positive_tol(name: &'static str, x: f64) -> Result<()> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::param(name, format!("must be positive and finite, got {x}")));
    }
    Ok(())
}

fn validate_point(pt: &SweepPoint, init: &InitialOperatorConfig) -> Result<()> {
    let ModelConfig { n, q, j } = pt.model;
    if n == 0 || n % 2 != 0 || n > MajoranaSet::MAX_FERMIONS {
        return Err(Error::Sizing(format!("N must be even in 2..={}, got {n}", MajoranaSet::MAX_FERMIONS)));
    }
    if q < 2 || q % 2 != 0 || q > n {
        return Err(Error::param("q", format!("must be even with 2 <= q <= N = {n}, got {q}")));
    }
    if !(j > 0.0) || !j.is_finite() {
        return Err(Error::param("J", format!("must be positive and finite, got {j}")));
    }
    if let Some(spec) = pt.dissipation.jump_spec(0) {
        spec.validate(n)?;
    }
    if init.indices.is_empty() {
        return Err(Error::Indices { indices: Vec::new(), reason: "initial operator needs at least one index".into() });
    }
    if init.indices.windows(2).any(|w| w[1] <= w[0]) || init.indices[0] == 0 || *init.indices.last().unwrap() > n {
        return Err(Error::Indices {
            indices: init.indices.clone(),
            reason: format!("must be strictly increasing labels in 1..={n}"),
        });
    }
    Ok(())
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// Check every range, including every grid point, before any work starts.
    pub fn validate(&self) -> Result<()> {
        if self.realizations == 0 {
            return Err(Error::param("realizations", "must be at least 1"));
        }
        if self.algorithm.max_steps == 0 {
            return Err(Error::param("max_steps", "must be at least 1"));
        }
        let b = &self.algorithm.bilanczos;
        positive_tol("breakdown_tol", b.breakdown_tol)?;
        positive_tol("converged_tol", b.converged_tol)?;
        positive_tol("norm_tol", b.norm_tol)?;
        if let FoPolicy::Threshold(x) = b.fo {
            positive_tol("fo threshold", x)?;
        }
        match self.dissipation {
            DissipationConfig::Linear { .. } if !self.sweep.v.is_empty() || !self.sweep.m.is_empty() => {
                return Err(Error::param("sweep", "V and M axes need p-body dissipation"));
            }
            DissipationConfig::PBody { .. } if !self.sweep.lambda.is_empty() => {
                return Err(Error::param("sweep", "the lambda axis needs linear dissipation"));
            }
            DissipationConfig::None
                if !self.sweep.lambda.is_empty() || !self.sweep.v.is_empty() || !self.sweep.m.is_empty() =>
            {
                return Err(Error::param("sweep", "dissipation axes need a dissipation class"));
            }
            _ => {}
        }
        for &x in self.sweep.lambda.iter().chain(&self.sweep.v) {
            finite_nonneg("sweep value", x)?;
        }
        if let Some([lo, hi]) = self.fit.window {
            if lo == 0 || hi < lo + 2 {
                return Err(Error::param("fit.window", format!("needs 1 <= lo and at least 3 points, got [{lo}, {hi}]")));
            }
        }
        positive_tol("plateau_rel_tol", self.fit.plateau_rel_tol)?;
        let e = &self.evolve;
        if !(e.t_max >= 0.0) || !e.t_max.is_finite() || e.n_t == 0 {
            return Err(Error::param("evolve", "needs finite t_max >= 0 and n_t >= 1"));
        }
        if e.n_t > 1 && e.t_max == 0.0 {
            return Err(Error::param("evolve", "several times need t_max > 0"));
        }
        positive_tol("evolve.tol", e.tol)?;
        if e.k_max == Some(0) {
            return Err(Error::param("evolve.k_max", "must be at least 1"));
        }
        for pt in self.points() {
            validate_point(&pt, &self.initial_operator)?;
        }
        Ok(())
    }

    /// The base point, ignoring sweep axes.
    pub fn base_point(&self) -> SweepPoint {
        SweepPoint { model: self.model, dissipation: self.dissipation }
    }

    /// Cartesian product of the axes, ordered `N`, then `M`, then `λ` or `V`.
    pub fn points(&self) -> Vec<SweepPoint> {
        let ns = if self.sweep.n.is_empty() { vec![self.model.n] } else { self.sweep.n.clone() };
        let mut out = Vec::new();
        for &n in &ns {
            let model = ModelConfig { n, ..self.model };
            match self.dissipation {
                DissipationConfig::None => out.push(SweepPoint { model, dissipation: DissipationConfig::None }),
                DissipationConfig::Linear { lambda } => {
                    let ls = if self.sweep.lambda.is_empty() { vec![lambda] } else { self.sweep.lambda.clone() };
                    out.extend(ls.into_iter().map(|lambda| SweepPoint {
                        model,
                        dissipation: DissipationConfig::Linear { lambda },
                    }));
                }
                DissipationConfig::PBody { p, m, v } => {
                    let ms = if self.sweep.m.is_empty() { vec![m] } else { self.sweep.m.clone() };
                    let vs = if self.sweep.v.is_empty() { vec![v] } else { self.sweep.v.clone() };
                    for &m in &ms {
                        out.extend(vs.iter().map(|&v| SweepPoint { model, dissipation: DissipationConfig::PBody { p, m, v } }));
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_round_trip() {
        let cfg = RunConfig::default();
        cfg.validate().unwrap();
        let back = RunConfig::from_json(&cfg.to_json()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn grid_order() {
        let mut cfg = RunConfig::default();
        cfg.dissipation = DissipationConfig::PBody { p: 2, m: 4, v: 0.1 };
        cfg.sweep.v = vec![0.01, 0.02];
        cfg.sweep.m = vec![2, 4];
        cfg.sweep.n = vec![8, 10];
        let pts = cfg.points();
        assert_eq!(pts.len(), 8);
        assert_eq!(pts[1].dissipation, DissipationConfig::PBody { p: 2, m: 2, v: 0.02 });
        assert_eq!(pts[4].model.n, 10);
    }

    #[test]
    fn rejects_bad_ranges() {
        let bad = |f: &dyn Fn(&mut RunConfig)| {
            let mut cfg = RunConfig::default();
            f(&mut cfg);
            cfg.validate().is_err()
        };
        assert!(bad(&|c| c.model.n = 7));
        assert!(bad(&|c| c.model.q = 3));
        assert!(bad(&|c| c.realizations = 0));
        assert!(bad(&|c| c.sweep.lambda = vec![-0.1]));
        assert!(bad(&|c| c.sweep.v = vec![0.1]));
        assert!(bad(&|c| c.initial_operator.indices = vec![2, 1]));
        assert!(bad(&|c| c.initial_operator.indices = vec![13]));
        assert!(bad(&|c| c.sweep.n = vec![12, 2]));
        assert!(bad(&|c| c.fit.window = Some([2, 3])));
        assert!(bad(&|c| c.dissipation = DissipationConfig::PBody { p: 2, m: 0, v: 0.1 }));
    }

    #[test]
    fn unknown_fields_rejected() {
        let mut v: serde_json::Value = serde_json::from_str(&RunConfig::default().to_json()).unwrap();
        v["model"]["extra"] = serde_json::json!(1);
        assert!(RunConfig::from_json(&v.to_string()).is_err());
    }
}
