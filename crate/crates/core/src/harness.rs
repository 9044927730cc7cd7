//! Disorder sweeps: model → Lindbladian → bi-Lanczos per realization,
//! averaged coefficient tables, slope/plateau/power-law fits, trajectories
//! and file output.
//!
//! Realization `r` draws its Hamiltonian from `derive_seed(seed, r, "syk")`
//! and its jumps from `derive_seed(seed, r, "jump")`, so every grid point
//! shares the same disorder. Work is spread over the rayon pool and merged
//! in index order, which keeps every output byte independent of scheduling.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bilanczos::{bilanczos_tridiagonalize, TridiagonalData};
use crate::config::{DissipationConfig, RunConfig, SweepPoint};
use crate::dynamics::{evolve_wavefunctions, otoc_from_wavefunctions, EvolveOptions};
use crate::error::{Error, Result};
use crate::fit::{default_slope_window, fit_linear, fit_power_law, plateau_run, LinearFit, PowerLawFit, Stat};
use crate::majorana::{MajoranaSet, Operator, C64};
use crate::model::{build_hamiltonian, build_jump_operators, sample_syk_couplings};
use crate::seed::{derive_seed, TAG_HAMILTONIAN, TAG_JUMPS};
use crate::superop::{build_lindbladian, vectorize, LindbladSuper, Parity};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealizationSeeds {
    pub realization: u64,
    pub hamiltonian: u64,
    pub jumps: u64,
}

pub fn realization_seeds(base: u64, realization: u64) -> RealizationSeeds {
    RealizationSeeds {
        realization,
        hamiltonian: derive_seed(base, realization, TAG_HAMILTONIAN),
        jumps: derive_seed(base, realization, TAG_JUMPS),
    }
}

/// Lindbladian and starting operator for one realization.
pub struct RealizationSetup {
    pub lindbladian: LindbladSuper,
    pub initial: Operator,
}

pub fn build_realization(cfg: &RunConfig, point: &SweepPoint, realization: u64) -> Result<RealizationSetup> {
    let seeds = realization_seeds(cfg.seed, realization);
    let ms = MajoranaSet::new(point.model.n)?;
    let syk = sample_syk_couplings(point.model.n, point.model.q, point.model.j, seeds.hamiltonian)?;
    let h = build_hamiltonian(&ms, &syk)?;
    let jumps = point.dissipation.jump_spec(seeds.jumps).map(|s| build_jump_operators(&ms, &s)).transpose()?;
    let string = ms.string(&cfg.initial_operator.indices)?;
    let initial = if cfg.initial_operator.normalize { string.normalized() } else { string.to_dense() };
    let lindbladian = build_lindbladian(&h, jumps.as_ref(), Parity::of_length(string.len()))?;
    Ok(RealizationSetup { lindbladian, initial })
}

pub fn run_realization(cfg: &RunConfig, point: &SweepPoint, realization: u64) -> Result<TridiagonalData> {
    let setup = build_realization(cfg, point, realization)?;
    let v0 = vectorize(&setup.initial)?.into_data();
    let out = bilanczos_tridiagonalize(&setup.lindbladian, &v0, cfg.algorithm.max_steps, &cfg.algorithm.bilanczos)?;
    Ok(out.tridiagonal)
}

/// Per-`n` statistics over the realizations that reached step `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientRow {
    pub n: usize,
    pub re_a: Stat,
    pub im_a: Stat,
    pub abs_a: Stat,
    /// Absent on the last row.
    pub b: Option<Stat>,
    pub c: Option<Stat>,
}

pub fn average_coefficients(tables: &[&TridiagonalData]) -> Vec<CoefficientRow> {
    let len = tables.iter().map(|t| t.n_steps()).max().unwrap_or(0);
    (0..len)
        .filter_map(|i| {
            let col = |f: &dyn Fn(&TridiagonalData) -> Option<f64>| -> Option<Stat> {
                Stat::from_samples(&tables.iter().filter_map(|t| f(t)).collect::<Vec<_>>())
            };
            Some(CoefficientRow {
                n: i + 1,
                re_a: col(&|t| t.a.get(i).map(|a| a.re))?,
                im_a: col(&|t| t.a.get(i).map(|a| a.im))?,
                abs_a: col(&|t| t.a.get(i).map(|a| a.norm()))?,
                b: col(&|t| t.b.get(i).map(|b| b.re)),
                c: col(&|t| t.c.get(i).map(|c| c.re)),
            })
        })
        .collect()
}

fn opt_stat(s: &Option<Stat>) -> (String, String) {
    match s {
        Some(s) => (s.mean.to_string(), s.stderr.map_or(String::new(), |e| e.to_string())),
        None => (String::new(), String::new()),
    }
}

/// `n,count,re_a,im_a,abs_a,abs_a_stderr,b,b_stderr,c,c_stderr`.
pub fn coefficients_csv(rows: &[CoefficientRow]) -> String {
    let mut out = String::from("n,count,re_a,im_a,abs_a,abs_a_stderr,b,b_stderr,c,c_stderr\n");
    for r in rows {
        let (b, be) = opt_stat(&r.b);
        let (c, ce) = opt_stat(&r.c);
        let (aa, ae) = opt_stat(&Some(r.abs_a));
        let _ = writeln!(out, "{},{},{},{},{aa},{ae},{b},{be},{c},{ce}", r.n, r.abs_a.count, r.re_a.mean, r.im_a.mean);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Saturation {
    /// Plateau of the averaged `|a_n|`.
    pub value: f64,
    /// Spread of per-realization plateau means.
    pub stat: Stat,
    /// First 1-based `n` on the plateau.
    pub onset_n: usize,
    /// Last 1-based `n` on the plateau.
    pub end_n: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointFits {
    /// Every `|a_n|` below `1e-10`: the dissipationless branch, no fits.
    pub dissipationless: bool,
    pub saturation: Option<Saturation>,
    pub window: Option<(usize, usize)>,
    pub slope: Option<LinearFit>,
    /// `slope / M` for p-body points.
    pub c_v: Option<f64>,
    pub fit_error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealizationFailure {
    pub realization: u64,
    pub message: String,
    pub numerical: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointResult {
    pub point: SweepPoint,
    pub realizations: usize,
    pub coefficients: Vec<CoefficientRow>,
    pub fits: PointFits,
    pub failures: Vec<RealizationFailure>,
}

fn point_fits(cfg: &RunConfig, point: &SweepPoint, rows: &[CoefficientRow], tables: &[&TridiagonalData]) -> PointFits {
    let mut fits =
        PointFits { dissipationless: false, saturation: None, window: None, slope: None, c_v: None, fit_error: None };
    if rows.is_empty() {
        fits.fit_error = Some("no successful realization".into());
        return fits;
    }
    let abs_a: Vec<f64> = rows.iter().map(|r| r.abs_a.mean).collect();
    if abs_a.iter().all(|a| *a < 1e-10) {
        fits.dissipationless = true;
        return fits;
    }
    let plateau = plateau_run(&abs_a, cfg.fit.plateau_rel_tol);
    fits.saturation = plateau.and_then(|(value, k, end)| {
        let means: Vec<f64> = tables
            .iter()
            .filter(|t| t.n_steps() > end)
            .map(|t| t.a[k..=end].iter().map(|a| a.norm()).sum::<f64>() / (end + 1 - k) as f64)
            .collect();
        Stat::from_samples(&means).map(|stat| Saturation { value, stat, onset_n: k + 1, end_n: end + 1 })
    });
    let window = cfg
        .fit
        .window
        .map(|[lo, hi]| (lo, hi))
        .unwrap_or_else(|| default_slope_window(plateau.map(|(_, k, _)| k + 1), abs_a.len()));
    fits.window = Some(window);
    let n: Vec<f64> = rows.iter().map(|r| r.n as f64).collect();
    match fit_linear(&n, &abs_a, Some((window.0 as f64, window.1 as f64))) {
        Ok(f) => {
            fits.slope = Some(f);
            if let DissipationConfig::PBody { m, .. } = point.dissipation {
                fits.c_v = Some(f.slope / m as f64);
            }
        }
        Err(e) => fits.fit_error = Some(e.to_string()),
    }
    fits
}

fn run_point_tables(cfg: &RunConfig, point: &SweepPoint) -> Vec<Result<TridiagonalData>> {
    (0..cfg.realizations as u64).into_par_iter().map(|r| run_realization(cfg, point, r)).collect()
}

fn summarize_point(cfg: &RunConfig, point: SweepPoint, results: &[Result<TridiagonalData>]) -> PointResult {
    let tables: Vec<&TridiagonalData> = results.iter().filter_map(|r| r.as_ref().ok()).collect();
    let failures = results
        .iter()
        .enumerate()
        .filter_map(|(r, res)| {
            res.as_ref().err().map(|e| RealizationFailure {
                realization: r as u64,
                message: e.to_string(),
                numerical: !e.is_validation(),
            })
        })
        .collect();
    let coefficients = average_coefficients(&tables);
    let fits = point_fits(cfg, &point, &coefficients, &tables);
    PointResult { point, realizations: cfg.realizations, coefficients, fits, failures }
}

/// Coefficient tables for the base point, one entry per realization.
pub fn run_lanczos(cfg: &RunConfig) -> Result<(PointResult, Vec<Result<TridiagonalData>>)> {
    cfg.validate()?;
    let point = cfg.base_point();
    let results = run_point_tables(cfg, &point);
    Ok((summarize_point(cfg, point, &results), results))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerLawGroup {
    pub n: usize,
    pub m: usize,
    pub v: Vec<f64>,
    pub c_v: Vec<f64>,
    pub fit: Option<PowerLawFit>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub version: String,
    pub base_seed: u64,
    pub seeds: Vec<RealizationSeeds>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub config: RunConfig,
    pub points: Vec<PointResult>,
    /// `c_V = κ V^β` per `(N, M)` for p-body sweeps.
    pub power_laws: Vec<PowerLawGroup>,
    pub provenance: Provenance,
}

impl SweepResult {
    pub fn n_failures(&self) -> usize {
        self.points.iter().map(|p| p.failures.len()).sum()
    }

    pub fn has_numerical_failure(&self) -> bool {
        self.points.iter().flat_map(|p| &p.failures).any(|f| f.numerical)
    }
}

fn power_law_groups(points: &[PointResult]) -> Vec<PowerLawGroup> {
    let mut keys: Vec<(usize, usize)> = points
        .iter()
        .filter_map(|p| match p.point.dissipation {
            DissipationConfig::PBody { m, .. } => Some((p.point.model.n, m)),
            _ => None,
        })
        .collect();
    keys.sort_unstable();
    keys.dedup();
    keys.into_iter()
        .map(|(n, m)| {
            let (v, c_v): (Vec<f64>, Vec<f64>) = points
                .iter()
                .filter_map(|p| match p.point.dissipation {
                    DissipationConfig::PBody { m: pm, v, .. } if pm == m && p.point.model.n == n && v > 0.0 => {
                        p.fits.c_v.map(|c| (v, c))
                    }
                    _ => None,
                })
                .unzip();
            let (fit, error) = match fit_power_law(&v, &c_v) {
                Ok(f) => (Some(f), None),
                Err(e) => (None, Some(e.to_string())),
            };
            PowerLawGroup { n, m, v, c_v, fit, error }
        })
        .collect()
}

/// All grid points × realizations. Failures are recorded per point.
pub fn run_sweep(cfg: &RunConfig) -> Result<SweepResult> {
    cfg.validate()?;
    let points = cfg.points();
    let jobs: Vec<(usize, u64)> =
        (0..points.len()).flat_map(|i| (0..cfg.realizations as u64).map(move |r| (i, r))).collect();
    let results: Vec<Result<TridiagonalData>> =
        jobs.par_iter().map(|&(i, r)| run_realization(cfg, &points[i], r)).collect();
    let summaries: Vec<PointResult> = points
        .iter()
        .enumerate()
        .map(|(i, pt)| summarize_point(cfg, *pt, &results[i * cfg.realizations..(i + 1) * cfg.realizations]))
        .collect();
    let power_laws = power_law_groups(&summaries);
    Ok(SweepResult { config: cfg.clone(), points: summaries, power_laws, provenance: provenance(cfg) })
}

pub fn provenance(cfg: &RunConfig) -> Provenance {
    Provenance {
        version: env!("CARGO_PKG_VERSION").to_string(),
        base_seed: cfg.seed,
        seeds: (0..cfg.realizations as u64).map(|r| realization_seeds(cfg.seed, r)).collect(),
    }
}

/// Realization-averaged observables on the time grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvolveResult {
    pub point: SweepPoint,
    pub t: Vec<f64>,
    pub z: Vec<Stat>,
    pub k: Vec<Stat>,
    pub otoc: Vec<Stat>,
    /// Mean `φ_n(t)` for `n < n_phi`, indexed `[time][n]`.
    pub phi: Vec<Vec<C64>>,
    pub leak_times: Vec<Option<f64>>,
    pub failures: Vec<RealizationFailure>,
    pub provenance: Provenance,
}

struct RealizationTrajectory {
    z: Vec<f64>,
    k: Vec<f64>,
    otoc: Vec<f64>,
    phi: Vec<Vec<C64>>,
    leak: Option<f64>,
}

fn evolve_realization(cfg: &RunConfig, realization: u64, grid: &[f64]) -> Result<RealizationTrajectory> {
    let point = cfg.base_point();
    let t = run_realization(cfg, &point, realization)?;
    let k_max = cfg.evolve.k_max.map_or(t.n_steps(), |k| k.min(t.n_steps()));
    let traj = evolve_wavefunctions(&t, grid, k_max, &EvolveOptions { tol: cfg.evolve.tol, ..Default::default() })?;
    let otoc = otoc_from_wavefunctions(&traj, point.model.q, point.model.n, cfg.initial_operator.indices.len())?;
    let n_phi = cfg.evolve.n_phi.min(k_max);
    let phi = traj.phi.iter().map(|row| row[..n_phi].to_vec()).collect();
    Ok(RealizationTrajectory { z: traj.z, k: traj.k, otoc, phi, leak: traj.leak_time })
}

/// Evolve every realization's chain and average `Z`, `K`, OTOC and `φ_n`.
pub fn run_evolve(cfg: &RunConfig) -> Result<EvolveResult> {
    cfg.validate()?;
    let grid = cfg.evolve.grid();
    let runs: Vec<Result<RealizationTrajectory>> =
        (0..cfg.realizations as u64).into_par_iter().map(|r| evolve_realization(cfg, r, &grid)).collect();
    let mut failures = Vec::new();
    let mut ok = Vec::new();
    for (r, run) in runs.into_iter().enumerate() {
        match run {
            Ok(x) => ok.push(x),
            Err(e) => failures.push(RealizationFailure {
                realization: r as u64,
                message: e.to_string(),
                numerical: !e.is_validation(),
            }),
        }
    }
    if ok.is_empty() {
        let first = failures.first().map(|f| f.message.clone()).unwrap_or_default();
        return Err(Error::Numerical(format!("every realization failed: {first}")));
    }
    let across = |f: &dyn Fn(&RealizationTrajectory) -> &Vec<f64>| -> Vec<Stat> {
        (0..grid.len())
            .map(|i| Stat::from_samples(&ok.iter().map(|x| f(x)[i]).collect::<Vec<_>>()).expect("nonempty"))
            .collect()
    };
    let n_phi = ok.iter().map(|x| x.phi[0].len()).min().unwrap_or(0);
    let phi = (0..grid.len())
        .map(|i| (0..n_phi).map(|n| ok.iter().map(|x| x.phi[i][n]).sum::<C64>() / ok.len() as f64).collect())
        .collect();
    Ok(EvolveResult {
        point: cfg.base_point(),
        z: across(&|x| &x.z),
        k: across(&|x| &x.k),
        otoc: across(&|x| &x.otoc),
        phi,
        leak_times: ok.iter().map(|x| x.leak).collect(),
        t: grid,
        failures,
        provenance: provenance(cfg),
    })
}

impl EvolveResult {
    /// `t,Z,K,OTOC,re_phi0,im_phi0,…` with realization means.
    pub fn to_csv(&self) -> String {
        let n_phi = self.phi.first().map_or(0, Vec::len);
        let mut out = String::from("t,Z,K,OTOC");
        for n in 0..n_phi {
            let _ = write!(out, ",re_phi{n},im_phi{n}");
        }
        out.push('\n');
        for i in 0..self.t.len() {
            let _ = write!(out, "{},{},{},{}", self.t[i], self.z[i].mean, self.k[i].mean, self.otoc[i].mean);
            for p in &self.phi[i] {
                let _ = write!(out, ",{},{}", p.re, p.im);
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    fs::write(&path, contents)?;
    Ok(path)
}

fn to_json<T: Serialize>(x: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(x)?;
    s.push('\n');
    Ok(s)
}

fn point_label(i: usize, pt: &SweepPoint) -> String {
    let d = match pt.dissipation {
        DissipationConfig::None => "closed".to_string(),
        DissipationConfig::Linear { lambda } => format!("lambda{lambda}"),
        DissipationConfig::PBody { p, m, v } => format!("p{p}_m{m}_v{v}"),
    };
    format!("point{i:03}_n{}_{d}", pt.model.n)
}

/// Writes `lanczos.json` plus, for CSV, the averaged table and one table per realization.
pub fn write_lanczos(
    dir: &Path,
    format: OutputFormat,
    cfg: &RunConfig,
    summary: &PointResult,
    tables: &[Result<TridiagonalData>],
) -> Result<Vec<PathBuf>> {
    #[derive(Serialize)]
    struct Doc<'a> {
        config: &'a RunConfig,
        summary: &'a PointResult,
        #[serde(skip_serializing_if = "Option::is_none")]
        tables: Option<Vec<Option<&'a TridiagonalData>>>,
        provenance: Provenance,
    }
    let mut written = Vec::new();
    let full = format == OutputFormat::Json;
    let doc = Doc {
        config: cfg,
        summary,
        tables: full.then(|| tables.iter().map(|t| t.as_ref().ok()).collect()),
        provenance: provenance(cfg),
    };
    written.push(write_file(dir, "lanczos.json", &to_json(&doc)?)?);
    if !full {
        written.push(write_file(dir, "lanczos_mean.csv", &coefficients_csv(&summary.coefficients))?);
        for (r, t) in tables.iter().enumerate() {
            if let Ok(t) = t {
                written.push(write_file(dir, &format!("lanczos_r{r:04}.csv"), &t.to_csv())?);
            }
        }
    }
    Ok(written)
}

/// Writes `sweep.json` plus, for CSV, one averaged table per point.
pub fn write_sweep(dir: &Path, format: OutputFormat, result: &SweepResult) -> Result<Vec<PathBuf>> {
    let mut written = vec![write_file(dir, "sweep.json", &to_json(result)?)?];
    if format == OutputFormat::Csv {
        for (i, p) in result.points.iter().enumerate() {
            let name = format!("{}.csv", point_label(i, &p.point));
            written.push(write_file(dir, &name, &coefficients_csv(&p.coefficients))?);
        }
        let mut fits = String::from("point,n,class,lambda,p,m,v,saturation,saturation_stderr,onset_n,slope,slope_stderr,intercept,c_v\n");
        for (i, p) in result.points.iter().enumerate() {
            let (class, lambda, pp, m, v) = match p.point.dissipation {
                DissipationConfig::None => ("none", String::new(), String::new(), String::new(), String::new()),
                DissipationConfig::Linear { lambda } => ("linear", lambda.to_string(), String::new(), String::new(), String::new()),
                DissipationConfig::PBody { p, m, v } => ("p_body", String::new(), p.to_string(), m.to_string(), v.to_string()),
            };
            let (sat, sat_e, onset) = match &p.fits.saturation {
                Some(s) => (s.value.to_string(), s.stat.stderr.map_or(String::new(), |e| e.to_string()), s.onset_n.to_string()),
                None => (String::new(), String::new(), String::new()),
            };
            let (sl, sle, ic) = match &p.fits.slope {
                Some(f) => (f.slope.to_string(), f.stderr.to_string(), f.intercept.to_string()),
                None => (String::new(), String::new(), String::new()),
            };
            let cv = p.fits.c_v.map_or(String::new(), |c| c.to_string());
            let _ = writeln!(fits, "{i},{},{class},{lambda},{pp},{m},{v},{sat},{sat_e},{onset},{sl},{sle},{ic},{cv}", p.point.model.n);
        }
        written.push(write_file(dir, "fits.csv", &fits)?);
    }
    Ok(written)
}

pub fn write_evolve(dir: &Path, format: OutputFormat, result: &EvolveResult) -> Result<Vec<PathBuf>> {
    let mut written = vec![write_file(dir, "evolve.json", &to_json(result)?)?];
    if format == OutputFormat::Csv {
        written.push(write_file(dir, "trajectory.csv", &result.to_csv())?);
    }
    Ok(written)
}

pub(crate) fn write_named(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    write_file(dir, name, contents)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ModelConfig;

    fn small() -> RunConfig {
        RunConfig {
            model: ModelConfig { n: 6, q: 4, j: 1.0 },
            realizations: 3,
            algorithm: crate::config::AlgorithmConfig { max_steps: 12, ..Default::default() },
            ..Default::default()
        }
    }

    #[test]
    fn seeds_are_distinct() {
        let s = realization_seeds(7, 0);
        assert_ne!(s.hamiltonian, s.jumps);
        assert_ne!(s, realization_seeds(7, 1));
        assert_eq!(s, realization_seeds(7, 0));
    }

    #[test]
    fn sweep_is_deterministic() {
        let mut cfg = small();
        cfg.sweep.lambda = vec![0.0, 0.1];
        let a = run_sweep(&cfg).unwrap();
        let b = run_sweep(&cfg).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert!(a.points[0].fits.dissipationless);
        assert!(!a.points[1].fits.dissipationless);
        assert_eq!(a.n_failures(), 0);
    }

    #[test]
    fn averaging_uneven_lengths() {
        let t1 = TridiagonalData::new(vec![C64::new(0.0, 1.0); 3], vec![C64::new(1.0, 0.0); 2], vec![C64::new(1.0, 0.0); 2]).unwrap();
        let t2 = TridiagonalData::new(vec![C64::new(0.0, 3.0); 2], vec![C64::new(2.0, 0.0)], vec![C64::new(2.0, 0.0)]).unwrap();
        let rows = average_coefficients(&[&t1, &t2]);
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[0].abs_a.mean, 2.0);
        assert_eq!(rows[2].abs_a.count, 1);
        assert_eq!(rows[1].b.unwrap().count, 1);
        assert!(rows[2].b.is_none());
    }

    #[test]
    fn evolve_small() {
        let mut cfg = small();
        cfg.evolve.t_max = 1.0;
        cfg.evolve.n_t = 5;
        let r = run_evolve(&cfg).unwrap();
        assert!((r.z[0].mean - 1.0).abs() < 1e-12 && r.k[0].mean.abs() < 1e-12);
        assert!((r.otoc[0].mean - 1.0 / 6.0).abs() < 1e-12);
        assert!(r.to_csv().starts_with("t,Z,K,OTOC,re_phi0,im_phi0"));
    }
}
