//! Wavefunctions on the non-Hermitian Krylov chain and observables built
//! from them.
//!
//! With `O(t) = Σ_n i^n φ_n(t) p_{n+1}` the amplitudes obey
//!
//! ```text
//! ∂_t φ_k = c_k φ_{k-1} + i a_{k+1} φ_k − b_{k+1} φ_{k+1},    φ_k(0) = δ_k0
//! ```
//!
//! so `φ_0` is the autocorrelation `⟨⟨O_0| e^{i L t} |O_0⟩⟩`.

use std::fmt::Write as _;

use log::warn;
use serde::{Deserialize, Serialize};

use crate::bilanczos::TridiagonalData;
use crate::error::{Error, Result};
use crate::linop::{CMatrix, CVector};
use crate::majorana::{Operator, C64};
use crate::ode::{integrate, OdeOptions};
use crate::superop::LindbladSuper;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EvolveOptions {
    /// Integrator tolerance (absolute and relative).
    pub tol: f64,
    /// Tail amplitude `|φ_{K_max-1}|` above which truncation is reported.
    pub tail_tol: f64,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        EvolveOptions { tol: 1e-10, tail_tol: 1e-8 }
    }
}

/// Chain length covering `needed` sites with the default 50% margin.
pub fn default_k_max(needed: usize) -> usize {
    (needed * 3).div_ceil(2).max(1)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KrylovTrajectory {
    pub t: Vec<f64>,
    /// `phi[i][n]` is `φ_n(t_i)`.
    pub phi: Vec<Vec<C64>>,
    pub z: Vec<f64>,
    pub k: Vec<f64>,
    pub tail: Vec<f64>,
    /// First grid time at which the tail exceeded the tolerance.
    pub leak_time: Option<f64>,
}

impl KrylovTrajectory {
    pub fn k_max(&self) -> usize {
        self.phi.first().map_or(0, Vec::len)
    }

    /// Build from precomputed amplitudes (for instance closed-form ones).
    pub fn from_amplitudes(t: Vec<f64>, phi: Vec<Vec<C64>>) -> Result<Self> {
        if t.len() != phi.len() {
            return Err(Error::Dimension { expected: t.len(), got: phi.len() });
        }
        let z = phi.iter().map(|row| row.iter().map(|p| p.norm_sqr()).sum()).collect();
        let tail = phi.iter().map(|row| row.last().map_or(0.0, |p| p.norm())).collect();
        let mut traj = KrylovTrajectory { t, phi, z, k: Vec::new(), tail, leak_time: None };
        traj.k = krylov_complexity(&traj)?;
        Ok(traj)
    }

    pub fn autocorrelation(&self) -> Vec<C64> {
        self.phi.iter().map(|row| row[0]).collect()
    }

    /// CSV with `t,Z,K[,OTOC],re_phi0,im_phi0,…` for the first `n_phi` amplitudes.
    pub fn to_csv(&self, otoc: Option<&[f64]>, n_phi: usize) -> String {
        let n_phi = n_phi.min(self.k_max());
        let mut out = String::from("t,Z,K");
        if otoc.is_some() {
            out.push_str(",OTOC");
        }
        for n in 0..n_phi {
            let _ = write!(out, ",re_phi{n},im_phi{n}");
        }
        out.push('\n');
        for i in 0..self.t.len() {
            let _ = write!(out, "{},{},{}", self.t[i], self.z[i], self.k[i]);
            if let Some(o) = otoc {
                let _ = write!(out, ",{}", o[i]);
            }
            for p in &self.phi[i][..n_phi] {
                let _ = write!(out, ",{},{}", p.re, p.im);
            }
            out.push('\n');
        }
        out
    }
}

/// Generator `M` of `∂_t φ = M φ` on the first `k_max` sites.
pub fn chain_generator(t: &TridiagonalData, k_max: usize) -> Result<CMatrix> {
    check_k_max(t, k_max)?;
    let mut m = CMatrix::zeros(k_max, k_max);
    for k in 0..k_max {
        m[(k, k)] = C64::i() * t.a[k];
        if k + 1 < k_max {
            m[(k, k + 1)] = -t.b[k];
            m[(k + 1, k)] = t.c[k];
        }
    }
    Ok(m)
}

fn check_k_max(t: &TridiagonalData, k_max: usize) -> Result<()> {
    if k_max == 0 || k_max > t.n_steps() {
        return Err(Error::param(
            "k_max",
            format!("must lie in 1..={} (available coefficients), got {k_max}", t.n_steps()),
        ));
    }
    Ok(())
}

fn validate_grid(t_grid: &[f64]) -> Result<()> {
    if t_grid.is_empty() || t_grid[0] < 0.0 || t_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::param("t_grid", "must be nonempty, start at t >= 0 and increase strictly"));
    }
    Ok(())
}

/// Integrate the chain truncated to `k_max` sites over `t_grid`.
pub fn evolve_wavefunctions(
    t: &TridiagonalData,
    t_grid: &[f64],
    k_max: usize,
    opts: &EvolveOptions,
) -> Result<KrylovTrajectory> {
    check_k_max(t, k_max)?;
    validate_grid(t_grid)?;
    let ia: Vec<C64> = t.a[..k_max].iter().map(|a| C64::i() * a).collect();
    let b = &t.b[..k_max - 1];
    let c = &t.c[..k_max - 1];
    let rhs = |_: f64, y: &CVector| {
        CVector::from_fn(k_max, |k, _| {
            let mut v = ia[k] * y[k];
            if k > 0 {
                v += c[k - 1] * y[k - 1];
            }
            if k + 1 < k_max {
                v -= b[k] * y[k + 1];
            }
            v
        })
    };
    let mut y0 = CVector::zeros(k_max);
    y0[0] = C64::new(1.0, 0.0);
    let mut times = vec![0.0];
    times.extend(t_grid.iter().copied().filter(|&x| x > 0.0));
    let ode = OdeOptions { atol: opts.tol, rtol: opts.tol, ..Default::default() };
    let mut states = integrate(rhs, y0, &times, &ode)?;
    if t_grid[0] > 0.0 {
        states.remove(0);
    }
    let phi: Vec<Vec<C64>> = states.into_iter().map(|s| s.as_slice().to_vec()).collect();
    let mut traj = KrylovTrajectory::from_amplitudes(t_grid.to_vec(), phi)?;
    traj.leak_time = traj.t.iter().zip(&traj.tail).find(|(_, &tail)| tail > opts.tail_tol).map(|(&t, _)| t);
    if let Some(tl) = traj.leak_time {
        warn!("Krylov chain truncated at {k_max} sites leaks amplitude from t = {tl}");
    }
    Ok(traj)
}

/// `K(t) = Σ n |φ_n|² / Σ |φ_n|²`.
pub fn krylov_complexity(traj: &KrylovTrajectory) -> Result<Vec<f64>> {
    traj.phi
        .iter()
        .zip(&traj.t)
        .map(|(row, &t)| {
            let z: f64 = row.iter().map(|p| p.norm_sqr()).sum();
            if !(z > 0.0) || !z.is_finite() {
                return Err(Error::Numerical(format!("wavefunction norm vanished at t = {t}")));
            }
            Ok(row.iter().enumerate().map(|(n, p)| n as f64 * p.norm_sqr()).sum::<f64>() / z)
        })
        .collect()
}

/// Weighted populations `Σ_l w(l) |φ_l|²`.
pub fn q_complexity(traj: &KrylovTrajectory, weights: &[f64]) -> Result<Vec<f64>> {
    if weights.len() < traj.k_max() {
        return Err(Error::param("weights", format!("need {} values, got {}", traj.k_max(), weights.len())));
    }
    Ok(traj.phi.iter().map(|row| row.iter().zip(weights).map(|(p, w)| w * p.norm_sqr()).sum()).collect())
}

/// Operator size `d(k) = k (q − 2) + p` carried by chain site `k`.
pub fn site_size(k: usize, q: usize, p: usize) -> f64 {
    (k * (q - 2) + p) as f64
}

/// OTOC from the size distribution: `⟨s⟩/N` for odd `p`, `1 − ⟨s⟩/N` for even `p`.
pub fn otoc_from_wavefunctions(traj: &KrylovTrajectory, q: usize, n: usize, p: usize) -> Result<Vec<f64>> {
    if q < 2 || q % 2 != 0 {
        return Err(Error::param("q", format!("must be even and >= 2, got {q}")));
    }
    if p == 0 || n == 0 {
        return Err(Error::param("p", "p and N must be positive"));
    }
    let weights: Vec<f64> = (0..traj.k_max()).map(|k| site_size(k, q, p)).collect();
    let num = q_complexity(traj, &weights)?;
    Ok(num
        .iter()
        .zip(&traj.z)
        .map(|(s, z)| {
            let mean = s / z / n as f64;
            if p % 2 == 1 {
                mean
            } else {
                1.0 - mean
            }
        })
        .collect())
}

/// `⟨⟨O_0| e^{i L t} |O_0⟩⟩` by integrating the operator equation
/// `dO/dt = i L(O)` directly on the physical space.
pub fn direct_autocorrelation(l: &LindbladSuper, o0: &Operator, t_grid: &[f64], tol: f64) -> Result<Vec<C64>> {
    let d = l.dim_phys();
    if o0.shape() != (d, d) {
        return Err(Error::Dimension { expected: d, got: o0.nrows() });
    }
    validate_grid(t_grid)?;
    let rhs = |_: f64, y: &CVector| {
        let o = Operator::from_column_slice(d, d, y.as_slice());
        CVector::from_column_slice(l.apply_operator(&o).as_slice()) * C64::i()
    };
    let y0 = CVector::from_column_slice(o0.as_slice());
    let mut times = vec![0.0];
    times.extend(t_grid.iter().copied().filter(|&x| x > 0.0));
    let mut states = integrate(rhs, y0.clone(), &times, &OdeOptions { atol: tol, rtol: tol, ..Default::default() })?;
    if t_grid[0] > 0.0 {
        states.remove(0);
    }
    Ok(states.iter().map(|s| y0.dotc(s) / d as f64).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(a: &[C64], b: &[f64]) -> TridiagonalData {
        let b: Vec<C64> = b.iter().map(|&x| C64::new(x, 0.0)).collect();
        TridiagonalData::new(a.to_vec(), b.clone(), b).unwrap()
    }

    #[test]
    fn initial_condition() {
        let t = chain(&[C64::default(); 4], &[1.0, 2.0, 3.0]);
        let traj = evolve_wavefunctions(&t, &[0.0, 0.1], 4, &EvolveOptions::default()).unwrap();
        assert_eq!(traj.phi[0], vec![C64::new(1.0, 0.0), C64::default(), C64::default(), C64::default()]);
        assert_eq!(traj.k[0], 0.0);
        assert_eq!(traj.z[0], 1.0);
    }

    #[test]
    fn k_max_validation() {
        let t = chain(&[C64::default(); 3], &[1.0, 1.0]);
        assert!(evolve_wavefunctions(&t, &[0.0, 1.0], 4, &EvolveOptions::default()).is_err());
        assert!(evolve_wavefunctions(&t, &[1.0, 0.5], 3, &EvolveOptions::default()).is_err());
    }

    #[test]
    fn uniform_three_site_complexity() {
        let s = C64::new(1.0 / 3f64.sqrt(), 0.0);
        let traj = KrylovTrajectory::from_amplitudes(vec![0.0], vec![vec![s, s, s]]).unwrap();
        assert!((traj.k[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn vanishing_norm_is_an_error() {
        let r = KrylovTrajectory::from_amplitudes(vec![0.3], vec![vec![C64::default(); 2]]);
        assert!(matches!(r, Err(Error::Numerical(_))));
    }

    #[test]
    fn weights_and_otoc_edge_cases() {
        let one = C64::new(1.0, 0.0);
        let traj = KrylovTrajectory::from_amplitudes(vec![0.0], vec![vec![one, C64::default()]]).unwrap();
        assert_eq!(otoc_from_wavefunctions(&traj, 4, 10, 1).unwrap(), vec![0.1]);
        assert!(otoc_from_wavefunctions(&traj, 3, 10, 1).is_err());
        assert!(q_complexity(&traj, &[1.0]).is_err());
        assert_eq!(q_complexity(&traj, &[1.0, 1.0]).unwrap(), traj.z);
        // All weight on a site of size N saturates the bound.
        let far = KrylovTrajectory::from_amplitudes(vec![1.0], vec![vec![C64::default(), C64::default(), one]]).unwrap();
        assert!((otoc_from_wavefunctions(&far, 4, 5, 1).unwrap()[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn closed_chain_conserves_norm() {
        let t = chain(&[C64::default(); 6], &[0.5, 0.9, 1.2, 1.4, 1.5]);
        let grid: Vec<f64> = (0..=20).map(|i| 0.1 * i as f64).collect();
        let traj = evolve_wavefunctions(&t, &grid, 6, &EvolveOptions::default()).unwrap();
        assert!(traj.z.iter().all(|z| (z - 1.0).abs() < 1e-9));
    }

    #[test]
    fn generator_layout() {
        let t = TridiagonalData::new(
            vec![C64::new(0.0, 0.2), C64::new(0.0, 0.4)],
            vec![C64::new(0.7, 0.0)],
            vec![C64::new(0.5, 0.0)],
        )
        .unwrap();
        let m = chain_generator(&t, 2).unwrap();
        assert_eq!(m[(0, 0)], C64::new(-0.2, 0.0));
        assert_eq!(m[(0, 1)], C64::new(-0.7, 0.0));
        assert_eq!(m[(1, 0)], C64::new(0.5, 0.0));
    }

    #[test]
    fn csv_header() {
        let one = C64::new(1.0, 0.0);
        let traj = KrylovTrajectory::from_amplitudes(vec![0.0], vec![vec![one]]).unwrap();
        let csv = traj.to_csv(Some(&[0.5]), 1);
        assert!(csv.starts_with("t,Z,K,OTOC,re_phi0,im_phi0\n0,1,0,0.5,1,0\n"));
    }

    #[test]
    fn default_margin() {
        assert_eq!(default_k_max(20), 30);
        assert_eq!(default_k_max(1), 2);
    }
}
