//! Bi-Lanczos tridiagonalization of non-Hermitian operators.
//!
//! Starting from `p_1 = q_1 = v0`, each step computes
//!
//! ```text
//! r = L p_j − b_{j-1} p_{j-1} − a_j p_j,     a_j = ⟨q_j| L p_j⟩
//! s = L† q_j − c*_{j-1} q_{j-1} − a*_j q_j
//! ω_j = ⟨r|s⟩,  c_j = √|ω_j|,  b_j = ω*_j / c_j
//! p_{j+1} = r / c_j,  q_{j+1} = s / b*_j
//! ```
//!
//! giving `⟨q_m|p_n⟩ = δ_mn` and `⟨q_m| L p_n⟩ = T_mn` with `a` on the
//! diagonal, `c` below it and `b` above it. Coefficients are indexed from 1
//! as in the recurrences; `a[0]` in the returned vectors is `a_1`.

use std::fmt::Write as _;

use nalgebra::linalg::Schur;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linop::{CMatrix, CVector, LinearOperator};
use crate::majorana::C64;

/// When to re-biorthogonalize new Krylov vectors against all earlier ones.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", content = "threshold", rename_all = "snake_case")]
pub enum FoPolicy {
    Always,
    /// Only when the largest overlap with earlier vectors exceeds the value.
    Threshold(f64),
    Never,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BiLanczosOptions {
    pub fo: FoPolicy,
    /// Stop when `|ω_j| < breakdown_tol · ‖L‖₁`.
    pub breakdown_tol: f64,
    /// A residual shorter than `converged_tol · ‖L‖₁` means the Krylov space closed.
    pub converged_tol: f64,
    /// Tolerance for accepting a starting vector as normalized.
    pub norm_tol: f64,
    pub keep_bases: bool,
}

impl Default for BiLanczosOptions {
    fn default() -> Self {
        BiLanczosOptions {
            fo: FoPolicy::Always,
            breakdown_tol: 1e-12,
            converged_tol: 1e-10,
            norm_tol: 1e-10,
            keep_bases: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    MaxSteps,
    Breakdown,
    Converged,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TridiagonalData {
    pub a: Vec<C64>,
    /// Super-diagonal, `b_1 … b_{n-1}`.
    pub b: Vec<C64>,
    /// Sub-diagonal, `c_1 … c_{n-1}`.
    pub c: Vec<C64>,
    pub termination: Termination,
}

impl TridiagonalData {
    pub fn new(a: Vec<C64>, b: Vec<C64>, c: Vec<C64>) -> Result<Self> {
        if a.is_empty() || b.len() + 1 != a.len() || c.len() != b.len() {
            return Err(Error::Dimension { expected: a.len().saturating_sub(1), got: b.len().max(c.len()) });
        }
        Ok(TridiagonalData { a, b, c, termination: Termination::MaxSteps })
    }

    pub fn n_steps(&self) -> usize {
        self.a.len()
    }

    /// `d_n = √(b_n c_n)` (principal root).
    pub fn d(&self) -> Vec<C64> {
        self.b.iter().zip(&self.c).map(|(b, c)| (b * c).sqrt()).collect()
    }

    /// Leading `n × n` block as a tridiagonal object.
    pub fn truncated(&self, n: usize) -> TridiagonalData {
        let n = n.clamp(1, self.n_steps());
        TridiagonalData {
            a: self.a[..n].to_vec(),
            b: self.b[..n - 1].to_vec(),
            c: self.c[..n - 1].to_vec(),
            termination: self.termination,
        }
    }

    /// Dense `T` with `c` below and `b` above the diagonal.
    pub fn matrix(&self) -> CMatrix {
        let n = self.n_steps();
        let mut t = CMatrix::zeros(n, n);
        for (i, a) in self.a.iter().enumerate() {
            t[(i, i)] = *a;
        }
        for i in 0..n - 1 {
            t[(i + 1, i)] = self.c[i];
            t[(i, i + 1)] = self.b[i];
        }
        t
    }

    /// Complex-symmetric form with both off-diagonals `√(b_n c_n)`.
    pub fn balanced_matrix(&self) -> CMatrix {
        let n = self.n_steps();
        let mut t = CMatrix::zeros(n, n);
        for (i, a) in self.a.iter().enumerate() {
            t[(i, i)] = *a;
        }
        for (i, d) in self.d().into_iter().enumerate() {
            t[(i + 1, i)] = d;
            t[(i, i + 1)] = d;
        }
        t
    }

    /// CSV with columns `n,re_a,im_a,re_b,im_b,c`; the last row has no `b`, `c`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,re_a,im_a,re_b,im_b,c\n");
        for (i, a) in self.a.iter().enumerate() {
            let _ = write!(out, "{},{},{}", i + 1, a.re, a.im);
            match (self.b.get(i), self.c.get(i)) {
                (Some(b), Some(c)) => {
                    let _ = writeln!(out, ",{},{},{}", b.re, b.im, c.re);
                }
                _ => out.push_str(",,,\n"),
            }
        }
        out
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BiLanczosDiagnostics {
    /// After step `j`: `max_{m,n ≤ j+1} |⟨q_m|p_n⟩ − δ_mn|`.
    pub biorthogonality: Vec<f64>,
    pub omegas: Vec<C64>,
    /// Steps at which full re-biorthogonalization ran.
    pub fo_steps: Vec<usize>,
    pub norm1: f64,
}

impl BiLanczosDiagnostics {
    pub fn max_residual(&self) -> f64 {
        self.biorthogonality.iter().copied().fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone)]
pub struct BiLanczosOutput {
    pub tridiagonal: TridiagonalData,
    /// Right vectors `p_1 … p_n`, empty unless `keep_bases` was set.
    pub p: Vec<CVector>,
    /// Left vectors `q_1 … q_n`, empty unless `keep_bases` was set.
    pub q: Vec<CVector>,
    pub diagnostics: BiLanczosDiagnostics,
}

fn axpy(y: &mut CVector, alpha: C64, x: &CVector) {
    y.zip_apply(x, |yi, xi| *yi -= alpha * xi);
}

/// Run at most `max_steps` bi-Lanczos steps from `v0`.
pub fn bilanczos_tridiagonalize<L: LinearOperator + ?Sized>(
    l: &L,
    v0: &CVector,
    max_steps: usize,
    opts: &BiLanczosOptions,
) -> Result<BiLanczosOutput> {
    if v0.len() != l.dim() {
        return Err(Error::Dimension { expected: l.dim(), got: v0.len() });
    }
    if max_steps == 0 {
        return Err(Error::param("max_steps", "must be at least 1"));
    }
    let norm2 = l.inner(v0, v0).re;
    if (norm2 - 1.0).abs() > opts.norm_tol {
        return Err(Error::NotNormalized(norm2));
    }
    let norm1 = l.norm1();
    let max_steps = max_steps.min(l.dim());
    let mut ps: Vec<CVector> = vec![v0.clone()];
    let mut qs: Vec<CVector> = vec![v0.clone()];
    let (mut a, mut b, mut c) = (Vec::new(), Vec::<C64>::new(), Vec::<C64>::new());
    let mut diag = BiLanczosDiagnostics { norm1, ..Default::default() };
    let mut termination = Termination::MaxSteps;

    for j in 0..max_steps {
        let mut r = l.apply(&ps[j]);
        let mut s = l.apply_adjoint(&qs[j]);
        if j > 0 {
            axpy(&mut r, b[j - 1], &ps[j - 1]);
            axpy(&mut s, c[j - 1].conj(), &qs[j - 1]);
        }
        let aj = l.inner(&qs[j], &r);
        axpy(&mut r, aj, &ps[j]);
        axpy(&mut s, aj.conj(), &qs[j]);
        a.push(aj);
        if j + 1 == max_steps {
            break;
        }

        let run_fo = match opts.fo {
            FoPolicy::Always => true,
            FoPolicy::Never => false,
            FoPolicy::Threshold(tol) => overlap(l, &ps, &qs, &r, &s) > tol,
        };
        if run_fo {
            for _ in 0..2 {
                for m in 0..=j {
                    let hr = l.inner(&qs[m], &r);
                    axpy(&mut r, hr, &ps[m]);
                    let hs = l.inner(&ps[m], &s);
                    axpy(&mut s, hs, &qs[m]);
                }
            }
            diag.fo_steps.push(j + 1);
        }

        let omega = l.inner(&r, &s);
        diag.omegas.push(omega);
        if omega.norm() < opts.breakdown_tol * norm1 {
            let rn = l.inner(&r, &r).re.sqrt();
            let sn = l.inner(&s, &s).re.sqrt();
            termination = if rn.min(sn) < opts.converged_tol * norm1 {
                Termination::Converged
            } else {
                Termination::Breakdown
            };
            break;
        }
        let cj = C64::new(omega.norm().sqrt(), 0.0);
        let bj = omega.conj() / cj;
        let p_next = r / cj;
        let q_next = s / bj.conj();
        ps.push(p_next);
        qs.push(q_next);
        b.push(bj);
        c.push(cj);
        diag.biorthogonality.push(last_residual(l, &ps, &qs));
    }

    let tridiagonal = TridiagonalData { a, b, c, termination };
    let n = tridiagonal.n_steps();
    ps.truncate(n);
    qs.truncate(n);
    if !opts.keep_bases {
        ps.clear();
        qs.clear();
    }
    Ok(BiLanczosOutput { tridiagonal, p: ps, q: qs, diagnostics: diag })
}

/// Largest relative overlap of the new residuals with earlier vectors.
fn overlap<L: LinearOperator + ?Sized>(l: &L, ps: &[CVector], qs: &[CVector], r: &CVector, s: &CVector) -> f64 {
    let rn = l.inner(r, r).re.sqrt().max(f64::MIN_POSITIVE);
    let sn = l.inner(s, s).re.sqrt().max(f64::MIN_POSITIVE);
    ps.iter()
        .zip(qs)
        .map(|(p, q)| (l.inner(q, r).norm() / rn).max(l.inner(p, s).norm() / sn))
        .fold(0.0, f64::max)
}

/// Deviation from `δ_mn` involving the newest pair only; earlier entries were
/// recorded at earlier steps.
fn last_residual<L: LinearOperator + ?Sized>(l: &L, ps: &[CVector], qs: &[CVector]) -> f64 {
    let k = ps.len() - 1;
    let mut worst = (l.inner(&qs[k], &ps[k]) - 1.0).norm();
    for m in 0..k {
        worst = worst.max(l.inner(&qs[m], &ps[k]).norm()).max(l.inner(&qs[k], &ps[m]).norm());
    }
    worst
}

/// Hermitian Lanczos with full reorthogonalization; returns `(a_n, b_n)`
/// with real `b_n > 0`. Used as a reference for Hermitian inputs.
pub fn hermitian_lanczos<L: LinearOperator + ?Sized>(
    l: &L,
    v0: &CVector,
    max_steps: usize,
    tol: f64,
) -> Result<(Vec<C64>, Vec<f64>)> {
    if v0.len() != l.dim() {
        return Err(Error::Dimension { expected: l.dim(), got: v0.len() });
    }
    let norm1 = l.norm1();
    let mut basis = vec![v0.clone()];
    let (mut a, mut b) = (Vec::new(), Vec::<f64>::new());
    for j in 0..max_steps.min(l.dim()) {
        let mut r = l.apply(&basis[j]);
        if j > 0 {
            axpy(&mut r, C64::new(b[j - 1], 0.0), &basis[j - 1]);
        }
        let aj = l.inner(&basis[j], &r);
        axpy(&mut r, aj, &basis[j]);
        a.push(aj);
        if j + 1 == max_steps {
            break;
        }
        for _ in 0..2 {
            for v in &basis {
                let h = l.inner(v, &r);
                axpy(&mut r, h, v);
            }
        }
        let bj = l.inner(&r, &r).re.sqrt();
        if bj < tol * norm1 {
            break;
        }
        basis.push(r / C64::new(bj, 0.0));
        b.push(bj);
    }
    Ok((a, b))
}

/// Outcome of the eigenvalue-location check on the balanced tridiagonal matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub eigenvalues: Vec<C64>,
    pub min_im_a: f64,
    pub max_im_a: f64,
    /// `min Im λ − min Im a`.
    pub lower_margin: f64,
    /// `max Im a − max Im λ`.
    pub upper_margin: f64,
    /// Rounding allowance used when deciding `holds`.
    pub tolerance: f64,
    pub holds: bool,
}

/// Check `min Im a_n ≤ Im λ ≤ max Im a_n` for every eigenvalue `λ` of the
/// balanced tridiagonal matrix.
pub fn eigenvalue_bound_check(t: &TridiagonalData) -> Result<BoundReport> {
    let m = t.balanced_matrix();
    let scale = m.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let eigenvalues: Vec<C64> = Schur::try_new(m.clone(), f64::EPSILON, 100_000)
        .and_then(|s| s.eigenvalues())
        .ok_or_else(|| Error::Numerical("Schur decomposition did not converge".into()))?
        .iter()
        .copied()
        .collect();
    let min_im_a = t.a.iter().map(|z| z.im).fold(f64::INFINITY, f64::min);
    let max_im_a = t.a.iter().map(|z| z.im).fold(f64::NEG_INFINITY, f64::max);
    let min_im = eigenvalues.iter().map(|z| z.im).fold(f64::INFINITY, f64::min);
    let max_im = eigenvalues.iter().map(|z| z.im).fold(f64::NEG_INFINITY, f64::max);
    let tolerance = 64.0 * f64::EPSILON * scale * (m.nrows() as f64).sqrt();
    let lower_margin = min_im - min_im_a;
    let upper_margin = max_im_a - max_im;
    Ok(BoundReport {
        eigenvalues,
        min_im_a,
        max_im_a,
        lower_margin,
        upper_margin,
        tolerance,
        holds: lower_margin >= -tolerance && upper_margin >= -tolerance,
    })
}

/// `μ_k = e₁ᵀ (iT)^k e₁` for `k = 0..=k_max`, the Taylor coefficients
/// `d^k φ_0/dt^k` at `t = 0`.
pub fn moments_from_tridiagonal(t: &TridiagonalData, k_max: usize) -> Vec<C64> {
    let it = t.matrix() * C64::i();
    let mut v = CVector::zeros(t.n_steps());
    v[0] = C64::new(1.0, 0.0);
    let mut out = Vec::with_capacity(k_max + 1);
    out.push(v[0]);
    for _ in 0..k_max {
        v = &it * v;
        out.push(v[0]);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linop::DenseOperator;

    fn e1(n: usize) -> CVector {
        let mut v = CVector::zeros(n);
        v[0] = C64::new(1.0, 0.0);
        v
    }

    fn tri(a: &[C64], b: &[C64]) -> TridiagonalData {
        TridiagonalData::new(a.to_vec(), b.to_vec(), b.to_vec()).unwrap()
    }

    #[test]
    fn already_tridiagonal_input() {
        let a = [C64::new(0.0, 0.1), C64::new(0.0, 0.3), C64::new(0.0, 0.2)];
        let b = [C64::new(0.5, 0.0), C64::new(0.7, 0.0)];
        let op = DenseOperator(tri(&a, &b).matrix());
        let out = bilanczos_tridiagonalize(&op, &e1(3), 3, &BiLanczosOptions::default()).unwrap();
        let t = out.tridiagonal;
        for (x, y) in t.a.iter().zip(&a) {
            assert!((x - y).norm() < 1e-14);
        }
        for i in 0..2 {
            assert!((t.b[i] - b[i]).norm() < 1e-14);
            assert!((t.c[i] - b[i]).norm() < 1e-14);
        }
    }

    #[test]
    fn rejects_unnormalized_start() {
        let op = DenseOperator(CMatrix::identity(3, 3));
        let v = e1(3) * C64::new(2.0, 0.0);
        assert!(matches!(
            bilanczos_tridiagonalize(&op, &v, 3, &BiLanczosOptions::default()),
            Err(Error::NotNormalized(_))
        ));
    }

    #[test]
    fn identity_converges_immediately() {
        let op = DenseOperator(CMatrix::identity(4, 4));
        let out = bilanczos_tridiagonalize(&op, &e1(4), 4, &BiLanczosOptions::default()).unwrap();
        assert_eq!(out.tridiagonal.termination, Termination::Converged);
        assert_eq!(out.tridiagonal.n_steps(), 1);
    }

    #[test]
    fn serious_breakdown_is_reported() {
        // ⟨r|s⟩ = 0 with r, s ≠ 0.
        let mut m = CMatrix::zeros(3, 3);
        m[(1, 0)] = C64::new(1.0, 0.0);
        m[(0, 2)] = C64::new(1.0, 0.0);
        let out = bilanczos_tridiagonalize(&DenseOperator(m), &e1(3), 3, &BiLanczosOptions::default()).unwrap();
        assert_eq!(out.tridiagonal.termination, Termination::Breakdown);
    }

    #[test]
    fn bound_closed_system_equality() {
        let t = tri(&[C64::default(); 3], &[C64::new(1.0, 0.0), C64::new(2.0, 0.0)]);
        let r = eigenvalue_bound_check(&t).unwrap();
        assert!(r.holds);
        assert!(r.eigenvalues.iter().all(|z| z.im.abs() < 1e-14));
    }

    #[test]
    fn bound_two_by_two() {
        let t = tri(&[C64::new(0.0, 0.1), C64::new(0.0, 0.5)], &[C64::new(0.3, 0.0)]);
        let r = eigenvalue_bound_check(&t).unwrap();
        assert!(r.holds);
        for z in &r.eigenvalues {
            assert!(z.im >= 0.1 - 1e-14 && z.im <= 0.5 + 1e-14);
        }
    }

    #[test]
    fn moments_small_chains() {
        let mu = 0.7;
        let single = TridiagonalData::new(vec![C64::new(0.0, mu)], vec![], vec![]).unwrap();
        assert!((moments_from_tridiagonal(&single, 1)[1] - C64::new(-mu, 0.0)).norm() < 1e-15);
        let alpha = 1.3;
        let two = tri(&[C64::default(); 2], &[C64::new(alpha, 0.0)]);
        let m = moments_from_tridiagonal(&two, 2);
        assert!((m[2] - C64::new(-alpha * alpha, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn csv_layout() {
        let t = tri(&[C64::new(0.0, 1.0), C64::new(0.0, 3.0)], &[C64::new(2.0, 0.0)]);
        assert_eq!(t.to_csv(), "n,re_a,im_a,re_b,im_b,c\n1,0,1,2,0,2\n2,0,3,,,\n");
    }

    #[test]
    fn d_equals_b_when_symmetric() {
        let t = tri(&[C64::default(); 3], &[C64::new(0.4, 0.0), C64::new(1.1, 0.0)]);
        assert_eq!(t.d(), t.b);
    }

    #[test]
    fn constructor_checks_lengths() {
        assert!(TridiagonalData::new(vec![], vec![], vec![]).is_err());
        assert!(TridiagonalData::new(vec![C64::default(); 2], vec![], vec![]).is_err());
    }
}
