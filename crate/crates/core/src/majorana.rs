//! Majorana fermions as sparse matrices on a `2^{N/2}`-dimensional space.
//!
//! Generators follow the Jordan-Wigner ladder on `N/2` qubits (qubit `k` is
//! bit `k` of the basis index):
//!
//! ```text
//! ψ_{2k+1} = Z_0 ⋯ Z_{k-1} X_k / √2
//! ψ_{2k+2} = Z_0 ⋯ Z_{k-1} Y_k / √2
//! ```
//!
//! so that `{ψ_a, ψ_b} = δ_ab` and `ψ_a² = 1/2`. Labels are 1-based throughout
//! the public API, matching the usual physics notation.
//!
//! Every product of generators is a monomial matrix (one nonzero per row and
//! column). [`Monomial`] keeps that structure so strings of any length stay
//! cheap to build and multiply.

use nalgebra::DMatrix;
use nalgebra_sparse::{CooMatrix, CsrMatrix};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Dense operator on the physical Hilbert space.
pub type Operator = DMatrix<C64>;

/// Sparse operator on the physical Hilbert space.
pub type SparseOperator = CsrMatrix<C64>;

/// Matrix with exactly one nonzero per column: column `c` maps to row
/// `rows[c]` with weight `phases[c]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Monomial {
    rows: Vec<usize>,
    phases: Vec<C64>,
}

impl Monomial {
    pub fn identity(dim: usize) -> Self {
        Monomial { rows: (0..dim).collect(), phases: vec![C64::new(1.0, 0.0); dim] }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Matrix product `self · rhs`.
    pub fn mul(&self, rhs: &Monomial) -> Monomial {
        debug_assert_eq!(self.dim(), rhs.dim());
        let (rows, phases) = rhs
            .rows
            .iter()
            .zip(&rhs.phases)
            .map(|(&r, &ph)| (self.rows[r], self.phases[r] * ph))
            .unzip();
        Monomial { rows, phases }
    }

    pub fn scale(mut self, factor: C64) -> Monomial {
        self.phases.iter_mut().for_each(|p| *p *= factor);
        self
    }

    pub fn adjoint(&self) -> Monomial {
        let mut rows = vec![0; self.dim()];
        let mut phases = vec![C64::default(); self.dim()];
        for (c, (&r, &ph)) in self.rows.iter().zip(&self.phases).enumerate() {
            rows[r] = c;
            phases[r] = ph.conj();
        }
        Monomial { rows, phases }
    }

    /// Add `weight · self` into a dense matrix.
    pub fn add_to_dense(&self, weight: C64, target: &mut Operator) {
        for (c, (&r, &ph)) in self.rows.iter().zip(&self.phases).enumerate() {
            target[(r, c)] += weight * ph;
        }
    }

    /// `self · o` in `O(D²)`.
    pub fn left_apply(&self, o: &Operator) -> Operator {
        let mut out = Operator::zeros(o.nrows(), o.ncols());
        for c in 0..o.ncols() {
            for (k, (&r, &ph)) in self.rows.iter().zip(&self.phases).enumerate() {
                out[(r, c)] = ph * o[(k, c)];
            }
        }
        out
    }

    /// `o · self` in `O(D²)`.
    pub fn right_apply(&self, o: &Operator) -> Operator {
        let mut out = Operator::zeros(o.nrows(), o.ncols());
        for (c, (&r, &ph)) in self.rows.iter().zip(&self.phases).enumerate() {
            out.column_mut(c).zip_apply(&o.column(r), |x, y| *x = y * ph);
        }
        out
    }

    /// Largest entry magnitude, which is both the 1-norm and the ∞-norm.
    pub fn max_abs(&self) -> f64 {
        self.phases.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Recognize a dense matrix with one nonzero per column and per row.
    pub fn from_dense(m: &Operator) -> Option<Monomial> {
        if m.nrows() != m.ncols() {
            return None;
        }
        let mut rows = Vec::with_capacity(m.ncols());
        let mut phases = Vec::with_capacity(m.ncols());
        let mut seen = vec![false; m.nrows()];
        for c in 0..m.ncols() {
            let mut hit = None;
            for r in 0..m.nrows() {
                if m[(r, c)] != C64::default() {
                    if hit.is_some() {
                        return None;
                    }
                    hit = Some(r);
                }
            }
            let r = hit?;
            if std::mem::replace(&mut seen[r], true) {
                return None;
            }
            rows.push(r);
            phases.push(m[(r, c)]);
        }
        Some(Monomial { rows, phases })
    }

    pub fn to_dense(&self) -> Operator {
        let mut out = Operator::zeros(self.dim(), self.dim());
        self.add_to_dense(C64::new(1.0, 0.0), &mut out);
        out
    }

    pub fn to_csr(&self) -> SparseOperator {
        let d = self.dim();
        let mut coo = CooMatrix::new(d, d);
        for (c, (&r, &ph)) in self.rows.iter().zip(&self.phases).enumerate() {
            coo.push(r, c, ph);
        }
        CsrMatrix::from(&coo)
    }
}

/// The `N` Clifford generators.
#[derive(Debug, Clone)]
pub struct MajoranaSet {
    n_fermions: usize,
    generators: Vec<SparseOperator>,
    monomials: Vec<Monomial>,
}

impl MajoranaSet {
    /// Largest supported `N`; the physical dimension is then `2^12 = 4096`.
    pub const MAX_FERMIONS: usize = 24;

    pub fn new(n_fermions: usize) -> Result<Self> {
        if n_fermions < 2 || n_fermions % 2 != 0 {
            return Err(Error::Sizing(format!("N must be even and >= 2, got {n_fermions}")));
        }
        if n_fermions > Self::MAX_FERMIONS {
            return Err(Error::Sizing(format!(
                "N = {n_fermions} exceeds the cap of {}",
                Self::MAX_FERMIONS
            )));
        }
        let qubits = n_fermions / 2;
        let dim = 1usize << qubits;
        let norm = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let mut monomials = Vec::with_capacity(n_fermions);
        for a in 0..n_fermions {
            let k = a / 2;
            let is_y = a % 2 == 1;
            let mut rows = Vec::with_capacity(dim);
            let mut phases = Vec::with_capacity(dim);
            for b in 0..dim {
                let string_sign = if (b & ((1 << k) - 1)).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                let flip = if is_y {
                    if b & (1 << k) == 0 { C64::new(0.0, 1.0) } else { C64::new(0.0, -1.0) }
                } else {
                    C64::new(1.0, 0.0)
                };
                rows.push(b ^ (1 << k));
                phases.push(flip * string_sign * norm);
            }
            monomials.push(Monomial { rows, phases });
        }
        let generators = monomials.iter().map(Monomial::to_csr).collect();
        Ok(MajoranaSet { n_fermions, generators, monomials })
    }

    pub fn n_fermions(&self) -> usize {
        self.n_fermions
    }

    /// Physical Hilbert-space dimension `2^{N/2}`.
    pub fn dim(&self) -> usize {
        1 << (self.n_fermions / 2)
    }

    /// Generator `ψ_label` (1-based).
    pub fn generator(&self, label: usize) -> &SparseOperator {
        &self.generators[label - 1]
    }

    pub fn generators(&self) -> &[SparseOperator] {
        &self.generators
    }

    pub fn dense(&self, label: usize) -> Operator {
        self.monomials[label - 1].to_dense()
    }

    pub fn monomial(&self, label: usize) -> &Monomial {
        &self.monomials[label - 1]
    }

    /// Ordered product `ψ_{i_1} ⋯ ψ_{i_s}` for strictly increasing labels.
    pub fn string(&self, indices: &[usize]) -> Result<OperatorString> {
        validate_indices(indices, self.n_fermions)?;
        Ok(OperatorString::from_monomial(indices.to_vec(), self.string_monomial(indices)))
    }

    /// Product of generators without the ordering check (labels may repeat).
    pub(crate) fn string_monomial(&self, labels: &[usize]) -> Monomial {
        labels
            .iter()
            .fold(Monomial::identity(self.dim()), |acc, &l| acc.mul(&self.monomials[l - 1]))
    }

    /// Total fermion parity `(-1)^F`, diagonal in the qubit basis.
    pub fn parity(&self) -> Operator {
        Operator::from_diagonal(&nalgebra::DVector::from_fn(self.dim(), |b, _| {
            C64::new(if b.count_ones() % 2 == 0 { 1.0 } else { -1.0 }, 0.0)
        }))
    }
}

pub fn build_majorana_set(n_fermions: usize) -> Result<MajoranaSet> {
    MajoranaSet::new(n_fermions)
}

fn validate_indices(indices: &[usize], n: usize) -> Result<()> {
    let fail = |reason: &str| Err(Error::Indices { indices: indices.to_vec(), reason: reason.into() });
    if indices.iter().any(|&i| i == 0 || i > n) {
        return fail(&format!("labels must lie in 1..={n}"));
    }
    if indices.windows(2).any(|w| w[0] >= w[1]) {
        return fail("labels must be strictly increasing");
    }
    Ok(())
}

/// A Majorana string `ψ_{i_1} ⋯ ψ_{i_s}` with `i_1 < ⋯ < i_s`.
#[derive(Debug, Clone)]
pub struct OperatorString {
    indices: Vec<usize>,
    matrix: SparseOperator,
    monomial: Monomial,
}

impl OperatorString {
    fn from_monomial(indices: Vec<usize>, monomial: Monomial) -> Self {
        OperatorString { matrix: monomial.to_csr(), indices, monomial }
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn matrix(&self) -> &SparseOperator {
        &self.matrix
    }

    pub fn monomial(&self) -> &Monomial {
        &self.monomial
    }

    pub fn to_dense(&self) -> Operator {
        self.monomial.to_dense()
    }

    /// `2^{s/2} ψ_{i_1} ⋯ ψ_{i_s}`, the unit-norm version of the string.
    pub fn normalized(&self) -> Operator {
        self.to_dense() * C64::new(2f64.powf(self.len() as f64 / 2.0), 0.0)
    }

    /// True when the string has odd length.
    pub fn is_fermionic(&self) -> bool {
        self.len() % 2 == 1
    }
}

pub fn operator_string(ms: &MajoranaSet, indices: &[usize]) -> Result<OperatorString> {
    ms.string(indices)
}

/// Infinite-temperature inner product `Tr(A†B) / Tr(I)`.
pub fn op_inner_product(a: &Operator, b: &Operator) -> Result<C64> {
    if a.shape() != b.shape() || a.nrows() != a.ncols() {
        return Err(Error::Dimension { expected: a.nrows(), got: b.nrows() });
    }
    let d = a.nrows() as f64;
    Ok(a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum::<C64>() / d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn anticomm(a: &Operator, b: &Operator) -> Operator {
        a * b + b * a
    }

    fn max_abs(m: &Operator) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn two_fermions() {
        let ms = build_majorana_set(2).unwrap();
        assert_eq!(ms.dim(), 2);
        let (p1, p2) = (ms.dense(1), ms.dense(2));
        let half_id = Operator::identity(2, 2) * C64::new(0.5, 0.0);
        assert!(max_abs(&(&p1 * &p1 - &half_id)) < 1e-15);
        assert!(max_abs(&anticomm(&p1, &p2)) < 1e-15);
    }

    #[test]
    fn clifford_relations_and_hermiticity() {
        for n in [2, 4, 6, 8] {
            let ms = build_majorana_set(n).unwrap();
            let id = Operator::identity(ms.dim(), ms.dim());
            for a in 1..=n {
                let pa = ms.dense(a);
                assert!(max_abs(&(&pa - pa.adjoint())) < 1e-15);
                for b in 1..=n {
                    let expected = if a == b { id.clone() } else { Operator::zeros(ms.dim(), ms.dim()) };
                    assert!(max_abs(&(anticomm(&pa, &ms.dense(b)) - expected)) < 1e-13);
                }
            }
        }
    }

    #[test]
    fn trace_normalization_n8() {
        let ms = build_majorana_set(8).unwrap();
        for a in 1..=8 {
            for b in 1..=8 {
                let v = op_inner_product(&ms.dense(a), &ms.dense(b)).unwrap();
                let expected = if a == b { 0.5 } else { 0.0 };
                assert!((v - C64::new(expected, 0.0)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn full_string_is_hermitian_at_n4() {
        let ms = build_majorana_set(4).unwrap();
        let s = ms.string(&[1, 2, 3, 4]).unwrap().to_dense();
        assert!(max_abs(&(&s - s.adjoint())) < 1e-15);
    }

    #[test]
    fn rejects_bad_sizes_and_indices() {
        assert!(matches!(build_majorana_set(3), Err(Error::Sizing(_))));
        assert!(matches!(build_majorana_set(0), Err(Error::Sizing(_))));
        assert!(matches!(build_majorana_set(26), Err(Error::Sizing(_))));
        let ms = build_majorana_set(4).unwrap();
        assert!(ms.string(&[2, 1]).is_err());
        assert!(ms.string(&[1, 1]).is_err());
        assert!(ms.string(&[0]).is_err());
        assert!(ms.string(&[5]).is_err());
    }

    #[test]
    fn string_norms() {
        let ms = build_majorana_set(4).unwrap();
        let s1 = ms.string(&[1]).unwrap().to_dense();
        let s12 = ms.string(&[1, 2]).unwrap().to_dense();
        let s13 = ms.string(&[1, 3]).unwrap().to_dense();
        assert!((op_inner_product(&s1, &s1).unwrap().re - 0.5).abs() < 1e-15);
        assert!((op_inner_product(&s12, &s12).unwrap().re - 0.25).abs() < 1e-15);
        assert!(op_inner_product(&s12, &s13).unwrap().norm() < 1e-15);
    }

    #[test]
    fn normalized_operators_have_unit_norm() {
        let ms = build_majorana_set(6).unwrap();
        let o = ms.string(&[1]).unwrap().normalized();
        assert!((op_inner_product(&o, &o).unwrap().re - 1.0).abs() < 1e-14);
        let o = ms.string(&[1, 2, 3]).unwrap().normalized();
        assert!((op_inner_product(&o, &o).unwrap().re - 1.0).abs() < 1e-14);
        let id = Operator::identity(ms.dim(), ms.dim());
        assert!(op_inner_product(&id, &ms.dense(1)).unwrap().norm() < 1e-15);
    }

    #[test]
    fn inner_product_dimension_mismatch() {
        let a = Operator::identity(2, 2);
        let b = Operator::identity(4, 4);
        assert!(matches!(op_inner_product(&a, &b), Err(Error::Dimension { .. })));
    }

    #[test]
    fn parity_anticommutes_with_generators() {
        let ms = build_majorana_set(6).unwrap();
        let p = ms.parity();
        for a in 1..=6 {
            let g = ms.dense(a);
            assert!(max_abs(&(&p * &g + &g * &p)) < 1e-15);
        }
    }

    #[test]
    fn monomial_products_match_dense() {
        let ms = build_majorana_set(6).unwrap();
        let s = ms.string(&[1, 3, 4, 6]).unwrap();
        let dense = ms.dense(1) * ms.dense(3) * ms.dense(4) * ms.dense(6);
        assert!(max_abs(&(s.to_dense() - &dense)) < 1e-15);
        assert!(max_abs(&(s.monomial().adjoint().to_dense() - dense.adjoint())) < 1e-15);
        let csr_dense: Operator = {
            let mut m = Operator::zeros(ms.dim(), ms.dim());
            for (r, c, v) in s.matrix().triplet_iter() {
                m[(r, c)] = *v;
            }
            m
        };
        assert!(max_abs(&(csr_dense - dense)) < 1e-15);
    }
}
