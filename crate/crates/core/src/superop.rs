//! Vectorization and the adjoint Lindbladian superoperator.
//!
//! Operators are vectorized by stacking columns, so `A·O·B` becomes
//! `(Bᵀ ⊗ A) vec(O)`, and the doubled-space inner product is scaled by
//! `1/D` to agree with [`op_inner_product`](crate::majorana::op_inner_product).
//!
//! The superoperator is kept as a sum of factored terms `c · A·O·B` rather
//! than an assembled `4^{N/2}`-square matrix. Applying it costs a few dense
//! `D × D` products (or `O(D²)` permutations for Majorana strings), and
//! [`LindbladSuper::to_dense`] assembles `Σ c (Bᵀ ⊗ A)` when an explicit
//! matrix is wanted.
//!
//! The action is
//!
//! ```text
//! L(O) = [H, O] − i Σ_k ( σ L_k† O L_k − ½ {L_k† L_k, O} )
//! ```
//!
//! with `σ = −1` exactly when both the jump operators and `O` are fermionic.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::combinatorics::{binomial, combinations, factorial};
use crate::error::{Error, Result};
use crate::linop::{CMatrix, CVector, LinearOperator};
use crate::majorana::{MajoranaSet, Monomial, Operator, C64};
use crate::model::{validate_pbody, JumpOperatorSet, JumpSpec};

/// Largest `N` for which [`LindbladSuper::to_dense`] will assemble a matrix.
pub const DENSE_ASSEMBLY_MAX_N: usize = 10;

/// Column-stacked operator with its physical dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorizedOperator {
    dim: usize,
    data: CVector,
}

impl VectorizedOperator {
    pub fn from_data(dim: usize, data: CVector) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::Dimension { expected: dim * dim, got: data.len() });
        }
        Ok(VectorizedOperator { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn data(&self) -> &CVector {
        &self.data
    }

    pub fn into_data(self) -> CVector {
        self.data
    }

    /// `⟨⟨self|other⟩⟩ = Tr(A†B)/D`.
    pub fn inner(&self, other: &VectorizedOperator) -> C64 {
        self.data.dotc(&other.data) / self.dim as f64
    }

    pub fn norm(&self) -> f64 {
        self.inner(self).re.sqrt()
    }
}

pub fn vectorize(o: &Operator) -> Result<VectorizedOperator> {
    if o.nrows() != o.ncols() {
        return Err(Error::Dimension { expected: o.nrows(), got: o.ncols() });
    }
    Ok(VectorizedOperator { dim: o.nrows(), data: CVector::from_column_slice(o.as_slice()) })
}

pub fn devectorize(v: &VectorizedOperator) -> Operator {
    Operator::from_column_slice(v.dim, v.dim, v.data.as_slice())
}

/// Fermion parity of an operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of_length(s: usize) -> Parity {
        if s % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// Parity of `o` under `(-1)^F`, or `None` if it mixes sectors.
pub fn operator_parity(ms: &MajoranaSet, o: &Operator, tol: f64) -> Option<Parity> {
    let p = ms.parity();
    let conj = &p * o * &p;
    let scale = o.iter().map(|z| z.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    if (&conj - o).iter().all(|z| z.norm() <= tol * scale) {
        Some(Parity::Even)
    } else if (&conj + o).iter().all(|z| z.norm() <= tol * scale) {
        Some(Parity::Odd)
    } else {
        None
    }
}

#[derive(Debug, Clone)]
pub enum Factor {
    Identity,
    Monomial(Monomial),
    Dense(Operator),
}

impl Factor {
    /// Pick the cheapest representation; scalar matrices become `(c, Identity)`.
    pub fn classify(m: Operator) -> (C64, Factor) {
        let d = m.nrows();
        let c = m[(0, 0)];
        let is_scalar =
            (0..d).all(|j| (0..d).all(|i| if i == j { m[(i, j)] == c } else { m[(i, j)] == C64::default() }));
        if is_scalar {
            return (c, Factor::Identity);
        }
        match Monomial::from_dense(&m) {
            Some(mono) => (C64::new(1.0, 0.0), Factor::Monomial(mono)),
            None => (C64::new(1.0, 0.0), Factor::Dense(m)),
        }
    }

    fn adjoint(&self) -> Factor {
        match self {
            Factor::Identity => Factor::Identity,
            Factor::Monomial(m) => Factor::Monomial(m.adjoint()),
            Factor::Dense(m) => Factor::Dense(m.adjoint()),
        }
    }

    fn left(&self, o: &Operator) -> Option<Operator> {
        match self {
            Factor::Identity => None,
            Factor::Monomial(m) => Some(m.left_apply(o)),
            Factor::Dense(m) => Some(m * o),
        }
    }

    fn right(&self, o: &Operator) -> Option<Operator> {
        match self {
            Factor::Identity => None,
            Factor::Monomial(m) => Some(m.right_apply(o)),
            Factor::Dense(m) => Some(o * m),
        }
    }

    pub fn to_dense(&self, dim: usize) -> Operator {
        match self {
            Factor::Identity => Operator::identity(dim, dim),
            Factor::Monomial(m) => m.to_dense(),
            Factor::Dense(m) => m.clone(),
        }
    }

    fn norm1(&self) -> f64 {
        match self {
            Factor::Identity => 1.0,
            Factor::Monomial(m) => m.max_abs(),
            Factor::Dense(m) => m.column_iter().map(|c| c.iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max),
        }
    }

    fn norm_inf(&self) -> f64 {
        match self {
            Factor::Dense(m) => m.row_iter().map(|r| r.iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max),
            other => other.norm1(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Part {
    Unitary,
    /// `L† O L` terms, which carry the fermionic sign.
    Sandwich,
    /// `{L†L, O}` terms.
    Anticommutator,
}

/// One term `coef · left · O · right`, i.e. `coef (rightᵀ ⊗ left)`.
#[derive(Debug, Clone)]
pub struct KronTerm {
    pub coef: C64,
    pub left: Factor,
    pub right: Factor,
    pub part: Part,
}

impl KronTerm {
    fn new(coef: C64, left: Factor, right: Factor, part: Part) -> Self {
        KronTerm { coef, left, right, part }
    }

    fn act(&self, o: &Operator) -> Option<Operator> {
        match (self.left.left(o), &self.right) {
            (None, Factor::Identity) => None,
            (None, r) => r.right(o),
            (Some(lo), r) => Some(r.right(&lo).unwrap_or(lo)),
        }
    }
}

/// Where the dissipative part came from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum Dissipation {
    None,
    Linear { lambda: f64 },
    PBody { p: usize, m: usize, v: f64, seed: u64 },
    Averaged { p: usize, m: usize, v: f64 },
}

impl Dissipation {
    pub fn fermionic(&self) -> bool {
        match *self {
            Dissipation::None => false,
            Dissipation::Linear { .. } => true,
            Dissipation::PBody { p, .. } | Dissipation::Averaged { p, .. } => p % 2 == 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LindbladMeta {
    pub n_fermions: usize,
    pub dissipation: Dissipation,
    /// Sign `σ` in front of the `L† O L` terms.
    pub sign: i8,
    pub operator_parity: Parity,
    /// Fermionic jumps acting on an even operator.
    pub mixed_parity: bool,
}

/// The adjoint Lindbladian `L_o†` acting on vectorized operators.
#[derive(Debug, Clone)]
pub struct LindbladSuper {
    dim: usize,
    terms: Vec<KronTerm>,
    meta: LindbladMeta,
}

fn n_from_dim(dim: usize) -> Result<usize> {
    if !dim.is_power_of_two() {
        return Err(Error::Sizing(format!("operator dimension {dim} is not a power of two")));
    }
    Ok(2 * dim.trailing_zeros() as usize)
}

fn sign_for(fermionic_jumps: bool, parity: Parity) -> i8 {
    if fermionic_jumps && parity == Parity::Odd {
        -1
    } else {
        1
    }
}

/// Assemble `L_o†` from a Hamiltonian and (optionally) jump operators.
///
/// `parity` is that of the operators being evolved; it fixes the sign of
/// the `L† O L` terms.
pub fn build_lindbladian(h: &Operator, jumps: Option<&JumpOperatorSet>, parity: Parity) -> Result<LindbladSuper> {
    if h.nrows() != h.ncols() {
        return Err(Error::Dimension { expected: h.nrows(), got: h.ncols() });
    }
    let dim = h.nrows();
    let n = n_from_dim(dim)?;
    let mut terms = unitary_terms(h);
    let dissipation = match jumps {
        None => Dissipation::None,
        Some(set) => {
            let sign = sign_for(set.fermionic, parity);
            let mut gram = Operator::zeros(dim, dim);
            for l in &set.operators {
                if l.shape() != (dim, dim) {
                    return Err(Error::Dimension { expected: dim, got: l.nrows() });
                }
                let (c, f) = Factor::classify(l.clone());
                if c == C64::default() {
                    continue;
                }
                let coef = C64::new(0.0, -(sign as f64)) * c.norm_sqr();
                terms.push(KronTerm::new(coef, f.adjoint(), f, Part::Sandwich));
                gram += l.ad_mul(l);
            }
            terms.extend(anticommutator_terms(gram));
            match set.spec {
                JumpSpec::Linear { lambda } => Dissipation::Linear { lambda },
                JumpSpec::PBody { p, m, v, seed } => Dissipation::PBody { p, m, v, seed },
            }
        }
    };
    let fermionic = dissipation.fermionic();
    let meta = LindbladMeta {
        n_fermions: n,
        dissipation,
        sign: sign_for(fermionic, parity),
        operator_parity: parity,
        mixed_parity: fermionic && parity == Parity::Even,
    };
    Ok(LindbladSuper { dim, terms, meta })
}

fn unitary_terms(h: &Operator) -> Vec<KronTerm> {
    if h.iter().all(|z| *z == C64::default()) {
        return Vec::new();
    }
    let one = C64::new(1.0, 0.0);
    vec![
        KronTerm::new(one, Factor::Dense(h.clone()), Factor::Identity, Part::Unitary),
        KronTerm::new(-one, Factor::Identity, Factor::Dense(h.clone()), Part::Unitary),
    ]
}

/// `+ (i/2)(G O + O G)` for `G = Σ L†L`.
fn anticommutator_terms(gram: Operator) -> Vec<KronTerm> {
    let half_i = C64::new(0.0, 0.5);
    match Factor::classify(gram) {
        (c, _) if c == C64::default() => Vec::new(),
        (c, Factor::Identity) => vec![KronTerm::new(half_i * c * 2.0, Factor::Identity, Factor::Identity, Part::Anticommutator)],
        (c, f) => vec![
            KronTerm::new(half_i * c, f.clone(), Factor::Identity, Part::Anticommutator),
            KronTerm::new(half_i * c, Factor::Identity, f, Part::Anticommutator),
        ],
    }
}

/// Dissipative part with every `|V^k_α|²` replaced by its mean `p!V²/N^p`
/// and cross terms dropped.
pub fn averaged_dissipator(ms: &MajoranaSet, p: usize, m: usize, v: f64, parity: Parity) -> Result<LindbladSuper> {
    let n = ms.n_fermions();
    validate_pbody(n, p, m, v)?;
    let dim = ms.dim();
    let fermionic = p % 2 == 1;
    let sign = sign_for(fermionic, parity);
    let w = factorial(p as u32) * v * v / (n as f64).powi(p as i32);
    let mut terms = Vec::new();
    if w > 0.0 {
        let coef = C64::new(0.0, -(sign as f64) * m as f64 * w);
        for idx in combinations(n, p) {
            let s = ms.string_monomial(&idx);
            terms.push(KronTerm::new(coef, Factor::Monomial(s.adjoint()), Factor::Monomial(s), Part::Sandwich));
        }
        let anti = m as f64 * w * binomial(n as i64, p as i64) * 0.5f64.powi(p as i32);
        terms.push(KronTerm::new(C64::new(0.0, anti), Factor::Identity, Factor::Identity, Part::Anticommutator));
    }
    let meta = LindbladMeta {
        n_fermions: n,
        dissipation: Dissipation::Averaged { p, m, v },
        sign,
        operator_parity: parity,
        mixed_parity: fermionic && parity == Parity::Even,
    };
    Ok(LindbladSuper { dim, terms, meta })
}

impl LindbladSuper {
    pub fn dim_phys(&self) -> usize {
        self.dim
    }

    /// Dimension `D²` of the doubled space.
    pub fn dim_doubled(&self) -> usize {
        self.dim * self.dim
    }

    pub fn meta(&self) -> &LindbladMeta {
        &self.meta
    }

    pub fn terms(&self) -> &[KronTerm] {
        &self.terms
    }

    /// Same superoperator with the `L† O L` sign set to `sign` (±1).
    pub fn with_sign(&self, sign: i8) -> LindbladSuper {
        let mut out = self.clone();
        if sign != self.meta.sign {
            for t in out.terms.iter_mut().filter(|t| t.part == Part::Sandwich) {
                t.coef = -t.coef;
            }
            out.meta.sign = sign;
        }
        out
    }

    /// Add the terms of `other` (for instance an averaged dissipator).
    pub fn plus(mut self, other: &LindbladSuper) -> Result<LindbladSuper> {
        if other.dim != self.dim {
            return Err(Error::Dimension { expected: self.dim, got: other.dim });
        }
        self.terms.extend(other.terms.iter().cloned());
        if other.meta.dissipation != Dissipation::None {
            self.meta.dissipation = other.meta.dissipation;
            self.meta.sign = other.meta.sign;
            self.meta.mixed_parity = other.meta.mixed_parity;
        }
        Ok(self)
    }

    /// Only the dissipative terms.
    pub fn dissipative_part(&self) -> LindbladSuper {
        let mut out = self.clone();
        out.terms.retain(|t| t.part != Part::Unitary);
        out
    }

    pub fn apply_operator(&self, o: &Operator) -> Operator {
        let mut out = Operator::zeros(self.dim, self.dim);
        for t in &self.terms {
            match t.act(o) {
                Some(x) => out.zip_apply(&x, |acc, y| *acc += t.coef * y),
                None => out.zip_apply(o, |acc, y| *acc += t.coef * y),
            }
        }
        out
    }

    pub fn apply_adjoint_operator(&self, o: &Operator) -> Operator {
        let mut out = Operator::zeros(self.dim, self.dim);
        for t in &self.terms {
            let adj = KronTerm::new(t.coef.conj(), t.left.adjoint(), t.right.adjoint(), t.part);
            match adj.act(o) {
                Some(x) => out.zip_apply(&x, |acc, y| *acc += adj.coef * y),
                None => out.zip_apply(o, |acc, y| *acc += adj.coef * y),
            }
        }
        out
    }

    pub fn apply(&self, v: &VectorizedOperator) -> Result<VectorizedOperator> {
        self.check(v)?;
        vectorize(&self.apply_operator(&devectorize(v)))
    }

    pub fn apply_adjoint(&self, v: &VectorizedOperator) -> Result<VectorizedOperator> {
        self.check(v)?;
        vectorize(&self.apply_adjoint_operator(&devectorize(v)))
    }

    fn check(&self, v: &VectorizedOperator) -> Result<()> {
        if v.dim != self.dim {
            return Err(Error::Dimension { expected: self.dim_doubled(), got: v.data.len() });
        }
        Ok(())
    }

    /// Explicit `Σ c (Bᵀ ⊗ A)` on the doubled space; refused above
    /// [`DENSE_ASSEMBLY_MAX_N`].
    pub fn to_dense(&self) -> Result<CMatrix> {
        if self.meta.n_fermions > DENSE_ASSEMBLY_MAX_N {
            return Err(Error::Sizing(format!(
                "dense assembly is limited to N <= {DENSE_ASSEMBLY_MAX_N}, got {}",
                self.meta.n_fermions
            )));
        }
        let d2 = self.dim_doubled();
        let mut out = CMatrix::zeros(d2, d2);
        for t in &self.terms {
            let a = t.left.to_dense(self.dim);
            let bt = t.right.to_dense(self.dim).transpose();
            out += bt.kronecker(&a) * t.coef;
        }
        Ok(out)
    }

    /// Write nonzero entries as `row col re im` lines (0-based, column-stacking order).
    pub fn write_coordinates<W: Write>(&self, mut w: W) -> Result<()> {
        let m = self.to_dense()?;
        writeln!(w, "# lindblad-superoperator dim={}", m.nrows())?;
        for j in 0..m.ncols() {
            for i in 0..m.nrows() {
                let z = m[(i, j)];
                if z != C64::default() {
                    writeln!(w, "{i} {j} {} {}", z.re, z.im)?;
                }
            }
        }
        Ok(())
    }
}

impl LinearOperator for LindbladSuper {
    fn dim(&self) -> usize {
        self.dim_doubled()
    }

    fn apply(&self, v: &CVector) -> CVector {
        let o = Operator::from_column_slice(self.dim, self.dim, v.as_slice());
        CVector::from_column_slice(self.apply_operator(&o).as_slice())
    }

    fn apply_adjoint(&self, v: &CVector) -> CVector {
        let o = Operator::from_column_slice(self.dim, self.dim, v.as_slice());
        CVector::from_column_slice(self.apply_adjoint_operator(&o).as_slice())
    }

    fn inner(&self, x: &CVector, y: &CVector) -> C64 {
        x.dotc(y) / self.dim as f64
    }

    fn norm1(&self) -> f64 {
        self.terms.iter().map(|t| t.coef.norm() * t.left.norm1() * t.right.norm_inf()).sum()
    }
}

/// Eigenvalue of the averaged dissipator on a length-`s` Majorana string.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DissipatorEigenvalue {
    pub finite_n: C64,
    /// `i p s R V² / 2^{p-1}` with `R = M/N`.
    pub large_n: C64,
}

/// Exact finite-`N` coefficient
/// `i (R V² p! / 2^{p-1} N^{p-1}) [C(N,p) − C(N−s,p) − Σ_{k≥1} C(N−s,p−2k) C(s,2k)]`.
pub fn dissipator_eigenvalue(n: usize, p: usize, s: usize, m: usize, v: f64) -> Result<DissipatorEigenvalue> {
    if s == 0 || s > n {
        return Err(Error::param("s", format!("must satisfy 1 <= s <= N = {n}, got {s}")));
    }
    validate_pbody(n, p, m, v)?;
    let (ni, pi, si) = (n as i64, p as i64, s as i64);
    let r = m as f64 / n as f64;
    let s3: f64 = (1..=(si / 2).min(pi / 2)).map(|k| binomial(ni - si, pi - 2 * k) * binomial(si, 2 * k)).sum();
    let bracket = binomial(ni, pi) - binomial(ni - si, pi) - s3;
    let pref = r * v * v * factorial(p as u32) / (2f64.powi(p as i32 - 1) * (n as f64).powi(p as i32 - 1));
    Ok(DissipatorEigenvalue {
        finite_n: C64::new(0.0, pref * bracket),
        large_n: C64::new(0.0, (p * s) as f64 * r * v * v / 2f64.powi(p as i32 - 1)),
    })
}
