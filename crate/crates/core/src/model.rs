//! Disorder sampling, the SYK Hamiltonian and jump operators.
//!
//! Coupling tables can be written to and read back from a plain text format:
//!
//! ```text
//! # syk-couplings v1
//! # N=8 q=4 J=1 seed=42
//! 1 2 3 4 -0.0123...
//! ...
//! ```
//!
//! and for dissipators
//!
//! ```text
//! # dissipator-couplings v1
//! # N=8 p=2 M=3 V=0.1 seed=42
//! <jump k> <i_1> ... <i_p> <re> <im>
//! ```
//!
//! Labels are 1-based; values use the shortest round-trip decimal form so a
//! written table reads back bit-identically.

use std::fmt::Write as _;

use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::combinatorics::{binomial, combinations, factorial};
use crate::error::{Error, Result};
use crate::majorana::{MajoranaSet, Operator, SparseOperator, C64};
use crate::seed::rng_from_seed;

/// Gaussian SYK couplings, one per increasing `q`-tuple in lexicographic order.
#[derive(Debug, Clone, PartialEq)]
pub struct SykCouplings {
    pub n: usize,
    pub q: usize,
    pub j: f64,
    pub seed: u64,
    pub values: Vec<(Vec<usize>, f64)>,
}

impl SykCouplings {
    /// `(q-1)! J² / N^{q-1}`.
    pub fn variance(&self) -> f64 {
        syk_variance(self.n, self.q, self.j)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("# syk-couplings v1\n");
        let _ = writeln!(out, "# N={} q={} J={} seed={}", self.n, self.q, self.j, self.seed);
        for (idx, v) in &self.values {
            let _ = writeln!(out, "{} {}", join(idx), v);
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = body_lines(text, "# syk-couplings v1")?;
        let (line_no, header) = lines.next().ok_or(Error::Parse { line: 2, reason: "missing header".into() })?;
        let h = parse_header(header, line_no)?;
        let (n, q) = (h.usize("N", line_no)?, h.usize("q", line_no)?);
        let mut values = Vec::new();
        for (line_no, line) in lines {
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != q + 1 {
                return Err(Error::Parse { line: line_no, reason: format!("expected {} fields", q + 1) });
            }
            let idx = parse_indices(&fields[..q], line_no)?;
            values.push((idx, parse_f64(fields[q], line_no)?));
        }
        Ok(SykCouplings { n, q, j: h.f64("J", line_no)?, seed: h.u64("seed", line_no)?, values })
    }
}

pub fn syk_variance(n: usize, q: usize, j: f64) -> f64 {
    factorial(q as u32 - 1) * j * j / (n as f64).powi(q as i32 - 1)
}

pub fn sample_syk_couplings(n: usize, q: usize, j: f64, seed: u64) -> Result<SykCouplings> {
    if q == 0 || q % 2 != 0 {
        return Err(Error::param("q", format!("must be even and positive, got {q}")));
    }
    if q > n {
        return Err(Error::param("q", format!("q = {q} exceeds N = {n}")));
    }
    if !j.is_finite() || j < 0.0 {
        return Err(Error::param("J", format!("must be finite and nonnegative, got {j}")));
    }
    let sd = syk_variance(n, q, j).sqrt();
    let mut rng = rng_from_seed(seed);
    let values = combinations(n, q)
        .map(|idx| {
            let z: f64 = StandardNormal.sample(&mut rng);
            (idx, sd * z)
        })
        .collect();
    Ok(SykCouplings { n, q, j, seed, values })
}

/// `H = i^{q/2} Σ J_{i_1…i_q} ψ_{i_1} ⋯ ψ_{i_q}` as a dense Hermitian matrix.
pub fn build_hamiltonian(ms: &MajoranaSet, c: &SykCouplings) -> Result<Operator> {
    if c.n != ms.n_fermions() {
        return Err(Error::Dimension { expected: ms.n_fermions(), got: c.n });
    }
    let phase = C64::i().powu(c.q as u32 / 2);
    let mut h = Operator::zeros(ms.dim(), ms.dim());
    for (idx, v) in &c.values {
        ms.string_monomial(idx).add_to_dense(phase * *v, &mut h);
    }
    Ok(h)
}

/// Complex couplings `V^k_α` for `M` random `p`-body jump operators.
#[derive(Debug, Clone, PartialEq)]
pub struct DissipatorCouplings {
    pub n: usize,
    pub p: usize,
    pub m: usize,
    pub v: f64,
    pub seed: u64,
    /// `values[k]` lists the increasing `p`-tuples and couplings of jump `k`.
    pub values: Vec<Vec<(Vec<usize>, C64)>>,
}

impl DissipatorCouplings {
    /// `⟨|V|²⟩ = p! V² / N^p`.
    pub fn mean_square(&self) -> f64 {
        dissipator_mean_square(self.n, self.p, self.v)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("# dissipator-couplings v1\n");
        let _ = writeln!(out, "# N={} p={} M={} V={} seed={}", self.n, self.p, self.m, self.v, self.seed);
        for (k, jump) in self.values.iter().enumerate() {
            for (idx, z) in jump {
                let _ = writeln!(out, "{} {} {} {}", k + 1, join(idx), z.re, z.im);
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = body_lines(text, "# dissipator-couplings v1")?;
        let (line_no, header) = lines.next().ok_or(Error::Parse { line: 2, reason: "missing header".into() })?;
        let h = parse_header(header, line_no)?;
        let (n, p, m) = (h.usize("N", line_no)?, h.usize("p", line_no)?, h.usize("M", line_no)?);
        let mut values = vec![Vec::new(); m];
        for (line_no, line) in lines {
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != p + 3 {
                return Err(Error::Parse { line: line_no, reason: format!("expected {} fields", p + 3) });
            }
            let k = parse_indices(&fields[..1], line_no)?[0];
            if k > m {
                return Err(Error::Parse { line: line_no, reason: format!("jump index {k} exceeds M = {m}") });
            }
            let idx = parse_indices(&fields[1..=p], line_no)?;
            let z = C64::new(parse_f64(fields[p + 1], line_no)?, parse_f64(fields[p + 2], line_no)?);
            values[k - 1].push((idx, z));
        }
        Ok(DissipatorCouplings { n, p, m, v: h.f64("V", line_no)?, seed: h.u64("seed", line_no)?, values })
    }
}

pub fn dissipator_mean_square(n: usize, p: usize, v: f64) -> f64 {
    factorial(p as u32) * v * v / (n as f64).powi(p as i32)
}

pub fn sample_dissipator_couplings(n: usize, p: usize, m: usize, v: f64, seed: u64) -> Result<DissipatorCouplings> {
    validate_pbody(n, p, m, v)?;
    let sd = (dissipator_mean_square(n, p, v) / 2.0).sqrt();
    let mut rng = rng_from_seed(seed);
    let values = (0..m)
        .map(|_| {
            combinations(n, p)
                .map(|idx| {
                    let re: f64 = StandardNormal.sample(&mut rng);
                    let im: f64 = StandardNormal.sample(&mut rng);
                    (idx, C64::new(sd * re, sd * im))
                })
                .collect()
        })
        .collect();
    Ok(DissipatorCouplings { n, p, m, v, seed, values })
}

pub(crate) fn validate_pbody(n: usize, p: usize, m: usize, v: f64) -> Result<()> {
    if p == 0 || p > n {
        return Err(Error::param("p", format!("must satisfy 1 <= p <= N = {n}, got {p}")));
    }
    if m == 0 {
        return Err(Error::param("M", "at least one jump operator is required"));
    }
    if !v.is_finite() || v < 0.0 {
        return Err(Error::param("V", format!("must be finite and nonnegative, got {v}")));
    }
    Ok(())
}

/// Which family of jump operators to build.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum JumpSpec {
    /// `L_i = √λ ψ_i` for every `i`.
    Linear { lambda: f64 },
    /// `M` random sums of `p`-strings with Gaussian complex couplings.
    PBody { p: usize, m: usize, v: f64, seed: u64 },
}

impl JumpSpec {
    pub fn validate(&self, n: usize) -> Result<()> {
        match *self {
            JumpSpec::Linear { lambda } if !lambda.is_finite() || lambda < 0.0 => {
                Err(Error::param("lambda", format!("must be finite and nonnegative, got {lambda}")))
            }
            JumpSpec::Linear { .. } => Ok(()),
            JumpSpec::PBody { p, m, v, .. } => validate_pbody(n, p, m, v),
        }
    }

    /// True when the jumps are odd in the Majoranas.
    pub fn fermionic(&self) -> bool {
        match *self {
            JumpSpec::Linear { .. } => true,
            JumpSpec::PBody { p, .. } => p % 2 == 1,
        }
    }
}

#[derive(Debug, Clone)]
pub struct JumpOperatorSet {
    pub spec: JumpSpec,
    pub operators: Vec<Operator>,
    pub fermionic: bool,
}

impl JumpOperatorSet {
    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn sparse(&self, k: usize) -> SparseOperator {
        SparseOperator::from(&self.operators[k])
    }
}

pub fn build_jump_operators(ms: &MajoranaSet, spec: &JumpSpec) -> Result<JumpOperatorSet> {
    spec.validate(ms.n_fermions())?;
    let operators = match *spec {
        JumpSpec::Linear { lambda } => {
            let s = C64::new(lambda.sqrt(), 0.0);
            (1..=ms.n_fermions()).map(|i| ms.dense(i) * s).collect()
        }
        JumpSpec::PBody { p, m, v, seed } => {
            let c = sample_dissipator_couplings(ms.n_fermions(), p, m, v, seed)?;
            pbody_operators(ms, &c)?
        }
    };
    Ok(JumpOperatorSet { spec: *spec, operators, fermionic: spec.fermionic() })
}

/// Jump operators from an explicit coupling table.
pub fn jump_operators_from_couplings(ms: &MajoranaSet, c: &DissipatorCouplings) -> Result<JumpOperatorSet> {
    let spec = JumpSpec::PBody { p: c.p, m: c.m, v: c.v, seed: c.seed };
    spec.validate(ms.n_fermions())?;
    let operators = pbody_operators(ms, c)?;
    Ok(JumpOperatorSet { spec, operators, fermionic: spec.fermionic() })
}

fn pbody_operators(ms: &MajoranaSet, c: &DissipatorCouplings) -> Result<Vec<Operator>> {
    if c.n != ms.n_fermions() {
        return Err(Error::Dimension { expected: ms.n_fermions(), got: c.n });
    }
    Ok(c.values
        .iter()
        .map(|jump| {
            let mut l = Operator::zeros(ms.dim(), ms.dim());
            for (idx, z) in jump {
                ms.string_monomial(idx).add_to_dense(*z, &mut l);
            }
            l
        })
        .collect())
}

/// Number of increasing `p`-tuples, `C(N, p)`.
pub fn n_strings(n: usize, p: usize) -> f64 {
    binomial(n as i64, p as i64)
}

fn join(idx: &[usize]) -> String {
    idx.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

fn body_lines<'a>(text: &'a str, magic: &str) -> Result<impl Iterator<Item = (usize, &'a str)>> {
    let mut it = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty());
    match it.next() {
        Some((_, l)) if l == magic => Ok(it),
        _ => Err(Error::Parse { line: 1, reason: format!("expected `{magic}`") }),
    }
}

struct Header(Vec<(String, String)>);

impl Header {
    fn get(&self, key: &str, line: usize) -> Result<&str> {
        self.0
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
            .ok_or(Error::Parse { line, reason: format!("header lacks `{key}`") })
    }

    fn usize(&self, key: &str, line: usize) -> Result<usize> {
        self.get(key, line)?.parse().map_err(|_| Error::Parse { line, reason: format!("bad `{key}`") })
    }

    fn u64(&self, key: &str, line: usize) -> Result<u64> {
        self.get(key, line)?.parse().map_err(|_| Error::Parse { line, reason: format!("bad `{key}`") })
    }

    fn f64(&self, key: &str, line: usize) -> Result<f64> {
        parse_f64(self.get(key, line)?, line)
    }
}

fn parse_header(line: &str, line_no: usize) -> Result<Header> {
    let body = line
        .strip_prefix('#')
        .ok_or(Error::Parse { line: line_no, reason: "expected `# key=value ...` header".into() })?;
    body.split_whitespace()
        .map(|kv| {
            kv.split_once('=')
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .ok_or(Error::Parse { line: line_no, reason: format!("malformed header field `{kv}`") })
        })
        .collect::<Result<Vec<_>>>()
        .map(Header)
}

fn parse_indices(fields: &[&str], line: usize) -> Result<Vec<usize>> {
    fields
        .iter()
        .map(|f| match f.parse::<usize>() {
            Ok(i) if i >= 1 => Ok(i),
            _ => Err(Error::Parse { line, reason: format!("bad label `{f}`") }),
        })
        .collect()
}

fn parse_f64(s: &str, line: usize) -> Result<f64> {
    s.parse().map_err(|_| Error::Parse { line, reason: format!("bad number `{s}`") })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::majorana::build_majorana_set;

    fn max_abs(m: &Operator) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn syk_variance_n8_q4() {
        assert!((syk_variance(8, 4, 1.0) - 6.0 / 512.0).abs() < 1e-15);
    }

    #[test]
    fn coupling_counts_and_zero_j() {
        let c = sample_syk_couplings(8, 4, 0.0, 3).unwrap();
        assert_eq!(c.values.len(), 70);
        assert!(c.values.iter().all(|(_, v)| *v == 0.0));
        let d = sample_dissipator_couplings(6, 2, 3, 0.2, 1).unwrap();
        assert_eq!(d.values.len(), 3);
        assert!(d.values.iter().all(|j| j.len() == 15));
    }

    #[test]
    fn sampling_rejects_bad_input() {
        assert!(sample_syk_couplings(8, 3, 1.0, 0).is_err());
        assert!(sample_syk_couplings(4, 6, 1.0, 0).is_err());
        assert!(sample_dissipator_couplings(4, 0, 1, 1.0, 0).is_err());
        assert!(sample_dissipator_couplings(4, 2, 1, -1.0, 0).is_err());
        let ms = build_majorana_set(4).unwrap();
        assert!(build_jump_operators(&ms, &JumpSpec::Linear { lambda: -0.1 }).is_err());
    }

    #[test]
    fn hamiltonian_single_term_n4() {
        let ms = build_majorana_set(4).unwrap();
        let c = sample_syk_couplings(4, 4, 1.0, 9).unwrap();
        let h = build_hamiltonian(&ms, &c).unwrap();
        let j = c.values[0].1;
        let expected = ms.string(&[1, 2, 3, 4]).unwrap().to_dense() * C64::new(-j, 0.0);
        assert!(max_abs(&(h - expected)) < 1e-15);
    }

    #[test]
    fn hamiltonian_is_hermitian() {
        for (n, q) in [(6, 2), (8, 4), (8, 6)] {
            let ms = build_majorana_set(n).unwrap();
            let h = build_hamiltonian(&ms, &sample_syk_couplings(n, q, 1.0, 5).unwrap()).unwrap();
            assert!(max_abs(&(&h - h.adjoint())) < 1e-13);
        }
    }

    #[test]
    fn hamiltonian_size_mismatch() {
        let ms = build_majorana_set(6).unwrap();
        let c = sample_syk_couplings(8, 4, 1.0, 0).unwrap();
        assert!(matches!(build_hamiltonian(&ms, &c), Err(Error::Dimension { .. })));
    }

    #[test]
    fn linear_jumps() {
        let ms = build_majorana_set(6).unwrap();
        let set = build_jump_operators(&ms, &JumpSpec::Linear { lambda: 0.04 }).unwrap();
        assert_eq!(set.len(), 6);
        assert!(set.fermionic);
        for (i, l) in set.operators.iter().enumerate() {
            assert!(max_abs(&(l - ms.dense(i + 1) * C64::new(0.2, 0.0))) < 1e-15);
        }
    }

    #[test]
    fn pbody_parity() {
        let ms = build_majorana_set(8).unwrap();
        let parity = ms.parity();
        for p in 1..=3 {
            let set = build_jump_operators(&ms, &JumpSpec::PBody { p, m: 3, v: 0.3, seed: 11 }).unwrap();
            assert_eq!(set.len(), 3);
            assert_eq!(set.fermionic, p % 2 == 1);
            let sign = if p % 2 == 1 { C64::new(1.0, 0.0) } else { C64::new(-1.0, 0.0) };
            for l in &set.operators {
                assert!(max_abs(&(&parity * l + l * &parity * sign)) < 1e-14);
            }
        }
    }

    #[test]
    fn text_round_trip() {
        let c = sample_syk_couplings(8, 4, 1.3, 77).unwrap();
        assert_eq!(SykCouplings::from_text(&c.to_text()).unwrap(), c);
        let d = sample_dissipator_couplings(6, 3, 2, 0.4, 78).unwrap();
        assert_eq!(DissipatorCouplings::from_text(&d.to_text()).unwrap(), d);
    }

    #[test]
    fn text_parse_errors() {
        assert!(matches!(SykCouplings::from_text("garbage"), Err(Error::Parse { line: 1, .. })));
        let bad = "# syk-couplings v1\n# N=4 q=4 J=1 seed=0\n1 2 3 x\n";
        assert!(matches!(SykCouplings::from_text(bad), Err(Error::Parse { line: 3, .. })));
    }

    #[test]
    fn sampling_is_deterministic() {
        assert_eq!(sample_syk_couplings(10, 4, 1.0, 5).unwrap(), sample_syk_couplings(10, 4, 1.0, 5).unwrap());
        assert_ne!(sample_syk_couplings(10, 4, 1.0, 5).unwrap(), sample_syk_couplings(10, 4, 1.0, 6).unwrap());
    }
}
