//! Randomized robustness campaigns and brute-force oracles.
//!
//! Every trial draws from its own ChaCha stream, selected by the trial index
//! under the campaign seed, so a report does not depend on how trials are
//! scheduled across threads. Errors are drawn uniformly among polynomials of
//! degree `<= tau`; that distribution is a choice made here, only the degree
//! bound matters for the guarantee.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::crt::encode;
use crate::decoder::{classify, reconstruct, Branch, ErroneousResiduePair};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::levels::ModuliPairAnalysis;
use crate::poly::{Degree, Polynomial};

/// Default cap on the number of candidates a brute-force oracle may visit.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1 << 22;

/// Attempts made by [`random_moduli_pair`] before giving up.
pub const MODULI_ATTEMPTS: usize = 1000;

/// Stream reserved for drawing a random moduli pair in a campaign.
const MODULI_STREAM: u64 = u64::MAX;

/// Deterministic RNG for trial `index` under `seed`.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Uniform polynomial with `deg < max_deg_exclusive` (zero included).
pub fn sample_polynomial<R: Rng + ?Sized>(
    field: Field,
    max_deg_exclusive: usize,
    rng: &mut R,
) -> Polynomial {
    let p = field.characteristic();
    let coeffs = (0..max_deg_exclusive).map(|_| rng.gen_range(0..p)).collect();
    Polynomial::new(field, coeffs)
}

/// Uniform polynomial with `deg <= tau`; `tau = -1` yields zero.
pub fn sample_error<R: Rng + ?Sized>(field: Field, tau: i64, rng: &mut R) -> Polynomial {
    let len = usize::try_from(tau + 1).unwrap_or(0);
    sample_polynomial(field, len, rng)
}

/// Random monic polynomial of exactly `degree`.
pub fn random_monic<R: Rng + ?Sized>(field: Field, degree: usize, rng: &mut R) -> Polynomial {
    let p = field.characteristic();
    let mut coeffs: Vec<u64> = (0..degree).map(|_| rng.gen_range(0..p)).collect();
    coeffs.push(1);
    Polynomial::new(field, coeffs)
}

/// Degree ranges (inclusive) for random moduli `m1 = m * gamma1`, `m2 = m * gamma2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ModuliGenParams {
    pub gcd_degree: (usize, usize),
    pub gamma1_degree: (usize, usize),
    pub gamma2_degree: (usize, usize),
}

impl Default for ModuliGenParams {
    fn default() -> Self {
        Self {
            gcd_degree: (1, 4),
            gamma1_degree: (1, 6),
            gamma2_degree: (1, 8),
        }
    }
}

/// Draws a random valid moduli pair by rejection sampling: monic `m`,
/// `gamma1`, `gamma2` of nonzero degree with `gcd(gamma1, gamma2) = 1`.
pub fn random_moduli_pair<R: Rng + ?Sized>(
    field: Field,
    params: &ModuliGenParams,
    rng: &mut R,
) -> Result<ModuliPairAnalysis> {
    let check = |(lo, hi): (usize, usize), name: &str| {
        if lo == 0 || lo > hi {
            Err(Error::InvalidConfig(format!(
                "{name} degree range must satisfy 1 <= lo <= hi, got {lo}..={hi}"
            )))
        } else {
            Ok(())
        }
    };
    check(params.gcd_degree, "gcd")?;
    check(params.gamma1_degree, "gamma1")?;
    check(params.gamma2_degree, "gamma2")?;
    let draw = |range: (usize, usize), rng: &mut R| rng.gen_range(range.0..=range.1);
    for _ in 0..MODULI_ATTEMPTS {
        let m = random_monic(field, draw(params.gcd_degree, rng), rng);
        let g1 = random_monic(field, draw(params.gamma1_degree, rng), rng);
        let g2 = random_monic(field, draw(params.gamma2_degree, rng), rng);
        if !g1.gcd(&g2)?.is_constant() {
            continue;
        }
        return ModuliPairAnalysis::new(&(&m * &g1), &(&m * &g2));
    }
    Err(Error::GenerationFailed(MODULI_ATTEMPTS))
}

/// Where a campaign's moduli come from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModuliSource {
    Explicit { m1: Polynomial, m2: Polynomial },
    Random(ModuliGenParams),
}

/// Parameters of a robustness campaign.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialConfig {
    pub field: Field,
    pub moduli: ModuliSource,
    pub level: usize,
    /// Inclusive bound on error degrees; `-1` means error-free.
    pub tau: i64,
    pub trials: u64,
    pub seed: u64,
    /// Allow `tau` at or beyond the guaranteed bound (informational runs).
    pub boundary: bool,
}

impl TrialConfig {
    /// Resolves the moduli pair and checks the level and `tau`.
    pub fn resolve(&self) -> Result<ModuliPairAnalysis> {
        let analysis = match &self.moduli {
            ModuliSource::Explicit { m1, m2 } => {
                if m1.field() != self.field || m2.field() != self.field {
                    return Err(Error::InvalidConfig(
                        "moduli must be polynomials over the configured field".into(),
                    ));
                }
                ModuliPairAnalysis::new(m1, m2)?
            }
            ModuliSource::Random(params) => {
                let mut rng = trial_rng(self.seed, MODULI_STREAM);
                random_moduli_pair(self.field, params, &mut rng)?
            }
        };
        let spec = analysis.level(self.level)?;
        if self.tau < -1 {
            return Err(Error::InvalidConfig(format!("tau must be >= -1, got {}", self.tau)));
        }
        if self.tau >= analysis.m1_degree() as i64 {
            return Err(Error::InvalidConfig(format!(
                "tau = {} would let errors leave the residue ring of m1 (deg {})",
                self.tau,
                analysis.m1_degree()
            )));
        }
        if !self.boundary && self.tau >= spec.error_bound_exclusive as i64 {
            return Err(Error::InvalidConfig(format!(
                "tau = {} is not below the level-{} bound {}; use boundary mode to probe beyond it",
                self.tau, self.level, spec.error_bound_exclusive
            )));
        }
        Ok(analysis)
    }
}

/// Outcome of one trial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TrialRecord {
    pub index: u64,
    pub a: Polynomial,
    pub e1: Polynomial,
    pub e2: Polynomial,
    pub r1: Polynomial,
    pub r2: Polynomial,
    pub k2: Polynomial,
    pub branch: Option<Branch>,
    pub k2_hat: Option<Polynomial>,
    pub a_hat: Option<Polynomial>,
    pub k2_match: bool,
    /// `deg(a_hat - a)`; `None` when decoding failed.
    pub err_deg: Option<Degree>,
    pub decode_error: Option<String>,
    pub success: bool,
}

/// Runs trial `index`: sample, corrupt, decode, compare.
pub fn run_trial(
    analysis: &ModuliPairAnalysis,
    level: usize,
    tau: i64,
    seed: u64,
    index: u64,
) -> Result<TrialRecord> {
    let field = analysis.field();
    let spec = analysis.level(level)?;
    let mut rng = trial_rng(seed, index);
    let a = sample_polynomial(field, spec.dynamic_range_exclusive, &mut rng);
    let e1 = sample_error(field, tau, &mut rng);
    let e2 = sample_error(field, tau, &mut rng);
    let (residues, witness) = encode(&a, analysis)?;
    let r1 = (residues.a1() + &e1).rem(analysis.m1())?;
    let r2 = (residues.a2() + &e2).rem(analysis.m2())?;
    let received = ErroneousResiduePair::new(analysis, r1.clone(), r2.clone())?;

    let mut record = TrialRecord {
        index,
        a,
        e1,
        e2,
        r1,
        r2,
        k2: witness.k2,
        branch: None,
        k2_hat: None,
        a_hat: None,
        k2_match: false,
        err_deg: None,
        decode_error: None,
        success: false,
    };
    match reconstruct(&received, level) {
        Ok(out) => {
            let err_deg = (&out.a_hat - &record.a).degree();
            record.k2_match = out.k2_hat == record.k2;
            record.success = record.k2_match && err_deg.as_i64() <= tau;
            record.branch = Some(out.branch);
            record.err_deg = Some(err_deg);
            record.k2_hat = Some(out.k2_hat);
            record.a_hat = Some(out.a_hat);
        }
        Err(e) => record.decode_error = Some(e.to_string()),
    }
    Ok(record)
}

/// Config as echoed in a report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ReportConfig {
    pub p: u64,
    pub m1: Polynomial,
    pub m2: Polynomial,
    pub level: usize,
    pub tau: i64,
    pub trials: u64,
    pub seed: u64,
    pub boundary: bool,
    pub error_bound_exclusive: usize,
    pub dynamic_range_exclusive: usize,
}

/// Per-trial records plus aggregates. Success means `k2_hat = k2` and
/// `deg(a_hat - a) <= tau`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialReport {
    pub config: ReportConfig,
    pub records: Vec<TrialRecord>,
    pub successes: u64,
    pub failures: u64,
    pub max_err_deg: Degree,
    pub branch_counts: BTreeMap<Branch, u64>,
}

/// JSON form of a [`TrialReport`]; per-trial records are limited to failures.
#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ReportJson<'a> {
    config: &'a ReportConfig,
    successes: u64,
    failures: u64,
    max_err_deg: Degree,
    branch_counts: BTreeMap<&'static str, u64>,
    failure_cases: Vec<&'a TrialRecord>,
}

impl TrialReport {
    fn from_records(config: ReportConfig, records: Vec<TrialRecord>) -> Self {
        let successes = records.iter().filter(|r| r.success).count() as u64;
        let failures = records.len() as u64 - successes;
        let max_err_deg = records
            .iter()
            .filter_map(|r| r.err_deg)
            .max()
            .unwrap_or(Degree::NegInf);
        let mut branch_counts: BTreeMap<Branch, u64> =
            Branch::ALL.iter().map(|&b| (b, 0)).collect();
        for b in records.iter().filter_map(|r| r.branch) {
            *branch_counts.entry(b).or_default() += 1;
        }
        Self {
            config,
            records,
            successes,
            failures,
            max_err_deg,
            branch_counts,
        }
    }

    pub fn failed_records(&self) -> impl Iterator<Item = &TrialRecord> {
        self.records.iter().filter(|r| !r.success)
    }

    pub fn to_json(&self) -> String {
        let json = ReportJson {
            config: &self.config,
            successes: self.successes,
            failures: self.failures,
            max_err_deg: self.max_err_deg,
            branch_counts: self
                .branch_counts
                .iter()
                .map(|(b, &n)| (b.name(), n))
                .collect(),
            failure_cases: self.failed_records().collect(),
        };
        serde_json::to_string_pretty(&json).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let c = &self.config;
        let mut out = String::new();
        let mode = if c.boundary { "boundary" } else { "guarantee" };
        let _ = writeln!(
            out,
            "campaign: p={} level={} tau={} trials={} seed={} mode={}",
            c.p, c.level, c.tau, c.trials, c.seed, mode
        );
        let _ = writeln!(out, "moduli: m1={} m2={}", c.m1, c.m2);
        let _ = writeln!(
            out,
            "level bounds: tau < {}, deg(a) < {}",
            c.error_bound_exclusive, c.dynamic_range_exclusive
        );
        let _ = writeln!(out, "successes: {}", self.successes);
        let _ = writeln!(out, "failures: {}", self.failures);
        let _ = writeln!(out, "max deg(a_hat - a): {}", self.max_err_deg);
        for (b, n) in &self.branch_counts {
            let _ = writeln!(out, "branch {b}: {n}");
        }
        for r in self.failed_records().take(10) {
            let _ = writeln!(
                out,
                "failure #{}: a={} e1={} e2={} r1={} r2={} k2={} k2_hat={} {}",
                r.index,
                r.a,
                r.e1,
                r.e2,
                r.r1,
                r.r2,
                r.k2,
                r.k2_hat.as_ref().map_or("-".to_string(), ToString::to_string),
                r.decode_error.as_deref().unwrap_or("")
            );
        }
        out
    }
}

/// Runs a campaign on the current thread.
pub fn run_campaign(cfg: &TrialConfig) -> Result<TrialReport> {
    run_campaign_with_threads(cfg, 1)
}

/// Runs a campaign with `threads` workers (`0` uses rayon's default). The
/// report is identical for every thread count.
pub fn run_campaign_with_threads(cfg: &TrialConfig, threads: usize) -> Result<TrialReport> {
    let analysis = cfg.resolve()?;
    let spec = *analysis.level(cfg.level)?;
    let run = |i: u64| run_trial(&analysis, cfg.level, cfg.tau, cfg.seed, i);
    let records: Vec<TrialRecord> = if threads == 1 {
        (0..cfg.trials).map(run).collect::<Result<_>>()?
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;
        pool.install(|| (0..cfg.trials).into_par_iter().map(run).collect::<Result<_>>())?
    };
    let config = ReportConfig {
        p: cfg.field.characteristic(),
        m1: analysis.m1().clone(),
        m2: analysis.m2().clone(),
        level: cfg.level,
        tau: cfg.tau,
        trials: cfg.trials,
        seed: cfg.seed,
        boundary: cfg.boundary,
        error_bound_exclusive: spec.error_bound_exclusive,
        dynamic_range_exclusive: spec.dynamic_range_exclusive,
    };
    Ok(TrialReport::from_records(config, records))
}

/// Number of polynomials with `deg < len` over a field of size `p`, saturating.
fn space_size(p: u64, len: usize) -> u128 {
    let len = u32::try_from(len).unwrap_or(u32::MAX);
    (p as u128).checked_pow(len).unwrap_or(u128::MAX)
}

/// All polynomials with `deg < len`, in base-`p` counting order.
pub fn enumerate_polynomials(field: Field, len: usize) -> impl Iterator<Item = Polynomial> {
    let p = field.characteristic();
    let total = space_size(p, len);
    (0..total).map(move |mut idx| {
        let coeffs = (0..len)
            .map(|_| {
                let c = (idx % p as u128) as u64;
                idx /= p as u128;
                c
            })
            .collect();
        Polynomial::new(field, coeffs)
    })
}

/// A polynomial in range whose residues break the lower bound
/// `deg(m) + deg(sigma_i) <= deg(a1 - a2) < deg(m1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Lemma1Violation {
    pub a: Polynomial,
    pub a1: Polynomial,
    pub a2: Polynomial,
}

/// Enumerates every `a` with `deg(a) < deg(M) - deg(sigma_level)` and, where
/// `deg(a2) < deg(m1)` and `a1 != a2`, checks
/// `deg(m) + deg(sigma_level) <= deg(a1 - a2) < deg(m1)`.
pub fn brute_force_lemma1(
    analysis: &ModuliPairAnalysis,
    level: usize,
    cap: u64,
) -> Result<Vec<Lemma1Violation>> {
    let spec = *analysis.level(level)?;
    let field = analysis.field();
    let size = space_size(field.characteristic(), spec.dynamic_range_exclusive);
    if size > cap as u128 {
        return Err(Error::EnumerationTooLarge { size, cap });
    }
    let m1_deg = analysis.m1_degree();
    let mut violations = Vec::new();
    for a in enumerate_polynomials(field, spec.dynamic_range_exclusive) {
        let a1 = a.rem(analysis.m1())?;
        let a2 = a.rem(analysis.m2())?;
        if a2.degree() >= m1_deg || a1 == a2 {
            continue;
        }
        let d = (&a1 - &a2).degree();
        if d < spec.error_bound_exclusive || d >= m1_deg {
            violations.push(Lemma1Violation { a, a1, a2 });
        }
    }
    Ok(violations)
}

/// A case where the observed branch disagrees with the clean residues.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Lemma2Violation {
    pub a: Polynomial,
    pub e1: Polynomial,
    pub e2: Polynomial,
    pub expected: Branch,
    pub observed: Branch,
}

/// The branch dictated by the clean residues.
pub fn true_branch(analysis: &ModuliPairAnalysis, a1: &Polynomial, a2: &Polynomial) -> Branch {
    if a1 == a2 {
        Branch::Case3EqualResidues
    } else if a2.degree() >= analysis.m1_degree() {
        Branch::Case2LargeResidue
    } else {
        Branch::Case1FoldedDifference
    }
}

/// Enumerates every `a` in the level's range and every error pair with
/// degrees `<= tau`, checking that the branch picked from `q21` is the one
/// the clean residues dictate.
pub fn brute_force_lemma2(
    analysis: &ModuliPairAnalysis,
    level: usize,
    tau: i64,
    cap: u64,
) -> Result<Vec<Lemma2Violation>> {
    let spec = *analysis.level(level)?;
    if tau < -1 || tau >= spec.error_bound_exclusive as i64 {
        return Err(Error::InvalidConfig(format!(
            "tau must lie in -1..{}, got {tau}",
            spec.error_bound_exclusive
        )));
    }
    let field = analysis.field();
    let p = field.characteristic();
    let err_len = (tau + 1) as usize;
    let size = space_size(p, spec.dynamic_range_exclusive)
        .saturating_mul(space_size(p, err_len))
        .saturating_mul(space_size(p, err_len));
    if size > cap as u128 {
        return Err(Error::EnumerationTooLarge { size, cap });
    }
    let errors: Vec<Polynomial> = enumerate_polynomials(field, err_len).collect();
    let mut violations = Vec::new();
    for a in enumerate_polynomials(field, spec.dynamic_range_exclusive) {
        let a1 = a.rem(analysis.m1())?;
        let a2 = a.rem(analysis.m2())?;
        let expected = true_branch(analysis, &a1, &a2);
        for e1 in &errors {
            for e2 in &errors {
                let q21 = &(&a1 + e1) - &(&a2 + e2);
                let observed = classify(&q21, analysis, level)?;
                if observed != expected {
                    violations.push(Lemma2Violation {
                        a: a.clone(),
                        e1: e1.clone(),
                        e2: e2.clone(),
                        expected,
                        observed,
                    });
                }
            }
        }
    }
    Ok(violations)
}

/// Replayable instance found by [`search_boundary_counterexample`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Counterexample {
    pub seed: u64,
    pub level: usize,
    pub tau: i64,
    pub record: TrialRecord,
}

/// Random search with `tau` equal to the level bound (one past what is
/// guaranteed) for an instance the decoder gets wrong. Finding none says
/// nothing about whether one exists.
pub fn search_boundary_counterexample(
    analysis: &ModuliPairAnalysis,
    level: usize,
    budget: u64,
    seed: u64,
) -> Result<Option<Counterexample>> {
    let tau = analysis.level(level)?.error_bound_exclusive as i64;
    for index in 0..budget {
        let record = run_trial(analysis, level, tau, seed, index)?;
        if !record.success {
            return Ok(Some(Counterexample {
                seed,
                level,
                tau,
                record,
            }));
        }
    }
    Ok(None)
}
