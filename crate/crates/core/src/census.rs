//! Exact enumeration and seeded Monte Carlo estimates of Eisenstein and
//! shifted-Eisenstein counts among polynomials of bounded height.
//!
//! Monte Carlo samples are drawn in fixed chunks of [`CHUNK_SIZE`]. Chunk `c`
//! uses a ChaCha8 generator seeded with the run seed on stream `c`, so a
//! report depends only on its inputs and never on the number of workers.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eisenstein::{is_eisenstein, is_in_f_set, shifted_eisenstein_with, PrimeSearch, ShiftedDecision};
use crate::error::{Error, Result};
use crate::poly::IntPoly;
use crate::primes::{euler_phi, mobius, FactorBudget};

/// Default cap on the number of coefficient vectors an exact census may visit.
pub const DEFAULT_ENUM_CAP: u64 = 100_000_000;

/// Samples per Monte Carlo chunk.
pub const CHUNK_SIZE: u64 = 256;

/// Escalation rounds an exact census may spend on an uncertified negative.
pub const MAX_ESCALATIONS: u32 = 6;

/// Two-sided 95% normal quantile.
const Z95: f64 = 1.959_963_984_540_054;

/// Column order of [`ExperimentReport::csv_record`].
pub const CSV_HEADER: [&str; 12] = [
    "kind", "n", "H", "samples", "eisenstein", "shifted", "f_count", "ratio", "ci_low", "ci_high",
    "seed", "unresolved",
];

/// Footer printed under experiment tables.
pub const REPORT_FOOTER: &str = "ratio = shifted/eisenstein. Every Eisenstein polynomial is \
shifted Eisenstein, so a cubic table listing 1,119 shifted against 3,365 Eisenstein has its two \
count rows swapped; only the ratio of such a table is comparable.";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    ExactCensus,
    MonteCarlo,
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExperimentKind::ExactCensus => "exact-census",
            ExperimentKind::MonteCarlo => "monte-carlo",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub kind: ExperimentKind,
    pub n: usize,
    #[serde(rename = "H")]
    pub height: u64,
    /// Samples drawn, or polynomials enumerated for a census.
    pub samples: u64,
    pub eisenstein_count: u64,
    pub shifted_count: u64,
    /// Polynomials that stay Eisenstein after `x -> x + 1`.
    pub f_count: u64,
    /// `shifted_count / eisenstein_count`, absent when nothing was Eisenstein.
    pub ratio: Option<f64>,
    pub ci_low: Option<f64>,
    pub ci_high: Option<f64>,
    pub seed: Option<u64>,
    /// Negatives that rest on an incomplete factorization.
    pub unresolved_count: u64,
}

impl ExperimentReport {
    /// One CSV row in [`CSV_HEADER`] order; absent values are empty.
    pub fn csv_record(&self) -> Vec<String> {
        let opt_f = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        vec![
            self.kind.to_string(),
            self.n.to_string(),
            self.height.to_string(),
            self.samples.to_string(),
            self.eisenstein_count.to_string(),
            self.shifted_count.to_string(),
            self.f_count.to_string(),
            opt_f(self.ratio),
            opt_f(self.ci_low),
            opt_f(self.ci_high),
            self.seed.map(|s| s.to_string()).unwrap_or_default(),
            self.unresolved_count.to_string(),
        ]
    }
}

/// Per-polynomial classification used by both experiment kinds.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
struct Tally {
    total: u64,
    eisenstein: u64,
    shifted: u64,
    f_set: u64,
    unresolved: u64,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.total += other.total;
        self.eisenstein += other.eisenstein;
        self.shifted += other.shifted;
        self.f_set += other.f_set;
        self.unresolved += other.unresolved;
        self
    }
}

fn classify(f: &IntPoly, budget: &FactorBudget, escalations: u32, tally: &mut Tally) -> Result<()> {
    tally.total += 1;
    if is_eisenstein(f)? {
        tally.eisenstein += 1;
        tally.shifted += 1;
        if is_in_f_set(f)? {
            tally.f_set += 1;
        }
        return Ok(());
    }
    let mut budget = *budget;
    let mut rounds = 0;
    loop {
        match shifted_eisenstein_with(f, &budget, PrimeSearch::ResultantFiltered)? {
            ShiftedDecision::Yes { .. } => {
                tally.shifted += 1;
                return Ok(());
            }
            ShiftedDecision::NoCertified { .. } => return Ok(()),
            ShiftedDecision::NoHeuristic { .. } if rounds < escalations => {
                budget = budget.escalated();
                rounds += 1;
            }
            ShiftedDecision::NoHeuristic { .. } => {
                tally.unresolved += 1;
                return Ok(());
            }
        }
    }
}

fn check_shape(op: &'static str, n: usize, height: u64) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("{op}: degree must be at least 2, got {n}")));
    }
    if height == 0 {
        return Err(Error::NonPositive {
            op,
            got: height.to_string(),
        });
    }
    Ok(())
}

/// Number of coefficient vectors with all `|a_i| <= H`, or an error above `cap`.
fn lattice_size(n: usize, height: u64, cap: u64) -> Result<u64> {
    let side = BigInt::from(2 * height as u128 + 1);
    let size = side.pow(n as u32 + 1);
    match size.to_u64().filter(|&s| s <= cap) {
        Some(s) => Ok(s),
        None => Err(Error::EnumerationCapExceeded {
            size: size.to_string(),
            cap,
        }),
    }
}

fn decode(index: u64, n: usize, height: u64) -> Vec<i64> {
    let side = 2 * height + 1;
    let mut rest = index;
    (0..=n)
        .map(|_| {
            let digit = rest % side;
            rest /= side;
            digit as i64 - height as i64
        })
        .collect()
}

fn run_in_pool<T: Send>(workers: Option<usize>, job: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(job()),
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w.max(1))
                .build()
                .map_err(|e| Error::InvalidArgument(format!("cannot start worker pool: {e}")))?;
            Ok(pool.install(job))
        }
    }
}

/// Classifies every polynomial of degree `n` and height `<= H`.
pub fn exact_census(n: usize, height: u64, enum_cap: u64) -> Result<ExperimentReport> {
    exact_census_with(n, height, enum_cap, &FactorBudget::default(), None)
}

/// [`exact_census`] with an explicit starting budget and worker count.
///
/// Uncertified negatives trigger up to [`MAX_ESCALATIONS`] budget escalations.
pub fn exact_census_with(
    n: usize,
    height: u64,
    enum_cap: u64,
    budget: &FactorBudget,
    workers: Option<usize>,
) -> Result<ExperimentReport> {
    check_shape("exact_census", n, height)?;
    let size = lattice_size(n, height, enum_cap)?;
    let chunks = size.div_ceil(CHUNK_SIZE);
    let tally = run_in_pool(workers, || {
        (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut t = Tally::default();
                for idx in c * CHUNK_SIZE..((c + 1) * CHUNK_SIZE).min(size) {
                    let coeffs = decode(idx, n, height);
                    if coeffs[n] == 0 {
                        continue;
                    }
                    classify(&IntPoly::from_i64s(&coeffs), budget, MAX_ESCALATIONS, &mut t)?;
                }
                Ok(t)
            })
            .collect::<Result<Vec<Tally>>>()
    })??;
    let tally = tally.into_iter().fold(Tally::default(), Tally::merge);
    Ok(ExperimentReport {
        kind: ExperimentKind::ExactCensus,
        n,
        height,
        samples: tally.total,
        eisenstein_count: tally.eisenstein,
        shifted_count: tally.shifted,
        f_count: tally.f_set,
        ratio: ratio(tally.shifted, tally.eisenstein),
        ci_low: None,
        ci_high: None,
        seed: None,
        unresolved_count: tally.unresolved,
    })
}

fn ratio(num: u64, den: u64) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

/// Counts polynomials with `|a_i| <= H` such that `d | a_i` for `i < n`,
/// `gcd(a_0/d, d) = 1` and `gcd(a_n, d) = 1`.
///
/// The conditions act on each coefficient separately, so the count is a
/// product of per-coefficient counts.
pub fn census_h_subset(n: usize, d: i64, height: u64) -> Result<u64> {
    check_shape("census_h_subset", n, height)?;
    if d < 2 {
        return Err(Error::InvalidArgument(format!("d must be at least 2, got {d}")));
    }
    if mobius(d)? == 0 {
        return Err(Error::NotSquarefree(d.to_string()));
    }
    let h = height as i64;
    let count = |pred: &dyn Fn(i64) -> bool| (-h..=h).filter(|&a| pred(a)).count() as u64;
    let constant = count(&|a| a % d == 0 && (a / d).gcd(&d) == 1);
    let middle = count(&|a| a % d == 0);
    let leading = count(&|a| a.gcd(&d) == 1);
    let mut total = BigInt::from(constant) * BigInt::from(middle).pow(n as u32 - 1) * leading;
    if total > BigInt::from(u64::MAX) {
        total = BigInt::from(u64::MAX);
    }
    Ok(total.to_u64().expect("clamped"))
}

/// Main term `2^(n+1) H^(n+1) phi(d)^2 / d^(n+2)` for [`census_h_subset`].
pub fn h_subset_main_term(n: usize, d: i64, height: u64) -> Result<f64> {
    let phi = euler_phi(d)? as f64;
    let two_h = 2.0 * height as f64;
    Ok(two_h.powi(n as i32 + 1) * phi * phi / (d as f64).powi(n as i32 + 2))
}

/// Wilson score interval for `k` successes in `total` trials.
pub fn wilson_interval(k: u64, total: u64) -> (f64, f64) {
    if total == 0 {
        return (0.0, 1.0);
    }
    let n = total as f64;
    let p = k as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    let lo = if k == 0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if k == total { 1.0 } else { (center + half).min(1.0) };
    (lo, hi)
}

/// Settings for [`monte_carlo`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MonteCarloConfig {
    pub n: usize,
    pub height: u64,
    pub samples: u64,
    pub seed: u64,
    pub budget: FactorBudget,
    /// Worker threads; `None` uses the ambient rayon pool.
    pub workers: Option<usize>,
}

impl MonteCarloConfig {
    pub fn new(n: usize, height: u64, samples: u64, seed: u64) -> Self {
        MonteCarloConfig {
            n,
            height,
            samples,
            seed,
            budget: FactorBudget::default(),
            workers: None,
        }
    }
}

/// Draws one polynomial: `a_i` uniform on `[-H, H]`, `a_n` redrawn until nonzero.
fn sample_poly(rng: &mut ChaCha8Rng, n: usize, height: u64) -> IntPoly {
    let h = height as i64;
    let mut coeffs: Vec<i64> = (0..n).map(|_| rng.gen_range(-h..=h)).collect();
    let lead = loop {
        let a = rng.gen_range(-h..=h);
        if a != 0 {
            break a;
        }
    };
    coeffs.push(lead);
    IntPoly::from_i64s(&coeffs)
}

fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

/// Estimates the shifted/plain Eisenstein ratio from random polynomials.
///
/// Heuristic negatives count as negatives and are reported in
/// `unresolved_count`. The ratio interval is `[lo_s / hi_e, hi_s / lo_e]`
/// from the Wilson intervals of the two proportions.
pub fn monte_carlo(cfg: &MonteCarloConfig) -> Result<ExperimentReport> {
    check_shape("monte_carlo", cfg.n, cfg.height)?;
    if cfg.height > i64::MAX as u64 / 2 {
        return Err(Error::InvalidArgument(format!("height {} too large", cfg.height)));
    }
    if cfg.samples == 0 {
        return Err(Error::NonPositive {
            op: "monte_carlo",
            got: "0 samples".into(),
        });
    }
    let chunks = cfg.samples.div_ceil(CHUNK_SIZE);
    let tallies = run_in_pool(cfg.workers, || {
        (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut rng = chunk_rng(cfg.seed, c);
                let count = CHUNK_SIZE.min(cfg.samples - c * CHUNK_SIZE);
                let mut t = Tally::default();
                for _ in 0..count {
                    let f = sample_poly(&mut rng, cfg.n, cfg.height);
                    classify(&f, &cfg.budget, 0, &mut t)?;
                }
                Ok(t)
            })
            .collect::<Result<Vec<Tally>>>()
    })??;
    let t = tallies.into_iter().fold(Tally::default(), Tally::merge);
    let (ratio, ci_low, ci_high) = if t.eisenstein == 0 {
        (None, None, None)
    } else {
        let (lo_s, hi_s) = wilson_interval(t.shifted, t.total);
        let (lo_e, hi_e) = wilson_interval(t.eisenstein, t.total);
        (
            ratio(t.shifted, t.eisenstein),
            Some(lo_s / hi_e),
            Some(hi_s / lo_e),
        )
    };
    Ok(ExperimentReport {
        kind: ExperimentKind::MonteCarlo,
        n: cfg.n,
        height: cfg.height,
        samples: t.total,
        eisenstein_count: t.eisenstein,
        shifted_count: t.shifted,
        f_count: t.f_set,
        ratio,
        ci_low,
        ci_high,
        seed: Some(cfg.seed),
        unresolved_count: t.unresolved,
    })
}
