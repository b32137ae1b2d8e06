//! The verification engine: named law comparisons, moment bands, exact
//! small-n cycle oracles, variance-scaling checks, and report assembly.
//!
//! Every distributional claim in this crate funnels through one of the
//! report builders here. Reports are deterministic given their seed: batch
//! generation hands each sample index its own RNG substream, so the numbers
//! do not depend on the worker count.

use crate::haar::{
    cycle_decompose, det_id_minus_phased_permutation, sample_haar_unitary_ginibre,
    sample_haar_unitary_recursive, sample_phased_permutation,
};
use crate::ks;
use crate::linalg;
use crate::opuc;
use crate::product;
use crate::rng::{RngError, RngStream};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::time::Instant;
use thiserror::Error;

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Total-variation band for empirical-vs-exact cycle-count histograms.
pub const CYCLE_TV_BAND: f64 = 0.01;

/// Band for differenced log-determinant variances against the half-log
/// target.
pub const VARIANCE_DIFF_BAND: f64 = 0.1;

/// Sample cap for the normality functional in `variance_scaling_report`.
///
/// Re log Z approaches its normal limit at rate 1/sqrt(log n): at
/// n = 10^4 the law still carries skewness of about -0.2, which a KS test
/// fed 10^5 samples resolves as a genuine departure from the limit. The
/// normality check exists to catch implementation bugs, not to detect that
/// finite n is finite, so it reads at most this many paths; the variance
/// estimates always use the full batch.
pub const NORMALITY_SAMPLE_CAP: usize = 10_000;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("unknown sampler id `{0}`")]
    UnknownSampler(String),
    #[error("unknown comparison id `{0}`")]
    UnknownComparison(String),
    #[error("dimension must be at least 1")]
    EmptyDimension,
    #[error("comparison needs dimension at least {needed}, got {got}")]
    DimensionTooSmall { needed: usize, got: usize },
    #[error("sample count must be at least 1")]
    EmptyBatch,
    #[error("need at least 2 paths to estimate a variance, got {0}")]
    TooFewPaths(usize),
    #[error("exact cycle law needs 1 <= n <= 12, got {0}")]
    CycleLawRange(usize),
    #[error("sizes must satisfy n_small <= n_large, got {small} > {large}")]
    SizeOrder { small: usize, large: usize },
    #[error("sampler produced a non-finite value")]
    NonFinite,
    #[error(transparent)]
    Haar(#[from] crate::haar::HaarError),
    #[error(transparent)]
    Product(#[from] crate::product::ProductError),
    #[error(transparent)]
    Opuc(#[from] crate::opuc::OpucError),
    #[error(transparent)]
    Stats(#[from] crate::ks::StatsError),
    #[error(transparent)]
    Rng(#[from] RngError),
}

/// The scalar samplers addressable from the CLI and the comparison engine.
/// The det variants realize det(Id - G) through an explicit matrix; the
/// product variants through the O(n) factor representations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarSampler {
    UnitaryGinibreDet,
    UnitaryRecursiveDet,
    UnitaryProduct,
    PermutationDet,
    PermutationProduct,
    VerblunskyProduct,
}

impl ScalarSampler {
    pub const ALL: [ScalarSampler; 6] = [
        ScalarSampler::UnitaryGinibreDet,
        ScalarSampler::UnitaryRecursiveDet,
        ScalarSampler::UnitaryProduct,
        ScalarSampler::PermutationDet,
        ScalarSampler::PermutationProduct,
        ScalarSampler::VerblunskyProduct,
    ];

    pub fn id(self) -> &'static str {
        match self {
            ScalarSampler::UnitaryGinibreDet => "unitary-ginibre-det",
            ScalarSampler::UnitaryRecursiveDet => "unitary-recursive-det",
            ScalarSampler::UnitaryProduct => "unitary-product",
            ScalarSampler::PermutationDet => "permutation-det",
            ScalarSampler::PermutationProduct => "permutation-product",
            ScalarSampler::VerblunskyProduct => "verblunsky-product",
        }
    }

    pub fn from_id(id: &str) -> Result<Self, HarnessError> {
        Self::ALL
            .into_iter()
            .find(|s| s.id() == id)
            .ok_or_else(|| HarnessError::UnknownSampler(id.to_string()))
    }

    pub fn sample(self, n: usize, rng: &mut RngStream) -> Result<Complex64, HarnessError> {
        match self {
            ScalarSampler::UnitaryGinibreDet => {
                let g = sample_haar_unitary_ginibre(n, rng)?;
                Ok(linalg::charpoly_at(&g, ONE))
            }
            ScalarSampler::UnitaryRecursiveDet => {
                let g = sample_haar_unitary_recursive(n, rng)?;
                Ok(linalg::charpoly_at(&g, ONE))
            }
            ScalarSampler::UnitaryProduct => Ok(product::sample_unitary_product(n, rng)?),
            ScalarSampler::PermutationDet => {
                let p = sample_phased_permutation(n, rng)?;
                Ok(det_id_minus_phased_permutation(&p))
            }
            ScalarSampler::PermutationProduct => Ok(product::sample_permutation_product(n, rng)?),
            ScalarSampler::VerblunskyProduct => {
                let v = opuc::sample_verblunsky_kn(n, rng)?;
                Ok(v.alphas().iter().fold(ONE, |acc, &a| acc * (ONE - a)))
            }
        }
    }
}

/// A generated batch of scalar samples, reproducible from (sampler, n, seed).
#[derive(Debug, Clone)]
pub struct SampleBatch {
    pub sampler_id: String,
    pub n: usize,
    pub seed: u64,
    pub values: Vec<Complex64>,
}

impl SampleBatch {
    pub fn count(&self) -> usize {
        self.values.len()
    }
}

/// Parallel map with one RNG substream per index: the output is a pure
/// function of (base stream, count), whatever the thread count.
fn par_map<T, F>(count: usize, base: &RngStream, f: F) -> Result<Vec<T>, HarnessError>
where
    T: Send,
    F: Fn(&mut RngStream) -> Result<T, HarnessError> + Sync,
{
    if count == 0 {
        return Err(HarnessError::EmptyBatch);
    }
    (0..count as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = base.substream(i);
            f(&mut rng)
        })
        .collect()
}

fn par_samples<F>(count: usize, base: &RngStream, f: F) -> Result<Vec<Complex64>, HarnessError>
where
    F: Fn(&mut RngStream) -> Result<Complex64, HarnessError> + Sync,
{
    let values = par_map(count, base, f)?;
    if values.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(HarnessError::NonFinite);
    }
    Ok(values)
}

pub fn gen_batch(
    sampler: ScalarSampler,
    n: usize,
    count: usize,
    seed: u64,
) -> Result<SampleBatch, HarnessError> {
    if n == 0 {
        return Err(HarnessError::EmptyDimension);
    }
    let base = RngStream::new(seed);
    let values = par_samples(count, &base, |rng| sampler.sample(n, rng))?;
    Ok(SampleBatch {
        sampler_id: sampler.id().to_string(),
        n,
        seed,
        values,
    })
}

pub fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let m = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / m;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / m;
    (mean, (var / m).sqrt())
}

/// Population variance and its asymptotic standard error
/// sqrt((m4 - var^2) / m).
pub fn variance_and_se(xs: &[f64]) -> (f64, f64) {
    let m = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / m;
    let mut m2 = 0.0;
    let mut m4 = 0.0;
    for x in xs {
        let d = x - mean;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    m2 /= m;
    m4 /= m;
    (m2, (((m4 - m2 * m2).max(0.0)) / m).sqrt())
}

pub fn correlation(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
        sxy += (x - mx) * (y - my);
    }
    sxy / (sxx * syy).sqrt()
}

/// Mean of |Z|^s with its plain standard error.
pub fn mellin_modulus_moment(batch: &SampleBatch, s: f64) -> (f64, f64) {
    let powers: Vec<f64> = batch.values.iter().map(|z| z.norm().powf(s)).collect();
    mean_and_se(&powers)
}

/// Exact law of the cycle count of a uniform permutation of n symbols,
/// P(count = m) for m = 1..=n, via the unsigned-Stirling recurrence
/// c(n, m) = c(n-1, m-1) + (n-1) c(n-1, m).
pub fn cycle_count_exact_law(n: usize) -> Result<Vec<f64>, HarnessError> {
    if n == 0 || n > 12 {
        return Err(HarnessError::CycleLawRange(n));
    }
    let mut row = vec![0u64; n + 1];
    row[1] = 1;
    for size in 2..=n {
        let mut next = vec![0u64; n + 1];
        for m in 1..=size {
            next[m] = row[m - 1] + (size as u64 - 1) * row[m];
        }
        row = next;
    }
    let factorial: u64 = (1..=n as u64).product();
    Ok(row[1..].iter().map(|&c| c as f64 / factorial as f64).collect())
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct FunctionalRow {
    pub name: String,
    pub ks_statistic: f64,
    pub p_value: f64,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct MomentRow {
    pub name: String,
    pub estimate: f64,
    pub standard_error: f64,
    pub target: f64,
    pub verdict: bool,
}

#[derive(Debug, Clone, Copy, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ReportMetadata {
    pub seeds: Vec<u64>,
    pub sizes: Vec<usize>,
    pub counts: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub level: Option<f64>,
    pub wall_time_ms: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub config: Option<serde_json::Value>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct TestReport {
    pub test_id: String,
    pub functionals: Vec<FunctionalRow>,
    pub moments: Vec<MomentRow>,
    pub verdict: Verdict,
    pub metadata: ReportMetadata,
}

impl TestReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

fn overall_verdict(functionals: &[FunctionalRow], moments: &[MomentRow], level: f64) -> Verdict {
    let ks_ok = functionals.iter().all(|f| f.p_value > level);
    let mo_ok = moments.iter().all(|m| m.verdict);
    if ks_ok && mo_ok {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

/// The named law comparisons. Ids are part of the CLI contract.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComparisonKind {
    /// det(Id_n - G) against (1 - alpha) det(Id_{n-1} - H) with
    /// |alpha|^2 ~ Beta(1, n-1): one dimension peeled off as a scalar factor.
    DimensionReduction,
    /// det(Id - G), G Haar unitary, against the O(n) Beta-factor product.
    UnitaryProductLaw,
    /// det(Id - S), S uniform phased permutation, against the
    /// Bernoulli-factor product.
    PermutationProductLaw,
    /// det(Id - G) against prod (1 - alpha_j) over a Verblunsky draw.
    VerblunskyProductLaw,
    /// Bernoulli-factor product against a product of k uniform-phase
    /// factors with k drawn from the cycle-count law.
    CycleProductLaw,
    /// First matrix entry <e_1, G e_1> against a single disk coefficient
    /// with |alpha|^2 ~ Beta(1, n-1).
    FirstColumnLaw,
}

impl ComparisonKind {
    pub const ALL: [ComparisonKind; 6] = [
        ComparisonKind::DimensionReduction,
        ComparisonKind::UnitaryProductLaw,
        ComparisonKind::PermutationProductLaw,
        ComparisonKind::VerblunskyProductLaw,
        ComparisonKind::CycleProductLaw,
        ComparisonKind::FirstColumnLaw,
    ];

    pub fn id(self) -> &'static str {
        match self {
            ComparisonKind::DimensionReduction => "thm12",
            ComparisonKind::UnitaryProductLaw => "cor11",
            ComparisonKind::PermutationProductLaw => "cor12",
            ComparisonKind::VerblunskyProductLaw => "atj",
            ComparisonKind::CycleProductLaw => "remark-product",
            ComparisonKind::FirstColumnLaw => "first-column",
        }
    }

    pub fn from_id(id: &str) -> Result<Self, HarnessError> {
        Self::ALL
            .into_iter()
            .find(|k| k.id() == id)
            .ok_or_else(|| HarnessError::UnknownComparison(id.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub kind: ComparisonKind,
    pub n: usize,
    pub count: usize,
    pub seed: u64,
    pub level: f64,
    /// Normally None (both sides at `n`). Setting it generates the right
    /// side at a different size while moment targets stay pinned to `n`,
    /// as a misconfiguration diagnostic: the |Z|^2 band then separates the
    /// two laws.
    pub right_n: Option<usize>,
}

impl Comparison {
    pub fn new(kind: ComparisonKind, n: usize, count: usize, seed: u64, level: f64) -> Self {
        Comparison {
            kind,
            n,
            count,
            seed,
            level,
            right_n: None,
        }
    }
}

type SideFn<'a> = Box<dyn Fn(&mut RngStream) -> Result<Complex64, HarnessError> + Sync + 'a>;

fn side_fns(kind: ComparisonKind, n_left: usize, n_right: usize) -> Result<(SideFn<'static>, SideFn<'static>), HarnessError> {
    if n_left == 0 || n_right == 0 {
        return Err(HarnessError::EmptyDimension);
    }
    if kind == ComparisonKind::DimensionReduction && (n_left < 2 || n_right < 2) {
        return Err(HarnessError::DimensionTooSmall {
            needed: 2,
            got: n_left.min(n_right),
        });
    }
    let left: SideFn = match kind {
        ComparisonKind::DimensionReduction
        | ComparisonKind::UnitaryProductLaw
        | ComparisonKind::VerblunskyProductLaw => {
            Box::new(move |rng| ScalarSampler::UnitaryGinibreDet.sample(n_left, rng))
        }
        ComparisonKind::PermutationProductLaw => {
            Box::new(move |rng| ScalarSampler::PermutationDet.sample(n_left, rng))
        }
        ComparisonKind::CycleProductLaw => {
            Box::new(move |rng| ScalarSampler::PermutationProduct.sample(n_left, rng))
        }
        ComparisonKind::FirstColumnLaw => Box::new(move |rng| {
            let g = sample_haar_unitary_ginibre(n_left, rng)?;
            Ok(g.get(0, 0))
        }),
    };
    let right: SideFn = match kind {
        ComparisonKind::DimensionReduction => Box::new(move |rng| {
            // scalar factor first, then the lower-dimensional determinant;
            // the two draws are independent so order is a convention
            let factor = ONE - rng.kn_alpha((n_right - 1) as f64)?;
            let h = sample_haar_unitary_ginibre(n_right - 1, rng)?;
            Ok(factor * linalg::charpoly_at(&h, ONE))
        }),
        ComparisonKind::UnitaryProductLaw => {
            Box::new(move |rng| ScalarSampler::UnitaryProduct.sample(n_right, rng))
        }
        ComparisonKind::PermutationProductLaw => {
            Box::new(move |rng| ScalarSampler::PermutationProduct.sample(n_right, rng))
        }
        ComparisonKind::VerblunskyProductLaw => {
            Box::new(move |rng| ScalarSampler::VerblunskyProduct.sample(n_right, rng))
        }
        ComparisonKind::CycleProductLaw => Box::new(move |rng| {
            let k = product::sample_cycle_count_sum(n_right, rng)?;
            let mut z = ONE;
            for _ in 0..k {
                z *= ONE - rng.uniform_phase();
            }
            Ok(z)
        }),
        ComparisonKind::FirstColumnLaw => {
            Box::new(move |rng| Ok(rng.kn_alpha((n_right - 1) as f64)?))
        }
    };
    Ok((left, right))
}

struct MomentTarget {
    suffix: &'static str,
    func: fn(Complex64) -> f64,
    target: f64,
}

/// Declared moment targets, computed from the descriptor's nominal size.
fn declared_targets(kind: ComparisonKind, n: usize) -> Vec<MomentTarget> {
    match kind {
        ComparisonKind::FirstColumnLaw => vec![
            MomentTarget { suffix: "re_mean", func: |z| z.re, target: 0.0 },
            MomentTarget { suffix: "im_mean", func: |z| z.im, target: 0.0 },
            MomentTarget { suffix: "abs_sqr_mean", func: |z| z.norm_sqr(), target: 1.0 / n as f64 },
        ],
        _ => vec![
            MomentTarget { suffix: "re_mean", func: |z| z.re, target: 1.0 },
            MomentTarget { suffix: "im_mean", func: |z| z.im, target: 0.0 },
            MomentTarget { suffix: "abs_sqr_mean", func: |z| z.norm_sqr(), target: (n + 1) as f64 },
        ],
    }
}

fn moment_row(name: String, xs: &[f64], target: f64) -> MomentRow {
    let (estimate, standard_error) = mean_and_se(xs);
    MomentRow {
        name,
        estimate,
        standard_error,
        target,
        verdict: (estimate - target).abs() <= 3.0 * standard_error,
    }
}

fn ks_rows(
    left: &[Complex64],
    right: &[Complex64],
    include_arg: bool,
) -> Result<Vec<FunctionalRow>, HarnessError> {
    let mut rows = Vec::new();
    let mut push = |name: &str, f: fn(&Complex64) -> f64| -> Result<(), HarnessError> {
        let a: Vec<f64> = left.iter().map(f).collect();
        let b: Vec<f64> = right.iter().map(f).collect();
        let (ks_statistic, p_value) = ks::ks_two_sample(&a, &b)?;
        rows.push(FunctionalRow {
            name: format!("ks_{name}"),
            ks_statistic,
            p_value,
        });
        Ok(())
    };
    push("re", |z| z.re)?;
    push("im", |z| z.im)?;
    push("abs", |z| z.norm())?;
    if include_arg {
        push("arg", |z| z.arg())?;
    }
    Ok(rows)
}

#[allow(clippy::too_many_arguments)]
fn assemble_comparison(
    test_id: String,
    left_fn: SideFn,
    right_fn: SideFn,
    targets: &[MomentTarget],
    include_arg: bool,
    n_left: usize,
    n_right: usize,
    count: usize,
    seed: u64,
    level: f64,
) -> Result<TestReport, HarnessError> {
    let started = Instant::now();
    let base = RngStream::new(seed);
    let left = par_samples(count, &base.substream(1), |rng| left_fn(rng))?;
    let right = par_samples(count, &base.substream(2), |rng| right_fn(rng))?;

    let functionals = ks_rows(&left, &right, include_arg)?;
    let mut moments = Vec::new();
    for (side_name, side) in [("left", &left), ("right", &right)] {
        for t in targets {
            let xs: Vec<f64> = side.iter().map(|&z| (t.func)(z)).collect();
            moments.push(moment_row(format!("{side_name}_{}", t.suffix), &xs, t.target));
        }
    }
    let verdict = overall_verdict(&functionals, &moments, level);
    Ok(TestReport {
        test_id,
        functionals,
        moments,
        verdict,
        metadata: ReportMetadata {
            seeds: vec![seed],
            sizes: vec![n_left, n_right],
            counts: vec![count, count],
            level: Some(level),
            wall_time_ms: started.elapsed().as_secs_f64() * 1e3,
            config: None,
        },
    })
}

/// Runs a named comparison: one KS row per functional (Re, Im, modulus,
/// plus argument for the entry-level law where both sides are raw disk
/// points) and 3-SE moment bands per side. Pass means every p-value clears
/// the level and every moment sits in its band.
pub fn compare_laws(cmp: &Comparison) -> Result<TestReport, HarnessError> {
    let n_right = cmp.right_n.unwrap_or(cmp.n);
    let (left_fn, right_fn) = side_fns(cmp.kind, cmp.n, n_right)?;
    let targets = declared_targets(cmp.kind, cmp.n);
    assemble_comparison(
        format!("compare-{}", cmp.kind.id()),
        left_fn,
        right_fn,
        &targets,
        cmp.kind == ComparisonKind::FirstColumnLaw,
        cmp.n,
        n_right,
        cmp.count,
        cmp.seed,
        cmp.level,
    )
}

/// KS-only comparison of two registered samplers at the same size. Used
/// for sampler cross-checks (two routes to one law) and for null
/// calibration (one sampler against itself on disjoint substreams).
pub fn compare_sampler_pair(
    left: ScalarSampler,
    right: ScalarSampler,
    n: usize,
    count: usize,
    seed: u64,
    level: f64,
) -> Result<TestReport, HarnessError> {
    if n == 0 {
        return Err(HarnessError::EmptyDimension);
    }
    assemble_comparison(
        format!("pair-{}-vs-{}", left.id(), right.id()),
        Box::new(move |rng| left.sample(n, rng)),
        Box::new(move |rng| right.sample(n, rng)),
        &[],
        false,
        n,
        n,
        count,
        seed,
        level,
    )
}

/// Empirical-vs-exact cycle-count report: total-variation distance of the
/// matrix-side histogram (cycles of sampled phased permutations) and of the
/// Bernoulli-sum histogram against the Stirling law, each required to be
/// below `CYCLE_TV_BAND`, plus the doubling moment E[2^count] = n + 1 with
/// a 3-SE band.
pub fn cycle_law_report(n: usize, count: usize, seed: u64) -> Result<TestReport, HarnessError> {
    let started = Instant::now();
    let exact = cycle_count_exact_law(n)?;
    let base = RngStream::new(seed);
    let perm_counts: Vec<usize> = par_map(count, &base.substream(1), |rng| {
        let p = sample_phased_permutation(n, rng)?;
        Ok(cycle_decompose(&p).count())
    })?;
    let bern_counts: Vec<usize> =
        par_map(count, &base.substream(2), |rng| Ok(product::sample_cycle_count_sum(n, rng)?))?;

    let tv = |counts: &[usize]| {
        let mut hist = vec![0usize; n + 1];
        for &c in counts {
            hist[c] += 1;
        }
        0.5 * exact
            .iter()
            .enumerate()
            .map(|(i, p)| (hist[i + 1] as f64 / counts.len() as f64 - p).abs())
            .sum::<f64>()
    };
    let tv_perm = tv(&perm_counts);
    let tv_bern = tv(&bern_counts);
    let doubling: Vec<f64> = bern_counts.iter().map(|&c| 2.0f64.powi(c as i32)).collect();

    let mut moments = vec![
        MomentRow {
            name: "tv_permutation_vs_exact".into(),
            estimate: tv_perm,
            standard_error: 0.0,
            target: 0.0,
            verdict: tv_perm < CYCLE_TV_BAND,
        },
        MomentRow {
            name: "tv_bernoulli_vs_exact".into(),
            estimate: tv_bern,
            standard_error: 0.0,
            target: 0.0,
            verdict: tv_bern < CYCLE_TV_BAND,
        },
    ];
    moments.push(moment_row("doubling_moment".into(), &doubling, (n + 1) as f64));
    let verdict = if moments.iter().all(|m| m.verdict) {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(TestReport {
        test_id: format!("cycles-n{n}"),
        functionals: Vec::new(),
        moments,
        verdict,
        metadata: ReportMetadata {
            seeds: vec![seed],
            sizes: vec![n],
            counts: vec![count, count],
            level: None,
            wall_time_ms: started.elapsed().as_secs_f64() * 1e3,
            config: None,
        },
    })
}

/// E[2^count] = n + 1 as a standalone 3-SE band; unlike the exact-law
/// report this has no size ceiling.
pub fn doubling_moment(n: usize, count: usize, seed: u64) -> Result<MomentRow, HarnessError> {
    let base = RngStream::new(seed);
    let counts: Vec<usize> =
        par_map(count, &base, |rng| Ok(product::sample_cycle_count_sum(n, rng)?))?;
    let doubled: Vec<f64> = counts.iter().map(|&c| 2.0f64.powi(c as i32)).collect();
    Ok(moment_row(format!("doubling_moment_n{n}"), &doubled, (n + 1) as f64))
}

#[derive(Debug, Clone, PartialEq)]
pub struct VarianceScalingConfig {
    pub n_small: usize,
    pub n_large: usize,
    pub paths: usize,
    pub seed: u64,
    pub level: f64,
}

/// Variance of Re/Im log Z at two sizes, differenced against
/// (1/2) log(n_large / n_small) within `VARIANCE_DIFF_BAND` (differencing
/// cancels the O(1) constant whose printed normalization is ambiguous),
/// plus a KS normality check of standardized Re log Z at the large size
/// over at most `NORMALITY_SAMPLE_CAP` paths.
pub fn variance_scaling_report(cfg: &VarianceScalingConfig) -> Result<TestReport, HarnessError> {
    if cfg.n_small == 0 {
        return Err(HarnessError::EmptyDimension);
    }
    if cfg.n_small > cfg.n_large {
        return Err(HarnessError::SizeOrder {
            small: cfg.n_small,
            large: cfg.n_large,
        });
    }
    if cfg.paths < 2 {
        return Err(HarnessError::TooFewPaths(cfg.paths));
    }
    let started = Instant::now();
    let base = RngStream::new(cfg.seed);
    let small = par_samples(cfg.paths, &base.substream(1), |rng| {
        Ok(product::log_z_full(cfg.n_small, rng)?)
    })?;
    let large = par_samples(cfg.paths, &base.substream(2), |rng| {
        Ok(product::log_z_full(cfg.n_large, rng)?)
    })?;

    let target = 0.5 * (cfg.n_large as f64 / cfg.n_small as f64).ln();
    let mut moments = Vec::new();
    for (name, f) in [("re", (|z: &Complex64| z.re) as fn(&Complex64) -> f64), ("im", |z| z.im)] {
        let s: Vec<f64> = small.iter().map(f).collect();
        let l: Vec<f64> = large.iter().map(f).collect();
        let (var_s, se_s) = variance_and_se(&s);
        let (var_l, se_l) = variance_and_se(&l);
        let diff = var_l - var_s;
        moments.push(MomentRow {
            name: format!("var_{name}_diff"),
            estimate: diff,
            standard_error: (se_s * se_s + se_l * se_l).sqrt(),
            target,
            verdict: (diff - target).abs() <= VARIANCE_DIFF_BAND,
        });
    }

    let capped = &large[..cfg.paths.min(NORMALITY_SAMPLE_CAP)];
    let re: Vec<f64> = capped.iter().map(|z| z.re).collect();
    let (mean, _) = mean_and_se(&re);
    let (var, _) = variance_and_se(&re);
    let sd = var.sqrt();
    let standardized: Vec<f64> = re.iter().map(|x| (x - mean) / sd).collect();
    let (ks_statistic, p_value) = ks::ks_one_sample(&standardized, ks::normal_cdf)?;
    let functionals = vec![FunctionalRow {
        name: "normality_re_standardized".into(),
        ks_statistic,
        p_value,
    }];

    let verdict = overall_verdict(&functionals, &moments, cfg.level);
    Ok(TestReport {
        test_id: format!("clt-n{}-vs-n{}", cfg.n_small, cfg.n_large),
        functionals,
        moments,
        verdict,
        metadata: ReportMetadata {
            seeds: vec![cfg.seed],
            sizes: vec![cfg.n_small, cfg.n_large],
            counts: vec![cfg.paths, cfg.paths],
            level: Some(cfg.level),
            wall_time_ms: started.elapsed().as_secs_f64() * 1e3,
            config: None,
        },
    })
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct BenchTimings {
    pub n: usize,
    pub matrix_samples: usize,
    pub product_samples: usize,
    pub matrix_ns_per_sample: f64,
    pub product_ns_per_sample: f64,
    pub speedup: f64,
}

/// Wall-time per sample for the matrix route (Ginibre + QR + LU) against
/// the O(n) product route, same law on both sides.
pub fn bench_timings(
    n: usize,
    matrix_samples: usize,
    product_samples: usize,
    seed: u64,
) -> Result<BenchTimings, HarnessError> {
    if n == 0 {
        return Err(HarnessError::EmptyDimension);
    }
    if matrix_samples == 0 || product_samples == 0 {
        return Err(HarnessError::EmptyBatch);
    }
    let base = RngStream::new(seed);

    let mut rng = base.substream(1);
    let started = Instant::now();
    for _ in 0..matrix_samples {
        let z = ScalarSampler::UnitaryGinibreDet.sample(n, &mut rng)?;
        std::hint::black_box(z);
    }
    let matrix_ns = started.elapsed().as_nanos() as f64 / matrix_samples as f64;

    let mut rng = base.substream(2);
    let started = Instant::now();
    for _ in 0..product_samples {
        let z = ScalarSampler::UnitaryProduct.sample(n, &mut rng)?;
        std::hint::black_box(z);
    }
    let product_ns = started.elapsed().as_nanos() as f64 / product_samples as f64;

    Ok(BenchTimings {
        n,
        matrix_samples,
        product_samples,
        matrix_ns_per_sample: matrix_ns,
        product_ns_per_sample: product_ns,
        speedup: matrix_ns / product_ns,
    })
}
