//! Approximation quality of an embedding, measured as the Pearson
//! correlation between original distances and embedded distances over pairs
//! of objects, plus the repetition-based experiment runner.

use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::distance::DistanceKernel;
use crate::embedding::{delta, project_all, EmbeddedDataset};
use crate::error::{Error, Result};
use crate::geometry::Dataset;
use crate::rng;
use crate::selection::{self, Policy, DEFAULT_SFF_C};

/// Largest pair sample used by [`PairSamplingSpec::default_for`].
pub const DEFAULT_MAX_PAIRS: usize = 100_000;

/// Which unordered pairs `(i, j)`, `i < j`, enter a correlation estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairSamplingSpec {
    AllPairs,
    /// `count` distinct pairs drawn uniformly without replacement. Counts
    /// above the number of available pairs are clamped to it.
    RandomPairs {
        count: usize,
        seed: u64,
    },
}

impl PairSamplingSpec {
    /// All pairs when there are at most [`DEFAULT_MAX_PAIRS`], otherwise a
    /// random sample of that size.
    pub fn default_for(n: usize, seed: u64) -> Self {
        if pair_count(n) <= DEFAULT_MAX_PAIRS {
            PairSamplingSpec::AllPairs
        } else {
            PairSamplingSpec::RandomPairs {
                count: DEFAULT_MAX_PAIRS,
                seed,
            }
        }
    }

    /// Pairs in lexicographic order.
    pub fn pairs(&self, n: usize) -> Result<Vec<(usize, usize)>> {
        let total = pair_count(n);
        match *self {
            PairSamplingSpec::AllPairs => Ok((0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .collect()),
            PairSamplingSpec::RandomPairs { count, seed } => {
                if count < 2 {
                    return Err(Error::InvalidParameter(format!(
                        "random pair count must be at least 2, got {count}"
                    )));
                }
                let mut rng = rng::seeded(seed);
                let mut linear = rng::sample_without_replacement(&mut rng, total, count.min(total));
                linear.sort_unstable();
                Ok(decode_pairs(n, &linear))
            }
        }
    }
}

fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

// Maps sorted linear indices of the upper triangle (row-major) to (i, j).
fn decode_pairs(n: usize, sorted_linear: &[usize]) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(sorted_linear.len());
    let mut row = 0;
    let mut row_start = 0;
    for &k in sorted_linear {
        while k >= row_start + (n - 1 - row) {
            row_start += n - 1 - row;
            row += 1;
        }
        out.push((row, row + 1 + (k - row_start)));
    }
    out
}

/// Sample Pearson correlation coefficient.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::LengthMismatch {
            left: xs.len(),
            right: ys.len(),
        });
    }
    let n = xs.len();
    if n < 2 {
        return Err(Error::TooFewSamples(n));
    }
    let mx = xs.iter().sum::<f64>() / n as f64;
    let my = ys.iter().sum::<f64>() / n as f64;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        let dx = x - mx;
        let dy = y - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::ZeroVariance);
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

/// Mean and (n - 1)-denominator standard deviation; the deviation of a
/// single value is 0.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, var.sqrt())
}

/// Sampled pairs together with their original-space distances. The
/// original distances do not depend on the prototypes, so one instance
/// serves every repetition of an experiment.
#[derive(Debug, Clone)]
pub struct PairDistances {
    pairs: Vec<(usize, usize)>,
    original: Vec<f64>,
}

impl PairDistances {
    pub fn compute(
        dataset: &Dataset,
        kernel: DistanceKernel,
        spec: PairSamplingSpec,
    ) -> Result<Self> {
        dataset.validate()?;
        kernel.check_all(dataset.dim(), dataset.streamlines())?;
        let pairs = spec.pairs(dataset.len())?;
        let original = pairs
            .par_iter()
            .map(|&(i, j)| kernel.eval(&dataset[i], &dataset[j]))
            .collect();
        Ok(Self { pairs, original })
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn original(&self) -> &[f64] {
        &self.original
    }

    /// Embedded distances for the same pairs.
    pub fn embedded(&self, embedded: &EmbeddedDataset) -> Result<Vec<f64>> {
        let n = embedded.len();
        if let Some(&(i, j)) = self.pairs.iter().find(|&&(i, j)| i >= n || j >= n) {
            return Err(Error::InvalidParameter(format!(
                "pair ({i}, {j}) out of range for {n} embedded rows"
            )));
        }
        self.pairs
            .par_iter()
            .map(|&(i, j)| delta(embedded.row(i), embedded.row(j)))
            .collect()
    }

    pub fn correlation(&self, embedded: &EmbeddedDataset) -> Result<f64> {
        pearson(&self.original, &self.embedded(embedded)?)
    }
}

/// Correlation between original and embedded distances over the sampled
/// pairs of `dataset`.
pub fn distance_correlation(
    dataset: &Dataset,
    embedded: &EmbeddedDataset,
    kernel: DistanceKernel,
    pairs: PairSamplingSpec,
) -> Result<f64> {
    if embedded.len() != dataset.len() {
        return Err(Error::LengthMismatch {
            left: dataset.len(),
            right: embedded.len(),
        });
    }
    PairDistances::compute(dataset, kernel, pairs)?.correlation(embedded)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub policy: Policy,
    pub p_values: Vec<usize>,
    pub repetitions: usize,
    pub kernel: DistanceKernel,
    pub pairs: PairSamplingSpec,
    pub base_seed: u64,
    /// SFF oversampling constant.
    pub c: f64,
}

impl ExperimentConfig {
    pub fn new(policy: Policy, p_values: Vec<usize>, kernel: DistanceKernel) -> Self {
        Self {
            policy,
            p_values,
            repetitions: 50,
            kernel,
            pairs: PairSamplingSpec::AllPairs,
            base_seed: 0,
            c: DEFAULT_SFF_C,
        }
    }

    /// Seed of repetition `rep`.
    pub fn seed_for(&self, rep: usize) -> u64 {
        self.base_seed.wrapping_add(rep as u64)
    }
}

/// Correlation statistics for one (policy, p) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentReport {
    pub policy: Policy,
    pub p: usize,
    pub repetitions: usize,
    pub seeds: Vec<u64>,
    pub correlations: Vec<f64>,
    pub mean: f64,
    pub std: f64,
    /// Prototype selection time per repetition.
    pub wall_times: Vec<Duration>,
}

/// For every `p`, repeats select / project / correlate with seed
/// `base_seed + repetition` and aggregates the correlations.
pub fn run_experiment(
    dataset: &Dataset,
    config: &ExperimentConfig,
) -> Result<Vec<ExperimentReport>> {
    if config.repetitions == 0 {
        return Err(Error::InvalidParameter(
            "repetitions must be at least 1".into(),
        ));
    }
    dataset.validate()?;
    for &p in &config.p_values {
        if p == 0 || p > dataset.len() {
            return Err(Error::TooManyPrototypes {
                p,
                n: dataset.len(),
            });
        }
    }
    let pair_distances = PairDistances::compute(dataset, config.kernel, config.pairs)?;

    let mut reports = Vec::with_capacity(config.p_values.len());
    for &p in &config.p_values {
        let mut seeds = Vec::with_capacity(config.repetitions);
        let mut correlations = Vec::with_capacity(config.repetitions);
        let mut wall_times = Vec::with_capacity(config.repetitions);
        for rep in 0..config.repetitions {
            let seed = config.seed_for(rep);
            let start = Instant::now();
            let prototypes =
                selection::select(dataset, config.policy, p, config.c, config.kernel, seed)?;
            wall_times.push(start.elapsed());
            let embedded = project_all(dataset, &prototypes, config.kernel)?;
            correlations.push(pair_distances.correlation(&embedded)?);
            seeds.push(seed);
        }
        let (mean, std) = mean_std(&correlations);
        reports.push(ExperimentReport {
            policy: config.policy,
            p,
            repetitions: config.repetitions,
            seeds,
            correlations,
            mean,
            std,
            wall_times,
        });
    }
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn line_1d(xs: &[f64]) -> Dataset {
        let pts: Vec<[f64; 1]> = xs.iter().map(|&x| [x]).collect();
        Dataset::from_points(&pts).unwrap()
    }

    #[test]
    fn pearson_examples() {
        let xs = [1.0, 2.0, 3.0, 4.0, 7.5];
        let lin: Vec<f64> = xs.iter().map(|x| 2.0 * x + 1.0).collect();
        let neg: Vec<f64> = xs.iter().map(|x| -x).collect();
        assert!((pearson(&xs, &lin).unwrap() - 1.0).abs() < 1e-15);
        assert!((pearson(&xs, &neg).unwrap() + 1.0).abs() < 1e-15);
        // means 2 and 2, cov sum = 1, variance sums = 2 and 2
        assert!((pearson(&[1.0, 2.0, 3.0], &[1.0, 3.0, 2.0]).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn pearson_errors() {
        assert!(matches!(
            pearson(&[1.0, 1.0], &[1.0, 2.0]),
            Err(Error::ZeroVariance)
        ));
        assert!(matches!(
            pearson(&[1.0], &[1.0]),
            Err(Error::TooFewSamples(1))
        ));
        assert!(matches!(
            pearson(&[1.0, 2.0], &[1.0]),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn mean_std_conventions() {
        assert_eq!(mean_std(&[0.7]), (0.7, 0.0));
        let (m, s) = mean_std(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        assert!((s - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn pair_decoding_matches_enumeration() {
        for n in 2..12 {
            let all = PairSamplingSpec::AllPairs.pairs(n).unwrap();
            let linear: Vec<usize> = (0..all.len()).collect();
            assert_eq!(decode_pairs(n, &linear), all);
        }
    }

    #[test]
    fn random_pairs_are_distinct_and_valid() {
        let spec = PairSamplingSpec::RandomPairs {
            count: 500,
            seed: 4,
        };
        let pairs = spec.pairs(100).unwrap();
        assert_eq!(pairs.len(), 500);
        assert!(pairs.iter().all(|&(i, j)| i < j && j < 100));
        let mut dedup = pairs.clone();
        dedup.dedup();
        assert_eq!(dedup.len(), 500);
        assert_eq!(spec.pairs(100).unwrap(), pairs);
        assert!(PairSamplingSpec::RandomPairs { count: 1, seed: 0 }
            .pairs(10)
            .is_err());
    }

    #[test]
    fn default_pair_spec() {
        assert_eq!(
            PairSamplingSpec::default_for(1000, 0),
            PairSamplingSpec::RandomPairs {
                count: DEFAULT_MAX_PAIRS,
                seed: 0
            }
        );
        assert_eq!(
            PairSamplingSpec::default_for(50, 0),
            PairSamplingSpec::AllPairs
        );
    }

    #[test]
    fn collinear_embedding_correlates_perfectly() {
        let ds = line_1d(&[0.0, 1.5, 3.0, 4.25, 9.0]);
        let protos = selection::select_fft_with(
            &Dataset::from_points(&[[10.0], [0.0]]).unwrap(),
            1,
            DistanceKernel::Euclidean,
            0,
            selection::FftStart::Index(0),
        )
        .unwrap();
        let emb = project_all(&ds, &protos, DistanceKernel::Euclidean).unwrap();
        let r = distance_correlation(
            &ds,
            &emb,
            DistanceKernel::Euclidean,
            PairSamplingSpec::AllPairs,
        )
        .unwrap();
        assert!((r - 1.0).abs() < 1e-12);
    }

    #[test]
    fn identical_copies_have_zero_variance() {
        let ds = line_1d(&[2.0, 2.0, 2.0, 2.0]);
        let protos = selection::select_random(&ds, 2, 0).unwrap();
        let emb = project_all(&ds, &protos, DistanceKernel::Euclidean).unwrap();
        assert!(matches!(
            distance_correlation(
                &ds,
                &emb,
                DistanceKernel::Euclidean,
                PairSamplingSpec::AllPairs
            ),
            Err(Error::ZeroVariance)
        ));
    }

    #[test]
    fn exhaustive_random_pairs_equal_all_pairs() {
        let pts: Vec<[f64; 2]> = (0..12)
            .map(|i| [f64::from(i).sin() * 3.0, f64::from(i * i % 7)])
            .collect();
        let ds = Dataset::from_points(&pts).unwrap();
        let protos = selection::select_random(&ds, 3, 2).unwrap();
        let emb = project_all(&ds, &protos, DistanceKernel::Euclidean).unwrap();
        let k = DistanceKernel::Euclidean;
        let all = distance_correlation(&ds, &emb, k, PairSamplingSpec::AllPairs).unwrap();
        let rnd = distance_correlation(
            &ds,
            &emb,
            k,
            PairSamplingSpec::RandomPairs { count: 66, seed: 9 },
        )
        .unwrap();
        assert_eq!(all, rnd);
    }

    #[test]
    fn experiment_single_repetition_and_determinism() {
        let pts: Vec<[f64; 2]> = (0..20)
            .map(|i| [f64::from(i).cos() * 5.0, f64::from(i).sqrt()])
            .collect();
        let ds = Dataset::from_points(&pts).unwrap();
        let mut cfg = ExperimentConfig::new(Policy::Sff, vec![2, 20], DistanceKernel::Euclidean);
        cfg.repetitions = 1;
        let reports = run_experiment(&ds, &cfg).unwrap();
        assert_eq!(reports.len(), 2);
        assert_eq!(reports[0].std, 0.0);
        assert_eq!(reports[0].correlations.len(), 1);
        assert_eq!(reports[1].p, 20);

        cfg.repetitions = 4;
        cfg.base_seed = 17;
        let a = run_experiment(&ds, &cfg).unwrap();
        let b = run_experiment(&ds, &cfg).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.correlations, y.correlations);
            assert_eq!(x.seeds, vec![17, 18, 19, 20]);
            let (m, s) = mean_std(&x.correlations);
            assert_eq!((x.mean, x.std), (m, s));
        }

        cfg.p_values = vec![21];
        assert!(matches!(
            run_experiment(&ds, &cfg),
            Err(Error::TooManyPrototypes { .. })
        ));
    }

    proptest! {
        #[test]
        fn pearson_affine_invariant_and_symmetric(
            xs in prop::collection::vec(-100.0f64..100.0, 3..40),
            scale in 0.01f64..100.0,
            shift in -100.0f64..100.0,
            seed in any::<u64>(),
        ) {
            let mut r = rng::seeded(seed);
            let mut normal = rng::Normal::new();
            let ys: Vec<f64> = xs.iter().map(|x| x + 10.0 * normal.sample(&mut r)).collect();
            let base = match pearson(&xs, &ys) {
                Ok(v) => v,
                Err(_) => return Ok(()),
            };
            let moved: Vec<f64> = xs.iter().map(|x| scale * x + shift).collect();
            prop_assert!((pearson(&moved, &ys).unwrap() - base).abs() < 1e-12);
            prop_assert!((pearson(&ys, &xs).unwrap() - base).abs() < 1e-12);
            prop_assert!(base.abs() <= 1.0 + 1e-12);
        }
    }
}
