//! Prototype selection policies: uniform random, farthest-first traversal
//! (FFT) and subset farthest first (SFF).

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::distance::DistanceKernel;
use crate::error::{Error, Result};
use crate::geometry::{Dataset, Streamline};
use crate::rng;

/// Default oversampling constant for SFF.
pub const DEFAULT_SFF_C: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Policy {
    Random,
    Fft,
    Sff,
}

impl Policy {
    pub fn name(&self) -> &'static str {
        match self {
            Policy::Random => "random",
            Policy::Fft => "fft",
            Policy::Sff => "sff",
        }
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Policy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "random" => Ok(Policy::Random),
            "fft" => Ok(Policy::Fft),
            "sff" => Ok(Policy::Sff),
            other => Err(Error::InvalidParameter(format!("unknown policy '{other}'"))),
        }
    }
}

/// The selected prototypes, in selection order.
#[derive(Debug, Clone, PartialEq)]
pub struct PrototypeSet {
    pub indices: Vec<usize>,
    pub streamlines: Vec<Streamline>,
    pub policy: Policy,
    pub seed: u64,
}

impl PrototypeSet {
    fn from_indices(dataset: &Dataset, indices: Vec<usize>, policy: Policy, seed: u64) -> Self {
        let streamlines = indices.iter().map(|&i| dataset[i].clone()).collect();
        Self {
            indices,
            streamlines,
            policy,
            seed,
        }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SffParams {
    pub p: usize,
    pub c: f64,
}

impl SffParams {
    pub fn new(p: usize, c: f64) -> Result<Self> {
        if p == 0 {
            return Err(Error::InvalidParameter("p must be at least 1".into()));
        }
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "c must be positive, got {c}"
            )));
        }
        Ok(Self { p, c })
    }

    /// Subset size `ceil(c * p * ln p)` clamped to `[p, n]`. For `p = 1` the
    /// logarithm vanishes and `max(p, ceil(c))` is used instead.
    pub fn subset_size(&self, n: usize) -> usize {
        let p = self.p as f64;
        let raw = if self.p == 1 {
            self.c.ceil()
        } else {
            (self.c * p * p.ln()).ceil()
        };
        // float-to-int casts saturate, so huge c stays well defined
        (raw as usize).max(self.p).min(n)
    }
}

/// How FFT picks its first prototype.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FftStart {
    /// Uniformly at random from the seed.
    Random,
    /// A fixed dataset index.
    Index(usize),
}

fn check_inputs(dataset: &Dataset, p: usize, kernel: Option<DistanceKernel>) -> Result<()> {
    dataset.validate()?;
    if let Some(kernel) = kernel {
        kernel.check_all(dataset.dim(), dataset.streamlines())?;
    }
    if p == 0 {
        return Err(Error::InvalidParameter("p must be at least 1".into()));
    }
    if p > dataset.len() {
        return Err(Error::TooManyPrototypes {
            p,
            n: dataset.len(),
        });
    }
    Ok(())
}

/// `p` distinct elements drawn uniformly without replacement.
pub fn select_random(dataset: &Dataset, p: usize, seed: u64) -> Result<PrototypeSet> {
    check_inputs(dataset, p, None)?;
    let mut rng = rng::seeded(seed);
    let indices = rng::sample_without_replacement(&mut rng, dataset.len(), p);
    Ok(PrototypeSet::from_indices(
        dataset,
        indices,
        Policy::Random,
        seed,
    ))
}

pub fn select_fft(
    dataset: &Dataset,
    p: usize,
    kernel: DistanceKernel,
    seed: u64,
) -> Result<PrototypeSet> {
    select_fft_with(dataset, p, kernel, seed, FftStart::Random)
}

/// Farthest-first traversal: after the first prototype, each new one is the
/// element whose distance to its nearest chosen prototype is largest. Ties go
/// to the smallest dataset index.
pub fn select_fft_with(
    dataset: &Dataset,
    p: usize,
    kernel: DistanceKernel,
    seed: u64,
    start: FftStart,
) -> Result<PrototypeSet> {
    check_inputs(dataset, p, Some(kernel))?;
    let n = dataset.len();
    let start = match start {
        FftStart::Random => rng::uniform_index(&mut rng::seeded(seed), n),
        FftStart::Index(i) if i < n => i,
        FftStart::Index(i) => {
            return Err(Error::InvalidParameter(format!(
                "start index {i} out of range for {n} objects"
            )))
        }
    };
    let candidates: Vec<usize> = (0..n).collect();
    let indices = farthest_first(dataset, &candidates, p, kernel, start);
    Ok(PrototypeSet::from_indices(
        dataset,
        indices,
        Policy::Fft,
        seed,
    ))
}

/// Subset farthest first: FFT over a uniform subsample of
/// [`SffParams::subset_size`] elements drawn without replacement.
pub fn select_sff(
    dataset: &Dataset,
    params: SffParams,
    kernel: DistanceKernel,
    seed: u64,
) -> Result<PrototypeSet> {
    check_inputs(dataset, params.p, Some(kernel))?;
    let mut rng = rng::seeded(seed);
    let m = params.subset_size(dataset.len());
    let subset = rng::sample_without_replacement(&mut rng, dataset.len(), m);
    let start = subset[rng::uniform_index(&mut rng, m)];
    let indices = farthest_first(dataset, &subset, params.p, kernel, start);
    Ok(PrototypeSet::from_indices(
        dataset,
        indices,
        Policy::Sff,
        seed,
    ))
}

/// Dispatches on `policy`. `c` is only used by SFF.
pub fn select(
    dataset: &Dataset,
    policy: Policy,
    p: usize,
    c: f64,
    kernel: DistanceKernel,
    seed: u64,
) -> Result<PrototypeSet> {
    match policy {
        Policy::Random => select_random(dataset, p, seed),
        Policy::Fft => select_fft(dataset, p, kernel, seed),
        Policy::Sff => select_sff(dataset, SffParams::new(p, c)?, kernel, seed),
    }
}

// Keeps each candidate's distance to its nearest chosen prototype and
// refreshes it with one kernel call per new prototype: O(p * |candidates|)
// kernel evaluations. `start` must be one of `candidates`.
fn farthest_first(
    dataset: &Dataset,
    candidates: &[usize],
    p: usize,
    kernel: DistanceKernel,
    start: usize,
) -> Vec<usize> {
    debug_assert!(p <= candidates.len());
    let mut nearest = vec![f64::INFINITY; candidates.len()];
    let mut chosen = Vec::with_capacity(p);
    let mut latest = start;
    if let Some(pos) = candidates.iter().position(|&i| i == start) {
        nearest[pos] = f64::NEG_INFINITY;
    }
    chosen.push(start);

    while chosen.len() < p {
        let proto = &dataset[latest];
        nearest
            .par_iter_mut()
            .zip(candidates.par_iter())
            .filter(|(d, _)| **d != f64::NEG_INFINITY)
            .for_each(|(d, &i)| {
                let dist = kernel.eval(&dataset[i], proto);
                if dist < *d {
                    *d = dist;
                }
            });

        let mut best: Option<(f64, usize, usize)> = None;
        for (pos, (&d, &i)) in nearest.iter().zip(candidates).enumerate() {
            if d == f64::NEG_INFINITY {
                continue;
            }
            let better = match best {
                None => true,
                Some((bd, bi, _)) => d > bd || (d == bd && i < bi),
            };
            if better {
                best = Some((d, i, pos));
            }
        }
        let (_, index, pos) = best.expect("p <= number of candidates");
        nearest[pos] = f64::NEG_INFINITY;
        chosen.push(index);
        latest = index;
    }
    chosen
}

/// Covering radius: the largest distance from any element of `dataset` to
/// its nearest prototype.
pub fn kcenter_cost(
    dataset: &Dataset,
    prototypes: &PrototypeSet,
    kernel: DistanceKernel,
) -> Result<f64> {
    covering_radius(dataset, &prototypes.streamlines, kernel)
}

/// As [`kcenter_cost`], for an arbitrary set of centers.
pub fn covering_radius(
    dataset: &Dataset,
    centers: &[Streamline],
    kernel: DistanceKernel,
) -> Result<f64> {
    dataset.validate()?;
    if centers.is_empty() {
        return Err(Error::InvalidParameter("no centers given".into()));
    }
    kernel.check_all(dataset.dim(), dataset.streamlines().iter().chain(centers))?;
    Ok(dataset
        .streamlines()
        .par_iter()
        .map(|x| {
            centers
                .iter()
                .map(|t| kernel.eval(x, t))
                .fold(f64::INFINITY, f64::min)
        })
        .reduce(|| 0.0, f64::max))
}
