//! The dissimilarity projection: an object maps to its vector of distances
//! from the prototypes. Distances between projected objects are plain
//! Euclidean distances between those vectors.

use ndarray::{Array2, ArrayView2};
use rayon::prelude::*;

use crate::distance::DistanceKernel;
use crate::error::{Error, Result};
use crate::evaluation::PairSamplingSpec;
use crate::geometry::{Dataset, Streamline};
use crate::selection::PrototypeSet;

/// Relative slack used when counting `d >= delta` violations. It is taken
/// relative to the largest of `d`, `delta` and the embedded coordinates of
/// the pair, since rounding in the coordinates is what makes `delta`
/// overshoot an exactly equal `d`.
pub const VIOLATION_RTOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddedVector(pub Vec<f64>);

impl EmbeddedVector {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// N x p matrix, row `i` the projection of object `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddedDataset {
    vectors: Array2<f64>,
    prototype_indices: Vec<usize>,
}

impl EmbeddedDataset {
    pub fn len(&self) -> usize {
        self.vectors.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.nrows() == 0
    }

    /// Number of prototypes.
    pub fn dim(&self) -> usize {
        self.vectors.ncols()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let p = self.dim();
        &self.vectors.as_slice().expect("standard layout")[i * p..(i + 1) * p]
    }

    pub fn vectors(&self) -> ArrayView2<'_, f64> {
        self.vectors.view()
    }

    pub fn prototype_indices(&self) -> &[usize] {
        &self.prototype_indices
    }

    /// Copy with every coordinate divided by `sqrt(p)`, so that `delta`
    /// between rows becomes the root-mean-square coordinate difference.
    /// Useful when comparing embeddings of different sizes; the unscaled
    /// form is the default everywhere else.
    pub fn normalized(&self) -> Self {
        let scale = (self.dim() as f64).sqrt();
        Self {
            vectors: self.vectors.mapv(|v| v / scale),
            prototype_indices: self.prototype_indices.clone(),
        }
    }
}

fn check_prototypes(dim: usize, prototypes: &PrototypeSet, kernel: DistanceKernel) -> Result<()> {
    if prototypes.is_empty() {
        return Err(Error::InvalidParameter("empty prototype set".into()));
    }
    kernel.check_all(dim, &prototypes.streamlines)
}

fn project_unchecked(
    x: &Streamline,
    prototypes: &[Streamline],
    kernel: DistanceKernel,
) -> Vec<f64> {
    prototypes.iter().map(|t| kernel.eval(x, t)).collect()
}

/// `[kernel(x, t_1), ..., kernel(x, t_p)]`.
pub fn project(
    x: &Streamline,
    prototypes: &PrototypeSet,
    kernel: DistanceKernel,
) -> Result<EmbeddedVector> {
    check_prototypes(x.dim(), prototypes, kernel)?;
    kernel.check(x)?;
    Ok(EmbeddedVector(project_unchecked(
        x,
        &prototypes.streamlines,
        kernel,
    )))
}

/// Projects every object of `dataset`; rows are computed in parallel.
pub fn project_all(
    dataset: &Dataset,
    prototypes: &PrototypeSet,
    kernel: DistanceKernel,
) -> Result<EmbeddedDataset> {
    dataset.validate()?;
    let dim = dataset.dim();
    check_prototypes(dim, prototypes, kernel)?;
    kernel.check_all(dim, dataset.streamlines())?;
    let flat: Vec<f64> = dataset
        .streamlines()
        .par_iter()
        .flat_map_iter(|x| project_unchecked(x, &prototypes.streamlines, kernel))
        .collect();
    let vectors = Array2::from_shape_vec((dataset.len(), prototypes.len()), flat)
        .expect("one row per object");
    Ok(EmbeddedDataset {
        vectors,
        prototype_indices: prototypes.indices.clone(),
    })
}

/// Euclidean distance between embedded vectors. No `1/sqrt(p)` scaling.
pub fn delta(u: &[f64], v: &[f64]) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::LengthMismatch {
            left: u.len(),
            right: v.len(),
        });
    }
    Ok(u.iter()
        .zip(v)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt())
}

/// `delta(u, v) / sqrt(p)`.
pub fn delta_normalized(u: &[f64], v: &[f64]) -> Result<f64> {
    let d = delta(u, v)?;
    Ok(if u.is_empty() {
        d
    } else {
        d / (u.len() as f64).sqrt()
    })
}

/// Result of [`empirical_distortion`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Distortion {
    /// Smallest `c` with `delta >= d / c` on every sampled pair with `d > 0`,
    /// i.e. the largest `d / delta`. `None` when some pair has `delta = 0`
    /// but `d > 0`, or when no pair has `d > 0`.
    pub c: Option<f64>,
    /// Pairs where `d >= delta` fails (beyond [`VIOLATION_RTOL`]).
    pub violations: usize,
    /// Number of pairs examined.
    pub pairs: usize,
}

/// Measures how far the embedding is from the two-sided bound
/// `d >= delta >= d / c` over sampled pairs. Reported, never asserted: with
/// unscaled `delta` over several prototypes the left side can fail even for
/// a metric kernel.
pub fn empirical_distortion(
    dataset: &Dataset,
    embedded: &EmbeddedDataset,
    kernel: DistanceKernel,
    pair_sample: PairSamplingSpec,
) -> Result<Distortion> {
    if embedded.len() != dataset.len() {
        return Err(Error::LengthMismatch {
            left: dataset.len(),
            right: embedded.len(),
        });
    }
    dataset.validate()?;
    kernel.check_all(dataset.dim(), dataset.streamlines())?;
    let pairs = pair_sample.pairs(dataset.len())?;
    let (max_ratio, undefined, violations) = pairs
        .par_iter()
        .map(|&(i, j)| {
            let d = kernel.eval(&dataset[i], &dataset[j]);
            let e = delta(embedded.row(i), embedded.row(j)).expect("rows share a length");
            let scale = embedded
                .row(i)
                .iter()
                .chain(embedded.row(j))
                .fold(d.max(e), |m, v| m.max(v.abs()));
            let violation = e > d + VIOLATION_RTOL * scale;
            match (d > 0.0, e > 0.0) {
                (true, true) => (d / e, false, violation as usize),
                (true, false) => (f64::NEG_INFINITY, true, violation as usize),
                _ => (f64::NEG_INFINITY, false, violation as usize),
            }
        })
        .reduce(
            || (f64::NEG_INFINITY, false, 0),
            |a, b| (a.0.max(b.0), a.1 || b.1, a.2 + b.2),
        );
    let c = (!undefined && max_ratio > f64::NEG_INFINITY).then_some(max_ratio);
    Ok(Distortion {
        c,
        violations,
        pairs: pairs.len(),
    })
}
