//! Distance kernels between streamlines.
//!
//! `mam` is the symmetric minimum average distance: the mean of the two
//! directed averages of closest-point distances. Nearest points are found by
//! exhaustive search.

use std::fmt;
use std::str::FromStr;

use ndarray::Array2;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{Point, Streamline};

#[inline]
fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn check_dims(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch { left: a, right: b });
    }
    Ok(())
}

/// Euclidean distance between two points.
pub fn euclidean(a: Point<'_>, b: Point<'_>) -> Result<f64> {
    check_dims(a.len(), b.len())?;
    Ok(squared_distance(a, b).sqrt())
}

/// Mean over the points of `a` of the distance to the nearest point of `b`.
/// Not symmetric.
pub fn mam_directed(a: &Streamline, b: &Streamline) -> Result<f64> {
    check_dims(a.dim(), b.dim())?;
    Ok(directed_unchecked(a, b))
}

/// Symmetric minimum average distance, `(δ(a,b) + δ(b,a)) / 2`.
pub fn mam(a: &Streamline, b: &Streamline) -> Result<f64> {
    check_dims(a.dim(), b.dim())?;
    Ok(mam_unchecked(a, b))
}

fn directed_unchecked(a: &Streamline, b: &Streamline) -> f64 {
    let total: f64 = a
        .points()
        .map(|x| {
            b.points()
                .map(|y| squared_distance(x, y))
                .fold(f64::INFINITY, f64::min)
                .sqrt()
        })
        .sum();
    total / a.len() as f64
}

// One pass over all point pairs fills both nearest-distance tables. The
// per-point minima are taken over the same values in the same order as
// `directed_unchecked`, so the result matches the two directed calls exactly.
fn mam_unchecked(a: &Streamline, b: &Streamline) -> f64 {
    let mut b_min = vec![f64::INFINITY; b.len()];
    let mut a_total = 0.0;
    for x in a.points() {
        let mut a_min = f64::INFINITY;
        for (y, bm) in b.points().zip(b_min.iter_mut()) {
            let d = squared_distance(x, y);
            a_min = a_min.min(d);
            // squared_distance(y, x) == squared_distance(x, y) bit for bit
            *bm = bm.min(d);
        }
        a_total += a_min.sqrt();
    }
    let b_total: f64 = b_min.iter().map(|d| d.sqrt()).sum();
    let ab = a_total / a.len() as f64;
    let ba = b_total / b.len() as f64;
    0.5 * (ab + ba)
}

/// A named distance function between streamlines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DistanceKernel {
    /// Point distance; only defined on length-1 streamlines.
    Euclidean,
    Mam,
}

impl DistanceKernel {
    /// Checks that `s` is in the kernel's domain.
    pub fn check(&self, s: &Streamline) -> Result<()> {
        match self {
            DistanceKernel::Euclidean if s.len() != 1 => Err(Error::NotAPoint { len: s.len() }),
            _ => Ok(()),
        }
    }

    pub fn distance(&self, a: &Streamline, b: &Streamline) -> Result<f64> {
        check_dims(a.dim(), b.dim())?;
        self.check(a)?;
        self.check(b)?;
        Ok(self.eval(a, b))
    }

    /// Evaluates without shape checks. Callers must have validated dimension
    /// and kernel domain.
    #[inline]
    pub(crate) fn eval(&self, a: &Streamline, b: &Streamline) -> f64 {
        match self {
            DistanceKernel::Euclidean => squared_distance(a.coords(), b.coords()).sqrt(),
            DistanceKernel::Mam => mam_unchecked(a, b),
        }
    }

    /// Checks every streamline for kernel domain and a common dimension `dim`.
    pub(crate) fn check_all<'a, I>(&self, dim: usize, items: I) -> Result<()>
    where
        I: IntoIterator<Item = &'a Streamline>,
    {
        for s in items {
            check_dims(dim, s.dim())?;
            self.check(s)?;
        }
        Ok(())
    }

    pub fn name(&self) -> &'static str {
        match self {
            DistanceKernel::Euclidean => "euclidean",
            DistanceKernel::Mam => "mam",
        }
    }
}

impl fmt::Display for DistanceKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DistanceKernel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "euclidean" => Ok(DistanceKernel::Euclidean),
            "mam" => Ok(DistanceKernel::Mam),
            other => Err(Error::InvalidParameter(format!("unknown kernel '{other}'"))),
        }
    }
}

/// Entry `(i, j)` is `kernel(rows[i], cols[j])`. Rows are computed in
/// parallel; each entry is a single fixed expression so the result does not
/// depend on the worker count.
pub fn distance_matrix(
    rows: &[Streamline],
    cols: &[Streamline],
    kernel: DistanceKernel,
) -> Result<Array2<f64>> {
    if let Some(dim) = rows.first().or(cols.first()).map(Streamline::dim) {
        kernel.check_all(dim, rows.iter().chain(cols))?;
    }
    let flat: Vec<f64> = rows
        .par_iter()
        .flat_map_iter(|r| cols.iter().map(move |c| kernel.eval(r, c)))
        .collect();
    Ok(Array2::from_shape_vec((rows.len(), cols.len()), flat).expect("shape matches"))
}
