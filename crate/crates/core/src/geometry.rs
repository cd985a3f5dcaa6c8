//! Points, streamlines and datasets.
//!
//! A streamline stores its points contiguously (`len * dim` coordinates).
//! Single points are length-1 streamlines, so point clouds and polylines go
//! through the same distance, selection and embedding code.

use crate::error::{Error, Result};

/// A point is a borrowed coordinate slice of length `dim`.
pub type Point<'a> = &'a [f64];

#[derive(Debug, Clone, PartialEq)]
pub struct Streamline {
    dim: usize,
    coords: Vec<f64>,
}

impl Streamline {
    /// Builds a streamline from flat coordinates. `coords.len()` must be a
    /// non-zero multiple of `dim`.
    pub fn new(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        if !coords.len().is_multiple_of(dim) {
            return Err(Error::InvalidParameter(format!(
                "{} coordinates is not a multiple of dimension {}",
                coords.len(),
                dim
            )));
        }
        Ok(Self { dim, coords })
    }

    pub fn from_points<P: AsRef<[f64]>>(points: &[P]) -> Result<Self> {
        let dim = points.first().map(|p| p.as_ref().len()).unwrap_or(0);
        if dim == 0 {
            return Err(Error::InvalidParameter(
                "streamline needs at least one non-empty point".into(),
            ));
        }
        let mut coords = Vec::with_capacity(dim * points.len());
        for p in points {
            let p = p.as_ref();
            if p.len() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: p.len(),
                });
            }
            coords.extend_from_slice(p);
        }
        Ok(Self { dim, coords })
    }

    pub fn point(coords: &[f64]) -> Result<Self> {
        Self::from_points(&[coords])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = Point<'_>> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn is_finite(&self) -> bool {
        self.coords.iter().all(|c| c.is_finite())
    }
}

/// The sample of objects prototypes are drawn from.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    streamlines: Vec<Streamline>,
}

impl Dataset {
    /// Wraps streamlines without checking them; see [`Dataset::validate`].
    pub fn new(streamlines: Vec<Streamline>) -> Self {
        Self { streamlines }
    }

    /// Wraps and validates.
    pub fn try_new(streamlines: Vec<Streamline>) -> Result<Self> {
        let ds = Self::new(streamlines);
        ds.validate()?;
        Ok(ds)
    }

    pub fn from_points<P: AsRef<[f64]>>(points: &[P]) -> Result<Self> {
        let streamlines = points
            .iter()
            .map(|p| Streamline::point(p.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Self::try_new(streamlines)
    }

    /// Checks non-emptiness, finiteness and uniform dimension.
    pub fn validate(&self) -> Result<()> {
        let first = self.streamlines.first().ok_or(Error::EmptyDataset)?;
        let dim = first.dim();
        for (index, s) in self.streamlines.iter().enumerate() {
            if s.is_empty() {
                return Err(Error::EmptyStreamline { index });
            }
            if s.dim() != dim {
                return Err(Error::MixedDimension {
                    index,
                    expected: dim,
                    found: s.dim(),
                });
            }
            if !s.is_finite() {
                return Err(Error::NonFiniteCoordinate { index });
            }
        }
        Ok(())
    }

    /// Dimension of the first streamline; 0 for an empty dataset.
    pub fn dim(&self) -> usize {
        self.streamlines.first().map_or(0, Streamline::dim)
    }

    pub fn len(&self) -> usize {
        self.streamlines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.streamlines.is_empty()
    }

    pub fn streamlines(&self) -> &[Streamline] {
        &self.streamlines
    }

    pub fn get(&self, index: usize) -> Option<&Streamline> {
        self.streamlines.get(index)
    }

    pub fn into_streamlines(self) -> Vec<Streamline> {
        self.streamlines
    }
}

impl std::ops::Index<usize> for Dataset {
    type Output = Streamline;

    fn index(&self, index: usize) -> &Streamline {
        &self.streamlines[index]
    }
}
