//! Synthetic datasets: an isotropic 2D Gaussian point cloud and smooth 3D
//! random-walk polylines standing in for tractography streamlines.

use rand::Rng;

use crate::error::{Error, Result};
use crate::geometry::{Dataset, Streamline};
use crate::rng::{self, Normal};

/// `n` points drawn from the standard normal in 2D.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GaussianCloudSpec {
    pub n: usize,
    pub seed: u64,
}

pub fn generate_gaussian(spec: GaussianCloudSpec) -> Result<Dataset> {
    if spec.n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    let mut rng = rng::seeded(spec.seed);
    let mut normal = Normal::new();
    let streamlines = (0..spec.n)
        .map(|_| {
            let x = normal.sample(&mut rng);
            let y = normal.sample(&mut rng);
            Streamline::new(2, vec![x, y])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Dataset::new(streamlines))
}

/// Parameters of the polyline generator.
///
/// Each streamline starts uniformly inside the cube `[0, extent]^3` and walks
/// with fixed `step_length`. The next direction is the normalized blend
/// `momentum * previous + (1 - momentum) * g` with `g` a standard Gaussian
/// vector, so `momentum` close to 1 gives smooth, gently curving paths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolylineCloudSpec {
    pub n: usize,
    pub min_points: usize,
    pub max_points: usize,
    /// Side of the cube holding the start points, in mm.
    pub extent: f64,
    /// Distance between consecutive points, in mm.
    pub step_length: f64,
    /// In `[0, 1)`.
    pub momentum: f64,
    pub seed: u64,
}

impl Default for PolylineCloudSpec {
    fn default() -> Self {
        Self {
            n: 1000,
            min_points: 20,
            max_points: 100,
            extent: 100.0,
            step_length: 1.0,
            momentum: 0.9,
            seed: 0,
        }
    }
}

impl PolylineCloudSpec {
    pub fn validate(&self) -> Result<()> {
        let fail = |m: &str| Err(Error::InvalidParameter(m.into()));
        if self.n == 0 {
            return fail("n must be at least 1");
        }
        if self.min_points < 2 {
            return fail("min_points must be at least 2");
        }
        if self.max_points < self.min_points {
            return fail("max_points must be at least min_points");
        }
        if !(self.extent > 0.0 && self.extent.is_finite()) {
            return fail("extent must be positive");
        }
        if !(self.step_length > 0.0 && self.step_length.is_finite()) {
            return fail("step_length must be positive");
        }
        if !(0.0..1.0).contains(&self.momentum) {
            return fail("momentum must lie in [0, 1)");
        }
        Ok(())
    }
}

fn unit(v: [f64; 3]) -> Option<[f64; 3]> {
    let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    (norm > 0.0 && norm.is_finite()).then(|| [v[0] / norm, v[1] / norm, v[2] / norm])
}

fn random_direction(rng: &mut rng::SeededRng, normal: &mut Normal) -> [f64; 3] {
    loop {
        let g = [normal.sample(rng), normal.sample(rng), normal.sample(rng)];
        if let Some(u) = unit(g) {
            return u;
        }
    }
}

pub fn generate_polylines(spec: PolylineCloudSpec) -> Result<Dataset> {
    spec.validate()?;
    let mut rng = rng::seeded(spec.seed);
    let mut normal = Normal::new();
    let span = spec.max_points - spec.min_points + 1;
    let mut streamlines = Vec::with_capacity(spec.n);
    for _ in 0..spec.n {
        let len = spec.min_points + rng::uniform_index(&mut rng, span);
        let mut pos = [
            spec.extent * rng.gen::<f64>(),
            spec.extent * rng.gen::<f64>(),
            spec.extent * rng.gen::<f64>(),
        ];
        let mut dir = random_direction(&mut rng, &mut normal);
        let mut coords = Vec::with_capacity(3 * len);
        coords.extend_from_slice(&pos);
        for _ in 1..len {
            let g = [
                normal.sample(&mut rng),
                normal.sample(&mut rng),
                normal.sample(&mut rng),
            ];
            let blend = [
                spec.momentum * dir[0] + (1.0 - spec.momentum) * g[0],
                spec.momentum * dir[1] + (1.0 - spec.momentum) * g[1],
                spec.momentum * dir[2] + (1.0 - spec.momentum) * g[2],
            ];
            // a zero blend keeps the previous heading
            dir = unit(blend).unwrap_or(dir);
            for (p, d) in pos.iter_mut().zip(dir) {
                *p += spec.step_length * d;
            }
            coords.extend_from_slice(&pos);
        }
        streamlines.push(Streamline::new(3, coords)?);
    }
    Ok(Dataset::new(streamlines))
}
