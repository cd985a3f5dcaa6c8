//! Dissimilarity embedding of variable-length geometric objects.
//!
//! Objects (polylines or single points) are mapped to the vector of their
//! distances from `p` selected prototypes. The crate provides the distance
//! kernels, three prototype selection policies (random, farthest-first
//! traversal and subset farthest first), the projection itself, and the
//! correlation-based quality measure used to compare policies.
//!
//! ```
//! use dissim::{datagen, embedding, evaluation, selection, DistanceKernel};
//!
//! let data = datagen::generate_gaussian(datagen::GaussianCloudSpec { n: 50, seed: 1 }).unwrap();
//! let protos = selection::select_fft(&data, 5, DistanceKernel::Euclidean, 7).unwrap();
//! let emb = embedding::project_all(&data, &protos, DistanceKernel::Euclidean).unwrap();
//! let r = evaluation::distance_correlation(
//!     &data,
//!     &emb,
//!     DistanceKernel::Euclidean,
//!     evaluation::PairSamplingSpec::AllPairs,
//! )
//! .unwrap();
//! assert!(r > 0.5);
//! ```

pub mod datagen;
pub mod distance;
pub mod embedding;
pub mod error;
pub mod evaluation;
pub mod geometry;
pub mod io;
pub mod rng;
pub mod selection;

pub use distance::DistanceKernel;
pub use error::{Error, Result};
pub use geometry::{Dataset, Point, Streamline};
pub use selection::{Policy, PrototypeSet};
