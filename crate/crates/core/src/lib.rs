//! Degeneracy structure of two-mode driven-dissipative bosonic quadratic
//! systems.
//!
//! The traceless 4×4 dynamical matrix has characteristic polynomial
//! `λ⁴ + qλ² + rλ + s`; its degeneracies live on the swallowtail surface
//! `D(q, r, s) = 0`. The modules cover building the matrix ([`model`]),
//! roots and eigenvectors ([`spectral`]), classification of control points
//! ([`catastrophe`]), the map from physical parameters to `(q, r, s)`
//! ([`parammap`]) and eigenvalue braids along loops ([`braid`]).

// dense 4×4 kernels read best with explicit indices
#![allow(clippy::needless_range_loop)]

pub mod braid;
pub mod catastrophe;
pub mod error;
pub mod export;
pub mod linalg;
pub mod model;
pub mod parammap;
pub mod spectral;

pub use braid::{compute_braid, BraidResult, Generator, LoopSpec};
pub use catastrophe::{classify, Defectiveness, DegeneracyClass, Kind, SurfaceMesh};
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix4, C64};
pub use model::{ModelParams, RawParams};
pub use parammap::{forward_map, MapPoint, MapVariables};
pub use spectral::{Quartic, Spectrum};
