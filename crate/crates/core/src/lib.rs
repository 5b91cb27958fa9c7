//! Exact iteration of unimodal interval maps and what it says about ReLU
//! networks.
//!
//! Piecewise-linear maps are composed exactly over big rationals. On top of
//! that sit oscillation counts, periodic orbits and their itineraries, the
//! characteristic roots that bound crossing growth, certificates of
//! approximation hardness, exact ReLU synthesis, and weak VC-dimension
//! bounds. [`experiments`] drives the tables and figures.
//!
//! ```
//! use chaos_itineraries::{PiecewiseLinear, Rat};
//!
//! let tent = PiecewiseLinear::tent(&Rat::one()).unwrap();
//! assert_eq!(tent.iterate(5).unwrap().monotone_pieces(), 32);
//! ```

pub mod cycles;
pub mod error;
pub mod experiments;
pub mod hardness;
pub mod maps;
pub mod numfmt;
pub mod oscillation;
pub mod pl;
pub mod rat;
pub mod relunet;
pub mod spectra;
pub mod vcbounds;

pub use error::{Error, Result};
pub use maps::{MapFamily, MapKind};
pub use pl::{PiecewiseLinear, SampleSet, Spline};
pub use rat::Rat;
