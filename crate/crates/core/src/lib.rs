//! Radiative lifetime and emission of Frenkel excitons in a planar square
//! optical lattice.
//!
//! - [`dispersion`]: exciton band over the Brillouin zone.
//! - [`damping`]: closed-form collective damping rate, regime classification
//!   and the light-cone crossing.
//! - [`emission`]: retarded far field, population decay and intensity.
//! - [`oracle`]: golden-rule mode sum with Lorentzian broadening, used to
//!   cross-check [`damping`].
//! - [`sweep`], [`table`], [`config`]: figure sweeps, CSV output and
//!   configuration files for the command-line tool.
//!
//! All energies are in eV, lengths in Å and rates are reported as ħΓ in eV;
//! see [`units`].

pub mod config;
pub mod damping;
pub mod dispersion;
pub mod emission;
pub mod error;
pub mod grid;
pub mod oracle;
pub mod roots;
pub mod sweep;
pub mod table;
pub mod units;

pub use error::{Error, Result};
pub use units::{DipoleOrientation, LatticeConfig, PhysicalConstants};
