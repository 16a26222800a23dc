//! Desk-scale simulator for photon tunneling-time experiments.
//!
//! A dielectric quarter-wave mirror is a tunnel barrier for light: inside
//! its stop band the field decays evanescently, and the time a photon needs
//! to traverse it is the subject of several competing definitions. This
//! crate implements the barrier optics and all three classic tunneling
//! times, the two-photon coincidence interferometry that measures the
//! operational one, the two-prism frustrated-total-internal-reflection
//! geometry in which two of the times appear simultaneously, and a
//! time-domain propagator that verifies the front never outruns c even
//! when the peak does.
//!
//! Modules:
//! - [`optics`]: characteristic-matrix solver for multilayer stacks
//!   (complex r/t at any wavelength, angle, polarization), quarter-wave
//!   builders, spectra, band edges, Brewster angle.
//! - [`qm`]: closed-form rectangular-barrier tunneling with Wigner,
//!   Buettiker-Landauer and Larmor times; the Hartman-effect testbed.
//! - [`delay`]: the same three times for photonic stacks, from phase
//!   derivatives and the Bloch dispersion of the periodic structure.
//! - [`hom`]: Hong-Ou-Mandel coincidence dips for filtered photon pairs;
//!   the dip-center shift is the measured tunneling time.
//! - [`ftir`]: frustrated total internal reflection between two prisms;
//!   lateral beam displacement (saturates) vs angular deflection (linear).
//! - [`timedomain`]: 1D staggered-grid wave propagation, peak delays,
//!   front-causality checks, and spectral cross-validation.
//! - [`fit`]: Gaussian dip least squares.
//! - [`stackfile`], [`scenario`], [`csvio`], [`cli`]: file formats and the
//!   command-line surface.
//!
//! Units everywhere: nanometers, femtoseconds, rad/fs; the speed of light
//! is [`units::C_NM_PER_FS`].
//!
//! The `examples/` directory has one runnable example per capability; start
//! with `cargo run --example tunneling_delay`.

pub mod cli;
pub mod csvio;
pub mod delay;
pub mod error;
pub mod fit;
pub mod ftir;
pub mod hom;
pub mod numdiff;
pub mod optics;
pub mod qm;
pub mod scenario;
pub mod stackfile;
pub mod timedomain;
pub mod units;

pub use error::{Error, Result};
pub use optics::{
    band_edges, brewster_angle, BandEdges, ComplexResponse, Incidence, Layer, LayerStack, Medium,
    Polarization, SpectrumPoint,
};
pub use units::C_NM_PER_FS;
