//! Hong-Ou-Mandel coincidence-dip interferometry.
//!
//! A frequency-anticorrelated photon pair (detunings +Omega/-Omega about the
//! degenerate frequency omega0) meets at a 50/50 beam splitter after one
//! photon crossed the barrier arm and the other the reference arm. Adding
//! the two indistinguishable coincidence amplitudes and integrating over the
//! pair spectrum gives the normalized coincidence rate at scan delay tau
//! (applied to the reference arm as exp(i omega tau)):
//!
//! ```text
//!   R(tau) = 1 - C(tau) / P
//!   P      = Int dO |f(O)|^2 |t1(w0+O)|^2 |t2(w0-O)|^2
//!   C(tau) = Int dO |f(O)|^2 Re[ t1(w0+O) t2*(w0+O) t1*(w0-O) t2(w0-O)
//!                                e^(-2 i O tau) ]
//! ```
//!
//! By the Cauchy-Schwarz inequality (the grid is symmetric in Omega and
//! |f|^2 is even) C <= P, so rates are non-negative by construction; the
//! baseline far from the dip is exactly 1.
//!
//! Arm filters are insertion-referenced: a stack of footprint D contributes
//! `t(omega) exp(-i k_z D)` with `k_z` the ambient-side normal wavevector
//! component, i.e. the filter is compared against vacuum occupying the same
//! geometric slot. This mirrors the differential design of the measurement
//! (coated vs uncoated halves of one substrate share every other path
//! contribution), and it is what makes a tunnel barrier's dip shift come
//! out *negative*: its transit time is smaller than the vacuum time of its
//! own footprint.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fit::{fit_dip, DipFit};
use crate::optics::{LayerStack, Polarization};
use crate::units::{omega_from_wavelength, C_NM_PER_FS};

/// Spectral shape of the biphoton amplitude.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[non_exhaustive]
pub enum SpectralShape {
    Gaussian,
}

/// Frequency-anticorrelated two-photon spectrum: each photon sits at
/// `center_wavelength`, detuned by +Omega and -Omega with a Gaussian
/// per-photon intensity profile of the given FWHM (in nm).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiphotonSpectrum {
    center_wavelength_nm: f64,
    bandwidth_fwhm_nm: f64,
    shape: SpectralShape,
}

impl BiphotonSpectrum {
    pub fn new(center_wavelength_nm: f64, bandwidth_fwhm_nm: f64) -> Result<Self> {
        if !center_wavelength_nm.is_finite() || center_wavelength_nm <= 0.0 {
            return Err(Error::invalid(format!(
                "center wavelength must be > 0 nm, got {center_wavelength_nm}"
            )));
        }
        if !bandwidth_fwhm_nm.is_finite()
            || bandwidth_fwhm_nm <= 0.0
            || bandwidth_fwhm_nm >= center_wavelength_nm / 2.0
        {
            return Err(Error::invalid(format!(
                "bandwidth must satisfy 0 < fwhm << center wavelength, got {bandwidth_fwhm_nm} nm at {center_wavelength_nm} nm"
            )));
        }
        Ok(BiphotonSpectrum {
            center_wavelength_nm,
            bandwidth_fwhm_nm,
            shape: SpectralShape::Gaussian,
        })
    }

    /// Build a spectrum from the transform-limited single-photon duration
    /// instead of the bandwidth. The quoted source parameters (20 fs
    /// wavepackets, 6 nm bandwidth) are mutually inconsistent for
    /// transform-limited Gaussians -- 6 nm at 702 nm implies >100 fs -- so
    /// both knobs exist; the bundled scenario picks the duration, which is
    /// what sets the observed dip width.
    pub fn from_temporal_width(center_wavelength_nm: f64, fwhm_fs: f64) -> Result<Self> {
        if !fwhm_fs.is_finite() || fwhm_fs <= 0.0 {
            return Err(Error::invalid(format!(
                "temporal width must be > 0 fs, got {fwhm_fs}"
            )));
        }
        let bandwidth_omega = 4.0 * 2.0f64.ln() / fwhm_fs;
        let bandwidth_nm = bandwidth_omega * center_wavelength_nm * center_wavelength_nm
            / (2.0 * std::f64::consts::PI * C_NM_PER_FS);
        BiphotonSpectrum::new(center_wavelength_nm, bandwidth_nm)
    }

    pub fn center_wavelength_nm(&self) -> f64 {
        self.center_wavelength_nm
    }

    pub fn bandwidth_fwhm_nm(&self) -> f64 {
        self.bandwidth_fwhm_nm
    }

    pub fn shape(&self) -> SpectralShape {
        self.shape
    }

    pub fn omega0(&self) -> f64 {
        omega_from_wavelength(self.center_wavelength_nm)
    }

    /// Per-photon intensity FWHM in rad/fs.
    pub fn bandwidth_fwhm_omega(&self) -> f64 {
        2.0 * std::f64::consts::PI * C_NM_PER_FS * self.bandwidth_fwhm_nm
            / (self.center_wavelength_nm * self.center_wavelength_nm)
    }

    /// Gaussian sigma of the per-photon intensity spectrum, rad/fs.
    pub fn sigma_omega(&self) -> f64 {
        self.bandwidth_fwhm_omega() / (8.0 * 2.0f64.ln()).sqrt()
    }

    /// Transform-limited single-photon intensity FWHM duration, fs. Also the
    /// FWHM of the ideal (identity-filter) coincidence dip.
    pub fn temporal_fwhm_fs(&self) -> f64 {
        4.0 * 2.0f64.ln() / self.bandwidth_fwhm_omega()
    }
}

/// One interferometer arm: either empty, a dielectric stack, or a synthetic
/// constant-amplitude linear-phase element (useful for exercising the delay
/// metrology).
#[derive(Debug, Clone, PartialEq)]
pub enum ArmFilter {
    Identity,
    Stack(LayerStack),
    LinearPhase { amplitude: f64, delay_fs: f64 },
}

impl ArmFilter {
    /// Insertion-referenced amplitude at angular frequency `omega`.
    fn amplitude(&self, omega: f64, angle_rad: f64, pol: Polarization) -> Complex64 {
        match self {
            ArmFilter::Identity => Complex64::new(1.0, 0.0),
            ArmFilter::LinearPhase {
                amplitude,
                delay_fs,
            } => Complex64::from_polar(*amplitude, omega * delay_fs),
            ArmFilter::Stack(stack) => {
                let t = stack.response_at_omega(omega, angle_rad, pol).t;
                let kz = omega / C_NM_PER_FS * stack.ambient().index() * angle_rad.cos();
                t * Complex64::from_polar(1.0, -kz * stack.total_thickness_nm())
            }
        }
    }
}

/// The two arms plus the shared probe geometry (both halves of the barrier
/// substrate see the same tilt and polarization).
#[derive(Debug, Clone, PartialEq)]
pub struct ArmFilters {
    pub barrier_arm: ArmFilter,
    pub reference_arm: ArmFilter,
    pub angle_rad: f64,
    pub polarization: Polarization,
}

impl ArmFilters {
    pub fn normal_incidence(barrier_arm: ArmFilter, reference_arm: ArmFilter) -> Self {
        ArmFilters {
            barrier_arm,
            reference_arm,
            angle_rad: 0.0,
            polarization: Polarization::S,
        }
    }

    pub fn identity_pair(angle_rad: f64, polarization: Polarization) -> Self {
        ArmFilters {
            barrier_arm: ArmFilter::Identity,
            reference_arm: ArmFilter::Identity,
            angle_rad,
            polarization,
        }
    }

    /// The same interferometer with the arm contents exchanged.
    pub fn swapped(&self) -> Self {
        ArmFilters {
            barrier_arm: self.reference_arm.clone(),
            reference_arm: self.barrier_arm.clone(),
            angle_rad: self.angle_rad,
            polarization: self.polarization,
        }
    }
}

/// Coincidence probability for two photons meeting at a lossless 50/50 beam
/// splitter with single-photon amplitudes r and t: |r^2 + t^2|^2.
pub fn beamsplitter_coincidence(r: Complex64, t: Complex64) -> Result<f64> {
    let total = r.norm_sqr() + t.norm_sqr();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::invalid(format!(
            "beam splitter must be lossless: |r|^2 + |t|^2 = {total}"
        )));
    }
    Ok((r * r + t * t).norm_sqr())
}

/// Coincidence rate vs relative delay, with the fitted dip parameters.
#[derive(Debug, Clone)]
pub struct CoincidenceScan {
    pub delays_fs: Vec<f64>,
    /// Normalized so that the far-from-dip baseline is 1.
    pub rates: Vec<f64>,
    pub fit: DipFit,
}

pub const DEFAULT_FREQUENCY_POINTS: usize = 1025;
/// Half-width of the frequency integration window in intensity sigmas.
const FREQUENCY_WINDOW_SIGMAS: f64 = 4.0;

/// Simulate a coincidence scan over the given delays (fs).
pub fn coincidence_scan(
    filters: &ArmFilters,
    spectrum: &BiphotonSpectrum,
    delays_fs: &[f64],
) -> Result<CoincidenceScan> {
    coincidence_scan_with_points(filters, spectrum, delays_fs, DEFAULT_FREQUENCY_POINTS)
}

/// As [`coincidence_scan`] with an explicit frequency-grid resolution
/// (odd count >= 513 recommended; used by the grid-refinement checks).
pub fn coincidence_scan_with_points(
    filters: &ArmFilters,
    spectrum: &BiphotonSpectrum,
    delays_fs: &[f64],
    frequency_points: usize,
) -> Result<CoincidenceScan> {
    if delays_fs.len() < 7 {
        return Err(Error::invalid("delay grid needs at least 7 points"));
    }
    if delays_fs.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::invalid("delays must be strictly increasing"));
    }
    let width = spectrum.temporal_fwhm_fs();
    let (first, last) = (delays_fs[0], delays_fs[delays_fs.len() - 1]);
    if first > -3.0 * width || last < 3.0 * width {
        return Err(Error::invalid(format!(
            "delay grid must span at least +/-3 temporal widths (+/-{:.1} fs), got {first:.1}..{last:.1} fs",
            3.0 * width
        )));
    }
    if frequency_points < 3 {
        return Err(Error::invalid("frequency grid needs at least 3 points"));
    }

    let omega0 = spectrum.omega0();
    let sigma = spectrum.sigma_omega();
    let half_window = FREQUENCY_WINDOW_SIGMAS * sigma;
    let n = frequency_points;
    let step = 2.0 * half_window / (n - 1) as f64;

    // Per grid point: trapezoid weight * |f|^2, the power integrand and the
    // complex cross integrand (delay-independent part).
    let mut power = 0.0;
    let mut cross_terms: Vec<(f64, Complex64)> = Vec::with_capacity(n);
    let mut detunings: Vec<f64> = Vec::with_capacity(n);
    for i in 0..n {
        let detuning = -half_window + step * i as f64;
        let trapezoid = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
        let weight = trapezoid * (-detuning * detuning / (2.0 * sigma * sigma)).exp();

        let t1_plus = filters
            .barrier_arm
            .amplitude(omega0 + detuning, filters.angle_rad, filters.polarization);
        let t1_minus = filters
            .barrier_arm
            .amplitude(omega0 - detuning, filters.angle_rad, filters.polarization);
        let t2_plus = filters
            .reference_arm
            .amplitude(omega0 + detuning, filters.angle_rad, filters.polarization);
        let t2_minus = filters
            .reference_arm
            .amplitude(omega0 - detuning, filters.angle_rad, filters.polarization);

        power += weight * t1_plus.norm_sqr() * t2_minus.norm_sqr();
        cross_terms.push((weight, t1_plus * t2_plus.conj() * t1_minus.conj() * t2_minus));
        detunings.push(detuning);
    }

    if power < 1e-30 {
        return Err(Error::invalid(
            "degenerate scan: no transmission anywhere in the biphoton band",
        ));
    }

    let rates: Vec<f64> = delays_fs
        .iter()
        .map(|&tau| {
            let cross: f64 = cross_terms
                .iter()
                .zip(&detunings)
                .map(|((w, a), &detuning)| {
                    w * (a * Complex64::from_polar(1.0, -2.0 * detuning * tau)).re
                })
                .sum();
            1.0 - cross / power
        })
        .collect();

    let fit = fit_dip(delays_fs, &rates)?;
    Ok(CoincidenceScan {
        delays_fs: delays_fs.to_vec(),
        rates,
        fit,
    })
}

/// Default delay grid for a spectrum: +/-4 temporal widths, 241 points.
pub fn default_delay_grid(spectrum: &BiphotonSpectrum) -> Vec<f64> {
    let half = 4.0 * spectrum.temporal_fwhm_fs();
    let n = 241;
    (0..n)
        .map(|i| -half + 2.0 * half * i as f64 / (n - 1) as f64)
        .collect()
}

/// The operational tunneling time: dip center with the barrier/reference
/// filters minus the dip center of the bare (identity/identity)
/// interferometer. Negative means the barrier photon arrives earlier.
pub fn relative_tunneling_time(
    filters: &ArmFilters,
    spectrum: &BiphotonSpectrum,
) -> Result<f64> {
    let delays = default_delay_grid(spectrum);
    let with_barrier = coincidence_scan(filters, spectrum, &delays)?;
    let empty = ArmFilters::identity_pair(filters.angle_rad, filters.polarization);
    let reference = coincidence_scan(&empty, spectrum, &delays)?;
    Ok(with_barrier.fit.center_fs - reference.fit.center_fs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optics::{Layer, Medium};
    use approx::assert_relative_eq;

    fn berkeley() -> LayerStack {
        LayerStack::quarter_wave(
            700.0,
            2.22,
            1.45,
            11,
            Medium::vacuum(),
            Medium::new(1.45).unwrap(),
        )
        .unwrap()
    }

    fn spectrum() -> BiphotonSpectrum {
        // bandwidth chosen for a ~20 fs dip width
        BiphotonSpectrum::new(702.0, 36.27).unwrap()
    }

    #[test]
    fn beamsplitter_null_for_time_reversal_symmetric_splitter() {
        let r = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        for sign in [1.0, -1.0] {
            let t = Complex64::new(0.0, sign * std::f64::consts::FRAC_1_SQRT_2);
            assert!(beamsplitter_coincidence(r, t).unwrap() < 1e-15);
        }
    }

    #[test]
    fn beamsplitter_full_reflection_and_lossy_rejection() {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        assert_relative_eq!(beamsplitter_coincidence(one, zero).unwrap(), 1.0);
        assert!(beamsplitter_coincidence(one * 0.5, zero).is_err());
    }

    #[test]
    fn identity_filters_give_perfect_centered_dip() {
        let spec = spectrum();
        let filters = ArmFilters::identity_pair(0.0, Polarization::S);
        let delays = default_delay_grid(&spec);
        let scan = coincidence_scan(&filters, &spec, &delays).unwrap();
        assert!(scan.fit.center_fs.abs() < 1e-9, "center {}", scan.fit.center_fs);
        assert_relative_eq!(scan.fit.visibility, 1.0, epsilon = 1e-3);
        // dip FWHM equals the photon temporal width for this source model
        assert_relative_eq!(
            scan.fit.width_fs * (8.0 * 2.0f64.ln()).sqrt(),
            spec.temporal_fwhm_fs(),
            max_relative = 1e-3
        );
        // baseline normalization: outer 10% of the grid averages to 1
        let edge = delays.len() / 10;
        let outer: f64 = scan.rates.iter().take(edge).sum::<f64>() / edge as f64;
        assert!((0.99..=1.01).contains(&outer), "baseline {outer}");
    }

    #[test]
    fn linear_phase_filter_shifts_center_exactly() {
        let spec = spectrum();
        let tau_g = 4.25;
        let filters = ArmFilters::normal_incidence(
            ArmFilter::LinearPhase {
                amplitude: 0.8,
                delay_fs: tau_g,
            },
            ArmFilter::Identity,
        );
        let delays = default_delay_grid(&spec);
        let scan = coincidence_scan(&filters, &spec, &delays).unwrap();
        assert_relative_eq!(scan.fit.center_fs, tau_g, epsilon = 1e-6);
        assert_relative_eq!(scan.fit.visibility, 1.0, epsilon = 1e-3);
    }

    #[test]
    fn rates_are_nonnegative_even_for_structured_filters() {
        let spec = spectrum();
        let filters = ArmFilters::normal_incidence(
            ArmFilter::Stack(berkeley()),
            ArmFilter::Identity,
        );
        let delays = default_delay_grid(&spec);
        let scan = coincidence_scan(&filters, &spec, &delays).unwrap();
        assert!(scan.rates.iter().all(|&r| r >= -1e-12));
    }

    #[test]
    fn berkeley_dip_shifts_negative_at_normal_incidence() {
        let spec = spectrum();
        let filters = ArmFilters::normal_incidence(
            ArmFilter::Stack(berkeley()),
            ArmFilter::Identity,
        );
        let shift = relative_tunneling_time(&filters, &spec).unwrap();
        assert!(
            (-2.2..=-1.0).contains(&shift),
            "relative tunneling time {shift} fs"
        );
    }

    #[test]
    fn swapping_arms_negates_the_center() {
        let spec = spectrum();
        let filters = ArmFilters::normal_incidence(
            ArmFilter::Stack(berkeley()),
            ArmFilter::Identity,
        );
        let delays = default_delay_grid(&spec);
        let a = coincidence_scan(&filters, &spec, &delays).unwrap();
        let b = coincidence_scan(&filters.swapped(), &spec, &delays).unwrap();
        assert_relative_eq!(a.fit.center_fs, -b.fit.center_fs, epsilon = 1e-6);
    }

    #[test]
    fn glass_slab_delays_the_photon() {
        let spec = spectrum();
        let slab = LayerStack::new(
            Medium::vacuum(),
            vec![Layer::new(Medium::new(1.45).unwrap(), 2000.0).unwrap()],
            Medium::vacuum(),
        );
        let expected = (1.45 - 1.0) * 2000.0 / C_NM_PER_FS;
        let filters = ArmFilters::normal_incidence(ArmFilter::Stack(slab), ArmFilter::Identity);
        let shift = relative_tunneling_time(&filters, &spec).unwrap();
        assert!(shift > 0.0);
        assert!(
            (shift - expected).abs() / expected < 0.2,
            "slab shift {shift} vs single-pass {expected}"
        );
    }

    #[test]
    fn brewster_angle_scan_reverses_the_sign() {
        let spec = spectrum();
        let filters = ArmFilters {
            barrier_arm: ArmFilter::Stack(berkeley()),
            reference_arm: ArmFilter::Identity,
            angle_rad: 55.0f64.to_radians(),
            polarization: Polarization::P,
        };
        let shift = relative_tunneling_time(&filters, &spec).unwrap();
        assert!(shift > 0.0, "shift at 55 deg = {shift} fs");
    }

    #[test]
    fn grid_refinement_moves_results_below_tolerance() {
        let spec = spectrum();
        let filters = ArmFilters::normal_incidence(
            ArmFilter::Stack(berkeley()),
            ArmFilter::Identity,
        );
        let delays = default_delay_grid(&spec);
        let coarse = coincidence_scan_with_points(&filters, &spec, &delays, 513).unwrap();
        let fine = coincidence_scan_with_points(&filters, &spec, &delays, 2049).unwrap();
        assert!(
            (coarse.fit.center_fs - fine.fit.center_fs).abs() < 1e-4,
            "center moved {} -> {}",
            coarse.fit.center_fs,
            fine.fit.center_fs
        );
    }

    #[test]
    fn degenerate_filters_are_rejected() {
        let spec = spectrum();
        let filters = ArmFilters::normal_incidence(
            ArmFilter::LinearPhase {
                amplitude: 0.0,
                delay_fs: 0.0,
            },
            ArmFilter::Identity,
        );
        let delays = default_delay_grid(&spec);
        assert!(coincidence_scan(&filters, &spec, &delays).is_err());
    }

    #[test]
    fn short_delay_grid_is_rejected() {
        let spec = spectrum();
        let filters = ArmFilters::identity_pair(0.0, Polarization::S);
        let delays: Vec<f64> = (0..41).map(|i| -10.0 + 0.5 * i as f64).collect();
        assert!(coincidence_scan(&filters, &spec, &delays).is_err());
    }

    #[test]
    fn visibility_matches_depth_invariant() {
        let spec = spectrum();
        let filters = ArmFilters::normal_incidence(
            ArmFilter::Stack(berkeley()),
            ArmFilter::Identity,
        );
        let delays = default_delay_grid(&spec);
        let scan = coincidence_scan(&filters, &spec, &delays).unwrap();
        let min_rate = scan.rates.iter().cloned().fold(f64::INFINITY, f64::min);
        let depth = 1.0 - min_rate / scan.fit.baseline;
        assert!(
            (depth - scan.fit.visibility).abs() < 0.02,
            "depth {depth} vs visibility {}",
            scan.fit.visibility
        );
    }
}
