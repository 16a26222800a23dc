//! Frustrated total internal reflection: photon tunneling across an air gap
//! between two prisms probed beyond the critical angle.
//!
//! The plane-wave amplitude is the single-layer stack response
//! (prism | air gap | prism), evanescent inside the gap. Two beam
//! observables probe two different tunneling times at once:
//!
//! - the lateral displacement of the transmitted beam,
//!   `D = -d(arg t)/d(k_y)` by stationary phase, saturates with gap width
//!   (Hartman behavior, the Wigner-time fingerprint);
//! - the angular deflection of the beam centroid, dominated by
//!   `d(ln|t|)/d(theta)`, grows linearly with gap width
//!   (the Buettiker-Landauer fingerprint, `tau_BL = gap |d kappa/d omega|`).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numdiff;
use crate::optics::{ComplexResponse, Layer, LayerStack, Medium, Polarization};
use crate::units::C_NM_PER_FS;

/// Two prisms separated by an air gap, probed by a plane wave inside the
/// first prism.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FtirGeometry {
    prism_index: f64,
    gap_nm: f64,
    /// Incidence angle inside the prism, radians.
    incidence_rad: f64,
    wavelength_nm: f64,
    polarization: Polarization,
}

impl FtirGeometry {
    pub fn new(
        prism_index: f64,
        gap_nm: f64,
        incidence_rad: f64,
        wavelength_nm: f64,
        polarization: Polarization,
    ) -> Result<Self> {
        if !prism_index.is_finite() || prism_index <= 1.0 {
            return Err(Error::invalid(format!(
                "prism index must be > 1, got {prism_index}"
            )));
        }
        if !gap_nm.is_finite() || gap_nm <= 0.0 {
            return Err(Error::invalid(format!("gap must be > 0 nm, got {gap_nm}")));
        }
        if !(0.0..std::f64::consts::FRAC_PI_2).contains(&incidence_rad) {
            return Err(Error::invalid(format!(
                "incidence angle must lie in [0, pi/2), got {incidence_rad}"
            )));
        }
        if !wavelength_nm.is_finite() || wavelength_nm <= 0.0 {
            return Err(Error::invalid(format!(
                "wavelength must be > 0 nm, got {wavelength_nm}"
            )));
        }
        Ok(FtirGeometry {
            prism_index,
            gap_nm,
            incidence_rad,
            wavelength_nm,
            polarization,
        })
    }

    /// Default Rennes-style configuration: n = 1.52 prisms at 702 nm,
    /// 2 degrees beyond the critical angle, P polarization.
    pub fn default_at_gap(gap_nm: f64) -> Result<Self> {
        let n = 1.52;
        let critical = (1.0f64 / n).asin();
        FtirGeometry::new(n, gap_nm, critical + 2.0f64.to_radians(), 702.0, Polarization::P)
    }

    pub fn prism_index(&self) -> f64 {
        self.prism_index
    }

    pub fn gap_nm(&self) -> f64 {
        self.gap_nm
    }

    pub fn incidence_rad(&self) -> f64 {
        self.incidence_rad
    }

    pub fn wavelength_nm(&self) -> f64 {
        self.wavelength_nm
    }

    pub fn polarization(&self) -> Polarization {
        self.polarization
    }

    pub fn with_gap(&self, gap_nm: f64) -> Result<Self> {
        FtirGeometry::new(
            self.prism_index,
            gap_nm,
            self.incidence_rad,
            self.wavelength_nm,
            self.polarization,
        )
    }

    pub fn critical_angle_rad(&self) -> f64 {
        (1.0 / self.prism_index).asin()
    }

    /// True when the gap is evanescent (beyond the critical angle).
    pub fn is_tunneling(&self) -> bool {
        self.prism_index * self.incidence_rad.sin() > 1.0
    }

    /// The equivalent layer stack: prism | air gap | prism.
    pub fn as_stack(&self) -> LayerStack {
        let prism = Medium::new(self.prism_index).expect("validated at construction");
        let gap = Layer::new(Medium::vacuum(), self.gap_nm).expect("validated at construction");
        LayerStack::new(prism, vec![gap], prism)
    }

    fn omega(&self) -> f64 {
        2.0 * std::f64::consts::PI * C_NM_PER_FS / self.wavelength_nm
    }

    /// Field decay constant in the gap, per nm:
    /// kappa = k0 sqrt(n^2 sin^2 theta - 1), or 0 below the critical angle.
    pub fn decay_constant_per_nm(&self) -> f64 {
        let k0 = 2.0 * std::f64::consts::PI / self.wavelength_nm;
        let s = self.prism_index * self.incidence_rad.sin();
        if s > 1.0 {
            k0 * (s * s - 1.0).sqrt()
        } else {
            0.0
        }
    }
}

/// A paraxial Gaussian beam, described by its 1/e^2 intensity radius at the
/// gap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianBeam {
    waist_nm: f64,
}

impl GaussianBeam {
    pub fn new(waist_nm: f64) -> Result<Self> {
        if !waist_nm.is_finite() || waist_nm <= 0.0 {
            return Err(Error::invalid(format!(
                "beam waist must be > 0 nm, got {waist_nm}"
            )));
        }
        Ok(GaussianBeam { waist_nm })
    }

    /// Default 30 um waist: comfortably paraxial at optical wavelengths.
    pub fn default_waist() -> Self {
        GaussianBeam { waist_nm: 30_000.0 }
    }

    pub fn waist_nm(&self) -> f64 {
        self.waist_nm
    }

    fn check_paraxial(&self, wavelength_nm: f64) -> Result<()> {
        if self.waist_nm < 10.0 * wavelength_nm {
            return Err(Error::invalid(format!(
                "beam waist {} nm is not paraxial at {} nm",
                self.waist_nm, wavelength_nm
            )));
        }
        Ok(())
    }
}

/// Plane-wave response of the prism/gap/prism system (same code path as the
/// general stack solver).
pub fn ftir_amplitude(g: &FtirGeometry) -> ComplexResponse {
    g.as_stack()
        .response_at_omega(g.omega(), g.incidence_rad, g.polarization)
}

fn amplitude_at_angle(g: &FtirGeometry, theta: f64) -> Complex64 {
    g.as_stack()
        .response_at_omega(g.omega(), theta, g.polarization)
        .t
}

/// Lateral (Goos-Haenchen-type) displacement of the transmitted beam, nm:
/// the stationary-phase shift `-d(arg t)/d(k_y)` evaluated at the central
/// transverse wavevector `k_y = n (omega/c) sin(theta)`.
pub fn lateral_displacement(g: &FtirGeometry, beam: &GaussianBeam) -> Result<f64> {
    beam.check_paraxial(g.wavelength_nm)?;
    let t0 = amplitude_at_angle(g, g.incidence_rad);
    if t0.norm() < 1e-14 {
        return Err(Error::UnreliableDelay {
            amplitude: t0.norm(),
        });
    }
    let theta = g.incidence_rad;
    let h = numdiff::step_for(theta).max(1e-9);
    let dphi_dtheta = numdiff::phase_derivative(|th| amplitude_at_angle(g, th), theta, h);
    let k0 = 2.0 * std::f64::consts::PI / g.wavelength_nm;
    let dky_dtheta = g.prism_index * k0 * theta.cos();
    Ok(-dphi_dtheta / dky_dtheta)
}

/// Angular deflection of the transmitted beam centroid, radians: propagate
/// the beam's Gaussian angular spectrum through t(theta) and take the
/// intensity-weighted mean transverse-wavevector shift.
pub fn angular_deflection(g: &FtirGeometry, beam: &GaussianBeam) -> Result<f64> {
    beam.check_paraxial(g.wavelength_nm)?;
    let k0 = 2.0 * std::f64::consts::PI / g.wavelength_nm;
    let nk0 = g.prism_index * k0;
    let ky0 = nk0 * g.incidence_rad.sin();
    // intensity sigma of the angular spectrum of a waist-w Gaussian
    let sigma_k = 1.0 / beam.waist_nm;
    if ky0 + 4.0 * sigma_k >= nk0 {
        return Err(Error::invalid(
            "beam angular spectrum reaches grazing incidence; increase the waist",
        ));
    }

    let shift = centroid_shift(
        |ky| {
            let theta = (ky / nk0).asin();
            amplitude_at_angle(g, theta).norm_sqr()
        },
        ky0,
        sigma_k,
    )?;
    Ok(shift / (nk0 * g.incidence_rad.cos()))
}

/// Intensity-weighted centroid shift of `weight(k) * exp(-(k-k0)^2/(2 s^2))`
/// relative to k0, on a symmetric +/-4 sigma grid.
fn centroid_shift(weight: impl Fn(f64) -> f64, k0: f64, sigma: f64) -> Result<f64> {
    let n = 513;
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..n {
        let u = -4.0 + 8.0 * i as f64 / (n - 1) as f64;
        let trapezoid = if i == 0 || i == n - 1 { 0.5 } else { 1.0 };
        let k = k0 + u * sigma;
        let w = trapezoid * (-u * u / 2.0).exp() * weight(k);
        num += w * (k - k0);
        den += w;
    }
    if den < 1e-300 {
        return Err(Error::invalid(
            "beam is fully extinguished; centroid undefined",
        ));
    }
    Ok(num / den)
}

/// Wigner-style time for the gap: hbar-free phase derivative
/// d(arg t)/d(omega) at fixed incidence angle, fs.
pub fn wigner_time_fs(g: &FtirGeometry) -> Result<f64> {
    let t0 = amplitude_at_angle(g, g.incidence_rad);
    if t0.norm() < 1e-14 {
        return Err(Error::UnreliableDelay {
            amplitude: t0.norm(),
        });
    }
    let omega = g.omega();
    let stack = g.as_stack();
    let tau = numdiff::phase_derivative(
        |w| stack.response_at_omega(w, g.incidence_rad, g.polarization).t,
        omega,
        numdiff::step_for(omega),
    );
    Ok(tau)
}

/// Buettiker-Landauer analogue for the gap: gap width times
/// |d kappa/d omega| = gap * kappa / omega (kappa is linear in omega at
/// fixed angle), fs. Zero below the critical angle is not meaningful, so
/// the tunneling regime is required.
pub fn bl_time_fs(g: &FtirGeometry) -> Result<f64> {
    if !g.is_tunneling() {
        return Err(Error::OutsideStopBand(
            "below the critical angle the gap is propagating, not tunneling".into(),
        ));
    }
    Ok(g.gap_nm * g.decay_constant_per_nm() / g.omega())
}

/// One row of a gap scan.
#[derive(Debug, Clone, Copy)]
pub struct FtirPoint {
    pub gap_nm: f64,
    pub abs_t: f64,
    pub displacement_nm: f64,
    pub deflection_rad: f64,
    pub kappa_per_nm: f64,
    pub wigner_fs: f64,
    pub bl_fs: f64,
}

/// Sweep the gap width at fixed angle/wavelength.
pub fn gap_scan(template: &FtirGeometry, beam: &GaussianBeam, gaps_nm: &[f64]) -> Result<Vec<FtirPoint>> {
    gaps_nm
        .iter()
        .map(|&gap| {
            let g = template.with_gap(gap)?;
            Ok(FtirPoint {
                gap_nm: gap,
                abs_t: ftir_amplitude(&g).t.norm(),
                displacement_nm: lateral_displacement(&g, beam)?,
                deflection_rad: angular_deflection(&g, beam)?,
                kappa_per_nm: g.decay_constant_per_nm(),
                wigner_fs: wigner_time_fs(&g)?,
                bl_fs: bl_time_fs(&g)?,
            })
        })
        .collect()
}
