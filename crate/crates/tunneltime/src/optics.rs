//! Frequency-domain plane-wave solver for multilayer dielectric stacks.
//!
//! The stack response is computed with the characteristic-matrix method:
//! each layer contributes a 2x2 matrix relating tangential field components
//! across it,
//!
//! ```text
//!   M_j = | cos(delta_j)             -i sin(delta_j)/eta_j |
//!         | -i eta_j sin(delta_j)     cos(delta_j)         |
//! ```
//!
//! with phase thickness `delta_j = k0 n_j d_j cos(theta_j)` and tilted
//! admittance `eta_j` (`n cos(theta)` for S, `n/cos(theta)` for P, in units
//! of the free-space admittance). The product over layers applied to the
//! substrate admittance yields complex `r` and `t`.
//!
//! Conventions, fixed once and relied on everywhere else in the crate:
//! - time dependence `exp(-i omega t)`, forward propagation `exp(+i k z)`;
//! - `r` and `t` are tangential-field amplitude ratios referenced to the
//!   ambient-side entry plane and the substrate-side exit plane;
//! - `cos(theta_j)` takes the branch with non-negative real and imaginary
//!   parts, so evanescent waves decay in +z;
//! - at normal incidence S and P give identical `r` (no extra sign flip),
//!   and a bare air->glass interface has `r = (n_a - n_s)/(n_a + n_s) < 0`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::units::{omega_from_wavelength, wavelength_from_omega, C_NM_PER_FS};

/// A lossless, non-magnetic medium (real positive refractive index).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Medium {
    index: f64,
}

impl Medium {
    pub fn new(index: f64) -> Result<Self> {
        if !index.is_finite() || index <= 0.0 {
            return Err(Error::invalid(format!(
                "refractive index must be finite and > 0, got {index}"
            )));
        }
        Ok(Medium { index })
    }

    pub fn vacuum() -> Self {
        Medium { index: 1.0 }
    }

    pub fn index(self) -> f64 {
        self.index
    }
}

/// One homogeneous film. Zero thickness is legal and acts as the identity,
/// which keeps stack concatenation algebra simple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Layer {
    medium: Medium,
    thickness_nm: f64,
}

impl Layer {
    pub fn new(medium: Medium, thickness_nm: f64) -> Result<Self> {
        if !thickness_nm.is_finite() || thickness_nm < 0.0 {
            return Err(Error::invalid(format!(
                "layer thickness must be finite and >= 0 nm, got {thickness_nm}"
            )));
        }
        Ok(Layer {
            medium,
            thickness_nm,
        })
    }

    pub fn medium(self) -> Medium {
        self.medium
    }

    pub fn thickness_nm(self) -> f64 {
        self.thickness_nm
    }
}

/// Linear polarization relative to the plane of incidence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarization {
    /// Electric field perpendicular to the plane of incidence (TE).
    S,
    /// Electric field in the plane of incidence (TM).
    P,
}

impl std::str::FromStr for Polarization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "s" | "te" => Ok(Polarization::S),
            "p" | "tm" => Ok(Polarization::P),
            other => Err(Error::invalid(format!(
                "polarization must be 's' or 'p', got '{other}'"
            ))),
        }
    }
}

impl std::fmt::Display for Polarization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Polarization::S => write!(f, "s"),
            Polarization::P => write!(f, "p"),
        }
    }
}

/// An ordered dielectric stack between two semi-infinite media.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerStack {
    ambient: Medium,
    layers: Vec<Layer>,
    substrate: Medium,
}

impl LayerStack {
    pub fn new(ambient: Medium, layers: Vec<Layer>, substrate: Medium) -> Self {
        LayerStack {
            ambient,
            layers,
            substrate,
        }
    }

    /// Bare interface between two media (no layers).
    pub fn bare_interface(ambient: Medium, substrate: Medium) -> Self {
        LayerStack::new(ambient, Vec::new(), substrate)
    }

    /// Quarter-wave mirror: `layer_count` layers alternating high/low index
    /// starting with the high index, each with optical thickness
    /// `design_wavelength / 4`.
    pub fn quarter_wave(
        design_wavelength_nm: f64,
        n_high: f64,
        n_low: f64,
        layer_count: usize,
        ambient: Medium,
        substrate: Medium,
    ) -> Result<Self> {
        if !design_wavelength_nm.is_finite() || design_wavelength_nm <= 0.0 {
            return Err(Error::invalid(format!(
                "design wavelength must be > 0 nm, got {design_wavelength_nm}"
            )));
        }
        if layer_count < 1 {
            return Err(Error::invalid("layer count must be >= 1"));
        }
        let high = Medium::new(n_high)?;
        let low = Medium::new(n_low)?;
        let layers = (0..layer_count)
            .map(|i| {
                let medium = if i % 2 == 0 { high } else { low };
                // n * d = lambda0 / 4
                Layer::new(medium, design_wavelength_nm / (4.0 * medium.index()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LayerStack::new(ambient, layers, substrate))
    }

    pub fn ambient(&self) -> Medium {
        self.ambient
    }

    pub fn substrate(&self) -> Medium {
        self.substrate
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn total_thickness_nm(&self) -> f64 {
        self.layers.iter().map(|l| l.thickness_nm()).sum()
    }

    /// The same stack traversed from the substrate side.
    pub fn reversed(&self) -> LayerStack {
        let mut layers = self.layers.clone();
        layers.reverse();
        LayerStack::new(self.substrate, layers, self.ambient)
    }

    /// Complex reflection/transmission response for a given incidence.
    pub fn response(&self, inc: &Incidence) -> ComplexResponse {
        self.response_at_omega(inc.omega(), inc.angle_rad(), inc.polarization())
    }

    /// Response at angular frequency `omega` (rad/fs), incidence angle in
    /// the ambient medium, and polarization. The workhorse behind every
    /// frequency derivative in the crate.
    pub fn response_at_omega(
        &self,
        omega: f64,
        angle_rad: f64,
        pol: Polarization,
    ) -> ComplexResponse {
        let k0 = omega / C_NM_PER_FS;
        // Snell invariant: n_a sin(theta_a), conserved across all layers.
        let transverse = self.ambient.index() * angle_rad.sin();

        let eta_ambient = admittance(self.ambient.index(), cos_theta(self.ambient.index(), transverse), pol);
        let eta_substrate = admittance(
            self.substrate.index(),
            cos_theta(self.substrate.index(), transverse),
            pol,
        );

        let mut m = Char2::identity();
        for layer in &self.layers {
            m = m.mul(&Char2::layer(layer, k0, transverse, pol));
        }

        // [B; C] = M * [1; eta_substrate]
        let b = m.m11 + m.m12 * eta_substrate;
        let c = m.m21 + m.m22 * eta_substrate;

        let denom = eta_ambient * b + c;
        let r = (eta_ambient * b - c) / denom;
        let t = 2.0 * eta_ambient / denom;

        let flux_reflection = r.norm_sqr();
        let flux_transmission = eta_substrate.re / eta_ambient.re * t.norm_sqr();

        ComplexResponse {
            r,
            t,
            flux_reflection,
            flux_transmission,
        }
    }

    /// Transmission/reflection over a wavelength window, sampled uniformly
    /// in angular frequency, returned in ascending omega.
    pub fn transmission_spectrum(
        &self,
        lambda_min_nm: f64,
        lambda_max_nm: f64,
        points: usize,
        angle_rad: f64,
        pol: Polarization,
    ) -> Result<Vec<SpectrumPoint>> {
        if !(lambda_min_nm > 0.0 && lambda_min_nm < lambda_max_nm) {
            return Err(Error::invalid(format!(
                "need 0 < lambda_min < lambda_max, got {lambda_min_nm}..{lambda_max_nm}"
            )));
        }
        if points < 2 {
            return Err(Error::invalid("spectrum needs at least 2 points"));
        }
        let omega_lo = omega_from_wavelength(lambda_max_nm);
        let omega_hi = omega_from_wavelength(lambda_min_nm);
        let step = (omega_hi - omega_lo) / (points - 1) as f64;
        Ok((0..points)
            .map(|i| {
                let omega = omega_lo + step * i as f64;
                SpectrumPoint {
                    lambda_nm: wavelength_from_omega(omega),
                    omega_rad_per_fs: omega,
                    response: self.response_at_omega(omega, angle_rad, pol),
                }
            })
            .collect())
    }
}

/// One plane-wave probe: vacuum wavelength, angle in the ambient medium,
/// polarization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Incidence {
    wavelength_nm: f64,
    angle_rad: f64,
    polarization: Polarization,
}

impl Incidence {
    pub fn new(wavelength_nm: f64, angle_rad: f64, polarization: Polarization) -> Result<Self> {
        if !wavelength_nm.is_finite() || wavelength_nm <= 0.0 {
            return Err(Error::invalid(format!(
                "wavelength must be > 0 nm, got {wavelength_nm}"
            )));
        }
        if !angle_rad.is_finite() || !(0.0..std::f64::consts::FRAC_PI_2).contains(&angle_rad) {
            return Err(Error::invalid(format!(
                "incidence angle must lie in [0, pi/2), got {angle_rad} rad"
            )));
        }
        Ok(Incidence {
            wavelength_nm,
            angle_rad,
            polarization,
        })
    }

    pub fn normal(wavelength_nm: f64, polarization: Polarization) -> Result<Self> {
        Incidence::new(wavelength_nm, 0.0, polarization)
    }

    pub fn wavelength_nm(&self) -> f64 {
        self.wavelength_nm
    }

    pub fn angle_rad(&self) -> f64 {
        self.angle_rad
    }

    pub fn polarization(&self) -> Polarization {
        self.polarization
    }

    pub fn omega(&self) -> f64 {
        omega_from_wavelength(self.wavelength_nm)
    }
}

/// Complex amplitudes and the corresponding energy fluxes at one probe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexResponse {
    pub r: Complex64,
    pub t: Complex64,
    /// |r|^2.
    pub flux_reflection: f64,
    /// Re(eta_substrate)/Re(eta_ambient) |t|^2; together with
    /// `flux_reflection` sums to 1 for lossless stacks.
    pub flux_transmission: f64,
}

/// One row of a transmission spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumPoint {
    pub lambda_nm: f64,
    pub omega_rad_per_fs: f64,
    pub response: ComplexResponse,
}

/// Band edges of a stop band: the first 50%-transmission crossings walking
/// outward from midgap. Wavelengths in nm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandEdges {
    /// Low-frequency edge (long wavelength, e.g. ~800 nm for the 700 nm
    /// quarter-wave mirror).
    pub long_wavelength_nm: f64,
    /// High-frequency edge (short wavelength, e.g. ~600 nm).
    pub short_wavelength_nm: f64,
}

/// Locate the stop-band edges in a spectrum sampled in ascending omega.
///
/// Starting at the grid point closest to `midgap_lambda_nm`, walk outward in
/// both directions until the flux transmission first crosses 0.5 and place
/// the edge by linear interpolation in omega. Returns `None` when midgap
/// already transmits more than 50% or when a crossing never happens inside
/// the sampled window.
pub fn band_edges(spectrum: &[SpectrumPoint], midgap_lambda_nm: f64) -> Option<BandEdges> {
    if spectrum.len() < 3 {
        return None;
    }
    let midgap_omega = omega_from_wavelength(midgap_lambda_nm);
    let start = spectrum
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| {
            (a.omega_rad_per_fs - midgap_omega)
                .abs()
                .total_cmp(&(b.omega_rad_per_fs - midgap_omega).abs())
        })
        .map(|(i, _)| i)?;
    if spectrum[start].response.flux_transmission >= 0.5 {
        return None;
    }

    let crossing = |i_prev: usize, i_next: usize| -> f64 {
        let (p, q) = (&spectrum[i_prev], &spectrum[i_next]);
        let (tp, tq) = (p.response.flux_transmission, q.response.flux_transmission);
        let f = (0.5 - tp) / (tq - tp);
        p.omega_rad_per_fs + f * (q.omega_rad_per_fs - p.omega_rad_per_fs)
    };

    let mut long_edge = None;
    for i in (0..start).rev() {
        if spectrum[i].response.flux_transmission >= 0.5 {
            long_edge = Some(wavelength_from_omega(crossing(i, i + 1)));
            break;
        }
    }
    let mut short_edge = None;
    for i in start + 1..spectrum.len() {
        if spectrum[i].response.flux_transmission >= 0.5 {
            short_edge = Some(wavelength_from_omega(crossing(i - 1, i)));
            break;
        }
    }
    Some(BandEdges {
        long_wavelength_nm: long_edge?,
        short_wavelength_nm: short_edge?,
    })
}

/// Brewster angle for light going from `ambient` toward `other`:
/// arctan(n_other / n_ambient). Undefined for equal indices.
pub fn brewster_angle(ambient: Medium, other: Medium) -> Result<f64> {
    if ambient.index() == other.index() {
        return Err(Error::invalid(
            "Brewster angle is undefined for equal refractive indices",
        ));
    }
    Ok((other.index() / ambient.index()).atan())
}

/// cos(theta_j) in a medium of index `n` for conserved transverse index
/// `transverse = n_ambient sin(theta_ambient)`. Real branch for propagating
/// waves, +i branch for evanescent ones (decay in +z).
fn cos_theta(n: f64, transverse: f64) -> Complex64 {
    let s = transverse / n;
    let c2 = 1.0 - s * s;
    if c2 >= 0.0 {
        Complex64::new(c2.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-c2).sqrt())
    }
}

/// Tilted optical admittance in units of the free-space admittance.
fn admittance(n: f64, cos_theta: Complex64, pol: Polarization) -> Complex64 {
    match pol {
        Polarization::S => n * cos_theta,
        Polarization::P => n / cos_theta,
    }
}

/// sin(z)/z with the removable singularity filled in.
fn sinc(z: Complex64) -> Complex64 {
    if z.norm() < 1e-8 {
        Complex64::new(1.0, 0.0) - z * z / 6.0
    } else {
        z.sin() / z
    }
}

/// 2x2 complex characteristic matrix.
struct Char2 {
    m11: Complex64,
    m12: Complex64,
    m21: Complex64,
    m22: Complex64,
}

impl Char2 {
    fn identity() -> Self {
        Char2 {
            m11: Complex64::new(1.0, 0.0),
            m12: Complex64::new(0.0, 0.0),
            m21: Complex64::new(0.0, 0.0),
            m22: Complex64::new(1.0, 0.0),
        }
    }

    /// Characteristic matrix of one layer, with time dependence
    /// `exp(-i omega t)` (transmission phase grows with thickness).
    ///
    /// The off-diagonal entries are written as `sin(delta)/delta` times
    /// `delta/eta` resp. `delta*eta`, which stay finite at grazing layer
    /// angles (eta_S -> 0, eta_P -> inf at the branch point) and for
    /// zero-thickness layers.
    fn layer(layer: &Layer, k0: f64, transverse: f64, pol: Polarization) -> Self {
        let n = layer.medium().index();
        let ct = cos_theta(n, transverse);
        let ct2 = ct * ct;
        let kd = k0 * layer.thickness_nm();
        let delta = kd * n * ct;
        let (delta_over_eta, delta_times_eta) = match pol {
            Polarization::S => (Complex64::new(kd, 0.0), kd * n * n * ct2),
            Polarization::P => (kd * ct2, Complex64::new(kd * n * n, 0.0)),
        };
        let minus_i = Complex64::new(0.0, -1.0);
        let s = sinc(delta);
        Char2 {
            m11: delta.cos(),
            m12: minus_i * s * delta_over_eta,
            m21: minus_i * s * delta_times_eta,
            m22: delta.cos(),
        }
    }

    fn mul(&self, other: &Char2) -> Char2 {
        Char2 {
            m11: self.m11 * other.m11 + self.m12 * other.m21,
            m12: self.m11 * other.m12 + self.m12 * other.m22,
            m21: self.m21 * other.m11 + self.m22 * other.m21,
            m22: self.m21 * other.m12 + self.m22 * other.m22,
        }
    }
}

/// Trace/2 of the unit-cell characteristic matrix; |trace/2| > 1 inside a
/// stop band. Used by the Bloch-dispersion machinery in `delay`.
pub(crate) fn half_trace_unit_cell(
    layers: &[Layer],
    omega: f64,
    transverse: f64,
    pol: Polarization,
) -> Complex64 {
    let k0 = omega / C_NM_PER_FS;
    let mut m = Char2::identity();
    for layer in layers {
        m = m.mul(&Char2::layer(layer, k0, transverse, pol));
    }
    (m.m11 + m.m22) / 2.0
}
