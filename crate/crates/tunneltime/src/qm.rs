//! Rectangular-barrier tunneling in one dimension.
//!
//! The stationary scattering problem for a barrier of height `V0` and width
//! `d` has the closed-form transmission amplitude (referenced to the entry
//! and exit planes, so its phase is the phase accumulated across the barrier
//! region)
//!
//! ```text
//!   t = 1 / [cosh(kappa d) - (i/2) (k^2 - kappa^2) S / k],
//!   S = sinh(kappa d)/kappa,    k = sqrt(2 m E)/hbar,
//!   kappa^2 = 2 m (V0 - E)/hbar^2.
//! ```
//!
//! Written through `S`, the amplitude is analytic across E = V0 (kappa = 0)
//! and continues to the over-barrier region where `kappa` is imaginary.
//!
//! Three tunneling times are derived from it:
//! - Wigner (phase) time: `hbar d(arg t)/dE`, tracks the wave-packet peak;
//! - Buettiker-Landauer time: `d / |v|` with `|v| = hbar kappa / m`, the
//!   barrier width over the magnitude of the semiclassical velocity;
//! - Larmor time: spin-precession (`tau_y`) and spin-alignment (`tau_z`)
//!   components from derivatives with respect to the barrier height,
//!   combined in quadrature. Signs are fixed so that the opaque-barrier
//!   limit of `tau_total` is `+tau_bl`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numdiff;

/// Relative distance from E = V0 below which the kappa -> 0 limiting form
/// is used instead of dividing by kappa.
const DEGENERACY_THRESHOLD: f64 = 1e-12;

/// A square potential barrier probed by a particle of fixed energy.
///
/// Natural units `hbar = 1`, `m = 1` by default; explicit values accepted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RectangularBarrier {
    height: f64,
    width: f64,
    energy: f64,
    hbar: f64,
    mass: f64,
}

impl RectangularBarrier {
    pub fn new(height: f64, width: f64, energy: f64) -> Result<Self> {
        Self::with_units(height, width, energy, 1.0, 1.0)
    }

    pub fn with_units(height: f64, width: f64, energy: f64, hbar: f64, mass: f64) -> Result<Self> {
        for (name, v) in [
            ("height", height),
            ("width", width),
            ("energy", energy),
            ("hbar", hbar),
            ("mass", mass),
        ] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::invalid(format!(
                    "barrier {name} must be finite and > 0, got {v}"
                )));
            }
        }
        Ok(RectangularBarrier {
            height,
            width,
            energy,
            hbar,
            mass,
        })
    }

    pub fn height(&self) -> f64 {
        self.height
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn with_width(&self, width: f64) -> Result<Self> {
        Self::with_units(self.height, width, self.energy, self.hbar, self.mass)
    }

    /// Free-space wavevector k = sqrt(2 m E)/hbar.
    pub fn wavevector(&self) -> f64 {
        (2.0 * self.mass * self.energy).sqrt() / self.hbar
    }

    /// Under-barrier decay constant kappa = sqrt(2 m (V0-E))/hbar, for E < V0.
    pub fn decay_constant(&self) -> Result<f64> {
        if self.energy >= self.height {
            return Err(Error::invalid(format!(
                "decay constant requires E < V0 (E = {}, V0 = {})",
                self.energy, self.height
            )));
        }
        Ok((2.0 * self.mass * (self.height - self.energy)).sqrt() / self.hbar)
    }

    /// Free-particle speed hbar k / m.
    pub fn free_speed(&self) -> f64 {
        self.hbar * self.wavevector() / self.mass
    }
}

/// Complex t and r of the stationary scattering problem, both referenced to
/// the entry/exit planes.
fn amplitudes(energy: f64, height: f64, width: f64, hbar: f64, mass: f64) -> (Complex64, Complex64) {
    let k = (2.0 * mass * energy).sqrt() / hbar;
    let kappa_sq = 2.0 * mass * (height - energy) / (hbar * hbar);

    // cosh(kappa d) and S = sinh(kappa d)/kappa, both analytic in kappa^2.
    let (ch, s) = if (energy - height).abs() <= DEGENERACY_THRESHOLD * height {
        (1.0, width)
    } else if kappa_sq > 0.0 {
        let kappa = kappa_sq.sqrt();
        (f64::cosh(kappa * width), f64::sinh(kappa * width) / kappa)
    } else {
        let kp = (-kappa_sq).sqrt();
        (f64::cos(kp * width), f64::sin(kp * width) / kp)
    };

    let denom = Complex64::new(ch, -s * (k * k - kappa_sq) / (2.0 * k));
    let t = Complex64::new(1.0, 0.0) / denom;
    let r = Complex64::new(0.0, -s * (k * k + kappa_sq) / (2.0 * k)) / denom;
    (t, r)
}

/// Complex transmission amplitude of the barrier.
pub fn barrier_amplitude(b: &RectangularBarrier) -> Complex64 {
    amplitudes(b.energy, b.height, b.width, b.hbar, b.mass).0
}

/// Complex reflection amplitude (|t|^2 + |r|^2 = 1).
pub fn reflection_amplitude(b: &RectangularBarrier) -> Complex64 {
    amplitudes(b.energy, b.height, b.width, b.hbar, b.mass).1
}

/// Finite-difference step in `x`, shrunk so [x-h, x+h] never straddles the
/// E = V0 degeneracy by more than necessary. A floor keeps roundoff bounded
/// when the probe sits very close to the degeneracy.
fn step_avoiding(x: f64, other: f64) -> f64 {
    let mut h = numdiff::step_for(x);
    let gap = (x - other).abs();
    if gap > 0.0 && gap < h {
        h = f64::max(0.45 * gap, 1e-9 * x.abs());
    }
    h
}

/// Wigner phase time: hbar d(arg t)/dE, with arg t the phase accumulated
/// from the entry to the exit plane.
pub fn wigner_time(b: &RectangularBarrier) -> f64 {
    let h = step_avoiding(b.energy, b.height);
    let f = |e: f64| amplitudes(e, b.height, b.width, b.hbar, b.mass).0;
    b.hbar * numdiff::phase_derivative(f, b.energy, h)
}

/// Buettiker-Landauer semiclassical time d/|v| = m d/(hbar kappa).
pub fn bl_time(b: &RectangularBarrier) -> Result<f64> {
    let kappa = b.decay_constant().map_err(|_| {
        Error::invalid(format!(
            "Buettiker-Landauer time requires E < V0 (E = {}, V0 = {})",
            b.energy, b.height
        ))
    })?;
    Ok(b.mass * b.width / (b.hbar * kappa))
}

/// The two Larmor components and their quadrature sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LarmorTimes {
    /// Precession component: -hbar d(arg t)/dV0.
    pub y: f64,
    /// Alignment component: -hbar d(ln|t|)/dV0.
    pub z: f64,
    /// sqrt(y^2 + z^2).
    pub total: f64,
}

pub fn larmor_times(b: &RectangularBarrier) -> LarmorTimes {
    let h = step_avoiding(b.height, b.energy);
    let f = |v0: f64| amplitudes(b.energy, v0, b.width, b.hbar, b.mass).0;
    let d = numdiff::log_derivative(f, b.height, h);
    let y = -b.hbar * d.im;
    let z = -b.hbar * d.re;
    LarmorTimes {
        y,
        z,
        total: y.hypot(z),
    }
}

/// All tunneling times for one barrier configuration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DelayReport {
    pub width: f64,
    pub energy: f64,
    pub height: f64,
    pub wigner: f64,
    pub bl: f64,
    pub larmor_y: f64,
    pub larmor_z: f64,
    pub larmor_total: f64,
    /// Free-particle traversal time of the same distance, d / (hbar k / m).
    pub reference: f64,
    /// wigner - reference; negative means the tunneling particle beats the
    /// free one.
    pub relative_delay: f64,
}

pub fn delay_report(b: &RectangularBarrier) -> Result<DelayReport> {
    let wigner = wigner_time(b);
    let bl = bl_time(b)?;
    let larmor = larmor_times(b);
    let reference = b.width / b.free_speed();
    Ok(DelayReport {
        width: b.width,
        energy: b.energy,
        height: b.height,
        wigner,
        bl,
        larmor_y: larmor.y,
        larmor_z: larmor.z,
        larmor_total: larmor.total,
        reference,
        relative_delay: wigner - reference,
    })
}

/// Sweep the barrier width at fixed energy and height: the Hartman-effect
/// scan (Wigner time saturates, BL time grows linearly).
pub fn hartman_scan(template: &RectangularBarrier, widths: &[f64]) -> Result<Vec<DelayReport>> {
    if widths.is_empty() {
        return Err(Error::invalid("width scan needs at least one value"));
    }
    for pair in widths.windows(2) {
        if pair[1] <= pair[0] {
            return Err(Error::invalid("width scan must be strictly increasing"));
        }
    }
    widths
        .iter()
        .map(|&d| delay_report(&template.with_width(d)?))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn half_energy_barrier(kd: f64) -> RectangularBarrier {
        // V0 = 1, E = 1/2 in natural units gives kappa = k = 1
        RectangularBarrier::new(1.0, kd, 0.5).unwrap()
    }

    #[test]
    fn transmission_probability_is_sech_squared_at_half_energy() {
        let b = half_energy_barrier(1.0);
        let t = barrier_amplitude(&b);
        let expected = 1.0 / f64::cosh(1.0).powi(2);
        assert_relative_eq!(t.norm_sqr(), expected, max_relative = 1e-12);
        assert_relative_eq!(t.norm_sqr(), 0.420, max_relative = 1e-3);
    }

    #[test]
    fn no_barrier_limit() {
        let b = RectangularBarrier::new(1.0, 1e-9, 0.5).unwrap();
        let t = barrier_amplitude(&b);
        assert!((t - Complex64::new(1.0, 0.0)).norm() < 1e-8);
    }

    #[test]
    fn over_barrier_resonance_is_fully_transmitting() {
        // k' d = pi with k' = sqrt(2 (E - V0))
        let e = 2.0;
        let kp = (2.0f64 * (e - 1.0)).sqrt();
        let b = RectangularBarrier::new(1.0, std::f64::consts::PI / kp, e).unwrap();
        assert_relative_eq!(barrier_amplitude(&b).norm_sqr(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn unitarity_across_regimes() {
        for (v0, e, d) in [
            (1.0, 0.5, 3.0),
            (1.0, 0.9, 0.7),
            (2.0, 1.9999, 5.0),
            (1.0, 1.0, 2.0),
            (1.0, 1.7, 4.0),
            (5.0, 0.01, 1.0),
        ] {
            let b = RectangularBarrier::new(v0, d, e).unwrap();
            let t = barrier_amplitude(&b);
            let r = reflection_amplitude(&b);
            assert!(
                (t.norm_sqr() + r.norm_sqr() - 1.0).abs() < 1e-12,
                "V0={v0} E={e} d={d}"
            );
        }
    }

    #[test]
    fn wigner_time_saturates_at_uncertainty_limit() {
        // Hartman effect: at E = V0/2 the opaque limit is hbar/(V0 - E)
        let b = half_energy_barrier(10.0);
        let limit = 1.0 / (1.0 - 0.5);
        let tau = wigner_time(&b);
        assert!(
            (tau - limit).abs() / limit < 0.02,
            "tau = {tau}, limit = {limit}"
        );
    }

    #[test]
    fn wigner_time_vanishes_with_width() {
        let b = half_energy_barrier(1e-5);
        assert!(wigner_time(&b).abs() < 1e-4);
    }

    #[test]
    fn wigner_bounded_while_free_time_grows() {
        let taus: Vec<f64> = [5.0, 10.0, 20.0, 40.0]
            .iter()
            .map(|&d| wigner_time(&half_energy_barrier(d)))
            .collect();
        // saturation: last two essentially equal
        assert_relative_eq!(taus[2], taus[3], max_relative = 1e-6);
        let b = half_energy_barrier(40.0);
        assert!(40.0 / b.free_speed() > 10.0 * taus[3]);
    }

    #[test]
    fn bl_time_direct_substitution() {
        let b = half_energy_barrier(10.0);
        assert_relative_eq!(bl_time(&b).unwrap(), 10.0, epsilon = 1e-12);
    }

    #[test]
    fn bl_time_linear_in_width() {
        let b1 = half_energy_barrier(3.7);
        let b2 = half_energy_barrier(7.4);
        assert_relative_eq!(
            bl_time(&b2).unwrap(),
            2.0 * bl_time(&b1).unwrap(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn bl_time_diverges_and_rejects_over_barrier() {
        let near = RectangularBarrier::new(1.0, 1.0, 1.0 - 1e-12).unwrap();
        assert!(bl_time(&near).unwrap() > 1e5);
        let over = RectangularBarrier::new(1.0, 1.0, 1.5).unwrap();
        assert!(bl_time(&over).is_err());
        let at = RectangularBarrier::new(1.0, 1.0, 1.0).unwrap();
        assert!(bl_time(&at).is_err());
    }

    #[test]
    fn larmor_approaches_bl_for_opaque_barriers() {
        let b = half_energy_barrier(10.0);
        let larmor = larmor_times(&b);
        let bl = bl_time(&b).unwrap();
        assert!(
            (larmor.total - bl).abs() / bl < 0.05,
            "larmor {} vs bl {bl}",
            larmor.total
        );
    }

    #[test]
    fn larmor_reduces_to_free_traversal_for_thin_barriers() {
        // small-width expansion of the defining derivatives: tau_y -> d/v_free
        // (linear in d) and tau_z -> m d^2/hbar, so the quadrature total is
        // the free traversal time to first order
        for kd in [0.05, 0.10] {
            let b = half_energy_barrier(kd);
            let l = larmor_times(&b);
            let free = b.width() / b.free_speed();
            assert_relative_eq!(l.total, free, max_relative = 5e-3);
        }
        let thin = larmor_times(&half_energy_barrier(0.05));
        let doubled = larmor_times(&half_energy_barrier(0.10));
        assert_relative_eq!(doubled.total, 2.0 * thin.total, max_relative = 5e-3);
    }

    #[test]
    fn larmor_total_dominates_components() {
        for kd in [0.1, 1.0, 3.0, 10.0] {
            let l = larmor_times(&half_energy_barrier(kd));
            assert!(l.total >= l.y.abs() - 1e-15);
            assert!(l.total >= l.z.abs() - 1e-15);
        }
    }

    #[test]
    fn wigner_continuous_across_degeneracy() {
        let v0 = 1.0;
        let eps = 1e-7;
        let below = wigner_time(&RectangularBarrier::new(v0, 2.0, v0 * (1.0 - eps)).unwrap());
        let at = wigner_time(&RectangularBarrier::new(v0, 2.0, v0).unwrap());
        let above = wigner_time(&RectangularBarrier::new(v0, 2.0, v0 * (1.0 + eps)).unwrap());
        assert_relative_eq!(below, at, max_relative = 1e-5);
        assert_relative_eq!(above, at, max_relative = 1e-5);
    }

    #[test]
    fn hartman_scan_saturation_vs_linearity() {
        let template = half_energy_barrier(1.0);
        let widths: Vec<f64> = (1..=20).map(|i| i as f64).collect();
        let reports = hartman_scan(&template, &widths).unwrap();
        let n = reports.len();
        let (w_last, w_prev) = (reports[n - 1].wigner, reports[n - 2].wigner);
        assert!((w_last - w_prev).abs() / w_prev < 0.01);
        assert_relative_eq!(
            reports[n - 1].bl / reports[n - 2].bl,
            widths[n - 1] / widths[n - 2],
            epsilon = 1e-12
        );
        // apparent superluminality: relative delay goes negative and stays
        let first_negative = reports.iter().position(|r| r.relative_delay < 0.0);
        let idx = first_negative.expect("relative delay should turn negative");
        assert!(reports[idx..].iter().all(|r| r.relative_delay < 0.0));
    }

    #[test]
    fn singleton_scan_matches_individual_calls() {
        let template = half_energy_barrier(1.0);
        let reports = hartman_scan(&template, &[4.0]).unwrap();
        assert_eq!(reports.len(), 1);
        let direct = delay_report(&template.with_width(4.0).unwrap()).unwrap();
        assert_eq!(reports[0], direct);
    }

    #[test]
    fn scan_rejects_non_increasing_widths() {
        let template = half_energy_barrier(1.0);
        assert!(hartman_scan(&template, &[2.0, 2.0]).is_err());
        assert!(hartman_scan(&template, &[]).is_err());
    }

    #[test]
    fn richardson_step_halving_stability() {
        let b = half_energy_barrier(3.0);
        let e = b.energy();
        let f = |x: f64| amplitudes(x, b.height(), b.width(), b.hbar(), b.mass()).0;
        let h = numdiff::step_for(e);
        let d1 = numdiff::phase_derivative(f, e, h);
        let d2 = numdiff::phase_derivative(f, e, h / 2.0);
        assert_relative_eq!(d1, d2, max_relative = 1e-6);
    }

    #[test]
    fn explicit_units_scale_consistently() {
        // same E/V0 and same kappa*d must give the same |t|^2:
        // natural kappa = 1 (d = 2), scaled kappa = sqrt(2*8*0.5)/2 = sqrt(2)
        // so d = sqrt(2) reproduces kappa*d = 2
        let natural = half_energy_barrier(2.0);
        let scaled =
            RectangularBarrier::with_units(1.0, 2.0 / 2.0f64.sqrt(), 0.5, 2.0, 8.0).unwrap();
        assert_relative_eq!(
            barrier_amplitude(&scaled).norm_sqr(),
            barrier_amplitude(&natural).norm_sqr(),
            max_relative = 1e-12
        );
    }
}
