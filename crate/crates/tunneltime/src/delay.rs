//! Tunneling-time calculators for photonic stacks.
//!
//! The Wigner (phase) transit time is the frequency derivative of the
//! transmission phase, `d(arg t)/d(omega)`, referenced entry plane to exit
//! plane; compared against the vacuum traversal time `D/c` of the same
//! thickness it yields the relative delay that the coincidence experiment
//! measures (negative = the tunneling photon arrives early).
//!
//! The Buettiker-Landauer analogue for a periodic stack comes from the
//! Bloch dispersion of the infinite crystal built from the stack's unit
//! cell: inside a stop band the Bloch wavevector is `pi/Lambda + i kappa_B`
//! and the magnitude of the complex group velocity is `1/|d kappa_B/d
//! omega|`, so `tau_BL = D |d kappa_B/d omega|`. At exact midgap of a
//! quarter-wave stack `kappa_B` is stationary and the time vanishes (the
//! "infinite effective velocity" prediction).
//!
//! The Larmor analogue combines the two components of the logarithmic
//! frequency derivative of `t` in quadrature: `tau_y = d(arg t)/d(omega)`
//! (precession), `tau_z = d(ln|t|)/d(omega)` (alignment). At a stationary
//! minimum of |t| (midgap) it coincides with the Wigner time; near a band
//! edge the alignment component makes it diverge from it.

use crate::error::{Error, Result};
use crate::numdiff;
use crate::optics::{half_trace_unit_cell, Incidence, Layer, LayerStack, Polarization};
use crate::qm::LarmorTimes;
use crate::units::C_NM_PER_FS;

/// |t| below which phase derivatives are meaningless (a true transmission
/// zero has no defined phase).
const MIN_AMPLITUDE: f64 = 1e-14;

/// Tunneling times of one stack at one probe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhotonicDelayReport {
    /// Wigner transit time through the stack, fs.
    pub transit_fs: f64,
    /// Vacuum traversal time of the same thickness, total_thickness/c, fs.
    pub vacuum_fs: f64,
    /// transit - vacuum; negative iff effectively superluminal.
    pub relative_fs: f64,
    /// total_thickness / (c * transit), in multiples of c.
    pub velocity_over_c: f64,
    /// Buettiker-Landauer time from the Bloch dispersion; `None` when the
    /// probe is outside the stop band (or the stack has no layers).
    pub bl_fs: Option<f64>,
    /// Quadrature Larmor-analogue time, fs.
    pub larmor_total_fs: f64,
    pub flux_transmission: f64,
}

/// Wigner transit time and companions for a stack at a given incidence.
pub fn photonic_wigner(stack: &LayerStack, inc: &Incidence) -> Result<PhotonicDelayReport> {
    let omega = inc.omega();
    let angle = inc.angle_rad();
    let pol = inc.polarization();

    let resp = stack.response_at_omega(omega, angle, pol);
    if resp.t.norm() < MIN_AMPLITUDE {
        return Err(Error::UnreliableDelay {
            amplitude: resp.t.norm(),
        });
    }

    let h = numdiff::step_for(omega);
    let log_d = numdiff::log_derivative(
        |w| stack.response_at_omega(w, angle, pol).t,
        omega,
        h,
    );
    let transit = log_d.im;
    let larmor_total = log_d.im.hypot(log_d.re);

    let thickness = stack.total_thickness_nm();
    let vacuum = thickness / C_NM_PER_FS;
    Ok(PhotonicDelayReport {
        transit_fs: transit,
        vacuum_fs: vacuum,
        relative_fs: transit - vacuum,
        velocity_over_c: thickness / (C_NM_PER_FS * transit),
        bl_fs: photonic_bl_time(stack, inc).ok(),
        larmor_total_fs: larmor_total,
        flux_transmission: resp.flux_transmission,
    })
}

/// Buettiker-Landauer time for a periodic stack:
/// total thickness times |d kappa_Bloch / d omega| inside the stop band.
pub fn photonic_bl_time(stack: &LayerStack, inc: &Incidence) -> Result<f64> {
    let cell = unit_cell(stack.layers()).ok_or_else(|| {
        Error::OutsideStopBand("stack has no layers, so no Bloch dispersion".into())
    })?;
    let cell_thickness: f64 = cell.iter().map(|l| l.thickness_nm()).sum();
    if cell_thickness <= 0.0 {
        return Err(Error::OutsideStopBand(
            "unit cell has zero optical thickness".into(),
        ));
    }
    let transverse = stack.ambient().index() * inc.angle_rad().sin();
    let pol = inc.polarization();
    let omega = inc.omega();

    let half_trace = |w: f64| half_trace_unit_cell(cell, w, transverse, pol).re;
    if half_trace(omega).abs() <= 1.0 {
        return Err(Error::OutsideStopBand(format!(
            "|trace|/2 = {:.6} <= 1 at the probe frequency",
            half_trace(omega).abs()
        )));
    }

    // kappa_B = acosh(|trace/2|)/Lambda; shrink the step if the band edge is
    // closer than the default step.
    let mut h = numdiff::step_for(omega);
    for _ in 0..8 {
        if half_trace(omega + h).abs() > 1.0 && half_trace(omega - h).abs() > 1.0 {
            let kappa = |w: f64| half_trace(w).abs().acosh() / cell_thickness;
            let dk = (kappa(omega + h) - kappa(omega - h)) / (2.0 * h);
            return Ok(stack.total_thickness_nm() * dk.abs());
        }
        h *= 0.01;
    }
    Err(Error::OutsideStopBand(
        "probe is too close to a band edge for a stable Bloch derivative".into(),
    ))
}

/// Larmor-analogue triple from the logarithmic frequency derivative of t.
pub fn photonic_larmor(stack: &LayerStack, inc: &Incidence) -> Result<LarmorTimes> {
    let omega = inc.omega();
    let angle = inc.angle_rad();
    let pol = inc.polarization();
    let resp = stack.response_at_omega(omega, angle, pol);
    if resp.t.norm() < MIN_AMPLITUDE {
        return Err(Error::UnreliableDelay {
            amplitude: resp.t.norm(),
        });
    }
    let log_d = numdiff::log_derivative(
        |w| stack.response_at_omega(w, angle, pol).t,
        omega,
        numdiff::step_for(omega),
    );
    let y = log_d.im;
    let z = log_d.re;
    Ok(LarmorTimes {
        y,
        z,
        total: y.hypot(z),
    })
}

/// One row of an incidence-angle scan.
#[derive(Debug)]
pub struct AngleScanPoint {
    pub theta_rad: f64,
    pub report: Result<PhotonicDelayReport>,
}

/// Delay reports across incidence angles at a fixed wavelength. Failing
/// points are recorded and the scan continues.
pub fn angle_scan(
    stack: &LayerStack,
    lambda_nm: f64,
    pol: Polarization,
    theta_values_rad: &[f64],
) -> Vec<AngleScanPoint> {
    theta_values_rad
        .iter()
        .map(|&theta| AngleScanPoint {
            theta_rad: theta,
            report: Incidence::new(lambda_nm, theta, pol)
                .and_then(|inc| photonic_wigner(stack, &inc)),
        })
        .collect()
}

/// Stop-band edges of the infinite periodic crystal built from the stack's
/// unit cell: the |trace|/2 = 1 crossings bracketing the probe wavelength,
/// located by bisection. Returns (long, short) edge wavelengths in nm.
pub fn bloch_stop_band(
    stack: &LayerStack,
    inc: &Incidence,
) -> Result<(f64, f64)> {
    let cell = unit_cell(stack.layers()).ok_or_else(|| {
        Error::OutsideStopBand("stack has no layers, so no Bloch dispersion".into())
    })?;
    let transverse = stack.ambient().index() * inc.angle_rad().sin();
    let pol = inc.polarization();
    let gap_strength = |w: f64| half_trace_unit_cell(cell, w, transverse, pol).re.abs() - 1.0;

    let omega0 = inc.omega();
    if gap_strength(omega0) <= 0.0 {
        return Err(Error::OutsideStopBand(
            "probe frequency is not inside a stop band".into(),
        ));
    }
    let bisect = |mut inside: f64, mut outside: f64| -> f64 {
        for _ in 0..200 {
            let mid = 0.5 * (inside + outside);
            if gap_strength(mid) > 0.0 {
                inside = mid;
            } else {
                outside = mid;
            }
        }
        0.5 * (inside + outside)
    };
    // march outward until the band is left, then bisect back
    let step = omega0 * 1e-3;
    let mut low = omega0;
    while gap_strength(low - step) > 0.0 {
        low -= step;
        if low <= step {
            return Err(Error::OutsideStopBand("no lower band edge found".into()));
        }
    }
    let mut high = omega0;
    while gap_strength(high + step) > 0.0 {
        high += step;
        if high > 100.0 * omega0 {
            return Err(Error::OutsideStopBand("no upper band edge found".into()));
        }
    }
    let omega_low = bisect(low, low - step);
    let omega_high = bisect(high, high + step);
    Ok((
        crate::units::wavelength_from_omega(omega_low),
        crate::units::wavelength_from_omega(omega_high),
    ))
}

/// Smallest leading period of the layer list: the shortest prefix `p` such
/// that `layers[i] == layers[i mod p]` for all `i`. Falls back to the whole
/// stack (one period). `None` for an empty list.
fn unit_cell(layers: &[Layer]) -> Option<&[Layer]> {
    if layers.is_empty() {
        return None;
    }
    for p in 1..layers.len() {
        if layers.iter().enumerate().all(|(i, l)| *l == layers[i % p]) {
            return Some(&layers[..p]);
        }
    }
    Some(layers)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optics::Medium;
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

    fn probe() -> Incidence {
        Incidence::normal(702.0, Polarization::S).unwrap()
    }

    #[test]
    fn berkeley_wigner_prediction() {
        let report = photonic_wigner(&berkeley(), &probe()).unwrap();
        assert!(
            (report.transit_fs - 2.0).abs() < 0.4,
            "transit {}",
            report.transit_fs
        );
        assert!((report.vacuum_fs - 3.6).abs() < 0.2, "vacuum {}", report.vacuum_fs);
        assert!(
            report.velocity_over_c > 1.5 && report.velocity_over_c < 2.2,
            "v_eff {}c",
            report.velocity_over_c
        );
        assert!(report.relative_fs < 0.0);
    }

    #[test]
    fn report_identities_hold_exactly() {
        let report = photonic_wigner(&berkeley(), &probe()).unwrap();
        let d = berkeley().total_thickness_nm();
        assert_eq!(report.relative_fs, report.transit_fs - report.vacuum_fs);
        assert_eq!(report.vacuum_fs, d / C_NM_PER_FS);
        assert_eq!(
            report.velocity_over_c,
            d / (C_NM_PER_FS * report.transit_fs)
        );
        assert_eq!(report.relative_fs < 0.0, report.velocity_over_c > 1.0);
    }

    #[test]
    fn near_unity_slab_travels_at_c() {
        let n = Medium::new(1.0 + 1e-6).unwrap();
        let slab = LayerStack::new(
            Medium::vacuum(),
            vec![Layer::new(n, 5000.0).unwrap()],
            Medium::vacuum(),
        );
        let report = photonic_wigner(&slab, &probe()).unwrap();
        assert_relative_eq!(
            report.transit_fs,
            5000.0 / C_NM_PER_FS,
            max_relative = 1e-4
        );
    }

    #[test]
    fn coated_beats_uncoated_at_normal_incidence() {
        // the uncoated control is a bare air->glass interface: zero-thickness,
        // frequency-flat transmission, so its Wigner time is zero
        let bare = LayerStack::bare_interface(Medium::vacuum(), Medium::new(1.45).unwrap());
        let bare_report = photonic_wigner(&bare, &probe()).unwrap();
        assert!(bare_report.transit_fs.abs() < 1e-9);
        let coated = photonic_wigner(&berkeley(), &probe()).unwrap();
        // coated transit minus the vacuum time of the coating footprint
        assert!(coated.relative_fs < 0.0);
    }

    #[test]
    fn bl_time_vanishes_at_midgap() {
        let midgap = Incidence::normal(700.0, Polarization::S).unwrap();
        let tau = photonic_bl_time(&berkeley(), &midgap).unwrap();
        assert!(tau.abs() < 1e-3, "midgap BL time {tau}");
    }

    #[test]
    fn bl_time_grows_toward_band_edge() {
        let stack = berkeley();
        let mut last = 0.0;
        for lambda in [710.0, 730.0, 760.0] {
            let inc = Incidence::normal(lambda, Polarization::S).unwrap();
            let tau = photonic_bl_time(&stack, &inc).unwrap();
            assert!(tau > last, "tau({lambda}) = {tau} not > {last}");
            last = tau;
        }
    }

    #[test]
    fn bl_time_doubles_with_period_count() {
        let ten = LayerStack::quarter_wave(
            700.0,
            2.22,
            1.45,
            10,
            Medium::vacuum(),
            Medium::new(1.45).unwrap(),
        )
        .unwrap();
        let twenty = LayerStack::quarter_wave(
            700.0,
            2.22,
            1.45,
            20,
            Medium::vacuum(),
            Medium::new(1.45).unwrap(),
        )
        .unwrap();
        let inc = Incidence::normal(730.0, Polarization::S).unwrap();
        let a = photonic_bl_time(&ten, &inc).unwrap();
        let b = photonic_bl_time(&twenty, &inc).unwrap();
        assert_relative_eq!(b, 2.0 * a, max_relative = 1e-10);
    }

    #[test]
    fn bl_time_rejects_outside_stop_band() {
        let inc = Incidence::normal(900.0, Polarization::S).unwrap();
        assert!(matches!(
            photonic_bl_time(&berkeley(), &inc),
            Err(Error::OutsideStopBand(_))
        ));
        let empty = LayerStack::bare_interface(Medium::vacuum(), Medium::vacuum());
        assert!(photonic_bl_time(&empty, &probe()).is_err());
        // a single homogeneous slab has no stop band at all
        let slab = LayerStack::new(
            Medium::vacuum(),
            vec![Layer::new(Medium::new(1.45).unwrap(), 500.0).unwrap()],
            Medium::vacuum(),
        );
        assert!(photonic_bl_time(&slab, &probe()).is_err());
    }

    #[test]
    fn larmor_matches_wigner_at_midgap() {
        let midgap = Incidence::normal(700.0, Polarization::S).unwrap();
        let stack = berkeley();
        let larmor = photonic_larmor(&stack, &midgap).unwrap();
        let report = photonic_wigner(&stack, &midgap).unwrap();
        // |t| is stationary at midgap, so the alignment component vanishes
        assert!(larmor.z.abs() < 1e-6 * larmor.y.abs());
        assert_relative_eq!(larmor.total, report.transit_fs, max_relative = 1e-6);
    }

    #[test]
    fn larmor_diverges_from_wigner_near_band_edge() {
        let stack = berkeley();
        let edge = Incidence::normal(790.0, Polarization::S).unwrap();
        let larmor = photonic_larmor(&stack, &edge).unwrap();
        let report = photonic_wigner(&stack, &edge).unwrap();
        assert!(
            larmor.total > 1.5 * report.transit_fs.abs(),
            "larmor {} vs wigner {}",
            larmor.total,
            report.transit_fs
        );
        assert!(larmor.total >= larmor.y.abs());
        assert!(larmor.total >= larmor.z.abs());
    }

    #[test]
    fn angle_scan_brewster_reversal() {
        let stack = berkeley();
        let thetas = [0.0, 55.0f64.to_radians()];
        let points = angle_scan(&stack, 702.0, Polarization::P, &thetas);
        assert_eq!(points.len(), 2);
        let at_normal = points[0].report.as_ref().unwrap();
        let at_55 = points[1].report.as_ref().unwrap();
        assert!(at_normal.relative_fs < 0.0);
        assert!(at_55.relative_fs > 0.0);
        assert!(at_55.flux_transmission > at_normal.flux_transmission);
    }

    #[test]
    fn richardson_consistency_for_transit_time() {
        let stack = berkeley();
        let omega = probe().omega();
        let f = |w: f64| stack.response_at_omega(w, 0.0, Polarization::S).t;
        let h = numdiff::step_for(omega);
        let d1 = numdiff::phase_derivative(f, omega, h);
        let d2 = numdiff::phase_derivative(f, omega, h / 2.0);
        assert_relative_eq!(d1, d2, max_relative = 1e-6);
    }

    #[test]
    fn hartman_saturation_in_period_count() {
        let glass = Medium::new(1.45).unwrap();
        let mut transits = Vec::new();
        let mut first_negative = None;
        for layers in (3..=15).step_by(2) {
            let stack =
                LayerStack::quarter_wave(700.0, 2.22, 1.45, layers, Medium::vacuum(), glass)
                    .unwrap();
            let inc = Incidence::normal(700.0, Polarization::S).unwrap();
            let report = photonic_wigner(&stack, &inc).unwrap();
            if report.relative_fs < 0.0 && first_negative.is_none() {
                first_negative = Some(layers);
            }
            if first_negative.is_some() {
                assert!(report.relative_fs < 0.0, "N = {layers} went positive again");
            }
            transits.push(report.transit_fs);
        }
        let n = transits.len();
        assert!(
            (transits[n - 1] - transits[n - 2]).abs() / transits[n - 2] < 0.05,
            "transit not saturating: {transits:?}"
        );
        assert!(first_negative.is_some(), "relative delay never went negative");
    }

    #[test]
    fn true_transmission_zero_is_flagged_unreliable() {
        // 101 quarter-wave layers attenuate midgap |t| below 1e-14, where
        // the transmission phase (and so the delay) is numerically undefined
        let opaque = LayerStack::quarter_wave(
            700.0,
            2.22,
            1.45,
            101,
            Medium::vacuum(),
            Medium::new(1.45).unwrap(),
        )
        .unwrap();
        let inc = Incidence::normal(700.0, Polarization::S).unwrap();
        assert!(matches!(
            photonic_wigner(&opaque, &inc),
            Err(Error::UnreliableDelay { .. })
        ));
        assert!(matches!(
            photonic_larmor(&opaque, &inc),
            Err(Error::UnreliableDelay { .. })
        ));
    }

    #[test]
    fn bloch_stop_band_matches_closed_form() {
        // closed form for a quarter-wave cell: the edges satisfy
        // sin^2(delta) = 2/(1 + gamma) with gamma = (nH/nL + nL/nH)/2,
        // delta = (pi/2)(omega/omega0)
        let gamma = (2.22f64 / 1.45 + 1.45 / 2.22) / 2.0;
        let delta_edge = (2.0 / (1.0 + gamma)).sqrt().asin();
        let expected_long = 700.0 / (delta_edge / std::f64::consts::FRAC_PI_2);
        let expected_short =
            700.0 / ((std::f64::consts::PI - delta_edge) / std::f64::consts::FRAC_PI_2);

        let (long, short) = bloch_stop_band(&berkeley(), &probe()).unwrap();
        assert_relative_eq!(long, expected_long, epsilon = 1e-6);
        assert_relative_eq!(short, expected_short, epsilon = 1e-6);
        // these are the stop-band boundaries quoted as ~800 and ~600 nm
        assert!((long - 800.0).abs() < 30.0, "long {long}");
        assert!((short - 600.0).abs() < 30.0, "short {short}");

        let outside = Incidence::normal(900.0, Polarization::S).unwrap();
        assert!(bloch_stop_band(&berkeley(), &outside).is_err());
    }

    #[test]
    fn unit_cell_detection() {
        let stack = berkeley();
        let cell = unit_cell(stack.layers()).unwrap();
        assert_eq!(cell.len(), 2);
        let aperiodic = [
            Layer::new(Medium::new(1.5).unwrap(), 100.0).unwrap(),
            Layer::new(Medium::new(2.0).unwrap(), 130.0).unwrap(),
            Layer::new(Medium::new(1.7).unwrap(), 90.0).unwrap(),
        ];
        assert_eq!(unit_cell(&aperiodic).unwrap().len(), 3);
        assert!(unit_cell(&[]).is_none());
    }
}
