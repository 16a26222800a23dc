//! One-dimensional time-domain propagation through a stack: an independent
//! check on the frequency-domain delays, and the demonstration that the
//! pulse *front* never outruns c even when the peak does.
//!
//! The solver is a staggered-grid (Yee) leapfrog for the 1D curl equations
//! with piecewise-constant permittivity `eps(z) = n(z)^2`, sampled by exact
//! cell averaging so layer boundaries need not fall on grid lines. The
//! source is a one-point total-field/scattered-field injection (rightward
//! only, transparent to returning reflections); boundaries are first-order
//! Mur absorbers, which at the default magic time step `c dt = dz` are
//! *exact* in vacuum. Signals on the grid travel at most one cell per step,
//! i.e. at most c: the causality the acceptance check probes is built into
//! the discretization, as it is into the wave equation.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::optics::LayerStack;
use crate::units::C_NM_PER_FS;

/// Excitation waveform launched toward the stack.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Source {
    /// Carrier sine under a Gaussian envelope with the given intensity FWHM.
    GaussianPulse { wavelength_nm: f64, fwhm_fs: f64 },
    /// Zero until the turn-on time, a pure sine afterwards: the sharp front.
    SharpFront { wavelength_nm: f64 },
}

impl Source {
    pub fn wavelength_nm(&self) -> f64 {
        match self {
            Source::GaussianPulse { wavelength_nm, .. } => *wavelength_nm,
            Source::SharpFront { wavelength_nm } => *wavelength_nm,
        }
    }

    pub fn carrier_period_fs(&self) -> f64 {
        self.wavelength_nm() / C_NM_PER_FS
    }

    fn omega(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.carrier_period_fs()
    }

    /// Envelope sigma of the field, fs (Gaussian only).
    fn sigma_fs(&self) -> Option<f64> {
        match self {
            Source::GaussianPulse { fwhm_fs, .. } => Some(fwhm_fs / (2.0 * f64::sqrt(2.0f64.ln()))),
            Source::SharpFront { .. } => None,
        }
    }

    /// Highest angular frequency carrying significant source power, rad/fs.
    fn band_max_omega(&self) -> f64 {
        match self.sigma_fs() {
            Some(sigma) => self.omega() + 4.0 / sigma,
            None => self.omega(),
        }
    }

    fn waveform(&self, t_fs: f64) -> f64 {
        match self {
            Source::GaussianPulse { .. } => {
                let sigma = self.sigma_fs().expect("gaussian");
                let t0 = 5.0 * sigma;
                let u = t_fs - t0;
                (-u * u / (2.0 * sigma * sigma)).exp() * (self.omega() * u).sin()
            }
            Source::SharpFront { .. } => {
                let t_on = 2.0;
                if t_fs < t_on {
                    0.0
                } else {
                    (self.omega() * (t_fs - t_on)).sin()
                }
            }
        }
    }

    fn lead_time_fs(&self) -> f64 {
        match self.sigma_fs() {
            Some(sigma) => 5.0 * sigma,
            None => 2.0,
        }
    }

    fn tail_time_fs(&self) -> f64 {
        match self.sigma_fs() {
            Some(sigma) => 8.0 * sigma,
            None => 40.0,
        }
    }
}

/// Grid construction parameters. `spatial_step_nm: None` picks the step from
/// the resolution target and the source band.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub spatial_step_nm: Option<f64>,
    /// c dt / dz; must be in (0, 1]. The default 1 ("magic step") makes
    /// vacuum propagation exact.
    pub courant: f64,
    /// Minimum accepted points per shortest in-medium wavelength.
    pub points_per_wavelength: f64,
    /// Vacuum gap between each monitor and the stack face, nm.
    pub monitor_gap_nm: f64,
    /// Padding between source/monitors and the absorbing boundaries, nm.
    pub pad_nm: f64,
    pub duration_fs: Option<f64>,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            spatial_step_nm: None,
            courant: 1.0,
            points_per_wavelength: 40.0,
            monitor_gap_nm: 500.0,
            pad_nm: 1500.0,
            duration_fs: None,
        }
    }
}

/// A realized simulation grid: permittivity profile, step sizes, monitor
/// and source positions.
#[derive(Debug, Clone)]
pub struct Grid1D {
    pub dz_nm: f64,
    pub dt_fs: f64,
    pub steps: usize,
    eps: Vec<f64>,
    source_idx: usize,
    entry_idx: usize,
    exit_idx: usize,
    ambient_index: f64,
    substrate_index: f64,
}

impl Grid1D {
    /// Build a grid for `stack` and `source`, validating the Courant number
    /// and the sampling resolution.
    pub fn build(stack: &LayerStack, source: &Source, spec: &GridSpec) -> Result<Self> {
        if !(spec.courant > 0.0 && spec.courant <= 1.0) {
            return Err(Error::invalid(format!(
                "courant number must lie in (0, 1], got {}",
                spec.courant
            )));
        }
        let n_max = stack
            .layers()
            .iter()
            .map(|l| l.medium().index())
            .chain([stack.ambient().index(), stack.substrate().index()])
            .fold(1.0f64, f64::max);
        let lambda_min_medium =
            2.0 * std::f64::consts::PI * C_NM_PER_FS / source.band_max_omega() / n_max;
        let dz = match spec.spatial_step_nm {
            Some(dz) => {
                if !(dz > 0.0) {
                    return Err(Error::invalid("spatial step must be > 0"));
                }
                if lambda_min_medium / dz < spec.points_per_wavelength {
                    return Err(Error::invalid(format!(
                        "spatial step {dz} nm gives {:.1} points per shortest in-medium wavelength ({lambda_min_medium:.1} nm); need >= {}",
                        lambda_min_medium / dz,
                        spec.points_per_wavelength
                    )));
                }
                dz
            }
            None => lambda_min_medium / (1.2 * spec.points_per_wavelength),
        };
        let dt = spec.courant * dz / C_NM_PER_FS;

        let thickness = stack.total_thickness_nm();
        let source_z = spec.pad_nm;
        let entry_z = source_z + spec.pad_nm;
        let stack_start = entry_z + spec.monitor_gap_nm;
        let exit_z = stack_start + thickness + 2.0 * dz;
        let total_z = exit_z + spec.pad_nm;

        let cells = (total_z / dz).ceil() as usize + 1;
        let source_idx = (source_z / dz).round() as usize;
        let entry_idx = (entry_z / dz).round() as usize;
        let exit_idx = (exit_z / dz).round() as usize;

        // cell-averaged permittivity of the piecewise-constant profile
        let mut breakpoints: Vec<(f64, f64)> = Vec::new();
        let mut z = stack_start;
        breakpoints.push((f64::NEG_INFINITY, stack.ambient().index().powi(2)));
        for layer in stack.layers() {
            breakpoints.push((z, layer.medium().index().powi(2)));
            z += layer.thickness_nm();
        }
        breakpoints.push((z, stack.substrate().index().powi(2)));
        let eps = (0..cells)
            .map(|i| {
                let lo = i as f64 * dz - dz / 2.0;
                let hi = lo + dz;
                average_piecewise(&breakpoints, lo, hi)
            })
            .collect();

        let travel_fs = total_z * n_max / C_NM_PER_FS;
        let duration = spec
            .duration_fs
            .unwrap_or(source.lead_time_fs() + travel_fs + source.tail_time_fs() + 20.0);
        let steps = (duration / dt).ceil() as usize;

        Ok(Grid1D {
            dz_nm: dz,
            dt_fs: dt,
            steps,
            eps,
            source_idx,
            entry_idx,
            exit_idx,
            ambient_index: stack.ambient().index(),
            substrate_index: stack.substrate().index(),
        })
    }

    pub fn monitor_separation_nm(&self) -> f64 {
        (self.exit_idx - self.entry_idx) as f64 * self.dz_nm
    }
}

/// Mean of a piecewise-constant function over [lo, hi]. `pieces` holds
/// (start, value) with ascending starts, first start at -infinity.
fn average_piecewise(pieces: &[(f64, f64)], lo: f64, hi: f64) -> f64 {
    let mut sum = 0.0;
    for (k, &(start, value)) in pieces.iter().enumerate() {
        let end = pieces.get(k + 1).map_or(f64::INFINITY, |p| p.0);
        let a = start.max(lo);
        let b = end.min(hi);
        if b > a {
            sum += value * (b - a);
        }
    }
    sum / (hi - lo)
}

/// Field time series at the entry- and exit-plane monitors, plus the net
/// rightward energy flux through each.
#[derive(Debug, Clone)]
pub struct ProbeRecord {
    pub dt_fs: f64,
    pub carrier_period_fs: f64,
    pub entry_field: Vec<f64>,
    pub exit_field: Vec<f64>,
    /// Time-integrated Poynting flux through the monitors (arbitrary units,
    /// comparable between runs on the same grid).
    pub entry_flux: f64,
    pub exit_flux: f64,
    pub monitor_separation_nm: f64,
}

/// Propagate `source` through `stack` on the given grid configuration.
pub fn propagate(stack: &LayerStack, source: &Source, spec: &GridSpec) -> Result<ProbeRecord> {
    let grid = Grid1D::build(stack, source, spec)?;
    propagate_on_grid(&grid, source)
}

/// Run barrier and vacuum-reference simulations on one identical grid
/// (the reference replaces the whole profile by n = 1). Discretization
/// errors then cancel in delay differences.
pub fn run_with_vacuum_reference(
    stack: &LayerStack,
    source: &Source,
    spec: &GridSpec,
) -> Result<(ProbeRecord, ProbeRecord)> {
    let grid = Grid1D::build(stack, source, spec)?;
    let mut vacuum_grid = grid.clone();
    vacuum_grid.eps.iter_mut().for_each(|e| *e = 1.0);
    vacuum_grid.ambient_index = 1.0;
    vacuum_grid.substrate_index = 1.0;

    let (a, b) = std::thread::scope(|scope| {
        let main = scope.spawn(|| propagate_on_grid(&grid, source));
        let reference = propagate_on_grid(&vacuum_grid, source);
        (main.join().expect("propagation thread panicked"), reference)
    });
    Ok((a?, b?))
}

fn propagate_on_grid(grid: &Grid1D, source: &Source) -> Result<ProbeRecord> {
    let n = grid.eps.len();
    let dz = grid.dz_nm;
    let dt = grid.dt_fs;
    let ca = C_NM_PER_FS * dt / dz;
    let n_amb = grid.ambient_index;

    let mut e = vec![0.0f64; n];
    let mut h = vec![0.0f64; n - 1]; // h[i] lives at i + 1/2

    // first-order Mur coefficients with the local phase speeds
    let v_left = C_NM_PER_FS / grid.ambient_index;
    let v_right = C_NM_PER_FS / grid.substrate_index;
    let coef_left = (v_left * dt - dz) / (v_left * dt + dz);
    let coef_right = (v_right * dt - dz) / (v_right * dt + dz);

    let src = grid.source_idx;
    let (entry, exit) = (grid.entry_idx, grid.exit_idx);

    let mut entry_field = Vec::with_capacity(grid.steps);
    let mut exit_field = Vec::with_capacity(grid.steps);
    let mut entry_flux = 0.0;
    let mut exit_flux = 0.0;

    for step in 0..grid.steps {
        let t = step as f64 * dt;

        // H update: H^{n+1/2} from E^n
        for i in 0..n - 1 {
            h[i] -= ca * (e[i + 1] - e[i]);
        }
        // TFSF: the scattered-field H just left of the source must not see
        // the incident part of E at the source node
        h[src - 1] += ca * source.waveform(t);

        // first half of the time-centered flux E^n * H^{n+1/2}
        let h_entry = 0.5 * (h[entry - 1] + h[entry]);
        let h_exit = 0.5 * (h[exit - 1] + h[exit]);
        entry_flux += 0.5 * e[entry] * h_entry * dt;
        exit_flux += 0.5 * e[exit] * h_exit * dt;

        let e0_old = e[0];
        let e1_old = e[1];
        let elast_old = e[n - 1];
        let eprev_old = e[n - 2];

        // E update: E^{n+1} from H^{n+1/2}
        for i in 1..n - 1 {
            e[i] -= ca / grid.eps[i] * (h[i] - h[i - 1]);
        }
        // TFSF: the total-field E at the source node must see the incident H
        // half a cell to its left, half a step ahead
        let h_inc = n_amb * source.waveform(t + dt / 2.0 + dz / 2.0 * n_amb / C_NM_PER_FS);
        e[src] += ca / grid.eps[src] * h_inc;

        // Mur absorbing boundaries
        e[0] = e1_old + coef_left * (e[1] - e0_old);
        e[n - 1] = eprev_old + coef_right * (e[n - 2] - elast_old);

        // second half of the flux: E^{n+1} * H^{n+1/2}
        entry_flux += 0.5 * e[entry] * h_entry * dt;
        exit_flux += 0.5 * e[exit] * h_exit * dt;

        entry_field.push(e[entry]);
        exit_field.push(e[exit]);
    }

    if entry_field.iter().chain(&exit_field).any(|v| !v.is_finite()) {
        return Err(Error::invalid(
            "propagation produced non-finite fields (unstable configuration)",
        ));
    }

    Ok(ProbeRecord {
        dt_fs: dt,
        carrier_period_fs: source.carrier_period_fs(),
        entry_field,
        exit_field,
        entry_flux,
        exit_flux,
        monitor_separation_nm: grid.monitor_separation_nm(),
    })
}

impl ProbeRecord {
    /// Time of the cycle-averaged envelope peak at the entry monitor, fs.
    pub fn entry_peak_time_fs(&self) -> Result<f64> {
        envelope_peak_time(&self.entry_field, self.dt_fs, self.carrier_period_fs)
    }

    /// Time of the cycle-averaged envelope peak at the exit monitor, fs.
    pub fn exit_peak_time_fs(&self) -> Result<f64> {
        envelope_peak_time(&self.exit_field, self.dt_fs, self.carrier_period_fs)
    }

    /// First time the entry field exceeds `threshold` times its own maximum.
    pub fn entry_front_time_fs(&self, threshold: f64) -> Option<f64> {
        front_time(&self.entry_field, self.dt_fs, threshold)
    }

    /// First time the exit field exceeds `threshold` times its own maximum.
    pub fn exit_front_time_fs(&self, threshold: f64) -> Option<f64> {
        front_time(&self.exit_field, self.dt_fs, threshold)
    }
}

/// Envelope-peak arrival difference between two records' exit monitors:
/// `record` minus `reference` (negative = `record` arrives earlier).
pub fn peak_delay(record: &ProbeRecord, reference: &ProbeRecord) -> Result<f64> {
    if (record.dt_fs - reference.dt_fs).abs() > 1e-12 {
        return Err(Error::invalid("records were taken with different time steps"));
    }
    Ok(record.exit_peak_time_fs()? - reference.exit_peak_time_fs()?)
}

fn front_time(field: &[f64], dt: f64, threshold: f64) -> Option<f64> {
    let peak = field.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
    if peak <= 0.0 {
        return None;
    }
    field
        .iter()
        .position(|&v| v.abs() > threshold * peak)
        .map(|i| i as f64 * dt)
}

/// Peak time of |field|^2 smoothed over one optical cycle, with quadratic
/// interpolation around the discrete maximum. Rejects records whose
/// envelope has secondary structure above half the main peak (distorted or
/// multi-peaked records would make "the" peak meaningless).
fn envelope_peak_time(field: &[f64], dt: f64, period_fs: f64) -> Result<f64> {
    if field.len() < 8 {
        return Err(Error::invalid("record too short for envelope analysis"));
    }
    let window = ((period_fs / dt).round() as usize).max(1).min(field.len() / 2);
    let mut prefix = Vec::with_capacity(field.len() + 1);
    prefix.push(0.0);
    for &v in field {
        prefix.push(prefix.last().unwrap() + v * v);
    }
    let half = window / 2;
    let envelope: Vec<f64> = (0..field.len())
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + half + 1).min(field.len());
            (prefix[hi] - prefix[lo]) / (hi - lo) as f64
        })
        .collect();

    let (max_idx, &max_val) = envelope
        .iter()
        .enumerate()
        .max_by(|(_, a), (_, b)| a.total_cmp(b))
        .expect("non-empty");
    if max_val <= 0.0 {
        return Err(Error::invalid("record contains no signal"));
    }
    if max_idx == 0 || max_idx == envelope.len() - 1 {
        return Err(Error::invalid("envelope peak lies at the record boundary"));
    }

    // main lobe: expand from the max while the envelope stays above 25%
    let mut lo = max_idx;
    while lo > 0 && envelope[lo - 1] > 0.25 * max_val {
        lo -= 1;
    }
    let mut hi = max_idx;
    while hi + 1 < envelope.len() && envelope[hi + 1] > 0.25 * max_val {
        hi += 1;
    }
    let stray = envelope
        .iter()
        .enumerate()
        .any(|(i, &v)| (i < lo || i > hi) && v > 0.5 * max_val);
    if stray {
        return Err(Error::invalid(
            "record has secondary envelope peaks; peak delay is ill-defined",
        ));
    }

    // Quadratic interpolation around the discrete maximum. The boxcar
    // leaves a small carrier ripple (the window is not an exact number of
    // samples), so a 3-point parabola on the flat top would be dominated by
    // it; instead fit the parabola to log(envelope) across the whole upper
    // half of the lobe, which is exact for a Gaussian envelope and averages
    // the ripple away.
    let mut fit_lo = max_idx;
    while fit_lo > lo && envelope[fit_lo - 1] >= 0.5 * max_val {
        fit_lo -= 1;
    }
    let mut fit_hi = max_idx;
    while fit_hi < hi && envelope[fit_hi + 1] >= 0.5 * max_val {
        fit_hi += 1;
    }
    if fit_hi - fit_lo < 4 {
        let (y0, y1, y2) = (
            envelope[max_idx - 1],
            envelope[max_idx],
            envelope[max_idx + 1],
        );
        let denom = y0 - 2.0 * y1 + y2;
        let offset = if denom.abs() < 1e-300 {
            0.0
        } else {
            (0.5 * (y0 - y2) / denom).clamp(-1.0, 1.0)
        };
        return Ok((max_idx as f64 + offset) * dt);
    }

    // least-squares parabola y = a x^2 + b x + c on ln(envelope)
    let mut s = [0.0f64; 5];
    let mut m = [0.0f64; 3];
    for i in fit_lo..=fit_hi {
        let x = (i as f64) - (max_idx as f64);
        let y = envelope[i].ln();
        let x2 = x * x;
        s[0] += 1.0;
        s[1] += x;
        s[2] += x2;
        s[3] += x2 * x;
        s[4] += x2 * x2;
        m[0] += y;
        m[1] += y * x;
        m[2] += y * x2;
    }
    let offset = solve3(
        [[s[0], s[1], s[2]], [s[1], s[2], s[3]], [s[2], s[3], s[4]]],
        m,
    )
    .and_then(|[_, b, a]| {
        (a < 0.0).then(|| (-b / (2.0 * a)).clamp(fit_lo as f64 - max_idx as f64, fit_hi as f64 - max_idx as f64))
    })
    .unwrap_or(0.0);
    Ok((max_idx as f64 + offset) * dt)
}

/// 3x3 Gaussian elimination with partial pivoting.
fn solve3(mut a: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let pivot = (col..3).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..3 {
            let f = a[row][col] / a[col][col];
            for k in col..3 {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 3];
    for col in (0..3).rev() {
        let mut sum = b[col];
        for k in col + 1..3 {
            sum -= a[col][k] * x[k];
        }
        x[col] = sum / a[col][col];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

/// Field-amplitude transfer function between a run and its vacuum reference
/// at the exit monitor: X_record(omega) / X_reference(omega) for each
/// requested angular frequency (rad/fs). This is the insertion amplitude of
/// the profile (stack transmission referenced to vacuum of the same
/// footprint).
pub fn insertion_amplitude_spectrum(
    record: &ProbeRecord,
    reference: &ProbeRecord,
    omegas: &[f64],
) -> Vec<(f64, Complex64)> {
    let dft = |field: &[f64], omega: f64| -> Complex64 {
        let mut sum = Complex64::new(0.0, 0.0);
        for (i, &v) in field.iter().enumerate() {
            let t = i as f64 * record.dt_fs;
            sum += v * Complex64::from_polar(1.0, omega * t);
        }
        sum * record.dt_fs
    };
    omegas
        .iter()
        .map(|&omega| {
            (
                omega,
                dft(&record.exit_field, omega) / dft(&reference.exit_field, omega),
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optics::{LayerStack, Medium};

    fn empty_stack() -> LayerStack {
        LayerStack::bare_interface(Medium::vacuum(), Medium::vacuum())
    }

    fn gaussian() -> Source {
        Source::GaussianPulse {
            wavelength_nm: 702.0,
            fwhm_fs: 20.0,
        }
    }

    #[test]
    fn vacuum_peak_travels_at_c() {
        let spec = GridSpec::default();
        let record = propagate(&empty_stack(), &gaussian(), &spec).unwrap();
        let expected = record.monitor_separation_nm / C_NM_PER_FS;
        let measured =
            record.exit_peak_time_fs().unwrap() - record.entry_peak_time_fs().unwrap();
        assert!(
            (measured - expected).abs() <= record.dt_fs,
            "measured {measured} fs vs {expected} fs (dt = {})",
            record.dt_fs
        );
    }

    #[test]
    fn identical_records_have_zero_delay() {
        let record = propagate(&empty_stack(), &gaussian(), &GridSpec::default()).unwrap();
        assert!(peak_delay(&record, &record).unwrap().abs() < 1e-12);
    }

    #[test]
    fn synthetic_shift_is_recovered_exactly() {
        let record = propagate(&empty_stack(), &gaussian(), &GridSpec::default()).unwrap();
        let k = 37;
        let mut shifted = record.clone();
        let mut field = vec![0.0; k];
        field.extend_from_slice(&record.exit_field[..record.exit_field.len() - k]);
        shifted.exit_field = field;
        let delay = peak_delay(&shifted, &record).unwrap();
        assert!(
            (delay - k as f64 * record.dt_fs).abs() < 1e-9,
            "delay {delay} vs {}",
            k as f64 * record.dt_fs
        );
    }

    #[test]
    fn multi_peak_records_are_flagged() {
        let record = propagate(&empty_stack(), &gaussian(), &GridSpec::default()).unwrap();
        let mut doubled = record.clone();
        let n = doubled.exit_field.len();
        let copy = doubled.exit_field.clone();
        for i in 0..n / 2 {
            doubled.exit_field[(i + n / 2).min(n - 1)] += 0.9 * copy[i];
        }
        assert!(doubled.exit_peak_time_fs().is_err());
    }

    #[test]
    fn courant_violation_is_rejected() {
        let spec = GridSpec {
            courant: 1.2,
            ..GridSpec::default()
        };
        assert!(propagate(&empty_stack(), &gaussian(), &spec).is_err());
    }

    #[test]
    fn under_resolved_grid_is_rejected() {
        let spec = GridSpec {
            spatial_step_nm: Some(100.0),
            ..GridSpec::default()
        };
        let stack = LayerStack::quarter_wave(
            700.0,
            2.22,
            1.45,
            11,
            Medium::vacuum(),
            Medium::new(1.45).unwrap(),
        )
        .unwrap();
        assert!(propagate(&stack, &gaussian(), &spec).is_err());
    }

    #[test]
    fn fields_stay_finite_through_the_mirror() {
        let stack = LayerStack::quarter_wave(
            700.0,
            2.22,
            1.45,
            11,
            Medium::vacuum(),
            Medium::new(1.45).unwrap(),
        )
        .unwrap();
        let record = propagate(&stack, &gaussian(), &GridSpec::default()).unwrap();
        assert!(record.entry_field.iter().all(|v| v.is_finite()));
        assert!(record.exit_field.iter().all(|v| v.is_finite()));
        // lossless: the net flux into the stack equals the flux out of it
        assert!(record.exit_flux > 0.0);
        assert!(
            (record.exit_flux - record.entry_flux).abs() < 0.05 * record.entry_flux.abs(),
            "entry {} vs exit {}",
            record.entry_flux,
            record.exit_flux
        );
    }

    #[test]
    fn average_piecewise_handles_partial_cells() {
        let pieces = [(f64::NEG_INFINITY, 1.0), (10.0, 4.0), (20.0, 1.0)];
        assert!((average_piecewise(&pieces, 0.0, 10.0) - 1.0).abs() < 1e-12);
        assert!((average_piecewise(&pieces, 5.0, 15.0) - 2.5).abs() < 1e-12);
        assert!((average_piecewise(&pieces, 15.0, 25.0) - 2.5).abs() < 1e-12);
        assert!((average_piecewise(&pieces, 12.0, 18.0) - 4.0).abs() < 1e-12);
    }
}
