//! Time-domain proof that nothing unphysical happens: a Gaussian pulse's
//! *peak* exits the mirror earlier than through vacuum (matching the
//! frequency-domain Wigner delay), yet a sharp *front* never arrives before
//! light through vacuum would -- group velocity may exceed c, the front
//! velocity does not.
//!
//! Run with: cargo run --example pulse_causality
//! (a release build is noticeably faster)

use tunneltime::delay::photonic_wigner;
use tunneltime::timedomain::{peak_delay, run_with_vacuum_reference, GridSpec, Source};
use tunneltime::{Incidence, LayerStack, Medium, Polarization, C_NM_PER_FS};

fn main() -> tunneltime::Result<()> {
    let stack = LayerStack::quarter_wave(
        700.0,
        2.22,
        1.45,
        11,
        Medium::vacuum(),
        Medium::new(1.45)?,
    )?;
    let spec = GridSpec::default();

    // Gaussian pulse: the peak tunnels out early
    let pulse = Source::GaussianPulse {
        wavelength_nm: 702.0,
        fwhm_fs: 20.0,
    };
    let (record, reference) = run_with_vacuum_reference(&stack, &pulse, &spec)?;
    let measured = peak_delay(&record, &reference)?;
    let predicted = photonic_wigner(&stack, &Incidence::normal(702.0, Polarization::S)?)?;
    println!("Gaussian pulse through the mirror:");
    println!("  peak delay vs vacuum (time domain)    {measured:+.3} fs");
    println!(
        "  Wigner prediction (frequency domain)  {:+.3} fs",
        predicted.relative_fs
    );
    println!(
        "  energy balance: flux in {:.4e}, flux out {:.4e}",
        record.entry_flux, record.exit_flux
    );

    // sharp front: strictly causal
    let front = Source::SharpFront { wavelength_nm: 702.0 };
    let (record, _) = run_with_vacuum_reference(&stack, &front, &spec)?;
    let threshold = 1e-8;
    let entry = record.entry_front_time_fs(threshold).expect("signal at entry");
    let exit = record.exit_front_time_fs(threshold).expect("signal at exit");
    let light = record.monitor_separation_nm / C_NM_PER_FS;
    println!("\nSharp-front source (threshold {threshold:.0e} of peak):");
    println!("  front passes entry monitor at {entry:.3} fs");
    println!("  front reaches exit monitor at {exit:.3} fs");
    println!("  light needs {light:.3} fs between the monitors");
    println!(
        "  front margin: {:+.3} fs -> {}",
        (exit - entry) - light,
        if exit - entry + record.dt_fs >= light {
            "causal (front never beats c)"
        } else {
            "ACAUSAL -- solver bug!"
        }
    );
    Ok(())
}
