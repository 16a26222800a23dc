//! Transmission spectrum and stop band of the 11-layer quarter-wave mirror:
//! midgap transmission near 1-2%, the 50%-transmission crossings of the
//! finite stack, and the stop-band edges of the infinite crystal.
//!
//! Run with: cargo run --example band_structure

use tunneltime::delay::bloch_stop_band;
use tunneltime::{band_edges, Incidence, LayerStack, Medium, Polarization};

fn main() -> tunneltime::Result<()> {
    let stack = LayerStack::quarter_wave(
        700.0,
        2.22,
        1.45,
        11,
        Medium::vacuum(),
        Medium::new(1.45)?,
    )?;
    println!(
        "11-layer quarter-wave mirror, total thickness {:.1} nm",
        stack.total_thickness_nm()
    );

    let midgap = stack.response(&Incidence::normal(702.0, Polarization::S)?);
    println!(
        "midgap (702 nm): T = {:.4}, R = {:.4}",
        midgap.flux_transmission, midgap.flux_reflection
    );

    let spectrum = stack.transmission_spectrum(500.0, 900.0, 2001, 0.0, Polarization::S)?;
    println!("\n lambda_nm      T");
    for p in spectrum.iter().step_by(100) {
        let bar = "#".repeat((60.0 * p.response.flux_transmission) as usize);
        println!("   {:6.1}   {:7.4} {}", p.lambda_nm, p.response.flux_transmission, bar);
    }

    if let Some(edges) = band_edges(&spectrum, 700.0) {
        println!(
            "\n50%-transmission crossings of this finite stack: {:.1} nm / {:.1} nm",
            edges.long_wavelength_nm, edges.short_wavelength_nm
        );
    }
    let (long, short) = bloch_stop_band(&stack, &Incidence::normal(700.0, Polarization::S)?)?;
    println!("stop band of the infinite crystal:               {long:.1} nm / {short:.1} nm");
    Ok(())
}
