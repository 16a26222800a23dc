//! The sign double-check: tilting the mirror toward the substrate's
//! Brewster angle (P polarization) switches Bragg reflection off, the stack
//! behaves like a thin slab of ordinary glass, and the dip shift reverts to
//! the normal positive (subluminal) sign.
//!
//! Run with: cargo run --example brewster_reversal

use tunneltime::hom::{relative_tunneling_time, ArmFilter, ArmFilters, BiphotonSpectrum};
use tunneltime::{brewster_angle, LayerStack, Medium, Polarization};

fn main() -> tunneltime::Result<()> {
    let glass = Medium::new(1.45)?;
    let stack = LayerStack::quarter_wave(700.0, 2.22, 1.45, 11, Medium::vacuum(), glass)?;
    let pairs = BiphotonSpectrum::from_temporal_width(702.0, 20.0)?;

    println!(
        "Brewster angle for the substrate: {:.1} deg",
        brewster_angle(Medium::vacuum(), glass)?.to_degrees()
    );
    println!("\n  tilt   pol   dip shift (fs)");
    for (deg, pol) in [(0.0, Polarization::P), (30.0, Polarization::P), (55.0, Polarization::P)] {
        let filters = ArmFilters {
            barrier_arm: ArmFilter::Stack(stack.clone()),
            reference_arm: ArmFilter::Identity,
            angle_rad: (deg as f64).to_radians(),
            polarization: pol,
        };
        let shift = relative_tunneling_time(&filters, &pairs)?;
        println!(
            "  {deg:4.0}    {pol}    {shift:+8.3}   {}",
            if shift < 0.0 { "superluminal" } else { "subluminal" }
        );
    }
    Ok(())
}
