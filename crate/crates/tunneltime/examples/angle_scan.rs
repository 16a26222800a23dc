//! Delay theories vs incidence angle at the probe wavelength (P
//! polarization): as the tilt moves the operating point from midgap toward
//! the band edge, the Larmor prediction pulls away from the Wigner one --
//! the regime where the experiment could tell the two apart.
//!
//! Run with: cargo run --example angle_scan

use tunneltime::delay::angle_scan;
use tunneltime::{LayerStack, Medium, Polarization};

fn main() -> tunneltime::Result<()> {
    let stack = LayerStack::quarter_wave(
        700.0,
        2.22,
        1.45,
        11,
        Medium::vacuum(),
        Medium::new(1.45)?,
    )?;
    let thetas: Vec<f64> = (0..=14).map(|i| (5.0 * i as f64).to_radians()).collect();
    let points = angle_scan(&stack, 702.0, Polarization::P, &thetas);

    println!("702 nm probe, P polarization");
    println!(
        "{:>6} {:>8} {:>10} {:>10} {:>10} {:>12}",
        "theta", "T", "tau_W", "tau_Larmor", "rel delay", "|L-W| gap"
    );
    for p in &points {
        match &p.report {
            Ok(r) => println!(
                "{:6.1} {:8.4} {:10.3} {:10.3} {:10.3} {:12.4}",
                p.theta_rad.to_degrees(),
                r.flux_transmission,
                r.transit_fs,
                r.larmor_total_fs,
                r.relative_fs,
                (r.larmor_total_fs - r.transit_fs).abs()
            ),
            Err(e) => println!("{:6.1}  -- {e}", p.theta_rad.to_degrees()),
        }
    }
    Ok(())
}
