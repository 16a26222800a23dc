//! The three tunneling-time predictions for a photon crossing the mirror at
//! midgap: Wigner (phase) time ~2 fs against a 3.6 fs vacuum traversal --
//! an effective velocity of ~1.8c -- with the Buettiker-Landauer time going
//! to zero at midgap and the Larmor time agreeing with Wigner there.
//!
//! Run with: cargo run --example tunneling_delay

use tunneltime::delay::{photonic_bl_time, photonic_larmor, photonic_wigner};
use tunneltime::{Incidence, LayerStack, Medium, Polarization};

fn main() -> tunneltime::Result<()> {
    let stack = LayerStack::quarter_wave(
        700.0,
        2.22,
        1.45,
        11,
        Medium::vacuum(),
        Medium::new(1.45)?,
    )?;

    for lambda in [700.0, 702.0, 730.0, 760.0] {
        let inc = Incidence::normal(lambda, Polarization::S)?;
        let report = photonic_wigner(&stack, &inc)?;
        let larmor = photonic_larmor(&stack, &inc)?;
        println!("probe {lambda} nm:");
        println!("  transit (Wigner)   {:8.3} fs", report.transit_fs);
        println!("  vacuum same span   {:8.3} fs", report.vacuum_fs);
        println!(
            "  relative delay     {:8.3} fs  ({})",
            report.relative_fs,
            if report.relative_fs < 0.0 {
                "arrives EARLY -- apparently superluminal"
            } else {
                "arrives late"
            }
        );
        println!("  effective velocity {:8.3} c", report.velocity_over_c);
        match photonic_bl_time(&stack, &inc) {
            Ok(bl) => println!("  Buettiker-Landauer {bl:8.3} fs"),
            Err(e) => println!("  Buettiker-Landauer    --    ({e})"),
        }
        println!("  Larmor (total)     {:8.3} fs", larmor.total);
        println!();
    }
    Ok(())
}
