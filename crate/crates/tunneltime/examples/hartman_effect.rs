//! The Hartman effect for a rectangular barrier: the Wigner time saturates
//! at hbar/(V0 - E) as the barrier widens while the Buettiker-Landauer time
//! keeps growing linearly, and beyond some width the tunneling particle
//! "beats" a free one crossing the same distance.
//!
//! Run with: cargo run --example hartman_effect

use tunneltime::qm::{hartman_scan, RectangularBarrier};

fn main() -> tunneltime::Result<()> {
    // natural units; E = V0/2 gives kappa = k = 1
    let template = RectangularBarrier::new(1.0, 1.0, 0.5)?;
    let widths: Vec<f64> = (1..=20).map(|i| i as f64).collect();
    let reports = hartman_scan(&template, &widths)?;

    println!("V0 = 1, E = 1/2 (kappa = 1); saturation limit hbar/(V0-E) = 2");
    println!("{:>5} {:>10} {:>10} {:>12} {:>12} {:>10}",
        "d", "tau_W", "tau_BL", "tau_Larmor", "free d/v", "rel delay");
    for r in &reports {
        println!(
            "{:5.1} {:10.4} {:10.4} {:12.4} {:12.4} {:10.4}{}",
            r.width,
            r.wigner,
            r.bl,
            r.larmor_total,
            r.reference,
            r.relative_delay,
            if r.relative_delay < 0.0 { "  <- faster than free" } else { "" }
        );
    }
    Ok(())
}
