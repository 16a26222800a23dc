//! Two tunneling times at once in frustrated total internal reflection:
//! scan the air gap between two prisms and watch the lateral beam
//! displacement saturate (the Hartman effect, tied to the Wigner time)
//! while the angular deflection keeps growing linearly (tied to the
//! Buettiker-Landauer time).
//!
//! Run with: cargo run --example ftir_dual_times

use tunneltime::ftir::{gap_scan, FtirGeometry, GaussianBeam};

fn main() -> tunneltime::Result<()> {
    let template = FtirGeometry::default_at_gap(1000.0)?;
    let beam = GaussianBeam::default_waist();
    println!(
        "prisms n = {}, {} nm, {:.2} deg beyond critical; beam waist {} um",
        template.prism_index(),
        template.wavelength_nm(),
        (template.incidence_rad() - template.critical_angle_rad()).to_degrees(),
        beam.waist_nm() / 1000.0
    );

    let kappa = template.decay_constant_per_nm();
    let gaps: Vec<f64> = (2..=12).map(|i| i as f64 / kappa).collect();
    let points = gap_scan(&template, &beam, &gaps)?;

    println!(
        "\n{:>9} {:>8} {:>10} {:>14} {:>12} {:>10}",
        "gap_nm", "kappa*g", "|t|", "displacement", "deflection", "tau_BL"
    );
    for p in &points {
        println!(
            "{:9.1} {:8.1} {:10.2e} {:12.1} nm {:9.2} urad {:8.3} fs",
            p.gap_nm,
            p.kappa_per_nm * p.gap_nm,
            p.abs_t,
            p.displacement_nm,
            p.deflection_rad * 1e6,
            p.bl_fs
        );
    }

    let n = points.len();
    println!(
        "\ndisplacement {:.1} -> {:.1} nm over the last doubling (saturated)",
        points[n / 2].displacement_nm,
        points[n - 1].displacement_nm
    );
    println!(
        "deflection   {:.2} -> {:.2} urad over the same range (still growing)",
        points[n / 2].deflection_rad * 1e6,
        points[n - 1].deflection_rad * 1e6
    );
    Ok(())
}
