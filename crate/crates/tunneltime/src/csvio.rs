//! CSV emission for every scan type. Each file starts with `#` comment
//! lines recording the tool version and the full parameter set, so a CSV is
//! reproducible from its own header.

use std::io::Write;

use crate::delay::AngleScanPoint;
use crate::error::Result;
use crate::ftir::FtirPoint;
use crate::hom::CoincidenceScan;
use crate::optics::{Polarization, SpectrumPoint};
use crate::qm::DelayReport;
use crate::timedomain::ProbeRecord;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// `# tunneltime v...` plus one `# key=value` line per parameter.
pub fn write_comment_header(
    w: &mut impl Write,
    params: &[(&str, String)],
) -> Result<()> {
    writeln!(w, "# tunneltime v{TOOL_VERSION}")?;
    for (key, value) in params {
        writeln!(w, "# {key}={value}")?;
    }
    Ok(())
}

pub fn write_spectrum_csv(
    w: &mut impl Write,
    points: &[SpectrumPoint],
    params: &[(&str, String)],
) -> Result<()> {
    write_comment_header(w, params)?;
    writeln!(w, "lambda_nm,omega_rad_per_fs,re_r,im_r,re_t,im_t,T_flux,R_flux")?;
    for p in points {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{}",
            p.lambda_nm,
            p.omega_rad_per_fs,
            p.response.r.re,
            p.response.r.im,
            p.response.t.re,
            p.response.t.im,
            p.response.flux_transmission,
            p.response.flux_reflection
        )?;
    }
    Ok(())
}

pub fn write_qm_csv(
    w: &mut impl Write,
    reports: &[DelayReport],
    params: &[(&str, String)],
) -> Result<()> {
    write_comment_header(w, params)?;
    writeln!(
        w,
        "d,E,V0,tau_wigner,tau_bl,tau_larmor_y,tau_larmor_z,tau_larmor_total,tau_reference,relative_delay"
    )?;
    for r in reports {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{}",
            r.width,
            r.energy,
            r.height,
            r.wigner,
            r.bl,
            r.larmor_y,
            r.larmor_z,
            r.larmor_total,
            r.reference,
            r.relative_delay
        )?;
    }
    Ok(())
}

pub fn write_angle_scan_csv(
    w: &mut impl Write,
    points: &[AngleScanPoint],
    pol: Polarization,
    params: &[(&str, String)],
) -> Result<()> {
    write_comment_header(w, params)?;
    writeln!(
        w,
        "theta_deg,pol,T_flux,transit_fs,vacuum_fs,relative_fs,v_eff_over_c,bl_fs,larmor_fs"
    )?;
    for p in points {
        let theta_deg = p.theta_rad.to_degrees();
        match &p.report {
            Ok(r) => writeln!(
                w,
                "{},{},{},{},{},{},{},{},{}",
                theta_deg,
                pol,
                r.flux_transmission,
                r.transit_fs,
                r.vacuum_fs,
                r.relative_fs,
                r.velocity_over_c,
                r.bl_fs.unwrap_or(f64::NAN),
                r.larmor_total_fs
            )?,
            Err(_) => writeln!(
                w,
                "{theta_deg},{pol},NaN,NaN,NaN,NaN,NaN,NaN,NaN"
            )?,
        }
    }
    Ok(())
}

/// `delay_fs,rate_normalized` rows followed by a comment block with the fit.
pub fn write_hom_csv(
    w: &mut impl Write,
    scan: &CoincidenceScan,
    params: &[(&str, String)],
) -> Result<()> {
    write_comment_header(w, params)?;
    writeln!(w, "delay_fs,rate_normalized")?;
    for (delay, rate) in scan.delays_fs.iter().zip(&scan.rates) {
        writeln!(w, "{delay},{rate}")?;
    }
    writeln!(
        w,
        "# center_fs={} width_fs={} visibility={}",
        scan.fit.center_fs, scan.fit.width_fs, scan.fit.visibility
    )?;
    Ok(())
}

pub fn write_ftir_csv(
    w: &mut impl Write,
    points: &[FtirPoint],
    params: &[(&str, String)],
) -> Result<()> {
    write_comment_header(w, params)?;
    writeln!(w, "gap_nm,abs_t,displacement_nm,deflection_rad,kappa_per_nm")?;
    for p in points {
        writeln!(
            w,
            "{},{},{},{},{}",
            p.gap_nm, p.abs_t, p.displacement_nm, p.deflection_rad, p.kappa_per_nm
        )?;
    }
    Ok(())
}

/// `t_fs,field` for one monitor channel.
pub fn write_monitor_csv(
    w: &mut impl Write,
    record: &ProbeRecord,
    exit_side: bool,
    params: &[(&str, String)],
) -> Result<()> {
    write_comment_header(w, params)?;
    writeln!(w, "t_fs,field")?;
    let field = if exit_side {
        &record.exit_field
    } else {
        &record.entry_field
    };
    for (i, v) in field.iter().enumerate() {
        writeln!(w, "{},{}", i as f64 * record.dt_fs, v)?;
    }
    Ok(())
}
