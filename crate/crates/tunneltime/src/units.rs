//! Internal unit system: lengths in nanometers, times in femtoseconds,
//! angular frequencies in rad/fs. All quantities stay O(1)-O(1e3), far from
//! f64 extremes.

/// Vacuum speed of light: 299 792 458 m/s = 299.792458 nm/fs.
pub const C_NM_PER_FS: f64 = 299.792458;

/// Angular frequency (rad/fs) of a vacuum wavelength (nm).
pub fn omega_from_wavelength(lambda_nm: f64) -> f64 {
    2.0 * std::f64::consts::PI * C_NM_PER_FS / lambda_nm
}

/// Vacuum wavelength (nm) of an angular frequency (rad/fs).
pub fn wavelength_from_omega(omega_rad_per_fs: f64) -> f64 {
    2.0 * std::f64::consts::PI * C_NM_PER_FS / omega_rad_per_fs
}

pub fn deg_to_rad(deg: f64) -> f64 {
    deg * std::f64::consts::PI / 180.0
}

pub fn rad_to_deg(rad: f64) -> f64 {
    rad * 180.0 / std::f64::consts::PI
}
