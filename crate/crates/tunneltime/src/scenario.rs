//! Named experiment presets: every figure-style run (dip scans, angle scans,
//! width scans, gap scans) reads its parameters from a `Scenario`, either
//! the built-in Berkeley mirror configuration or a TOML file on disk.

use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::hom::BiphotonSpectrum;
use crate::optics::{LayerStack, Medium, Polarization};
use crate::stackfile;

#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub stack: LayerStack,
    pub spectrum: BiphotonSpectrum,
    pub hom: HomConfig,
    pub angle_scan: AngleScanConfig,
    pub qm: QmConfig,
    pub ftir: FtirConfig,
}

#[derive(Debug, Clone, Copy)]
pub struct HomConfig {
    /// Tilt for the sign-reversal run, degrees (the normal-incidence run is
    /// always at 0).
    pub brewster_angle_deg: f64,
    pub polarization: Polarization,
}

#[derive(Debug, Clone, Copy)]
pub struct AngleScanConfig {
    pub lambda_nm: f64,
    pub polarization: Polarization,
    pub start_deg: f64,
    pub stop_deg: f64,
    pub step_deg: f64,
}

impl AngleScanConfig {
    pub fn angles_rad(&self) -> Vec<f64> {
        scan_values(self.start_deg, self.stop_deg, self.step_deg)
            .into_iter()
            .map(|d| d.to_radians())
            .collect()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QmConfig {
    pub height: f64,
    pub energy: f64,
    pub width_min: f64,
    pub width_max: f64,
    pub width_count: usize,
}

impl QmConfig {
    pub fn widths(&self) -> Vec<f64> {
        let n = self.width_count.max(2);
        (0..n)
            .map(|i| {
                self.width_min
                    + (self.width_max - self.width_min) * i as f64 / (n - 1) as f64
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct FtirConfig {
    pub prism_index: f64,
    pub angle_above_critical_deg: f64,
    pub wavelength_nm: f64,
    pub waist_nm: f64,
    pub gap_min_nm: f64,
    pub gap_max_nm: f64,
    pub gap_count: usize,
}

impl FtirConfig {
    pub fn gaps(&self) -> Vec<f64> {
        let n = self.gap_count.max(2);
        (0..n)
            .map(|i| {
                self.gap_min_nm + (self.gap_max_nm - self.gap_min_nm) * i as f64 / (n - 1) as f64
            })
            .collect()
    }

    pub fn incidence_rad(&self) -> f64 {
        (1.0 / self.prism_index).asin() + self.angle_above_critical_deg.to_radians()
    }
}

/// Inclusive numeric range with a step; tolerant of floating-point endpoint
/// rounding.
pub fn scan_values(min: f64, max: f64, step: f64) -> Vec<f64> {
    let count = ((max - min) / step + 1.0 + 1e-9).floor().max(1.0) as usize;
    (0..count).map(|i| min + step * i as f64).collect()
}

impl Scenario {
    /// The built-in configuration of the single-photon tunneling-time
    /// measurement: an 11-layer TiO2/fused-silica quarter-wave mirror
    /// designed at 700 nm on a 1.45 substrate, probed by 702 nm degenerate
    /// photon pairs with ~20 fs wavepackets.
    pub fn berkeley() -> Self {
        let stack = LayerStack::quarter_wave(
            700.0,
            2.22,
            1.45,
            11,
            Medium::vacuum(),
            Medium::new(1.45).expect("valid index"),
        )
        .expect("valid quarter-wave parameters");
        // kappa = 1 in natural units for E = V0/2 = 1/2
        let qm = QmConfig {
            height: 1.0,
            energy: 0.5,
            width_min: 1.0,
            width_max: 20.0,
            width_count: 20,
        };
        let ftir = FtirConfig {
            prism_index: 1.52,
            angle_above_critical_deg: 2.0,
            wavelength_nm: 702.0,
            waist_nm: 30_000.0,
            gap_min_nm: 1000.0,
            gap_max_nm: 4000.0,
            gap_count: 13,
        };
        Scenario {
            name: "berkeley".into(),
            stack,
            spectrum: BiphotonSpectrum::from_temporal_width(702.0, 20.0)
                .expect("valid spectrum"),
            hom: HomConfig {
                brewster_angle_deg: 55.0,
                polarization: Polarization::P,
            },
            angle_scan: AngleScanConfig {
                lambda_nm: 702.0,
                polarization: Polarization::P,
                start_deg: 0.0,
                stop_deg: 80.0,
                step_deg: 0.5,
            },
            qm,
            ftir,
        }
    }

    /// Load a scenario from a TOML file. The referenced stack file is
    /// resolved relative to the scenario file and must exist.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Scenario(format!("{}: {e}", path.display())))?;
        let file: ScenarioFile = toml::from_str(&text)
            .map_err(|e| Error::Scenario(format!("{}: {e}", path.display())))?;

        let stack_path = path
            .parent()
            .unwrap_or_else(|| Path::new("."))
            .join(&file.stack.file);
        if !stack_path.exists() {
            return Err(Error::Scenario(format!(
                "referenced stack file {} does not exist",
                stack_path.display()
            )));
        }
        let stack = stackfile::read_stack(&stack_path)?;

        let spectrum = match (file.spectrum.bandwidth_fwhm_nm, file.spectrum.temporal_fwhm_fs) {
            (Some(nm), None) => BiphotonSpectrum::new(file.spectrum.center_nm, nm)?,
            (None, Some(fs)) => {
                BiphotonSpectrum::from_temporal_width(file.spectrum.center_nm, fs)?
            }
            _ => {
                return Err(Error::Scenario(
                    "[spectrum] needs exactly one of bandwidth_fwhm_nm or temporal_fwhm_fs"
                        .into(),
                ))
            }
        };

        let defaults = Scenario::berkeley();
        let hom = match file.hom {
            Some(h) => HomConfig {
                brewster_angle_deg: h.brewster_angle_deg,
                polarization: h.polarization.parse()?,
            },
            None => defaults.hom,
        };
        let angle_scan = match file.angle_scan {
            Some(a) => AngleScanConfig {
                lambda_nm: a.lambda_nm,
                polarization: a.polarization.parse()?,
                start_deg: a.start_deg,
                stop_deg: a.stop_deg,
                step_deg: a.step_deg,
            },
            None => defaults.angle_scan,
        };
        let qm = match file.qm {
            Some(q) => QmConfig {
                height: q.height,
                energy: q.energy,
                width_min: q.width_min,
                width_max: q.width_max,
                width_count: q.width_count,
            },
            None => defaults.qm,
        };
        let ftir = match file.ftir {
            Some(f) => FtirConfig {
                prism_index: f.prism_index,
                angle_above_critical_deg: f.angle_above_critical_deg,
                wavelength_nm: f.wavelength_nm,
                waist_nm: f.waist_nm,
                gap_min_nm: f.gap_min_nm,
                gap_max_nm: f.gap_max_nm,
                gap_count: f.gap_count,
            },
            None => defaults.ftir,
        };

        Ok(Scenario {
            name: file.name,
            stack,
            spectrum,
            hom,
            angle_scan,
            qm,
            ftir,
        })
    }
}

#[derive(Deserialize)]
struct ScenarioFile {
    name: String,
    stack: StackRef,
    spectrum: SpectrumSection,
    hom: Option<HomSection>,
    angle_scan: Option<AngleScanSection>,
    qm: Option<QmSection>,
    ftir: Option<FtirSection>,
}

#[derive(Deserialize)]
struct StackRef {
    file: String,
}

#[derive(Deserialize)]
struct SpectrumSection {
    center_nm: f64,
    bandwidth_fwhm_nm: Option<f64>,
    temporal_fwhm_fs: Option<f64>,
}

#[derive(Deserialize)]
struct HomSection {
    brewster_angle_deg: f64,
    polarization: String,
}

#[derive(Deserialize)]
struct AngleScanSection {
    lambda_nm: f64,
    polarization: String,
    start_deg: f64,
    stop_deg: f64,
    step_deg: f64,
}

#[derive(Deserialize)]
struct QmSection {
    height: f64,
    energy: f64,
    width_min: f64,
    width_max: f64,
    width_count: usize,
}

#[derive(Deserialize)]
struct FtirSection {
    prism_index: f64,
    angle_above_critical_deg: f64,
    wavelength_nm: f64,
    waist_nm: f64,
    gap_min_nm: f64,
    gap_max_nm: f64,
    gap_count: usize,
}
