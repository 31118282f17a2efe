//! Unit conversions shared by the junction and transmon calculations.
//!
//! Inputs are taken in lab units (Ω, µm², µeV, MHz, kHz, µs) and every
//! conversion between them goes through the factors below.

use std::f64::consts::PI;

/// A gap energy in µeV divided by the electron charge is a voltage in µV.
pub const UEV_PER_E_TO_UV: f64 = 1.0;
/// µV / Ω = µA; µA → nA.
pub const UA_TO_NA: f64 = 1e3;
/// 1 µA/µm² = 1e-6 A / 1e-8 cm² = 100 A/cm².
pub const UA_PER_UM2_TO_A_PER_CM2: f64 = 100.0;
pub const NM_PER_UM: f64 = 1e3;
pub const NM2_TO_UM2: f64 = 1e-6;
pub const MHZ_TO_HZ: f64 = 1e6;
pub const KHZ_TO_HZ: f64 = 1e3;
pub const US_TO_S: f64 = 1e-6;

/// Superconducting gap of thin-film aluminium used by default, µeV.
pub const DEFAULT_GAP_UEV: f64 = 180.0;
/// Mean residual photon number assumed for the readout resonator.
pub const DEFAULT_NBAR: f64 = 0.01;

/// Ratio of the interquartile range to σ for a normal distribution
/// (2·Φ⁻¹(0.75)).
pub const GAUSSIAN_IQR_PER_SIGMA: f64 = 1.348_979_500_392_163_5;

/// π·Δ/(2e) in µV for a gap given in µeV.
pub fn ab_voltage_uv(delta_uev: f64) -> f64 {
    PI * delta_uev * UEV_PER_E_TO_UV / 2.0
}

pub fn deg_to_rad(deg: f64) -> f64 {
    deg.to_radians()
}

/// Angular frequency (rad/s) for an ordinary frequency in MHz.
pub fn angular_from_mhz(f_mhz: f64) -> f64 {
    2.0 * PI * f_mhz * MHZ_TO_HZ
}
