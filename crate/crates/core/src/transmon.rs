//! Transmon energies, coherence quality factors and the residual-photon
//! dephasing bound.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_positive, Error, Result};
use crate::units::{angular_from_mhz, KHZ_TO_HZ, US_TO_S};

/// E_J/E_C below this is outside the transmon regime.
pub const TRANSMON_MIN_RATIO: f64 = 10.0;
/// Relative band around T2E = 2·T1 inside which Q_φ is reported as infinite.
pub const DEFAULT_DEPHASING_TOL: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransmonEnergies {
    pub e_c_mhz: f64,
    pub e_j_mhz: f64,
    pub ej_ec_ratio: f64,
    /// False when E_J/E_C < 10.
    pub transmon_regime: bool,
}

/// E_C = |α|, E_J = (f01 + E_C)² / (8 E_C).
pub fn energies_from_spectroscopy(f_qubit_mhz: f64, alpha_mhz: f64) -> Result<TransmonEnergies> {
    ensure_positive("qubit frequency", f_qubit_mhz)?;
    ensure_positive("anharmonicity", alpha_mhz)?;
    let e_c = alpha_mhz;
    let e_j = (f_qubit_mhz + e_c).powi(2) / (8.0 * e_c);
    if e_j <= e_c {
        return Err(Error::Validation(format!(
            "E_J = {e_j} MHz does not exceed E_C = {e_c} MHz"
        )));
    }
    let ratio = e_j / e_c;
    Ok(TransmonEnergies {
        e_c_mhz: e_c,
        e_j_mhz: e_j,
        ej_ec_ratio: ratio,
        transmon_regime: ratio >= TRANSMON_MIN_RATIO,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoherenceSummary {
    pub t1_us: f64,
    pub t2e_us: f64,
    pub q1: f64,
    pub q2e: f64,
    /// `f64::INFINITY` when the echo is relaxation limited.
    pub q_phi: f64,
}

pub fn quality_factors(f_qubit_mhz: f64, t1_us: f64, t2e_us: f64) -> Result<CoherenceSummary> {
    quality_factors_with_tol(f_qubit_mhz, t1_us, t2e_us, DEFAULT_DEPHASING_TOL)
}

/// Q = ω·T with ω = 2πf; Q_φ = (1/Q2E − 1/(2Q1))⁻¹.
///
/// `tol` is the relative band around T2E = 2·T1 treated as the boundary.
pub fn quality_factors_with_tol(
    f_qubit_mhz: f64,
    t1_us: f64,
    t2e_us: f64,
    tol: f64,
) -> Result<CoherenceSummary> {
    ensure_positive("qubit frequency", f_qubit_mhz)?;
    ensure_positive("T1", t1_us)?;
    ensure_positive("T2E", t2e_us)?;
    if tol.is_nan() || tol < 0.0 {
        return Err(Error::domain("dephasing tolerance must be non-negative"));
    }
    let omega = angular_from_mhz(f_qubit_mhz);
    let q1 = omega * t1_us * US_TO_S;
    let q2e = omega * t2e_us * US_TO_S;
    let two_t1 = 2.0 * t1_us;
    let q_phi = if t2e_us > two_t1 * (1.0 + tol) {
        return Err(Error::UnphysicalDephasing {
            t2e: t2e_us,
            two_t1,
        });
    } else if t2e_us >= two_t1 * (1.0 - tol) {
        f64::INFINITY
    } else {
        1.0 / (1.0 / q2e - 1.0 / (2.0 * q1))
    };
    Ok(CoherenceSummary {
        t1_us,
        t2e_us,
        q1,
        q2e,
        q_phi,
    })
}

/// How κ and χ enter the residual-photon dephasing rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RateConvention {
    /// κ and χ inserted as ordinary frequencies, Γ compared against 2πf.
    /// Reproduces published bounds.
    #[default]
    OrdinaryFrequency,
    /// κ, χ and Γ all angular; gives Q 2π smaller than the default.
    StrictAngular,
}

/// Q_φ bound from residual resonator photons, Γ = n̄κχ²/(κ² + χ²).
pub fn photon_dephasing_bound(
    nbar: f64,
    kappa_khz: f64,
    chi_khz: f64,
    f_qubit_mhz: f64,
    convention: RateConvention,
) -> Result<f64> {
    if !(nbar >= 0.0 && nbar.is_finite()) {
        return Err(Error::domain(format!("nbar must be non-negative, got {nbar}")));
    }
    ensure_positive("kappa", kappa_khz)?;
    ensure_positive("qubit frequency", f_qubit_mhz)?;
    if !chi_khz.is_finite() {
        return Err(Error::domain("chi must be finite"));
    }
    let kappa = kappa_khz * KHZ_TO_HZ;
    let chi = chi_khz * KHZ_TO_HZ;
    let gamma = nbar * kappa * chi * chi / (kappa * kappa + chi * chi);
    if gamma == 0.0 {
        return Ok(f64::INFINITY);
    }
    let gamma = match convention {
        RateConvention::OrdinaryFrequency => gamma,
        RateConvention::StrictAngular => 2.0 * PI * gamma,
    };
    Ok(angular_from_mhz(f_qubit_mhz) / gamma)
}

/// Spectroscopic inputs of one qubit together with everything derived from them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransmonParams {
    pub f_qubit_mhz: f64,
    pub alpha_mhz: f64,
    pub chi_khz: f64,
    pub kappa_khz: f64,
    pub f_res_ghz: f64,
    pub nbar: f64,
    pub energies: TransmonEnergies,
    pub q_phi_photon: f64,
    pub coherence: Option<CoherenceSummary>,
}

impl TransmonParams {
    #[allow(clippy::too_many_arguments)]
    pub fn derive(
        f_qubit_mhz: f64,
        alpha_mhz: f64,
        chi_khz: f64,
        kappa_khz: f64,
        f_res_ghz: f64,
        nbar: f64,
        times_us: Option<(f64, f64)>,
        convention: RateConvention,
    ) -> Result<Self> {
        let energies = energies_from_spectroscopy(f_qubit_mhz, alpha_mhz)?;
        let q_phi_photon = photon_dephasing_bound(nbar, kappa_khz, chi_khz, f_qubit_mhz, convention)?;
        let coherence = times_us
            .map(|(t1, t2e)| quality_factors(f_qubit_mhz, t1, t2e))
            .transpose()?;
        Ok(Self {
            f_qubit_mhz,
            alpha_mhz,
            chi_khz,
            kappa_khz,
            f_res_ghz,
            nbar,
            energies,
            q_phi_photon,
            coherence,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_examples() {
        let e = energies_from_spectroscopy(2661.0, 168.0).unwrap();
        assert!((e.ej_ec_ratio - 35.45).abs() < 0.01);
        assert!(e.transmon_regime);
        let e = energies_from_spectroscopy(2714.2, 190.0).unwrap();
        assert!((e.ej_ec_ratio - 29.21).abs() < 0.01);
        assert!(energies_from_spectroscopy(0.0, 190.0).is_err());
        assert!(energies_from_spectroscopy(2714.2, -1.0).is_err());
    }

    #[test]
    fn ej_equal_ec_boundary() {
        // f = (√8 − 1)·E_C gives E_J = E_C exactly, which is rejected
        let ec = 200.0;
        let f = (8f64.sqrt() - 1.0) * ec;
        let e = energies_from_spectroscopy(f * 1.001, ec).unwrap();
        assert!(!e.transmon_regime);
        assert!((e.e_j_mhz / ec - 1.0).abs() < 0.01);
        assert!(energies_from_spectroscopy(f * 0.999, ec).is_err());
    }

    #[test]
    fn quality_factor_examples() {
        let s = quality_factors(2811.6, 184.79, 207.15).unwrap();
        assert!((s.q1 / 3.26e6 - 1.0).abs() < 0.01);

        let s = quality_factors(2828.0, 141.18, 225.75).unwrap();
        assert!((s.q1 / 2.5086e6 - 1.0).abs() < 1e-3);
        assert!((s.q2e / 4.0113e6 - 1.0).abs() < 1e-3);
        assert!((s.q_phi / 2.001e7 - 1.0).abs() < 1e-3, "{}", s.q_phi);
        assert!(s.q_phi >= s.q2e);

        let s = quality_factors(3000.0, 100.0, 200.0).unwrap();
        assert_eq!(s.q_phi, f64::INFINITY);
        let s = quality_factors(3000.0, 100.0, 200.9).unwrap();
        assert_eq!(s.q_phi, f64::INFINITY);
        assert!(matches!(
            quality_factors(3000.0, 100.0, 210.0),
            Err(Error::UnphysicalDephasing { .. })
        ));
    }

    #[test]
    fn photon_bound_examples() {
        let conv = RateConvention::OrdinaryFrequency;
        let q7 = photon_dephasing_bound(0.01, 206.0, 110.0, 2714.2, conv).unwrap();
        assert!((q7 / 3.73e7 - 1.0).abs() < 0.005, "{q7}");
        let q20 = photon_dephasing_bound(0.01, 667.0, 70.0, 2811.6, conv).unwrap();
        assert!((q20 / 2.43e8 - 1.0).abs() < 0.005, "{q20}");
        // sign of χ is irrelevant
        let neg = photon_dephasing_bound(0.01, 206.0, -110.0, 2714.2, conv).unwrap();
        assert_eq!(neg, q7);
        assert_eq!(photon_dephasing_bound(0.0, 206.0, 110.0, 2714.2, conv).unwrap(), f64::INFINITY);
        assert_eq!(photon_dephasing_bound(0.01, 206.0, 0.0, 2714.2, conv).unwrap(), f64::INFINITY);
        assert!(photon_dephasing_bound(-0.1, 206.0, 110.0, 2714.2, conv).is_err());

        let strict =
            photon_dephasing_bound(0.01, 206.0, 110.0, 2714.2, RateConvention::StrictAngular).unwrap();
        assert!((q7 / strict - 2.0 * PI).abs() < 1e-9);
    }
}
