//! Ambegaokar-Baratoff conversion between normal-state resistance and
//! critical current (zero-temperature form).

use serde::{Deserialize, Serialize};

use crate::error::{ensure_positive, Result};
use crate::units::{ab_voltage_uv, UA_PER_UM2_TO_A_PER_CM2, UA_TO_NA};

/// Critical current in nA for a junction of resistance `r_n_ohm`.
pub fn critical_current(r_n_ohm: f64, delta_uev: f64) -> Result<f64> {
    ensure_positive("R_n", r_n_ohm)?;
    ensure_positive("gap", delta_uev)?;
    Ok(ab_voltage_uv(delta_uev) / r_n_ohm * UA_TO_NA)
}

/// Critical current density in A/cm² from the resistance-area product (Ω·µm²).
pub fn critical_current_density(rna_ohm_um2: f64, delta_uev: f64) -> Result<f64> {
    ensure_positive("R_nA", rna_ohm_um2)?;
    ensure_positive("gap", delta_uev)?;
    Ok(ab_voltage_uv(delta_uev) / rna_ohm_um2 * UA_PER_UM2_TO_A_PER_CM2)
}

/// Normal-state resistance that gives `jc_a_cm2` for a junction of `area_um2`.
pub fn rn_for_target(jc_a_cm2: f64, area_um2: f64, delta_uev: f64) -> Result<f64> {
    ensure_positive("J_c", jc_a_cm2)?;
    ensure_positive("area", area_um2)?;
    ensure_positive("gap", delta_uev)?;
    let rna = ab_voltage_uv(delta_uev) * UA_PER_UM2_TO_A_PER_CM2 / jc_a_cm2;
    Ok(rna / area_um2)
}

/// A measured junction and its derived figures of merit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JunctionElectrical {
    pub r_n_ohm: f64,
    pub area_um2: f64,
    pub delta_uev: f64,
    pub rna_ohm_um2: f64,
    pub ic_na: f64,
    pub jc_a_cm2: f64,
}

impl JunctionElectrical {
    pub fn from_measurement(r_n_ohm: f64, area_um2: f64, delta_uev: f64) -> Result<Self> {
        ensure_positive("area", area_um2)?;
        let rna = r_n_ohm * area_um2;
        Ok(Self {
            r_n_ohm,
            area_um2,
            delta_uev,
            rna_ohm_um2: rna,
            ic_na: critical_current(r_n_ohm, delta_uev)?,
            jc_a_cm2: critical_current_density(rna, delta_uev)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn critical_current_examples() {
        assert!((critical_current(6600.0, 180.0).unwrap() - 42.84).abs() < 0.01);
        assert!((critical_current(3300.0, 180.0).unwrap() - 85.68).abs() < 0.01);
        let big = critical_current(1e12, 180.0).unwrap();
        assert!(big > 0.0 && big < 1e-6);
        assert!(critical_current(0.0, 180.0).is_err());
        assert!(critical_current(100.0, -1.0).is_err());
    }

    #[test]
    fn dose_table_values() {
        for (rna, jc) in [(391.8, 72.2), (199.1, 142.0), (3114.3, 9.1)] {
            let got = critical_current_density(rna, 180.0).unwrap();
            assert!((got - jc).abs() < 0.06, "{rna}: {got}");
        }
        assert!(critical_current_density(0.0, 180.0).is_err());
    }

    #[test]
    fn design_inverse() {
        let rn = rn_for_target(72.2, 0.0648, 180.0).unwrap();
        assert!((rn - 6043.0).abs() < 5.0, "{rn}");
        let rn = rn_for_target(100.0, 0.0648, 180.0).unwrap();
        assert!((rn - 4363.3).abs() < 0.5, "{rn}");
        let x = 5321.0;
        let jc = critical_current_density(x * 0.0648, 180.0).unwrap();
        let back = rn_for_target(jc, 0.0648, 180.0).unwrap();
        assert!((back - x).abs() / x < 1e-14);
        assert!(rn_for_target(100.0, 0.0, 180.0).is_err());
    }

    #[test]
    fn single_junction_record() {
        // a 6.6 kΩ qubit junction of 360 nm × 180 nm evaluates well below the dose mean
        let j = JunctionElectrical::from_measurement(6600.0, 0.0648, 180.0).unwrap();
        assert!((j.rna_ohm_um2 - 427.68).abs() < 1e-9);
        assert!((j.jc_a_cm2 - 66.1).abs() < 0.1);
        assert!((j.ic_na / j.area_um2 * 0.1 - j.jc_a_cm2).abs() / j.jc_a_cm2 < 1e-12);
    }
}
