//! Device configuration: a sectioned TOML file, or the same structure as JSON.
//!
//! ```toml
//! [trench]
//! depth_nm = 1100
//! sidewall_deg = 88
//! segments = [{ length_nm = 180, width_nm = 2891 }]
//!
//! [[deposition]]
//! tilt_deg = 49
//! nominal_nm = 30.5
//!
//! [[deposition]]
//! tilt_deg = -49
//! nominal_nm = 123
//!
//! [junction]
//! rn_ohm = 6600
//! area_um2 = 0.0648
//!
//! [transmon]
//! f_qubit_mhz = 2811.6
//! alpha_mhz = 190.5
//! chi_khz = -70
//! kappa_khz = 667
//! f_res_ghz = 6.65
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_positive, Error, Result};
use crate::geometry::{DepositionStep, Segment, TrenchProfile};
use crate::transmon::{RateConvention, TransmonParams};
use crate::units::{DEFAULT_GAP_UEV, DEFAULT_NBAR};

/// Accepted keys per section.
const SCHEMA: &[(&str, &[&str])] = &[
    ("trench", &["depth_nm", "sidewall_deg", "segments"]),
    ("deposition", &["tilt_deg", "nominal_nm", "in_plane_rotation_deg"]),
    ("junction", &["rn_ohm", "area_um2", "rna_ohm_um2", "delta_uev"]),
    (
        "transmon",
        &[
            "f_qubit_mhz",
            "alpha_mhz",
            "chi_khz",
            "kappa_khz",
            "f_res_ghz",
            "nbar",
            "t1_us",
            "t2e_us",
            "rate_convention",
        ],
    ),
];
const SEGMENT_KEYS: &[&str] = &["length_nm", "width_nm"];

#[derive(Debug, Deserialize)]
struct RawTrench {
    depth_nm: f64,
    sidewall_deg: f64,
    segments: Vec<Segment>,
}

#[derive(Debug, Deserialize)]
struct RawDeposition {
    tilt_deg: f64,
    nominal_nm: f64,
    #[serde(default)]
    in_plane_rotation_deg: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JunctionSection {
    pub rn_ohm: Option<f64>,
    pub area_um2: Option<f64>,
    pub rna_ohm_um2: Option<f64>,
    #[serde(default = "default_gap")]
    pub delta_uev: f64,
}

impl Default for JunctionSection {
    fn default() -> Self {
        Self {
            rn_ohm: None,
            area_um2: None,
            rna_ohm_um2: None,
            delta_uev: DEFAULT_GAP_UEV,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransmonSection {
    pub f_qubit_mhz: f64,
    pub alpha_mhz: f64,
    pub chi_khz: f64,
    pub kappa_khz: f64,
    pub f_res_ghz: f64,
    #[serde(default = "default_nbar")]
    pub nbar: f64,
    pub t1_us: Option<f64>,
    pub t2e_us: Option<f64>,
    #[serde(default)]
    pub rate_convention: RateConvention,
}

impl TransmonSection {
    pub fn derive(&self) -> Result<TransmonParams> {
        let times = match (self.t1_us, self.t2e_us) {
            (Some(a), Some(b)) => Some((a, b)),
            (None, None) => None,
            _ => {
                return Err(Error::Validation(
                    "transmon: t1_us and t2e_us must be given together".into(),
                ))
            }
        };
        TransmonParams::derive(
            self.f_qubit_mhz,
            self.alpha_mhz,
            self.chi_khz,
            self.kappa_khz,
            self.f_res_ghz,
            self.nbar,
            times,
            self.rate_convention,
        )
    }
}

fn default_gap() -> f64 {
    DEFAULT_GAP_UEV
}

fn default_nbar() -> f64 {
    DEFAULT_NBAR
}

#[derive(Debug, Deserialize)]
struct RawConfig {
    trench: Option<RawTrench>,
    #[serde(default)]
    deposition: Vec<RawDeposition>,
    junction: Option<JunctionSection>,
    transmon: Option<TransmonSection>,
}

/// Validated device description. Every section is optional.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DeviceConfig {
    pub trench: Option<TrenchProfile>,
    pub deposition: Vec<DepositionStep>,
    pub junction: Option<JunctionSection>,
    pub transmon: Option<TransmonSection>,
}

impl DeviceConfig {
    pub fn trench(&self) -> Result<&TrenchProfile> {
        self.trench.as_ref().ok_or(Error::MissingSection("trench"))
    }

    /// The two depositions forming the junction.
    pub fn deposition_pair(&self) -> Result<(&DepositionStep, &DepositionStep)> {
        match self.deposition.as_slice() {
            [a, b] => Ok((a, b)),
            [] => Err(Error::MissingSection("deposition")),
            other => Err(Error::Validation(format!(
                "junction geometry needs exactly two depositions, config has {}",
                other.len()
            ))),
        }
    }

    pub fn junction(&self) -> Result<&JunctionSection> {
        self.junction.as_ref().ok_or(Error::MissingSection("junction"))
    }

    pub fn transmon(&self) -> Result<&TransmonSection> {
        self.transmon.as_ref().ok_or(Error::MissingSection("transmon"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Encoding {
    Toml,
    Json,
}

pub fn load_config(path: impl AsRef<Path>) -> Result<DeviceConfig> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let encoding = match path.extension().and_then(|e| e.to_str()) {
        Some(ext) if ext.eq_ignore_ascii_case("json") => Encoding::Json,
        _ => Encoding::Toml,
    };
    parse_config(&text, encoding)
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, column)
}

pub fn parse_config(text: &str, encoding: Encoding) -> Result<DeviceConfig> {
    let value: serde_json::Value = match encoding {
        Encoding::Toml => {
            let table: toml::Table = toml::from_str(text).map_err(|e| {
                let (line, column) = e.span().map_or((0, 0), |s| line_col(text, s.start));
                Error::Parse {
                    line,
                    column,
                    message: e.message().to_string(),
                }
            })?;
            serde_json::to_value(table).map_err(|e| Error::Validation(e.to_string()))?
        }
        Encoding::Json => serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?,
    };
    let unknown = unknown_keys(&value);
    if !unknown.is_empty() {
        return Err(Error::Validation(format!(
            "unknown config keys: {}",
            unknown.join(", ")
        )));
    }
    let raw: RawConfig =
        serde_json::from_value(value).map_err(|e| Error::Validation(e.to_string()))?;
    validate(raw)
}

fn unknown_keys(value: &serde_json::Value) -> Vec<String> {
    let schema: BTreeMap<&str, &[&str]> = SCHEMA.iter().copied().collect();
    let mut out = Vec::new();
    let Some(root) = value.as_object() else {
        out.push("<root is not a table>".to_string());
        return out;
    };
    let check = |prefix: &str, obj: &serde_json::Value, allowed: &[&str], out: &mut Vec<String>| {
        if let Some(map) = obj.as_object() {
            out.extend(
                map.keys()
                    .filter(|k| !allowed.contains(&k.as_str()))
                    .map(|k| format!("{prefix}.{k}")),
            );
        }
    };
    for (section, body) in root {
        let Some(allowed) = schema.get(section.as_str()) else {
            out.push(section.clone());
            continue;
        };
        match body {
            serde_json::Value::Array(items) => {
                for (i, item) in items.iter().enumerate() {
                    check(&format!("{section}[{i}]"), item, allowed, &mut out);
                }
            }
            _ => check(section, body, allowed, &mut out),
        }
        if section == "trench" {
            if let Some(serde_json::Value::Array(segs)) = body.get("segments") {
                for (i, seg) in segs.iter().enumerate() {
                    check(&format!("trench.segments[{i}]"), seg, SEGMENT_KEYS, &mut out);
                }
            }
        }
    }
    out
}

fn validate(raw: RawConfig) -> Result<DeviceConfig> {
    fn tag(section: &'static str) -> impl Fn(Error) -> Error {
        move |e| Error::Validation(format!("{section}: {e}"))
    }
    let trench = raw
        .trench
        .map(|t| TrenchProfile::new(t.depth_nm, t.sidewall_deg, t.segments))
        .transpose()
        .map_err(tag("trench"))?;
    let deposition = raw
        .deposition
        .iter()
        .map(|d| DepositionStep::with_rotation(d.tilt_deg, d.nominal_nm, d.in_plane_rotation_deg))
        .collect::<Result<Vec<_>>>()
        .map_err(tag("deposition"))?;
    if let Some(j) = &raw.junction {
        (|| {
            ensure_positive("delta_uev", j.delta_uev)?;
            for (name, v) in [
                ("rn_ohm", j.rn_ohm),
                ("area_um2", j.area_um2),
                ("rna_ohm_um2", j.rna_ohm_um2),
            ] {
                if let Some(v) = v {
                    ensure_positive(name, v)?;
                }
            }
            Ok(())
        })()
        .map_err(tag("junction"))?;
    }
    if let Some(t) = &raw.transmon {
        t.derive().map_err(tag("transmon"))?;
    }
    Ok(DeviceConfig {
        trench,
        deposition,
        junction: raw.junction,
        transmon: raw.transmon,
    })
}
