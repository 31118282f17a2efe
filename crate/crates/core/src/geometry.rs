//! First-order shadow geometry for double-angle deposition into an etched trench.
//!
//! Cross-trench coordinate `x` runs from the top edge of the left wall (x = 0)
//! to the top edge of the right wall (x = top width). A positive tilt sends the
//! beam over the left wall, a negative tilt over the right wall. Shadows are
//! anchored at the wall top edges, so the shadow cast on the floor is
//! `depth·tan|tilt|` wide regardless of the sidewall slope. Films are treated as
//! infinitely thin and the bottom electrode casts no shadow of its own.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_positive, Error, Result};
use crate::units::NM2_TO_UM2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub length_nm: f64,
    pub width_nm: f64,
}

/// Symmetric trapezoidal trench with a piecewise-constant top width.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrenchProfile {
    depth_nm: f64,
    sidewall_deg: f64,
    segments: Vec<Segment>,
}

impl TrenchProfile {
    pub fn new(depth_nm: f64, sidewall_deg: f64, segments: Vec<Segment>) -> Result<Self> {
        ensure_positive("trench depth", depth_nm)?;
        if !(sidewall_deg > 0.0 && sidewall_deg <= 90.0) {
            return Err(Error::domain(format!(
                "sidewall angle must lie in (0, 90] degrees, got {sidewall_deg}"
            )));
        }
        if segments.is_empty() {
            return Err(Error::domain("trench needs at least one segment"));
        }
        let inset = depth_nm / sidewall_deg.to_radians().tan();
        for (i, seg) in segments.iter().enumerate() {
            ensure_positive(&format!("segment {i} length"), seg.length_nm)?;
            ensure_positive(&format!("segment {i} width"), seg.width_nm)?;
            if seg.width_nm <= 2.0 * inset {
                return Err(Error::domain(format!(
                    "segment {i}: width {} nm leaves no floor (walls meet at {} nm)",
                    seg.width_nm,
                    2.0 * inset
                )));
            }
        }
        Ok(Self {
            depth_nm,
            sidewall_deg,
            segments,
        })
    }

    /// Single straight trench.
    pub fn uniform(depth_nm: f64, sidewall_deg: f64, width_nm: f64, length_nm: f64) -> Result<Self> {
        Self::new(
            depth_nm,
            sidewall_deg,
            vec![Segment {
                length_nm,
                width_nm,
            }],
        )
    }

    pub fn depth_nm(&self) -> f64 {
        self.depth_nm
    }

    pub fn sidewall_deg(&self) -> f64 {
        self.sidewall_deg
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// Horizontal distance from a wall's top edge to its base.
    pub fn wall_inset_nm(&self) -> f64 {
        if self.sidewall_deg == 90.0 {
            0.0
        } else {
            self.depth_nm / self.sidewall_deg.to_radians().tan()
        }
    }

    /// Same trench traversed in the opposite direction along its axis.
    pub fn mirrored(&self) -> Self {
        let mut segments = self.segments.clone();
        segments.reverse();
        Self {
            segments,
            ..self.clone()
        }
    }
}

/// One angled evaporation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DepositionStep {
    tilt_deg: f64,
    nominal_nm: f64,
    in_plane_rotation_deg: f64,
}

impl DepositionStep {
    pub fn new(tilt_deg: f64, nominal_nm: f64) -> Result<Self> {
        Self::with_rotation(tilt_deg, nominal_nm, 0.0)
    }

    pub fn with_rotation(tilt_deg: f64, nominal_nm: f64, in_plane_rotation_deg: f64) -> Result<Self> {
        check_tilt(tilt_deg)?;
        ensure_positive("nominal thickness", nominal_nm)?;
        check_rotation(in_plane_rotation_deg)?;
        Ok(Self {
            tilt_deg,
            nominal_nm,
            in_plane_rotation_deg,
        })
    }

    pub fn tilt_deg(&self) -> f64 {
        self.tilt_deg
    }

    pub fn nominal_nm(&self) -> f64 {
        self.nominal_nm
    }

    pub fn in_plane_rotation_deg(&self) -> f64 {
        self.in_plane_rotation_deg
    }

    /// Film thickness actually landing on a horizontal surface.
    pub fn effective_thickness_nm(&self) -> f64 {
        self.nominal_nm * self.tilt_deg.to_radians().cos()
    }

    /// Cross-trench shadow on the floor, including the in-plane rotation.
    fn cross_shadow_nm(&self, depth_nm: f64, extra_rotation_deg: f64) -> f64 {
        let rot = (self.in_plane_rotation_deg + extra_rotation_deg).to_radians();
        depth_nm * self.tilt_deg.abs().to_radians().tan() * rot.cos()
    }
}

fn check_tilt(tilt_deg: f64) -> Result<()> {
    if tilt_deg.is_finite() && tilt_deg.abs() < 90.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("|tilt| must be below 90 degrees, got {tilt_deg}")))
    }
}

fn check_rotation(rot_deg: f64) -> Result<()> {
    if rot_deg.is_finite() && rot_deg.abs() < 90.0 {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "|in-plane rotation| must be below 90 degrees, got {rot_deg}"
        )))
    }
}

fn check_opposite(t1: f64, t2: f64) -> Result<()> {
    if t1 * t2 < 0.0 {
        Ok(())
    } else {
        Err(Error::SameSideDeposition(t1, t2))
    }
}

/// Thickness on a horizontal surface for a film deposited at `tilt_deg`.
pub fn effective_thickness(nominal_nm: f64, tilt_deg: f64) -> Result<f64> {
    ensure_positive("nominal thickness", nominal_nm)?;
    check_tilt(tilt_deg)?;
    Ok(nominal_nm * tilt_deg.to_radians().cos())
}

/// Width of the floor shadow cast by the upstream wall's top edge.
pub fn floor_shadow(depth_nm: f64, tilt_deg: f64) -> Result<f64> {
    ensure_positive("depth", depth_nm)?;
    check_tilt(tilt_deg)?;
    Ok(depth_nm * tilt_deg.abs().to_radians().tan())
}

/// Narrowest trench width that still forms an overlap is anything strictly above this.
///
/// Assumes the shadows reach past the wall bases, which holds for any tilt
/// steeper than the sidewall complement.
pub fn min_width_for_overlap(depth_nm: f64, tilt1_deg: f64, tilt2_deg: f64) -> Result<f64> {
    check_opposite(tilt1_deg, tilt2_deg)?;
    Ok(floor_shadow(depth_nm, tilt1_deg)? + floor_shadow(depth_nm, tilt2_deg)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Floor interval coated by one deposition, per trench segment (`None` = fully shadowed).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FloorCoverage {
    pub segments: Vec<Option<Interval>>,
}

fn segment_coverage(width: f64, inset: f64, shadow: f64, tilt_deg: f64) -> Option<Interval> {
    let (lo, hi) = if tilt_deg >= 0.0 {
        (shadow.max(inset), width - inset)
    } else {
        (inset, width - shadow.max(inset))
    };
    (lo < hi).then_some(Interval { lo, hi })
}

fn coverage_with(profile: &TrenchProfile, step: &DepositionStep, extra_rot: f64) -> FloorCoverage {
    let inset = profile.wall_inset_nm();
    let shadow = step.cross_shadow_nm(profile.depth_nm, extra_rot);
    FloorCoverage {
        segments: profile
            .segments
            .iter()
            .map(|seg| segment_coverage(seg.width_nm, inset, shadow, step.tilt_deg))
            .collect(),
    }
}

/// Floor coverage of one deposition step.
pub fn coverage(profile: &TrenchProfile, step: &DepositionStep) -> FloorCoverage {
    coverage_with(profile, step, 0.0)
}

/// Overlap of the two electrodes on the trench floor.
///
/// When several contiguous runs of segments form an overlap, the run with the
/// largest area is reported; `overlap_width_nm` is its length-weighted mean width.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JunctionGeometry {
    pub overlap_width_nm: f64,
    pub overlap_length_nm: f64,
    pub area_um2: f64,
    pub formed: bool,
    /// Overlap width of every segment, in profile order.
    pub segment_overlap_nm: Vec<f64>,
}

impl JunctionGeometry {
    fn from_segments(profile: &TrenchProfile, segment_overlap_nm: Vec<f64>) -> Self {
        // (area nm², length nm) of the best contiguous run
        let mut best = (0.0_f64, 0.0_f64);
        let mut run = (0.0_f64, 0.0_f64);
        for (seg, &w) in profile.segments.iter().zip(&segment_overlap_nm) {
            if w > 0.0 {
                run.0 += w * seg.length_nm;
                run.1 += seg.length_nm;
                if run.0 > best.0 {
                    best = run;
                }
            } else {
                run = (0.0, 0.0);
            }
        }
        if best.0 > 0.0 {
            let width = best.0 / best.1;
            JunctionGeometry {
                overlap_width_nm: width,
                overlap_length_nm: best.1,
                area_um2: width * best.1 * NM2_TO_UM2,
                formed: true,
                segment_overlap_nm,
            }
        } else {
            JunctionGeometry {
                overlap_width_nm: 0.0,
                overlap_length_nm: 0.0,
                area_um2: 0.0,
                formed: false,
                segment_overlap_nm,
            }
        }
    }
}

fn overlap_with(
    profile: &TrenchProfile,
    step1: &DepositionStep,
    step2: &DepositionStep,
    extra_rot: f64,
) -> Result<JunctionGeometry> {
    check_opposite(step1.tilt_deg, step2.tilt_deg)?;
    let c1 = coverage_with(profile, step1, extra_rot);
    let c2 = coverage_with(profile, step2, extra_rot);
    let widths = c1
        .segments
        .iter()
        .zip(&c2.segments)
        .map(|(a, b)| match (a, b) {
            (Some(a), Some(b)) => (a.hi.min(b.hi) - a.lo.max(b.lo)).max(0.0),
            _ => 0.0,
        })
        .collect();
    Ok(JunctionGeometry::from_segments(profile, widths))
}

/// Junction formed by two opposite-tilt depositions.
pub fn junction_geometry(
    profile: &TrenchProfile,
    step1: &DepositionStep,
    step2: &DepositionStep,
) -> Result<JunctionGeometry> {
    overlap_with(profile, step1, step2, 0.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RotatedJunction {
    pub geometry: JunctionGeometry,
    /// Along-trench displacement of each electrode's shadow edge, nm.
    pub along_shift_nm: [f64; 2],
}

/// Junction geometry when the chip is rotated in-plane by `rotation_deg`
/// relative to the deposition azimuth.
pub fn overlap_vs_rotation(
    profile: &TrenchProfile,
    step1: &DepositionStep,
    step2: &DepositionStep,
    rotation_deg: f64,
) -> Result<RotatedJunction> {
    check_rotation(rotation_deg)?;
    for s in [step1, step2] {
        check_rotation(s.in_plane_rotation_deg + rotation_deg)?;
    }
    let geometry = overlap_with(profile, step1, step2, rotation_deg)?;
    let shift = |s: &DepositionStep| {
        let rot = (s.in_plane_rotation_deg + rotation_deg).to_radians();
        profile.depth_nm * s.tilt_deg.to_radians().tan() * rot.sin()
    };
    Ok(RotatedJunction {
        geometry,
        along_shift_nm: [shift(step1), shift(step2)],
    })
}
