//! Optical elements acting on CSS states: beam splitters, cross-Kerr media,
//! polarization rotators, polarization beam splitters, and polarization-
//! resolved measurement with Born-rule post-selection.
//!
//! Every element is a pure function from state to state. Photon paths are
//! explicit state rather than implicit wiring, so a mis-ordered circuit fails
//! loudly instead of silently acting on the wrong arm.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::state::{Branch, PhotonConfig, Polarization, PureState, NORM_SQR_FLOOR};

/// Beam-splitter convention. The label map is
///
/// ```text
/// (a, b) -> (a cos t + b sin t,  a sin t - b cos t)      minus_on_second = true
/// (a, b) -> (a cos t - b sin t,  a sin t + b cos t)      minus_on_second = false
/// ```
///
/// Both maps are real orthogonal on the label vector, hence exactly unitary
/// on the state for every angle. The crate-wide default is the first form:
/// at `t = pi/4` it sends `(a, b)` to `((a+b)/sqrt2, (a-b)/sqrt2)`, so the
/// second output of the recombining beam splitter carries the label
/// difference. The underlying physics never fixes such a sign; all protocol
/// checks are phase-insensitive, so the choice is observable only here.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BsConvention {
    pub theta: f64,
    pub minus_on_second: bool,
}

impl BsConvention {
    pub fn fifty_fifty() -> Self {
        BsConvention {
            theta: std::f64::consts::FRAC_PI_4,
            minus_on_second: true,
        }
    }

    pub fn with_angle(theta: f64) -> Self {
        BsConvention {
            theta,
            minus_on_second: true,
        }
    }

    fn map(&self, a: C64, b: C64) -> (C64, C64) {
        let (s, c) = self.theta.sin_cos();
        if self.minus_on_second {
            (a * c + b * s, a * s - b * c)
        } else {
            (a * c - b * s, a * s + b * c)
        }
    }
}

/// Mix field modes `i` and `j` on a beam splitter of mixing angle `theta`,
/// using the crate-wide sign convention.
pub fn apply_bs(s: &PureState, i: &str, j: &str, theta: f64) -> Result<PureState> {
    apply_bs_with(s, i, j, BsConvention::with_angle(theta))
}

pub fn apply_bs_with(s: &PureState, i: &str, j: &str, conv: BsConvention) -> Result<PureState> {
    if i == j {
        return Err(Error::DegenerateModePair(i.to_string()));
    }
    let mi = s.layout().field_index(i)?;
    let mj = s.layout().field_index(j)?;
    Ok(s.map_branches(true, |b| {
        let mut labels = b.labels.clone();
        let (x, y) = conv.map(labels[mi], labels[mj]);
        labels[mi] = x;
        labels[mj] = y;
        vec![Branch::new(b.coeff, labels, b.photons.clone())]
    }))
}

/// Cross-Kerr interaction between a field mode and the photon occupying a
/// given path: in every branch where the photon sits on `path`, the field
/// label is rotated by `e^{i phase}`. Branch coefficients are untouched
/// (a rotated coherent state stays normalized).
pub fn apply_cross_kerr(
    s: &PureState,
    field_mode: &str,
    photon: &str,
    path: &str,
    phase: f64,
) -> Result<PureState> {
    let m = s.layout().field_index(field_mode)?;
    let p = s.layout().photon_index(photon)?;
    s.layout().check_path(p, path)?;
    let rot = C64::new(0.0, phase).exp();
    Ok(s.map_branches(true, |b| {
        let mut labels = b.labels.clone();
        if b.photons[p].path == path {
            labels[m] *= rot;
        }
        vec![Branch::new(b.coeff, labels, b.photons.clone())]
    }))
}

/// Polarization rotator. The matrix is the one the generation schemes are
/// built around:
///
/// ```text
/// H -> cos t |H> + sin t |V>
/// V -> sin t |H> - cos t |V>
/// ```
///
/// At `t = pi/4` this is the Hadamard map `H -> (H+V)/sqrt2`,
/// `V -> (H-V)/sqrt2`. It is a reflection (its own inverse), not a proper
/// rotation: applying the 45-degree element twice restores the input, and at
/// `t = 0` the V component picks up a sign. The post-selection arithmetic of
/// both protocols requires exactly this map; see `protocols`.
pub fn apply_pol_rotation(s: &PureState, photon: &str, theta: f64) -> Result<PureState> {
    let p = s.layout().photon_index(photon)?;
    let (sin, cos) = theta.sin_cos();
    let out = s.map_branches(true, |b| {
        let cfg = &b.photons[p];
        let (amp_h, amp_v) = match cfg.pol {
            Polarization::H => (cos, sin),
            Polarization::V => (sin, -cos),
        };
        let with_pol = |pol: Polarization, amp: f64| -> Branch {
            let mut photons = b.photons.clone();
            photons[p] = PhotonConfig::new(pol, cfg.path.clone());
            Branch::new(b.coeff * amp, b.labels.clone(), photons)
        };
        vec![with_pol(Polarization::H, amp_h), with_pol(Polarization::V, amp_v)]
    });
    Ok(out.merged())
}

/// Polarization beam splitter: the photon enters on `in_path`; horizontal
/// branches leave on `h_path`, vertical ones on `v_path`. Amplitudes are
/// unchanged. Errors if any branch has the photon elsewhere than `in_path`.
pub fn apply_pbs(
    s: &PureState,
    photon: &str,
    in_path: &str,
    h_path: &str,
    v_path: &str,
) -> Result<PureState> {
    let p = s.layout().photon_index(photon)?;
    for path in [in_path, h_path, v_path] {
        s.layout().check_path(p, path)?;
    }
    if s.branches().iter().any(|b| b.photons[p].path != in_path) {
        return Err(Error::PhotonNotOnPath {
            photon: photon.to_string(),
            path: in_path.to_string(),
        });
    }
    Ok(s.map_branches(true, |b| {
        let dest = match b.photons[p].pol {
            Polarization::H => h_path,
            Polarization::V => v_path,
        };
        let mut photons = b.photons.clone();
        photons[p] = PhotonConfig::new(photons[p].pol, dest);
        vec![Branch::new(b.coeff, b.labels.clone(), photons)]
    }))
}

/// The same polarization beam splitter traversed in reverse: recombines the
/// `h_path` (horizontal) and `v_path` (vertical) arms into `out_path`.
/// Errors unless every branch has the photon on the arm matching its
/// polarization.
pub fn apply_pbs_merge(
    s: &PureState,
    photon: &str,
    h_path: &str,
    v_path: &str,
    out_path: &str,
) -> Result<PureState> {
    let p = s.layout().photon_index(photon)?;
    for path in [h_path, v_path, out_path] {
        s.layout().check_path(p, path)?;
    }
    for b in s.branches() {
        let ok = match b.photons[p].pol {
            Polarization::H => b.photons[p].path == h_path,
            Polarization::V => b.photons[p].path == v_path,
        };
        if !ok {
            return Err(Error::PhotonNotOnPath {
                photon: photon.to_string(),
                path: format!("{h_path}|{v_path}"),
            });
        }
    }
    Ok(s.map_branches(true, |b| {
        let mut photons = b.photons.clone();
        photons[p] = PhotonConfig::new(photons[p].pol, out_path.to_string());
        vec![Branch::new(b.coeff, b.labels.clone(), photons)]
    }))
}

/// Born-rule polarization measurement of one photon.
///
/// The probability is the squared norm of the projected component relative
/// to the input norm, computed through the Gram overlap sum (coherent
/// branches are non-orthogonal, so naive coefficient sums would be wrong).
/// Returns the probability and the normalized post-measurement state.
pub fn measure_polarization(
    s: &PureState,
    photon: &str,
    outcome: Polarization,
) -> Result<(f64, PureState)> {
    let p = s.layout().photon_index(photon)?;
    let projected = s.map_branches(false, |b| {
        if b.photons[p].pol == outcome {
            vec![b.clone()]
        } else {
            vec![]
        }
    });
    let n2_in = s.norm_sqr();
    let n2_proj = projected.norm_sqr();
    if !(n2_in > NORM_SQR_FLOOR) {
        return Err(Error::ZeroNorm);
    }
    let prob = n2_proj / n2_in;
    if !(n2_proj > NORM_SQR_FLOOR) {
        return Err(Error::ImpossibleOutcome(outcome.as_str().to_string()));
    }
    let (post, _) = projected.normalize()?;
    Ok((prob, post))
}

/// Readout pattern of the twin-photon scheme: after the rotators and the
/// detection PBSs, either both photons end up on the same detector
/// (`OneDetector`, opposite polarizations after rotation) or the two
/// detectors on distinct sides both fire (`BothDetectors`, equal
/// polarizations).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DetectorPattern {
    OneDetector,
    BothDetectors,
}

impl DetectorPattern {
    pub fn as_str(self) -> &'static str {
        match self {
            DetectorPattern::OneDetector => "one_detector",
            DetectorPattern::BothDetectors => "both_detectors",
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "one" | "one_detector" => Ok(DetectorPattern::OneDetector),
            "both" | "both_detectors" => Ok(DetectorPattern::BothDetectors),
            other => Err(Error::invalid("pattern", other)),
        }
    }
}

/// Two-photon polarization-correlation classes (Bell classes) after the
/// rotators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BellClass {
    /// Opposite polarizations (HV / VH): the singlet-type component.
    Singlet,
    /// Equal polarizations (HH / VV): the triplet-type component.
    Triplet,
}

/// Which Bell class the `one_detector` pattern selects. Kept as a named
/// constant so the mapping can be flipped in one place if an experiment
/// resolves the detector wiring the other way.
pub const ONE_DETECTOR_SELECTS: BellClass = BellClass::Singlet;

/// Project a two-photon state onto the polarization-correlation class
/// selected by `pattern` and renormalize. Returns the Born probability and
/// the post-selected state.
pub fn detector_pattern(
    s: &PureState,
    photons: (&str, &str),
    pattern: DetectorPattern,
) -> Result<(f64, PureState)> {
    let p1 = s.layout().photon_index(photons.0)?;
    let p2 = s.layout().photon_index(photons.1)?;
    let class = match (pattern, ONE_DETECTOR_SELECTS) {
        (DetectorPattern::OneDetector, c) => c,
        (DetectorPattern::BothDetectors, BellClass::Singlet) => BellClass::Triplet,
        (DetectorPattern::BothDetectors, BellClass::Triplet) => BellClass::Singlet,
    };
    let selects = |b: &Branch| -> bool {
        let equal = b.photons[p1].pol == b.photons[p2].pol;
        match class {
            BellClass::Singlet => !equal,
            BellClass::Triplet => equal,
        }
    };
    let projected = s.map_branches(false, |b| if selects(b) { vec![b.clone()] } else { vec![] });
    let n2_in = s.norm_sqr();
    let n2_proj = projected.norm_sqr();
    if !(n2_in > NORM_SQR_FLOOR) {
        return Err(Error::ZeroNorm);
    }
    let prob = n2_proj / n2_in;
    if !(n2_proj > NORM_SQR_FLOOR) {
        return Err(Error::ImpossibleOutcome(pattern.as_str().to_string()));
    }
    let (post, _) = projected.normalize()?;
    Ok((prob, post))
}
