//! End-to-end cat-state generation pipelines.
//!
//! Two schemes produce a coherent-superposition state in output mode `o2`
//! from a weak cross-Kerr phase `phi` and a strong coherent drive `alpha`:
//!
//! * **Protocol 1** routes a single photon, prepared in `(|H> + |V>)/sqrt2`,
//!   through a polarization beam splitter so that its H arm Kerr-couples to
//!   field mode `a1` and its V arm to `a2`. After a 45-degree rotation the
//!   photon polarization is measured; either outcome projects the fields
//!   onto an entangled coherent state, and a recombining beam splitter turns
//!   that into a coherent state in `o1` times an even (H) or odd (V) cat in
//!   `o2`. Both outcomes yield a cat, so generation succeeds at every run.
//!
//! * **Protocol 2** replaces the single photon with a polarization-singlet
//!   photon pair; each photon Kerr-couples one arm. Reading the detector
//!   pattern after per-photon rotators and PBSs selects the same two
//!   entangled coherent states, and the rest of the pipeline is identical.
//!
//! The asymmetric-Kerr variant [`run_protocol1_imperfect`] lets the two arms
//! acquire different dynamical phases (`phi` vs `phi + epsilon`), discards
//! mode `o1`, and reports the resulting mixed `o2` state together with its
//! fidelity against the ideal cat.
//!
//! Checkpoint names (`"eq3"`, `"eq4"`, `"eq5"`, `"eq6"`, `"eq7"`, `"eq8"`,
//! `"post_kerr"`) are stable API strings used by the tests and the CLI.

use std::collections::BTreeMap;

use num_complex::Complex64 as C64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::elements::{
    apply_bs, apply_cross_kerr, apply_pbs, apply_pbs_merge, apply_pol_rotation,
    detector_pattern, measure_polarization, DetectorPattern,
};
use crate::error::{Error, Result};
use crate::mixed::MixedOperator;
use crate::state::{
    Branch, KerrSetting, ModeLayout, PhotonConfig, PhotonMode, Polarization, PureState, LABEL_TOL,
};

/// Cat parity: even is `|g> + |-g>`, odd is `|g> - |-g>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Parity::Even => "+",
            Parity::Odd => "-",
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "+" | "even" => Ok(Parity::Even),
            "-" | "odd" => Ok(Parity::Odd),
            other => Err(Error::invalid("parity", other)),
        }
    }
}

/// Specification of a cat state `N (|gamma> +/- |-gamma>)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CatSpec {
    pub gamma: C64,
    pub parity: Parity,
}

/// Build the normalized cat state on a single field mode named `o2` (the
/// protocols' output port, so results compare directly).
///
/// Errors with [`Error::ZeroNorm`] when `gamma = 0` and the parity is odd.
pub fn build_cat(spec: &CatSpec) -> Result<PureState> {
    let layout = ModeLayout::fields_only(&["o2"])?;
    let raw = PureState::new(
        layout,
        vec![
            Branch::new(C64::new(1.0, 0.0), vec![spec.gamma], vec![]),
            Branch::new(C64::new(spec.parity.sign(), 0.0), vec![-spec.gamma], vec![]),
        ],
    )?;
    Ok(raw.normalize()?.0)
}

/// Output of a full protocol run.
#[derive(Debug, Clone)]
pub struct ProtocolResult {
    /// Named state snapshots taken at each derivation step.
    pub checkpoints: BTreeMap<String, PureState>,
    /// The post-selected measurement record (`"H"`, `"V"`, `"one_detector"`,
    /// `"both_detectors"`).
    pub outcome: String,
    /// Born probability of that record.
    pub outcome_prob: f64,
    /// Exact single-mode marginal of output port `o2`: the generated cat.
    pub cat_o2: PureState,
    /// Coherent label of the factored `o1` marginal.
    pub o1_label: C64,
    /// Exact cat amplitude `alpha (1 - e^{i phi}) / sqrt2`.
    pub cat_amplitude_exact: C64,
    /// Small-phi amplitude `gamma phi = -i alpha phi / sqrt2`.
    pub cat_amplitude_approx: C64,
}

/// Layout of the single-photon scheme: field modes `a1`, `a2` and one photon
/// `b` whose allowed paths are `in`, `kerr_h`, `kerr_v`, `out`, `det_h`,
/// `det_v`.
pub fn protocol1_layout() -> ModeLayout {
    ModeLayout::new(
        &["a1", "a2"],
        vec![PhotonMode::new(
            "b",
            &["in", "kerr_h", "kerr_v", "out", "det_h", "det_v"],
        )],
    )
    .expect("static layout is valid")
}

/// Layout of the twin-photon scheme: field modes `a1`, `a2` and photons
/// `b1`, `b2` with paths `in`, `kerr`, `bypass`, `out`, `det_h`, `det_v`.
pub fn protocol2_layout() -> ModeLayout {
    let paths = ["in", "kerr", "bypass", "out", "det_h", "det_v"];
    ModeLayout::new(
        &["a1", "a2"],
        vec![PhotonMode::new("b1", &paths), PhotonMode::new("b2", &paths)],
    )
    .expect("static layout is valid")
}

fn check_alpha(alpha: C64) -> Result<()> {
    if !(alpha.re.is_finite() && alpha.im.is_finite()) {
        return Err(Error::NonFinite("alpha"));
    }
    if alpha == C64::new(0.0, 0.0) {
        return Err(Error::invalid("alpha", "the drive amplitude must be nonzero"));
    }
    Ok(())
}

/// `gamma phi = -i alpha phi / sqrt2`.
pub fn gamma_phi(alpha: C64, phi: f64) -> C64 {
    C64::new(0.0, -1.0) * alpha * phi / 2.0f64.sqrt()
}

/// `alpha (1 - e^{i phi}) / sqrt2`: the exact displacement of the cat
/// branches before the small-phi Taylor step.
pub fn cat_amplitude_exact(alpha: C64, phi: f64) -> C64 {
    alpha * (C64::new(1.0, 0.0) - C64::new(0.0, phi).exp()) / 2.0f64.sqrt()
}

const FRAC_PI_4: f64 = std::f64::consts::FRAC_PI_4;

/// Run the single-photon pipeline up to (and including) the detection PBS.
/// Returns the pre-measurement state plus the `eq3` and `eq4` checkpoints.
fn protocol1_premeasure(alpha: C64, kerr: KerrSetting) -> Result<(PureState, PureState, PureState)> {
    let layout = protocol1_layout();
    let half = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let drive = alpha * 2.0f64.sqrt();
    let init = {
        let mut s = PureState::new(
            layout,
            vec![
                Branch::new(
                    half,
                    vec![drive, C64::new(0.0, 0.0)],
                    vec![PhotonConfig::new(Polarization::H, "in")],
                ),
                Branch::new(
                    half,
                    vec![drive, C64::new(0.0, 0.0)],
                    vec![PhotonConfig::new(Polarization::V, "in")],
                ),
            ],
        )?;
        s.set_normalized(true);
        s
    };
    // split the drive equally onto a1, a2
    let s = apply_bs(&init, "a1", "a2", FRAC_PI_4)?;
    // route the photon, couple each arm, recombine
    let s = apply_pbs(&s, "b", "in", "kerr_h", "kerr_v")?;
    let s = apply_cross_kerr(&s, "a1", "b", "kerr_h", kerr.primary_phase())?;
    let s = apply_cross_kerr(&s, "a2", "b", "kerr_v", kerr.secondary_phase())?;
    let eq3 = apply_pbs_merge(&s, "b", "kerr_h", "kerr_v", "out")?;
    let eq4 = apply_pol_rotation(&eq3, "b", FRAC_PI_4)?;
    let premeasure = apply_pbs(&eq4, "b", "out", "det_h", "det_v")?;
    Ok((premeasure, eq3, eq4))
}

/// After post-selection: recombine the field arms and factor the output.
/// Returns the `eq7` state, the coherent `o1` label, and the normalized cat.
fn recombine_and_split(field: &PureState) -> Result<(PureState, C64, PureState)> {
    let eq7 = apply_bs(field, "a1", "a2", FRAC_PI_4)?
        .with_mode_renamed("a1", "o1")?
        .with_mode_renamed("a2", "o2")?;
    let (o1_label, cat_raw) = split_coherent_mode(&eq7, "o1")?;
    let (cat, _) = cat_raw.normalize()?;
    Ok((eq7, o1_label, cat))
}

/// Split off a field mode on which every branch carries the same coherent
/// label: `|l>_mode (x) rest`. Errors with [`Error::NotAProduct`] when the
/// labels disagree beyond tolerance.
pub fn split_coherent_mode(s: &PureState, mode: &str) -> Result<(C64, PureState)> {
    let m = s.layout().field_index(mode)?;
    let first = s
        .branches()
        .first()
        .ok_or(Error::ZeroNorm)?
        .labels[m];
    let tol = LABEL_TOL * (1.0 + first.norm());
    if s.branches().iter().any(|b| (b.labels[m] - first).norm() > tol) {
        return Err(Error::NotAProduct);
    }
    let fields: Vec<&str> = s
        .layout()
        .field_modes()
        .iter()
        .filter(|f| f.as_str() != mode)
        .map(|f| f.as_str())
        .collect();
    let layout = ModeLayout::new(&fields, s.layout().photons().to_vec())?;
    let branches = s
        .branches()
        .iter()
        .map(|b| {
            let labels = b
                .labels
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != m)
                .map(|(_, l)| *l)
                .collect();
            Branch::new(b.coeff, labels, b.photons.clone())
        })
        .collect();
    Ok((first, PureState::new(layout, branches)?))
}

/// Single-photon scheme, post-selected on the photon polarization.
///
/// Outcome `H` produces the even cat in `o2`, outcome `V` the odd cat; the
/// `o1` marginal is the coherent state `|(alpha + alpha')/sqrt2>` in both
/// cases.
pub fn run_protocol1(alpha: C64, phi: f64, outcome: Polarization) -> Result<ProtocolResult> {
    check_alpha(alpha)?;
    let kerr = KerrSetting::symmetric(phi)?;
    let (premeasure, eq3, eq4) = protocol1_premeasure(alpha, kerr)?;
    let (prob, post) = measure_polarization(&premeasure, "b", outcome)?;
    finish_protocol1(alpha, phi, outcome, prob, &post, eq3, eq4)
}

/// Single-photon scheme with the outcome sampled from the Born rule using a
/// seeded deterministic generator. Demonstration-run counterpart of the
/// explicit post-selection API.
pub fn sample_protocol1(alpha: C64, phi: f64, seed: u64) -> Result<ProtocolResult> {
    check_alpha(alpha)?;
    let kerr = KerrSetting::symmetric(phi)?;
    let (premeasure, eq3, eq4) = protocol1_premeasure(alpha, kerr)?;
    let (p_h, post_h) = match measure_polarization(&premeasure, "b", Polarization::H) {
        Ok((p, s)) => (p, Some(s)),
        Err(Error::ImpossibleOutcome(_)) => (0.0, None),
        Err(e) => return Err(e),
    };
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let u: f64 = rng.gen_range(0.0..1.0);
    if u < p_h {
        let post = post_h.expect("p_h > 0 implies a post state");
        finish_protocol1(alpha, phi, Polarization::H, p_h, &post, eq3, eq4)
    } else {
        let (p_v, post) = measure_polarization(&premeasure, "b", Polarization::V)?;
        finish_protocol1(alpha, phi, Polarization::V, p_v, &post, eq3, eq4)
    }
}

fn finish_protocol1(
    alpha: C64,
    phi: f64,
    outcome: Polarization,
    prob: f64,
    post: &PureState,
    eq3: PureState,
    eq4: PureState,
) -> Result<ProtocolResult> {
    let field = post.field_factor()?;
    let (eq7, o1_label, cat) = recombine_and_split(&field)?;
    let mut checkpoints = BTreeMap::new();
    checkpoints.insert("eq3".to_string(), eq3);
    checkpoints.insert("eq4".to_string(), eq4);
    let sel_name = match outcome {
        Polarization::H => "eq5",
        Polarization::V => "eq6",
    };
    checkpoints.insert(sel_name.to_string(), field);
    checkpoints.insert("eq7".to_string(), eq7);
    Ok(ProtocolResult {
        checkpoints,
        outcome: outcome.as_str().to_string(),
        outcome_prob: prob,
        cat_o2: cat,
        o1_label,
        cat_amplitude_exact: cat_amplitude_exact(alpha, phi),
        cat_amplitude_approx: gamma_phi(alpha, phi),
    })
}

/// Twin-photon pipeline up to (and including) the detection PBSs.
/// Returns the pre-readout state plus the `post_kerr` and `eq8` checkpoints.
fn protocol2_premeasure(alpha: C64, phi: f64) -> Result<(PureState, PureState, PureState)> {
    let layout = protocol2_layout();
    let half = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let drive = alpha * 2.0f64.sqrt();
    // singlet pair (|H,V> - |V,H>)/sqrt2 times the undivided drive
    let init = {
        let mut s = PureState::new(
            layout,
            vec![
                Branch::new(
                    half,
                    vec![drive, C64::new(0.0, 0.0)],
                    vec![
                        PhotonConfig::new(Polarization::H, "in"),
                        PhotonConfig::new(Polarization::V, "in"),
                    ],
                ),
                Branch::new(
                    -half,
                    vec![drive, C64::new(0.0, 0.0)],
                    vec![
                        PhotonConfig::new(Polarization::V, "in"),
                        PhotonConfig::new(Polarization::H, "in"),
                    ],
                ),
            ],
        )?;
        s.set_normalized(true);
        s
    };
    let s = apply_bs(&init, "a1", "a2", FRAC_PI_4)?;
    let s = apply_pbs(&s, "b1", "in", "kerr", "bypass")?;
    let s = apply_pbs(&s, "b2", "in", "kerr", "bypass")?;
    let s = apply_cross_kerr(&s, "a1", "b1", "kerr", phi)?;
    let s = apply_cross_kerr(&s, "a2", "b2", "kerr", phi)?;
    let s = apply_pbs_merge(&s, "b1", "kerr", "bypass", "out")?;
    let post_kerr = apply_pbs_merge(&s, "b2", "kerr", "bypass", "out")?;
    let s = apply_pol_rotation(&post_kerr, "b1", FRAC_PI_4)?;
    let eq8 = apply_pol_rotation(&s, "b2", FRAC_PI_4)?;
    let s = apply_pbs(&eq8, "b1", "out", "det_h", "det_v")?;
    let preread = apply_pbs(&s, "b2", "out", "det_h", "det_v")?;
    Ok((preread, post_kerr, eq8))
}

/// Twin-photon scheme, post-selected on the detector pattern.
///
/// `OneDetector` reproduces protocol 1's H branch (even cat),
/// `BothDetectors` the V branch (odd cat); the recombination step is shared.
pub fn run_protocol2(alpha: C64, phi: f64, pattern: DetectorPattern) -> Result<ProtocolResult> {
    check_alpha(alpha)?;
    KerrSetting::symmetric(phi)?;
    let (preread, post_kerr, eq8) = protocol2_premeasure(alpha, phi)?;
    let (prob, post) = detector_pattern(&preread, ("b1", "b2"), pattern)?;
    finish_protocol2(alpha, phi, pattern, prob, &post, post_kerr, eq8)
}

/// Seeded sampling variant of [`run_protocol2`].
pub fn sample_protocol2(alpha: C64, phi: f64, seed: u64) -> Result<ProtocolResult> {
    check_alpha(alpha)?;
    KerrSetting::symmetric(phi)?;
    let (preread, post_kerr, eq8) = protocol2_premeasure(alpha, phi)?;
    let (p_one, post_one) = match detector_pattern(&preread, ("b1", "b2"), DetectorPattern::OneDetector)
    {
        Ok((p, s)) => (p, Some(s)),
        Err(Error::ImpossibleOutcome(_)) => (0.0, None),
        Err(e) => return Err(e),
    };
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let u: f64 = rng.gen_range(0.0..1.0);
    if u < p_one {
        let post = post_one.expect("p_one > 0 implies a post state");
        finish_protocol2(alpha, phi, DetectorPattern::OneDetector, p_one, &post, post_kerr, eq8)
    } else {
        let (p, post) = detector_pattern(&preread, ("b1", "b2"), DetectorPattern::BothDetectors)?;
        finish_protocol2(alpha, phi, DetectorPattern::BothDetectors, p, &post, post_kerr, eq8)
    }
}

fn finish_protocol2(
    alpha: C64,
    phi: f64,
    pattern: DetectorPattern,
    prob: f64,
    post: &PureState,
    post_kerr: PureState,
    eq8: PureState,
) -> Result<ProtocolResult> {
    let field = post.field_factor()?;
    let (eq7, o1_label, cat) = recombine_and_split(&field)?;
    let mut checkpoints = BTreeMap::new();
    checkpoints.insert("post_kerr".to_string(), post_kerr);
    checkpoints.insert("eq8".to_string(), eq8);
    let sel_name = match pattern {
        DetectorPattern::OneDetector => "eq5",
        DetectorPattern::BothDetectors => "eq6",
    };
    checkpoints.insert(sel_name.to_string(), field);
    checkpoints.insert("eq7".to_string(), eq7);
    Ok(ProtocolResult {
        checkpoints,
        outcome: pattern.as_str().to_string(),
        outcome_prob: prob,
        cat_o2: cat,
        o1_label,
        cat_amplitude_exact: cat_amplitude_exact(alpha, phi),
        cat_amplitude_approx: gamma_phi(alpha, phi),
    })
}

/// Result of the asymmetric-Kerr run.
#[derive(Debug, Clone)]
pub struct ImperfectionRun {
    /// Mixed `o2` state after discarding `o1`, unit trace.
    pub rho_o2: MixedOperator,
    /// Fidelity of `rho_o2` against the ideal even cat of the symmetric run.
    pub fidelity: f64,
    /// Born probability of the fixed H outcome.
    pub outcome_prob: f64,
    /// Exact phase of the `o1`-overlap that weights the cross dyad.
    pub cross_phase_exact: f64,
    /// Its leading-order value `-|alpha|^2 epsilon`.
    pub cross_phase_leading: f64,
    /// Magnitude of the `o1` overlap: the cross-dyad weight relative to the
    /// diagonal ones.
    pub cross_overlap_magnitude: f64,
}

/// Single-photon scheme in which the two Kerr interactions last unequal
/// times: arm `a1` acquires phase `phi`, arm `a2` phase `phi + epsilon`. The
/// photon is detected horizontally. Mode `o1` is then discarded, leaving a
/// mixed cat whose off-diagonal coherence is suppressed and rotated by the
/// `o1` overlap.
pub fn run_protocol1_imperfect(alpha: C64, phi: f64, epsilon: f64) -> Result<ImperfectionRun> {
    check_alpha(alpha)?;
    let kerr = KerrSetting::new(phi, epsilon)?;
    let (premeasure, _, _) = protocol1_premeasure(alpha, kerr)?;
    let (prob, post) = measure_polarization(&premeasure, "b", Polarization::H)?;
    // Normalized |alpha', alpha> + |alpha, alpha''> over a1, a2.
    let field = post.field_factor()?;
    let mixed_eq7 = apply_bs(&field, "a1", "a2", FRAC_PI_4)?
        .with_mode_renamed("a1", "o1")?
        .with_mode_renamed("a2", "o2")?;

    // Identify the two branches by their o2 labels; read off the o1 labels
    // that control the cross-dyad weight.
    let g1 = cat_amplitude_exact(alpha, phi); // (alpha - alpha')/sqrt2 up to sign
    let branches = mixed_eq7.branches();
    if branches.len() != 2 {
        return Err(Error::NotAProduct);
    }
    let (b_phi, b_eps) = if (branches[0].labels[1] + g1).norm() <= (branches[1].labels[1] + g1).norm()
    {
        (&branches[0], &branches[1])
    } else {
        (&branches[1], &branches[0])
    };
    let u_phi = b_phi.labels[0];
    let u_eps = b_eps.labels[0];
    let cross_exponent = crate::overlap::overlap_exponent(u_eps, u_phi);

    let rho_o2 = mixed_eq7.partial_trace_field("o1")?;
    let ideal = build_cat(&CatSpec {
        gamma: g1,
        parity: Parity::Even,
    })?;
    let fidelity = rho_o2.fidelity_mixed_pure(&ideal)?;
    Ok(ImperfectionRun {
        rho_o2,
        fidelity,
        outcome_prob: prob,
        cross_phase_exact: cross_exponent.im,
        cross_phase_leading: -alpha.norm_sqr() * epsilon,
        cross_overlap_magnitude: cross_exponent.re.exp(),
    })
}

/// Fidelity between the exact `o2` cat of the symmetric protocol and the
/// small-phi cat `N (|gamma phi> + |-gamma phi>)` with
/// `gamma = -i alpha / sqrt2`. Tends to 1 as `phi -> 0` at fixed
/// `alpha phi`.
pub fn approximation_fidelity(alpha: C64, phi: f64) -> Result<f64> {
    let run = run_protocol1(alpha, phi, Polarization::H)?;
    let approx = build_cat(&CatSpec {
        gamma: run.cat_amplitude_approx,
        parity: Parity::Even,
    })?;
    run.cat_o2.fidelity_pure(&approx)
}
