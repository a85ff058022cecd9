//! Coherent-state-superposition (CSS) states.
//!
//! A [`PureState`] is a finite superposition of branches, each branch being a
//! product of one coherent state per field mode and one definite
//! polarization/path configuration per photon:
//!
//! ```text
//! |s> = sum_j  c_j  |l_j1>_m1 ... |l_jM>_mM  |pol_j1, path_j1> ...
//! ```
//!
//! Branches are non-orthogonal in the field part (coherent states overlap),
//! so every norm, inner product and probability is computed through the Gram
//! sum over branch pairs with the log-domain overlap of [`mod@crate::overlap`].
//! Photon configurations are discrete and contribute exact Kronecker deltas.

use std::fmt;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::overlap::{overlap_exponent, ExpSum};

/// Default label-merging tolerance: far below any physically meaningful
/// separation in the protocols, far above double-precision noise.
pub const LABEL_TOL: f64 = 1e-12;
/// Default relative coefficient-pruning tolerance.
pub const COEFF_TOL: f64 = 1e-14;

/// Squared-norm floor (on the exponent-managed scale) below which a state is
/// treated as the result of an impossible post-selection.
pub const NORM_SQR_FLOOR: f64 = 1e-300;

/// Photon polarization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Polarization {
    H,
    V,
}

impl Polarization {
    pub fn as_str(self) -> &'static str {
        match self {
            Polarization::H => "H",
            Polarization::V => "V",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "H" | "h" => Ok(Polarization::H),
            "V" | "v" => Ok(Polarization::V),
            other => Err(Error::invalid("polarization", other)),
        }
    }
}

impl fmt::Display for Polarization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One photon of the layout: an identifier plus the set of spatial paths the
/// photon is allowed to occupy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhotonMode {
    pub id: String,
    pub paths: Vec<String>,
}

impl PhotonMode {
    pub fn new(id: impl Into<String>, paths: &[&str]) -> Self {
        PhotonMode {
            id: id.into(),
            paths: paths.iter().map(|p| p.to_string()).collect(),
        }
    }
}

/// Immutable mode layout: ordered field modes and ordered photons.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModeLayout {
    field_modes: Vec<String>,
    photons: Vec<PhotonMode>,
}

impl ModeLayout {
    pub fn new(field_modes: &[&str], photons: Vec<PhotonMode>) -> Result<Self> {
        let field_modes: Vec<String> = field_modes.iter().map(|m| m.to_string()).collect();
        let mut ids: Vec<&str> = field_modes.iter().map(|s| s.as_str()).collect();
        ids.extend(photons.iter().map(|p| p.id.as_str()));
        for (i, a) in ids.iter().enumerate() {
            if ids[i + 1..].contains(a) {
                return Err(Error::invalid("layout", format!("duplicate identifier `{a}`")));
            }
        }
        for p in &photons {
            if p.paths.is_empty() {
                return Err(Error::invalid(
                    "layout",
                    format!("photon `{}` has no allowed paths", p.id),
                ));
            }
        }
        Ok(ModeLayout {
            field_modes,
            photons,
        })
    }

    /// Layout with field modes only.
    pub fn fields_only(field_modes: &[&str]) -> Result<Self> {
        Self::new(field_modes, Vec::new())
    }

    pub fn field_modes(&self) -> &[String] {
        &self.field_modes
    }

    pub fn photons(&self) -> &[PhotonMode] {
        &self.photons
    }

    pub fn field_index(&self, mode: &str) -> Result<usize> {
        self.field_modes
            .iter()
            .position(|m| m == mode)
            .ok_or_else(|| Error::UnknownMode(mode.to_string()))
    }

    pub fn photon_index(&self, photon: &str) -> Result<usize> {
        self.photons
            .iter()
            .position(|p| p.id == photon)
            .ok_or_else(|| Error::UnknownPhoton(photon.to_string()))
    }

    pub fn check_path(&self, photon_idx: usize, path: &str) -> Result<()> {
        let p = &self.photons[photon_idx];
        if p.paths.iter().any(|q| q == path) {
            Ok(())
        } else {
            Err(Error::UnknownPath {
                photon: p.id.clone(),
                path: path.to_string(),
            })
        }
    }
}

/// Polarization and spatial path of one photon inside one branch.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PhotonConfig {
    pub pol: Polarization,
    pub path: String,
}

impl PhotonConfig {
    pub fn new(pol: Polarization, path: impl Into<String>) -> Self {
        PhotonConfig {
            pol,
            path: path.into(),
        }
    }
}

/// One term of a superposition: coefficient, one coherent label per field
/// mode, one configuration per photon.
#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    pub coeff: C64,
    pub labels: Vec<C64>,
    pub photons: Vec<PhotonConfig>,
}

impl Branch {
    pub fn new(coeff: C64, labels: Vec<C64>, photons: Vec<PhotonConfig>) -> Self {
        Branch {
            coeff,
            labels,
            photons,
        }
    }

    fn is_finite(&self) -> bool {
        self.coeff.re.is_finite()
            && self.coeff.im.is_finite()
            && self
                .labels
                .iter()
                .all(|l| l.re.is_finite() && l.im.is_finite())
    }
}

/// Gram-sum exponent over the field labels of two branches, `None` when the
/// photon configurations differ (exact Kronecker delta).
fn branch_pair_exponent(x: &Branch, y: &Branch) -> Option<C64> {
    if x.photons != y.photons {
        return None;
    }
    let mut e = C64::new(0.0, 0.0);
    for (a, b) in x.labels.iter().zip(&y.labels) {
        e += overlap_exponent(*a, *b);
    }
    Some(e)
}

/// A finite superposition of coherent branches over a fixed mode layout.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    layout: ModeLayout,
    branches: Vec<Branch>,
    normalized: bool,
}

impl PureState {
    /// Build a state, validating branch shapes, paths and finiteness.
    /// The result is not assumed normalized.
    pub fn new(layout: ModeLayout, branches: Vec<Branch>) -> Result<Self> {
        for b in &branches {
            if b.labels.len() != layout.field_modes.len() {
                return Err(Error::invalid(
                    "branch",
                    format!(
                        "label vector length {} does not match field-mode count {}",
                        b.labels.len(),
                        layout.field_modes.len()
                    ),
                ));
            }
            if b.photons.len() != layout.photons.len() {
                return Err(Error::invalid(
                    "branch",
                    format!(
                        "photon config count {} does not match photon count {}",
                        b.photons.len(),
                        layout.photons.len()
                    ),
                ));
            }
            if !b.is_finite() {
                return Err(Error::NonFinite("branch"));
            }
            for (k, cfg) in b.photons.iter().enumerate() {
                layout.check_path(k, &cfg.path)?;
            }
        }
        Ok(PureState {
            layout,
            branches,
            normalized: false,
        })
    }

    /// Single coherent state `|label>` on a one-field-mode layout.
    pub fn coherent(mode: &str, label: C64) -> Result<Self> {
        let layout = ModeLayout::fields_only(&[mode])?;
        let mut s = PureState::new(
            layout,
            vec![Branch::new(C64::new(1.0, 0.0), vec![label], Vec::new())],
        )?;
        s.normalized = true;
        Ok(s)
    }

    pub fn layout(&self) -> &ModeLayout {
        &self.layout
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub(crate) fn set_normalized(&mut self, flag: bool) {
        self.normalized = flag;
    }

    /// Map every branch through `f`, preserving the normalized flag only if
    /// the caller promises a unitary action (`unitary = true`).
    pub(crate) fn map_branches(
        &self,
        unitary: bool,
        f: impl Fn(&Branch) -> Vec<Branch>,
    ) -> PureState {
        let branches = self.branches.iter().flat_map(f).collect();
        PureState {
            layout: self.layout.clone(),
            branches,
            normalized: unitary && self.normalized,
        }
    }

    /// Hermitian inner product `<self|other>` via the Gram sum over branch
    /// pairs. Photon configurations contribute 0/1 by exact match.
    pub fn inner_product(&self, other: &PureState) -> Result<C64> {
        if self.layout != other.layout {
            return Err(Error::LayoutMismatch);
        }
        let mut acc = ExpSum::new();
        for x in &self.branches {
            for y in &other.branches {
                if let Some(e) = branch_pair_exponent(x, y) {
                    acc.push(x.coeff.conj() * y.coeff, e);
                }
            }
        }
        Ok(acc.value())
    }

    /// Squared norm (real part of the self inner product).
    pub fn norm_sqr(&self) -> f64 {
        self.inner_product(self)
            .expect("layout always matches itself")
            .re
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().max(0.0).sqrt()
    }

    /// Merge duplicate branches, rescale to unit norm, and return the state
    /// together with the pre-normalization norm.
    ///
    /// Errors with [`Error::ZeroNorm`] when the squared norm is below
    /// [`NORM_SQR_FLOOR`]: such a state can only arise from a post-selection
    /// branch of probability zero.
    pub fn normalize(&self) -> Result<(PureState, f64)> {
        let merged = self.merge_prune(LABEL_TOL, COEFF_TOL);
        let n2 = merged.norm_sqr();
        if !(n2 > NORM_SQR_FLOOR) {
            return Err(Error::ZeroNorm);
        }
        let n = n2.sqrt();
        let inv = C64::new(1.0 / n, 0.0);
        let mut out = merged.map_branches(false, |b| {
            vec![Branch::new(b.coeff * inv, b.labels.clone(), b.photons.clone())]
        });
        out.normalized = true;
        Ok((out, n))
    }

    /// Merge branches whose labels agree within `label_tol` in every mode and
    /// whose photon configs match exactly; then drop branches whose
    /// coefficient magnitude is below `coeff_tol` relative to the largest.
    pub fn merge_prune(&self, label_tol: f64, coeff_tol: f64) -> PureState {
        let mut merged: Vec<Branch> = Vec::with_capacity(self.branches.len());
        for b in &self.branches {
            let hit = merged.iter_mut().find(|m| {
                m.photons == b.photons
                    && m.labels
                        .iter()
                        .zip(&b.labels)
                        .all(|(x, y)| (x - y).norm() < label_tol)
            });
            match hit {
                Some(m) => m.coeff += b.coeff,
                None => merged.push(b.clone()),
            }
        }
        let max_mag = merged
            .iter()
            .map(|b| b.coeff.norm())
            .fold(0.0f64, f64::max);
        let keep = |c: C64| -> bool {
            if c == C64::new(0.0, 0.0) {
                return false;
            }
            c.norm() >= coeff_tol * max_mag
        };
        let branches: Vec<Branch> = merged.into_iter().filter(|b| keep(b.coeff)).collect();
        PureState {
            layout: self.layout.clone(),
            branches,
            // Merging exact duplicates preserves the norm; pruning moves it
            // by < 10 * coeff_tol, which stays inside the normalized
            // invariant only for tolerances at the default scale.
            normalized: self.normalized && 10.0 * coeff_tol < 1e-12,
        }
    }

    /// Merge/prune with the default tolerances.
    pub fn merged(&self) -> PureState {
        self.merge_prune(LABEL_TOL, COEFF_TOL)
    }

    /// `|<t|s>|^2`, normalized defensively by both squared norms so the
    /// result lies in [0, 1] for any finite inputs (equal to the plain
    /// squared overlap when both states are unit-norm).
    pub fn fidelity_pure(&self, t: &PureState) -> Result<f64> {
        let ip = t.inner_product(self)?;
        let denom = self.norm_sqr() * t.norm_sqr();
        if !(denom > NORM_SQR_FLOOR) {
            return Err(Error::ZeroNorm);
        }
        Ok(ip.norm_sqr() / denom)
    }

    /// `1 - |<t|s>|`: zero iff the states are equal up to a global phase.
    pub fn global_phase_distance(&self, t: &PureState) -> Result<f64> {
        Ok(1.0 - self.fidelity_pure(t)?.max(0.0).sqrt())
    }

    /// Rename one field mode (pure relabeling; branches untouched).
    pub fn with_mode_renamed(&self, old: &str, new: &str) -> Result<PureState> {
        let idx = self.layout.field_index(old)?;
        let mut layout = self.layout.clone();
        layout.field_modes[idx] = new.to_string();
        // re-validate uniqueness
        let layout = ModeLayout::new(
            &layout.field_modes.iter().map(|s| s.as_str()).collect::<Vec<_>>(),
            layout.photons,
        )?;
        Ok(PureState {
            layout,
            branches: self.branches.clone(),
            normalized: self.normalized,
        })
    }

    /// Drop all photons, assuming the state factors as
    /// (photon part) x (field part). Branches are grouped by photon
    /// configuration; every group must carry the same field state up to a
    /// complex factor, otherwise [`Error::NotAProduct`] is returned.
    ///
    /// The returned field state is normalized.
    pub fn field_factor(&self) -> Result<PureState> {
        let field_layout = ModeLayout::new(
            &self
                .layout
                .field_modes
                .iter()
                .map(|s| s.as_str())
                .collect::<Vec<_>>(),
            Vec::new(),
        )?;
        if self.layout.photons.is_empty() {
            let (s, _) = PureState {
                layout: field_layout,
                branches: self.branches.clone(),
                normalized: self.normalized,
            }
            .normalize()?;
            return Ok(s);
        }

        // Group branches by photon configuration.
        let mut groups: Vec<(Vec<PhotonConfig>, Vec<Branch>)> = Vec::new();
        for b in &self.branches {
            let fb = Branch::new(b.coeff, b.labels.clone(), Vec::new());
            match groups.iter_mut().find(|(cfg, _)| *cfg == b.photons) {
                Some((_, v)) => v.push(fb),
                None => groups.push((b.photons.clone(), vec![fb])),
            }
        }
        let states: Vec<PureState> = groups
            .into_iter()
            .map(|(_, branches)| PureState {
                layout: field_layout.clone(),
                branches,
                normalized: false,
            })
            .collect();

        // Reference group: largest norm.
        let norms: Vec<f64> = states.iter().map(|s| s.norm_sqr()).collect();
        let (ref_idx, &ref_n2) = norms
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .expect("state has at least one branch group");
        if !(ref_n2 > NORM_SQR_FLOOR) {
            return Err(Error::ZeroNorm);
        }
        let reference = &states[ref_idx];

        // Every group must be proportional to the reference.
        for (k, s) in states.iter().enumerate() {
            if k == ref_idx {
                continue;
            }
            let z = reference.inner_product(s)? / ref_n2;
            // || s - z * reference ||^2 = ||s||^2 - |z|^2 ||ref||^2
            let resid = norms[k] - z.norm_sqr() * ref_n2;
            if resid > 1e-10 * (norms[k] + ref_n2) {
                return Err(Error::NotAProduct);
            }
        }
        let (s, _) = reference.normalize()?;
        Ok(s)
    }
}

/// Cross-Kerr interaction setting: the dynamical phase `phi` of the primary
/// arm and the asymmetry `epsilon` of the secondary arm, whose phase is
/// `phi + epsilon`. `|epsilon| << |phi|` is not enforced; sweeps may violate
/// it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KerrSetting {
    pub phi: f64,
    pub epsilon: f64,
}

impl KerrSetting {
    pub fn new(phi: f64, epsilon: f64) -> Result<Self> {
        if !phi.is_finite() || !epsilon.is_finite() {
            return Err(Error::NonFinite("KerrSetting"));
        }
        Ok(KerrSetting { phi, epsilon })
    }

    pub fn symmetric(phi: f64) -> Result<Self> {
        Self::new(phi, 0.0)
    }

    /// Phase of the arm coupled first (mode a1 in the single-photon scheme).
    pub fn primary_phase(&self) -> f64 {
        self.phi
    }

    /// Phase of the other arm, `phi + epsilon`.
    pub fn secondary_phase(&self) -> f64 {
        self.phi + self.epsilon
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    /// Two-branch cat `|g> + p|-g>` on a single mode, unnormalized.
    pub(crate) fn raw_cat(gamma: C64, sign: f64) -> PureState {
        let layout = ModeLayout::fields_only(&["m"]).unwrap();
        PureState::new(
            layout,
            vec![
                Branch::new(c(1.0, 0.0), vec![gamma], vec![]),
                Branch::new(c(sign, 0.0), vec![-gamma], vec![]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn normalize_even_cat_norm_matches_overlap_formula() {
        // || |g> + |-g> || = sqrt(2 + 2 e^{-2 g^2}) for real g; frozen at g=2.
        let (s, n) = raw_cat(c(2.0, 0.0), 1.0).normalize().unwrap();
        assert_relative_eq!(n, 1.4144507503818593, max_relative = 1e-14);
        assert_relative_eq!(n, (2.0 + 2.0 * (-8.0f64).exp()).sqrt(), max_relative = 1e-15);
        assert_relative_eq!(s.norm_sqr(), 1.0, epsilon = 1e-14);
        assert!(s.is_normalized());
    }

    #[test]
    fn normalize_merges_identical_branches() {
        // |0> + |0> is a single branch of norm 2.
        let layout = ModeLayout::fields_only(&["m"]).unwrap();
        let s = PureState::new(
            layout,
            vec![
                Branch::new(c(1.0, 0.0), vec![c(0.0, 0.0)], vec![]),
                Branch::new(c(1.0, 0.0), vec![c(0.0, 0.0)], vec![]),
            ],
        )
        .unwrap();
        let (t, n) = s.normalize().unwrap();
        assert_eq!(t.branches().len(), 1);
        assert_relative_eq!(n, 2.0, max_relative = 1e-15);
    }

    #[test]
    fn odd_cat_at_zero_amplitude_is_zero_norm() {
        let s = raw_cat(c(0.0, 0.0), -1.0);
        assert!(matches!(s.normalize(), Err(Error::ZeroNorm)));
    }

    #[test]
    fn even_odd_cats_are_orthogonal() {
        for g in [0.3, 1.0, 2.5] {
            let (even, _) = raw_cat(c(g, 0.0), 1.0).normalize().unwrap();
            let (odd, _) = raw_cat(c(g, 0.0), -1.0).normalize().unwrap();
            let ip = even.inner_product(&odd).unwrap();
            assert!(ip.norm() < 1e-14, "gamma={g}: |ip|={}", ip.norm());
            assert!(even.fidelity_pure(&odd).unwrap() < 1e-28);
        }
    }

    #[test]
    fn inner_product_rejects_layout_mismatch() {
        let a = PureState::coherent("a", c(1.0, 0.0)).unwrap();
        let b = PureState::coherent("b", c(1.0, 0.0)).unwrap();
        assert!(matches!(a.inner_product(&b), Err(Error::LayoutMismatch)));
    }

    #[test]
    fn photon_configs_gate_the_overlap() {
        let layout = ModeLayout::new(
            &["a"],
            vec![PhotonMode::new("b", &["p", "q"])],
        )
        .unwrap();
        let mk = |pol, path: &str| {
            PureState::new(
                layout.clone(),
                vec![Branch::new(
                    c(1.0, 0.0),
                    vec![c(0.4, 0.0)],
                    vec![PhotonConfig::new(pol, path)],
                )],
            )
            .unwrap()
        };
        let h = mk(Polarization::H, "p");
        let v = mk(Polarization::V, "p");
        let hq = mk(Polarization::H, "q");
        assert_relative_eq!(h.inner_product(&h).unwrap().re, 1.0, max_relative = 1e-15);
        assert_eq!(h.inner_product(&v).unwrap(), c(0.0, 0.0));
        assert_eq!(h.inner_product(&hq).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn merge_prune_merges_within_tolerance_and_drops_zeros() {
        let layout = ModeLayout::fields_only(&["m"]).unwrap();
        let s = PureState::new(
            layout,
            vec![
                Branch::new(c(0.5, 0.0), vec![c(1.0, 0.0)], vec![]),
                Branch::new(c(0.5, 0.0), vec![c(1.0 + 1e-15, 0.0)], vec![]),
                Branch::new(c(0.0, 0.0), vec![c(2.0, 0.0)], vec![]),
            ],
        )
        .unwrap();
        let m = s.merge_prune(1e-12, 1e-14);
        assert_eq!(m.branches().len(), 1);
        assert_relative_eq!(m.branches()[0].coeff.re, 1.0, max_relative = 1e-15);
    }

    #[test]
    fn merge_prune_keeps_separated_labels() {
        let layout = ModeLayout::fields_only(&["m"]).unwrap();
        let s = PureState::new(
            layout,
            vec![
                Branch::new(c(0.5, 0.0), vec![c(1.0, 0.0)], vec![]),
                Branch::new(c(0.5, 0.0), vec![c(1.0 + 1e-9, 0.0)], vec![]),
            ],
        )
        .unwrap();
        assert_eq!(s.merge_prune(1e-12, 1e-14).branches().len(), 2);
    }

    #[test]
    fn normalize_is_idempotent_on_the_state_part() {
        let (s1, _) = raw_cat(c(1.3, 0.4), 1.0).normalize().unwrap();
        let (s2, n2) = s1.normalize().unwrap();
        assert_relative_eq!(n2, 1.0, epsilon = 1e-14);
        assert!(s1.global_phase_distance(&s2).unwrap() < 1e-14);
    }

    #[test]
    fn global_phase_distance_ignores_global_phase() {
        let (s, _) = raw_cat(c(1.0, -0.7), 1.0).normalize().unwrap();
        let phase = C64::new(0.0, 0.8).exp();
        let rotated = s.map_branches(true, |b| {
            vec![Branch::new(b.coeff * phase, b.labels.clone(), b.photons.clone())]
        });
        assert!(s.global_phase_distance(&rotated).unwrap() < 1e-14);

        let (even, _) = raw_cat(c(1.0, 0.0), 1.0).normalize().unwrap();
        let (odd, _) = raw_cat(c(1.0, 0.0), -1.0).normalize().unwrap();
        assert_relative_eq!(even.global_phase_distance(&odd).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn field_factor_drops_a_factored_photon() {
        let layout = ModeLayout::new(&["a"], vec![PhotonMode::new("b", &["p"])]).unwrap();
        let cfg = PhotonConfig::new(Polarization::H, "p");
        let s = PureState::new(
            layout,
            vec![
                Branch::new(c(0.6, 0.0), vec![c(1.0, 0.0)], vec![cfg.clone()]),
                Branch::new(c(0.6, 0.0), vec![c(-1.0, 0.0)], vec![cfg]),
            ],
        )
        .unwrap();
        let f = s.field_factor().unwrap();
        assert!(f.layout().photons().is_empty());
        assert_eq!(f.branches().len(), 2);
        assert_relative_eq!(f.norm_sqr(), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn field_factor_rejects_photon_field_entanglement() {
        let layout = ModeLayout::new(&["a"], vec![PhotonMode::new("b", &["p"])]).unwrap();
        let s = PureState::new(
            layout,
            vec![
                Branch::new(
                    c(0.7, 0.0),
                    vec![c(2.0, 0.0)],
                    vec![PhotonConfig::new(Polarization::H, "p")],
                ),
                Branch::new(
                    c(0.7, 0.0),
                    vec![c(-2.0, 0.0)],
                    vec![PhotonConfig::new(Polarization::V, "p")],
                ),
            ],
        )
        .unwrap();
        assert!(matches!(s.field_factor(), Err(Error::NotAProduct)));
    }
}
