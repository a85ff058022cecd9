//! Hermitian operators over coherent branch dyads.
//!
//! [`MixedOperator`] represents a density operator as a weighted double sum
//! over bra/ket branch pairs,
//!
//! ```text
//! rho = sum_t  w_t |ket_t><bra_t|  +  (implied hermitian conjugates)
//! ```
//!
//! Only the diagonal (`ket == bra`) and one triangle of the off-diagonal
//! terms are stored; the conjugate-transpose partner of every stored
//! off-diagonal term is implied. This halves the memory and makes Hermiticity
//! structural rather than a numerical accident.

use std::cmp::Ordering;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::overlap::{overlap_exponent, ExpSum};
use crate::state::{ModeLayout, PhotonConfig, PureState};

/// A branch without its coefficient: the label vector plus photon configs.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchKet {
    pub labels: Vec<C64>,
    pub photons: Vec<PhotonConfig>,
}

impl BranchKet {
    pub fn new(labels: Vec<C64>, photons: Vec<PhotonConfig>) -> Self {
        BranchKet { labels, photons }
    }

    /// Total order used to canonicalize which triangle a term is stored in.
    fn cmp_key(&self, other: &Self) -> Ordering {
        for (a, b) in self.labels.iter().zip(&other.labels) {
            match a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        self.labels
            .len()
            .cmp(&other.labels.len())
            .then_with(|| self.photons.cmp(&other.photons))
    }

    fn same_key(&self, other: &Self) -> bool {
        self.cmp_key(other) == Ordering::Equal
    }

    /// `<bra | ket>` between two branch kets: product of coherent overlaps
    /// times the photon Kronecker delta, as a (prefactor, exponent) pair.
    fn overlap_with(bra: &Self, ket: &Self) -> Option<C64> {
        if bra.photons != ket.photons {
            return None;
        }
        let mut e = C64::new(0.0, 0.0);
        for (b, k) in bra.labels.iter().zip(&ket.labels) {
            e += overlap_exponent(*b, *k);
        }
        Some(e)
    }
}

/// One stored term `weight * |ket><bra|`.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedTerm {
    pub ket: BranchKet,
    pub bra: BranchKet,
    pub weight: C64,
}

impl MixedTerm {
    pub fn is_diagonal(&self) -> bool {
        self.ket.same_key(&self.bra)
    }
}

/// Hermitian operator as diagonal terms plus one stored triangle.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedOperator {
    layout: ModeLayout,
    terms: Vec<MixedTerm>,
}

impl MixedOperator {
    /// Assemble from one triangle of raw dyad terms: every off-diagonal raw
    /// term stands for itself *plus* its implied hermitian partner, so the
    /// caller must push each unordered bra/ket pair exactly once. Terms
    /// landing in the non-canonical triangle are flipped (conjugating the
    /// weight); duplicates are merged. Diagonal weights are forced real:
    /// their imaginary parts (rounding noise for any hermitian input) are
    /// dropped.
    pub fn from_terms(
        layout: ModeLayout,
        raw: impl IntoIterator<Item = (BranchKet, BranchKet, C64)>,
    ) -> Self {
        let mut terms: Vec<MixedTerm> = Vec::new();
        for (ket, bra, mut weight) in raw {
            let (ket, bra) = match ket.cmp_key(&bra) {
                Ordering::Greater => {
                    weight = weight.conj();
                    (bra, ket)
                }
                _ => (ket, bra),
            };
            let hit = terms
                .iter_mut()
                .find(|t| t.ket.same_key(&ket) && t.bra.same_key(&bra));
            match hit {
                Some(t) => t.weight += weight,
                None => terms.push(MixedTerm { ket, bra, weight }),
            }
        }
        for t in &mut terms {
            if t.is_diagonal() {
                t.weight = C64::new(t.weight.re, 0.0);
            }
        }
        terms.retain(|t| t.weight != C64::new(0.0, 0.0));
        MixedOperator { layout, terms }
    }

    pub fn layout(&self) -> &ModeLayout {
        &self.layout
    }

    /// Stored terms: the diagonal plus one triangle.
    pub fn terms(&self) -> &[MixedTerm] {
        &self.terms
    }

    /// Number of dyads after expanding the implied hermitian conjugates.
    pub fn num_terms_expanded(&self) -> usize {
        self.terms
            .iter()
            .map(|t| if t.is_diagonal() { 1 } else { 2 })
            .sum()
    }

    /// Trace via Gram overlaps: `Tr |k><b| = <b|k>`.
    pub fn trace(&self) -> f64 {
        let mut acc = ExpSum::new();
        for t in &self.terms {
            if let Some(e) = BranchKet::overlap_with(&t.bra, &t.ket) {
                let factor = if t.is_diagonal() { 1.0 } else { 2.0 };
                // off-diagonal: w <b|k> + conj(w <b|k>) = 2 Re(...)
                acc.push(C64::new(factor, 0.0) * t.weight, e);
            }
        }
        // only the real part survives the implied conjugate terms
        acc.value().re
    }

    /// Rescale to unit trace.
    pub fn normalized(&self) -> Result<MixedOperator> {
        let tr = self.trace();
        if !(tr.abs() > 1e-300) {
            return Err(Error::ZeroTrace);
        }
        let inv = 1.0 / tr;
        let terms = self
            .terms
            .iter()
            .map(|t| MixedTerm {
                ket: t.ket.clone(),
                bra: t.bra.clone(),
                weight: t.weight * inv,
            })
            .collect();
        Ok(MixedOperator {
            layout: self.layout.clone(),
            terms,
        })
    }

    /// `<t| rho |t>` for a pure state `t`, accumulated in the log domain.
    ///
    /// Defensively divided by `Tr rho` and `||t||^2`, so the value lies in
    /// [0, 1] for any positive operator and finite state.
    pub fn fidelity_mixed_pure(&self, t: &PureState) -> Result<f64> {
        if self.layout != *t.layout() {
            return Err(Error::LayoutMismatch);
        }
        // <t|k> as an ExpSum per distinct ket/bra; states are tiny, so just
        // evaluate directly per term.
        let amp = |k: &BranchKet| -> C64 {
            let mut acc = ExpSum::new();
            for b in t.branches() {
                let kb = BranchKet::new(b.labels.clone(), b.photons.clone());
                if let Some(e) = BranchKet::overlap_with(&kb, k) {
                    acc.push(b.coeff.conj(), e);
                }
            }
            acc.value()
        };
        let mut val = 0.0;
        for term in &self.terms {
            let tk = amp(&term.ket);
            let bt = amp(&term.bra).conj();
            let contrib = term.weight * tk * bt;
            if term.is_diagonal() {
                val += contrib.re;
            } else {
                val += 2.0 * contrib.re;
            }
        }
        let tr = self.trace();
        let n2 = t.norm_sqr();
        if !(tr.abs() > 1e-300) {
            return Err(Error::ZeroTrace);
        }
        if !(n2 > 1e-300) {
            return Err(Error::ZeroNorm);
        }
        Ok(val / (tr * n2))
    }
}

impl PureState {
    /// Trace out one field mode:
    ///
    /// ```text
    /// rho = sum_jk  c_j conj(c_k) <label_k[m] | label_j[m]>  |rest_j><rest_k|
    /// ```
    ///
    /// The result is Hermitian by construction and rescaled to unit trace.
    pub fn partial_trace_field(&self, mode: &str) -> Result<MixedOperator> {
        self.partial_trace_field_raw(mode)?.normalized()
    }

    /// Partial trace without the final unit-trace rescaling: the raw trace
    /// equals the squared norm of the input state.
    pub fn partial_trace_field_raw(&self, mode: &str) -> Result<MixedOperator> {
        let m = self.layout().field_index(mode)?;
        let fields: Vec<&str> = self
            .layout()
            .field_modes()
            .iter()
            .filter(|f| f.as_str() != mode)
            .map(|f| f.as_str())
            .collect();
        let layout = ModeLayout::new(&fields, self.layout().photons().to_vec())?;

        let rest = |b: &crate::state::Branch| -> BranchKet {
            let labels = b
                .labels
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != m)
                .map(|(_, l)| *l)
                .collect();
            BranchKet::new(labels, b.photons.clone())
        };

        let mut raw = Vec::new();
        for (j, bj) in self.branches().iter().enumerate() {
            for (k, bk) in self.branches().iter().enumerate() {
                if k < j {
                    continue; // lower triangle comes from hermitian closure
                }
                let w = bj.coeff * bk.coeff.conj() * crate::overlap::overlap(bk.labels[m], bj.labels[m]);
                let (rj, rk) = (rest(bj), rest(bk));
                if j != k && rj.same_key(&rk) {
                    // distinct branches whose remainders coincide: the dyad
                    // and its implied partner collapse onto the diagonal
                    raw.push((rj, rk, w + w.conj()));
                } else {
                    raw.push((rj, rk, w));
                }
            }
        }
        Ok(MixedOperator::from_terms(layout, raw))
    }
}
