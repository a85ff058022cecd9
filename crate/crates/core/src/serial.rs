//! JSON documents for states, operators and protocol results.
//!
//! The document shapes are fixed:
//!
//! ```json
//! { "layout": { "field_modes": [...], "photons": [{"id", "paths"}] },
//!   "branches": [ { "coeff": [re, im],
//!                   "labels": [[re, im], ...],
//!                   "photons": [{"pol": "H", "path": "..."}] } ] }
//! ```
//!
//! All floats are emitted with 17 significant digits (`%.16e`), which
//! round-trips every finite f64 exactly and makes artifacts byte-identical
//! across runs of the same configuration.

use std::collections::BTreeMap;
use std::io;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mixed::{BranchKet, MixedOperator};
use crate::protocols::ProtocolResult;
use crate::state::{Branch, ModeLayout, PhotonConfig, PhotonMode, Polarization, PureState};

use num_complex::Complex64 as C64;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PhotonModeDoc {
    pub id: String,
    pub paths: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct LayoutDoc {
    pub field_modes: Vec<String>,
    pub photons: Vec<PhotonModeDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PhotonDoc {
    pub pol: String,
    pub path: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct BranchDoc {
    pub coeff: (f64, f64),
    pub labels: Vec<(f64, f64)>,
    pub photons: Vec<PhotonDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct StateDoc {
    pub layout: LayoutDoc,
    pub branches: Vec<BranchDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct KetDoc {
    pub labels: Vec<(f64, f64)>,
    pub photons: Vec<PhotonDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TermDoc {
    pub ket: KetDoc,
    pub bra: KetDoc,
    pub weight: (f64, f64),
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct MixedDoc {
    pub layout: LayoutDoc,
    pub terms: Vec<TermDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ProtocolResultDoc {
    pub checkpoints: BTreeMap<String, StateDoc>,
    pub outcome: String,
    pub outcome_prob: f64,
    pub cat_o2: StateDoc,
    pub o1_label: (f64, f64),
    pub cat_amplitude_exact: (f64, f64),
    pub cat_amplitude_approx: (f64, f64),
}

fn pair(z: C64) -> (f64, f64) {
    (z.re, z.im)
}

fn unpair(p: (f64, f64)) -> C64 {
    C64::new(p.0, p.1)
}

impl From<&ModeLayout> for LayoutDoc {
    fn from(l: &ModeLayout) -> Self {
        LayoutDoc {
            field_modes: l.field_modes().to_vec(),
            photons: l
                .photons()
                .iter()
                .map(|p| PhotonModeDoc {
                    id: p.id.clone(),
                    paths: p.paths.clone(),
                })
                .collect(),
        }
    }
}

impl LayoutDoc {
    pub fn to_layout(&self) -> Result<ModeLayout> {
        let fields: Vec<&str> = self.field_modes.iter().map(|s| s.as_str()).collect();
        let photons = self
            .photons
            .iter()
            .map(|p| PhotonMode {
                id: p.id.clone(),
                paths: p.paths.clone(),
            })
            .collect();
        ModeLayout::new(&fields, photons)
    }
}

fn photon_docs(cfgs: &[PhotonConfig]) -> Vec<PhotonDoc> {
    cfgs.iter()
        .map(|c| PhotonDoc {
            pol: c.pol.as_str().to_string(),
            path: c.path.clone(),
        })
        .collect()
}

fn photon_configs(docs: &[PhotonDoc]) -> Result<Vec<PhotonConfig>> {
    docs.iter()
        .map(|d| Ok(PhotonConfig::new(Polarization::parse(&d.pol)?, d.path.clone())))
        .collect()
}

impl From<&PureState> for StateDoc {
    fn from(s: &PureState) -> Self {
        StateDoc {
            layout: s.layout().into(),
            branches: s
                .branches()
                .iter()
                .map(|b| BranchDoc {
                    coeff: pair(b.coeff),
                    labels: b.labels.iter().map(|&l| pair(l)).collect(),
                    photons: photon_docs(&b.photons),
                })
                .collect(),
        }
    }
}

impl StateDoc {
    pub fn to_state(&self) -> Result<PureState> {
        let layout = self.layout.to_layout()?;
        let branches = self
            .branches
            .iter()
            .map(|b| {
                Ok(Branch::new(
                    unpair(b.coeff),
                    b.labels.iter().map(|&l| unpair(l)).collect(),
                    photon_configs(&b.photons)?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut s = PureState::new(layout, branches)?;
        let flag = (s.norm_sqr() - 1.0).abs() <= 1e-12;
        s.set_normalized(flag);
        Ok(s)
    }
}

impl From<&MixedOperator> for MixedDoc {
    fn from(rho: &MixedOperator) -> Self {
        let ket_doc = |k: &BranchKet| KetDoc {
            labels: k.labels.iter().map(|&l| pair(l)).collect(),
            photons: photon_docs(&k.photons),
        };
        MixedDoc {
            layout: rho.layout().into(),
            terms: rho
                .terms()
                .iter()
                .map(|t| TermDoc {
                    ket: ket_doc(&t.ket),
                    bra: ket_doc(&t.bra),
                    weight: pair(t.weight),
                })
                .collect(),
        }
    }
}

impl MixedDoc {
    pub fn to_operator(&self) -> Result<MixedOperator> {
        let layout = self.layout.to_layout()?;
        let to_ket = |d: &KetDoc| -> Result<BranchKet> {
            Ok(BranchKet::new(
                d.labels.iter().map(|&l| unpair(l)).collect(),
                photon_configs(&d.photons)?,
            ))
        };
        let raw = self
            .terms
            .iter()
            .map(|t| Ok((to_ket(&t.ket)?, to_ket(&t.bra)?, unpair(t.weight))))
            .collect::<Result<Vec<_>>>()?;
        Ok(MixedOperator::from_terms(layout, raw))
    }
}

impl From<&ProtocolResult> for ProtocolResultDoc {
    fn from(r: &ProtocolResult) -> Self {
        ProtocolResultDoc {
            checkpoints: r
                .checkpoints
                .iter()
                .map(|(k, v)| (k.clone(), v.into()))
                .collect(),
            outcome: r.outcome.clone(),
            outcome_prob: r.outcome_prob,
            cat_o2: (&r.cat_o2).into(),
            o1_label: pair(r.o1_label),
            cat_amplitude_exact: pair(r.cat_amplitude_exact),
            cat_amplitude_approx: pair(r.cat_amplitude_approx),
        }
    }
}

impl ProtocolResultDoc {
    pub fn to_result(&self) -> Result<ProtocolResult> {
        let checkpoints = self
            .checkpoints
            .iter()
            .map(|(k, v)| Ok((k.clone(), v.to_state()?)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        Ok(ProtocolResult {
            checkpoints,
            outcome: self.outcome.clone(),
            outcome_prob: self.outcome_prob,
            cat_o2: self.cat_o2.to_state()?,
            o1_label: unpair(self.o1_label),
            cat_amplitude_exact: unpair(self.cat_amplitude_exact),
            cat_amplitude_approx: unpair(self.cat_amplitude_approx),
        })
    }
}

/// serde_json formatter printing every float with 17 significant digits.
struct Sci17;

impl serde_json::ser::Formatter for Sci17 {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        if !value.is_finite() {
            return Err(io::Error::new(
                io::ErrorKind::InvalidInput,
                "non-finite float in JSON output",
            ));
        }
        write!(writer, "{value:.16e}")
    }

    fn write_f32<W>(&mut self, writer: &mut W, value: f32) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.write_f64(writer, value as f64)
    }
}

/// Serialize any document with the 17-significant-digit float format.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Sci17);
    value
        .serialize(&mut ser)
        .map_err(|e| Error::invalid("json", e.to_string()))?;
    String::from_utf8(out).map_err(|e| Error::invalid("json", e.to_string()))
}

pub fn state_to_json(s: &PureState) -> Result<String> {
    to_json_string(&StateDoc::from(s))
}

pub fn state_from_json(text: &str) -> Result<PureState> {
    let doc: StateDoc =
        serde_json::from_str(text).map_err(|e| Error::invalid("json", e.to_string()))?;
    doc.to_state()
}

pub fn mixed_to_json(rho: &MixedOperator) -> Result<String> {
    to_json_string(&MixedDoc::from(rho))
}

pub fn mixed_from_json(text: &str) -> Result<MixedOperator> {
    let doc: MixedDoc =
        serde_json::from_str(text).map_err(|e| Error::invalid("json", e.to_string()))?;
    doc.to_operator()
}

pub fn result_to_json(r: &ProtocolResult) -> Result<String> {
    to_json_string(&ProtocolResultDoc::from(r))
}

pub fn result_from_json(text: &str) -> Result<ProtocolResult> {
    let doc: ProtocolResultDoc =
        serde_json::from_str(text).map_err(|e| Error::invalid("json", e.to_string()))?;
    doc.to_result()
}
