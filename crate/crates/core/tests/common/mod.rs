//! Shared helpers for the integration suites: seeded random CSS states.

use kerrcat::state::{Branch, ModeLayout, PhotonConfig, PhotonMode, Polarization, PureState};
use num_complex::Complex64 as C64;
use rand::Rng;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Random complex with |z| <= mag.
pub fn random_amp<R: Rng>(rng: &mut R, mag: f64) -> C64 {
    loop {
        let z = C64::new(rng.gen_range(-mag..=mag), rng.gen_range(-mag..=mag));
        if z.norm() <= mag {
            return z;
        }
    }
}

/// Random normalized CSS state: up to `max_branches` branches over
/// `n_fields` field modes and `n_photons` photons (two paths each), labels
/// bounded by `label_mag`.
pub fn random_state<R: Rng>(
    rng: &mut R,
    n_fields: usize,
    n_photons: usize,
    max_branches: usize,
    label_mag: f64,
) -> PureState {
    let field_names: Vec<String> = (0..n_fields).map(|k| format!("m{k}")).collect();
    let fields: Vec<&str> = field_names.iter().map(|s| s.as_str()).collect();
    let photons: Vec<PhotonMode> = (0..n_photons)
        .map(|k| PhotonMode::new(format!("ph{k}"), &["p", "q"]))
        .collect();
    let layout = ModeLayout::new(&fields, photons).unwrap();
    loop {
        let n_branches = rng.gen_range(1..=max_branches);
        let branches: Vec<Branch> = (0..n_branches)
            .map(|_| {
                Branch::new(
                    random_amp(rng, 1.0),
                    (0..n_fields).map(|_| random_amp(rng, label_mag)).collect(),
                    (0..n_photons)
                        .map(|_| {
                            PhotonConfig::new(
                                if rng.gen_bool(0.5) {
                                    Polarization::H
                                } else {
                                    Polarization::V
                                },
                                if rng.gen_bool(0.5) { "p" } else { "q" },
                            )
                        })
                        .collect(),
                )
            })
            .collect();
        let state = PureState::new(layout.clone(), branches).unwrap();
        if let Ok((s, _)) = state.normalize() {
            return s;
        }
    }
}
