//! Truncated-Fock-basis brute force: an independent verifier for the CSS
//! algebra and the protocol pipelines.
//!
//! Everything here works on dense tensors over photon-number bases, with no
//! shared code paths into the coherent-branch algebra. The oracle is
//! restricted to small amplitudes by the Poisson tail rule
//! `|alpha|^2 + 6 |alpha| + 10 <= n_max`; at that truncation the neglected
//! tail is far below the 1e-10 comparison tolerances used by the tests. The
//! strong-field regime is covered by the CSS algebra itself, whose primitives
//! this module certifies at small amplitude (the algebra is amplitude
//! uniform).

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::state::PureState;

/// Dense state over `num_fields` truncated oscillator modes (each of
/// dimension `n_max + 1`) and a list of finite-dimensional ancillas.
/// Axis order: field modes first, then ancillas, row-major.
#[derive(Debug, Clone)]
pub struct FockVector {
    n_max: usize,
    num_fields: usize,
    ancilla_dims: Vec<usize>,
    amps: Vec<C64>,
}

/// Poisson tail rule: the truncation needed to represent `|alpha|` safely.
pub fn truncation_required(amp_mag: f64) -> f64 {
    amp_mag * amp_mag + 6.0 * amp_mag + 10.0
}

fn check_truncation(amp_mag: f64, n_max: usize) -> Result<()> {
    let needed = truncation_required(amp_mag);
    if needed <= n_max as f64 {
        Ok(())
    } else {
        Err(Error::Truncation { needed, n_max })
    }
}

impl FockVector {
    fn zeros(n_max: usize, num_fields: usize, ancilla_dims: Vec<usize>) -> Self {
        let len = (n_max + 1).pow(num_fields as u32) * ancilla_dims.iter().product::<usize>();
        FockVector {
            n_max,
            num_fields,
            ancilla_dims,
            amps: vec![C64::new(0.0, 0.0); len],
        }
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn num_fields(&self) -> usize {
        self.num_fields
    }

    pub fn ancilla_dims(&self) -> &[usize] {
        &self.ancilla_dims
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    fn dims(&self) -> Vec<usize> {
        let mut d = vec![self.n_max + 1; self.num_fields];
        d.extend_from_slice(&self.ancilla_dims);
        d
    }

    fn same_shape(&self, other: &Self) -> bool {
        self.n_max == other.n_max
            && self.num_fields == other.num_fields
            && self.ancilla_dims == other.ancilla_dims
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn inner(&self, other: &Self) -> Result<C64> {
        if !self.same_shape(other) {
            return Err(Error::DimensionMismatch);
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if !self.same_shape(other) {
            return Err(Error::DimensionMismatch);
        }
        let mut out = self.clone();
        for (a, b) in out.amps.iter_mut().zip(&other.amps) {
            *a += *b;
        }
        Ok(out)
    }

    pub fn scaled(&self, z: C64) -> Self {
        let mut out = self.clone();
        for a in &mut out.amps {
            *a *= z;
        }
        out
    }

    pub fn normalized(&self) -> Result<Self> {
        let n2 = self.norm_sqr();
        if !(n2 > 1e-300) {
            return Err(Error::ZeroNorm);
        }
        Ok(self.scaled(C64::new(1.0 / n2.sqrt(), 0.0)))
    }

    /// Append an ancilla of dimension `dim` prepared in basis state `level`.
    pub fn with_ancilla(&self, dim: usize, level: usize) -> Result<Self> {
        if level >= dim {
            return Err(Error::DimensionMismatch);
        }
        let mut ancilla_dims = self.ancilla_dims.clone();
        ancilla_dims.push(dim);
        let mut out = FockVector::zeros(self.n_max, self.num_fields, ancilla_dims);
        for (i, &z) in self.amps.iter().enumerate() {
            out.amps[i * dim + level] = z;
        }
        Ok(out)
    }

    /// Tensor product of two pure-field vectors with equal truncation.
    pub fn tensor_field(&self, other: &Self) -> Result<Self> {
        if self.n_max != other.n_max
            || !self.ancilla_dims.is_empty()
            || !other.ancilla_dims.is_empty()
        {
            return Err(Error::DimensionMismatch);
        }
        let mut out = FockVector::zeros(
            self.n_max,
            self.num_fields + other.num_fields,
            Vec::new(),
        );
        let lb = other.amps.len();
        for (i, &a) in self.amps.iter().enumerate() {
            if a == C64::new(0.0, 0.0) {
                continue;
            }
            for (j, &b) in other.amps.iter().enumerate() {
                out.amps[i * lb + j] = a * b;
            }
        }
        Ok(out)
    }

    fn stride_of(&self, axis: usize) -> usize {
        let dims = self.dims();
        dims[axis + 1..].iter().product()
    }
}

/// Coherent state `|alpha>` in the number basis:
/// amplitudes `e^{-|alpha|^2/2} alpha^n / sqrt(n!)`.
pub fn fock_coherent(alpha: C64, n_max: usize) -> Result<FockVector> {
    check_truncation(alpha.norm(), n_max)?;
    let mut v = FockVector::zeros(n_max, 1, Vec::new());
    let mut amp = C64::new((-0.5 * alpha.norm_sqr()).exp(), 0.0);
    v.amps[0] = amp;
    for n in 1..=n_max {
        amp = amp * alpha / (n as f64).sqrt();
        v.amps[n] = amp;
    }
    Ok(v)
}

/// Two-mode beam splitter on field axes `i` and `j`, matching the CSS label
/// convention `(a, b) -> (a cos t + b sin t, a sin t - b cos t)`.
///
/// Exact within each conserved total-photon-number sector; components that a
/// sector would scatter past the per-mode cap are dropped (negligible for
/// tail-safe coherent inputs, which is what the oracle is for).
pub fn fock_bs(v: &FockVector, i: usize, j: usize, theta: f64) -> Result<FockVector> {
    if i >= v.num_fields || j >= v.num_fields || i == j {
        return Err(Error::DimensionMismatch);
    }
    let n_max = v.n_max;
    // sqrt-factorial table up to the largest reachable sector
    let mut sf = vec![1.0f64; 2 * n_max + 1];
    for n in 1..=2 * n_max {
        sf[n] = sf[n - 1] * (n as f64).sqrt();
    }
    // binomial table
    let mut binom = vec![vec![0.0f64; n_max + 1]; n_max + 1];
    for n in 0..=n_max {
        binom[n][0] = 1.0;
        for k in 1..=n {
            binom[n][k] = binom[n - 1][k - 1] + if k < n { binom[n - 1][k] } else { 0.0 };
        }
    }
    let (s, c) = theta.sin_cos();

    let si = v.stride_of(i);
    let sj = v.stride_of(j);
    let dims = v.dims();
    let total: usize = dims.iter().product();
    let mut out = FockVector::zeros(n_max, v.num_fields, v.ancilla_dims.clone());

    // iterate over all indices with n_i = n_j = 0, then walk the (n1, n2)
    // plane from each base offset
    for flat in 0..total {
        let ni = (flat / si) % dims[i];
        let nj = (flat / sj) % dims[j];
        if ni != 0 || nj != 0 {
            continue;
        }
        for n1 in 0..=n_max {
            for n2 in 0..=n_max {
                let z = v.amps[flat + n1 * si + n2 * sj];
                if z == C64::new(0.0, 0.0) {
                    continue;
                }
                let base = z / (sf[n1] * sf[n2]);
                for k in 0..=n1 {
                    for l in 0..=n2 {
                        let p = k + l;
                        let q = n1 + n2 - p;
                        if p > n_max || q > n_max {
                            continue;
                        }
                        let mut coeff = binom[n1][k]
                            * binom[n2][l]
                            * c.powi((k + n2 - l) as i32)
                            * s.powi((l + n1 - k) as i32)
                            * sf[p]
                            * sf[q];
                        if (n1 - k) % 2 == 1 {
                            coeff = -coeff;
                        }
                        // convention: parity flip on the second output mode
                        if q % 2 == 1 {
                            coeff = -coeff;
                        }
                        out.amps[flat + p * si + q * sj] += base * coeff;
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Cross-Kerr unitary `e^{i phi n m}` between field axis `field` and ancilla
/// axis `ancilla` (diagonal, exactly unitary).
pub fn fock_cross_kerr(v: &FockVector, field: usize, ancilla: usize, phi: f64) -> Result<FockVector> {
    if field >= v.num_fields || ancilla >= v.ancilla_dims.len() {
        return Err(Error::DimensionMismatch);
    }
    let sf = v.stride_of(field);
    let sa = v.stride_of(v.num_fields + ancilla);
    let dims = v.dims();
    let df = dims[field];
    let da = dims[v.num_fields + ancilla];
    let mut out = v.clone();
    for (flat, amp) in out.amps.iter_mut().enumerate() {
        let n = (flat / sf) % df;
        let m = (flat / sa) % da;
        if n != 0 && m != 0 {
            *amp *= C64::new(0.0, phi * (n * m) as f64).exp();
        }
    }
    Ok(out)
}

/// Polarization rotation of a dual-rail photon stored in two qubit ancillas
/// (`rail_h`, `rail_v`), using the same reflection convention as the CSS
/// rotator: `|10> -> cos t |10> + sin t |01>`, `|01> -> sin t |10> - cos t |01>`.
/// The empty and doubly-occupied rail sectors are untouched.
pub fn fock_pol_rotation(v: &FockVector, rail_h: usize, rail_v: usize, theta: f64) -> Result<FockVector> {
    let na = v.ancilla_dims.len();
    if rail_h >= na || rail_v >= na || rail_h == rail_v {
        return Err(Error::DimensionMismatch);
    }
    if v.ancilla_dims[rail_h] != 2 || v.ancilla_dims[rail_v] != 2 {
        return Err(Error::DimensionMismatch);
    }
    let sh = v.stride_of(v.num_fields + rail_h);
    let sv = v.stride_of(v.num_fields + rail_v);
    let (s, c) = theta.sin_cos();
    let mut out = v.clone();
    let dims = v.dims();
    let total: usize = dims.iter().product();
    for flat in 0..total {
        let mh = (flat / sh) % 2;
        let mv = (flat / sv) % 2;
        if mh != 1 || mv != 0 {
            continue;
        }
        let i10 = flat;
        let i01 = flat - sh + sv;
        let a10 = v.amps[i10];
        let a01 = v.amps[i01];
        out.amps[i10] = a10 * c + a01 * s;
        out.amps[i01] = a10 * s - a01 * c;
    }
    Ok(out)
}

/// Project ancilla `ancilla` onto `|level>`, returning the probability
/// (relative to the input norm) and the *unnormalized* remainder with that
/// ancilla axis removed.
pub fn project_ancilla(v: &FockVector, ancilla: usize, level: usize) -> Result<(f64, FockVector)> {
    if ancilla >= v.ancilla_dims.len() || level >= v.ancilla_dims[ancilla] {
        return Err(Error::DimensionMismatch);
    }
    let sa = v.stride_of(v.num_fields + ancilla);
    let da = v.ancilla_dims[ancilla];
    let mut ancilla_dims = v.ancilla_dims.clone();
    ancilla_dims.remove(ancilla);
    let mut out = FockVector::zeros(v.n_max, v.num_fields, ancilla_dims);
    let mut k = 0usize;
    for (flat, &z) in v.amps.iter().enumerate() {
        if (flat / sa) % da == level {
            out.amps[k] = z;
            k += 1;
        }
    }
    debug_assert_eq!(k, out.amps.len());
    let n2_in = v.norm_sqr();
    if !(n2_in > 1e-300) {
        return Err(Error::ZeroNorm);
    }
    Ok((out.norm_sqr() / n2_in, out))
}

/// Parity expectation `<(-1)^n>` of a single-field-mode, ancilla-free state.
pub fn parity_expectation(v: &FockVector) -> Result<f64> {
    if v.num_fields != 1 || !v.ancilla_dims.is_empty() {
        return Err(Error::DimensionMismatch);
    }
    let n2 = v.norm_sqr();
    if !(n2 > 1e-300) {
        return Err(Error::ZeroNorm);
    }
    let signed: f64 = v
        .amps
        .iter()
        .enumerate()
        .map(|(n, z)| if n % 2 == 0 { z.norm_sqr() } else { -z.norm_sqr() })
        .sum();
    Ok(signed / n2)
}

/// Embed a CSS state into the truncated Fock basis. The state must be
/// photon-free or carry the same photon configuration in every branch (a
/// factored photon part contributes only a global tensor factor, which is
/// dropped); the embedding is linear on the field part and truncation-safe
/// per the tail rule.
pub fn css_to_fock(s: &PureState, n_max: usize) -> Result<FockVector> {
    let uniform = s
        .branches()
        .windows(2)
        .all(|w| w[0].photons == w[1].photons);
    if !uniform {
        return Err(Error::NotAProduct);
    }
    let num_fields = s.layout().field_modes().len();
    if num_fields == 0 || s.branches().is_empty() {
        return Err(Error::invalid("state", "nothing to embed"));
    }
    let mut out = FockVector::zeros(n_max, num_fields, Vec::new());
    for b in s.branches() {
        let mut factor = fock_coherent(b.labels[0], n_max)?;
        for l in &b.labels[1..] {
            factor = factor.tensor_field(&fock_coherent(*l, n_max)?)?;
        }
        out = out.add(&factor.scaled(b.coeff))?;
    }
    Ok(out)
}

/// Result of the brute-force protocol run.
#[derive(Debug, Clone)]
pub struct OracleRun {
    /// Born probability of the requested outcome.
    pub prob: f64,
    /// Normalized pure reduction of output mode `o2`.
    pub o2_state: FockVector,
}

/// Brute-force simulation of the single-photon scheme: the photon lives in
/// two dual-rail qubit ancillas (rail 0 = H arm, rail 1 = V arm), every
/// element is a dense unitary, and the post-selection is an explicit
/// projection. Mirrors the element order of `protocols::run_protocol1`
/// without sharing any of its algebra.
pub fn oracle_protocol1(
    alpha: C64,
    phi: f64,
    outcome: crate::state::Polarization,
    n_max: usize,
) -> Result<OracleRun> {
    let drive = alpha * 2.0f64.sqrt();
    check_truncation(drive.norm(), n_max)?;
    let base = fock_coherent(drive, n_max)?.tensor_field(&fock_coherent(C64::new(0.0, 0.0), n_max)?)?;
    // photon (|H> + |V>)/sqrt2 in dual rail
    let h_rail = base.with_ancilla(2, 1)?.with_ancilla(2, 0)?;
    let v_rail = base.with_ancilla(2, 0)?.with_ancilla(2, 1)?;
    let mut psi = h_rail
        .add(&v_rail)?
        .scaled(C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0));

    psi = fock_bs(&psi, 0, 1, std::f64::consts::FRAC_PI_4)?;
    psi = fock_cross_kerr(&psi, 0, 0, phi)?;
    psi = fock_cross_kerr(&psi, 1, 1, phi)?;
    psi = fock_pol_rotation(&psi, 0, 1, std::f64::consts::FRAC_PI_4)?;

    let (want_h, want_v) = match outcome {
        crate::state::Polarization::H => (1, 0),
        crate::state::Polarization::V => (0, 1),
    };
    let (p1, psi) = project_ancilla(&psi, 0, want_h)?;
    let (p2, psi) = project_ancilla(&psi, 0, want_v)?;
    let prob = p1 * p2;
    // unlike the exact branch algebra, a dense unitary pipeline leaves
    // rounding residue (~1e-32) in dead components; treat it as zero
    if !(prob > 1e-20) {
        return Err(Error::ImpossibleOutcome(outcome.as_str().to_string()));
    }
    let psi = fock_bs(&psi, 0, 1, std::f64::consts::FRAC_PI_4)?;
    let o2_state = reduce_second_mode_pure(&psi.normalized()?)?;
    Ok(OracleRun { prob, o2_state })
}

/// Reduce a normalized two-field-mode vector to its second mode, requiring
/// the marginal to be pure (which it is whenever the first mode factors).
/// Extraction goes through the reduced density matrix and power iteration,
/// so it never assumes what the factored label is.
fn reduce_second_mode_pure(v: &FockVector) -> Result<FockVector> {
    if v.num_fields != 2 || !v.ancilla_dims.is_empty() {
        return Err(Error::DimensionMismatch);
    }
    let d = v.n_max + 1;
    // rho[m][m'] = sum_n psi[n,m] conj(psi[n,m'])
    let mut rho = vec![C64::new(0.0, 0.0); d * d];
    for n in 0..d {
        for m in 0..d {
            let a = v.amps[n * d + m];
            if a == C64::new(0.0, 0.0) {
                continue;
            }
            for mp in 0..d {
                rho[m * d + mp] += a * v.amps[n * d + mp].conj();
            }
        }
    }
    let trace: f64 = (0..d).map(|m| rho[m * d + m].re).sum();
    // power iteration; for a pure marginal one application already lands on
    // the eigenvector
    let mut vec = vec![C64::new(0.0, 0.0); d];
    let start = (0..d)
        .max_by(|&a, &b| rho[a * d + a].re.total_cmp(&rho[b * d + b].re))
        .unwrap();
    vec[start] = C64::new(1.0, 0.0);
    for _ in 0..4 {
        let mut next = vec![C64::new(0.0, 0.0); d];
        for m in 0..d {
            for mp in 0..d {
                next[m] += rho[m * d + mp] * vec[mp];
            }
        }
        let n2: f64 = next.iter().map(|z| z.norm_sqr()).sum();
        if !(n2 > 1e-300) {
            return Err(Error::ZeroNorm);
        }
        let inv = 1.0 / n2.sqrt();
        for z in &mut next {
            *z *= inv;
        }
        vec = next;
    }
    // purity check: <v|rho|v> must exhaust the trace
    let mut rv = vec![C64::new(0.0, 0.0); d];
    for m in 0..d {
        for mp in 0..d {
            rv[m] += rho[m * d + mp] * vec[mp];
        }
    }
    let vrv: f64 = vec
        .iter()
        .zip(&rv)
        .map(|(a, b)| (a.conj() * b).re)
        .sum();
    if (vrv - trace).abs() > 1e-8 * trace.max(1.0) {
        return Err(Error::invalid(
            "reduction",
            format!("second-mode marginal is not pure: <v|rho|v> = {vrv}, tr = {trace}"),
        ));
    }
    let mut out = FockVector::zeros(v.n_max, 1, Vec::new());
    out.amps = vec;
    Ok(out)
}
