//! Phase-space diagnostics: pointwise Wigner function via displaced parity,
//! and grids for export.
//!
//! The Wigner function of a single-mode state is evaluated as the
//! displaced-parity expectation
//!
//! ```text
//! W(beta) = (2/pi) Tr[ rho D(beta) P D(beta)^dagger ]
//! ```
//!
//! with the matrix element between coherent states in closed form,
//!
//! ```text
//! <x| D P D^dag |y> = exp( conj(beta) y - beta conj(y)
//!                          + [ -|x|^2 - |2beta - y|^2
//!                              + 2 conj(x) (2beta - y) ] / 2 )
//! ```
//!
//! assembled in the exponent before a single `exp`, exactly like the overlap
//! algebra. This is exact and quadrature-free at every point; grid
//! integration (trapezoid) is used only as a normalization sanity check.
//! Values are bounded by `|W| <= 2/pi`.
//!
//! Grid coordinates are the real and imaginary parts of `beta`, so
//! `integral W dx dp = 1`.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::mixed::{BranchKet, MixedOperator};
use crate::overlap::ExpSum;
use crate::state::PureState;

/// A borrowed single-mode state, pure or mixed.
#[derive(Debug, Clone, Copy)]
pub enum StateRef<'a> {
    Pure(&'a PureState),
    Mixed(&'a MixedOperator),
}

impl<'a> From<&'a PureState> for StateRef<'a> {
    fn from(s: &'a PureState) -> Self {
        StateRef::Pure(s)
    }
}

impl<'a> From<&'a MixedOperator> for StateRef<'a> {
    fn from(s: &'a MixedOperator) -> Self {
        StateRef::Mixed(s)
    }
}

/// Exponent of `<x| D(beta) P D(beta)^dag |y>` for coherent labels x, y:
/// the reflected-label overlap exponent plus the displacement phase
/// `beta^* y - beta y^* = 2i Im(conj(beta) y)`.
fn displaced_parity_exponent(x: C64, y: C64, beta: C64) -> C64 {
    crate::overlap::overlap_exponent(x, 2.0 * beta - y)
        + C64::new(0.0, 2.0 * (beta.re * y.im - beta.im * y.re))
}

fn require_single_mode(fields: usize, photons: usize, mode_ok: bool) -> Result<()> {
    if fields == 1 && photons == 0 && mode_ok {
        Ok(())
    } else {
        Err(Error::NotSingleMode(format!(
            "{fields} field mode(s), {photons} photon(s)"
        )))
    }
}

/// Wigner function of a single-mode state at phase-space point `beta`.
pub fn wigner_point(state: StateRef<'_>, mode: &str, beta: C64) -> Result<f64> {
    match state {
        StateRef::Pure(s) => {
            let layout = s.layout();
            require_single_mode(
                layout.field_modes().len(),
                layout.photons().len(),
                layout.field_modes().first().map(|m| m == mode).unwrap_or(false),
            )?;
            let mut acc = ExpSum::new();
            for bj in s.branches() {
                for bk in s.branches() {
                    acc.push(
                        bj.coeff.conj() * bk.coeff,
                        displaced_parity_exponent(bj.labels[0], bk.labels[0], beta),
                    );
                }
            }
            let n2 = s.norm_sqr();
            if !(n2 > 1e-300) {
                return Err(Error::ZeroNorm);
            }
            Ok(std::f64::consts::FRAC_2_PI * acc.value().re / n2)
        }
        StateRef::Mixed(rho) => {
            let layout = rho.layout();
            require_single_mode(
                layout.field_modes().len(),
                layout.photons().len(),
                layout.field_modes().first().map(|m| m == mode).unwrap_or(false),
            )?;
            // Tr[|k><b| D P D^dag] = <b| D P D^dag |k>
            let element = |bra: &BranchKet, ket: &BranchKet| -> C64 {
                displaced_parity_exponent(bra.labels[0], ket.labels[0], beta).exp()
            };
            let mut val = 0.0;
            for t in rho.terms() {
                let e = element(&t.bra, &t.ket);
                let contrib = t.weight * e;
                val += if t.is_diagonal() { contrib.re } else { 2.0 * contrib.re };
            }
            let tr = rho.trace();
            if !(tr.abs() > 1e-300) {
                return Err(Error::ZeroTrace);
            }
            Ok(std::f64::consts::FRAC_2_PI * val / tr)
        }
    }
}

/// A rectangular Wigner grid over `beta = x + i p`.
#[derive(Debug, Clone)]
pub struct WignerGrid {
    pub x_min: f64,
    pub x_max: f64,
    pub p_min: f64,
    pub p_max: f64,
    pub nx: usize,
    pub np: usize,
    /// Row-major over x (outer) then p (inner).
    pub values: Vec<f64>,
}

impl WignerGrid {
    pub fn x_at(&self, ix: usize) -> f64 {
        grid_coord(self.x_min, self.x_max, self.nx, ix)
    }

    pub fn p_at(&self, ip: usize) -> f64 {
        grid_coord(self.p_min, self.p_max, self.np, ip)
    }

    pub fn value(&self, ix: usize, ip: usize) -> f64 {
        self.values[ix * self.np + ip]
    }

    /// Trapezoid quadrature of the grid; approaches 1 when the grid covers
    /// the state's support (range >= max |label| + 5, step <= 0.15).
    pub fn integral(&self) -> f64 {
        if self.nx < 2 || self.np < 2 {
            return 0.0;
        }
        let dx = (self.x_max - self.x_min) / (self.nx - 1) as f64;
        let dp = (self.p_max - self.p_min) / (self.np - 1) as f64;
        let mut sum = 0.0;
        for ix in 0..self.nx {
            let wx = if ix == 0 || ix == self.nx - 1 { 0.5 } else { 1.0 };
            for ip in 0..self.np {
                let wp = if ip == 0 || ip == self.np - 1 { 0.5 } else { 1.0 };
                sum += wx * wp * self.value(ix, ip);
            }
        }
        sum * dx * dp
    }

    /// Emit the CSV document: header `x,p,w`, row-major, 17 significant
    /// digits.
    pub fn write_csv<W: std::io::Write>(&self, out: &mut W) -> std::io::Result<()> {
        writeln!(out, "x,p,w")?;
        for ix in 0..self.nx {
            for ip in 0..self.np {
                writeln!(
                    out,
                    "{:.16e},{:.16e},{:.16e}",
                    self.x_at(ix),
                    self.p_at(ip),
                    self.value(ix, ip)
                )?;
            }
        }
        Ok(())
    }
}

fn grid_coord(min: f64, max: f64, n: usize, i: usize) -> f64 {
    if n == 1 {
        min
    } else {
        min + (max - min) * i as f64 / (n - 1) as f64
    }
}

/// Evaluate the Wigner function on a rectangular grid.
pub fn wigner_grid(
    state: StateRef<'_>,
    mode: &str,
    x_range: (f64, f64),
    p_range: (f64, f64),
    nx: usize,
    np: usize,
) -> Result<WignerGrid> {
    if nx == 0 || np == 0 || !(x_range.0 <= x_range.1) || !(p_range.0 <= p_range.1) {
        return Err(Error::invalid("grid", "empty ranges"));
    }
    let mut values = Vec::with_capacity(nx * np);
    for ix in 0..nx {
        let x = grid_coord(x_range.0, x_range.1, nx, ix);
        for ip in 0..np {
            let p = grid_coord(p_range.0, p_range.1, np, ip);
            values.push(wigner_point(state, mode, C64::new(x, p))?);
        }
    }
    Ok(WignerGrid {
        x_min: x_range.0,
        x_max: x_range.1,
        p_min: p_range.0,
        p_max: p_range.1,
        nx,
        np,
        values,
    })
}
