//! Log-domain coherent-state overlap algebra.
//!
//! The overlap of two coherent states is
//!
//! ```text
//! <a|b> = exp(-|a|^2/2 - |b|^2/2 + conj(a) b)
//! ```
//!
//! The exponent is always assembled analytically before a single `exp` is
//! taken. Its real part is `-|a - b|^2 / 2 <= 0`, so the magnitude never
//! exceeds 1 and no intermediate factor like `exp(-|a|^2/2)` (which underflows
//! already at |a| ~ 40) is ever materialized. The assembly itself avoids
//! differences of `|a|^2`-sized terms, keeping exponents accurate to machine
//! precision in the strong-field regime |a| ~ 100 that the generation
//! protocols operate in.

use num_complex::Complex64 as C64;

/// Exponent `E` with `<a|b> = exp(E)`, in the rearranged form
///
/// ```text
/// E = (-|a|^2 - |b|^2 + 2 conj(a) b) / 2 = -|a - b|^2 / 2 + i Im(conj(a) b)
/// ```
///
/// The second form is used: the naive one subtracts |a|^2-sized terms and
/// leaves O(|a|^2 eps) absolute noise in the exponent (several 1e-12 at
/// |a| ~ 100), while `-|a - b|^2 / 2` is cancellation-free and exactly
/// nonpositive.
#[inline]
pub fn overlap_exponent(a: C64, b: C64) -> C64 {
    C64::new(-0.5 * (a - b).norm_sqr(), a.re * b.im - a.im * b.re)
}

/// Coherent-state overlap `<a|b>`.
#[inline]
pub fn overlap(a: C64, b: C64) -> C64 {
    overlap_exponent(a, b).exp()
}

/// Sum of terms `prefactor * exp(exponent)` accumulated with the largest
/// exponent real part factored out, so nothing overflows and relative
/// precision is set by the dominant term.
#[derive(Debug, Default, Clone)]
pub struct ExpSum {
    terms: Vec<(C64, C64)>,
}

impl ExpSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, prefactor: C64, exponent: C64) {
        if prefactor != C64::new(0.0, 0.0) {
            self.terms.push((prefactor, exponent));
        }
    }

    /// Evaluate the sum as an ordinary complex number.
    pub fn value(&self) -> C64 {
        if self.terms.is_empty() {
            return C64::new(0.0, 0.0);
        }
        let m = self
            .terms
            .iter()
            .map(|(_, e)| e.re)
            .fold(f64::NEG_INFINITY, f64::max);
        if m == f64::NEG_INFINITY {
            return C64::new(0.0, 0.0);
        }
        let mut acc = C64::new(0.0, 0.0);
        for &(p, e) in &self.terms {
            acc += p * (e - C64::new(m, 0.0)).exp();
        }
        acc * m.exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Independent oracle: truncated Fock sum
    /// `<a|b> = exp(-|a|^2/2 - |b|^2/2) sum_n (conj(a) b)^n / n!`,
    /// evaluated in log-scaled form so it stays usable up to |a| ~ 3.
    fn overlap_fock_oracle(a: C64, b: C64, n_max: usize) -> C64 {
        let mut term = C64::new((-0.5 * (a.norm_sqr() + b.norm_sqr())).exp(), 0.0);
        let mut sum = term;
        let z = a.conj() * b;
        for n in 1..=n_max {
            term = term * z / n as f64;
            sum += term;
        }
        sum
    }

    #[test]
    fn vacuum_with_itself_is_one() {
        assert_eq!(overlap(C64::new(0.0, 0.0), C64::new(0.0, 0.0)), C64::new(1.0, 0.0));
    }

    #[test]
    fn matches_fock_oracle_at_moderate_amplitude() {
        let cases = [
            (C64::new(2.0, 0.0), C64::new(-2.0, 0.0)),
            (C64::new(1.5, 0.0), C64::new(0.0, 1.5)),
            (C64::new(0.3, -1.2), C64::new(-0.7, 0.4)),
            (C64::new(0.0, 0.0), C64::new(2.5, 0.0)),
        ];
        for (a, b) in cases {
            let got = overlap(a, b);
            let want = overlap_fock_oracle(a, b, 60);
            assert_relative_eq!(got.re, want.re, epsilon = 1e-12, max_relative = 1e-10);
            assert_relative_eq!(got.im, want.im, epsilon = 1e-12, max_relative = 1e-10);
        }
    }

    #[test]
    fn opposite_amplitude_two() {
        // |<2|-2>| = e^{-8}; frozen from the Fock oracle above.
        let got = overlap(C64::new(2.0, 0.0), C64::new(-2.0, 0.0)).norm();
        assert_relative_eq!(got, 3.354626279025118e-4, max_relative = 1e-12);
        assert_relative_eq!(got, (-8.0f64).exp(), max_relative = 1e-14);
    }

    #[test]
    fn strong_field_rotated_overlap() {
        // |<100i | 100i e^{i 0.02}>| = exp(-1e4 (1 - cos 0.02)).
        // The exponent route must survive |a| = 100 without under/overflow.
        let a = C64::new(0.0, 100.0);
        let b = a * C64::new(0.0, 0.02).exp();
        let got = overlap(a, b).norm();
        let want = (-1.0e4 * (1.0 - 0.02f64.cos())).exp();
        assert_relative_eq!(got, want, max_relative = 1e-12);
        assert_relative_eq!(got, 0.135344305769249, max_relative = 1e-12);
    }

    #[test]
    fn exponent_real_part_never_positive() {
        let pts = [
            C64::new(0.0, 0.0),
            C64::new(3.0, -2.0),
            C64::new(-100.0, 40.0),
            C64::new(0.0, 100.0),
        ];
        for &a in &pts {
            for &b in &pts {
                assert!(overlap_exponent(a, b).re <= 1e-12);
                let d = a - b;
                assert_relative_eq!(
                    overlap_exponent(a, b).re,
                    -0.5 * d.norm_sqr(),
                    epsilon = 1e-9,
                    max_relative = 1e-12
                );
            }
        }
    }

    #[test]
    fn expsum_factors_out_dominant_exponent() {
        let mut s = ExpSum::new();
        s.push(C64::new(1.0, 0.0), C64::new(-2000.0, 0.0));
        s.push(C64::new(0.5, 0.0), C64::new(0.0, 0.0));
        assert_relative_eq!(s.value().re, 0.5, max_relative = 1e-15);

        let mut t = ExpSum::new();
        t.push(C64::new(1.0, 0.0), C64::new(-3.0, 1.0));
        t.push(C64::new(-0.25, 0.5), C64::new(-1.0, -2.0));
        let direct = C64::new(-3.0, 1.0).exp() + C64::new(-0.25, 0.5) * C64::new(-1.0, -2.0).exp();
        let got = t.value();
        assert_relative_eq!(got.re, direct.re, max_relative = 1e-14);
        assert_relative_eq!(got.im, direct.im, max_relative = 1e-14);
    }
}
