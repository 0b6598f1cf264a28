//! Shared oracles for the integration tests. Everything here is an
//! independent route: quadrature instead of closed forms, a Stirling
//! series instead of Lanczos, exact rational arithmetic instead of the
//! floating-point series.

#![allow(dead_code)]

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, ToPrimitive, Zero};

/// √π to full f64 precision (reference value, 40-digit computation).
pub const SQRT_PI: f64 = 1.772_453_850_905_516;

/// Frozen reference values, generated by `tools/gen_reference_values.py`
/// (40 significant digits, rounded here to the nearest f64).
pub mod reference {
    /// E_{1/2}(−1/4)
    pub const MLF_HALF_AT_NEG_QUARTER: f64 = 0.770_346_547_730_996_8;
    /// E_{0.7,1.3}(0.4)
    pub const MLF_07_13_AT_04: f64 = 1.643_712_199_403_624_6;
    /// E_{0.55,2}(−0.4)
    pub const MLF_055_2_AT_NEG04: f64 = 0.768_990_922_826_926_4;
    /// linear benchmark exact solution at t = 1, α = 0.95, AB = 1
    pub const LINEAR_T1_A095_UNIT: f64 = 0.381_864_329_385_998_4;
    /// … at t = 0.5, α = 0.55, AB = 1 − α + α/Γ(α)
    pub const LINEAR_T05_A055_GAMMA: f64 = 0.240_090_403_277_759_27;
    /// … at t = 0.5, α = 0.75, AB = 1
    pub const LINEAR_T05_A075_UNIT: f64 = 0.175_356_594_112_881_51;
    /// … at t = 0.25, α = 0.95, AB = 1
    pub const LINEAR_T025_A095_UNIT: f64 = 0.039_639_693_087_763_404;
    /// Γ(12.3456)
    pub const GAMMA_12_3456: f64 = 93_327_961.639_427_77;
    /// Γ(0.001)
    pub const GAMMA_0_001: f64 = 999.423_772_484_595_5;
    /// Γ(49.5)
    pub const GAMMA_49_5: f64 = 8.667_601_843_135_272e61;
}

/// ln Γ(x) for x ≥ 12 by the Stirling series with eight Bernoulli terms;
/// truncation error below 1e-19 relative.
fn stirling_ln_gamma(x: f64) -> f64 {
    debug_assert!(x >= 12.0);
    const COEFFS: [f64; 8] = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360_360.0,
        1.0 / 156.0,
        -3617.0 / 122_400.0,
    ];
    let mut series = 0.0;
    let x2 = x * x;
    let mut xp = x;
    for c in COEFFS {
        series += c / xp;
        xp *= x2;
    }
    (x - 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln() + series
}

/// Γ(x) oracle: upward recurrence into the Stirling regime. Fully
/// independent of the Lanczos path of the crate.
pub fn oracle_gamma(x: f64) -> f64 {
    assert!(x > 0.0);
    let mut shift = 1.0;
    let mut xx = x;
    while xx < 12.0 {
        shift *= xx;
        xx += 1.0;
    }
    stirling_ln_gamma(xx).exp() / shift
}

/// E_{1/2}(z) at rational z by exact rational arithmetic.
///
/// Splitting the series into even and odd indices turns every gamma factor
/// into integers or half-integers: Γ(m+1) = m! and
/// Γ(m + 3/2) = (2m+2)!·√π / (4^{m+1}·(m+1)!), so
///
/// E_{1/2}(z) = Σ z^{2m}/m!  +  (1/√π)·Σ z^{2m+1}·4^{m+1}·(m+1)!/(2m+2)!
///
/// Both sums are computed exactly; the only rounding is the final division
/// by √π and the conversion to f64.
pub fn oracle_mlf_one_half(z_num: i64, z_den: i64, terms: usize) -> f64 {
    let z = BigRational::new(BigInt::from(z_num), BigInt::from(z_den));
    let z2 = &z * &z;

    let mut even_sum = BigRational::zero();
    let mut z_pow = BigRational::one();
    let mut factorial = BigRational::one();
    for m in 0..terms {
        even_sum += &z_pow / &factorial;
        z_pow *= &z2;
        factorial *= BigRational::from(BigInt::from(m as i64 + 1));
    }

    let mut odd_sum = BigRational::zero();
    let mut z_pow = z.clone();
    for m in 0..terms {
        // 4^{m+1} (m+1)! / (2m+2)!
        let mut coeff = BigRational::one();
        for i in 1..=(m + 1) {
            coeff *= BigRational::from(BigInt::from(4 * i as i64));
        }
        let mut fact2 = BigRational::one();
        for i in 1..=(2 * m + 2) {
            fact2 *= BigRational::from(BigInt::from(i as i64));
        }
        odd_sum += &z_pow * coeff / fact2;
        z_pow *= &z2;
    }

    even_sum.to_f64().unwrap() + odd_sum.to_f64().unwrap() / SQRT_PI
}

/// Tanh-sinh quadrature of f over [a, b].
///
/// The integrand receives its evaluation point as offsets from both
/// endpoints, (s − a, b − s), computed without cancellation, so kernels
/// singular at an endpoint stay accurate. Levels are doubled until two
/// passes agree to `tol` relative.
pub fn tanh_sinh<F: Fn(f64, f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    let half_width = 0.5 * (b - a);
    const T_MAX: f64 = 6.0;
    let mut previous = f64::NAN;
    let mut value = f64::NAN;
    for level in 0..=11u32 {
        let h = 0.5_f64.powi(level as i32);
        let steps = (T_MAX / h).ceil() as i64;
        let mut sum = 0.0;
        for k in -steps..=steps {
            let t = k as f64 * h;
            let u = std::f64::consts::FRAC_PI_2 * t.sinh();
            // sech(u) and 1∓tanh(u) without overflow or cancellation
            let e = (-2.0 * u.abs()).exp();
            let sech = 2.0 * (-u.abs()).exp() / (1.0 + e);
            let weight = std::f64::consts::FRAC_PI_2 * t.cosh() * sech * sech;
            if weight == 0.0 {
                continue;
            }
            let delta = 2.0 * e / (1.0 + e); // 1 − |tanh(u)|
            let (lo, ro) = if k >= 0 {
                (half_width * (2.0 - delta), half_width * delta)
            } else {
                (half_width * delta, half_width * (2.0 - delta))
            };
            sum += weight * f(lo, ro);
        }
        value = sum * h * half_width;
        if level >= 3 && (value - previous).abs() <= tol * value.abs().max(1e-300) {
            return value;
        }
        previous = value;
    }
    value
}

/// Quadrature of ∫_{panel} (t_target − s)^{α−1} ℓ(s) ds where ℓ is the
/// Lagrange basis over `nodes` peaked at `nodes[which]`. The kernel
/// distance is formed from the right-endpoint offset so the singular
/// panel (one ending at t_target) stays accurate.
pub fn oracle_panel_weight(
    alpha: f64,
    t_target: f64,
    panel: (f64, f64),
    nodes: &[f64],
    which: usize,
) -> f64 {
    let (a, b) = panel;
    let gap = t_target - b; // ≥ 0; zero on the current panel
    tanh_sinh(
        |lo, ro| {
            let s = a + lo;
            let kernel = (gap + ro).powf(alpha - 1.0);
            let mut basis = 1.0;
            for (i, &z) in nodes.iter().enumerate() {
                if i != which {
                    basis *= (s - z) / (nodes[which] - z);
                }
            }
            kernel * basis
        },
        a,
        b,
        1e-14,
    )
}

#[cfg(test)]
mod self_checks {
    use super::*;

    #[test]
    fn tanh_sinh_integrates_polynomials() {
        let v = tanh_sinh(|lo, _| lo * lo, 0.0, 2.0, 1e-14);
        assert!((v - 8.0 / 3.0).abs() < 1e-13);
    }

    #[test]
    fn tanh_sinh_handles_endpoint_singularity() {
        // ∫_0^1 s^{-1/2} ds = 2
        let v = tanh_sinh(|lo, _| 1.0 / lo.sqrt(), 0.0, 1.0, 1e-14);
        assert!((v - 2.0).abs() < 1e-12);
    }

    #[test]
    fn stirling_oracle_matches_known_values() {
        assert!((oracle_gamma(1.0) - 1.0).abs() < 1e-14);
        assert!((oracle_gamma(5.0) - 24.0).abs() < 24.0 * 1e-14);
        assert!((oracle_gamma(0.5) - SQRT_PI).abs() < 1e-14);
    }

    #[test]
    fn rational_mlf_oracle_matches_reference() {
        let v = oracle_mlf_one_half(-1, 4, 60);
        assert!((v - reference::MLF_HALF_AT_NEG_QUARTER).abs() < 1e-14);
    }
}
