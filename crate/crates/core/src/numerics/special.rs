//! Stable evaluations of the Gaussian-tilt integrals that appear throughout
//! the region moment computations, built on `libm`'s erf family.

use std::f64::consts::PI;

/// ∫_a^b e^{-λ t²} dt for λ ≥ 0.
///
/// Uses erfc differences on the far tail to avoid cancellation between
/// near-one erf values, and a short series for λ·b² → 0 where the erf
/// quotient form loses digits.
pub fn gauss_segment(a: f64, b: f64, lambda: f64) -> f64 {
    debug_assert!(lambda >= 0.0, "tilt must be nonnegative");
    if a == b {
        return 0.0;
    }
    if a > b {
        return -gauss_segment(b, a, lambda);
    }
    if b <= 0.0 {
        // even integrand
        return gauss_segment(-b, -a, lambda);
    }
    if a < 0.0 {
        return gauss_segment(0.0, -a, lambda) + gauss_segment(0.0, b, lambda);
    }
    // 0 <= a < b
    if lambda * b * b < 1e-8 {
        let d3 = (b - a) * (b * b + a * b + a * a) / 3.0;
        let d5 = (b.powi(5) - a.powi(5)) / 10.0;
        return (b - a) - lambda * d3 + lambda * lambda * d5;
    }
    let s = lambda.sqrt();
    let scale = 0.5 * (PI / lambda).sqrt();
    if s * a >= 1.0 {
        // tail regime: erf values saturate near 1, so difference erfc instead
        scale * (libm::erfc(s * a) - libm::erfc(s * b))
    } else {
        scale * (libm::erf(s * b) - libm::erf(s * a))
    }
}

/// ∫_{-h}^{h} t² e^{-λ t²} dt for λ ≥ 0.
///
/// The closed form (∫e^{-λt²} - 2h e^{-λh²}) / (2λ) cancels catastrophically
/// as λ h² → 0, so a series takes over below 1e-4.
pub fn gauss_sym_second_moment(h: f64, lambda: f64) -> f64 {
    debug_assert!(h >= 0.0 && lambda >= 0.0);
    let u = lambda * h * h;
    if u < 1e-4 {
        let h3 = h * h * h;
        return h3
            * (2.0 / 3.0 - u * (2.0 / 5.0) + u * u / 7.0 - u * u * u / 27.0
                + u * u * u * u / 132.0);
    }
    let g0 = gauss_segment(-h, h, lambda);
    (g0 - 2.0 * h * (-u).exp()) / (2.0 * lambda)
}

/// Scaled complementary error function erfcx(x) = e^{x²} erfc(x), x ≥ 0.
///
/// Direct evaluation is exact-to-rounding up to x ≈ 26 (erfc still normal,
/// e^{x²} still finite); beyond that the asymptotic series
/// 1/(x√π) · Σ (-1)^k (2k-1)!! / (2x²)^k takes over.
pub fn erfcx(x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    if x < 26.0 {
        return (x * x).exp() * libm::erfc(x);
    }
    let inv2 = 1.0 / (2.0 * x * x);
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..=8u32 {
        term *= -(f64::from(2 * k - 1)) * inv2;
        sum += term;
    }
    sum / (x * PI.sqrt())
}

/// (1 - e^{-s}) / (2s), the boundary-reduced kernel of ∫ e^{-λ|x|²} with
/// s = λ|x|². Continuous extension 1/2 at s = 0; `expm1` keeps the small-s
/// regime exact.
pub fn tilt_kernel_mass(s: f64) -> f64 {
    debug_assert!(s >= 0.0);
    if s == 0.0 {
        return 0.5;
    }
    -libm::expm1(-s) / (2.0 * s)
}

/// (1 - e^{-s}(1 + s)) / (2s²), the kernel of ∫ |x|² e^{-λ|x|²} divided by
/// |x|². Continuous extension 1/4 at s = 0.
pub fn tilt_kernel_power(s: f64) -> f64 {
    debug_assert!(s >= 0.0);
    if s < 1e-8 {
        // leading series terms; the quotient form is 0/0 at s = 0
        return 0.25 - s / 6.0;
    }
    one_minus_exp_linear(s) / (2.0 * s * s)
}

/// 1 - e^{-s}(1 + s), evaluated without cancellation.
///
/// Series Σ_{j≥2} (-1)^j (j-1)/j! s^j below s = 0.1, direct form above.
pub fn one_minus_exp_linear(s: f64) -> f64 {
    debug_assert!(s >= 0.0);
    if s < 0.1 {
        let mut sum = 0.0;
        let mut sj = s * s; // s^j starting at j = 2
        let mut fact = 2.0; // j!
        for j in 2..=12u32 {
            let coeff = f64::from(j - 1) / fact;
            let term = coeff * sj;
            sum += if j % 2 == 0 { term } else { -term };
            sj *= s;
            fact *= f64::from(j + 1);
        }
        return sum;
    }
    1.0 - (-s).exp() * (1.0 + s)
}
