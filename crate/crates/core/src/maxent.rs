//! Maximum-entropy input law on a bounded region under a power budget, and
//! the high-SNR capacity loss it induces.
//!
//! The entropy-maximizing density on S with mean power at most P is the
//! truncated Gaussian tilt
//!
//!   f★(x) = e^{-λ|x|²} / ∫_S e^{-λ|x'|²} dx'  on S,
//!
//! with λ = 0 once P reaches the uniform power P_U, and otherwise the unique
//! λ > 0 matching the tilted mean power to P. The induced vanishing-noise
//! capacity loss is
//!
//!   L = log P + log(πe) - log z0(λ) - λ P  (nats).

use num_complex::Complex64;
use std::f64::consts::{LN_10, PI};

use crate::error::{Error, Result};
use crate::numerics::root::brent;
use crate::regions::Region;

/// Cap on the tilt bracket; hitting it means the requested power sits below
/// anything reachable in f64 range.
const LAMBDA_CAP: f64 = 1e12;

/// Solution bundle for one (region, power) pair.
#[derive(Debug, Clone, Copy)]
pub struct MaxEntSolution {
    /// Lagrange tilt λ ≥ 0; zero iff P ≥ P_U.
    pub lambda: f64,
    /// Normalizer z0 = ∫_S e^{-λ|x'|²} dx'.
    pub z0: f64,
    /// The requested power budget P.
    pub power_constraint: f64,
    /// E|X★|² = min(P, P_U).
    pub effective_power: f64,
    /// Differential entropy of f★ in nats: log z0 + λ E|X★|².
    pub entropy: f64,
    /// Capacity loss in nats.
    pub loss: f64,
    /// The loss expressed as a high-SNR power penalty in dB:
    /// 10 log10(e^loss).
    pub loss_db: f64,
}

/// Solve the tilt equation m2(λ)/z0(λ) = P.
///
/// Returns 0 when P ≥ P_U. Otherwise brackets λ by doubling from 1 (the
/// tilted power is strictly decreasing) and polishes with Brent until the
/// residual |m2/z0 - P| drops below 1e-10 P.
pub fn solve_lambda(region: &Region, power: f64) -> Result<f64> {
    if !power.is_finite() || power <= 0.0 {
        return Err(Error::NoBracket(format!(
            "power budget must be positive and finite, got {power}"
        )));
    }
    let p_uniform = region.uniform_power();
    if power >= p_uniform {
        return Ok(0.0);
    }
    let tilted = |lambda: f64| -> Result<f64> {
        Ok(region.moments(lambda)?.tilted_power())
    };
    let mut lo = 0.0;
    let mut hi = 1.0;
    while tilted(hi)? >= power {
        lo = hi;
        hi *= 2.0;
        if hi > LAMBDA_CAP {
            return Err(Error::NoBracket(format!(
                "tilt exceeded {LAMBDA_CAP:e} without reaching power {power:e}; \
                 the requested power is outside the numerically reachable range"
            )));
        }
    }
    // the closure inside brent cannot return Err; stash any failure
    let failure = std::cell::Cell::new(false);
    let f = |lambda: f64| match tilted(lambda) {
        Ok(t) => t - power,
        Err(_) => {
            failure.set(true);
            0.0
        }
    };
    let res = brent(f, lo, hi, 1e-13 * hi.max(1.0), 1e-13 * power, 500)
        .expect("tilted power straddles the budget on [lo, hi] by construction");
    if failure.get() {
        return Err(Error::QuadratureFailure(
            "moment evaluation failed inside the tilt solve".into(),
        ));
    }
    let lambda = res.root.max(0.0);
    let residual = (tilted(lambda)? - power).abs();
    if residual > 1e-10 * power {
        return Err(Error::QuadratureFailure(format!(
            "tilt residual {residual:e} exceeds 1e-10 P after {} iterations",
            res.iterations
        )));
    }
    Ok(lambda)
}

/// Full asymptotic capacity-loss evaluation for one (region, power) pair.
pub fn capacity_loss(region: &Region, power: f64) -> Result<MaxEntSolution> {
    let lambda = solve_lambda(region, power)?;
    let z0 = region.moments(lambda)?.z0;
    let p_uniform = region.uniform_power();
    let effective_power = power.min(p_uniform);
    let entropy = z0.ln() + lambda * effective_power;
    let loss = power.ln() + (PI * std::f64::consts::E).ln() - z0.ln() - lambda * power;
    Ok(MaxEntSolution {
        lambda,
        z0,
        power_constraint: power,
        effective_power,
        entropy,
        loss,
        loss_db: loss * 10.0 / LN_10,
    })
}

/// f★ evaluated at x: e^{-λ|x|²} / z0 on S, zero outside.
pub fn fstar_density(region: &Region, sol: &MaxEntSolution, x: Complex64) -> f64 {
    if region.contains(x) {
        (-sol.lambda * x.norm_sqr()).exp() / sol.z0
    } else {
        0.0
    }
}
