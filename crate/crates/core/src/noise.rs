//! Unit-variance complex noise models.
//!
//! Downstream consumers need exactly three facts about the noise W: its
//! differential entropy h(W), an upper bound on the radial tail
//! Prob(|W| > t), and a way to draw samples. Circularly-symmetric Gaussian
//! noise supplies all three in closed form (plus a log-density for the
//! Monte Carlo estimator); custom noise provides them explicitly, falling
//! back to the Chebyshev tail when no sharper bound is known.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use std::f64::consts::PI;
use std::sync::Arc;

type DrawFn = Arc<dyn Fn(&mut ChaCha8Rng) -> Complex64 + Send + Sync>;
type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
type LogDensityFn = Arc<dyn Fn(Complex64) -> f64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseKind {
    CircularGaussian,
    Custom,
}

enum Tail {
    /// Prob(|W| > t) = e^{-t²}, exact for the circular Gaussian.
    GaussianExact,
    /// min(1, 1/t²), valid for any unit-variance noise.
    Chebyshev,
    Provided(ScalarFn),
}

/// A unit-variance, zero-mean complex noise law.
pub struct NoiseModel {
    kind: NoiseKind,
    entropy: f64,
    tail: Tail,
    log_density: Option<LogDensityFn>,
    draw: DrawFn,
}

impl NoiseModel {
    /// Standard circularly-symmetric complex Gaussian, E|W|² = 1.
    pub fn circular_gaussian() -> Self {
        Self {
            kind: NoiseKind::CircularGaussian,
            entropy: (PI * std::f64::consts::E).ln(),
            tail: Tail::GaussianExact,
            log_density: Some(Arc::new(|w: Complex64| -w.norm_sqr() - PI.ln())),
            draw: Arc::new(|rng: &mut ChaCha8Rng| {
                let re: f64 = StandardNormal.sample(rng);
                let im: f64 = StandardNormal.sample(rng);
                Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
            }),
        }
    }

    /// Custom noise from its entropy, an optional tail bound (Chebyshev
    /// when omitted), and a sampler. The caller is responsible for the
    /// unit-variance / zero-mean normalization; `empirical_moments` exists
    /// to check it.
    pub fn custom(
        entropy_nats: f64,
        tail: Option<ScalarFn>,
        draw: DrawFn,
    ) -> Self {
        Self {
            kind: NoiseKind::Custom,
            entropy: entropy_nats,
            tail: match tail {
                Some(f) => Tail::Provided(f),
                None => Tail::Chebyshev,
            },
            log_density: None,
            draw,
        }
    }

    /// Attach a log-density, enabling the Monte Carlo mutual-information
    /// estimator for this noise.
    pub fn with_log_density(mut self, f: LogDensityFn) -> Self {
        self.log_density = Some(f);
        self
    }

    /// Replace the tail with the generic Chebyshev bound; used to compare
    /// bound curves computed with the exact and the generic tail.
    pub fn with_chebyshev_tail(mut self) -> Self {
        self.tail = Tail::Chebyshev;
        self
    }

    pub fn kind(&self) -> NoiseKind {
        self.kind
    }

    /// Differential entropy h(W) in nats.
    pub fn entropy_nats(&self) -> f64 {
        self.entropy
    }

    /// Upper bound on Prob(|W| > t), clamped to [0, 1].
    pub fn tail(&self, t: f64) -> f64 {
        let v = match &self.tail {
            Tail::GaussianExact => (-t * t).exp(),
            Tail::Chebyshev => chebyshev_tail(t),
            Tail::Provided(f) => f(t),
        };
        v.clamp(0.0, 1.0)
    }

    /// Log-density of W, if the model carries one.
    pub fn log_density(&self, w: Complex64) -> Option<f64> {
        self.log_density.as_ref().map(|f| f(w))
    }

    /// Seeded sampler; identical seeds give identical streams.
    pub fn sampler(&self, seed: u64) -> NoiseSampler {
        NoiseSampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            draw: Arc::clone(&self.draw),
        }
    }

    /// Sample mean and mean |W|² over n draws, with the standard error of
    /// the power estimate. Used to check the normalization invariants.
    pub fn empirical_moments(&self, n: usize, seed: u64) -> (Complex64, f64, f64) {
        let mut s = self.sampler(seed);
        let mut mean = Complex64::new(0.0, 0.0);
        let mut pow = 0.0;
        let mut pow_sq = 0.0;
        for _ in 0..n {
            let w = s.draw();
            mean += w;
            let p = w.norm_sqr();
            pow += p;
            pow_sq += p * p;
        }
        let nf = n as f64;
        let pow_mean = pow / nf;
        let pow_var = (pow_sq / nf - pow_mean * pow_mean).max(0.0);
        (mean / nf, pow_mean, (pow_var / nf).sqrt())
    }
}

impl std::fmt::Debug for NoiseModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("NoiseModel")
            .field("kind", &self.kind)
            .field("entropy", &self.entropy)
            .finish_non_exhaustive()
    }
}

/// The generic unit-variance radial tail bound min(1, 1/t²).
pub fn chebyshev_tail(t: f64) -> f64 {
    if t <= 1.0 {
        1.0
    } else {
        1.0 / (t * t)
    }
}

/// Stream of noise draws with an owned generator.
pub struct NoiseSampler {
    rng: ChaCha8Rng,
    draw: DrawFn,
}

impl NoiseSampler {
    pub fn draw(&mut self) -> Complex64 {
        (self.draw)(&mut self.rng)
    }

    /// Independent sampler on a derived stream; the supported way to fan
    /// out sampling across workers.
    pub fn derive(&self, stream: u64) -> NoiseSampler {
        let mut rng = self.rng.clone();
        rng.set_stream(stream);
        NoiseSampler {
            rng,
            draw: Arc::clone(&self.draw),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_entropy_is_log_pi_e() {
        let w = NoiseModel::circular_gaussian();
        assert!((w.entropy_nats() - 2.144_729_885_849_400_2).abs() < 1e-15);
    }

    #[test]
    fn gaussian_tail_values() {
        let w = NoiseModel::circular_gaussian();
        assert_eq!(w.tail(0.0), 1.0);
        assert!((w.tail(1.0) - (-1.0f64).exp()).abs() < 1e-15);
        assert!(w.tail(10.0) < 1e-40);
    }

    #[test]
    fn gaussian_tail_monte_carlo_check() {
        // Prob(|W| > 1) = e^{-1} against 10^7 draws, within 3 standard errors
        let w = NoiseModel::circular_gaussian();
        let mut s = w.sampler(7);
        let n = 10_000_000usize;
        let hits = (0..n).filter(|_| s.draw().norm() > 1.0).count();
        let p_hat = hits as f64 / n as f64;
        let p = (-1.0f64).exp();
        let se = (p * (1.0 - p) / n as f64).sqrt();
        assert!(
            (p_hat - p).abs() < 3.0 * se,
            "{p_hat} vs {p} (3se = {})",
            3.0 * se
        );
    }

    #[test]
    fn chebyshev_tail_values() {
        assert_eq!(chebyshev_tail(1.0), 1.0);
        assert_eq!(chebyshev_tail(10.0), 0.01);
        assert_eq!(chebyshev_tail(0.5), 1.0);
    }

    #[test]
    fn gaussian_tail_below_chebyshev() {
        let w = NoiseModel::circular_gaussian();
        let mut t = 0.1;
        while t <= 10.0 {
            assert!(w.tail(t) <= chebyshev_tail(t) + 1e-15, "t={t}");
            t += 0.1;
        }
    }

    #[test]
    fn tail_nonincreasing() {
        let w = NoiseModel::circular_gaussian();
        let mut prev = w.tail(0.0);
        for i in 1..=100 {
            let v = w.tail(i as f64 * 0.1);
            assert!(v <= prev);
            prev = v;
        }
    }

    #[test]
    fn sampler_determinism_and_derivation() {
        let w = NoiseModel::circular_gaussian();
        let mut a = w.sampler(42);
        let mut b = w.sampler(42);
        for _ in 0..100 {
            assert_eq!(a.draw(), b.draw());
        }
        let mut c = w.sampler(42).derive(1);
        let mut d = w.sampler(42);
        // derived stream differs from the base stream
        let same = (0..100).all(|_| c.draw() == d.draw());
        assert!(!same);
    }

    #[test]
    fn gaussian_moments_normalized() {
        let w = NoiseModel::circular_gaussian();
        let (mean, pow, se) = w.empirical_moments(1_000_000, 3);
        assert!(mean.norm() < 3e-3, "mean {mean}");
        assert!((pow - 1.0).abs() < 3.0 * se, "power {pow} (3se {})", 3.0 * se);
    }

    #[test]
    fn custom_noise_defaults_to_chebyshev() {
        // uniform phase on the unit circle: zero mean, |W|² = 1 exactly
        let w = NoiseModel::custom(
            1.0,
            None,
            Arc::new(|rng: &mut ChaCha8Rng| {
                let theta: f64 = rand::Rng::gen_range(rng, 0.0..2.0 * PI);
                Complex64::new(theta.cos(), theta.sin())
            }),
        );
        assert_eq!(w.kind(), NoiseKind::Custom);
        assert_eq!(w.tail(2.0), 0.25);
        assert!(w.log_density(Complex64::new(0.0, 0.0)).is_none());
        let (mean, pow, _) = w.empirical_moments(100_000, 5);
        assert!(mean.norm() < 0.01);
        assert!((pow - 1.0).abs() < 1e-12);
    }
}
