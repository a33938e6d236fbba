//! Deterministic, seedable randomness.
//!
//! [`RngStream`] is a counter-based generator: each output is a strong
//! 64-bit mix of `(key, counter)`, so a `(seed, call sequence)` pair yields
//! the same bytes on every platform, and [`RngStream::split`] derives
//! statistically independent child streams without shared mutable state.
//! On top of it sit the two samplers the artifact needs — isotropic Gaussian
//! vectors (Box–Muller) and exact von Mises–Fisher sampling on the unit
//! hypersphere (Ulrich/Wood rejection with a Householder rotation) — plus the
//! vMF log-density.

pub mod bessel;

use crate::geometry::{self, FeatureVector, UnitVector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum RandError {
    /// The rejection sampler exceeded its proposal budget.
    #[error("rejection sampling exceeded {limit} proposals")]
    RejectionOverflow { limit: u64 },
    /// The density evaluation lost all precision for these parameters.
    #[error("numerical overflow evaluating vMF density (d={d}, kappa={kappa})")]
    NumericalOverflow { d: usize, kappa: f64 },
}

/// Hard cap on rejection proposals per sample.
pub const MAX_PROPOSALS: u64 = 1_000_000;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer: a full-avalanche 64-bit mix.
#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Counter-based pseudorandom stream.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RngStream {
    key: u64,
    counter: u64,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        Self {
            key: mix64(seed.wrapping_add(GOLDEN)),
            counter: 0,
        }
    }

    /// Derives an independent child stream. Children with distinct ids (and
    /// children of distinct parents) never share output sequences.
    pub fn split(&self, child_id: u64) -> Self {
        Self {
            key: mix64(self.key ^ mix64(child_id.wrapping_mul(GOLDEN) ^ 0x5851_F42D_4C95_7F2D)),
            counter: 0,
        }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.counter = self.counter.wrapping_add(1);
        mix64(self.key.wrapping_add(self.counter.wrapping_mul(GOLDEN)))
    }

    /// Uniform in `[0, 1)` with 53 random bits.
    #[inline]
    pub fn uniform_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `(0, 1]`; safe as a `ln` argument.
    #[inline]
    pub fn uniform_open_f64(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `[0, bound)` by rejection (no modulo bias).
    pub fn uniform_range(&mut self, bound: u64) -> u64 {
        assert!(bound > 0);
        let zone = u64::MAX - (u64::MAX % bound);
        loop {
            let x = self.next_u64();
            if x < zone {
                return x % bound;
            }
        }
    }

    /// One standard normal draw (Box–Muller; consumes two uniforms).
    pub fn gaussian(&mut self) -> f64 {
        let u1 = self.uniform_open_f64();
        let u2 = self.uniform_f64();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    /// `d` independent standard normal draws.
    ///
    /// Both outputs of each Box–Muller pair are used, so a vector of length
    /// `d` consumes exactly `2·⌈d/2⌉` uniforms.
    pub fn gaussian_vector(&mut self, d: usize) -> FeatureVector {
        let mut out = Vec::with_capacity(d);
        while out.len() < d {
            let u1 = self.uniform_open_f64();
            let u2 = self.uniform_f64();
            let r = (-2.0 * u1.ln()).sqrt();
            let theta = std::f64::consts::TAU * u2;
            out.push(r * theta.cos());
            if out.len() < d {
                out.push(r * theta.sin());
            }
        }
        out
    }

    /// Fisher–Yates shuffle.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.uniform_range(i as u64 + 1) as usize;
            items.swap(i, j);
        }
    }

    /// Gamma(shape, 1) via Marsaglia–Tsang, with the `U^{1/α}` boost for
    /// shapes below one. Returns the draw and the number of proposals used.
    fn gamma(&mut self, shape: f64, budget: &mut u64) -> Result<f64, RandError> {
        debug_assert!(shape > 0.0);
        if shape < 1.0 {
            let g = self.gamma(shape + 1.0, budget)?;
            let u = self.uniform_open_f64();
            return Ok(g * u.powf(1.0 / shape));
        }
        let d = shape - 1.0 / 3.0;
        let c = 1.0 / (3.0 * d.sqrt());
        loop {
            if *budget == 0 {
                return Err(RandError::RejectionOverflow {
                    limit: MAX_PROPOSALS,
                });
            }
            *budget -= 1;
            let x = self.gaussian();
            let v = (1.0 + c * x).powi(3);
            if v <= 0.0 {
                continue;
            }
            let u = self.uniform_open_f64();
            if u < 1.0 - 0.0331 * x.powi(4)
                || u.ln() < 0.5 * x * x + d * (1.0 - v + v.ln())
            {
                return Ok(d * v);
            }
        }
    }

    /// Symmetric Beta(α, α) via two Gamma draws.
    fn beta_symmetric(&mut self, alpha: f64, budget: &mut u64) -> Result<f64, RandError> {
        let a = self.gamma(alpha, budget)?;
        let b = self.gamma(alpha, budget)?;
        Ok(a / (a + b))
    }
}

/// Parameters of a von Mises–Fisher distribution on the unit hypersphere.
#[derive(Debug, Clone)]
pub struct VmfParams {
    pub mu: UnitVector,
    pub kappa: f64,
}

impl VmfParams {
    pub fn new(mu: UnitVector, kappa: f64) -> Self {
        assert!(kappa >= 0.0, "concentration must be nonnegative");
        Self { mu, kappa }
    }

    pub fn dim(&self) -> usize {
        self.mu.len()
    }
}

/// Outcome of one vMF draw, with the proposal count for acceptance-rate
/// bookkeeping.
#[derive(Debug)]
pub struct VmfDraw {
    pub value: UnitVector,
    pub proposals: u64,
}

/// Samples vMF(μ, κ). See [`sample_vmf_with_stats`] for proposal counts.
pub fn sample_vmf(params: &VmfParams, rng: &mut RngStream) -> Result<UnitVector, RandError> {
    Ok(sample_vmf_with_stats(params, rng)?.value)
}

/// Ulrich/Wood rejection sampling of vMF(μ, κ), `d ≥ 2`.
///
/// The scalar `w = μᵀx` is drawn with envelope constants
/// `b = (−2κ + √(4κ² + (d−1)²))/(d−1)` and
/// `a = ((d−1) + 2κ + √(4κ² + (d−1)²))/4`; a uniform tangent fills the
/// orthogonal component at the north pole, and a Householder reflection
/// carries the north pole onto μ. At `κ = 0` the envelope accepts every
/// proposal and the scheme reduces to the uniform sphere distribution.
pub fn sample_vmf_with_stats(
    params: &VmfParams,
    rng: &mut RngStream,
) -> Result<VmfDraw, RandError> {
    sample_vmf_capped(params, rng, MAX_PROPOSALS)
}

fn sample_vmf_capped(
    params: &VmfParams,
    rng: &mut RngStream,
    cap: u64,
) -> Result<VmfDraw, RandError> {
    let d = params.dim();
    assert!(d >= 2, "vMF sampling needs dimension >= 2");
    let kappa = params.kappa;
    let dm1 = (d - 1) as f64;
    let root = (4.0 * kappa * kappa + dm1 * dm1).sqrt();
    let b = (-2.0 * kappa + root) / dm1;
    let a = (dm1 + 2.0 * kappa + root) / 4.0;
    let offset = 4.0 * a * b / (1.0 + b) - dm1 * dm1.ln();

    let mut budget = cap; // shared budget, also covers Gamma internals
    let mut trials: u64 = 0;
    let w = loop {
        if trials >= cap || budget == 0 {
            return Err(RandError::RejectionOverflow { limit: cap });
        }
        trials += 1;
        let z = rng.beta_symmetric(dm1 / 2.0, &mut budget)?;
        let denom = 1.0 - (1.0 - b) * z;
        let w = (1.0 - (1.0 + b) * z) / denom;
        let t = 2.0 * a * b / denom;
        let u = rng.uniform_open_f64();
        if dm1 * t.ln() - t + offset >= u.ln() {
            break w;
        }
    };

    // Uniform tangent direction in the (d−1)-dimensional orthogonal space.
    let tangent = loop {
        let g = rng.gaussian_vector(d - 1);
        let n = geometry::norm(&g);
        if n > geometry::DEGENERATE_NORM {
            break geometry::scale(&g, 1.0 / n);
        }
    };

    // Assemble at the north pole e₁, then reflect e₁ onto μ.
    let s = (1.0 - w * w).max(0.0).sqrt();
    let mut x = Vec::with_capacity(d);
    x.push(w);
    x.extend(tangent.iter().map(|t| s * t));

    let mu = params.mu.as_slice();
    let v: FeatureVector = (0..d)
        .map(|i| if i == 0 { 1.0 - mu[i] } else { -mu[i] })
        .collect();
    let vn2 = geometry::dot(&v, &v);
    if vn2 > 1e-28 {
        let c = 2.0 * geometry::dot(&v, &x) / vn2;
        for i in 0..d {
            x[i] -= c * v[i];
        }
    }

    // Guard the unit invariant against accumulated rounding.
    let value = geometry::project_to_sphere(&x).expect("vMF draw cannot be degenerate");
    Ok(VmfDraw {
        value,
        proposals: trials,
    })
}

/// Accumulates acceptance statistics across draws from one distribution.
#[derive(Debug, Clone)]
pub struct VmfSampler {
    pub params: VmfParams,
    samples: u64,
    proposals: u64,
}

impl VmfSampler {
    pub fn new(params: VmfParams) -> Self {
        Self {
            params,
            samples: 0,
            proposals: 0,
        }
    }

    pub fn sample(&mut self, rng: &mut RngStream) -> Result<UnitVector, RandError> {
        let draw = sample_vmf_with_stats(&self.params, rng)?;
        self.samples += 1;
        self.proposals += draw.proposals;
        Ok(draw.value)
    }

    /// Accepted samples per proposal; 1.0 means no rejections.
    pub fn acceptance_rate(&self) -> f64 {
        if self.proposals == 0 {
            return 1.0;
        }
        self.samples as f64 / self.proposals as f64
    }
}

/// `d` standard normal draws as a feature vector.
pub fn sample_gaussian_vector(d: usize, rng: &mut RngStream) -> FeatureVector {
    assert!(d >= 1);
    rng.gaussian_vector(d)
}

/// Log-density of vMF(μ, κ) at `x`, with normalizer
/// `κ^{d/2−1} / ((2π)^{d/2} I_{d/2−1}(κ))`.
pub fn vmf_log_density(params: &VmfParams, x: &UnitVector) -> Result<f64, RandError> {
    let d = params.dim();
    assert!(d >= 2);
    assert_eq!(x.len(), d);
    let kappa = params.kappa;
    let log_density = if kappa == 0.0 {
        -log_sphere_surface_area(d)
    } else {
        let nu = d as f64 / 2.0 - 1.0;
        let log_norm = nu * kappa.ln()
            - (d as f64 / 2.0) * (std::f64::consts::TAU).ln()
            - bessel::log_bessel_i(nu, kappa);
        kappa * geometry::dot(params.mu.as_slice(), x.as_slice()) + log_norm
    };
    if !log_density.is_finite() {
        return Err(RandError::NumericalOverflow { d, kappa });
    }
    Ok(log_density)
}

/// `ln` of the surface area of the unit sphere `S^{d−1}` in `R^d`.
pub fn log_sphere_surface_area(d: usize) -> f64 {
    let half_d = d as f64 / 2.0;
    std::f64::consts::LN_2 + half_d * std::f64::consts::PI.ln() - ln_gamma(half_d)
}

/// Lanczos log-gamma (g = 7, 9 coefficients), |rel err| < 1e-13 for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    const COEFFS: [f64; 9] = [
        0.999_999_999_999_809_93,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_6,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_572e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        // Reflection: Γ(x)Γ(1−x) = π / sin(πx)
        return std::f64::consts::PI.ln()
            - (std::f64::consts::PI * x).sin().abs().ln()
            - ln_gamma(1.0 - x);
    }
    let y = x - 1.0;
    let mut acc = COEFFS[0];
    for (i, &c) in COEFFS.iter().enumerate().skip(1) {
        acc += c / (y + i as f64);
    }
    let t = y + 7.5;
    0.5 * (std::f64::consts::TAU).ln() + (y + 0.5) * t.ln() - t + acc.ln()
}
