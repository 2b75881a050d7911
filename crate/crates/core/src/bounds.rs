//! Capacities, converse distortion lower bounds and region membership
//! tests for the two channel families.
//!
//! All converse bounds here are for a single direction: the bound on `D1`
//! uses the noise or SNR of the 1->2 link, and symmetrically for `D2`.

use crate::error::{Result, TwcError};
use crate::info_measures::{binary_entropy, binary_entropy_inverse, check_qary, qary_noise_entropy};
use crate::models::{Direction, JointSourceModel};
use crate::rd_functions::{distortion_at_rate, wz_rd_gaussian, RdCurve};

/// Slack (bits) within which a point counts as on a region boundary.
/// Non-strict regions accept `margin >= -BOUNDARY_TOL`, strict ones
/// require `margin > BOUNDARY_TOL`.
pub const BOUNDARY_TOL: f64 = 1e-12;

/// A distortion target for each direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistortionPair {
    pub d1: f64,
    pub d2: f64,
}

impl DistortionPair {
    pub fn new(d1: f64, d2: f64) -> Self {
        DistortionPair { d1, d2 }
    }

    pub fn get(&self, dir: Direction) -> f64 {
        match dir {
            Direction::OneToTwo => self.d1,
            Direction::TwoToOne => self.d2,
        }
    }
}

/// Source symbols per channel use, `K / N`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct RatePair(f64);

impl RatePair {
    pub fn new(r: f64) -> Result<Self> {
        if r.is_finite() && r > 0.0 {
            Ok(RatePair(r))
        } else {
            Err(TwcError::domain(format!("rate r = {r} must be positive and finite")))
        }
    }

    /// Scalar coding: one channel use per source symbol.
    pub fn scalar() -> Self {
        RatePair(1.0)
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// Outcome of a region membership test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionVerdict {
    pub inside: bool,
    /// Direction with the smallest slack.
    pub binding_constraint: Direction,
    /// `min_i (C_i - r R_i(D_i))` in bits.
    pub margin: f64,
    /// Per-direction slack, indexed 1->2 then 2->1.
    pub margins: [f64; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Boundary {
    Strict,
    NonStrict,
}

/// Builds a verdict from the per-direction required rates and capacities.
/// A direction needing zero rate is always satisfied, even under the
/// strict test with zero capacity.
fn verdict(required: [f64; 2], capacity: [f64; 2], boundary: Boundary) -> RegionVerdict {
    let margins = [capacity[0] - required[0], capacity[1] - required[1]];
    let ok = |i: usize| match boundary {
        Boundary::NonStrict => margins[i] >= -BOUNDARY_TOL,
        Boundary::Strict => required[i] == 0.0 || margins[i] > BOUNDARY_TOL,
    };
    let (binding, margin) = if margins[1] < margins[0] {
        (Direction::TwoToOne, margins[1])
    } else {
        (Direction::OneToTwo, margins[0])
    };
    RegionVerdict { inside: ok(0) && ok(1), binding_constraint: binding, margin, margins }
}

/// Per-direction capacity `log2 q - H(Z)` of the q-ary additive channel.
pub fn capacity_qary_additive(q: u32, eps: f64) -> Result<f64> {
    Ok((f64::from(q).log2() - qary_noise_entropy(q, eps)?).max(0.0))
}

/// `1/2 log2(1 + gamma)`.
pub fn capacity_awgn(gamma: f64) -> Result<f64> {
    if gamma.is_nan() || gamma < 0.0 {
        return Err(TwcError::domain(format!("SNR {gamma} must be non-negative")));
    }
    Ok(0.5 * gamma.ln_1p() / std::f64::consts::LN_2)
}

/// A converse distortion bound. `vacuous` is set when the information
/// available exceeds what lossless reproduction needs, so the bound
/// collapses to zero without constraining anything.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowerBound {
    pub distortion: f64,
    pub vacuous: bool,
}

/// Bound on `D1` for the binary symmetric source over the binary additive
/// channel at `r = 1`; `eps_noise` is the crossover of the 1->2 link.
pub fn converse_lb_binary(delta: f64, eps_noise: f64) -> Result<LowerBound> {
    if !(0.0..=0.5).contains(&delta) {
        return Err(TwcError::domain(format!("delta = {delta} is not in [0, 1/2]")));
    }
    check_qary(2, eps_noise)?;
    // 1 - H_b(D) <= 2 - H_b(delta) - H_b(eps), solved as
    // H_b(D) >= H_b(eps) + (H_b(delta) - 1); exact when delta = 1/2
    let target = binary_entropy(eps_noise)? + (binary_entropy(delta)? - 1.0);
    let vacuous = target < 0.0;
    let distortion = binary_entropy_inverse(target.clamp(0.0, 1.0))?;
    Ok(LowerBound { distortion, vacuous })
}

/// Bound on `D1` for independent uniform q-ary sources at `r = 1`.
/// Analytically equal to `eps_noise`.
pub fn converse_lb_qary_uniform(q: u32, eps_noise: f64) -> Result<LowerBound> {
    let rhs = capacity_qary_additive(q, eps_noise)?;
    let distortion = distortion_at_rate(RdCurve::QaryHamming { q }, rhs)?;
    Ok(LowerBound { distortion, vacuous: false })
}

/// `(1 - rho^2) / (1 + gamma)^(1/r)`.
pub fn converse_lb_gaussian(rho: f64, gamma: f64, r: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&rho) {
        return Err(TwcError::domain(format!("rho = {rho} is not in [-1, 1]")));
    }
    if gamma.is_nan() || gamma < 0.0 {
        return Err(TwcError::domain(format!("SNR {gamma} must be non-negative")));
    }
    RatePair::new(r)?;
    Ok((1.0 - rho * rho).max(0.0) / (1.0 + gamma).powf(1.0 / r))
}

fn gaussian_rho(source: &JointSourceModel) -> Result<f64> {
    match *source {
        JointSourceModel::BivariateGaussian { rho } => {
            source.validate()?;
            if rho.abs() < 1.0 {
                Ok(rho)
            } else {
                Err(TwcError::domain("Wyner-Ziv rate is undefined for |rho| = 1"))
            }
        }
        _ => Err(TwcError::domain("region test requires a bivariate Gaussian source")),
    }
}

fn gaussian_required(rho: f64, gammas: (f64, f64), r: f64, d: DistortionPair) -> Result<([f64; 2], [f64; 2])> {
    let r = RatePair::new(r)?.get();
    let required = [r * wz_rd_gaussian(rho, d.d1)?, r * wz_rd_gaussian(rho, d.d2)?];
    let capacity = [capacity_awgn(gammas.0)?, capacity_awgn(gammas.1)?];
    Ok((required, capacity))
}

/// Achievability test: `r R_WZ(D_i) < C_i` strictly in both directions.
pub fn achievable_region_lemma1(
    source: &JointSourceModel,
    gammas: (f64, f64),
    r: f64,
    d: DistortionPair,
) -> Result<RegionVerdict> {
    let rho = gaussian_rho(source)?;
    let (required, capacity) = gaussian_required(rho, gammas, r, d)?;
    Ok(verdict(required, capacity, Boundary::Strict))
}

/// Separation test for independent sources: `r R_i(D_i) <= C_i` in both
/// directions. `curves` and `capacities` are indexed 1->2 then 2->1.
pub fn jscc_region_independent(
    curves: [RdCurve; 2],
    capacities: (f64, f64),
    r: f64,
    d: DistortionPair,
) -> Result<RegionVerdict> {
    let r = RatePair::new(r)?.get();
    for c in [capacities.0, capacities.1] {
        if c.is_nan() || c < 0.0 {
            return Err(TwcError::domain(format!("capacity {c} must be non-negative")));
        }
    }
    let required = [r * curves[0].rate(d.d1)?, r * curves[1].rate(d.d2)?];
    Ok(verdict(required, [capacities.0, capacities.1], Boundary::NonStrict))
}

/// Necessary-and-sufficient test for Gaussian sources over the AWGN
/// two-way channel: `r R_WZ(D_i) <= 1/2 log2(1 + gamma_i)`.
pub fn gaussian_jscc_region(rho: f64, gammas: (f64, f64), r: f64, d: DistortionPair) -> Result<RegionVerdict> {
    let rho = gaussian_rho(&JointSourceModel::BivariateGaussian { rho })?;
    let (required, capacity) = gaussian_required(rho, gammas, r, d)?;
    Ok(verdict(required, capacity, Boundary::NonStrict))
}
