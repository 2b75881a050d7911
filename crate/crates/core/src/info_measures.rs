//! Entropy and mutual-information primitives, all in bits.
//!
//! Zero-probability terms are skipped by branching, so boundary parameters
//! (`p = 0`, `p = 1`, point masses) give exact results rather than NaN.

use crate::error::{Result, TwcError};
use crate::models::{Direction, DiscreteTwc};

/// Guaranteed absolute accuracy on the argument for every bisection in
/// this crate. The loops continue until the bracket stops shrinking.
pub const BISECTION_TOL: f64 = 1e-12;

pub(crate) const BISECTION_MAX_STEPS: usize = 200;

/// Few-ulp margin on entropy comparisons inside inversions. Floating
/// entropy is not monotone at the last bit, so the margin keeps inverted
/// distortions from landing past the true preimage.
pub(crate) fn entropy_slack(h: f64) -> f64 {
    8.0 * f64::EPSILON * h.abs().max(1.0)
}

/// Probability-sum tolerance for distributions and channel slices.
pub const PROB_SUM_TOL: f64 = 1e-12;

#[inline]
fn plogp(p: f64) -> f64 {
    if p > 0.0 {
        -p * p.log2()
    } else {
        0.0
    }
}

fn check_probability(p: f64, name: &str) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(TwcError::domain(format!("{name} = {p} is not in [0, 1]")))
    }
}

/// `H_b(p) = -p log2 p - (1-p) log2 (1-p)`.
pub fn binary_entropy(p: f64) -> Result<f64> {
    check_probability(p, "p")?;
    Ok(plogp(p) + plogp(1.0 - p))
}

/// Inverse of [`binary_entropy`] on the lower branch `[0, 1/2]`.
///
/// Returns the lower end of the final bisection bracket, so the result
/// never exceeds the true preimage by more than rounding.
pub fn binary_entropy_inverse(h: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&h) {
        return Err(TwcError::domain(format!("entropy {h} is not in [0, 1]")));
    }
    if h == 0.0 {
        return Ok(0.0);
    }
    if h == 1.0 {
        return Ok(0.5);
    }
    let (mut lo, mut hi) = (0.0f64, 0.5f64);
    // runs to full precision, well inside BISECTION_TOL
    for _ in 0..BISECTION_MAX_STEPS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if plogp(mid) + plogp(1.0 - mid) < h - entropy_slack(h) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Entropy of the q-ary noise with `Pr(0) = 1 - eps` and the remaining
/// mass spread evenly over the `q - 1` non-zero symbols.
pub fn qary_noise_entropy(q: u32, eps: f64) -> Result<f64> {
    check_qary(q, eps)?;
    let spread = if eps > 0.0 { eps * f64::from(q - 1).log2() } else { 0.0 };
    Ok(plogp(eps) + plogp(1.0 - eps) + spread)
}

pub(crate) fn check_qary(q: u32, eps: f64) -> Result<()> {
    if q < 2 {
        return Err(TwcError::domain(format!("alphabet size q = {q} must be at least 2")));
    }
    let max = f64::from(q - 1) / f64::from(q);
    if !(0.0..=max).contains(&eps) {
        return Err(TwcError::domain(format!("eps = {eps} is not in [0, {max}] for q = {q}")));
    }
    Ok(())
}

/// Shannon entropy of a probability vector.
pub fn discrete_entropy(dist: &[f64]) -> Result<f64> {
    check_distribution(dist, "distribution")?;
    Ok(dist.iter().copied().map(plogp).sum())
}

pub(crate) fn check_distribution(dist: &[f64], name: &str) -> Result<()> {
    if dist.is_empty() {
        return Err(TwcError::domain(format!("{name} is empty")));
    }
    if let Some(p) = dist.iter().find(|p| !(p.is_finite() && **p >= 0.0)) {
        return Err(TwcError::domain(format!("{name} has invalid entry {p}")));
    }
    let total: f64 = dist.iter().sum();
    if (total - 1.0).abs() > PROB_SUM_TOL {
        return Err(TwcError::domain(format!("{name} sums to {total}, not 1")));
    }
    Ok(())
}

/// Named axis of a [`DiscreteJoint`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X1,
    X2,
    Y1,
    Y2,
}

/// Joint probability tensor over finite alphabets, stored row-major in the
/// order of `axes`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteJoint {
    axes: Vec<(Axis, usize)>,
    probs: Vec<f64>,
}

impl DiscreteJoint {
    pub fn new(axes: Vec<(Axis, usize)>, probs: Vec<f64>) -> Result<Self> {
        for (i, (a, n)) in axes.iter().enumerate() {
            if *n == 0 {
                return Err(TwcError::domain(format!("axis {a:?} has empty alphabet")));
            }
            if axes[..i].iter().any(|(b, _)| b == a) {
                return Err(TwcError::domain(format!("axis {a:?} repeated")));
            }
        }
        let len: usize = axes.iter().map(|(_, n)| n).product();
        if probs.len() != len {
            return Err(TwcError::domain(format!(
                "tensor has {} entries, axes imply {len}",
                probs.len()
            )));
        }
        check_distribution(&probs, "joint tensor")?;
        Ok(DiscreteJoint { axes, probs })
    }

    pub fn axes(&self) -> &[(Axis, usize)] {
        &self.axes
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Sums out every axis not listed in `keep`; the result keeps the
    /// original relative axis order.
    pub fn marginal(&self, keep: &[Axis]) -> Result<DiscreteJoint> {
        for a in keep {
            if !self.axes.iter().any(|(b, _)| b == a) {
                return Err(TwcError::domain(format!("axis {a:?} not present")));
            }
        }
        let kept: Vec<(Axis, usize)> =
            self.axes.iter().copied().filter(|(a, _)| keep.contains(a)).collect();
        let len: usize = kept.iter().map(|(_, n)| n).product();
        let mut out = vec![0.0; len];
        let mut coords = vec![0usize; self.axes.len()];
        for &p in &self.probs {
            let mut idx = 0;
            for (k, (a, n)) in self.axes.iter().enumerate() {
                if keep.contains(a) {
                    idx = idx * n + coords[k];
                }
            }
            out[idx] += p;
            // odometer increment, last axis fastest
            for k in (0..coords.len()).rev() {
                coords[k] += 1;
                if coords[k] < self.axes[k].1 {
                    break;
                }
                coords[k] = 0;
            }
        }
        Ok(DiscreteJoint { axes: kept, probs: out })
    }

    /// Joint entropy of the listed axes.
    pub fn entropy_of(&self, axes: &[Axis]) -> Result<f64> {
        let m = self.marginal(axes)?;
        Ok(m.probs.iter().copied().map(plogp).sum())
    }

    /// `I(A; B | C)` from the entropy identity
    /// `H(A,C) + H(B,C) - H(A,B,C) - H(C)`.
    pub fn conditional_mutual_information(&self, a: &[Axis], b: &[Axis], c: &[Axis]) -> Result<f64> {
        let join = |xs: &[&[Axis]]| xs.iter().flat_map(|s| s.iter().copied()).collect::<Vec<_>>();
        let h_ac = self.entropy_of(&join(&[a, c]))?;
        let h_bc = self.entropy_of(&join(&[b, c]))?;
        let h_abc = self.entropy_of(&join(&[a, b, c]))?;
        let h_c = if c.is_empty() { 0.0 } else { self.entropy_of(c)? };
        Ok((h_ac + h_bc - h_abc - h_c).max(0.0))
    }
}

/// Builds `p(x1) p(x2) p(y1, y2 | x1, x2)` as a four-axis tensor.
pub fn channel_joint(px1: &[f64], px2: &[f64], channel: &DiscreteTwc) -> Result<DiscreteJoint> {
    let (n1, n2, m1, m2) = channel.dims();
    if px1.len() != n1 || px2.len() != n2 {
        return Err(TwcError::domain(format!(
            "input distributions have sizes ({}, {}), channel expects ({n1}, {n2})",
            px1.len(),
            px2.len()
        )));
    }
    check_distribution(px1, "p(x1)")?;
    check_distribution(px2, "p(x2)")?;
    let mut probs = Vec::with_capacity(n1 * n2 * m1 * m2);
    for (x1, &p1) in px1.iter().enumerate() {
        for (x2, &p2) in px2.iter().enumerate() {
            probs.extend(channel.slice(x1, x2).iter().map(|&w| p1 * p2 * w));
        }
    }
    // products of valid factors can drift by a few ulps; renormalise the check
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(TwcError::domain(format!("joint tensor sums to {total}")));
    }
    probs.iter_mut().for_each(|p| *p /= total);
    DiscreteJoint::new(
        vec![(Axis::X1, n1), (Axis::X2, n2), (Axis::Y1, m1), (Axis::Y2, m2)],
        probs,
    )
}

/// `I(X1; Y2 | X2)` for [`Direction::OneToTwo`], `I(X2; Y1 | X1)` for the
/// reverse, under independent inputs `p(x1) p(x2)`.
pub fn conditional_mutual_information(
    px1: &[f64],
    px2: &[f64],
    channel: &DiscreteTwc,
    direction: Direction,
) -> Result<f64> {
    let joint = channel_joint(px1, px2, channel)?;
    match direction {
        Direction::OneToTwo => joint.conditional_mutual_information(&[Axis::X1], &[Axis::Y2], &[Axis::X2]),
        Direction::TwoToOne => joint.conditional_mutual_information(&[Axis::X2], &[Axis::Y1], &[Axis::X1]),
    }
}
