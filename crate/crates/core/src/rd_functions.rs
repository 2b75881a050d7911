//! Closed-form rate-distortion functions, their inverses, and a
//! Blahut–Arimoto solver used as an independent numeric check.

use crate::error::{Result, TwcError};
use crate::info_measures::{
    binary_entropy, binary_entropy_inverse, check_distribution, qary_noise_entropy, entropy_slack, BISECTION_MAX_STEPS,
};

/// A point on a rate-distortion curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RdCurvePoint {
    pub distortion: f64,
    /// Bits per source symbol.
    pub rate: f64,
}

/// Which closed-form curve to evaluate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RdCurve {
    /// Uniform binary source, Hamming distortion.
    BinaryHamming,
    /// Uniform q-ary source, Hamming distortion.
    QaryHamming { q: u32 },
    /// Unit-variance Gaussian source, squared error.
    Gaussian,
    /// Unit-variance Gaussian source with decoder side information of
    /// correlation `rho`, squared error.
    WynerZivGaussian { rho: f64 },
}

impl RdCurve {
    pub fn rate(&self, d: f64) -> Result<f64> {
        match *self {
            RdCurve::BinaryHamming => rd_binary_hamming(d),
            RdCurve::QaryHamming { q } => rd_qary_hamming(q, d),
            RdCurve::Gaussian => rd_gaussian(d),
            RdCurve::WynerZivGaussian { rho } => wz_rd_gaussian(rho, d),
        }
    }

    /// Distortion beyond which the rate is zero.
    pub fn max_distortion(&self) -> f64 {
        match *self {
            RdCurve::BinaryHamming => 0.5,
            RdCurve::QaryHamming { q } => f64::from(q.max(2) - 1) / f64::from(q.max(2)),
            RdCurve::Gaussian => 1.0,
            RdCurve::WynerZivGaussian { rho } => 1.0 - rho * rho,
        }
    }

    /// Rate needed for zero distortion; infinite for the Gaussian curves.
    pub fn max_rate(&self) -> f64 {
        match *self {
            RdCurve::BinaryHamming => 1.0,
            RdCurve::QaryHamming { q } => f64::from(q).log2(),
            RdCurve::Gaussian | RdCurve::WynerZivGaussian { .. } => f64::INFINITY,
        }
    }

    pub fn point(&self, d: f64) -> Result<RdCurvePoint> {
        Ok(RdCurvePoint { distortion: d, rate: self.rate(d)? })
    }
}

fn check_nonneg(d: f64) -> Result<()> {
    if d.is_nan() || d < 0.0 {
        Err(TwcError::domain(format!("distortion {d} must be non-negative")))
    } else {
        Ok(())
    }
}

fn check_positive(d: f64) -> Result<()> {
    if d.is_nan() || d <= 0.0 {
        Err(TwcError::domain(format!("distortion {d} must be positive (rate unbounded at 0)")))
    } else {
        Ok(())
    }
}

/// `1 - H_b(d)` on `[0, 1/2]`, zero beyond.
pub fn rd_binary_hamming(d: f64) -> Result<f64> {
    check_nonneg(d)?;
    if d >= 0.5 {
        return Ok(0.0);
    }
    Ok((1.0 - binary_entropy(d)?).max(0.0))
}

/// `log2 q - H_b(d) - d log2(q-1)` on `[0, (q-1)/q]`, zero beyond.
pub fn rd_qary_hamming(q: u32, d: f64) -> Result<f64> {
    if q < 2 {
        return Err(TwcError::domain(format!("alphabet size q = {q} must be at least 2")));
    }
    check_nonneg(d)?;
    let d_max = f64::from(q - 1) / f64::from(q);
    if d >= d_max {
        return Ok(0.0);
    }
    Ok((f64::from(q).log2() - qary_noise_entropy(q, d)?).max(0.0))
}

/// `1/2 log2(1/d)` on `(0, 1]`, zero beyond.
pub fn rd_gaussian(d: f64) -> Result<f64> {
    check_positive(d)?;
    if d >= 1.0 {
        return Ok(0.0);
    }
    Ok(-0.5 * d.log2())
}

/// `1/2 log2((1 - rho^2) / d)` on `(0, 1 - rho^2]`, zero beyond.
pub fn wz_rd_gaussian(rho: f64, d: f64) -> Result<f64> {
    if rho.is_nan() || rho.abs() >= 1.0 {
        return Err(TwcError::domain(format!("|rho| = {} must be below 1", rho.abs())));
    }
    check_positive(d)?;
    let cap = 1.0 - rho * rho;
    if d >= cap {
        return Ok(0.0);
    }
    Ok(0.5 * (cap / d).log2())
}

/// Smallest distortion whose rate does not exceed `rate`.
///
/// Bisection results are the lower end of a bracket of width at most
/// [`crate::info_measures::BISECTION_TOL`], so converse bounds built on this never overstate.
pub fn distortion_at_rate(curve: RdCurve, rate: f64) -> Result<f64> {
    if rate.is_nan() || rate < 0.0 {
        return Err(TwcError::domain(format!("rate {rate} must be non-negative")));
    }
    match curve {
        RdCurve::BinaryHamming => {
            if rate >= 1.0 {
                Ok(0.0)
            } else {
                binary_entropy_inverse(1.0 - rate)
            }
        }
        RdCurve::QaryHamming { q } => {
            if q < 2 {
                return Err(TwcError::domain(format!("alphabet size q = {q} must be at least 2")));
            }
            if rate >= f64::from(q).log2() {
                return Ok(0.0);
            }
            if rate == 0.0 {
                return Ok(curve.max_distortion());
            }
            let (mut lo, mut hi) = (0.0, curve.max_distortion());
            for _ in 0..BISECTION_MAX_STEPS {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if rd_qary_hamming(q, mid)? > rate + entropy_slack(rate) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            Ok(lo)
        }
        RdCurve::Gaussian => Ok((-2.0 * rate).exp2()),
        RdCurve::WynerZivGaussian { rho } => {
            if rho.is_nan() || rho.abs() >= 1.0 {
                return Err(TwcError::domain(format!("|rho| = {} must be below 1", rho.abs())));
            }
            Ok((1.0 - rho * rho) * (-2.0 * rate).exp2())
        }
    }
}

/// Rate-distortion function of a discrete memoryless source at `target`,
/// by Blahut–Arimoto sweeps at fixed Lagrange slope with bisection on the
/// slope. `distortion[u][v]` is the cost of reproducing `u` as `v`.
pub fn blahut_arimoto_rd(
    source: &[f64],
    distortion: &[Vec<f64>],
    target: f64,
    max_iters: usize,
    tol: f64,
) -> Result<f64> {
    check_distribution(source, "source marginal")?;
    if distortion.len() != source.len() {
        return Err(TwcError::domain("distortion matrix needs one row per source letter"));
    }
    let cols = distortion.first().map_or(0, Vec::len);
    if cols == 0 || distortion.iter().any(|r| r.len() != cols) {
        return Err(TwcError::domain("distortion matrix rows must share a non-zero width"));
    }
    if distortion.iter().flatten().any(|d| !(d.is_finite() && *d >= 0.0)) {
        return Err(TwcError::domain("distortion matrix must be finite and non-negative"));
    }
    if tol.is_nan() || tol <= 0.0 || max_iters == 0 {
        return Err(TwcError::domain("need tol > 0 and max_iters > 0"));
    }

    let d_min: f64 = source
        .iter()
        .zip(distortion)
        .map(|(p, row)| p * row.iter().copied().fold(f64::INFINITY, f64::min))
        .sum();
    let d_max = (0..cols)
        .map(|v| source.iter().zip(distortion).map(|(p, row)| p * row[v]).sum::<f64>())
        .fold(f64::INFINITY, f64::min);
    if target.is_nan() || target < d_min - 1e-12 {
        return Err(TwcError::domain(format!("target {target} below minimum achievable {d_min}")));
    }
    if target >= d_max {
        return Ok(0.0);
    }

    let mut solver = BaSolver::new(source, distortion, max_iters, tol);
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    while solver.solve(hi).0 > target {
        lo = hi;
        hi *= 2.0;
        if hi > 1e6 {
            // target sits at d_min: the curve is reached only in the limit
            let (_, r) = solver.solve(hi);
            return Ok(r);
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if solver.solve(mid).0 > target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-13 * hi.max(1.0) {
            break;
        }
    }
    let beta = 0.5 * (lo + hi);
    let (d, r) = solver.solve(beta);
    // first-order correction along the curve, whose slope is -beta / ln 2
    Ok((r + beta / std::f64::consts::LN_2 * (d - target)).max(0.0))
}

struct BaSolver<'a> {
    source: &'a [f64],
    distortion: &'a [Vec<f64>],
    max_iters: usize,
    tol: f64,
    output: Vec<f64>,
    cond: Vec<f64>,
}

impl<'a> BaSolver<'a> {
    fn new(source: &'a [f64], distortion: &'a [Vec<f64>], max_iters: usize, tol: f64) -> Self {
        let cols = distortion[0].len();
        BaSolver {
            source,
            distortion,
            max_iters,
            tol,
            output: vec![0.0; cols],
            cond: vec![0.0; source.len() * cols],
        }
    }

    /// Converges at slope `-beta` (nats) from a uniform reproduction
    /// marginal and returns `(D, R in bits)`.
    fn solve(&mut self, beta: f64) -> (f64, f64) {
        let cols = self.output.len();
        self.output.iter_mut().for_each(|q| *q = 1.0 / cols as f64);
        for _ in 0..self.max_iters {
            self.update_conditional(beta);
            let mut next = vec![0.0; cols];
            for (u, &p) in self.source.iter().enumerate() {
                for (v, n) in next.iter_mut().enumerate() {
                    *n += p * self.cond[u * cols + v];
                }
            }
            let change = next.iter().zip(&self.output).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            self.output = next;
            if change < self.tol * 1e-3 {
                break;
            }
        }
        self.update_conditional(beta);
        let mut d = 0.0;
        let mut r = 0.0;
        for (u, &p) in self.source.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            for v in 0..cols {
                let c = self.cond[u * cols + v];
                if c > 0.0 {
                    d += p * c * self.distortion[u][v];
                    r += p * c * (c / self.output[v]).log2();
                }
            }
        }
        (d, r.max(0.0))
    }

    fn update_conditional(&mut self, beta: f64) {
        let cols = self.output.len();
        for (u, row) in self.distortion.iter().enumerate() {
            // shift by the row minimum so large beta does not underflow
            let shift = row.iter().copied().fold(f64::INFINITY, f64::min);
            let mut total = 0.0;
            for (v, (&out, &dist)) in self.output.iter().zip(row).enumerate() {
                let w = out * (-beta * (dist - shift)).exp();
                self.cond[u * cols + v] = w;
                total += w;
            }
            for v in 0..cols {
                self.cond[u * cols + v] /= total;
            }
        }
    }
}

/// `n x n` Hamming distortion matrix.
pub fn hamming_matrix(n: usize) -> Vec<Vec<f64>> {
    (0..n).map(|u| (0..n).map(|v| if u == v { 0.0 } else { 1.0 }).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn binary_values() {
        assert_eq!(rd_binary_hamming(0.0).unwrap(), 1.0);
        assert_eq!(rd_binary_hamming(0.5).unwrap(), 0.0);
        assert_eq!(rd_binary_hamming(0.7).unwrap(), 0.0);
        assert!((rd_binary_hamming(0.1).unwrap() - 0.531_004_406_410_718_8).abs() < 1e-15);
        assert!(rd_binary_hamming(-0.01).is_err());
    }

    #[test]
    fn qary_values() {
        assert_eq!(rd_qary_hamming(2, 0.1).unwrap(), rd_binary_hamming(0.1).unwrap());
        assert_eq!(rd_qary_hamming(4, 0.75).unwrap(), 0.0);
        let want = 2.0 - 0.468_995_593_589_281_2 - 0.1 * 3f64.log2();
        assert!((rd_qary_hamming(4, 0.1).unwrap() - want).abs() < 1e-15);
        assert!((want - 1.37251).abs() < 1e-5);
        assert!(rd_qary_hamming(1, 0.1).is_err());
        assert_eq!(rd_qary_hamming(3, 0.0).unwrap(), 3f64.log2());
    }

    #[test]
    fn gaussian_values() {
        assert_eq!(rd_gaussian(1.0).unwrap(), 0.0);
        assert_eq!(rd_gaussian(0.25).unwrap(), 1.0);
        assert_eq!(rd_gaussian(2.0).unwrap(), 0.0);
        assert!(rd_gaussian(0.0).is_err());
        assert_eq!(wz_rd_gaussian(0.0, 0.5).unwrap(), rd_gaussian(0.5).unwrap());
        assert_eq!(wz_rd_gaussian(0.5, 0.75).unwrap(), 0.0);
        assert_eq!(wz_rd_gaussian(0.5, 0.1875).unwrap(), 1.0);
        assert!(wz_rd_gaussian(1.0, 0.1).is_err());
        assert!(wz_rd_gaussian(0.5, -1.0).is_err());
    }

    #[test]
    fn inversion_examples() {
        assert_eq!(distortion_at_rate(RdCurve::BinaryHamming, 1.0).unwrap(), 0.0);
        assert_eq!(distortion_at_rate(RdCurve::BinaryHamming, 3.0).unwrap(), 0.0);
        assert_eq!(distortion_at_rate(RdCurve::BinaryHamming, 0.0).unwrap(), 0.5);
        let rate = 2.0 - qary_noise_entropy(4, 0.1).unwrap();
        let d = distortion_at_rate(RdCurve::QaryHamming { q: 4 }, rate).unwrap();
        assert!((d - 0.1).abs() < 1e-9, "{d}");
        assert_eq!(distortion_at_rate(RdCurve::QaryHamming { q: 3 }, 0.0).unwrap(), 2.0 / 3.0);
        assert_eq!(distortion_at_rate(RdCurve::Gaussian, 1.0).unwrap(), 0.25);
        assert!(distortion_at_rate(RdCurve::Gaussian, -1.0).is_err());
    }

    #[test]
    fn wyner_ziv_identity() {
        for &rho in &[0.0, 0.3, 0.5, 0.9, -0.7] {
            let cap: f64 = 1.0 - rho * rho;
            let mi = -0.5 * cap.log2();
            for i in 1..=50 {
                let d = cap * f64::from(i) / 50.0;
                let lhs = rd_gaussian(d).unwrap() - mi;
                let rhs = wz_rd_gaussian(rho, d).unwrap();
                assert!((lhs - rhs).abs() < 1e-12, "rho={rho} d={d}");
            }
        }
    }

    #[test]
    fn curves_are_nonincreasing_and_convex() {
        let curves = [
            RdCurve::BinaryHamming,
            RdCurve::QaryHamming { q: 3 },
            RdCurve::QaryHamming { q: 8 },
            RdCurve::Gaussian,
            RdCurve::WynerZivGaussian { rho: 0.6 },
        ];
        for c in curves {
            let top = c.max_distortion() * 1.3;
            let grid: Vec<f64> = (1..=120).map(|i| top * f64::from(i) / 120.0).collect();
            for w in grid.windows(2) {
                assert!(c.rate(w[1]).unwrap() <= c.rate(w[0]).unwrap() + 1e-15);
            }
            for &a in &grid {
                for &b in grid.iter().step_by(7) {
                    let mid = c.rate(0.5 * (a + b)).unwrap();
                    let avg = 0.5 * (c.rate(a).unwrap() + c.rate(b).unwrap());
                    assert!(mid <= avg + 1e-12, "{c:?} a={a} b={b}");
                }
            }
        }
    }

    #[test]
    fn ba_matches_examples() {
        let r = blahut_arimoto_rd(&[0.5, 0.5], &hamming_matrix(2), 0.1, 10_000, 1e-9).unwrap();
        assert!((r - 0.53100).abs() < 1e-4, "{r}");
        let r = blahut_arimoto_rd(&[0.25; 4], &hamming_matrix(4), 0.1, 10_000, 1e-9).unwrap();
        assert!((r - 1.37251).abs() < 1e-4, "{r}");
        let r = blahut_arimoto_rd(&[0.5, 0.5], &hamming_matrix(2), 0.5, 10_000, 1e-9).unwrap();
        assert!(r.abs() < 1e-6);
    }

    #[test]
    fn ba_nonuniform_binary_source() {
        // Bern(p) source under Hamming: R(D) = H_b(p) - H_b(D) for D < p
        let p = 0.3;
        for &d in &[0.02, 0.1, 0.2, 0.29] {
            let r = blahut_arimoto_rd(&[1.0 - p, p], &hamming_matrix(2), d, 100_000, 1e-10).unwrap();
            let want = binary_entropy(p).unwrap() - binary_entropy(d).unwrap();
            assert!((r - want).abs() < 1e-4, "d={d}: {r} vs {want}");
        }
        let r = blahut_arimoto_rd(&[1.0 - p, p], &hamming_matrix(2), 0.35, 1000, 1e-9).unwrap();
        assert_eq!(r, 0.0);
    }

    #[test]
    fn ba_rejects_bad_input() {
        let m = hamming_matrix(2);
        assert!(blahut_arimoto_rd(&[0.5, 0.6], &m, 0.1, 100, 1e-9).is_err());
        assert!(blahut_arimoto_rd(&[0.5, 0.5], &hamming_matrix(3), 0.1, 100, 1e-9).is_err());
        let shifted = vec![vec![0.2, 1.0], vec![1.0, 0.2]];
        assert!(blahut_arimoto_rd(&[0.5, 0.5], &shifted, 0.1, 100, 1e-9).is_err());
        assert!(blahut_arimoto_rd(&[0.5, 0.5], &m, 0.1, 0, 1e-9).is_err());
    }

    proptest! {
        #[test]
        fn inversion_round_trips(rate in 0.0f64..4.0, q in 2u32..9) {
            for curve in [RdCurve::BinaryHamming, RdCurve::QaryHamming { q }, RdCurve::Gaussian, RdCurve::WynerZivGaussian { rho: 0.4 }] {
                let d = distortion_at_rate(curve, rate).unwrap();
                let back = if d == 0.0 { curve.max_rate() } else { curve.rate(d).unwrap() };
                prop_assert!((back.min(curve.max_rate()) - rate.min(curve.max_rate())).abs() < 1e-9,
                    "{:?} rate={} d={} back={}", curve, rate, d, back);
            }
        }
    }
}
