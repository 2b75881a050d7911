//! Scalar (uncoded, rate-one) schemes for both channel families, their
//! closed-form distortions, and the gap to the converse bounds.

use crate::bounds::{converse_lb_binary, converse_lb_gaussian};
use crate::error::{Result, TwcError};
use crate::info_measures::check_qary;
use crate::models::{JointSourceModel, Symbol, Terminal, TwcModel};
use crate::simulator::CoderPair;

/// Estimator used by the Gaussian linear scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GaussianDecoder {
    /// `sqrt(P)/(P + sigma^2) * (Y - X_own)`; ignores the own source.
    PaperMmse,
    /// Linear MMSE on the cancelled observation and the own source jointly.
    SideInfoMmse,
}

/// Memoryless encoder/decoder pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScalarScheme {
    /// Send the source symbol; decode by cancelling the own input.
    QaryIdentity { q: u32 },
    /// Binary identity encoder with a MAP decoder that also uses the own
    /// source bit. `eps1`/`eps2` are the crossovers at terminals 1/2.
    QaryMapWithSideInfo { delta: f64, eps1: f64, eps2: f64 },
    /// `X_i = alpha_i U_i` with `alpha_i = sqrt(P_i)`.
    GaussianLinear {
        alpha1: f64,
        alpha2: f64,
        sigma1_sq: f64,
        sigma2_sq: f64,
        rho: f64,
        decoder: GaussianDecoder,
    },
}

impl ScalarScheme {
    /// Identity scheme sized to a q-ary additive channel.
    pub fn qary_identity(channel: &TwcModel) -> Result<Self> {
        match *channel {
            TwcModel::QaryAdditive { q, .. } => Ok(ScalarScheme::QaryIdentity { q }),
            _ => Err(TwcError::mismatch("identity scheme needs a q-ary additive channel")),
        }
    }

    pub fn binary_map(source: &JointSourceModel, channel: &TwcModel) -> Result<Self> {
        match (*source, channel) {
            (JointSourceModel::BinarySymmetric { delta }, &TwcModel::QaryAdditive { q: 2, eps1, eps2 }) => {
                Ok(ScalarScheme::QaryMapWithSideInfo { delta, eps1, eps2 })
            }
            _ => Err(TwcError::mismatch(
                "MAP scheme needs a binary symmetric source and a binary additive channel",
            )),
        }
    }

    /// Linear scheme meeting both power constraints with equality.
    pub fn gaussian_linear(source: &JointSourceModel, channel: &TwcModel, decoder: GaussianDecoder) -> Result<Self> {
        match (*source, channel) {
            (JointSourceModel::BivariateGaussian { rho }, &TwcModel::Awgn { p1, p2, sigma1_sq, sigma2_sq }) => {
                Ok(ScalarScheme::GaussianLinear {
                    alpha1: p1.sqrt(),
                    alpha2: p2.sqrt(),
                    sigma1_sq,
                    sigma2_sq,
                    rho,
                    decoder,
                })
            }
            _ => Err(TwcError::mismatch("linear scheme needs a Gaussian source and an AWGN channel")),
        }
    }

    /// Closed-form `(D1, D2)` of this scheme, when one exists.
    pub fn analytic_distortions(&self, channel: &TwcModel) -> Result<(f64, f64)> {
        match (*self, channel) {
            (ScalarScheme::QaryIdentity { q }, &TwcModel::QaryAdditive { eps1, eps2, .. }) => {
                Ok((scalar_distortion_qary(q, eps2)?, scalar_distortion_qary(q, eps1)?))
            }
            (ScalarScheme::QaryMapWithSideInfo { delta, eps1, eps2 }, _) => {
                Ok((map_distortion(delta, eps2), map_distortion(delta, eps1)))
            }
            (ScalarScheme::GaussianLinear { rho, decoder, .. }, TwcModel::Awgn { .. }) => {
                let (g1, g2) = (channel.snr1().unwrap_or(0.0), channel.snr2().unwrap_or(0.0));
                Ok((
                    gaussian_scalar_distortion(rho, g1, decoder)?,
                    gaussian_scalar_distortion(rho, g2, decoder)?,
                ))
            }
            _ => Err(TwcError::mismatch("scheme does not match channel")),
        }
    }
}

impl CoderPair for ScalarScheme {
    fn encode(&self, terminal: Terminal, u: Symbol) -> Result<Symbol> {
        match *self {
            ScalarScheme::QaryIdentity { .. } | ScalarScheme::QaryMapWithSideInfo { .. } => {
                Ok(Symbol::Index(u.index()?))
            }
            ScalarScheme::GaussianLinear { alpha1, alpha2, .. } => {
                let a = match terminal {
                    Terminal::One => alpha1,
                    Terminal::Two => alpha2,
                };
                Ok(Symbol::Real(a * u.real()?))
            }
        }
    }

    fn decode(&self, terminal: Terminal, own_u: Symbol, y: Symbol) -> Result<Symbol> {
        let own_x = self.encode(terminal, own_u)?;
        match *self {
            ScalarScheme::QaryIdentity { q } => {
                Ok(Symbol::Index(qary_scalar_decode(y.index()?, own_x.index()?, q)?))
            }
            ScalarScheme::QaryMapWithSideInfo { delta, eps1, eps2 } => {
                let v = qary_scalar_decode(y.index()?, own_x.index()?, 2)?;
                // the receiver's own noise sets the reliability of v
                let eps = match terminal {
                    Terminal::One => eps1,
                    Terminal::Two => eps2,
                };
                Ok(Symbol::Index(binary_map_decode(v, own_u.index()?, delta, eps)?))
            }
            ScalarScheme::GaussianLinear { alpha1, alpha2, sigma1_sq, sigma2_sq, rho, decoder } => {
                let (alpha, sigma_sq) = match terminal {
                    Terminal::One => (alpha2, sigma1_sq),
                    Terminal::Two => (alpha1, sigma2_sq),
                };
                let v = y.real()? - own_x.real()?;
                let power = alpha * alpha;
                let est = match decoder {
                    GaussianDecoder::PaperMmse => alpha / (power + sigma_sq) * v,
                    GaussianDecoder::SideInfoMmse => {
                        let s = own_u.real()?;
                        let rest = 1.0 - rho * rho;
                        let gain = alpha * rest / (power * rest + sigma_sq);
                        rho * s + gain * (v - alpha * rho * s)
                    }
                };
                Ok(Symbol::Real(est))
            }
        }
    }

    fn check_compatible(&self, source: &JointSourceModel, channel: &TwcModel) -> Result<()> {
        match (*self, source, channel) {
            (ScalarScheme::QaryIdentity { q }, src, &TwcModel::QaryAdditive { q: cq, .. }) => {
                let sq = match *src {
                    JointSourceModel::BinarySymmetric { .. } => 2,
                    JointSourceModel::UniformQary { q } => q,
                    JointSourceModel::BivariateGaussian { .. } => {
                        return Err(TwcError::mismatch("Gaussian source on a discrete channel"))
                    }
                };
                if sq != q || cq != q {
                    return Err(TwcError::mismatch(format!(
                        "source alphabet {sq}, scheme {q}, channel {cq}"
                    )));
                }
                Ok(())
            }
            (
                ScalarScheme::QaryMapWithSideInfo { delta, eps1, eps2 },
                &JointSourceModel::BinarySymmetric { delta: sd },
                &TwcModel::QaryAdditive { q: 2, eps1: c1, eps2: c2 },
            ) => {
                if delta != sd || eps1 != c1 || eps2 != c2 {
                    return Err(TwcError::mismatch("MAP scheme parameters differ from the models"));
                }
                Ok(())
            }
            (ScalarScheme::GaussianLinear { .. }, JointSourceModel::BivariateGaussian { .. }, TwcModel::Awgn { .. }) => {
                Ok(())
            }
            _ => Err(TwcError::mismatch("scheme, source and channel families do not match")),
        }
    }
}

/// Cancels the own input: `(y - own_x) mod q`.
pub fn qary_scalar_decode(y: u32, own_x: u32, q: u32) -> Result<u32> {
    if q < 2 {
        return Err(TwcError::domain(format!("q = {q} must be at least 2")));
    }
    if y >= q || own_x >= q {
        return Err(TwcError::domain(format!("symbols ({y}, {own_x}) outside {{0..{}}}", q - 1)));
    }
    Ok((y + q - own_x) % q)
}

/// MAP estimate of the other terminal's bit from the cancelled
/// observation `v` and the own bit. Ties go to `v`.
pub fn binary_map_decode(v: u32, own_u: u32, delta: f64, eps: f64) -> Result<u32> {
    if v > 1 || own_u > 1 {
        return Err(TwcError::domain("binary MAP decoding needs bits"));
    }
    if !(0.0..=0.5).contains(&delta) {
        return Err(TwcError::domain(format!("delta = {delta} is not in [0, 1/2]")));
    }
    check_qary(2, eps)?;
    if v == own_u || eps <= delta {
        Ok(v)
    } else {
        Ok(own_u)
    }
}

fn map_distortion(delta: f64, eps: f64) -> f64 {
    delta.min(eps)
}

/// Hamming distortion of the identity scheme: the noise symbol error rate.
pub fn scalar_distortion_qary(q: u32, eps_noise: f64) -> Result<f64> {
    check_qary(q, eps_noise)?;
    Ok(eps_noise)
}

/// Mean squared error of the linear scheme at SNR `gamma`.
pub fn gaussian_scalar_distortion(rho: f64, gamma: f64, decoder: GaussianDecoder) -> Result<f64> {
    if !(-1.0..=1.0).contains(&rho) {
        return Err(TwcError::domain(format!("rho = {rho} is not in [-1, 1]")));
    }
    if gamma.is_nan() || gamma < 0.0 {
        return Err(TwcError::domain(format!("SNR {gamma} must be non-negative")));
    }
    Ok(match decoder {
        GaussianDecoder::PaperMmse => 1.0 / (1.0 + gamma),
        GaussianDecoder::SideInfoMmse => {
            let rest = (1.0 - rho * rho).max(0.0);
            rest / (1.0 + gamma * rest)
        }
    })
}

/// One point of a scalar-coding loss curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapPoint {
    /// Source correlation coefficient.
    pub rho: f64,
    /// Channel parameter: crossover `eps` or SNR `gamma`.
    pub param: f64,
    pub scalar_distortion: f64,
    pub lower_bound: f64,
    pub gap: f64,
}

/// Loss of binary scalar coding against the converse, over a grid of
/// source crossovers `deltas` and channel crossovers `epss`. Row-major in
/// `deltas`.
pub fn gap_sweep_binary(deltas: &[f64], epss: &[f64]) -> Result<Vec<GapPoint>> {
    let mut out = Vec::with_capacity(deltas.len() * epss.len());
    for &delta in deltas {
        for &eps in epss {
            let lb = converse_lb_binary(delta, eps)?.distortion;
            let scalar = scalar_distortion_qary(2, eps)?;
            out.push(GapPoint {
                rho: 1.0 - 2.0 * delta,
                param: eps,
                scalar_distortion: scalar,
                lower_bound: lb,
                gap: scalar - lb,
            });
        }
    }
    Ok(out)
}

/// Loss of Gaussian scalar coding against the `r = 1` converse.
pub fn gap_sweep_gaussian(rhos: &[f64], gammas: &[f64], decoder: GaussianDecoder) -> Result<Vec<GapPoint>> {
    let mut out = Vec::with_capacity(rhos.len() * gammas.len());
    for &rho in rhos {
        for &gamma in gammas {
            let lb = converse_lb_gaussian(rho, gamma, 1.0)?;
            let scalar = gaussian_scalar_distortion(rho, gamma, decoder)?;
            out.push(GapPoint { rho, param: gamma, scalar_distortion: scalar, lower_bound: lb, gap: scalar - lb });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qary_decode_examples() {
        assert_eq!(qary_scalar_decode(1, 1, 2).unwrap(), 0);
        assert_eq!(qary_scalar_decode(3, 1, 4).unwrap(), 2);
        assert_eq!(qary_scalar_decode(0, 3, 4).unwrap(), 1);
        assert!(qary_scalar_decode(4, 1, 4).is_err());
        assert!(qary_scalar_decode(0, 0, 1).is_err());
    }

    #[test]
    fn map_decode_rules() {
        for v in 0..2 {
            for own in 0..2 {
                assert_eq!(binary_map_decode(v, own, 0.3, 0.1).unwrap(), v);
                assert_eq!(binary_map_decode(v, own, 0.1, 0.3).unwrap(), if v == own { v } else { own });
                // tie resolves to the channel observation
                assert_eq!(binary_map_decode(v, own, 0.2, 0.2).unwrap(), v);
            }
        }
        assert!(binary_map_decode(2, 0, 0.1, 0.1).is_err());
    }

    /// Enumerates (u_other, w, z) with u_own = u_other ^ w, v = u_other ^ z.
    fn enumerate_map_error(delta: f64, eps: f64) -> f64 {
        let mut err = 0.0;
        for u in 0..2u32 {
            for w in 0..2u32 {
                for z in 0..2u32 {
                    let p = 0.5 * if w == 1 { delta } else { 1.0 - delta } * if z == 1 { eps } else { 1.0 - eps };
                    let est = binary_map_decode(u ^ z, u ^ w, delta, eps).unwrap();
                    if est != u {
                        err += p;
                    }
                }
            }
        }
        err
    }

    #[test]
    fn map_distortion_by_enumeration() {
        let grid = [0.0, 0.05, 0.1, 0.2, 0.25, 0.33, 0.5];
        for &delta in &grid {
            for &eps in &grid {
                let e = enumerate_map_error(delta, eps);
                assert!((e - delta.min(eps)).abs() < 1e-15, "delta={delta} eps={eps}");
                assert!(e <= scalar_distortion_qary(2, eps).unwrap() + 1e-15);
            }
        }
        assert!((enumerate_map_error(0.25, 0.1) - 0.1).abs() < 1e-15);
    }

    #[test]
    fn qary_scalar_distortion_values() {
        assert_eq!(scalar_distortion_qary(2, 0.1).unwrap(), 0.1);
        assert_eq!(scalar_distortion_qary(4, 0.0).unwrap(), 0.0);
        assert_eq!(scalar_distortion_qary(4, 0.3).unwrap(), 0.3);
        assert!(scalar_distortion_qary(2, 0.6).is_err());
    }

    #[test]
    fn gaussian_distortion_values() {
        use GaussianDecoder::*;
        assert_eq!(gaussian_scalar_distortion(0.0, 1.0, PaperMmse).unwrap(), 0.5);
        assert_eq!(converse_lb_gaussian(0.0, 1.0, 1.0).unwrap(), 0.5);
        for g in [0.0, 0.1, 1.0, 7.5, 100.0] {
            assert_eq!(
                gaussian_scalar_distortion(0.0, g, PaperMmse).unwrap(),
                gaussian_scalar_distortion(0.0, g, SideInfoMmse).unwrap()
            );
        }
        assert_eq!(gaussian_scalar_distortion(0.5, 3.0, PaperMmse).unwrap(), 0.25);
        let si = gaussian_scalar_distortion(0.5, 3.0, SideInfoMmse).unwrap();
        assert!((si - 0.75 / 3.25).abs() < 1e-15);
        assert!((si - 0.23077).abs() < 1e-5);
        assert!(gaussian_scalar_distortion(0.5, -1.0, PaperMmse).is_err());
    }

    #[test]
    fn side_info_decoder_dominates() {
        use GaussianDecoder::*;
        for i in 0..=20 {
            let rho = -1.0 + f64::from(i) * 0.1;
            for g in [0.0, 0.1, 0.5, 1.0, 3.0, 10.0] {
                let p = gaussian_scalar_distortion(rho, g, PaperMmse).unwrap();
                let s = gaussian_scalar_distortion(rho, g, SideInfoMmse).unwrap();
                assert!(s <= p + 1e-15);
                if rho.abs() > 1e-9 && g > 0.0 {
                    assert!(s < p);
                }
            }
        }
    }

    fn rho_grid() -> Vec<f64> {
        (0..10).map(|i| f64::from(i) / 10.0).collect()
    }

    #[test]
    fn binary_gap_examples() {
        let epss: Vec<f64> = (1..=49).map(|i| f64::from(i) / 100.0).collect();
        let row = gap_sweep_binary(&[0.5], &epss).unwrap();
        assert!(row.iter().all(|p| p.gap.abs() < 1e-9));
        let p = gap_sweep_binary(&[0.25], &[0.1]).unwrap()[0];
        assert!((p.gap - (0.1 - converse_lb_binary(0.25, 0.1).unwrap().distortion)).abs() < 1e-15);
        assert!((p.gap - 0.0514).abs() < 5e-5);
        let col = gap_sweep_binary(&[0.5, 0.3, 0.05], &[0.0]).unwrap();
        assert!(col.iter().all(|p| p.gap == 0.0));
    }

    #[test]
    fn gaps_nondecreasing_in_correlation() {
        let deltas: Vec<f64> = rho_grid().iter().map(|r| (1.0 - r) / 2.0).collect();
        let epss: Vec<f64> = (1..=49).map(|i| f64::from(i) / 100.0).collect();
        let pts = gap_sweep_binary(&deltas, &epss).unwrap();
        for j in 0..epss.len() {
            for i in 1..deltas.len() {
                let prev = pts[(i - 1) * epss.len() + j];
                let cur = pts[i * epss.len() + j];
                assert!(cur.gap >= prev.gap - 1e-12);
                assert!(cur.gap >= -1e-12);
            }
        }
        let gammas = [0.1, 0.5, 1.0, 3.0, 10.0];
        let pts = gap_sweep_gaussian(&rho_grid(), &gammas, GaussianDecoder::PaperMmse).unwrap();
        for j in 0..gammas.len() {
            for i in 1..10 {
                assert!(pts[i * gammas.len() + j].gap >= pts[(i - 1) * gammas.len() + j].gap - 1e-12);
            }
        }
    }

    #[test]
    fn side_info_gap_is_not_monotone() {
        // x/(1+gx) - x/(1+g) with x = 1 - rho^2 vanishes at both rho = 0 and |rho| = 1
        let pts = gap_sweep_gaussian(&[0.0, 0.5, 0.999_999], &[3.0], GaussianDecoder::SideInfoMmse).unwrap();
        assert_eq!(pts[0].gap, 0.0);
        assert!(pts[1].gap > 0.0);
        assert!(pts[2].gap < pts[1].gap);
        assert!(pts.iter().all(|p| p.gap >= -1e-12));
    }

    #[test]
    fn gaussian_gap_examples() {
        let pts = gap_sweep_gaussian(&[0.0], &[0.1, 1.0, 50.0], GaussianDecoder::PaperMmse).unwrap();
        assert!(pts.iter().all(|p| p.gap == 0.0));
        let p = gap_sweep_gaussian(&[0.5], &[3.0], GaussianDecoder::PaperMmse).unwrap()[0];
        assert_eq!(p.gap, 0.0625);
        assert!((p.gap - 0.25 / 4.0).abs() < 1e-15);
        let hi = gap_sweep_gaussian(&[0.9], &[2.0], GaussianDecoder::PaperMmse).unwrap()[0];
        let lo = gap_sweep_gaussian(&[0.1], &[2.0], GaussianDecoder::PaperMmse).unwrap()[0];
        assert!(hi.gap > lo.gap);
    }

    #[test]
    fn scheme_constructors_check_families() {
        let g = JointSourceModel::bivariate_gaussian(0.2).unwrap();
        let b = JointSourceModel::binary_symmetric(0.2).unwrap();
        let awgn = TwcModel::awgn(1.0, 2.0, 1.0, 1.0).unwrap();
        let bin = TwcModel::qary_additive(2, 0.1, 0.1).unwrap();
        assert!(ScalarScheme::gaussian_linear(&g, &awgn, GaussianDecoder::PaperMmse).is_ok());
        assert!(ScalarScheme::gaussian_linear(&b, &awgn, GaussianDecoder::PaperMmse).is_err());
        assert!(ScalarScheme::binary_map(&b, &bin).is_ok());
        assert!(ScalarScheme::binary_map(&g, &bin).is_err());
        assert!(ScalarScheme::qary_identity(&awgn).is_err());
        let s = ScalarScheme::qary_identity(&bin).unwrap();
        assert!(s.check_compatible(&b, &bin).is_ok());
        assert!(s.check_compatible(&JointSourceModel::UniformQary { q: 3 }, &bin).is_err());
    }
}
