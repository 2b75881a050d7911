//! Target-independent implementations behind the exported functions.

use twc_jscc::bounds::{achievable_region_lemma1, gaussian_jscc_region, DistortionPair};
use twc_jscc::rd_functions::RdCurve;
use twc_jscc::scalar_coding::{gap_sweep_binary, gap_sweep_gaussian, GaussianDecoder};
use twc_jscc::{Direction, JointSourceModel, Result, TwcError};
use wasm_bindgen::prelude::*;

/// Values per point returned by [`gap_curve`].
pub const GAP_STRIDE: usize = 4;

/// Gap curve at fixed `rho`. `family` is `"binary"` (params are channel
/// crossovers) or `"gaussian"` (params are SNRs).
pub fn gap_curve(family: &str, rho: f64, params: &[f64], side_info: bool) -> Result<Vec<f64>> {
    let points = match family {
        "binary" => {
            if !(0.0..=1.0).contains(&rho) {
                return Err(TwcError::Domain { what: format!("rho {rho} must lie in [0, 1] for the binary source") });
            }
            gap_sweep_binary(&[(1.0 - rho) / 2.0], params)?
        }
        "gaussian" => {
            let decoder = if side_info { GaussianDecoder::SideInfoMmse } else { GaussianDecoder::PaperMmse };
            gap_sweep_gaussian(&[rho], params, decoder)?
        }
        other => return Err(TwcError::InvalidConfig { what: format!("unknown gap family {other:?}") }),
    };
    Ok(points.iter().flat_map(|p| [p.param, p.scalar_distortion, p.lower_bound, p.gap]).collect())
}

/// Rate-distortion curve values. `curve` is one of `"binary"`, `"qary"`,
/// `"gaussian"`, `"wz-gaussian"`; `q` and `rho` apply to the latter ones.
pub fn rd_curve(curve: &str, q: u32, rho: f64, ds: &[f64]) -> Result<Vec<f64>> {
    let curve = match curve {
        "binary" => RdCurve::BinaryHamming,
        "qary" => RdCurve::QaryHamming { q },
        "gaussian" => RdCurve::Gaussian,
        "wz-gaussian" => RdCurve::WynerZivGaussian { rho },
        other => return Err(TwcError::InvalidConfig { what: format!("unknown curve {other:?}") }),
    };
    ds.iter().map(|&d| curve.rate(d)).collect()
}

/// Region verdicts for one Gaussian target.
#[wasm_bindgen]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionReport {
    /// Satisfies the non-strict necessary-and-sufficient test.
    pub inside: bool,
    /// Satisfies the strict achievability test.
    pub strictly_inside: bool,
    /// Smallest slack in bits.
    pub margin: f64,
    pub margin_1to2: f64,
    pub margin_2to1: f64,
    binding: Direction,
}

#[wasm_bindgen]
impl RegionReport {
    /// Direction with the smallest slack, `"1->2"` or `"2->1"`.
    #[wasm_bindgen(getter)]
    pub fn binding(&self) -> String {
        self.binding.label().to_owned()
    }
}

pub fn gaussian_region(rho: f64, gamma1: f64, gamma2: f64, r: f64, d1: f64, d2: f64) -> Result<RegionReport> {
    let d = DistortionPair::new(d1, d2);
    let outer = gaussian_jscc_region(rho, (gamma1, gamma2), r, d)?;
    let inner = achievable_region_lemma1(&JointSourceModel::BivariateGaussian { rho }, (gamma1, gamma2), r, d)?;
    Ok(RegionReport {
        inside: outer.inside,
        strictly_inside: inner.inside,
        margin: outer.margin,
        margin_1to2: outer.margins[0],
        margin_2to1: outer.margins[1],
        binding: outer.binding_constraint,
    })
}
