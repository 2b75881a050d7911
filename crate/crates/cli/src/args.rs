use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Seed used when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 20_180_801;

#[derive(Debug, Parser)]
#[command(name = "twc-jscc", version, about = "Distortion bounds, scalar-coding gaps and simulations for two-way channels")]
pub struct Cli {
    /// Write a reproduction manifest for this run to PATH.
    #[arg(long, global = true, value_name = "PATH")]
    pub manifest: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Converse distortion lower bounds (d1_lb, d2_lb).
    Bounds {
        #[command(subcommand)]
        family: BoundsFamily,
    },
    /// Scalar-coding loss against the converse over parameter grids.
    Gap {
        #[command(subcommand)]
        family: GapFamily,
    },
    /// Rate-distortion curves, optionally checked against Blahut-Arimoto.
    Rd(RdArgs),
    /// Monte Carlo run of a scalar scheme.
    Simulate {
        #[command(subcommand)]
        family: SimFamily,
    },
    /// Test a distortion pair against an achievability or converse region.
    Region {
        #[command(subcommand)]
        region: RegionKind,
    },
}

#[derive(Debug, Clone, Args)]
pub struct BinaryParams {
    /// Source crossover Pr(U1 != U2), in [0, 1/2].
    #[arg(long, value_parser = parse_delta)]
    pub delta: f64,
    /// Noise crossover at terminal 1.
    #[arg(long, value_parser = parse_probability)]
    pub eps1: f64,
    /// Noise crossover at terminal 2.
    #[arg(long, value_parser = parse_probability)]
    pub eps2: f64,
}

#[derive(Debug, Clone, Args)]
pub struct QaryParams {
    /// Alphabet size.
    #[arg(long, value_parser = parse_q)]
    pub q: u32,
    /// Noise symbol-error probability at terminal 1, at most (q-1)/q.
    #[arg(long, value_parser = parse_probability)]
    pub eps1: f64,
    /// Noise symbol-error probability at terminal 2, at most (q-1)/q.
    #[arg(long, value_parser = parse_probability)]
    pub eps2: f64,
}

#[derive(Debug, Clone, Args)]
pub struct GaussianParams {
    /// Source correlation coefficient.
    #[arg(long, value_parser = parse_rho)]
    pub rho: f64,
    /// SNR of terminal 1 at terminal 2 (linear, not dB).
    #[arg(long, value_parser = parse_nonneg)]
    pub gamma1: f64,
    /// SNR of terminal 2 at terminal 1 (linear, not dB).
    #[arg(long, value_parser = parse_nonneg)]
    pub gamma2: f64,
}

#[derive(Debug, Subcommand)]
pub enum BoundsFamily {
    /// Doubly symmetric binary source over the binary additive channel.
    Binary(BinaryParams),
    /// Independent uniform q-ary sources over the modulo-q additive channel.
    Qary(QaryParams),
    /// Bivariate Gaussian source over the AWGN channel.
    Gaussian {
        #[command(flatten)]
        params: GaussianParams,
        /// Source symbols per channel use.
        #[arg(long, default_value_t = 1.0, value_parser = parse_positive)]
        r: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DecoderArg {
    /// Estimator from the cancelled observation only.
    Plain,
    /// Linear MMSE using the own source as side information.
    SideInfo,
}

#[derive(Debug, Subcommand)]
pub enum GapFamily {
    /// Binary sweep; each rho maps to source crossover (1 - rho) / 2.
    Binary {
        /// Correlation grid, comma separated, each in [0, 1].
        #[arg(long, value_delimiter = ',', value_parser = parse_unit, default_value = DEFAULT_RHO_GRID)]
        rho_grid: Vec<f64>,
        /// Channel crossover grid, comma separated, each in [0, 1/2].
        #[arg(long, value_delimiter = ',', value_parser = parse_delta, default_value = DEFAULT_EPS_GRID)]
        eps_grid: Vec<f64>,
    },
    /// Gaussian sweep over rho and SNR.
    Gaussian {
        /// Correlation grid, comma separated, each in [-1, 1].
        #[arg(long, value_delimiter = ',', value_parser = parse_rho, default_value = DEFAULT_RHO_GRID)]
        rho_grid: Vec<f64>,
        /// SNR grid (linear), comma separated.
        #[arg(long, value_delimiter = ',', value_parser = parse_nonneg, default_value = DEFAULT_GAMMA_GRID)]
        gamma_grid: Vec<f64>,
        #[arg(long, value_enum, default_value_t = DecoderArg::Plain)]
        decoder: DecoderArg,
    },
}

pub const DEFAULT_RHO_GRID: &str = "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9";
pub const DEFAULT_EPS_GRID: &str = "0.01,0.02,0.03,0.04,0.05,0.06,0.07,0.08,0.09,0.1,0.11,0.12,0.13,0.14,0.15,0.16,0.17,0.18,0.19,0.2,0.21,0.22,0.23,0.24,0.25,0.26,0.27,0.28,0.29,0.3,0.31,0.32,0.33,0.34,0.35,0.36,0.37,0.38,0.39,0.4,0.41,0.42,0.43,0.44,0.45,0.46,0.47,0.48,0.49";
/// 25 log-spaced points on [0.1, 10].
pub const DEFAULT_GAMMA_GRID: &str = "0.1,0.121152765863,0.146779926762,0.177827941004,0.215443469003,0.261015721568,0.316227766017,0.383118684956,0.464158883361,0.562341325190,0.681292069058,0.825404185268,1,1.211527658629,1.467799267622,1.778279410039,2.154434690032,2.610157215683,3.162277660168,3.831186849557,4.641588833613,5.623413251903,6.812920690580,8.254041852680,10";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CurveArg {
    Binary,
    Qary,
    Gaussian,
    WzGaussian,
}

#[derive(Debug, Args)]
pub struct RdArgs {
    #[arg(value_enum)]
    pub curve: CurveArg,
    /// Alphabet size for the q-ary curve.
    #[arg(long, value_parser = parse_q)]
    pub q: Option<u32>,
    /// Side-information correlation for the Wyner-Ziv curve.
    #[arg(long, value_parser = parse_rho)]
    pub rho: Option<f64>,
    /// Distortion grid, comma separated. Defaults to 20 interior points
    /// of the curve's support.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub d_grid: Option<Vec<f64>>,
    /// Also run Blahut-Arimoto and fail if it differs by more than 1e-4.
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Independent trials.
    #[arg(long, default_value_t = 100_000, value_parser = parse_count)]
    pub trials: usize,
    /// Channel uses per trial.
    #[arg(long, default_value_t = 1, value_parser = parse_count)]
    pub block_length: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Worker threads (0 = all cores). Output does not depend on it.
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BinarySchemeArg {
    /// Decode by cancelling the own input.
    Identity,
    /// MAP decoding with the own source bit as side information.
    Map,
}

#[derive(Debug, Subcommand)]
pub enum SimFamily {
    /// Binary source and channel; identity or side-information MAP decoding.
    Binary {
        #[command(flatten)]
        params: BinaryParams,
        #[arg(long, value_enum, default_value_t = BinarySchemeArg::Identity)]
        scheme: BinarySchemeArg,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Uniform q-ary sources with identity coding.
    Qary {
        #[command(flatten)]
        params: QaryParams,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Unit noise variances; transmit powers equal the SNRs.
    Gaussian {
        #[command(flatten)]
        params: GaussianParams,
        #[arg(long, value_enum, default_value_t = DecoderArg::Plain)]
        decoder: DecoderArg,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Debug, Clone, Args)]
pub struct TargetArgs {
    #[arg(long, default_value_t = 1.0, value_parser = parse_positive)]
    pub r: f64,
    /// Target distortion for U1 at terminal 2.
    #[arg(long, value_parser = parse_nonneg)]
    pub d1: f64,
    /// Target distortion for U2 at terminal 1.
    #[arg(long, value_parser = parse_nonneg)]
    pub d2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum IndependentFamily {
    Binary,
    Qary,
    Gaussian,
}

#[derive(Debug, Subcommand)]
pub enum RegionKind {
    /// Strict achievability test for Gaussian sources.
    Lemma1 {
        #[command(flatten)]
        params: GaussianParams,
        #[command(flatten)]
        target: TargetArgs,
    },
    /// Separation test for independent sources.
    Theorem1 {
        #[arg(long, value_enum)]
        family: IndependentFamily,
        /// Alphabet size (qary family; binary implies 2).
        #[arg(long, value_parser = parse_q)]
        q: Option<u32>,
        #[arg(long, value_parser = parse_probability)]
        eps1: Option<f64>,
        #[arg(long, value_parser = parse_probability)]
        eps2: Option<f64>,
        #[arg(long, value_parser = parse_nonneg)]
        gamma1: Option<f64>,
        #[arg(long, value_parser = parse_nonneg)]
        gamma2: Option<f64>,
        #[command(flatten)]
        target: TargetArgs,
    },
    /// Necessary-and-sufficient test for Gaussian sources over AWGN.
    Theorem2 {
        #[command(flatten)]
        params: GaussianParams,
        #[command(flatten)]
        target: TargetArgs,
    },
}

fn parse_f64(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("'{s}' is not a number"))?;
    if v.is_nan() {
        return Err("NaN is not allowed".into());
    }
    Ok(v)
}

fn in_range(s: &str, lo: f64, hi: f64) -> Result<f64, String> {
    let v = parse_f64(s)?;
    if (lo..=hi).contains(&v) {
        Ok(v)
    } else {
        Err(format!("{v} is not in [{lo}, {hi}]"))
    }
}

fn parse_probability(s: &str) -> Result<f64, String> {
    in_range(s, 0.0, 1.0)
}

fn parse_delta(s: &str) -> Result<f64, String> {
    in_range(s, 0.0, 0.5)
}

fn parse_unit(s: &str) -> Result<f64, String> {
    in_range(s, 0.0, 1.0)
}

fn parse_rho(s: &str) -> Result<f64, String> {
    in_range(s, -1.0, 1.0)
}

fn parse_nonneg(s: &str) -> Result<f64, String> {
    in_range(s, 0.0, f64::MAX)
}

fn parse_positive(s: &str) -> Result<f64, String> {
    let v = parse_f64(s)?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("{v} must be positive"))
    }
}

fn parse_q(s: &str) -> Result<u32, String> {
    let q: u32 = s.trim().parse().map_err(|_| format!("'{s}' is not an integer"))?;
    if q >= 2 {
        Ok(q)
    } else {
        Err(format!("{q} must be at least 2"))
    }
}

fn parse_count(s: &str) -> Result<usize, String> {
    let n: usize = s.trim().parse().map_err(|_| format!("'{s}' is not a count"))?;
    if n >= 1 {
        Ok(n)
    } else {
        Err("must be at least 1".into())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn default_gamma_grid_is_log_spaced() {
        let g: Vec<f64> = DEFAULT_GAMMA_GRID.split(',').map(|s| s.parse().unwrap()).collect();
        assert_eq!(g.len(), 25);
        for (i, v) in g.iter().enumerate() {
            let want = 0.1 * 100f64.powf(i as f64 / 24.0);
            assert!((v - want).abs() < 1e-11 * want.max(1.0), "{i}: {v} vs {want}");
        }
    }
}
