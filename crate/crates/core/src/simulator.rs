//! Seeded Monte Carlo harness for the full two-way system.
//!
//! Each channel use: draw `(u1, u2)`, encode at both terminals, one use of
//! the channel, decode at both terminals. Trial `t` of stream `s` draws
//! from `stream_rng(seed, s, t)` only, so results do not depend on how
//! trials are split across workers.

use std::num::NonZeroUsize;
use std::thread;

use crate::error::{Result, TwcError};
use crate::models::{JointSourceModel, Symbol, Terminal, TwcModel};
use crate::rng::stream_rng;

/// Memoryless per-terminal encoder and decoder.
///
/// The decoder at time `n` sees the own source symbol and the received
/// symbol at time `n` and nothing else; the signature is the causality
/// guarantee.
pub trait CoderPair: Sync {
    /// Channel input of `terminal` for source symbol `u`.
    fn encode(&self, terminal: Terminal, u: Symbol) -> Result<Symbol>;

    /// Estimate of the other terminal's source symbol.
    fn decode(&self, terminal: Terminal, own_u: Symbol, y: Symbol) -> Result<Symbol>;

    /// Rejects source/channel combinations this pair cannot drive.
    fn check_compatible(&self, source: &JointSourceModel, channel: &TwcModel) -> Result<()>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimulationConfig {
    pub trials: usize,
    /// Channel uses per trial.
    pub block_length: usize,
    pub seed: u64,
    /// Worker threads; 0 means the available parallelism.
    pub workers: usize,
}

impl SimulationConfig {
    pub fn new(trials: usize, block_length: usize, seed: u64) -> Self {
        SimulationConfig { trials, block_length, seed, workers: 1 }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(TwcError::config("trials must be at least 1"));
        }
        if self.block_length == 0 {
            return Err(TwcError::config("block length must be at least 1"));
        }
        Ok(())
    }

    pub fn total_symbols(&self) -> usize {
        self.trials * self.block_length
    }
}

/// Empirical distortions with standard errors.
///
/// With two or more trials the standard error is the sample deviation of
/// the per-trial block means over `sqrt(trials)`; with a single trial it
/// falls back to the per-symbol deviation over `sqrt(block_length)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationResult {
    pub d1_hat: f64,
    pub d2_hat: f64,
    pub stderr1: f64,
    pub stderr2: f64,
    pub total_symbols: usize,
    pub trials: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy)]
struct TrialStats {
    mean: [f64; 2],
    sq_mean: [f64; 2],
}

/// Pairwise (cascade) summation.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 32 {
        return xs.iter().sum();
    }
    let (a, b) = xs.split_at(xs.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

fn run_trial<C: CoderPair + ?Sized>(
    source: &JointSourceModel,
    channel: &TwcModel,
    coders: &C,
    config: &SimulationConfig,
    stream: u64,
    trial: u64,
    buf: &mut [Vec<f64>; 2],
) -> Result<TrialStats> {
    let measure = source.distortion_measure();
    let mut rng = stream_rng(config.seed, stream, trial);
    for b in buf.iter_mut() {
        b.clear();
    }
    for _ in 0..config.block_length {
        let (u1, u2) = source.draw(&mut rng);
        let x1 = coders.encode(Terminal::One, u1)?;
        let x2 = coders.encode(Terminal::Two, u2)?;
        let (y1, y2) = channel.step(x1, x2, &mut rng)?;
        let est1 = coders.decode(Terminal::Two, u2, y2)?;
        let est2 = coders.decode(Terminal::One, u1, y1)?;
        buf[0].push(measure.distortion(u1, est1)?);
        buf[1].push(measure.distortion(u2, est2)?);
    }
    let n = config.block_length as f64;
    let mut stats = TrialStats { mean: [0.0; 2], sq_mean: [0.0; 2] };
    for (i, b) in buf.iter_mut().enumerate() {
        stats.mean[i] = pairwise_sum(b) / n;
        b.iter_mut().for_each(|d| *d *= *d);
        stats.sq_mean[i] = pairwise_sum(b) / n;
    }
    Ok(stats)
}

fn run_range<C: CoderPair + ?Sized>(
    source: &JointSourceModel,
    channel: &TwcModel,
    coders: &C,
    config: &SimulationConfig,
    stream: u64,
    trials: std::ops::Range<usize>,
) -> Result<Vec<TrialStats>> {
    let mut buf = [Vec::with_capacity(config.block_length), Vec::with_capacity(config.block_length)];
    trials
        .map(|t| run_trial(source, channel, coders, config, stream, t as u64, &mut buf))
        .collect()
}

fn worker_count(config: &SimulationConfig) -> usize {
    let hint = if config.workers == 0 {
        thread::available_parallelism().map_or(1, NonZeroUsize::get)
    } else {
        config.workers
    };
    hint.clamp(1, config.trials)
}

fn check_models<C: CoderPair + ?Sized>(source: &JointSourceModel, channel: &TwcModel, coders: &C) -> Result<()> {
    source.validate()?;
    channel.validate()?;
    let (a1, a2) = channel.input_alphabets();
    if a1 != a2 {
        return Err(TwcError::mismatch("scalar coders need equal input alphabets at both terminals"));
    }
    coders.check_compatible(source, channel)
}

fn summarize(stats: &[TrialStats], config: &SimulationConfig) -> SimulationResult {
    let trials = stats.len() as f64;
    let mut mean = [0.0; 2];
    let mut stderr = [0.0; 2];
    for i in 0..2 {
        let means: Vec<f64> = stats.iter().map(|s| s.mean[i]).collect();
        mean[i] = pairwise_sum(&means) / trials;
        stderr[i] = if stats.len() >= 2 {
            let dev: Vec<f64> = means.iter().map(|m| (m - mean[i]).powi(2)).collect();
            (pairwise_sum(&dev) / (trials - 1.0)).sqrt() / trials.sqrt()
        } else if config.block_length >= 2 {
            let k = config.block_length as f64;
            let var = (stats[0].sq_mean[i] - mean[i] * mean[i]).max(0.0) * k / (k - 1.0);
            (var / k).sqrt()
        } else {
            0.0
        };
    }
    SimulationResult {
        d1_hat: mean[0],
        d2_hat: mean[1],
        stderr1: stderr[0],
        stderr2: stderr[1],
        total_symbols: config.total_symbols(),
        trials: stats.len(),
        seed: config.seed,
    }
}

fn run_stream<C: CoderPair + ?Sized>(
    source: &JointSourceModel,
    channel: &TwcModel,
    coders: &C,
    config: &SimulationConfig,
    stream: u64,
) -> Result<SimulationResult> {
    config.validate()?;
    check_models(source, channel, coders)?;
    let workers = worker_count(config);
    let stats = if workers == 1 {
        run_range(source, channel, coders, config, stream, 0..config.trials)?
    } else {
        let chunk = config.trials.div_ceil(workers);
        let parts: Vec<Result<Vec<TrialStats>>> = thread::scope(|scope| {
            let handles: Vec<_> = (0..workers)
                .map(|w| {
                    let range = (w * chunk).min(config.trials)..((w + 1) * chunk).min(config.trials);
                    scope.spawn(move || run_range(source, channel, coders, config, stream, range))
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("simulation worker panicked")).collect()
        });
        let mut all = Vec::with_capacity(config.trials);
        for p in parts {
            all.extend(p?);
        }
        all
    };
    Ok(summarize(&stats, config))
}

/// Runs `trials x block_length` channel uses on stream 0.
pub fn run_simulation<C: CoderPair + ?Sized>(
    source: &JointSourceModel,
    channel: &TwcModel,
    coders: &C,
    config: &SimulationConfig,
) -> Result<SimulationResult> {
    run_stream(source, channel, coders, config, 0)
}

/// Runs one simulation per grid point; point `i` uses stream `i`, so the
/// first point reproduces [`run_simulation`] exactly.
pub fn sweep_simulation<P, C, F>(
    base: &SimulationConfig,
    grid: &[P],
    mut select: F,
) -> Result<Vec<(P, SimulationResult)>>
where
    P: Clone,
    C: CoderPair,
    F: FnMut(&P) -> Result<(JointSourceModel, TwcModel, C)>,
{
    grid.iter()
        .enumerate()
        .map(|(i, p)| {
            let wrap = |e| TwcError::GridPoint { index: i, source: Box::new(e) };
            let (source, channel, coders) = select(p).map_err(wrap)?;
            let res = run_stream(&source, &channel, &coders, base, i as u64).map_err(wrap)?;
            Ok((p.clone(), res))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar_coding::{GaussianDecoder, ScalarScheme};

    fn binary_setup(eps1: f64, eps2: f64) -> (JointSourceModel, TwcModel, ScalarScheme) {
        let src = JointSourceModel::binary_symmetric(0.25).unwrap();
        let ch = TwcModel::qary_additive(2, eps1, eps2).unwrap();
        let sch = ScalarScheme::qary_identity(&ch).unwrap();
        (src, ch, sch)
    }

    #[test]
    fn noiseless_identity_is_lossless() {
        let (src, ch, sch) = binary_setup(0.0, 0.0);
        let r = run_simulation(&src, &ch, &sch, &SimulationConfig::new(10, 500, 3)).unwrap();
        assert_eq!((r.d1_hat, r.d2_hat), (0.0, 0.0));
        assert_eq!((r.stderr1, r.stderr2), (0.0, 0.0));
        assert_eq!(r.total_symbols, 5000);
    }

    #[test]
    fn binary_identity_matches_crossover() {
        let (src, ch, sch) = binary_setup(0.2, 0.1);
        let r = run_simulation(&src, &ch, &sch, &SimulationConfig::new(100, 1000, 42).with_workers(4)).unwrap();
        assert!((r.d1_hat - 0.1).abs() <= 3.0 * r.stderr1, "{r:?}");
        assert!((r.d2_hat - 0.2).abs() <= 3.0 * r.stderr2, "{r:?}");
        let expect = (0.1f64 * 0.9 / 1e5).sqrt();
        assert!((r.stderr1 / expect - 1.0).abs() < 0.3);
    }

    #[test]
    fn single_trial_stderr_uses_symbols() {
        let (src, ch, sch) = binary_setup(0.1, 0.1);
        let r = run_simulation(&src, &ch, &sch, &SimulationConfig::new(1, 100_000, 5)).unwrap();
        let expect = (r.d1_hat * (1.0 - r.d1_hat) / 1e5).sqrt();
        assert!((r.stderr1 - expect).abs() < 1e-6);
    }

    #[test]
    fn map_scheme_beats_identity_when_source_more_reliable() {
        let src = JointSourceModel::binary_symmetric(0.1).unwrap();
        let ch = TwcModel::qary_additive(2, 0.3, 0.3).unwrap();
        let sch = ScalarScheme::binary_map(&src, &ch).unwrap();
        let r = run_simulation(&src, &ch, &sch, &SimulationConfig::new(50, 2000, 8)).unwrap();
        assert!((r.d1_hat - 0.1).abs() <= 3.0 * r.stderr1, "{r:?}");
    }

    #[test]
    fn gaussian_side_info_matches_closed_form() {
        let src = JointSourceModel::bivariate_gaussian(0.5).unwrap();
        let ch = TwcModel::awgn(3.0, 1.0, 1.0, 1.0).unwrap();
        let sch = ScalarScheme::gaussian_linear(&src, &ch, GaussianDecoder::SideInfoMmse).unwrap();
        let r = run_simulation(&src, &ch, &sch, &SimulationConfig::new(100, 10_000, 1).with_workers(0)).unwrap();
        let (a1, a2) = sch.analytic_distortions(&ch).unwrap();
        assert!((a1 - 0.75 / 3.25).abs() < 1e-15);
        assert!((r.d1_hat - a1).abs() <= 3.0 * r.stderr1, "{r:?} vs {a1}");
        assert!((r.d2_hat - a2).abs() <= 3.0 * r.stderr2, "{r:?} vs {a2}");
    }

    #[test]
    fn linear_encoder_meets_power_constraint() {
        let src = JointSourceModel::bivariate_gaussian(0.3).unwrap();
        let ch = TwcModel::awgn(2.5, 1.0, 1.0, 1.0).unwrap();
        let sch = ScalarScheme::gaussian_linear(&src, &ch, GaussianDecoder::PaperMmse).unwrap();
        let n = 1_000_000;
        let pairs = crate::models::sample_source(&src, n, 77).unwrap();
        let sq: Vec<f64> = pairs
            .iter()
            .map(|(u, _)| sch.encode(Terminal::One, *u).unwrap().real().unwrap().powi(2))
            .collect();
        let power = pairwise_sum(&sq) / n as f64;
        let p: f64 = 2.5;
        assert!((power - p).abs() <= 3.0 * (2.0 * p * p / n as f64).sqrt(), "{power}");
    }

    #[test]
    fn worker_count_does_not_change_result() {
        let (src, ch, sch) = binary_setup(0.15, 0.05);
        let base = SimulationConfig::new(37, 211, 9);
        let one = run_simulation(&src, &ch, &sch, &base).unwrap();
        for w in [2, 3, 8, 64] {
            assert_eq!(one, run_simulation(&src, &ch, &sch, &base.with_workers(w)).unwrap());
        }
    }

    #[test]
    fn mismatched_models_fail_before_sampling() {
        let src = JointSourceModel::uniform_qary(3).unwrap();
        let ch = TwcModel::qary_additive(2, 0.1, 0.1).unwrap();
        let sch = ScalarScheme::QaryIdentity { q: 2 };
        let err = run_simulation(&src, &ch, &sch, &SimulationConfig::new(1, 1, 0)).unwrap_err();
        assert!(matches!(err, TwcError::AlphabetMismatch { .. }));
        let (src, ch, sch) = binary_setup(0.1, 0.1);
        assert!(run_simulation(&src, &ch, &sch, &SimulationConfig::new(0, 1, 0)).is_err());
        assert!(run_simulation(&src, &ch, &sch, &SimulationConfig::new(1, 0, 0)).is_err());
    }

    #[test]
    fn sweep_semantics() {
        let base = SimulationConfig::new(20, 100, 11);
        let select = |eps: &f64| {
            let src = JointSourceModel::binary_symmetric(0.25)?;
            let ch = TwcModel::qary_additive(2, *eps, *eps)?;
            let sch = ScalarScheme::qary_identity(&ch)?;
            Ok((src, ch, sch))
        };
        let empty: Vec<f64> = vec![];
        assert!(sweep_simulation(&base, &empty, select).unwrap().is_empty());

        let one = sweep_simulation(&base, &[0.1], select).unwrap();
        let (src, ch, sch) = binary_setup(0.1, 0.1);
        assert_eq!(one[0].1, run_simulation(&src, &ch, &sch, &base).unwrap());

        let grid: Vec<f64> = (1..=10).map(|i| f64::from(i) * 0.04).collect();
        let a = sweep_simulation(&base, &grid, select).unwrap();
        let b = sweep_simulation(&base.with_workers(4), &grid, select).unwrap();
        assert_eq!(a, b);

        let err = sweep_simulation(&base, &[0.1, 0.9], select).unwrap_err();
        assert!(matches!(err, TwcError::GridPoint { index: 1, .. }), "{err}");
    }

    #[test]
    fn pairwise_sum_is_accurate() {
        let xs = vec![0.1; 1_000_000];
        assert!((pairwise_sum(&xs) - 100_000.0).abs() < 1e-8);
        assert_eq!(pairwise_sum(&[]), 0.0);
    }
}
