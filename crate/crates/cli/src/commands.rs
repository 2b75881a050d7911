//! Subcommand bodies. Each returns the full stdout text; nothing is
//! printed here.

use twc_jscc::bounds::{
    achievable_region_lemma1, capacity_awgn, capacity_qary_additive, converse_lb_binary, converse_lb_gaussian,
    converse_lb_qary_uniform, gaussian_jscc_region, jscc_region_independent, DistortionPair, RegionVerdict,
};
use twc_jscc::rd_functions::{blahut_arimoto_rd, hamming_matrix, RdCurve};
use twc_jscc::scalar_coding::{gap_sweep_binary, gap_sweep_gaussian, GaussianDecoder, ScalarScheme};
use twc_jscc::simulator::{run_simulation, SimulationConfig};
use twc_jscc::{JointSourceModel, TwcError, TwcModel};

use crate::args::*;
use crate::output::{Cell, Table};

/// Maximum Blahut-Arimoto disagreement accepted by `rd --oracle`.
pub const ORACLE_TOL: f64 = 1e-4;

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments; exit 2.
    Usage(String),
    /// A requested self-check failed; exit 1.
    Check(String),
    /// The simulation itself failed; exit 3.
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Check(_) => 1,
            CliError::Internal(_) => 3,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Check(m) | CliError::Internal(m) => m,
        }
    }
}

/// Successful run: stdout text and exit code (0, or 1 for an outside
/// region verdict).
#[derive(Debug)]
pub struct Outcome {
    pub stdout: String,
    pub code: u8,
    pub seed: Option<u64>,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, code: 0, seed: None }
    }
}

fn usage(flag: &str) -> impl Fn(TwcError) -> CliError + '_ {
    move |e| CliError::Usage(format!("{flag}: {e}"))
}

fn check_eps(q: u32, eps: f64, flag: &str) -> Result<(), CliError> {
    let max = f64::from(q - 1) / f64::from(q);
    if eps > max {
        return Err(CliError::Usage(format!("{flag}: {eps} exceeds (q-1)/q = {max} for q = {q}")));
    }
    Ok(())
}

pub fn run(cmd: &Command) -> Result<Outcome, CliError> {
    match cmd {
        Command::Bounds { family } => bounds(family).map(Outcome::ok),
        Command::Gap { family } => gap(family).map(Outcome::ok),
        Command::Rd(args) => rd(args).map(Outcome::ok),
        Command::Simulate { family } => simulate(family),
        Command::Region { region } => region_cmd(region),
    }
}

fn bounds(family: &BoundsFamily) -> Result<String, CliError> {
    match family {
        BoundsFamily::Binary(p) => {
            check_eps(2, p.eps1, "--eps1")?;
            check_eps(2, p.eps2, "--eps2")?;
            let d1 = converse_lb_binary(p.delta, p.eps2).map_err(usage("--eps2"))?;
            let d2 = converse_lb_binary(p.delta, p.eps1).map_err(usage("--eps1"))?;
            let mut t = Table::new(&["delta", "eps1", "eps2", "d1_lb", "d2_lb"]);
            t.row(&[
                Cell::Num(p.delta),
                Cell::Num(p.eps1),
                Cell::Num(p.eps2),
                Cell::Num(d1.distortion),
                Cell::Num(d2.distortion),
            ]);
            Ok(t.into_string())
        }
        BoundsFamily::Qary(p) => {
            check_eps(p.q, p.eps1, "--eps1")?;
            check_eps(p.q, p.eps2, "--eps2")?;
            let d1 = converse_lb_qary_uniform(p.q, p.eps2).map_err(usage("--eps2"))?;
            let d2 = converse_lb_qary_uniform(p.q, p.eps1).map_err(usage("--eps1"))?;
            let mut t = Table::new(&["q", "eps1", "eps2", "d1_lb", "d2_lb"]);
            t.row(&[
                Cell::Int(u64::from(p.q)),
                Cell::Num(p.eps1),
                Cell::Num(p.eps2),
                Cell::Num(d1.distortion),
                Cell::Num(d2.distortion),
            ]);
            Ok(t.into_string())
        }
        BoundsFamily::Gaussian { params: p, r } => {
            let d1 = converse_lb_gaussian(p.rho, p.gamma1, *r).map_err(usage("--gamma1"))?;
            let d2 = converse_lb_gaussian(p.rho, p.gamma2, *r).map_err(usage("--gamma2"))?;
            let mut t = Table::new(&["rho", "gamma1", "gamma2", "r", "d1_lb", "d2_lb"]);
            t.row(&[
                Cell::Num(p.rho),
                Cell::Num(p.gamma1),
                Cell::Num(p.gamma2),
                Cell::Num(*r),
                Cell::Num(d1),
                Cell::Num(d2),
            ]);
            Ok(t.into_string())
        }
    }
}

fn decoder(d: DecoderArg) -> GaussianDecoder {
    match d {
        DecoderArg::Plain => GaussianDecoder::PaperMmse,
        DecoderArg::SideInfo => GaussianDecoder::SideInfoMmse,
    }
}

fn gap(family: &GapFamily) -> Result<String, CliError> {
    let points = match family {
        GapFamily::Binary { rho_grid, eps_grid } => {
            let deltas: Vec<f64> = rho_grid.iter().map(|r| (1.0 - r) / 2.0).collect();
            gap_sweep_binary(&deltas, eps_grid).map_err(usage("--eps-grid"))?
        }
        GapFamily::Gaussian { rho_grid, gamma_grid, decoder: d } => {
            gap_sweep_gaussian(rho_grid, gamma_grid, decoder(*d)).map_err(usage("--gamma-grid"))?
        }
    };
    let mut t = Table::new(&["rho", "param", "scalar_d", "lower_bound", "gap"]);
    for p in points {
        t.row(&[
            Cell::Num(p.rho),
            Cell::Num(p.param),
            Cell::Num(p.scalar_distortion),
            Cell::Num(p.lower_bound),
            Cell::Num(p.gap),
        ]);
    }
    Ok(t.into_string())
}

fn rd_curve(args: &RdArgs) -> Result<RdCurve, CliError> {
    Ok(match args.curve {
        CurveArg::Binary => RdCurve::BinaryHamming,
        CurveArg::Qary => RdCurve::QaryHamming {
            q: args.q.ok_or_else(|| CliError::Usage("--q: required for the qary curve".into()))?,
        },
        CurveArg::Gaussian => RdCurve::Gaussian,
        CurveArg::WzGaussian => {
            let rho = args.rho.ok_or_else(|| CliError::Usage("--rho: required for the wz-gaussian curve".into()))?;
            if rho.abs() >= 1.0 {
                return Err(CliError::Usage("--rho: |rho| must be below 1".into()));
            }
            RdCurve::WynerZivGaussian { rho }
        }
    })
}

fn rd(args: &RdArgs) -> Result<String, CliError> {
    let curve = rd_curve(args)?;
    let grid = match &args.d_grid {
        Some(g) => g.clone(),
        None => (1..=20).map(|i| curve.max_distortion() * f64::from(i) / 21.0).collect(),
    };
    let alphabet = match curve {
        RdCurve::BinaryHamming => Some(2usize),
        RdCurve::QaryHamming { q } => Some(q as usize),
        _ => None,
    };
    if args.oracle && alphabet.is_none() {
        return Err(CliError::Usage("--oracle: only available for the binary and qary curves".into()));
    }
    let mut header = vec!["d", "rate"];
    if args.oracle {
        header.extend(["rate_oracle", "abs_diff"]);
    }
    let mut t = Table::new(&header);
    let mut worst = 0.0f64;
    for &d in &grid {
        let rate = curve.rate(d).map_err(usage("--d-grid"))?;
        let mut row = vec![Cell::Num(d), Cell::Num(rate)];
        if let Some(n) = alphabet.filter(|_| args.oracle) {
            let src = vec![1.0 / n as f64; n];
            let oracle = blahut_arimoto_rd(&src, &hamming_matrix(n), d, 100_000, 1e-10).map_err(usage("--d-grid"))?;
            let diff = (oracle - rate).abs();
            worst = worst.max(diff);
            row.extend([Cell::Num(oracle), Cell::Num(diff)]);
        }
        t.row(&row);
    }
    if worst > ORACLE_TOL {
        return Err(CliError::Check(format!(
            "oracle check failed: max |closed form - Blahut-Arimoto| = {worst} > {ORACLE_TOL}"
        )));
    }
    Ok(t.into_string())
}

fn sim_config(run: &RunArgs) -> SimulationConfig {
    SimulationConfig::new(run.trials, run.block_length, run.seed).with_workers(run.workers)
}

fn simulate(family: &SimFamily) -> Result<Outcome, CliError> {
    let (source, channel, scheme, bounds, run) = match family {
        SimFamily::Binary { params: p, scheme, run } => {
            check_eps(2, p.eps1, "--eps1")?;
            check_eps(2, p.eps2, "--eps2")?;
            let src = JointSourceModel::binary_symmetric(p.delta).map_err(usage("--delta"))?;
            let ch = TwcModel::qary_additive(2, p.eps1, p.eps2).map_err(usage("--eps1"))?;
            let sch = match scheme {
                BinarySchemeArg::Identity => ScalarScheme::qary_identity(&ch),
                BinarySchemeArg::Map => ScalarScheme::binary_map(&src, &ch),
            }
            .map_err(usage("--scheme"))?;
            let lb = (
                converse_lb_binary(p.delta, p.eps2).map_err(usage("--eps2"))?.distortion,
                converse_lb_binary(p.delta, p.eps1).map_err(usage("--eps1"))?.distortion,
            );
            (src, ch, sch, lb, run)
        }
        SimFamily::Qary { params: p, run } => {
            check_eps(p.q, p.eps1, "--eps1")?;
            check_eps(p.q, p.eps2, "--eps2")?;
            let src = JointSourceModel::uniform_qary(p.q).map_err(usage("--q"))?;
            let ch = TwcModel::qary_additive(p.q, p.eps1, p.eps2).map_err(usage("--eps1"))?;
            let sch = ScalarScheme::qary_identity(&ch).map_err(usage("--q"))?;
            let lb = (
                converse_lb_qary_uniform(p.q, p.eps2).map_err(usage("--eps2"))?.distortion,
                converse_lb_qary_uniform(p.q, p.eps1).map_err(usage("--eps1"))?.distortion,
            );
            (src, ch, sch, lb, run)
        }
        SimFamily::Gaussian { params: p, decoder: d, run } => {
            if p.gamma1 <= 0.0 || p.gamma2 <= 0.0 {
                return Err(CliError::Usage("--gamma1/--gamma2: simulation needs positive SNRs".into()));
            }
            let src = JointSourceModel::bivariate_gaussian(p.rho).map_err(usage("--rho"))?;
            let ch = TwcModel::awgn(p.gamma1, p.gamma2, 1.0, 1.0).map_err(usage("--gamma1"))?;
            let sch = ScalarScheme::gaussian_linear(&src, &ch, decoder(*d)).map_err(usage("--decoder"))?;
            let lb = (
                converse_lb_gaussian(p.rho, p.gamma1, 1.0).map_err(usage("--gamma1"))?,
                converse_lb_gaussian(p.rho, p.gamma2, 1.0).map_err(usage("--gamma2"))?,
            );
            (src, ch, sch, lb, run)
        }
    };
    let analytic = scheme.analytic_distortions(&channel).map_err(|e| CliError::Internal(e.to_string()))?;
    let cfg = sim_config(run);
    let res = run_simulation(&source, &channel, &scheme, &cfg).map_err(|e| CliError::Internal(e.to_string()))?;
    let mut t = Table::new(&[
        "direction", "d_hat", "stderr", "analytic", "lower_bound", "within_3sigma", "symbols", "seed",
    ]);
    for (label, d, se, a, lb) in [
        ("1->2", res.d1_hat, res.stderr1, analytic.0, bounds.0),
        ("2->1", res.d2_hat, res.stderr2, analytic.1, bounds.1),
    ] {
        t.row(&[
            Cell::Text(label.into()),
            Cell::Num(d),
            Cell::Num(se),
            Cell::Num(a),
            Cell::Num(lb),
            Cell::Bool((d - a).abs() <= 3.0 * se),
            Cell::Int(res.total_symbols as u64),
            Cell::Int(res.seed),
        ]);
    }
    Ok(Outcome { stdout: t.into_string(), code: 0, seed: Some(res.seed) })
}

fn verdict_line(v: &RegionVerdict) -> String {
    format!(
        "{} binding={} margin={} margin_1to2={} margin_2to1={}\n",
        if v.inside { "inside" } else { "outside" },
        v.binding_constraint.label(),
        crate::output::fmt_num(v.margin),
        crate::output::fmt_num(v.margins[0]),
        crate::output::fmt_num(v.margins[1]),
    )
}

fn need<T: Copy>(v: Option<T>, flag: &str, family: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("{flag}: required for the {family} family")))
}

fn region_cmd(region: &RegionKind) -> Result<Outcome, CliError> {
    let v = match region {
        RegionKind::Lemma1 { params: p, target: t } => {
            let src = JointSourceModel::bivariate_gaussian(p.rho).map_err(usage("--rho"))?;
            achievable_region_lemma1(&src, (p.gamma1, p.gamma2), t.r, DistortionPair::new(t.d1, t.d2))
                .map_err(usage("--d1/--d2"))?
        }
        RegionKind::Theorem2 { params: p, target: t } => {
            gaussian_jscc_region(p.rho, (p.gamma1, p.gamma2), t.r, DistortionPair::new(t.d1, t.d2))
                .map_err(usage("--d1/--d2"))?
        }
        RegionKind::Theorem1 { family, q, eps1, eps2, gamma1, gamma2, target: t } => {
            let (curve, caps) = match family {
                IndependentFamily::Binary | IndependentFamily::Qary => {
                    let q = if *family == IndependentFamily::Binary { 2 } else { need(*q, "--q", "qary")? };
                    let name = if q == 2 { "binary" } else { "qary" };
                    let e1 = need(*eps1, "--eps1", name)?;
                    let e2 = need(*eps2, "--eps2", name)?;
                    check_eps(q, e1, "--eps1")?;
                    check_eps(q, e2, "--eps2")?;
                    let caps = (
                        capacity_qary_additive(q, e2).map_err(usage("--eps2"))?,
                        capacity_qary_additive(q, e1).map_err(usage("--eps1"))?,
                    );
                    let curve = if q == 2 { RdCurve::BinaryHamming } else { RdCurve::QaryHamming { q } };
                    (curve, caps)
                }
                IndependentFamily::Gaussian => {
                    let g1 = need(*gamma1, "--gamma1", "gaussian")?;
                    let g2 = need(*gamma2, "--gamma2", "gaussian")?;
                    if t.d1 <= 0.0 || t.d2 <= 0.0 {
                        return Err(CliError::Usage("--d1/--d2: Gaussian targets must be positive".into()));
                    }
                    (RdCurve::Gaussian, (capacity_awgn(g1).map_err(usage("--gamma1"))?, capacity_awgn(g2).map_err(usage("--gamma2"))?))
                }
            };
            jscc_region_independent([curve, curve], caps, t.r, DistortionPair::new(t.d1, t.d2))
                .map_err(usage("--d1/--d2"))?
        }
    };
    Ok(Outcome { stdout: verdict_line(&v), code: if v.inside { 0 } else { 1 }, seed: None })
}
