//! Subcommand bodies. Each returns the text printed on stdout.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use icdms_core::discrete::random::random_distribution;
use icdms_core::discrete::{
    assemble_joint, conditional_mi, evaluate, AlphabetSpec, ConstraintReading, DiscreteRegion,
    Family, Theorem, Var,
};
use icdms_core::gaussian::BLOCKS;
use icdms_core::oracle::{brute_joint_mi, grid_maximize, mc_gaussian_entropy};
use icdms_core::{
    build_covariances, convex_hull, dpc_lambda_star, dpc_objective, entropy_terms, inclusion_gap,
    sweep_gaussian, ChannelParams, Frontier, GaussianCoding, RegionFamily, SweepGrid,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

use crate::config::{GlobalFlags, Resolved, RunConfig};
use crate::distfile;
use crate::error::{CliError, Result};
use crate::output::{ensure_dir, sig12, write_csv, write_json, write_svg};

pub const TOOL: &str = "icdms";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Serialize)]
struct Metadata<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    channel: ChannelParams,
    regions: Vec<&'static str>,
    grids: &'a std::collections::BTreeMap<String, SweepGrid>,
    convex_hull: bool,
    paper_literal: bool,
    seed: u64,
    csv: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    svg: Option<&'a str>,
    /// Feed this back with `region --config` to reproduce the CSV.
    config: &'a RunConfig,
}

/// Result of a sweep run.
pub struct SweepRun {
    pub frontiers: Vec<(String, Frontier)>,
    pub csv: PathBuf,
    pub metadata: PathBuf,
    pub svg: Option<PathBuf>,
}

fn sweep_all(r: &Resolved) -> Result<Vec<(String, Frontier)>> {
    r.regions
        .iter()
        .map(|&family| {
            let grid = &r.grids[family.name()];
            let f = sweep_gaussian(&r.channel, grid, family)?;
            let f = if r.config.convex_hull {
                convex_hull(&f)
            } else {
                f
            };
            Ok((family.name().to_string(), f))
        })
        .collect()
}

/// Sweeps every region of a resolved config and writes CSV, metadata and
/// the optional SVG.
pub fn run_sweeps(r: &Resolved, command: &str, title: &str) -> Result<SweepRun> {
    let frontiers = sweep_all(r)?;
    let out = &r.config.output;
    let dir = ensure_dir(&out.dir)?;
    let csv = dir.join(&out.csv);
    write_csv(&csv, &frontiers)?;
    let svg = match &out.svg {
        Some(name) => {
            let p = dir.join(name);
            write_svg(&p, title, &frontiers)?;
            Some(p)
        }
        None => None,
    };
    let meta = Metadata {
        tool: TOOL,
        version: VERSION,
        command,
        channel: r.channel,
        regions: r.regions.iter().map(|f| f.name()).collect(),
        grids: &r.grids,
        convex_hull: r.config.convex_hull,
        paper_literal: r.config.paper_literal,
        seed: r.config.seed,
        csv: &out.csv,
        svg: out.svg.as_deref(),
        config: &r.config,
    };
    let metadata = dir.join(&out.metadata);
    write_json(&metadata, &meta)?;
    Ok(SweepRun {
        frontiers,
        csv,
        metadata,
        svg,
    })
}

fn summary(run: &SweepRun) -> String {
    let mut s = String::new();
    for (label, f) in &run.frontiers {
        let _ = writeln!(
            s,
            "{label}: {} samples, max r1 {:.4} bits, max r2 {:.4} bits",
            f.len(),
            f.r1_extent(),
            f.r2_extent()
        );
    }
    let find = |name: &str| {
        run.frontiers
            .iter()
            .find(|(l, _)| l == name)
            .map(|(_, f)| f)
    };
    if let Some(g) = find("g") {
        for other in ["g_sp1", "g_sp2"] {
            if let Some(o) = find(other) {
                if let (Ok(inside), Ok(beyond)) = (inclusion_gap(o, g), inclusion_gap(g, o)) {
                    let _ = writeln!(
                        s,
                        "inclusion_gap({other}, g) = {inside:.3e}, inclusion_gap(g, {other}) = {beyond:.4}"
                    );
                }
            }
        }
    }
    let _ = writeln!(s, "wrote {}", run.csv.display());
    if let Some(p) = &run.svg {
        let _ = writeln!(s, "wrote {}", p.display());
    }
    let _ = writeln!(s, "wrote {}", run.metadata.display());
    s
}

/// Command-line channel and region choices for `region` without a file.
#[derive(Debug, Clone, Default)]
pub struct RegionArgs {
    pub config: Option<PathBuf>,
    pub preset: Option<String>,
    pub regions: Vec<RegionFamily>,
    pub channel: Option<[f64; 4]>,
}

pub fn cmd_region(args: &RegionArgs, flags: &GlobalFlags) -> Result<String> {
    let (mut cfg, src, path) = match &args.config {
        Some(p) => {
            let (cfg, src) = RunConfig::load(p)?;
            (cfg, src, p.display().to_string())
        }
        None => (RunConfig::default(), String::new(), String::new()),
    };
    if args.preset.is_some() {
        cfg.preset = args.preset.clone();
    }
    if !args.regions.is_empty() {
        cfg.regions = args.regions.clone();
    }
    if let Some([p1, p2, c12, c21]) = args.channel {
        cfg.channel = Some(crate::config::ChannelSpec { p1, p2, c12, c21 });
    }
    cfg.apply_flags(flags);
    let resolved = cfg
        .resolve(&src, &path)
        .map_err(|e| match (&args.config, e) {
            (None, CliError::Config { message, .. }) => CliError::Usage(message),
            (_, e) => e,
        })?;
    let run = run_sweeps(&resolved, "region", "Achievable rate regions")?;
    Ok(summary(&run))
}

pub fn cmd_figure(preset: &str, flags: &GlobalFlags) -> Result<String> {
    let mut cfg = RunConfig {
        preset: Some(preset.to_string()),
        ..RunConfig::default()
    };
    cfg.output.csv = format!("{preset}.csv");
    cfg.output.metadata = format!("{preset}.meta.json");
    cfg.output.svg = Some(format!("{preset}.svg"));
    cfg.apply_flags(flags);
    let resolved = cfg.resolve("", "").map_err(|e| match e {
        CliError::Config { message, .. } => CliError::Usage(message),
        e => e,
    })?;
    let ch = resolved.channel;
    let title = format!(
        "{preset}: P1 = {}, P2 = {}, c12 = {}, c21 = {}",
        ch.p1, ch.p2, ch.c12, ch.c21
    );
    let run = run_sweeps(&resolved, "figure", &title)?;
    Ok(summary(&run))
}

#[derive(Debug, Serialize)]
struct DiscreteReport<'a> {
    file: String,
    family: &'static str,
    theorem: u8,
    reading: ConstraintReading,
    region: &'a DiscreteRegion,
}

pub fn cmd_discrete(path: &Path, theorem: Option<u8>, flags: &GlobalFlags) -> Result<String> {
    let src = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let fd = distfile::parse(&src, &path.display().to_string())?;
    let theorem = match theorem {
        Some(n) => Theorem::from_number(n)
            .ok_or_else(|| CliError::Usage(format!("theorem must be 1, 2 or 3, got {n}")))?,
        None => match fd.family {
            Family::Full => Theorem::R,
            Family::Star => Theorem::RSim,
        },
    };
    if theorem.family() != fd.family {
        return Err(CliError::Usage(format!(
            "theorem {} needs a {} distribution, file declares {}",
            theorem.number(),
            theorem.family().name(),
            fd.family.name()
        )));
    }
    let reading = if flags.paper_literal {
        ConstraintReading::PaperLiteral
    } else {
        ConstraintReading::Receiver2
    };
    let region = evaluate(&fd, theorem, reading)?;

    let mut s = String::new();
    let _ = writeln!(
        s,
        "theorem {} ({} family), {:?} reading",
        theorem.number(),
        fd.family.name(),
        reading
    );
    let _ = writeln!(s, "r1_bound   {}", sig12(region.r1_bound));
    let _ = writeln!(s, "r2_bound   {}", sig12(region.r2_bound));
    match region.sum_bound {
        Some(v) => {
            let _ = writeln!(s, "sum_bound  {}", sig12(v));
        }
        None => {
            let _ = writeln!(s, "sum_bound  none");
        }
    }
    for c in &region.constraints {
        let _ = writeln!(
            s,
            "residual   {:<36} {:>20}  {}",
            c.label,
            sig12(c.residual),
            if c.active { "active" } else { "reported" }
        );
    }
    let _ = writeln!(s, "feasible   {}", region.feasible);

    if let Some(dir) = &flags.out {
        let dir = ensure_dir(dir)?;
        let report = DiscreteReport {
            file: path.display().to_string(),
            family: fd.family.name(),
            theorem: theorem.number(),
            reading,
            region: &region,
        };
        let p = dir.join("discrete.json");
        write_json(&p, &report)?;
        let _ = writeln!(s, "wrote {}", p.display());
    }
    Ok(s)
}

#[derive(Debug, Serialize)]
struct DpcReport {
    channel: ChannelParams,
    alpha: f64,
    beta: f64,
    /// Coefficient of the unit-variance `W`.
    lambda_star: f64,
    gain_bits: f64,
    grid_steps: usize,
    grid_argmax: f64,
    grid_max_bits: f64,
}

pub fn cmd_dpc(ch: ChannelParams, alpha: f64, beta: f64, steps: usize) -> Result<String> {
    let (lambda_star, gain_bits) = dpc_lambda_star(&ch, alpha, beta)?;
    let hi = (3.0 * ch.eta2(alpha)).max(1.0);
    let (grid_argmax, grid_max_bits) =
        grid_maximize(|l| dpc_objective(&ch, alpha, beta, l), 0.0, hi, steps).or_else(
            |e| match e {
                // silent V stream: only λ = 0 is allowed
                icdms_core::Error::NonFiniteObjective(_) => {
                    Ok((0.0, dpc_objective(&ch, alpha, beta, 0.0)))
                }
                e => Err(e),
            },
        )?;
    let report = DpcReport {
        channel: ch,
        alpha,
        beta,
        lambda_star,
        gain_bits,
        grid_steps: steps,
        grid_argmax,
        grid_max_bits,
    };
    Ok(serde_json::to_string_pretty(&report).expect("report serializes") + "\n")
}

pub fn random_channel(rng: &mut impl Rng) -> ChannelParams {
    ChannelParams::new(
        rng.random_range(0.5..10.0),
        rng.random_range(0.5..10.0),
        rng.random_range(0.0..3.0),
        rng.random_range(0.0..3.0),
    )
    .expect("ranges are valid")
}

pub fn random_coding(rng: &mut impl Rng) -> GaussianCoding {
    GaussianCoding::new(
        rng.random_range(0.1..0.9),
        rng.random_range(0.1..0.9),
        rng.random_range(0.05..1.5),
        rng.random_range(0.05..1.5),
    )
    .expect("ranges are valid")
}

/// Options of `oracle-check`.
#[derive(Debug, Clone, Copy)]
pub struct OracleArgs {
    pub gaussian_draws: usize,
    pub samples: u64,
    pub discrete_draws: usize,
}

pub fn cmd_oracle_check(args: OracleArgs, seed: u64) -> Result<String> {
    let mut s = String::new();
    let mut failures = 0;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);

    let _ = writeln!(
        s,
        "gaussian entropy terms vs Monte Carlo (n = {}):",
        args.samples
    );
    for draw in 0..args.gaussian_draws {
        let ch = random_channel(&mut rng);
        let cp = random_coding(&mut rng);
        let h = entropy_terms(&ch, &cp)?;
        let (mu, nu) = build_covariances(&ch, &cp);
        let mut worst: f64 = 0.0;
        for (k, b) in BLOCKS.iter().enumerate() {
            let m = if b.first { &mu } else { &nu };
            let cov = sub_block(m, b.idx);
            let est =
                mc_gaussian_entropy(&cov, args.samples, seed ^ ((draw as u64) << 8 | k as u64))?;
            let target = h.get(b.name).expect("block names match");
            let z = (est.value_bits - target).abs() / est.std_error_bits;
            worst = worst.max(z);
            if z > 3.0 {
                failures += 1;
                let _ = writeln!(
                    s,
                    "  draw {draw} {}: {} vs MC {} ({z:.2} SE)",
                    b.name,
                    sig12(target),
                    sig12(est.value_bits)
                );
            }
        }
        let _ = writeln!(s, "  draw {draw}: worst deviation {worst:.2} SE");
    }

    use Var::*;
    let queries: [(&[Var], &[Var], &[Var]); 6] = [
        (&[W], &[Y1, U], &[Q]),
        (&[U, V], &[Y2], &[Q]),
        (&[U], &[W], &[Q]),
        (&[V], &[W], &[Q]),
        (&[V], &[Y2], &[U, Q]),
        (&[U], &[V], &[Y2, Q]),
    ];
    let mut worst: f64 = 0.0;
    for draw in 0..args.discrete_draws {
        let family = if draw % 2 == 0 {
            Family::Full
        } else {
            Family::Star
        };
        let fd = random_distribution(family, AlphabetSpec::binary(), &mut rng)?;
        let j = assemble_joint(&fd)?;
        for (l, r, g) in queries {
            let d = (conditional_mi(&j, l, r, g)? - brute_joint_mi(&j, l, r, g)?).abs();
            worst = worst.max(d);
            if d > 1e-12 {
                failures += 1;
            }
        }
    }
    let _ = writeln!(
        s,
        "discrete mutual information vs brute force: {} draws, worst difference {worst:.2e}",
        args.discrete_draws
    );
    if failures > 0 {
        return Err(CliError::Check(format!(
            "{s}{failures} oracle comparisons failed"
        )));
    }
    let _ = writeln!(s, "all oracle comparisons passed");
    Ok(s)
}

fn sub_block(m: &icdms_core::Mat3, idx: &[usize]) -> icdms_core::oracle::DMatrix<f64> {
    icdms_core::oracle::DMatrix::from_fn(idx.len(), idx.len(), |i, j| m[idx[i]][idx[j]])
}
