mod manifest;
mod output;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use inelastic_kfp::exponents::{critical_r, RestitutionConstants};
use inelastic_kfp::fluxes::{self, ExcisionDomain};
use inelastic_kfp::lattice::{continuum_compare, BoundaryRegime, LatticeDist};
use inelastic_kfp::pde::{self, Mode, OriginBc, PdeConfig};
use inelastic_kfp::profiles::{ProfileExponent, SelfSimilarProfile};
use inelastic_kfp::reproduce::{self, Scale};
use inelastic_kfp::sde::{self, HittingConfig, SimConfig};
use inelastic_kfp::{specfun, stats};
use output::Sink;
use serde::Serialize;
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;

/// Numerical laboratory for the kinetic Fokker-Planck equation with an
/// inelastic wall.
#[derive(Parser, Debug)]
#[command(name = "kfp", version = manifest::VERSION)]
struct Cli {
    /// Worker threads for parallel sections (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Directory for CSV/JSON outputs and the run manifest.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Critical exponents and constants for a restitution coefficient.
    Exponents(ExponentsArgs),
    /// Self-similar profiles on a grid.
    #[command(subcommand)]
    Profile(ProfileCommand),
    /// Flux integrals and the coupling constant C*.
    #[command(subcommand)]
    Flux(FluxCommand),
    /// Same as `flux cstar`.
    Cstar(CstarArgs),
    /// Stochastic particle simulations.
    #[command(subcommand)]
    Sde(SdeCommand),
    /// Random-walk lattice model.
    #[command(subcommand)]
    Lattice(LatticeCommand),
    /// Phase-space PDE solver.
    #[command(subcommand)]
    Pde(PdeCommand),
    /// Acceptance experiments: `all` or a criterion number.
    Reproduce(ReproduceArgs),
    #[command(subcommand, hide = true)]
    Specfun(SpecfunCommand),
}

#[derive(Args, Debug, Serialize)]
#[command(args_conflicts_with_subcommands = true, allow_negative_numbers = true)]
struct ExponentsArgs {
    #[command(subcommand)]
    #[serde(skip)]
    table: Option<ExponentsCommand>,
    #[arg(long)]
    r: Option<f64>,
    /// JSON instead of an aligned table.
    #[arg(long)]
    json: bool,
}

#[derive(Subcommand, Debug, Serialize)]
enum ExponentsCommand {
    /// CSV over log-spaced r in [from, to].
    Table {
        #[arg(long)]
        from: f64,
        #[arg(long)]
        to: f64,
        #[arg(long, default_value_t = 50)]
        n: usize,
    },
}

#[derive(Subcommand, Debug)]
enum ProfileCommand {
    /// CSV `x,v,value` on (0, xmax] × [−vmax, vmax].
    Dump(DumpArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
enum ProfileChoice {
    #[value(name = "G")]
    G,
    #[value(name = "F")]
    F,
    #[value(name = "S")]
    S,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
enum ExponentChoice {
    M23,
    Alpha,
}

#[derive(Args, Debug, Serialize)]
struct DumpArgs {
    #[arg(long, value_enum)]
    kind: ProfileChoice,
    #[arg(long, default_value_t = 0.1)]
    r: f64,
    /// Exponent of G; ignored for F and S.
    #[arg(long, value_enum, default_value_t = ExponentChoice::M23)]
    gamma: ExponentChoice,
    /// Points as <nx>x<nv>.
    #[arg(long, default_value = "64x64", value_parser = parse_grid)]
    grid: (usize, usize),
    #[arg(long, default_value_t = 2.0)]
    xmax: f64,
    #[arg(long, default_value_t = 2.0)]
    vmax: f64,
}

#[derive(Subcommand, Debug)]
enum FluxCommand {
    /// ∫ ζ Λ(ζ) dζ over [−M, M].
    Moment {
        #[arg(long = "M", default_value_t = 50.0)]
        m: f64,
    },
    /// Flux of a self-similar profile through the boundary of the excised region.
    Boundary(BoundaryArgs),
    /// C* by quadrature, optionally against the closed form.
    Cstar(CstarArgs),
}

#[derive(Args, Debug, Serialize)]
#[command(allow_negative_numbers = true)]
struct BoundaryArgs {
    /// `m23`, `alpha`, or a number.
    #[arg(long, default_value = "m23")]
    gamma: String,
    #[arg(long, default_value_t = 0.1)]
    r: f64,
    #[arg(long, default_value_t = 1.0)]
    delta: f64,
    #[arg(long, default_value_t = 1e-4)]
    b: f64,
}

#[derive(Args, Debug, Serialize)]
struct CstarArgs {
    #[arg(long)]
    r: f64,
    /// Truncation point of the quadrature before the tail fit.
    #[arg(long = "R", default_value_t = 50.0)]
    big_r: f64,
    #[arg(long)]
    compare: bool,
}

#[derive(Subcommand, Debug)]
enum SdeCommand {
    /// Collapse statistics from (x, v) = (1, 0).
    Collapse(CollapseArgs),
    /// First-return time and speed from the wall with launch speed b.
    Hitting(HittingArgs),
    /// Collapse fraction over several restitution coefficients.
    Sweep(SweepArgs),
}

#[derive(Args, Debug, Serialize)]
struct CollapseArgs {
    #[arg(long)]
    r: f64,
    #[arg(long, default_value_t = 10_000)]
    n: usize,
    #[arg(long, default_value_t = 50.0)]
    tmax: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 1e-2)]
    h_max: f64,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug, Serialize)]
struct HittingArgs {
    #[arg(long, default_value_t = 1.0)]
    b: f64,
    #[arg(long, default_value_t = 10_000)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Args, Debug, Serialize)]
struct SweepArgs {
    #[arg(long, value_delimiter = ',', default_value = "0.05,0.1,0.14,0.18,0.25")]
    rs: Vec<f64>,
    #[arg(long, default_value_t = 10_000)]
    n: usize,
    #[arg(long, default_value_t = 50.0)]
    tmax: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum LatticeCommand {
    /// Evolves the master equation and compares with the continuum limit.
    Run(LatticeArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
enum BcCheck {
    Neumann,
    Dirichlet,
    Dynamic,
}

#[derive(Args, Debug, Serialize)]
struct LatticeArgs {
    /// Release probability, either a number or `<mu>*h`.
    #[arg(long)]
    lambda: String,
    #[arg(long, default_value_t = 1.0 / 128.0)]
    h: f64,
    #[arg(long, default_value_t = 0.25)]
    t: f64,
    #[arg(long, value_enum)]
    bc_check: BcCheck,
}

#[derive(Subcommand, Debug)]
enum PdeCommand {
    /// Evolves a blob of mass and records the origin bookkeeping.
    Run(PdeArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
enum ModeChoice {
    Halfline,
    Strip,
}

#[derive(Args, Debug, Serialize)]
struct PdeArgs {
    /// JSON solver configuration; flags below override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    mode: Option<ModeChoice>,
    /// trap, nontrap, partial:<mu> or super.
    #[arg(long, value_parser = parse_bc)]
    #[serde(skip)]
    bc: Option<OriginBc>,
    #[arg(long)]
    r: Option<f64>,
    #[arg(long)]
    nx: Option<usize>,
    #[arg(long)]
    nv: Option<usize>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    tend: Option<f64>,
    #[arg(long)]
    dt: Option<f64>,
    /// Field snapshots written at equal intervals after the initial one.
    #[arg(long, default_value_t = 1)]
    snapshots: usize,
}

#[derive(Args, Debug, Serialize)]
struct ReproduceArgs {
    /// `all` or a criterion number from 1 to 12.
    which: String,
    /// Ten times fewer samples and coarser grids.
    #[arg(long)]
    fast: bool,
}

#[derive(Subcommand, Debug)]
enum SpecfunCommand {
    /// Prints one value per argument z.
    Eval {
        #[arg(long, value_enum)]
        func: SpecialFunction,
        #[arg(long, default_value_t = 0.0)]
        a: f64,
        #[arg(long, default_value_t = 2.0 / 3.0)]
        b: f64,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        z: Vec<f64>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SpecialFunction {
    #[value(name = "M")]
    M,
    #[value(name = "U")]
    U,
    #[value(name = "lngamma")]
    LnGamma,
}

fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once('x').ok_or_else(|| format!("expected <nx>x<nv>, got {s}"))?;
    let nx = a.parse::<usize>().map_err(|e| e.to_string())?;
    let nv = b.parse::<usize>().map_err(|e| e.to_string())?;
    if nx == 0 || nv < 2 {
        return Err("need nx ≥ 1 and nv ≥ 2".into());
    }
    Ok((nx, nv))
}

fn parse_bc(s: &str) -> Result<OriginBc, String> {
    match s {
        "trap" => Ok(OriginBc::Trapping),
        "nontrap" => Ok(OriginBc::Nontrapping),
        "super" => Ok(OriginBc::Supercritical),
        _ => match s.strip_prefix("partial:") {
            Some(mu) => mu
                .parse()
                .map(|mu_star| OriginBc::PartialTrapping { mu_star })
                .map_err(|e| format!("bad release rate in {s}: {e}")),
            None => Err(format!("expected trap, nontrap, partial:<mu> or super, got {s}")),
        },
    }
}

/// `0.5` or `<mu>*h`.
fn parse_lambda(s: &str, h: f64) -> anyhow::Result<f64> {
    match s.strip_suffix("*h") {
        Some(mu) => Ok(mu.parse::<f64>().context("release rate")? * h),
        None => s.parse().context("release probability"),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{}", output::error_json(&e));
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    let out = cli.out.clone();
    match cli.command {
        Command::Exponents(a) => exponents(a, out),
        Command::Profile(ProfileCommand::Dump(a)) => profile_dump(a, out),
        Command::Flux(FluxCommand::Moment { m }) => {
            let mut sink = Sink::new("flux moment", out, json!({ "M": m }))?;
            let value = fluxes::zeta_lambda_moment(m)?;
            sink.json("moment", &json!({ "M": m, "moment": value, "target": inelastic_kfp::exponents::PI_OVER_SQRT3 }))?;
            sink.finish()
        }
        Command::Flux(FluxCommand::Boundary(a)) => flux_boundary(a, out),
        Command::Flux(FluxCommand::Cstar(a)) | Command::Cstar(a) => cstar(a, out),
        Command::Sde(SdeCommand::Collapse(a)) => sde_collapse(a, out),
        Command::Sde(SdeCommand::Hitting(a)) => sde_hitting(a, out),
        Command::Sde(SdeCommand::Sweep(a)) => sde_sweep(a, out),
        Command::Lattice(LatticeCommand::Run(a)) => lattice_run(a, out),
        Command::Pde(PdeCommand::Run(a)) => pde_run(a, out),
        Command::Reproduce(a) => reproduce_cmd(a, out),
        Command::Specfun(SpecfunCommand::Eval { func, a, b, z }) => {
            for z in z {
                let value = match func {
                    SpecialFunction::M => specfun::kummer_m(a, b, z)?,
                    SpecialFunction::U => specfun::tricomi_u(a, b, z)?,
                    SpecialFunction::LnGamma => specfun::ln_gamma(z)?.0,
                };
                println!("{value:.17e}");
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

#[derive(Serialize)]
struct ExponentRow {
    r: f64,
    alpha: f64,
    beta: f64,
    kappa: f64,
    c_star: Option<f64>,
}

fn exponents(a: ExponentsArgs, out: Option<PathBuf>) -> anyhow::Result<ExitCode> {
    if let Some(ExponentsCommand::Table { from, to, n }) = a.table {
        if !(from > 0.0 && to > from && n >= 2) {
            bail!("need 0 < from < to and n ≥ 2");
        }
        let mut sink = Sink::new("exponents table", out, json!({ "from": from, "to": to, "n": n }))?;
        let rows = reproduce::log_grid(from, to, n)
            .into_iter()
            .map(|r| {
                let k = RestitutionConstants::new(r)?;
                Ok(ExponentRow {
                    r,
                    alpha: k.alpha,
                    beta: k.beta,
                    kappa: k.kappa,
                    c_star: k.c_star,
                })
            })
            .collect::<inelastic_kfp::Result<Vec<_>>>()?;
        sink.table("exponents", &rows, true)?;
        return sink.finish();
    }
    let Some(r) = a.r else {
        bail!("`exponents` needs --r or the `table` subcommand");
    };
    let mut sink = Sink::new("exponents", out, serde_json::to_value(&a)?)?;
    let k = RestitutionConstants::new(r)?;
    if a.json {
        sink.json("exponents", &k)?;
    } else {
        let fields = [
            ("r", Some(k.r)),
            ("r_c", Some(k.r_c)),
            ("alpha", Some(k.alpha)),
            ("beta", Some(k.beta)),
            ("K_alpha", Some(k.k_alpha)),
            ("kappa", Some(k.kappa)),
            ("C*", k.c_star),
        ];
        for (name, value) in fields {
            match value {
                Some(v) => println!("{name:<8} {v:>24.16e}"),
                None => println!("{name:<8} {:>24}", "undefined"),
            }
        }
        sink.save_json("exponents", &k)?;
    }
    sink.finish()
}

#[derive(Serialize)]
struct ProfileRow {
    x: f64,
    v: f64,
    value: f64,
}

fn profile_dump(a: DumpArgs, out: Option<PathBuf>) -> anyhow::Result<ExitCode> {
    let mut sink = Sink::new("profile dump", out, serde_json::to_value(&a)?)?;
    let k = RestitutionConstants::new(a.r)?;
    let profile = match a.kind {
        ProfileChoice::G => SelfSimilarProfile::forward(
            k,
            match a.gamma {
                ExponentChoice::M23 => ProfileExponent::MinusTwoThirds,
                ExponentChoice::Alpha => ProfileExponent::Alpha,
            },
        ),
        ProfileChoice::F => SelfSimilarProfile::adjoint(k),
        ProfileChoice::S => SelfSimilarProfile::supersolution(k),
    };
    let (nx, nv) = a.grid;
    let mut rows = Vec::with_capacity(nx * nv);
    for i in 0..nx {
        let x = a.xmax * (i + 1) as f64 / nx as f64;
        for j in 0..nv {
            let v = -a.vmax + 2.0 * a.vmax * j as f64 / (nv - 1) as f64;
            rows.push(ProfileRow {
                x,
                v,
                value: profile.value(x, v)?,
            });
        }
    }
    sink.table("profile", &rows, true)?;
    sink.finish()
}

fn flux_boundary(a: BoundaryArgs, out: Option<PathBuf>) -> anyhow::Result<ExitCode> {
    let mut sink = Sink::new("flux boundary", out, serde_json::to_value(&a)?)?;
    let k = RestitutionConstants::new(a.r)?;
    let gamma = match a.gamma.as_str() {
        "m23" => -2.0 / 3.0,
        "alpha" => k.alpha,
        s => s.parse().context("--gamma must be m23, alpha or a number")?,
    };
    let flux = fluxes::boundary_flux(gamma, &ExcisionDomain::new(a.delta, a.b, a.r)?)?;
    sink.json(
        "flux",
        &json!({
            "gamma": gamma,
            "r": a.r,
            "delta": a.delta,
            "b": a.b,
            "flux": flux,
            "minus_two_thirds_closed_form": fluxes::boundary_flux_closed_form(a.r),
        }),
    )?;
    sink.finish()
}

fn cstar(a: CstarArgs, out: Option<PathBuf>) -> anyhow::Result<ExitCode> {
    let mut sink = Sink::new("flux cstar", out, serde_json::to_value(&a)?)?;
    let k = RestitutionConstants::new(a.r)?;
    let Some(closed) = k.c_star else {
        bail!("C* is defined only for r < r_c = {}", critical_r());
    };
    let q = fluxes::c_star_quadrature(&k, a.big_r)?;
    let mut v = json!({
        "r": a.r,
        "R": a.big_r,
        "quadrature": q.value,
        "integral": q.integral,
        "tail": q.tail,
        "tail_exponent": q.tail_exponent,
    });
    if a.compare {
        v["closed_form"] = json!(closed);
        v["relative_deviation"] = json!((q.value - closed).abs() / closed.abs());
    }
    sink.json("cstar", &v)?;
    sink.finish()
}

#[derive(Serialize)]
struct PathRow {
    path: u64,
    collapsed: bool,
    t_final: f64,
    bounces: u64,
}

fn sde_collapse(a: CollapseArgs, out: Option<PathBuf>) -> anyhow::Result<ExitCode> {
    let mut sink = Sink::new("sde collapse", out, serde_json::to_value(&a)?)?;
    sink.manifest.seed = a.seed;
    let cfg = SimConfig {
        r: a.r,
        n_paths: a.n,
        t_max: a.tmax,
        seed: a.seed,
        h_max: a.h_max,
        ..SimConfig::default()
    };
    let outcomes = sde::run_paths(&cfg)?;
    let summary = sde::summarize(&cfg, &outcomes);
    let rows: Vec<PathRow> = outcomes
        .iter()
        .filter_map(|o| o.as_ref().ok())
        .map(|o| PathRow {
            path: o.path,
            collapsed: o.collapsed,
            t_final: o.t_final,
            bounces: o.bounce_count,
        })
        .collect();
    sink.table("paths", &rows, false)?;
    if a.json {
        sink.json("collapse", &summary)?;
    } else {
        println!(
            "r = {}: {} of {} paths collapsed (fraction {:.4}, 95% CI [{:.4}, {:.4}]), {} survived, {} capped",
            summary.r,
            summary.collapsed,
            summary.n_paths,
            summary.fraction,
            summary.ci_low,
            summary.ci_high,
            summary.survived,
            summary.capped
        );
        sink.save_json("collapse", &summary)?;
    }
    sink.finish()
}

#[derive(Serialize)]
struct HitRow {
    t1: f64,
    h1: f64,
}

fn sde_hitting(a: HittingArgs, out: Option<PathBuf>) -> anyhow::Result<ExitCode> {
    let mut sink = Sink::new("sde hitting", out, serde_json::to_value(&a)?)?;
    sink.manifest.seed = a.seed;
    let s = sde::hitting_statistics(a.b, a.n, a.seed, &HittingConfig::default())?;
    let rows: Vec<HitRow> = s.t1.iter().zip(&s.h1).map(|(&t1, &h1)| HitRow { t1, h1 }).collect();
    sink.table("hits", &rows, false)?;
    let (mean_h1, _) = stats::mean_var(&s.h1);
    sink.json(
        "hitting",
        &json!({
            "b": a.b,
            "n_paths": a.n,
            "returned": s.t1.len(),
            "unreturned": s.unreturned,
            "median_t1": stats::median(&s.t1),
            "median_t1_over_b2": stats::median(&s.t1) / (a.b * a.b),
            "mean_h1_over_b": mean_h1 / a.b,
        }),
    )?;
    sink.finish()
}

fn sde_sweep(a: SweepArgs, out: Option<PathBuf>) -> anyhow::Result<ExitCode> {
    let mut sink = Sink::new("sde sweep", out, serde_json::to_value(&a)?)?;
    sink.manifest.seed = a.seed;
    let cfg = SimConfig {
        n_paths: a.n,
        t_max: a.tmax,
        seed: a.seed,
        ..SimConfig::default()
    };
    let sweep = sde::collapse_sweep(&a.rs, &cfg)?;
    sink.table("sweep", &sweep, false)?;
    sink.json(
        "sweep",
        &json!({ "summaries": sweep, "half_collapse_crossing": sde::half_collapse_crossing(&sweep) }),
    )?;
    sink.finish()
}

#[derive(Serialize)]
struct LatticeRow {
    x: f64,
    density: f64,
}

fn lattice_run(a: LatticeArgs, out: Option<PathBuf>) -> anyhow::Result<ExitCode> {
    let mut sink = Sink::new("lattice run", out, serde_json::to_value(&a)?)?;
    let lambda = parse_lambda(&a.lambda, a.h)?;
    let bc = match a.bc_check {
        BcCheck::Neumann => BoundaryRegime::Neumann,
        BcCheck::Dirichlet => BoundaryRegime::Dirichlet,
        BcCheck::Dynamic => BoundaryRegime::Dynamic { mu: lambda / a.h },
    };
    let mut d = LatticeDist::gaussian_bump(a.h, lambda)?;
    d.evolve_to(a.t);
    let cmp = continuum_compare(&d, bc)?;
    let rows: Vec<LatticeRow> = d
        .p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(n, p)| LatticeRow {
            x: n as f64 * a.h,
            density: p / a.h,
        })
        .collect();
    sink.table("profile", &rows, false)?;
    sink.json(
        "lattice",
        &json!({
            "h": a.h,
            "lambda": lambda,
            "steps": d.k,
            "t": d.time(),
            "max_error": cmp.max_error,
            "m_lattice": cmp.m_lattice,
            "m_reference": cmp.m_reference,
            "u0_reference": cmp.u0_reference,
            "early_time_warning": cmp.early_time_warning,
        }),
    )?;
    sink.finish()
}

#[derive(Serialize)]
struct CellRow {
    x: f64,
    v: f64,
    #[serde(rename = "P")]
    p: f64,
}

#[derive(Serialize)]
struct HalflineRow {
    t: f64,
    interior_mass: f64,
    m: f64,
    a_alpha: f64,
    a_m23: f64,
}

#[derive(Serialize)]
struct StripRow {
    t: f64,
    interior_mass: f64,
    m: f64,
    a_alpha: f64,
    a_m23: f64,
    m_right: f64,
}

fn pde_config(a: &PdeArgs) -> anyhow::Result<PdeConfig> {
    let mut cfg = match &a.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?
        }
        None => PdeConfig::default(),
    };
    if let Some(m) = a.mode {
        cfg.mode = match m {
            ModeChoice::Halfline => Mode::Halfline,
            ModeChoice::Strip => Mode::Strip,
        };
    }
    if let Some(bc) = a.bc {
        cfg.bc = bc;
    }
    cfg.r = a.r.unwrap_or(cfg.r);
    cfg.nx = a.nx.unwrap_or(cfg.nx);
    cfg.nv = a.nv.unwrap_or(cfg.nv);
    cfg.delta = a.delta.or(cfg.delta);
    cfg.t_end = a.tend.unwrap_or(cfg.t_end);
    cfg.dt = a.dt.or(cfg.dt);
    Ok(cfg)
}

fn snapshot(s: &pde::PdeSolver) -> Vec<CellRow> {
    let g = &s.field.grid;
    let mut rows = Vec::with_capacity(g.nx() * g.nv());
    for j in 0..g.nv() {
        for i in 0..g.nx() {
            rows.push(CellRow {
                x: g.x_centres[i],
                v: g.v_centres[j],
                p: s.field.at(i, j),
            });
        }
    }
    rows
}

fn pde_run(a: PdeArgs, out: Option<PathBuf>) -> anyhow::Result<ExitCode> {
    let cfg = pde_config(&a)?;
    let mut sink = Sink::new("pde run", out, serde_json::to_value(&cfg)?)?;
    let mut s = pde::init_field(&cfg)?;
    let count = a.snapshots.max(1);
    sink.table("snapshot_000", &snapshot(&s), false)?;
    for k in 1..=count {
        s.run_to(cfg.t_end * k as f64 / count as f64)?;
        sink.table(&format!("snapshot_{k:03}"), &snapshot(&s), false)?;
    }
    match cfg.mode {
        Mode::Halfline => {
            let rows: Vec<HalflineRow> = s
                .history
                .iter()
                .map(|h| HalflineRow {
                    t: h.t,
                    interior_mass: h.interior_mass,
                    m: h.m,
                    a_alpha: h.a_alpha,
                    a_m23: h.a_m23,
                })
                .collect();
            sink.table("mass", &rows, false)?;
        }
        Mode::Strip => {
            let rows: Vec<StripRow> = s
                .history
                .iter()
                .map(|h| StripRow {
                    t: h.t,
                    interior_mass: h.interior_mass,
                    m: h.m,
                    a_alpha: h.a_alpha,
                    a_m23: h.a_m23,
                    m_right: h.m_far,
                })
                .collect();
            sink.table("mass", &rows, false)?;
        }
    }
    sink.json(
        "pde",
        &json!({
            "t": s.field.t,
            "dt": s.dt,
            "steps": (s.field.t / s.dt).round(),
            "interior_mass": s.interior_mass(),
            "total_mass": s.total_mass(),
            "outflow": s.outflow,
            "origins": s.origins,
        }),
    )?;
    sink.finish()
}

fn reproduce_cmd(a: ReproduceArgs, out: Option<PathBuf>) -> anyhow::Result<ExitCode> {
    let mut sink = Sink::new("reproduce", out, serde_json::to_value(&a)?)?;
    let ids: Vec<u8> = if a.which == "all" {
        (1..=12).collect()
    } else {
        vec![a.which.parse().context("expected `all` or a criterion number")?]
    };
    let scale = if a.fast { Scale::Fast } else { Scale::Full };
    let mut reports = Vec::new();
    for id in ids {
        let report = reproduce::criterion(id, scale)?;
        println!("{}", report.line());
        reports.push(report);
    }
    let failed: Vec<u8> = reports.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    println!("{} of {} criteria passed", reports.len() - failed.len(), reports.len());
    #[derive(Serialize)]
    struct Row<'a> {
        id: u8,
        title: &'a str,
        passed: bool,
        seconds: f64,
    }
    let rows: Vec<Row> = reports
        .iter()
        .map(|r| Row {
            id: r.id,
            title: r.title,
            passed: r.passed,
            seconds: r.seconds,
        })
        .collect();
    sink.table("criteria", &rows, false)?;
    sink.save_json("reproduce", &reports)?;
    sink.finish()?;
    if failed.is_empty() {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("{}", json!({ "error": "acceptance", "failed": failed }));
        Ok(ExitCode::from(1))
    }
}
