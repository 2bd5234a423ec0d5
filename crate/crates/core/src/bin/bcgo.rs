use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use bcgo::cgo::{axis_zeta, build_cgo, residual_norm, CgoOptions};
use bcgo::field::ComplexGrid;
use bcgo::harness::{bound_value, parameter_schedule, run_sweep, Config};
use bcgo::lattice::SpectralTransform;
use bcgo::recon::{assemble_hminus1, write_estimates_csv, FrequencyBox, PairingSource, Reconstructor};
use bcgo::rl::{approximation_rate, decay_exponent, rl_decay_check, RadialField};
use bcgo::{Error, Result};

#[derive(Parser)]
#[command(name = "bcgo", version, about = "CGO solutions and stability experiments for Δ² − k⁴ + q")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build one CGO solution and report its remainder and residual.
    Cgo(CgoArgs),
    /// Recover 𝓕(q₁^even − q₂^even) at one frequency or over E(ρ).
    Recon(ReconArgs),
    /// Mollifier and Riemann–Lebesgue checks on radial test functions.
    RlCheck(RlArgs),
    /// Full stability sweep over the configured k and δ values.
    Sweep(SweepArgs),
    /// Print the scheduled parameters for (k, δ).
    Schedule(ScheduleArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Q1,
    Q2,
}

#[derive(Args)]
struct CgoArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value_t = 1.0)]
    k: f64,
    #[arg(long, default_value_t = 4.0)]
    a: f64,
    #[arg(long, value_enum, default_value_t = Which::Q2)]
    which: Which,
    #[arg(long)]
    modes: Option<usize>,
    /// Write the remainder samples on the lattice nodes (complex BCGO1 file).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReconArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value_t = 1.0)]
    k: f64,
    /// Decay rate; scheduled from the configured δ when omitted.
    #[arg(long)]
    a: Option<f64>,
    /// Single frequency, comma separated; E(ρ) when omitted.
    #[arg(long, value_delimiter = ',')]
    xi: Option<Vec<f64>>,
    #[arg(long, value_enum)]
    source: Option<SourceArg>,
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SourceArg {
    Oracle,
    Boundary,
}

#[derive(Args)]
struct RlArgs {
    #[arg(long, default_value_t = 0.1)]
    tau: f64,
    #[arg(long, default_value_t = 4)]
    power: i32,
    #[arg(long, default_value_t = 0.45)]
    s: f64,
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides `output.dir`.
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Args)]
struct ScheduleArgs {
    #[arg(long, default_value_t = 1.0)]
    k: f64,
    #[arg(long, default_value_t = 1e-6)]
    delta: f64,
    #[arg(long, default_value_t = 0.25)]
    s: f64,
    #[arg(long, default_value_t = 3)]
    n: usize,
    #[arg(long = "M", default_value_t = 1.0)]
    m: f64,
    #[arg(long = "R", default_value_t = 1.0)]
    r: f64,
    #[arg(long = "C0", default_value_t = bcgo::cgo::DEFAULT_C0)]
    c0: f64,
    #[arg(long = "C", default_value_t = 1.0)]
    c: f64,
}

fn load(path: &Option<PathBuf>) -> Result<Config> {
    match path {
        Some(p) => Config::load(p),
        None => Ok(Config::default()),
    }
}

fn cmd_cgo(args: CgoArgs) -> Result<()> {
    let cfg = load(&args.config)?;
    let dom = cfg.domain_spec()?;
    let (q1, q2) = cfg.potentials()?;
    let q = match args.which {
        Which::Q1 => q1,
        Which::Q2 => q2,
    }
    .even_extension()?;
    let opts = CgoOptions {
        kappa: dom.kappa(),
        modes: args.modes.unwrap_or(cfg.resolution.modes),
        ..cfg.resolution.cgo()
    };
    let zeta = axis_zeta(dom.dim, args.k, args.a);
    let sol = build_cgo(&q, &zeta, args.k, &opts)?;
    let res = residual_norm(&sol, &q, &opts)?;
    let rel = if sol.q_norm > 0.0 { res / sol.q_norm } else { res };
    println!("iterations        {}", sol.iterations);
    println!("remainder_norm    {:.6e}", sol.remainder_norm);
    println!("certified_bound   {:.6e}", sol.certified_bound);
    println!("residual_relative {:.6e}", rel);
    if let Some(path) = args.out {
        let grid = sol.grid();
        let samples = SpectralTransform::new(grid).synthesize(&sol.remainder);
        let n = grid.dim();
        let h = grid.spacing();
        let field = ComplexGrid {
            shape: grid.shape(),
            lo: vec![-std::f64::consts::PI; n],
            hi: vec![-std::f64::consts::PI + h * grid.modes() as f64; n],
            data: samples,
        };
        field.write_to(std::fs::File::create(&path)?)?;
        println!("wrote             {}", path.display());
    }
    Ok(())
}

fn cmd_recon(args: ReconArgs) -> Result<()> {
    let cfg = load(&args.config)?;
    let dom = cfg.domain_spec()?;
    let (q1, q2) = cfg.potentials()?;
    let mut opts = cfg.resolution.recon();
    if let Some(s) = args.source {
        opts.source = match s {
            SourceArg::Oracle => PairingSource::Oracle,
            SourceArg::Boundary => PairingSource::Boundary,
        };
    }
    let sc = &cfg.schedule;
    let delta = sc.delta.values()[0];
    let radius = sc.r.unwrap_or_else(|| dom.enclosing_radius());
    let sched = parameter_schedule(args.k, delta, sc.s, dom.dim, sc.m, radius, sc.c0)?;
    let a = args.a.or(sc.a).unwrap_or(sched.a);
    let recon = Reconstructor::new(&q1, &q2, &dom, &opts)?;
    let estimates = match &args.xi {
        Some(xi) => {
            if xi.len() != dom.dim {
                return Err(Error::DimensionMismatch { expected: dom.dim, got: xi.len() });
            }
            let e = recon.estimate(xi, args.k, a)?;
            println!("xi        {:?}", e.xi);
            println!("estimate  {:.9e}", e.value);
            if let Some(t) = e.truth {
                println!("truth     {:.9e}", t);
                println!("abs_error {:.3e}", (t - e.value).norm());
            }
            println!("budget    {:?}", e.budget);
            vec![e]
        }
        None => {
            let rho = sc.rho.unwrap_or(sched.rho).max(1.0);
            let fbox = FrequencyBox::new(dom.dim, rho, cfg.resolution.cells)?;
            let est = recon.estimate_box(&fbox, args.k, a)?;
            let h = assemble_hminus1(&est, &fbox, recon.tail_constant())?;
            let bare = assemble_hminus1(&est, &fbox, 0.0)?;
            println!("k {} a {:.6} rho {:.6} nodes {}", args.k, a, rho, est.len());
            println!("hminus1_estimate {:.6e}", h);
            println!("inside_E_rho     {:.6e}", bare);
            est
        }
    };
    if let Some(path) = args.csv {
        write_estimates_csv(std::fs::File::create(&path)?, &estimates)?;
    }
    Ok(())
}

fn cmd_rl(args: RlArgs) -> Result<()> {
    let ball = RadialField::Ball { radius: args.radius };
    let bump = RadialField::Bump { radius: args.radius, power: 4 };
    println!("F(ball)(0)          {:.9}", ball.transform(0.0));
    println!("ball axis exponent  {:.4}", decay_exponent(&ball, &[1.0, 0.0, 0.0], 10.0, 100.0, 20000));
    let taus = [0.2, 0.1, 0.05, 0.025];
    for (name, f, s) in [("ball", ball, args.s), ("bump", bump, args.s.min(0.4))] {
        let r = approximation_rate(&f, s, &taus)?;
        println!("{name} ratios (s={s}) {:?} decreasing={}", r.ratios, r.decreasing_tail);
    }
    let samples: Vec<Vec<f64>> = (0..=200).map(|i| vec![i as f64 * 0.5, 0.0, 0.0]).collect();
    let report = rl_decay_check(&ball, &samples, args.tau, args.power, args.s);
    println!("fitted C_N {:.6e} C {:.6e} holds={}", report.c_n, report.c, report.holds());
    if let Some(path) = args.csv {
        report.write_csv(std::fs::File::create(&path)?)?;
    }
    Ok(())
}

fn cmd_sweep(args: SweepArgs) -> Result<()> {
    let mut cfg = load(&args.config)?;
    if let Some(d) = args.out_dir {
        cfg.output.dir = d;
    }
    let out = run_sweep(&cfg, true)?;
    for r in &out.records {
        println!(
            "k {:>5} delta {:.2e} a {:8.4} rho {:.4} err {:.6e} bound {:.6e} ({:.1}s)",
            r.schedule.k, r.schedule.delta, r.schedule.a, r.schedule.rho, r.err_hminus1, r.bound_value, r.runtime_s
        );
    }
    for f in &out.failures {
        println!("failed k {} delta {:.2e}: {}", f.k, f.delta, f.reason);
    }
    if let (Some(c), Some(p)) = (&out.csv_path, &out.plot_path) {
        println!("wrote {} and {}", c.display(), p.display());
    }
    Ok(())
}

fn cmd_schedule(args: ScheduleArgs) -> Result<()> {
    let p = parameter_schedule(args.k, args.delta, args.s, args.n, args.m, args.r, args.c0)?;
    println!("k     {}", p.k);
    println!("delta {:e}", p.delta);
    println!("alpha {:.12}", p.alpha);
    println!("a     {:.12}", p.a);
    println!("tau   {:.12}", p.tau);
    println!("rho   {:.12}", p.rho);
    println!("bound {:.12}", bound_value(p.k, p.delta, p.alpha, args.c));
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Cgo(a) => cmd_cgo(a),
        Command::Recon(a) => cmd_recon(a),
        Command::RlCheck(a) => cmd_rl(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Schedule(a) => cmd_schedule(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

