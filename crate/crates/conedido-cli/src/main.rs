//! Command-line front end: every library operation behind a subcommand,
//! flat key=value config files with flag overrides, deterministic JSON
//! reports with the resolved config echoed back.

use clap::{Args, Parser, Subcommand};
use conedido::density::Density;
use conedido::pde::{compare, solve_fd, MatrixField, ProblemSpec};
use conedido::profile::{random_profile, ProfileQuadrature, RadialProfile};
use conedido::rearrange::{decreasing_rearrangement, gradient_qnorm, star_rearrangement, GridFunction};
use conedido::search::{minimize_perimeter_traced, variation_report, FlowOptions};
use conedido::spectral::{
    hardy_constant_forms, hardy_test_sequence, neumann_eigenvalue, HardySpec,
};
use conedido::suite::acceptance_suite;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};
use std::collections::HashMap;
use std::f64::consts::PI;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_INVARIANT: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

#[derive(Parser)]
#[command(name = "conedido", version, about = "Weighted isoperimetric inequalities in half-spaces")]
struct Cli {
    /// flat key=value config file; command-line flags override its entries
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// write the JSON report here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct DensityArgs {
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    k: Option<f64>,
    #[arg(long)]
    c: Option<f64>,
    /// ambient dimension
    #[arg(long = "dim")]
    dim: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Isoperimetric profile and half-ball quantities
    Profile {
        #[command(flatten)]
        density: DensityArgs,
        /// target measure; reports I_mu(tau) and r*
        #[arg(long)]
        tau: Option<f64>,
        /// half-ball radius; reports measure and perimeter
        #[arg(long)]
        radius: Option<f64>,
    },
    /// Constrained perimeter gradient flow from a perturbed half-disk
    Minimize {
        #[command(flatten)]
        density: DensityArgs,
        /// angular panels
        #[arg(long)]
        nodes: Option<usize>,
        /// base radius of the initial profile
        #[arg(long)]
        radius: Option<f64>,
        /// initial perturbation modes, e.g. "2:0.3,3:0.1"
        #[arg(long)]
        modes: Option<String>,
        /// measure constraint; defaults to the initial profile's measure
        #[arg(long)]
        target: Option<f64>,
        #[arg(long)]
        eta: Option<f64>,
        #[arg(long)]
        max_iters: Option<usize>,
        #[arg(long)]
        tol: Option<f64>,
        /// write an iteration trace CSV here
        #[arg(long)]
        trace: Option<PathBuf>,
        /// write the final profile CSV here
        #[arg(long)]
        profile_out: Option<PathBuf>,
    },
    /// Isoperimetric margin of a stored or random starlike profile
    Verify {
        #[command(flatten)]
        density: DensityArgs,
        /// profile CSV produced by minimize; omit for a random suite
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        nodes: Option<usize>,
        #[arg(long)]
        count: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        amplitude: Option<f64>,
        /// also report Euler residual and second-variation spot checks
        #[arg(long)]
        variation: bool,
    },
    /// Decreasing and star rearrangements of a grid function
    Rearrange {
        #[command(flatten)]
        density: DensityArgs,
        /// grid function CSV; omit for the built-in boundary-vanishing sample
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        radii: Option<usize>,
        #[arg(long)]
        angles: Option<usize>,
        #[arg(long)]
        r_d: Option<f64>,
        /// write the distribution table CSV here
        #[arg(long)]
        table_out: Option<PathBuf>,
        /// write the star rearrangement grid CSV here
        #[arg(long)]
        star_out: Option<PathBuf>,
    },
    /// Degenerate elliptic solve and Talenti-type comparison
    Compare {
        #[command(flatten)]
        density: DensityArgs,
        #[arg(long)]
        grid: Option<usize>,
        /// ellipticity bound Lambda
        #[arg(long)]
        lambda: Option<f64>,
        /// coefficient matrix: iso, axis, or rot
        #[arg(long)]
        matrix: Option<String>,
        /// rotation angle for matrix=rot
        #[arg(long)]
        angle: Option<f64>,
    },
    /// Weighted Neumann eigenvalue on the half-circle
    Eigen {
        #[command(flatten)]
        density: DensityArgs,
        #[arg(long)]
        nodes: Option<usize>,
    },
    /// Sharp Hardy constant and the extremal sequence
    Hardy {
        #[command(flatten)]
        density: DensityArgs,
        /// |x|^m weight exponent
        #[arg(long)]
        m: Option<u32>,
        /// sequence indices, e.g. "4,8,16,32"
        #[arg(long)]
        sequence: Option<String>,
    },
    /// Verification batteries
    Suite {
        /// battery name; only "acceptance" is defined
        #[arg(long)]
        preset: Option<String>,
    },
}

struct Ctx {
    file: HashMap<String, String>,
}

impl Ctx {
    fn load(path: &Option<PathBuf>) -> Result<Self, String> {
        let mut file = HashMap::new();
        if let Some(p) = path {
            let text = fs::read_to_string(p).map_err(|e| format!("config {}: {e}", p.display()))?;
            for (lineno, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let (key, value) = line
                    .split_once('=')
                    .ok_or_else(|| format!("config {} line {}: expected key=value", p.display(), lineno + 1))?;
                file.insert(key.trim().to_string(), value.trim().to_string());
            }
        }
        Ok(Ctx { file })
    }

    fn get<T: std::str::FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T, String> {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.file.get(key) {
            Some(s) => s.parse().map_err(|_| format!("config key {key}: cannot parse {s:?}")),
            None => Ok(default),
        }
    }

    fn get_opt<T: std::str::FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, String> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.file.get(key) {
            Some(s) => s
                .parse()
                .map(Some)
                .map_err(|_| format!("config key {key}: cannot parse {s:?}")),
            None => Ok(None),
        }
    }

    fn density(&self, args: &DensityArgs) -> Result<(Density, Map<String, Value>), String> {
        let a = self.get(args.a, "a", 1.0)?;
        let k = self.get(args.k, "k", 0.0)?;
        let c = self.get(args.c, "c", 0.0)?;
        let dim = self.get(args.dim, "dim", 2)?;
        let d = Density::new(a, k, c, dim, conedido::density::Domain::HalfSpace)
            .map_err(|e| e.to_string())?;
        let mut echo = Map::new();
        echo.insert("a".into(), json!(a));
        echo.insert("k".into(), json!(k));
        echo.insert("c".into(), json!(c));
        echo.insert("dim".into(), json!(dim));
        Ok((d, echo))
    }
}

fn emit(out: &Option<PathBuf>, report: &Value) -> Result<(), String> {
    let text = serde_json::to_string_pretty(report).map_err(|e| e.to_string())?;
    match out {
        Some(p) => fs::write(p, text + "\n").map_err(|e| format!("write {}: {e}", p.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn parse_modes(s: &str) -> Result<Vec<(usize, f64)>, String> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let (m, a) = p
                .split_once(':')
                .ok_or_else(|| format!("mode {p:?}: expected mode:amplitude"))?;
            Ok((
                m.trim().parse().map_err(|_| format!("mode index {m:?}"))?,
                a.trim().parse().map_err(|_| format!("mode amplitude {a:?}"))?,
            ))
        })
        .collect()
}

fn report_shell(command: &str, config: Map<String, Value>) -> Map<String, Value> {
    let mut root = Map::new();
    root.insert("command".into(), json!(command));
    root.insert("config".into(), Value::Object(config));
    root
}

/// Numerical-failure errors get exit code 3, config errors exit code 2.
enum Failure {
    Config(String),
    Numerical(String),
    Invariant,
}

impl From<conedido::error::Error> for Failure {
    fn from(e: conedido::error::Error) -> Self {
        match e {
            conedido::error::Error::Precondition(_) | conedido::error::Error::Domain(_) => {
                Failure::Config(e.to_string())
            }
            _ => Failure::Numerical(e.to_string()),
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let ctx = Ctx::load(&cli.config).map_err(Failure::Config)?;
    match &cli.command {
        Command::Profile { density, tau, radius } => {
            let (d, mut echo) = ctx.density(density).map_err(Failure::Config)?;
            let tau = ctx.get_opt(*tau, "tau").map_err(Failure::Config)?;
            let radius = ctx.get_opt(*radius, "radius").map_err(Failure::Config)?;
            let mut root;
            match (tau, radius) {
                (Some(tau), None) => {
                    echo.insert("tau".into(), json!(tau));
                    root = report_shell("profile", echo);
                    root.insert("i_mu".into(), json!(d.isoperimetric_profile(tau)?));
                    root.insert("r_star".into(), json!(d.star_radius(tau)?));
                }
                (None, Some(r)) => {
                    echo.insert("radius".into(), json!(r));
                    root = report_shell("profile", echo);
                    let m = d.half_ball_measure(r)?;
                    root.insert("measure".into(), json!(m));
                    root.insert("perimeter".into(), json!(d.half_ball_perimeter(r)?));
                    root.insert("i_mu_roundtrip".into(), json!(d.isoperimetric_profile(m)?));
                }
                _ => {
                    return Err(Failure::Config("give exactly one of --tau or --radius".into()));
                }
            }
            emit(&cli.out, &Value::Object(root)).map_err(Failure::Config)
        }
        Command::Minimize {
            density,
            nodes,
            radius,
            modes,
            target,
            eta,
            max_iters,
            tol,
            trace,
            profile_out,
        } => {
            let (d, mut echo) = ctx.density(density).map_err(Failure::Config)?;
            let nodes = ctx.get(*nodes, "nodes", 512).map_err(Failure::Config)?;
            let radius = ctx.get(*radius, "radius", 1.0).map_err(Failure::Config)?;
            let modes_s = ctx
                .get(modes.clone(), "modes", "2:0.3".to_string())
                .map_err(Failure::Config)?;
            let modes = parse_modes(&modes_s).map_err(Failure::Config)?;
            let mut opts = FlowOptions::default();
            opts.eta = ctx.get(*eta, "eta", opts.eta).map_err(Failure::Config)?;
            opts.max_iters = ctx
                .get(*max_iters, "max_iters", opts.max_iters)
                .map_err(Failure::Config)?;
            opts.tol = ctx.get(*tol, "tol", opts.tol).map_err(Failure::Config)?;
            echo.insert("nodes".into(), json!(nodes));
            echo.insert("radius".into(), json!(radius));
            echo.insert("modes".into(), json!(modes_s));
            echo.insert("eta".into(), json!(opts.eta));
            echo.insert("max_iters".into(), json!(opts.max_iters));
            echo.insert("tol".into(), json!(opts.tol));
            let rho: Vec<f64> = (0..=nodes)
                .map(|j| {
                    let t = PI * j as f64 / nodes as f64;
                    radius
                        * (1.0
                            + modes
                                .iter()
                                .map(|&(m, a)| a * (m as f64 * t).sin())
                                .sum::<f64>())
                })
                .collect();
            let p0 = RadialProfile::new(rho, d)?;
            let q = ProfileQuadrature::new(&d, nodes)?;
            let target = match ctx.get_opt(*target, "target").map_err(Failure::Config)? {
                Some(t) => t,
                None => q.measure(&p0.rho),
            };
            echo.insert("target".into(), json!(target));
            let mut root = report_shell("minimize", echo);
            let mut trace_buf: Vec<u8> = Vec::new();
            let res = minimize_perimeter_traced(
                &d,
                target,
                &p0,
                &opts,
                if trace.is_some() { Some(&mut trace_buf) } else { None },
            )?;
            if let Some(path) = trace {
                fs::write(path, trace_buf)
                    .map_err(|e| Failure::Config(format!("write {}: {e}", path.display())))?;
            }
            if let Some(path) = profile_out {
                let mut buf = Vec::new();
                res.profile
                    .to_csv(&mut buf)
                    .map_err(|e| Failure::Numerical(e.to_string()))?;
                fs::write(path, buf)
                    .map_err(|e| Failure::Config(format!("write {}: {e}", path.display())))?;
            }
            let rstar = d.star_radius(target)?;
            let sup = res
                .profile
                .rho
                .iter()
                .fold(0.0f64, |a, &x| a.max((x - rstar).abs()))
                / rstar;
            root.insert("converged".into(), json!(res.converged));
            root.insert("iterations".into(), json!(res.iterations));
            root.insert("perimeter".into(), json!(res.perimeter));
            root.insert("ideal_perimeter".into(), json!(d.isoperimetric_profile(target)?));
            root.insert("measure".into(), json!(res.measure));
            root.insert("r_star".into(), json!(rstar));
            root.insert("sup_deviation".into(), json!(sup));
            emit(&cli.out, &Value::Object(root)).map_err(Failure::Config)?;
            if res.converged {
                Ok(())
            } else {
                Err(Failure::Invariant)
            }
        }
        Command::Verify {
            density,
            input,
            nodes,
            count,
            seed,
            amplitude,
            variation,
        } => {
            let (d, mut echo) = ctx.density(density).map_err(Failure::Config)?;
            let mut root;
            let mut min_margin = f64::INFINITY;
            if let Some(path) = input {
                echo.insert("input".into(), json!(path.display().to_string()));
                root = report_shell("verify", echo);
                let text = fs::File::open(path)
                    .map_err(|e| Failure::Config(format!("open {}: {e}", path.display())))?;
                let p = RadialProfile::from_csv(std::io::BufReader::new(text), d)?;
                let q = ProfileQuadrature::new(&d, p.panels())?;
                let m = q.measure(&p.rho);
                let per = q.perimeter(&p.rho);
                let ideal = d.isoperimetric_profile(m)?;
                min_margin = (per - ideal) / ideal;
                root.insert("measure".into(), json!(m));
                root.insert("perimeter".into(), json!(per));
                root.insert("ideal_perimeter".into(), json!(ideal));
                root.insert("margin".into(), json!(min_margin));
                if *variation {
                    let mut rng = ChaCha8Rng::seed_from_u64(1);
                    let dirs: Vec<(String, Vec<f64>)> = (0..10)
                        .map(|i| {
                            use rand::Rng;
                            (
                                format!("random{i}"),
                                (0..=p.panels()).map(|_| rng.gen_range(-1.0..1.0)).collect(),
                            )
                        })
                        .collect();
                    let rep = variation_report(&p, &dirs)?;
                    root.insert("gamma".into(), json!(rep.gamma));
                    root.insert("euler_residual_norm".into(), json!(rep.euler_residual_norm));
                    root.insert(
                        "second_variation_min".into(),
                        json!(rep
                            .second_variation_values
                            .iter()
                            .map(|&(_, v)| v)
                            .fold(f64::INFINITY, f64::min)),
                    );
                }
            } else {
                let nodes = ctx.get(*nodes, "nodes", 256).map_err(Failure::Config)?;
                let count = ctx.get(*count, "count", 1000).map_err(Failure::Config)?;
                let seed = ctx.get(*seed, "seed", 0).map_err(Failure::Config)?;
                let amplitude = ctx.get(*amplitude, "amplitude", 0.3).map_err(Failure::Config)?;
                echo.insert("nodes".into(), json!(nodes));
                echo.insert("count".into(), json!(count));
                echo.insert("seed".into(), json!(seed));
                echo.insert("amplitude".into(), json!(amplitude));
                root = report_shell("verify", echo);
                let q = ProfileQuadrature::new(&d, nodes)?;
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                for _ in 0..count {
                    let p = random_profile(&d, nodes, 1.0, amplitude, &mut rng)?;
                    let m = q.measure(&p.rho);
                    let margin = (q.perimeter(&p.rho) - d.isoperimetric_profile(m)?)
                        / d.isoperimetric_profile(m)?;
                    min_margin = min_margin.min(margin);
                }
                root.insert("count".into(), json!(count));
                root.insert("min_margin".into(), json!(min_margin));
            }
            let passed = min_margin >= -1e-6;
            root.insert("passed".into(), json!(passed));
            emit(&cli.out, &Value::Object(root)).map_err(Failure::Config)?;
            if passed {
                Ok(())
            } else {
                Err(Failure::Invariant)
            }
        }
        Command::Rearrange {
            density,
            input,
            radii,
            angles,
            r_d,
            table_out,
            star_out,
        } => {
            let (d, mut echo) = ctx.density(density).map_err(Failure::Config)?;
            let radii = ctx.get(*radii, "radii", 256).map_err(Failure::Config)?;
            let angles = ctx.get(*angles, "angles", 256).map_err(Failure::Config)?;
            let r_d = ctx.get(*r_d, "r_d", 1.0).map_err(Failure::Config)?;
            let u = if let Some(path) = input {
                echo.insert("input".into(), json!(path.display().to_string()));
                let f = fs::File::open(path)
                    .map_err(|e| Failure::Config(format!("open {}: {e}", path.display())))?;
                GridFunction::from_csv(std::io::BufReader::new(f))?
            } else {
                echo.insert("radii".into(), json!(radii));
                echo.insert("angles".into(), json!(angles));
                echo.insert("r_d".into(), json!(r_d));
                GridFunction::sample(radii, angles, r_d, d, |r, t| {
                    (1.0 - (r / r_d) * (r / r_d)) * (1.0 + 0.3 * t.sin())
                })?
            };
            let mut root = report_shell("rearrange", echo);
            let table = decreasing_rearrangement(&u);
            let s = star_rearrangement(&u)?;
            let (l2, l2s) = (u.integrate(|x| x * x), s.integrate(|x| x * x));
            let (e, es) = (gradient_qnorm(&u, 2.0)?, gradient_qnorm(&s, 2.0)?);
            root.insert("total_measure".into(), json!(table.total_measure()));
            root.insert("max_value".into(), json!(table.max_value()));
            root.insert("l2_input".into(), json!(l2));
            root.insert("l2_star".into(), json!(l2s));
            root.insert(
                "equimeasurability_gap".into(),
                json!((l2 - l2s).abs() / l2.max(1e-300)),
            );
            root.insert("dirichlet_input".into(), json!(e));
            root.insert("dirichlet_star".into(), json!(es));
            root.insert("polya_szego_margin".into(), json!((e - es) / e.max(1e-300)));
            if let Some(path) = table_out {
                let mut buf = Vec::new();
                table.to_csv(&mut buf).map_err(|e| Failure::Numerical(e.to_string()))?;
                fs::write(path, buf)
                    .map_err(|e| Failure::Config(format!("write {}: {e}", path.display())))?;
            }
            if let Some(path) = star_out {
                let mut buf = Vec::new();
                s.to_csv(&mut buf).map_err(|e| Failure::Numerical(e.to_string()))?;
                fs::write(path, buf)
                    .map_err(|e| Failure::Config(format!("write {}: {e}", path.display())))?;
            }
            emit(&cli.out, &Value::Object(root)).map_err(Failure::Config)
        }
        Command::Compare { density, grid, lambda, matrix, angle } => {
            let (d, mut echo) = ctx.density(density).map_err(Failure::Config)?;
            let grid = ctx.get(*grid, "grid", 96).map_err(Failure::Config)?;
            let lambda = ctx.get(*lambda, "lambda", 1.0).map_err(Failure::Config)?;
            let matrix_s = ctx
                .get(matrix.clone(), "matrix", "iso".to_string())
                .map_err(Failure::Config)?;
            let angle = ctx.get(*angle, "angle", 0.0).map_err(Failure::Config)?;
            let field = match matrix_s.as_str() {
                "iso" => MatrixField::Isotropic,
                "axis" => MatrixField::AxisAligned { lambda },
                "rot" => MatrixField::Rotated { lambda, angle },
                other => {
                    return Err(Failure::Config(format!(
                        "matrix must be iso, axis, or rot, got {other:?}"
                    )))
                }
            };
            echo.insert("grid".into(), json!(grid));
            echo.insert("lambda".into(), json!(lambda));
            echo.insert("matrix".into(), json!(matrix_s));
            echo.insert("angle".into(), json!(angle));
            let mut root = report_shell("compare", echo);
            let src = GridFunction::sample(grid, grid, 1.0, d, |_, _| 1.0)?;
            let p = ProblemSpec::new(d, field, lambda.max(1.0), src)?;
            let u = solve_fd(&p)?;
            let rep = compare(&u, &p)?;
            root.insert("u_center".into(), json!(u.value(0, 0)));
            root.insert("pointwise_margin".into(), json!(rep.pointwise_margin));
            let mut qn = Map::new();
            for &(q, m) in &rep.qnorm_margins {
                qn.insert(format!("{q}"), json!(m));
            }
            root.insert("qnorm_margins".into(), Value::Object(qn));
            root.insert("scale".into(), json!(rep.scale));
            let passed = rep.passes(1e-3);
            root.insert("passed".into(), json!(passed));
            emit(&cli.out, &Value::Object(root)).map_err(Failure::Config)?;
            if passed {
                Ok(())
            } else {
                Err(Failure::Invariant)
            }
        }
        Command::Eigen { density, nodes } => {
            let (d, mut echo) = ctx.density(density).map_err(Failure::Config)?;
            let nodes = ctx.get(*nodes, "nodes", 4096).map_err(Failure::Config)?;
            echo.insert("nodes".into(), json!(nodes));
            let mut root = report_shell("eigen", echo);
            let e = neumann_eigenvalue(d.k, nodes)?;
            root.insert("lambda1".into(), json!(e.lambda1));
            root.insert("expected".into(), json!(1.0 + d.k));
            root.insert("error".into(), json!((e.lambda1 - 1.0 - d.k).abs()));
            root.insert("mean_defect".into(), json!(e.weighted_mean_defect(d.k)));
            emit(&cli.out, &Value::Object(root)).map_err(Failure::Config)
        }
        Command::Hardy { density, m, sequence } => {
            let (d, mut echo) = ctx.density(density).map_err(Failure::Config)?;
            let m = ctx.get(*m, "m", 0).map_err(Failure::Config)?;
            let seq_s = ctx
                .get(sequence.clone(), "sequence", "4,8,16,32".to_string())
                .map_err(Failure::Config)?;
            let seq: Vec<usize> = seq_s
                .split(',')
                .map(|s| s.trim().parse().map_err(|_| format!("sequence entry {s:?}")))
                .collect::<Result<_, _>>()
                .map_err(Failure::Config)?;
            echo.insert("m".into(), json!(m));
            echo.insert("sequence".into(), json!(seq_s));
            let mut root = report_shell("hardy", echo);
            let spec = HardySpec::new(d.n, d.k, m)?;
            let (f1, f2) = hardy_constant_forms(&spec);
            root.insert("constant".into(), json!(f1));
            root.insert("constant_alt_form".into(), json!(f2));
            let mut quotients = Map::new();
            let mut last = f64::NAN;
            for &n in &seq {
                last = hardy_test_sequence(&spec, n)?;
                quotients.insert(format!("{n}"), json!(last));
            }
            root.insert("quotients".into(), Value::Object(quotients));
            root.insert("final_excess".into(), json!((last - f1) / f1));
            emit(&cli.out, &Value::Object(root)).map_err(Failure::Config)
        }
        Command::Suite { preset } => {
            let preset = ctx
                .get(preset.clone(), "preset", "acceptance".to_string())
                .map_err(Failure::Config)?;
            if preset != "acceptance" {
                return Err(Failure::Config(format!("unknown preset {preset:?}")));
            }
            let results = acceptance_suite();
            let mut echo = Map::new();
            echo.insert("preset".into(), json!(preset));
            let mut root = report_shell("suite", echo);
            let mut items = Vec::new();
            let mut all_pass = true;
            for r in &results {
                eprintln!("{}", r.line());
                all_pass &= r.passed;
                items.push(json!({
                    "index": r.index,
                    "name": r.name,
                    "passed": r.passed,
                    "detail": r.detail,
                }));
            }
            root.insert("criteria".into(), Value::Array(items));
            root.insert("passed".into(), json!(all_pass));
            emit(&cli.out, &Value::Object(root)).map_err(Failure::Config)?;
            if all_pass {
                Ok(())
            } else {
                Err(Failure::Invariant)
            }
        }
    }
}

fn main() -> ExitCode {
    if let Ok(v) = std::env::var("CONEDIDO_THREADS") {
        match v.parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => {
                eprintln!("error: CONEDIDO_THREADS must be a positive integer, got {v:?}");
                return ExitCode::from(EXIT_CONFIG);
            }
        }
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Invariant) => ExitCode::from(EXIT_INVARIANT),
        Err(Failure::Config(msg)) => {
            let _ = writeln!(std::io::stderr(), "error: {msg}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(Failure::Numerical(msg)) => {
            let _ = writeln!(std::io::stderr(), "error: {msg}");
            ExitCode::from(EXIT_NUMERICAL)
        }
    }
}
