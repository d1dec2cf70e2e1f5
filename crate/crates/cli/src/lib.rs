//! Command-line front end for `convdual`.
//!
//! Every command prints one JSON document (or a CSV cloud) and maps its
//! outcome to an exit status: 0 verified or pass, 1 falsified or fail,
//! 2 inconclusive, 3 usage or input error.

pub mod expr;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use convdual::contour::{min_modulus_on_circle, winding_number};
use convdual::duality::{
    functional_image, image_via_border, in_dual, in_dual_hull, in_perp, in_t, verify_theorem,
    CheckStatus, Functional, RegionCloud, Theorem,
};
use convdual::family::border_elements;
use convdual::{Certificate, Config, FamilySpec, ParamGrid, Status, TruncSeries};
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSIFIED: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "convdual", version, about = "Certified Hadamard-convolution duality checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Options,
}

#[derive(Debug, Args)]
struct Options {
    /// Family spec file
    #[arg(long, global = true)]
    family: Option<PathBuf>,
    /// Kernel or series mini-expression
    #[arg(long, global = true, allow_hyphen_values = true)]
    kernel: Option<String>,
    /// Kernel family spec file
    #[arg(long, global = true)]
    kernels: Option<PathBuf>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    series: Option<String>,
    #[arg(long, global = true)]
    theorem: Option<String>,
    /// Parameter grid as RADIALxANGULAR, e.g. 8x16
    #[arg(long, global = true)]
    grid: Option<String>,
    /// Depth of the radius schedule 1 - 2^-j (4..=20)
    #[arg(long, global = true)]
    mesh_depth: Option<u32>,
    /// Truncation degree (8..=4096)
    #[arg(long, global = true)]
    trunc: Option<usize>,
    /// Zero-witness tolerance, in (0, 1e-3]
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true)]
    radius: Option<f64>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, Subcommand)]
enum Command {
    /// Hadamard product of --series and --kernel
    Convolve,
    /// Winding number of --series on |z| = --radius
    Zeros,
    /// Is --kernel in the dual of --family?
    DualCheck,
    /// Is --kernel in the transpose of --family?
    TCheck,
    /// Is --kernel in the perp of --family?
    PerpCheck,
    /// Is --kernel in the dual hull of --family?
    HullCheck,
    /// Image cloud of --family under the functional --kernel
    Image,
    /// Border elements of --family, or their circle images with --kernel
    Border,
    /// Run the verifier selected by --theorem
    Verify,
}

/// A failed run: usage and input errors exit with 3.
struct Usage(String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.to_string())
    }
}

struct Outcome {
    body: String,
    code: i32,
}

/// Run the command line `args` (including the program name).
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli) {
        Ok(out) => {
            let written = match &cli.opts.out {
                Some(path) => fs::write(path, &out.body).map_err(|e| format!("{}: {e}", path.display())),
                None => stdout.write_all(out.body.as_bytes()).map_err(|e| e.to_string()),
            };
            match written {
                Ok(()) => out.code,
                Err(e) => {
                    let _ = writeln!(stderr, "error: {e}");
                    EXIT_USAGE
                }
            }
        }
        Err(Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn execute(cli: &Cli) -> Result<Outcome, Usage> {
    let o = &cli.opts;
    let cfg = config(o)?;
    if o.format == Format::Csv && !matches!(cli.command, Command::Image | Command::Border) {
        return Err(Usage("--format csv is only available for image and border".into()));
    }
    let name = command_name(cli.command);
    match cli.command {
        Command::Convolve => {
            let f = series(o, &cfg)?;
            let g = kernel(o, &cfg)?;
            let h = f.convolve(&g);
            Ok(json_outcome(json!({ "command": name, "series": h }), EXIT_OK))
        }
        Command::Zeros => zeros(o, &cfg),
        Command::DualCheck | Command::TCheck | Command::PerpCheck | Command::HullCheck => {
            let v = family(o)?;
            let g = kernel(o, &cfg)?;
            let cert = match cli.command {
                Command::DualCheck => in_dual(&g, &v, &cfg)?,
                Command::TCheck => in_t(&g, &v, &cfg)?,
                Command::PerpCheck => in_perp(&g, &v, &cfg)?,
                _ => {
                    let kernels = kernel_family(o)?;
                    in_dual_hull(&g, &v, &kernels, &cfg)?
                }
            };
            Ok(certificate_outcome(name, &cert))
        }
        Command::Image => {
            let v = family(o)?;
            let lambda = Functional::new(kernel(o, &cfg)?, o.kernel.clone().unwrap_or_default());
            let cloud = functional_image(&lambda, &v, &cfg)?;
            Ok(cloud_outcome(name, o.format, &cloud))
        }
        Command::Border => {
            let v = family(o)?;
            if o.kernel.is_some() {
                let lambda = Functional::new(kernel(o, &cfg)?, o.kernel.clone().unwrap_or_default());
                let cloud = image_via_border(&lambda, &v, &cfg)?;
                return Ok(cloud_outcome(name, o.format, &cloud));
            }
            if o.format == Format::Csv {
                return Err(Usage("border without --kernel has no CSV form".into()));
            }
            let bor = border_elements(&v)?;
            Ok(json_outcome(json!({ "command": name, "family": bor }), EXIT_OK))
        }
        Command::Verify => {
            let theorem: Theorem = o
                .theorem
                .as_deref()
                .ok_or_else(|| Usage("verify needs --theorem".into()))?
                .parse()?;
            let v = family(o)?;
            let kernels = o.kernels.as_deref().map(read_family).transpose()?;
            let report = verify_theorem(theorem, &v, kernels.as_ref(), &cfg)?;
            let code = match report.summary {
                CheckStatus::Pass => EXIT_OK,
                CheckStatus::Fail => EXIT_FALSIFIED,
                CheckStatus::Inconclusive => EXIT_INCONCLUSIVE,
            };
            Ok(json_outcome(json!({ "command": name, "report": report }), code))
        }
    }
}

fn command_name(c: Command) -> &'static str {
    match c {
        Command::Convolve => "convolve",
        Command::Zeros => "zeros",
        Command::DualCheck => "dual-check",
        Command::TCheck => "t-check",
        Command::PerpCheck => "perp-check",
        Command::HullCheck => "hull-check",
        Command::Image => "image",
        Command::Border => "border",
        Command::Verify => "verify",
    }
}

fn config(o: &Options) -> Result<Config, Usage> {
    let mut cfg = Config::default();
    if let Some(n) = o.trunc {
        if !(8..=4096).contains(&n) {
            return Err(Usage(format!("--trunc {n} outside 8..=4096")));
        }
        cfg.trunc = n;
    }
    if let Some(j) = o.mesh_depth {
        if !(4..=20).contains(&j) {
            return Err(Usage(format!("--mesh-depth {j} outside 4..=20")));
        }
        cfg.contour.schedule_depth = j;
    }
    if let Some(t) = o.tol {
        if !(t > 0.0 && t <= 1e-3) {
            return Err(Usage(format!("--tol {t} outside (0, 1e-3]")));
        }
        cfg.contour.witness_tol = t;
        cfg.contour.margin_tol = cfg.contour.margin_tol.max(t);
    }
    if let Some(g) = &o.grid {
        cfg.grid = parse_grid(g)?;
    }
    Ok(cfg)
}

fn parse_grid(text: &str) -> Result<ParamGrid, Usage> {
    let bad = || Usage(format!("--grid '{text}': expected RADIALxANGULAR with 1..=256 x 3..=1024"));
    let (r, a) = text.split_once(['x', 'X', '×']).ok_or_else(bad)?;
    let r: usize = r.trim().parse().map_err(|_| bad())?;
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    if !(1..=256).contains(&r) || !(3..=1024).contains(&a) {
        return Err(bad());
    }
    Ok(ParamGrid::new(r, a))
}

fn read_family(path: &Path) -> Result<FamilySpec, Usage> {
    let bytes = fs::read(path).map_err(|e| Usage(format!("{}: {e}", path.display())))?;
    let text = String::from_utf8(bytes).map_err(|e| Usage(format!("{}: not UTF-8 ({e})", path.display())))?;
    FamilySpec::from_json(&text).map_err(|e| Usage(format!("{}: {e}", path.display())))
}

fn family(o: &Options) -> Result<FamilySpec, Usage> {
    let path = o.family.as_deref().ok_or_else(|| Usage("missing --family".into()))?;
    read_family(path)
}

fn kernel_family(o: &Options) -> Result<FamilySpec, Usage> {
    match &o.kernels {
        Some(path) => read_family(path),
        None => Ok(convdual::duality::default_kernel_family()),
    }
}

fn kernel(o: &Options, cfg: &Config) -> Result<TruncSeries, Usage> {
    let text = o.kernel.as_deref().ok_or_else(|| Usage("missing --kernel".into()))?;
    expr::parse_series(text, cfg.trunc).map_err(|e| Usage(format!("--kernel: {e}")))
}

fn series(o: &Options, cfg: &Config) -> Result<TruncSeries, Usage> {
    let text = o.series.as_deref().ok_or_else(|| Usage("missing --series".into()))?;
    expr::parse_series(text, cfg.trunc).map_err(|e| Usage(format!("--series: {e}")))
}

fn zeros(o: &Options, cfg: &Config) -> Result<Outcome, Usage> {
    let f = series(o, cfg)?;
    let r = o.radius.ok_or_else(|| Usage("zeros needs --radius".into()))?;
    if !(r > 0.0 && r.is_finite()) {
        return Err(Usage(format!("--radius {r} must be positive")));
    }
    if r >= f.tail_radius() {
        return Err(Usage(format!(
            "--radius {r} reaches the tail radius {} of the series",
            f.tail_radius()
        )));
    }
    let min = min_modulus_on_circle(&f, r, &cfg.contour).ok();
    let lower = min.map(|m| m.lower);
    Ok(match winding_number(&f, r, &cfg.contour) {
        Ok(w) => json_outcome(
            json!({ "command": "zeros", "radius": r, "winding": w, "min_modulus_lower": lower }),
            EXIT_OK,
        ),
        Err(fail) => json_outcome(
            json!({
                "command": "zeros",
                "radius": r,
                "winding": Value::Null,
                "reason": fail.reason,
                "zero": fail.zero.map(|z| [z.re, z.im]),
            }),
            EXIT_INCONCLUSIVE,
        ),
    })
}

fn status_code(s: Status) -> i32 {
    match s {
        Status::Verified => EXIT_OK,
        Status::Falsified => EXIT_FALSIFIED,
        Status::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

fn certificate_outcome(name: &str, cert: &Certificate) -> Outcome {
    json_outcome(json!({ "command": name, "certificate": cert }), status_code(cert.status))
}

fn cloud_outcome(name: &str, format: Format, cloud: &RegionCloud) -> Outcome {
    match format {
        Format::Csv => Outcome {
            body: cloud.to_csv(),
            code: EXIT_OK,
        },
        Format::Json => json_outcome(json!({ "command": name, "cloud": cloud }), EXIT_OK),
    }
}

fn json_outcome(v: Value, code: i32) -> Outcome {
    let mut body = serde_json::to_string_pretty(&v).expect("reports serialize");
    body.push('\n');
    Outcome { body, code }
}
