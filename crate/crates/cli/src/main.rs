use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use orbitx::algebra::AlgebraId;
use orbitx::convolution::{builtin_kernel, convolve_spatial, convolve_spectral, Kernel, KernelName};
use orbitx::formats::{grid_info_csv, label_info_csv, Record};
use orbitx::grids::{Grid, GridKind};
use orbitx::imaging::{
    baseline_r2_filter, filter_image_with, load_image, make_hexagon_test_image, save_image, Image, R2Kernel,
    ReassemblyMode,
};
use orbitx::transforms::{forward, inverse_grid};
use orbitx::verify::{verify_grid, Check};

const EXIT_USAGE: u8 = 1;
const EXIT_DATA: u8 = 2;
const EXIT_VERIFY: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "orbitx", version, about = "Weyl-group orbit transforms, orbit convolutions and image filtering")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the grid points (or labels) with their weights
    GridInfo {
        #[command(flatten)]
        grid: GridArgs,
        /// List the transform labels instead of the points
        #[arg(long)]
        labels: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Forward transform of a discrete function file
    Transform {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Inverse transform of a spectrum file back onto the grid
    InvTransform {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Orbit convolution of a discrete function with a kernel
    Convolve {
        #[command(flatten)]
        input: InputArgs,
        /// Builtin kernel name (mean, sharpen, edge) or a kernel file
        #[arg(long)]
        kernel: String,
        #[arg(long, value_enum, default_value_t = ConvMethod::Spectral)]
        method: ConvMethod,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Check orthogonality, round trip, Parseval and the convolution theorem
    Verify {
        /// Algebra to check (all when omitted)
        #[arg(long)]
        algebra: Option<AlgebraId>,
        /// Grid density (1 to 6 when omitted)
        #[arg(long)]
        m: Option<u32>,
        /// Grid kind (both when omitted)
        #[arg(long)]
        kind: Option<GridKind>,
        /// Random inputs per grid
        #[arg(long, default_value_t = 3)]
        trials: usize,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        /// Multiplies every tolerance
        #[arg(long, default_value_t = 1.0, hide = true)]
        tolerance_scale: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Filter a square PGM image
    FilterImage {
        #[arg(long, default_value = "c2")]
        algebra: AlgebraId,
        /// Grid density (image side when omitted)
        #[arg(long)]
        m: Option<u32>,
        #[arg(long)]
        kernel: KernelName,
        /// Orbit convolution or the planar 3x3 baseline
        #[arg(long, value_enum, default_value_t = FilterMethod::Orbit)]
        method: FilterMethod,
        #[arg(long, value_enum, default_value_t = Reassembly::Barycentric)]
        reassembly: Reassembly,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write the hexagon test image and its orbit and planar filterings
    Demo {
        #[arg(long, default_value = "a2")]
        algebra: AlgebraId,
        #[arg(long, default_value_t = 64)]
        size: usize,
        /// Grid density (image side when omitted)
        #[arg(long)]
        m: Option<u32>,
        /// Output directory
        #[arg(long, default_value = "orbitx-demo")]
        out: PathBuf,
    },
}

#[derive(Args, Debug)]
struct GridArgs {
    #[arg(long)]
    algebra: AlgebraId,
    #[arg(long)]
    m: u32,
    #[arg(long, default_value = "c")]
    kind: GridKind,
}

#[derive(Args, Debug)]
struct InputArgs {
    /// CSV or JSON input file
    #[arg(long = "in")]
    input: PathBuf,
    /// Expected algebra of the input
    #[arg(long)]
    algebra: Option<AlgebraId>,
    /// Expected grid density of the input
    #[arg(long)]
    m: Option<u32>,
    /// Expected grid kind of the input
    #[arg(long)]
    kind: Option<GridKind>,
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Output file (standard output when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
    Pgm,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ConvMethod {
    Spectral,
    Spatial,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FilterMethod {
    Orbit,
    R2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Reassembly {
    Barycentric,
    Spectral,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Data(String),
    Verify(String),
}

impl From<orbitx::Error> for Failure {
    fn from(e: orbitx::Error) -> Self {
        Failure::Data(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Data(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    let result = configure_threads().and_then(|()| run(cli.command));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Data(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_DATA)
        }
        Err(Failure::Verify(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(EXIT_VERIFY)
        }
    }
}

fn configure_threads() -> Outcome {
    let Ok(value) = std::env::var("ORBITX_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Usage(format!("ORBITX_THREADS must be a positive integer, got '{value}'")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Usage(e.to_string()))
}

fn run(command: Command) -> Outcome {
    match command {
        Command::GridInfo { grid, labels, output } => grid_info(grid, labels, output),
        Command::Transform { input, output } => transform(input, output, false),
        Command::InvTransform { input, output } => transform(input, output, true),
        Command::Convolve { input, kernel, method, output } => convolve(input, &kernel, method, output),
        Command::Verify { algebra, m, kind, trials, seed, tolerance_scale, output } => {
            verify(algebra, m, kind, trials, seed, tolerance_scale, output)
        }
        Command::FilterImage { algebra, m, kernel, method, reassembly, input, out } => {
            filter(algebra, m, kernel, method, reassembly, &input, &out)
        }
        Command::Demo { algebra, size, m, out } => demo(algebra, size, m, &out),
    }
}

fn emit(output: &OutputArgs, text: &str) -> Outcome {
    match &output.out {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn require_text_format(output: &OutputArgs) -> Outcome {
    if output.format == Format::Pgm {
        return Err(Failure::Usage("--format pgm only applies to images".into()));
    }
    Ok(())
}

fn emit_record(output: &OutputArgs, record: &Record) -> Outcome {
    let text = match output.format {
        Format::Csv => record.to_csv(),
        Format::Json => record.to_json()?,
        Format::Pgm => unreachable!("rejected before computing"),
    };
    emit(output, &text)
}

fn read_record(path: &Path) -> Result<Record, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))?;
    let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) || text.trim_start().starts_with('{');
    let record = if is_json { Record::from_json(&text) } else { Record::from_csv(&text) };
    record.map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
}

fn check_expected(input: &InputArgs, record: &Record) -> Outcome {
    let mismatch = |what: &str, want: String, got: String| {
        Failure::Data(format!("{} has {what} {got}, expected {want}", input.input.display()))
    };
    if let Some(a) = input.algebra.filter(|&a| a != record.algebra) {
        return Err(mismatch("algebra", a.to_string(), record.algebra.to_string()));
    }
    if let Some(m) = input.m.filter(|&m| m != record.m) {
        return Err(mismatch("M", m.to_string(), record.m.to_string()));
    }
    if let Some(k) = input.kind.filter(|&k| k != record.kind) {
        return Err(mismatch("kind", k.to_string(), record.kind.to_string()));
    }
    Ok(())
}

fn grid_info(args: GridArgs, labels: bool, output: OutputArgs) -> Outcome {
    require_text_format(&output)?;
    let grid = Grid::new(args.algebra, args.m, args.kind)?;
    let text = match output.format {
        Format::Csv if labels => label_info_csv(&grid),
        Format::Csv => grid_info_csv(&grid),
        _ => {
            let rows: Vec<serde_json::Value> = if labels {
                grid.labels()
                    .iter()
                    .zip(grid.weights())
                    .zip(grid.hs())
                    .map(|((l, w), h)| {
                        serde_json::json!({"t": l.base().t(), "sector": l.sector().as_str(), "weight": w, "h": h})
                    })
                    .collect()
            } else {
                let m = f64::from(args.m);
                grid.points()
                    .iter()
                    .zip(grid.lattice())
                    .zip(grid.epsilons())
                    .map(|((p, s), e)| {
                        serde_json::json!({
                            "s": p.base().s(),
                            "sector": p.sector().as_str(),
                            "x": [s[0] as f64 / m, s[1] as f64 / m],
                            "epsilon": e,
                        })
                    })
                    .collect()
            };
            let mut doc = serde_json::json!({
                "algebra": args.algebra.to_string(),
                "m": args.m,
                "kind": args.kind.to_string(),
            });
            doc[if labels { "labels" } else { "points" }] = rows.into();
            serde_json::to_string_pretty(&doc).map_err(orbitx::Error::from)? + "\n"
        }
    };
    emit(&output, &text)
}

fn transform(input: InputArgs, output: OutputArgs, inverse: bool) -> Outcome {
    require_text_format(&output)?;
    let record = read_record(&input.input)?;
    check_expected(&input, &record)?;
    let result = if inverse {
        Record::from_function(&inverse_grid(&record.to_spectrum()?)?)?
    } else {
        Record::from_spectrum(&forward(&record.to_function()?)?)?
    };
    emit_record(&output, &result)
}

fn load_kernel(arg: &str, record: &Record) -> Result<Kernel, Failure> {
    if let Ok(name) = arg.parse::<KernelName>() {
        return Ok(builtin_kernel(name, record.algebra, record.m, record.kind)?);
    }
    let path = Path::new(arg);
    if !path.exists() {
        return Err(Failure::Usage(format!("'{arg}' is neither a builtin kernel (mean, sharpen, edge) nor a file")));
    }
    let k = read_record(path)?.to_kernel()?;
    let f = &k.function;
    if (f.algebra, f.m, f.kind) != (record.algebra, record.m, record.kind) {
        return Err(Failure::Data(format!(
            "kernel lives on {} M={} {}, input on {} M={} {}",
            f.algebra, f.m, f.kind, record.algebra, record.m, record.kind
        )));
    }
    Ok(orbitx::convolution::normalize_kernel(k)?)
}

fn convolve(input: InputArgs, kernel: &str, method: ConvMethod, output: OutputArgs) -> Outcome {
    require_text_format(&output)?;
    let record = read_record(&input.input)?;
    check_expected(&input, &record)?;
    let f = record.to_function()?;
    let k = load_kernel(kernel, &record)?;
    let out = match method {
        ConvMethod::Spectral => convolve_spectral(&f, &k.function)?,
        ConvMethod::Spatial => convolve_spatial(&f, &k.function)?,
    };
    emit_record(&output, &Record::from_function(&out)?)
}

fn verify(
    algebra: Option<AlgebraId>,
    m: Option<u32>,
    kind: Option<GridKind>,
    trials: usize,
    seed: u64,
    tolerance_scale: f64,
    output: OutputArgs,
) -> Outcome {
    require_text_format(&output)?;
    if m == Some(0) {
        return Err(Failure::Usage("--m must be at least 1".into()));
    }
    let algebras = algebra.map_or(AlgebraId::ALL.to_vec(), |a| vec![a]);
    let densities: Vec<u32> = m.map_or((1..=6).collect(), |m| vec![m]);
    let kinds = kind.map_or(vec![GridKind::C, GridKind::E], |k| vec![k]);
    let mut checks: Vec<Check> = Vec::new();
    for &a in &algebras {
        for &k in &kinds {
            for &m in &densities {
                for mut c in verify_grid(a, m, k, trials.max(1), seed)? {
                    c.tolerance *= tolerance_scale;
                    c.passed = c.measured <= c.tolerance;
                    checks.push(c);
                }
            }
        }
    }
    let text = match output.format {
        Format::Json => serde_json::to_string_pretty(&checks).map_err(orbitx::Error::from)? + "\n",
        _ => {
            let mut s = String::from("check,algebra,m,kind,measured,tolerance,status\n");
            for c in &checks {
                let status = if c.passed { "pass" } else { "FAIL" };
                s += &format!("{},{},{},{},{:e},{:e},{status}\n", c.name, c.algebra, c.m, c.kind, c.measured, c.tolerance);
            }
            s
        }
    };
    emit(&output, &text)?;
    let failed: Vec<_> = checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| format!("{} on {} M={} {}", c.name, c.algebra, c.m, c.kind))
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verify(failed.join("; ")))
    }
}

fn density(m: Option<u32>, side: usize) -> Result<u32, Failure> {
    let m = m.unwrap_or_else(|| u32::try_from(side).unwrap_or(u32::MAX));
    if m == 0 {
        return Err(Failure::Usage("--m must be at least 1".into()));
    }
    Ok(m)
}

fn filter(
    algebra: AlgebraId,
    m: Option<u32>,
    kernel: KernelName,
    method: FilterMethod,
    reassembly: Reassembly,
    input: &Path,
    out: &Path,
) -> Outcome {
    let img = load_image(input).map_err(|e| Failure::Data(format!("{}: {e}", input.display())))?;
    let result = match method {
        FilterMethod::R2 => baseline_r2_filter(&img, R2Kernel::from(kernel)),
        FilterMethod::Orbit => {
            let mode = match reassembly {
                Reassembly::Barycentric => ReassemblyMode::Barycentric,
                Reassembly::Spectral => ReassemblyMode::Spectral,
            };
            filter_image_with(&img, kernel, algebra, density(m, img.width())?, mode)?
        }
    };
    save_image(&result, out)?;
    Ok(())
}

fn demo(algebra: AlgebraId, size: usize, m: Option<u32>, out: &Path) -> Outcome {
    if size < 32 {
        return Err(Failure::Usage("--size must be at least 32".into()));
    }
    let m = density(m, size)?;
    fs::create_dir_all(out)?;
    let hex = make_hexagon_test_image(size)?;
    let orbit = |img: &Image, k| filter_image_with(img, k, algebra, m, ReassemblyMode::Barycentric);
    let planar = |img: &Image, k: KernelName| baseline_r2_filter(img, R2Kernel::from(k));

    let orbit_mean = orbit(&hex, KernelName::Mean)?;
    let r2_mean = planar(&hex, KernelName::Mean);
    // sharpening is applied to the blurred image
    let outputs = [
        ("hexagon.pgm", hex.clone()),
        ("orbit_mean.pgm", orbit_mean.clone()),
        ("r2_mean.pgm", r2_mean.clone()),
        ("orbit_sharpen.pgm", orbit(&orbit_mean, KernelName::Sharpen)?),
        ("r2_sharpen.pgm", planar(&r2_mean, KernelName::Sharpen)),
        ("orbit_edge.pgm", orbit(&hex, KernelName::Edge)?),
        ("r2_edge.pgm", planar(&hex, KernelName::Edge)),
    ];
    for (name, img) in &outputs {
        let path = out.join(name);
        save_image(img, &path)?;
        log::info!("wrote {}", path.display());
        println!("{}", path.display());
    }
    Ok(())
}
