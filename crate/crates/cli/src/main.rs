use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;
use stemcalc::job::{error_report, render, run_job, Command, JobSpec, Method};
use stemcalc::{Error, ErrorClass};

/// Stem functions, spectral calculus and operator calculus over Clifford algebras.
#[derive(Parser, Debug)]
#[command(name = "stemcalc", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Product of two multivectors.
    Mul {
        a: String,
        b: String,
        #[command(flatten)]
        common: Common,
    },
    /// Spectrum, unit and idempotents of a paravector.
    Spectrum(Common),
    /// Resolvent (λ - κ)^{-1} of a paravector.
    Resolvent {
        /// Complex point as `re,im`.
        #[arg(long, value_parser = parse_lambda, allow_hyphen_values = true)]
        lambda: [f64; 2],
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate a stem function at a paravector.
    Eval(Common),
    /// Slice-regularity residual of a Cauchy transform.
    Regularity(Common),
    /// Complex spectrum of a Clifford operator, with optional membership test.
    OpSpectrum(Common),
    /// Functional calculus of a Clifford operator.
    OpEval(Common),
    /// Run invariant suites.
    Check {
        #[arg(long, default_value = "all")]
        suite: String,
        #[command(flatten)]
        common: Common,
    },
    /// Run a JSON job file.
    Job {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Direct,
    Cauchy,
    Both,
    RieszDunford,
    Slice,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Direct => Method::Direct,
            MethodArg::Cauchy => Method::Cauchy,
            MethodArg::Both => Method::Both,
            MethodArg::RieszDunford => Method::RieszDunford,
            MethodArg::Slice => Method::Slice,
        }
    }
}

#[derive(Args, Debug, Default)]
struct Common {
    /// Algebra rank.
    #[arg(short = 'n', default_value_t = 0)]
    n: usize,
    /// Function expression in `z`.
    #[arg(long = "fn", allow_hyphen_values = true)]
    function: Option<String>,
    /// Paravector argument.
    #[arg(long, allow_hyphen_values = true)]
    at: Option<String>,
    /// Alias for `--at`.
    #[arg(long, allow_hyphen_values = true)]
    paravector: Option<String>,
    /// Evaluation route.
    #[arg(long, value_enum)]
    method: Option<MethodArg>,
    /// JSON file holding a Clifford operator.
    #[arg(long)]
    matrix: Option<PathBuf>,
    /// JSON file holding a planar domain.
    #[arg(long)]
    domain: Option<PathBuf>,
    /// Initial nodes per contour circle.
    #[arg(long)]
    nodes: Option<usize>,
    /// Contour radius as a fraction of the gap to the nearest obstacle.
    #[arg(long)]
    radius_frac: Option<f64>,
    /// Finite-difference step for regularity residuals.
    #[arg(long)]
    fd_step: Option<f64>,
    /// Seed for randomized suites.
    #[arg(long)]
    seed: Option<u64>,
    /// Pass threshold for the command's residual.
    #[arg(long)]
    tol: Option<f64>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_lambda(s: &str) -> Result<[f64; 2], String> {
    let (re, im) = s.split_once(',').unwrap_or((s, "0"));
    let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("bad number {t:?}: {e}"));
    Ok([num(re)?, num(im)?])
}

fn path_value(p: Option<PathBuf>) -> Option<Value> {
    p.map(|p| Value::String(p.to_string_lossy().into_owned()))
}

impl Common {
    fn into_spec(self, command: Command) -> (JobSpec, Option<PathBuf>) {
        let mut spec = JobSpec::new(command);
        spec.n = self.n;
        spec.function = self.function;
        spec.at = self.at;
        spec.paravector = self.paravector;
        spec.method = self.method.map(Method::from);
        spec.matrix = path_value(self.matrix);
        spec.domain = path_value(self.domain);
        spec.nodes = self.nodes;
        spec.radius_frac = self.radius_frac;
        spec.fd_step = self.fd_step;
        spec.seed = self.seed;
        spec.tol = self.tol;
        (spec, self.out)
    }
}

fn exit_code(e: &Error) -> u8 {
    match e.class() {
        ErrorClass::Validation => 1,
        ErrorClass::Numeric => 2,
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::Invalid(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn build(cmd: Cmd) -> Result<(JobSpec, Option<PathBuf>, PathBuf), Error> {
    let cwd = PathBuf::from(".");
    let (spec, out) = match cmd {
        Cmd::Mul { a, b, common } => {
            let (mut spec, out) = common.into_spec(Command::Mul);
            spec.args = vec![a, b];
            (spec, out)
        }
        Cmd::Spectrum(c) => c.into_spec(Command::Spectrum),
        Cmd::Resolvent { lambda, common } => {
            let (mut spec, out) = common.into_spec(Command::Resolvent);
            spec.lambda = Some(lambda);
            (spec, out)
        }
        Cmd::Eval(c) => c.into_spec(Command::Eval),
        Cmd::Regularity(c) => c.into_spec(Command::Regularity),
        Cmd::OpSpectrum(c) => c.into_spec(Command::OpSpectrum),
        Cmd::OpEval(c) => c.into_spec(Command::OpEval),
        Cmd::Check { suite, common } => {
            let (mut spec, out) = common.into_spec(Command::Check);
            spec.suite = Some(suite);
            (spec, out)
        }
        Cmd::Job { file, out } => {
            let text = std::fs::read_to_string(&file)
                .map_err(|e| Error::Invalid(format!("cannot read job file {}: {e}", file.display())))?;
            let spec = JobSpec::from_json_str(&text)?;
            let base = file.parent().map(Path::to_path_buf).unwrap_or_else(|| cwd.clone());
            // A job file's own `out` is relative to the file; the flag wins.
            let out = out.or_else(|| spec.out.as_ref().map(|o| base.join(o)));
            return Ok((spec, out, base));
        }
    };
    Ok((spec, out, cwd))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = None;
    let result = build(cli.command).and_then(|(spec, o, base)| {
        out = o;
        run_job(&spec, &base)
    });
    let (report, code) = match result {
        Ok(r) => {
            let code = if r.passed { 0 } else { 2 };
            (r.report, code)
        }
        Err(e) => {
            eprintln!("stemcalc: {e}");
            (error_report(&e), exit_code(&e))
        }
    };
    if let Err(e) = emit(&render(&report), out.as_deref()) {
        eprintln!("stemcalc: {e}");
        return ExitCode::from(1);
    }
    ExitCode::from(code)
}
