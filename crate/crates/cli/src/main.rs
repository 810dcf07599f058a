//! `lorentz-lab`: verification suites, Minkowski sweeps and embedding probes.
//!
//! Exit codes: 0 pass, 1 assertion failure, 2 usage, 3 I/O, 4 hypothesis violation.

mod cli;
mod output;
mod probe;
mod settings;
mod sweep;
mod verify;

use std::fmt;
use std::path::Path;
use std::process::ExitCode;

use settings::Settings;

/// Why a command did not run to completion.
#[derive(Debug)]
pub enum Fail {
    Usage(String),
    Io(String),
    Hypothesis(String),
    Other(String),
}

impl Fail {
    fn code(&self) -> u8 {
        match self {
            Self::Other(_) => 1,
            Self::Usage(_) => 2,
            Self::Io(_) => 3,
            Self::Hypothesis(_) => 4,
        }
    }
}

impl fmt::Display for Fail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Usage(m) | Self::Io(m) | Self::Other(m) => f.write_str(m),
            Self::Hypothesis(m) => write!(f, "hypothesis violated: {m}"),
        }
    }
}

impl From<lorentz_lab::Error> for Fail {
    fn from(e: lorentz_lab::Error) -> Self {
        use lorentz_lab::Error as E;
        match e {
            E::Hypothesis(m) => Self::Hypothesis(m),
            E::InadmissibleExponents { .. } => Self::Hypothesis(e.to_string()),
            E::InvalidParameter(_)
            | E::InvalidMeasure(_)
            | E::InvalidFunction(_)
            | E::DomainMismatch { .. }
            | E::TooManyAtoms { .. } => Self::Usage(e.to_string()),
            other => Self::Other(other.to_string()),
        }
    }
}

const THREADS_ENV: &str = "LORENTZ_LAB_THREADS";

fn configure_threads(s: &Settings) -> Result<(), Fail> {
    let flag: Option<usize> = s.get("threads")?;
    let env = match std::env::var(THREADS_ENV) {
        Ok(v) => Some(v.trim().parse::<usize>().map_err(|_| Fail::Usage(format!("{THREADS_ENV}: cannot parse `{v}`")))?),
        Err(_) => None,
    };
    let n = match (flag, env) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (a, b) => a.or(b),
    };
    match n {
        None => Ok(()),
        Some(0) => Err(Fail::Usage("thread count must be positive".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Fail::Other(format!("thread pool: {e}"))),
    }
}

fn main() -> ExitCode {
    let mut cmd = cli::command();
    let m = match cmd.try_get_matches_from_mut(std::env::args_os()) {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let (name, sub) = m.subcommand().expect("a subcommand is required");
    let subcmd = cmd.find_subcommand(name).expect("parsed subcommand exists");
    let result = Settings::resolve(subcmd, sub, sub.get_one::<String>("config").map(Path::new)).and_then(|s| {
        configure_threads(&s)?;
        match name {
            "verify" => verify::run(&s),
            "sweep" => sweep::run(&s),
            "probe" => probe::run(&s),
            _ => unreachable!("clap rejects unknown subcommands"),
        }
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code())
        }
    }
}
