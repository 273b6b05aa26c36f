//! Command-line surface: golden runs of the worked examples, measures on
//! user-supplied state files, figure data and the clock demo.

pub mod commands;
pub mod examples;
pub mod report;
pub mod state_file;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::QrfError;
use commands::{
    cmd_example, cmd_figure_data, cmd_measure, cmd_pwc_demo, cmd_symmetric_state, cmd_twirl, FigureKind,
    MeasureKind, ObservableBasis, PwcDemoOptions, TwirlMethod, MATRIX_TOL, SCALAR_TOL,
};
use examples::ExampleKind;
use report::{records_to_csv, records_to_json, ReportRecord};
use state_file::StateFile;

pub const EXIT_OK: i32 = 0;
pub const EXIT_TOLERANCE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "qrf", version, about = "Asymmetry measures for quantum reference frames")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    /// Write output to a file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Override the tolerance used for pass/fail checks.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Asymmetries of a worked example against their closed forms.
    Example {
        /// qubit, localization or coherence-order
        name: String,
        #[arg(long, default_value_t = 8)]
        d: usize,
    },
    /// Globally twirled state of a worked example, checked entry-wise.
    SymmetricState {
        name: String,
        #[arg(long, default_value_t = 4)]
        d: usize,
    },
    /// A measure on a state file.
    Measure {
        input: PathBuf,
        /// asymmetry, mutual, relent or interaction
        #[arg(long, default_value = "asymmetry")]
        which: String,
    },
    /// Angle-representation samples of an example.
    FigureData {
        /// localization or coherence-order
        #[arg(long, default_value = "localization")]
        which: String,
        #[arg(long, default_value_t = 150)]
        d: usize,
        #[arg(long, default_value_t = 2048)]
        samples: usize,
    },
    /// Page-Wootters history state with relational checks.
    PwcDemo {
        #[arg(long, default_value_t = 8)]
        d: usize,
        /// System charges in units of 2*pi/d, comma separated.
        #[arg(long, default_value = "0,1", value_delimiter = ',', allow_hyphen_values = true)]
        charges: Vec<i64>,
        /// Real amplitudes of the initial system state, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        psi: Option<Vec<f64>>,
        /// Observable eigenvalues, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        observable: Option<Vec<f64>>,
        /// energy or fourier
        #[arg(long, default_value = "energy")]
        basis: String,
        /// Replace one tick of the history with the next (negative control).
        #[arg(long)]
        corrupt_tick: Option<usize>,
    },
    /// Raw twirl of a state file.
    Twirl {
        input: PathBuf,
        /// dephase, quadrature, design or local
        #[arg(long, default_value = "dephase")]
        method: String,
        /// Quadrature points.
        #[arg(long)]
        points: Option<usize>,
    },
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Io(String),
}

impl From<QrfError> for Failure {
    fn from(e: QrfError) -> Self {
        Failure::Input(e.to_string())
    }
}

fn read_state(path: &Path) -> Result<StateFile, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Ok(StateFile::from_json(&text)?)
}

fn render(records: &[ReportRecord], format: Format) -> String {
    match format {
        Format::Json => records_to_json(records) + "\n",
        Format::Csv => records_to_csv(records),
    }
}

/// Output text and whether every check passed.
fn execute(cli: &Cli) -> Result<(String, bool), Failure> {
    if let Some(t) = cli.tolerance {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Failure::Input(format!("tolerance {t} must be a finite non-negative number")));
        }
    }
    let tol = |default: f64| cli.tolerance.unwrap_or(default);
    let records_out = |records: Vec<ReportRecord>| {
        let ok = !records.iter().any(ReportRecord::failed);
        (render(&records, cli.format), ok)
    };
    Ok(match &cli.command {
        Command::Example { name, d } => records_out(cmd_example(name.parse()?, *d, tol(SCALAR_TOL))?),
        Command::SymmetricState { name, d } => {
            let kind: ExampleKind = name.parse()?;
            let out = cmd_symmetric_state(kind, *d, tol(MATRIX_TOL))?;
            let ok = !out.report.failed();
            let text = match cli.format {
                Format::Json => serde_json::to_string_pretty(&out).expect("serializes") + "\n",
                Format::Csv => records_to_csv(std::slice::from_ref(&out.report)),
            };
            (text, ok)
        }
        Command::Measure { input, which } => {
            let which: MeasureKind = which.parse()?;
            let file = read_state(input)?;
            records_out(vec![cmd_measure(&file, which, tol(SCALAR_TOL))?])
        }
        Command::FigureData { which, d, samples } => {
            let which: FigureKind = which.parse()?;
            let fig = cmd_figure_data(*d, which, *samples)?;
            let text = match cli.format {
                Format::Json => fig.to_json() + "\n",
                Format::Csv => {
                    let s = &fig.summary;
                    eprintln!(
                        "peak theta = {}, peak = {}, first zeros = {} / {}, half width = {}",
                        s.peak_theta, s.peak_value, s.first_zero_left, s.first_zero_right, s.half_width
                    );
                    fig.to_csv()
                }
            };
            (text, true)
        }
        Command::PwcDemo { d, charges, psi, observable, basis, corrupt_tick } => {
            let opts = PwcDemoOptions {
                d: *d,
                charges: charges.clone(),
                psi: psi.clone(),
                observable: observable.clone(),
                basis: basis.parse::<ObservableBasis>()?,
                corrupt_tick: *corrupt_tick,
                tolerance: tol(SCALAR_TOL),
            };
            records_out(cmd_pwc_demo(&opts)?)
        }
        Command::Twirl { input, method, points } => {
            let method: TwirlMethod = method.parse()?;
            let file = read_state(input)?;
            let out = cmd_twirl(&file, method, *points)?;
            match cli.format {
                Format::Json => (out.to_json() + "\n", true),
                Format::Csv => return Err(Failure::Input("twirl writes state files; use --format json".into())),
            }
        }
    })
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let result = execute(&cli).and_then(|(text, ok)| {
        match &cli.output {
            Some(path) => fs::write(path, &text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?,
            None => std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| Failure::Io(e.to_string()))?,
        }
        Ok(ok)
    });
    match result {
        Ok(true) => EXIT_OK,
        Ok(false) => {
            eprintln!("qrf: tolerance check failed");
            EXIT_TOLERANCE
        }
        Err(Failure::Input(msg)) | Err(Failure::Io(msg)) => {
            eprintln!("qrf: {msg}");
            EXIT_INPUT
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(cli),
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                EXIT_INPUT
            } else {
                EXIT_OK
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("o.json");
        let o = out.to_str().unwrap();
        assert_eq!(run_from(["qrf", "example", "qubit", "--output", o]), EXIT_OK);
        assert_eq!(run_from(["qrf", "example", "bogus", "--output", o]), EXIT_INPUT);
        assert_eq!(run_from(["qrf", "--tolerance=-1", "example", "qubit", "--output", o]), EXIT_INPUT);
        let corrupt = ["qrf", "pwc-demo", "--charges", "0,1,3", "--psi", "1,0.5,0.25", "--corrupt-tick", "2"];
        assert_eq!(run_from(corrupt.iter().copied().chain(["--output", o])), EXIT_TOLERANCE);
        assert_eq!(run_from(["qrf", "measure", "/nonexistent.json", "--output", o]), EXIT_INPUT);
        assert_eq!(run_from(["qrf", "frobnicate"]), EXIT_INPUT);
    }

    #[test]
    fn csv_output_has_header() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("o.csv");
        let o = out.to_str().unwrap();
        assert_eq!(run_from(["qrf", "example", "localization", "--d", "4", "--format", "csv", "--output", o]), 0);
        let text = fs::read_to_string(&out).unwrap();
        assert!(text.starts_with("quantity,value,expected,tolerance,pass,inputs\n"));
        assert_eq!(text.lines().count(), 5);
    }
}
