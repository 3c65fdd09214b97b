use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use nlfsr::io::{format_register, parse_profile, parse_register};
use nlfsr::nlfsr::format_bits;
use nlfsr::transform::{apply_shift, lower_to_profile, ShiftMove};
use nlfsr::verify::{default_prefix_len, output_set_equivalent, period_census, Verdict};
use nlfsr::{Error, Nlfsr, RegisterState, StateCorrection};

/// Simulate, transform and compare nonlinear feedback shift registers.
///
/// States are written with the highest bit first: `0001` means s0 = 1 and
/// every other bit 0.
#[derive(Parser)]
#[command(name = "nlfsr", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the output sequence (and optionally the states) from an initial state.
    Simulate {
        file: PathBuf,
        #[arg(long)]
        init: String,
        #[arg(long)]
        steps: usize,
        /// Print one state per line before the output sequence.
        #[arg(long)]
        states: bool,
    },
    /// Lower a Fibonacci register to a Galois profile, or apply one shifting.
    Transform {
        file: PathBuf,
        #[arg(long, conflicts_with = "shift", required_unless_present = "shift")]
        profile: Option<PathBuf>,
        /// A shifting written `from,to,poly`, e.g. `2,1,x1`.
        #[arg(long = "move", value_name = "MOVE")]
        shift: Option<String>,
    },
    /// Map an initial state between a Galois register and its Fibonacci counterpart.
    MapState {
        /// The uniform Galois register.
        file: PathBuf,
        #[arg(long)]
        init: String,
        #[arg(long, value_enum)]
        direction: Direction,
    },
    /// Check whether two registers have the same set of output sequences.
    ///
    /// Exits 0 when equivalent, 1 when not.
    Verify {
        a: PathBuf,
        b: PathBuf,
        /// Output prefix length compared per state (default 2^n + n).
        #[arg(long)]
        prefix_len: Option<usize>,
    },
    /// Print the period: the longest cycle over all initial states.
    Period {
        file: PathBuf,
        /// Print the number of states on cycles of each length instead.
        #[arg(long)]
        census: bool,
    },
    /// Print the state sequences of the three built-in equivalent 4-bit registers.
    Demo,
}

#[derive(Clone, Copy, ValueEnum)]
enum Direction {
    Fib2gal,
    Gal2fib,
}

fn read_register(path: &Path) -> failure::Result<Nlfsr> {
    let text = fs::read_to_string(path)
        .map_err(|e| failure::Failure::msg(format!("{}: {e}", path.display())))?;
    parse_register(&text).map_err(|e| failure::Failure::in_file(path, e))
}

fn parse_state(text: &str, m: &Nlfsr) -> failure::Result<RegisterState> {
    let s = RegisterState::parse_display(text)?;
    if s.len() != m.n() {
        return Err(Error::LengthMismatch {
            expected: m.n(),
            found: s.len(),
        }
        .into());
    }
    Ok(s)
}

fn run(cli: Cli) -> failure::Result<ExitCode> {
    match cli.command {
        Command::Simulate {
            file,
            init,
            steps,
            states,
        } => {
            let m = read_register(&file)?;
            let s = parse_state(&init, &m)?;
            let seq = m.state_sequence(&s, steps)?;
            if states {
                for st in &seq {
                    println!("{st}");
                }
            }
            let out: Vec<bool> = seq.iter().map(|st| st.get(0)).collect();
            println!("{}", format_bits(&out));
        }
        Command::Transform {
            file,
            profile,
            shift,
        } => {
            let m = read_register(&file)?;
            let (result, moves) = match (profile, shift) {
                (Some(p), _) => {
                    let text = fs::read_to_string(&p).map_err(|e| {
                        failure::Failure::msg(format!("{}: {e}", p.display()))
                    })?;
                    let profile = parse_profile(&text, m.n())
                        .map_err(|e| failure::Failure::in_file(&p, e))?;
                    let low = lower_to_profile(&m, &profile)?;
                    (low.register, low.moves)
                }
                (None, Some(text)) => {
                    let mv = ShiftMove::parse(&text)?;
                    (apply_shift(&m, &mv)?, vec![mv])
                }
                (None, None) => unreachable!("clap requires one of --profile/--move"),
            };
            print!("{}", format_register(&result));
            for mv in moves {
                println!("# move {mv}");
            }
        }
        Command::MapState {
            file,
            init,
            direction,
        } => {
            let m = read_register(&file)?;
            let s = parse_state(&init, &m)?;
            let corr = StateCorrection::build(&m)?;
            let mapped = match direction {
                Direction::Fib2gal => corr.fib_to_galois(&s)?,
                Direction::Gal2fib => corr.galois_to_fib(&s)?,
            };
            println!("{mapped}");
        }
        Command::Verify { a, b, prefix_len } => {
            let ma = read_register(&a)?;
            let mb = read_register(&b)?;
            let len = prefix_len.unwrap_or_else(|| default_prefix_len(ma.n()));
            let report = output_set_equivalent(&ma, &mb, len)?;
            print!("{report}");
            return Ok(match report.verdict {
                Verdict::Equivalent => ExitCode::SUCCESS,
                Verdict::NotEquivalent => ExitCode::from(1),
                Verdict::Inconclusive => ExitCode::from(2),
            });
        }
        Command::Period { file, census } => {
            let m = read_register(&file)?;
            if census {
                println!("{}", period_census(&m)?);
            } else {
                println!("{}", m.period()?);
            }
        }
        Command::Demo => print!("{}", nlfsr::samples::state_table()),
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

mod failure {
    use std::fmt;
    use std::path::Path;

    use nlfsr::Error;

    /// A library error, optionally tagged with the file it came from.
    pub struct Failure {
        file: Option<String>,
        message: String,
    }

    pub type Result<T> = std::result::Result<T, Failure>;

    impl Failure {
        pub fn msg(message: String) -> Self {
            Failure {
                file: None,
                message,
            }
        }

        pub fn in_file(path: &Path, e: Error) -> Self {
            Failure {
                file: Some(path.display().to_string()),
                message: e.to_string(),
            }
        }
    }

    impl From<Error> for Failure {
        fn from(e: Error) -> Self {
            Failure::msg(e.to_string())
        }
    }

    impl fmt::Display for Failure {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match &self.file {
                Some(file) => write!(f, "{file}: {}", self.message),
                None => f.write_str(&self.message),
            }
        }
    }
}
