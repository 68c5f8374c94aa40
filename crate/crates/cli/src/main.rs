//! `yulkit`: parse, check, run, transform and validate Yul programs.
//!
//! Exit codes: 0 success, 1 rejection (unsafe program, failed relation,
//! failed suite, or a run that ran out of fuel), 2 bad input. `run` uses 2
//! for a safety error as well.

mod input;
mod validate;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use yulkit::ast::{print_block, Identifier, Layout};
use yulkit::dynamics::{CState, Dialect, EvalError, Fault, Interpreter};
use yulkit::statics::check_safe_top;
use yulkit::testgen::{replay, run_suite, Suite, SuiteParams};
use yulkit::value::{parse_value, StringAlignment};

use input::{load, InputError};
use validate::{validate, DifferentialOptions, Transform, Verdict};

const STACK_SIZE: usize = 256 << 20;

/// Like `println!`, but a closed pipe ends output quietly instead of panicking.
macro_rules! say {
    ($($arg:tt)*) => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stdout().lock(), $($arg)*);
    }};
}

#[derive(Parser)]
#[command(name = "yulkit", version, about = "Yul parser, checker, interpreter and translation validator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum DialectName {
    EvmPure,
    None,
}

#[derive(Clone, Copy, ValueEnum)]
enum Alignment {
    /// `"a"` is 97.
    Integer,
    /// `"a"` is 0x61 followed by 31 zero bytes, as in solc.
    LeftAligned,
}

#[derive(Clone, Copy, ValueEnum)]
enum PassName {
    LoopInitRewrite,
    DeadCode,
}

#[derive(Subcommand)]
enum Command {
    /// Print the canonical form of a program (Yul text or solc JSON).
    Parse {
        file: PathBuf,
        #[arg(long)]
        indented: bool,
    },
    /// Run the static checker.
    Check {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "evm-pure")]
        dialect: DialectName,
    },
    /// Execute a program and print its final variables and mode.
    Run {
        file: PathBuf,
        #[arg(long, default_value_t = 1 << 20)]
        fuel: u64,
        /// Initial variable, as name=value (decimal or 0x hexadecimal).
        #[arg(long = "var", value_name = "NAME=VALUE")]
        vars: Vec<String>,
        #[arg(long, value_enum, default_value = "evm-pure")]
        dialect: DialectName,
        #[arg(long, value_enum, default_value = "integer")]
        string_alignment: Alignment,
    },
    /// Apply a transformation and print the result.
    Transform {
        #[arg(long, value_enum)]
        pass: PassName,
        file: PathBuf,
        #[arg(long)]
        indented: bool,
    },
    /// Check that NEW is a valid result of transforming OLD and print a certificate.
    Validate {
        old: PathBuf,
        new: PathBuf,
        /// `disambiguate`, or passes applied in order: `loop-init-rewrite,dead-code`.
        #[arg(long)]
        transform: String,
        /// Also compare executions at this many random fuels.
        #[arg(long, value_name = "N")]
        differential: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1 << 16)]
        max_fuel: u64,
    },
    /// Check that NEW disambiguates OLD and print the renamings found.
    ValidateRename { old: PathBuf, new: PathBuf },
    /// Convert solc's Yul AST JSON to Yul text.
    ImportJson {
        file: PathBuf,
        #[arg(long)]
        indented: bool,
    },
    /// Run a property suite over generated programs.
    Suite {
        /// generator, static-soundness, dead-code, loop-init, renamevar,
        /// restrictions, roundtrip or fuel-monotonicity.
        name: String,
        #[arg(long, default_value_t = 100)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Fuels to run at; defaults depend on the suite.
        #[arg(long, num_args = 1.., value_delimiter = ',')]
        fuel: Vec<u64>,
        /// Random initial states per program; defaults depend on the suite.
        #[arg(long)]
        states: Option<usize>,
        /// Dead code suite: also generate function definitions.
        #[arg(long)]
        with_fundefs: bool,
        /// Rerun the case with this seed and print a trace.
        #[arg(long, value_name = "SEED")]
        replay: Option<u64>,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

fn dialect(name: DialectName) -> Dialect {
    match name {
        DialectName::EvmPure => Dialect::evm_pure(),
        DialectName::None => Dialect::none(),
    }
}

fn layout(indented: bool) -> Layout {
    if indented {
        Layout::Indented
    } else {
        Layout::Compact
    }
}

fn initial_state(vars: &[String]) -> Result<CState, InputError> {
    let mut local = BTreeMap::new();
    for item in vars {
        let (name, value) = item
            .split_once('=')
            .ok_or_else(|| InputError(format!("`{item}`: expected name=value")))?;
        let name = Identifier::new(name).map_err(|e| InputError(format!("`{item}`: {e}")))?;
        let value = parse_value(value).ok_or_else(|| InputError(format!("`{item}`: bad value")))?;
        if local.insert(name, value).is_some() {
            return Err(InputError(format!("`{item}`: variable given twice")));
        }
    }
    Ok(CState::new(local))
}

fn print_json(value: &impl serde::Serialize) {
    say!("{}", serde_json::to_string_pretty(value).expect("serializable"));
}

fn execute(command: Command) -> Result<u8, InputError> {
    match command {
        Command::Parse { file, indented } | Command::ImportJson { file, indented } => {
            let input = load(&file)?;
            say!("{}", print_block(&input.block, layout(indented)));
            Ok(0)
        }
        Command::Check { file, dialect: d } => {
            let input = load(&file)?;
            match check_safe_top(&input.block, &dialect(d).fun_table()) {
                Ok(()) => {
                    say!("safe");
                    Ok(0)
                }
                Err(e) => {
                    say!("unsafe: {e}");
                    Ok(1)
                }
            }
        }
        Command::Run {
            file,
            fuel,
            vars,
            dialect: d,
            string_alignment,
        } => {
            let input = load(&file)?;
            let state = initial_state(&vars)?;
            let alignment = match string_alignment {
                Alignment::Integer => StringAlignment::Integer,
                Alignment::LeftAligned => StringAlignment::LeftAligned32,
            };
            let dialect = dialect(d).with_string_alignment(alignment);
            match Interpreter::new(&dialect).exec_top(&input.block, state, fuel) {
                Ok(outcome) => {
                    for (name, value) in &outcome.cstate.local {
                        say!("{name}={value}");
                    }
                    say!("mode={}", outcome.mode);
                    Ok(0)
                }
                Err(EvalError::Limit) => {
                    say!("error=limit");
                    Ok(1)
                }
                Err(EvalError::Safety { kind, context }) => {
                    say!("error=safety:{kind}");
                    eprintln!("{context}");
                    Ok(2)
                }
            }
        }
        Command::Transform { pass, file, indented } => {
            let input = load(&file)?;
            let pass = match pass {
                PassName::LoopInitRewrite => validate::Pass::LoopInitRewrite,
                PassName::DeadCode => validate::Pass::DeadCode,
            };
            say!("{}", print_block(&pass.apply(&input.block), layout(indented)));
            Ok(0)
        }
        Command::Validate {
            old,
            new,
            transform,
            differential,
            seed,
            max_fuel,
        } => {
            let transform = Transform::parse(&transform).map_err(InputError)?;
            let (old, new) = (load(&old)?, load(&new)?);
            let opts = differential.map(|runs| DifferentialOptions { runs, seed, max_fuel });
            let certificate = validate(&old, &new, &transform, opts.as_ref());
            print_json(&certificate);
            Ok(u8::from(certificate.result == Verdict::Rejected))
        }
        Command::ValidateRename { old, new } => {
            let (old, new) = (load(&old)?, load(&new)?);
            let certificate = validate(&old, &new, &Transform::Disambiguate, None);
            print_json(&certificate);
            Ok(u8::from(certificate.result == Verdict::Rejected))
        }
        Command::Suite {
            name,
            n,
            seed,
            fuel,
            states,
            with_fundefs,
            replay: replay_seed,
            inject_fault,
        } => {
            let suite = Suite::from_name(&name).ok_or_else(|| {
                let names: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
                InputError(format!("unknown suite `{name}`; expected one of {}", names.join(", ")))
            })?;
            let mut params = SuiteParams::new(suite, n, seed);
            if !fuel.is_empty() {
                params.fuels = fuel;
            }
            if let Some(states) = states {
                params.states = states;
            }
            if with_fundefs {
                params.cfg.allow_fundefs = true;
                params.require_nofun = false;
            }
            if inject_fault {
                params.fault = Some(Fault::SkipOutputZeroing);
            }
            if let Some(case_seed) = replay_seed {
                let case = replay(suite, &params, case_seed);
                say!("{}", case.render().trim_end());
                return Ok(u8::from(!case.failures.is_empty()));
            }
            let report = run_suite(suite, &params);
            say!("{}", report.render().trim_end());
            Ok(u8::from(!report.passed()))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    // Deeply nested programs need a larger stack than the main thread has.
    let worker = std::thread::Builder::new()
        .stack_size(STACK_SIZE)
        .spawn(move || execute(cli.command))
        .expect("spawn worker thread");
    match worker.join().expect("worker thread panicked") {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
