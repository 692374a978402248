mod args;
mod failure;
mod run;

use std::process::ExitCode;

use args::{parse_args, Parsed, RunConfig};
use failure::Failure;

fn init_threads(config: &RunConfig) -> Result<(), Failure> {
    let threads = match config.params.threads {
        Some(n) => Some(n),
        None => match std::env::var("ZLAB_THREADS") {
            Ok(v) => Some(
                v.trim()
                    .parse::<usize>()
                    .map_err(|_| Failure::usage(format!("ZLAB_THREADS: '{v}' is not a thread count")))?,
            ),
            Err(_) => None,
        },
    };
    if let Some(n) = threads {
        if n == 0 {
            return Err(Failure::usage("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::usage(format!("--threads: {e}")))?;
    }
    Ok(())
}

fn main_inner() -> Result<u8, Failure> {
    let config = match parse_args(std::env::args_os())? {
        Parsed::Info(text) => {
            print!("{text}");
            return Ok(0);
        }
        Parsed::DumpConfig(config) => {
            println!("{}", config.to_json());
            return Ok(0);
        }
        Parsed::Run(config) => config,
    };
    init_threads(&config)?;
    let output = run::execute(&config)?;
    run::emit(&config, output)
}

fn main() -> ExitCode {
    match main_inner() {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("{}", failure.to_json_line());
            ExitCode::from(failure.exit_code())
        }
    }
}
