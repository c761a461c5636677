use clap::Parser;
use sgs_core::cli::{is_usage_error, list_experiments, run, Args};
use std::process::ExitCode;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("SGS_LOG", "error")).init();
    let args = Args::parse();
    if args.experiment == "list" {
        print!("{}", list_experiments());
        return ExitCode::SUCCESS;
    }
    match run(&args) {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("sgs {}: {e}", args.experiment);
            ExitCode::from(if is_usage_error(&e) { 2 } else { 1 })
        }
    }
}
