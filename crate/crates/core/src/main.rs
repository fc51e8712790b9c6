use clap::Parser;
use walk_extrap::cli::{main_with_args, Args, LOG_ENV};

fn main() {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or(LOG_ENV, "warn")).init();
    let args = Args::parse();
    std::process::exit(main_with_args(&args));
}
