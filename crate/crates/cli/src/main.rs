use clap::Parser;

mod args;
mod output;
mod report;
mod run;

fn main() {
    if let Ok(raw) = std::env::var("GGEXP_THREADS") {
        match raw.parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
            _ => {
                eprintln!("error: GGEXP_THREADS must be a positive integer, got {raw:?}");
                std::process::exit(2);
            }
        }
    }
    let cli = args::Cli::parse();
    std::process::exit(run::run(cli));
}
