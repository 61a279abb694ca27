use gridcell_cli::args::{parse, Action};
use gridcell_cli::commands;

fn main() {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let result = parse(argv).and_then(|action| match action {
        Action::Simulate(cfg) => commands::simulate(&cfg),
        Action::Calibrate(cfg) => commands::calibrate(&cfg),
        Action::Compare(a, b) => commands::compare_files(&a, &b),
        Action::Bench(cfg) => commands::bench(&cfg),
    });
    if let Err(e) = result {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
