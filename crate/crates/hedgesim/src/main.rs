use clap::Parser;
use hedgesim::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(err) => {
            // machine-readable error envelope on stderr
            let envelope = serde_json::json!({
                "error": { "kind": err.kind(), "message": err.to_string() }
            });
            eprintln!("{envelope}");
            std::process::exit(1);
        }
    }
}
