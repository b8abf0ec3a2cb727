use clap::Parser;
use permspec::cli::{dispatch, json_out_path, RunConfig};

fn main() {
    let config = RunConfig::parse();
    if let Ok(workers) = std::env::var("WORKERS") {
        if let Ok(n) = workers.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    match dispatch(&config) {
        Ok(doc) => {
            let text = serde_json::to_string_pretty(&doc).expect("serializable output");
            if let Some(path) = json_out_path(&config) {
                if let Err(e) = std::fs::write(path, &text) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    std::process::exit(6);
                }
            }
            println!("{text}");
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
