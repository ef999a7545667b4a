//! Runs the full verification suite on the stock configuration and prints
//! one line per criterion. Exits non-zero if any criterion fails.

use std::path::Path;

use hrnet::config::RunConfig;
use hrnet::verify::Suite;

fn main() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../..");
    let cfg = RunConfig::load(&root.join("configs/default.toml")).expect("stock config loads");
    let scratch = tempfile::tempdir().unwrap();
    let suite = Suite::new(cfg, scratch.path());
    let report = suite.run_all(|c, o| {
        let tag = if o.passed { "PASS" } else { "FAIL" };
        println!("{tag} [{}] {}: {}", c.id, c.name, o.detail);
    });
    let failed = report.failed();
    println!("acceptance: {} of {} criteria passed", report.results.len() - failed, report.results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
