//! Sidecar manifest: enough to rerun a command and check its output.

use sha2::{Digest, Sha256};

pub fn render(subcommand: &str, argv: &[String], resolved: &str, seed: Option<u64>, output: &str) -> String {
    let digest = Sha256::digest(output.as_bytes());
    let mut m = String::new();
    m.push_str(&format!("tool = \"twc-jscc {}\"\n", env!("CARGO_PKG_VERSION")));
    m.push_str(&format!("subcommand = \"{subcommand}\"\n"));
    m.push_str(&format!("argv = {argv:?}\n"));
    m.push_str(&format!("resolved = {resolved:?}\n"));
    match seed {
        Some(s) => m.push_str(&format!("seed = {s}\n")),
        None => m.push_str("seed = \"none\"\n"),
    }
    m.push_str(&format!("output_sha256 = \"{digest:x}\"\n"));
    m.push_str(&format!("output_bytes = {}\n", output.len()));
    m
}
