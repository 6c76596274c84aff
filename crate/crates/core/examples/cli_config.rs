//! Runs one analysis from a config file, as the `nadd` binary would.
//!
//! `cargo run --example cli_config -- [command] [config]`

use clap::Parser;
use nadd::cli::{run, Cli};

fn main() -> nadd::Result<()> {
    let mut args = std::env::args().skip(1);
    let command = args.next().unwrap_or_else(|| "pressure".into());
    let config = args.next().unwrap_or_else(|| {
        concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs/full2_zero.json").into()
    });
    let out = std::env::temp_dir().join("nadd-example");
    let cli = Cli::parse_from(["nadd", &command, "--config", &config, "--out", out.to_str().unwrap()]);
    let inv = run(&cli)?;
    println!("{}", serde_json::to_string_pretty(&inv.report.results)?);
    for f in &inv.files {
        println!("wrote {}", f.display());
    }
    Ok(())
}
