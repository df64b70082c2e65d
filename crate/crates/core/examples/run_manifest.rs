//! Load an experiment manifest, run it and write its files.
//!
//! ```text
//! cargo run --release --example run_manifest -- manifests/selfplay.toml out/
//! ```

use std::path::PathBuf;

use aixi_lab::experiments::{run_manifest, Manifest};
use aixi_lab::output::write_atomic;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let path = args.next().unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/manifests/selfplay.toml").into());
    let out_dir = PathBuf::from(args.next().unwrap_or_else(|| "target/manifest-output".into()));

    let manifest = Manifest::from_toml(&std::fs::read_to_string(&path)?)?;
    println!("{} {}", manifest.name(), manifest.hash());
    let output = run_manifest(&manifest)?;
    for file in &output.files {
        let target = out_dir.join(&file.name);
        write_atomic(&target, &file.bytes)?;
        println!("wrote {} ({} bytes)", target.display(), file.bytes.len());
    }
    println!("{}", output.summary);
    Ok(())
}
