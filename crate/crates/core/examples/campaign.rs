//! Run a verification campaign from a TOML document and print its report.
//!
//! `cargo run --example campaign -- fixtures/inequality_campaign.toml 7`

use regrade::harness::{parse_and_validate, run_campaign};

fn main() -> regrade::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = args.next().unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/dual_numbers.toml").into());
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(0);
    let text = std::fs::read_to_string(&path).map_err(|e| regrade::Error::Document(format!("{path}: {e}")))?;
    let document = parse_and_validate(&text)?;
    let report = run_campaign(&document, seed);
    print!("{}", report.table());
    println!("digest {}", report.digest);
    Ok(())
}
