//! Run every claim over the default finite-field sweep and print the report.

use sl2_decomp::census::{default_sweep, format_claims, run_claims};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let scopes = default_sweep()?;
    let statuses = run_claims(&scopes, None);
    print!("{}", format_claims(&statuses));
    Ok(())
}
