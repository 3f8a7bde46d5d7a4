//! Regenerate the bundled synthetic cohort CSV.
//!
//! ```text
//! cargo run -p cobacs-core --example gen_fixture -- data/synthetic_cohort.csv
//! ```

use cobacs_core::experiment::{synthetic_cohort, write_trials_csv, CohortConfig};

fn main() {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "data/synthetic_cohort.csv".to_string());
    let rows = synthetic_cohort(&CohortConfig::default()).expect("default config is valid");
    let mut buf = Vec::new();
    write_trials_csv(&mut buf, &rows).expect("in-memory write");
    std::fs::write(&path, &buf).expect("write fixture");
    eprintln!("wrote {} rows to {path}", rows.len());
}
