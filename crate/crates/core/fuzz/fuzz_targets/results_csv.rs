#![no_main]

use branchlab::bench::{aggregate, read_results_csv, summary_markdown};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    // Rows that parse must also aggregate and render.
    if let Ok(rows) = read_results_csv(data) {
        let cells = aggregate(&rows);
        let _ = summary_markdown(&cells, rows.first().map(|r| r.rule.as_str()));
    }
});
