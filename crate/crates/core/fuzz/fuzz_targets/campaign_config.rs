#![no_main]

use branchlab::bench::Campaign;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    let _ = Campaign::from_json(data);
});
