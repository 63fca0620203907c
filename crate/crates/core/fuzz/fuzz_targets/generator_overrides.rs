#![no_main]

use branchlab::generators::{parse_overrides, Kind};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    let mut parts = data.split('\n');
    let _ = parts.next().unwrap_or("").parse::<Kind>();
    let _ = parse_overrides(parts);
});
