#![no_main]

use branchlab::rules::RuleConfig;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    let _ = RuleConfig::parse(data);
});
