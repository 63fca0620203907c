#![no_main]

use branchlab::model::{from_json, to_json};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    if let Ok(inst) = from_json(data) {
        assert_eq!(from_json(&to_json(&inst)).expect("written JSON parses"), inst);
    }
});
