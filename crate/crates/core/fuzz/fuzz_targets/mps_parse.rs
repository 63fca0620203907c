#![no_main]

use branchlab::model::{parse_mps, write_mps};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    // Anything the parser accepts must survive a write and a second parse.
    if let Ok(inst) = parse_mps(data) {
        parse_mps(&write_mps(&inst)).expect("written MPS parses");
    }
});
