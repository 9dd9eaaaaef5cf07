#![no_main]

use blendstring::problem::ProblemSpec;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    let _ = ProblemSpec::from_toml(data);
});
