#![no_main]

use blendstring::parse::parse_list;
use libfuzzer_sys::fuzz_target;
use num_complex::Complex64;

fuzz_target!(|data: &str| {
    match parse_list::<Complex64>(data) {
        Ok(values) => assert_eq!(values.len(), data.split(',').count()),
        Err(e) => assert!(e.offset <= data.len()),
    }
});
