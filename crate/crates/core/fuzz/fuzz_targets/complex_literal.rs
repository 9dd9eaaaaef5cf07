#![no_main]

use blendstring::parse::parse_complex;
use libfuzzer_sys::fuzz_target;
use num_complex::Complex64;

fuzz_target!(|data: &str| {
    if let Ok(z) = parse_complex::<Complex64>(data) {
        assert!(z.re.is_finite() && z.im.is_finite(), "{data:?} gave {z}");
        let text = format!("{:e}{:+e}i", z.re, z.im);
        assert_eq!(parse_complex::<Complex64>(&text).unwrap(), z);
    }
});
