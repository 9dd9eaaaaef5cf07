#![no_main]

use blendstring::Blendstring;
use libfuzzer_sys::fuzz_target;
use num_complex::Complex64;

fuzz_target!(|data: &str| {
    // anything that loads must write back and reload unchanged
    if let Ok(b) = Blendstring::<Complex64>::from_document(data) {
        let text = b
            .to_document()
            .expect("loaded blendstring failed to serialize");
        let again = Blendstring::<Complex64>::from_document(&text)
            .expect("serialized blendstring failed to load");
        assert_eq!(again, b);
    }
});
