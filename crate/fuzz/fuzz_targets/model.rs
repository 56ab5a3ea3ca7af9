#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(m) = glproof::semantics::parse_model(s) {
            assert_eq!(glproof::semantics::parse_model(&m.to_string()).as_ref(), Ok(&m));
        }
    }
});
