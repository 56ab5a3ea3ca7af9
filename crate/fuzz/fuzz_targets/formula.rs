#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(f) = glproof::formula::parse_formula(s) {
            let text = glproof::formula::print_formula(&f);
            assert_eq!(glproof::formula::parse_formula(&text).as_ref(), Ok(&f));
        }
    }
});
