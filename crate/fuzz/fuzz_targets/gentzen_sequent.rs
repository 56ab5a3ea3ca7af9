#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(g) = glproof::sequent::parse_gentzen(s) {
            assert_eq!(glproof::sequent::parse_gentzen(&g.to_string()).as_ref(), Ok(&g));
        }
    }
});
