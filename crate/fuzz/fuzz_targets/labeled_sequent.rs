#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(t) = glproof::sequent::parse_labeled(s) {
            assert_eq!(glproof::sequent::parse_labeled(&t.to_string()).as_ref(), Ok(&t));
            let _ = glproof::sequent::tree_view(&t);
        }
    }
});
