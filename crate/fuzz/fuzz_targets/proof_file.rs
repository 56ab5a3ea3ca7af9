#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(p) = glproof::format::parse_proof_file(s) {
            let _ = glproof::check::check_proof(&p);
            let text = glproof::format::print_proof(&p);
            assert_eq!(glproof::format::parse_proof_file(&text).as_ref(), Ok(&p));
        }
    }
});
